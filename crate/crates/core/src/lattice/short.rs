//! Short vectors of definite forms: LLL preprocessing followed by a
//! Fincke–Pohst descent. Floating point only bounds the search; every hit is
//! re-checked with integer arithmetic.

use std::ops::ControlFlow;

use super::{canonical_sign, signature_of, GramLattice};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A definite integral form (not necessarily even) prepared for enumeration.
#[derive(Debug, Clone)]
pub struct DefiniteForm {
    /// `+1` for positive definite input, `-1` for negative definite.
    sign: i64,
    /// LLL-reduced positive definite Gram matrix.
    reduced: Matrix<i128>,
    /// Rows are the reduced basis vectors in original coordinates.
    transform: Matrix<i128>,
    mu: Vec<Vec<f64>>,
    bstar: Vec<f64>,
}

impl DefiniteForm {
    pub fn new(gram: &[Vec<i64>]) -> Result<Self> {
        let n = gram.len();
        let (p, q) = signature_of(gram)?;
        let sign = if p == n {
            1
        } else if q == n {
            -1
        } else {
            return Err(Error::NotDefinite);
        };
        let mut g: Matrix<i128> = gram.iter().map(|r| r.iter().map(|&x| (sign * x) as i128).collect()).collect();
        let mut t: Matrix<i128> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
        lll(&mut g, &mut t);
        let (mu, bstar) = gram_schmidt(&g);
        Ok(DefiniteForm { sign, reduced: g, transform: t, mu, bstar })
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Calls `f(v, norm)` for one representative of every `±` pair of nonzero
    /// vectors with `|(v,v)| <= bound`. The representative has its first nonzero
    /// coordinate positive. Stops early when `f` breaks.
    pub fn for_each<F>(&self, bound: i64, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&[i64], i64) -> ControlFlow<()>,
    {
        let n = self.rank();
        if n == 0 || bound <= 0 {
            return ControlFlow::Continue(());
        }
        let mut x = vec![0i64; n];
        let slack = 1e-9 * (bound as f64) + 1e-9;
        self.descend(n - 1, 0.0, bound, slack, &mut x, &mut f)
    }

    fn descend<F>(&self, i: usize, partial: f64, bound: i64, slack: f64, x: &mut [i64], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64], i64) -> ControlFlow<()>,
    {
        let n = self.rank();
        let center: f64 = -(i + 1..n).map(|j| self.mu[j][i] * x[j] as f64).sum::<f64>();
        let remaining = bound as f64 - partial + slack;
        if remaining < 0.0 {
            return ControlFlow::Continue(());
        }
        let radius = (remaining / self.bstar[i]).sqrt();
        let lo = (center - radius).ceil() as i64;
        let hi = (center + radius).floor() as i64;
        for xi in lo..=hi {
            x[i] = xi;
            let t = xi as f64 - center;
            let next = partial + self.bstar[i] * t * t;
            if next > bound as f64 + slack {
                continue;
            }
            if i == 0 {
                self.emit(x, bound, f)?;
            } else {
                self.descend(i - 1, next, bound, slack, x, f)?;
            }
        }
        x[i] = 0;
        ControlFlow::Continue(())
    }

    fn emit<F>(&self, x: &[i64], bound: i64, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64], i64) -> ControlFlow<()>,
    {
        if x.iter().all(|&c| c == 0) {
            return ControlFlow::Continue(());
        }
        let n = self.rank();
        let mut norm: i128 = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let row: i128 = (0..n).map(|j| self.reduced[i][j] * x[j] as i128).sum();
            norm += x[i] as i128 * row;
        }
        if norm > bound as i128 {
            return ControlFlow::Continue(());
        }
        let mut v = vec![0i64; n];
        for (k, vk) in v.iter_mut().enumerate() {
            let c: i128 = (0..n).map(|i| x[i] as i128 * self.transform[i][k]).sum();
            *vk = i64::try_from(c).expect("short vector coordinates overflow");
        }
        let first_positive = v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
        if !first_positive {
            return ControlFlow::Continue(());
        }
        f(&v, self.sign * norm as i64)
    }

    pub fn collect(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let _ = self.for_each(bound, |v, _| {
            out.push(v.to_vec());
            ControlFlow::Continue(())
        });
        out.sort_by_key(|v| v.iter().map(|x| x.unsigned_abs()).sum::<u64>());
        out
    }

    /// Some vector of norm exactly `target` (sign included), if one exists.
    pub fn find_norm(&self, target: i64) -> Option<Vec<i64>> {
        let mut found = None;
        let _ = self.for_each(target.abs(), |v, norm| {
            if norm == target {
                found = Some(v.to_vec());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        found
    }
}

/// One representative per `±` pair of nonzero `v` with `|(v,v)| <= bound`.
pub fn short_vectors(lattice: &GramLattice, bound: i64) -> Result<Vec<Vec<i64>>> {
    Ok(DefiniteForm::new(lattice.gram())?.collect(bound))
}

/// The `(-2)`-vectors of a negative definite lattice, one per `±` pair.
pub fn roots(lattice: &GramLattice) -> Result<Vec<Vec<i64>>> {
    if !lattice.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    roots_of_gram(lattice.gram())
}

pub(crate) fn roots_of_gram(gram: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let form = DefiniteForm::new(gram)?;
    let mut out = Vec::new();
    let _ = form.for_each(2, |v, norm| {
        if norm == -2 {
            let mut v = v.to_vec();
            canonical_sign(&mut v);
            out.push(v);
        }
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Whether a negative definite Gram matrix contains a `(-2)`-vector. Rank 0 is root-free.
pub fn has_root(gram: &[Vec<i64>]) -> Result<bool> {
    if gram.is_empty() {
        return Ok(false);
    }
    let form = DefiniteForm::new(gram)?;
    if form.sign > 0 {
        return Err(Error::NotNegativeDefinite);
    }
    Ok(form.find_norm(-2).is_some())
}

fn gram_schmidt(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0f64; n]; n];
    let mut b = vec![0.0f64; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j] as f64;
            for l in 0..j {
                s -= mu[j][l] * mu[i][l] * b[l];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i] as f64;
        for l in 0..i {
            s -= mu[i][l] * mu[i][l] * b[l];
        }
        b[i] = s;
        mu[i][i] = 1.0;
    }
    (mu, b)
}

/// In-place LLL on a positive definite Gram matrix; `t` tracks the basis change.
fn lll(g: &mut Matrix<i128>, t: &mut Matrix<i128>) {
    let n = g.len();
    if n < 2 {
        return;
    }
    let delta = 0.99;
    let (mut mu, mut b) = gram_schmidt(g);
    let mut k = 1;
    let mut steps = 0usize;
    while k < n {
        steps += 1;
        if steps > 100_000 {
            break;
        }
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                subtract_row(g, t, k, j, r as i128);
                for l in 0..j {
                    mu[k][l] -= r * mu[j][l];
                }
                mu[k][j] -= r;
            }
        }
        if b[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            t.swap(k, k - 1);
            (mu, b) = gram_schmidt(g);
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
}

/// `b_k <- b_k - r b_j`, updating the Gram matrix exactly.
fn subtract_row(g: &mut Matrix<i128>, t: &mut Matrix<i128>, k: usize, j: usize, r: i128) {
    let n = g.len();
    let gkk = g[k][k] - 2 * r * g[k][j] + r * r * g[j][j];
    for i in 0..n {
        if i != k {
            let v = g[k][i] - r * g[j][i];
            g[k][i] = v;
            g[i][k] = v;
        }
    }
    g[k][k] = gkk;
    for c in 0..n {
        let v = t[j][c];
        t[k][c] -= r * v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::{ade, e8, rank_one};
    use crate::lattice::roots::Ade;

    #[test]
    fn small_examples() {
        assert_eq!(short_vectors(&rank_one(-2), 2).unwrap(), vec![vec![1]]);
        assert_eq!(short_vectors(&ade(Ade::A(2)), 2).unwrap().len(), 3);
        assert_eq!(roots(&e8()).unwrap().len(), 120);
        assert!(roots(&rank_one(-4)).unwrap().is_empty());
    }

    #[test]
    fn indefinite_rejected() {
        let u = crate::lattice::named::hyperbolic();
        assert_eq!(short_vectors(&u, 2), Err(Error::NotDefinite));
    }

    #[test]
    fn positive_definite_norms_keep_sign() {
        let form = DefiniteForm::new(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(form.collect(2).len(), 3);
        assert!(form.find_norm(2).is_some());
        assert!(form.find_norm(-2).is_none());
    }

    #[test]
    fn skewed_basis_is_handled() {
        // A_2 in a badly skewed basis: b1, b2 + 40 b1
        let g = vec![vec![-2, -79], vec![-79, -3122]];
        let form = DefiniteForm::new(&g).unwrap();
        assert_eq!(form.collect(2).len(), 3);
        assert_eq!(form.collect(8).len(), 3 + 3 + 3);
    }
}
