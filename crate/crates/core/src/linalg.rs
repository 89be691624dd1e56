//! Exact integer and rational matrix algebra.
//!
//! Everything here is generic over the integer type, so the same routines run on
//! machine integers (`i64`, `i128`) in tight loops and on [`BigInt`] where entries
//! can grow. Matrices are plain row-major `Vec<Vec<T>>`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Matrix<T> = Vec<Vec<T>>;

/// Integer scalar usable by the exact routines.
pub trait ExactInt: Integer + Signed + Clone + Debug + From<i64> {}
impl<T: Integer + Signed + Clone + Debug + From<i64>> ExactInt for T {}

pub fn identity<T: ExactInt>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Matrix<T> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<T: ExactInt>(a: &[Vec<T>], b: &[Vec<T>]) -> Matrix<T> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = T::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + row[k].clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn to_big(a: &[Vec<i64>]) -> Matrix<BigInt> {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn vec_to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Converts back to machine integers, failing on overflow.
pub fn to_i64(a: &[Vec<BigInt>]) -> Option<Matrix<i64>> {
    a.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
}

pub fn vec_to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

fn row_sub_mul<T: ExactInt>(rows: &mut [Vec<T>], target: usize, source: usize, factor: &T) {
    if factor.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *t = t.clone() - factor.clone() * s.clone();
        }
    }
}

fn negate_row<T: ExactInt>(row: &mut [T]) {
    for x in row.iter_mut() {
        *x = -x.clone();
    }
}

/// Row-style Hermite normal form `H = U A` with `U` unimodular.
#[derive(Debug, Clone)]
pub struct Hermite<T> {
    pub form: Matrix<T>,
    pub transform: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: ExactInt> Hermite<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of the form: a basis of the row span.
    pub fn basis(&self) -> Matrix<T> {
        self.form[..self.rank()].to_vec()
    }
}

pub fn hermite<T: ExactInt>(a: &[Vec<T>]) -> Hermite<T> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut h: Matrix<T> = a.to_vec();
    let mut u: Matrix<T> = identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(piv) = piv else { break };
            h.swap(r, piv);
            u.swap(r, piv);
            let mut clean = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h[r]);
            negate_row(&mut u[r]);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            row_sub_mul(&mut h, i, r, &q);
            row_sub_mul(&mut u, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { form: h, transform: u, pivots }
}

/// Basis (as rows) of the integer kernel `{x : A x = 0}`; the result is saturated.
pub fn kernel<T: ExactInt>(a: &[Vec<T>], cols: usize) -> Matrix<T> {
    if a.is_empty() {
        return identity(cols);
    }
    let at = transpose(a);
    let hf = hermite(&at);
    let rank = hf.rank();
    let raw: Matrix<T> = hf.transform[rank..].to_vec();
    if raw.is_empty() {
        return raw;
    }
    hermite(&raw).basis()
}

/// Smith normal form `P A Q = D`.
#[derive(Debug, Clone)]
pub struct Smith<T> {
    /// Diagonal entries, nonnegative, each dividing the next; length `min(m, n)`.
    pub diagonal: Vec<T>,
    pub left: Matrix<T>,
    pub right: Matrix<T>,
}

pub fn smith<T: ExactInt>(a: &[Vec<T>]) -> Smith<T> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d: Matrix<T> = a.to_vec();
    let mut p: Matrix<T> = identity(m);
    let mut q: Matrix<T> = identity(n);
    let steps = m.min(n);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[bi][bj].abs() <= d[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_smith(d, p, q, steps);
            };
            d.swap(t, bi);
            p.swap(t, bi);
            for row in d.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let f = d[i][t].div_floor(&d[t][t]);
                row_sub_mul(&mut d, i, t, &f);
                row_sub_mul(&mut p, i, t, &f);
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let f = d[t][j].div_floor(&d[t][t]);
                for row in d.iter_mut() {
                    let v = row[t].clone();
                    row[j] = row[j].clone() - f.clone() * v;
                }
                for row in q.iter_mut() {
                    let v = row[t].clone();
                    row[j] = row[j].clone() - f.clone() * v;
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = d[t][t].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    // fold the offending row into the pivot row and go again
                    let src_d = d[i].clone();
                    for (x, y) in d[t].iter_mut().zip(src_d) {
                        *x = x.clone() + y;
                    }
                    let src_p = p[i].clone();
                    for (x, y) in p[t].iter_mut().zip(src_p) {
                        *x = x.clone() + y;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d[t]);
            negate_row(&mut p[t]);
        }
    }
    finish_smith(d, p, q, steps)
}

fn finish_smith<T: ExactInt>(d: Matrix<T>, p: Matrix<T>, q: Matrix<T>, steps: usize) -> Smith<T> {
    let diagonal = (0..steps).map(|i| d[i][i].clone()).collect();
    Smith { diagonal, left: p, right: q }
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant<T: ExactInt>(a: &[Vec<T>]) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut m = a.to_vec();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

pub fn gcd_all<T: ExactInt>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |g, x| g.gcd(x))
}

/// Product of rational matrices.
pub fn mat_mul_rational(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Matrix<BigRational> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).fold(BigRational::zero(), |acc, (x, br)| acc + x * &br[j]))
                .collect()
        })
        .collect()
}

/// Exact solution of a square nonsingular rational system `A x = b`.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let src = m[c].clone();
            for (x, s) in m[i].iter_mut().zip(src.iter()) {
                *x = &*x - &f * s;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse_rational(a: &[Vec<BigRational>]) -> Option<Matrix<BigRational>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigRational> = (0..n)
            .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect();
        cols.push(solve_rational(a, &e)?);
    }
    Some(transpose(&cols))
}

pub fn rationals(a: &[Vec<i64>]) -> Matrix<BigRational> {
    a.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Least common denominator of a rational vector.
pub fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
