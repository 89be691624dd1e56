//! Even integral lattices given by a Gram matrix in a distinguished basis.
//!
//! Vectors are integer coordinate slices in the lattice basis; sublattices carry
//! their basis as ambient coordinates so that every pairing goes through the
//! ambient Gram matrix.

pub mod named;
pub mod roots;
pub mod short;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub use named::{parse_lattice, LatticeFile};
pub use roots::{root_sublattice, Ade, RootComponent, RootDecomposition};
pub use roots::component_gram;
pub use short::{has_root, roots, short_vectors, DefiniteForm};

/// An even nondegenerate lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramLattice {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    gram: Matrix<i64>,
}

impl GramLattice {
    pub fn new(gram: Matrix<i64>) -> Result<Self> {
        check_even_symmetric(&gram)?;
        if linalg::determinant(&linalg::to_big(&gram)).is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(GramLattice { name: None, gram })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// A readable label: the given name, or the rank when unnamed.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("<rank {} lattice>", self.rank()))
    }

    pub fn gram(&self) -> &Matrix<i64> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&linalg::to_big(&self.gram))
    }

    pub fn pair(&self, u: &[i64], v: &[i64]) -> i64 {
        pair_with(&self.gram, u, v)
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        self.pair(v, v)
    }

    /// Pairings of `v` with every basis vector, i.e. `G v`.
    pub fn pairings(&self, v: &[i64]) -> Vec<i64> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() as i64)
            .collect()
    }

    /// Pairing of two rational vectors.
    pub fn pair_rational(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if self.gram[i][j] != 0 && !vj.is_zero() {
                    acc += ui * vj * BigRational::from_integer(BigInt::from(self.gram[i][j]));
                }
            }
        }
        acc
    }

    pub fn signature(&self) -> (usize, usize) {
        signature_of(&self.gram).expect("nondegenerate by construction")
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().1 == self.rank()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs() == BigInt::from(1)
    }

    /// Gram matrix of the given family of ambient vectors.
    pub fn restrict(&self, basis: &[Vec<i64>]) -> Matrix<i64> {
        restrict_gram(&self.gram, basis)
    }

    pub fn check_vector(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }
}

pub(crate) fn check_even_symmetric(gram: &[Vec<i64>]) -> Result<()> {
    let n = gram.len();
    for (i, row) in gram.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare { row: i, len: row.len(), rank: n });
        }
    }
    for i in 0..n {
        if gram[i][i] % 2 != 0 {
            return Err(Error::NotEven { index: i, value: gram[i][i] });
        }
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(())
}

pub(crate) fn pair_with(gram: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    let mut acc: i128 = 0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0 {
            continue;
        }
        let row = &gram[i];
        let mut inner: i128 = 0;
        for (j, &vj) in v.iter().enumerate() {
            inner += row[j] as i128 * vj as i128;
        }
        acc += ui as i128 * inner;
    }
    i64::try_from(acc).expect("pairing overflows i64")
}

pub(crate) fn restrict_gram(gram: &[Vec<i64>], basis: &[Vec<i64>]) -> Matrix<i64> {
    let k = basis.len();
    let mut out = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = pair_with(gram, &basis[i], &basis[j]);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Exact signature `(p, q)` of a symmetric integer matrix by congruence
/// diagonalization over the rationals.
pub fn signature_of(gram: &[Vec<i64>]) -> Result<(usize, usize)> {
    let mut a = linalg::rationals(gram);
    let (mut p, mut q) = (0usize, 0usize);
    while !a.is_empty() {
        let n = a.len();
        let pivot = match (0..n).find(|&i| !a[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let Some((i, j)) = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero())
                else {
                    return Err(Error::DegenerateLattice);
                };
                // e_i <- e_i + e_j makes the diagonal entry 2 a_ij
                let row_j = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(row_j) {
                    *x += y;
                }
                for row in a.iter_mut() {
                    let y = row[j].clone();
                    row[i] += y;
                }
                i
            }
        };
        let d = a[pivot][pivot].clone();
        if d.is_positive() {
            p += 1;
        } else {
            q += 1;
        }
        let mut next = Vec::with_capacity(n - 1);
        for r in (0..n).filter(|&r| r != pivot) {
            let factor = &a[r][pivot] / &d;
            let row: Vec<BigRational> = (0..n)
                .filter(|&c| c != pivot)
                .map(|c| &a[r][c] - &factor * &a[pivot][c])
                .collect();
            next.push(row);
        }
        a = next;
    }
    Ok((p, q))
}

/// Signature of a lattice. Degenerate input is rejected before a lattice exists,
/// so this is the checked entry point for raw Gram matrices.
pub fn signature(gram: &[Vec<i64>]) -> Result<(usize, usize)> {
    signature_of(gram)
}

pub fn direct_sum(a: &GramLattice, b: &GramLattice) -> GramLattice {
    let (m, n) = (a.rank(), b.rank());
    let mut gram = vec![vec![0i64; m + n]; m + n];
    for i in 0..m {
        gram[i][..m].copy_from_slice(&a.gram[i]);
    }
    for i in 0..n {
        gram[m + i][m..].copy_from_slice(&b.gram[i]);
    }
    let name = match (a.name(), b.name()) {
        (Some(x), Some(y)) => Some(format!("{x}+{y}")),
        _ => None,
    };
    GramLattice { name, gram }
}

pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a GramLattice>) -> GramLattice {
    let mut acc = GramLattice { name: None, gram: Vec::new() };
    let mut first = true;
    for part in parts {
        if first {
            acc = part.clone();
            first = false;
        } else {
            acc = direct_sum(&acc, part);
        }
    }
    acc
}

/// The positive generator of the ideal `(l, L)`.
pub fn divisibility(l: &[i64], lattice: &GramLattice) -> Result<i64> {
    lattice.check_vector(l)?;
    if l.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    if linalg::gcd_all(l) != 1 {
        return Err(Error::NotPrimitive);
    }
    Ok(linalg::gcd_all(&lattice.pairings(l)))
}

/// A sublattice given by ambient basis vectors together with its restricted Gram
/// matrix. The restriction may be degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sublattice {
    pub basis: Matrix<i64>,
    pub gram: Matrix<i64>,
    pub degenerate: bool,
}

impl Sublattice {
    pub fn from_basis(ambient: &GramLattice, basis: Matrix<i64>) -> Self {
        let gram = ambient.restrict(&basis);
        let degenerate = linalg::determinant(&linalg::to_big(&gram)).is_zero();
        Sublattice { basis, gram, degenerate }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn lattice(&self) -> Result<GramLattice> {
        if self.degenerate {
            return Err(Error::DegenerateLattice);
        }
        GramLattice::new(self.gram.clone())
    }

    /// Ambient coordinates of a vector given in sublattice coordinates.
    pub fn embed(&self, coords: &[i64]) -> Vec<i64> {
        let n = self.basis.first().map_or(0, |b| b.len());
        let mut out = vec![0i64; n];
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}

/// Rank of a family of integer vectors.
pub fn rank_of(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    linalg::hermite(&linalg::to_big(vectors)).rank()
}

/// `{v ∈ L : (v, s) = 0 for all s ∈ S}` with an integral basis.
pub fn orth_complement(vectors: &[Vec<i64>], lattice: &GramLattice) -> Result<Sublattice> {
    for v in vectors {
        lattice.check_vector(v)?;
    }
    if rank_of(vectors) != vectors.len() {
        return Err(Error::DependentVectors);
    }
    let rows: Matrix<BigInt> = vectors.iter().map(|v| linalg::vec_to_big(&lattice.pairings(v))).collect();
    let kernel = linalg::kernel(&rows, lattice.rank());
    let basis = linalg::to_i64(&kernel).ok_or(Error::Overflow("orth_complement"))?;
    Ok(Sublattice::from_basis(lattice, basis))
}

/// Orthogonal projection of `v` onto `K ⊗ Q` for a nondegenerate `K` spanned by
/// the ambient vectors `k_basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Coefficients of the projection in the given `K` basis.
    pub coefficients: Vec<BigRational>,
    /// Ambient coordinates of the projection.
    pub vector: Vec<BigRational>,
    pub norm: BigRational,
}

pub fn project_to(v: &[i64], k_basis: &[Vec<i64>], lattice: &GramLattice) -> Result<Projection> {
    lattice.check_vector(v)?;
    let gk = lattice.restrict(k_basis);
    if linalg::determinant(&linalg::to_big(&gk)).is_zero() {
        return Err(Error::DegenerateLattice);
    }
    let rhs: Vec<BigRational> = k_basis
        .iter()
        .map(|k| BigRational::from_integer(BigInt::from(lattice.pair(k, v))))
        .collect();
    let coefficients = linalg::solve_rational(&linalg::rationals(&gk), &rhs).ok_or(Error::DegenerateLattice)?;
    let mut vector = vec![BigRational::zero(); lattice.rank()];
    for (c, k) in coefficients.iter().zip(k_basis) {
        for (o, &x) in vector.iter_mut().zip(k) {
            if x != 0 {
                *o += c * BigRational::from_integer(BigInt::from(x));
            }
        }
    }
    let norm = coefficients.iter().zip(&rhs).fold(BigRational::zero(), |acc, (c, r)| acc + c * r);
    Ok(Projection { coefficients, vector, norm })
}

/// Integer vector from a rational one, if all entries are integral.
pub fn integral(v: &[BigRational]) -> Option<Vec<i64>> {
    v.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()
}

pub(crate) fn rational_vec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// Sign-normalizes so that the first nonzero coordinate is positive.
pub(crate) fn canonical_sign(v: &mut [i64]) {
    if let Some(first) = v.iter().find(|&&x| x != 0) {
        if *first < 0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// `gcd` of the coordinates; primitive vectors have content 1.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::{e8, hyperbolic, rank_one};

    #[test]
    fn signature_examples() {
        assert_eq!(hyperbolic().signature(), (1, 1));
        let l = direct_sum_all([&rank_one(4), &rank_one(4), &rank_one(-2)]);
        assert_eq!(l.signature(), (2, 1));
        let big = direct_sum_all([&hyperbolic(), &hyperbolic(), &e8()]);
        assert_eq!(big.signature(), (2, 10));
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(GramLattice::new(vec![vec![2, 2], vec![2, 2]]), Err(Error::DegenerateLattice));
        assert_eq!(signature_of(&[vec![0, 0], vec![0, 0]]), Err(Error::DegenerateLattice));
    }

    #[test]
    fn odd_and_asymmetric_rejected() {
        assert!(matches!(GramLattice::new(vec![vec![1]]), Err(Error::NotEven { .. })));
        assert_eq!(GramLattice::new(vec![vec![0, 1], vec![2, 0]]), Err(Error::NotSymmetric));
    }

    #[test]
    fn divisibility_examples() {
        let u = hyperbolic();
        assert_eq!(divisibility(&[1, -1], &u), Ok(1));
        let l = direct_sum_all([&hyperbolic(), &hyperbolic(), &rank_one(-2)]);
        assert_eq!(divisibility(&[0, 0, 0, 0, 1], &l), Ok(2));
        assert_eq!(divisibility(&[1, 2, 0, 0, 0], &l), Ok(1));
        assert_eq!(divisibility(&[0, 0, 0, 0, 0], &l), Err(Error::ZeroVector));
        assert_eq!(divisibility(&[2, 0, 0, 0, 0], &l), Err(Error::NotPrimitive));
    }

    #[test]
    fn complement_of_full_basis_is_zero() {
        let l = direct_sum(&hyperbolic(), &rank_one(-2));
        let c = orth_complement(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &l).unwrap();
        assert_eq!(c.rank(), 0);
    }

    #[test]
    fn complement_of_isotropic_is_flagged_degenerate() {
        let c = orth_complement(&[vec![1, 0]], &hyperbolic()).unwrap();
        assert_eq!(c.rank(), 1);
        assert!(c.degenerate);
        assert_eq!(c.lattice(), Err(Error::DegenerateLattice));
    }

    #[test]
    fn complement_in_2u_plus_m() {
        // S = {e1 + 2 f1, e2 + 2 f2, m} inside 2U + <-4> + <-2>, m = (1, 1) in M
        let l = direct_sum_all([&hyperbolic(), &hyperbolic(), &rank_one(-4), &rank_one(-2)]);
        let s = vec![vec![1, 2, 0, 0, 0, 0], vec![0, 0, 1, 2, 0, 0], vec![0, 0, 0, 0, 1, 1]];
        let c = orth_complement(&s, &l).unwrap();
        let cl = c.lattice().unwrap();
        assert_eq!(cl.rank(), 3);
        // <-4> + <-4> + (m^perp in M); m^perp in <-4>+<-2> is spanned by (1,-2), norm -12
        assert_eq!(cl.determinant(), BigInt::from(-4 * 4 * 12));
        assert_eq!(cl.signature(), (0, 3));
    }

    #[test]
    fn projection_examples() {
        let l = direct_sum_all([&hyperbolic(), &rank_one(-2), &rank_one(-2)]);
        let k = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        let p = project_to(&[1, 1, 0, 0], &k, &l).unwrap();
        assert_eq!(integral(&p.vector), Some(vec![1, 1, 0, 0]));
        let p = project_to(&[0, 0, 1, 0], &k, &l).unwrap();
        assert!(p.norm.is_zero());
        // l = root of M, K ∩ M = Z m with m = r1 + r2, (l, m) = -2, (m, m) = -4
        let k = vec![vec![0, 0, 1, 1]];
        let p = project_to(&[0, 0, 1, 0], &k, &l).unwrap();
        assert_eq!(p.norm, BigRational::new(BigInt::from(4), BigInt::from(-4)));
    }
}
