//! Finite quadratic modules: discriminant groups with a `Q/2Z`-valued form.
//!
//! A module is presented by generators `g_i` of order `d_i`. Values are kept as
//! integers over the level `N = 2 e(A)`: `q(g_i) = qn_i / N mod 2` and
//! `b(g_i, g_j) = bn_ij / N mod 1`.

mod blocks;
mod lattice;
mod subgroup;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Float, FloatConst, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub(crate) use blocks::least_nonresidue;
pub use blocks::{fqm_from_blocks, parse_blocks, realize_block, Block, BlockKind};
pub use lattice::{
    cyclic_intermediate, discriminant_form, heegner_component, maximal_even_overlattice, overlattice,
    DiscriminantForm, HeegnerLabel, Intermediate, MaximalOverlattice, Overlattice,
};
pub use subgroup::{economic_isotropic, isotropic_subgroups, quotient_form, splits_2u_by_length, IsotropicSubgroup};

/// An element of a module, as coefficients of the generators reduced mod `d_i`.
pub type Element = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticModule {
    orders: Vec<i64>,
    level: i64,
    qn: Vec<i64>,
    bn: Matrix<i64>,
}

fn rem(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

impl FiniteQuadraticModule {
    /// The module with no generators.
    pub fn trivial() -> Self {
        FiniteQuadraticModule { orders: Vec::new(), level: 2, qn: Vec::new(), bn: Vec::new() }
    }

    /// Builds a module from generator orders, `q(g_i)` mod 2 and `b(g_i, g_j)` mod 1.
    /// Generators of order 1 are dropped.
    pub fn new(orders: Vec<i64>, q: Vec<Rational64>, b: Matrix<Rational64>) -> Result<Self> {
        let k = orders.len();
        let inconsistent = |m: String| Error::InconsistentForm(m);
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(inconsistent("q and b must match the number of generators".into()));
        }
        if orders.iter().any(|&d| d < 1) {
            return Err(inconsistent("generator orders must be positive".into()));
        }
        let keep: Vec<usize> = (0..k).filter(|&i| orders[i] > 1).collect();
        let orders: Vec<i64> = keep.iter().map(|&i| orders[i]).collect();
        let e = orders.iter().fold(1i64, |acc, &d| acc.lcm(&d));
        let level = 2 * e;
        let scale = |r: Rational64, m: i64, what: &str| -> Result<i64> {
            let s = r * Rational64::from_integer(level);
            if !s.is_integer() {
                return Err(inconsistent(format!("{what} = {r} is not compatible with the generator orders")));
            }
            Ok(rem(s.to_integer(), m))
        };
        let mut qn = Vec::with_capacity(keep.len());
        let mut bn = vec![vec![0i64; keep.len()]; keep.len()];
        for (a, &i) in keep.iter().enumerate() {
            qn.push(scale(q[i], 2 * level, "q")?);
            for (c, &j) in keep.iter().enumerate() {
                if b[i][j] != b[j][i] && !(b[i][j] - b[j][i]).is_integer() {
                    return Err(inconsistent("b is not symmetric".into()));
                }
                bn[a][c] = scale(b[i][j], level, "b")?;
            }
        }
        let m = FiniteQuadraticModule { orders, level, qn, bn };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let k = self.orders.len();
        let n = self.level;
        for i in 0..k {
            let d = self.orders[i];
            if rem(self.qn[i], n) != self.bn[i][i] {
                return Err(Error::InconsistentForm(format!("b(g{i}, g{i}) differs from q(g{i}) mod 1")));
            }
            // q(d g) = d^2 q(g) must vanish mod 2
            if rem(d * d * self.qn[i], 2 * n) != 0 {
                return Err(Error::InconsistentForm(format!("q is not well defined on a generator of order {d}")));
            }
            for j in 0..k {
                if rem(d * self.bn[i][j], n) != 0 {
                    return Err(Error::InconsistentForm(format!("b(g{i}, g{j}) is not killed by the order {d}")));
                }
            }
        }
        if self.order() <= 1 << 20 && !self.is_nondegenerate() {
            return Err(Error::InconsistentForm("b is degenerate".into()));
        }
        Ok(())
    }

    fn is_nondegenerate(&self) -> bool {
        self.elements().skip(1).all(|x| (0..self.rank()).any(|j| self.bn_pair(&x, &self.unit(j)) != 0))
    }

    fn unit(&self, j: usize) -> Element {
        let mut e = vec![0; self.rank()];
        e[j] = 1;
        e
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Number of generators in the presentation.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn order(&self) -> i64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> i64 {
        self.orders.iter().fold(1i64, |acc, &d| acc.lcm(&d))
    }

    /// Minimal number of generators of the `p`-primary part.
    pub fn length_p(&self, p: i64) -> usize {
        self.orders.iter().filter(|&&d| d % p == 0).count()
    }

    /// Primes dividing the order.
    pub fn primes(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for &d in &self.orders {
            for p in prime_factors(d) {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }

    /// Invariant factors `d_1 | d_2 | ...` (all > 1).
    pub fn elementary_divisors(&self) -> Vec<i64> {
        if self.orders.is_empty() {
            return Vec::new();
        }
        let k = self.rank();
        let diag: Matrix<i64> = (0..k).map(|i| (0..k).map(|j| if i == j { self.orders[i] } else { 0 }).collect()).collect();
        let s = linalg::smith(&diag);
        s.diagonal.into_iter().map(|d| d.abs()).filter(|&d| d > 1).collect()
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(&a, &d)| rem(a, d)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        x.iter().zip(y).zip(&self.orders).map(|((&a, &b), &d)| rem(a + b, d)).collect()
    }

    pub fn scale(&self, c: i64, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(&a, &d)| rem(c * a, d)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Element {
        self.scale(-1, x)
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        x.iter().zip(&self.orders).all(|(&a, &d)| a % d == 0)
    }

    pub fn element_order(&self, x: &[i64]) -> i64 {
        x.iter().zip(&self.orders).fold(1i64, |acc, (&a, &d)| acc.lcm(&(d / d.gcd(&rem(a, d)))))
    }

    /// `q(x) * N mod 2N`.
    pub fn qn(&self, x: &[i64]) -> i64 {
        let n2 = 2 * self.level;
        let k = self.rank();
        let mut acc: i128 = 0;
        for i in 0..k {
            let xi = x[i] as i128;
            if xi == 0 {
                continue;
            }
            acc += xi * xi * self.qn[i] as i128;
            for j in i + 1..k {
                acc += 2 * xi * x[j] as i128 * self.bn[i][j] as i128;
            }
            acc %= n2 as i128;
        }
        rem(acc as i64, n2)
    }

    /// `b(x, y) * N mod N`.
    pub fn bn_pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let k = self.rank();
        let mut acc: i128 = 0;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                acc += x[i] as i128 * y[j] as i128 * self.bn[i][j] as i128;
            }
            acc %= self.level as i128;
        }
        rem(acc as i64, self.level)
    }

    /// `q(x)` in `[0, 2)`.
    pub fn q(&self, x: &[i64]) -> Rational64 {
        Rational64::new(self.qn(x), self.level)
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &[i64], y: &[i64]) -> Rational64 {
        Rational64::new(self.bn_pair(x, y), self.level)
    }

    pub fn q_gen(&self, i: usize) -> Rational64 {
        Rational64::new(self.qn[i], self.level)
    }

    pub fn b_gen(&self, i: usize, j: usize) -> Rational64 {
        Rational64::new(self.bn[i][j], self.level)
    }

    pub fn is_isotropic(&self, x: &[i64]) -> bool {
        self.qn(x) == 0
    }

    /// All elements in mixed-radix order; index 0 is the zero element.
    pub fn elements(&self) -> Elements<'_> {
        Elements { orders: &self.orders, next: Some(vec![0; self.rank()]) }
    }

    /// Position of `x` in [`Self::elements`].
    pub fn index_of(&self, x: &[i64]) -> usize {
        let mut idx = 0usize;
        for (i, &d) in self.orders.iter().enumerate().rev() {
            idx = idx * d as usize + rem(x[i], d) as usize;
        }
        idx
    }

    /// `π_L`: elements of order 2 with `q ≡ -1/2 mod 2`.
    pub fn pi_l(&self) -> Vec<Element> {
        let three_halves = 3 * self.level / 2;
        self.two_torsion().into_iter().filter(|x| self.qn(x) == three_halves).collect()
    }

    /// Nonzero elements killed by 2.
    pub fn two_torsion(&self) -> Vec<Element> {
        self.p_torsion(2)
    }

    /// Nonzero elements killed by the prime `p`.
    pub fn p_torsion(&self, p: i64) -> Vec<Element> {
        let dirs: Vec<usize> = (0..self.rank()).filter(|&i| self.orders[i] % p == 0).collect();
        let mut out = Vec::new();
        let total = (p as usize).pow(dirs.len() as u32);
        for code in 1..total {
            let mut c = code;
            let mut x = vec![0i64; self.rank()];
            for &i in &dirs {
                x[i] = (c % p as usize) as i64 * (self.orders[i] / p);
                c /= p as usize;
            }
            out.push(x);
        }
        out
    }

    /// `Σ_x exp(πi q(x))`.
    pub fn gauss_sum<F: Float + FloatConst>(&self) -> Complex<F> {
        let n2 = F::from(2 * self.level).unwrap();
        let mut acc = Complex::new(F::zero(), F::zero());
        for x in self.elements() {
            let theta = F::TAU() * F::from(self.qn(&x)).unwrap() / n2;
            acc = acc + Complex::new(theta.cos(), theta.sin());
        }
        acc
    }

    /// Signature mod 8 from the Milgram formula, with the Gauss sum checked
    /// against `√|A| e(σ/8)` to tolerance `tol` (relative to `√|A|`).
    pub fn milgram_signature(&self, tol: f64) -> Result<u8> {
        let g: Complex<f64> = self.gauss_sum();
        let root = (self.order() as f64).sqrt();
        if (g.norm() - root).abs() > tol * root.max(1.0) {
            return Err(Error::InconsistentForm(format!("Gauss sum modulus {} differs from sqrt|A| = {}", g.norm(), root)));
        }
        let octant = g.arg() * 4.0 / std::f64::consts::PI;
        let sigma = octant.round();
        let expected = Complex::from_polar(root, sigma * std::f64::consts::FRAC_PI_4);
        if (g - expected).norm() > tol * root.max(1.0) {
            return Err(Error::InconsistentForm(format!("Gauss sum argument {} is not a multiple of π/4", g.arg())));
        }
        Ok(sigma.rem_euclid(8.0) as u8)
    }

    /// Direct sum of presentations.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let k = self.rank() + other.rank();
        let mut q = Vec::with_capacity(k);
        let mut b = vec![vec![Rational64::zero(); k]; k];
        for i in 0..self.rank() {
            q.push(self.q_gen(i));
            for j in 0..self.rank() {
                b[i][j] = self.b_gen(i, j);
            }
        }
        let o = self.rank();
        for i in 0..other.rank() {
            q.push(other.q_gen(i));
            for j in 0..other.rank() {
                b[o + i][o + j] = other.b_gen(i, j);
            }
        }
        let orders = self.orders.iter().chain(&other.orders).copied().collect();
        FiniteQuadraticModule::new(orders, q, b).expect("direct sum of valid modules")
    }

    /// Multiset of `(element order, q value)` pairs.
    pub fn value_census(&self) -> BTreeMap<(i64, Rational64), usize> {
        let mut m = BTreeMap::new();
        for x in self.elements() {
            *m.entry((self.element_order(&x), self.q(&x))).or_insert(0) += 1;
        }
        m
    }

    /// Isomorphism test by invariants: elementary divisors and the census of
    /// `(order, q)` values. Sufficient for every comparison made in this crate.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.elementary_divisors() == other.elementary_divisors() && self.value_census() == other.value_census()
    }

    pub fn to_json(&self) -> FqmJson {
        let k = self.rank();
        FqmJson {
            orders: self.orders.clone(),
            q_num: (0..k).map(|i| *self.q_gen(i).numer()).collect(),
            q_den: (0..k).map(|i| *self.q_gen(i).denom()).collect(),
            b: (0..k).map(|i| (0..k).map(|j| self.b_gen(i, j).to_string()).collect()).collect(),
        }
    }

    pub fn from_json(j: &FqmJson) -> Result<Self> {
        let k = j.orders.len();
        if j.q_num.len() != k || j.q_den.len() != k {
            return Err(Error::Parse("q_num/q_den must have one entry per order".into()));
        }
        if j.q_den.contains(&0) {
            return Err(Error::Parse("zero denominator".into()));
        }
        let q = j.q_num.iter().zip(&j.q_den).map(|(&a, &b)| Rational64::new(a, b)).collect();
        let b = j
            .b
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<Rational64>().map_err(|e| Error::Parse(format!("b entry '{s}': {e}")))).collect())
            .collect::<Result<Matrix<Rational64>>>()?;
        FiniteQuadraticModule::new(j.orders.clone(), q, b)
    }
}

impl fmt::Display for FiniteQuadraticModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = (0..self.rank()).map(|i| format!("Z/{}[q={}]", self.orders[i], self.q_gen(i))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialized form `{"orders", "q_num", "q_den", "b"}` with `b` entries as `"num/den"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqmJson {
    pub orders: Vec<i64>,
    pub q_num: Vec<i64>,
    pub q_den: Vec<i64>,
    pub b: Vec<Vec<String>>,
}

pub struct Elements<'a> {
    orders: &'a [i64],
    next: Option<Element>,
}

impl Iterator for Elements<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut carried = true;
        for (i, &d) in self.orders.iter().enumerate() {
            succ[i] += 1;
            if succ[i] < d {
                carried = false;
                break;
            }
            succ[i] = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

pub(crate) fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(d: i64, q: Rational64) -> FiniteQuadraticModule {
        FiniteQuadraticModule::new(vec![d], vec![q], vec![vec![q]]).unwrap()
    }

    #[test]
    fn trivial_module() {
        let t = FiniteQuadraticModule::trivial();
        assert_eq!(t.order(), 1);
        assert_eq!(t.exponent(), 1);
        assert_eq!(t.length_p(2), 0);
        assert!(t.pi_l().is_empty());
        assert_eq!(t.milgram_signature(1e-9), Ok(0));
        assert_eq!(t.elements().count(), 1);
    }

    #[test]
    fn z2_minus_half() {
        let a = cyclic(2, Rational64::new(-1, 2));
        assert_eq!(a.q(&[1]), Rational64::new(3, 2));
        assert_eq!(a.pi_l(), vec![vec![1]]);
        assert_eq!(a.milgram_signature(1e-9), Ok(7));
    }

    #[test]
    fn z12_lengths() {
        let a = cyclic(12, Rational64::new(1, 12));
        assert_eq!((a.length_p(2), a.length_p(3), a.exponent()), (1, 1, 12));
        assert_eq!(a.elements().count(), 12);
    }

    #[test]
    fn z4_has_no_pi() {
        let a = cyclic(4, Rational64::new(-1, 4));
        assert!(a.pi_l().is_empty());
        assert_eq!(a.q(&[2]), Rational64::from_integer(1));
    }

    #[test]
    fn degenerate_rejected() {
        let bad = FiniteQuadraticModule::new(
            vec![2, 2],
            vec![Rational64::zero(), Rational64::zero()],
            vec![vec![Rational64::zero(); 2]; 2],
        );
        assert!(matches!(bad, Err(Error::InconsistentForm(_))));
        let bad = FiniteQuadraticModule::new(vec![3], vec![Rational64::new(1, 3)], vec![vec![Rational64::new(1, 3)]]);
        assert!(bad.is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = cyclic(6, Rational64::new(-1, 6)).direct_sum(&cyclic(2, Rational64::new(1, 2)));
        let j = a.to_json();
        let back = FiniteQuadraticModule::from_json(&j).unwrap();
        assert_eq!(a, back);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"orders\":[6,2]"));
    }

    #[test]
    fn index_of_matches_enumeration() {
        let a = cyclic(6, Rational64::new(-1, 6)).direct_sum(&cyclic(4, Rational64::new(1, 4)));
        for (i, x) in a.elements().enumerate() {
            assert_eq!(a.index_of(&x), i);
        }
    }

    #[test]
    fn isomorphism_by_invariants() {
        // Z/6 = Z/2 + Z/3 with matching values
        let z6 = cyclic(6, Rational64::new(-1, 6));
        let split = cyclic(2, Rational64::new(3, 2)).direct_sum(&cyclic(3, Rational64::new(4, 3)));
        assert_eq!(z6.elementary_divisors(), vec![6]);
        assert_eq!(split.elementary_divisors(), vec![6]);
        // -1/6 * 9 = -3/2 = 1/2 on the 2-part; -1/6 * 4 = -2/3 = 4/3 on the 3-part
        assert!(!z6.is_isomorphic(&split));
        let split = cyclic(2, Rational64::new(1, 2)).direct_sum(&cyclic(3, Rational64::new(4, 3)));
        assert!(z6.is_isomorphic(&split));
    }
}
