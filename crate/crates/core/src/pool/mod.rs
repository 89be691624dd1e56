//! The finite pool of signature-(2,1) lattices attached to a fixed `n`: the root
//! lattice types of rank at most `n - 2`, the constants `a_n`, `b_n`, the pool
//! members, and generic modular curves inside a given lattice.
//!
//! The maximal norm of a regular vector in a negative definite root lattice is
//! attained in the interior of a Weyl chamber. In the dominant chamber such a
//! vector is `m = Σ c_i ω_i` with Dynkin labels `c_i >= 1`, and it lies in the
//! root lattice iff `C^{-1} c` is integral. Since `C^{-1}` has nonnegative
//! entries, `|(m,m)| = c^T C^{-1} c` is increasing in every label, which makes
//! a bounded depth-first search over labels exact.

mod curve;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::named::{cartan, hyperbolic, rank_one};
use crate::lattice::{component_gram, direct_sum_all, has_root, orth_complement, root_sublattice, Ade, GramLattice};
use crate::linalg::{self, Matrix};

pub use curve::{
    check_condition_i, check_condition_ii, construct_generic_k, CaseTag, CertificateCheck, GenericCurveCertificate,
    SplitLattice,
};

/// Search limits for the pool computations. Exceeding one is reported as
/// [`Error::CapExceeded`], never as a wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PoolCaps {
    /// Largest `|(m,m)|` tried for a regular vector of a root lattice.
    pub chamber_norm: i64,
    /// Largest `(m,m)` tried in `U ⊕ kA_1`.
    pub hyperbolic_norm: i64,
    /// Coordinate bound on the `U` part in `U ⊕ kA_1`.
    pub box_radius: i64,
    /// Largest multiple `α` of `e_1` tried in the 2U re-split.
    pub resplit_alpha: i64,
}

impl Default for PoolCaps {
    fn default() -> Self {
        PoolCaps { chamber_norm: 1 << 16, hyperbolic_norm: 512, box_radius: 16, resplit_alpha: 8 }
    }
}

/// All multisets of irreducible ADE types with total rank in `1..=n-2`, each
/// sorted.
pub fn enumerate_rn(n: usize) -> Vec<Vec<Ade>> {
    let max = n.saturating_sub(2);
    let types: Vec<Ade> = (1..=max).flat_map(Ade::of_rank).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(types: &[Ade], start: usize, left: usize, cur: &mut Vec<Ade>, out: &mut Vec<Vec<Ade>>) {
        for i in start..types.len() {
            let r = types[i].rank();
            if r > left {
                continue;
            }
            cur.push(types[i]);
            out.push(cur.clone());
            go(types, i, left - r, cur, out);
            cur.pop();
        }
    }
    go(&types, 0, max, &mut cur, &mut out);
    out.sort();
    out
}

/// The root lattice `R_1 ⊕ ... ⊕ R_k` of a list of types.
pub fn root_lattice(types: &[Ade]) -> GramLattice {
    let parts: Vec<GramLattice> = types.iter().map(|&t| crate::lattice::named::ade(t)).collect();
    direct_sum_all(&parts)
}

/// A regular vector of maximal norm in the dominant chamber of an irreducible
/// root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberPoint {
    /// `(m,m) < 0`.
    pub norm: i64,
    /// Dynkin labels `c_i = -(m, α_i) >= 1`.
    pub labels: Vec<i64>,
    /// `m` in the simple root basis.
    pub coords: Vec<i64>,
}

/// Regular vector of maximal norm in the root lattice with negative Cartan
/// matrix `neg_cartan` (the Gram matrix of the simple roots).
pub fn chamber_point(neg_cartan: &[Vec<i64>], cap: i64) -> Result<ChamberPoint> {
    let k = neg_cartan.len();
    if k == 0 {
        return Err(Error::NoRoots);
    }
    let pos: Matrix<i64> = neg_cartan.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let d = linalg::determinant(&linalg::to_big(&pos)).to_i64().ok_or(Error::Overflow("chamber_point"))?;
    let c = linalg::rationals(&pos);
    let inv = linalg::inverse_rational(&c).ok_or(Error::DegenerateLattice)?;
    let dr = BigRational::from_integer(BigInt::from(d));
    // adj = d C^{-1}, an integer matrix with nonnegative entries
    let adj: Matrix<i64> = inv
        .iter()
        .map(|r| r.iter().map(|x| (x * &dr).to_integer().to_i64().expect("small adjugate")).collect())
        .collect();
    let ones = vec![1i64; k];
    let rho = quad(&adj, &ones);
    let mut bound = rho;
    loop {
        if bound > cap.saturating_mul(d) {
            return Err(Error::CapExceeded(format!("no regular vector with |norm| <= {cap}")));
        }
        let mut search = LabelSearch { adj: &adj, d, best: None, bound };
        let mut labels = ones.clone();
        let t: Vec<i64> = (0..k).map(|i| adj[i].iter().sum()).collect();
        search.dfs(0, &mut labels, t, rho);
        if let Some((g, labels)) = search.best {
            let coords: Vec<i64> = (0..k).map(|i| adj[i].iter().zip(&labels).map(|(a, c)| a * c).sum::<i64>() / d).collect();
            debug_assert_eq!(g % d, 0);
            let norm = -g / d;
            debug_assert_eq!(crate::lattice::pair_with(neg_cartan, &coords, &coords), norm);
            return Ok(ChamberPoint { norm, labels, coords });
        }
        bound = bound.saturating_mul(2);
    }
}

fn quad(a: &[Vec<i64>], x: &[i64]) -> i64 {
    a.iter().zip(x).map(|(row, xi)| xi * row.iter().zip(x).map(|(p, q)| p * q).sum::<i64>()).sum()
}

struct LabelSearch<'a> {
    adj: &'a [Vec<i64>],
    d: i64,
    best: Option<(i64, Vec<i64>)>,
    bound: i64,
}

impl LabelSearch<'_> {
    fn limit(&self) -> i64 {
        self.best.as_ref().map_or(self.bound, |(g, _)| g - 1)
    }

    /// `t = adj · c` and `g = c^T adj c`, with labels past `i` still at 1.
    fn dfs(&mut self, i: usize, labels: &mut Vec<i64>, mut t: Vec<i64>, mut g: i64) {
        let k = labels.len();
        if g > self.limit() {
            return;
        }
        if i == k {
            if t.iter().all(|x| x % self.d == 0) {
                self.best = Some((g, labels.clone()));
            }
            return;
        }
        loop {
            self.dfs(i + 1, labels, t.clone(), g);
            g += 2 * t[i] + self.adj[i][i];
            if g > self.limit() {
                break;
            }
            for (tj, row) in t.iter_mut().zip(self.adj) {
                *tj += row[i];
            }
            labels[i] += 1;
        }
        labels[i] = 1;
    }
}

/// `max (m,m)` over `m ∈ R` with `(m,l) ≠ 0` for every root `l` of an
/// irreducible type.
pub fn type_chamber_norm(t: Ade, cap: i64) -> Result<i64> {
    Ok(chamber_point(&cartan(t), cap)?.norm)
}

/// A regular vector of `R(N)` of maximal norm, in the coordinates of `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularVector {
    pub norm: i64,
    pub vector: Vec<i64>,
    pub root_types: String,
}

/// `max (m,m)` over `m ∈ R(N)` not orthogonal to any `(-2)`-vector of `N`,
/// together with a vector attaining it. Works component by component: a vector
/// is regular iff each of its components is.
pub fn max_nonorthogonal_norm(lattice: &GramLattice, cap: i64) -> Result<RegularVector> {
    let dec = root_sublattice(lattice)?;
    if dec.is_empty() {
        return Err(Error::NoRoots);
    }
    let mut vector = vec![0i64; lattice.rank()];
    let mut norm = 0;
    for comp in &dec.components {
        let g = component_gram(lattice.gram(), comp);
        let p = chamber_point(&g, cap)?;
        norm += p.norm;
        for (c, root) in p.coords.iter().zip(&comp.simple_roots) {
            for (v, r) in vector.iter_mut().zip(root) {
                *v += c * r;
            }
        }
    }
    debug_assert_eq!(lattice.norm(&vector), norm);
    Ok(RegularVector { norm, vector, root_types: dec.label() })
}

/// `a_n = -min_{R ∈ R_n} max_m (m,m)`, by an unbounded knapsack over the
/// irreducible types (regular norms add over orthogonal components).
pub fn compute_a_n(n: usize, caps: &PoolCaps) -> Result<i64> {
    if n < 3 {
        return Err(Error::WrongSignature { p: 2, q: n, min_n: 3 });
    }
    let max = n - 2;
    let mut values: Vec<(usize, i64)> = Vec::new();
    for t in (1..=max).flat_map(Ade::of_rank) {
        values.push((t.rank(), -type_chamber_norm(t, caps.chamber_norm)?));
    }
    // best[r] = largest |norm| over nonempty sums of total rank exactly r
    let mut best: Vec<Option<i64>> = vec![None; max + 1];
    best[0] = Some(0);
    for r in 1..=max {
        for &(rk, v) in &values {
            if rk <= r {
                if let Some(prev) = best[r - rk] {
                    best[r] = Some(best[r].map_or(prev + v, |b| b.max(prev + v)));
                }
            }
        }
    }
    Ok(best[1..].iter().flatten().copied().max().expect("A_1 always fits"))
}

/// A vector of `U ⊕ kA_1` with positive norm that is not orthogonal to any root.
/// Coordinates: `m = x e + y f + Σ z_i r_i` with `r_i` the `A_1` roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub k: usize,
    pub norm: i64,
    pub x: i64,
    pub y: i64,
    pub z: Vec<i64>,
}

impl HyperbolicPoint {
    pub fn vector(&self) -> Vec<i64> {
        let mut v = vec![self.x, self.y];
        v.extend(&self.z);
        v
    }
}

/// `U ⊕ kA_1` with basis `e, f, r_1, ..., r_k`.
pub fn u_plus_k_a1(k: usize) -> GramLattice {
    let mut parts = vec![hyperbolic()];
    parts.extend(std::iter::repeat_with(|| rank_one(-2)).take(k));
    direct_sum_all(&parts).named(format!("U+{k}A1"))
}

/// Whether `m ∈ U ⊕ kA_1` of positive norm lies in the interior of a Weyl
/// chamber, decided by checking that the negative definite `m^⊥` is root-free.
pub fn is_chamber_interior(lattice: &GramLattice, m: &[i64]) -> Result<bool> {
    let perp = orth_complement(&[m.to_vec()], lattice)?;
    Ok(!has_root(&perp.gram)?)
}

/// Minimal positive norm of a chamber-interior vector of `U ⊕ kA_1`. Norms are
/// tried in increasing order; for each the `U` coordinates range over
/// `1 <= x < y <= box_radius` (the symmetries `m ↦ -m`, `x ↔ y`, and sign and
/// order changes of the `z_i` are Weyl or lattice automorphisms).
pub fn min_chamber_norm(k: usize, caps: &PoolCaps) -> Result<HyperbolicPoint> {
    let lattice = u_plus_k_a1(k);
    for norm in (2..=caps.hyperbolic_norm).step_by(2) {
        for x in 1..=caps.box_radius {
            for y in x + 1..=caps.box_radius {
                let s = x * y - norm / 2;
                if s < k as i64 || (k == 0 && s != 0) {
                    continue;
                }
                let mut found = None;
                let _ = for_each_square_partition(s, k, &mut |z| {
                    if has_short_perp_root(x, y, z) {
                        return ControlFlow::Continue(());
                    }
                    let mut m = vec![x, y];
                    m.extend_from_slice(z);
                    match is_chamber_interior(&lattice, &m) {
                        Ok(true) => {
                            found = Some(Ok(z.to_vec()));
                            ControlFlow::Break(())
                        }
                        Ok(false) => ControlFlow::Continue(()),
                        Err(e) => {
                            found = Some(Err(e));
                            ControlFlow::Break(())
                        }
                    }
                });
                if let Some(z) = found {
                    return Ok(HyperbolicPoint { k, norm, x, y, z: z? });
                }
            }
        }
    }
    Err(Error::CapExceeded(format!(
        "no chamber-interior vector of U+{k}A1 with norm <= {} and |U coordinates| <= {}",
        caps.hyperbolic_norm, caps.box_radius
    )))
}

/// Looks for a root `v = a e + b f + w` orthogonal to `m = x e + y f + Σ z_i r_i`
/// with `|w|^2 <= 2`, i.e. `w ∈ {0, ±r_i, ±r_i ± r_j}`. Such a root forces
/// `ab = |w|^2 - 1` and `ay + bx = 2 Σ w_i z_i`. A hit refutes `m`; a miss
/// decides nothing.
fn has_short_perp_root(x: i64, y: i64, z: &[i64]) -> bool {
    // w = 0: a = -b = ±1
    if x == y {
        return true;
    }
    // w = ±r_i: a = 0 or b = 0
    if z.iter().any(|&zi| (2 * zi) % x == 0 || (2 * zi) % y == 0) {
        return true;
    }
    // w = ±r_i ± r_j: a = b = ±1
    for (i, &zi) in z.iter().enumerate() {
        for &zj in &z[i + 1..] {
            if x + y == 2 * (zi + zj).abs() || x + y == 2 * (zi - zj).abs() {
                return true;
            }
        }
    }
    false
}

/// Calls `f` on every nonincreasing tuple of `k` positive integers whose squares
/// sum to `s`.
fn for_each_square_partition(s: i64, k: usize, f: &mut dyn FnMut(&[i64]) -> ControlFlow<()>) -> ControlFlow<()> {
    fn go(s: i64, left: usize, max: i64, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> ControlFlow<()>) -> ControlFlow<()> {
        if left == 0 {
            return if s == 0 { f(cur) } else { ControlFlow::Continue(()) };
        }
        // each remaining entry is at least 1
        let mut z = max.min(isqrt(s - (left as i64 - 1)));
        while z >= 1 {
            if z * z * left as i64 >= s {
                cur.push(z);
                go(s - z * z, left - 1, z, cur, f)?;
                cur.pop();
            } else {
                break;
            }
            z -= 1;
        }
        ControlFlow::Continue(())
    }
    if s < k as i64 {
        return ControlFlow::Continue(());
    }
    go(s, k, i64::MAX, &mut Vec::with_capacity(k), f)
}

fn isqrt(s: i64) -> i64 {
    if s <= 0 {
        return 0;
    }
    let mut r = (s as f64).sqrt() as i64;
    while r * r > s {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= s {
        r += 1;
    }
    r
}

/// `b_n = max_{0 <= k <= n-2} min_chamber_norm(k)`.
pub fn compute_b_n(n: usize, caps: &PoolCaps) -> Result<i64> {
    if n < 2 {
        return Err(Error::WrongSignature { p: 2, q: n, min_n: 2 });
    }
    let mut best = 0;
    for k in 0..=n - 2 {
        best = best.max(min_chamber_norm(k, caps)?.norm);
    }
    Ok(best)
}

/// Data of the modular curve attached to a pool member, supplied externally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInvariants {
    #[serde(with = "crate::serde_ratio")]
    pub area_over_2pi: Rational64,
    pub max_stabilizer: u64,
    #[serde(default)]
    pub source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PoolFamily {
    /// `<4> ⊕ <4> ⊕ <-a>`.
    PrimeFour,
    /// `U ⊕ <b>`.
    Hyperbolic,
}

impl PoolFamily {
    pub fn pattern(self) -> &'static str {
        match self {
            PoolFamily::PrimeFour => "<4>+<4>+<-a>",
            PoolFamily::Hyperbolic => "U+<b>",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolMember {
    pub family: PoolFamily,
    /// `a` or `b`: a positive even integer.
    pub parameter: i64,
    pub gram: GramLattice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_data: Option<CurveInvariants>,
}

impl PoolMember {
    pub fn prime_four(a: i64) -> Result<Self> {
        Self::check_parameter(a)?;
        let gram = direct_sum_all(&[rank_one(4), rank_one(4), rank_one(-a)]).named(format!("<4>+<4>+<-{a}>"));
        Ok(PoolMember { family: PoolFamily::PrimeFour, parameter: a, gram, curve_data: None })
    }

    pub fn hyperbolic(b: i64) -> Result<Self> {
        Self::check_parameter(b)?;
        let gram = direct_sum_all(&[hyperbolic(), rank_one(b)]).named(format!("U+<{b}>"));
        Ok(PoolMember { family: PoolFamily::Hyperbolic, parameter: b, gram, curve_data: None })
    }

    fn check_parameter(p: i64) -> Result<()> {
        if p <= 0 || p % 2 != 0 {
            return Err(Error::InvalidVector(format!("pool parameters are positive even integers, got {p}")));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        self.gram.label()
    }
}

/// `P_n` together with the constants it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pool {
    pub n: usize,
    pub a_n: i64,
    pub b_n: i64,
    pub members: Vec<PoolMember>,
}

impl Pool {
    pub fn compute(n: usize, caps: &PoolCaps) -> Result<Self> {
        let a_n = compute_a_n(n, caps)?;
        let b_n = compute_b_n(n, caps)?;
        Ok(Pool { n, a_n, b_n, members: build_pool(n, a_n, b_n) })
    }

    pub fn contains(&self, member: &PoolMember) -> bool {
        self.members.iter().any(|m| m.family == member.family && m.parameter == member.parameter)
    }
}

/// Members `<4>+<4>+<-a>` for even `2 <= a <= a_n` and `U+<b>` for even
/// `2 <= b <= b_n`.
pub fn build_pool(_n: usize, a_n: i64, b_n: i64) -> Vec<PoolMember> {
    let mut out = Vec::new();
    for a in (2..=a_n).step_by(2) {
        out.push(PoolMember::prime_four(a).expect("even parameter"));
    }
    for b in (2..=b_n).step_by(2) {
        out.push(PoolMember::hyperbolic(b).expect("even parameter"));
    }
    out
}

/// Per-type regular norms, keyed by type name; handy for reports.
pub fn type_table(max_rank: usize, caps: &PoolCaps) -> Result<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    for t in (1..=max_rank).flat_map(Ade::of_rank) {
        out.insert(t.to_string(), type_chamber_norm(t, caps.chamber_norm)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::parse_lattice;

    #[test]
    fn rn_small() {
        let r4 = enumerate_rn(4);
        assert_eq!(r4.len(), 3);
        assert!(r4.contains(&vec![Ade::A(1)]));
        assert!(r4.contains(&vec![Ade::A(1), Ade::A(1)]));
        assert!(r4.contains(&vec![Ade::A(2)]));
        let r5 = enumerate_rn(5);
        assert_eq!(r5.len(), 6);
        assert!(r5.contains(&vec![Ade::A(1), Ade::A(2)]));
        assert!(!enumerate_rn(5).iter().any(|r| r.contains(&Ade::D(4))));
    }

    #[test]
    fn irreducible_values() {
        let cap = PoolCaps::default().chamber_norm;
        for (t, v) in [(Ade::A(1), -2), (Ade::A(2), -2), (Ade::A(3), -10), (Ade::D(4), -14), (Ade::E(6), -78), (Ade::E(8), -620)] {
            assert_eq!(type_chamber_norm(t, cap).unwrap(), v, "{t}");
        }
    }

    #[test]
    fn regular_vectors_are_regular() {
        for expr in ["A1", "2A1", "A2", "A3+A1", "D5", "E7", "<-6>+A2"] {
            let l = parse_lattice(expr).unwrap();
            let r = max_nonorthogonal_norm(&l, 1 << 12).unwrap();
            let roots = crate::lattice::roots(&l).unwrap();
            assert!(roots.iter().all(|root| l.pair(root, &r.vector) != 0), "{expr}");
        }
        assert_eq!(max_nonorthogonal_norm(&parse_lattice("2A1").unwrap(), 64).unwrap().norm, -4);
        assert_eq!(max_nonorthogonal_norm(&parse_lattice("<-4>").unwrap(), 64), Err(Error::NoRoots));
    }

    #[test]
    fn a_n_small() {
        let caps = PoolCaps::default();
        assert_eq!(compute_a_n(3, &caps).unwrap(), 2);
        assert_eq!(compute_a_n(4, &caps).unwrap(), 4);
        assert_eq!(compute_a_n(10, &caps).unwrap(), 620);
    }

    #[test]
    fn chamber_k0() {
        let p = min_chamber_norm(0, &PoolCaps::default()).unwrap();
        assert_eq!((p.norm, p.x, p.y), (4, 1, 2));
    }

    #[test]
    fn square_partitions() {
        let mut seen = Vec::new();
        let _ = for_each_square_partition(6, 3, &mut |z| {
            seen.push(z.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![vec![2, 1, 1]]);
    }

    #[test]
    fn pool_members() {
        let pool = build_pool(4, 4, 22);
        assert!(pool.iter().any(|m| m.label() == "<4>+<4>+<-2>"));
        assert!(pool.iter().any(|m| m.label() == "U+<4>"));
        assert!(pool.iter().all(|m| m.gram.signature() == (2, 1)));
        assert!(PoolMember::hyperbolic(3).is_err());
        assert!(PoolMember::prime_four(0).is_err());
    }
}
