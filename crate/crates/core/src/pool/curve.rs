//! Generic modular curves `K ⊂ L`: sublattices of signature (2,1) with no root
//! in `K^⊥` and a root of the target component whose projection to `K ⊗ Q` is
//! negative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{max_nonorthogonal_norm, min_chamber_norm, PoolCaps, PoolMember};
use crate::discform::{discriminant_form, DiscriminantForm, HeegnerLabel};
use crate::error::{Error, Result};
use crate::lattice::{
    divisibility, has_root, orth_complement, project_to, rational_vec, roots, DefiniteForm, GramLattice, Sublattice,
};
use crate::linalg::{self, Matrix};

/// `L = U_1 ⊕ U_2 ⊕ M` with explicit hyperbolic bases and a basis of `M`, all in
/// the coordinates of `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitLattice {
    pub lattice: GramLattice,
    pub e1: Vec<i64>,
    pub f1: Vec<i64>,
    pub e2: Vec<i64>,
    pub f2: Vec<i64>,
    pub m_basis: Matrix<i64>,
}

impl SplitLattice {
    pub fn new(
        lattice: GramLattice,
        e1: Vec<i64>,
        f1: Vec<i64>,
        e2: Vec<i64>,
        f2: Vec<i64>,
        m_basis: Matrix<i64>,
    ) -> Result<Self> {
        let split = SplitLattice { lattice, e1, f1, e2, f2, m_basis };
        split.validate()?;
        Ok(split)
    }

    /// Reads `2U ⊕ M` off a Gram matrix whose leading 4×4 block is `U ⊕ U` and
    /// is orthogonal to the remaining coordinates.
    pub fn standard(lattice: GramLattice) -> Result<Self> {
        let n = lattice.rank();
        if n < 4 {
            return Err(Error::BadSplit("rank below 4".into()));
        }
        let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(i == j)).collect() };
        let m_basis = (4..n).map(unit).collect();
        SplitLattice::new(lattice, unit(0), unit(1), unit(2), unit(3), m_basis)
    }

    fn validate(&self) -> Result<()> {
        let l = &self.lattice;
        let n = l.rank();
        let hyp = [&self.e1, &self.f1, &self.e2, &self.f2];
        for v in hyp.iter().copied().chain(&self.m_basis) {
            l.check_vector(v)?;
        }
        let want = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
        for (i, u) in hyp.iter().enumerate() {
            for (j, w) in hyp.iter().enumerate() {
                if l.pair(u, w) != want[i][j] {
                    return Err(Error::BadSplit("the given vectors do not span U ⊕ U".into()));
                }
            }
            if self.m_basis.iter().any(|m| l.pair(u, m) != 0) {
                return Err(Error::BadSplit("M is not orthogonal to 2U".into()));
            }
        }
        let all = self.basis();
        if all.len() != n || linalg::determinant(&linalg::to_big(&all)).abs() != BigInt::from(1) {
            return Err(Error::BadSplit("2U and M do not span L".into()));
        }
        Ok(())
    }

    /// `e_1, f_1, e_2, f_2` followed by the basis of `M`.
    pub fn basis(&self) -> Matrix<i64> {
        let mut all = vec![self.e1.clone(), self.f1.clone(), self.e2.clone(), self.f2.clone()];
        all.extend(self.m_basis.iter().cloned());
        all
    }

    pub fn n(&self) -> usize {
        self.lattice.rank() - 2
    }

    pub fn m_lattice(&self) -> Result<GramLattice> {
        GramLattice::new(self.lattice.restrict(&self.m_basis))
    }

    fn embed_m(&self, coords: &[i64]) -> Vec<i64> {
        combine(&self.m_basis, coords, self.lattice.rank())
    }
}

fn combine(basis: &[Vec<i64>], coords: &[i64], dim: usize) -> Vec<i64> {
    let mut out = vec![0i64; dim];
    for (c, b) in coords.iter().zip(basis) {
        if *c != 0 {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
    }
    out
}

fn add(u: &[i64], v: &[i64], c: i64) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| a + c * b).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "mu-reduction")]
    MuReduction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericCurveCertificate {
    /// Basis of `K` in the coordinates of `L`.
    pub k_basis: Matrix<i64>,
    pub pool_member: PoolMember,
    /// The `(-2)`-vector `l'` of condition (ii).
    pub witness_root: Vec<i64>,
    pub case_tag: CaseTag,
    pub target: HeegnerLabel,
    pub n: usize,
    /// The `2U` splitting the construction used, when it differs from the input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resplit: Option<Matrix<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub condition_i: bool,
    pub condition_ii: bool,
    pub gram_matches: bool,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.condition_i && self.condition_ii && self.gram_matches
    }
}

impl GenericCurveCertificate {
    /// Re-runs both genericity conditions and compares the Gram matrix of the
    /// `K` basis with the pool member entrywise.
    pub fn verify(&self, lattice: &GramLattice) -> Result<CertificateCheck> {
        Ok(CertificateCheck {
            condition_i: check_condition_i(&self.k_basis, lattice)?,
            condition_ii: check_condition_ii(self, lattice)?,
            gram_matches: lattice.restrict(&self.k_basis) == *self.pool_member.gram.gram(),
        })
    }
}

/// Condition (i): no `(-2)`-vector of `L` is orthogonal to `K`, decided by the
/// root-freeness of the negative definite `K^⊥`.
pub fn check_condition_i(k_basis: &[Vec<i64>], lattice: &GramLattice) -> Result<bool> {
    let gk = lattice.restrict(k_basis);
    if k_basis.is_empty() || linalg::determinant(&linalg::to_big(&gk)).is_zero() {
        return Err(Error::DegenerateLattice);
    }
    let perp = orth_complement(k_basis, lattice)?;
    if perp.rank() == 0 {
        return Ok(true);
    }
    if perp.degenerate {
        return Err(Error::DegenerateLattice);
    }
    let (p, _) = crate::lattice::signature_of(&perp.gram)?;
    if p == 0 {
        return Ok(!has_root(&perp.gram)?);
    }
    // K is not of signature (2,1): a root in a small box still refutes (i),
    // but its absence proves nothing
    if small_box_root(&perp.gram) {
        Ok(false)
    } else {
        Err(Error::NotNegativeDefinite)
    }
}

fn small_box_root(gram: &[Vec<i64>]) -> bool {
    let k = gram.len();
    let r: i64 = if k <= 8 { 2 } else { 1 };
    let mut x = vec![-r; k];
    loop {
        if crate::lattice::pair_with(gram, &x, &x) == -2 {
            return true;
        }
        let mut i = 0;
        while i < k && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == k {
            return false;
        }
        x[i] += 1;
    }
}

/// Condition (ii): the witness is a `(-2)`-vector in the target component whose
/// projection to `K ⊗ Q` has negative norm.
pub fn check_condition_ii(cert: &GenericCurveCertificate, lattice: &GramLattice) -> Result<bool> {
    let l = &cert.witness_root;
    if l.is_empty() {
        return Err(Error::MissingWitness);
    }
    lattice.check_vector(l)?;
    if lattice.norm(l) != -2 || linalg::gcd_all(l) != 1 {
        return Ok(false);
    }
    let in_component = match &cert.target {
        HeegnerLabel::H0 => divisibility(l, lattice)? == 1,
        HeegnerLabel::Mu { mu } => {
            let disc = discriminant_form(lattice)?;
            divisibility(l, lattice)? == 2 && disc.class_of(l, 2)? == disc.module.reduce(mu)
        }
        HeegnerLabel::General { .. } => false,
    };
    let projection = project_to(l, &cert.k_basis, lattice)?;
    Ok(in_component && projection.norm.is_negative())
}

/// Builds a sublattice `K ⊂ L` isometric to a pool member and satisfying both
/// genericity conditions for the given component of the `(-2)`-Heegner divisor.
pub fn construct_generic_k(split: &SplitLattice, target: &HeegnerLabel, caps: &PoolCaps) -> Result<GenericCurveCertificate> {
    let lattice = &split.lattice;
    let (p, q) = lattice.signature();
    if p != 2 || q < 3 {
        return Err(Error::WrongSignature { p, q, min_n: 3 });
    }
    match target {
        HeegnerLabel::H0 => construct_h0(split, caps),
        HeegnerLabel::Mu { mu } => {
            let disc = discriminant_form(lattice)?;
            let label = HeegnerLabel::mu(&disc.module, mu.clone())?;
            construct_mu(split, &disc, label, caps)
        }
        HeegnerLabel::General { .. } => {
            Err(Error::InvalidVector("curve targets are H_0 or H_mu components of the (-2)-Heegner divisor".into()))
        }
    }
}

fn construct_h0(split: &SplitLattice, caps: &PoolCaps) -> Result<GenericCurveCertificate> {
    let lattice = &split.lattice;
    let m_lat = split.m_lattice()?;
    let m_roots: Vec<Vec<i64>> = if m_lat.rank() == 0 { Vec::new() } else { roots(&m_lat)? };
    let ambient: Vec<Vec<i64>> = m_roots.iter().map(|r| split.embed_m(r)).collect();
    if let Some(l) = ambient.iter().find(|l| divisibility(l, lattice).ok() == Some(1)) {
        return case_a(split, l.clone(), HeegnerLabel::H0, CaseTag::A, None, caps);
    }
    // every root of M has divisibility 2 and splits off an A_1 summand
    for (i, r) in ambient.iter().enumerate() {
        for s in &ambient[i + 1..] {
            if lattice.pair(r, s) != 0 {
                return Err(Error::BadSplit("divisibility-2 roots of M are not mutually orthogonal".into()));
            }
        }
    }
    let k = ambient.len();
    if k > 0 {
        let m_prime = orth_complement(&m_roots, &m_lat)?;
        let det_m = linalg::determinant(&linalg::to_big(m_lat.gram())).abs();
        let det_mp = if m_prime.rank() == 0 { BigInt::from(1) } else { linalg::determinant(&linalg::to_big(&m_prime.gram)).abs() };
        if det_m != det_mp * BigInt::from(2).pow(k as u32) || (m_prime.rank() > 0 && has_root(&m_prime.gram)?) {
            return Err(Error::BadSplit("M does not decompose as kA_1 ⊕ M' with M' root-free".into()));
        }
    }
    let point = min_chamber_norm(k, caps)?;
    let mut m = add(&vec![0; lattice.rank()], &split.e2, point.x);
    m = add(&m, &split.f2, point.y);
    for (z, r) in point.z.iter().zip(&ambient) {
        m = add(&m, r, *z);
    }
    let witness = add(&split.e1, &split.f1, -1);
    Ok(GenericCurveCertificate {
        k_basis: vec![split.e1.clone(), split.f1.clone(), m],
        pool_member: PoolMember::hyperbolic(point.norm)?,
        witness_root: witness,
        case_tag: CaseTag::B,
        target: HeegnerLabel::H0,
        n: split.n(),
        resplit: None,
    })
}

/// `K = Z(e_1+2f_1) ⊕ Z(e_2+2f_2) ⊕ Zm` with `m` a regular vector of `R(M)` of
/// maximal norm; `l` is a root of `M` in the target component.
fn case_a(
    split: &SplitLattice,
    l: Vec<i64>,
    target: HeegnerLabel,
    tag: CaseTag,
    resplit: Option<Matrix<i64>>,
    caps: &PoolCaps,
) -> Result<GenericCurveCertificate> {
    let m_lat = split.m_lattice()?;
    let reg = max_nonorthogonal_norm(&m_lat, caps.chamber_norm)?;
    let m = split.embed_m(&reg.vector);
    debug_assert_ne!(split.lattice.pair(&l, &m), 0);
    Ok(GenericCurveCertificate {
        k_basis: vec![add(&split.e1, &split.f1, 2), add(&split.e2, &split.f2, 2), m],
        pool_member: PoolMember::prime_four(-reg.norm)?,
        witness_root: l,
        case_tag: tag,
        target,
        n: split.n(),
        resplit,
    })
}

fn construct_mu(split: &SplitLattice, disc: &DiscriminantForm, target: HeegnerLabel, caps: &PoolCaps) -> Result<GenericCurveCertificate> {
    let HeegnerLabel::Mu { mu } = &target else { unreachable!() };
    let lattice = &split.lattice;
    let m_lat = split.m_lattice()?;
    if m_lat.rank() > 0 && m_lat.is_negative_definite() {
        for r in roots(&m_lat)? {
            let l = split.embed_m(&r);
            if divisibility(&l, lattice)? == 2 && disc.class_of(&l, 2)? == *mu {
                return case_a(split, l, target, CaseTag::MuReduction, None, caps);
            }
        }
    }
    // no root of M represents μ: build one through U_1 and move a new U into
    // its orthogonal complement
    let lambda = m_part(split, &disc.lift(mu));
    let c = lattice.pair_rational(&lambda, &lambda);
    let b = (BigRational::from_integer(BigInt::from(-1)) - BigRational::from_integer(BigInt::from(2)) * &c)
        / BigRational::from_integer(BigInt::from(4));
    let b = b.to_integer().to_i64().filter(|_| b.is_integer()).ok_or(Error::NotInPi)?;
    let two_lambda = integral_vec(&lambda.iter().map(|x| x * BigRational::from_integer(BigInt::from(2))).collect::<Vec<_>>())
        .ok_or(Error::NotInPi)?;
    let mut l = add(&two_lambda, &split.e1, 2);
    l = add(&l, &split.f1, 2 * b);
    debug_assert_eq!(lattice.norm(&l), -2);
    let u1 = find_plane(split, &l, &lambda, b, caps)?;
    let m_new = orth_complement(&[u1.0.clone(), u1.1.clone(), split.e2.clone(), split.f2.clone()], lattice)?;
    let new_split = SplitLattice::new(lattice.clone(), u1.0, u1.1, split.e2.clone(), split.f2.clone(), m_new.basis)?;
    let resplit = Some(new_split.basis());
    case_a(&new_split, l, target, CaseTag::MuReduction, resplit, caps)
}

/// The component in `M ⊗ Q` of a vector of `L ⊗ Q`, obtained by subtracting its
/// `2U` part (integral for dual vectors since `2U` is unimodular).
fn m_part(split: &SplitLattice, v: &[BigRational]) -> Vec<BigRational> {
    let l = &split.lattice;
    let mut out = v.to_vec();
    for (u, w) in [(&split.e1, &split.f1), (&split.f1, &split.e1), (&split.e2, &split.f2), (&split.f2, &split.e2)] {
        // coefficient of u is the pairing with its dual partner w
        let coeff = l.pair_rational(v, &rational_vec(w));
        for (o, x) in out.iter_mut().zip(u) {
            *o -= &coeff * BigRational::from_integer(BigInt::from(*x));
        }
    }
    out
}

fn integral_vec(v: &[BigRational]) -> Option<Vec<i64>> {
    crate::lattice::integral(v)
}

/// A hyperbolic pair `(v, f)` inside `N = l^⊥ ∩ (U_2)^⊥`. Isotropic vectors
/// are sought as `v = α e_1 + s f_1 + y` with `y ∈ M`; `(v,l) = 0` and
/// `(v,v) = 0` force `u = y - αλ` to have norm `-α²/2`, so `u` runs over
/// vectors of that norm in the coset `αλ + M` of `M + Zλ`.
fn find_plane(split: &SplitLattice, l: &[i64], lambda: &[BigRational], b: i64, caps: &PoolCaps) -> Result<(Vec<i64>, Vec<i64>)> {
    let lattice = &split.lattice;
    let dim = lattice.rank();
    let n_sub = orth_complement(&[l.to_vec(), split.e2.clone(), split.f2.clone()], lattice)?;
    // M + Zλ, scaled by 2 to stay integral
    let m_gram = lattice.restrict(&split.m_basis);
    let lam_m = m_coords(split, lambda)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let lam2: Vec<i64> = integral_vec(&lam_m.iter().map(|x| x * &two).collect::<Vec<_>>()).ok_or(Error::NotInPi)?;
    let k = m_gram.len();
    let mut rows: Matrix<i64> = (0..k).map(|i| (0..k).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
    rows.push(lam2.clone());
    let hb = linalg::to_i64(&linalg::hermite(&linalg::to_big(&rows)).basis()).ok_or(Error::Overflow("resplit"))?;
    // Gram of the half-basis hb/2, times 4
    let g4 = crate::lattice::restrict_gram(&m_gram, &hb);
    let form = DefiniteForm::new(&g4)?;
    let mut tried = 0usize;
    for alpha in 1..=caps.resplit_alpha {
        let target = -2 * alpha * alpha;
        let mut hit = None;
        let _ = form.for_each(target.abs(), |c, norm| {
            if norm != target {
                return std::ops::ControlFlow::Continue(());
            }
            tried += 1;
            // u in M coordinates, doubled
            let u2 = combine(&hb, c, k);
            for sign in [1i64, -1] {
                // y = u + αλ, so 2y = 2u + α·2λ
                let y2: Vec<i64> = u2.iter().zip(&lam2).map(|(u, w)| sign * u + alpha * w).collect();
                if y2.iter().any(|x| x % 2 != 0) {
                    continue;
                }
                let y: Vec<i64> = y2.iter().map(|x| x / 2).collect();
                let y_amb = split.embed_m(&y);
                let y_lam = lattice.pair_rational(&rational_vec(&y_amb), lambda);
                if !y_lam.is_integer() {
                    continue;
                }
                let s = -b * alpha - y_lam.to_integer().to_i64().expect("small pairing");
                let mut v = add(&y_amb, &split.e1, alpha);
                v = add(&v, &split.f1, s);
                if lattice.norm(&v) != 0 || lattice.pair(&v, l) != 0 || linalg::gcd_all(&v) != 1 {
                    continue;
                }
                if let Some(pair) = complete_to_u(&v, &n_sub, lattice, dim) {
                    hit = Some(pair);
                    return std::ops::ControlFlow::Break(());
                }
            }
            std::ops::ControlFlow::Continue(())
        });
        if let Some(pair) = hit {
            return Ok(pair);
        }
    }
    Err(Error::CapExceeded(format!(
        "no hyperbolic plane found in l^⊥ with multiples α <= {} ({tried} isotropic candidates tried)",
        caps.resplit_alpha
    )))
}

/// Coordinates in the `M` basis of a rational vector of `M ⊗ Q`.
fn m_coords(split: &SplitLattice, v: &[BigRational]) -> Result<Vec<BigRational>> {
    let l = &split.lattice;
    let g = linalg::rationals(&l.restrict(&split.m_basis));
    let rhs: Vec<BigRational> = split.m_basis.iter().map(|m| l.pair_rational(&rational_vec(m), v)).collect();
    linalg::solve_rational(&g, &rhs).ok_or(Error::DegenerateLattice)
}

/// Given a primitive isotropic `v ∈ N` with `(v, N) = Z`, returns `(v, f)` with
/// `(v, f) = 1` and `(f, f) = 0`.
fn complete_to_u(v: &[i64], n_sub: &Sublattice, lattice: &GramLattice, dim: usize) -> Option<(Vec<i64>, Vec<i64>)> {
    let pairings: Vec<i64> = n_sub.basis.iter().map(|w| lattice.pair(v, w)).collect();
    let coeffs = bezout(&pairings)?;
    let w = combine(&n_sub.basis, &coeffs, dim);
    debug_assert_eq!(lattice.pair(v, &w), 1);
    let half = lattice.norm(&w) / 2;
    let f = add(&w, v, -half);
    (lattice.norm(&f) == 0 && lattice.pair(v, &f) == 1).then(|| (v.to_vec(), f))
}

/// Integers `c` with `Σ c_i a_i = 1`, when `gcd(a) = 1`.
fn bezout(a: &[i64]) -> Option<Vec<i64>> {
    let mut coeffs = vec![0i64; a.len()];
    let mut g = 0i64;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if g == 0 {
            g = x;
            coeffs[i] = 1;
            continue;
        }
        let e = g.extended_gcd(&x);
        for c in coeffs.iter_mut().take(i) {
            *c *= e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    if g.abs() != 1 {
        return None;
    }
    if g < 0 {
        coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::parse_lattice;

    fn split(expr: &str) -> SplitLattice {
        SplitLattice::standard(parse_lattice(expr).unwrap()).unwrap()
    }

    fn check(cert: &GenericCurveCertificate, l: &GramLattice) {
        let c = cert.verify(l).unwrap();
        assert!(c.passed(), "{c:?} {cert:?}");
    }

    #[test]
    fn bezout_combination() {
        let c = bezout(&[6, 10, 15]).unwrap();
        assert_eq!(c[0] * 6 + c[1] * 10 + c[2] * 15, 1);
        assert!(bezout(&[4, 6]).is_none());
        assert_eq!(bezout(&[0, -1]).unwrap(), vec![0, -1]);
    }

    #[test]
    fn e8_case_a() {
        let s = split("2U+E8");
        let cert = construct_generic_k(&s, &HeegnerLabel::H0, &PoolCaps::default()).unwrap();
        assert_eq!(cert.case_tag, CaseTag::A);
        assert_eq!(cert.pool_member.parameter, 620);
        check(&cert, &s.lattice);
    }

    #[test]
    fn root_free_case_b() {
        let s = split("2U+<-4>+<-4>");
        let cert = construct_generic_k(&s, &HeegnerLabel::H0, &PoolCaps::default()).unwrap();
        assert_eq!(cert.case_tag, CaseTag::B);
        assert_eq!(cert.pool_member.label(), "U+<4>");
        assert_eq!(cert.witness_root, vec![1, -1, 0, 0, 0, 0]);
        check(&cert, &s.lattice);
    }

    #[test]
    fn a1_case_b_and_mu() {
        let s = split("2U+2A1");
        let caps = PoolCaps::default();
        let cert = construct_generic_k(&s, &HeegnerLabel::H0, &caps).unwrap();
        assert_eq!(cert.case_tag, CaseTag::B);
        check(&cert, &s.lattice);
        let disc = discriminant_form(&s.lattice).unwrap();
        for mu in disc.module.pi_l() {
            let cert = construct_generic_k(&s, &HeegnerLabel::Mu { mu }, &caps).unwrap();
            check(&cert, &s.lattice);
        }
    }

    #[test]
    fn resplit_when_no_root_in_m() {
        let s = split("2U+E8+<-10>");
        let disc = discriminant_form(&s.lattice).unwrap();
        let pi = disc.module.pi_l();
        assert_eq!(pi.len(), 1);
        let cert = construct_generic_k(&s, &HeegnerLabel::Mu { mu: pi[0].clone() }, &PoolCaps::default()).unwrap();
        assert_eq!(cert.case_tag, CaseTag::MuReduction);
        assert!(cert.resplit.is_some());
        check(&cert, &s.lattice);
    }

    #[test]
    fn condition_i_fails_for_bad_k() {
        // K = U_1 + Z r_1 in 2U + 2A1: the other A_1 root is orthogonal to K
        let l = parse_lattice("2U+2A1").unwrap();
        let k = vec![vec![1, 0, 0, 0, 0, 0], vec![0, 1, 0, 0, 0, 0], vec![0, 0, 0, 0, 1, 0]];
        assert!(!check_condition_i(&k, &l).unwrap());
        assert!(check_condition_i(&[vec![1, 0, 0, 0, 0, 0], vec![1, 0, 0, 0, 0, 0]], &l).is_err());
    }

    #[test]
    fn fake_witness_fails() {
        let l = parse_lattice("2U+2A1").unwrap();
        let mut cert = GenericCurveCertificate {
            k_basis: vec![vec![1, 0, 0, 0, 0, 0], vec![0, 1, 0, 0, 0, 0], vec![0, 0, 0, 0, 1, 0]],
            pool_member: PoolMember::hyperbolic(2).unwrap(),
            witness_root: vec![0, 0, 0, 0, 0, 1],
            case_tag: CaseTag::B,
            target: HeegnerLabel::Mu { mu: vec![0, 1] },
            n: 4,
            resplit: None,
        };
        // the second A_1 root is perpendicular to K: zero projection
        assert!(!check_condition_ii(&cert, &l).unwrap());
        cert.witness_root = vec![1, -1, 0, 0, 0, 0];
        cert.target = HeegnerLabel::H0;
        assert!(check_condition_ii(&cert, &l).unwrap());
        cert.witness_root = vec![];
        assert_eq!(check_condition_ii(&cert, &l), Err(Error::MissingWitness));
    }

    #[test]
    fn bad_split_rejected() {
        let l = parse_lattice("U+<2>+<-2>+A1").unwrap();
        assert!(SplitLattice::standard(l).is_err());
    }
}
