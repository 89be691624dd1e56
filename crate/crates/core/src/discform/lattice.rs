//! Discriminant forms of concrete lattices, Heegner labels and overlattices.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Element, FiniteQuadraticModule};
use crate::error::{Error, Result};
use crate::lattice::{divisibility, rational_vec, restrict_gram, GramLattice};
use crate::linalg::{self, Matrix};

/// `A_L = L^∨/L` together with the data linking it back to `L`.
#[derive(Debug, Clone)]
pub struct DiscriminantForm {
    pub module: FiniteQuadraticModule,
    lattice: GramLattice,
    /// Generator lifts in `L^∨`, in lattice coordinates.
    lifts: Vec<Vec<BigRational>>,
    /// Row `i` maps `G x` to the `i`-th coordinate, to be reduced mod `d_i`.
    coord_rows: Matrix<BigInt>,
}

fn big_ratio(r: &BigRational) -> Rational64 {
    Rational64::new(r.numer().to_i64().expect("small numerator"), r.denom().to_i64().expect("small denominator"))
}

/// `x mod m` for a rational `x` and positive integer `m`, in `[0, m)`.
fn rational_mod(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let k = (x / &m).floor();
    x - k * m
}

pub fn discriminant_form(lattice: &GramLattice) -> Result<DiscriminantForm> {
    let gram = linalg::to_big(lattice.gram());
    let s = linalg::smith(&gram);
    let n = lattice.rank();
    let mut orders = Vec::new();
    let mut lifts = Vec::new();
    let mut coord_rows = Vec::new();
    for i in 0..n {
        let d = s.diagonal[i].clone();
        if d.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        if d.abs().is_one() {
            continue;
        }
        let dr = BigRational::from_integer(d.clone());
        lifts.push((0..n).map(|r| BigRational::from_integer(s.right[r][i].clone()) / &dr).collect::<Vec<_>>());
        coord_rows.push(s.left[i].clone());
        orders.push(d.abs().to_i64().ok_or(Error::Overflow("discriminant group order"))?);
    }
    let k = orders.len();
    let mut q = Vec::with_capacity(k);
    let mut b = vec![vec![Rational64::zero(); k]; k];
    for i in 0..k {
        q.push(big_ratio(&rational_mod(&lattice.pair_rational(&lifts[i], &lifts[i]), 2)));
        for j in 0..k {
            b[i][j] = big_ratio(&rational_mod(&lattice.pair_rational(&lifts[i], &lifts[j]), 1));
        }
    }
    let module = FiniteQuadraticModule::new(orders, q, b)?;
    Ok(DiscriminantForm { module, lattice: lattice.clone(), lifts, coord_rows })
}

impl DiscriminantForm {
    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    /// Class of a dual vector (lattice coordinates) in `A_L`.
    pub fn element_of_dual(&self, x: &[BigRational]) -> Result<Element> {
        self.lattice.check_vector_len(x.len())?;
        let n = self.lattice.rank();
        let gram = self.lattice.gram();
        let mut y = Vec::with_capacity(n);
        for row in gram.iter() {
            let mut acc = BigRational::zero();
            for (g, xi) in row.iter().zip(x) {
                if *g != 0 {
                    acc += xi * BigRational::from_integer(BigInt::from(*g));
                }
            }
            if !acc.is_integer() {
                return Err(Error::InvalidVector("vector is not in the dual lattice".into()));
            }
            y.push(acc.to_integer());
        }
        Ok(self
            .coord_rows
            .iter()
            .zip(self.module.orders())
            .map(|(row, &d)| {
                let c: BigInt = row.iter().zip(&y).map(|(a, b)| a * b).sum();
                let r = c.mod_floor_i64(d);
                r
            })
            .collect())
    }

    /// Class of `v / divisor` for an integral vector `v`.
    pub fn class_of(&self, v: &[i64], divisor: i64) -> Result<Element> {
        let d = BigRational::from_integer(BigInt::from(divisor));
        let x: Vec<BigRational> = rational_vec(v).into_iter().map(|c| c / &d).collect();
        self.element_of_dual(&x)
    }

    /// A lift of `x` to `L^∨`.
    pub fn lift(&self, x: &[i64]) -> Vec<BigRational> {
        let n = self.lattice.rank();
        let mut out = vec![BigRational::zero(); n];
        for (c, g) in x.iter().zip(&self.lifts) {
            if *c == 0 {
                continue;
            }
            let c = BigRational::from_integer(BigInt::from(*c));
            for (o, gi) in out.iter_mut().zip(g) {
                *o += &c * gi;
            }
        }
        out
    }

    pub fn generator_lifts(&self) -> &[Vec<BigRational>] {
        &self.lifts
    }
}

trait ModFloor {
    fn mod_floor_i64(&self, m: i64) -> i64;
}

impl ModFloor for BigInt {
    fn mod_floor_i64(&self, m: i64) -> i64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(m)).to_i64().expect("reduced value fits")
    }
}

impl GramLattice {
    pub(crate) fn check_vector_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: len });
        }
        Ok(())
    }
}

/// Component label of the `(-2)`-Heegner divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeegnerLabel {
    /// `H_0`, from roots of divisibility 1.
    H0,
    /// `H_μ` for `μ ∈ π_L`.
    Mu { mu: Element },
    /// General discriminant `(λ, m)` with `m ≡ q(λ)/2 mod 1`.
    General { lambda: Element, m: String },
}

impl HeegnerLabel {
    pub fn general(module: &FiniteQuadraticModule, lambda: Element, m: Rational64) -> Result<Self> {
        let diff = m - module.q(&lambda) / 2;
        if !diff.is_integer() {
            return Err(Error::InconsistentForm(format!("m = {m} is not congruent to q(λ)/2 mod 1")));
        }
        Ok(HeegnerLabel::General { lambda, m: m.to_string() })
    }

    pub fn mu(module: &FiniteQuadraticModule, mu: Element) -> Result<Self> {
        if !module.pi_l().contains(&module.reduce(&mu)) {
            return Err(Error::NotInPi);
        }
        Ok(HeegnerLabel::Mu { mu: module.reduce(&mu) })
    }
}

/// Which component of `H` the root `l` belongs to.
pub fn heegner_component(l: &[i64], disc: &DiscriminantForm) -> Result<HeegnerLabel> {
    let lat = disc.lattice();
    if lat.norm(l) != -2 {
        return Err(Error::InvalidVector("Heegner components are defined for (-2)-vectors".into()));
    }
    match divisibility(l, lat)? {
        1 => Ok(HeegnerLabel::H0),
        2 => {
            let mu = disc.class_of(l, 2)?;
            debug_assert!(disc.module.pi_l().contains(&mu));
            Ok(HeegnerLabel::Mu { mu })
        }
        d => unreachable!("a (-2)-vector has divisibility 1 or 2, got {d}"),
    }
}

/// An overlattice `L' ⊇ L` with its basis in the rational coordinates of `L`.
#[derive(Debug, Clone)]
pub struct Overlattice {
    pub lattice: GramLattice,
    /// Rows: basis of `L'` in `L ⊗ Q` coordinates.
    pub basis: Matrix<BigRational>,
    pub index: i64,
}

impl Overlattice {
    /// Coordinates of the basis of `L` in the basis of `L'`.
    pub fn sublattice_coords(&self) -> Matrix<i64> {
        let inv = linalg::inverse_rational(&self.basis).expect("overlattice basis is invertible");
        inv.iter()
            .map(|r| r.iter().map(|x| x.to_integer().to_i64().expect("integral coordinates")).collect())
            .collect()
    }
}

/// The even overlattice corresponding to the isotropic subgroup generated by `gens`.
pub fn overlattice(disc: &DiscriminantForm, gens: &[Element]) -> Result<Overlattice> {
    let a = &disc.module;
    for (i, g) in gens.iter().enumerate() {
        if !a.is_isotropic(g) {
            return Err(Error::ResultNotEven);
        }
        for h in &gens[..i] {
            if a.bn_pair(g, h) != 0 {
                return Err(Error::ResultNotEven);
            }
        }
    }
    let lat = disc.lattice();
    let n = lat.rank();
    let lifts: Vec<Vec<BigRational>> = gens.iter().map(|g| disc.lift(g)).collect();
    let denom = lifts.iter().flatten().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let dr = BigRational::from_integer(denom.clone());
    let mut rows: Matrix<BigInt> = linalg::identity::<BigInt>(n).into_iter().map(|r| r.into_iter().map(|x| x * &denom).collect()).collect();
    for l in &lifts {
        rows.push(l.iter().map(|x| (x * &dr).to_integer()).collect());
    }
    let h = linalg::hermite(&rows).basis();
    let basis: Matrix<BigRational> = h.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone()) / &dr).collect()).collect();
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = lat.pair_rational(&basis[i], &basis[j]);
            if !v.is_integer() {
                return Err(Error::ResultNotEven);
            }
            gram[i][j] = v.to_integer().to_i64().ok_or(Error::Overflow("overlattice gram"))?;
        }
    }
    let det_basis = linalg::determinant(&h);
    let index = (num_traits::pow(denom, n) / det_basis.abs()).to_i64().ok_or(Error::Overflow("overlattice index"))?;
    let lattice = GramLattice::new(gram).map_err(|e| match e {
        Error::NotEven { .. } => Error::ResultNotEven,
        other => other,
    })?;
    Ok(Overlattice { lattice, basis, index })
}

#[derive(Debug, Clone)]
pub struct MaximalOverlattice {
    pub lattice: GramLattice,
    /// Rows: basis of `L'` in `L ⊗ Q` coordinates.
    pub basis: Matrix<BigRational>,
    pub index: i64,
    /// Orders of the isotropic elements used at each step.
    pub steps: Vec<i64>,
    pub module: FiniteQuadraticModule,
}

impl MaximalOverlattice {
    pub fn sublattice_coords(&self) -> Matrix<i64> {
        Overlattice { lattice: self.lattice.clone(), basis: self.basis.clone(), index: self.index }.sublattice_coords()
    }
}

/// First isotropic element of prime order, if any.
pub(crate) fn isotropic_prime_element(a: &FiniteQuadraticModule) -> Option<Element> {
    a.primes().into_iter().find_map(|p| a.p_torsion(p).into_iter().find(|x| a.is_isotropic(x)))
}

/// Greedy chain of prime-order isotropic extensions ending at an anisotropic form.
pub fn maximal_even_overlattice(lattice: &GramLattice) -> Result<MaximalOverlattice> {
    let n = lattice.rank();
    let mut current = lattice.clone();
    let mut basis: Matrix<BigRational> = linalg::rationals(&linalg::identity::<i64>(n));
    let mut index = 1i64;
    let mut steps = Vec::new();
    loop {
        let disc = discriminant_form(&current)?;
        let Some(x) = isotropic_prime_element(&disc.module) else {
            return Ok(MaximalOverlattice { lattice: current, basis, index, steps, module: disc.module });
        };
        let over = overlattice(&disc, &[x.clone()])?;
        steps.push(disc.module.element_order(&x));
        index *= over.index;
        basis = linalg::mat_mul_rational(&over.basis, &basis);
        current = over.lattice;
    }
}

/// `L ⊆ L'' ⊆ L'` with `L'/L''` cyclic of order `e(L'/L)`.
#[derive(Debug, Clone)]
pub struct Intermediate {
    pub lattice: GramLattice,
    /// Rows: basis of `L''` in the coordinates of `L'`.
    pub basis: Matrix<i64>,
    /// Order of the cyclic quotient `L'/L''`.
    pub quotient_order: i64,
}

/// `sub` lists the basis of `L` in coordinates of `L'`.
pub fn cyclic_intermediate(sub: &[Vec<i64>], lprime: &GramLattice) -> Result<Intermediate> {
    let n = lprime.rank();
    if sub.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: sub.len() });
    }
    let s = linalg::smith(&linalg::to_big(sub));
    if s.diagonal.iter().any(|d| d.is_zero()) {
        return Err(Error::DependentVectors);
    }
    let q_inv = linalg::inverse_rational(&linalg::rationals(&linalg::to_i64(&s.right).ok_or(Error::Overflow("smith transform"))?))
        .ok_or(Error::DegenerateLattice)?;
    let f: Matrix<i64> = q_inv
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer().to_i64().expect("unimodular inverse")).collect())
        .collect();
    let diag: Vec<i64> = s.diagonal.iter().map(|d| d.abs().to_i64().expect("small invariant factor")).collect();
    let j = (0..n).max_by_key(|&i| (diag[i], i)).expect("nonzero rank");
    let quotient_order = diag[j];
    let basis: Matrix<i64> = if quotient_order == 1 {
        linalg::identity(n)
    } else {
        f.iter().enumerate().map(|(i, r)| if i == j { r.iter().map(|x| x * quotient_order).collect() } else { r.clone() }).collect()
    };
    let gram = restrict_gram(lprime.gram(), &basis);
    Ok(Intermediate { lattice: GramLattice::new(gram)?, basis, quotient_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::parse_lattice;
    use crate::lattice::roots;

    fn disc(expr: &str) -> DiscriminantForm {
        discriminant_form(&parse_lattice(expr).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(disc("2U+3E8").module.order(), 1);
        let a = disc("<-2>").module;
        assert_eq!(a.orders(), &[2]);
        assert_eq!(a.q(&[1]), Rational64::new(3, 2));
        for k in [1i64, 2, 3, 5] {
            let a = disc(&format!("2U+<{}>", -2 * k)).module;
            assert_eq!(a.elementary_divisors(), if k == 1 { vec![2] } else { vec![2 * k] });
            let gens: Vec<Rational64> = a.elements().filter(|x| a.element_order(x) == 2 * k).map(|x| a.q(&x)).collect();
            let target = (Rational64::new(-1, 2 * k) + Rational64::from_integer(2)) % Rational64::from_integer(2);
            assert!(gens.contains(&target), "k = {k}");
        }
    }

    #[test]
    fn order_equals_determinant() {
        for e in ["A1", "A2", "D4", "E6", "E7", "2U+8A1", "U+<4>", "2U+D4+<-6>", "U(2)+A3"] {
            let l = parse_lattice(e).unwrap();
            let a = discriminant_form(&l).unwrap().module;
            assert_eq!(BigInt::from(a.order()), l.determinant().abs(), "{e}");
        }
    }

    #[test]
    fn pi_examples() {
        assert!(disc("2U+E8").module.pi_l().is_empty());
        assert_eq!(disc("2U+A1").module.pi_l().len(), 1);
        assert!(disc("2U+<-4>").module.pi_l().is_empty());
    }

    #[test]
    fn heegner_examples() {
        let d = disc("2U+E8+A1");
        let l = d.lattice().clone();
        let mut v = vec![0; 13];
        v[0] = 1;
        v[1] = -1;
        assert_eq!(heegner_component(&v, &d), Ok(HeegnerLabel::H0));
        let mut r = vec![0; 13];
        r[12] = 1;
        assert!(matches!(heegner_component(&r, &d), Ok(HeegnerLabel::Mu { .. })));
        let mut e = vec![0; 13];
        e[4] = 1;
        assert_eq!(heegner_component(&e, &d), Ok(HeegnerLabel::H0));
        assert_eq!(l.rank(), 13);
    }

    #[test]
    fn every_root_gets_one_label() {
        let d = disc("D4+A1+A2");
        for r in roots(d.lattice()).unwrap() {
            let lbl = heegner_component(&r, &d).unwrap();
            if let HeegnerLabel::Mu { mu } = lbl {
                assert!(d.module.pi_l().contains(&mu));
            }
        }
    }

    #[test]
    fn dual_coordinates_round_trip() {
        let d = disc("2U+D4+A2+<-6>");
        for x in d.module.elements() {
            assert_eq!(d.element_of_dual(&d.lift(&x)).unwrap(), x);
        }
    }

    #[test]
    fn overlattice_of_d4_pair() {
        // D4 + D4 has (Z/2)^4 with isotropic elements; the maximal chain terminates anisotropic
        let l = parse_lattice("2U+D4+D4").unwrap();
        let m = maximal_even_overlattice(&l).unwrap();
        assert!(isotropic_prime_element(&m.module).is_none());
        assert_eq!(BigInt::from(m.module.order() * m.index * m.index), l.determinant().abs());
        for p in m.module.primes() {
            assert!(m.module.length_p(p) <= 3);
        }
    }

    #[test]
    fn overlattice_index_and_evenness() {
        let l = parse_lattice("2U+4A1").unwrap();
        let d = discriminant_form(&l).unwrap();
        let x: Element = d.module.elements().find(|x| !d.module.is_zero(x) && d.module.is_isotropic(x)).unwrap();
        let o = overlattice(&d, &[x]).unwrap();
        assert_eq!(o.index, 2);
        assert_eq!(o.lattice.determinant().abs() * 4, l.determinant().abs());
        let back = o.sublattice_coords();
        assert_eq!(crate::lattice::restrict_gram(o.lattice.gram(), &back), l.gram().clone());
        let bad: Element = d.module.elements().find(|x| !d.module.is_isotropic(x)).unwrap();
        assert_eq!(overlattice(&d, &[bad]).unwrap_err(), Error::ResultNotEven);
    }

    #[test]
    fn cyclic_intermediate_examples() {
        let lp = parse_lattice("2U+D4").unwrap();
        let id = linalg::identity::<i64>(8);
        let same = cyclic_intermediate(&id, &lp).unwrap();
        assert_eq!(same.quotient_order, 1);
        // sublattice with quotient Z/2 x Z/2
        let mut sub = id.clone();
        sub[0][0] = 2;
        sub[2][2] = 2;
        let mid = cyclic_intermediate(&sub, &lp).unwrap();
        assert_eq!(mid.quotient_order, 2);
        assert_eq!(mid.lattice.determinant().abs(), lp.determinant().abs() * 4);
        // cyclic quotient: L'' = L
        let mut sub = id.clone();
        sub[0][0] = 6;
        let mid = cyclic_intermediate(&sub, &lp).unwrap();
        assert_eq!(mid.quotient_order, 6);
        assert_eq!(mid.lattice.determinant().abs(), lp.determinant().abs() * 36);
    }
}
