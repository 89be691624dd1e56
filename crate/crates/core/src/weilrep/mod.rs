//! The Weil representation of `Mp2(Z)` on `C[A]`, generic over the real field.

mod obstruction;
mod reflective;

use nalgebra::{ComplexField, DMatrix, DVector, RealField};
use num_complex::Complex;
use serde::Serialize;

use crate::discform::{Element, FiniteQuadraticModule};
use crate::error::{Error, Result};

pub use obstruction::{borcherds_obstruction, s_image_column, ObstructionReport, ObstructionVerdict, TwoUEvidence};
pub use reflective::{classify_reflective_vector, principal_part, DivisorPattern, PrincipalPart, PrincipalTerm, ReflectiveKind};

/// Default tolerance for relation checks.
pub const DEFAULT_TOL: f64 = 1e-9;

fn cis<F: RealField + Copy>(turns: f64) -> Complex<F> {
    let theta: F = nalgebra::convert(std::f64::consts::TAU * turns);
    Complex::new(theta.cos(), theta.sin())
}

/// `ρ(T)` (diagonal) and `ρ(S)` on the basis `e_λ`, `λ` in the element order of
/// the module.
#[derive(Debug, Clone)]
pub struct WeilRep<F: RealField + Copy> {
    pub rho_t: DVector<Complex<F>>,
    pub rho_s: DMatrix<Complex<F>>,
    /// `(2 - n) mod 8`, the signature of `A` in the Milgram sense.
    pub signature_octant: u8,
    elements: Vec<Element>,
}

pub type WeilRep64 = WeilRep<f64>;
pub type WeilRep32 = WeilRep<f32>;

/// Unimodular factor of `ρ(S)` for a module of Milgram signature `σ`: `e(-σ/8)`.
pub fn s_factor<F: RealField + Copy>(sigma: u8) -> Complex<F> {
    cis(-(sigma as f64) / 8.0)
}

/// `σ ≡ 2 - n mod 8` for signature `(2, n)`.
pub fn octant_for(n: i64) -> u8 {
    (2 - n).rem_euclid(8) as u8
}

impl<F: RealField + Copy> WeilRep<F> {
    /// `ρ(T) e_λ = e(q(λ)/2) e_λ`, `ρ(S) e_λ = e(-σ/8) |A|^{-1/2} Σ_μ e(-b(λ, μ)) e_μ`.
    /// The metaplectic relations are checked on a few probe vectors; a module
    /// whose signature does not fit `n` fails with a convention error.
    pub fn build(a: &FiniteQuadraticModule, n: i64) -> Result<Self> {
        let w = Self::build_unchecked(a, n);
        let tol = DEFAULT_TOL * (w.dim() as f64).sqrt().max(1.0);
        w.check_relations_on_probes(tol)?;
        Ok(w)
    }

    pub fn build_unchecked(a: &FiniteQuadraticModule, n: i64) -> Self {
        let elements: Vec<Element> = a.elements().collect();
        let d = elements.len();
        let level = a.level() as f64;
        let sigma = octant_for(n);
        let gamma: Complex<F> = s_factor(sigma);
        let scale: F = nalgebra::convert(1.0 / (d as f64).sqrt());
        let rho_t = DVector::from_iterator(d, elements.iter().map(|x| cis(a.qn(x) as f64 / (2.0 * level))));
        let mut rho_s = DMatrix::from_element(d, d, Complex::new(F::zero(), F::zero()));
        for (j, lam) in elements.iter().enumerate() {
            for (i, mu) in elements.iter().enumerate() {
                let phase: Complex<F> = cis(-(a.bn_pair(lam, mu) as f64) / level);
                rho_s[(i, j)] = gamma * phase * Complex::new(scale, F::zero());
            }
        }
        WeilRep { rho_t, rho_s, signature_octant: sigma, elements }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    fn apply_t(&self, v: &DVector<Complex<F>>) -> DVector<Complex<F>> {
        v.component_mul(&self.rho_t)
    }

    fn apply_st(&self, v: &DVector<Complex<F>>) -> DVector<Complex<F>> {
        &self.rho_s * self.apply_t(v)
    }

    fn check_relations_on_probes(&self, tol: f64) -> Result<()> {
        let d = self.dim();
        let mut probes = vec![0usize, d - 1, d / 2];
        probes.dedup();
        for &p in &probes {
            let mut v = DVector::from_element(d, Complex::new(F::zero(), F::zero()));
            v[p] = Complex::new(F::one(), F::zero());
            let lhs = self.apply_st(&self.apply_st(&self.apply_st(&v)));
            let rhs = &self.rho_s * (&self.rho_s * &v);
            let defect = max_abs(&(lhs - rhs));
            if defect > tol {
                return Err(Error::ConventionInconsistency(format!(
                    "(ST)^3 != S^2 on e_{p}: deviation {defect:e} (signature octant {})",
                    self.signature_octant
                )));
            }
        }
        Ok(())
    }

    /// Full-matrix relation defects.
    pub fn relation_defects(&self) -> RelationDefects {
        let d = self.dim();
        let s = &self.rho_s;
        let t = DMatrix::from_diagonal(&self.rho_t);
        let st = s * &t;
        let st3 = &st * &st * &st;
        let s2 = s * s;
        let braid = max_abs_matrix(&(st3 - &s2));
        // S^2 e_λ = c e_{-λ} with a single unimodular c
        let c = s2[(self.index_of_neg(0), 0)];
        let mut s2_defect = (c.modulus() - F::one()).abs().to_subset().unwrap_or(f64::NAN);
        for j in 0..d {
            let target = self.index_of_neg(j);
            for i in 0..d {
                let expected = if i == target { c } else { Complex::new(F::zero(), F::zero()) };
                let dev: f64 = (s2[(i, j)] - expected).modulus().to_subset().unwrap_or(f64::NAN);
                s2_defect = s2_defect.max(dev);
            }
        }
        let s4 = &s2 * &s2;
        let mut s4_defect = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                let expected = if i == j { c * c } else { Complex::new(F::zero(), F::zero()) };
                let dev: f64 = (s4[(i, j)] - expected).modulus().to_subset().unwrap_or(f64::NAN);
                s4_defect = s4_defect.max(dev);
            }
        }
        let t_modulus = self
            .rho_t
            .iter()
            .map(|z| (z.modulus() - F::one()).abs().to_subset().unwrap_or(f64::NAN))
            .fold(0.0, f64::max);
        RelationDefects { braid, s_squared: s2_defect, s_fourth: s4_defect, t_modulus }
    }

    fn index_of_neg(&self, j: usize) -> usize {
        let x = &self.elements[j];
        let orders = self.orders();
        let neg: Vec<i64> = x.iter().zip(&orders).map(|(&a, &d)| (-a).rem_euclid(d)).collect();
        self.elements.iter().position(|y| *y == neg).expect("negation is an element")
    }

    fn orders(&self) -> Vec<i64> {
        // the last element in mixed-radix order has every coordinate d_i - 1
        self.elements.last().map(|x| x.iter().map(|c| c + 1).collect()).unwrap_or_default()
    }

    /// `ρ(S) e_0`.
    pub fn s_image_of_e0(&self) -> DVector<Complex<F>> {
        self.rho_s.column(0).into_owned()
    }

    /// Joint fixed space of `ρ(S)` and `ρ(T)`: kernel of the stacked system
    /// `(ρ(S) - I; ρ(T) - I)` decided at tolerance `tol`.
    pub fn invariant_vectors(&self, tol: f64) -> InvariantSpace<F> {
        let d = self.dim();
        let one = Complex::new(F::one(), F::zero());
        let mut stacked = DMatrix::from_element(2 * d, d, Complex::new(F::zero(), F::zero()));
        for j in 0..d {
            for i in 0..d {
                stacked[(i, j)] = self.rho_s[(i, j)] - if i == j { one } else { Complex::new(F::zero(), F::zero()) };
            }
            stacked[(d + j, j)] = self.rho_t[j] - one;
        }
        let svd = stacked.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let mut basis = Vec::new();
        let mut ill_conditioned = false;
        let mut singular_values = Vec::with_capacity(d);
        for (k, s) in svd.singular_values.iter().enumerate() {
            let s: f64 = s.to_subset().unwrap_or(f64::NAN);
            singular_values.push(s);
            if s > tol / 10.0 && s <= 10.0 * tol {
                ill_conditioned = true;
            }
            if s <= tol {
                basis.push(v_t.row(k).adjoint().into_owned());
            }
        }
        InvariantSpace { basis, ill_conditioned, singular_values }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RelationDefects {
    /// `‖(ST)^3 - S^2‖_max`.
    pub braid: f64,
    /// Deviation of `S^2` from `e_λ ↦ c e_{-λ}` with one unimodular `c`.
    pub s_squared: f64,
    /// Deviation of `S^4` from `c^2 I`.
    pub s_fourth: f64,
    /// Deviation of the `T` eigenvalues from modulus 1.
    pub t_modulus: f64,
}

impl RelationDefects {
    pub fn max(&self) -> f64 {
        self.braid.max(self.s_squared).max(self.s_fourth).max(self.t_modulus)
    }
}

#[derive(Debug, Clone)]
pub struct InvariantSpace<F: RealField + Copy> {
    pub basis: Vec<DVector<Complex<F>>>,
    /// Set when a singular value lies close to the rank cut.
    pub ill_conditioned: bool,
    pub singular_values: Vec<f64>,
}

impl<F: RealField + Copy> InvariantSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Distance from `v` to the span of the basis (the basis is orthonormal).
    pub fn distance(&self, v: &DVector<Complex<F>>) -> f64 {
        let mut r = v.clone();
        for b in &self.basis {
            let c = b.dotc(v);
            r -= b * c;
        }
        r.norm().to_subset().unwrap_or(f64::NAN)
    }
}

fn max_abs<F: RealField + Copy>(v: &DVector<Complex<F>>) -> f64 {
    v.iter().map(|z| z.modulus().to_subset().unwrap_or(f64::NAN)).fold(0.0, f64::max)
}

fn max_abs_matrix<F: RealField + Copy>(m: &DMatrix<Complex<F>>) -> f64 {
    m.iter().map(|z| z.modulus().to_subset().unwrap_or(f64::NAN)).fold(0.0, f64::max)
}

/// Builds the representation for a module and the negative rank `n`, in double precision.
pub fn build_weilrep(a: &FiniteQuadraticModule, n: i64) -> Result<WeilRep64> {
    WeilRep64::build(a, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::discriminant_form;
    use crate::lattice::named::parse_lattice;
    use num_rational::Rational64;

    fn module(expr: &str) -> FiniteQuadraticModule {
        discriminant_form(&parse_lattice(expr).unwrap()).unwrap().module
    }

    #[test]
    fn trivial_module() {
        let w = build_weilrep(&FiniteQuadraticModule::trivial(), 10).unwrap();
        assert_eq!(w.dim(), 1);
        assert!((w.rho_s[(0, 0)] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        assert!((w.rho_t[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        let inv = w.invariant_vectors(1e-9);
        assert_eq!(inv.dim(), 1);
    }

    #[test]
    fn z2_relations() {
        let a = FiniteQuadraticModule::new(vec![2], vec![Rational64::new(-1, 2)], vec![vec![Rational64::new(1, 2)]]).unwrap();
        for n in [3, 11, 27] {
            let w = build_weilrep(&a, n).unwrap();
            assert!(w.relation_defects().max() < 1e-9);
            let e0 = DVector::from_vec(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
            assert!(w.invariant_vectors(1e-9).distance(&e0) > 0.1);
        }
        // Milgram forces n = 3 mod 8 for this form; any other n is a convention error
        for n in [2, 10, 26] {
            assert!(matches!(build_weilrep(&a, n), Err(Error::ConventionInconsistency(_))));
        }
    }

    #[test]
    fn opposite_signature_factor_breaks_relations() {
        // e((2 - n)/8) in place of e((n - 2)/8) fails whenever n is not 2 mod 4
        let a = module("A2");
        let mut w = WeilRep64::build_unchecked(&a, 4);
        let g: Complex<f64> = s_factor(octant_for(4));
        w.rho_s *= g.conj() * g.conj();
        assert!(w.relation_defects().braid > 0.1);
    }

    #[test]
    fn fixed_space_is_s_squared_stable() {
        let w = build_weilrep(&module("2U+D4"), 6).unwrap();
        let inv = w.invariant_vectors(1e-9);
        let s2 = &w.rho_s * &w.rho_s;
        for v in &inv.basis {
            assert!(inv.distance(&(&s2 * v)) < 1e-9);
        }
    }

    #[test]
    fn wrong_signature_is_reported() {
        // <-2> has signature octant 7; pretending n = 10 (octant 0) breaks the relations
        let a = module("<-2>");
        assert!(build_weilrep(&a, 3).is_ok());
        assert!(matches!(build_weilrep(&a, 10), Err(Error::ConventionInconsistency(_))));
        let a = module("A2");
        assert!(matches!(build_weilrep(&a, 11), Err(Error::ConventionInconsistency(_))));
    }

    #[test]
    fn relations_on_lattice_forms() {
        for (expr, n) in [("2U+2E8+D8", 26), ("2U+A2", 4), ("2U+D4+A1", 7), ("2U+<-6>", 3), ("2U+E7+<-4>", 10)] {
            let w = build_weilrep(&module(expr), n).unwrap();
            let d = w.relation_defects();
            assert!(d.max() < 1e-9, "{expr}: {d:?}");
            let m = 1.0 / (w.dim() as f64).sqrt();
            for z in w.s_image_of_e0().iter() {
                assert!((z.norm() - m).abs() < 1e-9);
            }
        }
    }
}
