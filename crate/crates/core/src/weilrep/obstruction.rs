//! The weight and invariance obstruction for `n ≥ 26`.

use nalgebra::DVector;
use num_complex::Complex;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{octant_for, s_factor, WeilRep64, DEFAULT_TOL};
use crate::discform::{discriminant_form, splits_2u_by_length, FiniteQuadraticModule};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;

/// Largest `|A|` for which the full representation is built to confirm the
/// convention before reading off the `S`-image of `e_0`.
const FULL_CHECK_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObstructionVerdict {
    ExcludedWeight,
    ExcludedInvariance,
    NotExcluded,
    Inconclusive,
}

/// How the caller knows that `L` contains `2U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoUEvidence {
    /// An explicit splitting `L = U ⊕ U ⊕ M` is known.
    ExplicitSplit,
    /// The length condition `l_2 ≤ n - 3`, `l_p ≤ n - 4` holds (re-checked here).
    LengthCondition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub verdict: ObstructionVerdict,
    pub reason: String,
    /// `ρ(S) e_0` as `[re, im]` pairs, for invariance exclusions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[f64; 2]>>,
    pub weight_13_minus_n_over_2: String,
    pub n: i64,
    pub discriminant_order: i64,
}

/// `ρ(S) e_0 = e(-σ/8) |A|^{-1/2} Σ_λ e_λ`, computed from the formula for `ρ(S)`
/// without building the full matrix.
pub fn s_image_column(a: &FiniteQuadraticModule, n: i64) -> DVector<Complex<f64>> {
    let d = a.order() as usize;
    let gamma: Complex<f64> = s_factor(octant_for(n));
    let zero = vec![0i64; a.rank()];
    let level = a.level() as f64;
    DVector::from_iterator(
        d,
        a.elements().map(|mu| {
            let theta = -std::f64::consts::TAU * a.bn_pair(&zero, &mu) as f64 / level;
            gamma * Complex::from_polar(1.0 / (d as f64).sqrt(), theta)
        }),
    )
}

pub fn borcherds_obstruction(lattice: &GramLattice, evidence: Option<TwoUEvidence>) -> Result<ObstructionReport> {
    let (p, q) = lattice.signature();
    if p != 2 || q < 1 {
        return Err(Error::WrongSignature { p, q, min_n: 1 });
    }
    let n = q as i64;
    let disc = discriminant_form(lattice)?;
    let a = &disc.module;
    match evidence {
        None => return Err(Error::ReductionRequired("the caller has not established that L contains 2U".into())),
        Some(TwoUEvidence::LengthCondition) if !splits_2u_by_length(a, q) => {
            return Err(Error::ReductionRequired("the length condition does not hold for this lattice".into()));
        }
        Some(_) => {}
    }
    let weight = Rational64::new(26 - n, 2);
    let order = a.order();
    let report = |verdict, reason: String, witness| ObstructionReport {
        verdict,
        reason,
        witness,
        weight_13_minus_n_over_2: weight.to_string(),
        n,
        discriminant_order: order,
    };
    if n >= 27 {
        return Ok(report(
            ObstructionVerdict::ExcludedWeight,
            format!("n = {n}: the form fΔ would have negative weight 13 - n/2 = {weight} and vanish"),
            None,
        ));
    }
    if n <= 25 {
        return Ok(report(ObstructionVerdict::Inconclusive, format!("n = {n} <= 25: the weight argument does not apply"), None));
    }
    if order == 1 {
        return Ok(report(ObstructionVerdict::NotExcluded, "n = 26 and A_L is trivial: L is II_{2,26}".into(), None));
    }
    if (order as usize) <= FULL_CHECK_LIMIT {
        WeilRep64::build(a, n)?;
    }
    let image = s_image_column(a, n);
    let expected = 1.0 / (order as f64).sqrt();
    let moduli_ok = image.iter().all(|z| (z.norm() - expected).abs() < DEFAULT_TOL);
    let moved = (image[0] - Complex::new(1.0, 0.0)).norm();
    if !moduli_ok || moved < 0.1 {
        return Err(Error::ConventionInconsistency("S-image of e_0 has unexpected moduli".into()));
    }
    Ok(report(
        ObstructionVerdict::ExcludedInvariance,
        format!(
            "n = 26: the weight-0 form fΔ must be the constant e_0, but ρ(S) e_0 has all {order} coordinates of modulus |A|^(-1/2) = {expected:.6}, so e_0 is not invariant"
        ),
        Some(image.iter().map(|z| [z.re, z.im]).collect()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::parse_lattice;

    fn run(expr: &str) -> ObstructionVerdict {
        borcherds_obstruction(&parse_lattice(expr).unwrap(), Some(TwoUEvidence::ExplicitSplit)).unwrap().verdict
    }

    #[test]
    fn examples() {
        assert_eq!(run("2U+3E8+A1"), ObstructionVerdict::ExcludedWeight);
        assert_eq!(run("2U+2E8+D8"), ObstructionVerdict::ExcludedInvariance);
        assert_eq!(run("2U+3E8"), ObstructionVerdict::NotExcluded);
        assert_eq!(run("2U+E8"), ObstructionVerdict::Inconclusive);
    }

    #[test]
    fn precondition_required() {
        let l = parse_lattice("2U+3E8").unwrap();
        assert!(matches!(borcherds_obstruction(&l, None), Err(Error::ReductionRequired(_))));
        let l = parse_lattice("<2>+<2>+26A1").unwrap();
        assert!(matches!(borcherds_obstruction(&l, Some(TwoUEvidence::LengthCondition)), Err(Error::ReductionRequired(_))));
    }

    #[test]
    fn witness_moduli() {
        let r = borcherds_obstruction(&parse_lattice("2U+2E8+D8").unwrap(), Some(TwoUEvidence::ExplicitSplit)).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 4);
        for [re, im] in w {
            assert!(((re * re + im * im).sqrt() - 0.5).abs() < 1e-12);
        }
        let json = serde_json::to_value(&r.verdict).unwrap();
        assert_eq!(json, "ExcludedInvariance");
    }
}
