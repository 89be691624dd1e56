//! Reflective vectors, divisor patterns and principal parts.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::discform::{DiscriminantForm, Element, FiniteQuadraticModule};
use crate::error::{Error, Result};
use crate::lattice::divisibility;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ReflectiveKind {
    /// `div(l) = 2d`; Heegner pair `(λ, -1/4d)` with `λ = [l/div(l)]`.
    ReflectiveFullDiv { lambda: Element, m: String },
    /// `div(l) = d`; Heegner pair `(λ, -1/d)` with `λ = [l/d]`.
    ReflectiveHalfDiv { lambda: Element, m: String },
    NotReflective,
}

impl ReflectiveKind {
    pub fn is_reflective(&self) -> bool {
        !matches!(self, ReflectiveKind::NotReflective)
    }
}

/// Classifies a primitive vector `l` with `(l,l) = -2d < 0`.
pub fn classify_reflective_vector(l: &[i64], disc: &DiscriminantForm) -> Result<ReflectiveKind> {
    let lat = disc.lattice();
    let norm = lat.norm(l);
    if norm >= 0 || norm % 2 != 0 {
        return Err(Error::InvalidVector(format!("reflective vectors have negative even norm, got {norm}")));
    }
    let d = -norm / 2;
    let div = divisibility(l, lat)?;
    if div == 2 * d {
        let lambda = disc.class_of(l, div)?;
        Ok(ReflectiveKind::ReflectiveFullDiv { lambda, m: Rational64::new(-1, 4 * d).to_string() })
    } else if div == d {
        let lambda = disc.class_of(l, d)?;
        Ok(ReflectiveKind::ReflectiveHalfDiv { lambda, m: Rational64::new(-1, d).to_string() })
    } else {
        Ok(ReflectiveKind::NotReflective)
    }
}

/// `div(F) = β_0 H_0 + Σ β_μ H_μ` for a form of weight `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorPattern {
    #[serde(with = "crate::serde_ratio")]
    pub weight: Rational64,
    pub beta_0: u64,
    /// Multiplicities on the components `H_μ`; absent `μ` count as 0.
    #[serde(default)]
    pub beta_mu: Vec<(Element, u64)>,
}

impl DivisorPattern {
    /// `max(β_*/α)`.
    pub fn slope(&self) -> Result<Rational64> {
        if !self.weight.is_positive() {
            return Err(Error::InvalidVector("weight must be positive".into()));
        }
        let top = self.beta_mu.iter().map(|(_, b)| *b).chain([self.beta_0]).max().unwrap_or(0);
        Ok(Rational64::from_integer(top as i64) / self.weight)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalTerm {
    pub lambda: Element,
    #[serde(with = "crate::serde_ratio")]
    pub exponent: Rational64,
    pub coefficient: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalPart {
    pub terms: Vec<PrincipalTerm>,
}

impl PrincipalPart {
    pub fn coefficient(&self, lambda: &[i64], exponent: Rational64) -> Option<i64> {
        self.terms.iter().find(|t| t.lambda == lambda && t.exponent == exponent).map(|t| t.coefficient)
    }
}

/// `β_0 q^{-1} e_0 + Σ_{μ ∈ π_L} (β_μ - β_0) q^{-1/4} e_μ`.
pub fn principal_part(pattern: &DivisorPattern, a: &FiniteQuadraticModule) -> Result<PrincipalPart> {
    let pi = a.pi_l();
    for (mu, _) in &pattern.beta_mu {
        if !pi.contains(&a.reduce(mu)) {
            return Err(Error::NotInPi);
        }
    }
    let b0 = pattern.beta_0 as i64;
    let mut terms = vec![PrincipalTerm { lambda: vec![0; a.rank()], exponent: Rational64::from_integer(-1), coefficient: b0 }];
    for mu in pi {
        let beta = pattern.beta_mu.iter().find(|(m, _)| a.reduce(m) == mu).map_or(0, |(_, b)| *b as i64);
        terms.push(PrincipalTerm { lambda: mu, exponent: Rational64::new(-1, 4), coefficient: beta - b0 });
    }
    for t in &terms {
        // exponents of the e_λ component are ≡ q(λ)/2 mod 1
        debug_assert!((t.exponent - a.q(&t.lambda) / 2).is_integer() || t.exponent.is_zero());
    }
    Ok(PrincipalPart { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::discriminant_form;
    use crate::lattice::named::parse_lattice;

    #[test]
    fn reflective_examples() {
        let d = discriminant_form(&parse_lattice("2U+A1+<-4>").unwrap()).unwrap();
        let mut root = vec![0; 6];
        root[0] = 1;
        root[1] = -1;
        assert!(matches!(classify_reflective_vector(&root, &d), Ok(ReflectiveKind::ReflectiveHalfDiv { .. })));
        let mut a1 = vec![0; 6];
        a1[4] = 1;
        assert!(matches!(classify_reflective_vector(&a1, &d), Ok(ReflectiveKind::ReflectiveFullDiv { .. })));
        // e - 2f: norm -4, div 1
        let v = vec![1, -2, 0, 0, 0, 0];
        assert_eq!(classify_reflective_vector(&v, &d), Ok(ReflectiveKind::NotReflective));
        // the <-4> generator: d = 2, div 4 = 2d
        let mut g = vec![0; 6];
        g[5] = 1;
        assert!(matches!(classify_reflective_vector(&g, &d), Ok(ReflectiveKind::ReflectiveFullDiv { .. })));
        assert!(classify_reflective_vector(&[1, 0, 0, 0, 0, 0], &d).is_err());
        assert!(classify_reflective_vector(&[0, 0, 0, 0, 2, 0], &d).is_err());
    }

    #[test]
    fn principal_part_examples() {
        let trivial = discriminant_form(&parse_lattice("2U+E8").unwrap()).unwrap().module;
        let p = principal_part(&DivisorPattern { weight: Rational64::from_integer(12), beta_0: 1, beta_mu: vec![] }, &trivial).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.coefficient(&[], Rational64::from_integer(-1)), Some(1));
        let a = discriminant_form(&parse_lattice("2U+A1").unwrap()).unwrap().module;
        let mu = a.pi_l()[0].clone();
        let pat = DivisorPattern { weight: Rational64::from_integer(4), beta_0: 1, beta_mu: vec![(mu.clone(), 1)] };
        let p = principal_part(&pat, &a).unwrap();
        assert_eq!(p.coefficient(&mu, Rational64::new(-1, 4)), Some(0));
        let pat = DivisorPattern { weight: Rational64::from_integer(4), beta_0: 0, beta_mu: vec![(mu.clone(), 3)] };
        let p = principal_part(&pat, &a).unwrap();
        assert_eq!(p.coefficient(&[0], Rational64::from_integer(-1)), Some(0));
        assert_eq!(p.coefficient(&mu, Rational64::new(-1, 4)), Some(3));
        assert_eq!(pat.slope().unwrap(), Rational64::new(3, 4));
    }
}
