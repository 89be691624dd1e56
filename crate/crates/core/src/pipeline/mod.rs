//! End-to-end classification: the slope and discriminant bounds, the
//! overlattice reductions feeding the obstruction, and the final verdict with a
//! replayable chain of steps.

mod config;
mod enumerate;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::discform::{discriminant_form, economic_isotropic, maximal_even_overlattice, overlattice, splits_2u_by_length, cyclic_intermediate};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::linalg::Matrix;
use crate::pool::{build_pool, compute_a_n, compute_b_n, CurveInvariants};
use crate::weilrep::{borcherds_obstruction, ObstructionVerdict, TwoUEvidence};

pub use config::{Config, LambdaEntry, LambdaValue, PoolConstants, Q};
pub use enumerate::{enumerate_candidates, forms_of_order, Candidate, CandidatePage};

/// `λ_K = max_stabilizer · area/2π`: the valence formula bounds the zero degree
/// of a weight-`w` form by `w · area/4π`, and the stabilizer order absorbs the
/// fractional weights of elliptic points.
pub fn slope_bound_from_curve(inv: &CurveInvariants) -> BigRational {
    let area = BigRational::new(BigInt::from(*inv.area_over_2pi.numer()), BigInt::from(*inv.area_over_2pi.denom()));
    area * BigRational::from_integer(BigInt::from(inv.max_stabilizer))
}

/// `B = (nλ/2)(1+λ)^{n-1}(9 f_AI(n) + 2^{n-2} f_AII(n))`; with `drop_h0` the
/// `f_AII` term is left out. A 2-reflective lattice with this slope satisfies
/// `√|A_L| < B`.
pub fn discriminant_bound(n: usize, lambda: &BigRational, cfg: &Config, drop_h0: bool) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::WrongSignature { p: 2, q: n, min_n: 2 });
    }
    let f_ai = cfg.f_ai.get(&n).ok_or_else(|| Error::ConfigIncomplete(format!("f_AI({n}) missing")))?;
    let mut inner = BigRational::from_integer(9.into()) * &f_ai.0;
    if !drop_h0 {
        let f_aii = cfg.f_aii.get(&n).ok_or_else(|| Error::ConfigIncomplete(format!("f_AII({n}) missing")))?;
        inner += BigRational::from_integer(BigInt::one() << (n - 2)) * &f_aii.0;
    }
    let nr = BigRational::from_integer(BigInt::from(n));
    let one_plus = BigRational::one() + lambda;
    let power = num_traits::pow(one_plus, n - 1);
    Ok(nr * lambda / BigRational::from_integer(2.into()) * power * inner)
}

/// `(λ_max, B)` for `n` from the config: pool constants (configured or
/// computed), the slope table over the whole pool, and the `f` values.
pub fn configured_bound(n: usize, cfg: &Config) -> Result<(BigRational, BigRational)> {
    let (a_n, b_n) = match cfg.pool_constants.get(&n) {
        Some(c) => (c.a_n, c.b_n),
        None => (compute_a_n(n, &cfg.caps)?, compute_b_n(n, &cfg.caps)?),
    };
    let (lambda, _) = lambda_max_for(n, a_n, b_n, cfg)
        .map_err(|m| Error::ConfigIncomplete(format!("no slope for {} pool member(s): {}", m.len(), m.iter().take(5).cloned().collect::<Vec<_>>().join(", "))))?;
    let bound = discriminant_bound(n, &lambda, cfg, cfg.drop_h0)?;
    Ok((lambda, bound))
}

/// One recorded step of a classification; every variant carries its inputs so
/// that [`Step::replay`] can recompute it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// A maximal even overlattice `L' ⊇ L`; a form on `L` gives one on `L'`.
    MaximalOverlattice { input: Matrix<i64>, output: Matrix<i64>, index: i64, discriminant_order: i64 },
    /// `L ⊆ L'' ⊆ L'` with `L'/L''` cyclic; `sublattice` is `L` in `L'` coordinates.
    CyclicIntermediate { ambient: Matrix<i64>, sublattice: Matrix<i64>, output: Matrix<i64>, quotient_order: i64 },
    /// The length condition `l_2 ≤ n-3`, `l_p ≤ n-4` (implies `2U ⊂ L`).
    LengthCondition { gram: Matrix<i64>, n: usize, lengths: BTreeMap<i64, usize>, holds: bool },
    Obstruction { gram: Matrix<i64>, evidence: TwoUEvidence, verdict: ObstructionVerdict, reason: String },
    /// An economic isotropic subgroup and its overlattice.
    EconomicOverlattice { input: Matrix<i64>, subgroup_order: i64, output: Matrix<i64>, quotient_order: i64 },
    PoolConstants { n: usize, a_n: i64, b_n: i64, members: usize, from_config: bool },
    /// `λ_max` over the pool, from the configured slope table.
    SlopeBound { n: usize, a_n: i64, b_n: i64, lambda_max: Q, attained_by: String },
    DiscriminantBound { n: usize, lambda: Q, drop_h0: bool, bound: Q, discriminant_order: i64, excluded: bool },
}

impl Step {
    /// Steps that on their own rule out 2-reflectivity.
    pub fn is_decisive(&self) -> bool {
        match self {
            Step::Obstruction { verdict, .. } => {
                matches!(verdict, ObstructionVerdict::ExcludedWeight | ObstructionVerdict::ExcludedInvariance)
            }
            Step::DiscriminantBound { excluded, .. } => *excluded,
            _ => false,
        }
    }

    pub fn depends_on_config(&self) -> bool {
        matches!(self, Step::SlopeBound { .. } | Step::DiscriminantBound { .. })
    }

    /// Recomputes the step from its recorded inputs; `Ok(true)` if the recorded
    /// outcome is reproduced.
    pub fn replay(&self, cfg: &Config) -> Result<bool> {
        match self {
            Step::MaximalOverlattice { input, output, index, discriminant_order } => {
                let m = maximal_even_overlattice(&GramLattice::new(input.clone())?)?;
                Ok(m.lattice.gram() == output && m.index == *index && m.module.order() == *discriminant_order)
            }
            Step::CyclicIntermediate { ambient, sublattice, output, quotient_order } => {
                let c = cyclic_intermediate(sublattice, &GramLattice::new(ambient.clone())?)?;
                Ok(c.lattice.gram() == output && c.quotient_order == *quotient_order)
            }
            Step::LengthCondition { gram, n, lengths, holds } => {
                let a = discriminant_form(&GramLattice::new(gram.clone())?)?.module;
                Ok(&length_table(&a) == lengths && splits_2u_by_length(&a, *n) == *holds)
            }
            Step::Obstruction { gram, evidence, verdict, .. } => {
                let r = borcherds_obstruction(&GramLattice::new(gram.clone())?, Some(*evidence))?;
                Ok(r.verdict == *verdict)
            }
            Step::EconomicOverlattice { input, subgroup_order, output, quotient_order } => {
                let (l, g, q) = economic_step(&GramLattice::new(input.clone())?)?;
                Ok(l.gram() == output && g == *subgroup_order && q == *quotient_order)
            }
            Step::PoolConstants { n, a_n, b_n, members, .. } => {
                let a = compute_a_n(*n, &cfg.caps)?;
                let b = compute_b_n(*n, &cfg.caps)?;
                Ok(a == *a_n && b == *b_n && build_pool(*n, a, b).len() == *members)
            }
            Step::SlopeBound { n, a_n, b_n, lambda_max, .. } => {
                let (lam, _) = lambda_max_for(*n, *a_n, *b_n, cfg).map_err(|m| Error::ConfigIncomplete(m.join(", ")))?;
                Ok(lam == lambda_max.0)
            }
            Step::DiscriminantBound { n, lambda, drop_h0, bound, discriminant_order, excluded } => {
                let b = discriminant_bound(*n, &lambda.0, cfg, *drop_h0)?;
                let order = BigRational::from_integer(BigInt::from(*discriminant_order));
                Ok(b == bound.0 && (order >= &b * &b) == *excluded)
            }
        }
    }
}

fn length_table(a: &crate::FiniteQuadraticModule) -> BTreeMap<i64, usize> {
    a.primes().into_iter().map(|p| (p, a.length_p(p))).collect()
}

fn length_step(l: &GramLattice, n: usize) -> Result<Step> {
    let a = discriminant_form(l)?.module;
    Ok(Step::LengthCondition { gram: l.gram().clone(), n, lengths: length_table(&a), holds: splits_2u_by_length(&a, n) })
}

fn economic_step(l: &GramLattice) -> Result<(GramLattice, i64, i64)> {
    let disc = discriminant_form(l)?;
    let (g, quot) = economic_isotropic(&disc.module)?;
    let over = overlattice(&disc, &g.generators)?;
    Ok((over.lattice, g.order, quot.order()))
}

fn lambda_max_for(n: usize, a_n: i64, b_n: i64, cfg: &Config) -> std::result::Result<(BigRational, String), Vec<String>> {
    let mut best: Option<(BigRational, String)> = None;
    let mut missing = Vec::new();
    for m in build_pool(n, a_n, b_n) {
        match cfg.lambda_for(&m) {
            Some(v) => {
                if best.as_ref().map_or(true, |(b, _)| v.lambda.0 > *b) {
                    best = Some((v.lambda.0, v.member));
                }
            }
            None => missing.push(m.label()),
        }
    }
    match best {
        Some(b) if missing.is_empty() => Ok(b),
        _ => Err(missing),
    }
}

/// How the lattice fed to the obstruction was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionRoute {
    /// `A_L` was already anisotropic.
    Unchanged,
    MaximalOverlattice,
    /// The maximal overlattice was unimodular; the cyclic intermediate is used.
    CyclicIntermediate,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub lattice: GramLattice,
    pub chain: Vec<Step>,
    pub route: ReductionRoute,
}

/// For `n ≥ 26`: a lattice containing `L` with finite index whose
/// non-2-reflectivity implies that of `L`, and which satisfies the length
/// condition (anisotropic, or with a cyclic-quotient discriminant of length ≤ 2).
pub fn reduce_for_obstruction(lattice: &GramLattice) -> Result<Reduction> {
    let (p, q) = lattice.signature();
    if p != 2 || q < 26 {
        return Err(Error::WrongSignature { p, q, min_n: 26 });
    }
    let m = maximal_even_overlattice(lattice)?;
    if m.index == 1 {
        return Ok(Reduction { lattice: lattice.clone(), chain: Vec::new(), route: ReductionRoute::Unchanged });
    }
    let mut chain = vec![Step::MaximalOverlattice {
        input: lattice.gram().clone(),
        output: m.lattice.gram().clone(),
        index: m.index,
        discriminant_order: m.module.order(),
    }];
    if m.module.order() == 1 && q == 26 {
        let sub = m.sublattice_coords();
        let c = cyclic_intermediate(&sub, &m.lattice)?;
        chain.push(Step::CyclicIntermediate {
            ambient: m.lattice.gram().clone(),
            sublattice: sub,
            output: c.lattice.gram().clone(),
            quotient_order: c.quotient_order,
        });
        return Ok(Reduction { lattice: c.lattice, chain, route: ReductionRoute::CyclicIntermediate });
    }
    Ok(Reduction { lattice: m.lattice, chain, route: ReductionRoute::MaximalOverlattice })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    NotTwoReflective,
    Candidate,
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// The verdict rests on configured slopes or `f` values.
    pub config_dependent: bool,
    pub uses_lambda_table: bool,
    pub uses_f_functions: bool,
    pub drop_h0: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub lattice: String,
    pub n: usize,
    pub status: Status,
    pub reason_chain: Vec<Step>,
    pub provenance: Provenance,
    pub summary: String,
}

impl ClassificationVerdict {
    /// Replays every step; `Ok(false)` if any recorded outcome differs.
    pub fn replay(&self, cfg: &Config) -> Result<bool> {
        for s in &self.reason_chain {
            if !s.replay(cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn decisive_steps(&self) -> impl Iterator<Item = &Step> {
        self.reason_chain.iter().filter(|s| s.is_decisive())
    }
}

/// Decides what can be decided about `L`: the obstruction for `n ≥ 26`, the
/// discriminant bound (with configured slopes) for `n ≤ 25`, after an economic
/// overlattice reduction when the length condition fails.
pub fn classify(lattice: &GramLattice, cfg: &Config) -> Result<ClassificationVerdict> {
    let (p, n) = lattice.signature();
    if p != 2 || n < 3 {
        return Err(Error::WrongSignature { p, q: n, min_n: 3 });
    }
    let mut v = ClassificationVerdict {
        lattice: lattice.label(),
        n,
        status: Status::Unknown,
        reason_chain: Vec::new(),
        provenance: Provenance::default(),
        summary: String::new(),
    };
    if n >= 26 {
        classify_large(lattice, &mut v)?;
    } else {
        classify_small(lattice, cfg, true, &mut v)?;
    }
    debug_assert!(v.status != Status::NotTwoReflective || v.decisive_steps().next().is_some());
    Ok(v)
}

fn classify_large(lattice: &GramLattice, v: &mut ClassificationVerdict) -> Result<()> {
    let n = v.n;
    let red = reduce_for_obstruction(lattice)?;
    v.reason_chain.extend(red.chain);
    let len = length_step(&red.lattice, n)?;
    let holds = matches!(len, Step::LengthCondition { holds: true, .. });
    v.reason_chain.push(len);
    if !holds {
        v.summary = "reduced lattice fails the length condition; 2U containment not established".into();
        return Ok(());
    }
    let report = borcherds_obstruction(&red.lattice, Some(TwoUEvidence::LengthCondition))?;
    v.reason_chain.push(Step::Obstruction {
        gram: red.lattice.gram().clone(),
        evidence: TwoUEvidence::LengthCondition,
        verdict: report.verdict,
        reason: report.reason.clone(),
    });
    match report.verdict {
        ObstructionVerdict::ExcludedWeight | ObstructionVerdict::ExcludedInvariance => {
            v.status = Status::NotTwoReflective;
            v.summary = match red.route {
                ReductionRoute::Unchanged => report.reason,
                _ => format!("{} (for a finite-index overlattice of L)", report.reason),
            };
        }
        ObstructionVerdict::NotExcluded if lattice.is_unimodular() => {
            v.status = Status::Candidate;
            v.summary = "L is the even unimodular lattice II_{2,26}".into();
        }
        _ => {
            v.summary = "reduction reached II_{2,26}; the obstruction is inconclusive for L by this route".into();
            v.provenance.notes.push("reduction reached II_{2,26}".into());
        }
    }
    Ok(())
}

fn classify_small(lattice: &GramLattice, cfg: &Config, allow_reduction: bool, v: &mut ClassificationVerdict) -> Result<()> {
    let n = v.n;
    let len = length_step(lattice, n)?;
    let holds = matches!(len, Step::LengthCondition { holds: true, .. });
    v.reason_chain.push(len);
    if !holds {
        if !allow_reduction {
            v.summary = "length condition still fails after the economic reduction".into();
            return Ok(());
        }
        match economic_step(lattice) {
            Ok((over, g, q)) => {
                v.reason_chain.push(Step::EconomicOverlattice {
                    input: lattice.gram().clone(),
                    subgroup_order: g,
                    output: over.gram().clone(),
                    quotient_order: q,
                });
                v.provenance.notes.push(format!("economic overlattice of index {g}"));
                return classify_small(&over, cfg, false, v);
            }
            Err(e @ (Error::EconomicNotFound | Error::CapExceeded(_))) => {
                v.summary = format!("length condition fails and no economic overlattice was found: {e}");
                return Ok(());
            }
            Err(e) => return Err(e),
        }
    }
    let (a_n, b_n, from_config) = match cfg.pool_constants.get(&n) {
        Some(c) => (c.a_n, c.b_n, true),
        None => (compute_a_n(n, &cfg.caps)?, compute_b_n(n, &cfg.caps)?, false),
    };
    let members = build_pool(n, a_n, b_n).len();
    v.reason_chain.push(Step::PoolConstants { n, a_n, b_n, members, from_config });
    if from_config {
        v.provenance.notes.push(format!("a_{n}, b_{n} taken from the config"));
    }
    v.provenance.uses_lambda_table = true;
    let (lambda, attained_by) = match lambda_max_for(n, a_n, b_n, cfg) {
        Ok(x) => x,
        Err(missing) => {
            let shown: Vec<_> = missing.iter().take(5).cloned().collect();
            v.summary = format!(
                "config incomplete: no slope for {} pool member(s), e.g. {}",
                missing.len().max(1),
                if shown.is_empty() { "any member".to_string() } else { shown.join(", ") }
            );
            v.provenance.config_dependent = true;
            return Ok(());
        }
    };
    v.reason_chain.push(Step::SlopeBound { n, a_n, b_n, lambda_max: Q(lambda.clone()), attained_by });
    v.provenance.uses_f_functions = true;
    v.provenance.config_dependent = true;
    v.provenance.drop_h0 = cfg.drop_h0;
    let bound = match discriminant_bound(n, &lambda, cfg, cfg.drop_h0) {
        Ok(b) => b,
        Err(e @ Error::ConfigIncomplete(_)) => {
            v.summary = e.to_string();
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let order = discriminant_form(lattice)?.module.order();
    let excluded = BigRational::from_integer(order.into()) >= &bound * &bound;
    v.reason_chain.push(Step::DiscriminantBound {
        n,
        lambda: Q(lambda),
        drop_h0: cfg.drop_h0,
        bound: Q(bound.clone()),
        discriminant_order: order,
        excluded,
    });
    if excluded {
        v.status = Status::NotTwoReflective;
        v.summary = format!("|A| = {order} >= B^2 with B = {bound} (config-dependent)");
    } else {
        v.status = Status::Candidate;
        v.summary = format!("|A| = {order} < B^2 with B = {bound}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::{ii_2_26, parse_lattice};
    use num_rational::Rational64;
    use num_traits::Zero;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn cfg_f(n: usize, fa: BigRational, fb: BigRational) -> Config {
        let mut c = Config::default();
        c.f_ai.insert(n, Q(fa));
        c.f_aii.insert(n, Q(fb));
        c
    }

    #[test]
    fn slope_from_curve() {
        let inv = CurveInvariants { area_over_2pi: Rational64::new(1, 6), max_stabilizer: 6, source: String::new() };
        assert_eq!(slope_bound_from_curve(&inv), r(1, 1));
        let one = CurveInvariants { max_stabilizer: 1, ..inv.clone() };
        assert_eq!(slope_bound_from_curve(&one), r(1, 6));
        let double = CurveInvariants { area_over_2pi: Rational64::new(1, 3), ..inv };
        assert_eq!(slope_bound_from_curve(&double), r(2, 1));
    }

    #[test]
    fn bound_spot_value() {
        let c = cfg_f(7, r(1, 1), r(1, 1));
        assert_eq!(discriminant_bound(7, &r(1, 1), &c, false).unwrap(), r(9184, 1));
        // (7/2)·64·9
        assert_eq!(discriminant_bound(7, &r(1, 1), &c, true).unwrap(), r(2016, 1));
        assert!(discriminant_bound(7, &r(0, 1), &c, false).unwrap().is_zero());
        assert!(matches!(discriminant_bound(8, &r(1, 1), &c, false), Err(Error::ConfigIncomplete(_))));
    }

    #[test]
    fn reduction_examples() {
        let ii = ii_2_26();
        let red = reduce_for_obstruction(&ii).unwrap();
        assert_eq!(red.route, ReductionRoute::Unchanged);
        let l = parse_lattice("2U+2E8+D8+<-4>+<-12>").unwrap();
        let red = reduce_for_obstruction(&l).unwrap();
        assert!(red.chain.iter().all(|s| s.replay(&Config::default()).unwrap()));
    }

    #[test]
    fn classify_examples() {
        let cfg = Config::default();
        assert_eq!(classify(&ii_2_26(), &cfg).unwrap().status, Status::Candidate);
        let v = classify(&parse_lattice("2U+3E8+A1").unwrap(), &cfg).unwrap();
        assert_eq!(v.status, Status::NotTwoReflective);
        assert!(v.reason_chain.iter().any(|s| matches!(s, Step::Obstruction { verdict: ObstructionVerdict::ExcludedWeight, .. })));
        let v = classify(&parse_lattice("2U+2E8+D8").unwrap(), &cfg).unwrap();
        assert_eq!(v.status, Status::NotTwoReflective);
        assert!(v.replay(&cfg).unwrap());
    }

    #[test]
    fn small_n_without_config_is_unknown() {
        let mut cfg = Config::default();
        cfg.pool_constants.insert(11, PoolConstants { a_n: 4, b_n: 4 });
        let v = classify(&parse_lattice("2U+A1+E8").unwrap(), &cfg).unwrap();
        assert_eq!(v.status, Status::Unknown);
        assert!(v.summary.contains("config incomplete"));
    }
}
