//! Run configuration: externally supplied slopes and `f` functions, caps.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pool::{CurveInvariants, PoolCaps, PoolFamily, PoolMember};

use super::slope_bound_from_curve;

/// A rational that serializes as a string such as `"3/2"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Q(#[serde(with = "crate::serde_ratio")] pub BigRational);

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Self {
        Q(r)
    }
}

/// One row of the slope table. `a`/`b` select a single member; leaving both out
/// makes the row a default for the whole family (`"*"` matches both families).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveInvariants>,
}

/// Precomputed `a_n`, `b_n`, to skip the pool searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolConstants {
    pub a_n: i64,
    pub b_n: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    #[serde(default)]
    pub lambda_table: Vec<LambdaEntry>,
    #[serde(default, rename = "f_AI")]
    pub f_ai: BTreeMap<usize, Q>,
    #[serde(default, rename = "f_AII")]
    pub f_aii: BTreeMap<usize, Q>,
    /// Drop the `2^{n-2} f_AII(n)` term (forms known not to vanish on `H_0`).
    #[serde(default)]
    pub drop_h0: bool,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub caps: PoolCaps,
    #[serde(default)]
    pub pool_constants: BTreeMap<usize, PoolConstants>,
}

fn default_tol() -> f64 {
    1e-9
}

impl Default for Config {
    fn default() -> Self {
        Config {
            lambda_table: Vec::new(),
            f_ai: BTreeMap::new(),
            f_aii: BTreeMap::new(),
            drop_h0: false,
            tol: default_tol(),
            caps: PoolCaps::default(),
            pool_constants: BTreeMap::new(),
        }
    }
}

/// Where a slope came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaValue {
    pub lambda: Q,
    pub member: String,
    pub derived_from_curve: bool,
    pub wildcard: bool,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.lambda_table.iter().enumerate() {
            let bad = |m: &str| Err(Error::Parse(format!("lambda_table[{i}]: {m}")));
            if family_of(&e.family).is_none() && normalize(&e.family) != "*" {
                return bad("unknown family (expected \"<4>+<4>+<-a>\", \"U+<b>\" or \"*\")");
            }
            if e.lambda.is_none() && e.curve.is_none() {
                return bad("needs \"lambda\" or \"curve\"");
            }
            if e.lambda.as_ref().is_some_and(|l| l.0.is_negative()) {
                return bad("negative lambda");
            }
            if let Some(c) = &e.curve {
                if c.max_stabilizer == 0 || *c.area_over_2pi.numer() <= 0 {
                    return bad("curve invariants must be positive");
                }
            }
        }
        for (name, f) in [("f_AI", &self.f_ai), ("f_AII", &self.f_aii)] {
            if let Some((n, _)) = f.iter().find(|(_, v)| !v.0.is_positive()) {
                return Err(Error::Parse(format!("{name}({n}) must be positive")));
            }
        }
        Ok(())
    }

    /// `λ_K` for a member: an exact row wins over a family default, and an explicit
    /// `lambda` over curve invariants.
    pub fn lambda_for(&self, member: &PoolMember) -> Option<LambdaValue> {
        let exact = |e: &&LambdaEntry| {
            family_of(&e.family) == Some(member.family)
                && match member.family {
                    PoolFamily::PrimeFour => e.a == Some(member.parameter),
                    PoolFamily::Hyperbolic => e.b == Some(member.parameter),
                }
        };
        let wild = |e: &&LambdaEntry| {
            e.a.is_none() && e.b.is_none() && (family_of(&e.family) == Some(member.family) || normalize(&e.family) == "*")
        };
        let (entry, wildcard) = match self.lambda_table.iter().find(exact) {
            Some(e) => (e, false),
            None => (self.lambda_table.iter().find(wild)?, true),
        };
        let (lambda, derived) = match (&entry.lambda, &entry.curve) {
            (Some(l), _) => (l.clone(), false),
            (None, Some(c)) => (Q(slope_bound_from_curve(c)), true),
            (None, None) => return None,
        };
        Some(LambdaValue { lambda, member: member.label(), derived_from_curve: derived, wildcard })
    }
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('⊕', "+")
}

fn family_of(s: &str) -> Option<PoolFamily> {
    let s = normalize(s);
    [PoolFamily::PrimeFour, PoolFamily::Hyperbolic].into_iter().find(|f| f.pattern() == s)
}
