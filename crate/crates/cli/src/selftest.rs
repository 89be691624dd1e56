//! Quick cross-checks of the main algorithms against the oracles.

use anyhow::Result;
use serde::Serialize;

use reflat::lattice::named::parse_lattice;
use reflat::lattice::{roots, short_vectors, Ade};
use reflat::oracle;
use reflat::pipeline::Config;
use reflat::pool::{compute_a_n, min_chamber_norm};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, expected: impl std::fmt::Debug, got: impl std::fmt::Debug) -> Check {
    let (e, g) = (format!("{expected:?}"), format!("{got:?}"));
    Check { name: name.into(), passed: e == g, detail: format!("expected {e}, got {g}") }
}

pub fn run(cfg: &Config) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 4..=8 {
        out.push(check(format!("a_{n}"), oracle::a_n(n), compute_a_n(n, &cfg.caps)?));
    }
    for k in 0..=6 {
        let slow = oracle::min_chamber_norm(k, 8, 64).map(|(v, _)| v);
        out.push(check(format!("chamber norm U+{k}A1"), slow, Some(min_chamber_norm(k, &cfg.caps)?.norm)));
    }
    for expr in ["E8", "D4", "A2", "A1+<-4>", "<-6>+A2(2)", "D5"] {
        let l = parse_lattice(expr)?;
        let mut fast = short_vectors(&l, 8)?;
        let mut slow = oracle::box_short_vectors(l.gram(), 8);
        fast.sort();
        slow.sort();
        out.push(check(format!("short vectors {expr}, bound 8"), slow.len(), fast.len()));
        out.push(check(format!("short vector sets {expr}"), true, fast == slow));
    }
    for (t, count) in [(Ade::E(8), 240), (Ade::D(4), 24), (Ade::A(2), 6)] {
        let l = parse_lattice(&t.to_string())?;
        out.push(check(format!("roots of {t}"), count, 2 * roots(&l)?.len()));
    }
    Ok(out)
}
