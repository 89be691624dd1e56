//! Standard generator blocks of finite quadratic modules.
//!
//! Syntax: blocks joined by `+`, each `p^k:x` where for odd `p` the tag `x` is
//! `+`, `-` or an integer `a` prime to `p` (giving `q = 2a/p^k`), and for `p = 2`
//! it is an odd integer `a` (`q = a/2^k`), `U` or `V`.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::FiniteQuadraticModule;
use crate::error::{Error, Result};
use crate::lattice::named::{ade, rank_one};
use crate::lattice::{GramLattice, Ade};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockKind {
    /// Cyclic block with numerator `a`: `q = a/2^k` for `p = 2`, `q = 2a/p^k` otherwise.
    Cyclic(i64),
    /// `(Z/2^k)^2` with `q = 0` on both generators and `b = 1/2^k`.
    U,
    /// `(Z/2^k)^2` with `q = 2/2^k` on both generators and `b = 1/2^k`.
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub p: i64,
    pub k: u32,
    pub kind: BlockKind,
}

impl Block {
    pub fn modulus(&self) -> i64 {
        self.p.pow(self.k)
    }

    pub fn module(&self) -> FiniteQuadraticModule {
        let m = self.modulus();
        match self.kind {
            BlockKind::Cyclic(a) => {
                let q = if self.p == 2 { Rational64::new(a, m) } else { Rational64::new(2 * a, m) };
                FiniteQuadraticModule::new(vec![m], vec![q], vec![vec![q]]).expect("valid cyclic block")
            }
            BlockKind::U | BlockKind::V => {
                let q = if self.kind == BlockKind::U { Rational64::zero() } else { Rational64::new(2, m) };
                let b = Rational64::new(1, m);
                FiniteQuadraticModule::new(vec![m, m], vec![q, q], vec![vec![q, b], vec![b, q]]).expect("valid 2-adic block")
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Parse(format!("block {self}: {m}")));
        if self.k == 0 || super::prime_factors(self.p) != vec![self.p] {
            return bad("needs a prime p and k >= 1");
        }
        match self.kind {
            BlockKind::Cyclic(a) if self.p == 2 && a % 2 == 0 => bad("2-adic numerator must be odd"),
            BlockKind::Cyclic(a) if self.p != 2 && a % self.p == 0 => bad("numerator must be prime to p"),
            BlockKind::U | BlockKind::V if self.p != 2 => bad("U and V blocks are 2-adic"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BlockKind::Cyclic(a) => write!(f, "{}^{}:{}", self.p, self.k, a),
            BlockKind::U => write!(f, "{}^{}:U", self.p, self.k),
            BlockKind::V => write!(f, "{}^{}:V", self.p, self.k),
        }
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed block '{s}'"));
        let (pk, tag) = s.split_once(':').ok_or_else(bad)?;
        let (p, k) = pk.split_once('^').unwrap_or((pk, "1"));
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let k: u32 = k.trim().parse().map_err(|_| bad())?;
        let tag = tag.trim();
        let kind = match tag {
            "U" => BlockKind::U,
            "V" => BlockKind::V,
            "+" if p == 2 => BlockKind::Cyclic(1),
            "-" if p == 2 => BlockKind::Cyclic(-1),
            "+" => BlockKind::Cyclic(1),
            "-" => BlockKind::Cyclic(least_nonresidue(p)),
            t => BlockKind::Cyclic(t.trim_start_matches('+').parse().map_err(|_| bad())?),
        };
        let block = Block { p, k, kind };
        block.validate()?;
        Ok(block)
    }
}

pub(crate) fn least_nonresidue(p: i64) -> i64 {
    (2..p).find(|&a| legendre(a, p) == -1).unwrap_or(1)
}

pub(crate) fn legendre(a: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut base = a.rem_euclid(p);
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == p - 1 {
        -1
    } else {
        r
    }
}

pub fn parse_blocks(spec: &str) -> Result<Vec<Block>> {
    let spec = spec.trim();
    if spec.is_empty() || spec == "0" || spec == "trivial" {
        return Ok(Vec::new());
    }
    // split on '+' separators but not on the sign of a tag
    let mut out = Vec::new();
    let mut cur = String::new();
    let chars: Vec<char> = spec.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let after_colon = cur.trim_end().ends_with(':');
        if c == '+' && !after_colon {
            let _ = i;
            out.push(cur.trim().parse()?);
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse(format!("dangling '+' in '{spec}'")));
    }
    out.push(cur.trim().parse()?);
    Ok(out)
}

pub fn fqm_from_blocks(blocks: &[Block]) -> FiniteQuadraticModule {
    blocks.iter().fold(FiniteQuadraticModule::trivial(), |acc, b| acc.direct_sum(&b.module()))
}

/// A negative definite lattice whose discriminant form is the block, when the
/// table has one.
pub fn realize_block(block: &Block) -> Option<GramLattice> {
    let m = block.modulus();
    let target = block.module();
    let candidates: Vec<GramLattice> = match (block.p, block.kind) {
        (2, BlockKind::Cyclic(_)) => {
            let mut c = vec![rank_one(-m)];
            if m <= 1 << 10 {
                c.push(ade(Ade::A((m - 1) as usize)));
            }
            if m == 2 {
                c.push(ade(Ade::E(7)));
            }
            if m == 4 {
                c.extend([ade(Ade::D(5)), ade(Ade::D(7))]);
            }
            c
        }
        (2, BlockKind::U) if m == 2 => vec![ade(Ade::D(8))],
        (2, BlockKind::V) if m == 2 => vec![ade(Ade::D(4))],
        (_, BlockKind::Cyclic(_)) if block.p != 2 => {
            let mut c = Vec::new();
            if m <= 1 << 10 {
                c.push(ade(Ade::A((m - 1) as usize)));
            }
            if m == 3 {
                c.push(ade(Ade::E(6)));
            }
            c
        }
        _ => Vec::new(),
    };
    candidates.into_iter().find(|l| {
        super::discriminant_form(l).map(|d| d.module.is_isomorphic(&target)).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::discriminant_form;
    use crate::lattice::named::parse_lattice;

    #[test]
    fn parse_examples() {
        assert!(parse_blocks("").unwrap().is_empty());
        let b = parse_blocks("2^1:-1 + 3^1:+").unwrap();
        assert_eq!(b, vec![Block { p: 2, k: 1, kind: BlockKind::Cyclic(-1) }, Block { p: 3, k: 1, kind: BlockKind::Cyclic(1) }]);
        assert_eq!(parse_blocks("3^1:-").unwrap()[0].kind, BlockKind::Cyclic(2));
        assert_eq!(parse_blocks("2^2:U+2^1:V").unwrap().len(), 2);
        for bad in ["2^1:2", "4^1:+", "3^1:U", "3^1:3", "2^0:1", "x", "2^1:-1+"] {
            assert!(parse_blocks(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn blocks_match_lattices() {
        let a1 = discriminant_form(&parse_lattice("<-2>").unwrap()).unwrap().module;
        assert!(fqm_from_blocks(&parse_blocks("2^1:-1").unwrap()).is_isomorphic(&a1));
        let b = fqm_from_blocks(&parse_blocks("3^1:+").unwrap());
        assert_eq!(b.q(&[1]), Rational64::new(2, 3));
        let e6 = discriminant_form(&parse_lattice("E6").unwrap()).unwrap().module;
        assert!(b.is_isomorphic(&e6));
        assert_eq!(b.milgram_signature(1e-9).unwrap(), 2); // -6 mod 8
    }

    #[test]
    fn realization_table() {
        for spec in ["2^1:-1", "2^1:1", "2^1:U", "2^1:V", "3^1:-", "3^1:+", "2^2:-1", "2^2:3", "2^3:-1", "5^1:-", "7^1:+"] {
            let block: Block = spec.parse().unwrap();
            let l = realize_block(&block).unwrap_or_else(|| panic!("no realization for {spec}"));
            let d = discriminant_form(&l).unwrap().module;
            assert!(d.is_isomorphic(&block.module()), "{spec}");
        }
    }
}
