//! Discriminant forms of bounded order that pass the Milgram and length filters.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Config, Q};
use crate::discform::least_nonresidue;
use crate::discform::{discriminant_form, fqm_from_blocks, realize_block, splits_2u_by_length, Block, BlockKind, FiniteQuadraticModule, FqmJson};
use crate::error::Result;
use crate::lattice::named::{e8, hyperbolic};
use crate::lattice::{direct_sum_all, GramLattice};

/// Block realizations are only attempted up to this modulus (larger `A_{m-1}`
/// candidates are costly and rarely wanted).
const REALIZE_MODULUS: i64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub blocks: String,
    pub order: i64,
    pub milgram_signature: u8,
    pub module: FqmJson,
    /// `2U ⊕ R` with `R` negative definite of rank `n - 2`, when the block
    /// table provides one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<GramLattice>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePage {
    pub n: usize,
    pub bound: Q,
    pub offset: usize,
    pub forms: Vec<Candidate>,
    /// Offset of the next page, if more forms exist.
    pub next_offset: Option<usize>,
}

/// Forms `A` with `|A| < B^2`, Milgram signature `≡ 2 - n (mod 8)` and the
/// length condition for `n`, ordered by `|A|`; `limit` forms from `offset`.
pub fn enumerate_candidates(n: usize, bound: &BigRational, cfg: &Config, offset: usize, limit: usize) -> Result<CandidatePage> {
    let b2 = bound * bound;
    let mut index = 0usize;
    let mut forms = Vec::new();
    let mut next_offset = None;
    let mut d: i64 = 1;
    'orders: while BigRational::from_integer(BigInt::from(d)) < b2 {
        for (blocks, a) in forms_of_order(d, n, cfg.tol)? {
            if index >= offset {
                if forms.len() == limit {
                    next_offset = Some(index);
                    break 'orders;
                }
                forms.push(candidate(&blocks, &a, n, cfg.tol)?);
            }
            index += 1;
        }
        d = match d.checked_add(1) {
            Some(x) => x,
            None => break,
        };
    }
    Ok(CandidatePage { n, bound: Q(bound.clone()), offset, forms, next_offset })
}

fn candidate(blocks: &[Block], a: &FiniteQuadraticModule, n: usize, tol: f64) -> Result<Candidate> {
    Ok(Candidate {
        blocks: if blocks.is_empty() { "trivial".into() } else { blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("+") },
        order: a.order(),
        milgram_signature: a.milgram_signature(tol)?,
        module: a.to_json(),
        realization: realize(blocks, a, n)?,
    })
}

fn realize(blocks: &[Block], a: &FiniteQuadraticModule, n: usize) -> Result<Option<GramLattice>> {
    let mut parts = vec![hyperbolic(), hyperbolic()];
    let mut rank = 0;
    for b in blocks {
        if b.modulus() > REALIZE_MODULUS {
            return Ok(None);
        }
        let Some(r) = realize_block(b) else { return Ok(None) };
        rank += r.rank();
        parts.push(r);
    }
    if rank > n - 2 || (n - 2 - rank) % 8 != 0 {
        return Ok(None);
    }
    parts.extend(std::iter::repeat_with(e8).take((n - 2 - rank) / 8));
    let l = direct_sum_all(&parts);
    // the Milgram filter already forces the rank congruence; keep only genuine round trips
    Ok(discriminant_form(&l)?.module.is_isomorphic(a).then_some(l))
}

/// All forms of order `d` (up to isomorphism) built from standard blocks that
/// pass the filters for `n`.
pub fn forms_of_order(d: i64, n: usize, tol: f64) -> Result<Vec<(Vec<Block>, FiniteQuadraticModule)>> {
    let mut parts: Vec<Vec<(Vec<Block>, FiniteQuadraticModule)>> = Vec::new();
    for (p, e) in factor(d) {
        let max_len = if p == 2 { n as i64 - 3 } else { n as i64 - 4 };
        let opts: Vec<_> = p_parts(p, e).into_iter().filter(|(_, a)| a.length_p(p) as i64 <= max_len).collect();
        if opts.is_empty() {
            return Ok(Vec::new());
        }
        parts.push(opts);
    }
    let target = (2 - n as i64).rem_euclid(8) as u8;
    let mut out = vec![(Vec::new(), FiniteQuadraticModule::trivial())];
    for opts in parts {
        let mut next = Vec::new();
        for (bs, a) in &out {
            for (cs, c) in &opts {
                let mut blocks = bs.clone();
                blocks.extend_from_slice(cs);
                next.push((blocks, a.direct_sum(c)));
            }
        }
        out = next;
    }
    let mut kept = Vec::new();
    for (blocks, a) in out {
        if a.milgram_signature(tol)? == target && splits_2u_by_length(&a, n) {
            kept.push((blocks, a));
        }
    }
    Ok(kept)
}

fn factor(mut d: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        let mut e = 0;
        while d % p == 0 {
            d /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

/// Block kinds of level `p^k` with the exponent they contribute.
fn kinds(p: i64, k: u32) -> Vec<(Block, u32)> {
    let mut out = Vec::new();
    if p == 2 {
        let tags: &[i64] = if k == 1 { &[1, 3] } else { &[1, 3, 5, 7] };
        out.extend(tags.iter().map(|&a| (Block { p, k, kind: BlockKind::Cyclic(a) }, k)));
        out.push((Block { p, k, kind: BlockKind::U }, 2 * k));
        out.push((Block { p, k, kind: BlockKind::V }, 2 * k));
    } else {
        out.push((Block { p, k, kind: BlockKind::Cyclic(1) }, k));
        out.push((Block { p, k, kind: BlockKind::Cyclic(least_nonresidue(p)) }, k));
    }
    out
}

/// Pairwise non-isomorphic `p`-groups of order `p^e` built from blocks.
fn p_parts(p: i64, e: u32) -> Vec<(Vec<Block>, FiniteQuadraticModule)> {
    let all: Vec<(Block, u32)> = (1..=e).flat_map(|k| kinds(p, k)).collect();
    let mut found: Vec<(Vec<Block>, FiniteQuadraticModule)> = Vec::new();
    let mut cur = Vec::new();
    fn go(all: &[(Block, u32)], start: usize, left: u32, cur: &mut Vec<Block>, found: &mut Vec<(Vec<Block>, FiniteQuadraticModule)>) {
        if left == 0 {
            let a = fqm_from_blocks(cur);
            if !found.iter().any(|(_, b)| b.is_isomorphic(&a)) {
                found.push((cur.clone(), a));
            }
            return;
        }
        for i in start..all.len() {
            let (b, w) = all[i];
            if w <= left {
                cur.push(b);
                go(all, i, left - w, cur, found);
                cur.pop();
            }
        }
    }
    go(&all, 0, e, &mut cur, &mut found);
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn unit_bound_gives_unimodular_only() {
        let page = enumerate_candidates(10, &int(1), &Config::default(), 0, 10).unwrap();
        assert!(page.forms.is_empty());
        let page = enumerate_candidates(10, &BigRational::new(3.into(), 2.into()), &Config::default(), 0, 10).unwrap();
        assert_eq!(page.forms.len(), 1);
        assert_eq!(page.forms[0].order, 1);
    }

    #[test]
    fn z2_forms_are_filtered_at_n10() {
        // |A| < 3: only the trivial form survives the Milgram filter for n = 10
        let b = BigRational::new(7.into(), 4.into());
        let page = enumerate_candidates(10, &b, &Config::default(), 0, 10).unwrap();
        assert_eq!(page.forms.iter().map(|f| f.order).collect::<Vec<_>>(), vec![1]);
        assert!(page.forms[0].realization.is_some());
    }

    #[test]
    fn odd_p_parts() {
        // 3-groups of order 9: Z/9 (two classes) and (Z/3)^2 (two classes)
        assert_eq!(p_parts(3, 2).len(), 4);
        assert_eq!(p_parts(2, 1).len(), 2);
    }

    #[test]
    fn pages_are_consistent() {
        let cfg = Config::default();
        let b = int(6);
        let all = enumerate_candidates(6, &b, &cfg, 0, 1000).unwrap();
        assert!(all.next_offset.is_none());
        let first = enumerate_candidates(6, &b, &cfg, 0, 3).unwrap();
        let second = enumerate_candidates(6, &b, &cfg, first.next_offset.unwrap(), 3).unwrap();
        assert_eq!(first.forms[..], all.forms[..3]);
        assert_eq!(second.forms[..], all.forms[3..6]);
    }
}
