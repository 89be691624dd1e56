//! Isotropic subgroups, `G^⊥/G`, and the economic subgroup search.

use std::collections::{HashSet, VecDeque};

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{Element, FiniteQuadraticModule};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// An isotropic subgroup, by generators and its sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropicSubgroup {
    pub generators: Vec<Element>,
    pub order: i64,
    #[serde(skip)]
    members: Vec<usize>,
}

impl IsotropicSubgroup {
    pub fn trivial(a: &FiniteQuadraticModule) -> Self {
        IsotropicSubgroup { generators: Vec::new(), order: 1, members: vec![a.index_of(&vec![0; a.rank()])] }
    }

    /// Checks isotropy and builds the subgroup generated by `generators`.
    pub fn new(a: &FiniteQuadraticModule, generators: Vec<Element>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if !a.is_isotropic(g) || generators[..i].iter().any(|h| a.bn_pair(g, h) != 0) {
                return Err(Error::NotIsotropic);
            }
        }
        let elems = closure(a, &generators);
        let members = sorted_indices(a, &elems);
        let order = members.len() as i64;
        Ok(IsotropicSubgroup { generators: generators.iter().map(|g| a.reduce(g)).collect(), order, members })
    }

    pub fn elements(&self, a: &FiniteQuadraticModule) -> Vec<Element> {
        let all: Vec<Element> = a.elements().collect();
        self.members.iter().map(|&i| all[i].clone()).collect()
    }
}

fn sorted_indices(a: &FiniteQuadraticModule, elems: &[Element]) -> Vec<usize> {
    let mut v: Vec<usize> = elems.iter().map(|x| a.index_of(x)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// All elements of the subgroup generated by `gens`.
fn closure(a: &FiniteQuadraticModule, gens: &[Element]) -> Vec<Element> {
    let mut elems = vec![vec![0; a.rank()]];
    let mut seen: HashSet<Element> = elems.iter().cloned().collect();
    for g in gens {
        extend_by(a, &mut elems, &mut seen, g);
    }
    elems
}

fn extend_by(a: &FiniteQuadraticModule, elems: &mut Vec<Element>, seen: &mut HashSet<Element>, g: &[i64]) {
    if seen.contains(&a.reduce(g)) {
        return;
    }
    let base = elems.clone();
    let mut step = a.reduce(g);
    while !seen.contains(&step) {
        for e in &base {
            let s = a.add(e, &step);
            if seen.insert(s.clone()) {
                elems.push(s);
            }
        }
        step = a.add(&step, g);
    }
}

/// `G^⊥ = {x : b(x, G) = 0}` as a list of elements.
pub(crate) fn perp_elements(a: &FiniteQuadraticModule, gens: &[Element]) -> Vec<Element> {
    a.elements().filter(|x| gens.iter().all(|g| a.bn_pair(x, g) == 0)).collect()
}

/// Breadth-first enumeration of isotropic subgroups, trivial group first, each
/// subgroup produced once. At most `max_count` subgroups are yielded.
pub fn isotropic_subgroups(a: &FiniteQuadraticModule, max_count: usize) -> IsotropicSubgroups<'_> {
    let start = IsotropicSubgroup::trivial(a);
    let mut seen = HashSet::new();
    seen.insert(start.members.clone());
    IsotropicSubgroups { module: a, all: a.elements().collect(), queue: VecDeque::from([start]), seen, yielded: 0, max_count, truncated: false }
}

pub struct IsotropicSubgroups<'a> {
    module: &'a FiniteQuadraticModule,
    all: Vec<Element>,
    queue: VecDeque<IsotropicSubgroup>,
    seen: HashSet<Vec<usize>>,
    yielded: usize,
    max_count: usize,
    truncated: bool,
}

impl IsotropicSubgroups<'_> {
    /// True when the enumeration stopped at `max_count` with subgroups left over.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn children(&mut self, g: &IsotropicSubgroup) {
        let a = self.module;
        let members: HashSet<usize> = g.members.iter().copied().collect();
        let mut covered = vec![false; self.all.len()];
        for &m in &g.members {
            covered[m] = true;
        }
        let group: Vec<Element> = g.members.iter().map(|&i| self.all[i].clone()).collect();
        for (idx, x) in self.all.iter().enumerate() {
            if covered[idx] || !a.is_isotropic(x) || g.generators.iter().any(|h| a.bn_pair(x, h) != 0) {
                continue;
            }
            // only prime-order steps over G; every larger subgroup is reached through them
            let order_mod_g = (1..=a.element_order(x)).find(|&j| members.contains(&a.index_of(&a.scale(j, x)))).unwrap();
            if !is_prime(order_mod_g) {
                continue;
            }
            let mut elems = group.clone();
            let mut seen: HashSet<Element> = group.iter().cloned().collect();
            extend_by(a, &mut elems, &mut seen, x);
            let child_members = sorted_indices(a, &elems);
            for &m in &child_members {
                covered[m] = true;
            }
            if self.seen.insert(child_members.clone()) {
                let mut generators = g.generators.clone();
                generators.push(x.clone());
                self.queue.push_back(IsotropicSubgroup { generators, order: child_members.len() as i64, members: child_members });
            }
        }
    }
}

impl Iterator for IsotropicSubgroups<'_> {
    type Item = IsotropicSubgroup;

    fn next(&mut self) -> Option<IsotropicSubgroup> {
        if self.yielded >= self.max_count {
            self.truncated = !self.queue.is_empty();
            return None;
        }
        let g = self.queue.pop_front()?;
        self.children(&g);
        self.yielded += 1;
        Some(g)
    }
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

/// Generators of a subgroup given by its element list, chosen greedily.
fn generators_of(a: &FiniteQuadraticModule, elems: &[Element]) -> Vec<Element> {
    let mut gens: Vec<Element> = Vec::new();
    let mut span = vec![vec![0; a.rank()]];
    let mut seen: HashSet<Element> = span.iter().cloned().collect();
    let mut sorted = elems.to_vec();
    sorted.sort_by_key(|x| std::cmp::Reverse(a.element_order(x)));
    for x in sorted {
        if !seen.contains(&x) {
            extend_by(a, &mut span, &mut seen, &x);
            gens.push(x);
        }
    }
    gens
}

/// Hermite basis of `span(gens) + diag(d) Z^k`.
fn subgroup_lattice(a: &FiniteQuadraticModule, gens: &[Element]) -> Matrix<i64> {
    let k = a.rank();
    let mut rows: Matrix<i64> = gens.to_vec();
    for i in 0..k {
        let mut r = vec![0i64; k];
        r[i] = a.orders()[i];
        rows.push(r);
    }
    let h = linalg::hermite(&linalg::to_big(&rows)).basis();
    linalg::to_i64(&h).expect("subgroup lattice entries are bounded by the orders")
}

/// `G^⊥/G` with its induced form.
pub fn quotient_form(a: &FiniteQuadraticModule, g: &IsotropicSubgroup) -> Result<FiniteQuadraticModule> {
    let gens = &g.generators;
    for (i, x) in gens.iter().enumerate() {
        if !a.is_isotropic(x) || gens[..i].iter().any(|y| a.bn_pair(x, y) != 0) {
            return Err(Error::NotIsotropic);
        }
    }
    if a.rank() == 0 {
        return Ok(FiniteQuadraticModule::trivial());
    }
    let perp = perp_elements(a, gens);
    let perp_gens = generators_of(a, &perp);
    let bg = subgroup_lattice(a, gens);
    let bp = subgroup_lattice(a, &perp_gens);
    let bp_inv = linalg::inverse_rational(&linalg::rationals(&bp)).expect("full rank");
    let m = linalg::mat_mul_rational(&linalg::rationals(&bg), &bp_inv);
    let m: Matrix<i64> = m
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer().to_i64().expect("G ⊆ G^⊥ gives integral coordinates")).collect())
        .collect();
    let s = linalg::smith(&m);
    let q_inv = linalg::inverse_rational(&linalg::rationals(&s.right)).expect("unimodular");
    let q_inv: Matrix<i64> = q_inv.iter().map(|r| r.iter().map(|x| x.to_integer().to_i64().unwrap()).collect()).collect();
    let c = linalg::mat_mul(&q_inv, &bp);
    let mut orders = Vec::new();
    let mut elems = Vec::new();
    for (i, d) in s.diagonal.iter().enumerate() {
        if d.abs() > 1 {
            orders.push(d.abs());
            elems.push(a.reduce(&c[i]));
        }
    }
    let k = elems.len();
    let q: Vec<Rational64> = elems.iter().map(|x| a.q(x)).collect();
    let b: Matrix<Rational64> = (0..k).map(|i| (0..k).map(|j| a.b(&elems[i], &elems[j])).collect()).collect();
    FiniteQuadraticModule::new(orders, q, b)
}

/// Nikulin-type sufficient condition for a signature-(2,n) lattice to contain `2U`:
/// `l_2 ≤ n - 3` and `l_p ≤ n - 4` for odd `p`.
pub fn splits_2u_by_length(a: &FiniteQuadraticModule, n: usize) -> bool {
    let n = n as i64;
    a.primes().into_iter().all(|p| {
        let l = a.length_p(p) as i64;
        if p == 2 {
            l <= n - 3
        } else {
            l <= n - 4
        }
    })
}

/// Upper limit on the number of subgroups inspected by [`economic_isotropic`].
pub const ECONOMIC_SEARCH_CAP: usize = 200_000;

/// An isotropic `G` with `l(G^⊥/G)_2 ≤ 4`, `l(G^⊥/G)_p ≤ 3` and exponent of
/// `G^⊥/G` equal to `e(A)` or `e(A)/2`. Among the admissible subgroups, one
/// keeping the full exponent is preferred, then the largest.
pub fn economic_isotropic(a: &FiniteQuadraticModule) -> Result<(IsotropicSubgroup, FiniteQuadraticModule)> {
    let e = a.exponent();
    let mut best: Option<((bool, i64), IsotropicSubgroup, FiniteQuadraticModule)> = None;
    let mut it = isotropic_subgroups(a, ECONOMIC_SEARCH_CAP);
    for g in it.by_ref() {
        let quot = quotient_form(a, &g)?;
        let qe = quot.exponent();
        let lengths_ok = quot.primes().into_iter().all(|p| quot.length_p(p) <= if p == 2 { 4 } else { 3 });
        let exp_ok = qe == e || (e % 2 == 0 && qe == e / 2);
        if !(lengths_ok && exp_ok) {
            continue;
        }
        let key = (qe == e, g.order);
        if best.as_ref().map_or(true, |(k, _, _)| key > *k) {
            best = Some((key, g, quot));
        }
    }
    if it.truncated() && best.is_none() {
        return Err(Error::CapExceeded(format!("isotropic subgroup search stopped after {ECONOMIC_SEARCH_CAP} subgroups")));
    }
    best.map(|(_, g, q)| (g, q)).ok_or(Error::EconomicNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::discriminant_form;
    use crate::lattice::named::parse_lattice;

    fn module(expr: &str) -> FiniteQuadraticModule {
        discriminant_form(&parse_lattice(expr).unwrap()).unwrap().module
    }

    #[test]
    fn trivial_subgroup_gives_module_back() {
        let a = module("2U+D4+A2");
        let q = quotient_form(&a, &IsotropicSubgroup::trivial(&a)).unwrap();
        assert!(q.is_isomorphic(&a));
    }

    #[test]
    fn hyperbolic_pair_quotient_is_trivial() {
        let a = module("U(2)");
        let x = a.elements().find(|x| !a.is_zero(x) && a.is_isotropic(x)).unwrap();
        let g = IsotropicSubgroup::new(&a, vec![x]).unwrap();
        assert_eq!(quotient_form(&a, &g).unwrap().order(), 1);
    }

    #[test]
    fn z4_anisotropic() {
        let a = module("<-4>");
        let all: Vec<_> = isotropic_subgroups(&a, 100).collect();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn subgroup_counts_for_8a1() {
        // isotropic vectors of (Z/2)^8 with q = -wt/2: doubly even words; subgroups are
        // doubly even codes of length 8
        let a = module("8A1");
        let all: Vec<_> = isotropic_subgroups(&a, 100_000).collect();
        let count = |k: i64| all.iter().filter(|g| g.order == k).count();
        assert_eq!(count(1), 1);
        assert_eq!(count(2), 71);
        assert_eq!(count(16), 30);
        for g in &all {
            assert_eq!(quotient_form(&a, g).unwrap().order() * g.order * g.order, 256);
        }
    }

    #[test]
    fn economic_examples() {
        let a = module("2U+8A1");
        let (g, q) = economic_isotropic(&a).unwrap();
        assert!(q.length_p(2) <= 4);
        assert_eq!(q.exponent(), 2);
        // a doubly even [8,3] code: G^⊥/G = (Z/2)^2 keeps the exponent
        assert_eq!(g.order, 8);
        let (g, _) = economic_isotropic(&FiniteQuadraticModule::trivial()).unwrap();
        assert_eq!(g.order, 1);
        let (g, _) = economic_isotropic(&module("A1")).unwrap();
        assert_eq!(g.order, 1);
        let a = module("2U+4A2");
        let (_, q) = economic_isotropic(&a).unwrap();
        assert!(q.length_p(3) <= 3);
        assert_eq!(q.exponent(), 3);
    }

    #[test]
    fn length_condition() {
        assert!(splits_2u_by_length(&FiniteQuadraticModule::trivial(), 26));
        assert!(!splits_2u_by_length(&module("2U+8A1"), 10));
        assert!(splits_2u_by_length(&module("2U+E8+A1"), 11));
    }
}
