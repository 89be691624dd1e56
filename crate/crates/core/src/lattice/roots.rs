//! Root systems of negative definite lattices and their ADE types.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::short::roots_of_gram;
use super::{rank_of, restrict_gram, GramLattice};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// An irreducible simply laced root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ade {
    A(usize),
    D(usize),
    E(usize),
}

impl Ade {
    pub fn rank(self) -> usize {
        match self {
            Ade::A(k) | Ade::D(k) | Ade::E(k) => k,
        }
    }

    /// Number of roots (both signs).
    pub fn root_count(self) -> usize {
        match self {
            Ade::A(k) => k * (k + 1),
            Ade::D(k) => 2 * k * (k - 1),
            Ade::E(6) => 72,
            Ade::E(7) => 126,
            Ade::E(8) => 240,
            Ade::E(k) => unreachable!("E{k} is not a root system"),
        }
    }

    pub fn is_valid(self) -> bool {
        match self {
            Ade::A(k) => k >= 1,
            Ade::D(k) => k >= 4,
            Ade::E(k) => (6..=8).contains(&k),
        }
    }

    /// All irreducible types of the given rank.
    pub fn of_rank(k: usize) -> Vec<Ade> {
        [Ade::A(k), Ade::D(k), Ade::E(k)].into_iter().filter(|t| t.is_valid()).collect()
    }

    /// Classifies by `(rank, root count)`, which determines the type.
    pub fn classify(rank: usize, root_count: usize) -> Option<Ade> {
        Ade::of_rank(rank).into_iter().find(|t| t.root_count() == root_count)
    }
}

impl fmt::Display for Ade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ade::A(k) => write!(f, "A{k}"),
            Ade::D(k) => write!(f, "D{k}"),
            Ade::E(k) => write!(f, "E{k}"),
        }
    }
}

impl FromStr for Ade {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown root system '{s}'"));
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let k: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match head {
            'A' => Ade::A(k),
            'D' => Ade::D(k),
            'E' => Ade::E(k),
            _ => return Err(bad()),
        };
        if t.is_valid() {
            Ok(t)
        } else {
            Err(bad())
        }
    }
}

/// Checks that `(rank, root count)` separates the irreducible types up to `max_rank`.
pub fn ade_table_is_injective(max_rank: usize) -> bool {
    let mut seen = HashSet::new();
    (1..=max_rank).flat_map(Ade::of_rank).all(|t| seen.insert((t.rank(), t.root_count())))
}

/// One irreducible component of a root system, with its simple roots in ambient
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootComponent {
    pub ade: Ade,
    pub simple_roots: Matrix<i64>,
    /// Positive roots of the component (one per `±` pair).
    pub positive_roots: Matrix<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDecomposition {
    pub components: Vec<RootComponent>,
}

impl RootDecomposition {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.ade.rank()).sum()
    }

    /// Basis of `R(N)`: the union of the simple roots of all components.
    pub fn basis(&self) -> Matrix<i64> {
        self.components.iter().flat_map(|c| c.simple_roots.iter().cloned()).collect()
    }

    pub fn types(&self) -> Vec<Ade> {
        let mut t: Vec<Ade> = self.components.iter().map(|c| c.ade).collect();
        t.sort();
        t
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn label(&self) -> String {
        if self.is_empty() {
            return "0".into();
        }
        self.types().iter().map(|t| t.to_string()).collect::<Vec<_>>().join("+")
    }
}

/// The sublattice generated by the `(-2)`-vectors, split into ADE components.
pub fn root_sublattice(lattice: &GramLattice) -> Result<RootDecomposition> {
    if !lattice.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    decompose(lattice.gram(), roots_of_gram(lattice.gram())?)
}

/// Decomposes a set of positive roots (lexicographically positive, one per pair).
pub(crate) fn decompose(gram: &[Vec<i64>], positive: Vec<Vec<i64>>) -> Result<RootDecomposition> {
    let n = positive.len();
    let pair = |a: &[i64], b: &[i64]| super::pair_with(gram, a, b);
    // union-find over the root graph
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in 0..i {
            if pair(&positive[i], &positive[j]) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Vec<i64>>)> = Vec::new();
    for (i, root) in positive.iter().enumerate() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(root.clone()),
            None => groups.push((r, vec![root.clone()])),
        }
    }
    let mut components = Vec::new();
    for (_, roots) in groups {
        let rank = rank_of(&roots);
        let ade = Ade::classify(rank, 2 * roots.len()).ok_or_else(|| {
            Error::InconsistentForm(format!("root component of rank {rank} with {} roots", 2 * roots.len()))
        })?;
        let simple = simple_roots(&roots);
        assert_eq!(simple.len(), rank, "simple roots of {ade} must form a basis");
        components.push(RootComponent { ade, simple_roots: simple, positive_roots: roots });
    }
    components.sort_by(|a, b| a.ade.cmp(&b.ade).then_with(|| a.simple_roots.cmp(&b.simple_roots)));
    Ok(RootDecomposition { components })
}

/// Positive roots that are not sums of two positive roots.
fn simple_roots(positive: &[Vec<i64>]) -> Matrix<i64> {
    let set: HashSet<&[i64]> = positive.iter().map(|v| v.as_slice()).collect();
    positive
        .iter()
        .filter(|r| {
            !positive.iter().any(|s| {
                let diff: Vec<i64> = r.iter().zip(s.iter()).map(|(a, b)| a - b).collect();
                set.contains(diff.as_slice())
            })
        })
        .cloned()
        .collect()
}

/// Gram matrix of the simple roots of a component (a negative Cartan matrix).
pub fn component_gram(gram: &[Vec<i64>], c: &RootComponent) -> Matrix<i64> {
    restrict_gram(gram, &c.simple_roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named::{ade, cartan, e8, parse_lattice};

    #[test]
    fn table_is_injective() {
        assert!(ade_table_is_injective(40));
    }

    #[test]
    fn decomposition_examples() {
        let n = parse_lattice("2A1+<-6>").unwrap();
        assert_eq!(root_sublattice(&n).unwrap().types(), vec![Ade::A(1), Ade::A(1)]);
        assert_eq!(root_sublattice(&e8()).unwrap().types(), vec![Ade::E(8)]);
        assert!(root_sublattice(&parse_lattice("<-4>").unwrap()).unwrap().is_empty());
        let mixed = parse_lattice("D4+A2+E6+A1").unwrap();
        let d = root_sublattice(&mixed).unwrap();
        assert_eq!(d.types(), vec![Ade::A(1), Ade::A(2), Ade::D(4), Ade::E(6)]);
        assert_eq!(d.rank(), 13);
    }

    #[test]
    fn simple_roots_give_cartan_matrices() {
        for t in [Ade::A(3), Ade::D(5), Ade::E(6), Ade::E(7), Ade::E(8)] {
            let l = ade(t);
            let d = root_sublattice(&l).unwrap();
            let c = &d.components[0];
            let g = component_gram(l.gram(), c);
            assert!(g.iter().enumerate().all(|(i, r)| r[i] == -2));
            assert!(g.iter().flatten().all(|&x| x == -2 || x == 0 || x == 1), "{t}: {g:?}");
            assert_eq!(crate::linalg::determinant(&crate::linalg::to_big(&g)), crate::linalg::determinant(&crate::linalg::to_big(&cartan(t))));
        }
    }

    #[test]
    fn root_counts_match_closed_forms() {
        for t in [Ade::A(1), Ade::A(2), Ade::A(5), Ade::D(4), Ade::D(6), Ade::E(6), Ade::E(7), Ade::E(8)] {
            let count = crate::lattice::roots(&ade(t)).unwrap().len() * 2;
            assert_eq!(count, t.root_count(), "{t}");
        }
    }
}
