//! Named lattices and the `2U+E8+3A1` expression grammar.
//!
//! Root lattices are negative definite: Cartan matrices with `-2` on the
//! diagonal and `+1` for every edge of the Dynkin diagram.

use serde::{Deserialize, Serialize};

use super::roots::Ade;
use super::{direct_sum_all, GramLattice};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub fn hyperbolic() -> GramLattice {
    GramLattice { name: Some("U".into()), gram: vec![vec![0, 1], vec![1, 0]] }
}

pub fn rank_one(k: i64) -> GramLattice {
    assert!(k != 0 && k % 2 == 0, "<{k}> is not an even nondegenerate lattice");
    GramLattice { name: Some(format!("<{k}>")), gram: vec![vec![k]] }
}

pub fn ade(t: Ade) -> GramLattice {
    GramLattice { name: Some(t.to_string()), gram: cartan(t) }
}

pub fn e8() -> GramLattice {
    ade(Ade::E(8))
}

/// `L(k)`: the same module with the form multiplied by `k`.
pub fn scaled(l: &GramLattice, k: i64) -> GramLattice {
    let gram = l.gram.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
    let name = l.name.as_ref().map(|n| format!("{n}({k})"));
    GramLattice { name, gram }
}

/// Negative Cartan matrix of an ADE type.
pub fn cartan(t: Ade) -> Matrix<i64> {
    let n = t.rank();
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    let mut edge = |i: usize, j: usize| {
        g[i][j] = 1;
        g[j][i] = 1;
    };
    match t {
        Ade::A(_) => (1..n).for_each(|i| edge(i - 1, i)),
        Ade::D(_) => {
            (1..n - 1).for_each(|i| edge(i - 1, i));
            edge(n - 3, n - 1);
        }
        Ade::E(_) => {
            (1..n - 1).for_each(|i| edge(i - 1, i));
            edge(2, n - 1);
        }
    }
    g
}

/// `II_{2,26} = 2U + 3E8`.
pub fn ii_2_26() -> GramLattice {
    parse_expression("2U+3E8").expect("valid expression")
}

/// On-disk lattice format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeFile {
    #[serde(default)]
    pub name: Option<String>,
    pub gram: Matrix<i64>,
}

impl LatticeFile {
    pub fn from_lattice(l: &GramLattice) -> Self {
        LatticeFile { name: l.name.clone(), gram: l.gram.clone() }
    }

    pub fn into_lattice(self) -> Result<GramLattice> {
        let l = GramLattice::new(self.gram)?;
        Ok(match self.name {
            Some(n) => l.named(n),
            None => l,
        })
    }
}

/// Accepts either a JSON lattice object or an expression such as `2U+E8+3A1`.
pub fn parse_lattice(input: &str) -> Result<GramLattice> {
    let trimmed = input.trim();
    if trimmed.starts_with('{') {
        let file: LatticeFile = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_lattice()
    } else {
        parse_expression(trimmed)
    }
}

/// Parses `term (+ term)*` where `term = [mult] atom [(scale)]` and atom is one of
/// `U`, `<k>`, `A<k>`, `D<k>`, `E6`, `E7`, `E8`.
pub fn parse_expression(expr: &str) -> Result<GramLattice> {
    let cleaned: String = expr.replace('⊕', "+").chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty lattice expression".into()));
    }
    let mut parts = Vec::new();
    for term in cleaned.split('+') {
        let (mult, atom) = parse_term(term)?;
        for _ in 0..mult {
            parts.push(atom.clone());
        }
    }
    let mut l = direct_sum_all(parts.iter());
    l.name = Some(cleaned.clone());
    if l.rank() == 0 {
        return Err(Error::Parse(format!("'{cleaned}' describes the zero lattice")));
    }
    Ok(l)
}

fn parse_term(term: &str) -> Result<(usize, GramLattice)> {
    let bad = || Error::Parse(format!("cannot parse lattice term '{term}'"));
    let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
    let mult = if digits == 0 { 1 } else { term[..digits].parse::<usize>().map_err(|_| bad())? };
    let mut rest = &term[digits..];
    let mut scale = None;
    if let Some(body) = rest.strip_suffix(')') {
        let open = body.rfind('(').ok_or_else(bad)?;
        scale = Some(body[open + 1..].parse::<i64>().map_err(|_| bad())?);
        rest = &body[..open];
    }
    let atom = if rest == "U" {
        hyperbolic()
    } else if let Some(inner) = rest.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
        let k: i64 = inner.parse().map_err(|_| bad())?;
        if k == 0 || k % 2 != 0 {
            return Err(Error::Parse(format!("<{k}> must be even and nonzero")));
        }
        rank_one(k)
    } else {
        let t: Ade = rest.parse().map_err(|_| bad())?;
        ade(t)
    };
    let atom = match scale {
        Some(0) => return Err(bad()),
        Some(k) => scaled(&atom, k),
        None => atom,
    };
    if mult == 0 {
        return Err(bad());
    }
    Ok((mult, atom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums() {
        let l = parse_lattice("2U+E8+3A1").unwrap();
        assert_eq!(l.rank(), 4 + 8 + 3);
        assert_eq!(l.signature(), (2, 13));
        assert_eq!(l.determinant().to_string(), "-8");
        let l = parse_lattice("U + <4> ").unwrap();
        assert_eq!(l.gram(), &vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 4]]);
        let l = parse_lattice("U(2)+2<-2>").unwrap();
        assert_eq!(l.gram()[0], vec![0, 2, 0, 0]);
    }

    #[test]
    fn parses_json() {
        let l = parse_lattice(r#"{"name": "A1", "gram": [[-2]]}"#).unwrap();
        assert_eq!(l.name(), Some("A1"));
        assert!(parse_lattice(r#"{"gram": [[1]]}"#).is_err());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "2X", "<3>", "<0>", "0U", "A0", "E9", "D3", "U(0)", "2U+"] {
            assert!(parse_lattice(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn determinants_of_named_lattices() {
        let cases = [("A1", 2), ("A2", 3), ("A4", 5), ("D4", 4), ("D5", 4), ("E6", 3), ("E7", 2), ("E8", 1)];
        for (name, det) in cases {
            let l = parse_lattice(name).unwrap();
            assert_eq!(l.determinant().magnitude().to_string(), det.to_string(), "{name}");
            assert!(l.is_negative_definite());
        }
    }
}
