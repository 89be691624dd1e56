//! Helpers shared by the integration tests: random lattices and basis changes.
#![allow(dead_code)]

use rand::Rng;
use reflat::lattice::named::{ade, hyperbolic, rank_one, scaled};
use reflat::lattice::{direct_sum_all, Ade, GramLattice};
use reflat::linalg::{determinant, mat_mul, to_big, transpose, Matrix};

/// A random unimodular matrix: a product of elementary moves and swaps.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> Matrix<i64> {
    let mut u: Matrix<i64> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n < 2 {
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_bool(0.2) {
            u.swap(i, j);
        } else {
            let c = if rng.gen_bool(0.5) { 1 } else { -1 };
            let row = u[j].clone();
            for (a, b) in u[i].iter_mut().zip(row) {
                *a += c * b;
            }
        }
    }
    u
}

/// `U G U^T`.
pub fn conjugate(l: &GramLattice, u: &[Vec<i64>]) -> GramLattice {
    let g = mat_mul(&mat_mul(u, l.gram()), &transpose(u));
    GramLattice::new(g).expect("basis change keeps the lattice even and nondegenerate")
}

pub fn random_conjugate<R: Rng>(rng: &mut R, l: &GramLattice) -> GramLattice {
    let n = l.rank();
    let u = random_unimodular(rng, n, 2 * n);
    conjugate(l, &u)
}

/// A random even lattice of rank `<= max_rank` and `|det| <= max_det`, as a
/// direct sum of small pieces in a scrambled basis.
pub fn random_even_lattice<R: Rng>(rng: &mut R, max_rank: usize, max_det: i64) -> GramLattice {
    loop {
        let target = rng.gen_range(1..=max_rank);
        let mut parts: Vec<GramLattice> = Vec::new();
        let mut rank = 0;
        while rank < target {
            let piece = random_piece(rng, target - rank);
            rank += piece.rank();
            parts.push(piece);
        }
        let l = direct_sum_all(&parts);
        let det = determinant(&to_big(l.gram()));
        if det.magnitude() <= &num_bigint::BigUint::from(max_det as u64) {
            return random_conjugate(rng, &l);
        }
    }
}

fn random_piece<R: Rng>(rng: &mut R, room: usize) -> GramLattice {
    loop {
        let piece = match rng.gen_range(0..6) {
            0 => {
                let k = rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 };
                rank_one(2 * k)
            }
            1 => hyperbolic(),
            2 => scaled(&hyperbolic(), rng.gen_range(2..=3)),
            3 => {
                let t = [Ade::A(1), Ade::A(2), Ade::A(3), Ade::A(4), Ade::D(4), Ade::D(5), Ade::E(6), Ade::E(7), Ade::E(8)]
                    [rng.gen_range(0..9)];
                let l = ade(t);
                if rng.gen_bool(0.3) {
                    scaled(&l, -1)
                } else {
                    l
                }
            }
            _ => {
                let (a, c) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                let b = rng.gen_range(-3..=3);
                match GramLattice::new(vec![vec![2 * a, b], vec![b, 2 * c]]) {
                    Ok(l) => l,
                    Err(_) => continue,
                }
            }
        };
        if piece.rank() <= room {
            return piece;
        }
    }
}

/// `{x : (x, v) even}` for a vector `v` with some odd pairing: index 2.
pub fn index_two_sublattice(l: &GramLattice, v: &[i64]) -> GramLattice {
    let a: Vec<i64> = l.pairings(v).iter().map(|x| x.rem_euclid(2)).collect();
    let i = a.iter().position(|&x| x == 1).expect("v pairs oddly with some basis vector");
    let n = l.rank();
    let basis: Matrix<i64> = (0..n)
        .map(|j| {
            let mut row = vec![0i64; n];
            if j == i {
                row[i] = 2;
            } else {
                row[j] = 1;
                row[i] = -a[j];
            }
            row
        })
        .collect();
    GramLattice::new(l.restrict(&basis)).expect("sublattice of an even lattice")
}
