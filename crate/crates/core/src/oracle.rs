//! Slow, independent reference computations used to cross-check the main
//! algorithms. Nothing here shares code with the enumeration or chamber search
//! it checks: root lattices are handled in their classical coordinate models,
//! short vectors by plain coefficient boxes, and roots of `m^⊥` in `U ⊕ kA_1`
//! by solving the defining equations directly.

use crate::linalg::Matrix;

/// Every nonzero `v` with `|v^T G v| <= bound`, one per `±` pair (first nonzero
/// coordinate positive), by scanning the box `|v_i| <= sqrt(bound (G^{-1})_ii)`.
pub fn box_short_vectors(gram: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let n = gram.len();
    let sign = if gram.first().map_or(0, |r| r[0]) < 0 { -1 } else { 1 };
    let inv = float_inverse(gram);
    let radius: Vec<i64> = (0..n).map(|i| ((bound as f64) * (sign as f64) * inv[i][i]).max(0.0).sqrt().floor() as i64).collect();
    let mut out = Vec::new();
    let mut v: Vec<i64> = radius.iter().map(|r| -r).collect();
    if n == 0 {
        return out;
    }
    loop {
        let first = v.iter().find(|&&x| x != 0).copied();
        if first.is_some_and(|f| f > 0) {
            let norm = quad(gram, &v);
            if norm.abs() <= bound {
                out.push(v.clone());
            }
        }
        let mut i = 0;
        while i < n && v[i] == radius[i] {
            v[i] = -radius[i];
            i += 1;
        }
        if i == n {
            break;
        }
        v[i] += 1;
    }
    out
}

/// Roots of a negative definite Gram matrix, one per pair.
pub fn box_roots(gram: &[Vec<i64>]) -> Vec<Vec<i64>> {
    box_short_vectors(gram, 2).into_iter().filter(|v| quad(gram, v) == -2).collect()
}

fn quad(g: &[Vec<i64>], v: &[i64]) -> i64 {
    g.iter().zip(v).map(|(row, vi)| vi * row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>()).sum()
}

fn float_inverse(g: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<f64> = r.iter().map(|&x| x as f64).collect();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        for x in a[c].iter_mut() {
            *x /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for k in 0..2 * n {
                        a[r][k] -= f * a[c][k];
                    }
                }
            }
        }
    }
    // widen slightly so rounding never shrinks the box
    a.into_iter().map(|r| r[n..].iter().map(|x| x * (1.0 + 1e-9) + x.signum() * 1e-9).collect()).collect()
}

/// Largest norm `(m,m) < 0` of a regular vector (not orthogonal to any root) in
/// a small negative definite lattice, by scanning a coefficient box of the
/// given radius. `None` if no regular vector lies in the box.
pub fn box_regular_norm(gram: &[Vec<i64>], radius: i64) -> Option<i64> {
    let roots = box_roots(gram);
    let n = gram.len();
    let mut best: Option<i64> = None;
    let mut v = vec![-radius; n];
    loop {
        if v.iter().any(|&x| x != 0) && roots.iter().all(|r| bilinear(gram, r, &v) != 0) {
            let q = quad(gram, &v);
            best = Some(best.map_or(q, |b: i64| b.max(q)));
        }
        let mut i = 0;
        while i < n && v[i] == radius {
            v[i] = -radius;
            i += 1;
        }
        if i == n {
            return best;
        }
        v[i] += 1;
    }
}

fn bilinear(g: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    g.iter().zip(u).map(|(row, ui)| ui * row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>()).sum()
}

/// Irreducible root systems by family letter and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RootType {
    A(usize),
    D(usize),
    E(usize),
}

impl RootType {
    pub fn rank(self) -> usize {
        match self {
            RootType::A(k) | RootType::D(k) | RootType::E(k) => k,
        }
    }

    fn all(max_rank: usize) -> Vec<RootType> {
        let mut out = Vec::new();
        for k in 1..=max_rank {
            out.push(RootType::A(k));
            if k >= 4 {
                out.push(RootType::D(k));
            }
            if (6..=8).contains(&k) {
                out.push(RootType::E(k));
            }
        }
        out
    }
}

/// `min |(m,m)|` over regular `m` of an irreducible root lattice, in the
/// classical coordinate models.
pub fn coordinate_chamber_norm(t: RootType) -> i64 {
    let mut bound = 4;
    loop {
        let hit = match t {
            RootType::A(k) => a_model(k, bound),
            RootType::D(k) => d_model(k, bound),
            RootType::E(k) => e_model(k, bound),
        };
        if let Some(v) = hit {
            return v;
        }
        bound *= 2;
    }
}

/// `A_k = {x ∈ Z^{k+1} : Σx = 0}`; regular iff the entries are distinct, so
/// strictly increasing tuples cover every Weyl orbit.
fn a_model(k: usize, bound: i64) -> Option<i64> {
    let r = isqrt(bound);
    let mut best = None;
    let mut cur = Vec::new();
    fn go(k1: usize, lo: i64, r: i64, left: i64, cur: &mut Vec<i64>, best: &mut Option<i64>) {
        if cur.len() == k1 {
            if cur.iter().sum::<i64>() == 0 {
                let s = cur.iter().map(|x| x * x).sum::<i64>();
                *best = Some(best.map_or(s, |b: i64| b.min(s)));
            }
            return;
        }
        for x in lo..=r {
            if x * x > left {
                continue;
            }
            cur.push(x);
            go(k1, x + 1, r, left - x * x, cur, best);
            cur.pop();
        }
    }
    go(k + 1, -r, r, bound, &mut cur, &mut best);
    best
}

/// `D_k = {x ∈ Z^k : Σx even}`; regular iff the `|x_i|` are distinct.
fn d_model(k: usize, bound: i64) -> Option<i64> {
    let mut best = None;
    let mut cur = Vec::new();
    fn go(k: usize, lo: i64, left: i64, cur: &mut Vec<i64>, best: &mut Option<i64>) {
        if cur.len() == k {
            if cur.iter().sum::<i64>() % 2 == 0 {
                let s = cur.iter().map(|x| x * x).sum::<i64>();
                *best = Some(best.map_or(s, |b: i64| b.min(s)));
            }
            return;
        }
        let mut x = lo;
        while x * x <= left {
            cur.push(x);
            go(k, x + 1, left - x * x, cur, best);
            cur.pop();
            x += 1;
        }
    }
    go(k, 0, bound, &mut cur, &mut best);
    best
}

/// `E_8` in doubled coordinates: `y ∈ Z^8` all even or all odd with
/// `Σy ≡ 0 mod 4`; `E_7` and `E_6` are the sublattices with `y_7 = y_8`,
/// respectively `y_6 = y_7 = y_8`, and their roots are the `E_8` roots with
/// the same ties. Permutations and even sign changes of the untied
/// coordinates are Weyl symmetries, so the untied absolute values are taken
/// strictly increasing, with either no sign flip or one flip on the smallest.
fn e_model(k: usize, bound: i64) -> Option<i64> {
    let free = match k {
        8 => 8,
        7 => 6,
        6 => 5,
        _ => unreachable!("E{k}"),
    };
    let roots: Vec<[i64; 8]> = e8_doubled_roots().into_iter().filter(|r| tied(r, free)).collect();
    let limit = 4 * bound;
    let mut best: Option<i64> = None;
    let mut abs = Vec::new();
    let ties: Vec<i64> = if free == 8 {
        vec![0]
    } else {
        let r = isqrt(limit);
        (-r..=r).filter(|t| *t != 0).collect()
    };
    for &t in &ties {
        let tie_norm = (8 - free) as i64 * t * t;
        if tie_norm > limit {
            continue;
        }
        for parity in [0i64, 1] {
            if free < 8 && t.rem_euclid(2) != parity {
                continue;
            }
            let start = parity;
            e_go(free, start, limit - tie_norm, &mut abs, &mut |a: &[i64]| {
                for flip in [false, true] {
                    let mut y = [t; 8];
                    for (i, &v) in a.iter().enumerate() {
                        y[i] = v;
                    }
                    if flip {
                        y[0] = -y[0];
                    }
                    if y.iter().sum::<i64>().rem_euclid(4) != 0 {
                        continue;
                    }
                    if roots.iter().all(|r| r.iter().zip(&y).map(|(p, q)| p * q).sum::<i64>() != 0) {
                        let s = y.iter().map(|v| v * v).sum::<i64>();
                        best = Some(best.map_or(s, |b| b.min(s)));
                    }
                }
            });
        }
    }
    best.map(|s| s / 4)
}

fn e_go(free: usize, lo: i64, left: i64, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if cur.len() == free {
        f(cur);
        return;
    }
    let mut x = lo;
    while x * x <= left {
        cur.push(x);
        e_go(free, x + 2, left - x * x, cur, f);
        cur.pop();
        x += 2;
    }
}

fn tied(r: &[i64; 8], free: usize) -> bool {
    r[free..].iter().all(|&x| x == r[7])
}

/// Roots of `E_8` in doubled coordinates (both signs).
fn e8_doubled_roots() -> Vec<[i64; 8]> {
    let mut out = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for si in [-2, 2] {
                for sj in [-2, 2] {
                    let mut r = [0i64; 8];
                    r[i] = si;
                    r[j] = sj;
                    out.push(r);
                }
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let mut r = [1i64; 8];
            for (i, x) in r.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    *x = -1;
                }
            }
            out.push(r);
        }
    }
    out
}

fn isqrt(s: i64) -> i64 {
    let mut r = (s.max(0) as f64).sqrt() as i64;
    while r * r > s {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= s {
        r += 1;
    }
    r
}

/// `a_n` from the coordinate models: every multiset of irreducible types of
/// total rank `1..=n-2` is listed and its regular norms summed.
pub fn a_n(n: usize) -> i64 {
    let max = n - 2;
    let types = RootType::all(max);
    let values: Vec<(usize, i64)> = types.iter().map(|&t| (t.rank(), coordinate_chamber_norm(t))).collect();
    let mut best = 0;
    fn go(values: &[(usize, i64)], start: usize, left: usize, acc: i64, best: &mut i64) {
        for i in start..values.len() {
            let (r, v) = values[i];
            if r <= left {
                *best = (*best).max(acc + v);
                go(values, i, left - r, acc + v, best);
            }
        }
    }
    go(&values, 0, max, 0, &mut best);
    best
}

/// Whether some root `v = a e + b f + Σ w_i r_i` of `U ⊕ kA_1` is orthogonal to
/// `m = x e + y f + Σ z_i r_i` (with `(m,m) > 0`). Roots satisfy `ab = |w|^2 - 1`
/// and orthogonality `ay + bx = 2 w·z`; eliminating `b` gives
/// `y a^2 - 2(w·z) a + x(|w|^2 - 1) = 0`, whose discriminant together with
/// Cauchy–Schwarz bounds `|w|^2 <= 2xy/(m,m)`.
pub fn has_perp_root(x: i64, y: i64, z: &[i64]) -> bool {
    let n = 2 * x * y - 2 * z.iter().map(|v| v * v).sum::<i64>();
    assert!(n > 0, "m must have positive norm");
    let wmax = 2 * x * y / n;
    let mut w = Vec::with_capacity(z.len());
    // by increasing |w|^2, so that non-interior points are rejected early
    (0..=wmax).any(|t| exact_norm(z.len(), t, &mut w, &mut |w| root_with(x, y, z, w)))
}

fn root_with(x: i64, y: i64, z: &[i64], w: &[i64]) -> bool {
    let w2: i64 = w.iter().map(|v| v * v).sum();
    let zw: i64 = w.iter().zip(z).map(|(a, b)| a * b).sum();
    // y a^2 - 2 zw a + x (w2 - 1) = 0
    let disc = 4 * zw * zw - 4 * x * y * (w2 - 1);
    if disc < 0 {
        return false;
    }
    let s = isqrt(disc);
    if s * s != disc {
        return false;
    }
    [2 * zw + s, 2 * zw - s].into_iter().any(|num| {
        if num % (2 * y) != 0 {
            return false;
        }
        let a = num / (2 * y);
        let rest = 2 * zw - y * a;
        rest % x == 0 && a * (rest / x) == w2 - 1
    })
}

/// Calls `f` on every `w ∈ Z^k` with `|w|^2 = t` until it returns `true`.
fn exact_norm(k: usize, t: i64, w: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if w.len() == k {
        return t == 0 && f(w);
    }
    let left = k - w.len() - 1;
    let r = isqrt(t);
    for v in -r..=r {
        let rest = t - v * v;
        // the remaining coordinates must be able to absorb `rest`
        if left == 0 && rest != 0 {
            continue;
        }
        w.push(v);
        let hit = exact_norm(k, rest, w, f);
        w.pop();
        if hit {
            return true;
        }
    }
    false
}

/// Minimal positive norm of a chamber-interior vector of `U ⊕ kA_1` with all
/// `U` coordinates in `[-radius, radius]`, scanning norms `2, 4, ...` up to
/// `max_norm`. The `A_1` coordinates are taken nonnegative and nonincreasing
/// (sign changes and permutations of the summands are automorphisms).
pub fn min_chamber_norm(k: usize, radius: i64, max_norm: i64) -> Option<(i64, Vec<i64>)> {
    for norm in (2..=max_norm).step_by(2) {
        for x in -radius..=radius {
            for y in -radius..=radius {
                if x == 0 || y == 0 {
                    continue;
                }
                let s = x * y - norm / 2;
                if s < 0 {
                    continue;
                }
                let mut hit = None;
                each_sorted(s, k, i64::MAX, &mut Vec::new(), &mut |z| {
                    if hit.is_none() && !has_perp_root(x, y, z) {
                        let mut m = vec![x, y];
                        m.extend_from_slice(z);
                        hit = Some(m);
                    }
                });
                if let Some(m) = hit {
                    return Some((norm, m));
                }
            }
        }
    }
    None
}

fn each_sorted(s: i64, left: usize, max: i64, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if left == 0 {
        if s == 0 {
            f(cur);
        }
        return;
    }
    let top = max.min(isqrt(s));
    for z in (0..=top).rev() {
        if z * z * (left as i64) < s {
            break;
        }
        cur.push(z);
        each_sorted(s - z * z, left - 1, z, cur, f);
        cur.pop();
    }
}

/// `b_n` from [`min_chamber_norm`].
pub fn b_n(n: usize, radius: i64, max_norm: i64) -> Option<i64> {
    (0..=n - 2).map(|k| min_chamber_norm(k, radius, max_norm).map(|(v, _)| v)).try_fold(0, |acc, v| v.map(|v| acc.max(v)))
}

/// A Gram matrix for `U ⊕ kA_1`, for callers that want to cross-check a
/// vector with lattice tools.
pub fn u_plus_k_a1_gram(k: usize) -> Matrix<i64> {
    let n = k + 2;
    let mut g = vec![vec![0i64; n]; n];
    g[0][1] = 1;
    g[1][0] = 1;
    for i in 2..n {
        g[i][i] = -2;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_values() {
        assert_eq!(coordinate_chamber_norm(RootType::A(1)), 2);
        assert_eq!(coordinate_chamber_norm(RootType::A(2)), 2);
        assert_eq!(coordinate_chamber_norm(RootType::A(3)), 10);
        assert_eq!(coordinate_chamber_norm(RootType::D(4)), 14);
        assert_eq!(coordinate_chamber_norm(RootType::E(8)), 620);
    }

    #[test]
    fn e_root_counts() {
        let r = e8_doubled_roots();
        assert_eq!(r.len(), 240);
        assert_eq!(r.iter().filter(|x| tied(x, 6)).count(), 126);
        assert_eq!(r.iter().filter(|x| tied(x, 5)).count(), 72);
    }

    #[test]
    fn hyperbolic_k0() {
        assert_eq!(min_chamber_norm(0, 6, 40).unwrap().0, 4);
        assert!(has_perp_root(1, 1, &[]));
        assert!(!has_perp_root(1, 2, &[]));
    }

    #[test]
    fn box_roots_a2() {
        assert_eq!(box_roots(&[vec![-2, 1], vec![1, -2]]).len(), 3);
    }
}
