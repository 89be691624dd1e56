use reflat::oracle;
use reflat::pool::{compute_a_n, compute_b_n, min_chamber_norm, PoolCaps};

#[test]
fn a_n_matches_coordinate_models() {
    let caps = PoolCaps::default();
    for n in 3..=12 {
        assert_eq!(compute_a_n(n, &caps).unwrap(), oracle::a_n(n), "a_{n}");
    }
}

#[test]
fn b_n_matches_unsymmetrized_box() {
    let caps = PoolCaps::default();
    let mut slow = Vec::new();
    for k in 0..=10 {
        let fast = min_chamber_norm(k, &caps).unwrap();
        let (norm, m) = oracle::min_chamber_norm(k, 8, 64).unwrap();
        assert_eq!(fast.norm, norm, "k = {k}, oracle witness {m:?}");
        assert!(!oracle::has_perp_root(fast.x, fast.y, &fast.z));
        slow.push(norm);
    }
    for n in 4..=12 {
        assert_eq!(compute_b_n(n, &caps).unwrap(), *slow[..=n - 2].iter().max().unwrap(), "b_{n}");
    }
}
