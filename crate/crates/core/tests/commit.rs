use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use vagg_core::commit::{aggregate_commitments, commit_update};
use vagg_core::group::{multiexp, GeneratorSet, Point, Scalar};
use vagg_core::protocol::compute_h;
use vagg_core::sampling::{sample_matrix, SampleMatrix};
use vagg_core::zkp::ver_crt;

fn gens(d: usize) -> GeneratorSet {
    GeneratorSet::new(d, 1)
}

fn e_star(y: &[Point], a: &SampleMatrix) -> Vec<Point> {
    let mut e = vec![multiexp(y, &a.a0).unwrap()];
    e.extend(a.rows.iter().map(|row| {
        let s: Vec<Scalar> = row.iter().map(|&x| Scalar::from_i64(x)).collect();
        multiexp(y, &s).unwrap()
    }));
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commitments_are_additively_homomorphic(seed in any::<u64>(), d in 1usize..12, parties in 1usize..5) {
        let gs = gens(d);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let us: Vec<Vec<i64>> = (0..parties).map(|_| (0..d).map(|_| rng.gen_range(-1000..1000)).collect()).collect();
        let rs: Vec<Scalar> = (0..parties).map(|_| Scalar::random(&mut rng)).collect();
        let ys: Vec<Vec<Point>> = us.iter().zip(&rs).map(|(u, r)| commit_update(u, r, &gs).unwrap().0).collect();
        let refs: Vec<&[Point]> = ys.iter().map(Vec::as_slice).collect();
        let total: Vec<i64> = (0..d).map(|l| us.iter().map(|u| u[l]).sum()).collect();
        let r: Scalar = rs.iter().copied().sum();
        prop_assert_eq!(aggregate_commitments(&refs, d).unwrap(), commit_update(&total, &r, &gs).unwrap().0);
    }
}

/// The consistency check binds `e*` to the committed `y`: changing any
/// coordinate of `y` without recomputing `e*` is caught.
#[test]
fn tampered_commitment_fails_consistency_check() {
    let (d, k) = (6, 3);
    let gs = gens(d);
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let mut rejected = 0;
    for case in 0..1000u64 {
        let u: Vec<i64> = (0..d).map(|_| rng.gen_range(-500..500)).collect();
        let r = Scalar::random(&mut rng);
        let (y, _) = commit_update(&u, &r, &gs).unwrap();
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&case.to_le_bytes());
        let a = sample_matrix(&seed, k, d, 64.0);
        let e = e_star(&y, &a);
        assert!(ver_crt(&y, &e, &a, &mut rng));
        let mut bad = y.clone();
        let l = rng.gen_range(0..d);
        bad[l] = bad[l] + gs.g * Scalar::from_i64(rng.gen_range(1..1000));
        if !ver_crt(&bad, &e, &a, &mut rng) {
            rejected += 1;
        }
    }
    assert_eq!(rejected, 1000);
}

#[test]
fn server_h_passes_client_check() {
    let gs = gens(16);
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let a = sample_matrix(&[5; 32], 8, 16, 1024.0);
    let h = compute_h(&gs.w, &a).unwrap();
    assert!(ver_crt(&gs.w, &h, &a, &mut rng));
    assert_eq!(h, compute_h(&gs.w, &a).unwrap());
    for t in 0..h.len() {
        let mut bad = h.clone();
        bad[t] = bad[t] + gs.g;
        assert!(!ver_crt(&gs.w, &bad, &a, &mut rng));
    }
}
