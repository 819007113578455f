use std::path::PathBuf;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use vagg_sim::updates::norm;
use vagg_sim::*;

fn small(n: usize, m: usize, seed: u64) -> SimulationConfig {
    SimulationConfig { n, m, d: 16, k: 4, epsilon_log2: -20.0, m_log2: 6.0, frac_bits: 8, seed, ..SimulationConfig::default() }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vagg-sim-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn toml_config_parses_and_validates() {
    let cfg = SimulationConfig::from_toml(
        r#"
        n = 7
        m = 3
        d = 32
        seed = 5
        formats = ["json"]
        [attack]
        kind = "scaling"
        c = 2.5
        malicious = [1, 2]
        "#,
    )
    .unwrap();
    assert_eq!((cfg.n, cfg.m, cfg.d, cfg.seed), (7, 3, 32, 5));
    assert_eq!(cfg.attack.kind, AttackKind::Scaling { c: 2.5 });
    assert_eq!(cfg.formats, vec![ReportFormat::Json]);
    cfg.validate().unwrap();

    assert!(SimulationConfig::from_toml("n = 6\nm = 3").is_err(), "m must stay below n/2");
    assert!(SimulationConfig::from_toml("n = 6\nm = 1\n[attack]\nkind = \"sign_flip\"\nc = 1.0\nmalicious = [1, 2]").is_err());
    assert!(SimulationConfig::from_toml("n = 6\nm = 1\n[attack]\nkind = \"sign_flip\"\nc = 1.0\nmalicious = [9]").is_err());
    assert!(SimulationConfig::from_toml("bogus = 1").is_err());
}

#[test]
fn full_scale_preset_is_valid() {
    let cfg = SimulationConfig::full_scale();
    cfg.validate().unwrap();
    assert_eq!((cfg.n, cfg.d, cfg.k), (100, 10_000, 1000));
}

proptest! {
    #[test]
    fn honest_updates_stay_in_the_ball(seed in any::<u64>(), n in 1usize..6, d in 1usize..40, frac in 0u32..16) {
        let us = generate_updates(seed, n, d, 1.0);
        prop_assert_eq!(us.clone(), generate_updates(seed, n, d, 1.0));
        for u in &us {
            prop_assert!(norm(u) <= 1.0 + 1e-12);
            let q = quantize_update(u, frac);
            let qn = q.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
            prop_assert!(qn <= norm(u) * (frac as f64).exp2() + 1e-9);
        }
    }
}

#[test]
fn honest_norms_are_uniform() {
    // Kolmogorov distance of 4000 norms against U(0, 1).
    let mut norms: Vec<f64> = generate_updates(17, 4000, 8, 1.0).iter().map(|u| norm(u)).collect();
    norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = norms.len() as f64;
    let dist = norms
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
        .fold(0.0, f64::max);
    assert!(dist < 1.63 / n.sqrt(), "D = {dist}");
}

#[test]
fn attacks_transform_the_base_update() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let base = vec![0.6, -0.8];
    assert_eq!(AttackKind::SignFlip { c: 2.0 }.apply(&base, 1.0, &mut rng), vec![-1.2, 1.6]);
    assert_eq!(AttackKind::Scaling { c: 0.5 }.apply(&base, 1.0, &mut rng), vec![0.3, -0.4]);
    let big = AttackKind::OversizedNorm { c: 3.0 }.apply(&base, 2.0, &mut rng);
    assert!((norm(&big) - 6.0).abs() < 1e-9);
    assert_eq!(AttackKind::AdditiveNoise { sigma: 0.0 }.apply(&base, 1.0, &mut rng), base);
    assert!(AttackKind::Scaling { c: f64::NAN }.validate().is_err());
    assert!(AttackKind::AdditiveNoise { sigma: -1.0 }.validate().is_err());
}

#[test]
fn sign_flip_within_bound_passes_but_shifts_the_sum() {
    let mut cfg = small(5, 2, 3);
    cfg.attack = AttackSpec { kind: AttackKind::SignFlip { c: 1.0 }, malicious: vec![2] };
    let r = Simulation::new(cfg).unwrap().run_round().unwrap();
    assert_eq!(r.attackers_passed, 1);
    assert!(r.aggregate_correct);
    assert!(!r.matches_honest_only_sum);
    assert_eq!(r.honest_excluded, 0);
}

#[test]
fn grossly_oversized_attacker_is_excluded() {
    let mut cfg = small(5, 2, 4);
    cfg.attack = AttackSpec { kind: AttackKind::OversizedNorm { c: 50.0 }, malicious: vec![1, 3] };
    let r = Simulation::new(cfg).unwrap().run_round().unwrap();
    assert_eq!(r.attackers_passed, 0);
    assert!(r.flagged.contains_key(&1) && r.flagged.contains_key(&3));
    assert!(r.aggregate_correct && r.matches_honest_only_sum);
}

#[test]
fn simulation_is_deterministic_apart_from_timings() {
    let mut cfg = small(4, 1, 9);
    cfg.repetitions = 2;
    let strip = |mut rs: Vec<RoundReport>| {
        for r in &mut rs {
            r.timings = Default::default();
        }
        rs
    };
    let a = strip(run_simulation(&cfg).unwrap());
    let b = strip(run_simulation(&cfg).unwrap());
    assert_eq!(a, b);
    assert_ne!(a[0].aggregate, a[1].aggregate);
}

#[test]
fn reports_agree_across_formats() {
    let mut cfg = small(3, 1, 11);
    cfg.repetitions = 2;
    let reports = run_simulation(&cfg).unwrap();
    let dir = scratch("formats");
    emit_report(&reports, &dir, &[ReportFormat::Csv, ReportFormat::Json], true).unwrap();

    let from_json: Vec<ReportRow> = serde_json::from_str(&std::fs::read_to_string(dir.join("rounds.json")).unwrap()).unwrap();
    let from_csv: Vec<ReportRow> =
        csv::Reader::from_path(dir.join("rounds.csv")).unwrap().deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(from_json, from_csv);
    assert_eq!(from_json.len(), 3);
    assert_eq!(from_json[2].round, "mean");
    assert_eq!(from_json[2].honest_count, (from_json[0].honest_count + from_json[1].honest_count) / 2.0);

    for r in &reports {
        let bin = std::fs::read(dir.join(format!("round_{:04}.bin", r.round))).unwrap();
        assert_eq!(bin.len(), r.bytes_total);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn single_round_csv_has_header_row_and_summary() {
    let reports = run_simulation(&small(3, 1, 12)).unwrap();
    let dir = scratch("single");
    emit_report(&reports, &dir, &[ReportFormat::Csv], false).unwrap();
    let text = std::fs::read_to_string(dir.join("rounds.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(!dir.join("rounds.json").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_counts_and_predicts() {
    let base = SimulationConfig { n: 3, m: 1, epsilon_log2: -20.0, m_log2: 6.0, frac_bits: 8, ..SimulationConfig::default() };
    let rows = bench(&base, &[16, 32], &[4], false).unwrap();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert!(row.measured);
        assert!(row.exp_proof_gen > 0.0 && row.exp_prep > 0.0);
        assert!(row.t_proof_gen > 0.0);
    }
    let predicted = bench(&base, &[16, 32], &[4], true).unwrap();
    for (m, p) in rows.iter().zip(&predicted) {
        assert!(!p.measured);
        assert_eq!(m.bytes_per_client, p.bytes_per_client);
    }
}

#[test]
fn params_summary_reports_the_derived_bounds() {
    let cfg = SimulationConfig { k: 1000, epsilon_log2: -128.0, d: 1_000_000, m_log2: 24.0, frac_bits: 12, ..SimulationConfig::default() };
    let s = params_summary(&cfg).unwrap();
    let text = s.to_string();
    assert!(text.contains("1701.7"), "{text}");
}
