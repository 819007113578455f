//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary. Set `VAGG_CRITERIA=1,3` to run a subset. A
//! criterion listed in `UNATTAINABLE` is still evaluated at its stated
//! tolerance and reported, but does not fail the process.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use vagg_core::commit::commit_update;
use vagg_core::group::{derive_generators, GeneratorSet, Point, Scalar};
use vagg_core::protocol::{
    predicted_client_bytes, resolve_flags, Adversary, ClientId, MaliciousReason, Session,
};
use vagg_core::sampling::{
    chi2_cdf, gaussian_row, max_expected_damage, pass_rate_f, plaintext_check, round_row,
    sample_matrix, CheckParameters, SampleMatrix,
};
use vagg_core::transcript::Transcript;
use vagg_core::vsss::{ss_combine, ss_recover, ss_share, ss_verify, Share};
use vagg_core::zkp::*;
use vagg_sim::updates::random_direction;
use vagg_sim::{quantize_update, AttackKind, AttackSpec, Simulation, SimulationConfig};

/// Criteria that cannot be met as stated; see the README.
const UNATTAINABLE: &[u32] = &[10];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn small_config(n: usize, m: usize, d: usize, k: usize, seed: u64) -> SimulationConfig {
    SimulationConfig {
        n,
        m,
        d,
        k,
        epsilon_log2: -20.0,
        m_log2: 6.0,
        frac_bits: 8,
        seed,
        formats: vec![],
        ..SimulationConfig::default()
    }
}

// 1. Exact aggregation.
fn exact_aggregation() -> Verdict {
    let start = Instant::now();
    let mut gens: BTreeMap<usize, Arc<GeneratorSet>> = BTreeMap::new();
    let (mut exact, mut honest_only, mut attacked) = (0, 0, 0);
    for run in 0..200u64 {
        let n = 2 + (run as usize % 9);
        let d = [16, 64, 256][run as usize % 3];
        let m = (n - 1) / 2;
        let mut cfg = small_config(n, m, d, 4, run);
        if m > 0 && run % 2 == 0 {
            cfg.attack = AttackSpec { kind: AttackKind::OversizedNorm { c: 6.0 }, malicious: vec![1] };
        }
        let g = gens
            .entry(d)
            .or_insert_with(|| Arc::new(GeneratorSet::new(d, cfg.params().unwrap().range_capacity())))
            .clone();
        let r = Simulation::with_generators(cfg.clone(), g).unwrap().run_round().unwrap();
        exact += r.aggregate_correct as usize;
        if !cfg.attack.malicious.is_empty() {
            attacked += 1;
            if r.attackers_passed == 0 {
                honest_only += r.matches_honest_only_sum as usize;
            }
        }
        if r.attackers_passed == 0 && cfg.attack.malicious.is_empty() {
            honest_only += r.matches_honest_only_sum as usize;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        exact == 200 && secs < 120.0,
        format!("{exact}/200 exact over the honest set ({attacked} runs with an attacker, {honest_only} equal to the honest-only sum), {secs:.1}s"),
    )
}

// 2. Honest completeness.
fn honest_completeness() -> Verdict {
    let mut cfg = small_config(3, 1, 16, 4, 2024);
    cfg.epsilon_log2 = (1e-4f64).log2();
    cfg.m_log2 = 4.0;
    cfg.frac_bits = 4;
    let mut sim = Simulation::new(cfg).unwrap();
    let (mut excluded, mut exact) = (0, 0);
    for _ in 0..1000 {
        let r = sim.run_round().unwrap();
        excluded += r.honest_excluded;
        exact += r.aggregate_correct as usize;
    }
    verdict(excluded == 0 && exact == 1000, format!("{excluded} honest exclusions over 1000 rounds of 3 clients, {exact}/1000 exact"))
}

// 3. Pass-rate curve.
fn update_with_ratio(rng: &mut ChaCha20Rng, d: usize, c: f64, frac_bits: u32) -> (Vec<i64>, f64) {
    let b = (frac_bits as f64).exp2();
    let real: Vec<f64> = random_direction(d, rng).into_iter().map(|x| x * c).collect();
    let u = quantize_update(&real, frac_bits);
    let exact = u.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt() / b;
    (u, exact)
}

fn pass_rate_curve() -> Verdict {
    let (d, frac_bits, m_scale, trials) = (16, 12, 24f64.exp2(), 1000);
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let mut ok = true;
    let mut lines = Vec::new();
    for (k, eps) in [(256usize, -40.0), (1000, -128.0)] {
        let params = CheckParameters::new(10, 1, d, k, eps, m_scale, 1.0, frac_bits, 16).unwrap();
        for c in [1.1, 1.3, 1.5, 2.0] {
            let (mut passed, mut f_sum, mut var) = (0usize, 0.0, 0.0);
            for _ in 0..trials {
                let (u, exact) = update_with_ratio(&mut rng, d, c, frac_bits);
                let seed: [u8; 32] = rng.gen();
                let a = sample_matrix(&seed, k, d, m_scale);
                passed += plaintext_check(&u, &a.rows, params.b0) as usize;
                let f = pass_rate_f(exact, k, eps, d, m_scale);
                f_sum += f;
                var += f * (1.0 - f);
            }
            let (p_hat, f_bar) = (passed as f64 / trials as f64, f_sum / trials as f64);
            let sigma = var.sqrt() / trials as f64;
            let good = (p_hat - f_bar).abs() <= 3.0 * sigma;
            ok &= good;
            lines.push(format!("k={k} c={c}: {p_hat:.4} vs F {f_bar:.4} (3σ {:.4})", 3.0 * sigma));
        }
    }
    // A few full proofs must agree with the plaintext verdict.
    let (k, eps) = (256, -40.0);
    let params = CheckParameters::new(10, 1, d, k, eps, m_scale, 1.0, frac_bits, 16).unwrap();
    let gens = GeneratorSet::new(d, params.range_capacity());
    let mut agree = 0;
    let cs = [1.1, 1.3, 1.3, 2.0];
    for &c in &cs {
        let (u, _) = update_with_ratio(&mut rng, d, c, frac_bits);
        let seed: [u8; 32] = rng.gen();
        let a = sample_matrix(&seed, k, d, m_scale);
        let h = vagg_core::protocol::compute_h(&gens.w, &a).unwrap();
        let r = Scalar::random(&mut rng);
        let (y, z) = commit_update(&u, &r, &gens).unwrap();
        let proof = forge_integrity_proof(&params, &gens, &a, &h, &z, &r, &u, &mut rng).unwrap();
        let zk = ver_integrity_proof(&params, &gens, &a, &h, &z, &y, &proof, &mut rng).is_ok();
        agree += (zk == plaintext_check(&u, &a.rows, params.b0)) as usize;
    }
    ok &= agree == cs.len();
    lines.push(format!("full-proof agreement {agree}/{}", cs.len()));
    verdict(ok, lines.join("; "))
}

// 4. Damage ratios.
fn damage_ratios() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut got = Vec::new();
    for (k, target) in [(1000, 1.24), (3000, 1.13), (9000, 1.08)] {
        let (_, dmg) = max_expected_damage(k, -128.0, 1_000_000, 24f64.exp2());
        ok &= (dmg - target).abs() <= 0.02;
        got.push(format!("k={k}: {dmg:.4} (target {target})"));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(ok && secs < 10.0, format!("{}, {secs:.2}s", got.join(", ")))
}

// 5. Qualitative thresholds.
fn f_thresholds() -> Verdict {
    let f = |c| pass_rate_f(c, 1000, -128.0, 1_000_000, 24f64.exp2());
    let (a, b) = (f(1.2), f(1.4));
    verdict(a >= 0.99 && b <= 0.01, format!("F(1.2) = {a:.6}, F(1.4) = {b:.6}"))
}

// 6. Round trip and tamper matrix.
struct Fixture {
    params: CheckParameters,
    gens: GeneratorSet,
    a: SampleMatrix,
    h: Vec<Point>,
    y: Vec<Point>,
    z: Point,
    proof: IntegrityProof,
}

fn fixture(params: &CheckParameters, gens: &GeneratorSet, rng: &mut ChaCha20Rng) -> Fixture {
    let (d, k) = (params.d, params.k);
    let seed: [u8; 32] = rng.gen();
    let a = sample_matrix(&seed, k, d, params.m_scale);
    let h = vagg_core::protocol::compute_h(&gens.w, &a).unwrap();
    let c = rng.gen_range(0.0..1.0);
    let (u, _) = update_with_ratio(rng, d, c, params.frac_bits);
    let r = Scalar::random(rng);
    let (y, z) = commit_update(&u, &r, gens).unwrap();
    let proof = gen_integrity_proof(params, gens, &a, &h, &z, &r, &u, rng).unwrap();
    Fixture { params: params.clone(), gens: gens.clone(), a, h, y, z, proof }
}

fn range_perturbations(name: &str, p: &RangeProof, out: &mut Vec<(String, RangeProof)>, g: Point) {
    let mut push = |label: String, f: &dyn Fn(&mut RangeProof)| {
        let mut q = p.clone();
        f(&mut q);
        out.push((format!("{name}.{label}"), q));
    };
    push("A".into(), &|q| q.a = q.a + g);
    push("S".into(), &|q| q.s = q.s + g);
    push("T1".into(), &|q| q.t1 = q.t1 + g);
    push("T2".into(), &|q| q.t2 = q.t2 + g);
    push("tau_x".into(), &|q| q.tau_x += Scalar::ONE);
    push("mu".into(), &|q| q.mu += Scalar::ONE);
    push("t_hat".into(), &|q| q.t_hat += Scalar::ONE);
    push("a".into(), &|q| q.a_final += Scalar::ONE);
    push("b".into(), &|q| q.b_final += Scalar::ONE);
    for i in 0..p.l_vec.len() {
        push(format!("L{i}"), &|q| q.l_vec[i] = q.l_vec[i] + g);
        push(format!("R{i}"), &|q| q.r_vec[i] = q.r_vec[i] + g);
    }
}

fn perturbations(fx: &Fixture) -> Vec<(String, Vec<Point>, Point, Vec<Point>, IntegrityProof)> {
    let g = fx.gens.g;
    let base = (fx.y.clone(), fx.z, fx.h.clone(), fx.proof.clone());
    let mut out = Vec::new();
    let mut add = |label: String, f: &dyn Fn(&mut Vec<Point>, &mut Point, &mut Vec<Point>, &mut IntegrityProof)| {
        let (mut y, mut z, mut h, mut p) = base.clone();
        f(&mut y, &mut z, &mut h, &mut p);
        out.push((label, y, z, h, p));
    };
    let p = &fx.proof;
    for l in 0..fx.y.len() {
        add(format!("y{l}"), &|y, _, _, _| y[l] = y[l] + g);
    }
    add("z".into(), &|_, z, _, _| *z = *z + g);
    for t in 0..fx.h.len() {
        add(format!("h{t}"), &|_, _, h, _| h[t] = h[t] + g);
    }
    for i in 0..p.e_star.len() {
        add(format!("e*{i}"), &|_, _, _, q| q.e_star[i] = q.e_star[i] + g);
    }
    for i in 0..p.o.len() {
        add(format!("o{i}"), &|_, _, _, q| q.o[i] = q.o[i] + g);
        add(format!("o'{i}"), &|_, _, _, q| q.o_prime[i] = q.o_prime[i] + g);
    }
    add("p".into(), &|_, _, _, q| q.p_commit = q.p_commit + g);
    add("rho.u".into(), &|_, _, _, q| q.rho.u = q.rho.u + g);
    add("rho.y".into(), &|_, _, _, q| q.rho.y += Scalar::ONE);
    for i in 0..p.rho.t.len() {
        add(format!("rho.t{i}"), &|_, _, _, q| q.rho.t[i] = q.rho.t[i] + g);
        add(format!("rho.y{i}"), &|_, _, _, q| q.rho.y_vec[i] += Scalar::ONE);
    }
    for i in 0..p.rho.t_star.len() {
        add(format!("rho.t*{i}"), &|_, _, _, q| q.rho.t_star[i] = q.rho.t_star[i] + g);
        add(format!("rho.y'{i}"), &|_, _, _, q| q.rho.y_prime[i] += Scalar::ONE);
    }
    for i in 0..p.tau.t1.len() {
        add(format!("tau.t1{i}"), &|_, _, _, q| q.tau.t1[i] = q.tau.t1[i] + g);
        add(format!("tau.t2{i}"), &|_, _, _, q| q.tau.t2[i] = q.tau.t2[i] + g);
        add(format!("tau.s1{i}"), &|_, _, _, q| q.tau.s1[i] += Scalar::ONE);
        add(format!("tau.s2{i}"), &|_, _, _, q| q.tau.s2[i] += Scalar::ONE);
        add(format!("tau.s3{i}"), &|_, _, _, q| q.tau.s3[i] += Scalar::ONE);
    }
    let mut ranges = Vec::new();
    range_perturbations("sigma", &p.sigma, &mut ranges, g);
    for (label, r) in ranges.drain(..) {
        add(label, &|_, _, _, q| q.sigma = r.clone());
    }
    range_perturbations("mu", &p.mu, &mut ranges, g);
    for (label, r) in ranges {
        add(label, &|_, _, _, q| q.mu = r.clone());
    }
    out
}

fn zkp_tamper_matrix() -> Verdict {
    let params = CheckParameters::new(10, 1, 8, 4, -20.0, 64.0, 1.0, 8, 16).unwrap();
    let gens = GeneratorSet::new(8, params.range_capacity());
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let (mut honest_ok, mut cases, mut rejected) = (0, 0, 0);
    let mut missed = Vec::new();
    for _ in 0..10 {
        let fx = fixture(&params, &gens, &mut rng);
        let ok = ver_integrity_proof(&fx.params, &fx.gens, &fx.a, &fx.h, &fx.z, &fx.y, &fx.proof, &mut rng).is_ok();
        honest_ok += ok as usize;
        let decoded = IntegrityProof::from_bytes(&fx.proof.to_bytes()).unwrap();
        honest_ok -= (decoded != fx.proof) as usize;
        for (label, y, z, h, p) in perturbations(&fx) {
            cases += 1;
            if ver_integrity_proof(&fx.params, &fx.gens, &fx.a, &h, &z, &y, &p, &mut rng).is_err() {
                rejected += 1;
            } else {
                missed.push(label);
            }
        }
    }
    verdict(
        honest_ok == 10 && cases >= 1000 && rejected == cases,
        format!("honest {honest_ok}/10 verified; tampered {rejected}/{cases} rejected{}", if missed.is_empty() { String::new() } else { format!(", missed {missed:?}") }),
    )
}

// 7. Batch-verifier equivalence.
fn naive_sq(g: &Point, h: &Point, y1: &[Point], y2: &[Point], p: &SquareProof) -> bool {
    if p.t1.len() != y1.len() || p.t2.len() != y1.len() || p.s1.len() != y1.len() || p.s2.len() != y1.len() || p.s3.len() != y1.len() {
        return false;
    }
    let mut tr = Transcript::new("vagg/square");
    tr.append_point(g);
    tr.append_point(h);
    tr.append_points(y1);
    tr.append_points(y2);
    tr.append_points(&p.t1);
    tr.append_points(&p.t2);
    let c = tr.challenge("c");
    (0..y1.len()).all(|i| {
        p.t1[i] == *g * p.s1[i] + *h * p.s2[i] + y1[i] * c && p.t2[i] == y1[i] * p.s1[i] + *h * p.s3[i] + y2[i] * c
    })
}

#[allow(clippy::too_many_arguments)]
fn naive_wf(g: &Point, q: &Point, h: &[Point], z: &Point, e: &[Point], o: &[Point], p: &WellFormedProof) -> bool {
    let mut tr = Transcript::new("vagg/well-formed");
    tr.append_point(g);
    tr.append_point(q);
    tr.append_points(h);
    tr.append_point(z);
    tr.append_points(e);
    tr.append_points(o);
    tr.append_point(&p.u);
    tr.append_points(&p.t);
    tr.append_points(&p.t_star);
    let c = tr.challenge("c");
    p.u == *g * p.y + *z * c
        && (0..h.len()).all(|i| p.t[i] == *g * p.y_vec[i] + h[i] * p.y + e[i] * c)
        && (1..h.len()).all(|i| p.t_star[i - 1] == *g * p.y_vec[i] + *q * p.y_prime[i - 1] + o[i - 1] * c)
}

fn naive_crt(w: &[Point], h: &[Point], a: &SampleMatrix) -> bool {
    let fold = |coeffs: Vec<Scalar>| w.iter().zip(coeffs).fold(Point::identity(), |acc, (wl, c)| acc + *wl * c);
    h[0] == fold(a.a0.clone())
        && a.rows.iter().enumerate().all(|(t, row)| h[t + 1] == fold(row.iter().map(|&x| Scalar::from_i64(x)).collect()))
}

fn batch_equivalence() -> Verdict {
    let b = derive_generators(b"acceptance/batch", 2);
    let (g, q) = (b[0], b[1]);
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let rs = |rng: &mut ChaCha20Rng, n: usize| (0..n).map(|_| Scalar::random(rng)).collect::<Vec<_>>();
    let (mut sq, mut wf, mut crt) = ((0, 0), (0, 0), (0, 0));
    for inst in 0..100 {
        let tamper = inst % 2 == 1;
        let k = rng.gen_range(1..6);

        let (x, r1, r2) = (rs(&mut rng, k), rs(&mut rng, k), rs(&mut rng, k));
        let y1: Vec<Point> = (0..k).map(|i| g * x[i] + q * r1[i]).collect();
        let mut y2: Vec<Point> = (0..k).map(|i| g * x[i].square() + q * r2[i]).collect();
        let mut p = gen_prf_sq(&g, &q, &y1, &y2, &x, &r1, &r2, &mut rng).unwrap();
        if tamper {
            match rng.gen_range(0..3) {
                0 => y2[rng.gen_range(0..k)] += g,
                1 => p.s3[rng.gen_range(0..k)] += Scalar::ONE,
                _ => p.t1[rng.gen_range(0..k)] += q,
            }
        }
        let batch = ver_prf_sq(&g, &q, &y1, &y2, &p, &mut rng);
        sq.0 += (batch == naive_sq(&g, &q, &y1, &y2, &p)) as usize;
        sq.1 += (!batch) as usize;

        let k1 = k + 1;
        let h: Vec<Point> = rs(&mut rng, k1).iter().map(|s| g * *s).collect();
        let (r, v, s) = (Scalar::random(&mut rng), rs(&mut rng, k1), rs(&mut rng, k));
        let z = g * r;
        let mut e: Vec<Point> = (0..k1).map(|i| g * v[i] + h[i] * r).collect();
        let o: Vec<Point> = (1..k1).map(|i| g * v[i] + q * s[i - 1]).collect();
        let mut p = gen_prf_wf(&g, &q, &h, &z, &e, &o, &r, &v, &s, &mut rng).unwrap();
        if tamper {
            match rng.gen_range(0..3) {
                0 => e[rng.gen_range(0..k1)] += g,
                1 => p.y_prime[rng.gen_range(0..k)] += Scalar::ONE,
                _ => p.y += Scalar::ONE,
            }
        }
        let batch = ver_prf_wf(&g, &q, &h, &z, &e, &o, &p, &mut rng);
        wf.0 += (batch == naive_wf(&g, &q, &h, &z, &e, &o, &p)) as usize;
        wf.1 += (!batch) as usize;

        let d = rng.gen_range(1..10);
        let w = derive_generators(b"acceptance/w", d);
        let a = sample_matrix(&rng.gen(), k, d, 32.0);
        let mut hv = vagg_core::protocol::compute_h(&w, &a).unwrap();
        if tamper {
            let t = rng.gen_range(0..hv.len());
            hv[t] += g;
        }
        let batch = ver_crt(&w, &hv, &a, &mut rng);
        crt.0 += (batch == naive_crt(&w, &hv, &a)) as usize;
        crt.1 += (!batch) as usize;
    }
    verdict(
        sq.0 == 100 && wf.0 == 100 && crt.0 == 100 && sq.1 == 50 && wf.1 == 50 && crt.1 == 50,
        format!("agreement sq {}/100, wf {}/100, crt {}/100 (rejected {}, {}, {} of 50 tampered)", sq.0, wf.0, crt.0, sq.1, wf.1, crt.1),
    )
}

// 8. Chi-square law and rounding inequalities.
fn kolmogorov_p(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut p = 0.0;
    for j in 1..=100 {
        let term = 2.0 * (-1f64).powi(j - 1) * (-2.0 * (j as f64 * lambda).powi(2)).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

fn chi_square_law() -> Verdict {
    let (d, m, samples) = (32, 4096.0, 2000);
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let mut lines = Vec::new();
    let mut ok = true;
    let mut rounding_checks = 0usize;
    let mut rounding_ok = 0usize;
    for k in [4usize, 16] {
        let mut stats = Vec::with_capacity(samples);
        for _ in 0..samples {
            let u: Vec<f64> = (0..d).map(|_| rng.gen_range(-100.0..100.0)).collect();
            let norm2: f64 = u.iter().map(|x| x * x).sum();
            let seed: [u8; 32] = rng.gen();
            let (mut sb, mut sa) = (0.0f64, 0.0f64);
            for t in 1..=k {
                let b = gaussian_row(&seed, t, d, m);
                let a = round_row(&b);
                let pb: f64 = b.iter().zip(&u).map(|(x, y)| x * y).sum();
                let pa: f64 = a.iter().zip(&u).map(|(&x, y)| x as f64 * y).sum();
                sb += pb * pb;
                sa += pa * pa;
            }
            stats.push(sb / (m * m * norm2));
            // Rounding moves the projection norm by at most √(kd)·‖u‖/2 each way.
            let slack = (k as f64 * d as f64).sqrt() * norm2.sqrt() / 2.0;
            let tol = 1e-9 * (sa.sqrt() + sb.sqrt() + slack);
            let upper = sa.sqrt() <= sb.sqrt() + slack + tol;
            let lower = sb.sqrt() <= (sa + slack * slack).sqrt() + slack + tol;
            rounding_checks += 1;
            rounding_ok += (upper && lower) as usize;
        }
        stats.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = stats.len() as f64;
        let dstat = stats
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = chi2_cdf(k as f64, x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        let p = kolmogorov_p(dstat, stats.len());
        ok &= p > 1e-3;
        lines.push(format!("k={k}: D={dstat:.4} p={p:.3}"));
    }
    ok &= rounding_ok == rounding_checks;
    lines.push(format!("rounding inequalities held on {rounding_ok}/{rounding_checks}"));
    verdict(ok, lines.join("; "))
}

// 9. Flag-rule scenarios.
struct Flagging(BTreeMap<ClientId, Vec<ClientId>>);
impl Adversary for Flagging {
    fn flags(&mut self, from: ClientId, flags: &mut Vec<ClientId>) {
        if let Some(f) = self.0.get(&from) {
            *flags = f.clone();
        }
    }
}

fn flag_scenarios() -> Verdict {
    let mut cases = 0u64;
    let mut violations = 0u64;
    for n in 3..=8usize {
        for m in 1..=(n - 1) / 2 {
            let mal: BTreeSet<ClientId> = (1..=m as ClientId).collect();
            let peers = |i: ClientId| -> Vec<ClientId> { (1..=n as ClientId).filter(|&j| j != i).collect() };
            let total: u64 = mal.iter().map(|&i| 1u64 << peers(i).len()).product();
            for code in 0..total {
                let mut rest = code;
                let mut matrix: BTreeMap<ClientId, BTreeSet<ClientId>> = BTreeMap::new();
                for &i in &mal {
                    let p = peers(i);
                    let c = 1u64 << p.len();
                    let mask = rest % c;
                    rest /= c;
                    matrix.insert(i, p.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, x)| *x).collect());
                }
                for honest_flags_all in [false, true] {
                    let mut mx = matrix.clone();
                    for i in (m as ClientId + 1)..=n as ClientId {
                        mx.insert(i, if honest_flags_all { mal.clone() } else { BTreeSet::new() });
                    }
                    let out = resolve_flags(&mx, m);
                    cases += 1;
                    for i in (m as ClientId + 1)..=n as ClientId {
                        let mut seen = mal.clone();
                        seen.extend(out.requests.get(&i).into_iter().flatten());
                        if out.malicious.contains_key(&i) || seen.len() > m {
                            violations += 1;
                        }
                    }
                    for (&i, why) in &out.malicious {
                        if let MaliciousReason::OverFlagging(c) = why {
                            violations += (*c <= m || !mal.contains(&i)) as u64;
                        }
                    }
                }
            }
        }
    }
    // The three scenarios end to end.
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let mut scenario = |n: usize, m: usize, flags: BTreeMap<ClientId, Vec<ClientId>>| {
        let params = CheckParameters::new(n, m, 8, 4, -20.0, 64.0, 1.0, 8, 16).unwrap();
        let gens = Arc::new(GeneratorSet::new(8, params.range_capacity()));
        let mut s = Session::new(params, gens, &mut rng).unwrap();
        let us: Vec<Vec<i64>> = (0..n).map(|_| (0..8).map(|_| rng.gen_range(-20..20)).collect()).collect();
        let colluders: BTreeSet<ClientId> = flags.keys().copied().collect();
        let out = s.run_round(&us, &mut Flagging(flags), &mut rng).unwrap();
        let exposure = out.exposure(n, &colluders);
        let max_exposure = (1..=n as ClientId).filter(|i| !colluders.contains(i)).map(|i| exposure[&i]).max().unwrap();
        (out, max_exposure)
    };
    let (a, _) = scenario(10, 2, BTreeMap::from([(1, (2..=10).collect())]));
    let s1 = a.malicious.keys().copied().collect::<Vec<_>>() == vec![1] && a.honest == (2..=10).collect::<Vec<_>>();
    let (b, exp_b) = scenario(8, 3, BTreeMap::from([(1, vec![6]), (2, vec![6])]));
    let s2 = b.malicious.is_empty() && b.clear_requests.get(&6) == Some(&vec![1, 2]) && b.aggregate.is_ok();
    let s3 = exp_b <= 3;
    verdict(
        violations == 0 && s1 && s2 && s3,
        format!("{cases} exhaustive flag patterns, {violations} violations; over-flagger excluded: {s1}; falsely flagged survives: {s2}; max exposure {exp_b} <= m=3"),
    )
}

// 10. Cost shape.
fn cost_shape() -> Verdict {
    let mut lines = Vec::new();
    let run = |d: usize, k: usize| {
        let cfg = small_config(2, 0, d, k, 10);
        Simulation::new(cfg).unwrap().run_round().unwrap()
    };
    let ds = [64usize, 128, 256, 512, 1024];
    let gen: Vec<f64> = ds.iter().map(|&d| run(d, 16).exponentiations.proof_gen).collect();
    let doubling_ok = gen.windows(2).all(|w| w[1] / w[0] <= 2.0);
    let slope = (gen[gen.len() - 1] / gen[0]).ln() / (ds[ds.len() - 1] as f64 / ds[0] as f64).ln();
    let sublinear = doubling_ok && slope < 1.0;
    lines.push(format!("proof-gen exps over d={ds:?}: {:?} (log-log slope {slope:.3})", gen.iter().map(|x| x.round()).collect::<Vec<_>>()));

    // Message sizes: the exact predictor must match a measured round, then
    // is evaluated at d = 10^4, k = 10^3.
    let r = run(64, 4);
    let cfg = small_config(2, 0, 64, 4, 10);
    let predictor_exact = r.bytes_per_client.values().all(|&b| b == predicted_client_bytes(&cfg.params().unwrap(), 2));
    let mut comm_ok = true;
    for d in [10_000usize, 100_000, 1_000_000] {
        let p = CheckParameters::new(10, 1, d, 1000, -128.0, 24f64.exp2(), 1.0, 12, 16).unwrap();
        let ratio = predicted_client_bytes(&p, 10) as f64 / (32.0 * d as f64);
        comm_ok &= (ratio - 1.0).abs() <= 0.10;
        lines.push(format!("comm d={d}: {ratio:.3}x of d point encodings"));
    }
    verdict(
        sublinear && predictor_exact && comm_ok,
        format!("{}; predictor exact: {predictor_exact}", lines.join("; ")),
    )
}

// 11. VSSS suite.
fn vsss_suite() -> Verdict {
    let g = derive_generators(b"acceptance/vsss", 1)[0];
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let (mut recover, mut recover_total) = (0, 0);
    for n in 1..=8usize {
        for t in 1..=n {
            let r = Scalar::random(&mut rng);
            let (shares, _) = ss_share(r, n, t, &g, &mut rng).unwrap();
            for mask in 0u32..1 << n {
                if mask.count_ones() as usize != t {
                    continue;
                }
                let pick: Vec<Share> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| shares[i]).collect();
                recover_total += 1;
                recover += (ss_recover(&pick, t).unwrap() == r) as usize;
            }
        }
    }
    let (mut homo, mut tamper) = (0, 0);
    let trials = 1000;
    for _ in 0..trials {
        let n = rng.gen_range(2..=8);
        let t = rng.gen_range(1..=n);
        let dealt: Vec<_> = (0..3).map(|_| ss_share(Scalar::random(&mut rng), n, t, &g, &mut rng).unwrap()).collect();
        let psis: Vec<_> = dealt.iter().map(|(_, p)| p).collect();
        let i = rng.gen_range(0..n);
        let at_i: Vec<Share> = dealt.iter().map(|(s, _)| s[i]).collect();
        let (psi, share) = ss_combine(&psis, &at_i).unwrap();
        homo += ss_verify(&psi, &share, n, t, &g) as usize;
        let bad = Share { index: share.index, value: share.value + Scalar::random(&mut rng) };
        tamper += (!ss_verify(&psi, &bad, n, t, &g)) as usize;
    }
    verdict(
        recover == recover_total && homo == trials && tamper == trials,
        format!("recovery {recover}/{recover_total} subsets; homomorphic verify {homo}/{trials}; tamper detected {tamper}/{trials}"),
    )
}

fn main() {
    let wanted: Option<BTreeSet<u32>> = std::env::var("VAGG_CRITERIA")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(u32, &str, fn() -> Verdict); 11] = [
        (1, "exact aggregation", exact_aggregation),
        (2, "honest completeness", honest_completeness),
        (3, "pass-rate curve", pass_rate_curve),
        (4, "damage ratios", damage_ratios),
        (5, "F thresholds", f_thresholds),
        (6, "proof round trip and tamper matrix", zkp_tamper_matrix),
        (7, "batch verifier equivalence", batch_equivalence),
        (8, "chi-square law and rounding", chi_square_law),
        (9, "flag-rule scenarios", flag_scenarios),
        (10, "cost shape", cost_shape),
        (11, "VSSS suite", vsss_suite),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        if wanted.as_ref().is_some_and(|w| !w.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let known = UNATTAINABLE.contains(&id);
        let status = match (v.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (unattainable as stated)",
            (false, false) => "FAIL",
        };
        if !v.pass && !known {
            unexpected += 1;
        }
        println!("criterion {id:>2} {name}: {status} [{:.1}s] {}", start.elapsed().as_secs_f64(), v.detail);
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
