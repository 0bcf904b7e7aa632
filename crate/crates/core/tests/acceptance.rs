//! Acceptance criteria, one line per criterion.
//!
//! Runs with a plain `main` so that every criterion is evaluated and reported
//! even when an earlier one fails. Criteria listed in `KNOWN_FAILURES` still
//! print FAIL with the measured numbers; the process fails on any other
//! failure, and also if a known failure starts passing.

use std::time::{Duration, Instant};

use rand::Rng;

use symdeg::bcs::{
    half_line_log_integral, critical_temperature, temperature_curve, jw_verify, k_integral, solve_gap_zero_t, BcsSpec, KAPPA_PER_G0,
};
use symdeg::bec::{
    displaced_oscillator_verify, dos_ground_bec_from_order, dos_thermal_bec, dos_thermal_bec_from_order, hp_map_verify, BecSpec,
};
use symdeg::sampling::{random_density, random_hermitian, task_rng, task_seed};
use symdeg::spin::{limit_diagnostics, LimitState};
use symdeg::symmetry::{dos_hamiltonian, dos_state, GroupSpec, Method};
use symdeg::verify::{
    self, closed_form_deviations, curve_expected_ground, product_exponential_deviation, universality_deviation,
    wide_shell_spec, VerifyConfig,
};

const SEED: u64 = 20_240_601;
const KNOWN_FAILURES: &[usize] = &[8];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut quad, mut sigma) = (0.0_f64, 0.0_f64);
    for i in 0..40u64 {
        let n = (i % 3 + 1) as usize;
        let group = GroupSpec::new(n).unwrap();
        let mut rng = task_rng(SEED, i);
        let quad_m = Method::Quadrature { nodes_per_angle: 32 };
        let mc_m = Method::MonteCarlo { samples: 100_000, seed: task_seed(SEED, 1000 + i) };
        let (p, q, m) = if i < 20 {
            let h = random_hermitian(&mut rng, 1 << n).unwrap();
            (
                dos_hamiltonian(&h, group, Method::Pinching).unwrap(),
                dos_hamiltonian(&h, group, quad_m).unwrap(),
                dos_hamiltonian(&h, group, mc_m).unwrap(),
            )
        } else {
            let rho = random_density(&mut rng, 1 << n).unwrap();
            (
                dos_state(&rho, group, Method::Pinching).unwrap(),
                dos_state(&rho, group, quad_m).unwrap(),
                dos_state(&rho, group, mc_m).unwrap(),
            )
        };
        quad = quad.max((p.value - q.value).abs());
        sigma = sigma.max((p.value - m.value).abs() / m.error_estimate);
    }
    let elapsed = start.elapsed();
    outcome(
        quad <= 1e-8 && sigma <= 4.0 && elapsed <= Duration::from_secs(60),
        format!("max |P-Q| = {quad:.3e} (<= 1e-8), max |P-MC|/stderr = {sigma:.3} (<= 4), {:.1} s (<= 60)", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let devs = closed_form_deviations(SEED, 60).unwrap();
    let elapsed = start.elapsed();
    let worst = devs.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    let names: Vec<String> = devs.iter().map(|(n, d)| format!("{n} {d:.1e}")).collect();
    outcome(
        worst <= 1e-10 && elapsed <= Duration::from_secs(60),
        format!("60 sets, max deviation {worst:.3e} (<= 1e-10), {:.1} s; {}", elapsed.as_secs_f64(), names.join(", ")),
    )
}

fn criterion_3() -> Outcome {
    let v = half_line_log_integral().unwrap();
    let d = (v + KAPPA_PER_G0).abs();
    outcome(d <= 1e-6, format!("integral = {v:.12}, |integral + (2-sqrt2)pi| = {d:.3e} (<= 1e-6)"))
}

fn criterion_4() -> Outcome {
    let grid = [0.0, 0.5, 1.0, 2.0, 5.0, 50.0];
    let k: Vec<f64> = grid.iter().map(|&x| k_integral(x).unwrap()).collect();
    let d = (k[5] + 0.5 * KAPPA_PER_G0).abs();
    let monotone = k.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        d <= 1e-4 && k[0] == 0.0 && monotone,
        format!("K(50) = {:.9}, deviation {d:.3e} (<= 1e-4), K(0) = {}, monotone = {monotone}", k[5], k[0]),
    )
}

fn criterion_5() -> Outcome {
    let spec = wide_shell_spec().unwrap();
    let ratio = spec.hbar_omega_d / solve_gap_zero_t(&spec).unwrap();
    let d = product_exponential_deviation(&spec).unwrap();
    outcome(d <= 0.02, format!("hbar omega_D / Delta(0) = {ratio:.6}, relative deviation of ln(2S-1) = {d:.4e} (<= 0.02)"))
}

fn criterion_6() -> Outcome {
    let spec = BcsSpec::new(1.0, 1.0, 0.15, 2).unwrap();
    let ratio = solve_gap_zero_t(&spec).unwrap() / critical_temperature(&spec).unwrap();
    let uni = universality_deviation(101).unwrap();
    outcome(
        (ratio - 1.764).abs() <= 0.002 && uni <= 0.005,
        format!("Delta(0)/kTc = {ratio:.6} (1.764 +- 0.002), max gap-curve difference = {uni:.3e} (<= 0.005)"),
    )
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for g in [0.4, 0.5] {
        let rows = temperature_curve(g, 121).unwrap();
        let s0 = rows[0].dos;
        let expected = curve_expected_ground(g);
        let below: Vec<f64> = rows.iter().filter(|r| r.t_over_tc <= 1.0).map(|r| r.dos).collect();
        let monotone = below.windows(2).all(|w| w[1] >= w[0]);
        let above_one = rows.iter().filter(|r| r.t_over_tc >= 1.0).all(|r| r.dos == 1.0);
        let close = (s0 - expected).abs() <= 1e-3;
        ok &= close && monotone && above_one;
        parts.push(format!("g0kTc={g}: S(0) = {s0:.6} vs {expected:.6}, monotone = {monotone}, S=1 above Tc = {above_one}"));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_8() -> Outcome {
    // ε = 1 sets the energy scale, as in the other limit examples
    let rows = limit_diagnostics(1.0, &[1e-3, 1e-8], &[10, 1_000_000], LimitState::Ground).unwrap();
    let find = |n: usize, l: f64| rows.iter().find(|r| r.n == n && r.perturbation == l).unwrap().dos_state;
    let large = find(1_000_000, 1e-3);
    let small = find(10, 1e-8);
    let further = limit_diagnostics(1.0, &[1e-3], &[100_000_000], LimitState::Ground).unwrap()[0].dos_state;
    outcome(
        large <= 0.501 && small >= 0.999999,
        format!(
            "eps=1: S(N=1e6, lambda=1e-3) = {large:.6} (<= 0.501), S(N=10, lambda=1e-8) = {small:.12} (>= 0.999999); \
             S(N=1e8, lambda=1e-3) = {further:.6}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0_f64;
    for eps in [vec![0.7], vec![-0.4, 1.3]] {
        worst = worst.max(jw_verify(&eps, 0.55).unwrap().max_deviation());
    }
    outcome(worst <= 1e-12, format!("m = 1, 2: max deviation {worst:.3e} (<= 1e-12)"))
}

fn criterion_10() -> Outcome {
    let hp = [2, 4, 20].map(|n| hp_map_verify(n).unwrap().identity_deviation).into_iter().fold(0.0, f64::max);
    let zero = displaced_oscillator_verify(0.0, 40).unwrap();
    let mut ok = hp <= 1e-10 && zero.commutator_norm <= 1e-12;
    let mut parts = vec![format!("identity deviation {hp:.3e} (<= 1e-10)"), format!("||[R,H]||(alpha=0) = {:.1e}", zero.commutator_norm)];
    for alpha in [0.5, 2.0] {
        let r = displaced_oscillator_verify(alpha, 80).unwrap();
        let overlap_ok = r.coherent_overlap >= 1.0 - 1e-8;
        let order_ok = (r.order_parameter + alpha).abs() <= 1e-8;
        let comm_ok = r.commutator_norm > 1e-12;
        ok &= overlap_ok && order_ok && comm_ok;
        parts.push(format!(
            "alpha={alpha}: 1-overlap = {:.1e}, <a>+alpha = {:.1e}, ||[R,H]|| = {:.3}",
            1.0 - r.coherent_overlap,
            r.order_parameter + alpha,
            r.commutator_norm
        ));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_11() -> Outcome {
    let s = dos_ground_bec_from_order(1.0, 10_000).unwrap();
    let d = (s - (0.5 + 0.5 * (-2.0f64).exp())).abs();
    let mut rng = task_rng(SEED, 11);
    let mut identity = 0.0_f64;
    let (mut lo, mut hi) = (1.0_f64, 0.0_f64);
    for _ in 0..100 {
        let n = rng.random_range(1..=10_000usize);
        let eps: f64 = rng.random_range(0.2..3.0);
        // λ ~ 1/√N keeps S away from 1/2
        let lambda = eps * rng.random_range(-2.0..2.0) / (n as f64).sqrt();
        let spec = BecSpec::new(n, eps, lambda, 16).unwrap();
        let beta = rng.random_range(0.0..5.0);
        let s = dos_thermal_bec(&spec, beta).unwrap();
        (lo, hi) = (lo.min(s), hi.max(s));
        identity = identity.max((s - dos_thermal_bec_from_order(&spec, beta).unwrap()).abs());
    }
    outcome(
        d <= 2e-5 && identity <= 1e-14,
        format!("large-N deviation {d:.3e} (<= 2e-5), two thermal forms differ by {identity:.1e} (<= 1e-14) over S in [{lo:.4}, {hi:.4}]"),
    )
}

fn criterion_12() -> Outcome {
    let cfg = VerifyConfig { seed: SEED, ..Default::default() };
    let start = Instant::now();
    let first = verify::report(&cfg, &verify::run(&cfg).unwrap());
    let elapsed = start.elapsed();
    let second = verify::report(&cfg, &verify::run(&cfg).unwrap());
    outcome(
        first == second && elapsed <= Duration::from_secs(300),
        format!("identical reports = {}, {} bytes, full verify {:.1} s (<= 300)", first == second, first.len(), elapsed.as_secs_f64()),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("oracle triangle", criterion_1),
        ("closed-form equivalence", criterion_2),
        ("half-line log integral", criterion_3),
        ("K consistency", criterion_4),
        ("product vs exponential", criterion_5),
        ("BCS solver pair", criterion_6),
        ("temperature curves", criterion_7),
        ("non-commuting limits", criterion_8),
        ("Jordan-Wigner", criterion_9),
        ("Dicke and displaced oscillator", criterion_10),
        ("condensate large N", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        let o = f();
        let known = KNOWN_FAILURES.contains(&id);
        let status = match (o.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        println!("criterion {id:>2} {status:<17} {name}: {}", o.detail);
        if o.passed == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
