//! Self-check suites behind the `verify` command.
//!
//! Each suite compares a closed form or solver against an independent
//! computation and records the largest deviation seen next to its limit.
//! Reports carry no timings, so a fixed seed gives byte-identical output.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use crate::bcs::{
    half_line_log_integral, critical_temperature, dos_ground_exponential, dos_ground_product, dos_h_bcs, bcs_spin_hamiltonian,
    temperature_curve, gap_curve, jw_verify, k_integral, solve_gap_zero_t, BcsSpec, KAPPA_PER_G0,
};
use crate::bec::{
    boson_limit_verify, collective_lowering, displaced_oscillator_verify, dos_ground_bec, dos_ground_bec_from_order,
    dos_h_bec, dos_thermal_bec, dos_thermal_bec_from_order, hp_map_verify, BecSpec,
};
use crate::error::{Error, Result};
use crate::operator::{thermal_state, State};
use crate::sampling::{random_density, random_hermitian, task_rng, task_seed};
use crate::spin::{build_hamiltonian, dos_ground_closed, dos_h_closed, dos_thermal_closed, ground_state, ManySpinSpec};
use crate::symmetry::{dos_hamiltonian, dos_state, GroupSpec, Method};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_JW_MODES: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    OracleTriangle,
    ClosedForms,
    LogIntegral,
    KIntegral,
    Bcs,
    JordanWigner,
    Dicke,
    DisplacedOscillator,
    Bec,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::OracleTriangle,
        Suite::ClosedForms,
        Suite::LogIntegral,
        Suite::KIntegral,
        Suite::Bcs,
        Suite::JordanWigner,
        Suite::Dicke,
        Suite::DisplacedOscillator,
        Suite::Bec,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::OracleTriangle => "oracle-triangle",
            Suite::ClosedForms => "closed-forms",
            Suite::LogIntegral => "log-integral",
            Suite::KIntegral => "k-integral",
            Suite::Bcs => "bcs",
            Suite::JordanWigner => "jw",
            Suite::Dicke => "dicke",
            Suite::DisplacedOscillator => "displaced-oscillator",
            Suite::Bec => "bec",
        }
    }

    pub fn parse(name: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{name}'")))
    }

    // stream offset keeping suites on disjoint random streams
    fn stream_base(&self) -> u64 {
        (*self as u64) << 32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub jw_modes: usize,
    pub suites: Vec<Suite>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, jw_modes: DEFAULT_JW_MODES, suites: Suite::ALL.to_vec() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
    Holds,
}

/// One measured quantity and the bound it must respect.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, bound: Bound::AtMost, passed: value <= limit }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, bound: Bound::AtLeast, passed: value >= limit }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 1.0 } else { 0.0 }, limit: 1.0, bound: Bound::Holds, passed: ok }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Largest value among the checks bounded from above.
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().filter(|c| c.bound == Bound::AtMost).map(|c| c.value).fold(0.0, f64::max)
    }
}

pub fn run(cfg: &VerifyConfig) -> Result<Vec<SuiteOutcome>> {
    cfg.suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let checks = match suite {
        Suite::OracleTriangle => oracle_triangle(cfg.seed, suite.stream_base())?,
        Suite::ClosedForms => closed_forms(cfg.seed, suite.stream_base())?,
        Suite::LogIntegral => log_integral_suite()?,
        Suite::KIntegral => k_integral_suite()?,
        Suite::Bcs => bcs_suite()?,
        Suite::JordanWigner => jw_suite(cfg.seed, suite.stream_base(), cfg.jw_modes)?,
        Suite::Dicke => dicke_suite()?,
        Suite::DisplacedOscillator => displaced_suite()?,
        Suite::Bec => bec_suite(cfg.seed, suite.stream_base())?,
    };
    Ok(SuiteOutcome { suite, checks })
}

pub fn report(cfg: &VerifyConfig, outcomes: &[SuiteOutcome]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed {}", cfg.seed);
    let _ = writeln!(out, "bcs thermal states use a two-level pseudospin per mode");
    for o in outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status} {} max_deviation={:.6e}", o.suite.name(), o.max_deviation());
        for c in &o.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            let _ = match c.bound {
                Bound::AtMost => writeln!(out, "    {:<52} {:>14.6e} <= {:.3e}  {mark}", c.name, c.value, c.limit),
                Bound::AtLeast => writeln!(out, "    {:<52} {:>14.6e} >= {:.3e}  {mark}", c.name, c.value, c.limit),
                Bound::Holds => writeln!(out, "    {:<52} {:>14}              {mark}", c.name, "holds"),
            };
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let _ = writeln!(out, "{} suites, {} failed", outcomes.len(), failed);
    out
}

pub const ORACLE_CASES: usize = 20;
pub const ORACLE_NODES: usize = 32;
pub const ORACLE_SAMPLES: usize = 100_000;

fn oracle_triangle(seed: u64, base: u64) -> Result<Vec<Check>> {
    let mut quad_dev = 0.0_f64;
    let mut mc_sigma = 0.0_f64;
    for i in 0..2 * ORACLE_CASES {
        let stream = base + i as u64;
        let mut rng = task_rng(seed, stream);
        let n = i % 3 + 1;
        let group = GroupSpec::new(n)?;
        let mc = Method::MonteCarlo { samples: ORACLE_SAMPLES, seed: task_seed(seed, stream | 1 << 31) };
        let quad = Method::Quadrature { nodes_per_angle: ORACLE_NODES };
        let (p, q, m) = if i < ORACLE_CASES {
            let h = random_hermitian(&mut rng, 1 << n)?;
            (
                dos_hamiltonian(&h, group, Method::Pinching)?,
                dos_hamiltonian(&h, group, quad)?,
                dos_hamiltonian(&h, group, mc)?,
            )
        } else {
            let rho = random_density(&mut rng, 1 << n)?;
            (dos_state(&rho, group, Method::Pinching)?, dos_state(&rho, group, quad)?, dos_state(&rho, group, mc)?)
        };
        quad_dev = quad_dev.max((p.value - q.value).abs());
        let diff = (p.value - m.value).abs();
        let sigma = if m.error_estimate > 0.0 { diff / m.error_estimate } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
        mc_sigma = mc_sigma.max(sigma);
    }
    Ok(vec![
        Check::at_most("pinching vs quadrature deviation", quad_dev, 1e-8),
        Check::at_most("pinching vs monte carlo, in standard errors", mc_sigma, 4.0),
    ])
}

pub const CLOSED_FORM_CASES: usize = 50;
pub const CLOSED_FORM_TOL: f64 = 1e-10;

fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn pinch_h(h: &crate::operator::Operator, n: usize) -> Result<f64> {
    Ok(dos_hamiltonian(h, GroupSpec::new(n)?, Method::Pinching)?.value)
}

fn pinch_state(rho: &State, n: usize) -> Result<f64> {
    Ok(dos_state(rho, GroupSpec::new(n)?, Method::Pinching)?.value)
}

/// Largest |closed form - pinching| of each closed form over random parameters.
pub fn closed_form_deviations(seed: u64, cases: usize) -> Result<Vec<(&'static str, f64)>> {
    closed_form_deviations_on(seed, Suite::ClosedForms.stream_base(), cases)
}

fn closed_form_deviations_on(seed: u64, base: u64, cases: usize) -> Result<Vec<(&'static str, f64)>> {
    let names = [
        "spin hamiltonian",
        "spin ground state",
        "spin thermal state",
        "bcs hamiltonian",
        "condensate hamiltonian",
        "condensate ground state",
        "condensate ground state via <a>",
        "condensate thermal state",
        "condensate thermal state via <a>_T",
    ];
    let mut dev = [0.0_f64; 9];
    for i in 0..cases {
        let mut rng = task_rng(seed, base + i as u64);
        let n = rng.random_range(1..=6usize);
        let (e, l, m) = (uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
        let beta = uniform(&mut rng, 0.0, 5.0);

        let spec = ManySpinSpec::new(n, e, l, m)?;
        let h = build_hamiltonian(&spec)?;
        dev[0] = dev[0].max((dos_h_closed(&spec)? - pinch_h(&h, n)?).abs());
        dev[1] = dev[1].max((dos_ground_closed(&spec)? - pinch_state(&ground_state(&spec)?, n)?).abs());
        dev[2] = dev[2].max((dos_thermal_closed(&spec, beta)? - pinch_state(&thermal_state(&h, beta)?, n)?).abs());

        let eps: Vec<f64> = (0..n).map(|_| uniform(&mut rng, -2.0, 2.0)).collect();
        let delta = Complex64::new(uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0));
        dev[3] = dev[3].max((dos_h_bcs(&eps, delta)? - pinch_h(&bcs_spin_hamiltonian(&eps, delta)?, n)?).abs());

        let b = BecSpec::new(n, e, l, 16)?;
        let hb = build_hamiltonian(&b.spin_spec())?;
        let g = ground_state(&b.spin_spec())?;
        let rho_t = thermal_state(&hb, beta)?;
        let lowering = collective_lowering(n)?;
        let sqrt_n = (n as f64).sqrt();
        let a0 = g.expectation(&lowering)?.re / sqrt_n;
        let s_ground = pinch_state(&g, n)?;
        let s_thermal = pinch_state(&rho_t, n)?;
        dev[4] = dev[4].max((dos_h_bec(&b)? - pinch_h(&hb, n)?).abs());
        dev[5] = dev[5].max((dos_ground_bec(&b)? - s_ground).abs());
        dev[6] = dev[6].max((dos_ground_bec_from_order(a0, n)? - s_ground).abs());
        dev[7] = dev[7].max((dos_thermal_bec(&b, beta)? - s_thermal).abs());
        dev[8] = dev[8].max((dos_thermal_bec_from_order(&b, beta)? - s_thermal).abs());
    }
    Ok(names.into_iter().zip(dev).collect())
}

fn closed_forms(seed: u64, base: u64) -> Result<Vec<Check>> {
    Ok(closed_form_deviations_on(seed, base, CLOSED_FORM_CASES)?
        .into_iter()
        .map(|(name, d)| Check::at_most(format!("{name} deviation"), d, CLOSED_FORM_TOL))
        .collect())
}

fn log_integral_suite() -> Result<Vec<Check>> {
    let v = half_line_log_integral()?;
    Ok(vec![Check::at_most("|integral + (2 - sqrt 2) pi| deviation", (v + KAPPA_PER_G0).abs(), 1e-6)])
}

pub const K_GRID: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 50.0];

fn k_integral_suite() -> Result<Vec<Check>> {
    let values = K_GRID.iter().map(|&x| k_integral(x)).collect::<Result<Vec<_>>>()?;
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    Ok(vec![
        Check::at_most("|K(50) + (2 - sqrt 2) pi / 2| deviation", (values[5] + 0.5 * KAPPA_PER_G0).abs(), 1e-4),
        Check::at_most("|K(0)| deviation", values[0].abs(), 0.0),
        Check::holds("K non-increasing in beta*delta", monotone),
    ])
}

/// Spec for the weak-coupling ratio check: ħω_D = 1, g0 = 1.
pub const RATIO_G0V: f64 = 0.15;
pub const UNIVERSALITY_G0V: [f64; 2] = [0.1, 0.2];

/// ħω_D/Δ(0) = 100 with a continuum grid fine enough for a percent-level comparison.
pub fn wide_shell_spec() -> Result<BcsSpec> {
    BcsSpec::new(1.0, 1.0, 1.0 / 100f64.asinh(), 20_000)
}

/// Relative deviation of ln(2S - 1) between the finite-shell product and the exponential.
pub fn product_exponential_deviation(spec: &BcsSpec) -> Result<f64> {
    let delta0 = solve_gap_zero_t(spec)?;
    let prod = dos_ground_product(spec, delta0)?;
    let exp = dos_ground_exponential(spec.g0, delta0);
    let (lp, le) = ((2.0 * prod - 1.0).ln(), (2.0 * exp - 1.0).ln());
    Ok(((lp - le) / le).abs())
}

/// Max |Δ(T)/Δ(0)| difference between the two couplings on a T/T_c grid.
pub fn universality_deviation(points: usize) -> Result<f64> {
    let ratios: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    let curves = UNIVERSALITY_G0V
        .iter()
        .map(|&g| gap_curve(&BcsSpec::new(1.0, 1.0, g, 2)?, &ratios))
        .collect::<Result<Vec<_>>>()?;
    Ok(curves[0]
        .delta
        .iter()
        .zip(&curves[1].delta)
        .map(|(a, b)| (a / curves[0].delta0 - b / curves[1].delta0).abs())
        .fold(0.0, f64::max))
}

pub fn curve_expected_ground(g0ktc: f64) -> f64 {
    0.5 + 0.5 * (-1.840301 * 1.764 * g0ktc).exp()
}

fn bcs_suite() -> Result<Vec<Check>> {
    let spec = BcsSpec::new(1.0, 1.0, RATIO_G0V, 2)?;
    let ratio = solve_gap_zero_t(&spec)? / critical_temperature(&spec)?;
    let mut checks = vec![
        Check::at_most("|delta0/Tc - 1.764| deviation", (ratio - 1.764).abs(), 2e-3),
        Check::at_most("gap curve universality deviation", universality_deviation(61)?, 5e-3),
        Check::at_most("product vs exponential relative error", product_exponential_deviation(&wide_shell_spec()?)?, 0.02),
    ];
    for g0ktc in [0.4, 0.5] {
        let rows = temperature_curve(g0ktc, 61)?;
        let s0 = rows[0].dos;
        let below: Vec<f64> = rows.iter().filter(|r| r.t_over_tc <= 1.0).map(|r| r.dos).collect();
        checks.push(Check::at_most(format!("S(0) at g0kTc={g0ktc} deviation"), (s0 - curve_expected_ground(g0ktc)).abs(), 1e-3));
        checks.push(Check::holds(format!("S monotone below Tc at g0kTc={g0ktc}"), below.windows(2).all(|w| w[1] >= w[0])));
        checks.push(Check::holds(
            format!("S = 1 above Tc at g0kTc={g0ktc}"),
            rows.iter().filter(|r| r.t_over_tc >= 1.0).all(|r| r.dos == 1.0),
        ));
    }
    Ok(checks)
}

fn jw_suite(seed: u64, base: u64, modes: usize) -> Result<Vec<Check>> {
    let mut rng = task_rng(seed, base);
    let eps: Vec<f64> = (0..modes).map(|_| uniform(&mut rng, -2.0, 2.0)).collect();
    let v = uniform(&mut rng, 0.1, 1.0);
    let r = jw_verify(&eps, v)?;
    Ok(vec![
        Check::at_most("fermion anticommutator deviation", r.anticommutator_deviation, 1e-12),
        Check::at_most("pseudospin commutator deviation", r.commutator_deviation, 1e-12),
        Check::at_most("hamiltonian identity deviation", r.hamiltonian_deviation, 1e-12),
    ])
}

fn dicke_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in [2, 4, 20] {
        let r = hp_map_verify(n)?;
        checks.push(Check::at_most(format!("commutator identity deviation, N={n}"), r.identity_deviation, 1e-10));
    }
    let r = hp_map_verify(1000)?;
    checks.push(Check::at_most("near-boson bound excess, N=1000", r.max_bound_excess, r.bound_slack));
    Ok(checks)
}

fn displaced_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let r0 = displaced_oscillator_verify(0.0, 32)?;
    checks.push(Check::at_most("commutator norm deviation, alpha=0", r0.commutator_norm, 1e-12));
    for alpha in [0.5, 2.0] {
        let r = displaced_oscillator_verify(alpha, 80)?;
        checks.push(Check::at_most(format!("<a> + alpha deviation, alpha={alpha}"), (r.order_parameter + alpha).abs(), 1e-8));
        checks.push(Check::at_most(format!("1 - coherent overlap deviation, alpha={alpha}"), 1.0 - r.coherent_overlap, 1e-8));
        checks.push(Check::at_least(format!("commutator norm, alpha={alpha}"), r.commutator_norm, 1e-12));
    }
    Ok(checks)
}

fn bec_suite(seed: u64, base: u64) -> Result<Vec<Check>> {
    let large = dos_ground_bec_from_order(1.0, 10_000)?;
    let mut identity = 0.0_f64;
    for i in 0..100 {
        let mut rng = task_rng(seed, base + i);
        let n = rng.random_range(1..=10_000usize);
        let eps = uniform(&mut rng, 0.2, 3.0);
        // λ ~ 1/√N keeps S away from 1/2
        let lambda = eps * uniform(&mut rng, -2.0, 2.0) / (n as f64).sqrt();
        let spec = BecSpec::new(n, eps, lambda, 16)?;
        let beta = uniform(&mut rng, 0.0, 5.0);
        identity = identity.max((dos_thermal_bec(&spec, beta)? - dos_thermal_bec_from_order(&spec, beta)?).abs());
    }
    let boson = boson_limit_verify(&BecSpec::new(200, 1.0, 0.1, 64)?)?;
    Ok(vec![
        Check::at_most("large-N ground state deviation", (large - (0.5 + 0.5 * (-2.0f64).exp())).abs(), 2e-5),
        Check::at_most("thermal field vs order-parameter form deviation", identity, 1e-14),
        Check::at_most("boson gap deviation vs xi/eps - 1", (boson.gap_deviation - boson.gap_deviation_predicted).abs(), 1e-8),
        Check::at_most("boson <a> ratio deviation vs eps/xi", (boson.order_ratio - boson.order_ratio_predicted).abs(), 1e-8),
    ])
}
