//! BCS superconductor in pseudospin form.
//!
//! Each Cooper-pair mode k is a two-level pseudospin; in mean field the
//! Hamiltonian is H_S = -Σ_k (ε_k σ_z^k + Re Δ σ_x^k + Im Δ σ_y^k), a
//! site-dependent version of the many-spin model. Energies are in units where
//! k_B = 1, the density of states g(ε) = g0 is constant over the Debye shell
//! [-ħω_D, ħω_D], and the coupling enters through the dimensionless g0·V.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{integrate_panels, integrate_semi_infinite, solve_bisect, TailBound};
use crate::operator::{embed_local, Operator, C64};
use crate::spin::site_field_hamiltonian;

/// κ / g(0) = (2 - √2)π
pub const KAPPA_PER_G0: f64 = (2.0 - std::f64::consts::SQRT_2) * PI;

/// Absolute tolerance used for the K(T) and half-line log integral.
pub const K_TOL: f64 = 1e-10;

// tanh(x) == 1.0 in f64 beyond this argument
const TANH_SATURATION: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BcsSpec {
    /// Density of states at the Fermi level, per unit energy.
    pub g0: f64,
    pub hbar_omega_d: f64,
    /// Dimensionless coupling g(0)·V.
    pub g0v: f64,
    /// Number of ε_k grid cells across [-ħω_D, ħω_D].
    pub m_modes: usize,
}

impl BcsSpec {
    pub fn new(g0: f64, hbar_omega_d: f64, g0v: f64, m_modes: usize) -> Result<Self> {
        let spec = Self { g0, hbar_omega_d, g0v, m_modes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g0 > 0.0 && self.g0.is_finite()) {
            return Err(Error::InvalidInput(format!("g0 must be positive, got {}", self.g0)));
        }
        if !(self.hbar_omega_d > 0.0 && self.hbar_omega_d.is_finite()) {
            return Err(Error::InvalidInput(format!("Debye energy must be positive, got {}", self.hbar_omega_d)));
        }
        if !(self.g0v > 0.0 && self.g0v < 1.0) {
            return Err(Error::InvalidInput(format!("g0*V must lie in (0, 1), got {}", self.g0v)));
        }
        if self.m_modes < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 modes, got {}", self.m_modes)));
        }
        Ok(())
    }

    /// Pairing strength V.
    pub fn coupling(&self) -> f64 {
        self.g0v / self.g0
    }

    /// Cell midpoints of the uniform ε_k grid.
    pub fn mode_energies(&self) -> Vec<f64> {
        let h = 2.0 * self.hbar_omega_d / self.m_modes as f64;
        (0..self.m_modes).map(|k| -self.hbar_omega_d + (k as f64 + 0.5) * h).collect()
    }

    /// Number of single-particle states represented by one grid cell, g0·2ħω_D/m.
    pub fn mode_weight(&self) -> f64 {
        self.g0 * 2.0 * self.hbar_omega_d / self.m_modes as f64
    }
}

/// Zero-temperature gap of the continuum equation, Δ(0) = ħω_D / sinh(1/(g0V)).
pub fn solve_gap_zero_t(spec: &BcsSpec) -> Result<f64> {
    spec.validate()?;
    Ok(spec.hbar_omega_d / (1.0 / spec.g0v).sinh())
}

/// Zero-temperature gap of the discretized self-consistency
/// Δ = (V/2) Σ_k w Δ/√(ε_k² + Δ²) over the mode grid, by bisection in ln Δ.
pub fn solve_gap_zero_t_discrete(spec: &BcsSpec) -> Result<f64> {
    spec.validate()?;
    let eps = spec.mode_energies();
    let pref = 0.5 * spec.coupling() * spec.mode_weight();
    let f = |ln_delta: f64| {
        let d2 = (2.0 * ln_delta).exp();
        pref * eps.iter().map(|e| 1.0 / (e * e + d2).sqrt()).sum::<f64>() - 1.0
    };
    let hi = (10.0 * spec.hbar_omega_d).ln();
    let lo = hi - 200.0;
    if f(lo) <= 0.0 {
        return Err(Error::Convergence(format!(
            "mode grid of {} cells too coarse to support a gap at g0V = {}",
            spec.m_modes, spec.g0v
        )));
    }
    Ok(solve_bisect(f, lo, hi, 1e-14, "discrete zero-temperature gap")?.exp())
}

// ∫_0^X tanh(x)/x dx
fn tanh_over_x_integral(x_max: f64) -> f64 {
    let sat = x_max.min(TANH_SATURATION);
    let mut v = integrate_panels(|x| x.tanh() / x, 0.0, sat, 1.0);
    if x_max > sat {
        v += (x_max / sat).ln();
    }
    v
}

/// I(Δ, T) = ∫_0^{ħω_D} tanh(ξ/2T)/ξ dε with ξ = √(ε² + Δ²).
///
/// For Δ > 0 the substitution ε = Δ sinh u turns this into
/// ∫_0^{asinh(ħω_D/Δ)} tanh(Δ cosh u / 2T) du, which is smooth.
pub fn gap_integral(hbar_omega_d: f64, delta: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return (hbar_omega_d / delta).asinh();
    }
    if delta <= 0.0 {
        return tanh_over_x_integral(hbar_omega_d / (2.0 * t));
    }
    let u_max = (hbar_omega_d / delta).asinh();
    let a = delta / (2.0 * t);
    let u_sat = if a >= TANH_SATURATION { 0.0 } else { (TANH_SATURATION / a).acosh() };
    if u_sat >= u_max {
        integrate_panels(|u| (a * u.cosh()).tanh(), 0.0, u_max, 0.5)
    } else {
        integrate_panels(|u| (a * u.cosh()).tanh(), 0.0, u_sat, 0.5) + (u_max - u_sat)
    }
}

/// Critical temperature: g0V·∫_0^{ħω_D/2T_c} tanh(x)/x dx = 1, solved in ln T.
pub fn critical_temperature(spec: &BcsSpec) -> Result<f64> {
    spec.validate()?;
    let delta0 = solve_gap_zero_t(spec)?;
    let f = |ln_t: f64| spec.g0v * tanh_over_x_integral(spec.hbar_omega_d / (2.0 * ln_t.exp())) - 1.0;
    let lo = (delta0 * 1e-3).ln();
    let hi = (delta0 * 10.0).ln().max((spec.hbar_omega_d * 10.0).ln());
    Ok(solve_bisect(f, lo, hi, 1e-14, "critical temperature")?.exp())
}

/// Δ(T) from 1 = g0V ∫_0^{ħω_D} tanh(ξ/2T)/ξ dε.
pub fn solve_gap_finite_t(spec: &BcsSpec, t: f64) -> Result<f64> {
    let tc = critical_temperature(spec)?;
    gap_at(spec, t, tc)
}

fn gap_at(spec: &BcsSpec, t: f64, tc: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("temperature must be >= 0, got {t}")));
    }
    let delta0 = solve_gap_zero_t(spec)?;
    if t == 0.0 {
        return Ok(delta0);
    }
    if t >= tc {
        return Ok(0.0);
    }
    let f = |d: f64| spec.g0v * gap_integral(spec.hbar_omega_d, d, t) - 1.0;
    if f(delta0) >= 0.0 {
        // tanh saturated over the whole shell
        return Ok(delta0);
    }
    solve_bisect(f, 0.0, delta0, 1e-15 * delta0, "finite-temperature gap")
}

/// Δ(T) sampled on T/T_c.
#[derive(Clone, Debug, PartialEq)]
pub struct GapCurve {
    pub t_over_tc: Vec<f64>,
    pub delta: Vec<f64>,
    pub tc: f64,
    pub delta0: f64,
}

pub fn gap_curve(spec: &BcsSpec, t_over_tc: &[f64]) -> Result<GapCurve> {
    let tc = critical_temperature(spec)?;
    let delta0 = solve_gap_zero_t(spec)?;
    let delta = t_over_tc
        .par_iter()
        .map(|&r| if r >= 1.0 { Ok(0.0) } else { gap_at(spec, r * tc, tc) })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapCurve { t_over_tc: t_over_tc.to_vec(), delta, tc, delta0 })
}

/// Pseudospin mean-field Hamiltonian -Σ_k (ε_k σ_z + Re Δ σ_x + Im Δ σ_y).
pub fn bcs_spin_hamiltonian(eps: &[f64], delta: C64) -> Result<Operator> {
    let fields: Vec<[f64; 3]> = eps.iter().map(|&e| [-e, -delta.re, -delta.im]).collect();
    site_field_hamiltonian(&fields)
}

/// Hamiltonian DoS: 1/2 + (1/2) Σ ε_k² / Σ (ε_k² + |Δ|²).
pub fn dos_h_bcs(eps: &[f64], delta: C64) -> Result<f64> {
    if eps.is_empty() {
        return Err(Error::InvalidInput("empty mode grid".into()));
    }
    let num: f64 = eps.iter().map(|e| e * e).sum();
    let den = num + eps.len() as f64 * delta.norm_sqr();
    if den == 0.0 {
        return Err(Error::UndefinedDos);
    }
    Ok(0.5 + 0.5 * num / den)
}

/// Literal product 1/2 + (1/2) ∏_k (1 - |Δ|²/(2(ε_k² + |Δ|²))), one mode per entry.
pub fn dos_ground_product_modes(eps: &[f64], delta0: f64) -> f64 {
    let d2 = delta0 * delta0;
    if d2 == 0.0 {
        return 1.0;
    }
    let log: f64 = eps.iter().map(|e| (-0.5 * d2 / (e * e + d2)).ln_1p()).sum();
    0.5 + 0.5 * log.exp()
}

/// Ground-state DoS from the finite-shell sum Σ_k ln(1 - sin²θ_k/2),
/// each grid cell standing for g0·2ħω_D/m modes.
pub fn dos_ground_product(spec: &BcsSpec, delta0: f64) -> Result<f64> {
    spec.validate()?;
    if !(delta0 >= 0.0) {
        return Err(Error::InvalidInput(format!("gap must be >= 0, got {delta0}")));
    }
    if delta0 == 0.0 {
        return Ok(1.0);
    }
    let d2 = delta0 * delta0;
    let w = spec.mode_weight();
    let log: f64 = spec.mode_energies().iter().map(|e| w * (-0.5 * d2 / (e * e + d2)).ln_1p()).sum();
    Ok(0.5 + 0.5 * log.exp())
}

/// 1/2 + (1/2) exp(-(2 - √2)π g0 Δ(0)), the wide-shell limit of the product.
pub fn dos_ground_exponential(g0: f64, delta0: f64) -> f64 {
    0.5 + 0.5 * (-KAPPA_PER_G0 * g0 * delta0).exp()
}

/// ∫_{-∞}^{∞} ln(1 - 1/(2(t² + 1))) dt, evaluated numerically; equals -(2 - √2)π.
pub fn half_line_log_integral() -> Result<f64> {
    let half = integrate_semi_infinite(|t| (-0.5 / (1.0 + t * t)).ln_1p(), TailBound::inverse_square(-0.5), K_TOL)?;
    Ok(2.0 * half)
}

/// K = ∫_0^∞ ln[1 + (1/(1+t²))(-1/2 + 1/(k+1))] dt, k = cosh(2β|Δ|√(1+t²)).
///
/// `beta_delta` = β|Δ(T)|; `f64::INFINITY` gives the zero-temperature value.
pub fn k_integral(beta_delta: f64) -> Result<f64> {
    if !(beta_delta >= 0.0) {
        return Err(Error::InvalidInput(format!("beta*delta must be >= 0, got {beta_delta}")));
    }
    if beta_delta == 0.0 {
        return Ok(0.0);
    }
    let integrand = |t: f64| {
        let s = 1.0 + t * t;
        // -1/2 + 1/(cosh 2x + 1) = -tanh²(x)/2, written without cancellation
        let th = if beta_delta.is_infinite() { 1.0 } else { (beta_delta * s.sqrt()).tanh() };
        (-0.5 * th * th / s).ln_1p()
    };
    integrate_semi_infinite(integrand, TailBound::inverse_square(-0.5), K_TOL)
}

/// Finite-temperature DoS, 1/2 + (1/2) exp(2 g0 |Δ(T)| K(T)); exactly 1 once Δ(T) = 0.
pub fn dos_thermal_bcs(spec: &BcsSpec, t: f64) -> Result<f64> {
    let tc = critical_temperature(spec)?;
    dos_thermal_at(spec, t, tc)
}

fn dos_thermal_at(spec: &BcsSpec, t: f64, tc: f64) -> Result<f64> {
    let delta = gap_at(spec, t, tc)?;
    dos_from_gap(spec.g0, delta, t)
}

fn dos_from_gap(g0: f64, delta: f64, t: f64) -> Result<f64> {
    if delta == 0.0 {
        return Ok(1.0);
    }
    let beta_delta = if t == 0.0 { f64::INFINITY } else { delta / t };
    let k = k_integral(beta_delta)?;
    Ok(0.5 + 0.5 * (2.0 * g0 * delta * k).exp())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub t_over_tc: f64,
    pub delta_over_delta0: f64,
    pub dos: f64,
}

/// Weak-coupling reference used for the temperature curves.
pub const CURVE_G0V: f64 = 0.2;

/// Gap and DoS against T/T_c on `points` evenly spaced values in [0, 1.2].
///
/// The curves depend on the model only through g(0)·k_B·T_c, so a weak-coupling
/// reference (ħω_D = 1, g0V = 0.2) is used and g0 is set to `g0ktc / T_c`.
pub fn temperature_curve(g0ktc: f64, points: usize) -> Result<Vec<CurveRow>> {
    if !(g0ktc > 0.0 && g0ktc.is_finite()) {
        return Err(Error::InvalidInput(format!("g(0) k_B T_c must be positive, got {g0ktc}")));
    }
    if points == 0 {
        return Err(Error::InvalidInput("need at least one temperature point".into()));
    }
    let reference = BcsSpec::new(1.0, 1.0, CURVE_G0V, 2)?;
    let tc = critical_temperature(&reference)?;
    let spec = BcsSpec { g0: g0ktc / tc, ..reference };
    let delta0 = solve_gap_zero_t(&spec)?;
    let ratios: Vec<f64> = if points == 1 {
        vec![0.0]
    } else {
        (0..points).map(|i| 1.2 * i as f64 / (points - 1) as f64).collect()
    };
    ratios
        .par_iter()
        .map(|&r| {
            let (delta, dos) = if r >= 1.0 {
                (0.0, 1.0)
            } else {
                let t = r * tc;
                let delta = gap_at(&spec, t, tc)?;
                (delta, dos_from_gap(spec.g0, delta, t)?)
            };
            Ok(CurveRow { t_over_tc: r, delta_over_delta0: delta / delta0, dos })
        })
        .collect()
}

/// Outcome of the fermion → pseudospin checks on a full Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct JwReport {
    pub modes: usize,
    pub fock_dim: usize,
    /// max deviation of {c_i, c_j†} = δ_ij and {c_i, c_j} = 0
    pub anticommutator_deviation: f64,
    /// max deviation of [σ_+^k, σ_-^k'] = σ_z^k δ and [σ_z^k, σ_±^k'] = ±2σ_±^k δ
    pub commutator_deviation: f64,
    /// max entry of H_fermion - H_pseudospin
    pub hamiltonian_deviation: f64,
}

impl JwReport {
    pub fn max_deviation(&self) -> f64 {
        self.anticommutator_deviation.max(self.commutator_deviation).max(self.hamiltonian_deviation)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

/// Pair operators of each mode: (σ_+ = b a, σ_- = a† b†, σ_z = 1 - n_a - n_b).
pub struct PairOperators {
    pub a: Vec<Operator>,
    pub b: Vec<Operator>,
    pub sigma_plus: Vec<Operator>,
    pub sigma_minus: Vec<Operator>,
    pub sigma_z: Vec<Operator>,
}

/// Fermion operators on 2m orbitals (a_1, b_1, a_2, b_2, ...) with Jordan-Wigner sign strings.
pub fn pair_operators(m: usize) -> Result<PairOperators> {
    if m == 0 || m > 3 {
        return Err(Error::InvalidInput(format!("pair-mode count must be in 1..=3, got {m}")));
    }
    let n = 2 * m;
    let dim = 1usize << n;
    let sz = nalgebra::DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]);
    // bit 1 = occupied; annihilation |0⟩⟨1|
    let lower = nalgebra::DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
    let mut c = Vec::with_capacity(n);
    for j in 0..n {
        let mut op = embed_local(&lower, j, n)?;
        for l in 0..j {
            op = embed_local(&sz, l, n)?.mul(&op)?;
        }
        c.push(op);
    }
    let id = Operator::identity(dim)?;
    let (mut a, mut b, mut sp, mut sm, mut z) = (vec![], vec![], vec![], vec![], vec![]);
    for k in 0..m {
        let ak = c[2 * k].clone();
        let bk = c[2 * k + 1].clone();
        let na = ak.adjoint().mul(&ak)?;
        let nb = bk.adjoint().mul(&bk)?;
        sp.push(bk.mul(&ak)?);
        sm.push(ak.adjoint().mul(&bk.adjoint())?);
        z.push(id.sub(&na)?.sub(&nb)?);
        a.push(ak);
        b.push(bk);
    }
    Ok(PairOperators { a, b, sigma_plus: sp, sigma_minus: sm, sigma_z: z })
}

/// Fermionic pairing Hamiltonian Σ ε_k (n_ak + n_bk) - V Σ_kk' a_k† b_k† b_k' a_k'.
pub fn fermion_pairing_hamiltonian(ops: &PairOperators, eps: &[f64], v: f64) -> Result<Operator> {
    let dim = ops.a[0].dim();
    let mut h = Operator::zeros(dim)?;
    for (k, &e) in eps.iter().enumerate() {
        let n = ops.a[k].adjoint().mul(&ops.a[k])?.add(&ops.b[k].adjoint().mul(&ops.b[k])?)?;
        h = h.add(&n.scale(e))?;
    }
    for k in 0..eps.len() {
        let create = ops.a[k].adjoint().mul(&ops.b[k].adjoint())?;
        for kp in 0..eps.len() {
            let annihilate = ops.b[kp].mul(&ops.a[kp])?;
            h = h.sub(&create.mul(&annihilate)?.scale(v))?;
        }
    }
    Ok(h)
}

/// The same Hamiltonian in pseudospin form, -(Σ ε_k σ_z^k + V Σ σ_-^k σ_+^k') + Σ ε_k.
pub fn pseudospin_pairing_hamiltonian(ops: &PairOperators, eps: &[f64], v: f64) -> Result<Operator> {
    let dim = ops.a[0].dim();
    let mut h = Operator::zeros(dim)?;
    for (k, &e) in eps.iter().enumerate() {
        h = h.sub(&ops.sigma_z[k].scale(e))?;
    }
    for k in 0..eps.len() {
        for kp in 0..eps.len() {
            h = h.sub(&ops.sigma_minus[k].mul(&ops.sigma_plus[kp])?.scale(v))?;
        }
    }
    Ok(h.shift(eps.iter().sum()))
}

/// Checks the fermion → pseudospin mapping on the 4^m-dimensional Fock space.
pub fn jw_verify(eps: &[f64], v: f64) -> Result<JwReport> {
    let m = eps.len();
    let ops = pair_operators(m)?;
    let dim = ops.a[0].dim();
    let id = Operator::identity(dim)?;
    let zero = Operator::zeros(dim)?;

    let orbitals: Vec<&Operator> = ops.a.iter().zip(&ops.b).flat_map(|(a, b)| [a, b]).collect();
    let mut car = 0.0_f64;
    for (i, ci) in orbitals.iter().enumerate() {
        for (j, cj) in orbitals.iter().enumerate() {
            let mixed = ci.anticommutator(&cj.adjoint())?;
            let target = if i == j { &id } else { &zero };
            car = car.max(mixed.max_abs_diff(target));
            car = car.max(ci.anticommutator(cj)?.max_abs_diff(&zero));
        }
    }

    let mut comm = 0.0_f64;
    for k in 0..m {
        for kp in 0..m {
            let same = k == kp;
            let lhs = ops.sigma_plus[k].commutator(&ops.sigma_minus[kp])?;
            comm = comm.max(lhs.max_abs_diff(if same { &ops.sigma_z[k] } else { &zero }));
            let lhs = ops.sigma_z[k].commutator(&ops.sigma_plus[kp])?;
            let rhs = if same { ops.sigma_plus[k].scale(2.0) } else { zero.clone() };
            comm = comm.max(lhs.max_abs_diff(&rhs));
            let lhs = ops.sigma_z[k].commutator(&ops.sigma_minus[kp])?;
            let rhs = if same { ops.sigma_minus[k].scale(-2.0) } else { zero.clone() };
            comm = comm.max(lhs.max_abs_diff(&rhs));
        }
    }

    let hf = fermion_pairing_hamiltonian(&ops, eps, v)?;
    let hs = pseudospin_pairing_hamiltonian(&ops, eps, v)?;
    Ok(JwReport {
        modes: m,
        fock_dim: dim,
        anticommutator_deviation: car,
        commutator_deviation: comm,
        hamiltonian_deviation: hf.max_abs_diff(&hs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{dos_hamiltonian, GroupSpec, Method};
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_temperature_gap_closed_form() {
        let spec = BcsSpec::new(1.0, 1.0, 0.3, 10_000).unwrap();
        let d = solve_gap_zero_t(&spec).unwrap();
        assert_abs_diff_eq!(d, 1.0 / (10.0f64 / 3.0).sinh(), epsilon = 1e-15);
        assert_abs_diff_eq!(d, 0.07144, epsilon = 1e-5);
        let discrete = solve_gap_zero_t_discrete(&spec).unwrap();
        assert!((discrete - d).abs() / d < 1e-2);
    }

    #[test]
    fn weak_coupling_gap_asymptote() {
        let spec = BcsSpec::new(1.0, 1.0, 0.1, 2).unwrap();
        let d = solve_gap_zero_t(&spec).unwrap();
        let asym = 2.0 * (-10.0f64).exp();
        assert!((d / asym - 1.0).abs() < 0.01);
    }

    #[test]
    fn discrete_gap_converges() {
        let spec = BcsSpec::new(1.0, 1.0, 0.3, 100_000).unwrap();
        let c = solve_gap_zero_t(&spec).unwrap();
        let d = solve_gap_zero_t_discrete(&spec).unwrap();
        assert!((d - c).abs() / c <= 1e-3);
    }

    #[test]
    fn finite_temperature_gap_limits() {
        let spec = BcsSpec::new(1.0, 1.0, 0.2, 2).unwrap();
        let d0 = solve_gap_zero_t(&spec).unwrap();
        let tc = critical_temperature(&spec).unwrap();
        assert_eq!(solve_gap_finite_t(&spec, 0.0).unwrap(), d0);
        assert_abs_diff_eq!(solve_gap_finite_t(&spec, 1e-6 * tc).unwrap(), d0, epsilon = 1e-8);
        assert_eq!(solve_gap_finite_t(&spec, tc).unwrap(), 0.0);
        assert_eq!(solve_gap_finite_t(&spec, 1.01 * tc).unwrap(), 0.0);
        assert!(solve_gap_finite_t(&spec, -1.0).is_err());
        let mid = solve_gap_finite_t(&spec, 0.5 * tc).unwrap();
        assert!(mid > 0.0 && mid < d0);
    }

    #[test]
    fn critical_temperature_asymptote_and_monotonicity() {
        let spec = BcsSpec::new(1.0, 1.0, 0.2, 2).unwrap();
        let tc = critical_temperature(&spec).unwrap();
        let asym = 1.134 * (-5.0f64).exp();
        assert!((tc / asym - 1.0).abs() < 0.005, "tc = {tc}, asym = {asym}");
        let stronger = critical_temperature(&BcsSpec::new(1.0, 1.0, 0.25, 2).unwrap()).unwrap();
        assert!(stronger > tc);
    }

    #[test]
    fn bcs_hamiltonian_dos_examples() {
        assert_eq!(dos_h_bcs(&[0.3, -1.0], C64::new(0.0, 0.0)).unwrap(), 1.0);
        let s = dos_h_bcs(&[1.0, 2.0], C64::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(s, 0.5 + 5.0 / 14.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s, 0.85714, epsilon = 1e-5);
        let h = bcs_spin_hamiltonian(&[1.0, 2.0], C64::new(1.0, 0.0)).unwrap();
        let oracle = dos_hamiltonian(&h, GroupSpec::new(2).unwrap(), Method::Pinching).unwrap().value;
        assert_abs_diff_eq!(s, oracle, epsilon = 1e-12);
        assert_eq!(dos_h_bcs(&[0.0, 0.0], C64::new(0.0, 0.0)), Err(Error::UndefinedDos));
        assert!(dos_h_bcs(&[], C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn bcs_dos_is_gauge_invariant() {
        let eps = [-0.7, 0.1, 0.4];
        let g = GroupSpec::new(3).unwrap();
        let d = C64::new(0.6, 0.0);
        let base = dos_hamiltonian(&bcs_spin_hamiltonian(&eps, d).unwrap(), g, Method::Pinching).unwrap().value;
        for phase in [0.3, 1.1, 2.9, -2.0] {
            let rotated = d * C64::from_polar(1.0, phase);
            let v = dos_hamiltonian(&bcs_spin_hamiltonian(&eps, rotated).unwrap(), g, Method::Pinching).unwrap().value;
            assert_abs_diff_eq!(v, base, epsilon = 1e-12);
            assert_abs_diff_eq!(dos_h_bcs(&eps, rotated).unwrap(), base, epsilon = 1e-12);
        }
    }

    #[test]
    fn ground_product_examples() {
        let spec = BcsSpec::new(1.0, 1.0, 0.2, 1000).unwrap();
        assert_eq!(dos_ground_product(&spec, 0.0).unwrap(), 1.0);
        assert!(dos_ground_product(&spec, 1e-9).unwrap() > 1.0 - 1e-8);
        assert_abs_diff_eq!(dos_ground_product_modes(&[0.0], 0.4), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn product_vs_exponential_wide_shell() {
        let delta0 = 0.01;
        let spec = BcsSpec::new(1.0, 100.0 * delta0, 1.0 / 100f64.asinh(), 20_000).unwrap();
        assert_abs_diff_eq!(solve_gap_zero_t(&spec).unwrap(), delta0, epsilon = 1e-12);
        let prod = dos_ground_product(&spec, delta0).unwrap();
        let lhs = (2.0 * prod - 1.0).ln();
        let rhs = -KAPPA_PER_G0 * delta0;
        assert!(((lhs - rhs) / rhs).abs() <= 0.02);
    }

    #[test]
    fn exponential_examples() {
        assert_eq!(dos_ground_exponential(1.0, 0.0), 1.0);
        assert_abs_diff_eq!(dos_ground_exponential(1.0, 0.5), 0.5 + 0.5 * (-0.920150_6f64).exp(), epsilon = 1e-6);
        assert_abs_diff_eq!(dos_ground_exponential(1.0, 0.5), 0.6992, epsilon = 1e-4);
        assert_abs_diff_eq!(KAPPA_PER_G0, 1.8403024, epsilon = 1e-7);
    }

    #[test]
    fn half_line_log_integral_value() {
        let v = half_line_log_integral().unwrap();
        assert_abs_diff_eq!(v, -KAPPA_PER_G0, epsilon = 1e-6);
    }

    #[test]
    fn k_integral_examples() {
        assert_eq!(k_integral(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(k_integral(50.0).unwrap(), -KAPPA_PER_G0 / 2.0, epsilon = 1e-4);
        let k1 = k_integral(1.0).unwrap();
        assert!(k1 > -0.9202 && k1 < 0.0);
        assert!(k_integral(-1.0).is_err());
    }

    #[test]
    fn thermal_dos_limits() {
        let spec = BcsSpec::new(1.0, 1.0, 0.2, 2).unwrap();
        let tc = critical_temperature(&spec).unwrap();
        assert_eq!(dos_thermal_bcs(&spec, tc).unwrap(), 1.0);
        assert_eq!(dos_thermal_bcs(&spec, 2.0 * tc).unwrap(), 1.0);
        let d0 = solve_gap_zero_t(&spec).unwrap();
        assert_abs_diff_eq!(dos_thermal_bcs(&spec, 0.0).unwrap(), dos_ground_exponential(spec.g0, d0), epsilon = 1e-6);
    }

    #[test]
    fn curve_rows_shape() {
        let rows = temperature_curve(0.4, 13).unwrap();
        assert_eq!(rows.len(), 13);
        assert_eq!(rows[0].t_over_tc, 0.0);
        assert_abs_diff_eq!(rows[0].delta_over_delta0, 1.0, epsilon = 1e-15);
        assert_eq!(rows.last().unwrap().dos, 1.0);
        assert!(temperature_curve(0.4, 0).is_err());
        assert!(temperature_curve(-0.4, 5).is_err());
    }

    #[test]
    fn jw_single_mode() {
        let ops = pair_operators(1).unwrap();
        let lhs = ops.sigma_plus[0].commutator(&ops.sigma_minus[0]).unwrap();
        assert!(lhs.max_abs_diff(&ops.sigma_z[0]) <= 1e-12);
        // σ_z = 1 - n_a - n_b: +1 on |00⟩, 0 on singly occupied, -1 on |11⟩
        let diag: Vec<f64> = (0..4).map(|i| ops.sigma_z[0].get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 0.0, 0.0, -1.0]);
        let r = jw_verify(&[0.7], 0.3).unwrap();
        assert!(r.passed(1e-12), "{r:?}");
    }

    #[test]
    fn jw_two_modes_hamiltonian_identity() {
        let r = jw_verify(&[0.31, -0.82], 0.57).unwrap();
        assert_eq!(r.fock_dim, 16);
        assert!(r.passed(1e-12), "{r:?}");
    }

    #[test]
    fn jw_without_pairing_is_diagonal() {
        let ops = pair_operators(2).unwrap();
        let h = fermion_pairing_hamiltonian(&ops, &[0.4, -1.3], 0.0).unwrap();
        for r in 0..16 {
            for c in 0..16 {
                if r != c {
                    assert_eq!(h.get(r, c), C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn jw_rejects_large_m() {
        assert!(jw_verify(&[0.1, 0.2, 0.3, 0.4], 1.0).is_err());
    }
}
