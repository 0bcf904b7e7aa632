//! Non-interacting many-spin model H = Σ_i (ε σ_z^i + λ σ_x^i + μ σ_y^i).
//!
//! Each site is a spin in a field of strength ξ = √(ε² + λ² + μ²) tilted by
//! polar angle θ (cos θ = ε/ξ) and azimuth φ = atan2(μ, λ) away from z. Since
//! the group acts site by site, every DoS here factorizes into a per-site
//! factor raised to the N-th power, which is what the closed forms exploit.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{embed_local, tensor_vec, Operator, State, C64, MAX_SITES};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManySpinSpec {
    pub n: usize,
    pub epsilon: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl ManySpinSpec {
    pub fn new(n: usize, epsilon: f64, lambda: f64, mu: f64) -> Result<Self> {
        let spec = Self { n, epsilon, lambda, mu };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("spin model needs at least one site".into()));
        }
        if ![self.epsilon, self.lambda, self.mu].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("couplings must be finite".into()));
        }
        if self.xi() == 0.0 {
            return Err(Error::InvalidInput("field strength xi vanishes".into()));
        }
        Ok(())
    }

    pub fn xi(&self) -> f64 {
        self.epsilon.hypot(self.lambda).hypot(self.mu)
    }

    pub fn theta(&self) -> f64 {
        (self.epsilon / self.xi()).clamp(-1.0, 1.0).acos()
    }

    pub fn phi(&self) -> f64 {
        self.mu.atan2(self.lambda)
    }

    /// (λ² + μ²) / ξ² = sin²θ
    fn transverse_fraction(&self) -> f64 {
        let xi2 = self.epsilon * self.epsilon + self.lambda * self.lambda + self.mu * self.mu;
        (self.lambda * self.lambda + self.mu * self.mu) / xi2
    }
}

fn local_field(z: f64, x: f64, y: f64) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::new(z, 0.0), C64::new(x, -y), C64::new(x, y), C64::new(-z, 0.0)])
}

/// Σ_i (z_i σ_z^i + x_i σ_x^i + y_i σ_y^i) for per-site fields `[z, x, y]`.
pub fn site_field_hamiltonian(fields: &[[f64; 3]]) -> Result<Operator> {
    let n = fields.len();
    if n == 0 || n > MAX_SITES {
        return Err(if n == 0 {
            Error::InvalidInput("need at least one site".into())
        } else {
            Error::DimensionCap { dim: 1usize << n.min(63), cap: crate::operator::MAX_DIM }
        });
    }
    let mut h = DMatrix::<C64>::zeros(1 << n, 1 << n);
    for (site, &[z, x, y]) in fields.iter().enumerate() {
        h += embed_local(&local_field(z, x, y), site, n)?.into_matrix();
    }
    Operator::hermitian(h)
}

pub fn build_hamiltonian(spec: &ManySpinSpec) -> Result<Operator> {
    spec.validate()?;
    site_field_hamiltonian(&vec![[spec.epsilon, spec.lambda, spec.mu]; spec.n])
}

/// R(θ, φ) = exp(-iφσ_z/2) exp(-iθσ_y/2) as a 2x2 matrix.
pub fn site_rotation(theta: f64, phi: f64) -> DMatrix<C64> {
    let (s, c) = (0.5 * theta).sin_cos();
    let ry = DMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)]);
    let rz = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::from_polar(1.0, -0.5 * phi), C64::from_polar(1.0, 0.5 * phi)]));
    rz * ry
}

/// Σ_i ξ R_i σ_z^i R_i†, the rotated-field form of the same Hamiltonian.
pub fn build_rotated_hamiltonian(spec: &ManySpinSpec) -> Result<Operator> {
    spec.validate()?;
    let r = site_rotation(spec.theta(), spec.phi());
    let sz = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
    let local = (&r * sz * r.adjoint()) * C64::new(spec.xi(), 0.0);
    let mut h = DMatrix::<C64>::zeros(1 << spec.n, 1 << spec.n);
    for site in 0..spec.n {
        h += embed_local(&local, site, spec.n)?.into_matrix();
    }
    Operator::from_matrix(h)
}

/// Single-site ground state R(θ, φ)|↓⟩.
pub fn site_ground_state(theta: f64, phi: f64) -> DVector<C64> {
    let r = site_rotation(theta, phi);
    r.column(1).into_owned()
}

/// Product ground state ∏_i R_i(θ, φ)|↓⟩_i with energy -Nξ.
pub fn ground_state(spec: &ManySpinSpec) -> Result<State> {
    spec.validate()?;
    if spec.n > MAX_SITES {
        return Err(Error::DimensionCap { dim: 1usize << spec.n.min(63), cap: crate::operator::MAX_DIM });
    }
    let site = site_ground_state(spec.theta(), spec.phi());
    let mut psi = site.clone();
    for _ in 1..spec.n {
        psi = tensor_vec(&psi, &site)?;
    }
    State::pure(psi)
}

/// Hamiltonian DoS: 1/2 + ε²/(2ξ²).
pub fn dos_h_closed(spec: &ManySpinSpec) -> Result<f64> {
    spec.validate()?;
    Ok(0.5 + 0.5 * (1.0 - spec.transverse_fraction()))
}

/// 1/2 + (1/2)·f^N evaluated as exp(N ln f) so that N may be astronomically large.
fn half_plus_half_power(per_site: f64, n: usize) -> f64 {
    if per_site == 1.0 {
        return 1.0;
    }
    0.5 + 0.5 * (n as f64 * (per_site - 1.0).ln_1p()).exp()
}

/// Ground-state DoS: 1/2 + (1/2)(1 - (λ² + μ²)/(2ξ²))^N.
pub fn dos_ground_closed(spec: &ManySpinSpec) -> Result<f64> {
    spec.validate()?;
    Ok(half_plus_half_power(1.0 - 0.5 * spec.transverse_fraction(), spec.n))
}

/// Λ = (λ² + μ²) sinh²(βξ) / (ξ² cosh(2βξ)), computed as sin²θ·t²/(1 + t²) with t = tanh(βξ).
pub fn thermal_lambda(spec: &ManySpinSpec, beta: f64) -> f64 {
    let t = (beta * spec.xi()).tanh();
    spec.transverse_fraction() * t * t / (1.0 + t * t)
}

/// Thermal DoS: 1/2 + (1/2)(1 - Λ)^N.
pub fn dos_thermal_closed(spec: &ManySpinSpec, beta: f64) -> Result<f64> {
    spec.validate()?;
    if !(beta >= 0.0) {
        return Err(Error::InvalidInput(format!("inverse temperature must be >= 0, got {beta}")));
    }
    Ok(half_plus_half_power(1.0 - thermal_lambda(spec, beta), spec.n))
}

/// One cell of the limit table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitRow {
    pub n: usize,
    pub perturbation: f64,
    pub dos_hamiltonian: f64,
    pub dos_state: f64,
}

/// Which state the limit table is evaluated for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitState {
    /// β → ∞
    Ground,
    Thermal { beta: f64 },
}

/// S(N, λ) over a grid, μ = 0, with closed forms so N may exceed the matrix cap.
///
/// Reading the table along λ at fixed N shows S → 1 as λ → 0; along N at
/// fixed λ > 0 the state DoS falls to 1/2.
pub fn limit_diagnostics(epsilon: f64, perturbations: &[f64], ns: &[usize], state: LimitState) -> Result<Vec<LimitRow>> {
    if perturbations.is_empty() || ns.is_empty() {
        return Err(Error::InvalidInput("limit grids must be non-empty".into()));
    }
    let mut rows = Vec::with_capacity(perturbations.len() * ns.len());
    for &n in ns {
        for &lambda in perturbations {
            let spec = ManySpinSpec::new(n, epsilon, lambda, 0.0)?;
            let dos_state = match state {
                LimitState::Ground => dos_ground_closed(&spec)?,
                LimitState::Thermal { beta } => dos_thermal_closed(&spec, beta)?,
            };
            rows.push(LimitRow { n, perturbation: lambda, dos_hamiltonian: dos_h_closed(&spec)?, dos_state });
        }
    }
    Ok(rows)
}
