//! Condensate as a collective spin.
//!
//! H_B = Σ_i (ε σ_z^i + λ σ_x^i) = 2ε J_z + λ(J_+ + J_-). On the fully
//! symmetric Dicke ladder, a = J_-/√N behaves as a boson annihilator near the
//! bottom of the ladder, so H_B ≈ 2ε a†a + λ√N(a + a†): a displaced
//! oscillator whose ground state is a coherent state. The order parameter is
//! ⟨a⟩ and all DoS closed forms are the μ = 0 case of the spin model.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::operator::{embed_local, Operator, C64, MAX_DIM, MAX_SITES};
use crate::spin::ManySpinSpec;

const MIN_FOCK_CUTOFF: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BecSpec {
    pub n: usize,
    pub epsilon: f64,
    pub lambda: f64,
    pub fock_cutoff: usize,
}

impl BecSpec {
    pub fn new(n: usize, epsilon: f64, lambda: f64, fock_cutoff: usize) -> Result<Self> {
        let spec = Self { n, epsilon, lambda, fock_cutoff };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("need at least one particle".into()));
        }
        if !self.epsilon.is_finite() || !self.lambda.is_finite() {
            return Err(Error::InvalidInput("couplings must be finite".into()));
        }
        if self.xi() == 0.0 {
            return Err(Error::InvalidInput("xi_B vanishes".into()));
        }
        if self.fock_cutoff < MIN_FOCK_CUTOFF {
            return Err(Error::InvalidInput(format!("Fock cutoff must be >= {MIN_FOCK_CUTOFF}, got {}", self.fock_cutoff)));
        }
        Ok(())
    }

    /// ξ_B = √(ε² + λ²)
    pub fn xi(&self) -> f64 {
        self.epsilon.hypot(self.lambda)
    }

    pub fn sin_theta(&self) -> f64 {
        self.lambda / self.xi()
    }

    /// Tilt angle with sin θ = λ/ξ_B, cos θ = ε/ξ_B.
    pub fn theta(&self) -> f64 {
        self.lambda.atan2(self.epsilon)
    }

    /// η = 1/N
    pub fn eta(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn spin_spec(&self) -> ManySpinSpec {
        ManySpinSpec { n: self.n, epsilon: self.epsilon, lambda: self.lambda, mu: 0.0 }
    }

    fn sin2_theta(&self) -> f64 {
        let l2 = self.lambda * self.lambda;
        l2 / (self.epsilon * self.epsilon + l2)
    }
}

/// Collective operators on the (N+1)-dimensional j = N/2 ladder.
///
/// Basis index k = 0..=N carries m = -N/2 + k. Only the diagonal of J_z and
/// the superdiagonal of J_+ are stored; J_- is the transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeLadder {
    pub n: usize,
    /// m_k
    pub jz: Vec<f64>,
    /// ⟨k+1|J_+|k⟩ = √(j(j+1) - m_k(m_k+1))
    pub jplus: Vec<f64>,
    /// j(j+1) - m_k(m_k+1), exact in binary for any practical N
    pub jplus_sq: Vec<f64>,
}

pub fn collective_operators(n: usize) -> Result<DickeLadder> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one spin".into()));
    }
    let j = 0.5 * n as f64;
    let jz: Vec<f64> = (0..=n).map(|k| -j + k as f64).collect();
    let jplus_sq: Vec<f64> = jz[..n].iter().map(|&m| j * (j + 1.0) - m * (m + 1.0)).collect();
    let jplus = jplus_sq.iter().map(|x| x.sqrt()).collect();
    Ok(DickeLadder { n, jz, jplus, jplus_sq })
}

impl DickeLadder {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn j(&self) -> f64 {
        0.5 * self.n as f64
    }

    /// Diagonal of J_+J_-: entry k is |⟨k|J_+|k-1⟩|².
    pub fn jplus_jminus(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| if k == 0 { 0.0 } else { self.jplus_sq[k - 1] }).collect()
    }

    /// Diagonal of J_-J_+.
    pub fn jminus_jplus(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| if k == self.n { 0.0 } else { self.jplus_sq[k] }).collect()
    }

    fn dense(&self, f: impl Fn(usize, usize) -> f64) -> Result<Operator> {
        if self.dim() > MAX_DIM {
            return Err(Error::DimensionCap { dim: self.dim(), cap: MAX_DIM });
        }
        Operator::from_real(DMatrix::from_fn(self.dim(), self.dim(), f))
    }

    pub fn jz_op(&self) -> Result<Operator> {
        self.dense(|r, c| if r == c { self.jz[r] } else { 0.0 })
    }

    pub fn jplus_op(&self) -> Result<Operator> {
        self.dense(|r, c| if r == c + 1 { self.jplus[c] } else { 0.0 })
    }

    pub fn jminus_op(&self) -> Result<Operator> {
        self.dense(|r, c| if c == r + 1 { self.jplus[r] } else { 0.0 })
    }

    /// a = J_-/√N
    pub fn a_op(&self) -> Result<Operator> {
        Ok(self.jminus_op()?.scale(1.0 / (self.n as f64).sqrt()))
    }

    /// a† = J_+/√N
    pub fn adag_op(&self) -> Result<Operator> {
        Ok(self.jplus_op()?.scale(1.0 / (self.n as f64).sqrt()))
    }

    /// 2εJ_z + λ(J_+ + J_-) as a real symmetric tridiagonal matrix.
    pub fn hamiltonian(&self, epsilon: f64, lambda: f64) -> DMatrix<f64> {
        let d = self.dim();
        let mut h = DMatrix::zeros(d, d);
        for k in 0..d {
            h[(k, k)] = 2.0 * epsilon * self.jz[k];
        }
        for k in 0..self.n {
            h[(k + 1, k)] = lambda * self.jplus[k];
            h[(k, k + 1)] = lambda * self.jplus[k];
        }
        h
    }
}

/// Report of the a = J_-/√N commutator identity on the ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct HpReport {
    pub n: usize,
    /// number of ladder states with J_z ≤ 1/2
    pub low_half: usize,
    /// max |[a,a†] - (-η(1 - √((1+η)² - 4η a†a)/η))| on the low half
    pub identity_deviation: f64,
    /// number of lowest states used for the near-boson bound
    pub low_states: usize,
    /// max |[a,a†] - 1| on those states
    pub max_commutator_defect: f64,
    /// max of |[a,a†] - 1| - 2⟨a†a⟩/N on those states
    pub max_bound_excess: f64,
    /// allowed O(1/N) slack, 2L²/N² with L = `low_states`
    pub bound_slack: f64,
}

impl HpReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.identity_deviation <= tol && self.max_bound_excess <= self.bound_slack
    }
}

/// Commutator [a, a†] with a = J_-/√N, evaluated on the ladder, against the
/// closed expression in a†a that holds on the lower half of the ladder.
pub fn hp_map_verify(n: usize) -> Result<HpReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    let ladder = collective_operators(n)?;
    let nf = n as f64;
    let eta = 1.0 / nf;
    let pm = ladder.jplus_jminus();
    let mp = ladder.jminus_jplus();
    // [a, a†] = (J_-J_+ - J_+J_-)/N, a†a = J_+J_-/N; both diagonal
    let comm: Vec<f64> = mp.iter().zip(&pm).map(|(x, y)| (x - y) / nf).collect();
    let number: Vec<f64> = pm.iter().map(|x| x / nf).collect();

    let low_half = (0..ladder.dim()).take_while(|&k| ladder.jz[k] <= 0.5).count();
    let identity_deviation = (0..low_half)
        .map(|k| {
            let rhs = -eta * (1.0 - ((1.0 + eta).powi(2) - 4.0 * eta * number[k]).max(0.0).sqrt() / eta);
            (comm[k] - rhs).abs()
        })
        .fold(0.0, f64::max);

    let low_states = low_half.min(10);
    let mut max_commutator_defect = 0.0_f64;
    let mut max_bound_excess = f64::NEG_INFINITY;
    for k in 0..low_states {
        let defect = (comm[k] - 1.0).abs();
        max_commutator_defect = max_commutator_defect.max(defect);
        max_bound_excess = max_bound_excess.max(defect - 2.0 * number[k] / nf);
    }
    let l = low_states as f64;
    Ok(HpReport {
        n,
        low_half,
        identity_deviation,
        low_states,
        max_commutator_defect,
        max_bound_excess,
        bound_slack: 2.0 * l * l / (nf * nf),
    })
}

/// Lowest two eigenpairs of a real symmetric matrix.
fn low_spectrum(h: DMatrix<f64>) -> Result<(f64, f64, DVector<f64>)> {
    let d = h.nrows();
    let eig = SymmetricEigen::try_new(h, 1e-15, 10_000).ok_or_else(|| Error::Convergence("symmetric eigendecomposition".into()))?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let e1 = if d > 1 { eig.eigenvalues[order[1]] } else { f64::NAN };
    Ok((e0, e1, eig.eigenvectors.column(order[0]).into_owned()))
}

fn fock_annihilation(cutoff: usize) -> DMatrix<f64> {
    DMatrix::from_fn(cutoff, cutoff, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 })
}

fn check_cutoff(alpha: f64, cutoff: usize) -> Result<()> {
    let need = alpha * alpha + 10.0 * alpha.abs() + 20.0;
    if (cutoff as f64) < need {
        return Err(Error::CutoffTooSmall { cutoff, reason: format!("amplitude {alpha} needs at least {}", need.ceil()) });
    }
    if cutoff > MAX_DIM {
        return Err(Error::DimensionCap { dim: cutoff, cap: MAX_DIM });
    }
    Ok(())
}

fn top_weight(v: &DVector<f64>) -> f64 {
    let d = v.len();
    let start = d - (d / 10).max(1);
    v.iter().skip(start).map(|x| x * x).sum()
}

/// Spin ladder versus its bosonic approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct BosonLimitReport {
    pub spin_gap: f64,
    pub boson_gap: f64,
    /// spin_gap / boson_gap - 1
    pub gap_deviation: f64,
    /// ξ_B/ε - 1
    pub gap_deviation_predicted: f64,
    pub spin_order: f64,
    pub boson_order: f64,
    /// spin_order / boson_order
    pub order_ratio: f64,
    /// ε/ξ_B
    pub order_ratio_predicted: f64,
    pub lambda_over_epsilon: f64,
}

/// Compares H_B on the Dicke ladder with 2ε a†a + λ√N(a + a†) on a truncated
/// Fock space: lowest excitation gap and ground-state ⟨a⟩.
pub fn boson_limit_verify(spec: &BecSpec) -> Result<BosonLimitReport> {
    spec.validate()?;
    if !(spec.epsilon > 0.0) {
        return Err(Error::InvalidInput("boson limit needs epsilon > 0".into()));
    }
    let ratio = spec.lambda / spec.epsilon;
    if ratio.abs() > 0.2 {
        return Err(Error::InvalidInput(format!("boson limit needs |lambda/epsilon| <= 0.2, got {ratio}")));
    }
    if spec.n + 1 > MAX_DIM {
        return Err(Error::DimensionCap { dim: spec.n + 1, cap: MAX_DIM });
    }
    let sqrt_n = (spec.n as f64).sqrt();

    let ladder = collective_operators(spec.n)?;
    let (e0, e1, g) = low_spectrum(ladder.hamiltonian(spec.epsilon, spec.lambda))?;
    // ⟨J_-⟩ with ⟨k|J_-|k+1⟩ = jplus[k]
    let jminus: f64 = (0..spec.n).map(|k| g[k] * ladder.jplus[k] * g[k + 1]).sum();
    let spin_order = jminus / sqrt_n;

    let alpha = spec.lambda * sqrt_n / (2.0 * spec.epsilon);
    check_cutoff(alpha, spec.fock_cutoff)?;
    let a = fock_annihilation(spec.fock_cutoff);
    let number = a.transpose() * &a;
    let h = number * (2.0 * spec.epsilon) + (&a + a.transpose()) * (spec.lambda * sqrt_n);
    let (b0, b1, gb) = low_spectrum(h)?;
    if top_weight(&gb) > 1e-10 {
        return Err(Error::CutoffTooSmall { cutoff: spec.fock_cutoff, reason: "ground state reaches the top of the Fock space".into() });
    }
    let boson_order = gb.dot(&(&a * &gb));

    let spin_gap = e1 - e0;
    let boson_gap = b1 - b0;
    Ok(BosonLimitReport {
        spin_gap,
        boson_gap,
        gap_deviation: spin_gap / boson_gap - 1.0,
        gap_deviation_predicted: spec.xi() / spec.epsilon - 1.0,
        spin_order,
        boson_order,
        order_ratio: if boson_order == 0.0 { 1.0 } else { spin_order / boson_order },
        order_ratio_predicted: spec.epsilon / spec.xi(),
        lambda_over_epsilon: ratio,
    })
}

/// Displaced oscillator a†a + α(a + a†) on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacedReport {
    pub alpha: f64,
    pub cutoff: usize,
    /// ‖[R(π/2), H]‖ with R(θ) = exp(iθ a†a)
    pub commutator_norm: f64,
    pub ground_energy: f64,
    pub order_parameter: f64,
    /// |⟨-α|G⟩|² for the coherent state of amplitude -α
    pub coherent_overlap: f64,
    pub top_weight: f64,
}

impl DisplacedReport {
    pub fn passed(&self, tol: f64) -> bool {
        let commutator_ok = if self.alpha == 0.0 {
            self.commutator_norm <= 1e-12
        } else {
            self.commutator_norm >= 1e-3 * self.alpha.abs()
        };
        commutator_ok && (self.order_parameter + self.alpha).abs() <= tol && self.coherent_overlap >= 1.0 - tol
    }
}

/// Truncated coherent state e^{-|β|²/2} Σ β^n/√(n!) |n⟩; errors if the tail weight exceeds 1e-10.
pub fn coherent_state(amplitude: f64, cutoff: usize) -> Result<DVector<f64>> {
    let mut c = DVector::zeros(cutoff);
    c[0] = (-0.5 * amplitude * amplitude).exp();
    for k in 1..cutoff {
        c[k] = c[k - 1] * amplitude / (k as f64).sqrt();
    }
    let missing = 1.0 - c.norm_squared();
    if missing > 1e-10 {
        return Err(Error::CutoffTooSmall { cutoff, reason: format!("coherent state of amplitude {amplitude} loses weight {missing:e}") });
    }
    Ok(c)
}

pub fn displaced_oscillator_verify(alpha: f64, cutoff: usize) -> Result<DisplacedReport> {
    if !alpha.is_finite() {
        return Err(Error::InvalidInput("alpha must be finite".into()));
    }
    check_cutoff(alpha, cutoff)?;
    let a = fock_annihilation(cutoff);
    let number = a.transpose() * &a;
    let h = &number + (&a + a.transpose()) * alpha;

    let theta = std::f64::consts::FRAC_PI_2;
    let r = DMatrix::from_fn(cutoff, cutoff, |i, j| if i == j { C64::from_polar(1.0, theta * i as f64) } else { C64::new(0.0, 0.0) });
    let hc = h.map(|x| C64::new(x, 0.0));
    let comm = &r * &hc - &hc * &r;
    let commutator_norm = comm.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let (e0, _, g) = low_spectrum(h)?;
    let tw = top_weight(&g);
    if tw > 1e-10 {
        return Err(Error::CutoffTooSmall { cutoff, reason: format!("ground-state weight {tw:e} in the top decile") });
    }
    let order_parameter = g.dot(&(&a * &g));
    let coh = coherent_state(-alpha, cutoff)?;
    let overlap = coh.dot(&g);
    Ok(DisplacedReport {
        alpha,
        cutoff,
        commutator_norm,
        ground_energy: e0,
        order_parameter,
        coherent_overlap: overlap * overlap,
        top_weight: tw,
    })
}

/// Hamiltonian DoS: 1 - λ²/(2(ε² + λ²)).
pub fn dos_h_bec(spec: &BecSpec) -> Result<f64> {
    spec.validate()?;
    Ok(1.0 - 0.5 * spec.sin2_theta())
}

/// ⟨a⟩₀ = -(√N/2) sin θ
pub fn order_parameter_zero_t(spec: &BecSpec) -> Result<f64> {
    spec.validate()?;
    Ok(-0.5 * (spec.n as f64).sqrt() * spec.sin_theta())
}

fn half_plus_half_power(per_site: f64, n: f64) -> f64 {
    if per_site == 1.0 {
        return 1.0;
    }
    0.5 + 0.5 * (n * (per_site - 1.0).ln_1p()).exp()
}

/// Ground-state DoS 1/2 + (1/2)(1 - λ²/(2ξ_B²))^N.
pub fn dos_ground_bec(spec: &BecSpec) -> Result<f64> {
    spec.validate()?;
    Ok(half_plus_half_power(1.0 - 0.5 * spec.sin2_theta(), spec.n as f64))
}

/// Ground-state DoS through the order parameter, 1/2 + (1/2)(1 - 2⟨a⟩₀²/N)^N.
pub fn dos_ground_bec_from_order(a0: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one particle".into()));
    }
    let x = 2.0 * a0 * a0 / n as f64;
    if !(x <= 1.0) {
        return Err(Error::InvalidInput(format!("|<a>| = {} exceeds sqrt(N/2)", a0.abs())));
    }
    Ok(half_plus_half_power(1.0 - x, n as f64))
}

/// N → ∞ at fixed ⟨a⟩₀: 1/2 + (1/2) e^{-2⟨a⟩₀²}.
pub fn dos_ground_bec_large_n(a0: f64) -> f64 {
    0.5 + 0.5 * (-2.0 * a0 * a0).exp()
}

/// ⟨a⟩_T = -λ√N tanh(βξ_B)/(2ξ_B)
pub fn order_parameter_finite_t(spec: &BecSpec, beta: f64) -> Result<f64> {
    spec.validate()?;
    check_beta(beta)?;
    let xi = spec.xi();
    Ok(-spec.lambda * (spec.n as f64).sqrt() * (beta * xi).tanh() / (2.0 * xi))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) {
        return Err(Error::InvalidInput(format!("inverse temperature must be >= 0, got {beta}")));
    }
    Ok(())
}

/// Thermal DoS in field form:
/// 1/2 + (1/2)(1 - λ²/(2ξ_B²)·(cosh 2βξ_B - 1)/cosh 2βξ_B)^N.
pub fn dos_thermal_bec(spec: &BecSpec, beta: f64) -> Result<f64> {
    spec.validate()?;
    check_beta(beta)?;
    let x = beta * spec.xi();
    // (cosh 2x - 1)/cosh 2x = 2 sinh²x / cosh 2x
    let ratio = if x > 20.0 { 1.0 } else { 2.0 * x.sinh().powi(2) / (2.0 * x).cosh() };
    let lam = 0.5 * spec.sin2_theta() * ratio;
    Ok(half_plus_half_power(1.0 - lam, spec.n as f64))
}

/// Thermal DoS through ⟨a⟩_T:
/// 1/2 + (1/2)(1 - (2⟨a⟩_T²/N)(1 + cosh 2βξ_B)/cosh 2βξ_B)^N.
pub fn dos_thermal_bec_from_order(spec: &BecSpec, beta: f64) -> Result<f64> {
    let a_t = order_parameter_finite_t(spec, beta)?;
    let c = (2.0 * beta * spec.xi()).cosh();
    let nf = spec.n as f64;
    let lam = 2.0 * a_t * a_t / nf * (1.0 + 1.0 / c);
    Ok(half_plus_half_power(1.0 - lam, nf))
}

/// Coherent-state reading of the tilted product ground state.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentReport {
    pub theta: f64,
    /// α = -√N θ/2
    pub alpha: f64,
    pub order_parameter: f64,
    pub abs_deviation: f64,
    /// |sin θ - θ|/θ
    pub relative_deviation: f64,
    /// θ²/6
    pub bound: f64,
    pub agrees: bool,
}

pub fn coherent_ground_check(spec: &BecSpec) -> Result<CoherentReport> {
    spec.validate()?;
    let theta = spec.theta();
    if theta.abs() > 0.5 {
        return Err(Error::InvalidInput(format!("coherent-state reading needs |theta| <= 0.5, got {theta}")));
    }
    let alpha = -0.5 * (spec.n as f64).sqrt() * theta;
    let order_parameter = order_parameter_zero_t(spec)?;
    let relative_deviation = if theta == 0.0 { 0.0 } else { ((theta.sin() - theta) / theta).abs() };
    let bound = theta * theta / 6.0;
    Ok(CoherentReport {
        theta,
        alpha,
        order_parameter,
        abs_deviation: (order_parameter - alpha).abs(),
        relative_deviation,
        bound,
        agrees: relative_deviation <= bound,
    })
}

/// Σ_i σ_-^i on the full 2^N register, σ_- = |↓⟩⟨↑|.
pub fn collective_lowering(n: usize) -> Result<Operator> {
    let lower = DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    if n == 0 || n > MAX_SITES {
        return Err(Error::InvalidInput(format!("need 1..={MAX_SITES} sites, got {n}")));
    }
    let mut total = Operator::zeros(1 << n)?;
    for site in 0..n {
        total = total.add(&embed_local(&lower, site, n)?)?;
    }
    Ok(total)
}
