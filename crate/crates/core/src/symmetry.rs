//! Degree of symmetry (DoS) under the product group SO(2)^⊗N.
//!
//! A group element is a vector of angles ω, represented on the spin register
//! by R(ω) = ∏_i exp(-i ω_i σ_z^i / 2). For a Hermitian operator A the DoS is
//!
//! ```text
//! S = |{R, A}|² averaged over the group / (4 |A|²)
//!   = 1/2 + avg Re Tr(R† A R A) / (2 |A|²)
//! ```
//!
//! with A = H̃ (the traceless part) for Hamiltonians and A = ρ for states.
//! The group average is evaluated in three independent ways:
//!
//! * [`group_average_pinching`]: exact, the average deletes every element
//!   off the z-basis diagonal so only Σ_z A_zz² survives;
//! * [`group_average_quadrature`]: tensor-product Gauss-Legendre over [-π, π]^N;
//! * [`group_average_monte_carlo`]: i.i.d. uniform angles from a seeded stream.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::operator::{frobenius_norm, rebias, site_bit, Operator, State, C64, MAX_SITES};

/// Default Gauss-Legendre nodes per angle.
pub const DEFAULT_NODES: usize = 32;
/// Upper bound on the tensor-product grid size.
pub const GRID_BUDGET: u128 = 10_000_000;

/// Element of SO(2)^⊗N given by one angle per site, each in [-π, π).
#[derive(Clone, Debug, PartialEq)]
pub struct SO2ProductElement {
    omegas: Vec<f64>,
}

impl SO2ProductElement {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::InvalidInput("group element needs at least one angle".into()));
        }
        if let Some(w) = omegas.iter().find(|w| !(-PI..PI).contains(*w)) {
            return Err(Error::InvalidInput(format!("angle {w} outside [-pi, pi)")));
        }
        Ok(Self { omegas })
    }

    pub fn identity(n_sites: usize) -> Self {
        Self { omegas: vec![0.0; n_sites] }
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn n_sites(&self) -> usize {
        self.omegas.len()
    }

    /// Diagonal phases φ_b of R = diag(exp(i φ_b)).
    pub fn phases(&self) -> Vec<f64> {
        diagonal_phases(&self.omegas)
    }
}

// φ_b = -Σ_i ω_i s_i / 2 with s_i = +1 for bit 0 (spin up), -1 for bit 1.
fn diagonal_phases(omegas: &[f64]) -> Vec<f64> {
    let n = omegas.len();
    (0..1usize << n)
        .map(|b| {
            -0.5 * omegas
                .iter()
                .enumerate()
                .map(|(i, &w)| if site_bit(b, i, n) == 0 { w } else { -w })
                .sum::<f64>()
        })
        .collect()
}

/// The product group on `n_sites` spins, generated by σ_z/2 on each site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    n_sites: usize,
}

impl GroupSpec {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidInput("group needs at least one site".into()));
        }
        Ok(Self { n_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_sites
    }

    fn check_operator(&self, a: &Operator) -> Result<()> {
        if self.n_sites > MAX_SITES {
            return Err(Error::DimensionCap { dim: 1usize << self.n_sites.min(63), cap: crate::operator::MAX_DIM });
        }
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim() });
        }
        Ok(())
    }
}

/// How the group average is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Pinching,
    Quadrature { nodes_per_angle: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodTag {
    Quadrature,
    MonteCarlo,
    Pinching,
    ClosedForm,
}

impl MethodTag {
    pub fn name(&self) -> &'static str {
        match self {
            MethodTag::Quadrature => "quadrature",
            MethodTag::MonteCarlo => "monte_carlo",
            MethodTag::Pinching => "pinching",
            MethodTag::ClosedForm => "closed_form",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Detail {
    None,
    Nodes(usize),
    Samples { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DosResult {
    pub value: f64,
    pub method: MethodTag,
    pub error_estimate: f64,
    pub detail: Detail,
}

impl DosResult {
    pub fn closed_form(value: f64) -> Self {
        Self { value, method: MethodTag::ClosedForm, error_estimate: 0.0, detail: Detail::None }
    }
}

/// R(g) as a diagonal unitary operator.
pub fn representation(g: &SO2ProductElement) -> Result<Operator> {
    if g.n_sites() > MAX_SITES {
        return Err(Error::DimensionCap { dim: 1usize << g.n_sites().min(63), cap: crate::operator::MAX_DIM });
    }
    let diag: Vec<C64> = g.phases().into_iter().map(|p| C64::from_polar(1.0, p)).collect();
    Operator::diagonal(&diag)
}

/// Re Tr(R† A R A) for the diagonal representation R with phases `phases`.
///
/// With R = diag(e^{iφ}), Tr(R†ARA) = Σ_jk |A_jk|² e^{i(φ_k - φ_j)}; the real
/// part is cᵀWc + sᵀWs with W_jk = |A_jk|², c = cos φ, s = sin φ.
pub struct TwirlOverlap {
    weights: DMatrix<f64>,
    n_sites: usize,
}

impl TwirlOverlap {
    pub fn new(a: &Operator, group: GroupSpec) -> Result<Self> {
        group.check_operator(a)?;
        Ok(Self { weights: a.matrix().map(|z| z.norm_sqr()), n_sites: group.n_sites() })
    }

    pub fn eval_angles(&self, omegas: &[f64]) -> f64 {
        debug_assert_eq!(omegas.len(), self.n_sites);
        let phases = diagonal_phases(omegas);
        let (s, c): (Vec<f64>, Vec<f64>) = phases.iter().map(|p| p.sin_cos()).unzip();
        let d = phases.len();
        let mut total = 0.0;
        for j in 0..d {
            let mut row = 0.0;
            for k in 0..d {
                let w = self.weights[(j, k)];
                row += w * (c[j] * c[k] + s[j] * s[k]);
            }
            total += row;
        }
        total
    }

    pub fn eval(&self, g: &SO2ProductElement) -> f64 {
        self.eval_angles(g.omegas())
    }
}

/// Group average of `f` by an n-point Gauss-Legendre rule per angle on [-π, π].
///
/// Outer-angle slices are evaluated in parallel and reduced in index order,
/// so the result does not depend on scheduling.
pub fn group_average_quadrature<F>(f: F, group: GroupSpec, nodes_per_angle: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = group.n_sites();
    let points = (nodes_per_angle as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if points > GRID_BUDGET {
        return Err(Error::GridBudget { points, budget: GRID_BUDGET });
    }
    let rule = gauss_legendre(nodes_per_angle, -PI, PI)?;
    let m = nodes_per_angle;
    let inner: usize = m.pow((n - 1) as u32);
    let norm = (2.0 * PI).powi(n as i32);
    let slices: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut omegas = vec![0.0; n];
            omegas[0] = rule.nodes[first];
            let mut acc = 0.0;
            for idx in 0..inner {
                let mut rest = idx;
                let mut w = rule.weights[first];
                for site in (1..n).rev() {
                    let k = rest % m;
                    rest /= m;
                    omegas[site] = rule.nodes[k];
                    w *= rule.weights[k];
                }
                acc += w * f(&omegas);
            }
            acc
        })
        .collect();
    Ok(slices.iter().sum::<f64>() / norm)
}

/// Monte Carlo group average over i.i.d. uniform angles; returns (mean, standard error).
pub fn group_average_monte_carlo<F>(f: F, group: GroupSpec, samples: usize, seed: u64) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64,
{
    if samples < 100 {
        return Err(Error::InvalidInput(format!("Monte Carlo needs at least 100 samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omegas = vec![0.0; group.n_sites()];
    let values: Vec<f64> = (0..samples)
        .map(|_| {
            for w in omegas.iter_mut() {
                *w = rng.random_range(-PI..PI);
            }
            f(&omegas)
        })
        .collect();
    let mean = values.iter().sum::<f64>() / samples as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (samples as f64 - 1.0);
    Ok((mean, (var / samples as f64).sqrt()))
}

/// Exact group average of Re Tr(R† A R A): Σ_z A_zz².
pub fn group_average_pinching(a: &Operator, group: GroupSpec) -> Result<f64> {
    group.check_operator(a)?;
    a.require_hermitian()?;
    Ok((0..a.dim()).map(|i| a.get(i, i).re.powi(2)).sum())
}

/// Averages Re Tr(R†ARA) with the requested method and turns it into a DoS.
fn dos_of(a: &Operator, group: GroupSpec, method: Method) -> Result<DosResult> {
    let norm2 = frobenius_norm(a).powi(2);
    if norm2 == 0.0 {
        return Err(Error::UndefinedDos);
    }
    let to_dos = |avg: f64| 0.5 + avg / (2.0 * norm2);
    match method {
        Method::Pinching => {
            let avg = group_average_pinching(a, group)?;
            Ok(DosResult {
                value: to_dos(avg),
                method: MethodTag::Pinching,
                error_estimate: f64::EPSILON * a.dim() as f64,
                detail: Detail::None,
            })
        }
        Method::Quadrature { nodes_per_angle } => {
            a.require_hermitian()?;
            let twirl = TwirlOverlap::new(a, group)?;
            let fine = group_average_quadrature(|w| twirl.eval_angles(w), group, nodes_per_angle)?;
            let coarse_nodes = (nodes_per_angle / 2).max(1);
            let coarse = group_average_quadrature(|w| twirl.eval_angles(w), group, coarse_nodes)?;
            Ok(DosResult {
                value: to_dos(fine),
                method: MethodTag::Quadrature,
                error_estimate: (fine - coarse).abs() / (2.0 * norm2),
                detail: Detail::Nodes(nodes_per_angle),
            })
        }
        Method::MonteCarlo { samples, seed } => {
            a.require_hermitian()?;
            let twirl = TwirlOverlap::new(a, group)?;
            let (mean, stderr) = group_average_monte_carlo(|w| twirl.eval_angles(w), group, samples, seed)?;
            Ok(DosResult {
                value: to_dos(mean),
                method: MethodTag::MonteCarlo,
                error_estimate: stderr / (2.0 * norm2),
                detail: Detail::Samples { count: samples, seed },
            })
        }
    }
}

/// DoS of a Hamiltonian; the trace part is removed before averaging.
pub fn dos_hamiltonian(h: &Operator, group: GroupSpec, method: Method) -> Result<DosResult> {
    group.check_operator(h)?;
    let h_tilde = rebias(h)?;
    dos_of(&h_tilde, group, method)
}

/// DoS of a state, always evaluated on the density matrix.
pub fn dos_state(rho: &State, group: GroupSpec, method: Method) -> Result<DosResult> {
    match rho {
        State::Pure(psi) if method == Method::Pinching => {
            // Σ|ψ_z|⁴ without forming the projector; purity is 1.
            if psi.len() != group.dim() {
                return Err(Error::DimensionMismatch { expected: group.dim(), found: psi.len() });
            }
            let avg: f64 = psi.iter().map(|z| z.norm_sqr().powi(2)).sum();
            Ok(DosResult {
                value: 0.5 + 0.5 * avg,
                method: MethodTag::Pinching,
                error_estimate: f64::EPSILON * psi.len() as f64,
                detail: Detail::None,
            })
        }
        _ => {
            let density = rho.density();
            group.check_operator(&density)?;
            density.require_hermitian().map_err(|e| Error::InvalidState(e.to_string()))?;
            dos_of(&density, group, method)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{pauli, Axis};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn representation_identity() {
        let r = representation(&SO2ProductElement::identity(3)).unwrap();
        assert!(r.max_abs_diff(&Operator::identity(8).unwrap()) == 0.0);
    }

    #[test]
    fn representation_single_qubit_pi() {
        let g = SO2ProductElement::new(vec![-PI]).unwrap();
        let r = representation(&g).unwrap();
        // ω = -π gives diag(i, -i); ω → π from below gives diag(-i, i)
        assert!((r.get(0, 0) - C64::new(0.0, 1.0)).norm() < 1e-15);
        let g = SO2ProductElement { omegas: vec![PI] };
        let r = representation(&g).unwrap();
        assert!((r.get(0, 0) - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((r.get(1, 1) - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn representation_is_unitary() {
        let g = SO2ProductElement::new(vec![0.3, -2.1, 1.7]).unwrap();
        let r = representation(&g).unwrap();
        let rr = r.adjoint().mul(&r).unwrap();
        assert!(rr.max_abs_diff(&Operator::identity(8).unwrap()) <= 1e-13);
    }

    #[test]
    fn angles_out_of_range_rejected() {
        assert!(SO2ProductElement::new(vec![PI]).is_err());
        assert!(SO2ProductElement::new(vec![]).is_err());
    }

    #[test]
    fn dos_of_commuting_hamiltonian_is_one() {
        for n in 1..=4 {
            let g = GroupSpec::new(n).unwrap();
            let mut h = Operator::zeros(1 << n).unwrap();
            for s in 0..n {
                h = h.add(&pauli(Axis::Z, s, n).unwrap()).unwrap();
            }
            let r = dos_hamiltonian(&h, g, Method::Pinching).unwrap();
            assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn dos_of_sigma_x_is_half() {
        let g = GroupSpec::new(1).unwrap();
        let h = pauli(Axis::X, 0, 1).unwrap();
        for m in [Method::Pinching, Method::Quadrature { nodes_per_angle: 32 }] {
            assert_abs_diff_eq!(dos_hamiltonian(&h, g, m).unwrap().value, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_site_hamiltonian_pinching_matches_quadrature() {
        let g = GroupSpec::new(2).unwrap();
        let h = pauli(Axis::Z, 0, 2).unwrap().add(&pauli(Axis::X, 1, 2).unwrap()).unwrap();
        let p = dos_hamiltonian(&h, g, Method::Pinching).unwrap().value;
        let q = dos_hamiltonian(&h, g, Method::Quadrature { nodes_per_angle: 32 }).unwrap().value;
        assert!((p - q).abs() <= 1e-8);
        assert_abs_diff_eq!(p, 0.75, epsilon = 1e-14);
    }

    #[test]
    fn identity_hamiltonian_has_undefined_dos() {
        let g = GroupSpec::new(1).unwrap();
        let h = Operator::identity(2).unwrap().scale(3.0);
        assert_eq!(dos_hamiltonian(&h, g, Method::Pinching), Err(Error::UndefinedDos));
    }

    #[test]
    fn diagonal_state_is_fully_symmetric() {
        let g = GroupSpec::new(2).unwrap();
        let rho = State::mixed(Operator::diagonal(&[c(0.1), c(0.2), c(0.3), c(0.4)]).unwrap()).unwrap();
        assert_abs_diff_eq!(dos_state(&rho, g, Method::Pinching).unwrap().value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn plus_state_is_three_quarters() {
        let g = GroupSpec::new(1).unwrap();
        let h = 0.5f64.sqrt();
        let plus = State::pure(DVector::from_vec(vec![c(h), c(h)])).unwrap();
        assert_abs_diff_eq!(dos_state(&plus, g, Method::Pinching).unwrap().value, 0.75, epsilon = 1e-15);
        let q = dos_state(&plus, g, Method::Quadrature { nodes_per_angle: 32 }).unwrap().value;
        assert_abs_diff_eq!(q, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_examples() {
        let g = GroupSpec::new(1).unwrap();
        let z = TwirlOverlap::new(&pauli(Axis::Z, 0, 1).unwrap(), g).unwrap();
        assert_abs_diff_eq!(group_average_quadrature(|w| z.eval_angles(w), g, 32).unwrap(), 2.0, epsilon = 1e-13);
        let x = TwirlOverlap::new(&pauli(Axis::X, 0, 1).unwrap(), g).unwrap();
        assert!(group_average_quadrature(|w| x.eval_angles(w), g, 32).unwrap().abs() <= 1e-12);
        for n in [1, 3, 8] {
            assert_abs_diff_eq!(group_average_quadrature(|_| 0.37, g, n).unwrap(), 0.37, epsilon = 1e-15);
        }
    }

    #[test]
    fn quadrature_grid_budget() {
        let g = GroupSpec::new(5).unwrap();
        assert!(matches!(group_average_quadrature(|_| 1.0, g, 32), Err(Error::GridBudget { .. })));
    }

    #[test]
    fn monte_carlo_examples() {
        let g = GroupSpec::new(1).unwrap();
        let (m, se) = group_average_monte_carlo(|_| 0.75, g, 1000, 7).unwrap();
        assert_eq!((m, se), (0.75, 0.0));

        let x = TwirlOverlap::new(&pauli(Axis::X, 0, 1).unwrap(), g).unwrap();
        let (m, se) = group_average_monte_carlo(|w| x.eval_angles(w), g, 100_000, 11).unwrap();
        assert!(se > 0.0);
        assert!(m.abs() <= 4.0 * se, "mean {m} stderr {se}");

        let again = group_average_monte_carlo(|w| x.eval_angles(w), g, 100_000, 11).unwrap();
        assert_eq!(again.0.to_bits(), m.to_bits());
        assert_eq!(again.1.to_bits(), se.to_bits());

        assert!(group_average_monte_carlo(|_| 1.0, g, 99, 0).is_err());
    }

    #[test]
    fn pinching_examples() {
        let g = GroupSpec::new(1).unwrap();
        let d = Operator::diagonal(&[c(0.3), c(-1.2)]).unwrap();
        assert_abs_diff_eq!(group_average_pinching(&d, g).unwrap(), frobenius_norm(&d).powi(2), epsilon = 1e-15);
        assert_eq!(group_average_pinching(&pauli(Axis::X, 0, 1).unwrap(), g).unwrap(), 0.0);
    }

    #[test]
    fn monte_carlo_dos_carries_error_estimate() {
        let g = GroupSpec::new(2).unwrap();
        let h = pauli(Axis::Z, 0, 2).unwrap().add(&pauli(Axis::X, 1, 2).unwrap()).unwrap();
        let r = dos_hamiltonian(&h, g, Method::MonteCarlo { samples: 1000, seed: 3 }).unwrap();
        assert!(r.error_estimate > 0.0);
        assert_eq!(r.detail, Detail::Samples { count: 1000, seed: 3 });
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = GroupSpec::new(2).unwrap();
        let h = pauli(Axis::X, 0, 1).unwrap();
        assert!(matches!(dos_hamiltonian(&h, g, Method::Pinching), Err(Error::DimensionMismatch { .. })));
    }
}
