//! Dense complex operators on small Hilbert spaces.
//!
//! Everything in the crate that is a matrix (Hamiltonians, density matrices,
//! group representations, ladder operators) is carried as an [`Operator`].
//! Storage is dense and the dimension is capped at [`MAX_DIM`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest supported Hilbert-space dimension (12 spins).
pub const MAX_DIM: usize = 4096;

/// Largest number of spin-1/2 sites that fits under [`MAX_DIM`].
pub const MAX_SITES: usize = 12;

/// Tolerance used when classifying a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Square complex matrix with an eagerly computed Hermiticity flag.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
    hermitian: bool,
}

impl Operator {
    /// Wraps a matrix, checking shape, finiteness and the dimension cap.
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        check_dim(mat.nrows())?;
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let hermitian = hermitian_deviation(&mat) <= HERMITIAN_TOL * scale(&mat);
        Ok(Self { mat, hermitian })
    }

    /// Like [`Operator::from_matrix`] but rejects non-Hermitian input.
    pub fn hermitian(mat: DMatrix<C64>) -> Result<Self> {
        let op = Self::from_matrix(mat)?;
        op.require_hermitian()?;
        Ok(op)
    }

    pub fn from_real(mat: DMatrix<f64>) -> Result<Self> {
        Self::from_matrix(mat.map(|x| C64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { mat: DMatrix::identity(dim, dim), hermitian: true })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { mat: DMatrix::zeros(dim, dim), hermitian: true })
    }

    pub fn diagonal(entries: &[C64]) -> Result<Self> {
        Self::from_matrix(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    /// Internal constructor for results that are Hermitian by construction.
    pub(crate) fn trusted(mat: DMatrix<C64>, hermitian: bool) -> Self {
        Self { mat, hermitian }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Recomputes max |A - A†| from the entries.
    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.mat)
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.hermitian {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation: self.hermitian_deviation() })
        }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint(), hermitian: self.hermitian }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { mat: &self.mat * C64::new(s, 0.0), hermitian: self.hermitian }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::from_matrix(&self.mat + &other.mat)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::from_matrix(&self.mat - &other.mat)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::from_matrix(&self.mat * &other.mat)
    }

    /// AB - BA
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::from_matrix(&self.mat * &other.mat - &other.mat * &self.mat)
    }

    /// AB + BA
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::from_matrix(&self.mat * &other.mat + &other.mat * &self.mat)
    }

    /// Adds c·I.
    pub fn shift(&self, c: f64) -> Self {
        let mut mat = self.mat.clone();
        for i in 0..mat.nrows() {
            mat[(i, i)] += C64::new(c, 0.0);
        }
        Self { mat, hermitian: self.hermitian }
    }

    /// Largest entry-wise modulus of A - B.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(&self.mat * v)
    }

    /// ⟨v|A|v⟩
    pub fn expectation(&self, v: &DVector<C64>) -> Result<C64> {
        Ok(v.dotc(&self.apply(v)?))
    }

    /// Eigenvalues (ascending) and column eigenvectors of a Hermitian operator.
    pub fn eigh(&self) -> Result<(Vec<f64>, DMatrix<C64>)> {
        self.require_hermitian()?;
        let eig = SymmetricEigen::try_new(self.mat.clone(), EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or_else(|| Error::Convergence("Hermitian eigendecomposition".into()))?;
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
        Ok((values, vectors))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.0)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidInput("operator dimension must be positive".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionCap { dim, cap: MAX_DIM });
    }
    Ok(())
}

fn hermitian_deviation(mat: &DMatrix<C64>) -> f64 {
    let n = mat.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    dev
}

// Entry scale used to make the Hermiticity tolerance unit-free for large entries.
fn scale(mat: &DMatrix<C64>) -> f64 {
    mat.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

/// Quantum state: density matrix or normalized pure vector.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Mixed(Operator),
    Pure(DVector<C64>),
}

impl State {
    /// Validates a density matrix: Hermitian, unit trace, eigenvalues ≥ -1e-10.
    pub fn mixed(rho: Operator) -> Result<Self> {
        rho.require_hermitian()
            .map_err(|e| Error::InvalidState(format!("density matrix: {e}")))?;
        let tr = rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = rho.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(State::Mixed(rho))
    }

    /// Validates a pure state: unit norm within 1e-12.
    pub fn pure(psi: DVector<C64>) -> Result<Self> {
        check_dim(psi.len())?;
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("vector norm is {norm}, expected 1")));
        }
        Ok(State::Pure(psi))
    }

    pub fn dim(&self) -> usize {
        match self {
            State::Mixed(rho) => rho.dim(),
            State::Pure(psi) => psi.len(),
        }
    }

    /// Density matrix; pure vectors are promoted to |ψ⟩⟨ψ|.
    pub fn density(&self) -> Operator {
        match self {
            State::Mixed(rho) => rho.clone(),
            State::Pure(psi) => Operator::trusted(psi * psi.adjoint(), true),
        }
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        match self {
            State::Mixed(rho) => rho.matrix().iter().map(|z| z.norm_sqr()).sum(),
            State::Pure(_) => 1.0,
        }
    }

    /// Tr(ρA)
    pub fn expectation(&self, a: &Operator) -> Result<C64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim() });
        }
        match self {
            State::Mixed(rho) => Ok((rho.matrix() * a.matrix()).trace()),
            State::Pure(psi) => a.expectation(psi),
        }
    }
}

fn pauli_2x2(axis: Axis) -> [[C64; 2]; 2] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        Axis::X => [[z, one], [one, z]],
        Axis::Y => [[z, -i], [i, z]],
        Axis::Z => [[one, z], [z, -one]],
    }
}

/// Bit of basis index `b` belonging to `site`; site 0 is the leftmost tensor factor.
#[inline]
pub(crate) fn site_bit(b: usize, site: usize, n_sites: usize) -> usize {
    (b >> (n_sites - 1 - site)) & 1
}

/// Embeds a single-site 2x2 matrix at `site` of an `n_sites` register.
pub fn embed_local(local: &DMatrix<C64>, site: usize, n_sites: usize) -> Result<Operator> {
    check_sites(site, n_sites)?;
    if local.nrows() != 2 || local.ncols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: local.nrows() });
    }
    let dim = 1usize << n_sites;
    let shift = n_sites - 1 - site;
    let mut mat = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let bc = (col >> shift) & 1;
        for br in 0..2 {
            let v = local[(br, bc)];
            if v != C64::new(0.0, 0.0) {
                let row = (col & !(1 << shift)) | (br << shift);
                mat[(row, col)] = v;
            }
        }
    }
    Operator::from_matrix(mat)
}

/// σ_axis acting on `site` of an `n_sites` register: I⊗…⊗σ⊗…⊗I.
pub fn pauli(axis: Axis, site: usize, n_sites: usize) -> Result<Operator> {
    let p = pauli_2x2(axis);
    let local = DMatrix::from_fn(2, 2, |r, c| p[r][c]);
    embed_local(&local, site, n_sites)
}

fn check_sites(site: usize, n_sites: usize) -> Result<()> {
    if n_sites == 0 {
        return Err(Error::InvalidInput("register needs at least one site".into()));
    }
    if n_sites > MAX_SITES {
        return Err(Error::DimensionCap { dim: 1usize << n_sites.min(63), cap: MAX_DIM });
    }
    if site >= n_sites {
        return Err(Error::InvalidInput(format!("site {site} out of range for {n_sites} sites")));
    }
    Ok(())
}

/// Kronecker product a⊗b.
pub fn tensor(a: &Operator, b: &Operator) -> Result<Operator> {
    let dim = a.dim().saturating_mul(b.dim());
    check_dim(dim)?;
    Ok(Operator::trusted(a.matrix().kronecker(b.matrix()), a.is_hermitian() && b.is_hermitian()))
}

/// Kronecker product of state vectors.
pub fn tensor_vec(a: &DVector<C64>, b: &DVector<C64>) -> Result<DVector<C64>> {
    check_dim(a.len().saturating_mul(b.len()))?;
    Ok(a.kronecker(b))
}

/// |A| = √Tr(A†A)
pub fn frobenius_norm(a: &Operator) -> f64 {
    a.matrix().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// H̃ = H - (Tr H / d)·I
pub fn rebias(h: &Operator) -> Result<Operator> {
    h.require_hermitian()?;
    let mean = h.trace().re / h.dim() as f64;
    Ok(h.shift(-mean))
}

/// exp(s·H) for Hermitian H, via eigendecomposition.
pub fn hermitian_exp(h: &Operator, s: f64) -> Result<Operator> {
    let (values, vectors) = h.eigh()?;
    Ok(spectral_function(&values, &vectors, |x| (s * x).exp()))
}

fn spectral_function(values: &[f64], vectors: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> Operator {
    let d = values.len();
    let mut scaled = vectors.clone();
    for (c, &x) in values.iter().enumerate() {
        let w = f(x);
        scaled.column_mut(c).scale_mut(w);
    }
    let mut m = scaled * vectors.adjoint();
    // symmetrize away rounding
    for i in 0..d {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..d {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    Operator::trusted(m, true)
}

/// Gibbs state exp(-βH)/Z.
///
/// The spectrum is shifted by its minimum before exponentiating so that large
/// β never overflows; β = ∞ is not accepted, use a large finite value.
pub fn thermal_state(h: &Operator, beta: f64) -> Result<State> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!("inverse temperature must be finite and >= 0, got {beta}")));
    }
    let (values, vectors) = h.eigh()?;
    let e_min = values[0];
    let z: f64 = values.iter().map(|&e| (-beta * (e - e_min)).exp()).sum();
    let rho = spectral_function(&values, &vectors, |e| (-beta * (e - e_min)).exp() / z);
    Ok(State::Mixed(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pauli_z_single_site() {
        let z = pauli(Axis::Z, 0, 1).unwrap();
        assert_eq!(z, Operator::diagonal(&[c(1.0), c(-1.0)]).unwrap());
    }

    #[test]
    fn pauli_x_on_second_site_is_identity_kron_x() {
        let x = pauli(Axis::X, 1, 2).unwrap();
        let expected = tensor(&Operator::identity(2).unwrap(), &pauli(Axis::X, 0, 1).unwrap()).unwrap();
        assert_eq!(x, expected);
        assert_eq!(x.get(0, 1), c(1.0));
        assert_eq!(x.get(2, 3), c(1.0));
        assert_eq!(x.get(0, 2), c(0.0));
    }

    #[test]
    fn pauli_y_squares_to_identity() {
        let y = pauli(Axis::Y, 0, 2).unwrap();
        let y2 = y.mul(&y).unwrap();
        assert!(y2.max_abs_diff(&Operator::identity(4).unwrap()) < 1e-15);
        assert_abs_diff_eq!(y.trace().norm(), 0.0);
        assert!(y.is_hermitian());
    }

    #[test]
    fn pauli_rejects_oversized_register() {
        assert!(matches!(pauli(Axis::Z, 0, 13), Err(Error::DimensionCap { .. })));
        assert!(pauli(Axis::Z, 3, 3).is_err());
    }

    #[test]
    fn pauli_algebra() {
        let n = 3;
        for s in 0..n {
            let x = pauli(Axis::X, s, n).unwrap();
            let y = pauli(Axis::Y, s, n).unwrap();
            let z = pauli(Axis::Z, s, n).unwrap();
            let lhs = x.commutator(&y).unwrap();
            let rhs = Operator::from_matrix(z.matrix() * C64::new(0.0, 2.0)).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-14);
            for t in 0..n {
                if t != s {
                    let other = pauli(Axis::Y, t, n).unwrap();
                    let comm = x.commutator(&other).unwrap();
                    assert_eq!(frobenius_norm(&comm), 0.0);
                }
            }
        }
    }

    #[test]
    fn tensor_identities() {
        let i2 = Operator::identity(2).unwrap();
        assert_eq!(tensor(&i2, &i2).unwrap(), Operator::identity(4).unwrap());
        let z = pauli(Axis::Z, 0, 1).unwrap();
        let zz = tensor(&z, &z).unwrap();
        assert_eq!(zz, Operator::diagonal(&[c(1.0), c(-1.0), c(-1.0), c(1.0)]).unwrap());
    }

    #[test]
    fn tensor_trace_factorizes() {
        let a = Operator::from_matrix(DMatrix::from_fn(3, 3, |r, c| C64::new(r as f64 + 0.5, c as f64 - 1.0))).unwrap();
        let b = Operator::from_matrix(DMatrix::from_fn(4, 4, |r, c| C64::new((r * c) as f64 * 0.3, 0.7 - r as f64))).unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab.dim(), 12);
        assert!((ab.trace() - a.trace() * b.trace()).norm() <= 1e-12);
    }

    #[test]
    fn tensor_is_associative() {
        let a = pauli(Axis::X, 0, 1).unwrap();
        let b = pauli(Axis::Y, 0, 1).unwrap();
        let c3 = Operator::from_matrix(DMatrix::from_fn(3, 3, |r, c| C64::new(0.1 * (r + c) as f64, 0.2 * r as f64))).unwrap();
        let left = tensor(&tensor(&a, &b).unwrap(), &c3).unwrap();
        let right = tensor(&a, &tensor(&b, &c3).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right) <= 1e-14);
    }

    #[test]
    fn tensor_rejects_dimension_cap() {
        let big = Operator::identity(64).unwrap();
        let bigger = Operator::identity(128).unwrap();
        assert!(matches!(tensor(&big, &bigger), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn frobenius_examples() {
        assert_abs_diff_eq!(frobenius_norm(&Operator::identity(2).unwrap()), 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(frobenius_norm(&pauli(Axis::X, 1, 3).unwrap()), 8f64.sqrt(), epsilon = 1e-15);
        assert_eq!(frobenius_norm(&Operator::zeros(4).unwrap()), 0.0);
    }

    #[test]
    fn rebias_examples() {
        let h = Operator::diagonal(&[c(2.0), c(0.0)]).unwrap();
        assert_eq!(rebias(&h).unwrap(), Operator::diagonal(&[c(1.0), c(-1.0)]).unwrap());
        let x = pauli(Axis::X, 0, 2).unwrap();
        assert_eq!(rebias(&x).unwrap(), x);
        let not_h = Operator::from_matrix(DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])).unwrap();
        assert!(matches!(rebias(&not_h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn hermitian_exp_examples() {
        let beta = 0.7;
        let z = pauli(Axis::Z, 0, 1).unwrap();
        let e = hermitian_exp(&z, -beta).unwrap();
        assert_abs_diff_eq!(e.get(0, 0).re, (-beta).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(e.get(1, 1).re, beta.exp(), epsilon = 1e-14);
        let x = pauli(Axis::X, 0, 1).unwrap();
        let id = hermitian_exp(&x, 0.0).unwrap();
        assert!(id.max_abs_diff(&Operator::identity(2).unwrap()) < 1e-15);
        let t = hermitian_exp(&x, -1.0).unwrap().trace().re;
        assert_abs_diff_eq!(t, 2.0 * 1f64.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(t, 3.08616, epsilon = 1e-5);
    }

    #[test]
    fn thermal_state_examples() {
        let h = pauli(Axis::X, 0, 2).unwrap().add(&pauli(Axis::Z, 1, 2).unwrap()).unwrap();
        let rho = thermal_state(&h, 0.0).unwrap().density();
        assert!(rho.max_abs_diff(&Operator::identity(4).unwrap().scale(0.25)) < 1e-15);

        let z = pauli(Axis::Z, 0, 1).unwrap();
        let cold = thermal_state(&z, 1e3).unwrap().density();
        assert!(cold.max_abs_diff(&Operator::diagonal(&[c(0.0), c(1.0)]).unwrap()) < 1e-15);

        let x = pauli(Axis::X, 0, 1).unwrap();
        let st = thermal_state(&x, 1.0).unwrap();
        let rho = st.density();
        assert_abs_diff_eq!(rho.get(0, 0).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.get(1, 1).re, 0.5, epsilon = 1e-14);
        let t = 1f64.tanh();
        assert_abs_diff_eq!(st.purity(), (1.0 + t * t) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(st.purity(), 0.79001, epsilon = 1e-5);

        assert!(thermal_state(&x, -1.0).is_err());
    }

    #[test]
    fn thermal_purity_non_increasing_with_temperature() {
        let h = pauli(Axis::Z, 0, 1).unwrap().scale(0.3).add(&pauli(Axis::X, 0, 1).unwrap().scale(0.8)).unwrap();
        let betas = [20.0, 5.0, 2.0, 1.0, 0.5, 0.1, 0.0];
        let purities: Vec<f64> = betas.iter().map(|&b| thermal_state(&h, b).unwrap().purity()).collect();
        for w in purities.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "{purities:?}");
        }
    }

    #[test]
    fn state_validation() {
        let bad_trace = Operator::identity(2).unwrap();
        assert!(matches!(State::mixed(bad_trace), Err(Error::InvalidState(_))));
        let negative = Operator::diagonal(&[c(1.5), c(-0.5)]).unwrap();
        assert!(State::mixed(negative).is_err());
        let unnormalized = DVector::from_vec(vec![c(1.0), c(1.0)]);
        assert!(State::pure(unnormalized).is_err());
        let plus = DVector::from_vec(vec![c(0.5f64.sqrt()), c(0.5f64.sqrt())]);
        let st = State::pure(plus).unwrap();
        assert_abs_diff_eq!(st.density().trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn non_finite_rejected() {
        let m = DMatrix::from_element(2, 2, C64::new(f64::NAN, 0.0));
        assert_eq!(Operator::from_matrix(m), Err(Error::NonFinite));
    }
}
