//! Quadrature and bracketing root finding.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default absolute tolerance for semi-infinite quadrature.
pub const QUAD_TOL: f64 = 1e-8;
/// Default tolerance for bisection.
pub const ROOT_TOL: f64 = 1e-10;

const MAX_BISECT_ITER: usize = 400;

/// Gauss-Legendre nodes and weights mapped onto `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Re-maps the rule onto another interval.
    pub fn rescaled(&self, a: f64, b: f64) -> QuadratureRule {
        let (a0, b0) = self.interval;
        let s = (b - a) / (b0 - a0);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| a + (x - a0) * s).collect(),
            weights: self.weights.iter().map(|&w| w * s).collect(),
            interval: (a, b),
        }
    }

    /// ∫_a^b f without allocating a rescaled copy.
    pub fn integrate_on(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let (a0, b0) = self.interval;
        let s = (b - a) / (b0 - a0);
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * s * f(a + (x - a0) * s)).sum()
    }
}

/// n-point Gauss-Legendre rule on `[a, b]`, exact for polynomials of degree ≤ 2n-1.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidInput("Gauss-Legendre rule needs at least one node".into()));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!("invalid interval [{a}, {b}]")));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let rule = QuadratureRule { nodes, weights, interval: (-1.0, 1.0) };
    Ok(if (a, b) == (-1.0, 1.0) { rule } else { rule.rescaled(a, b) })
}

// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 20/40-point rules on [-1, 1] used for panel quadrature.
pub(crate) fn panel_rules() -> &'static (QuadratureRule, QuadratureRule) {
    static RULES: OnceLock<(QuadratureRule, QuadratureRule)> = OnceLock::new();
    RULES.get_or_init(|| {
        (gauss_legendre(20, -1.0, 1.0).expect("valid rule"), gauss_legendre(40, -1.0, 1.0).expect("valid rule"))
    })
}

/// Fixed-rule panel quadrature of a smooth integrand over `[a, b]`.
pub(crate) fn integrate_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panel_width: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = &panel_rules().1;
    let panels = ((b - a) / panel_width).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            rule.integrate_on(lo, lo + h, &f)
        })
        .sum()
}

/// Large-t behaviour of an integrand on `[0, ∞)`: f(t) ≈ leading / t² for t ≥ onset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub leading: f64,
    pub onset: f64,
}

impl TailBound {
    pub fn inverse_square(leading: f64) -> Self {
        Self { leading, onset: 1.0 }
    }
}

/// ∫_0^∞ f(t) dt for integrands with an inverse-square tail.
///
/// The range is cut at T where |leading|/T < tol/10; [0, T] is covered by
/// geometrically growing panels, each refined adaptively by comparing 20- and
/// 40-point Gauss-Legendre estimates, and `leading / T` is added for the rest.
pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, tail: TailBound, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let cut = (10.0 * tail.leading.abs() / tol).max(tail.onset).max(1.0);
    let mut edges = vec![0.0, 1.0];
    while *edges.last().unwrap() < cut {
        let next = (edges.last().unwrap() * 2.0).min(cut);
        edges.push(next);
    }
    let panel_tol = tol / (2.0 * edges.len() as f64);
    let mut total = 0.0;
    let mut budget = 20_000usize;
    for w in edges.windows(2) {
        total += adaptive_panel(&f, w[0], w[1], panel_tol, 0, &mut budget)?;
    }
    Ok(total + tail.leading / cut)
}

fn adaptive_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize, budget: &mut usize) -> Result<f64> {
    if *budget == 0 {
        return Err(Error::Convergence(format!("panel budget exhausted near [{a}, {b}]")));
    }
    *budget -= 1;
    let (coarse, fine) = panel_rules();
    let c = coarse.integrate_on(a, b, f);
    let r = fine.integrate_on(a, b, f);
    if !r.is_finite() {
        return Err(Error::Convergence(format!("non-finite integrand on [{a}, {b}]")));
    }
    if (r - c).abs() <= tol || depth >= 40 {
        if (r - c).abs() > tol {
            return Err(Error::Convergence(format!("panel [{a}, {b}] did not converge")));
        }
        return Ok(r);
    }
    let m = 0.5 * (a + b);
    Ok(adaptive_panel(f, a, m, 0.5 * tol, depth + 1, budget)? + adaptive_panel(f, m, b, 0.5 * tol, depth + 1, budget)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Either |residual| ≤ tol or the bracket shrank below tol.
    pub converged: bool,
}

/// Bisection on a sign-changing bracket.
///
/// Stops when |f(mid)| ≤ tol or the bracket width is ≤ tol. The point with the
/// smallest |f| seen so far is returned.
pub fn find_root_bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<RootResult> {
    find_root_bisect_capped(f, lo, hi, tol, MAX_BISECT_ITER)
}

/// [`find_root_bisect`] with an explicit iteration cap. Raising the cap never
/// raises the returned |residual|.
pub fn find_root_bisect_capped(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<RootResult> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(RootResult { root: lo, residual: 0.0, iterations: 0, converged: true });
    }
    if f_hi == 0.0 {
        return Ok(RootResult { root: hi, residual: 0.0, iterations: 0, converged: true });
    }
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::Bracketing { lo, hi, f_lo, f_hi });
    }
    let mut best = if f_lo.abs() <= f_hi.abs() {
        RootResult { root: lo, residual: f_lo, iterations: 0, converged: false }
    } else {
        RootResult { root: hi, residual: f_hi, iterations: 0, converged: false }
    };
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if !f_mid.is_finite() {
            return Err(Error::Convergence(format!("non-finite function value at {mid}")));
        }
        best.iterations = it;
        if f_mid.abs() < best.residual.abs() {
            best.root = mid;
            best.residual = f_mid;
        }
        if f_mid.abs() <= tol || (hi - lo) <= tol || mid == lo || mid == hi {
            best.converged = true;
            return Ok(best);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

/// Bisection that turns a non-converged result into an error.
pub(crate) fn solve_bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, what: &str) -> Result<f64> {
    let r = find_root_bisect(f, lo, hi, tol)?;
    if !r.converged {
        return Err(Error::Convergence(format!("{what}: bisection stopped after {} iterations", r.iterations)));
    }
    Ok(r.root)
}
