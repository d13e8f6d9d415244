//! Quadrature rules.
//!
//! Circle moments of weights with an algebraic singularity at θ = 0, and a
//! polar product rule on the unit disk. Base rules come from `gauss-quad`;
//! Gauss–Legendre nodes are Newton-polished when a wider type is requested.

use gauss_quad::jacobi::GaussJacobi;
use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cis, ComplexSum, Real};

/// Gauss–Legendre nodes and weights on [−1, 1] in precision `T`.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("Gauss–Legendre rule needs at least one node".into()));
    }
    if n == 1 {
        return Ok((vec![T::zero()], vec![T::lit(2.0)]));
    }
    let base = GaussLegendre::new(n)
        .map_err(|e| Error::InvalidParameter(format!("Gauss–Legendre rule: {e}")))?;
    let mut pairs: Vec<(f64, f64)> = base.into_node_weight_pairs();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let polish = T::SIGNIFICAND_BITS > 53;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (x0, w0) in pairs {
        if !polish {
            nodes.push(T::lit(x0));
            weights.push(T::lit(w0));
            continue;
        }
        let mut x = T::lit(x0);
        let mut dp = T::one();
        for _ in 0..4 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            x = x - p / d;
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_zero() { dp } else { d };
        nodes.push(x);
        weights.push(T::lit(2.0) / ((T::one() - x * x) * dp * dp));
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    for k in 2..=n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_count(n);
    (p1, nf * (x * p1 - p0) / (x * x - T::one()))
}

/// Panel settings for circle moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadConfig {
    /// Gauss–Legendre points per interior panel.
    pub interior_order: usize,
    /// Interior panel count at the coarsest level (raised to resolve the highest moment).
    pub initial_panels: usize,
    /// Gauss–Jacobi points on each of the two end panels at the coarsest level.
    pub end_order: usize,
    /// Relative change (in units of `c[0]`) accepted between refinement levels.
    pub tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { interior_order: 16, initial_panels: 16, end_order: 40, tol: 1e-13, max_refinements: 6 }
    }
}

/// A circle density split for singularity-aware quadrature.
///
/// `full(θ)` is the density; near θ = 0 it behaves like `θ^exponent · left(θ)`
/// and near θ = 2π like `(2π−θ)^exponent · right(θ)` with `left`, `right` smooth.
pub struct SingularDensity<'a> {
    pub exponent: f64,
    pub full: &'a (dyn Fn(f64) -> f64 + Sync),
    pub left: &'a (dyn Fn(f64) -> f64 + Sync),
    pub right: &'a (dyn Fn(f64) -> f64 + Sync),
}

/// `c_k = ∫ e^{−ikθ} w(θ) dθ/2π` for `k = 0..=k_max`.
///
/// Gauss–Jacobi end panels absorb the algebraic singularity, composite
/// Gauss–Legendre covers the interior; both are doubled until successive
/// levels agree to `cfg.tol · c_0`.
pub fn circle_moments(
    w: &SingularDensity<'_>,
    k_max: usize,
    cfg: &QuadConfig,
) -> Result<Vec<Complex<f64>>> {
    let mut prev = moments_at_level(w, k_max, cfg, 0)?;
    let mut change = f64::INFINITY;
    for level in 1..=cfg.max_refinements {
        let next = moments_at_level(w, k_max, cfg, level)?;
        let scale = next[0].re.abs();
        change = prev.iter().zip(&next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        if change <= cfg.tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence { refinements: cfg.max_refinements, change })
}

fn moments_at_level(
    w: &SingularDensity<'_>,
    k_max: usize,
    cfg: &QuadConfig,
    level: usize,
) -> Result<Vec<Complex<f64>>> {
    let nodes = circle_rule(w, k_max, cfg, level)?;
    let mut sums = vec![ComplexSum::<f64>::new(); k_max + 1];
    for &(t, wt) in &nodes {
        let step = cis(-t);
        let mut e = Complex::new(wt, 0.0);
        for s in sums.iter_mut() {
            s.add(e);
            e *= step;
        }
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(sums.into_iter().map(|s| s.value() / two_pi).collect())
}

/// Nodes `(θ, weight·w(θ))` of the composite rule for `∫_0^{2π} f(θ) w(θ) dθ`
/// at refinement `level`, sized to resolve `e^{ikθ}` for `k ≤ k_max`.
pub fn circle_rule(
    w: &SingularDensity<'_>,
    k_max: usize,
    cfg: &QuadConfig,
    level: usize,
) -> Result<Vec<(f64, f64)>> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let h = (4.0 / (k_max as f64 + 1.0)).min(0.5);
    let scale = 1usize << level;
    let mut nodes: Vec<(f64, f64)> = Vec::new();

    let end_n = cfg.end_order * scale;
    let jac = GaussJacobi::new(end_n, 0.0, w.exponent)
        .map_err(|e| Error::InvalidParameter(format!("Gauss–Jacobi rule: {e}")))?;
    let jac_scale = (h / 2.0).powf(w.exponent + 1.0);
    for (x, wt) in jac.iter() {
        let t = h * (1.0 + x) / 2.0;
        nodes.push((t, wt * jac_scale * (w.left)(t)));
        nodes.push((two_pi - t, wt * jac_scale * (w.right)(t)));
    }

    let panels = cfg.initial_panels.max(2 * k_max) * scale;
    let (gx, gw) = gauss_legendre::<f64>(cfg.interior_order)?;
    let width = (two_pi - 2.0 * h) / panels as f64;
    for p in 0..panels {
        let lo = h + width * p as f64;
        for (x, wt) in gx.iter().zip(&gw) {
            let t = lo + width * (1.0 + x) / 2.0;
            nodes.push((t, wt * width / 2.0 * (w.full)(t)));
        }
    }
    Ok(nodes)
}

/// Polar product rule on the unit disk: Gauss–Legendre in the radius
/// (with the `t dt` Jacobian folded in) times the trapezoid rule in angle.
#[derive(Clone, Debug)]
pub struct DiskRule<T> {
    pub radial: usize,
    pub angular: usize,
    /// `(point, weight)` with `Σ weight = π`.
    pub nodes: Vec<(Complex<T>, T)>,
}

impl<T: Real> DiskRule<T> {
    pub fn new(radial: usize, angular: usize) -> Result<Self> {
        if angular == 0 {
            return Err(Error::InvalidParameter("disk rule needs angular nodes".into()));
        }
        let (x, wx) = gauss_legendre::<T>(radial)?;
        let half = T::lit(0.5);
        let two_pi = T::lit(2.0) * T::PI();
        let dphi = two_pi / T::from_count(angular);
        let mut nodes = Vec::with_capacity(radial * angular);
        for (xi, wi) in x.iter().zip(&wx) {
            let t = half * (*xi + T::one());
            let wt = half * *wi * t * dphi;
            for j in 0..angular {
                let phi = dphi * (T::from_count(j) + half);
                nodes.push((cis(phi) * t, wt));
            }
        }
        Ok(Self { radial, angular, nodes })
    }

    /// `∫_{|w|<1} f(w) dA(w)`.
    pub fn integrate(&self, mut f: impl FnMut(Complex<T>) -> Complex<T>) -> Complex<T> {
        let mut s = ComplexSum::new();
        for &(w, wt) in &self.nodes {
            s.add(f(w) * wt);
        }
        s.value()
    }
}
