//! Area-measure orthogonal polynomials on the lemniscate
//! `G = {z : |z^m − 1| < r^m}`, `0 < r < 1`.
//!
//! With `ρ = r^m` each of the `m` components is the image of the unit disk
//! under `w ↦ ω^j (1 + ρw)^{1/m}`. Polynomials are stored in the adapted form
//! `Φ_{km+s}(z) = ρ^k z^s Q(w)`, `w = (z^m − 1)/ρ`, `Q` monic of degree `k`;
//! the rotational symmetry of `G` makes the classes `s = 0..m−1` mutually
//! orthogonal, and within class `s` the polynomials `Q` are orthogonal on the
//! disk for the weight `|1 + ρw|^{−v_s} dA`, `v_s = 2 − 2/m − 2s/m`.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperfun::hyp1f1;
use crate::linalg::{cholesky, invert_lower, lu_solve, CMatrix};
use crate::opuc::{eval_phi_pair, monic_from_moments, KernelEvaluation, MomentSequence, OpucBasis};
use crate::quadrature::DiskRule;
use crate::scalar::{cis, lift, lower, ComplexSum, Real};

type C = Complex<f64>;

/// Relative change accepted between an area rule and its doubling.
pub const AREA_TOL: f64 = 1e-8;
/// Coefficient agreement required before the closed-form polynomials replace
/// the oracle ones.
pub const QUOTIENT_TOL: f64 = 1e-6;
/// `|z^m − 1 + ρ²|` below which the closed form switches to its local series.
pub const QUOTIENT_GUARD: f64 = 1e-8;
/// `|t|` below which [`h_func`] sums its Maclaurin series.
pub const H_SERIES_RADIUS: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemniscateParams {
    pub r: f64,
    pub m: usize,
}

impl LemniscateParams {
    pub fn new(r: f64, m: usize) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!("need 0 < r < 1, got r = {r}")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("need m ≥ 1".into()));
        }
        Ok(Self { r, m })
    }

    /// Parameters with `r^m = rho`.
    pub fn from_rho(rho: f64, m: usize) -> Result<Self> {
        Self::new(rho.powf(1.0 / m as f64), m)
    }

    /// `ρ = r^m`.
    pub fn rho(&self) -> f64 {
        self.r.powi(self.m as i32)
    }

    /// `v_s = 2 − 2/m − 2s/m`.
    pub fn v(&self, s: usize) -> f64 {
        let m = self.m as f64;
        2.0 - 2.0 / m - 2.0 * s as f64 / m
    }

    /// `n = km + s` as `(k, s)`.
    pub fn split(&self, n: usize) -> (usize, usize) {
        (n / self.m, n % self.m)
    }

    /// `w = (z^m − 1)/ρ`.
    pub fn to_w(&self, z: C) -> C {
        (z.powu(self.m as u32) - 1.0) / self.rho()
    }

    /// `ω^j (1 + ρw)^{1/m}`, principal root.
    pub fn component_point(&self, w: C, j: usize) -> C {
        let m = self.m as f64;
        let omega = cis(2.0 * std::f64::consts::PI * j as f64 / m);
        omega * (C::new(1.0, 0.0) + w * self.rho()).powf(1.0 / m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub t: f64,
    pub j: usize,
    pub z0: C,
    pub w0: C,
}

/// `z0 = ω^j (1 + r^m e^{it})^{1/m}`, `w0 = e^{it}`.
pub fn boundary_point(t: f64, j: usize, p: &LemniscateParams) -> BoundaryPoint {
    let w0 = cis(t);
    BoundaryPoint { t, j: j % p.m, z0: p.component_point(w0, j % p.m), w0 }
}

/// `|ρw + 1|^{−q}` on the unit circle.
pub fn gamma_q_weight(w: C, q: f64, p: &LemniscateParams) -> f64 {
    (w * p.rho() + 1.0).norm().powf(-q)
}

/// `c_k = ∫ e^{−ikθ} |1 + ρe^{iθ}|^{−q} dθ/2π = Σ_j b_{j+k} b_j ρ^{2j+k}`,
/// `b_j = binom(−q/2, j)`, summed until the tail is below the working precision.
pub fn gamma_q_moments<T: Real>(q: f64, p: &LemniscateParams, k_max: usize) -> Result<MomentSequence<T>> {
    let rho = T::lit(p.rho());
    let eps = T::epsilon();
    let half_q = T::lit(q / 2.0);
    // |b_j| ≤ j^{q/2} growth is polynomial, so ρ^{2j} decides the length
    let tail = ((eps.as_f64().ln() / p.rho().ln()).ceil() as usize) / 2 + 64;
    let len = k_max + tail + 1;
    let mut b = Vec::with_capacity(len);
    b.push(T::one());
    for j in 0..len - 1 {
        let jf = T::from_count(j);
        let next = b[j] * (-half_q - jf) / (jf + T::one());
        b.push(next);
    }
    let mut c = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut s = crate::scalar::CompensatedSum::new();
        let mut rp = rho.powi(k as i32);
        for j in 0..len - k {
            s.add(b[j + k] * b[j] * rp);
            rp = rp * rho * rho;
        }
        c.push(Complex::new(s.value(), T::zero()));
    }
    MomentSequence::new(c, format!("gamma_q(r^m={}, q={q})", p.rho()))
}

/// `D(z) = (1 + ρ/z)^{q/2}`, principal branch, `D(∞) = 1`.
pub fn szego_d(z: C, q: f64, p: &LemniscateParams) -> Result<C> {
    if z.norm() <= p.rho() {
        return Err(Error::Domain(format!("need |z| > r^m = {}, got |z| = {}", p.rho(), z.norm())));
    }
    Ok((C::new(1.0, 0.0) + p.rho() / z).powf(q / 2.0))
}

/// Polar grid per component: Gauss–Legendre in the radius, trapezoid in angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AreaResolution {
    pub radial: usize,
    pub angular: usize,
}

impl Default for AreaResolution {
    fn default() -> Self {
        Self { radial: 256, angular: 512 }
    }
}

impl AreaResolution {
    pub fn doubled(&self) -> Self {
        Self { radial: 2 * self.radial, angular: 2 * self.angular }
    }

    /// A grid resolving products `w^j w̄^l` with `j, l ≤ k_max` together with
    /// the analytic weight factors (whose Fourier modes decay like `ρ^d`).
    pub fn adequate(k_max: usize) -> Self {
        Self { radial: (k_max + 64).max(64), angular: (2 * k_max + 160).next_power_of_two().max(256) }
    }
}

/// Node `z` of the area rule, its disk preimage `w` and its weight.
#[derive(Clone, Copy, Debug)]
pub struct AreaNode<T> {
    pub z: Complex<T>,
    pub w: Complex<T>,
    pub weight: T,
}

/// `∫_G f dA = Σ_j ∫_{|w|<1} f(z_j(w)) (ρ²/m²) |1 + ρw|^{2/m − 2} dA(w)` as a node list.
pub fn area_rule<T: Real>(p: &LemniscateParams, res: AreaResolution) -> Result<Vec<AreaNode<T>>> {
    let disk = DiskRule::<T>::new(res.radial, res.angular)?;
    let m = T::from_count(p.m);
    let rho = T::lit(p.rho());
    let one = Complex::new(T::one(), T::zero());
    let jac_pow = T::lit(2.0 / p.m as f64 - 2.0);
    let inv_m = T::one() / m;
    let two_pi = T::lit(2.0) * T::PI();
    let mut nodes = Vec::with_capacity(disk.nodes.len() * p.m);
    for j in 0..p.m {
        let omega = cis(two_pi * T::from_count(j) / m);
        for &(w, wt) in &disk.nodes {
            let u = one + w * rho;
            let z = omega * u.powf(inv_m);
            let weight = wt * rho * rho / (m * m) * u.norm().powf(jac_pow);
            nodes.push(AreaNode { z, w, weight });
        }
    }
    Ok(nodes)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaIntegral {
    pub value: C,
    /// Relative change against the doubled grid.
    pub change: f64,
}

/// `∫_G f dA` with the error estimated by one doubling of the grid.
pub fn area_quadrature(
    f: impl Fn(C) -> C + Sync,
    p: &LemniscateParams,
    res: AreaResolution,
) -> Result<AreaIntegral> {
    let run = |res: AreaResolution| -> Result<(C, f64)> {
        let nodes = area_rule::<f64>(p, res)?;
        let vals: Vec<C> = nodes.par_iter().map(|n| f(n.z) * n.weight).collect();
        let mut s = ComplexSum::new();
        let mut abs = 0.0;
        for v in vals {
            abs += v.norm();
            s.add(v);
        }
        Ok((s.value(), abs))
    };
    let (coarse, _) = run(res)?;
    let (fine, abs) = run(res.doubled())?;
    let scale = fine.norm().max(abs * 1e-3).max(f64::MIN_POSITIVE);
    let change = (fine - coarse).norm() / scale;
    if change > AREA_TOL {
        return Err(Error::QuadratureNonConvergence { refinements: 1, change });
    }
    Ok(AreaIntegral { value: fine, change })
}

/// Gram matrix `Ĝ_{jl} = (ρ²/m) ∫_{|w|<1} w^j w̄^l |1 + ρw|^{−v_s} dA`, `j, l ≤ k_max`,
/// on a polar disk rule. The area inner product of `z^s w^j` and `z^s w^l`
/// over all of `G` equals `Ĝ_{jl}`.
pub fn class_gram<T: Real>(s: usize, k_max: usize, p: &LemniscateParams, rule: &DiskRule<T>) -> CMatrix<T> {
    let n = k_max + 1;
    let rho = T::lit(p.rho());
    let v = T::lit(p.v(s));
    let one = Complex::new(T::one(), T::zero());
    let ang = rule.angular;
    // per ring: F(d) = Σ_φ e^{idφ} W(t e^{iφ}), then Ĝ_{jl} = Σ_rings wt t^{j+l} F(j − l)
    let rings: Vec<(T, T, Vec<Complex<T>>)> = rule
        .nodes
        .par_chunks(ang)
        .map(|ring| {
            let t = ring[0].0.norm();
            let wt = ring[0].1;
            let mut f = vec![ComplexSum::<T>::new(); n];
            for &(w, _) in ring {
                let weight = (one + w * rho).norm().powf(-v);
                let step = if t.is_zero() { one } else { w / t };
                let mut e = Complex::new(weight, T::zero());
                for fd in f.iter_mut() {
                    fd.add(e);
                    e = e * step;
                }
            }
            (t, wt, f.into_iter().map(|s| s.value()).collect())
        })
        .collect();
    let scale = rho * rho / T::from_count(p.m);
    let mut g = CMatrix::zeros(n);
    for j in 0..n {
        for l in 0..=j {
            let mut acc = ComplexSum::new();
            for (t, wt, f) in &rings {
                acc.add(f[j - l] * (*wt * t.powi((j + l) as i32)));
            }
            let val = acc.value() * scale;
            g.set(j, l, val);
            g.set(l, j, val.conj());
        }
    }
    g
}

/// [`class_gram`] from the binomial expansion of the weight:
/// `Ĝ_{jl} = (2πρ²/m) Σ_a b_a b_{a+j−l} ρ^{2a+j−l} / (2j + 2a + 2)` for `j ≥ l`.
pub fn class_gram_series<T: Real>(s: usize, k_max: usize, p: &LemniscateParams) -> CMatrix<T> {
    let n = k_max + 1;
    let rho = T::lit(p.rho());
    let half_v = T::lit(p.v(s) / 2.0);
    let tail = ((T::epsilon().as_f64().ln() / p.rho().ln()).ceil() as usize) / 2 + 64;
    let len = n + tail;
    let mut b = vec![T::one()];
    for a in 0..len {
        let af = T::from_count(a);
        let next = b[a] * (-half_v - af) / (af + T::one());
        b.push(next);
    }
    let scale = T::lit(2.0) * T::PI() * rho * rho / T::from_count(p.m);
    let mut g = CMatrix::zeros(n);
    for j in 0..n {
        for l in 0..=j {
            let d = j - l;
            let mut acc = crate::scalar::CompensatedSum::new();
            for a in 0..tail {
                let term = b[a] * b[a + d] * rho.powi((2 * a + d) as i32) / T::from_count(2 * j + 2 * a + 2);
                acc.add(term);
            }
            let val = Complex::new(acc.value() * scale, T::zero());
            g.set(j, l, val);
            g.set(l, j, val);
        }
    }
    g
}

/// Monic orthogonal polynomials of the circle weight `|1 + ρw|^{−v_s}` for
/// one class `s < m − 1`, up to degree `k_max + 1`.
#[derive(Clone, Debug)]
pub struct CircleBank {
    pub s: usize,
    pub v: f64,
    pub basis: OpucBasis<f64>,
}

impl CircleBank {
    pub fn new(s: usize, k_max: usize, p: &LemniscateParams) -> Result<Self> {
        let v = p.v(s);
        let moms = gamma_q_moments::<f64>(v, p, k_max + 1)?;
        Ok(Self { s, v, basis: monic_from_moments(&moms, k_max + 1)? })
    }

    pub fn max_k(&self) -> usize {
        self.basis.max_degree() - 1
    }

    /// `Φ_{k+1}(−ρ)/Φ_k(−ρ)`.
    pub fn ratio_at_minus_rho(&self, k: usize, p: &LemniscateParams) -> Result<C> {
        let x = C::new(-p.rho(), 0.0);
        let (a, _) = eval_phi_pair(&self.basis.verblunsky, k + 1, x)?;
        let (b, _) = eval_phi_pair(&self.basis.verblunsky, k, x)?;
        if b.norm() == 0.0 {
            return Err(Error::NearZeroDivision(0.0));
        }
        Ok(a / b)
    }

    /// Coefficients of `P = Φ_{k+1} − R_k Φ_k` (ascending, length `k + 2`).
    fn numerator(&self, k: usize, p: &LemniscateParams) -> Result<Vec<C>> {
        let r = self.ratio_at_minus_rho(k, p)?;
        let mut num = self.basis.monic[k + 1].clone();
        for (c, phi) in num.iter_mut().zip(&self.basis.monic[k]) {
            *c -= r * phi;
        }
        Ok(num)
    }

    /// Adapted coefficients `e` (ascending, monic) of `Q = P/(w + ρ)`.
    pub fn quotient_coefficients(&self, k: usize, p: &LemniscateParams) -> Result<Vec<C>> {
        if k > self.max_k() {
            return Err(Error::DegreeOutOfRange { requested: k, available: self.max_k() });
        }
        let num = self.numerator(k, p)?;
        Ok(synthetic_division(&num, p.rho()).0)
    }
}

/// `P(w) = (w + ρ) Q(w) + rem`, coefficients ascending:
/// `q_{deg−1} = p_deg`, `q_{j−1} = p_j − ρ q_j`.
fn synthetic_division(p: &[C], rho: f64) -> (Vec<C>, C) {
    let deg = p.len() - 1;
    let mut e = vec![C::zero(); deg];
    e[deg - 1] = p[deg];
    for j in (1..deg).rev() {
        e[j - 1] = p[j] - e[j] * rho;
    }
    let rem = p[0] - e[0] * rho;
    (e, rem)
}

/// Taylor coefficients of `P` about `x0`: `P(w) = Σ t_j (w − x0)^j`, first `count`.
fn taylor_shift(p: &[C], x0: C, count: usize) -> Vec<C> {
    let mut work = p.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count.min(p.len()) {
        // one synthetic division by (w − x0): remainder is the next coefficient
        let deg = work.len() - 1;
        let mut q = vec![C::zero(); deg.max(1)];
        let mut acc = C::zero();
        for j in (0..=deg).rev() {
            acc = acc * x0 + work[j];
            if j > 0 {
                q[j - 1] = acc;
            }
        }
        out.push(acc);
        if deg == 0 {
            break;
        }
        work = q;
    }
    out
}

/// The circle banks used by the closed form, one per class `s < m − 1`.
#[derive(Clone, Debug)]
pub struct QuotientBanks {
    pub params: LemniscateParams,
    pub banks: Vec<CircleBank>,
    /// Smallest `k` from which the closed form is used.
    pub threshold: usize,
}

impl QuotientBanks {
    pub fn new(p: &LemniscateParams, k_max: usize, threshold: usize) -> Result<Self> {
        let banks = (0..p.m.saturating_sub(1)).map(|s| CircleBank::new(s, k_max, p)).collect::<Result<_>>()?;
        Ok(Self { params: *p, banks, threshold })
    }
}

/// Closed-form `Φ_n(z)` for `n = km + s`:
/// `z^{m−1}(z^m − 1)^k` for `s = m − 1`, otherwise
/// `z^s ρ^{k+1} (Φ_{k+1}(w) − R_k Φ_k(w)) / (z^m − 1 + ρ²)` with the circle
/// polynomials of the weight `|1 + ρw|^{−v_s}` and `R_k = Φ_{k+1}(−ρ)/Φ_k(−ρ)`.
pub fn prop72_phi(n: usize, z: C, banks: &QuotientBanks) -> Result<C> {
    let p = &banks.params;
    let (k, s) = p.split(n);
    let rho = p.rho();
    let zm1 = z.powu(p.m as u32) - 1.0;
    if s + 1 == p.m {
        return Ok(z.powu(s as u32) * zm1.powu(k as u32));
    }
    if k < banks.threshold {
        return Err(Error::BelowThreshold { degree: n, threshold: banks.threshold * p.m });
    }
    let bank = &banks.banks[s];
    if k > bank.max_k() {
        return Err(Error::DegreeOutOfRange { requested: k, available: bank.max_k() });
    }
    let w = zm1 / rho;
    let den = zm1 + rho * rho;
    let zs = z.powu(s as u32);
    if den.norm() >= QUOTIENT_GUARD {
        let r = bank.ratio_at_minus_rho(k, p)?;
        let (a, _) = eval_phi_pair(&bank.basis.verblunsky, k + 1, w)?;
        let (b, _) = eval_phi_pair(&bank.basis.verblunsky, k, w)?;
        return Ok(zs * rho.powi(k as i32 + 1) / den * (a - r * b));
    }
    // Q(w) = Σ_{j≥1} t_j (w + ρ)^{j−1}, four terms
    let t = taylor_shift(&bank.numerator(k, p)?, C::new(-rho, 0.0), 5);
    let h = w + rho;
    let q = t.iter().skip(1).rev().fold(C::zero(), |acc, c| acc * h + c);
    Ok(zs * rho.powi(k as i32) * q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisSource {
    Oracle,
    Quotient,
}

/// `Φ_{km+s} = ρ^k z^s Σ_j e_j w^j` with `‖Φ_{km+s}‖² = ρ^{2k} norm_hat`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedPoly {
    pub e: Vec<C>,
    pub norm_hat: f64,
    pub source: BasisSource,
}

#[derive(Clone, Debug)]
pub struct LemniscateBasis {
    pub params: LemniscateParams,
    pub max_degree: usize,
    /// `classes[s][k]` holds degree `km + s`.
    pub classes: Vec<Vec<AdaptedPoly>>,
    pub source: BasisSource,
    /// First `k` built from the closed form (`max k + 1` when none is).
    pub quotient_threshold: usize,
    /// Largest normalized off-diagonal of the orthogonalized Gram matrix.
    pub orthogonality_residual: f64,
    /// Largest coefficient of an oracle polynomial outside its own class.
    pub class_leak: f64,
    pub precision_bits: u32,
}

impl LemniscateBasis {
    fn poly(&self, n: usize) -> Result<&AdaptedPoly> {
        if n > self.max_degree {
            return Err(Error::DegreeOutOfRange { requested: n, available: self.max_degree });
        }
        let (k, s) = self.params.split(n);
        Ok(&self.classes[s][k])
    }

    pub fn source_of(&self, n: usize) -> Result<BasisSource> {
        Ok(self.poly(n)?.source)
    }

    /// `‖Φ_n‖²` in `L²(area)`.
    pub fn norm_sq(&self, n: usize) -> Result<f64> {
        let (k, _) = self.params.split(n);
        Ok(self.poly(n)?.norm_hat * self.params.rho().powi(2 * k as i32))
    }

    pub fn kappa_sq(&self, n: usize) -> Result<f64> {
        Ok(1.0 / self.norm_sq(n)?)
    }

    /// Adapted coefficients of `Q` for degree `n`.
    pub fn adapted(&self, n: usize) -> Result<&[C]> {
        Ok(&self.poly(n)?.e)
    }

    pub fn eval_monic(&self, n: usize, z: C) -> Result<C> {
        let poly = self.poly(n)?;
        let (k, s) = self.params.split(n);
        let w = self.params.to_w(z);
        Ok(z.powu(s as u32) * horner(&poly.e, w) * self.params.rho().powi(k as i32))
    }

    /// `Φ_n(z)/‖Φ_n‖`, with the `ρ^k` factors cancelled.
    pub fn eval_orthonormal(&self, n: usize, z: C) -> Result<C> {
        let poly = self.poly(n)?;
        let (_, s) = self.params.split(n);
        Ok(z.powu(s as u32) * horner(&poly.e, self.params.to_w(z)) / poly.norm_hat.sqrt())
    }

    /// Monic coefficients of `Φ_n` in powers of `z`, ascending.
    ///
    /// Expanding `(z^m − 1)^j` loses accuracy like `2^k`; intended for
    /// moderate degrees.
    pub fn monic_coefficients(&self, n: usize) -> Result<Vec<C>> {
        let poly = self.poly(n)?;
        let (k, s) = self.params.split(n);
        let rho = self.params.rho();
        let mut out = vec![C::zero(); n + 1];
        for i in 0..=k {
            let mut acc = ComplexSum::new();
            let mut binom = 1.0f64;
            for j in i..=k {
                if j > i {
                    binom = binom * j as f64 / (j - i) as f64;
                }
                let sign = if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
                acc.add(poly.e[j] * (sign * binom * rho.powi((k - j) as i32)));
            }
            out[s + i * self.params.m] = acc.value();
        }
        Ok(out)
    }
}

fn horner(coef: &[C], z: C) -> C {
    coef.iter().rev().fold(C::zero(), |acc, c| acc * z + c)
}

/// The functions `z^s w^k` in degree order `d = km + s`.
fn adapted_values<T: Real>(n: usize, z: Complex<T>, w: Complex<T>, m: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n + 1);
    let one = Complex::new(T::one(), T::zero());
    let mut zs = vec![one; m];
    for s in 1..m {
        zs[s] = zs[s - 1] * z;
    }
    let mut wk = one;
    for d in 0..=n {
        let s = d % m;
        if d > 0 && s == 0 {
            wk = wk * w;
        }
        out.push(zs[s] * wk);
    }
    out
}

/// Gram matrix of `z^s w^k`, `km + s ≤ n`, over all of `G`, cross-class
/// entries included.
fn full_adapted_gram<T: Real>(n: usize, p: &LemniscateParams, res: AreaResolution) -> Result<CMatrix<T>> {
    let nodes = area_rule::<T>(p, res)?;
    let dim = n + 1;
    let chunk = 2048;
    let partial: Vec<Vec<Complex<T>>> = nodes
        .par_chunks(chunk)
        .map(|nodes| {
            let mut acc = vec![Complex::<T>::zero(); dim * dim];
            for node in nodes {
                let vals = adapted_values(n, node.z, node.w, p.m);
                for a in 0..dim {
                    let va = vals[a] * node.weight;
                    for b in 0..=a {
                        acc[a * dim + b] = acc[a * dim + b] + va * vals[b].conj();
                    }
                }
            }
            acc
        })
        .collect();
    let mut g = CMatrix::zeros(dim);
    for a in 0..dim {
        for b in 0..=a {
            let mut s = ComplexSum::new();
            for part in &partial {
                s.add(part[a * dim + b]);
            }
            let v = s.value();
            g.set(a, b, v);
            g.set(b, a, v.conj());
        }
    }
    Ok(g)
}

/// Monic orthogonal basis up to `max_degree` by Cholesky factorization of
/// the full area Gram matrix of the functions `z^s w^k`, in precision `T`.
pub fn gram_schmidt_oracle<T: Real>(
    max_degree: usize,
    p: &LemniscateParams,
    res: AreaResolution,
) -> Result<LemniscateBasis> {
    let g = full_adapted_gram::<T>(max_degree, p, res)?;
    let l = cholesky(&g)?;
    let li = invert_lower(&l);
    let m = p.m;
    let mut classes: Vec<Vec<AdaptedPoly>> = vec![Vec::new(); m];
    let mut leak = T::zero();
    for d in 0..=max_degree {
        let (k, s) = p.split(d);
        let ldd = l.get(d, d).re;
        let row = li.row(d);
        let mut e = Vec::with_capacity(k + 1);
        for (d2, c) in row.iter().enumerate().take(d + 1) {
            let coef = *c * ldd;
            if d2 % m == s {
                e.push(lower(coef));
            } else {
                leak = leak.max(coef.norm());
            }
        }
        classes[s].push(AdaptedPoly { e, norm_hat: (ldd * ldd).as_f64(), source: BasisSource::Oracle });
    }
    // L⁻¹ G L⁻ᴴ should be the identity
    let dim = max_degree + 1;
    let mut resid = T::zero();
    for a in 0..dim {
        let ga: Vec<Complex<T>> = (0..dim).map(|j| {
            let mut s = ComplexSum::new();
            for i in 0..=a {
                s.add(li.get(a, i) * g.get(i, j));
            }
            s.value()
        }).collect();
        for b in 0..a {
            let mut s = ComplexSum::new();
            for (j, gj) in ga.iter().enumerate().take(b + 1) {
                s.add(*gj * li.get(b, j).conj());
            }
            resid = resid.max(s.value().norm());
        }
    }
    Ok(LemniscateBasis {
        params: *p,
        max_degree,
        classes,
        source: BasisSource::Oracle,
        quotient_threshold: max_degree / m + 1,
        orthogonality_residual: resid.as_f64(),
        class_leak: leak.as_f64(),
        precision_bits: T::SIGNIFICAND_BITS,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BasisOptions {
    /// Highest degree built by the brute-force oracle.
    pub oracle_degree: usize,
    pub oracle_resolution: AreaResolution,
    /// Disk grid for the class Gram matrices that give the closed-form norms.
    pub resolution: AreaResolution,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self { oracle_degree: 60, oracle_resolution: AreaResolution { radial: 64, angular: 256 }, resolution: AreaResolution::default() }
    }
}

/// Basis up to `max_degree`: oracle polynomials below the empirically
/// determined threshold, closed-form ones from it on, with norms from the
/// class Gram matrices (checked against one grid doubling).
pub fn build_basis(max_degree: usize, p: &LemniscateParams, opts: &BasisOptions) -> Result<LemniscateBasis> {
    let oracle_deg = max_degree.min(opts.oracle_degree).max(p.m - 1);
    let oracle = gram_schmidt_oracle::<f64>(oracle_deg, p, opts.oracle_resolution)?;
    let (k_top, _) = p.split(max_degree);
    let banks = QuotientBanks::new(p, k_top, 0)?;

    // closed-form adapted coefficients for every class and k ≤ k_top
    let mut closed: Vec<Vec<Vec<C>>> = Vec::with_capacity(p.m);
    for s in 0..p.m {
        let mut per_k = Vec::with_capacity(k_top + 1);
        for k in 0..=k_top {
            if s + 1 == p.m {
                let mut e = vec![C::zero(); k + 1];
                e[k] = C::new(1.0, 0.0);
                per_k.push(e);
            } else {
                per_k.push(banks.banks[s].quotient_coefficients(k, p)?);
            }
        }
        closed.push(per_k);
    }

    // threshold: smallest k0 with agreement for every class and every overlap k ≥ k0
    let mut threshold = 0;
    for (s, class) in oracle.classes.iter().enumerate() {
        for (k, poly) in class.iter().enumerate() {
            let diff = poly.e.iter().zip(&closed[s][k]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if diff > QUOTIENT_TOL {
                threshold = threshold.max(k + 1);
            }
        }
    }
    let overlap = oracle.classes.iter().map(|c| c.len()).min().unwrap_or(0);
    if threshold >= overlap && max_degree > oracle_deg {
        return Err(Error::InvariantViolation(format!(
            "closed-form polynomials never agree with the oracle up to k = {overlap}"
        )));
    }

    let coarse = DiskRule::<f64>::new(opts.resolution.radial, opts.resolution.angular)?;
    let fine = DiskRule::<f64>::new(2 * opts.resolution.radial, 2 * opts.resolution.angular)?;
    let mut classes = Vec::with_capacity(p.m);
    let mut worst_change = 0.0f64;
    for s in 0..p.m {
        if s > max_degree {
            classes.push(Vec::new());
            continue;
        }
        let k_class = (max_degree - s) / p.m;
        let g0 = class_gram(s, k_class, p, &coarse);
        let g1 = class_gram(s, k_class, p, &fine);
        let mut polys = Vec::with_capacity(k_class + 1);
        for k in 0..=k_class {
            if k < threshold && k < oracle.classes[s].len() {
                polys.push(oracle.classes[s][k].clone());
                continue;
            }
            let e = closed[s][k].clone();
            let n0 = hermitian_form(&g0, &e);
            let n1 = hermitian_form(&g1, &e);
            worst_change = worst_change.max((n1 - n0).abs() / n1);
            polys.push(AdaptedPoly { e, norm_hat: n1, source: BasisSource::Quotient });
        }
        classes.push(polys);
    }
    if worst_change > AREA_TOL {
        return Err(Error::QuadratureNonConvergence { refinements: 1, change: worst_change });
    }
    Ok(LemniscateBasis {
        params: *p,
        max_degree,
        classes,
        source: BasisSource::Quotient,
        quotient_threshold: threshold,
        orthogonality_residual: oracle.orthogonality_residual,
        class_leak: oracle.class_leak,
        precision_bits: 53,
    })
}

/// `Σ_{j,l} e_j conj(e_l) Ĝ_{jl}`.
fn hermitian_form(g: &CMatrix<f64>, e: &[C]) -> f64 {
    let mut acc = ComplexSum::new();
    for (j, ej) in e.iter().enumerate() {
        for (l, el) in e.iter().enumerate() {
            acc.add(*ej * el.conj() * g.get(j, l));
        }
    }
    acc.value().re
}

/// `K_n(z, w) = Σ_{d ≤ n} Φ_d(z) conj(Φ_d(w)) / ‖Φ_d‖²`.
pub fn mu0_kernel(n: usize, z: C, w: C, basis: &LemniscateBasis) -> Result<KernelEvaluation<f64>> {
    if n > basis.max_degree {
        return Err(Error::DegreeOutOfRange { requested: n, available: basis.max_degree });
    }
    let p = &basis.params;
    let (uz, uw) = (p.to_w(z), p.to_w(w));
    let mut sum = ComplexSum::new();
    for d in 0..=n {
        let (_, s) = p.split(d);
        let poly = basis.poly(d)?;
        let fz = z.powu(s as u32) * horner(&poly.e, uz);
        let fw = w.powu(s as u32) * horner(&poly.e, uw);
        sum.add(fz * fw.conj() / poly.norm_hat);
    }
    Ok(KernelEvaluation {
        n,
        z,
        w,
        value: sum.value(),
        measure_tag: format!("area(r={}, m={})", p.r, p.m),
        precision_bits: basis.precision_bits,
    })
}

/// `λ_n(z) = 1/K_n(z, z)` from a built basis.
pub fn christoffel(n: usize, z: C, basis: &LemniscateBasis) -> Result<f64> {
    Ok(1.0 / mu0_kernel(n, z, z, basis)?.value.re)
}

/// `λ_n(z)` from an LU solve with the full area Gram matrix of `z^s w^k`,
/// computed in precision `T`.
pub fn christoffel_oracle<T: Real>(n: usize, z: C, p: &LemniscateParams, res: AreaResolution) -> Result<f64> {
    let g = full_adapted_gram::<T>(n, p, res)?;
    let zt = lift::<T>(z);
    let wt = lift::<T>(p.to_w(z));
    let beta = adapted_values(n, zt, wt, p.m);
    let x = lu_solve(&g, &beta)?;
    let mut k = ComplexSum::new();
    for (b, xi) in beta.iter().zip(&x) {
        k.add(b.conj() * *xi);
    }
    Ok(1.0 / k.value().re.as_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaKind {
    Exact,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub kappa_sq: f64,
    pub kind: KappaKind,
}

/// `κ_n²`: exactly `(mk+m)/(π r^{2mk+2m})` for `n = km + m − 1`, otherwise
/// `(mk+1+s)(1 + v_s/(2k))/(π r^{2km+2m})`.
pub fn kappa_asymptotic(n: usize, p: &LemniscateParams) -> Result<KappaEstimate> {
    let (k, s) = p.split(n);
    let m = p.m as f64;
    let kf = k as f64;
    let denom = std::f64::consts::PI * p.r.powf(2.0 * m * kf + 2.0 * m);
    if s + 1 == p.m {
        return Ok(KappaEstimate { kappa_sq: (m * kf + m) / denom, kind: KappaKind::Exact });
    }
    if k == 0 {
        return Err(Error::InvalidParameter(format!("asymptotic κ² needs n ≥ m, got n = {n}")));
    }
    let v = p.v(s);
    Ok(KappaEstimate { kappa_sq: (m * kf + 1.0 + s as f64) * (1.0 + v / (2.0 * kf)) / denom, kind: KappaKind::Asymptotic })
}

/// `H(t) = ₁F₁(2; 3; t) = 2(e^t(t − 1) + 1)/t²`, `H(0) = 1`.
pub fn h_func(t: C) -> C {
    if t.norm() < H_SERIES_RADIUS {
        // Σ 2 t^k / ((k+2) k!)
        let mut term = C::new(1.0, 0.0);
        let mut sum = C::zero();
        for k in 0..12 {
            sum += term * (2.0 / (k as f64 + 2.0));
            term = term * t / (k as f64 + 1.0);
        }
        return sum;
    }
    // e^t (t−1) + 1 = (t−1) expm1(t) + t
    let em1 = crate::scalar::expm1_c(t);
    ((t - 1.0) * em1 + t) * 2.0 / (t * t)
}

/// `H` through the general confluent series, for cross-checks.
pub fn h_func_series(t: C) -> Result<C> {
    Ok(hyp1f1(C::new(2.0, 0.0), C::new(3.0, 0.0), t, 1e-16)?.value)
}

/// `A = (conj(w0) a z0^{m−1} + w0 b̄ conj(z0)^{m−1}) / r^m`.
pub fn limit_a(a: C, b: C, bp: &BoundaryPoint, p: &LemniscateParams) -> C {
    let zp = bp.z0.powu(p.m as u32 - 1);
    (bp.w0.conj() * a * zp + bp.w0 * b.conj() * zp.conj()) / p.rho()
}

/// `Σ_{k=0}^{P} (k+1) z^k`, summed term by term.
pub fn derform_sum(z: C, p_max: usize) -> C {
    let mut s = ComplexSum::new();
    let mut zk = C::new(1.0, 0.0);
    for k in 0..=p_max {
        s.add(zk * (k as f64 + 1.0));
        zk *= z;
    }
    s.value()
}

/// `−(P+2) z^{P+1}/(1−z) + (1 − z^{P+2})/(1−z)²`, `z ≠ 1`.
pub fn derform_closed(z: C, p_max: usize) -> C {
    let one = C::new(1.0, 0.0);
    let pf = p_max as f64;
    -(pf + 2.0) * z.powu(p_max as u32 + 1) / (one - z) + (one - z.powu(p_max as u32 + 2)) / ((one - z) * (one - z))
}

/// `(2/L²) Σ_{k<L} (k+1)(1 + z/L)^k`.
pub fn h_partial(z: C, l: usize) -> C {
    let lf = l as f64;
    derform_sum(C::new(1.0, 0.0) + z / lf, l - 1) * (2.0 / (lf * lf))
}

/// Target of `K_n(z0, z0)` for area measure: `n² |z0|^{2m−2} / (2π r^{2m})`.
pub fn diagonal_target(n: usize, bp: &BoundaryPoint, p: &LemniscateParams) -> f64 {
    let nf = n as f64;
    nf * nf * bp.z0.norm().powi(2 * p.m as i32 - 2) / (2.0 * std::f64::consts::PI * p.rho() * p.rho())
}
