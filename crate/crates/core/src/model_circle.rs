//! Closed forms for the Hua–Pickrell weight and the confluent
//! hypergeometric limiting kernels on the circle.
//!
//! With `y = γ + iτ` and `c = 2γ + 1`:
//!
//! * `Φ_n(z)  = (c)_n/(1+y)_n · ₂F₁(−n, 1+y; c; 1−z)`
//! * `Φ_n*(z) = (c)_n/(1+ȳ)_n · ₂F₁(−n, y; c; 1−z)`
//! * `κ_n² = |(1+y)_n|² / (n! (c)_n)`, `α_n = −(y)_{n+1}/(1+ȳ)_{n+1}`
//!
//! Pochhammer ratios are accumulated factor by factor so that degrees in the
//! thousands do not overflow.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperfun::{gamma_complex, hyp1f1, hyp2f1_terminating};
use crate::opuc::{horner, kernel_direct, CircleWeight, KernelEvaluation, VerblunskyCoefficients};
use crate::scalar::{cis, Real};

type C = Complex<f64>;

/// Series tolerance used by the limiting-kernel evaluations.
pub const LIMIT_TOL: f64 = 1e-15;
/// `|b̄ − a|` below which the diagonal continuation is used.
pub const DIAGONAL_SWITCH: f64 = 1e-6;
/// `|1 − z w̄|` below which [`hp_kernel`] sums the kernel directly instead of
/// using the Christoffel–Darboux closed form.
pub const HP_CD_SWITCH: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HuaPickrellParams {
    pub gamma: f64,
    pub tau: f64,
}

impl HuaPickrellParams {
    pub fn new(gamma: f64, tau: f64) -> Result<Self> {
        if !(gamma > -0.5) || !gamma.is_finite() || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!("need γ > −1/2, got γ = {gamma}, τ = {tau}")));
        }
        Ok(Self { gamma, tau })
    }

    /// `y = γ + iτ`.
    pub fn y(&self) -> C {
        C::new(self.gamma, self.tau)
    }

    fn y_t<T: Real>(&self) -> Complex<T> {
        Complex::new(T::lit(self.gamma), T::lit(self.tau))
    }

    fn c_t<T: Real>(&self) -> T {
        T::lit(2.0 * self.gamma + 1.0)
    }

    pub fn weight(&self) -> CircleWeight {
        CircleWeight::hua_pickrell(self.gamma, self.tau).expect("validated parameters")
    }

    pub fn tag(&self) -> String {
        self.weight().tag()
    }
}

/// Density `4^γ |Γ(1+γ+iτ)|²/Γ(2γ+1) · e^{(π−θ)τ} sin(θ/2)^{2γ}` against dθ/2π.
pub fn hp_weight(theta: f64, p: &HuaPickrellParams) -> f64 {
    p.weight().density(theta)
}

/// `Π_{k<n} (c+k)/(d+k)`.
fn pochhammer_ratio<T: Real>(c: Complex<T>, d: Complex<T>, n: usize) -> Complex<T> {
    let mut r = Complex::new(T::one(), T::zero());
    for k in 0..n {
        let kf = T::from_count(k);
        r = r * (c + kf) / (d + kf);
    }
    r
}

/// `n |1 − z|` up to which the hypergeometric series in `1 − z` is summed
/// directly. Beyond it the series cancels like `e^{n|1−z|}` and the
/// polynomial is evaluated from its coefficients instead.
pub const SERIES_REACH: f64 = 4.0;

fn use_series<T: Real>(n: usize, z: Complex<T>) -> bool {
    let x = Complex::new(T::one(), T::zero()) - z;
    (x.norm() * T::from_count(n)).as_f64() <= SERIES_REACH
}

/// `Φ_n(z)` from the terminating ₂F₁ in `1 − z`, irrespective of conditioning.
pub fn hp_monic_series<T: Real>(n: usize, z: Complex<T>, p: &HuaPickrellParams) -> Result<Complex<T>> {
    let y = p.y_t::<T>();
    let c = Complex::new(p.c_t::<T>(), T::zero());
    let one = T::one();
    let pre = pochhammer_ratio(c, y + one, n);
    Ok(pre * hyp2f1_terminating(n, y + one, c, Complex::new(one, T::zero()) - z)?)
}

/// `Φ_n*(z)` from the terminating ₂F₁ in `1 − z`.
pub fn hp_star_series<T: Real>(n: usize, z: Complex<T>, p: &HuaPickrellParams) -> Result<Complex<T>> {
    let y = p.y_t::<T>();
    let c = Complex::new(p.c_t::<T>(), T::zero());
    let one = T::one();
    let pre = pochhammer_ratio(c, y.conj() + one, n);
    Ok(pre * hyp2f1_terminating(n, y, c, Complex::new(one, T::zero()) - z)?)
}

/// Monic Hua–Pickrell polynomial `Φ_n(z)`.
pub fn hp_monic<T: Real>(n: usize, z: Complex<T>, p: &HuaPickrellParams) -> Result<Complex<T>> {
    if use_series(n, z) {
        return hp_monic_series(n, z, p);
    }
    Ok(horner(&hp_monic_coefficients(n, p), z))
}

/// Reversed polynomial `Φ_n*(z) = z^n conj(Φ_n(1/z̄))`.
pub fn hp_star<T: Real>(n: usize, z: Complex<T>, p: &HuaPickrellParams) -> Result<Complex<T>> {
    if use_series(n, z) {
        return hp_star_series(n, z, p);
    }
    let rev: Vec<Complex<T>> = hp_monic_coefficients(n, p).iter().rev().map(|a| a.conj()).collect();
    Ok(horner(&rev, z))
}

/// `κ_n = |(1+y)_n| / √(n! (c)_n)`.
pub fn hp_kappa<T: Real>(n: usize, p: &HuaPickrellParams) -> T {
    let y = p.y_t::<T>();
    let c = p.c_t::<T>();
    let one = T::one();
    let mut k2 = one;
    for k in 0..n {
        let kf = T::from_count(k);
        k2 = k2 * (y + one + kf).norm_sqr() / ((kf + one) * (c + kf));
    }
    k2.sqrt()
}

/// Ascending coefficients of the monic `Φ_n`.
///
/// From the hypergeometric form, consecutive coefficients satisfy
/// `a_j = a_{j+1} (j+1)(j+1−n−ȳ) / ((j−n)(1+y+j))`, started at `a_n = 1`.
pub fn hp_monic_coefficients<T: Real>(n: usize, p: &HuaPickrellParams) -> Vec<Complex<T>> {
    let y = p.y_t::<T>();
    let one = T::one();
    let nf = T::from_count(n);
    let mut a = vec![Complex::zero(); n + 1];
    a[n] = Complex::new(one, T::zero());
    for j in (0..n).rev() {
        let jf = T::from_count(j);
        let num = (-y.conj() - nf + one + jf) * (jf + one);
        let den = (y + one + jf) * (jf - nf);
        a[j] = a[j + 1] * num / den;
    }
    a
}

/// `α_k = −(y)_{k+1}/(1+ȳ)_{k+1}` for `k < n`, with `κ` from `c_0 = 1`.
pub fn hp_verblunsky<T: Real>(n: usize, p: &HuaPickrellParams) -> VerblunskyCoefficients<T> {
    let y = p.y_t::<T>();
    let one = T::one();
    let mut ratio = Complex::new(one, T::zero());
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        let kf = T::from_count(k);
        ratio = ratio * (y + kf) / (y.conj() + one + kf);
        alpha.push(-ratio);
    }
    VerblunskyCoefficients::from_alpha(alpha, one, p.tag()).expect("|α_k| < 1 for γ > −1/2")
}

/// `K_n(z, w)` of the Hua–Pickrell weight in O(n).
///
/// Off the diagonal this is the Christoffel–Darboux form built from the
/// closed-form `Φ_{n+1}`, `Φ*_{n+1}` and `κ_{n+1}`; when `|1 − z w̄|` is below
/// [`HP_CD_SWITCH`] it sums the series through the Szegő recursion driven by
/// the closed-form Verblunsky coefficients.
pub fn hp_kernel<T: Real>(
    n: usize,
    z: Complex<T>,
    w: Complex<T>,
    p: &HuaPickrellParams,
) -> Result<KernelEvaluation<T>> {
    let one = Complex::new(T::one(), T::zero());
    let gap = one - z * w.conj();
    if gap.norm() < T::lit(HP_CD_SWITCH) {
        return kernel_direct(&hp_verblunsky(n, p), n, z, w);
    }
    let k = hp_kappa::<T>(n + 1, p);
    let (pz, pw) = (hp_monic(n + 1, z, p)?, hp_monic(n + 1, w, p)?);
    let (sz, sw) = (hp_star(n + 1, z, p)?, hp_star(n + 1, w, p)?);
    let value = (sz * sw.conj() - pz * pw.conj()) * (k * k) / gap;
    Ok(KernelEvaluation { n, z, w, value, measure_tag: p.tag(), precision_bits: T::SIGNIFICAND_BITS })
}

/// `K_n(1,1) = (2γ+2)_n / n!`, as a running product.
pub fn hp_kernel_at_one(n: usize, gamma: f64) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (2.0 * gamma + 2.0 + k as f64) / (k as f64 + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelBranch {
    Generic,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitKernelValue {
    pub value: C,
    pub branch: KernelBranch,
}

fn f11(a: C, b: C, z: C) -> Result<C> {
    Ok(hyp1f1(a, b, z, LIMIT_TOL)?.value)
}

/// The limiting kernel
/// `c [F(ȳ;c;−ib̄)F(y;c;ia) − F(1+ȳ;c;−ib̄)F(1+y;c;ia)] / (i(b̄ − a))`,
/// `F = ₁F₁`, `c = 2γ+1`. Near `a = b̄` the removable singularity is
/// resolved by [`diagonal_value`] plus a Taylor correction in `b̄ − a`.
pub fn limit_kernel(a: C, b: C, p: &HuaPickrellParams) -> Result<LimitKernelValue> {
    let y = p.y();
    let yb = y.conj();
    let c = C::new(2.0 * p.gamma + 1.0, 0.0);
    let i = C::i();
    let one = C::new(1.0, 0.0);
    let bb = b.conj();
    let delta = bb - a;
    if delta.norm() >= DIAGONAL_SWITCH {
        let num = f11(yb, c, -i * bb)? * f11(y, c, i * a)? - f11(yb + one, c, -i * bb)? * f11(y + one, c, i * a)?;
        return Ok(LimitKernelValue { value: c * num / (i * delta), branch: KernelBranch::Generic });
    }
    Ok(LimitKernelValue { value: diagonal_expansion(a, b, p)?, branch: KernelBranch::Diagonal })
}

/// Third-order expansion of the limiting kernel about `b̄ = a`:
/// `(1/i) Σ_{j=1}^{3} ∂_β^j N(a, a) (b̄ − a)^{j−1}/j!`, `N(a, β)` the numerator.
fn diagonal_expansion(a: C, b: C, p: &HuaPickrellParams) -> Result<C> {
    let y = p.y();
    let yb = y.conj();
    let c = C::new(2.0 * p.gamma + 1.0, 0.0);
    let i = C::i();
    let one = C::new(1.0, 0.0);
    let delta = b.conj() - a;
    let mut value = diagonal_value(a, p)?;
    if !delta.is_zero() {
        let (fa, f1a) = (f11(y, c, i * a)?, f11(y + one, c, i * a)?);
        let (mut poch_y, mut poch_y1, mut poch_c) = (yb, yb + one, c);
        let (mut fact, mut mi) = (1.0, -i);
        for j in 2..=3u32 {
            let jf = f64::from(j);
            poch_y *= yb + jf - 1.0;
            poch_y1 *= yb + jf;
            poch_c *= c + jf - 1.0;
            fact *= jf;
            mi *= -i;
            let d = c * mi
                * (poch_y / poch_c * f11(yb + jf, c + jf, -i * a)? * fa
                    - poch_y1 / poch_c * f11(yb + one + jf, c + jf, -i * a)? * f1a);
            value += d * delta.powu(j - 1) / (i * fact);
        }
    }
    Ok(value)
}

/// Continuation of the limiting kernel to `b̄ = a`:
/// `(1+y) F(1+ȳ; c; −ia) F(2+y; c+1; ia) − y F(ȳ; c; −ia) F(1+y; c+1; ia)`.
pub fn diagonal_value(a: C, p: &HuaPickrellParams) -> Result<C> {
    let y = p.y();
    let yb = y.conj();
    let c = C::new(2.0 * p.gamma + 1.0, 0.0);
    let one = C::new(1.0, 0.0);
    let i = C::i();
    Ok((one + y) * f11(one + yb, c, -i * a)? * f11(y + 2.0, c + one, i * a)?
        - y * f11(yb, c, -i * a)? * f11(one + y, c + one, i * a)?)
}

/// `T(a)` for real `a`: the diagonal value at `τ = 0`.
pub fn t_func(a: f64, gamma: f64) -> Result<f64> {
    let p = HuaPickrellParams::new(gamma, 0.0)?;
    Ok(diagonal_value(C::new(a, 0.0), &p)?.re)
}

/// `Θ(a) = F(1+γ; 2γ+1; ia) / F(γ; 2γ+1; ia)`.
///
/// For `Im a < 0` the value is taken as `1 / conj(Θ(ā))`, which avoids the
/// zeros of the denominator in the lower half-plane.
pub fn theta_ratio(a: C, gamma: f64) -> Result<C> {
    if a.im < 0.0 {
        let up = theta_ratio(a.conj(), gamma)?;
        if up.norm() < 1e-13 {
            return Err(Error::NearZeroDivision(up.norm()));
        }
        return Ok(C::new(1.0, 0.0) / up.conj());
    }
    let c = C::new(2.0 * gamma + 1.0, 0.0);
    let i = C::i();
    let den = f11(C::new(gamma, 0.0), c, i * a)?;
    if den.norm() < 1e-13 {
        return Err(Error::NearZeroDivision(den.norm()));
    }
    Ok(f11(C::new(1.0 + gamma, 0.0), c, i * a)? / den)
}

/// `|E(z)| − |E(z̄)|` with `E(z) = F(γ+iτ; 2γ+1; iz) e^{−iz/2}`.
pub fn hb_margin(z: C, p: &HuaPickrellParams) -> Result<f64> {
    let c = C::new(2.0 * p.gamma + 1.0, 0.0);
    let i = C::i();
    let e = |x: C| -> Result<f64> { Ok((f11(p.y(), c, i * x)? * (-i * x / 2.0).exp()).norm()) };
    Ok(e(z)? - e(z.conj())?)
}

/// `sup_{n ≥ n_min, |a| ≤ radius} n |e^{ia/n} − 1| = n_min (e^{radius/n_min} − 1)`.
pub fn fbound_constant(radius: f64, n_min: usize) -> f64 {
    let n = n_min.max(1) as f64;
    n * (radius / n).exp_m1()
}

/// Whether `|₂F₁(−m, 1+y; c; 1−e^{ia/n})| ≤ ₂F₁(−n, 1+|y|; c; −C_K/n)`.
pub fn fbound_check(a: C, n: usize, m: usize, p: &HuaPickrellParams, ck: f64) -> Result<bool> {
    let (lhs, rhs) = fbound_sides(a, n, m, p, ck)?;
    Ok(lhs <= rhs * (1.0 + 1e-12))
}

/// Both sides of the bound checked by [`fbound_check`].
pub fn fbound_sides(a: C, n: usize, m: usize, p: &HuaPickrellParams, ck: f64) -> Result<(f64, f64)> {
    if m > n {
        return Err(Error::InvalidParameter(format!("need m ≤ n, got m = {m}, n = {n}")));
    }
    let c = C::new(2.0 * p.gamma + 1.0, 0.0);
    let one = C::new(1.0, 0.0);
    let z = (C::i() * a / n as f64).exp();
    let lhs = hyp2f1_terminating(m, one + p.y(), c, one - z)?.norm();
    let rhs = hyp2f1_terminating(n, one + p.y().norm(), c, C::new(-ck / n as f64, 0.0))?.re;
    Ok((lhs, rhs))
}

/// `sup_{n ≥ n_min, |a| ≤ radius} |(e^{−ia/n} − 1)/(−ia/n)| = n_min (e^{radius/n_min} − 1)/radius`.
pub fn or_constant(radius: f64, n_min: usize) -> f64 {
    if radius == 0.0 {
        return 1.0;
    }
    fbound_constant(radius, n_min) / radius
}

/// `(|(e^{iθ} + e^{ia/n}) / (2e^{ia/n})|^{rn}, e^{C_K r |a|/2})`.
pub fn or_sides(theta: f64, a: C, n: usize, r: f64, ck: f64) -> (f64, f64) {
    let e = (C::i() * a / n as f64).exp();
    let base = ((cis(theta) + e) / (e * 2.0)).norm();
    (base.powf(r * n as f64), (ck * r * a.norm() / 2.0).exp())
}

/// `(2γ+1)(|F(γ; c; ia)|² − |F(1+γ; c; ia)|²)/(2 Im a)`, or `T(a)` for real `a`.
pub fn zeroo_quotient(a: C, gamma: f64) -> Result<f64> {
    if a.im == 0.0 {
        return t_func(a.re, gamma);
    }
    let c = C::new(2.0 * gamma + 1.0, 0.0);
    let i = C::i();
    let f0 = f11(C::new(gamma, 0.0), c, i * a)?.norm_sqr();
    let f1 = f11(C::new(1.0 + gamma, 0.0), c, i * a)?.norm_sqr();
    Ok(c.re * (f0 - f1) / (2.0 * a.im))
}

/// Limit of `n^{2γ+1} λ_n(e^{ia/n})` for the Hua–Pickrell weight:
/// `Γ(2γ+2) / L(a, a)` with `L` the limiting kernel.
pub fn christoffel_limit(a: C, p: &HuaPickrellParams) -> Result<f64> {
    let g = gamma_complex(C::new(2.0 * p.gamma + 2.0, 0.0))?.re;
    Ok(g / limit_kernel(a, a, p)?.value.re)
}
