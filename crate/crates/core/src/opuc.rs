//! Orthogonal polynomials on the unit circle.
//!
//! Weights of the form `N · g(θ) · e^{(π−θ)τ} · sin(θ/2)^{2γ}` (density against
//! dθ/2π), their trigonometric moments, monic orthogonal polynomials from a
//! Cholesky factorization of the Toeplitz Gram matrix, Verblunsky
//! coefficients, Szegő recursion, reproducing kernels and Christoffel
//! functions.
//!
//! Inner product convention: `⟨z^j, z^k⟩ = ∫ z^j conj(z^k) dμ = c_{k−j}`.

use std::f64::consts::PI;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperfun::gamma_complex;
use crate::linalg::{cholesky, invert_lower, lu_solve, CMatrix};
use crate::quadrature::{circle_moments, QuadConfig, SingularDensity};
use crate::scalar::{ComplexSum, Real};

/// `g(θ) = cos[0] + Σ_{k≥1} (cos[k] cos kθ + sin[k] sin kθ)`; `sin[0]` is ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigPolynomial {
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { cos, sin }
    }

    /// `2 + cos θ`.
    pub fn two_plus_cos() -> Self {
        Self { cos: vec![2.0, 1.0], sin: vec![] }
    }

    /// Trigonometric interpolant of samples at `θ_j = 2πj/N`.
    pub fn interpolate(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n < 3 {
            return Err(Error::InvalidParameter("need at least 3 samples".into()));
        }
        let half = n / 2;
        let mut cos = vec![0.0; half + 1];
        let mut sin = vec![0.0; half + 1];
        for (j, &f) in samples.iter().enumerate() {
            let t = 2.0 * PI * j as f64 / n as f64;
            for k in 0..=half {
                cos[k] += f * (k as f64 * t).cos();
                sin[k] += f * (k as f64 * t).sin();
            }
        }
        for k in 0..=half {
            let nyquist = n % 2 == 0 && k == half;
            let scale = if k == 0 || nyquist { 1.0 } else { 2.0 } / n as f64;
            cos[k] *= scale;
            sin[k] = if k == 0 || nyquist { 0.0 } else { sin[k] * scale };
        }
        Ok(Self { cos, sin })
    }

    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len()).saturating_sub(1)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut s = self.cos.first().copied().unwrap_or(0.0);
        for k in 1..=self.degree() {
            let (sk, ck) = (k as f64 * theta).sin_cos();
            s += self.cos.get(k).copied().unwrap_or(0.0) * ck
                + self.sin.get(k).copied().unwrap_or(0.0) * sk;
        }
        s
    }

    /// Coefficient `ĝ_k` of `e^{ikθ}`.
    pub fn fourier(&self, k: i64) -> Complex<f64> {
        let a = |j: usize| self.cos.get(j).copied().unwrap_or(0.0);
        let b = |j: usize| self.sin.get(j).copied().unwrap_or(0.0);
        let j = k.unsigned_abs() as usize;
        match k.signum() {
            0 => Complex::new(a(0), 0.0),
            1 => Complex::new(a(j), -b(j)) / 2.0,
            _ => Complex::new(a(j), b(j)) / 2.0,
        }
    }
}

/// Smooth positive factor `g` multiplying the singular part of the weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothFactor {
    One,
    Trig(TrigPolynomial),
    /// Positive samples at `θ_j = 2πj/N`; evaluated through the trigonometric interpolant.
    Tabulated { samples: Vec<f64> },
}

impl SmoothFactor {
    /// Trigonometric polynomial representation.
    pub fn as_trig(&self) -> Result<TrigPolynomial> {
        match self {
            SmoothFactor::One => Ok(TrigPolynomial::new(vec![1.0], vec![])),
            SmoothFactor::Trig(p) => Ok(p.clone()),
            SmoothFactor::Tabulated { samples } => TrigPolynomial::interpolate(samples),
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            SmoothFactor::One => 1.0,
            SmoothFactor::Trig(p) => p.eval(theta),
            SmoothFactor::Tabulated { .. } => {
                self.as_trig().map(|p| p.eval(theta)).unwrap_or(f64::NAN)
            }
        }
    }

    fn tag(&self) -> String {
        match self {
            SmoothFactor::One => String::new(),
            SmoothFactor::Trig(p) => format!("*trig{:?}{:?}", p.cos, p.sin),
            SmoothFactor::Tabulated { samples } => format!("*tab{}", samples.len()),
        }
    }
}

/// Circle weight `N · g(θ) · e^{(π−θ)τ} · sin(θ/2)^{2γ}` against dθ/2π, with
/// `N = 4^γ |Γ(1+γ+iτ)|² / Γ(2γ+1)` so that `g ≡ 1` gives a probability measure.
///
/// The singular part of the measure is always zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleWeight {
    pub gamma: f64,
    pub tau: f64,
    pub g: SmoothFactor,
}

impl CircleWeight {
    pub fn new(gamma: f64, tau: f64, g: SmoothFactor) -> Result<Self> {
        let w = Self { gamma, tau, g };
        w.validate()?;
        Ok(w)
    }

    pub fn hua_pickrell(gamma: f64, tau: f64) -> Result<Self> {
        Self::new(gamma, tau, SmoothFactor::One)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > -0.5) || !self.gamma.is_finite() || !self.tau.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weight needs finite γ > −1/2 and finite τ, got γ = {}, τ = {}",
                self.gamma, self.tau
            )));
        }
        if let SmoothFactor::Tabulated { samples } = &self.g {
            if samples.iter().any(|s| !(*s > 0.0)) {
                return Err(Error::InvalidParameter("tabulated g must be positive".into()));
            }
        }
        let p = self.g.as_trig()?;
        let worst = (0..4096).map(|j| p.eval(2.0 * PI * j as f64 / 4096.0)).fold(f64::INFINITY, f64::min);
        if !(worst > 0.0) || !(p.eval(0.0) > 0.0) {
            return Err(Error::InvalidParameter(format!("g must be positive, min ≈ {worst}")));
        }
        Ok(())
    }

    /// `4^γ |Γ(1+γ+iτ)|² / Γ(2γ+1)`.
    pub fn normalization(&self) -> f64 {
        let g = gamma_complex(Complex::new(1.0 + self.gamma, self.tau)).expect("γ > −1/2");
        let d = gamma_complex(Complex::new(2.0 * self.gamma + 1.0, 0.0)).expect("γ > −1/2");
        4f64.powf(self.gamma) * g.norm_sqr() / d.re
    }

    /// Density against dθ/2π at `θ ∈ [0, 2π]`; `+∞` at the endpoints when γ < 0.
    pub fn density(&self, theta: f64) -> f64 {
        self.normalization() * self.g.eval(theta) * ((PI - theta) * self.tau).exp()
            * (theta / 2.0).sin().abs().powf(2.0 * self.gamma)
    }

    pub fn g_at_zero(&self) -> f64 {
        self.g.eval(0.0)
    }

    pub fn tag(&self) -> String {
        format!("circle(gamma={},tau={}){}", self.gamma, self.tau, self.g.tag())
    }

    /// Density split for the endpoint-singular quadrature (`θ^{2γ}` factored out).
    pub fn with_singular_density<R>(&self, f: impl FnOnce(&SingularDensity<'_>) -> R) -> Result<R> {
        let norm = self.normalization();
        let trig = self.g.as_trig()?;
        let (gamma, tau) = (self.gamma, self.tau);
        let e = 2.0 * gamma;
        let regular = |t: f64| {
            // (sin(t/2)/t)^{2γ}, smooth at t = 0
            let r = if t.abs() < 1e-8 { 0.5 } else { (t / 2.0).sin() / t };
            r.powf(e)
        };
        let full = |t: f64| norm * trig.eval(t) * ((PI - t) * tau).exp() * (t / 2.0).sin().abs().powf(e);
        let left = |t: f64| norm * trig.eval(t) * ((PI - t) * tau).exp() * regular(t);
        let right = |t: f64| {
            let th = 2.0 * PI - t;
            norm * trig.eval(th) * ((PI - th) * tau).exp() * regular(t)
        };
        Ok(f(&SingularDensity { exponent: e, full: &full, left: &left, right: &right }))
    }
}

/// Trigonometric moments `c[k] = ∫ e^{−ikθ} w(θ) dθ/2π`, `k = 0..K`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<T> {
    pub c: Vec<Complex<T>>,
    pub precision_bits: u32,
    pub measure_tag: String,
}

impl<T: Real> MomentSequence<T> {
    pub fn new(c: Vec<Complex<T>>, measure_tag: impl Into<String>) -> Result<Self> {
        let m = Self { c, precision_bits: T::SIGNIFICAND_BITS, measure_tag: measure_tag.into() };
        m.check_invariants()?;
        Ok(m)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let c0 = self.c.first().ok_or_else(|| Error::InvariantViolation("empty moment sequence".into()))?;
        let tol = T::lit(1e-10) * c0.re.abs();
        if !(c0.re > T::zero()) || c0.im.abs() > tol {
            return Err(Error::InvariantViolation(format!(
                "c[0] must be real and positive, got {} + {}i",
                c0.re.as_f64(),
                c0.im.as_f64()
            )));
        }
        Ok(())
    }

    /// Largest available index `K`.
    pub fn max_index(&self) -> usize {
        self.c.len() - 1
    }

    /// `c_k` for any integer `k` with `|k| ≤ K`, using `c_{−k} = conj(c_k)`.
    pub fn at(&self, k: i64) -> Complex<T> {
        let j = k.unsigned_abs() as usize;
        if k >= 0 {
            self.c[j]
        } else {
            self.c[j].conj()
        }
    }

    /// Gram matrix `G_{jk} = c_{k−j}` of order `n + 1`.
    pub fn toeplitz(&self, n: usize) -> Result<CMatrix<T>> {
        if n > self.max_index() {
            return Err(Error::DegreeOutOfRange { requested: n, available: self.max_index() });
        }
        Ok(CMatrix::from_fn(n + 1, |j, k| self.at(k as i64 - j as i64)))
    }

    /// Moments of `factor · μ`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            c: self.c.iter().map(|c| *c * factor).collect(),
            precision_bits: self.precision_bits,
            measure_tag: format!("{}*{}", factor.as_f64(), self.measure_tag),
        }
    }
}

/// Moments by singularity-aware quadrature (binary64).
pub fn trig_moments(weight: &CircleWeight, k_max: usize, quad: &QuadConfig) -> Result<MomentSequence<f64>> {
    weight.validate()?;
    let c = weight.with_singular_density(|d| circle_moments(d, k_max, quad))??;
    MomentSequence::new(c, weight.tag())
}

/// Moments from the closed form of the `g ≡ 1` weight,
/// `c̃_k = (−y)_k / (1+ȳ)_k` with `y = γ + iτ`, convolved with the Fourier
/// coefficients of `g`. Exact up to rounding in `T`.
pub fn analytic_moments<T: Real>(weight: &CircleWeight, k_max: usize) -> Result<MomentSequence<T>> {
    weight.validate()?;
    let trig = weight.g.as_trig()?;
    let d = trig.degree();
    let y = Complex::new(T::lit(weight.gamma), T::lit(weight.tau));
    let one = T::one();
    let mut base = Vec::with_capacity(k_max + d + 1);
    base.push(Complex::new(one, T::zero()));
    for k in 0..k_max + d {
        let kf = T::from_count(k);
        let next = base[k] * (-y + kf) / (y.conj() + one + kf);
        base.push(next);
    }
    let at = |k: i64| {
        let j = k.unsigned_abs() as usize;
        if k >= 0 { base[j] } else { base[j].conj() }
    };
    let ghat: Vec<(i64, Complex<T>)> = (-(d as i64)..=d as i64)
        .map(|j| {
            let g = trig.fourier(j);
            (j, Complex::new(T::lit(g.re), T::lit(g.im)))
        })
        .filter(|(_, g)| !g.is_zero())
        .collect();
    let c = (0..=k_max as i64)
        .map(|k| {
            let mut s = ComplexSum::new();
            for (j, g) in &ghat {
                s.add(*g * at(k - j));
            }
            s.value()
        })
        .collect();
    MomentSequence::new(c, weight.tag())
}

/// Verblunsky coefficients `α_0..α_{n−1}` and leading coefficients `κ_0..κ_n`
/// of the orthonormal polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct VerblunskyCoefficients<T> {
    pub alpha: Vec<Complex<T>>,
    pub kappa: Vec<T>,
    pub measure_tag: String,
}

impl<T: Real> VerblunskyCoefficients<T> {
    /// Builds `κ` from `c_0` and `κ_{k+1} = κ_k / √(1 − |α_k|²)`.
    pub fn from_alpha(alpha: Vec<Complex<T>>, c0: T, measure_tag: impl Into<String>) -> Result<Self> {
        let mut kappa = Vec::with_capacity(alpha.len() + 1);
        kappa.push(T::one() / c0.sqrt());
        for (k, a) in alpha.iter().enumerate() {
            let rho2 = T::one() - a.norm_sqr();
            if !(rho2 > T::zero()) {
                return Err(Error::InvariantViolation(format!(
                    "|alpha_{k}| = {} is not below 1",
                    a.norm().as_f64()
                )));
            }
            kappa.push(kappa[k] / rho2.sqrt());
        }
        Ok(Self { alpha, kappa, measure_tag: measure_tag.into() })
    }

    /// No validation; for fixtures exercising [`Self::check_invariants`].
    pub fn from_raw_unchecked(alpha: Vec<Complex<T>>, kappa: Vec<T>, measure_tag: impl Into<String>) -> Self {
        Self { alpha, kappa, measure_tag: measure_tag.into() }
    }

    /// Highest degree with a known polynomial.
    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    pub fn check_invariants(&self) -> Result<()> {
        if self.kappa.len() != self.alpha.len() + 1 {
            return Err(Error::InvariantViolation("kappa must have one more entry than alpha".into()));
        }
        for (k, a) in self.alpha.iter().enumerate() {
            if !(a.norm() < T::one()) {
                return Err(Error::InvariantViolation(format!(
                    "|alpha_{k}| = {} is not below 1",
                    a.norm().as_f64()
                )));
            }
        }
        for k in 0..self.alpha.len() {
            let expect = self.kappa[k] / (T::one() - self.alpha[k].norm_sqr()).sqrt();
            let tol = T::lit(1e-10) * expect;
            if !(self.kappa[k] > T::zero()) || (self.kappa[k + 1] - expect).abs() > tol {
                return Err(Error::InvariantViolation(format!("kappa recursion broken at {k}")));
            }
        }
        Ok(())
    }

    fn require(&self, n: usize) -> Result<()> {
        if n > self.degree() {
            Err(Error::DegreeOutOfRange { requested: n, available: self.degree() })
        } else {
            Ok(())
        }
    }
}

/// Monic basis built from moments.
#[derive(Clone, Debug)]
pub struct OpucBasis<T> {
    pub verblunsky: VerblunskyCoefficients<T>,
    /// `monic[k]` holds the `k + 1` ascending coefficients of `Φ_k`.
    pub monic: Vec<Vec<Complex<T>>>,
    /// `1/L_kk` from the Cholesky factor, an independent estimate of `κ_k`.
    pub kappa_factor: Vec<T>,
    pub moments: MomentSequence<T>,
}

/// Cholesky of the Toeplitz Gram matrix of order `n + 1`; the rows of `L⁻¹`
/// are the orthonormal polynomials, rescaled here to monic form.
pub fn monic_from_moments<T: Real>(moms: &MomentSequence<T>, n: usize) -> Result<OpucBasis<T>> {
    let g = moms.toeplitz(n)?;
    let l = cholesky(&g)?;
    let li = invert_lower(&l);
    let mut monic = Vec::with_capacity(n + 1);
    let mut kappa_factor = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let lkk = l.get(k, k).re;
        kappa_factor.push(T::one() / lkk);
        let mut row: Vec<Complex<T>> = li.row(k)[..=k].iter().map(|v| *v * lkk).collect();
        row[k] = Complex::new(T::one(), T::zero());
        monic.push(row);
    }
    let alpha = (0..n).map(|k| -monic[k + 1][0].conj()).collect();
    let verblunsky = VerblunskyCoefficients::from_alpha(alpha, moms.c[0].re, moms.measure_tag.clone())?;
    Ok(OpucBasis { verblunsky, monic, kappa_factor, moments: moms.clone() })
}

impl<T: Real> OpucBasis<T> {
    pub fn max_degree(&self) -> usize {
        self.monic.len() - 1
    }

    /// `Φ_k(z)` by Horner from the coefficient table.
    pub fn eval_monic(&self, k: usize, z: Complex<T>) -> Complex<T> {
        horner(&self.monic[k], z)
    }

    /// `⟨Φ_i, Φ_j⟩` from the moments.
    pub fn inner(&self, i: usize, j: usize) -> Complex<T> {
        let mut s = ComplexSum::new();
        for (p, a) in self.monic[i].iter().enumerate() {
            for (q, b) in self.monic[j].iter().enumerate() {
                s.add(*a * b.conj() * self.moments.at(q as i64 - p as i64));
            }
        }
        s.value()
    }

    /// `max_{i≠j} |⟨Φ_i,Φ_j⟩| / (‖Φ_i‖‖Φ_j‖)` over degrees `≤ upto`.
    pub fn orthogonality_residual(&self, upto: usize) -> T {
        let upto = upto.min(self.max_degree());
        let norms: Vec<T> = (0..=upto).map(|i| self.inner(i, i).re.sqrt()).collect();
        let mut worst = T::zero();
        for i in 0..=upto {
            for j in 0..i {
                worst = worst.max(self.inner(i, j).norm() / (norms[i] * norms[j]));
            }
        }
        worst
    }
}

/// Verblunsky coefficients straight from the moments in O(n²) by the Szegő
/// recursion: `α_k = Σ_j conj(a_j) c_{j+1} / ‖Φ_k‖²` with `a_j` the
/// coefficients of `Φ_k`, and `‖Φ_{k+1}‖² = ‖Φ_k‖² (1 − |α_k|²)`.
pub fn verblunsky_from_moments<T: Real>(moms: &MomentSequence<T>, n: usize) -> Result<VerblunskyCoefficients<T>> {
    if n > moms.max_index() {
        return Err(Error::DegreeOutOfRange { requested: n, available: moms.max_index() });
    }
    let one = Complex::new(T::one(), T::zero());
    let mut phi = vec![one];
    let mut norm = moms.c[0].re;
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = ComplexSum::new();
        for (j, a) in phi.iter().enumerate() {
            s.add(a.conj() * moms.c[j + 1]);
        }
        let a = s.value() / norm;
        let shrink = T::one() - a.norm_sqr();
        if !(shrink > T::zero()) || !(norm > T::zero()) {
            return Err(Error::IndefiniteMatrix { order: k + 2, pivot: (norm * shrink).as_f64() });
        }
        // Φ_{k+1} = zΦ_k − conj(α_k) Φ_k*, Φ_k*(z) = Σ conj(a_{k−j}) z^j
        let mut next = vec![Complex::zero(); k + 2];
        for j in 0..=k {
            next[j + 1] = next[j + 1] + phi[j];
            next[j] = next[j] - a.conj() * phi[k - j].conj();
        }
        phi = next;
        norm = norm * shrink;
        alpha.push(a);
    }
    VerblunskyCoefficients::from_alpha(alpha, moms.c[0].re, moms.measure_tag.clone())
}

pub(crate) fn horner<T: Real>(coef: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coef.iter().rev().fold(Complex::zero(), |acc, c| acc * z + *c)
}

/// `(Φ_n(z), Φ_n*(z))` by the Szegő recursion
/// `Φ_{k+1} = zΦ_k − conj(α_k)Φ_k*`, `Φ*_{k+1} = Φ_k* − α_k z Φ_k`.
pub fn eval_phi_pair<T: Real>(vc: &VerblunskyCoefficients<T>, n: usize, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    vc.require(n)?;
    let mut phi = Complex::new(T::one(), T::zero());
    let mut star = phi;
    for a in &vc.alpha[..n] {
        let next = z * phi - a.conj() * star;
        star = star - *a * z * phi;
        phi = next;
    }
    Ok((phi, star))
}

/// A kernel value with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelEvaluation<T> {
    pub n: usize,
    pub z: Complex<T>,
    pub w: Complex<T>,
    pub value: Complex<T>,
    pub measure_tag: String,
    pub precision_bits: u32,
}

/// `K_n(z,w) = Σ_{m≤n} κ_m² Φ_m(z) conj(Φ_m(w))`, summed in increasing `m`.
pub fn kernel_direct<T: Real>(
    vc: &VerblunskyCoefficients<T>,
    n: usize,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<KernelEvaluation<T>> {
    vc.require(n)?;
    let one = Complex::new(T::one(), T::zero());
    let (mut pz, mut sz, mut pw, mut sw) = (one, one, one, one);
    let mut sum = ComplexSum::new();
    for m in 0..=n {
        let k2 = vc.kappa[m] * vc.kappa[m];
        sum.add(pz * pw.conj() * k2);
        if m < n {
            let a = vc.alpha[m];
            let nz = z * pz - a.conj() * sz;
            sz = sz - a * z * pz;
            pz = nz;
            let nw = w * pw - a.conj() * sw;
            sw = sw - a * w * pw;
            pw = nw;
        }
    }
    Ok(KernelEvaluation {
        n,
        z,
        w,
        value: sum.value(),
        measure_tag: vc.measure_tag.clone(),
        precision_bits: T::SIGNIFICAND_BITS,
    })
}

/// Closed-form threshold below which `|1 − z w̄|` is treated as diagonal.
pub const CD_DIAGONAL_GAP: f64 = 1e-8;

/// Christoffel–Darboux form
/// `κ_{n+1}² (Φ*_{n+1}(z) conj Φ*_{n+1}(w) − Φ_{n+1}(z) conj Φ_{n+1}(w)) / (1 − z w̄)`.
pub fn kernel_cd<T: Real>(
    vc: &VerblunskyCoefficients<T>,
    n: usize,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<KernelEvaluation<T>> {
    vc.require(n + 1)?;
    let gap = Complex::new(T::one(), T::zero()) - z * w.conj();
    if gap.norm() < T::lit(CD_DIAGONAL_GAP) {
        return Err(Error::NearDiagonal { gap: gap.norm().as_f64() });
    }
    let (pz, sz) = eval_phi_pair(vc, n + 1, z)?;
    let (pw, sw) = eval_phi_pair(vc, n + 1, w)?;
    let k2 = vc.kappa[n + 1] * vc.kappa[n + 1];
    let value = (sz * sw.conj() - pz * pw.conj()) * k2 / gap;
    Ok(KernelEvaluation { n, z, w, value, measure_tag: vc.measure_tag.clone(), precision_bits: T::SIGNIFICAND_BITS })
}

/// `λ_n(z) = 1 / K_n(z, z)`.
pub fn christoffel<T: Real>(vc: &VerblunskyCoefficients<T>, n: usize, z: Complex<T>) -> Result<T> {
    Ok(T::one() / kernel_direct(vc, n, z, z)?.value.re)
}

/// `1 / (vᴴ G⁻¹ v)` with `v = (1, z, …, zⁿ)`, solved by pivoted LU.
pub fn christoffel_oracle<T: Real>(moms: &MomentSequence<T>, n: usize, z: Complex<T>) -> Result<T> {
    let g = moms.toeplitz(n)?;
    let mut v = Vec::with_capacity(n + 1);
    let mut p = Complex::new(T::one(), T::zero());
    for _ in 0..=n {
        v.push(p);
        p = p * z;
    }
    // ‖Σ a_j z^j‖² = aᵀ G ā; orthonormal rows A satisfy A G Aᴴ = I, so
    // K(z,z) = ‖A v‖² = vᴴ G⁻¹ v.
    let x = lu_solve(&g, &v)?;
    let mut s = ComplexSum::new();
    for (vi, xi) in v.iter().zip(&x) {
        s.add(vi.conj() * *xi);
    }
    let k = s.value().re;
    if !(k > T::zero()) {
        return Err(Error::IndefiniteMatrix { order: n + 1, pivot: k.as_f64() });
    }
    Ok(T::one() / k)
}

/// `κ_n^{1/n}`; tends to `1/cap(supp μ) = 1` for regular measures on the circle.
pub fn regularity_diagnostic<T: Real>(vc: &VerblunskyCoefficients<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidParameter("regularity diagnostic needs n ≥ 1".into()));
    }
    vc.require(n)?;
    Ok(vc.kappa[n].powf(T::one() / T::from_count(n)))
}
