//! Complex special functions: rising factorials, Γ, the confluent
//! hypergeometric ₁F₁ and the terminating Gauss ₂F₁.
//!
//! Every routine is generic over [`Real`], so the same code serves binary64
//! evaluations and 113-bit oracle evaluations.

use std::ops::{Add, Mul};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{lift, lower, ComplexSum, Real};

/// Default relative tolerance of the ₁F₁ series stopping rule.
pub const DEFAULT_TOL: f64 = 1e-14;
/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 1_000_000;
/// `|z|` beyond which a series with `Re z < 0` is evaluated through Kummer's transform.
pub const KUMMER_RADIUS: f64 = 8.0;

/// A summed series together with bookkeeping about its truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    pub terms_used: usize,
    /// Estimated magnitude of the discarded tail (zero for terminating series).
    pub truncation_bound: T,
}

/// `(v)_n = v (v+1) ⋯ (v+n−1)`, with `(v)_0 = 1`.
///
/// Only ring operations are used, so exact types (rationals, Gaussian
/// rationals) give exact results.
pub fn rising_factorial<T>(v: T, n: usize) -> T
where
    T: Clone + One + Add<Output = T> + Mul<Output = T>,
{
    let mut acc = T::one();
    let mut factor = v;
    for _ in 0..n {
        acc = acc * factor.clone();
        factor = factor + T::one();
    }
    acc
}

fn is_nonpositive_integer<T: Real>(z: Complex<T>) -> bool {
    z.im.is_zero() && z.re <= T::zero() && z.re == z.re.round()
}

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex `z`.
///
/// Lanczos rational approximation for `Re z ≥ 1/2`, reflection otherwise.
/// The coefficient table is double precision, so results carry about 15
/// significant digits regardless of `T`.
pub fn gamma_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re.as_f64()));
    }
    let half = T::lit(0.5);
    let pi = T::PI();
    if z.re < half {
        // Γ(z) Γ(1−z) = π / sin(πz)
        let one = Complex::new(T::one(), T::zero());
        let g = gamma_complex(one - z)?;
        let s = (z * pi).sin();
        return Ok(Complex::new(pi, T::zero()) / (s * g));
    }
    let zm1 = z - T::one();
    let mut x = Complex::new(T::lit(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x = x + Complex::new(T::lit(c), T::zero()) / (zm1 + T::from_count(i));
    }
    let t = zm1 + T::lit(LANCZOS_G) + half;
    let log_val = (zm1 + half) * t.ln() - t + x.ln() + (T::lit(2.0) * pi).sqrt().ln();
    Ok(log_val.exp())
}

/// Options controlling series summation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesOptions<T> {
    /// Relative stopping tolerance.
    pub tol: T,
    pub max_terms: usize,
    /// Apply Kummer's transform when `Re z < 0` and `|z|` exceeds [`KUMMER_RADIUS`].
    pub kummer: bool,
}

impl<T: Real> Default for SeriesOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(DEFAULT_TOL), max_terms: MAX_TERMS, kummer: true }
    }
}

/// ₁F₁(a; b; z) with the default series options and the given tolerance.
pub fn hyp1f1<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    z: Complex<T>,
    tol: T,
) -> Result<SeriesValue<T>> {
    hyp1f1_with(a, b, z, &SeriesOptions { tol, ..SeriesOptions::default() })
}

/// ₁F₁ evaluated in binary128 and rounded back to binary64.
pub fn hyp1f1_extended(
    a: Complex<f64>,
    b: Complex<f64>,
    z: Complex<f64>,
    tol: f64,
) -> Result<SeriesValue<f64>> {
    let v = hyp1f1::<f128::f128>(lift(a), lift(b), lift(z), f128::f128::lit(tol))?;
    Ok(SeriesValue {
        value: lower(v.value),
        terms_used: v.terms_used,
        truncation_bound: v.truncation_bound.as_f64(),
    })
}

/// ₁F₁(a; b; z) = Σ (a)_k z^k / ((b)_k k!).
///
/// Summation stops once three consecutive terms are each no larger than
/// `tol · |partial sum|`.
pub fn hyp1f1_with<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    z: Complex<T>,
    opts: &SeriesOptions<T>,
) -> Result<SeriesValue<T>> {
    if is_nonpositive_integer(b) {
        return Err(Error::ParameterPole(format!(
            "1F1 lower parameter b = {} is a nonpositive integer",
            b.re.as_f64()
        )));
    }
    if opts.kummer && z.re < T::zero() && z.norm() > T::lit(KUMMER_RADIUS) {
        // ₁F₁(a; b; z) = e^z ₁F₁(b − a; b; −z)
        let inner = hyp1f1_series(b - a, b, -z, opts)?;
        let scale = z.exp();
        return Ok(SeriesValue {
            value: inner.value * scale,
            terms_used: inner.terms_used,
            truncation_bound: inner.truncation_bound * scale.norm(),
        });
    }
    hyp1f1_series(a, b, z, opts)
}

fn hyp1f1_series<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    z: Complex<T>,
    opts: &SeriesOptions<T>,
) -> Result<SeriesValue<T>> {
    let one = T::one();
    let mut term = Complex::new(one, T::zero());
    let mut sum = ComplexSum::new();
    sum.add(term);
    if z.is_zero() {
        return Ok(SeriesValue { value: term, terms_used: 1, truncation_bound: T::zero() });
    }
    let mut small_run = 0;
    for k in 0..opts.max_terms {
        let kf = T::from_count(k);
        let num = a + kf;
        term = term * num * z / ((b + kf) * (kf + one));
        sum.add(term);
        let partial = sum.value();
        let mag = term.norm();
        if mag <= opts.tol * partial.norm() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run == 3 {
            let bound = if mag.is_zero() {
                T::zero()
            } else {
                let k1 = kf + one;
                let q = ((a + k1) * z / ((b + k1) * (k1 + one))).norm();
                if q < T::lit(0.5) {
                    mag * q / (one - q)
                } else {
                    mag
                }
            };
            return Ok(SeriesValue { value: partial, terms_used: k + 2, truncation_bound: bound });
        }
    }
    Err(Error::NonConvergence { max_terms: opts.max_terms })
}

/// Terminating ₂F₁(−n, b; c; z) = Σ_{k=0}^{n} (−n)_k (b)_k z^k / ((c)_k k!).
///
/// Summed in increasing `k` with compensated accumulation.
pub fn hyp2f1_terminating<T: Real>(
    n: usize,
    b: Complex<T>,
    c: Complex<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    if is_nonpositive_integer(c) && (-c.re).as_f64() < n as f64 {
        return Err(Error::ParameterPole(format!(
            "2F1 lower parameter c = {} meets (c)_k = 0 within k ≤ {n}",
            c.re.as_f64()
        )));
    }
    let one = T::one();
    let mut term = Complex::new(one, T::zero());
    let mut sum = ComplexSum::new();
    sum.add(term);
    if z.is_zero() {
        return Ok(term);
    }
    let nf = T::from_count(n);
    for k in 0..n {
        let kf = T::from_count(k);
        term = term * (b + kf) * z * (kf - nf) / ((c + kf) * (kf + one));
        sum.add(term);
    }
    Ok(sum.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(c(0.3, -2.0), 0), c(1.0, 0.0));
        assert_eq!(rising_factorial(2.0_f64, 3), 24.0);
        assert_eq!(rising_factorial(c(0.0, 1.0), 2), c(-1.0, 1.0));
    }

    #[test]
    fn rising_factorial_recurrence_is_exact_over_rationals() {
        let v = BigRational::new(BigInt::from(-7), BigInt::from(3));
        for n in 0..25 {
            let lhs = rising_factorial(v.clone(), n + 1);
            let step = v.clone() + BigRational::from_integer(BigInt::from(n as i64));
            let rhs = rising_factorial(v.clone(), n) * step;
            assert_eq!(lhs, rhs);
        }
        // Gaussian rationals through Complex<BigRational>
        let g = Complex::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-3), BigInt::from(5)),
        );
        let one = Complex::new(BigRational::from_integer(1.into()), BigRational::from_integer(0.into()));
        let lhs = rising_factorial(g.clone(), 6);
        let rhs = rising_factorial(g.clone(), 5) * (g + one.clone() + one.clone() + one.clone() + one.clone() + one);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_values() {
        assert_relative_eq!(gamma_complex(c(1.0, 0.0)).unwrap().re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_complex(c(5.0, 0.0)).unwrap().re, 24.0, max_relative = 1e-14);
        // reflection at z = 1/2: Γ(1/2)² = π / sin(π/2)
        let oracle = std::f64::consts::PI.sqrt();
        assert_relative_eq!(gamma_complex(c(0.5, 0.0)).unwrap().re, oracle, max_relative = 1e-13);
        assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(Error::GammaPole(_))));
        assert!(matches!(gamma_complex(c(0.0, 0.0)), Err(Error::GammaPole(_))));
    }

    #[test]
    fn gamma_duplication_formula() {
        // Γ(z)Γ(z+1/2) = 2^{1−2z} √π Γ(2z)
        for &(x, y) in &[(0.3, 0.2), (2.7, -4.0), (-1.4, 3.1), (7.5, 11.0)] {
            let z = c(x, y);
            let lhs = gamma_complex(z).unwrap() * gamma_complex(z + 0.5).unwrap();
            let two: C = c(2.0, 0.0);
            let rhs = two.powc(c(1.0, 0.0) - z * 2.0)
                * std::f64::consts::PI.sqrt()
                * gamma_complex(z * 2.0).unwrap();
            assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn gamma_on_imaginary_line_matches_modulus_identity() {
        // |Γ(iy)|² = π / (y sinh(πy))
        for &y in &[0.5, 1.0, 3.0, 10.0] {
            let g = gamma_complex(c(0.0, y)).unwrap();
            let oracle = std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh());
            assert_relative_eq!(g.norm_sqr(), oracle, max_relative = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn gamma_recurrence(x in -5.0f64..20.0, y in -20.0f64..20.0) {
            prop_assume!(y.abs() > 1e-3 || (x - x.round()).abs() > 1e-3);
            let z = c(x, y);
            let lhs = gamma_complex(z + 1.0).unwrap();
            let rhs = z * gamma_complex(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm());
        }

        #[test]
        fn kummer_transform(
            ar in -3.0f64..3.0, ai in -3.0f64..3.0,
            br in 0.5f64..4.0, bi in -2.0f64..2.0,
            zr in -6.0f64..6.0, zi in -6.0f64..6.0,
        ) {
            // binary128 keeps the series cancellation far below the test tolerance
            type Q = f128::f128;
            let (a, b, z): (Complex<Q>, Complex<Q>, Complex<Q>) =
                (lift(c(ar, ai)), lift(c(br, bi)), lift(c(zr, zi)));
            let opts = SeriesOptions { tol: Q::lit(1e-32), kummer: false, ..SeriesOptions::default() };
            let lhs = hyp1f1_with(a, b, z, &opts).unwrap().value;
            let rhs = z.exp() * hyp1f1_with(b - a, b, -z, &opts).unwrap().value;
            let err = (lhs - rhs).norm().as_f64();
            prop_assert!(err <= 1e-24 * lhs.norm().as_f64().max(1.0));
        }

        #[test]
        fn conjugation_symmetry_for_real_parameters(
            s in -3.0f64..3.0, t in 0.3f64..5.0, zr in -7.0f64..7.0, zi in -7.0f64..7.0,
        ) {
            let z = c(zr, zi);
            let f = hyp1f1(c(s, 0.0), c(t, 0.0), z, 1e-15).unwrap().value;
            let g = hyp1f1(c(s, 0.0), c(t, 0.0), z.conj(), 1e-15).unwrap().value;
            prop_assert!((f.conj() - g).norm() <= 1e-12 * f.norm().max(1.0));
        }
    }

    #[test]
    fn hyp1f1_examples() {
        let z = c(1.7, -0.4);
        let v = hyp1f1(c(0.0, 0.0), c(1.0, 0.0), z, 1e-14).unwrap();
        assert_eq!(v.value, c(1.0, 0.0));
        assert_eq!(v.truncation_bound, 0.0);

        let a = c(0.4, 1.2);
        let v = hyp1f1(a, a, z, 1e-15).unwrap();
        assert!((v.value - z.exp()).norm() < 1e-14 * z.exp().norm());

        // 2 (e^t (t−1) + 1)/t² at t = 1 equals 2
        let v = hyp1f1(c(2.0, 0.0), c(3.0, 0.0), c(1.0, 0.0), 1e-15).unwrap();
        assert!((v.value - c(2.0, 0.0)).norm() < 1e-14);
        assert!(v.truncation_bound <= 1e-15 * v.value.norm());
    }

    #[test]
    fn kummer_branch_for_large_negative_argument() {
        let (a, b, z) = (c(0.7, 0.3), c(2.4, 0.0), c(-30.0, 4.0));
        let direct = hyp1f1_extended(a, b, z, 1e-25).unwrap().value;
        let kummer = hyp1f1(a, b, z, 1e-14).unwrap().value;
        assert!((direct - kummer).norm() < 1e-11 * direct.norm());
    }

    #[test]
    fn hyp1f1_rejects_pole_and_reports_nonconvergence() {
        assert!(matches!(
            hyp1f1(c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0), 1e-14),
            Err(Error::ParameterPole(_))
        ));
        let opts = SeriesOptions { tol: 1e-14, max_terms: 5, kummer: true };
        assert!(matches!(
            hyp1f1_with(c(1.0, 0.0), c(1.5, 0.0), c(6.0, 0.0), &opts),
            Err(Error::NonConvergence { max_terms: 5 })
        ));
    }

    // Σ |(−n)_k (b)_k z^k / ((c)_k k!)|, the scale of the rounding error.
    fn abs_term_sum(n: usize, b: C, cc: C, z: C) -> f64 {
        let (mut t, mut s) = (1.0, 1.0);
        for k in 0..n {
            let kf = k as f64;
            t *= ((b + kf) * z * (kf - n as f64) / ((cc + kf) * (kf + 1.0))).norm();
            s += t;
        }
        s
    }

    #[test]
    fn hyp2f1_binomial_collapse() {
        for n in [0usize, 1, 5, 17] {
            let b = c(0.3, -1.1);
            let x = c(0.4, 0.25);
            let v = hyp2f1_terminating(n, b, b, x).unwrap();
            let oracle = (c(1.0, 0.0) - x).powu(n as u32);
            assert!((v - oracle).norm() < 1e-15 * abs_term_sum(n, b, b, x), "n = {n}");
            assert_eq!(hyp2f1_terminating(n, b, c(2.5, 0.1), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn hyp2f1_chu_vandermonde() {
        // ₂F₁(−n, b; c; 1) = (c − b)_n / (c)_n
        for n in [1usize, 4, 12, 30] {
            let b = c(1.3, 0.7);
            let cc = c(3.0, 0.0);
            let v = hyp2f1_terminating(n, b, cc, c(1.0, 0.0)).unwrap();
            let oracle = rising_factorial(cc - b, n) / rising_factorial(cc, n);
            let scale = abs_term_sum(n, b, cc, c(1.0, 0.0));
            assert!((v - oracle).norm() < 1e-15 * scale, "n = {n}");
        }
    }

    #[test]
    fn hyp2f1_parameter_pole() {
        assert!(matches!(
            hyp2f1_terminating(4, c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0)),
            Err(Error::ParameterPole(_))
        ));
        // c = −n is harmless: (c)_k with k ≤ n never reaches zero before the last term
        assert!(hyp2f1_terminating(3, c(1.0, 0.0), c(-3.0, 0.0), c(0.5, 0.0)).is_ok());
    }

    #[test]
    fn extended_mode_agrees_with_binary64() {
        let (a, b, z) = (c(0.5, 0.7), c(2.0, 0.0), c(0.0, 3.0));
        let lo = hyp1f1(a, b, z, 1e-15).unwrap().value;
        let hi = hyp1f1_extended(a, b, z, 1e-30).unwrap().value;
        assert!((lo - hi).norm() < 1e-13 * hi.norm());
    }
}
