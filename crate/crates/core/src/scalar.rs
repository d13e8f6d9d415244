//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All kernels, recursions and factorizations are written against [`Real`],
//! which is implemented for `f32`, `f64` and the 113-bit binary128 type
//! [`f128::f128`]. Complex values are `num_complex::Complex<T>`.

use std::fmt::{Debug, Display};

use f128::f128;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable by the kernel engines.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Significand width in bits (including the implicit bit).
    const SIGNIFICAND_BITS: u32;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 literal")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const SIGNIFICAND_BITS: u32 = 24;
}

impl Real for f64 {
    const SIGNIFICAND_BITS: u32 = 53;
}

impl Real for f128 {
    const SIGNIFICAND_BITS: u32 = 113;
}

/// Lifts an `f64` complex value into `Complex<T>`.
#[inline]
pub fn lift<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// Rounds a `Complex<T>` to double precision.
#[inline]
pub fn lower<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `e^z − 1` without cancellation for small `|z|`.
pub fn expm1_c<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    let half_im = z.im / two;
    let cos_m1 = -two * half_im.sin() * half_im.sin();
    let ex_m1 = z.re.exp_m1();
    // e^x cos y − 1 = expm1(x) cos y + (cos y − 1)
    Complex::new(ex_m1 * z.im.cos() + cos_m1, z.re.exp() * z.im.sin())
}

/// Neumaier-compensated accumulator.
///
/// Additions happen in call order, so identical inputs give bit-identical sums.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<S> {
    sum: S,
    carry: S,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Compensated accumulator for complex values (componentwise Neumaier).
#[derive(Clone, Copy, Debug)]
pub struct ComplexSum<T> {
    re: CompensatedSum<T>,
    im: CompensatedSum<T>,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self { re: CompensatedSum::new(), im: CompensatedSum::new() }
    }

    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Real> Default for ComplexSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::<f64>::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn expm1_matches_exp_away_from_zero() {
        let z = Complex::new(0.7, -1.3);
        let d = expm1_c(z) - (z.exp() - 1.0);
        assert!(d.norm() < 1e-15);
        let tiny = Complex::new(1e-9, 2e-9);
        let e = expm1_c(tiny);
        assert!((e - tiny).norm() < 1e-17);
    }

    #[test]
    fn quad_precision_epsilon() {
        let eps = <f128 as Float>::epsilon().as_f64();
        assert!(eps < 1e-33 && eps > 1e-35);
        let third = f128::lit(1.0) / f128::lit(3.0);
        assert_eq!((third * f128::lit(3.0) - f128::lit(1.0)).as_f64(), 0.0);
    }
}
