//! Dense complex linear algebra for small Hermitian systems.
//!
//! Only what the orthogonalization engines need: Cholesky, inversion of a
//! lower-triangular factor, and an LU solve kept deliberately separate from
//! the Cholesky path so the two can serve as oracles for each other.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{ComplexSum, Real};

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..=i {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.n)
            .map(|i| {
                let mut s = ComplexSum::new();
                for (a, b) in self.row(i).iter().zip(x) {
                    s.add(*a * *b);
                }
                s.value()
            })
            .collect()
    }
}

/// Lower-triangular `L` with real positive diagonal and `A = L Lᴴ`.
///
/// Only the lower triangle of `a` is read.
pub fn cholesky<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.order();
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut d = ComplexSum::new();
        d.add(a.get(j, j));
        for k in 0..j {
            let v = l.get(j, k);
            d.add(-Complex::new(v.norm_sqr(), T::zero()));
        }
        let pivot = d.value().re;
        if !(pivot > T::zero()) || !pivot.is_finite() {
            return Err(Error::IndefiniteMatrix { order: j + 1, pivot: pivot.as_f64() });
        }
        let ljj = pivot.sqrt();
        l.set(j, j, Complex::new(ljj, T::zero()));
        for i in j + 1..n {
            let mut s = ComplexSum::new();
            s.add(a.get(i, j));
            for k in 0..j {
                s.add(-(l.get(i, k) * l.get(j, k).conj()));
            }
            l.set(i, j, s.value() / ljj);
        }
    }
    Ok(l)
}

/// Inverse of a nonsingular lower-triangular matrix (forward substitution per column).
pub fn invert_lower<T: Real>(l: &CMatrix<T>) -> CMatrix<T> {
    let n = l.order();
    let mut inv = CMatrix::zeros(n);
    for i in 0..n {
        let lii = l.get(i, i);
        inv.set(i, i, Complex::new(T::one(), T::zero()) / lii);
        for j in 0..i {
            let mut s = ComplexSum::new();
            for k in j..i {
                s.add(l.get(i, k) * inv.get(k, j));
            }
            inv.set(i, j, -s.value() / lii);
        }
    }
    inv
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn lu_solve<T: Real>(a: &CMatrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let n = a.order();
    assert_eq!(b.len(), n, "right-hand side length");
    let mut m: Vec<Vec<Complex<T>>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut x = b.to_vec();
    for col in 0..n {
        let (piv, mag) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .fold((col, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(mag > T::zero()) {
            return Err(Error::IndefiniteMatrix { order: col + 1, pivot: 0.0 });
        }
        m.swap(col, piv);
        x.swap(col, piv);
        let p = m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / p;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = m[col][c];
                m[r][c] = m[r][c] - f * v;
            }
            let v = x[col];
            x[r] = x[r] - f * v;
        }
    }
    for i in (0..n).rev() {
        let mut s = ComplexSum::new();
        s.add(x[i]);
        for j in i + 1..n {
            s.add(-(m[i][j] * x[j]));
        }
        x[i] = s.value() / m[i][i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn random_hpd(n: usize, seed: &[f64]) -> CMatrix<f64> {
        // B Bᴴ + n I from a deterministic pseudo-random B
        let b = CMatrix::from_fn(n, |i, j| {
            let s = seed[(i * n + j) % seed.len()];
            C::new((s * (i + 2 * j + 1) as f64).sin(), (s * (3 * i + j + 1) as f64).cos())
        });
        CMatrix::from_fn(n, |i, j| {
            let mut acc = C::zero();
            for k in 0..n {
                acc += b.get(i, k) * b.get(j, k).conj();
            }
            if i == j {
                acc += C::new(n as f64, 0.0);
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn cholesky_reconstructs(n in 1usize..12, seed in prop::collection::vec(0.1f64..3.0, 8)) {
            let a = random_hpd(n, &seed);
            let l = cholesky(&a).unwrap();
            for i in 0..n {
                prop_assert!(l.get(i, i).im == 0.0 && l.get(i, i).re > 0.0);
                for j in 0..n {
                    let mut s = C::zero();
                    for k in 0..n {
                        s += l.get(i, k) * l.get(j, k).conj();
                    }
                    prop_assert!((s - a.get(i, j)).norm() < 1e-12 * (n as f64).powi(2));
                }
            }
        }

        #[test]
        fn lower_inverse_and_lu_agree(n in 1usize..12, seed in prop::collection::vec(0.1f64..3.0, 8)) {
            let a = random_hpd(n, &seed);
            let l = cholesky(&a).unwrap();
            let li = invert_lower(&l);
            let rhs: Vec<C> = (0..n).map(|i| C::new(i as f64, 1.0)).collect();
            // x = L⁻ᴴ L⁻¹ b
            let y = li.mul_vec(&rhs);
            let x_chol: Vec<C> = (0..n)
                .map(|i| (0..n).map(|k| li.get(k, i).conj() * y[k]).sum())
                .collect();
            let x_lu = lu_solve(&a, &rhs).unwrap();
            for (p, q) in x_chol.iter().zip(&x_lu) {
                prop_assert!((p - q).norm() < 1e-10 * (1.0 + q.norm()));
            }
        }
    }

    #[test]
    fn indefinite_matrix_is_reported() {
        let a = CMatrix::from_fn(2, |i, j| if i == j { C::new(1.0, 0.0) } else { C::new(2.0, 0.0) });
        assert!(matches!(cholesky(&a), Err(Error::IndefiniteMatrix { order: 2, .. })));
        let z = CMatrix::<f64>::zeros(3);
        assert!(lu_solve(&z, &[C::zero(); 3]).is_err());
    }

    #[test]
    fn hermitian_defect_detects_asymmetry() {
        let mut a = CMatrix::<f64>::zeros(2);
        a.set(0, 1, C::new(1.0, 1.0));
        a.set(1, 0, C::new(1.0, -1.0));
        assert_eq!(a.hermitian_defect(), 0.0);
        a.set(1, 0, C::new(1.0, 1.0));
        assert!(a.hermitian_defect() > 1.9);
    }
}
