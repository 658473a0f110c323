//! Stack-allocated complex matrices of dimension ≤ 4.
//!
//! Chart densities are evaluated millions of times on 2×2 and 3×3 matrices;
//! this type keeps those products off the heap. Larger work (QR, general
//! determinants) goes through `nalgebra`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub const MAX_DIM: usize = 4;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat {
    n: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "matrix dimension {n} out of range");
        Self { n, data: [ZERO; MAX_DIM * MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * MAX_DIM + i] = ONE;
        }
        m
    }

    /// Row-major entries, `rows.len()` must be a square number.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, Complex64::new(v, 0.0));
            }
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * MAX_DIM + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * MAX_DIM + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) * s);
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..self.n {
            for k in 0..self.n {
                acc += self.get(i, k) * other.get(k, i);
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.get(i, j).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max(self.get(i, j).norm());
            }
        }
        m
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).norm() <= tol))
    }

    pub fn determinant(&self) -> Complex64 {
        match self.n {
            1 => self.get(0, 0),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            3 => {
                let m = |i, j| self.get(i, j);
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            _ => self.to_dmatrix().determinant(),
        }
    }

    /// Largest entry of `U†U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::identity(self.n)).max_abs()
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// `exp(A)` by scaling and squaring with a truncated Taylor series.
    pub fn exp(&self) -> Self {
        let norm = self.frobenius_norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = self.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
        let mut term = Self::identity(self.n);
        let mut sum = term;
        for k in 1..=24 {
            term = (term * a).scale(Complex64::new(1.0 / k as f64, 0.0));
            sum = sum + term;
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl Mul for CMat {
    type Output = CMat;

    #[inline]
    fn mul(self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * MAX_DIM + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * MAX_DIM + j] += a * rhs.data[k * MAX_DIM + j];
                }
            }
        }
        out
    }
}

impl Add for CMat {
    type Output = CMat;

    fn add(mut self, rhs: CMat) -> CMat {
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for CMat {
    type Output = CMat;

    fn sub(mut self, rhs: CMat) -> CMat {
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        self
    }
}

/// Determinant of a small real square matrix stored row-major, by LU with
/// partial pivoting.
pub fn real_determinant(k: usize, entries: &mut [f64]) -> f64 {
    debug_assert_eq!(entries.len(), k * k);
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| entries[a * k + col].abs().total_cmp(&entries[b * k + col].abs()))
            .expect("non-empty range");
        let p = entries[pivot * k + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..k {
                entries.swap(pivot * k + j, col * k + j);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..k {
            let factor = entries[row * k + col] / p;
            if factor != 0.0 {
                for j in col..k {
                    entries[row * k + j] -= factor * entries[col * k + j];
                }
            }
        }
    }
    det
}
