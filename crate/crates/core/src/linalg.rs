//! Small dense complex matrices: just enough linear algebra for the
//! fiber-operator determinants and the vertex scattering matrix.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Complex::one()))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Euclidean norms of the rows.
    pub fn row_norms(&self) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(T::zero(), |acc, z| acc + z.norm_sqr())
                    .sqrt()
            })
            .collect()
    }

    /// Spectral (operator 2-) norm by power iteration on `A* A`.
    pub fn spectral_norm(&self) -> T {
        let n = self.dim;
        if n == 0 {
            return T::zero();
        }
        let gram = self.adjoint().matmul(self);
        // deterministic start vector with no special symmetry
        let mut v: Vec<Complex<T>> = (0..n)
            .map(|j| Complex::new(T::one() + lit::<T>(0.37) * lit(j as f64), lit::<T>(0.11) * lit((j * j) as f64)))
            .collect();
        let mut lambda = T::zero();
        for _ in 0..500 {
            let w = gram.apply(&v);
            let norm = w.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
            if norm == T::zero() {
                return T::zero();
            }
            let next = norm / v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
            v = w.into_iter().map(|z| z / norm).collect();
            if (next - lambda).abs() <= T::epsilon() * next {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.sqrt()
    }

    /// LU factorisation with partial pivoting. Returns the packed factors,
    /// the row permutation and the permutation sign, or `None` when a pivot
    /// is exactly zero.
    fn lu(&self) -> (Vec<Complex<T>>, Vec<usize>, T, bool) {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let mut singular = false;
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs == T::zero() {
                singular = true;
                continue;
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                sign = -sign;
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                if factor.is_zero() {
                    continue;
                }
                a[r * n + col] = factor;
                for j in col + 1..n {
                    let upd = factor * a[col * n + j];
                    a[r * n + j] = a[r * n + j] - upd;
                }
            }
        }
        (a, perm, sign, singular)
    }

    /// Determinant by partially pivoted elimination.
    pub fn determinant(&self) -> Complex<T> {
        let n = self.dim;
        let (lu, _, sign, singular) = self.lu();
        if singular {
            return Complex::zero();
        }
        (0..n).fold(Complex::new(sign, T::zero()), |acc, i| acc * lu[i * n + i])
    }

    /// Solves `A X = B` for a square right-hand side.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let n = self.dim;
        assert_eq!(rhs.dim, n);
        let (lu, perm, _, singular) = self.lu();
        let scale = self.max_abs();
        let tiny = scale * T::epsilon() * lit(n as f64);
        if singular || (0..n).any(|i| lu[i * n + i].norm() <= tiny) {
            return Err(Error::Singular);
        }
        let mut out = Self::zeros(n);
        for c in 0..n {
            // forward substitution on the permuted column
            let mut y: Vec<Complex<T>> = (0..n).map(|i| rhs[(perm[i], c)]).collect();
            for i in 0..n {
                for k in 0..i {
                    let upd = lu[i * n + k] * y[k];
                    y[i] = y[i] - upd;
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let upd = lu[i * n + k] * y[k];
                    y[i] = y[i] - upd;
                }
                y[i] = y[i] / lu[i * n + i];
            }
            for i in 0..n {
                out[(i, c)] = y[i];
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.dim))
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}
