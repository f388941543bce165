//! Dense square complex matrices.
//!
//! Sizes stay small (at most a dozen rows), so everything is a plain
//! row-major `Vec<Complex64>` with O(n^3) algorithms: LU with partial
//! pivoting for solves and inverses, Cholesky for positive-definiteness.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix unit `E_{r,s}` of size `n`.
    pub fn unit(n: usize, r: usize, s: usize) -> Self {
        let mut m = Self::zeros(n);
        m[(r, s)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_real_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(n, |r, c| Complex64::new(f(r, c), 0.0))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must be square");
        Self::from_fn(n, |r, c| rows[r][c])
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn real_diagonal(entries: &[f64]) -> Self {
        Self::diagonal(
            &entries
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, z: Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = z;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn check_size(&self, other: &Matrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: self.n,
                got: other.n,
            })
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn scale_re(&self, x: f64) -> Matrix {
        self.scale(Complex64::new(x, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |r, c| self[(c, r)])
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry magnitude outside the band `|r - c| <= band`.
    pub fn off_band_norm(&self, band: usize) -> f64 {
        let mut m = 0.0f64;
        for r in 0..self.n {
            for c in 0..self.n {
                if r.abs_diff(c) > band {
                    m = m.max(self[(r, c)].norm());
                }
            }
        }
        m
    }

    pub fn max_diff(&self, other: &Matrix) -> f64 {
        self.sub(other).max_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Solve `self * X = B` by LU with partial pivoting.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        self.check_size(b)?;
        let n = self.n;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut pivot = col;
            let mut best = lu[col * n + col].norm();
            for r in col + 1..n {
                let v = lu[r * n + col].norm();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularMatrix);
            }
            if pivot != col {
                for c in 0..n {
                    lu.swap(col * n + c, pivot * n + c);
                }
                perm.swap(col, pivot);
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let factor = lu[r * n + col] / d;
                lu[r * n + col] = factor;
                for c in col + 1..n {
                    let s = lu[col * n + c];
                    lu[r * n + c] -= factor * s;
                }
            }
        }
        // forward/back substitution, one column of B at a time
        let mut x = Matrix::zeros(n);
        for rhs_col in 0..n {
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            for r in 0..n {
                let mut s = b[(perm[r], rhs_col)];
                for c in 0..r {
                    s -= lu[r * n + c] * y[c];
                }
                y[r] = s;
            }
            for r in (0..n).rev() {
                let mut s = y[r];
                for c in r + 1..n {
                    s -= lu[r * n + c] * x[(c, rhs_col)];
                }
                x[(r, rhs_col)] = s / lu[r * n + r];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.solve(&Matrix::identity(self.n))
    }

    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot = col;
            let mut best = lu[col * n + col].norm();
            for r in col + 1..n {
                let v = lu[r * n + col].norm();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for c in 0..n {
                    lu.swap(col * n + c, pivot * n + c);
                }
                det = -det;
            }
            let d = lu[col * n + col];
            det *= d;
            for r in col + 1..n {
                let factor = lu[r * n + col] / d;
                for c in col + 1..n {
                    let s = lu[col * n + c];
                    lu[r * n + c] -= factor * s;
                }
            }
        }
        det
    }

    /// Hermitian positive-definiteness via complex Cholesky.
    ///
    /// `herm_tol` bounds the allowed deviation from `self = self*`,
    /// relative to the matrix scale.
    pub fn is_hermitian_pd(&self, herm_tol: f64) -> bool {
        let scale = self.max_norm().max(1e-300);
        if self.max_diff(&self.adjoint()) > herm_tol * scale {
            return false;
        }
        let n = self.n;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let dj = d.sqrt();
            l[j * n + j] = Complex64::new(dj, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / dj;
            }
        }
        true
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::add(self, rhs)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::sub(self, rhs)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_re(-1.0)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for r in 0..self.n {
            write!(f, "  ")?;
            for c in 0..self.n {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
