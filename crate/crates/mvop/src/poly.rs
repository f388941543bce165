//! Matrix-coefficient polynomials in one real variable, weighted variants,
//! and entrywise polynomial fitting with holdout residuals.
//!
//! A `MatPoly` stores coefficients by ascending power of `y`. Operators in
//! this crate act on the right of such polynomials, so products keep the
//! written order: `(P * Q)(y) = P(y) Q(y)`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Coefficients below this fraction of the largest coefficient count as an
/// exact cancellation when dividing a weighted polynomial by `y` or `1 - y`.
const CANCEL_TOL: f64 = 1e-13;

/// Polynomial with square complex-matrix coefficients, `coeffs[k]` being the
/// coefficient of `y^k`. Trailing exact-zero coefficients are trimmed; the
/// zero polynomial has an empty coefficient list and degree `-1`.
#[derive(Clone, PartialEq, Debug)]
pub struct MatPoly {
    size: usize,
    coeffs: Vec<Matrix>,
}

impl MatPoly {
    pub fn zero(size: usize) -> Self {
        MatPoly {
            size,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(size: usize, coeffs: Vec<Matrix>) -> Self {
        assert!(coeffs.iter().all(|m| m.size() == size));
        let mut p = MatPoly { size, coeffs };
        p.trim();
        p
    }

    pub fn constant(m: Matrix) -> Self {
        Self::from_coeffs(m.size(), vec![m])
    }

    /// `y^k * I`.
    pub fn monomial(size: usize, k: usize) -> Self {
        let mut coeffs = vec![Matrix::zeros(size); k + 1];
        coeffs[k] = Matrix::identity(size);
        MatPoly { size, coeffs }
    }

    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if last.max_norm() == 0.0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: usize) -> Matrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.size))
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    pub fn leading(&self) -> Matrix {
        self.coeff(self.coeffs.len().saturating_sub(1))
    }

    /// Horner evaluation.
    pub fn eval(&self, y: f64) -> Matrix {
        let mut acc = Matrix::zeros(self.size);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale_re(y).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> MatPoly {
        if self.coeffs.len() <= 1 {
            return MatPoly::zero(self.size);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale_re(k as f64))
            .collect();
        MatPoly::from_coeffs(self.size, coeffs)
    }

    pub fn add(&self, other: &MatPoly) -> MatPoly {
        assert_eq!(self.size, other.size);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        MatPoly::from_coeffs(self.size, coeffs)
    }

    pub fn sub(&self, other: &MatPoly) -> MatPoly {
        self.add(&other.scale_re(-1.0))
    }

    /// Polynomial product, left factor's matrices multiplying from the left.
    pub fn mul(&self, other: &MatPoly) -> MatPoly {
        assert_eq!(self.size, other.size);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return MatPoly::zero(self.size);
        }
        let mut coeffs =
            vec![Matrix::zeros(self.size); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.matmul(b));
            }
        }
        MatPoly::from_coeffs(self.size, coeffs)
    }

    pub fn scale(&self, z: Complex64) -> MatPoly {
        MatPoly::from_coeffs(self.size, self.coeffs.iter().map(|c| c.scale(z)).collect())
    }

    pub fn scale_re(&self, x: f64) -> MatPoly {
        self.scale(Complex64::new(x, 0.0))
    }

    /// Constant matrix times polynomial, `A P(y)`.
    pub fn mul_matrix_left(&self, a: &Matrix) -> MatPoly {
        MatPoly::from_coeffs(self.size, self.coeffs.iter().map(|c| a.matmul(c)).collect())
    }

    /// Polynomial times constant matrix, `P(y) A`.
    pub fn mul_matrix_right(&self, a: &Matrix) -> MatPoly {
        MatPoly::from_coeffs(self.size, self.coeffs.iter().map(|c| c.matmul(a)).collect())
    }

    /// Multiply by `y^k`.
    pub fn shift_up(&self, k: usize) -> MatPoly {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![Matrix::zeros(self.size); k];
        coeffs.extend(self.coeffs.iter().cloned());
        MatPoly { size: self.size, coeffs }
    }

    /// Entrywise conjugate transpose of every coefficient. Since the
    /// variable is real this represents `y -> P(y)*`.
    pub fn adjoint(&self) -> MatPoly {
        MatPoly::from_coeffs(self.size, self.coeffs.iter().map(|c| c.adjoint()).collect())
    }

    /// Largest coefficient-entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &MatPoly) -> f64 {
        self.sub(other).max_norm()
    }
}

#[derive(Serialize, Deserialize)]
struct MatPolyJson {
    size: usize,
    coeffs: Vec<Vec<[f64; 2]>>,
}

impl Serialize for MatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| m.entries().iter().map(|z| [z.re, z.im]).collect())
            .collect();
        MatPolyJson {
            size: self.size,
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatPolyJson::deserialize(d)?;
        let n = raw.size;
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for flat in raw.coeffs {
            if flat.len() != n * n {
                return Err(D::Error::custom("coefficient entry count must be size^2"));
            }
            coeffs.push(Matrix::from_fn(n, |r, c| {
                let [re, im] = flat[r * n + c];
                Complex64::new(re, im)
            }));
        }
        Ok(MatPoly::from_coeffs(n, coeffs))
    }
}

/// Representation of `y^a (1-y)^b P(y)` on `(0,1)`.
///
/// The family of such functions is closed under differentiation, which is
/// what makes the repeated weight derivatives of the Rodrigues construction
/// exact at the representation level.
#[derive(Clone, Debug)]
pub struct WeightedMatPoly {
    pub a: f64,
    pub b: f64,
    pub poly: MatPoly,
}

impl WeightedMatPoly {
    pub fn new(a: f64, b: f64, poly: MatPoly) -> Self {
        WeightedMatPoly { a, b, poly }
    }

    pub fn eval(&self, y: f64) -> Matrix {
        self.poly
            .eval(y)
            .scale_re(y.powf(self.a) * (1.0 - y).powf(self.b))
    }

    /// Exact derivative within the representation:
    /// `(a, b, P) -> (a-1, b-1, (a(1-y) - b y) P + y(1-y) P')`,
    /// followed by dividing out `y` or `1-y` factors that cancel exactly,
    /// which keeps the exponents minimal.
    pub fn derivative(&self) -> WeightedMatPoly {
        let size = self.poly.size();
        // (a(1-y) - b y) = a - (a+b) y
        let lin = MatPoly::from_coeffs(
            size,
            vec![
                Matrix::scalar(size, Complex64::new(self.a, 0.0)),
                Matrix::scalar(size, Complex64::new(-(self.a + self.b), 0.0)),
            ],
        );
        // y(1-y) = y - y^2
        let y1my = MatPoly::from_coeffs(
            size,
            vec![
                Matrix::zeros(size),
                Matrix::identity(size),
                Matrix::scalar(size, Complex64::new(-1.0, 0.0)),
            ],
        );
        let poly = lin.mul(&self.poly).add(&y1my.mul(&self.poly.derivative()));
        let mut out = WeightedMatPoly::new(self.a - 1.0, self.b - 1.0, poly);
        out.simplify();
        out
    }

    /// Divide out factors of `y` and `1-y` detected by exact coefficient
    /// cancellation, incrementing the exponents accordingly.
    fn simplify(&mut self) {
        loop {
            let scale = self.poly.max_norm();
            if scale == 0.0 {
                return;
            }
            if self.poly.coeff(0).max_norm() <= CANCEL_TOL * scale && self.poly.degree() >= 1 {
                // divisible by y: drop the constant coefficient
                let coeffs = self.poly.coeffs()[1..].to_vec();
                self.poly = MatPoly::from_coeffs(self.poly.size(), coeffs);
                self.a += 1.0;
                continue;
            }
            if self.poly.eval(1.0).max_norm() <= CANCEL_TOL * scale && self.poly.degree() >= 1 {
                // synthetic division by (y - 1), then negate for (1 - y)
                let d = self.poly.degree() as usize;
                let mut q = vec![Matrix::zeros(self.poly.size()); d];
                let mut carry = self.poly.coeff(d);
                for k in (1..=d).rev() {
                    q[k - 1] = carry.clone();
                    carry = self.poly.coeff(k - 1).add(&carry);
                }
                self.poly = MatPoly::from_coeffs(self.poly.size(), q).scale_re(-1.0);
                self.b += 1.0;
                continue;
            }
            return;
        }
    }
}

/// Chebyshev-Gauss points mapped to `[lo, hi]`, ascending.
pub fn chebyshev_nodes(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut v: Vec<f64> = (0..count)
        .map(|k| {
            let x = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos();
            mid + half * x
        })
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Default fitting window. Expressions built from the degree-zero spherical
/// function carry endpoint powers like `y^{1/2}`, so nodes stay away from 0
/// and 1.
pub const FIT_LO: f64 = 0.1;
pub const FIT_HI: f64 = 0.9;

/// Sample nodes (Chebyshev, `degree + 1` of them) and ten holdout nodes
/// from the interior-Lobatto family, which never collides with the
/// Chebyshev-Gauss points.
pub fn fit_nodes(degree: usize) -> (Vec<f64>, Vec<f64>) {
    let samples = chebyshev_nodes(degree + 1, FIT_LO, FIT_HI);
    let mid = 0.5 * (FIT_LO + FIT_HI);
    let half = 0.5 * (FIT_HI - FIT_LO);
    let holdout = (1..=10)
        .map(|k| mid + half * (std::f64::consts::PI * k as f64 / 11.0).cos())
        .collect();
    (samples, holdout)
}

/// Entrywise polynomial interpolation through `samples`, with the maximum
/// entrywise deviation on `holdout` reported as the residual. A residual at
/// interpolation accuracy certifies that the sampled function is a
/// polynomial of the declared degree; fractional-power contamination shows
/// up as a residual many orders larger.
pub fn fit_matpoly(
    samples: &[(f64, Matrix)],
    degree: usize,
    holdout: &[(f64, Matrix)],
) -> Result<(MatPoly, f64)> {
    if samples.len() < degree + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least {} samples for degree {}, got {}",
            degree + 1,
            degree,
            samples.len()
        )));
    }
    for (i, (yi, _)) in samples.iter().enumerate() {
        for (yj, _) in samples.iter().skip(i + 1) {
            if yi == yj {
                return Err(Error::DuplicateNodes);
            }
        }
    }
    let n = samples[0].1.size();
    let m = samples.len();
    let cols = degree + 1;

    // Vandermonde system, solved once; square when sample count matches
    // degree + 1, otherwise via normal equations.
    let vand: Vec<Vec<f64>> = samples
        .iter()
        .map(|(y, _)| (0..cols).map(|k| y.powi(k as i32)).collect())
        .collect();
    let system = if m == cols {
        Matrix::from_real_fn(cols, |r, c| vand[r][c])
    } else {
        Matrix::from_real_fn(cols, |r, c| {
            (0..m).map(|s| vand[s][r] * vand[s][c]).sum()
        })
    };
    let sys_inv = system.inverse()?;

    let mut coeffs = vec![Matrix::zeros(n); cols];
    for r in 0..n {
        for c in 0..n {
            // right-hand side for this entry
            let rhs: Vec<Complex64> = if m == cols {
                samples.iter().map(|(_, mat)| mat[(r, c)]).collect()
            } else {
                (0..cols)
                    .map(|k| {
                        (0..m)
                            .map(|s| samples[s].1[(r, c)] * vand[s][k])
                            .sum::<Complex64>()
                    })
                    .collect()
            };
            for k in 0..cols {
                let mut v = Complex64::new(0.0, 0.0);
                for (j, &rv) in rhs.iter().enumerate() {
                    v += sys_inv[(k, j)] * rv;
                }
                coeffs[k][(r, c)] += v;
            }
        }
    }
    let poly = MatPoly::from_coeffs(n, coeffs);
    let residual = holdout
        .iter()
        .map(|(y, mat)| poly.eval(*y).max_diff(mat))
        .fold(0.0, f64::max);
    Ok((poly, residual))
}

/// Convenience: sample a matrix function on the standard fit nodes and fit.
pub fn fit_function(
    f: impl Fn(f64) -> Matrix,
    degree: usize,
) -> Result<(MatPoly, f64)> {
    let (sample_ys, holdout_ys) = fit_nodes(degree);
    let samples: Vec<(f64, Matrix)> = sample_ys.iter().map(|&y| (y, f(y))).collect();
    let holdout: Vec<(f64, Matrix)> = holdout_ys.iter().map(|&y| (y, f(y))).collect();
    fit_matpoly(&samples, degree, &holdout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_poly(rng: &mut StdRng, size: usize, degree: usize) -> MatPoly {
        let coeffs = (0..=degree)
            .map(|_| Matrix::from_fn(size, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        MatPoly::from_coeffs(size, coeffs)
    }

    #[test]
    fn eval_constant_and_linear() {
        let id = MatPoly::constant(Matrix::identity(3));
        assert!(id.eval(0.3).max_diff(&Matrix::identity(3)) == 0.0);

        let y_id = MatPoly::monomial(2, 1);
        assert!(y_id.eval(0.5).max_diff(&Matrix::identity(2).scale_re(0.5)) == 0.0);
    }

    #[test]
    fn eval_monic_jacobi_q1() {
        // monic degree-1 polynomial y - 1/2 for the flat weight on [0,1]
        let q1 = MatPoly::from_coeffs(
            1,
            vec![Matrix::scalar(1, c(-0.5, 0.0)), Matrix::identity(1)],
        );
        assert!((q1.eval(0.25)[(0, 0)] - c(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_of_constant_and_square() {
        let id = MatPoly::constant(Matrix::identity(2));
        assert_eq!(id.derivative().degree(), -1);

        let y2 = MatPoly::monomial(2, 2);
        let d = y2.derivative();
        assert_eq!(d.degree(), 1);
        assert!(d.coeff(1).max_diff(&Matrix::identity(2).scale_re(2.0)) == 0.0);
    }

    #[test]
    fn adjoint_of_complex_coefficient() {
        // P(y) = i y E_01 has adjoint -i y E_10
        let p = MatPoly::from_coeffs(
            2,
            vec![Matrix::zeros(2), Matrix::unit(2, 0, 1).scale(c(0.0, 1.0))],
        );
        let expect = MatPoly::from_coeffs(
            2,
            vec![Matrix::zeros(2), Matrix::unit(2, 1, 0).scale(c(0.0, -1.0))],
        );
        assert!(p.adjoint().max_diff(&expect) == 0.0);
    }

    #[test]
    fn product_is_evaluation_homomorphism() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_poly(&mut rng, 3, 4);
            let q = random_poly(&mut rng, 3, 3);
            let y = rng.gen_range(0.05..0.95);
            let lhs = p.mul(&q).eval(y);
            let rhs = p.eval(y).matmul(&q.eval(y));
            assert!(lhs.max_diff(&rhs) < 1e-12 * (1.0 + rhs.max_norm()));
            let sum = p.add(&q).eval(y);
            assert!(sum.max_diff(&p.eval(y).add(&q.eval(y))) < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn derivative_drops_degree_by_one(deg in 1usize..10, seed in 0u64..1000) {
            let mut rng = StdRng::seed_from_u64(seed);
            let p = random_poly(&mut rng, 2, deg);
            prop_assert_eq!(p.derivative().degree(), p.degree() - 1);
        }
    }

    #[test]
    fn weighted_derivative_of_y_one_minus_y() {
        // (1, 1, I) -> (0, 0, (1-2y) I)
        let w = WeightedMatPoly::new(1.0, 1.0, MatPoly::constant(Matrix::identity(2)));
        let d = w.derivative();
        assert_eq!(d.a, 0.0);
        assert_eq!(d.b, 0.0);
        let expect = MatPoly::from_coeffs(
            2,
            vec![Matrix::identity(2), Matrix::scalar(2, c(-2.0, 0.0))],
        );
        assert!(d.poly.max_diff(&expect) < 1e-14);
    }

    #[test]
    fn weighted_derivative_simplifies_back() {
        // (0, 0, y I) -> exponents restored to (0, 0) with polynomial I
        let w = WeightedMatPoly::new(0.0, 0.0, MatPoly::monomial(2, 1));
        let d = w.derivative();
        assert_eq!((d.a, d.b), (0.0, 0.0));
        assert!(d.poly.max_diff(&MatPoly::constant(Matrix::identity(2))) < 1e-13);
    }

    #[test]
    fn weighted_derivative_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(11);
        let p = random_poly(&mut rng, 2, 3);
        let w = WeightedMatPoly::new(1.5, 2.5, p);
        let d = w.derivative();
        let y = 0.37;
        let h = 1e-5;
        // fourth-order central stencil
        let fd = w
            .eval(y - 2.0 * h)
            .sub(&w.eval(y + 2.0 * h))
            .add(&w.eval(y + h).sub(&w.eval(y - h)).scale_re(8.0))
            .scale_re(1.0 / (12.0 * h));
        let exact = d.eval(y);
        assert!(fd.max_diff(&exact) < 1e-8 * exact.max_norm().max(1.0));
    }

    #[test]
    fn fit_recovers_exact_polynomial() {
        let f = |y: f64| Matrix::identity(2).scale_re(y * y);
        let (poly, residual) = fit_function(f, 2).unwrap();
        assert!(residual < 1e-12);
        assert_eq!(poly.degree(), 2);
    }

    #[test]
    fn fit_rejects_square_root() {
        let f = |y: f64| Matrix::identity(2).scale_re(y.sqrt());
        let (_, residual) = fit_function(f, 2).unwrap();
        assert!(residual > 1e-6);
    }

    #[test]
    fn fit_rejects_duplicate_nodes() {
        let m = Matrix::identity(1);
        let samples = vec![(0.3, m.clone()), (0.3, m.clone()), (0.5, m.clone())];
        let holdout = vec![(0.4, m)];
        assert_eq!(
            fit_matpoly(&samples, 2, &holdout),
            Err(Error::DuplicateNodes)
        );
    }

    #[test]
    fn json_round_trip() {
        let mut rng = StdRng::seed_from_u64(3);
        let p = random_poly(&mut rng, 2, 3);
        let text = serde_json::to_string(&p).unwrap();
        let back: MatPoly = serde_json::from_str(&text).unwrap();
        assert!(p.max_diff(&back) == 0.0);
        assert!(text.starts_with("{\"size\":2,\"coeffs\":"));
    }
}
