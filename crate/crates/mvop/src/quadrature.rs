//! Gauss-Jacobi quadrature on `[0,1]` for the weight `y^beta (1-y)^alpha`,
//! and the matrix-valued inner product built on it.
//!
//! Nodes and weights come from the Golub-Welsch construction: eigenvalues
//! and first eigenvector components of the symmetric Jacobi matrix of the
//! three-term recurrence, affinely mapped from `[-1,1]` to `[0,1]`.

use nalgebra::DMatrix;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MatPoly;

/// Euler beta function.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Quadrature rule for `\int_0^1 f(y) y^beta (1-y)^alpha dy`.
///
/// Exact for polynomials of degree up to `2 * order - 1`; the weights sum
/// to `B(beta + 1, alpha + 1)`.
#[derive(Clone, Debug)]
pub struct QuadRule {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Quadrature order used by the orthogonalization engine: all integrands
/// there are polynomial times Jacobi weight, so this is exact with margin.
pub fn engine_order(d_max: usize, wpol_degree: usize) -> usize {
    20usize.max(d_max + wpol_degree.div_ceil(2) + 5)
}

pub fn gauss_jacobi_rule(alpha: f64, beta: f64, order: usize) -> Result<QuadRule> {
    if !(alpha > -1.0 && alpha.is_finite()) || !(beta > -1.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "exponents must be finite and > -1, got alpha={alpha}, beta={beta}"
        )));
    }
    if order == 0 {
        return Err(Error::InvalidParameter("order must be >= 1".into()));
    }

    // Symmetric Jacobi matrix of the monic recurrence on [-1,1] for the
    // weight (1-x)^alpha (1+x)^beta.
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(order, order);
    for k in 0..order {
        let kf = k as f64;
        jac[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        if k >= 1 {
            let b_k = if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0).powi(2) * (ab + 3.0))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                    / ((2.0 * kf + ab).powi(2) * (2.0 * kf + ab + 1.0) * (2.0 * kf + ab - 1.0))
            };
            let off = b_k.sqrt();
            jac[(k, k - 1)] = off;
            jac[(k - 1, k)] = off;
        }
    }

    let eigen = jac.symmetric_eigen();
    let mu0 = 2f64.powf(ab + 1.0) * beta_fn(alpha + 1.0, beta + 1.0);
    let map_scale = 2f64.powf(-(ab + 1.0));
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let x = eigen.eigenvalues[i];
            let v0 = eigen.eigenvectors[(0, i)];
            ((x + 1.0) * 0.5, mu0 * v0 * v0 * map_scale)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let rule = QuadRule {
        alpha,
        beta,
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    };
    debug_assert!(rule.nodes.iter().all(|&y| y > 0.0 && y < 1.0));
    Ok(rule)
}

impl QuadRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Same exponents, twice the order. Used as a convergence guard.
    pub fn doubled(&self) -> Result<QuadRule> {
        gauss_jacobi_rule(self.alpha, self.beta, 2 * self.order())
    }

    pub fn integrate_scalar(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&y, &w)| w * f(y))
            .sum()
    }
}

/// `sum_i w_i P(y_i) Wpol(y_i) Q(y_i)^*`, the discretization of
/// `\int_0^1 P W Q^* dy` with `W = y^beta (1-y)^alpha Wpol`.
pub fn matrix_inner_product(
    p: &MatPoly,
    q: &MatPoly,
    wpol: impl Fn(f64) -> Matrix,
    rule: &QuadRule,
) -> Result<Matrix> {
    if p.size() != q.size() {
        return Err(Error::SizeMismatch {
            expected: p.size(),
            got: q.size(),
        });
    }
    let n = p.size();
    let mut acc = Matrix::zeros(n);
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        let term = p.eval(y).matmul(&wpol(y)).matmul(&q.eval(y).adjoint());
        acc = acc.add(&term.scale_re(w));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn order_one_flat_weight_is_midpoint() {
        let rule = gauss_jacobi_rule(0.0, 0.0, 1).unwrap();
        assert!((rule.nodes[0] - 0.5).abs() < 1e-15);
        assert!((rule.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exactness_degree_nine_at_order_five() {
        let rule = gauss_jacobi_rule(0.0, 0.0, 5).unwrap();
        let got = rule.integrate_scalar(|y| y.powi(9));
        assert!((got - 0.1).abs() < 1e-13);
    }

    #[test]
    fn weights_sum_to_beta_function() {
        for order in [1, 3, 8, 20] {
            let rule = gauss_jacobi_rule(0.5, 0.5, order).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!(
                (total - std::f64::consts::PI / 8.0).abs() < 1e-12,
                "order {order}: {total}"
            );
        }
        let rule = gauss_jacobi_rule(1.5, 2.5, 12).unwrap();
        let total: f64 = rule.weights.iter().sum();
        assert!((total - beta_fn(3.5, 2.5)).abs() < 1e-12 * total.abs());
    }

    #[test]
    fn nodes_interior_increasing_weights_positive() {
        let rule = gauss_jacobi_rule(-0.5, 2.0, 17).unwrap();
        for w in &rule.weights {
            assert!(*w > 0.0);
        }
        for pair in rule.nodes.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert!(rule.nodes[0] > 0.0 && *rule.nodes.last().unwrap() < 1.0);
    }

    #[test]
    fn rejects_non_integrable_exponents() {
        assert!(gauss_jacobi_rule(-1.0, 0.0, 4).is_err());
        assert!(gauss_jacobi_rule(0.0, -1.5, 4).is_err());
    }

    #[test]
    fn scalar_q1_norm_under_flat_weight() {
        // <Q1, Q1> with Q1 = y - 1/2 equals 1/12
        let q1 = MatPoly::from_coeffs(
            1,
            vec![
                Matrix::scalar(1, Complex64::new(-0.5, 0.0)),
                Matrix::identity(1),
            ],
        );
        let rule = gauss_jacobi_rule(0.0, 0.0, 6).unwrap();
        let g = matrix_inner_product(&q1, &q1, |_| Matrix::identity(1), &rule).unwrap();
        assert!((g[(0, 0)].re - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn total_mass_is_identity_for_flat_weight() {
        let id = MatPoly::constant(Matrix::identity(3));
        let rule = gauss_jacobi_rule(0.0, 0.0, 4).unwrap();
        let g = matrix_inner_product(&id, &id, |_| Matrix::identity(3), &rule).unwrap();
        assert!(g.max_diff(&Matrix::identity(3)) < 1e-14);
    }

    #[test]
    fn pairing_is_sesquilinear_symmetric() {
        let mut rng = StdRng::seed_from_u64(19);
        let rand_poly = |rng: &mut StdRng, deg: usize| {
            MatPoly::from_coeffs(
                2,
                (0..=deg)
                    .map(|_| {
                        Matrix::from_fn(2, |_, _| {
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                        })
                    })
                    .collect(),
            )
        };
        let p = rand_poly(&mut rng, 3);
        let q = rand_poly(&mut rng, 2);
        // Hermitian-valued polynomial weight factor
        let wpol = |y: f64| {
            let base = Matrix::from_rows(&[
                vec![Complex64::new(2.0 + y, 0.0), Complex64::new(0.3 * y, 0.1)],
                vec![Complex64::new(0.3 * y, -0.1), Complex64::new(1.5, 0.0)],
            ]);
            base
        };
        let rule = gauss_jacobi_rule(0.0, 0.0, 12).unwrap();
        let pq = matrix_inner_product(&p, &q, wpol, &rule).unwrap();
        let qp = matrix_inner_product(&q, &p, wpol, &rule).unwrap();
        assert!(pq.adjoint().max_diff(&qp) < 1e-13);
    }

    #[test]
    fn gram_matrix_positive_definite_for_invertible_leading() {
        let p = MatPoly::monomial(2, 2);
        let rule = gauss_jacobi_rule(0.5, 0.5, 10).unwrap();
        let g = matrix_inner_product(&p, &p, |_| Matrix::identity(2), &rule).unwrap();
        assert!(g.is_hermitian_pd(1e-12));
    }

    #[test]
    fn doubling_is_a_no_op_once_exact() {
        let rule = gauss_jacobi_rule(1.5, 0.5, 10).unwrap();
        let fine = rule.doubled().unwrap();
        let p = MatPoly::monomial(1, 4);
        let coarse_v = matrix_inner_product(&p, &p, |_| Matrix::identity(1), &rule).unwrap();
        let fine_v = matrix_inner_product(&p, &p, |_| Matrix::identity(1), &fine).unwrap();
        assert!(coarse_v.max_diff(&fine_v) < 1e-11 * coarse_v.max_norm());
    }
}
