//! Constructors for the concrete matrix-valued orthogonal polynomial
//! families: the size-`(2l+1)` family attached to the product of two copies
//! of the rank-one compact group with its diagonal subgroup, the two
//! size-two families attached to the unitary and symplectic towers, and the
//! scalar Jacobi reference family.
//!
//! Each family is packaged as a [`FamilyDescriptor`]: Jacobi exponents, the
//! degree-zero matrix function `psi0` with closed-form derivatives, the
//! positive diagonal `T`, the first-order equation data `(S, R)`, the
//! hypergeometric operator data `(C, U, V)`, the potential `F`, and,
//! where available, the first-order operator data `(A0, B0, B1)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, build_kernel};
use crate::linalg::Matrix;
use crate::poly::{fit_function, MatPoly};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// One term `coef * y^a * (1-y)^b`.
#[derive(Clone, Debug)]
struct PowerTerm {
    coef: Complex64,
    a: f64,
    b: f64,
}

/// Finite sum of power terms on `(0,1)`; closed under differentiation,
/// which gives every `psi0` entry exact derivatives of any order.
#[derive(Clone, Debug, Default)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
}

impl PowerSum {
    pub fn zero() -> Self {
        PowerSum { terms: Vec::new() }
    }

    pub fn term(coef: Complex64, a: f64, b: f64) -> Self {
        PowerSum {
            terms: vec![PowerTerm { coef, a, b }],
        }
    }

    pub fn push(&mut self, coef: Complex64, a: f64, b: f64) {
        if coef != c64(0.0) {
            self.terms.push(PowerTerm { coef, a, b });
        }
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coef * y.powf(t.a) * (1.0 - y).powf(t.b))
            .sum()
    }

    pub fn derivative(&self) -> PowerSum {
        let mut out = PowerSum::zero();
        for t in &self.terms {
            if t.a != 0.0 {
                out.push(t.coef * t.a, t.a - 1.0, t.b);
            }
            if t.b != 0.0 {
                out.push(-t.coef * t.b, t.a, t.b - 1.0);
            }
        }
        out
    }
}

/// Matrix of power sums with precomputed first and second derivatives.
#[derive(Clone, Debug)]
pub struct Psi0 {
    n: usize,
    entries: Vec<PowerSum>,
    d1: Vec<PowerSum>,
    d2: Vec<PowerSum>,
}

impl Psi0 {
    pub fn new(n: usize, entries: Vec<PowerSum>) -> Self {
        assert_eq!(entries.len(), n * n);
        let d1: Vec<PowerSum> = entries.iter().map(PowerSum::derivative).collect();
        let d2: Vec<PowerSum> = d1.iter().map(PowerSum::derivative).collect();
        Psi0 { n, entries, d1, d2 }
    }

    fn eval_of(&self, table: &[PowerSum], y: f64) -> Matrix {
        Matrix::from_fn(self.n, |r, c| table[r * self.n + c].eval(y))
    }

    pub fn eval(&self, y: f64) -> Matrix {
        self.eval_of(&self.entries, y)
    }

    pub fn eval_prime(&self, y: f64) -> Matrix {
        self.eval_of(&self.d1, y)
    }

    pub fn eval_second(&self, y: f64) -> Matrix {
        self.eval_of(&self.d2, y)
    }
}

/// Point of `(0,1)` together with its trigonometric coordinate
/// `t = arccos(1 - 2y)`, the principal branch.
#[derive(Clone, Copy, Debug)]
pub struct EvalPoint {
    pub y: f64,
    pub t: f64,
}

impl EvalPoint {
    pub fn from_y(y: f64) -> Self {
        EvalPoint {
            y,
            t: (1.0 - 2.0 * y).acos(),
        }
    }

    pub fn from_t(t: f64) -> Self {
        EvalPoint {
            y: 0.5 * (1.0 - t.cos()),
            t,
        }
    }
}

/// Data of the first-order operator `E`: acts as `P -> P'(y B1 + B0) + P A0`.
#[derive(Clone, Debug)]
pub struct EData {
    pub a0: Matrix,
    pub b0: Matrix,
    pub b1: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    Su2 { two_ell: u64 },
    CaseA1 { n: u64, m: u64, i: u64 },
    CaseC1 { n: u64 },
    ScalarJacobi,
}

/// Everything that defines one family at deformation parameter zero.
#[derive(Clone)]
pub struct FamilyDescriptor {
    pub name: String,
    pub params: String,
    pub kind: FamilyKind,
    pub size: usize,
    pub alpha: f64,
    pub beta: f64,
    pub psi0: Psi0,
    /// Positive diagonal of the base pairing.
    pub t: Matrix,
    /// Fitted first-order data: `y(1-y) psi0' = (S + y R) psi0`.
    pub s: Matrix,
    pub r: Matrix,
    pub sr_residual: f64,
    pub c: Matrix,
    pub u: Matrix,
    pub v: Matrix,
    f_base: Arc<dyn Fn(f64) -> Matrix + Send + Sync>,
    pub e_data: Option<EData>,
    /// Degree of the polynomial factor of the weight.
    pub wpol_degree: usize,
}

impl fmt::Debug for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FamilyDescriptor({} {})", self.name, self.params)
    }
}

impl FamilyDescriptor {
    /// The stored potential `F` of the undeformed operator.
    pub fn f_base(&self, y: f64) -> Matrix {
        (self.f_base)(y)
    }

    /// Coefficients `(a0, a1)` of the scalar drift `a(y) = a0 + a1 y`,
    /// forced by the weight exponents.
    pub fn drift(&self) -> (f64, f64) {
        (self.beta + 1.0, -(self.alpha + self.beta + 2.0))
    }

    /// Polynomial factor of the base weight, `psi0 T psi0^*`, pointwise.
    pub fn wpol_at(&self, y: f64) -> Matrix {
        let p = self.psi0.eval(y);
        p.matmul(&self.t).matmul(&p.adjoint())
    }
}

/// Fit `(S, R)` of the first-order equation from samples of
/// `y(1-y) psi0'(y) psi0(y)^{-1}`, returning the holdout residual of the
/// degree-one fit. A residual at interpolation accuracy certifies the
/// first-order equation for the family.
pub fn infer_sr(psi0: &Psi0) -> Result<(Matrix, Matrix, f64)> {
    let g = |y: f64| -> Matrix {
        let inv = psi0.eval(y).inverse().expect("psi0 invertible on (0,1)");
        psi0.eval_prime(y).matmul(&inv).scale_re(y * (1.0 - y))
    };
    let (poly, residual) = fit_function(g, 1)?;
    Ok((poly.coeff(0), poly.coeff(1), residual))
}

/// Residual of `y(1-y) psi0' - (S + yR) psi0` over an interior grid,
/// relative to the scale of `psi0`.
pub fn psi0_ode_residual(fam: &FamilyDescriptor, points: usize) -> f64 {
    let mut worst = 0.0f64;
    for k in 1..=points {
        let y = k as f64 / (points + 1) as f64;
        let lhs = fam.psi0.eval_prime(y).scale_re(y * (1.0 - y));
        let coeff = fam.s.add(&fam.r.scale_re(y));
        let rhs = coeff.matmul(&fam.psi0.eval(y));
        let scale = lhs.max_norm().max(rhs.max_norm()).max(1.0);
        worst = worst.max(lhs.max_diff(&rhs) / scale);
    }
    worst
}

fn binom_f(n: u64, k: u64) -> f64 {
    binomial(n, k).to_string().parse::<f64>().unwrap()
}

/// Phases `(-1)^{3j/2} = exp(3 pi i j / 2)`, cycling `1, -i, -1, i`.
fn quarter_phase(j: u64) -> Complex64 {
    match j % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

fn su2_psi0(two_ell: u64) -> Result<Psi0> {
    let kernel = build_kernel(two_ell)?;
    let kf = kernel.k.to_f64();
    let n = (two_ell + 1) as usize;
    let mut entries = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut sum = PowerSum::zero();
            for j in 0..n {
                let coef = quarter_phase(j as u64)
                    * c64(kf[r][j] * kf[j][c] * binom_f(two_ell, j as u64));
                sum.push(coef, j as f64 / 2.0, (two_ell as f64 - j as f64) / 2.0);
            }
            entries.push(sum);
        }
    }
    Ok(Psi0::new(n, entries))
}

/// The decomposition `psi0 = K Upsilon(y) K` with diagonal
/// `Upsilon_jj = (-1)^{3j/2} C(2l, j) y^{j/2} (1-y)^{(2l-j)/2}`.
pub fn psi0_su2_krawtchouk(two_ell: u64, y: f64) -> Result<Matrix> {
    if !(0.0 < y && y < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "y must lie in (0,1), got {y}"
        )));
    }
    Ok(su2_psi0(two_ell)?.eval(y))
}

/// Independent oracle: the direct double-sum evaluation of the degree-zero
/// full spherical function in the trigonometric variable.
pub fn phi0_su2_direct(two_ell: u64, t: f64) -> Matrix {
    let size = (two_ell + 1) as usize;
    let ell = two_ell as f64 / 2.0;
    Matrix::from_fn(size, |n, m| {
        let mut acc = Complex64::new(0.0, 0.0);
        // k1 + k2 = m with 0 <= k1 <= n, 0 <= k2 <= 2l - n
        for k1 in 0..=n.min(m) {
            let k2 = m - k1;
            if k2 > size - 1 - n {
                continue;
            }
            let weight = binom_f(n as u64, k1 as u64)
                * binom_f((size - 1 - n) as u64, k2 as u64);
            let freq = k2 as f64 - k1 as f64 - ell + n as f64;
            acc += c64(weight) * Complex64::new(0.0, freq * t).exp();
        }
        acc / c64(binom_f(two_ell, m as u64))
    })
}

/// Closed-form `(S, R)` for the Krawtchouk-built family, used as a
/// cross-check against the fitted pair.
pub fn su2_closed_form_sr(two_ell: u64) -> (Matrix, Matrix) {
    let n = (two_ell + 1) as usize;
    let ell = two_ell as f64 / 2.0;
    let s_tri = Matrix::from_real_fn(n, |r, c| {
        if c + 1 == r {
            r as f64 / 2.0
        } else if c == r + 1 {
            (two_ell as f64 - r as f64) / 2.0
        } else {
            0.0
        }
    });
    let s_gen = Matrix::scalar(n, c64(ell)).sub(&s_tri).scale_re(0.5);
    let r_gen = Matrix::scalar(n, c64(-ell));
    (s_gen, r_gen)
}

pub fn family_su2(two_ell: u64) -> Result<FamilyDescriptor> {
    let n = (two_ell + 1) as usize;
    let ell = two_ell as f64 / 2.0;
    let psi0 = su2_psi0(two_ell)?;
    let (s, r, sr_residual) = infer_sr(&psi0)?;

    let c = Matrix::from_real_fn(n, |row, col| {
        if row == col {
            (two_ell as f64 + 3.0) / 2.0
        } else if col + 1 == row {
            -(row as f64) / 2.0
        } else if col == row + 1 {
            -(two_ell as f64 - row as f64) / 2.0
        } else {
            0.0
        }
    });
    let u = Matrix::scalar(n, c64(two_ell as f64 + 3.0));
    let v = Matrix::from_real_fn(n, |row, col| {
        if row == col {
            -(row as f64) * (two_ell as f64 - row as f64)
        } else {
            0.0
        }
    });

    let tl = two_ell as f64;
    let f_base = Arc::new(move |y: f64| {
        Matrix::from_real_fn(n, |row, col| {
            let i = row as f64;
            let denom = y * (1.0 - y);
            if row == col {
                (2.0 * denom * (ell * (ell + 2.0) - i * i + tl * i) - ell * (2.0 * i + 1.0)
                    + i * i)
                    / (2.0 * denom)
            } else if col + 1 == row {
                i * (tl - i + 1.0) * (1.0 - 2.0 * y) / (4.0 * denom)
            } else if col == row + 1 {
                (i + 1.0) * (tl - i) * (1.0 - 2.0 * y) / (4.0 * denom)
            } else {
                0.0
            }
        })
    });

    let e_data = if two_ell >= 1 {
        Some(EData {
            a0: Matrix::from_real_fn(n, |row, col| {
                if row == col {
                    (tl + 2.0) * (row as f64 - tl) / tl
                } else {
                    0.0
                }
            }),
            b0: Matrix::from_real_fn(n, |row, col| {
                let i = row as f64;
                if col == row + 1 {
                    -(tl - i) / (4.0 * ell)
                } else if row == col {
                    (ell - i) / (2.0 * ell)
                } else if col + 1 == row {
                    i / (4.0 * ell)
                } else {
                    0.0
                }
            }),
            b1: Matrix::from_real_fn(n, |row, col| {
                if row == col {
                    -(ell - row as f64) / ell
                } else {
                    0.0
                }
            }),
        })
    } else {
        None
    };

    Ok(FamilyDescriptor {
        name: "su2".into(),
        params: format!("two_ell={two_ell}"),
        kind: FamilyKind::Su2 { two_ell },
        size: n,
        alpha: 0.5,
        beta: 0.5,
        psi0,
        t: Matrix::identity(n),
        s,
        r,
        sr_residual,
        c,
        u,
        v,
        f_base,
        e_data,
        wpol_degree: two_ell as usize,
    })
}

pub fn family_a1(n: u64, m: u64, i: u64) -> Result<FamilyDescriptor> {
    if n < 2 || i < 1 || i > n - 1 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "requires n >= 2, 1 <= i <= n-1, m >= 1; got n={n}, m={m}, i={i}"
        )));
    }
    let (nf, mf, fi) = (n as f64, m as f64, i as f64);
    let half_m = mf / 2.0;
    // psi0 = y^{m/2} [[y^{1/2}, 1], [y^{1/2}, ((m+1) - y(m+n-i+1)) / (i-n)]]
    let mut e11 = PowerSum::zero();
    e11.push(c64((mf + 1.0) / (fi - nf)), half_m, 0.0);
    e11.push(c64(-(mf + nf - fi + 1.0) / (fi - nf)), half_m + 1.0, 0.0);
    let psi0 = Psi0::new(
        2,
        vec![
            PowerSum::term(c64(1.0), half_m + 0.5, 0.0),
            PowerSum::term(c64(1.0), half_m, 0.0),
            PowerSum::term(c64(1.0), half_m + 0.5, 0.0),
            e11,
        ],
    );
    let (s, r, sr_residual) = infer_sr(&psi0)?;

    let q = -nf - mf - 1.0 + fi;
    let c = Matrix::from_rows(&[
        vec![c64((mf + 1.0) * (-mf - nf - 2.0 + fi) / q), c64((-nf + fi) / q)],
        vec![
            c64(-(mf + 1.0) / q),
            c64((-mf * mf + 2.0 * fi - 2.0 * nf + mf * fi - 2.0 * mf - mf * nf - 1.0) / q),
        ],
    ]);
    let u = Matrix::from_rows(&[
        vec![c64(nf + mf + 2.0), c64(0.0)],
        vec![c64(-1.0), c64(nf + mf + 3.0)],
    ]);
    let v = Matrix::real_diagonal(&[0.0, nf + mf + 1.0 - fi]);

    let f_base = Arc::new(move |y: f64| {
        let sq = y.sqrt();
        Matrix::from_rows(&[
            vec![
                c64((mf + 1.0) * (mf + 2.0 * nf + 1.0) / 4.0 + (fi - nf) / (1.0 - y)
                    - (mf + 1.0) * (mf + 1.0) / (4.0 * y)),
                c64(fi * sq / (1.0 - y)),
            ],
            vec![
                c64((nf - fi) * sq / (1.0 - y)),
                c64(mf * (mf + 2.0 * nf) / 4.0 - mf * mf / (4.0 * y) - fi * y / (1.0 - y)),
            ],
        ])
    });

    Ok(FamilyDescriptor {
        name: "a1".into(),
        params: format!("n={n},m={m},i={i}"),
        kind: FamilyKind::CaseA1 { n, m, i },
        size: 2,
        alpha: nf - 1.0,
        beta: 0.0,
        psi0,
        t: Matrix::real_diagonal(&[1.0, (nf - fi) / fi]),
        s,
        r,
        sr_residual,
        c,
        u,
        v,
        f_base,
        e_data: None,
        wpol_degree: (m + 2) as usize,
    })
}

pub fn family_c1(n: u64) -> Result<FamilyDescriptor> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("requires n >= 3, got n={n}")));
    }
    let nf = n as f64;
    // psi0 = [[y^{1/2}, 1], [y^{1/2}, (y(n-1) - 1)/(n-2)]]
    let mut e11 = PowerSum::zero();
    e11.push(c64(-1.0 / (nf - 2.0)), 0.0, 0.0);
    e11.push(c64((nf - 1.0) / (nf - 2.0)), 1.0, 0.0);
    let psi0 = Psi0::new(
        2,
        vec![
            PowerSum::term(c64(1.0), 0.5, 0.0),
            PowerSum::term(c64(1.0), 0.0, 0.0),
            PowerSum::term(c64(1.0), 0.5, 0.0),
            e11,
        ],
    );
    let (s, r, sr_residual) = infer_sr(&psi0)?;

    let c = Matrix::from_rows(&[
        vec![c64((2.0 * nf - 1.0) / (nf - 1.0)), c64((nf - 2.0) / (nf - 1.0))],
        vec![c64(1.0 / (nf - 1.0)), c64((3.0 * nf - 4.0) / (nf - 1.0))],
    ]);
    let u = Matrix::from_rows(&[
        vec![c64(2.0 * nf + 1.0), c64(0.0)],
        vec![c64(-1.0), c64(2.0 * nf + 2.0)],
    ]);
    let v = Matrix::real_diagonal(&[0.0, 2.0 * nf - 2.0]);

    let f_base = Arc::new(move |y: f64| {
        let sq = y.sqrt();
        Matrix::from_rows(&[
            vec![
                c64((4.0 * y * y * nf + 4.0 * y * nf - y * y - 18.0 * y + 3.0)
                    / (4.0 * y * (y - 1.0))),
                c64(-2.0 * sq / (y - 1.0)),
            ],
            vec![
                c64(-2.0 * sq * (nf - 2.0) / (y - 1.0)),
                c64(2.0 * y / (y - 1.0)),
            ],
        ])
    });

    Ok(FamilyDescriptor {
        name: "c1".into(),
        params: format!("n={n}"),
        kind: FamilyKind::CaseC1 { n },
        size: 2,
        alpha: 2.0 * nf - 3.0,
        beta: 1.0,
        psi0,
        t: Matrix::real_diagonal(&[1.0, nf - 2.0]),
        s,
        r,
        sr_residual,
        c,
        u,
        v,
        f_base,
        e_data: None,
        wpol_degree: 2,
    })
}

/// Scalar reference family: `psi0 = 1`, hypergeometric data
/// `(C, U, V) = (beta + 1, alpha + beta + 2, 0)` so that the scalar drift
/// comes out as the Jacobi drift with `S = R = 0`.
pub fn family_scalar_jacobi(alpha: f64, beta: f64) -> Result<FamilyDescriptor> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "requires alpha, beta > -1; got alpha={alpha}, beta={beta}"
        )));
    }
    let psi0 = Psi0::new(1, vec![PowerSum::term(c64(1.0), 0.0, 0.0)]);
    Ok(FamilyDescriptor {
        name: "jacobi".into(),
        params: format!("alpha={alpha},beta={beta}"),
        kind: FamilyKind::ScalarJacobi,
        size: 1,
        alpha,
        beta,
        psi0,
        t: Matrix::identity(1),
        s: Matrix::zeros(1),
        r: Matrix::zeros(1),
        sr_residual: 0.0,
        c: Matrix::scalar(1, c64(beta + 1.0)),
        u: Matrix::scalar(1, c64(alpha + beta + 2.0)),
        v: Matrix::zeros(1),
        f_base: Arc::new(|_| Matrix::zeros(1)),
        e_data: None,
        wpol_degree: 0,
    })
}

/// Certified polynomial factor of the base weight.
pub fn fit_wpol(fam: &FamilyDescriptor) -> Result<(MatPoly, f64)> {
    fit_function(|y| fam.wpol_at(y), fam.wpol_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{FIT_HI, FIT_LO};

    #[test]
    fn su2_half_psi0_matches_trig_form() {
        // two_ell = 1: psi0 entries are cos(t/2) -+ i sin(t/2)
        for &y in &[0.2, 0.5, 0.77] {
            let p = psi0_su2_krawtchouk(1, y).unwrap();
            let (cs, sn) = ((1.0f64 - y).sqrt(), y.sqrt());
            assert!((p[(0, 0)] - Complex64::new(cs, -sn)).norm() < 1e-14);
            assert!((p[(0, 1)] - Complex64::new(cs, sn)).norm() < 1e-14);
            assert!((p[(1, 0)] - Complex64::new(cs, sn)).norm() < 1e-14);
            assert!((p[(1, 1)] - Complex64::new(cs, -sn)).norm() < 1e-14);
        }
    }

    #[test]
    fn su2_psi0_rejects_boundary() {
        assert!(psi0_su2_krawtchouk(1, 0.0).is_err());
        assert!(psi0_su2_krawtchouk(1, 1.0).is_err());
    }

    #[test]
    fn phi0_direct_entry_value() {
        // two_ell = 1, t = pi/2: entry (0,0) is exp(-i pi / 4)
        let p = phi0_su2_direct(1, std::f64::consts::FRAC_PI_2);
        let want = Complex64::new(0.0, -std::f64::consts::FRAC_PI_4).exp();
        assert!((p[(0, 0)] - want).norm() < 1e-14);
    }

    #[test]
    fn phi0_direct_agrees_with_kernel_factorization() {
        for two_ell in 0..=6u64 {
            let psi0 = su2_psi0(two_ell).unwrap();
            let mut worst = 0.0f64;
            for k in 1..=50 {
                let y = k as f64 / 51.0;
                let pt = EvalPoint::from_y(y);
                let direct = phi0_su2_direct(two_ell, pt.t);
                worst = worst.max(direct.max_diff(&psi0.eval(y)));
            }
            assert!(worst < 1e-12, "two_ell={two_ell}: {worst}");
        }
    }

    #[test]
    fn psi0_invertible_at_midpoint() {
        for two_ell in 0..=8u64 {
            let psi0 = su2_psi0(two_ell).unwrap();
            assert!(psi0.eval(0.5).det().norm() > 1e-8, "two_ell={two_ell}");
        }
    }

    #[test]
    fn su2_fitted_sr_matches_closed_form() {
        let fam = family_su2(2).unwrap();
        let (s_exact, r_exact) = su2_closed_form_sr(2);
        assert!(fam.s.max_diff(&s_exact) < 1e-11);
        assert!(fam.r.max_diff(&r_exact) < 1e-11);
        assert!(fam.sr_residual < 1e-11);
    }

    #[test]
    fn su2_operator_data_small_case() {
        // two_ell = 1: U = (2l+3) I = 4I and V = 0
        let fam = family_su2(1).unwrap();
        assert!(fam.u.max_diff(&Matrix::identity(2).scale_re(4.0)) == 0.0);
        assert!(fam.v.max_norm() == 0.0);
    }

    #[test]
    fn su2_ode_residual_small() {
        for two_ell in [1u64, 2, 3, 4] {
            let fam = family_su2(two_ell).unwrap();
            assert!(
                psi0_ode_residual(&fam, 100) < 1e-12,
                "two_ell={two_ell}"
            );
        }
    }

    #[test]
    fn drift_matches_family_displays() {
        let su2 = family_su2(2).unwrap();
        assert_eq!(su2.drift(), (1.5, -3.0));
        let a1 = family_a1(3, 1, 1).unwrap();
        assert_eq!(a1.drift(), (1.0, -4.0));
        let c1 = family_c1(3).unwrap();
        assert_eq!(c1.drift(), (2.0, -6.0));
    }

    #[test]
    fn consistency_of_operator_data_with_drift() {
        // C - 2S = (beta+1) I and U + 2R = (alpha+beta+2) I
        for fam in [
            family_su2(1).unwrap(),
            family_su2(3).unwrap(),
            family_a1(3, 1, 1).unwrap(),
            family_a1(4, 2, 1).unwrap(),
            family_c1(3).unwrap(),
            family_c1(5).unwrap(),
            family_scalar_jacobi(0.0, 0.0).unwrap(),
        ] {
            let (a0, a1c) = fam.drift();
            let lhs_c = fam.c.sub(&fam.s.scale_re(2.0));
            assert!(
                lhs_c.max_diff(&Matrix::scalar(fam.size, c64(a0))) < 1e-9,
                "{} {}: C - 2S",
                fam.name,
                fam.params
            );
            let lhs_u = fam.u.add(&fam.r.scale_re(2.0));
            assert!(
                lhs_u.max_diff(&Matrix::scalar(fam.size, c64(-a1c))) < 1e-9,
                "{} {}: U + 2R",
                fam.name,
                fam.params
            );
        }
    }

    #[test]
    fn a1_matrices_small_case() {
        let fam = family_a1(3, 1, 1).unwrap();
        assert!(fam.t.max_diff(&Matrix::real_diagonal(&[1.0, 2.0])) < 1e-15);
        let u_expect = Matrix::from_rows(&[
            vec![c64(6.0), c64(0.0)],
            vec![c64(-1.0), c64(7.0)],
        ]);
        assert!(fam.u.max_diff(&u_expect) < 1e-15);
    }

    #[test]
    fn a1_ode_residual_small() {
        for (n, m, i) in [(3, 1, 1), (3, 1, 2), (4, 2, 1), (5, 1, 3)] {
            let fam = family_a1(n, m, i).unwrap();
            assert!(fam.sr_residual < 1e-10, "a1({n},{m},{i})");
            assert!(psi0_ode_residual(&fam, 100) < 1e-10, "a1({n},{m},{i})");
        }
    }

    #[test]
    fn a1_rejects_bad_parameters() {
        assert!(family_a1(1, 1, 1).is_err());
        assert!(family_a1(3, 0, 1).is_err());
        assert!(family_a1(3, 1, 3).is_err());
    }

    #[test]
    fn c1_matrices_small_case() {
        let fam = family_c1(3).unwrap();
        assert!(fam.t.max_diff(&Matrix::identity(2)) < 1e-15);
        let c_expect = Matrix::from_rows(&[
            vec![c64(2.5), c64(0.5)],
            vec![c64(0.5), c64(2.5)],
        ]);
        assert!(fam.c.max_diff(&c_expect) < 1e-15);
        assert!(family_c1(2).is_err());
    }

    #[test]
    fn c1_wpol_is_polynomial_of_degree_two() {
        let fam = family_c1(3).unwrap();
        let (wpol, residual) = fit_wpol(&fam).unwrap();
        assert!(residual < 1e-11, "residual {residual}");
        assert_eq!(wpol.degree(), 2);
    }

    #[test]
    fn weight_factor_positive_definite_inside() {
        for fam in [
            family_su2(2).unwrap(),
            family_a1(3, 1, 1).unwrap(),
            family_c1(4).unwrap(),
        ] {
            for k in 1..=100 {
                let y = k as f64 / 101.0;
                assert!(
                    fam.wpol_at(y).is_hermitian_pd(1e-9),
                    "{} at y={y}",
                    fam.name
                );
            }
        }
    }

    #[test]
    fn su2_f_is_t_symmetric_at_base() {
        // T = I, so the condition is F(y) = F(y)^*
        let fam = family_su2(3).unwrap();
        for k in 0..=20 {
            let y = FIT_LO + (FIT_HI - FIT_LO) * k as f64 / 20.0;
            let f = fam.f_base(y);
            assert!(f.max_diff(&f.adjoint()) < 1e-9 * f.max_norm());
        }
    }

    #[test]
    fn scalar_family_is_trivial() {
        let fam = family_scalar_jacobi(0.0, 0.0).unwrap();
        assert_eq!(fam.size, 1);
        assert!(fam.s.max_norm() == 0.0 && fam.r.max_norm() == 0.0);
        assert_eq!(fam.u[(0, 0)].re, 2.0);
        assert!(family_scalar_jacobi(-1.0, 0.0).is_err());
    }
}
