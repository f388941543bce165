//! The one-parameter deformation of a family: shifted hypergeometric
//! operator data, the deformed potential, the diagonal pairing matrix
//! solved from the symmetry condition, and the assembled deformed weight.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::families::FamilyDescriptor;
use crate::linalg::Matrix;
use crate::poly::{fit_function, MatPoly, WeightedMatPoly, FIT_HI, FIT_LO};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Right-acting hypergeometric operator:
/// `P -> y(1-y) P'' + P' (C - yU) - P V`, coefficient matrices multiplying
/// from the right.
#[derive(Clone, Debug)]
pub struct HyperOp {
    pub c: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

impl HyperOp {
    /// Exact coefficient-level application.
    pub fn apply(&self, p: &MatPoly) -> MatPoly {
        let d2 = p.derivative().derivative();
        let y1my = d2.shift_up(1).sub(&d2.shift_up(2));
        let d1 = p.derivative();
        let first = d1.mul_matrix_right(&self.c).sub(&d1.mul_matrix_right(&self.u).shift_up(1));
        y1my.add(&first).sub(&p.mul_matrix_right(&self.v))
    }

    /// Eigenvalue on monic degree-`d` polynomials, read off the leading
    /// coefficient: `-d(d-1) I - d U - V`.
    pub fn monic_eigenvalue(&self, d: usize) -> Matrix {
        let n = self.c.size();
        let df = d as f64;
        Matrix::scalar(n, c64(-df * (df - 1.0)))
            .sub(&self.u.scale_re(df))
            .sub(&self.v)
    }
}

/// Sign of the conjugated middle term in the incremental formula for the
/// deformed potential. `Minus` is the variant consistent with the operator
/// conjugation route; `Plus` is retained so the suite can demonstrate that
/// it breaks the symmetry and eigenfunction checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformationSign {
    Minus,
    Plus,
}

/// `C -> C + k`, `U -> U + 2k`, `V -> V + kU + k(k-1)`; satisfies the
/// intertwining relation: differentiation maps the level-`k` operator into
/// the level-`k+1` operator.
pub fn deform_operator(fam: &FamilyDescriptor, kappa: f64) -> HyperOp {
    let n = fam.size;
    HyperOp {
        c: fam.c.add(&Matrix::scalar(n, c64(kappa))),
        u: fam.u.add(&Matrix::scalar(n, c64(2.0 * kappa))),
        v: fam
            .v
            .add(&fam.u.scale_re(kappa))
            .add(&Matrix::scalar(n, c64(kappa * (kappa - 1.0)))),
    }
}

/// Scalar drift at level `kappa`: `beta + kappa + 1 - y (alpha + beta + 2 kappa + 2)`.
pub fn drift_at(fam: &FamilyDescriptor, kappa: f64, y: f64) -> f64 {
    fam.beta + kappa + 1.0 - y * (fam.alpha + fam.beta + 2.0 * kappa + 2.0)
}

/// Canonical deformed potential, from the conjugation of the deformed
/// hypergeometric operator back to the spherical level:
/// `F_k = -psi0^{-1} V_k psi0 - y(1-y) psi0^{-1} psi0'' - a_k psi0^{-1} psi0'`.
pub fn deform_f(fam: &FamilyDescriptor, kappa: f64, y: f64) -> Result<Matrix> {
    let psi = fam.psi0.eval(y);
    let inv = psi.inverse()?;
    let v_k = deform_operator(fam, kappa).v;
    let term_v = inv.matmul(&v_k).matmul(&psi).scale_re(-1.0);
    let term_2 = inv
        .matmul(&fam.psi0.eval_second(y))
        .scale_re(-y * (1.0 - y));
    let term_1 = inv
        .matmul(&fam.psi0.eval_prime(y))
        .scale_re(-drift_at(fam, kappa, y));
    Ok(term_v.add(&term_2).add(&term_1))
}

/// Incremental formula for the deformed potential from the stored base `F`:
/// `F + sign * k psi0^{-1} (U + k - 1) psi0 - k(1-2y) psi0^{-1} psi0'`.
pub fn deform_f_increment(
    fam: &FamilyDescriptor,
    kappa: f64,
    y: f64,
    sign: DeformationSign,
) -> Result<Matrix> {
    let psi = fam.psi0.eval(y);
    let inv = psi.inverse()?;
    let s = match sign {
        DeformationSign::Minus => -1.0,
        DeformationSign::Plus => 1.0,
    };
    let mid = inv
        .matmul(&fam.u.add(&Matrix::scalar(fam.size, c64(kappa - 1.0))))
        .matmul(&psi)
        .scale_re(s * kappa);
    let log_d = inv
        .matmul(&fam.psi0.eval_prime(y))
        .scale_re(-kappa * (1.0 - 2.0 * y));
    Ok(fam.f_base(y).add(&mid).add(&log_d))
}

/// Interior nodes used to sample the potential when solving for the
/// diagonal pairing. They avoid the midpoint, where tridiagonal potentials
/// of the Krawtchouk-built family lose their off-diagonal entries.
const T_SOLVE_NODES: [f64; 6] = [0.15, 0.275, 0.4, 0.61, 0.735, 0.86];

#[derive(Clone, Debug)]
pub struct TCertificate {
    /// `max_y |T F(y)^* - F(y) T| / |F(y)|` over the sample nodes.
    pub residual: f64,
    pub positive: bool,
    /// Whether the tridiagonal ratio recursion applied (otherwise least
    /// squares over the stacked node equations).
    pub tridiagonal_route: bool,
}

/// Solve `T F_k(y)^* = F_k(y) T` for a positive diagonal `T` normalized by
/// `T_00 = 1`.
///
/// When `F_k` is tridiagonal with node-independent off-diagonal ratios the
/// diagonal is built by the ratio recursion
/// `T_{i+1,i+1} = (F_{i+1,i} / F_{i,i+1}) T_ii`; otherwise the stacked
/// linear system over the sample nodes is solved in least squares. Either
/// way the result is certified against the symmetry condition, and an
/// inconsistent system is rejected.
pub fn solve_t(fam: &FamilyDescriptor, kappa: f64) -> Result<(Matrix, TCertificate)> {
    let n = fam.size;
    if n == 1 {
        return Ok((
            Matrix::identity(1),
            TCertificate {
                residual: 0.0,
                positive: true,
                tridiagonal_route: true,
            },
        ));
    }
    let samples: Vec<Matrix> = T_SOLVE_NODES
        .iter()
        .map(|&y| deform_f(fam, kappa, y))
        .collect::<Result<_>>()?;
    let scale = samples
        .iter()
        .map(Matrix::max_norm)
        .fold(0.0f64, f64::max)
        .max(1e-300);

    let tridiagonal = samples.iter().all(|f| f.off_band_norm(1) <= 1e-8 * scale);
    let mut diag = vec![Complex64::new(1.0, 0.0); n];
    let mut route = false;

    if tridiagonal {
        route = true;
        'ratio: for i in 0..n - 1 {
            // pick the node where the super-diagonal entry is largest
            let (best, _) = samples
                .iter()
                .enumerate()
                .map(|(idx, f)| (idx, f[(i, i + 1)].norm()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            let denom = samples[best][(i, i + 1)];
            if denom.norm() <= 1e-10 * scale {
                route = false;
                break 'ratio;
            }
            let ratio = samples[best][(i + 1, i)] / denom;
            for f in &samples {
                if f[(i, i + 1)].norm() > 1e-6 * scale {
                    let r = f[(i + 1, i)] / f[(i, i + 1)];
                    if (r - ratio).norm() > 1e-7 * (1.0 + ratio.norm()) {
                        route = false;
                        break 'ratio;
                    }
                }
            }
            diag[i + 1] = ratio * diag[i];
        }
    }

    if !route {
        // least squares over all off-diagonal equations at all nodes:
        // conj(F_sr) t_r - F_rs t_s = 0, with t_0 = 1 moved to the rhs
        let unknowns = n - 1;
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        let mut rhs: Vec<Complex64> = Vec::new();
        for f in &samples {
            for r in 0..n {
                for s in 0..n {
                    if r == s {
                        continue;
                    }
                    let mut row = vec![Complex64::new(0.0, 0.0); unknowns];
                    let mut b = Complex64::new(0.0, 0.0);
                    let coeff_r = f[(s, r)].conj();
                    let coeff_s = -f[(r, s)];
                    if r == 0 {
                        b -= coeff_r;
                    } else {
                        row[r - 1] += coeff_r;
                    }
                    if s == 0 {
                        b -= coeff_s;
                    } else {
                        row[s - 1] += coeff_s;
                    }
                    rows.push(row);
                    rhs.push(b);
                }
            }
        }
        // normal equations
        let mut ata = Matrix::zeros(unknowns);
        let mut atb = vec![Complex64::new(0.0, 0.0); unknowns];
        for (row, b) in rows.iter().zip(&rhs) {
            for i in 0..unknowns {
                for j in 0..unknowns {
                    let prod = row[i].conj() * row[j];
                    ata[(i, j)] += prod;
                }
                atb[i] += row[i].conj() * b;
            }
        }
        let rhs_m = Matrix::from_fn(unknowns, |r, c| if c == 0 { atb[r] } else { c64(0.0) });
        let sol = ata.solve(&rhs_m)?;
        for i in 0..unknowns {
            diag[i + 1] = sol[(i, 0)];
        }
    }

    let t = Matrix::diagonal(&diag);
    let residual = samples
        .iter()
        .map(|f| {
            let lhs = t.matmul(&f.adjoint());
            let rhs = f.matmul(&t);
            lhs.max_diff(&rhs) / f.max_norm().max(1e-300)
        })
        .fold(0.0f64, f64::max);
    if residual > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "pairing symmetry residual {residual:.3e} for {} {} at kappa={kappa}",
            fam.name, fam.params
        )));
    }
    let positive = diag
        .iter()
        .all(|z| z.re > 0.0 && z.im.abs() <= 1e-10 * (1.0 + z.re.abs()));
    let t_real = Matrix::real_diagonal(&diag.iter().map(|z| z.re).collect::<Vec<_>>());
    Ok((
        t_real,
        TCertificate {
            residual,
            positive,
            tridiagonal_route: route,
        },
    ))
}

/// Certificates attached to a deformed weight on construction.
#[derive(Clone, Debug)]
pub struct Certificates {
    pub tsym_residual: f64,
    pub wpol_fit_residual: f64,
    pub positivity: bool,
}

/// A family together with a deformation level: shifted exponents, the
/// solved diagonal pairing, the deformed operator, and the certified
/// polynomial factor of the deformed weight.
#[derive(Clone, Debug)]
pub struct DeformedFamily {
    pub base: FamilyDescriptor,
    pub kappa: f64,
    pub t_kappa: Matrix,
    pub op: HyperOp,
    pub wpol: MatPoly,
    pub alpha_k: f64,
    pub beta_k: f64,
    pub certificates: Certificates,
}

impl DeformedFamily {
    /// Pointwise polynomial factor `psi0 T_k psi0^*`.
    pub fn wpol_at(&self, y: f64) -> Matrix {
        let p = self.base.psi0.eval(y);
        p.matmul(&self.t_kappa).matmul(&p.adjoint())
    }

    /// Full weight value `y^{beta+k} (1-y)^{alpha+k} psi0 T_k psi0^*`.
    pub fn weight_at(&self, y: f64) -> Matrix {
        self.wpol_at(y)
            .scale_re(y.powf(self.beta_k) * (1.0 - y).powf(self.alpha_k))
    }

    /// The weight as a weighted matrix polynomial (fitted factor).
    pub fn weight(&self) -> WeightedMatPoly {
        WeightedMatPoly::new(self.beta_k, self.alpha_k, self.wpol.clone())
    }

    pub fn f_at(&self, y: f64) -> Result<Matrix> {
        deform_f(&self.base, self.kappa, y)
    }

    pub fn drift_coeffs(&self) -> (f64, f64) {
        (self.beta_k + 1.0, -(self.alpha_k + self.beta_k + 2.0))
    }
}

/// Assemble the deformed family at level `kappa`, rejecting it when the
/// solved pairing is not positive or the weight factor fails to be a
/// polynomial of the declared degree.
pub fn deformed_weight(fam: &FamilyDescriptor, kappa: f64) -> Result<DeformedFamily> {
    let (t_kappa, cert) = solve_t(fam, kappa)?;
    if !cert.positive {
        return Err(Error::Inconsistent(format!(
            "pairing diagonal not positive for {} {} at kappa={kappa}",
            fam.name, fam.params
        )));
    }
    let psi = &fam.psi0;
    let (wpol, fit_residual) = fit_function(
        |y| {
            let p = psi.eval(y);
            p.matmul(&t_kappa).matmul(&p.adjoint())
        },
        fam.wpol_degree,
    )?;
    if fit_residual > 1e-8 * wpol.max_norm().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "weight factor at kappa={kappa} is not polynomial: fit residual {fit_residual:.3e}"
        )));
    }
    // symmetry certificate on a finer grid than the solver nodes
    let mut tsym = 0.0f64;
    for k in 0..50 {
        let y = FIT_LO + (FIT_HI - FIT_LO) * (k as f64 + 0.5) / 50.0;
        let f = deform_f(fam, kappa, y)?;
        let lhs = t_kappa.matmul(&f.adjoint());
        let rhs = f.matmul(&t_kappa);
        tsym = tsym.max(lhs.max_diff(&rhs) / f.max_norm().max(1e-300));
    }
    Ok(DeformedFamily {
        base: fam.clone(),
        kappa,
        t_kappa,
        op: deform_operator(fam, kappa),
        wpol,
        alpha_k: fam.alpha + kappa,
        beta_k: fam.beta + kappa,
        certificates: Certificates {
            tsym_residual: tsym,
            wpol_fit_residual: fit_residual,
            positivity: cert.positive,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{family_a1, family_c1, family_scalar_jacobi, family_su2};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_poly(rng: &mut StdRng, size: usize, degree: usize) -> MatPoly {
        MatPoly::from_coeffs(
            size,
            (0..=degree)
                .map(|_| {
                    Matrix::from_fn(size, |_, _| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    })
                })
                .collect(),
        )
    }

    #[test]
    fn deform_operator_examples() {
        let su2 = family_su2(1).unwrap();
        let d0 = deform_operator(&su2, 0.0);
        assert!(d0.c.max_diff(&su2.c) == 0.0);
        assert!(d0.v.max_diff(&su2.v) == 0.0);

        let d1 = deform_operator(&su2, 1.0);
        assert!(d1.u.max_diff(&Matrix::identity(2).scale_re(6.0)) < 1e-14);

        let jac = family_scalar_jacobi(0.0, 0.0).unwrap();
        let d2 = deform_operator(&jac, 2.0);
        assert!((d2.c[(0, 0)].re - 3.0).abs() < 1e-14);
        assert!((d2.u[(0, 0)].re - 6.0).abs() < 1e-14);
        assert!((d2.v[(0, 0)].re - 6.0).abs() < 1e-14);
    }

    #[test]
    fn intertwining_at_coefficient_level() {
        let mut rng = StdRng::seed_from_u64(23);
        let fams = [
            family_su2(2).unwrap(),
            family_a1(3, 1, 1).unwrap(),
            family_c1(3).unwrap(),
            family_scalar_jacobi(0.5, 0.25).unwrap(),
        ];
        for fam in &fams {
            for &kappa in &[0.0, 0.5, 1.0, 2.0] {
                for _ in 0..8 {
                    let deg = rng.gen_range(1..=8);
                    let p = random_poly(&mut rng, fam.size, deg);
                    let lhs = deform_operator(fam, kappa).apply(&p).derivative();
                    let rhs = deform_operator(fam, kappa + 1.0).apply(&p.derivative());
                    let scale = lhs.max_norm().max(1.0);
                    assert!(
                        lhs.max_diff(&rhs) < 1e-12 * scale,
                        "{} kappa={kappa}",
                        fam.name
                    );
                }
            }
        }
    }

    #[test]
    fn iterated_intertwining() {
        let mut rng = StdRng::seed_from_u64(29);
        let fam = family_su2(1).unwrap();
        for k in 1..=3usize {
            let p = random_poly(&mut rng, fam.size, 8);
            let mut lhs = deform_operator(&fam, 0.0).apply(&p);
            for _ in 0..k {
                lhs = lhs.derivative();
            }
            let mut dp = p.clone();
            for _ in 0..k {
                dp = dp.derivative();
            }
            let rhs = deform_operator(&fam, k as f64).apply(&dp);
            assert!(lhs.max_diff(&rhs) < 1e-12 * lhs.max_norm().max(1.0));
        }
    }

    #[test]
    fn canonical_f_matches_stored_base() {
        for fam in [
            family_su2(1).unwrap(),
            family_su2(2).unwrap(),
            family_a1(3, 1, 1).unwrap(),
            family_a1(4, 2, 1).unwrap(),
            family_c1(3).unwrap(),
            family_c1(5).unwrap(),
        ] {
            for &y in &[0.15, 0.4, 0.5, 0.73] {
                let canonical = deform_f(&fam, 0.0, y).unwrap();
                let stored = fam.f_base(y);
                let scale = stored.max_norm().max(1.0);
                assert!(
                    canonical.max_diff(&stored) < 1e-9 * scale,
                    "{} {} at y={y}: {:?} vs {:?}",
                    fam.name,
                    fam.params,
                    canonical,
                    stored
                );
            }
        }
    }

    #[test]
    fn canonical_f_agrees_with_minus_increment() {
        for fam in [
            family_su2(2).unwrap(),
            family_a1(3, 1, 2).unwrap(),
            family_c1(4).unwrap(),
        ] {
            for &kappa in &[0.5, 1.0, 2.0] {
                for &y in &[0.2, 0.55, 0.8] {
                    let canonical = deform_f(&fam, kappa, y).unwrap();
                    let minus =
                        deform_f_increment(&fam, kappa, y, DeformationSign::Minus).unwrap();
                    let plus = deform_f_increment(&fam, kappa, y, DeformationSign::Plus).unwrap();
                    let scale = canonical.max_norm().max(1.0);
                    assert!(canonical.max_diff(&minus) < 1e-9 * scale);
                    assert!(canonical.max_diff(&plus) > 1e-3 * scale);
                }
            }
        }
    }

    #[test]
    fn scalar_deformed_potential_is_constant() {
        let jac = family_scalar_jacobi(0.0, 0.0).unwrap();
        for &kappa in &[0.5, 1.0, 3.0] {
            let want = -kappa * 2.0 - kappa * (kappa - 1.0);
            for &y in &[0.2, 0.7] {
                let f = deform_f(&jac, kappa, y).unwrap();
                assert!((f[(0, 0)].re - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn su2_potential_closed_form_deformation() {
        // F_nu = F - (nu-1)(2l+nu+1) + (nu-1)(1-2y)/(2y(1-y)) (S^t - l + 2ly)
        let two_ell = 2u64;
        let fam = family_su2(two_ell).unwrap();
        let n = fam.size;
        let ell = two_ell as f64 / 2.0;
        let s_t = Matrix::from_real_fn(n, |r, c| {
            if c + 1 == r {
                (two_ell as f64 - c as f64) / 2.0
            } else if c == r + 1 {
                c as f64 / 2.0
            } else {
                0.0
            }
        });
        for &nu in &[1.5, 2.0, 3.0] {
            let kappa = nu - 1.0;
            for &y in &[0.2, 0.4, 0.7] {
                let lhs = deform_f(&fam, kappa, y).unwrap();
                let shift = Matrix::scalar(n, c64(-(nu - 1.0) * (2.0 * ell + nu + 1.0)));
                let log_term = s_t
                    .sub(&Matrix::scalar(n, c64(ell)))
                    .add(&Matrix::scalar(n, c64(2.0 * ell * y)))
                    .scale_re((nu - 1.0) * (1.0 - 2.0 * y) / (2.0 * y * (1.0 - y)));
                let rhs = fam.f_base(y).add(&shift).add(&log_term);
                assert!(
                    lhs.max_diff(&rhs) < 1e-10 * rhs.max_norm().max(1.0),
                    "nu={nu} y={y}"
                );
            }
        }
    }

    #[test]
    fn su2_pairing_formula() {
        // two_ell = 2, kappa = nu - 1: diag(1, 2 nu/(nu+1), 1)
        let fam = family_su2(2).unwrap();
        for &nu in &[1.0f64, 2.0, 3.5] {
            let (t, cert) = solve_t(&fam, nu - 1.0).unwrap();
            assert!(cert.positive && cert.tridiagonal_route);
            let expect = Matrix::real_diagonal(&[1.0, 2.0 * nu / (nu + 1.0), 1.0]);
            assert!(t.max_diff(&expect) < 1e-10, "nu={nu}: {t:?}");
        }
    }

    #[test]
    fn a1_and_c1_pairing_displays() {
        let a1 = family_a1(3, 1, 1).unwrap();
        let (t, _) = solve_t(&a1, 0.5).unwrap();
        assert!(t.max_diff(&Matrix::real_diagonal(&[1.0, 2.0 / 1.5])) < 1e-10);

        let c1 = family_c1(4).unwrap();
        let (t, _) = solve_t(&c1, 2.0).unwrap();
        assert!(t.max_diff(&Matrix::real_diagonal(&[1.0, 1.0])) < 1e-10);

        // kappa = 0 reduces to the base pairing
        let (t0, _) = solve_t(&c1, 0.0).unwrap();
        assert!(t0.max_diff(&c1.t) < 1e-10);
    }

    #[test]
    fn deformed_weight_reduces_to_base_at_zero() {
        for fam in [
            family_su2(1).unwrap(),
            family_a1(3, 1, 1).unwrap(),
            family_c1(3).unwrap(),
        ] {
            let df = deformed_weight(&fam, 0.0).unwrap();
            assert!(df.t_kappa.max_diff(&fam.t) < 1e-10);
            for &y in &[0.2, 0.5, 0.8] {
                let direct = fam.wpol_at(y);
                assert!(df.wpol.eval(y).max_diff(&direct) < 1e-11 * direct.max_norm().max(1.0));
            }
        }
    }

    #[test]
    fn c1_weight_factor_matches_display_up_to_scale() {
        // The printed deformed weight for this family carries an overall
        // factor two relative to psi0 T_k psi0^*; entry (0,0) of the print
        // is 2(2y + y k + 2n - 4)/(2 + k).
        let fam = family_c1(3).unwrap();
        let df = deformed_weight(&fam, 0.0).unwrap();
        let display_00 = |y: f64| 2.0 * (2.0 * y + 2.0) / 2.0; // = 2y + 2
        for &y in &[0.3, 0.6] {
            let ours = df.wpol.eval(y)[(0, 0)].re;
            assert!((2.0 * ours - display_00(y)).abs() < 1e-10);
        }
    }

    #[test]
    fn su2_small_weight_factor_degree_one() {
        let fam = family_su2(1).unwrap();
        for &kappa in &[0.0, 0.7, 2.0] {
            let df = deformed_weight(&fam, kappa).unwrap();
            assert_eq!(df.wpol.degree(), 1, "kappa={kappa}");
            assert!(df.certificates.wpol_fit_residual < 1e-11);
        }
    }

    #[test]
    fn deformed_drift_matches_exponent_bookkeeping() {
        let fam = family_c1(3).unwrap();
        let df = deformed_weight(&fam, 1.5).unwrap();
        let (a0, a1c) = df.drift_coeffs();
        assert!((a0 - (1.0 + 1.5 + 1.0)).abs() < 1e-14);
        assert!((a1c + (3.0 + 1.0 + 3.0 + 2.0)).abs() < 1e-14);
        assert!((drift_at(&fam, 1.5, 0.25) - (a0 + a1c * 0.25)).abs() < 1e-14);
    }
}
