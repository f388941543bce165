//! Exact rational Krawtchouk polynomials at parameter 1/2, the kernel
//! matrices built from them, and exact verification of the discrete
//! orthogonality and recurrence identities they satisfy.
//!
//! Everything here is arbitrary-precision rational arithmetic: these checks
//! are the anti-drift oracle layer, so no tolerance is involved anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Krawtchouk polynomial `K_n(x; 1/2, N)` as the terminating hypergeometric
/// sum `sum_k (-n)_k (-x)_k / ((-N)_k k!) 2^k`, evaluated exactly.
pub fn krawtchouk(n: u64, x: i64, big_n: u64) -> Result<Rational> {
    if n > big_n {
        return Err(Error::InvalidParameter(format!(
            "degree {n} exceeds N = {big_n}"
        )));
    }
    let mut total = Rational::one();
    let mut term = Rational::one();
    for k in 0..n {
        // multiply the k-th term by the ratio to reach term k+1
        let kf = k as i64;
        let num = BigInt::from(-(n as i64) + kf) * BigInt::from(-x + kf) * BigInt::from(2);
        let den = BigInt::from(-(big_n as i64) + kf) * BigInt::from(kf + 1);
        term *= Rational::new(num, den);
        if term.is_zero() {
            break;
        }
        total += &term;
    }
    Ok(total)
}

/// Small dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    pub n: usize,
    pub rows: Vec<Vec<Rational>>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        RatMatrix {
            n,
            rows: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.rows[i][i] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: Vec<Rational>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n);
        for (i, e) in entries.into_iter().enumerate() {
            m.rows[i][i] = e;
        }
        m
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, other.n);
        let mut out = RatMatrix::zeros(self.n);
        for r in 0..self.n {
            for k in 0..self.n {
                if self.rows[r][k].is_zero() {
                    continue;
                }
                for c in 0..self.n {
                    let prod = &self.rows[r][k] * &other.rows[k][c];
                    out.rows[r][c] += prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        let mut out = self.clone();
        for row in &mut out.rows {
            for e in row {
                *e *= s;
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == RatMatrix::identity(self.n)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(rational_to_f64).collect())
            .collect()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // stay exact for small values, fall back to string parsing for large
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) => n / d,
        _ => f64::NAN,
    }
}

/// `K`, `M` and the closed-form inverse `K^{-1} = 2^{-N} M K M` for a given
/// `N = 2 ell`, verified exactly on construction.
#[derive(Clone, Debug)]
pub struct KrawtchoukKernel {
    pub two_ell: u64,
    /// `K[i][j] = K_j(i)`.
    pub k: RatMatrix,
    /// Diagonal of binomials `M[j][j] = C(N, j)`.
    pub m: RatMatrix,
    pub kinv: RatMatrix,
}

pub fn build_kernel(two_ell: u64) -> Result<KrawtchoukKernel> {
    let n = (two_ell + 1) as usize;
    let mut k = RatMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            k.rows[i][j] = krawtchouk(j as u64, i as i64, two_ell)?;
        }
    }
    let m = RatMatrix::diagonal(
        (0..n)
            .map(|j| Rational::from_integer(binomial(two_ell, j as u64)))
            .collect(),
    );
    let pow = Rational::new(BigInt::one(), BigInt::from(2).pow(two_ell as u32));
    let kinv = m.mul(&k).mul(&m).scale(&pow);
    if !k.mul(&kinv).is_identity() {
        return Err(Error::Inconsistent(format!(
            "closed-form inverse failed for 2l = {two_ell}"
        )));
    }
    Ok(KrawtchoukKernel { two_ell, k, m, kinv })
}

/// One exactly-checked identity: how many index tuples were checked and
/// which ones failed, with both sides as exact rationals.
#[derive(Clone, Debug)]
pub struct ExactCheck {
    pub identity: String,
    pub checks: usize,
    pub failures: Vec<ExactFailure>,
}

#[derive(Clone, Debug)]
pub struct ExactFailure {
    pub indices: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

impl ExactCheck {
    fn new(identity: &str) -> Self {
        ExactCheck {
            identity: identity.to_string(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, indices: Vec<i64>, lhs: Rational, rhs: Rational) {
        self.checks += 1;
        if lhs != rhs {
            self.failures.push(ExactFailure {
                indices,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn ell_of(two_ell: u64) -> Rational {
    rat(two_ell as i64, 2)
}

/// Discrete orthogonality of the kernel, plain and with weight factors `i`
/// and `i^2`, all verified exactly for every index pair.
pub fn verify_orthogonality_identities(two_ell: u64) -> Result<Vec<ExactCheck>> {
    let kernel = build_kernel(two_ell)?;
    let n = (two_ell + 1) as usize;
    let ell = ell_of(two_ell);
    let two_pow = Rational::from_integer(BigInt::from(2).pow(two_ell as u32));
    let binom = |j: usize| Rational::from_integer(binomial(two_ell, j as u64));

    let weighted_sum = |power: u32, a: usize, b: usize| -> Rational {
        let mut acc = Rational::zero();
        for i in 0..n {
            let mut t = binom(i) * &kernel.k.rows[i][a] * &kernel.k.rows[i][b];
            for _ in 0..power {
                t *= rat_int(i as i64);
            }
            acc += t;
        }
        acc
    };

    let mut plain = ExactCheck::new("krawtchouk-orthogonality");
    for a in 0..n {
        for b in 0..n {
            let lhs = weighted_sum(0, a, b);
            let rhs = if a == b {
                &two_pow / binom(a)
            } else {
                Rational::zero()
            };
            plain.record(vec![a as i64, b as i64], lhs, rhs);
        }
    }

    let mut first = ExactCheck::new("krawtchouk-orthogonality-weight-i");
    for k in 0..n {
        for j in 0..n {
            let lhs = weighted_sum(1, k, j);
            let scale = &two_pow / binom(k);
            let branch = if j == k + 1 {
                -rat(k as i64 + 1, 2)
            } else if j == k {
                ell.clone()
            } else if j + 1 == k {
                -rat(two_ell as i64 - k as i64 + 1, 2)
            } else {
                Rational::zero()
            };
            first.record(vec![k as i64, j as i64], lhs, scale * branch);
        }
    }

    let mut second = ExactCheck::new("krawtchouk-orthogonality-weight-i2");
    for k in 0..n {
        for j in 0..n {
            let lhs = weighted_sum(2, k, j);
            let scale = &two_pow / binom(k);
            let ki = k as i64;
            let ni = two_ell as i64;
            let branch = if j == k + 2 {
                rat((ki + 1) * (ki + 2), 4)
            } else if j == k + 1 {
                -(&ell * rat_int(ki + 1))
            } else if j == k {
                // ell(ell + 1/2) + k(ell - k/2)
                &ell * (&ell + rat(1, 2)) + rat_int(ki) * (&ell - rat(ki, 2))
            } else if j + 1 == k {
                -(&ell * rat_int(ni - ki + 1))
            } else if j + 2 == k {
                rat((ni - ki + 1) * (ni - ki + 2), 4)
            } else {
                Rational::zero()
            };
            second.record(vec![k as i64, j as i64], lhs, scale * branch);
        }
    }

    Ok(vec![plain, first, second])
}

/// Forward/backward argument recurrences, the three-term recurrence in the
/// degree, their sum (the difference equation), and kernel self-duality.
/// Terms whose prefactor vanishes at the index boundary are never evaluated.
pub fn verify_recurrences(two_ell: u64) -> Result<Vec<ExactCheck>> {
    let kernel = build_kernel(two_ell)?;
    let n = (two_ell + 1) as usize;
    let ell = ell_of(two_ell);
    let ni = two_ell as i64;
    let kv = |deg: i64, x: i64| -> Rational {
        // callers guarantee in-range indices whenever the prefactor is nonzero
        kernel.k.rows[x as usize][deg as usize].clone()
    };
    let guarded = |pref: Rational, deg: i64, x: i64| -> Rational {
        if pref.is_zero() {
            Rational::zero()
        } else {
            pref * kv(deg, x)
        }
    };

    let mut forward = ExactCheck::new("krawtchouk-forward-argument-recurrence");
    let mut backward = ExactCheck::new("krawtchouk-backward-argument-recurrence");
    let mut sum_eq = ExactCheck::new("krawtchouk-difference-equation-sum");
    for k in 0..=ni {
        for i in 0..=ni {
            let rhs_fwd = guarded(rat(ni - k, 2), k + 1, i)
                + (&ell - rat_int(k)) * kv(k, i)
                - guarded(rat(k, 2), k - 1, i);
            let lhs_fwd = guarded(rat_int(ni - i), k, i + 1);
            forward.record(vec![k, i], lhs_fwd, rhs_fwd);

            let rhs_bwd = -guarded(rat(ni - k, 2), k + 1, i)
                + (&ell - rat_int(k)) * kv(k, i)
                + guarded(rat(k, 2), k - 1, i);
            let lhs_bwd = guarded(rat_int(i), k, i - 1);
            backward.record(vec![k, i], lhs_bwd, rhs_bwd);

            // the two argument recurrences add up to the difference equation
            let lhs_sum = guarded(rat_int(ni - i), k, i + 1) + guarded(rat_int(i), k, i - 1);
            let rhs_sum = rat_int(2) * (&ell - rat_int(k)) * kv(k, i);
            sum_eq.record(vec![k, i], lhs_sum, rhs_sum);
        }
    }

    let mut three_term = ExactCheck::new("krawtchouk-three-term-recurrence");
    for deg in 0..=ni {
        for i in 0..=ni {
            let lhs = -rat_int(i) * kv(deg, i);
            let rhs = guarded(rat(ni - deg, 2), deg + 1, i) - rat(ni, 2) * kv(deg, i)
                + guarded(rat(deg, 2), deg - 1, i);
            three_term.record(vec![deg, i], lhs, rhs);
        }
    }

    // self-duality at parameter 1/2: the terminating hypergeometric sum is
    // symmetric in degree and argument, so the kernel is a symmetric matrix
    let mut duality = ExactCheck::new("krawtchouk-self-duality");
    for i in 0..n {
        for j in 0..n {
            let lhs = kernel.k.rows[i][j].clone();
            let rhs = kernel.k.rows[j][i].clone();
            duality.record(vec![i as i64, j as i64], lhs, rhs);
        }
    }

    Ok(vec![forward, backward, sum_eq, three_term, duality])
}

/// The tridiagonal lowering/raising matrix whose eigenvectors are the
/// kernel columns: sub-diagonal `i/2`, super-diagonal `(N - i)/2`.
pub fn s_matrix(two_ell: u64) -> RatMatrix {
    let n = (two_ell + 1) as usize;
    let mut s = RatMatrix::zeros(n);
    for i in 0..n {
        if i >= 1 {
            s.rows[i][i - 1] = rat(i as i64, 2);
        }
        if i + 1 < n {
            s.rows[i][i + 1] = rat(two_ell as i64 - i as i64, 2);
        }
    }
    s
}

/// Outcome of the eigenvector check, including which of the two candidate
/// eigenvalue orderings actually holds for the kernel columns.
#[derive(Clone, Debug)]
pub struct SDiagReport {
    pub check: ExactCheck,
    /// Eigenvalue attached to column `j`, as a descriptive string.
    pub convention: String,
}

/// Verify exactly that each column of `K` is an eigenvector of the
/// tridiagonal matrix, and determine the eigenvalue ordering empirically.
pub fn check_s_diagonalization(two_ell: u64) -> Result<SDiagReport> {
    let kernel = build_kernel(two_ell)?;
    let s = s_matrix(two_ell);
    let n = (two_ell + 1) as usize;
    let ell = ell_of(two_ell);

    let column_eigenvalue = |j: usize| -> Option<Rational> {
        // S * col_j componentwise against col_j
        let mut candidate: Option<Rational> = None;
        for r in 0..n {
            let mut sv = Rational::zero();
            for c in 0..n {
                sv += &s.rows[r][c] * &kernel.k.rows[c][j];
            }
            let kv = &kernel.k.rows[r][j];
            if kv.is_zero() {
                if !sv.is_zero() {
                    return None;
                }
                continue;
            }
            let ratio = sv / kv;
            match &candidate {
                None => candidate = Some(ratio),
                Some(prev) if *prev == ratio => {}
                _ => return None,
            }
        }
        candidate
    };

    let mut check = ExactCheck::new("kernel-columns-diagonalize-tridiagonal");
    let mut descending = true;
    let mut ascending = true;
    for j in 0..n {
        let expected_desc = &ell - rat_int(j as i64);
        match column_eigenvalue(j) {
            Some(ev) => {
                if ev != expected_desc {
                    descending = false;
                }
                if ev != -&expected_desc {
                    ascending = false;
                }
                check.record(vec![j as i64], ev, expected_desc);
            }
            None => {
                check.checks += 1;
                check.failures.push(ExactFailure {
                    indices: vec![j as i64],
                    lhs: "not an eigenvector".into(),
                    rhs: expected_desc.to_string(),
                });
                descending = false;
                ascending = false;
            }
        }
    }
    let convention = if descending {
        "column j has eigenvalue ell - j (descending ell..-ell)".to_string()
    } else if ascending {
        "column j has eigenvalue j - ell (ascending -ell..ell)".to_string()
    } else {
        "columns are not eigenvectors under either ordering".to_string()
    };
    Ok(SDiagReport { check, convention })
}
