//! Exact power-series solution of the graph dynamics and the series partitioner.
//!
//! Each vertex `i` of a graph on `m` vertices is a unit point mass in `R^m`, starting at the
//! `i`-th unit vector with zero velocity. Every pair repels with force `1/|x_i - x_k|` and
//! adjacent pairs also attract with force `|x_i - x_k|`:
//!
//! ```text
//! x_i'' = sum_{k != i} (x_i - x_k) (1 / |x_i - x_k|^2 - h_ik),   X(0) = I,  X'(0) = 0.
//! ```
//!
//! The solution is even in `t`, so `X(t) = sum_n A_n t^(2n)`. With `R_n` the coefficients of
//! `1 / |x_i - x_k|^2` (zero on the diagonal) the coefficients satisfy
//!
//! ```text
//! A_{s+1}[i][j] = ( sum_k sum_{p<=s} (A_p[i][j] - A_p[k][j]) R_{s-p}[i][k]
//!                   - sum_k h_ik (A_s[i][j] - A_s[k][j]) ) / (2 (s+1) (2s+1))
//! R_s[i][k]     = -1/2 sum_{c=1..s} R_{s-c}[i][k] Q_c[i][k]
//! Q_c[i][k]     = sum_l sum_{d=0..c} (A_d[i][l] - A_d[k][l]) (A_{c-d}[i][l] - A_{c-d}[k][l])
//! ```
//!
//! starting from `A_0 = I`, `R_0 = (J - I) / 2`. All arithmetic is exact and kept reduced.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::partition::Partition;

pub type RationalMatrix = Matrix<BigRational>;

/// How many series terms the partitioner computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub s_max: usize,
    /// Stop as soon as one extra term leaves the induced partition unchanged.
    pub early_stop: bool,
}

impl TruncationPolicy {
    pub fn fixed(s_max: usize) -> Self {
        TruncationPolicy {
            s_max,
            early_stop: false,
        }
    }

    /// `m^2` terms, the depth used by the series partitioning algorithm.
    pub fn full(m: usize) -> Self {
        TruncationPolicy::fixed((m * m).max(1))
    }
}

/// Coefficient matrices `A_0..=A_s` and `R_0..=R_s` for one graph.
#[derive(Clone, Debug)]
pub struct SeriesCoefficients {
    m: usize,
    a: Vec<RationalMatrix>,
    r: Vec<RationalMatrix>,
    // Q_c for c >= 1; index 0 holds the constant term 2 off the diagonal
    q: Vec<RationalMatrix>,
    r_row_sums: Vec<Vec<BigRational>>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl SeriesCoefficients {
    /// The `n = 0` terms: `A_0 = I`, `R_0 = (J - I) / 2`.
    pub fn initial(m: usize) -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let a0 = Matrix::from_fn(m, |i, j| if i == j { rat(1) } else { rat(0) });
        let r0 = Matrix::from_fn(m, |i, k| if i == k { rat(0) } else { half.clone() });
        let q0 = Matrix::from_fn(m, |i, k| if i == k { rat(0) } else { rat(2) });
        let row_sum = vec![BigRational::new(BigInt::from(m.saturating_sub(1)), BigInt::from(2)); m];
        SeriesCoefficients {
            m,
            a: vec![a0],
            r: vec![r0],
            q: vec![q0],
            r_row_sums: vec![row_sum],
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Index of the last computed term.
    pub fn last_term(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self) -> &[RationalMatrix] {
        &self.a
    }

    pub fn r(&self) -> &[RationalMatrix] {
        &self.r
    }

    /// Keeps only terms `0..=s`.
    pub fn truncated(&self, s: usize) -> SeriesCoefficients {
        let keep = (s + 1).min(self.a.len());
        SeriesCoefficients {
            m: self.m,
            a: self.a[..keep].to_vec(),
            r: self.r[..keep].to_vec(),
            q: self.q[..keep].to_vec(),
            r_row_sums: self.r_row_sums[..keep].to_vec(),
        }
    }

    /// Appends `A_{s+1}` (from `A_0..=A_s`, `R_0..=R_s`) and then `R_{s+1}`.
    pub fn extend(&mut self, g: &Graph) -> Result<()> {
        let m = self.m;
        if g.order() != m {
            return Err(Error::Contract(format!(
                "series of dimension {m} extended with a graph of order {}",
                g.order()
            )));
        }
        let s = self.last_term();
        let a_next = self.next_a(g, s);
        self.a.push(a_next);

        let c = s + 1;
        let mut q_c = Matrix::filled(m, rat(0));
        let mut r_c = Matrix::filled(m, rat(0));
        for i in 0..m {
            for k in (i + 1)..m {
                let diffs: Vec<Vec<BigRational>> = (0..=c)
                    .map(|d| {
                        (0..m)
                            .map(|l| &self.a[d][(i, l)] - &self.a[d][(k, l)])
                            .collect()
                    })
                    .collect();
                let mut qv = BigRational::zero();
                for l in 0..m {
                    for d in 0..=c / 2 {
                        let prod = &diffs[d][l] * &diffs[c - d][l];
                        if 2 * d == c {
                            qv += prod;
                        } else {
                            qv += prod * rat(2);
                        }
                    }
                }
                q_c[(i, k)] = qv.clone();
                q_c[(k, i)] = qv.clone();
                let mut acc = &self.r[0][(i, k)] * &qv;
                for cc in 1..c {
                    acc += &self.r[c - cc][(i, k)] * &self.q[cc][(i, k)];
                }
                let rv = -acc / rat(2);
                r_c[(i, k)] = rv.clone();
                r_c[(k, i)] = rv;
            }
        }
        let sums = (0..m)
            .map(|i| {
                r_c.row(i)
                    .iter()
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect();
        self.q.push(q_c);
        self.r.push(r_c);
        self.r_row_sums.push(sums);
        Ok(())
    }

    fn next_a(&self, g: &Graph, s: usize) -> RationalMatrix {
        let m = self.m;
        let scale = rat(2 * (s as i64 + 1) * (2 * s as i64 + 1));
        let degrees = g.degrees();
        Matrix::from_fn(m, |i, j| {
            let mut acc = BigRational::zero();
            for p in 0..=s {
                let rr = &self.r[s - p];
                let ap = &self.a[p];
                // sum_k (a_ij - a_kj) r_ik = a_ij * rowsum_i - sum_k r_ik a_kj
                if !ap[(i, j)].is_zero() {
                    acc += &ap[(i, j)] * &self.r_row_sums[s - p][i];
                }
                for k in 0..m {
                    if k != i && !ap[(k, j)].is_zero() {
                        acc -= &rr[(i, k)] * &ap[(k, j)];
                    }
                }
            }
            let a_s = &self.a[s];
            let mut spring = &a_s[(i, j)] * rat(degrees[i] as i64);
            for k in g.neighbors(i) {
                spring -= &a_s[(k, j)];
            }
            (acc - spring) / &scale
        })
    }
}

/// Appends the next term to `coeffs`.
pub fn series_extend(g: &Graph, mut coeffs: SeriesCoefficients) -> Result<SeriesCoefficients> {
    coeffs.extend(g)?;
    Ok(coeffs)
}

/// Coefficients through `policy.s_max`, or fewer when `early_stop` finds a stable partition.
pub fn series_up_to(g: &Graph, policy: TruncationPolicy) -> SeriesCoefficients {
    run_series(g, policy).0
}

/// Coefficients together with the partition their rows induce.
pub fn run_series(g: &Graph, policy: TruncationPolicy) -> (SeriesCoefficients, Partition) {
    let mut coeffs = SeriesCoefficients::initial(g.order());
    let mut keys: Vec<Vec<Vec<BigRational>>> = (0..g.order())
        .map(|v| vec![sorted_row(&coeffs.a[0], v)])
        .collect();
    let mut partition = Partition::from_keys(&keys);
    while coeffs.last_term() < policy.s_max {
        coeffs.extend(g).expect("dimension matches by construction");
        let newest = coeffs.a.last().unwrap();
        for (v, key) in keys.iter_mut().enumerate() {
            key.push(sorted_row(newest, v));
        }
        let next = Partition::from_keys(&keys);
        let stable = next == partition;
        partition = next;
        if policy.early_stop && stable {
            break;
        }
    }
    (coeffs, partition)
}

fn sorted_row(mat: &RationalMatrix, v: usize) -> Vec<BigRational> {
    let mut row = mat.row(v).to_vec();
    row.sort_unstable();
    row
}

/// For each matrix in `matrices`, the sorted multiset of row `vertex`'s entries.
///
/// Two rows of one matrix are permutation equivalent iff these multisets agree.
pub fn row_signature(matrices: &[RationalMatrix], vertex: usize) -> Vec<Vec<BigRational>> {
    matrices.iter().map(|mat| sorted_row(mat, vertex)).collect()
}

/// Vertices whose rows of `A_s` are permutation equivalent for every computed `s`.
pub fn a1_partition(g: &Graph, policy: TruncationPolicy) -> Partition {
    run_series(g, policy).1
}

/// Scaled coefficients `2^n (2n)! A_n` and `2^(n+1) (2n)! R_n`, which must be integers.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledIntegers {
    pub alpha: Vec<Matrix<BigInt>>,
    pub rho: Vec<Matrix<BigInt>>,
}

pub fn scaled_integer_view(coeffs: &SeriesCoefficients) -> Result<ScaledIntegers> {
    let mut alpha = Vec::new();
    let mut rho = Vec::new();
    let mut factorial = BigInt::one();
    for n in 0..=coeffs.last_term() {
        if n > 0 {
            factorial *= BigInt::from(2 * n - 1) * BigInt::from(2 * n);
        }
        let scale_a = (BigInt::one() << n) * &factorial;
        let scale_r = &scale_a * BigInt::from(2);
        alpha.push(scale_matrix(&coeffs.a[n], &scale_a, "A", n)?);
        rho.push(scale_matrix(&coeffs.r[n], &scale_r, "R", n)?);
    }
    Ok(ScaledIntegers { alpha, rho })
}

fn scale_matrix(
    mat: &RationalMatrix,
    scale: &BigInt,
    name: &'static str,
    term: usize,
) -> Result<Matrix<BigInt>> {
    let m = mat.dim();
    let mut out = Matrix::filled(m, BigInt::zero());
    for i in 0..m {
        for j in 0..m {
            let x = &mat[(i, j)];
            let (q, rem) = (x.numer() * scale).div_rem(x.denom());
            if !rem.is_zero() {
                return Err(Error::Integrality {
                    matrix: name,
                    term,
                    row: i,
                    col: j,
                    value: format!("{x} * {scale}"),
                });
            }
            out[(i, j)] = q;
        }
    }
    Ok(out)
}

/// `sum_n A_n t^(2n)` in floating point.
pub fn evaluate_truncated(coeffs: &SeriesCoefficients, t: f64) -> Matrix<f64> {
    let m = coeffs.m;
    let t2 = t * t;
    let mut out = Matrix::filled(m, 0.0);
    // Horner from the highest term
    for a in coeffs.a.iter().rev() {
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = out[(i, j)] * t2 + a[(i, j)].to_f64().unwrap_or(f64::NAN);
            }
        }
    }
    out
}

/// Largest number of decimal digits in any numerator or denominator of `A_n`, per term.
pub fn coefficient_digits(coeffs: &SeriesCoefficients) -> Vec<usize> {
    coeffs
        .a
        .iter()
        .map(|mat| {
            mat.as_slice()
                .iter()
                .map(|x| digits(x.numer()).max(digits(x.denom())))
                .max()
                .unwrap_or(0)
        })
        .collect()
}

fn digits(x: &BigInt) -> usize {
    x.abs().to_str_radix(10).len()
}

/// One exact coefficient, as dumped for external verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientRecord {
    pub matrix: &'static str,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub num: String,
    pub den: String,
}

/// Every entry of every `A_n` then every `R_n`, in `(n, i, j)` order.
pub fn coefficient_records(coeffs: &SeriesCoefficients) -> Vec<CoefficientRecord> {
    let mut out = Vec::new();
    for (name, mats) in [("A", &coeffs.a), ("R", &coeffs.r)] {
        for (n, mat) in mats.iter().enumerate() {
            for i in 0..coeffs.m {
                for j in 0..coeffs.m {
                    let x = &mat[(i, j)];
                    out.push(CoefficientRecord {
                        matrix: name,
                        n,
                        i,
                        j,
                        num: x.numer().to_string(),
                        den: x.denom().to_string(),
                    });
                }
            }
        }
    }
    out
}
