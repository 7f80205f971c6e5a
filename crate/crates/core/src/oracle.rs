//! Ground-truth checks for small instances: exact column independence,
//! null-space sparsity, and the null space property via linear programs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rational_null_space, small_integer_rank};
use crate::lp::LinearProgram;
use crate::matrix::MeasurementMatrix;
use crate::recovery::{binomial, for_each_subset};

pub const INDEPENDENCE_SUBSET_LIMIT: u128 = 10_000_000;
pub const NSP_LP_LIMIT: u128 = 100_000;
pub const NSP_MARGIN: f64 = 1e-9;

/// Dense integer copy of a 0-1 matrix.
pub fn dense_i64(a: &MeasurementMatrix) -> Vec<Vec<i64>> {
    a.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(i64::from).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceVerdict {
    pub independent: bool,
    /// First column set (lexicographic) whose columns are dependent.
    pub dependent_columns: Option<Vec<usize>>,
}

fn shape(a: &[Vec<i64>], n: usize) -> Result<()> {
    match a.iter().find(|r| r.len() != n) {
        Some(r) => Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
        }),
        None => Ok(()),
    }
}

/// True iff every `min(2k, n)` columns of `a` are linearly independent,
/// decided by exact integer rank on each column subset.
pub fn columns_2k_independent(a: &[Vec<i64>], n: usize, k: usize) -> Result<IndependenceVerdict> {
    shape(a, n)?;
    let s = (2 * k).min(n);
    let count = binomial(n, s);
    if count > INDEPENDENCE_SUBSET_LIMIT {
        return Err(Error::GuardExceeded {
            count,
            limit: INDEPENDENCE_SUBSET_LIMIT,
        });
    }
    let mut dependent = None;
    for_each_subset(n, s, |cols| {
        let sub: Vec<Vec<i64>> = a
            .iter()
            .map(|r| cols.iter().map(|&j| r[j]).collect())
            .collect();
        if small_integer_rank(&sub) < s {
            dependent = Some(cols.to_vec());
            return false;
        }
        true
    });
    Ok(IndependenceVerdict {
        independent: dependent.is_none(),
        dependent_columns: dependent,
    })
}

/// Scales a rational vector to a primitive integer vector.
fn integer_direction(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// True iff no nonzero null vector of `a` has at most `2k` nonzeros.
///
/// With `N` a basis of the null space, a null vector vanishing on a
/// coordinate set `Z` exists iff the rows of `N` indexed by `Z` are rank
/// deficient, so it suffices to test every `Z` of size `n − 2k`.
pub fn exhaustive_identifiability(a: &[Vec<i64>], n: usize, k: usize) -> Result<bool> {
    shape(a, n)?;
    let basis = rational_null_space(a, n);
    let d = basis.len();
    if d == 0 {
        return Ok(true);
    }
    if 2 * k >= n {
        return Ok(false);
    }
    let zeros = n - 2 * k;
    let count = binomial(n, zeros);
    if count > INDEPENDENCE_SUBSET_LIMIT {
        return Err(Error::GuardExceeded {
            count,
            limit: INDEPENDENCE_SUBSET_LIMIT,
        });
    }
    if zeros < d {
        return Ok(false);
    }
    // n × d integer matrix whose columns span the null space
    let cols: Vec<Vec<BigInt>> = basis.iter().map(|v| integer_direction(v)).collect();
    let nrows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let fits_i64 = nrows.iter().flatten().all(|v| v.bits() < 62);
    let mut ok = true;
    for_each_subset(n, zeros, |z| {
        let rank = if fits_i64 {
            let sub: Vec<Vec<i64>> = z
                .iter()
                .map(|&i| {
                    nrows[i]
                        .iter()
                        .map(|v| i64::try_from(v).expect("checked width"))
                        .collect()
                })
                .collect();
            small_integer_rank(&sub)
        } else {
            bigint_rank(z.iter().map(|&i| nrows[i].clone()).collect())
        };
        if rank < d {
            ok = false;
        }
        ok
    });
    Ok(ok)
}

fn bigint_rank(rows: Vec<Vec<BigInt>>) -> usize {
    let q: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    crate::linalg::rational_rank(&q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NspVerdict {
    pub holds: bool,
    /// Largest `‖w_T‖₁ / ‖w‖₁` over null vectors and `|T| ≤ k`.
    pub worst_ratio: f64,
    pub worst_support: Vec<usize>,
}

/// Certifies the null space property of order `k`: every nonzero `w` with
/// `a w = 0` satisfies `‖w_T‖₁ < ‖w‖₁ / 2` for all `|T| ≤ k`.
///
/// For each support `T` of size `min(k, n)` and sign pattern `s`, solves
/// `max s·w_T` subject to `a w = 0`, `‖w‖₁ ≤ 1`.
pub fn nsp_verify(a: &[Vec<f64>], n: usize, k: usize) -> Result<NspVerdict> {
    if let Some(r) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
        });
    }
    let t = k.min(n);
    // s and −s give the same optimum, so the first sign is fixed
    let patterns: u128 = if t == 0 { 1 } else { 1u128 << (t - 1) };
    let count = binomial(n, t) * patterns;
    if count > NSP_LP_LIMIT {
        return Err(Error::GuardExceeded {
            count,
            limit: NSP_LP_LIMIT,
        });
    }
    let mut worst = 0.0f64;
    let mut worst_support = Vec::new();
    let mut failure = None;
    if t > 0 {
        for_each_subset(n, t, |support| {
            for mask in 0..patterns as u64 {
                let mut c = vec![0.0; 2 * n];
                for (pos, &j) in support.iter().enumerate() {
                    let sign = if pos > 0 && mask >> (pos - 1) & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    c[j] = -sign;
                    c[n + j] = sign;
                }
                let mut lp = LinearProgram::new(c);
                for row in a {
                    let mut r = row.clone();
                    r.extend(row.iter().map(|v| -v));
                    lp.add_eq(r, 0.0);
                }
                lp.add_le(vec![1.0; 2 * n], 1.0);
                match lp.solve() {
                    Ok(sol) => {
                        let value = -sol.objective;
                        if value > worst {
                            worst = value;
                            worst_support = support.to_vec();
                        }
                    }
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                }
            }
            true
        });
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(NspVerdict {
        holds: worst < 0.5 - NSP_MARGIN,
        worst_ratio: worst,
        worst_support,
    })
}
