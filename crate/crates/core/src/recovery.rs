//! Sparse recovery: ℓ1 minimization, brute-force ℓ0 decoding, group-wise
//! sequential decoding, and decoding in the presence of hub errors.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{least_squares, lu_solve, rational_solve, rational_to_f64};
use crate::lp::LinearProgram;
use crate::matrix::{BinaryBlock, DecodeGroup, MeasurementMatrix};

/// Sparse vector as sorted `(index, value)` pairs with nonzero values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    n: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new(n: usize, mut entries: Vec<(usize, f64)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "index {} repeated",
                    w[0].0
                )));
            }
        }
        for &(i, v) in &entries {
            if i >= n {
                return Err(Error::NodeOutOfRange { node: i, n });
            }
            if v == 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "entry {i} must be finite and nonzero"
                )));
            }
        }
        Ok(SparseVector { n, entries })
    }

    /// Keeps entries with magnitude above `tol`.
    pub fn from_dense(x: &[f64], tol: f64) -> Self {
        SparseVector {
            n: x.len(),
            entries: x
                .iter()
                .copied()
                .enumerate()
                .filter(|(_, v)| v.abs() > tol)
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for &(i, v) in &self.entries {
            x[i] = v;
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryStatus {
    ExactFeasible,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub x_hat: Vec<f64>,
    pub status: RecoveryStatus,
    /// `‖A·x_hat − y‖∞`.
    pub residual: f64,
    pub l1_value: f64,
}

pub fn feasibility_tol(y: &[f64]) -> f64 {
    1e-8 * (1.0 + max_abs(y))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

fn residual(a: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    mat_vec(a, x)
        .iter()
        .zip(y)
        .fold(0.0, |acc, (p, q)| acc.max((p - q).abs()))
}

fn check_dims(a: &[Vec<f64>], y: &[f64]) -> Result<usize> {
    if a.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: y.len(),
        });
    }
    let n = a.first().map_or(0, Vec::len);
    if let Some(r) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
        });
    }
    Ok(n)
}

fn finish(a: &[Vec<f64>], x_hat: Vec<f64>, y: &[f64]) -> RecoveryResult {
    let res = residual(a, &x_hat, y);
    RecoveryResult {
        status: if res <= feasibility_tol(y) {
            RecoveryStatus::ExactFeasible
        } else {
            RecoveryStatus::Infeasible
        },
        residual: res,
        l1_value: x_hat.iter().map(|v| v.abs()).sum(),
        x_hat,
    }
}

/// Minimizes `‖z‖₁` subject to `a z = y` through the split `z = z⁺ − z⁻`.
/// An inconsistent system is reported as [`Error::Infeasible`].
pub fn l1_minimize(a: &[Vec<f64>], y: &[f64]) -> Result<RecoveryResult> {
    let n = check_dims(a, y)?;
    if a.is_empty() {
        return Ok(finish(a, vec![0.0; n], y));
    }
    let mut lp = LinearProgram::new(vec![1.0; 2 * n]);
    for (row, &yi) in a.iter().zip(y) {
        let mut r = row.clone();
        r.extend(row.iter().map(|v| -v));
        lp.add_eq(r, yi);
    }
    let sol = lp.solve()?;
    let x_hat: Vec<f64> = (0..n).map(|j| sol.x[j] - sol.x[n + j]).collect();
    Ok(finish(a, x_hat, y))
}

/// Minimum-support solutions found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L0Solutions {
    /// All solutions of the minimum support size, in support enumeration order.
    pub solutions: Vec<Vec<f64>>,
    pub min_support: Option<usize>,
    pub unique: bool,
}

pub const L0_SUPPORT_LIMIT: u128 = 1_000_000;

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `false`.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn small_integer(v: f64) -> Option<i64> {
    (v.fract() == 0.0 && v.abs() <= 2.0).then_some(v as i64)
}

/// Enumerates supports by increasing size and returns every solution of
/// `a z = y` with the smallest support, up to `k_max` nonzeros.
pub fn l0_oracle(a: &[Vec<f64>], y: &[f64], k_max: usize) -> Result<L0Solutions> {
    let n = check_dims(a, y)?;
    let k_max = k_max.min(n);
    let count: u128 = (0..=k_max).map(|s| binomial(n, s)).sum();
    if count > L0_SUPPORT_LIMIT {
        return Err(Error::GuardExceeded {
            count,
            limit: L0_SUPPORT_LIMIT,
        });
    }
    let exact_entries: Option<Vec<Vec<i64>>> = a
        .iter()
        .map(|r| r.iter().map(|&v| small_integer(v)).collect())
        .collect();
    let exact_y = y.iter().all(|v| v.fract() == 0.0 && v.abs() < 9.0e15);
    let exact = exact_entries.filter(|_| exact_y);
    let tol = 1e-9 * (1.0 + max_abs(y));
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));

    for s in 0..=k_max {
        let mut solutions = Vec::new();
        let mut unique = true;
        for_each_subset(n, s, |support| {
            let found = if let Some(ints) = &exact {
                let sub: Vec<Vec<BigRational>> = ints
                    .iter()
                    .map(|r| support.iter().map(|&j| q(r[j])).collect())
                    .collect();
                let rhs: Vec<BigRational> = y.iter().map(|&v| q(v as i64)).collect();
                rational_solve(&sub, &rhs)
                    .map(|(z, rank)| (z.iter().map(rational_to_f64).collect::<Vec<_>>(), rank))
            } else {
                let sub: Vec<Vec<f64>> = a
                    .iter()
                    .map(|r| support.iter().map(|&j| r[j]).collect())
                    .collect();
                let (z, rank) = least_squares(&sub, y, 1e-10);
                (residual(&sub, &z, y) <= tol).then_some((z, rank))
            };
            if let Some((z, rank)) = found {
                if rank < s {
                    unique = false;
                }
                if z.iter().all(|&v| v != 0.0) {
                    let mut x = vec![0.0; n];
                    for (&j, &v) in support.iter().zip(&z) {
                        x[j] = v;
                    }
                    solutions.push(x);
                }
            }
            true
        });
        if !solutions.is_empty() {
            let unique = unique && solutions.len() == 1;
            return Ok(L0Solutions {
                solutions,
                min_support: Some(s),
                unique,
            });
        }
    }
    Ok(L0Solutions {
        solutions: Vec::new(),
        min_support: None,
        unique: false,
    })
}

/// Right-hand side of a group's kernel system once the hub sum and the
/// already-recovered values are removed.
fn group_rhs(g: &DecodeGroup, x_hat: &[f64], y: &[f64]) -> Vec<f64> {
    let hub = g.hub_row.map_or(0.0, |h| {
        y[h] - g.hub_subtract.iter().map(|&v| x_hat[v]).sum::<f64>()
    });
    g.row_range
        .clone()
        .zip(&g.prior_subtract)
        .map(|(r, prior)| y[r] - hub - prior.iter().map(|&v| x_hat[v]).sum::<f64>())
        .collect()
}

fn solve_kernel(kernel: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let cols = kernel.first().map_or(0, Vec::len);
    if kernel.len() == cols {
        if let Some(z) = lu_solve(kernel, b, 1e-9) {
            return Ok(z);
        }
    }
    Ok(l1_minimize(kernel, b)?.x_hat)
}

fn plan_of(a: &MeasurementMatrix) -> Result<&crate::matrix::DecodePlan> {
    a.plan().ok_or(Error::MissingPlan)
}

fn check_len(a: &MeasurementMatrix, y: &[f64]) -> Result<()> {
    if y.len() != a.m() {
        return Err(Error::DimensionMismatch {
            expected: a.m(),
            got: y.len(),
        });
    }
    Ok(())
}

/// Decodes group by group following the matrix's decode plan.
pub fn sequential_decode(a: &MeasurementMatrix, y: &[f64]) -> Result<RecoveryResult> {
    check_len(a, y)?;
    let plan = plan_of(a)?;
    let mut x_hat = vec![0.0; a.n()];
    for (gi, g) in plan.groups.iter().enumerate() {
        if g.row_range.is_empty() {
            continue;
        }
        let b = group_rhs(g, &x_hat, y);
        let z = solve_kernel(&g.kernel.to_f64(), &b).map_err(|e| Error::Group {
            group: gi,
            source: Box::new(e),
        })?;
        for (&t, v) in g.target.iter().zip(z) {
            x_hat[t] = v;
        }
    }
    Ok(finish(&a.to_dense_f64(), x_hat, y))
}

/// Decodes per the plan, treating the observation of every listed hub row as
/// carrying an unknown additive error that is recovered jointly with the
/// group's signal. Error coordinates are stripped from the output.
pub fn augmented_l1_recover(
    a: &MeasurementMatrix,
    y: &[f64],
    hub_rows: &[usize],
) -> Result<RecoveryResult> {
    check_len(a, y)?;
    let plan = plan_of(a)?;
    for &h in hub_rows {
        if !plan.groups.iter().any(|g| g.hub_row == Some(h)) {
            return Err(Error::InvalidParameter(format!(
                "row {h} is not the hub row of any group"
            )));
        }
    }
    let mut x_hat = vec![0.0; a.n()];
    let mut y_clean = y.to_vec();
    for (gi, g) in plan.groups.iter().enumerate() {
        if g.row_range.is_empty() {
            continue;
        }
        let b = group_rhs(g, &x_hat, y);
        let mut kernel = g.kernel.to_f64();
        let augmented = g.hub_row.is_some_and(|h| hub_rows.contains(&h));
        let z = if augmented {
            for row in kernel.iter_mut() {
                row.push(-1.0);
            }
            l1_minimize(&kernel, &b).map(|r| r.x_hat)
        } else {
            solve_kernel(&kernel, &b)
        }
        .map_err(|e| Error::Group {
            group: gi,
            source: Box::new(e),
        })?;
        for (&t, &v) in g.target.iter().zip(&z) {
            x_hat[t] = v;
        }
        if augmented {
            let h = g.hub_row.expect("augmented group has a hub row");
            y_clean[h] = y[h] - z[g.target.len()];
        }
    }
    Ok(finish(&a.to_dense_f64(), x_hat, &y_clean))
}

/// `m × s` 0-1 block with an all-ones last row and fair coin flips elsewhere.
pub fn hub_error_matrix(s_size: usize, m: usize, seed: u64) -> Result<BinaryBlock> {
    if m < 2 || s_size == 0 {
        return Err(Error::InvalidParameter(
            "hub error block needs m >= 2 and s >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<u8>> = (0..m - 1)
        .map(|_| {
            (0..s_size)
                .map(|_| u8::from(rng.random_bool(0.5)))
                .collect()
        })
        .collect();
    rows.push(vec![1; s_size]);
    BinaryBlock::from_rows(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HubErrorRecovery {
    pub x_s: Vec<f64>,
    pub e0: f64,
    pub result: RecoveryResult,
}

/// Linear system whose ℓ1 solution is `[x_S; e0]`: every row but the last,
/// doubled, minus the last row, so the hub error enters each row with
/// coefficient −1.
pub fn hub_error_system(a_block: &BinaryBlock, y: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = a_block.row_count();
    let last = m - 1;
    let s = a_block.col_count();
    let rows = (0..last)
        .map(|i| {
            let mut r: Vec<f64> = (0..s)
                .map(|j| 2.0 * f64::from(a_block.get(i, j)) - f64::from(a_block.get(last, j)))
                .collect();
            r.push(-1.0);
            r
        })
        .collect();
    let rhs = (0..last).map(|i| 2.0 * y[i] - y[last]).collect();
    (rows, rhs)
}

/// Recovers a group signal and the error on the hub measurement from group
/// measurements `z` (each including the true hub sum) and the observed hub
/// sum `z0_hat`.
pub fn hub_error_recover(
    a_block: &BinaryBlock,
    z: &[f64],
    z0_hat: f64,
) -> Result<HubErrorRecovery> {
    let m = a_block.row_count();
    if m < 2 {
        return Err(Error::InvalidParameter(
            "hub error block needs at least two rows".into(),
        ));
    }
    if z.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: z.len(),
        });
    }
    if a_block.row(m - 1).iter().any(|&b| b != 1) {
        return Err(Error::InvalidParameter(
            "last row of the block must be all ones".into(),
        ));
    }
    let y: Vec<f64> = z.iter().map(|v| v - z0_hat).collect();
    let (rows, rhs) = hub_error_system(a_block, &y);
    let result = l1_minimize(&rows, &rhs)?;
    let s = a_block.col_count();
    Ok(HubErrorRecovery {
        x_s: result.x_hat[..s].to_vec(),
        e0: result.x_hat[s],
        result,
    })
}

/// `‖x̂ − x‖₂ / ‖x‖₂`, or the plain error norm when `x = 0`.
pub fn relative_error(x_hat: &[f64], x: &[f64]) -> f64 {
    let err: f64 = x_hat
        .iter()
        .zip(x)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        err / norm
    } else {
        err
    }
}
