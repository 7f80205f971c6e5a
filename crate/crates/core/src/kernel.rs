//! Complete-graph measurement kernels and hub composition.
//!
//! A kernel is a dense 0-1 block that identifies sparse vectors when any
//! subset of nodes may be measured together. A hub turns any kernel into
//! feasible rows on a constrained graph: measure the hub once, then measure
//! the hub plus each kernel row's targets and subtract.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, HubCertificate};
use crate::matrix::{BinaryBlock, GroupFragment};

const MAX_REDRAWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// Column `j` holds the binary digits of `j + 1`. Only for `k = 1`.
    BinaryExpansion,
    /// i.i.d. fair-coin entries.
    BernoulliHalf,
    /// Fair-coin entries with the final row forced to all ones.
    BernoulliOnesRow,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary-expansion" | "binary" => Ok(KernelKind::BinaryExpansion),
            "bernoulli-half" | "bernoulli" => Ok(KernelKind::BernoulliHalf),
            "bernoulli-ones-row" => Ok(KernelKind::BernoulliOnesRow),
            other => Err(Error::InvalidParameter(format!(
                "unknown kernel kind `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompleteKernelSpec {
    pub kind: KernelKind,
    /// Fixed row count for the Bernoulli kinds.
    pub row_count_override: Option<usize>,
    pub rng_seed: u64,
    /// Constant `c` in the default Bernoulli row count.
    pub constant: f64,
}

impl Default for CompleteKernelSpec {
    fn default() -> Self {
        CompleteKernelSpec {
            kind: KernelKind::BinaryExpansion,
            row_count_override: None,
            rng_seed: 0,
            constant: 4.0,
        }
    }
}

impl CompleteKernelSpec {
    pub fn binary() -> Self {
        Self::default()
    }

    pub fn bernoulli(seed: u64) -> Self {
        CompleteKernelSpec {
            kind: KernelKind::BernoulliHalf,
            rng_seed: seed,
            ..Self::default()
        }
    }

    /// Same spec with an independent seed for group `index`.
    pub fn for_group(&self, index: u64) -> Self {
        CompleteKernelSpec {
            rng_seed: mix_seed(self.rng_seed, index),
            ..*self
        }
    }
}

/// SplitMix64 finalizer of `seed ^ stream`, used to derive independent seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        ^ stream
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(0x6A09_E667_F3BC_C909);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `⌈log₂(n + 1)⌉` computed on integers.
pub fn binary_rows(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Number of rows `f(k, n_t)` the kernel will have.
pub fn kernel_rows(k: usize, n_t: usize, spec: &CompleteKernelSpec) -> Result<usize> {
    if k == 0 || n_t == 0 {
        return Err(Error::InvalidParameter(
            "kernel needs k >= 1 and n_t >= 1".into(),
        ));
    }
    match spec.kind {
        KernelKind::BinaryExpansion => {
            if k != 1 {
                return Err(Error::InvalidParameter(
                    "binary-expansion kernel only identifies 1-sparse vectors".into(),
                ));
            }
            Ok(binary_rows(n_t))
        }
        KernelKind::BernoulliHalf | KernelKind::BernoulliOnesRow => {
            if let Some(r) = spec.row_count_override {
                if r == 0 {
                    return Err(Error::InvalidParameter(
                        "row count override must be positive".into(),
                    ));
                }
                return Ok(r);
            }
            let rows = formula_rows(k, n_t, spec);
            if spec.kind == KernelKind::BernoulliHalf && rows > n_t {
                // measuring every target directly is cheaper
                return Ok(n_t);
            }
            Ok(rows)
        }
    }
}

/// Dense kernel block with `n_t` columns.
pub fn complete_kernel(k: usize, n_t: usize, spec: &CompleteKernelSpec) -> Result<BinaryBlock> {
    let rows = kernel_rows(k, n_t, spec)?;
    match spec.kind {
        KernelKind::BinaryExpansion => {
            let block = (0..rows)
                .map(|r| {
                    let shift = rows - 1 - r;
                    (1..=n_t).map(|v| ((v >> shift) & 1) as u8).collect()
                })
                .collect();
            BinaryBlock::from_rows(block)
        }
        KernelKind::BernoulliHalf | KernelKind::BernoulliOnesRow => {
            let ones_row = spec.kind == KernelKind::BernoulliOnesRow;
            if !ones_row && spec.row_count_override.is_none() && formula_rows(k, n_t, spec) > n_t {
                return Ok(BinaryBlock::identity(n_t));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
            for _ in 0..MAX_REDRAWS {
                let block = draw_bernoulli(&mut rng, rows, n_t, ones_row)?;
                let zero_col = (0..n_t).any(|c| block.iter().all(|r| r[c] == 0));
                if !zero_col {
                    return BinaryBlock::from_rows(block);
                }
            }
            Err(Error::RetryExhausted(MAX_REDRAWS))
        }
    }
}

/// `⌈c·k·ln(n_t/k)⌉ + 1`, with the ratio floored at 2.
fn formula_rows(k: usize, n_t: usize, spec: &CompleteKernelSpec) -> usize {
    let ratio = (n_t as f64 / k as f64).max(2.0);
    (spec.constant * k as f64 * ratio.ln()).ceil() as usize + 1
}

fn draw_bernoulli(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    ones_row: bool,
) -> Result<Vec<Vec<u8>>> {
    let random_rows = if ones_row { rows - 1 } else { rows };
    let mut block = Vec::with_capacity(rows);
    for _ in 0..random_rows {
        let row = (0..MAX_REDRAWS)
            .map(|_| {
                (0..cols)
                    .map(|_| u8::from(rng.random::<bool>()))
                    .collect::<Vec<u8>>()
            })
            .find(|r| r.contains(&1))
            .ok_or(Error::RetryExhausted(MAX_REDRAWS))?;
        block.push(row);
    }
    if ones_row {
        block.push(vec![1; cols]);
    }
    Ok(block)
}

/// Rows for recovering `cert.targets` through hub `cert.hub`: the hub-sum
/// row, then `hub ∪ {targets selected by kernel row r}` for every row `r`.
/// Kernel columns follow the sorted target order.
pub fn hub_compose(g: &Graph, cert: &HubCertificate, kernel: BinaryBlock) -> Result<GroupFragment> {
    // re-check: certificates are plain data and may have been built by hand
    let checked = HubCertificate::new(g, &cert.hub, &cert.targets)?;
    if !checked.targets.is_empty() && kernel.col_count() != checked.targets.len() {
        return Err(Error::DimensionMismatch {
            expected: checked.targets.len(),
            got: kernel.col_count(),
        });
    }
    if checked.hub.is_empty() {
        return Err(Error::NotAHub("hub is empty".into()));
    }
    let hub = checked.hub;
    let targets = checked.targets;
    let (rows, kernel) = if targets.is_empty() {
        (Vec::new(), BinaryBlock::default())
    } else {
        let rows = (0..kernel.row_count())
            .map(|r| {
                let mut row = hub.clone();
                row.extend(kernel.support(r).into_iter().map(|c| targets[c]));
                row.sort_unstable();
                (row, Vec::new())
            })
            .collect();
        (rows, kernel)
    };
    Ok(GroupFragment {
        target: targets,
        hub: Some((hub, Vec::new())),
        rows,
        kernel,
    })
}
