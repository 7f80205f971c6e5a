use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{whole_vector_plan, MeasurementMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShortFamily {
    /// `(k+1)`-square blocks with a full first row; rows hold at most `k+2` nodes.
    Bk,
    /// `2k`-square bidiagonal blocks; rows hold at most 3 nodes.
    Dk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortSpec {
    pub n: usize,
    pub k: usize,
    pub family: ShortFamily,
}

impl ShortSpec {
    /// Number of diagonal blocks.
    pub fn blocks(&self) -> usize {
        match self.family {
            ShortFamily::Bk => self.n.div_ceil(self.k + 1),
            ShortFamily::Dk => self.n.div_ceil(2 * self.k),
        }
    }

    fn block(&self) -> Vec<Vec<u8>> {
        let k = self.k;
        match self.family {
            ShortFamily::Bk => {
                let s = k + 1;
                let last_sub = if k.is_multiple_of(2) { k + 1 } else { k };
                (0..s)
                    .map(|i| {
                        (0..s)
                            .map(|j| {
                                u8::from(i == 0 || i == j || (i >= 1 && i < last_sub && j + 1 == i))
                            })
                            .collect()
                    })
                    .collect()
            }
            ShortFamily::Dk => {
                let s = 2 * k;
                (0..s)
                    .map(|i| (0..s).map(|j| u8::from(i == j || j + 1 == i)).collect())
                    .collect()
            }
        }
    }
}

/// Block assembly truncated to the first `n` columns, before any row is
/// deleted. Consecutive blocks share one row.
pub fn short_blocks(spec: &ShortSpec) -> Result<Vec<Vec<u8>>> {
    if spec.k == 0 || spec.n == 0 {
        return Err(Error::InvalidParameter(
            "short matrices need n >= 1 and k >= 1".into(),
        ));
    }
    let block = spec.block();
    let size = block.len();
    let t = spec.blocks();
    let row_step = size - 1;
    let rows = row_step * t + 1;
    let mut a = vec![vec![0u8; size * t]; rows];
    for b in 0..t {
        for (i, brow) in block.iter().enumerate() {
            for (j, &v) in brow.iter().enumerate() {
                a[b * row_step + i][b * size + j] |= v;
            }
        }
    }
    for row in &mut a {
        row.truncate(spec.n);
    }
    Ok(a)
}

/// Short-row construction for a line or ring, with all-zero rows removed.
pub fn short_matrix(spec: &ShortSpec) -> Result<MeasurementMatrix> {
    let rows: Vec<Vec<usize>> = short_blocks(spec)?
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .map(|(j, _)| j)
                .collect::<Vec<_>>()
        })
        .filter(|r| !r.is_empty())
        .collect();
    let a = MeasurementMatrix::new(spec.n, rows)?;
    let plan = whole_vector_plan(&a);
    a.with_plan(plan)
}
