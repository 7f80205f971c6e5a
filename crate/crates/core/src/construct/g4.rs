use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hub_group;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernel::CompleteKernelSpec;
use crate::matrix::{whole_vector_plan, MatrixBuilder, MeasurementMatrix};

fn parity(n: usize, p: usize) -> Vec<usize> {
    (p..n).step_by(2).collect()
}

/// Odd-indexed nodes as the hub for the even ones, then the reverse.
pub fn g4_matrix(n: usize, k: usize, spec: &CompleteKernelSpec) -> Result<MeasurementMatrix> {
    let g = Graph::g4(n)?;
    let (evens, odds) = (parity(n, 0), parity(n, 1));
    let mut b = MatrixBuilder::new(n);
    b.push(hub_group(&g, &odds, &evens, k, &spec.for_group(0))?);
    b.push(hub_group(&g, &evens, &odds, k, &spec.for_group(1))?);
    b.finish()
}

/// Midpoint `d` of a chord `(d−1, d+1)`, in either orientation.
fn chord_midpoint(n: usize, (a, b): (usize, usize)) -> Result<usize> {
    if a < n && b < n {
        if (a + 2) % n == b {
            return Ok((a + 1) % n);
        }
        if (b + 2) % n == a {
            return Ok((b + 1) % n);
        }
    }
    Err(Error::InvalidParameter(format!(
        "({a}, {b}) is not a chord of G4 on {n} nodes"
    )))
}

/// G4 with `deleted_chords` removed: chord midpoints are measured alone, the
/// remaining nodes of each parity through a hub made of the other parity
/// plus the same-parity midpoints.
pub fn g4h_matrix(
    n: usize,
    k: usize,
    deleted_chords: &[(usize, usize)],
    spec: &CompleteKernelSpec,
) -> Result<MeasurementMatrix> {
    Graph::g4(n)?;
    let mut mids = deleted_chords
        .iter()
        .map(|&c| chord_midpoint(n, c))
        .collect::<Result<Vec<_>>>()?;
    mids.sort_unstable();
    mids.dedup();
    let g = Graph::g4_without_chords(n, &mids)?;
    let mut in_d = vec![false; n];
    for &d in &mids {
        in_d[d] = true;
    }
    let mut b = MatrixBuilder::new(n);
    if !mids.is_empty() {
        b.push_singletons(&mids);
    }
    for (gi, p) in [(0u64, 0usize), (1, 1)] {
        let targets: Vec<usize> = parity(n, p).into_iter().filter(|&v| !in_d[v]).collect();
        if targets.is_empty() {
            continue;
        }
        let hub: Vec<usize> = (0..n).filter(|&v| v % 2 != p || in_d[v]).collect();
        b.push(hub_group(&g, &hub, &targets, k, &spec.for_group(gi))?);
    }
    b.finish()
}

/// G4 rows of at most `d` nodes: targets of each parity are cut into runs of
/// `⌊d/2⌋` consecutive nodes, each served by the adjacent run of the other
/// parity.
pub fn g4_bounded_length_matrix(
    n: usize,
    k: usize,
    d: usize,
    spec: &CompleteKernelSpec,
) -> Result<MeasurementMatrix> {
    if d < 4 || d > n {
        return Err(Error::InvalidParameter(format!(
            "need 4 <= d <= n, got d={d}, n={n}"
        )));
    }
    let g = Graph::g4(n)?;
    let run = d / 2;
    let mut b = MatrixBuilder::new(n);
    let mut group = 0u64;
    for p in [0usize, 1] {
        for chunk in parity(n, p).chunks(run) {
            let mut hub: Vec<usize> = chunk
                .iter()
                .map(|&v| {
                    if v + 1 < n {
                        v + 1
                    } else if n % 2 == 1 {
                        n - 2
                    } else {
                        0
                    }
                })
                .collect();
            hub.sort_unstable();
            hub.dedup();
            b.push(hub_group(&g, &hub, chunk, k, &spec.for_group(group))?);
            group += 1;
        }
    }
    b.finish()
}

/// `(2k+1)·2^(4k²+2k−1) / (2k−1)!`.
pub fn markov_g(k: usize) -> f64 {
    let k = k as f64;
    let fact: f64 = (1..=(2.0 * k - 1.0) as u64).map(|v| v as f64).product();
    (2.0 * k + 1.0) * 2f64.powf(4.0 * k * k + 2.0 * k - 1.0) / fact
}

/// `min(⌈g(k)·ln n⌉, 64·k·⌈ln n⌉)`.
pub fn markov_default_rows(n: usize, k: usize) -> usize {
    let ln = (n as f64).ln();
    let theory = (markov_g(k) * ln).ceil();
    let cap = (64 * k) as f64 * ln.ceil();
    theory.min(cap) as usize
}

/// Random rows for G4 drawn from a two-state chain: the first node is
/// always measured, a skipped node is always followed by a measured one, and
/// after a measured node the next is measured with probability 1/2.
pub fn markov_rows(
    n: usize,
    k: usize,
    row_count: Option<usize>,
    seed: u64,
) -> Result<MeasurementMatrix> {
    if n < 5 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 5 and k >= 1, got n={n}, k={k}"
        )));
    }
    let m = row_count.unwrap_or_else(|| markov_default_rows(n, k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..m)
        .map(|_| {
            let mut row = vec![0];
            let mut prev = true;
            for v in 1..n {
                let on = !prev || rng.random::<bool>();
                if on {
                    row.push(v);
                }
                prev = on;
            }
            row
        })
        .collect();
    let a = MeasurementMatrix::new(n, rows)?;
    let plan = whole_vector_plan(&a);
    a.with_plan(plan)
}
