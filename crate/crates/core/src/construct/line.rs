use crate::error::{Error, Result};
use crate::matrix::{whole_vector_plan, MeasurementMatrix};

/// Window width `⌊(n + 1) / (k + 1)⌋`.
pub fn line_window(n: usize, k: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    Ok((n + 1) / (k + 1))
}

/// Sliding windows `{i, …, i+t−1}` for `i = 0..=n−t`, decoded as one system.
pub fn line_matrix(n: usize, k: usize) -> Result<MeasurementMatrix> {
    let t = line_window(n, k)?;
    let rows = (0..=n - t).map(|i| (i..i + t).collect()).collect();
    let a = MeasurementMatrix::new(n, rows)?;
    let plan = whole_vector_plan(&a);
    a.with_plan(plan)
}

/// The ring reuses the line's windows; none of them wraps around.
pub fn ring_matrix(n: usize, k: usize) -> Result<MeasurementMatrix> {
    line_matrix(n, k)
}

/// Fewest rows that identify `k`-sparse vectors on a line (exact), or the
/// proved lower bound for a ring.
pub fn line_min_measurements(n: usize, k: usize, ring: bool) -> usize {
    if ring {
        n - n / (k + 1)
    } else {
        n + 1 - (n + 1) / (k + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_when_window_is_one() {
        let a = line_matrix(5, 3).unwrap();
        assert_eq!(a.rows(), &[vec![0], vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn counts() {
        assert_eq!(line_min_measurements(11, 3, false), 9);
        assert_eq!(line_min_measurements(7, 7, false), 7);
        assert_eq!(line_min_measurements(12, 2, true), 8);
        assert_eq!(line_matrix(12, 2).unwrap().m(), 9);
        assert!(line_matrix(4, 0).is_err());
    }
}
