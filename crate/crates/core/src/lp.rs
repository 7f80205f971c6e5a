//! Dense two-phase primal simplex for small linear programs.
//!
//! Problems are `min c·x` subject to equality and `≤` rows with `x ≥ 0`.
//! Pivoting follows the steepest reduced cost until a run of degenerate
//! pivots is seen, then switches to Bland's rule, which cannot cycle. The
//! final basis is re-solved against the original data and a dual vector is
//! computed so the caller can inspect the duality gap.

use crate::error::{Error, Result};
use crate::linalg::lu_solve;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    pub c: Vec<f64>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub le: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// `c·x − b·y` for the refined primal/dual pair.
    pub duality_gap: f64,
    /// Largest violation of dual feasibility (negative reduced cost).
    pub dual_violation: f64,
    pub iterations: usize,
}

impl LinearProgram {
    pub fn new(c: Vec<f64>) -> Self {
        LinearProgram {
            c,
            eq: Vec::new(),
            le: Vec::new(),
        }
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) {
        self.eq.push((row, rhs));
    }

    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) {
        self.le.push((row, rhs));
    }

    pub fn solve(&self) -> Result<LpSolution> {
        solve(self)
    }
}

struct Tableau {
    cols: usize,
    /// Row-major, `cols + 1` entries per row, the last being the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
    obj: Vec<f64>,
    iterations: usize,
    limit: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let p = self.t[r * w + c];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (x, &y) in self.obj.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
        self.iterations += 1;
    }

    /// Runs simplex iterations over columns `< allowed` until optimal. With
    /// `floor`, the objective is known to be bounded below by zero: the run
    /// stops once it is within `floor` of zero, and a column without a
    /// leaving row is round-off rather than unboundedness.
    fn optimize(&mut self, allowed: usize, floor: Option<f64>) -> Result<()> {
        let mut degenerate = 0;
        loop {
            if floor.is_some_and(|tol| -self.obj[self.cols] <= tol) {
                return Ok(());
            }
            if self.iterations >= self.limit {
                return Err(Error::IterationLimit);
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let mut enter = None;
            let mut best = -COST_TOL;
            for j in 0..allowed {
                let d = self.obj[j];
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(c) = enter else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows() {
                let a = self.at(r, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-12
                                || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, ratio)) = leave else {
                return if floor.is_some() {
                    Ok(())
                } else {
                    Err(Error::Unbounded)
                };
            };
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c);
        }
    }
}

/// Solves `lp`, returning an optimal vertex.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let nv = lp.c.len();
    for (row, _) in lp.eq.iter().chain(&lp.le) {
        if row.len() != nv {
            return Err(Error::DimensionMismatch {
                expected: nv,
                got: row.len(),
            });
        }
    }
    let nle = lp.le.len();
    let ns = nv + nle;
    let m = lp.eq.len() + nle;
    // standard form: [A | slack] x = b
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut b: Vec<f64> = Vec::with_capacity(m);
    for (row, rhs) in &lp.eq {
        let mut r = row.clone();
        r.resize(ns, 0.0);
        a.push(r);
        b.push(*rhs);
    }
    for (i, (row, rhs)) in lp.le.iter().enumerate() {
        let mut r = row.clone();
        r.resize(ns, 0.0);
        r[nv + i] = 1.0;
        a.push(r);
        b.push(*rhs);
    }
    let mut c = lp.c.clone();
    c.resize(ns, 0.0);
    if b.iter()
        .chain(&c)
        .chain(a.iter().flatten())
        .any(|v| !v.is_finite())
    {
        return Err(Error::InvalidParameter("non-finite LP data".into()));
    }
    let bmax = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

    // distinct tiny right-hand-side shifts keep both phases off degenerate
    // vertices; the exact data is restored when refining the final basis
    let scale = 1e-9 * (1.0 + bmax);
    let shift = |i: usize, phase: u64| {
        let h = crate::kernel::mix_seed(phase, i as u64);
        scale * (1.0 + (h >> 11) as f64 / (1u64 << 53) as f64)
    };

    // phase 1: artificial per row, rows signed so b >= 0
    let cols = ns + m;
    let w = cols + 1;
    let mut t = vec![0.0; m * w];
    let mut obj = vec![0.0; w];
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let rhs = s * b[i] + shift(i, 1);
        for j in 0..ns {
            t[i * w + j] = s * a[i][j];
        }
        t[i * w + ns + i] = 1.0;
        t[i * w + cols] = rhs;
        for j in 0..ns {
            obj[j] -= s * a[i][j];
        }
        obj[cols] -= rhs;
    }
    let mut tab = Tableau {
        cols,
        t,
        basis: (ns..ns + m).collect(),
        obj,
        iterations: 0,
        limit: 50 * (m + cols) + 1000,
    };
    tab.optimize(ns, Some(1e-12 * (1.0 + bmax)))?;
    let infeasibility = -tab.obj[cols];
    if infeasibility > 1e-7 * (1.0 + bmax) {
        return Err(Error::Infeasible);
    }

    // drive remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent on the others
    let mut keep = vec![true; m];
    for r in 0..m {
        if tab.basis[r] >= ns {
            let best =
                (0..ns)
                    .map(|j| (j, tab.at(r, j).abs()))
                    .fold(
                        (usize::MAX, PIVOT_TOL),
                        |acc, x| if x.1 > acc.1 { x } else { acc },
                    );
            if best.0 == usize::MAX {
                keep[r] = false;
            } else {
                tab.pivot(r, best.0);
            }
        }
    }

    // phase 2 on the kept rows without artificial columns
    let kept: Vec<usize> = (0..m).filter(|&r| keep[r]).collect();
    let w2 = ns + 1;
    let mut t2 = Vec::with_capacity(kept.len() * w2);
    let mut basis2 = Vec::with_capacity(kept.len());
    for &r in &kept {
        t2.extend_from_slice(&tab.t[r * w..r * w + ns]);
        t2.push(tab.t[r * w + cols]);
        basis2.push(tab.basis[r]);
    }
    let mut obj2 = vec![0.0; w2];
    obj2[..ns].copy_from_slice(&c);
    for (i, &bj) in basis2.iter().enumerate() {
        let cb = c[bj];
        if cb != 0.0 {
            for j in 0..w2 {
                obj2[j] -= cb * t2[i * w2 + j];
            }
        }
    }
    for i in 0..kept.len() {
        t2[i * w2 + ns] += shift(i, 2);
    }
    let mut tab2 = Tableau {
        cols: ns,
        t: t2,
        basis: basis2,
        obj: obj2,
        iterations: tab.iterations,
        limit: tab.limit + 50 * (kept.len() + ns),
    };
    tab2.optimize(ns, None)?;

    let mut x = vec![0.0; ns];
    for (i, &bj) in tab2.basis.iter().enumerate() {
        x[bj] = tab2.rhs(i).max(0.0);
    }
    // refine the basic solution and compute duals from the original data
    let bmat: Vec<Vec<f64>> = kept
        .iter()
        .map(|&r| tab2.basis.iter().map(|&j| a[r][j]).collect())
        .collect();
    let bvec: Vec<f64> = kept.iter().map(|&r| b[r]).collect();
    let cb: Vec<f64> = tab2.basis.iter().map(|&j| c[j]).collect();
    let mut y = vec![0.0; kept.len()];
    if let Some(xb) = lu_solve(&bmat, &bvec, 1e-12) {
        let scale = 1.0 + xb.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if xb.iter().all(|&v| v >= -1e-7 * scale) {
            for (i, &bj) in tab2.basis.iter().enumerate() {
                x[bj] = xb[i].max(0.0);
            }
        }
        let bt: Vec<Vec<f64>> = (0..kept.len())
            .map(|j| (0..kept.len()).map(|i| bmat[i][j]).collect())
            .collect();
        if let Some(dual) = lu_solve(&bt, &cb, 1e-12) {
            y = dual;
        }
    }
    let objective: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let dual_obj: f64 = bvec.iter().zip(&y).map(|(a, b)| a * b).sum();
    let dual_violation = (0..ns)
        .map(|j| {
            let reduced = c[j]
                - kept
                    .iter()
                    .zip(&y)
                    .map(|(&r, yi)| a[r][j] * yi)
                    .sum::<f64>();
            (-reduced).max(0.0)
        })
        .fold(0.0, f64::max);
    x.truncate(nv);
    Ok(LpSolution {
        x,
        objective,
        duality_gap: (objective - dual_obj).abs(),
        dual_violation,
        iterations: tab2.iterations,
    })
}
