//! 0-1 measurement matrices stored as row supports, together with the decode
//! plan that turns feasible rows back into per-group linear systems.

use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_within, Graph};
use crate::textio::{expect_count, parse_usize, Lines};

pub const PLAN_FORMAT_VERSION: u32 = 1;

/// Dense 0-1 block, row-major. Serialized as nested arrays.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryBlock {
    rows: Vec<Vec<u8>>,
}

impl BinaryBlock {
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let cols = first.len();
            if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: bad.len(),
                });
            }
        }
        if rows.iter().flatten().any(|&b| b > 1) {
            return Err(Error::InvalidParameter(
                "block entries must be 0 or 1".into(),
            ));
        }
        Ok(BinaryBlock { rows })
    }

    pub fn identity(n: usize) -> Self {
        BinaryBlock {
            rows: (0..n)
                .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
                .collect(),
        }
    }

    /// Block whose rows are the indicator vectors of `supports` over `cols` columns.
    pub fn from_supports(supports: &[Vec<usize>], cols: usize) -> Self {
        BinaryBlock {
            rows: supports
                .iter()
                .map(|s| {
                    let mut r = vec![0u8; cols];
                    for &j in s {
                        r[j] = 1;
                    }
                    r
                })
                .collect(),
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.rows[r][c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Column indices set in row `r`.
    pub fn support(&self, r: usize) -> Vec<usize> {
        self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| f64::from(b)).collect())
            .collect()
    }
}

/// One stage of sequential decoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecodeGroup {
    /// Nodes recovered by this group, in kernel column order.
    pub target: Vec<usize>,
    /// Kernel rows of the matrix, contiguous.
    #[serde(with = "range_serde")]
    pub row_range: Range<usize>,
    /// Row holding the hub sum, subtracted from every kernel row.
    pub hub_row: Option<usize>,
    /// Already-recovered nodes contained in the hub row.
    #[serde(default)]
    pub hub_subtract: Vec<usize>,
    /// Per kernel row, already-recovered nodes to subtract.
    pub prior_subtract: Vec<Vec<usize>>,
    pub kernel: BinaryBlock,
}

mod range_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::ops::Range;

    pub fn serialize<S: Serializer>(r: &Range<usize>, s: S) -> Result<S::Ok, S::Error> {
        [r.start, r.end].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Range<usize>, D::Error> {
        let [start, end] = <[usize; 2]>::deserialize(d)?;
        Ok(start..end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecodePlan {
    pub groups: Vec<DecodeGroup>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct PlanFile {
    #[serde(default)]
    version: String,
    format_version: u32,
    n: usize,
    groups: Vec<DecodeGroup>,
}

impl DecodePlan {
    pub fn to_json(&self, n: usize) -> String {
        serde_json::to_string_pretty(&PlanFile {
            version: env!("CARGO_PKG_VERSION").into(),
            format_version: PLAN_FORMAT_VERSION,
            n,
            groups: self.groups.clone(),
        })
        .expect("plan serializes")
    }

    /// Parses a plan file; returns the plan and its signal dimension.
    pub fn from_json(input: &str) -> Result<(Self, usize)> {
        let file: PlanFile = serde_json::from_str(input).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.format_version != PLAN_FORMAT_VERSION {
            return Err(Error::parse(
                1,
                1,
                format!("unsupported plan format version {}", file.format_version),
            ));
        }
        Ok((
            DecodePlan {
                groups: file.groups,
            },
            file.n,
        ))
    }
}

/// Rows of a 0-1 measurement matrix as sorted supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementMatrix {
    n: usize,
    rows: Vec<Vec<usize>>,
    plan: Option<DecodePlan>,
}

impl MeasurementMatrix {
    /// Validates and sorts the supports. Empty rows are rejected.
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.is_empty() {
                return Err(Error::InvalidParameter(format!("row {i} is empty")));
            }
            if let Some(&bad) = row.iter().find(|&&j| j >= n) {
                return Err(Error::NodeOutOfRange { node: bad, n });
            }
            out.push(row);
        }
        Ok(MeasurementMatrix {
            n,
            rows: out,
            plan: None,
        })
    }

    /// Attaches a decode plan after checking it against the rows.
    pub fn with_plan(mut self, plan: DecodePlan) -> Result<Self> {
        check_plan(&self, &plan)?;
        self.plan = Some(plan);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn plan(&self) -> Option<&DecodePlan> {
        self.plan.as_ref()
    }

    pub fn max_row_len(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0u8; self.n];
                for &j in r {
                    d[j] = 1;
                }
                d
            })
            .collect()
    }

    pub fn to_dense_f64(&self) -> Vec<Vec<f64>> {
        self.to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(f64::from).collect())
            .collect()
    }

    /// `y = A x`, each entry the exact row sum of the selected coordinates.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().map(|&j| x[j]).sum())
            .collect())
    }

    /// `m n` header, then per row its cardinality followed by sorted indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.m(), self.n).unwrap();
        for row in &self.rows {
            write!(out, "{}", row.len()).unwrap();
            for j in row {
                write!(out, " {j}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(input: &str) -> Result<Self> {
        let mut lines = Lines::new(input);
        let header = lines.next_tokens("header `m n`")?;
        let line = header.first().map_or(1, |t| t.line);
        expect_count(&header, 2, line, "header `m n`")?;
        let m = parse_usize(&header[0])?;
        let n = parse_usize(&header[1])?;
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let toks = lines.next_tokens("matrix row")?;
            let Some(first) = toks.first() else {
                return Err(Error::parse(0, 1, "blank matrix row"));
            };
            let line = first.line;
            let card = parse_usize(first)?;
            if card == 0 {
                return Err(Error::parse(line, first.column, "empty row"));
            }
            expect_count(&toks, card + 1, line, "matrix row")?;
            let mut row = Vec::with_capacity(card);
            for tok in &toks[1..] {
                let j = parse_usize(tok)?;
                if j >= n {
                    return Err(Error::parse(
                        line,
                        tok.column,
                        format!("index {j} out of range for n = {n}"),
                    ));
                }
                if row.last().is_some_and(|&prev| prev >= j) {
                    return Err(Error::parse(
                        line,
                        tok.column,
                        "row indices must be strictly increasing",
                    ));
                }
                row.push(j);
            }
            rows.push(row);
        }
        lines.finish()?;
        Ok(MeasurementMatrix {
            n,
            rows,
            plan: None,
        })
    }
}

/// Result of checking every row against the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    pub first_offending_row: Option<usize>,
}

/// Every row must induce a connected subgraph of `g`.
pub fn check_feasibility(g: &Graph, a: &MeasurementMatrix) -> Result<Feasibility> {
    if a.n() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: a.n(),
        });
    }
    let first = a.rows().iter().position(|r| !connected_within(g, r));
    Ok(Feasibility {
        feasible: first.is_none(),
        first_offending_row: first,
    })
}

/// Checks the plan invariants and that every kernel row is exactly what the
/// matrix row leaves after the hub and prior subtractions.
fn check_plan(a: &MeasurementMatrix, plan: &DecodePlan) -> Result<()> {
    let n = a.n();
    let m = a.m();
    let bad = |msg: String| Err(Error::InvalidParameter(format!("decode plan: {msg}")));
    let mut recovered = vec![false; n];
    for (gi, g) in plan.groups.iter().enumerate() {
        if g.row_range.end > m || g.row_range.start > g.row_range.end {
            return bad(format!("group {gi} row range out of bounds"));
        }
        let rows = g.row_range.len();
        if g.kernel.row_count() != rows || (rows > 0 && g.kernel.col_count() != g.target.len()) {
            return bad(format!("group {gi} kernel shape mismatch"));
        }
        if g.prior_subtract.len() != rows {
            return bad(format!("group {gi} prior_subtract length mismatch"));
        }
        let earlier = |ids: &[usize]| ids.iter().all(|&v| v < n && recovered[v]);
        if !g.prior_subtract.iter().all(|p| earlier(p)) || !earlier(&g.hub_subtract) {
            return bad(format!("group {gi} subtracts a node not recovered earlier"));
        }
        if let Some(h) = g.hub_row {
            if h >= m {
                return bad(format!("group {gi} hub row out of bounds"));
            }
        }
        let mut expected = vec![0i64; n];
        for (r, row_idx) in g.row_range.clone().enumerate() {
            expected.iter_mut().for_each(|e| *e = 0);
            for &v in a.row(row_idx) {
                expected[v] += 1;
            }
            for &v in &g.prior_subtract[r] {
                expected[v] -= 1;
            }
            if let Some(h) = g.hub_row {
                for &v in a.row(h) {
                    expected[v] -= 1;
                }
                for &v in &g.hub_subtract {
                    expected[v] += 1;
                }
            }
            for (c, &t) in g.target.iter().enumerate() {
                expected[t] -= i64::from(g.kernel.get(r, c));
            }
            if expected.iter().any(|&e| e != 0) {
                return bad(format!(
                    "group {gi} row {row_idx} does not match its kernel row"
                ));
            }
        }
        for &t in &g.target {
            if t >= n || recovered[t] {
                return bad(format!("group {gi} target {t} invalid or repeated"));
            }
            recovered[t] = true;
        }
    }
    Ok(())
}

/// A group's rows before they are placed in a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFragment {
    pub target: Vec<usize>,
    /// Hub-sum row and the recovered nodes inside it.
    pub hub: Option<(Vec<usize>, Vec<usize>)>,
    /// Kernel rows with their recovered-node subtractions.
    pub rows: Vec<(Vec<usize>, Vec<usize>)>,
    pub kernel: BinaryBlock,
}

/// Accumulates rows and decode groups in order.
#[derive(Debug, Clone)]
pub struct MatrixBuilder {
    n: usize,
    rows: Vec<Vec<usize>>,
    groups: Vec<DecodeGroup>,
}

impl MatrixBuilder {
    pub fn new(n: usize) -> Self {
        MatrixBuilder {
            n,
            rows: Vec::new(),
            groups: Vec::new(),
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, frag: GroupFragment) {
        let hub_row = frag.hub.as_ref().map(|_| self.rows.len());
        let hub_subtract = match frag.hub {
            Some((row, sub)) => {
                self.rows.push(row);
                sub
            }
            None => Vec::new(),
        };
        let start = self.rows.len();
        let mut prior = Vec::with_capacity(frag.rows.len());
        for (row, sub) in frag.rows {
            self.rows.push(row);
            prior.push(sub);
        }
        self.groups.push(DecodeGroup {
            target: frag.target,
            row_range: start..self.rows.len(),
            hub_row,
            hub_subtract,
            prior_subtract: prior,
            kernel: frag.kernel,
        });
    }

    /// One row per node, each measured alone.
    pub fn push_singletons(&mut self, nodes: &[usize]) {
        self.push(GroupFragment {
            target: nodes.to_vec(),
            hub: None,
            rows: nodes.iter().map(|&v| (vec![v], Vec::new())).collect(),
            kernel: BinaryBlock::identity(nodes.len()),
        });
    }

    pub fn finish(self) -> Result<MeasurementMatrix> {
        MeasurementMatrix::new(self.n, self.rows)?.with_plan(DecodePlan {
            groups: self.groups,
        })
    }
}

/// Plan that decodes the whole vector as one system.
pub fn whole_vector_plan(a: &MeasurementMatrix) -> DecodePlan {
    DecodePlan {
        groups: vec![DecodeGroup {
            target: (0..a.n()).collect(),
            row_range: 0..a.m(),
            hub_row: None,
            hub_subtract: Vec::new(),
            prior_subtract: vec![Vec::new(); a.m()],
            kernel: BinaryBlock::from_rows(a.to_dense()).expect("0-1 rows"),
        }],
    }
}
