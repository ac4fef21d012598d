use std::ops::Range;

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

/// Structural problems that leave a node without neighbors. Decoding still
/// works; the node simply never exchanges messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphWarning {
    EmptyCheck(usize),
    EmptyVariable(usize),
}

impl std::fmt::Display for GraphWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphWarning::EmptyCheck(i) => write!(f, "check node {i} has no neighbors"),
            GraphWarning::EmptyVariable(j) => write!(f, "variable node {j} has no neighbors"),
        }
    }
}

/// Bipartite check/variable graph of a parity-check matrix.
///
/// Edges are numbered lexicographically by `(check, variable)`, so the edges
/// of check `i` occupy the contiguous range `check_edges(i)`. Decoder message
/// buffers are flat arrays indexed by that edge number.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    m: usize,
    n: usize,
    edge_check: Vec<usize>,
    edge_var: Vec<usize>,
    check_offsets: Vec<usize>,
    var_offsets: Vec<usize>,
    // edge ids grouped by variable, ascending check index within each group
    var_edge_ids: Vec<usize>,
    var_checks: Vec<usize>,
    dc_max: usize,
    dv_max: usize,
    warnings: Vec<GraphWarning>,
}

impl TannerGraph {
    pub fn new(h: &BinaryMatrix) -> Result<Self> {
        let (m, n) = (h.rows(), h.cols());
        if m == 0 || n == 0 {
            return Err(Error::InvalidMatrix(format!(
                "cannot build a Tanner graph from an empty {m}x{n} matrix"
            )));
        }
        let mut edge_check = Vec::with_capacity(h.nnz());
        let mut edge_var = Vec::with_capacity(h.nnz());
        let mut check_offsets = Vec::with_capacity(m + 1);
        check_offsets.push(0);
        for i in 0..m {
            for &j in h.row(i) {
                edge_check.push(i);
                edge_var.push(j);
            }
            check_offsets.push(edge_var.len());
        }

        let mut degree = vec![0usize; n];
        for &j in &edge_var {
            degree[j] += 1;
        }
        let mut var_offsets = Vec::with_capacity(n + 1);
        var_offsets.push(0);
        for d in &degree {
            var_offsets.push(var_offsets.last().unwrap() + d);
        }
        let mut fill = var_offsets[..n].to_vec();
        let mut var_edge_ids = vec![0; edge_var.len()];
        let mut var_checks = vec![0; edge_var.len()];
        // edges are visited in check order, so each group ends up sorted by check
        for (e, &j) in edge_var.iter().enumerate() {
            var_edge_ids[fill[j]] = e;
            var_checks[fill[j]] = edge_check[e];
            fill[j] += 1;
        }

        let mut warnings = Vec::new();
        let mut dc_max = 0;
        for i in 0..m {
            let d = check_offsets[i + 1] - check_offsets[i];
            if d == 0 {
                warnings.push(GraphWarning::EmptyCheck(i));
            }
            dc_max = dc_max.max(d);
        }
        for (j, &d) in degree.iter().enumerate() {
            if d == 0 {
                warnings.push(GraphWarning::EmptyVariable(j));
            }
        }
        let dv_max = degree.iter().copied().max().unwrap_or(0);

        Ok(TannerGraph {
            m,
            n,
            edge_check,
            edge_var,
            check_offsets,
            var_offsets,
            var_edge_ids,
            var_checks,
            dc_max,
            dv_max,
            warnings,
        })
    }

    /// Number of check nodes.
    pub fn num_checks(&self) -> usize {
        self.m
    }

    /// Number of variable nodes.
    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// `(check, variable)` endpoints of edge `e`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        (self.edge_check[e], self.edge_var[e])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_check
            .iter()
            .copied()
            .zip(self.edge_var.iter().copied())
    }

    pub fn edge_checks(&self) -> &[usize] {
        &self.edge_check
    }

    pub fn edge_vars(&self) -> &[usize] {
        &self.edge_var
    }

    /// Edge ids of check `i`.
    pub fn check_edges(&self, i: usize) -> Range<usize> {
        self.check_offsets[i]..self.check_offsets[i + 1]
    }

    /// Variables adjacent to check `i`, ascending.
    pub fn check_neighbors(&self, i: usize) -> &[usize] {
        &self.edge_var[self.check_edges(i)]
    }

    /// Edge ids of variable `j`, ordered by check index.
    pub fn var_edges(&self, j: usize) -> &[usize] {
        &self.var_edge_ids[self.var_offsets[j]..self.var_offsets[j + 1]]
    }

    /// Checks adjacent to variable `j`, ascending.
    pub fn var_neighbors(&self, j: usize) -> &[usize] {
        &self.var_checks[self.var_offsets[j]..self.var_offsets[j + 1]]
    }

    pub fn check_degree(&self, i: usize) -> usize {
        self.check_offsets[i + 1] - self.check_offsets[i]
    }

    pub fn var_degree(&self, j: usize) -> usize {
        self.var_offsets[j + 1] - self.var_offsets[j]
    }

    pub fn dc_max(&self) -> usize {
        self.dc_max
    }

    pub fn dv_max(&self) -> usize {
        self.dv_max
    }

    pub fn warnings(&self) -> &[GraphWarning] {
        &self.warnings
    }

    /// Parity-check matrix this graph represents.
    pub fn to_matrix(&self) -> BinaryMatrix {
        let rows = (0..self.m)
            .map(|i| self.check_neighbors(i).to_vec())
            .collect();
        BinaryMatrix::from_rows(self.n, rows).expect("graph adjacency is a valid matrix")
    }
}

/// Free-function form of [`TannerGraph::new`].
pub fn build_tanner(h: &BinaryMatrix) -> Result<TannerGraph> {
    TannerGraph::new(h)
}
