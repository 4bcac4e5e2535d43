use super::KernelError;

/// Compressed sparse row matrix with `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Checks every structural invariant: `row_ptr` starts at 0, is
    /// non-decreasing and ends at `nnz`; column indices are in range and
    /// strictly increasing within each row.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self, KernelError> {
        let bad = |m: String| Err(KernelError::InvalidInput(m));
        if row_ptr.len() != n_rows + 1 {
            return bad(format!(
                "row_ptr has {} entries, expected {}",
                row_ptr.len(),
                n_rows + 1
            ));
        }
        if col_idx.len() != values.len() {
            return bad("col_idx and values differ in length".into());
        }
        if row_ptr[0] != 0 || row_ptr[n_rows] != col_idx.len() {
            return bad("row_ptr must start at 0 and end at nnz".into());
        }
        for (r, w) in row_ptr.windows(2).enumerate() {
            if w[0] > w[1] {
                return bad(format!("row_ptr decreases at row {r}"));
            }
            let cols = &col_idx[w[0]..w[1]];
            if let Some(&c) = cols.iter().find(|&&c| c >= n_cols) {
                return bad(format!("column {c} out of range in row {r}"));
            }
            if cols.windows(2).any(|p| p[0] >= p[1]) {
                return bad(format!("columns of row {r} not strictly increasing"));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        mut entries: Vec<(usize, usize, f64)>,
    ) -> Result<Self, KernelError> {
        if let Some(&(r, c, _)) = entries.iter().find(|&&(r, c, _)| r >= n_rows || c >= n_cols) {
            return Err(KernelError::InvalidInput(format!(
                "entry ({r}, {c}) outside {n_rows}x{n_cols}"
            )));
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n_rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self::new(n_rows, n_cols, row_ptr, col_idx, values)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)).collect()).expect("valid identity")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(column, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }
}

/// Directed graph in adjacency-list CSR form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    pub fn new(n_nodes: usize, offsets: Vec<usize>, neighbors: Vec<usize>) -> Result<Self, KernelError> {
        let bad = |m: String| Err(KernelError::InvalidInput(m));
        if offsets.len() != n_nodes + 1 || offsets[0] != 0 || offsets[n_nodes] != neighbors.len() {
            return bad("offsets must have n_nodes + 1 entries from 0 to edge count".into());
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return bad("offsets must be non-decreasing".into());
        }
        if let Some(&v) = neighbors.iter().find(|&&v| v >= n_nodes) {
            return bad(format!("neighbor {v} out of range"));
        }
        Ok(Self {
            n_nodes,
            offsets,
            neighbors,
        })
    }

    /// Builds a graph from directed edges; each adjacency list is sorted and
    /// deduplicated.
    pub fn from_edges(n_nodes: usize, edges: &[(usize, usize)]) -> Result<Self, KernelError> {
        let mut adj = vec![Vec::new(); n_nodes];
        for &(u, v) in edges {
            if u >= n_nodes || v >= n_nodes {
                return Err(KernelError::InvalidInput(format!("edge ({u}, {v}) out of range")));
            }
            adj[u].push(v);
        }
        let mut offsets = Vec::with_capacity(n_nodes + 1);
        let mut neighbors = Vec::with_capacity(edges.len());
        offsets.push(0);
        for mut list in adj {
            list.sort_unstable();
            list.dedup();
            neighbors.extend(list);
            offsets.push(neighbors.len());
        }
        Self::new(n_nodes, offsets, neighbors)
    }

    /// Uses a square matrix's sparsity pattern as adjacency (row -> columns).
    pub fn from_pattern(m: &CsrMatrix) -> Result<Self, KernelError> {
        if m.n_rows() != m.n_cols() {
            return Err(KernelError::InvalidInput("adjacency matrix must be square".into()));
        }
        Self::new(m.n_rows(), m.row_ptr().to_vec(), m.col_idx().to_vec())
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.len()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn neighbor_array(&self) -> &[usize] {
        &self.neighbors
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Column-stochastic transition matrix transposed for pull-style
    /// iteration: entry `(v, u) = 1 / out_degree(u)` for every edge `u -> v`.
    pub fn transition_matrix(&self) -> CsrMatrix {
        let mut entries = Vec::with_capacity(self.n_edges());
        for u in 0..self.n_nodes {
            let w = 1.0 / self.out_degree(u) as f64;
            for &v in self.neighbors(u) {
                entries.push((v, u, w));
            }
        }
        CsrMatrix::from_triplets(self.n_nodes, self.n_nodes, entries).expect("edges are in range")
    }
}

/// Complex signal in split real/imaginary layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl ComplexSignal {
    /// Length must match and be a power of two, at least 2.
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Result<Self, KernelError> {
        if re.len() != im.len() {
            return Err(KernelError::InvalidInput(
                "real and imaginary parts differ in length".into(),
            ));
        }
        let n = re.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(KernelError::NotPowerOfTwo(n));
        }
        Ok(Self { re, im })
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }
}

/// Kernel output.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// SpMV result `y`.
    Vector(Vec<f64>),
    /// BFS hop counts, `-1` for unreachable vertices.
    Distances(Vec<i64>),
    Ranks(Vec<f64>),
    Spectrum(ComplexSignal),
}

impl Payload {
    /// Left-to-right sum of all payload elements (real parts, then imaginary
    /// parts for a spectrum).
    pub fn checksum(&self) -> f64 {
        match self {
            Payload::Vector(v) | Payload::Ranks(v) => v.iter().sum(),
            Payload::Distances(d) => d.iter().map(|&x| x as f64).sum(),
            Payload::Spectrum(s) => s.re().iter().chain(s.im()).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelResult {
    pub payload: Payload,
    pub checksum: f64,
}

impl From<Payload> for KernelResult {
    fn from(payload: Payload) -> Self {
        Self {
            checksum: payload.checksum(),
            payload,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_sort() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(1, 2, 1.0), (0, 1, 2.0), (1, 0, 3.0), (1, 2, 4.0)]).unwrap();
        assert_eq!(m.row_ptr(), &[0, 1, 3]);
        assert_eq!(m.col_idx(), &[1, 0, 2]);
        assert_eq!(m.values(), &[2.0, 3.0, 5.0]);
    }

    #[test]
    fn csr_rejects_broken_invariants() {
        assert!(CsrMatrix::new(1, 2, vec![0, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::new(1, 2, vec![0, 1], vec![2], vec![1.0]).is_err());
        assert!(CsrMatrix::new(1, 2, vec![1, 1], vec![], vec![]).is_err());
        assert!(CsrMatrix::new(2, 2, vec![0, 1, 0], vec![0], vec![1.0]).is_err());
    }

    #[test]
    fn transition_matrix_columns_sum_to_one() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
        let t = g.transition_matrix();
        let mut colsum = [0.0; 3];
        for r in 0..3 {
            for (c, v) in t.row(r) {
                colsum[c] += v;
            }
        }
        assert_eq!(colsum, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn signal_length_rules() {
        assert!(ComplexSignal::new(vec![0.0; 8], vec![0.0; 8]).is_ok());
        assert!(matches!(
            ComplexSignal::new(vec![0.0; 6], vec![0.0; 6]),
            Err(KernelError::NotPowerOfTwo(6))
        ));
        assert!(ComplexSignal::new(vec![0.0; 1], vec![0.0; 1]).is_err());
        assert!(ComplexSignal::new(vec![0.0; 4], vec![0.0; 2]).is_err());
    }

    #[test]
    fn checksum_matches_payload() {
        let r: KernelResult = Payload::Distances(vec![0, 1, -1]).into();
        assert_eq!(r.checksum, 0.0);
        let s = ComplexSignal::new(vec![1.0, 2.0], vec![0.5, 0.5]).unwrap();
        let r: KernelResult = Payload::Spectrum(s).into();
        assert_eq!(r.checksum, 4.0);
    }
}
