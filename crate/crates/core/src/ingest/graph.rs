use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::solvers::V_SUM_TOL;
use crate::tensor::Tensor3;

/// Largest `n` for which [`build_pagerank_tensor`] materializes `P`; the
/// dangling corrections make it dense, `n³` entries.
pub const MAX_PAGERANK_N: usize = 256;

/// Directed graph with unit weights, 0-based nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Adjacency {
    n: usize,
    out: Vec<BTreeSet<usize>>,
}

impl Adjacency {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = vec![BTreeSet::new(); n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("edge ({i}, {j}) outside 0..{n}")));
            }
            out[i].insert(j);
        }
        Ok(Self { n, out })
    }

    /// Adds the reverse of every edge.
    pub fn symmetrized(&self) -> Self {
        let mut out = self.out.clone();
        for (i, s) in self.out.iter().enumerate() {
            for &j in s {
                out[j].insert(i);
            }
        }
        Self { n: self.n, out }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.out[i].contains(&j)
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out[i].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
    }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<Adjacency> {
    parse_matrix_market(&std::fs::read_to_string(path)?)
}

/// Coordinate Matrix Market (pattern, real or integer; general or
/// symmetric) as a graph: nonzero `(i, j)` is the edge `i → j`.
pub fn parse_matrix_market(src: &str) -> Result<Adjacency> {
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(perr(hline, format!("bad header '{header}'")));
    }
    if tokens[2] != "coordinate" {
        return Err(perr(hline, format!("unsupported format '{}'", tokens[2])));
    }
    let pattern = match tokens[3].as_str() {
        "pattern" => true,
        "real" | "integer" => false,
        f => return Err(perr(hline, format!("unsupported field '{f}'"))),
    };
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        s => return Err(perr(hline, format!("unsupported symmetry '{s}'"))),
    };
    let mut data = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (sline, size) = data
        .next()
        .ok_or_else(|| perr(hline + 1, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| perr(sline, format!("bad size line: {e}")))?;
    if dims.len() != 3 {
        return Err(perr(sline, "size line needs rows, cols, nnz".into()));
    }
    if dims[0] != dims[1] {
        return Err(perr(sline, format!("adjacency must be square, got {} x {}", dims[0], dims[1])));
    }
    let n = dims[0];
    let mut edges = Vec::with_capacity(dims[2]);
    let mut count = 0;
    for (ln, l) in data {
        count += 1;
        let f: Vec<&str> = l.split_whitespace().collect();
        let want = if pattern { 2 } else { 3 };
        if f.len() < want {
            return Err(perr(ln, format!("expected {want} fields")));
        }
        let idx = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|e| perr(ln, format!("bad index '{s}': {e}")))?;
            if v == 0 || v > n {
                return Err(perr(ln, format!("index {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let (i, j) = (idx(f[0])?, idx(f[1])?);
        let nonzero = if pattern {
            true
        } else {
            let v: f64 = f[2].parse().map_err(|e| perr(ln, format!("bad value '{}': {e}", f[2])))?;
            v != 0.0
        };
        if nonzero {
            edges.push((i, j));
            if symmetric {
                edges.push((j, i));
            }
        }
    }
    if count != dims[2] {
        return Err(perr(sline, format!("declared {} entries, found {count}", dims[2])));
    }
    Adjacency::new(n, &edges)
}

/// `C_ijk = 1` when `i → j → k → i` is a directed cycle on three distinct nodes.
pub fn three_cycle_tensor(a: &Adjacency) -> Tensor3 {
    let n = a.dim();
    let mut entries = Vec::new();
    for (i, j) in a.edges() {
        if i == j {
            continue;
        }
        for &k in &a.out[j] {
            if k != i && k != j && a.has_edge(k, i) {
                entries.push((i, j, k, 1.0));
            }
        }
    }
    Tensor3::from_entries(n, &entries).expect("entries are distinct and in range")
}

/// Scale each nonzero column of the unfolding to sum 1; zero columns stay zero.
pub fn column_normalize_substochastic(c: &Tensor3) -> Tensor3 {
    let n = c.dim();
    let sums = c.column_sums();
    let entries: Vec<_> = c
        .entries()
        .map(|(i, j, k, v)| (i, j, k, v / sums[j + k * n]))
        .collect();
    Tensor3::from_entries(n, &entries).expect("normalizing keeps entries valid")
}

/// `P₍₁₎ = ν(S + v·dangling(S)) + (1-ν)(M + v·dangling(M)) ⊗ 1ᵀ` with `S`
/// the normalized three-cycle tensor, `M = AᵀD†` and
/// `dangling(X) = 1ᵀ - 1ᵀX`. Column `c = j + k·n` of the Kronecker term is
/// column `k` of `M + v·dangling(M)`.
pub fn build_pagerank_tensor(a: &Adjacency, v: &[f64], nu: f64) -> Result<Tensor3> {
    let n = a.dim();
    if n > MAX_PAGERANK_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_PAGERANK_N,
        });
    }
    crate::error::check_dim(n, v.len())?;
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::InvalidInput(format!("nu = {nu} is not in [0, 1]")));
    }
    if v.iter().any(|x| !(*x >= 0.0)) || (v.iter().sum::<f64>() - 1.0).abs() > V_SUM_TOL {
        return Err(Error::InvalidInput("v must be nonnegative with sum 1".into()));
    }
    let s = column_normalize_substochastic(&three_cycle_tensor(a)).unfolding();
    // Column k of M + v·dangling(M).
    let mut mcol = vec![vec![0.0; n]; n];
    for (k, col) in mcol.iter_mut().enumerate() {
        let d = a.out_degree(k);
        if d == 0 {
            col.copy_from_slice(v);
        } else {
            for &i in &a.out[k] {
                col[i] = 1.0 / d as f64;
            }
        }
    }
    let mut entries = Vec::new();
    for c in 0..n * n {
        let (j, k) = (c % n, c / n);
        let s_sum: f64 = (0..n).map(|i| s[(i, c)]).sum();
        let dang = 1.0 - s_sum;
        for i in 0..n {
            let val = nu * (s[(i, c)] + v[i] * dang) + (1.0 - nu) * mcol[k][i];
            if val != 0.0 {
                entries.push((i, j, k, val));
            }
        }
    }
    Tensor3::from_entries(n, &entries)
}

/// `v_i = U_i·exp(9 N_i)` normalized to sum 1, from a seeded ChaCha8 stream
/// drawing `(U_i, N_i)` pairs.
pub fn heavy_tailed_v(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let z: f64 = rng.sample(StandardNormal);
            u * (9.0 * z).exp()
        })
        .collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|x| x / s).collect()
}

/// Whitespace- or comma-separated numbers; `#` and `%` start comments.
pub fn parse_vector(src: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let body = line.split(['#', '%']).next().unwrap_or("");
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v: f64 = tok.parse().map_err(|e| Error::Parse {
                line: ln + 1,
                msg: format!("bad number '{tok}': {e}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("non-finite value '{tok}'"),
                });
            }
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no numbers found".into(),
        });
    }
    Ok(out)
}
