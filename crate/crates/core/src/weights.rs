//! Weight data model: the uniform symmetric matrix `A`, the per-edge tensor
//! `B`, builders for the standard matrices, and the polydisc certificate.
//!
//! Labels are 0-indexed. An unordered label pair `{i, j}` lives at
//! [`pair_index`] in a triangular layout of `k (k + 1) / 2` slots, which makes
//! `b_ij == b_ji` hold by construction.

use num_complex::Complex64;
use serde::Deserialize;

use crate::constants::{gamma_table, GammaRow};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Graph};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn pair_count(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Flat index of the unordered pair `{i, j}` (row-major upper triangle).
pub fn pair_index(i: usize, j: usize, k: usize) -> Result<usize> {
    for label in [i, j] {
        if label >= k {
            return Err(Error::LabelOutOfRange { label, k });
        }
    }
    Ok(pair_index_unchecked(i, j, k))
}

#[inline]
pub(crate) fn pair_index_unchecked(i: usize, j: usize, k: usize) -> usize {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    lo * k - lo * (lo + 1) / 2 + hi
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricWeightMatrix {
    k: usize,
    entries: Vec<Complex64>,
}

impl SymmetricWeightMatrix {
    /// Builds from `f(i, j)` evaluated for `i <= j` only.
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidWeights("k must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(pair_count(k));
        for i in 0..k {
            for j in i..k {
                entries.push(f(i, j));
            }
        }
        Ok(SymmetricWeightMatrix { k, entries })
    }

    /// Builds from full rows; rejects non-square or non-symmetric input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let k = rows.len();
        if let Some(r) = rows.iter().position(|row| row.len() != k) {
            return Err(Error::InvalidWeights(format!(
                "matrix row {r} has {} entries, expected {k}",
                rows[r].len()
            )));
        }
        for i in 0..k {
            for j in i + 1..k {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidWeights(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Self::from_fn(k, |i, j| rows[i][j])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[pair_index_unchecked(i, j, self.k)]
    }

    pub fn triangle(&self) -> &[Complex64] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeightTensor {
    k: usize,
    edge_count: usize,
    blocks: Vec<Complex64>,
}

impl EdgeWeightTensor {
    /// The all-ones tensor `J`.
    pub fn all_ones(k: usize, edge_count: usize) -> Result<Self> {
        Self::from_fn(k, edge_count, |_, _, _| ONE)
    }

    /// Builds from `f(edge, i, j)` evaluated for `i <= j` only.
    pub fn from_fn(
        k: usize,
        edge_count: usize,
        mut f: impl FnMut(usize, usize, usize) -> Complex64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidWeights("k must be at least 1".into()));
        }
        let mut blocks = Vec::with_capacity(edge_count * pair_count(k));
        for e in 0..edge_count {
            for i in 0..k {
                for j in i..k {
                    blocks.push(f(e, i, j));
                }
            }
        }
        Ok(EdgeWeightTensor {
            k,
            edge_count,
            blocks,
        })
    }

    /// Builds from per-edge triangular arrays in [`pair_index`] order.
    pub fn from_blocks(k: usize, blocks: &[Vec<Complex64>]) -> Result<Self> {
        let width = pair_count(k);
        if let Some(e) = blocks.iter().position(|b| b.len() != width) {
            return Err(Error::InvalidWeights(format!(
                "block {e} has {} entries, expected k(k+1)/2 = {width}",
                blocks[e].len()
            )));
        }
        Self::from_fn(k, blocks.len(), |e, i, j| blocks[e][pair_index_unchecked(i, j, k)])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn get(&self, edge: usize, i: usize, j: usize) -> Complex64 {
        self.blocks[edge * pair_count(self.k) + pair_index_unchecked(i, j, self.k)]
    }

    pub fn block(&self, edge: usize) -> &[Complex64] {
        let w = pair_count(self.k);
        &self.blocks[edge * w..(edge + 1) * w]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.blocks
    }

    /// Checks that the tensor is bound to `g` (one block per edge).
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.edge_count != g.edge_count() {
            return Err(Error::InvalidWeights(format!(
                "tensor has {} blocks but the graph has {} edges",
                self.edge_count,
                g.edge_count()
            )));
        }
        Ok(())
    }

    /// `max |1 - b|` over all stored entries; 0 for an empty tensor.
    pub fn distance_from_ones(&self) -> f64 {
        self.blocks.iter().map(|b| (ONE - b).norm()).fold(0.0, f64::max)
    }

    /// `J + t (B - J)`.
    pub fn interpolate(&self, t: Complex64) -> Self {
        EdgeWeightTensor {
            k: self.k,
            edge_count: self.edge_count,
            blocks: self.blocks.iter().map(|b| ONE + t * (b - ONE)).collect(),
        }
    }
}

/// Uniform tensor `b^{uv}_{ij} = a_{ij}` on every edge of `g`.
pub fn lift_matrix(a: &SymmetricWeightMatrix, g: &Graph) -> EdgeWeightTensor {
    let width = pair_count(a.k);
    let mut blocks = Vec::with_capacity(width * g.edge_count());
    for _ in 0..g.edge_count() {
        blocks.extend_from_slice(&a.entries);
    }
    EdgeWeightTensor {
        k: a.k,
        edge_count: g.edge_count(),
        blocks,
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn soft_radius(gamma: f64, max_degree: usize) -> Result<f64> {
    if max_degree == 0 {
        return Err(Error::InvalidArgument(
            "soft weights need max degree >= 1; edgeless graphs have no soft matrix".into(),
        ));
    }
    Ok(gamma / max_degree as f64)
}

/// Proper-coloring matrix: 1 off the diagonal, 0 on it.
pub fn coloring_matrix_hard(k: usize) -> Result<SymmetricWeightMatrix> {
    SymmetricWeightMatrix::from_fn(k, |i, j| if i == j { ZERO } else { ONE })
}

/// Soft coloring matrix: `1 + gamma/Delta` off the diagonal, `1 - gamma/Delta` on it.
pub fn coloring_matrix_soft(k: usize, gamma: f64, max_degree: usize) -> Result<SymmetricWeightMatrix> {
    let r = soft_radius(gamma, max_degree)?;
    SymmetricWeightMatrix::from_fn(k, |i, j| if i == j { real(1.0 - r) } else { real(1.0 + r) })
}

/// Label 0 marks membership in the set; `a_00 = 0`.
pub fn independent_set_matrix_hard() -> SymmetricWeightMatrix {
    SymmetricWeightMatrix::from_fn(2, |i, j| if i == 0 && j == 0 { ZERO } else { ONE })
        .expect("k = 2")
}

pub fn independent_set_matrix_soft(gamma: f64, max_degree: usize) -> Result<SymmetricWeightMatrix> {
    let r = soft_radius(gamma, max_degree)?;
    SymmetricWeightMatrix::from_fn(2, |i, j| {
        if i == 0 && j == 0 {
            real(1.0 - r)
        } else {
            real(1.0 + r)
        }
    })
}

/// `A_eps`: `eps` on the diagonal, 1 off it.
pub fn maxcut_matrix(eps: f64) -> Result<SymmetricWeightMatrix> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("max-cut eps must be in (0, 1), got {eps}")));
    }
    SymmetricWeightMatrix::from_fn(2, |i, j| if i == j { real(eps) } else { ONE })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HomWeighting {
    /// 1 for same-colored target edges, 0 otherwise.
    Hard,
    /// `1 + gamma/Delta` for same-colored target edges, `1 - gamma/Delta` otherwise.
    Soft { gamma: f64, max_degree: usize },
}

/// Weights counting color-preserving homomorphisms `G -> H`.
///
/// `g_colors[e]` is the color of canonical edge `e` of `g`; likewise for `h`,
/// whose vertices are the `h.vertex_count()` target labels.
pub fn colored_hom_tensor<C: PartialEq>(
    g: &Graph,
    g_colors: &[C],
    h: &Graph,
    h_colors: &[C],
    weighting: HomWeighting,
) -> Result<EdgeWeightTensor> {
    if g_colors.len() != g.edge_count() {
        return Err(Error::InvalidWeights(format!(
            "color alphabet mismatch: {} colors for {} edges of G",
            g_colors.len(),
            g.edge_count()
        )));
    }
    if h_colors.len() != h.edge_count() {
        return Err(Error::InvalidWeights(format!(
            "color alphabet mismatch: {} colors for {} edges of H",
            h_colors.len(),
            h.edge_count()
        )));
    }
    let (hit, miss) = match weighting {
        HomWeighting::Hard => (ONE, ZERO),
        HomWeighting::Soft { gamma, max_degree } => {
            let r = soft_radius(gamma, max_degree)?;
            (real(1.0 + r), real(1.0 - r))
        }
    };
    let k = h.vertex_count();
    EdgeWeightTensor::from_fn(k, g.edge_count(), |e, i, j| {
        match h.edge_index(i, j) {
            Some(he) if i != j && h_colors[he] == g_colors[e] => hit,
            _ => miss,
        }
    })
}

/// [`colored_hom_tensor`] for parsed colored graphs.
pub fn colored_hom_tensor_for(
    g: &ColoredGraph,
    h: &ColoredGraph,
    weighting: HomWeighting,
) -> Result<EdgeWeightTensor> {
    colored_hom_tensor(&g.graph, &g.colors, &h.graph, &h.colors, weighting)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroFreeCertificate {
    /// `max |1 - b|` actually attained.
    pub delta: f64,
    pub gamma: f64,
    pub alpha: f64,
    /// `gamma / Delta`.
    pub delta_max: f64,
    pub beta: f64,
    pub max_degree: usize,
    pub passed: bool,
}

impl ZeroFreeCertificate {
    pub fn require(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::CertificateFailed {
                delta: self.delta,
                delta_max: self.delta_max,
            })
        }
    }
}

/// Checks membership of `b` in the admissible polydisc `|1 - b| <= gamma / Delta`.
pub fn polydisc_certificate(b: &EdgeWeightTensor, max_degree: usize) -> Result<ZeroFreeCertificate> {
    if max_degree == 0 {
        return Err(Error::InvalidArgument(
            "certificate needs max degree >= 1; edgeless graphs are evaluated exactly".into(),
        ));
    }
    let GammaRow { gamma, alpha, beta } = gamma_table(max_degree);
    let delta = b.distance_from_ones();
    let delta_max = gamma / max_degree as f64;
    Ok(ZeroFreeCertificate {
        delta,
        gamma,
        alpha,
        delta_max,
        beta,
        max_degree,
        // A few ulps of slack so that `1 +- gamma/Delta` built in floating point passes.
        passed: delta <= delta_max * (1.0 + 8.0 * f64::EPSILON),
    })
}

/// A complex scalar in a weight file: a bare number or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexRepr> for Complex64 {
    fn from(c: ComplexRepr) -> Self {
        match c {
            ComplexRepr::Real(re) => Complex64::new(re, 0.0),
            ComplexRepr::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BlockRepr {
    Bare(Vec<ComplexRepr>),
    Object { entries: Vec<ComplexRepr> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightFile {
    k: usize,
    matrix: Option<Vec<Vec<ComplexRepr>>>,
    blocks: Option<Vec<BlockRepr>>,
}

/// Contents of a weight file.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Matrix(SymmetricWeightMatrix),
    Tensor(EdgeWeightTensor),
}

impl WeightSpec {
    pub fn k(&self) -> usize {
        match self {
            WeightSpec::Matrix(a) => a.k(),
            WeightSpec::Tensor(b) => b.k(),
        }
    }

    /// Resolves to a tensor bound to `g`.
    pub fn into_tensor(self, g: &Graph) -> Result<EdgeWeightTensor> {
        match self {
            WeightSpec::Matrix(a) => Ok(lift_matrix(&a, g)),
            WeightSpec::Tensor(b) => {
                b.check_graph(g)?;
                Ok(b)
            }
        }
    }
}

/// Parses the JSON weight format:
///
/// ```json
/// {"k": 2, "matrix": [[1, [1.1, 0.05]], [[1.1, 0.05], 0.9]]}
/// {"k": 2, "blocks": [[1, 1.1, 0.9], {"entries": [1, 1, 1]}]}
/// ```
///
/// Exactly one of `matrix` / `blocks` must be present. Blocks list the
/// `k(k+1)/2` entries of the upper triangle row by row.
pub fn parse_weights(text: &str) -> Result<WeightSpec> {
    let file: WeightFile =
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: format!("weight file: {e}"),
        })?;
    match (file.matrix, file.blocks) {
        (Some(rows), None) => {
            let rows: Vec<Vec<Complex64>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(Complex64::from).collect())
                .collect();
            if rows.len() != file.k {
                return Err(Error::InvalidWeights(format!(
                    "matrix has {} rows, expected k = {}",
                    rows.len(),
                    file.k
                )));
            }
            Ok(WeightSpec::Matrix(SymmetricWeightMatrix::from_rows(&rows)?))
        }
        (None, Some(blocks)) => {
            let blocks: Vec<Vec<Complex64>> = blocks
                .into_iter()
                .map(|b| match b {
                    BlockRepr::Bare(v) | BlockRepr::Object { entries: v } => {
                        v.into_iter().map(Complex64::from).collect()
                    }
                })
                .collect();
            Ok(WeightSpec::Tensor(EdgeWeightTensor::from_blocks(file.k, &blocks)?))
        }
        _ => Err(Error::InvalidWeights(
            "weight file needs exactly one of \"matrix\" or \"blocks\"".into(),
        )),
    }
}
