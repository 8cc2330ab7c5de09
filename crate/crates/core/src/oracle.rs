//! Brute-force evaluation by full enumeration of label maps.
//!
//! Maps are visited in lexicographic order with vertex 0 most significant and
//! summed with [`ComplexSum`] in that order, so results are bit-reproducible.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sum::ComplexSum;
use crate::weights::{lift_matrix, EdgeWeightTensor, SymmetricWeightMatrix};

/// Default cap on `log2` of the number of enumerated maps.
pub const DEFAULT_BUDGET_BITS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationBudget {
    pub max_bits: f64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_bits: DEFAULT_BUDGET_BITS,
        }
    }
}

impl EnumerationBudget {
    fn check(&self, free_vertices: usize, k: usize) -> Result<()> {
        let required_bits = free_vertices as f64 * (k as f64).log2();
        if required_bits > self.max_bits {
            return Err(Error::BudgetExceeded {
                required_bits,
                budget_bits: self.max_bits,
            });
        }
        Ok(())
    }
}

/// Pinned vertices `W = (v_1, ..)` with labels `L = (l_1, ..)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RestrictionSpec {
    pub pinned_vertices: Vec<usize>,
    pub pinned_labels: Vec<usize>,
}

impl RestrictionSpec {
    pub fn new(pinned_vertices: Vec<usize>, pinned_labels: Vec<usize>) -> Self {
        RestrictionSpec {
            pinned_vertices,
            pinned_labels,
        }
    }

    /// `(W, u)` and `(L, l)`.
    pub fn extended(&self, vertex: usize, label: usize) -> Self {
        let mut r = self.clone();
        r.pinned_vertices.push(vertex);
        r.pinned_labels.push(label);
        r
    }

    fn assignment(&self, vertex_count: usize, k: usize) -> Result<Vec<Option<usize>>> {
        if self.pinned_vertices.len() != self.pinned_labels.len() {
            return Err(Error::InvalidRestriction(format!(
                "{} pinned vertices but {} labels",
                self.pinned_vertices.len(),
                self.pinned_labels.len()
            )));
        }
        let mut fixed = vec![None; vertex_count];
        for (&v, &l) in self.pinned_vertices.iter().zip(&self.pinned_labels) {
            if v >= vertex_count {
                return Err(Error::InvalidRestriction(format!("vertex {v} out of range")));
            }
            if l >= k {
                return Err(Error::InvalidRestriction(format!("label {l} out of range for k = {k}")));
            }
            if fixed[v].replace(l).is_some() {
                return Err(Error::InvalidRestriction(format!("vertex {v} pinned twice")));
            }
        }
        Ok(fixed)
    }
}

fn enumerate(g: &Graph, b: &EdgeWeightTensor, fixed: &[Option<usize>]) -> Complex64 {
    let k = b.k();
    let mut labels: Vec<usize> = fixed.iter().map(|l| l.unwrap_or(0)).collect();
    let free: Vec<usize> = (0..g.vertex_count()).filter(|&v| fixed[v].is_none()).collect();
    let mut acc = ComplexSum::new();
    loop {
        let mut prod = Complex64::new(1.0, 0.0);
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            prod *= b.get(e, labels[u], labels[v]);
        }
        acc.add(prod);

        // Odometer: the last free vertex is the least significant digit.
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return acc.value();
            }
            pos -= 1;
            let v = free[pos];
            labels[v] += 1;
            if labels[v] < k {
                break;
            }
            labels[v] = 0;
        }
    }
}

/// `Q_G(B)` by full enumeration with the default budget.
pub fn exact_q(g: &Graph, b: &EdgeWeightTensor) -> Result<Complex64> {
    exact_q_with(g, b, EnumerationBudget::default())
}

pub fn exact_q_with(g: &Graph, b: &EdgeWeightTensor, budget: EnumerationBudget) -> Result<Complex64> {
    b.check_graph(g)?;
    budget.check(g.vertex_count(), b.k())?;
    Ok(enumerate(g, b, &vec![None; g.vertex_count()]))
}

/// `P_G(A)`, evaluated as `Q_G` of the lifted tensor.
pub fn exact_p(g: &Graph, a: &SymmetricWeightMatrix) -> Result<Complex64> {
    exact_q(g, &lift_matrix(a, g))
}

pub fn exact_p_with(g: &Graph, a: &SymmetricWeightMatrix, budget: EnumerationBudget) -> Result<Complex64> {
    exact_q_with(g, &lift_matrix(a, g), budget)
}

/// `Q^W_L(B)`: the sum restricted to maps with `phi(v_i) = l_i`. Only the
/// free vertices count against the budget.
pub fn exact_restricted_q(g: &Graph, b: &EdgeWeightTensor, r: &RestrictionSpec) -> Result<Complex64> {
    exact_restricted_q_with(g, b, r, EnumerationBudget::default())
}

pub fn exact_restricted_q_with(
    g: &Graph,
    b: &EdgeWeightTensor,
    r: &RestrictionSpec,
    budget: EnumerationBudget,
) -> Result<Complex64> {
    b.check_graph(g)?;
    let fixed = r.assignment(g.vertex_count(), b.k())?;
    budget.check(fixed.iter().filter(|l| l.is_none()).count(), b.k())?;
    Ok(enumerate(g, b, &fixed))
}

/// Size of a maximum cut, by enumerating all vertex subsets.
pub fn exact_max_cut(g: &Graph) -> Result<usize> {
    exact_max_cut_with(g, EnumerationBudget::default())
}

pub fn exact_max_cut_with(g: &Graph, budget: EnumerationBudget) -> Result<usize> {
    let n = g.vertex_count();
    budget.check(n, 2)?;
    if n >= 64 {
        return Err(Error::BudgetExceeded {
            required_bits: n as f64,
            budget_bits: 63.0,
        });
    }
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let cut = g
            .edges()
            .iter()
            .filter(|&&(u, v)| ((mask >> u) ^ (mask >> v)) & 1 == 1)
            .count();
        best = best.max(cut);
    }
    Ok(best)
}
