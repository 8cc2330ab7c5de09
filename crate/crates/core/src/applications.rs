//! Soft counting, max-cut bounds and the color-preserving homomorphism
//! distinguisher, each evaluated either exactly or through the Taylor pipeline.

use num_complex::Complex64;

use crate::constants::gamma_table;
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Graph};
use crate::oracle::{exact_q_with, EnumerationBudget};
use crate::taylor::{approximate_q_with, check_eps_rel, ApproxOptions, ApproxResult, TaylorConfig};
use crate::weights::{
    coloring_matrix_soft, colored_hom_tensor_for, independent_set_matrix_soft, lift_matrix,
    maxcut_matrix, EdgeWeightTensor, HomWeighting,
};

/// Smallest accepted `1 - eps` for max-cut bounds; `ln(1/eps)` vanishes at 1.
pub const MAXCUT_EPS_FLOOR: f64 = 1e-6;

/// Guard factors around the distinguisher thresholds.
pub const FAR_GUARD: f64 = 1.05;
pub const MANY_GUARD: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approx,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Approx => "approx",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub mode: Mode,
    pub eps_rel: f64,
    pub order: Option<usize>,
    pub budget: EnumerationBudget,
    pub taylor: TaylorConfig,
    /// Replaces the tabulated gamma. Values above the table void the
    /// approximation guarantee and make approx mode fail its certificate.
    pub gamma_override: Option<f64>,
}

impl Settings {
    pub fn exact() -> Self {
        Settings {
            mode: Mode::Exact,
            eps_rel: 0.1,
            order: None,
            budget: EnumerationBudget::default(),
            taylor: TaylorConfig::default(),
            gamma_override: None,
        }
    }

    pub fn approx(eps_rel: f64) -> Self {
        Settings {
            mode: Mode::Approx,
            eps_rel,
            ..Settings::exact()
        }
    }

    fn approx_options(&self) -> ApproxOptions {
        ApproxOptions {
            eps_rel: self.eps_rel,
            order: self.order,
            config: self.taylor,
        }
    }

    fn gamma_for(&self, max_degree: usize) -> f64 {
        self.gamma_override
            .unwrap_or_else(|| gamma_table(max_degree).gamma)
    }
}

/// Value of `Q_G(B)` under the chosen mode, with the approximation record if any.
pub fn evaluate(
    g: &Graph,
    b: &EdgeWeightTensor,
    settings: &Settings,
) -> Result<(Complex64, Option<ApproxResult>)> {
    match settings.mode {
        Mode::Exact => Ok((exact_q_with(g, b, settings.budget)?, None)),
        Mode::Approx => {
            let r = approximate_q_with(g, b, &settings.approx_options())?;
            Ok((r.value_estimate, Some(r)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpretation {
    Coloring,
    IndependentSet,
    ColoredHomomorphism,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoftSumResult {
    /// `(1 + gamma/Delta)^-|E|` times the partition value.
    pub normalized_value: f64,
    pub value: Complex64,
    pub approx: Option<ApproxResult>,
    pub gamma: f64,
    pub max_degree: usize,
    pub gamma_overridden: bool,
    pub interpretation: Interpretation,
}

fn normalizer(gamma: f64, max_degree: usize, edge_count: usize) -> f64 {
    if max_degree == 0 {
        1.0
    } else {
        (1.0 + gamma / max_degree as f64).powi(edge_count as i32)
    }
}

fn soft_sum(
    g: &Graph,
    k: usize,
    settings: &Settings,
    interpretation: Interpretation,
) -> Result<SoftSumResult> {
    if settings.mode == Mode::Approx {
        check_eps_rel(settings.eps_rel)?;
    }
    let max_degree = g.max_degree();
    if max_degree == 0 {
        let value = (k as f64).powi(g.vertex_count() as i32);
        return Ok(SoftSumResult {
            normalized_value: value,
            value: Complex64::new(value, 0.0),
            approx: None,
            gamma: 0.0,
            max_degree,
            gamma_overridden: settings.gamma_override.is_some(),
            interpretation,
        });
    }
    let gamma = settings.gamma_for(max_degree);
    let a = match interpretation {
        Interpretation::Coloring => coloring_matrix_soft(k, gamma, max_degree)?,
        Interpretation::IndependentSet => independent_set_matrix_soft(gamma, max_degree)?,
        Interpretation::ColoredHomomorphism => {
            return Err(Error::InvalidArgument("use distinguish_homomorphisms".into()))
        }
    };
    let (value, approx) = evaluate(g, &lift_matrix(&a, g), settings)?;
    Ok(SoftSumResult {
        normalized_value: value.re / normalizer(gamma, max_degree, g.edge_count()),
        value,
        approx,
        gamma,
        max_degree,
        gamma_overridden: settings.gamma_override.is_some(),
        interpretation,
    })
}

/// Weighted count of all `k`-labelings: proper colorings weigh 1, a labeling
/// with `w` monochromatic edges weighs `((1 - gamma/Delta) / (1 + gamma/Delta))^w`.
pub fn soft_coloring_sum(g: &Graph, k: usize, settings: &Settings) -> Result<SoftSumResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    soft_sum(g, k, settings, Interpretation::Coloring)
}

/// Weighted count of vertex subsets: independent sets weigh 1, a set spanning
/// `w` edges weighs `((1 - gamma/Delta) / (1 + gamma/Delta))^w`.
pub fn soft_independent_set_sum(g: &Graph, settings: &Settings) -> Result<SoftSumResult> {
    soft_sum(g, 2, settings, Interpretation::IndependentSet)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutBounds {
    pub lower: f64,
    pub upper: f64,
    pub eps_param: f64,
    /// `P_G(A_eps)`, exact or estimated.
    pub p_value: f64,
    pub mode: Mode,
    /// Additive error on `ln P` folded into the bounds; 0 in exact mode.
    pub log_error: f64,
    pub approx: Option<ApproxResult>,
}

/// Sandwich bounds on the maximum cut from `P_G(A_eps)`:
/// `ln P / ln(1/eps) + |E| - |V| ln 2 / ln(1/eps) <= mu(G) <= ln P / ln(1/eps) + |E|`.
pub fn maxcut_bounds(g: &Graph, eps_param: f64, settings: &Settings) -> Result<CutBounds> {
    let a = maxcut_matrix(eps_param)?;
    if 1.0 - eps_param < MAXCUT_EPS_FLOOR {
        return Err(Error::InvalidArgument(format!(
            "max-cut eps = {eps_param} is within {MAXCUT_EPS_FLOOR:e} of 1; ln(1/eps) degenerates"
        )));
    }
    let max_degree = g.max_degree();
    if settings.mode == Mode::Approx && max_degree > 0 {
        let radius = gamma_table(max_degree).gamma / max_degree as f64;
        if 1.0 - eps_param > radius {
            return Err(Error::CertificateFailed {
                delta: 1.0 - eps_param,
                delta_max: radius,
            });
        }
    }
    let (value, approx) = evaluate(g, &lift_matrix(&a, g), settings)?;
    let (ln_p, log_error) = match &approx {
        Some(r) => (r.log_estimate.re, r.additive_log_bound),
        None => (value.re.ln(), 0.0),
    };
    let scale = (1.0 / eps_param).ln();
    let edges = g.edge_count() as f64;
    let lower = (ln_p - log_error) / scale + edges - g.vertex_count() as f64 * 2f64.ln() / scale;
    let upper = (ln_p + log_error) / scale + edges;
    Ok(CutBounds {
        lower,
        upper,
        eps_param,
        p_value: value.re,
        mode: settings.mode,
        log_error,
        approx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every map misses at least `w` same-colored edges.
    Far,
    /// Color-preserving homomorphisms are plentiful.
    Many,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Far => "far",
            Verdict::Many => "many",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishVerdict {
    pub normalized_value: f64,
    /// `k^|V| exp(-2 gamma w / Delta)`.
    pub far_threshold: f64,
    pub many_threshold: f64,
    pub verdict: Verdict,
    pub w: usize,
    pub gamma: f64,
    pub max_degree: usize,
    pub relative_bound: f64,
    pub approx: Option<ApproxResult>,
}

/// Thresholds `(far, many)` for `k` target vertices and `n` source vertices.
pub fn distinguish_thresholds(k: usize, n: usize, gamma: f64, w: usize, max_degree: usize) -> (f64, f64) {
    let far = (k as f64).powi(n as i32) * (-2.0 * gamma * w as f64 / max_degree as f64).exp();
    (far, 2.0 * far)
}

/// Separates pairs with many color-preserving maps `G -> H` from pairs where
/// every map misses at least `w` edges, using the soft weighted sum.
pub fn distinguish_homomorphisms(
    g: &ColoredGraph,
    h: &ColoredGraph,
    w: usize,
    settings: &Settings,
) -> Result<DistinguishVerdict> {
    if w == 0 {
        return Err(Error::InvalidArgument("w must be at least 1".into()));
    }
    let graph = &g.graph;
    let max_degree = graph.max_degree();
    if max_degree == 0 {
        return Err(Error::InvalidArgument("G must have at least one edge".into()));
    }
    let gamma = settings.gamma_for(max_degree);
    let b = colored_hom_tensor_for(g, h, HomWeighting::Soft { gamma, max_degree })?;
    let (value, approx) = evaluate(graph, &b, settings)?;
    let normalized_value = value.re / normalizer(gamma, max_degree, graph.edge_count());
    let relative_bound = approx.as_ref().map_or(0.0, |r| r.relative_bound);
    let (far_threshold, many_threshold) =
        distinguish_thresholds(h.graph.vertex_count(), graph.vertex_count(), gamma, w, max_degree);
    let verdict = if normalized_value * (1.0 + relative_bound) < far_threshold * FAR_GUARD {
        Verdict::Far
    } else if normalized_value * (1.0 - relative_bound) > many_threshold * MANY_GUARD {
        Verdict::Many
    } else {
        Verdict::Inconclusive
    };
    Ok(DistinguishVerdict {
        normalized_value,
        far_threshold,
        many_threshold,
        verdict,
        w,
        gamma,
        max_degree,
        relative_bound,
        approx,
    })
}
