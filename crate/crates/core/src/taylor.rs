//! Taylor interpolation of `ln Q_G` along the segment from `J` to `B`.
//!
//! With `g(t) = Q_G(J + t (B - J))` and `f = ln g`, the estimate of
//! `ln Q_G(B) = f(1)` is the degree-`n` Taylor polynomial of `f` at 0.
//! Derivatives of `g` at 0 are sums over sets of `m` distinct edges `I`:
//!
//! ```text
//! g^(m)(0) / m! = sum_I k^(|V| - |S(I)|) sum_{phi: S(I) -> labels} prod_{e in I} (b^e_{phi} - 1)
//! ```
//!
//! and `f`'s derivatives follow from `g' = g f'` by forward substitution.
//!
//! Internally everything is carried as normalized Taylor coefficients
//! (`g^(m)(0) / (m! k^|V|)` and `f^(m)(0) / m!`), which stay bounded at orders
//! where raw derivatives overflow `f64`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sum::ComplexSum;
use crate::weights::{polydisc_certificate, EdgeWeightTensor, ZeroFreeCertificate};

pub const DEFAULT_COST_CEILING: f64 = 1e9;

/// Orders beyond this are refused by [`select_order`].
const MAX_ORDER: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorConfig {
    /// Refuse when the estimated number of elementary products exceeds this.
    pub cost_ceiling: f64,
    /// Worker threads for the edge-subset sum. Results do not depend on it.
    pub threads: usize,
}

impl Default for TaylorConfig {
    fn default() -> Self {
        TaylorConfig {
            cost_ceiling: DEFAULT_COST_CEILING,
            threads: 1,
        }
    }
}

/// Estimated number of `(edge set, label map)` pairs visited for order `n`:
/// `sum_{m=1}^{min(n, |E|)} C(|E|, m) k^min(2m, |V|)`.
pub fn derivative_cost(g: &Graph, k: usize, n: usize) -> f64 {
    let e = g.edge_count();
    let mut binom = 1.0;
    let mut total = 0.0;
    for m in 1..=n.min(e) {
        binom *= (e + 1 - m) as f64 / m as f64;
        let support = (2 * m).min(g.vertex_count()) as i32;
        total += binom * (k as f64).powi(support);
    }
    total
}

struct SubsetWalk<'a> {
    g: &'a Graph,
    k: usize,
    max_order: usize,
    /// Per edge: full `k x k` block of `b - 1`.
    shifted: Vec<Vec<Complex64>>,
    inv_k: f64,
}

impl SubsetWalk<'_> {
    /// Sum of `k^-|S(I)|` times the inner label sum, over all edge sets whose
    /// smallest edge is `first`, bucketed by size.
    fn chunk(&self, first: usize) -> Vec<Complex64> {
        let mut acc = vec![ComplexSum::new(); self.max_order + 1];
        let mut subset = vec![first];
        self.visit(&mut subset, &mut acc);
        acc.iter().map(ComplexSum::value).collect()
    }

    fn visit(&self, subset: &mut Vec<usize>, acc: &mut [ComplexSum]) {
        acc[subset.len()].add(self.inner_sum(subset));
        if subset.len() == self.max_order {
            return;
        }
        let last = *subset.last().expect("non-empty");
        for next in last + 1..self.g.edge_count() {
            subset.push(next);
            self.visit(subset, acc);
            subset.pop();
        }
    }

    /// `k^-|S|` times the sum over label maps of `S = S(I)` (ascending,
    /// lexicographic) of the product of shifted weights.
    fn inner_sum(&self, subset: &[usize]) -> Complex64 {
        let edges = self.g.edges();
        let mut support: Vec<usize> = subset
            .iter()
            .flat_map(|&e| [edges[e].0, edges[e].1])
            .collect();
        support.sort_unstable();
        support.dedup();
        let local = |v: usize| support.binary_search(&v).expect("endpoint in support");
        let ends: Vec<(usize, usize, &[Complex64])> = subset
            .iter()
            .map(|&e| (local(edges[e].0), local(edges[e].1), self.shifted[e].as_slice()))
            .collect();

        let k = self.k;
        let mut labels = vec![0usize; support.len()];
        let mut acc = ComplexSum::new();
        'maps: loop {
            let mut prod = Complex64::new(1.0, 0.0);
            for &(lu, lv, block) in &ends {
                prod *= block[labels[lu] * k + labels[lv]];
            }
            acc.add(prod);
            for d in (0..labels.len()).rev() {
                labels[d] += 1;
                if labels[d] < k {
                    continue 'maps;
                }
                labels[d] = 0;
            }
            break;
        }
        acc.value() * self.inv_k.powi(support.len() as i32)
    }
}

/// Normalized Taylor coefficients `g^(m)(0) / (m! k^|V|)` for `m = 0..=n`.
///
/// Index 0 is exactly 1. Coefficients above `|E|` are exactly 0. The edge-set
/// space is split by smallest edge into fixed chunks whose partial sums are
/// combined in chunk order, so the result does not depend on `threads`.
pub fn g_coefficients(
    g: &Graph,
    b: &EdgeWeightTensor,
    n: usize,
    config: &TaylorConfig,
) -> Result<Vec<Complex64>> {
    b.check_graph(g)?;
    let k = b.k();
    let estimate = derivative_cost(g, k, n);
    if estimate > config.cost_ceiling {
        return Err(Error::CostGuard {
            order: n,
            estimate,
            ceiling: config.cost_ceiling,
        });
    }
    if config.threads == 0 {
        return Err(Error::InvalidArgument("thread count must be at least 1".into()));
    }

    let max_order = n.min(g.edge_count());
    let one = Complex64::new(1.0, 0.0);
    let shifted = (0..g.edge_count())
        .map(|e| {
            let mut block = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    block.push(b.get(e, i, j) - one);
                }
            }
            block
        })
        .collect();
    let walk = SubsetWalk {
        g,
        k,
        max_order,
        shifted,
        inv_k: 1.0 / k as f64,
    };

    let chunks: Vec<Vec<Complex64>> = if max_order == 0 {
        Vec::new()
    } else if config.threads == 1 {
        (0..g.edge_count()).map(|e| walk.chunk(e)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..g.edge_count())
                .into_par_iter()
                .map(|e| walk.chunk(e))
                .collect()
        })
    };

    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[0] = one;
    for (m, slot) in coeffs.iter_mut().enumerate().take(max_order + 1).skip(1) {
        *slot = chunks.iter().map(|c| c[m]).collect::<ComplexSum>().value();
    }
    Ok(coeffs)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Raw derivatives `g^(m)(0)` for `m = 0..=n` with the default configuration.
pub fn g_derivatives(g: &Graph, b: &EdgeWeightTensor, n: usize) -> Result<Vec<Complex64>> {
    g_derivatives_with(g, b, n, &TaylorConfig::default())
}

pub fn g_derivatives_with(
    g: &Graph,
    b: &EdgeWeightTensor,
    n: usize,
    config: &TaylorConfig,
) -> Result<Vec<Complex64>> {
    let base = (b.k() as f64).powi(g.vertex_count() as i32);
    let coeffs = g_coefficients(g, b, n, config)?;
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| if m == 0 { Complex64::new(base, 0.0) } else { c * (factorial(m) * base) })
        .collect())
}

/// Solves `g^(m) = sum_{j<m} C(m-1, j) g^(j) f^(m-j)` for `f^(m)(0)`, `m = 1..=n`,
/// given raw `g^(0..=n)(0)`. Entry `m - 1` of the result is `f^(m)(0)`.
pub fn f_derivatives(g_derivs: &[Complex64]) -> Result<Vec<Complex64>> {
    let g0 = *g_derivs
        .first()
        .ok_or_else(|| Error::InvalidArgument("need at least g(0)".into()))?;
    if g0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("g(0) = 0: log derivatives undefined".into()));
    }
    let n = g_derivs.len() - 1;
    let mut f: Vec<Complex64> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut rest = ComplexSum::new();
        let mut binom = 1.0; // C(m-1, j)
        for j in 1..m {
            binom *= (m - j) as f64 / j as f64;
            rest.add(g_derivs[j] * f[m - j - 1] * binom);
        }
        f.push((g_derivs[m] - rest.value()) / g0);
    }
    Ok(f)
}

/// Normalized form of [`f_derivatives`]: from `p_m = g^(m)(0) / m!` to
/// `c_m = f^(m)(0) / m!`, via `m p_m = sum_{j<m} (m - j) p_j c_{m-j}`.
/// Entry `m - 1` of the result is `c_m`.
pub fn log_coefficients(g_coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let p0 = *g_coeffs
        .first()
        .ok_or_else(|| Error::InvalidArgument("need at least g(0)".into()))?;
    if p0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("g(0) = 0: log derivatives undefined".into()));
    }
    let n = g_coeffs.len() - 1;
    let mut c: Vec<Complex64> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut rest = ComplexSum::new();
        for j in 1..m {
            if g_coeffs[j] != Complex64::new(0.0, 0.0) {
                rest.add(g_coeffs[j] * c[m - j - 1] * (m - j) as f64);
            }
        }
        c.push((g_coeffs[m] * m as f64 - rest.value()) / (p0 * m as f64));
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTable {
    pub order: usize,
    pub vertex_count: usize,
    pub k: usize,
    /// `g^(m)(0) / (m! k^|V|)`, `m = 0..=order`.
    pub g_coeffs: Vec<Complex64>,
    /// `f^(m)(0) / m!`, `m = 1..=order`, stored at index `m - 1`.
    pub f_coeffs: Vec<Complex64>,
}

impl DerivativeTable {
    /// `f(0) = |V| ln k`.
    pub fn log_base(&self) -> f64 {
        self.vertex_count as f64 * (self.k as f64).ln()
    }

    pub fn g_derivative(&self, m: usize) -> Complex64 {
        let base = (self.k as f64).powi(self.vertex_count as i32);
        if m == 0 {
            Complex64::new(base, 0.0)
        } else {
            self.g_coeffs[m] * (factorial(m) * base)
        }
    }

    /// `f^(m)(0)` for `m >= 1`.
    pub fn f_derivative(&self, m: usize) -> Complex64 {
        self.f_coeffs[m - 1] * factorial(m)
    }

    /// `sum_{m=1}^{n} f^(m)(0) / m!` for `n <= order`.
    pub fn series(&self, n: usize) -> Complex64 {
        self.f_coeffs[..n.min(self.order)]
            .iter()
            .copied()
            .collect::<ComplexSum>()
            .value()
    }
}

pub fn derivative_table(
    g: &Graph,
    b: &EdgeWeightTensor,
    n: usize,
    config: &TaylorConfig,
) -> Result<DerivativeTable> {
    let g_coeffs = g_coefficients(g, b, n, config)?;
    let f_coeffs = log_coefficients(&g_coeffs)?;
    Ok(DerivativeTable {
        order: n,
        vertex_count: g.vertex_count(),
        k: b.k(),
        g_coeffs,
        f_coeffs,
    })
}

/// `|V| ln k + sum_{m=1}^{n} f^(m)(0) / m!` at the table's full order.
pub fn taylor_log_estimate(table: &DerivativeTable) -> Complex64 {
    taylor_log_estimate_at(table, table.order)
}

/// Same as [`taylor_log_estimate`] truncated at `n <= table.order`.
pub fn taylor_log_estimate_at(table: &DerivativeTable, n: usize) -> Complex64 {
    Complex64::new(table.log_base(), 0.0) + table.series(n)
}

/// Additive bound `|E| / ((n + 1) beta^n (beta - 1))` on the log error.
pub fn error_bound(edge_count: usize, beta: f64, n: usize) -> Result<f64> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must be > 1, got {beta}")));
    }
    let n_f = n as f64;
    // beta^n via exp/ln to stay finite for large n.
    Ok(edge_count as f64 / ((n_f + 1.0) * (n_f * beta.ln()).exp() * (beta - 1.0)))
}

/// Smallest `n` with `error_bound(|E|, beta, n) <= ln(1 + eps_rel)`.
pub fn select_order(edge_count: usize, beta: f64, eps_rel: f64) -> Result<usize> {
    check_eps_rel(eps_rel)?;
    let target = eps_rel.ln_1p();
    for n in 0..=MAX_ORDER {
        if error_bound(edge_count, beta, n)? <= target {
            return Ok(n);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no order below {MAX_ORDER} reaches eps_rel = {eps_rel} with beta = {beta}"
    )))
}

pub(crate) fn check_eps_rel(eps_rel: f64) -> Result<()> {
    if !(eps_rel > 0.0 && eps_rel < 1.0) {
        return Err(Error::InvalidArgument(format!("eps_rel must be in (0, 1), got {eps_rel}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxOptions {
    pub eps_rel: f64,
    /// Use this Taylor order instead of the one chosen from `eps_rel`.
    pub order: Option<usize>,
    pub config: TaylorConfig,
}

impl ApproxOptions {
    pub fn new(eps_rel: f64) -> Self {
        ApproxOptions {
            eps_rel,
            order: None,
            config: TaylorConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub log_estimate: Complex64,
    pub value_estimate: Complex64,
    pub order: usize,
    pub additive_log_bound: f64,
    /// `exp(additive_log_bound) - 1`.
    pub relative_bound: f64,
    /// `None` for edgeless graphs, which are evaluated exactly.
    pub certificate: Option<ZeroFreeCertificate>,
}

/// Full pipeline with default configuration.
pub fn approximate_q(g: &Graph, b: &EdgeWeightTensor, eps_rel: f64) -> Result<ApproxResult> {
    approximate_q_with(g, b, &ApproxOptions::new(eps_rel))
}

pub fn approximate_q_with(g: &Graph, b: &EdgeWeightTensor, opts: &ApproxOptions) -> Result<ApproxResult> {
    b.check_graph(g)?;
    if opts.order.is_none() {
        check_eps_rel(opts.eps_rel)?;
    }
    let k = b.k() as f64;
    let n_vertices = g.vertex_count();
    let base_log = n_vertices as f64 * k.ln();
    let base = k.powi(n_vertices as i32);
    if g.edge_count() == 0 {
        return Ok(ApproxResult {
            log_estimate: Complex64::new(base_log, 0.0),
            value_estimate: Complex64::new(base, 0.0),
            order: 0,
            additive_log_bound: 0.0,
            relative_bound: 0.0,
            certificate: None,
        });
    }

    let cert = polydisc_certificate(b, g.max_degree())?.require()?;
    let order = match opts.order {
        Some(n) => n,
        None => select_order(g.edge_count(), cert.beta, opts.eps_rel)?,
    };
    let table = derivative_table(g, b, order, &opts.config)?;
    let series = table.series(order);
    let log_estimate = Complex64::new(base_log, 0.0) + series;
    let value_estimate = if base.is_finite() {
        series.exp() * base
    } else {
        log_estimate.exp()
    };
    let additive_log_bound = error_bound(g.edge_count(), cert.beta, order)?;
    Ok(ApproxResult {
        log_estimate,
        value_estimate,
        order,
        additive_log_bound,
        relative_bound: additive_log_bound.exp_m1(),
        certificate: Some(cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ones_have_vanishing_derivatives() {
        let g = Graph::complete(4);
        let j = EdgeWeightTensor::all_ones(3, g.edge_count()).unwrap();
        let d = g_derivatives(&g, &j, 4).unwrap();
        assert_eq!(d[0], c(81.0, 0.0));
        assert!(d[1..].iter().all(|z| z.norm() == 0.0));
        let r = approximate_q(&g, &j, 0.1).unwrap();
        assert_eq!(r.value_estimate, c(81.0, 0.0));
        assert_eq!(r.log_estimate, c(4.0 * 3f64.ln(), 0.0));
        let cert = r.certificate.unwrap();
        assert_eq!(r.order, select_order(6, cert.beta, 0.1).unwrap());
        assert!(r.relative_bound <= 0.1);
    }

    #[test]
    fn single_edge_first_derivative() {
        let g = Graph::path(2);
        let (b00, b01, b11) = (c(1.1, 0.02), c(0.95, -0.03), c(1.04, 0.0));
        let b = EdgeWeightTensor::from_blocks(2, &[vec![b00, b01, b11]]).unwrap();
        let d = g_derivatives(&g, &b, 3).unwrap();
        let one = c(1.0, 0.0);
        let expect = (b00 - one) + (b01 - one) * 2.0 + (b11 - one);
        assert!((d[1] - expect).norm() < 1e-15);
        // g is linear in t for one edge.
        assert_eq!(d[2], c(0.0, 0.0));
        assert_eq!(d[3], c(0.0, 0.0));
    }

    #[test]
    fn order_zero_is_log_base() {
        let g = Graph::path(3);
        let b = EdgeWeightTensor::from_fn(2, 2, |e, i, j| c(1.0 + 0.05 * (e + i + j) as f64, 0.01)).unwrap();
        let t = derivative_table(&g, &b, 0, &TaylorConfig::default()).unwrap();
        assert_eq!(taylor_log_estimate(&t), c(3.0 * 2f64.ln(), 0.0));
    }

    #[test]
    fn f_derivatives_of_constant_and_exponential() {
        let f = f_derivatives(&[c(5.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(f, vec![c(0.0, 0.0); 2]);

        let lambda = c(0.3, -0.7);
        let scale = c(2.5, 1.0);
        let mut derivs = vec![scale];
        for _ in 0..6 {
            let last = *derivs.last().unwrap();
            derivs.push(last * lambda);
        }
        let f = f_derivatives(&derivs).unwrap();
        assert!((f[0] - lambda).norm() < 1e-14);
        assert!(f[1..].iter().all(|z| z.norm() < 1e-14), "{f:?}");

        assert!(f_derivatives(&[c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(f_derivatives(&[]).is_err());
        assert!(log_coefficients(&[c(0.0, 0.0)]).is_err());
    }

    /// Oracle: for `g = prod (1 - t / r_i)`, `f^(m)(0) / m! = -(1/m) sum r_i^-m`.
    #[test]
    fn log_coefficients_match_power_sums() {
        let roots = [c(1.5, 0.4), c(-2.0, 1.0), c(0.3, -1.4), c(3.0, 0.0)];
        let mut poly = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); poly.len() + 1];
            for (i, &a) in poly.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a / r;
            }
            poly = next;
        }
        poly.resize(12, c(0.0, 0.0));
        let coeffs = log_coefficients(&poly).unwrap();
        for m in 1..=11 {
            let expect: Complex64 = -roots.iter().map(|r| r.powi(-(m as i32))).sum::<Complex64>() / m as f64;
            assert!((coeffs[m - 1] - expect).norm() <= 1e-10 * expect.norm().max(1.0), "m = {m}");
        }
        // Raw and normalized routes agree.
        let raw: Vec<Complex64> = poly.iter().enumerate().map(|(m, p)| p * factorial(m)).collect();
        let f = f_derivatives(&raw).unwrap();
        for m in 1..=11 {
            let lhs = f[m - 1] / factorial(m);
            assert!((lhs - coeffs[m - 1]).norm() <= 1e-10 * coeffs[m - 1].norm().max(1e-3), "m = {m}");
        }
    }

    /// Oracle: central finite differences of `ln g` with step 1e-3.
    #[test]
    fn f_derivatives_match_finite_differences() {
        let p = [c(2.0, 0.0), c(0.7, 0.2), c(-0.4, 0.1), c(0.25, -0.3), c(0.1, 0.05)];
        let eval = |t: f64| -> Complex64 { p.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * t + a) };
        let lng = |t: f64| eval(t).ln();
        let h = 1e-3;
        let d1 = (lng(h) - lng(-h)) / (2.0 * h);
        let d2 = (lng(h) - lng(0.0) * 2.0 + lng(-h)) / (h * h);
        let raw: Vec<Complex64> = p.iter().enumerate().map(|(m, a)| a * factorial(m)).collect();
        let f = f_derivatives(&raw).unwrap();
        assert!((f[0] - d1).norm() < 1e-6, "{} vs {}", f[0], d1);
        assert!((f[1] - d2).norm() < 1e-6, "{} vs {}", f[1], d2);
    }

    #[test]
    fn recombination_reproduces_g() {
        let g = Graph::complete(4);
        let b = EdgeWeightTensor::from_fn(2, 6, |e, i, j| {
            c(1.0 + 0.04 * ((e * 3 + i + 2 * j) % 5) as f64 - 0.08, 0.03 * (i as f64 - j as f64))
        })
        .unwrap();
        let d = g_derivatives(&g, &b, 6).unwrap();
        let f = f_derivatives(&d).unwrap();
        for m in 1..=6 {
            let mut sum = c(0.0, 0.0);
            let mut binom = 1.0;
            for j in 0..m {
                if j > 0 {
                    binom *= (m - j) as f64 / j as f64;
                }
                sum += d[j] * f[m - j - 1] * binom;
            }
            assert!((sum - d[m]).norm() <= 1e-10 * d[m].norm().max(1e-12), "m = {m}");
        }
    }

    #[test]
    fn bound_formula() {
        assert_eq!(error_bound(1, 2.0, 0).unwrap(), 1.0);
        assert!(error_bound(1, 1.0, 3).is_err());
        assert!(error_bound(1, 0.5, 3).is_err());
        let beta = 35.0 / 34.0;
        let mut prev = f64::INFINITY;
        for n in 0..600 {
            let b = error_bound(10, beta, n).unwrap();
            assert!(b < prev);
            prev = b;
        }
        // Independent evaluation: repeated multiplication instead of exp/ln.
        let mut pow = 1.0f64;
        for _ in 0..500 {
            pow *= beta;
        }
        let direct = 10.0 / (501.0 * pow * (beta - 1.0));
        assert!((error_bound(10, beta, 500).unwrap() / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_selection_minimal() {
        for &(e, beta, eps) in &[(1, 35.0 / 34.0, 0.1), (10, 46.0 / 45.0, 0.01), (200, 55.0 / 54.0, 0.5)] {
            let n = select_order(e, beta, eps).unwrap();
            let target = f64::ln_1p(eps);
            assert!(error_bound(e, beta, n).unwrap() <= target);
            if n > 0 {
                assert!(error_bound(e, beta, n - 1).unwrap() > target);
            }
        }
        assert!(select_order(10, 1.5, 0.1).unwrap() < select_order(10, 1.1, 0.1).unwrap());
        assert!(select_order(10, 1.5, 0.0).is_err());
        assert!(select_order(10, 1.5, 1.0).is_err());
    }

    #[test]
    fn cost_guard_refuses() {
        let g = Graph::complete(6);
        let b = EdgeWeightTensor::all_ones(3, g.edge_count()).unwrap();
        let cfg = TaylorConfig {
            cost_ceiling: 1e3,
            threads: 1,
        };
        match g_coefficients(&g, &b, 4, &cfg) {
            Err(Error::CostGuard { order: 4, estimate, .. }) => {
                assert_eq!(estimate, derivative_cost(&g, 3, 4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_order_beyond_edges() {
        let g = Graph::path(3);
        let b = EdgeWeightTensor::from_fn(2, 2, |e, i, j| c(1.0 + 0.1 * (e + i * j) as f64, 0.0)).unwrap();
        let d = g_derivatives(&g, &b, 5).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d[3..].iter().all(|z| *z == c(0.0, 0.0)));
        assert_ne!(d[2], c(0.0, 0.0));
    }

    #[test]
    fn certificate_failure_names_radii() {
        let g = Graph::path(3);
        let b = EdgeWeightTensor::from_fn(2, 2, |_, _, _| c(1.2, 0.0)).unwrap();
        match approximate_q(&g, &b, 0.1) {
            Err(Error::CertificateFailed { delta, delta_max }) => {
                assert!((delta - 0.2).abs() < 1e-12);
                assert!((delta_max - 0.17).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn edgeless_is_exact() {
        let g = Graph::empty(5);
        let b = EdgeWeightTensor::all_ones(3, 0).unwrap();
        let r = approximate_q(&g, &b, 0.01).unwrap();
        assert_eq!(r.value_estimate, c(243.0, 0.0));
        assert_eq!(r.relative_bound, 0.0);
        assert!(r.certificate.is_none());
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let g = Graph::complete(5);
        let b = EdgeWeightTensor::from_fn(3, g.edge_count(), |e, i, j| {
            c(1.0 + 0.01 * ((7 * e + 3 * i + j) % 11) as f64 - 0.05, 0.002 * (e as f64 - 4.0))
        })
        .unwrap();
        let base = g_coefficients(&g, &b, 5, &TaylorConfig::default()).unwrap();
        for threads in [2, 3, 8] {
            let cfg = TaylorConfig {
                threads,
                ..TaylorConfig::default()
            };
            let other = g_coefficients(&g, &b, 5, &cfg).unwrap();
            for (x, y) in base.iter().zip(&other) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
}
