//! Shared fixtures and independent oracles for integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use hompart::constants::gamma_table;
use hompart::oracle::exact_q;
use hompart::{ColoredGraph, Complex64, EdgeWeightTensor, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with at least one edge when `n >= 2`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        if n < 2 || !edges.is_empty() {
            return Graph::new(n, edges).unwrap();
        }
    }
}

/// Uniform point of the closed disc `|z - 1| <= radius`.
pub fn disc_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let phi = rng.gen_range(0.0..2.0 * PI);
    Complex64::new(1.0, 0.0) + Complex64::from_polar(r, phi)
}

/// Point on the boundary circle `|z - 1| = radius`.
pub fn circle_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let phi = rng.gen_range(0.0..2.0 * PI);
    Complex64::new(1.0, 0.0) + Complex64::from_polar(radius * (1.0 - 1e-12), phi)
}

pub fn random_tensor(
    rng: &mut ChaCha8Rng,
    k: usize,
    edge_count: usize,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> Complex64,
) -> EdgeWeightTensor {
    EdgeWeightTensor::from_fn(k, edge_count, |_, _, _| sample(rng)).unwrap()
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub tensor: EdgeWeightTensor,
}

/// Random instances with `|V| <= 6`, `k <= 3`, entries uniform in the
/// `0.34 / Delta` polydisc.
pub fn polydisc_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let p = rng.gen_range(0.3..0.9);
            let graph = random_graph(&mut rng, n, p);
            let k = rng.gen_range(1..=3);
            let radius = 0.34 / graph.max_degree() as f64;
            let tensor = random_tensor(&mut rng, k, graph.edge_count(), |r| disc_point(r, radius));
            Instance { graph, tensor }
        })
        .collect()
}

/// Taylor coefficients of `t -> Q_G(J + t (B - J))`, degree `<= |E|`, by
/// exact evaluation at the `|E| + 1` roots of unity and a discrete Fourier
/// transform.
pub fn interpolated_coefficients(g: &Graph, b: &EdgeWeightTensor) -> Vec<Complex64> {
    let points = g.edge_count() + 1;
    let values: Vec<Complex64> = (0..points)
        .map(|j| {
            let t = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / points as f64);
            exact_q(g, &b.interpolate(t)).unwrap()
        })
        .collect();
    (0..points)
        .map(|m| {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * m) as f64 / points as f64))
                .sum::<Complex64>()
                / points as f64
        })
        .collect()
}

/// Distance between two logarithms, ignoring multiples of `2 pi i`.
pub fn log_distance(a: Complex64, b: Complex64) -> f64 {
    let d = a - b;
    let mut im = d.im.rem_euclid(2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    }
    Complex64::new(d.re, im).norm()
}

pub fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Brute-force profile of maps `G -> H`: the number of color-preserving
/// homomorphisms and the minimum number of edges any map fails to send onto a
/// same-colored edge.
pub fn hom_profile(g: &ColoredGraph, h: &ColoredGraph) -> (usize, usize) {
    let n = g.graph.vertex_count();
    let k = h.graph.vertex_count();
    let total = k.pow(n as u32);
    let mut homs = 0;
    let mut min_miss = usize::MAX;
    for code in 0..total {
        let mut phi = vec![0; n];
        let mut c = code;
        for slot in phi.iter_mut() {
            *slot = c % k;
            c /= k;
        }
        let miss = g
            .graph
            .edges()
            .iter()
            .zip(&g.colors)
            .filter(|(&(u, v), color)| {
                let (i, j) = (phi[u], phi[v]);
                !(i != j && h.graph.edge_index(i, j).is_some_and(|e| &h.colors[e] == *color))
            })
            .count();
        if miss == 0 {
            homs += 1;
        }
        min_miss = min_miss.min(miss);
    }
    (homs, min_miss)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    Far,
    Many,
    Neither,
}

/// Ground truth for the distinguisher with the tabulated gamma of `G`.
pub fn hom_truth(g: &ColoredGraph, h: &ColoredGraph, w: usize) -> Truth {
    let (homs, min_miss) = hom_profile(g, h);
    let delta = g.graph.max_degree();
    let gamma = gamma_table(delta).gamma;
    let total = (h.graph.vertex_count() as f64).powi(g.graph.vertex_count() as i32);
    let fraction = homs as f64 / total;
    if min_miss >= w {
        Truth::Far
    } else if fraction >= 2.0 * (-2.0 * gamma * w as f64 / delta as f64).exp() {
        Truth::Many
    } else {
        Truth::Neither
    }
}
