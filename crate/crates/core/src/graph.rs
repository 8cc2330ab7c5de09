//! Simple undirected graphs with a canonical edge order.
//!
//! Edges are stored as `(u, v)` with `u < v`, sorted lexicographically, so the
//! index of an edge is a pure function of the edge set. Weight tensors rely on
//! this to bind block `e` to edge `e`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    /// Per vertex: `(neighbor, edge index)`, sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degrees {
    pub per_vertex: Vec<usize>,
    pub max_degree: usize,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list, canonicalizing the order.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{u}, {v}}} has a vertex outside [0, {vertex_count})"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop edge at vertex {u}")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {{{}, {}}}",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_canonical(vertex_count, canon))
    }

    fn from_canonical(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            vertex_count,
            edges,
            adjacency,
        }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_canonical(vertex_count, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_canonical(n, edges)
    }

    /// Path on `n` vertices (`n - 1` edges).
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_canonical(n, edges)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)))
            .collect();
        // Shifted edges of `other` all sort after those of `self`.
        Self::from_canonical(shift + other.vertex_count, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn degrees(&self) -> Degrees {
        let per_vertex: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let max_degree = per_vertex.iter().copied().max().unwrap_or(0);
        Degrees {
            per_vertex,
            max_degree,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Serializes to the text graph format accepted by [`parse_graph`].
    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Free-function form of [`Graph::degrees`].
pub fn degrees(g: &Graph) -> Degrees {
    g.degrees()
}

/// A graph whose edges carry color names, indexed by canonical edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub graph: Graph,
    pub colors: Vec<String>,
}

impl ColoredGraph {
    pub fn new<I, S>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
        S: Into<String>,
    {
        let mut triples: Vec<(usize, usize, String)> = edges
            .into_iter()
            .map(|(u, v, c)| (u.min(v), u.max(v), c.into()))
            .collect();
        let graph = Graph::new(vertex_count, triples.iter().map(|t| (t.0, t.1)))?;
        triples.sort_unstable_by_key(|t| (t.0, t.1));
        let colors = triples.into_iter().map(|t| t.2).collect();
        Ok(ColoredGraph { graph, colors })
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.graph.vertex_count(), self.graph.edge_count());
        for (&(u, v), c) in self.graph.edges().iter().zip(&self.colors) {
            let _ = writeln!(out, "{u} {v} {c}");
        }
        out
    }
}

struct RawEdges {
    vertex_count: usize,
    edges: Vec<(usize, usize, Option<String>, usize)>,
}

fn parse_edge_lines(text: &str, colored: bool) -> Result<RawEdges> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header \"V E\"".into(),
    })?;
    let parse_usize = |tok: &str, line: usize, what: &str| {
        tok.parse::<usize>().map_err(|_| Error::Parse {
            line,
            message: format!("{what}: expected a non-negative integer, found {tok:?}"),
        })
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            message: format!("malformed header: expected \"V E\", found {header:?}"),
        });
    }
    let vertex_count = parse_usize(head[0], header_line, "vertex count")?;
    let edge_count = parse_usize(head[1], header_line, "edge count")?;
    if vertex_count == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "vertex count must be positive".into(),
        });
    }

    let expected_tokens = if colored { 3 } else { 2 };
    let mut edges = Vec::with_capacity(edge_count);
    let mut seen = std::collections::HashMap::new();
    for (line, body) in lines {
        if edges.len() == edge_count {
            return Err(Error::Parse {
                line,
                message: format!("more edge lines than the {edge_count} declared"),
            });
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != expected_tokens {
            let shape = if colored { "\"u v color\"" } else { "\"u v\"" };
            return Err(Error::Parse {
                line,
                message: format!("expected {shape}, found {body:?}"),
            });
        }
        let u = parse_usize(toks[0], line, "vertex")?;
        let v = parse_usize(toks[1], line, "vertex")?;
        if u >= vertex_count || v >= vertex_count {
            return Err(Error::Parse {
                line,
                message: format!("vertex index out of range [0, {vertex_count}) in edge {u} {v}"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("loop edge at vertex {u}"),
            });
        }
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, line) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate edge {{{}, {}}} (first at line {first})", key.0, key.1),
            });
        }
        let color = colored.then(|| toks[2].to_string());
        edges.push((u, v, color, line));
    }
    if edges.len() != edge_count {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("expected {edge_count} edge lines, found {}", edges.len()),
        });
    }
    Ok(RawEdges {
        vertex_count,
        edges,
    })
}

/// Parses the plain graph format: a `V E` header, then `E` lines `u v`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let raw = parse_edge_lines(text, false)?;
    Graph::new(raw.vertex_count, raw.edges.into_iter().map(|(u, v, _, _)| (u, v)))
}

/// Parses the colored variant, where every edge line is `u v color`.
pub fn parse_colored_graph(text: &str) -> Result<ColoredGraph> {
    let raw = parse_edge_lines(text, true)?;
    ColoredGraph::new(
        raw.vertex_count,
        raw.edges
            .into_iter()
            .map(|(u, v, c, _)| (u, v, c.unwrap_or_default())),
    )
}
