//! Finite simple graphs on vertices `1..=n` and dense symmetric matrices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    Delta,
    Cubic0mod4,
    Gamma,
    QuarticCustom,
    Generic,
}

impl FamilyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::Delta => "delta",
            FamilyTag::Cubic0mod4 => "cubic0mod4",
            FamilyTag::Gamma => "gamma",
            FamilyTag::QuarticCustom => "quartic-custom",
            FamilyTag::Generic => "generic",
        }
    }
}

/// Simple undirected graph. Edges are stored as `(u, v)` with `u < v`,
/// sorted lexicographically. Equality compares `n` and edges only; the tag
/// is a label, not structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(rename = "family")]
    family_tag: Option<FamilyTag>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

pub fn make_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    Graph::new(n, edges)
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EmptySet);
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidEdge(u, v, "loop"));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidEdge(u, v, "endpoint out of range"));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(w[0].0, w[0].1, "duplicate"));
        }
        Ok(Graph {
            n,
            edges: canon,
            family_tag: None,
        })
    }

    pub fn with_tag(mut self, tag: FamilyTag) -> Graph {
        self.family_tag = Some(tag);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn family_tag(&self) -> Option<FamilyTag> {
        self.family_tag
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u - 1] += 1;
            d[v - 1] += 1;
        }
        d
    }

    /// Adjacency lists, 0-based.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v - 1);
            adj[v - 1].push(u - 1);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Breadth-first distances from `src` (1-based); unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let adj = self.neighbors();
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src - 1] = 0;
        queue.push_back(src - 1);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            edges: Vec<(usize, usize)>,
            family: Option<FamilyTag>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let g = Graph::new(raw.n, &raw.edges)?;
        Ok(match raw.family {
            Some(t) => g.with_tag(t),
            None => g,
        })
    }
}

pub fn is_regular(g: &Graph, r: usize) -> bool {
    g.degrees().iter().all(|&d| d == r)
}

pub fn is_connected(g: &Graph) -> bool {
    g.bfs_distances(1).iter().all(|&d| d != usize::MAX)
}

/// Induced subgraph on `vs`, relabeled `1..=|vs|` in increasing vertex order.
pub fn induced_subgraph(g: &Graph, vs: &[usize]) -> Result<Graph> {
    if vs.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut keep = vs.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let mut label = vec![0usize; g.n + 1];
    for (i, &v) in keep.iter().enumerate() {
        if v == 0 || v > g.n {
            return Err(Error::OutOfRange(v, g.n));
        }
        label[v] = i + 1;
    }
    let edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|&&(u, v)| label[u] != 0 && label[v] != 0)
        .map(|&(u, v)| (label[u], label[v]))
        .collect();
    Graph::new(keep.len(), &edges)
}

pub fn adjacency_matrix(g: &Graph) -> SymMatrix {
    let mut a = SymMatrix::zeros(g.n);
    for &(u, v) in &g.edges {
        a.set(u - 1, v - 1, 1.0);
    }
    a
}

/// Dense symmetric matrix, row-major. `set` writes both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> SymMatrix {
        SymMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Builds from the upper triangle of `f(i, j)`, `i <= j`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> SymMatrix {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.dim + j] = x;
        self.data[j * self.dim + i] = x;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0.0).count()
    }
}
