//! Graphs with optional loops and their adjacency spectra.
//!
//! Vertices are `0..n` in the API and `1..=n` in the text format. A loop `{i, i}`
//! puts a 1 on the diagonal of the adjacency matrix.

mod families;
mod search;

pub use families::{conjecture_pq, knpq};
pub use search::{is_connected, is_isomorphic, search_extremal, SearchMode, SearchResult, MAX_SEARCH_ORDER};

use crate::error::{Error, Result};
use crate::numerics::{eigvalsh, SymMatF};
use crate::textfmt::content_lines;
use rand::Rng;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Stored as `(min, max)`.
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: BTreeSet::new() }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.edges.insert((i, j));
            }
        }
        g
    }

    /// Rejects out-of-range endpoints and duplicates (in either orientation).
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (i, j) in edges {
            if !g.add_edge(i, j)? {
                return Err(Error::invalid(format!("duplicate edge {{{}, {}}}", i + 1, j + 1)));
            }
        }
        Ok(g)
    }

    /// Returns whether the edge was new.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        if i >= self.n || j >= self.n {
            return Err(Error::invalid(format!("edge {{{}, {}}} out of range for n = {}", i + 1, j + 1, self.n)));
        }
        Ok(self.edges.insert((i.min(j), i.max(j))))
    }

    /// Random loop-free graph, each pair present with probability `p`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(p) {
                    g.edges.insert((i, j));
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|(i, j)| i == j)
    }

    /// Neighbours of `v`, including `v` itself if it carries a loop.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| self.has_edge(v, w)).collect()
    }

    /// Degrees counting a loop once, sorted descending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(i, j) in &self.edges {
            d[i] += 1;
            if i != j {
                d[j] += 1;
            }
        }
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn adjacency(&self) -> SymMatF {
        let mut a = SymMatF::zeros(self.n);
        for &(i, j) in &self.edges {
            a.set(i, j, 1.0);
        }
        a
    }

    /// Parses `"n m"` followed by `m` lines `"i j"` (1-indexed, `i = j` is a loop).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        let [n, m] = nums[..] else {
            return Err(Error::parse(ln, format!("expected \"n m\", got {header:?}")));
        };
        let n: usize = n.parse().map_err(|_| Error::parse(ln, format!("bad vertex count {n:?}")))?;
        let m: usize = m.parse().map_err(|_| Error::parse(ln, format!("bad edge count {m:?}")))?;
        let mut g = Graph::empty(n);
        let mut last = ln;
        for e in 0..m {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(last + 1, format!("expected {m} edges, found {e}")))?;
            last = ln;
            let ends: Vec<&str> = line.split_whitespace().collect();
            let [i, j] = ends[..] else {
                return Err(Error::parse(ln, format!("expected \"i j\", got {line:?}")));
            };
            let parse_end = |s: &str| -> Result<usize> {
                match s.parse::<usize>() {
                    Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                    _ => Err(Error::parse(ln, format!("vertex {s:?} not in 1..={n}"))),
                }
            };
            let (i, j) = (parse_end(i)?, parse_end(j)?);
            if !g.add_edge(i, j)? {
                return Err(Error::parse(ln, format!("duplicate edge {{{}, {}}}", i + 1, j + 1)));
            }
        }
        if let Some((ln, extra)) = lines.next() {
            return Err(Error::parse(ln, format!("unexpected trailing content {extra:?}")));
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(i, j) in &self.edges {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
    pub spectral_sum: f64,
    /// Set for `n = 1`, where `lambda2` is reported as 0 by convention.
    pub lambda2_by_convention: bool,
}

pub fn spectral_sum(g: &Graph) -> Result<SpectralSummary> {
    if g.n() == 0 {
        return Err(Error::invalid("spectral sum needs at least one vertex"));
    }
    let eigenvalues = eigvalsh(&g.adjacency())?;
    let lambda1 = eigenvalues[0];
    let (lambda2, flagged) = match eigenvalues.get(1) {
        Some(&l) => (l, false),
        None => (0.0, true),
    };
    Ok(SpectralSummary { eigenvalues, lambda1, lambda2, spectral_sum: lambda1 + lambda2, lambda2_by_convention: flagged })
}

/// Replaces every vertex by `t` independent copies; copy `c` of `v` is vertex `v·t + c`.
pub fn blowup(g: &Graph, t: usize) -> Result<Graph> {
    if t == 0 {
        return Err(Error::invalid("blowup factor must be at least 1"));
    }
    if g.has_loops() {
        return Err(Error::invalid("blowup is defined for loop-free graphs only"));
    }
    let mut out = Graph::empty(g.n() * t);
    for (u, v) in g.edges() {
        for a in 0..t {
            for b in 0..t {
                out.edges.insert(((u * t + a).min(v * t + b), (u * t + a).max(v * t + b)));
            }
        }
    }
    Ok(out)
}
