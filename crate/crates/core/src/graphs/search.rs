use super::Graph;
use crate::error::{Error, Result};
use crate::numerics::{eigvalsh, SymMatF};
use std::collections::BTreeMap;

/// Largest order the exhaustive search accepts (2^28 labeled graphs).
pub const MAX_SEARCH_ORDER: usize = 8;

/// Values within this distance count as ties.
const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Max,
    MinConnected,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub graph: Graph,
    /// Bit `b` set means the `b`-th pair in lexicographic `(i, j)` order is an edge.
    pub mask: u64,
    pub value: f64,
    pub graphs_scanned: u64,
    /// Optimal labeled graphs found (within the tie tolerance).
    pub optimal_count: u64,
    /// One representative per distinct degree sequence among the optimal graphs.
    pub distinct_optimizers: Vec<Graph>,
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for (i, j) in g.edges() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

/// Brute-force isomorphism test over all vertex permutations (meant for small `n`).
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() || g.degree_sequence() != h.degree_sequence() {
        return false;
    }
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    fn extend(k: usize, g: &Graph, h: &Graph, perm: &mut [usize], used: &mut [bool]) -> bool {
        let n = g.n();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            // Check all pairs among the already mapped vertices plus k.
            if (0..=k).all(|i| g.has_edge(i, k) == h.has_edge(if i == k { cand } else { perm[i] }, cand)) {
                perm[k] = cand;
                used[cand] = true;
                if extend(k + 1, g, h, perm, used) {
                    return true;
                }
                used[cand] = false;
            }
        }
        false
    }
    extend(0, g, h, &mut perm, &mut used)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

fn graph_from_mask(n: usize, mask: u64, pairs: &[(usize, usize)]) -> Graph {
    let edges = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
    Graph::from_edges(n, edges).expect("pairs are valid and distinct")
}

struct Local {
    best: Option<(f64, u64)>,
    scanned: u64,
    optimal: u64,
    reps: BTreeMap<Vec<usize>, u64>,
}

impl Local {
    fn new() -> Self {
        Local { best: None, scanned: 0, optimal: 0, reps: BTreeMap::new() }
    }

    /// `better(a, b)`: `a` strictly beats `b` beyond the tie tolerance.
    fn offer(&mut self, value: f64, mask: u64, count: u64, degs: Vec<usize>, better: impl Fn(f64, f64) -> bool) {
        match self.best {
            Some((b, _)) if better(b, value) => {}
            Some((b, m)) if !better(value, b) => {
                self.optimal += count;
                self.reps.entry(degs).or_insert(mask);
                if mask < m {
                    self.best = Some((b, mask));
                }
            }
            _ => {
                self.best = Some((value, mask));
                self.optimal = count;
                self.reps.clear();
                self.reps.insert(degs, mask);
            }
        }
    }

    fn merge(&mut self, other: Local, better: impl Fn(f64, f64) -> bool) {
        self.scanned += other.scanned;
        let Some((v, m)) = other.best else { return };
        match self.best {
            Some((b, _)) if better(b, v) => {}
            Some((b, mine)) if !better(v, b) => {
                self.optimal += other.optimal;
                for (degs, rm) in other.reps {
                    let e = self.reps.entry(degs).or_insert(rm);
                    *e = (*e).min(rm);
                }
                self.best = Some((b, mine.min(m)));
            }
            _ => {
                let scanned = self.scanned;
                *self = other;
                self.scanned = scanned;
            }
        }
    }
}

/// Exhaustive optimum of the spectral sum over labeled loop-free graphs on `n` vertices.
///
/// Ties (within 1e-9) go to the smallest edge bitmask. The mask range is split into
/// contiguous chunks for `threads` workers and the partial results are merged in
/// chunk order, so the reported graph does not depend on the thread count.
pub fn search_extremal(n: usize, mode: SearchMode, threads: usize) -> Result<SearchResult> {
    if !(2..=MAX_SEARCH_ORDER).contains(&n) {
        return Err(Error::invalid(format!("exhaustive search supports 2 <= n <= {MAX_SEARCH_ORDER}, got {n}")));
    }
    let pairs = pairs(n);
    let total: u64 = 1 << pairs.len();
    let threads = threads.max(1).min(total as usize);
    let better = move |a: f64, b: f64| match mode {
        SearchMode::Max => a > b + TIE_TOL,
        SearchMode::MinConnected => a < b - TIE_TOL,
    };

    let scan = |lo: u64, hi: u64| -> Result<Local> {
        let mut local = Local::new();
        let mut adj = SymMatF::zeros(n);
        for mask in lo..hi {
            for (b, &(i, j)) in pairs.iter().enumerate() {
                adj.set(i, j, (mask >> b & 1) as f64);
            }
            local.scanned += 1;
            if mode == SearchMode::MinConnected && !is_connected(&graph_from_mask(n, mask, &pairs)) {
                continue;
            }
            let ev = eigvalsh(&adj)?;
            let value = ev[0] + ev[1];
            // Cheap filter before building a degree sequence.
            if let Some((b, _)) = local.best {
                if better(b, value) {
                    continue;
                }
            }
            let degs = graph_from_mask(n, mask, &pairs).degree_sequence();
            local.offer(value, mask, 1, degs, better);
        }
        Ok(local)
    };

    let chunk = total.div_ceil(threads as u64);
    let parts: Vec<Result<Local>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|t| {
                let (lo, hi) = (t * chunk, ((t + 1) * chunk).min(total));
                let scan = &scan;
                s.spawn(move || scan(lo, hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    });

    let mut merged = Local::new();
    for part in parts {
        merged.merge(part?, better);
    }

    let (value, mask) = merged.best.ok_or_else(|| Error::invalid("no graph satisfies the search filter"))?;
    let mut reps: Vec<u64> = merged.reps.values().copied().collect();
    reps.sort_unstable();
    Ok(SearchResult {
        graph: graph_from_mask(n, mask, &pairs),
        mask,
        value,
        graphs_scanned: merged.scanned,
        optimal_count: merged.optimal,
        distinct_optimizers: reps.into_iter().map(|m| graph_from_mask(n, m, &pairs)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{knpq, spectral_sum};
    use super::*;

    #[test]
    fn connectivity() {
        assert!(is_connected(&Graph::complete(4)));
        assert!(!is_connected(&Graph::empty(3)));
        assert!(is_connected(&Graph::empty(1)));
        assert!(is_connected(&Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()));
    }

    #[test]
    fn isomorphism() {
        let p3a = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p3b = Graph::from_edges(3, [(0, 2), (2, 1)]).unwrap();
        assert!(is_isomorphic(&p3a, &p3b));
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_isomorphic(&c6, &two_triangles));
    }

    #[test]
    fn small_maxima() {
        let r3 = search_extremal(3, SearchMode::Max, 1).unwrap();
        assert!((r3.value - 2f64.sqrt()).abs() < 1e-9);
        assert!(is_isomorphic(&r3.graph, &knpq(3, 1, 1).unwrap()));
        assert_eq!(r3.graphs_scanned, 8);
        assert_eq!(r3.optimal_count, 3);

        let r2 = search_extremal(2, SearchMode::Max, 1).unwrap();
        assert_eq!(r2.mask, 0);
        assert_eq!(r2.value, 0.0);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let a = search_extremal(5, SearchMode::Max, 1).unwrap();
        let b = search_extremal(5, SearchMode::Max, 3).unwrap();
        assert_eq!(a.mask, b.mask);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.optimal_count, b.optimal_count);
        assert_eq!(a.distinct_optimizers, b.distinct_optimizers);
        assert!(is_isomorphic(&a.graph, &knpq(5, 2, 1).unwrap()));
        let v = spectral_sum(&a.graph).unwrap().spectral_sum;
        assert!((v - a.value).abs() < 1e-12);
    }

    #[test]
    fn min_connected_small() {
        let r = search_extremal(4, SearchMode::MinConnected, 2).unwrap();
        assert!(is_connected(&r.graph));
        // Exhaustive oracle by direct enumeration.
        let pairs = pairs(4);
        let mut best = f64::INFINITY;
        for mask in 0..64u64 {
            let g = graph_from_mask(4, mask, &pairs);
            if is_connected(&g) {
                best = best.min(spectral_sum(&g).unwrap().spectral_sum);
            }
        }
        assert!((r.value - best).abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_budget() {
        assert!(search_extremal(1, SearchMode::Max, 1).is_err());
        assert!(search_extremal(9, SearchMode::Max, 1).is_err());
    }
}
