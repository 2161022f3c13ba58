use super::Graph;
use crate::error::{Error, Result};

/// `K(n, p, q)`: cliques `A` (size `p`, vertices `0..p`) and `B` (size `q`, next `q`
/// vertices) with no edges between them, both joined to a clique `C` on the rest.
pub fn knpq(n: usize, p: usize, q: usize) -> Result<Graph> {
    if p < q || p + q > n {
        return Err(Error::invalid(format!("K(n, p, q) needs n >= p + q and p >= q, got ({n}, {p}, {q})")));
    }
    let block = |v: usize| if v < p { 0 } else if v < p + q { 1 } else { 2 };
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (block(i), block(j));
            if a == b || a == 2 || b == 2 {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Conjectured extremal parameters: with `n = 7k + r`, `(p, q)` is
/// `(2k, 2k)` for r ∈ {0, 1}, `(2k+1, 2k)` for r = 2, `(2k+1, 2k+1)` for r ∈ {3, 4},
/// `(2k+2, 2k+1)` for r = 5 and `(2k+2, 2k+2)` for r = 6.
pub fn conjecture_pq(n: usize) -> Result<(usize, usize)> {
    if n < 5 {
        return Err(Error::invalid(format!("conjectured parameters are tabulated for n >= 5, got {n}")));
    }
    let (k, r) = (n / 7, n % 7);
    Ok(match r {
        0 | 1 => (2 * k, 2 * k),
        2 => (2 * k + 1, 2 * k),
        3 | 4 => (2 * k + 1, 2 * k + 1),
        5 => (2 * k + 2, 2 * k + 1),
        _ => (2 * k + 2, 2 * k + 2),
    })
}
