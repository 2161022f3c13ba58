//! Wedge basis, the second additive compound `ψ(M) = Pᵀ(M⊗I + I⊗M)P`, and general
//! k-th additive compounds.
//!
//! Pairs and k-subsets are always ordered lexicographically. `ψ` is evaluated by
//! its entry formula
//!
//! ```text
//! ψ(M)[(i,j),(k,l)] = M_ik·δ_jl + δ_ik·M_jl − M_il·δ_jk − δ_il·M_jk      (i < j, k < l)
//! ```
//!
//! which involves no `1/√2` factors, so it runs over ℚ as well as over `f64`.

use crate::error::{Error, Result};
use crate::exactq::SymMatQ;
use crate::numerics::{Matrix, SymMatF};
use crate::Rational;
use num_traits::{Num, One, Zero};
use std::collections::HashMap;
use std::ops::Neg;

/// Scalars the compound formulas run over.
pub trait Scalar: Clone + Num + Neg<Output = Self> + PartialEq {}
impl<T: Clone + Num + Neg<Output = T> + PartialEq> Scalar for T {}

/// Symmetric matrix types `ψ` accepts and returns.
pub trait SymMatrix: Sized {
    type Scalar: Scalar;
    fn dim(&self) -> usize;
    fn entry(&self, i: usize, j: usize) -> Self::Scalar;
    fn build(dim: usize, f: impl FnMut(usize, usize) -> Self::Scalar) -> Self;
}

impl SymMatrix for SymMatF {
    type Scalar = f64;
    fn dim(&self) -> usize {
        SymMatF::dim(self)
    }
    fn entry(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
    fn build(dim: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        SymMatF::from_fn(dim, f)
    }
}

impl SymMatrix for SymMatQ {
    type Scalar = Rational;
    fn dim(&self) -> usize {
        SymMatQ::dim(self)
    }
    fn entry(&self, i: usize, j: usize) -> Rational {
        self.get(i, j).clone()
    }
    fn build(dim: usize, f: impl FnMut(usize, usize) -> Rational) -> Self {
        SymMatQ::from_fn(dim, f)
    }
}

/// Lexicographic pairs `(i, j)`, `i < j`, of `0..n`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    combinations(n, 2).into_iter().map(|c| (c[0], c[1])).collect()
}

/// Position of the pair `{i, j}` (`i != j`) in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else { break };
        c[i] += 1;
        for t in (i + 1)..k {
            c[t] = c[t - 1] + 1;
        }
    }
    out
}

/// Orthonormal basis of the antisymmetric subspace of `ℝⁿ⊗ℝⁿ`.
#[derive(Clone, Debug)]
pub struct WedgeBasis {
    pub n: usize,
    /// `n² × C(n,2)`; column `(i,j)` is `(e_i⊗e_j − e_j⊗e_i)/√2`.
    pub p: Matrix,
}

pub fn wedge_basis(n: usize) -> Result<WedgeBasis> {
    if n < 2 {
        return Err(Error::invalid(format!("wedge basis needs n >= 2, got {n}")));
    }
    let pr = pairs(n);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = Matrix::zeros(n * n, pr.len());
    for (c, &(i, j)) in pr.iter().enumerate() {
        p[(i * n + j, c)] = h;
        p[(j * n + i, c)] = -h;
    }
    Ok(WedgeBasis { n, p })
}

/// `ψ(M)` for symmetric `M` of dimension `n >= 2`, over the scalar field of `M`.
pub fn psi<M: SymMatrix>(m: &M) -> M {
    let n = m.dim();
    assert!(n >= 2, "psi needs dimension >= 2");
    let pr = pairs(n);
    let d = |a: usize, b: usize| a == b;
    M::build(pr.len(), |r, c| {
        let ((i, j), (k, l)) = (pr[r], pr[c]);
        let mut v = M::Scalar::zero();
        if d(j, l) {
            v = v + m.entry(i, k);
        }
        if d(i, k) {
            v = v + m.entry(j, l);
        }
        if d(j, k) {
            v = v - m.entry(i, l);
        }
        if d(i, l) {
            v = v - m.entry(j, k);
        }
        v
    })
}

/// k-th additive compound of a square matrix (rows of equal length `n`, `1 <= k <= n`).
///
/// Indexed by lexicographic k-subsets `α, β`: the diagonal is `Σ_{i∈α} m_ii`; when
/// `α∖β = {i}` and `β∖α = {j}` the entry is `(−1)^s·m_ij` with `s` the number of common
/// elements strictly between `i` and `j`; all other entries vanish.
pub fn additive_compound<T: Scalar>(m: &[Vec<T>], k: usize) -> Result<Vec<Vec<T>>> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }
    if k < 1 || k > n {
        return Err(Error::invalid(format!("compound order k must be in 1..={n}, got {k}")));
    }
    let subsets = combinations(n, k);
    let index: HashMap<&[usize], usize> = subsets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let dim = subsets.len();
    let mut out = vec![vec![T::zero(); dim]; dim];
    for (a, alpha) in subsets.iter().enumerate() {
        out[a][a] = alpha.iter().fold(T::zero(), |acc, &i| acc + m[i][i].clone());
        // Neighbours: swap one element i ∈ α for some j ∉ α.
        for &i in alpha {
            for j in (0..n).filter(|j| !alpha.contains(j)) {
                let mut beta: Vec<usize> = alpha.iter().copied().filter(|&x| x != i).chain([j]).collect();
                beta.sort_unstable();
                let b = index[beta.as_slice()];
                let (lo, hi) = (i.min(j), i.max(j));
                let between = alpha.iter().filter(|&&r| r != i && lo < r && r < hi).count();
                out[a][b] = if between % 2 == 0 { m[i][j].clone() } else { -m[i][j].clone() };
            }
        }
    }
    Ok(out)
}

/// Diagonal `±1` matrix `S` (as a vector) with `S·ψ(M)·S = additive_compound(M, 2)` for
/// every symmetric `M` of dimension `n`.
///
/// Built by propagating signs across the off-diagonal entries of `ψ(E_ij + E_ji)` for
/// all `i < j` (breadth-first from pair 0), then checked exactly on each of them. Both
/// sides are linear in `M`, so agreement on that spanning set gives agreement everywhere.
pub fn compound_sign_matrix(n: usize) -> Result<Vec<i8>> {
    if n < 2 {
        return Err(Error::invalid(format!("sign matrix needs n >= 2, got {n}")));
    }
    let dim = n * (n - 1) / 2;
    let elementary: Vec<(Vec<Vec<Rational>>, SymMatQ)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let e = SymMatQ::from_fn(n, |a, b| if (a, b) == (i, j) { Rational::one() } else { Rational::zero() });
            let ps = psi(&e);
            (additive_compound(&e.rows(), 2).expect("valid order"), ps)
        })
        .collect();

    let mut sign: Vec<Option<i8>> = vec![None; dim];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..dim {
        if sign[start].is_some() {
            continue;
        }
        sign[start] = Some(1);
        queue.push_back(start);
        while let Some(a) = queue.pop_front() {
            for (comp, ps) in &elementary {
                for b in 0..dim {
                    let (x, y) = (ps.get(a, b), &comp[a][b]);
                    if b == a || x.is_zero() || sign[b].is_some() {
                        continue;
                    }
                    let rel = if x == y { 1 } else { -1 };
                    sign[b] = Some(rel * sign[a].expect("visited"));
                    queue.push_back(b);
                }
            }
        }
    }
    let s: Vec<i8> = sign.into_iter().map(|x| x.expect("all assigned")).collect();
    for (comp, ps) in &elementary {
        for a in 0..dim {
            for b in 0..dim {
                let conj = if s[a] * s[b] == 1 { ps.get(a, b).clone() } else { -ps.get(a, b).clone() };
                if conj != comp[a][b] {
                    return Err(Error::invalid("psi and the second additive compound differ beyond a sign change"));
                }
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigh, eigvalsh, kron};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMatF {
        SymMatF::from_fn(n, |_, _| rng.random_range(-2.0..2.0))
    }

    fn pairwise_sums(ev: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = pairs(ev.len()).iter().map(|&(i, j)| ev[i] + ev[j]).collect();
        out.sort_by(|a, b| b.partial_cmp(a).unwrap());
        out
    }

    #[test]
    fn wedge_basis_shapes_and_orthonormality() {
        let w = wedge_basis(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(w.p.as_slice(), &[0.0, h, -h, 0.0]);
        assert_eq!(wedge_basis(6).unwrap().p.shape(), (36, 15));
        assert!(wedge_basis(1).is_err());
        for n in 2..=8 {
            let p = wedge_basis(n).unwrap().p;
            let g = p.transpose().matmul(&p).unwrap();
            assert!(g.max_abs_diff(&Matrix::identity(n * (n - 1) / 2)) < 1e-15);
            for c in 0..p.cols() {
                assert_eq!(p.col(c).iter().filter(|x| **x != 0.0).count(), 2);
            }
        }
    }

    #[test]
    fn pair_index_matches_enumeration() {
        for n in 2..9 {
            for (idx, &(i, j)) in pairs(n).iter().enumerate() {
                assert_eq!(pair_index(n, i, j), idx);
                assert_eq!(pair_index(n, j, i), idx);
            }
        }
    }

    #[test]
    fn psi_examples() {
        let m = SymMatQ::from_rows(vec![vec![q(3, 1), q(5, 2)], vec![q(5, 2), q(-1, 7)]]).unwrap();
        let p = psi(&m);
        assert_eq!(p.dim(), 1);
        assert_eq!(p.get(0, 0), &q(20, 7));
        for n in 2..7 {
            assert_eq!(psi(&SymMatQ::identity(n)), SymMatQ::scalar(n * (n - 1) / 2, q(2, 1)));
        }
        let k3 = SymMatF::from_fn(3, |i, j| if i == j { 0.0 } else { 1.0 });
        let ev = eigvalsh(&psi(&k3)).unwrap();
        for (a, b) in ev.iter().zip([1.0, 1.0, -2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn entry_formula_matches_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..=6 {
            let m = random_sym(&mut rng, n);
            let p = wedge_basis(n).unwrap().p;
            let id = Matrix::identity(n);
            let big = kron(&m.to_matrix(), &id).add(&kron(&id, &m.to_matrix())).unwrap();
            let reference = p.transpose().matmul(&big).unwrap().matmul(&p).unwrap();
            assert!(psi(&m).to_matrix().max_abs_diff(&reference) < 1e-12);
        }
    }

    #[test]
    fn spectrum_is_pairwise_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let n = rng.random_range(2..=7);
            let m = random_sym(&mut rng, n);
            let want = pairwise_sums(&eigvalsh(&m).unwrap());
            let got = eigvalsh(&psi(&m)).unwrap();
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn wedges_of_eigenvectors_are_eigenvectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let n = rng.random_range(2..=6);
            let m = random_sym(&mut rng, n);
            let d = eigh(&m).unwrap();
            if d.eigenvalues.windows(2).any(|w| w[0] - w[1] < 1e-3) {
                continue;
            }
            let pm = psi(&m).to_matrix();
            let p = wedge_basis(n).unwrap().p;
            for (i, j) in pairs(n) {
                let (vi, vj) = (Matrix::column(&d.vector(i)), Matrix::column(&d.vector(j)));
                let wedge = kron(&vi, &vj).add(&kron(&vj, &vi).scale(-1.0)).unwrap();
                let coords = p.transpose().matmul(&wedge).unwrap();
                let lhs = pm.matmul(&coords).unwrap();
                let rhs = coords.scale(d.eigenvalues[i] + d.eigenvalues[j]);
                assert!(lhs.max_abs_diff(&rhs) <= 1e-8);
            }
        }
    }

    proptest! {
        #[test]
        fn psi_is_linear_over_q(
            a in -20i64..20, b in -20i64..20,
            x in proptest::collection::vec(-9i64..9, 15),
            y in proptest::collection::vec(-9i64..9, 15),
        ) {
            let (mut i1, mut i2) = (0, 0);
            let m1 = SymMatQ::from_fn(5, |_, _| { i1 += 1; q(x[i1 - 1], 3) });
            let m2 = SymMatQ::from_fn(5, |_, _| { i2 += 1; q(y[i2 - 1], 2) });
            let (qa, qb) = (q(a, 1), q(b, 7));
            let comb = SymMatQ::from_fn(5, |i, j| &qa * m1.get(i, j) + &qb * m2.get(i, j));
            let (p1, p2) = (psi(&m1), psi(&m2));
            let want = SymMatQ::from_fn(10, |i, j| &qa * p1.get(i, j) + &qb * p2.get(i, j));
            prop_assert_eq!(psi(&comb), want);
        }
    }

    #[test]
    fn compound_edge_orders() {
        let m: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| q((i * 4 + j) as i64 - 5, 3)).collect()).collect();
        assert_eq!(additive_compound(&m, 1).unwrap(), m);
        let trace = (0..4).fold(q(0, 1), |acc, i| acc + &m[i][i]);
        assert_eq!(additive_compound(&m, 4).unwrap(), vec![vec![trace]]);
        assert!(additive_compound(&m, 0).is_err());
        assert!(additive_compound(&m, 5).is_err());
    }

    #[test]
    fn compound_spectrum_k3() {
        // k-th compound of a symmetric matrix has the k-fold sums of eigenvalues.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = random_sym(&mut rng, 5);
        let rows: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| m.get(i, j)).collect()).collect();
        let c = additive_compound(&rows, 3).unwrap();
        let c = SymMatF::from_rows(&c).unwrap();
        let ev = eigvalsh(&m).unwrap();
        let mut want: Vec<f64> = combinations(5, 3).iter().map(|s| s.iter().map(|&i| ev[i]).sum()).collect();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in eigvalsh(&c).unwrap().iter().zip(&want) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn sign_matrix_is_identity_in_lexicographic_basis() {
        for n in 2..=7 {
            let s = compound_sign_matrix(n).unwrap();
            assert!(s.iter().all(|&x| x == 1), "n = {n}: {s:?}");
        }
        // Exact agreement on a random rational matrix.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = SymMatQ::from_fn(6, |_, _| q(rng.random_range(-9..9), rng.random_range(1..6)));
        assert_eq!(additive_compound(&m.rows(), 2).unwrap(), psi(&m).rows());
    }
}
