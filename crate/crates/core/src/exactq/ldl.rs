use super::{q_eval, SymMatQ};
use crate::Rational;
use num_traits::{Signed, Zero};

/// One term `weight · vector · vectorᵀ` of an exact PSD decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneTerm {
    pub vector: Vec<Rational>,
    pub weight: Rational,
}

/// Outcome of an exact PSD test.
#[derive(Clone, Debug)]
pub enum PsdWitness {
    /// `Q = Σ weight_r · w_r w_rᵀ` with every weight positive, re-multiplied and checked.
    Psd { decomposition: Vec<RankOneTerm> },
    /// `zᵀQz = value < 0`.
    NotPsd { counterexample: Vec<Rational>, value: Rational },
}

impl PsdWitness {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdWitness::Psd { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            PsdWitness::Psd { decomposition } => Some(decomposition.len()),
            PsdWitness::NotPsd { .. } => None,
        }
    }
}

/// Symmetric-pivoted LDLᵀ over ℚ.
///
/// Each step eliminates the largest remaining diagonal entry. A zero pivot is
/// accepted only if its whole remaining row is zero; otherwise the 2×2 minor
/// `[[0, b], [b, c]]` supplies a negative direction. Alongside the Schur complement
/// we carry, for every live index `j`, a vector `z_j` with `S[i][j] = z_iᵀ Q z_j`, so a
/// bad pivot turns directly into a counterexample in the original coordinates.
pub fn ldl_psd_check(q: &SymMatQ) -> PsdWitness {
    let n = q.dim();
    let mut s: Vec<Vec<Rational>> = q.rows();
    let mut z: Vec<Vec<(usize, Rational)>> = (0..n).map(|j| vec![(j, Rational::from_integer(1.into()))]).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut terms = Vec::new();

    while !alive.is_empty() {
        let (pos, &p) = alive
            .iter()
            .enumerate()
            .max_by(|(_, &a), (_, &b)| s[a][a].cmp(&s[b][b]).then(b.cmp(&a)))
            .expect("non-empty");
        let d = s[p][p].clone();

        if d.is_negative() {
            return not_psd(q, sparse_to_dense(&z[p], n));
        }
        if d.is_zero() {
            if let Some(&j) = alive.iter().find(|&&j| j != p && !s[p][j].is_zero()) {
                // Form on t·z_p + z_j is 2tb + c; pick t so that it equals c - |c| - 1 < 0.
                let b = s[p][j].clone();
                let c = s[j][j].clone();
                let t = -(c.abs() + Rational::from_integer(1.into())) / (Rational::from_integer(2.into()) * &b);
                let mut v = sparse_to_dense(&z[j], n);
                for (idx, val) in &z[p] {
                    v[*idx] += &t * val;
                }
                return not_psd(q, v);
            }
            alive.swap_remove(pos);
            continue;
        }

        alive.swap_remove(pos);
        let mut l = vec![Rational::zero(); n];
        l[p] = Rational::from_integer(1.into());
        let col: Vec<(usize, Rational)> = alive
            .iter()
            .filter(|&&i| !s[i][p].is_zero())
            .map(|&i| (i, &s[i][p] / &d))
            .collect();
        for (i, f) in &col {
            l[*i] = f.clone();
        }
        for (i, f) in &col {
            for (j, _) in &col {
                if j < i {
                    continue;
                }
                let upd = f * &s[p][*j];
                let v = &s[*i][*j] - upd;
                if i != j {
                    s[*j][*i] = v.clone();
                }
                s[*i][*j] = v;
            }
            let zp = z[p].clone();
            axpy_sparse(&mut z[*i], &-f.clone(), &zp);
        }
        for i in alive.iter() {
            s[*i][p] = Rational::zero();
            s[p][*i] = Rational::zero();
        }
        terms.push(RankOneTerm { vector: l, weight: d });
    }

    assert!(reconstructs(q, &terms), "LDL decomposition failed exact re-multiplication");
    PsdWitness::Psd { decomposition: terms }
}

fn not_psd(q: &SymMatQ, z: Vec<Rational>) -> PsdWitness {
    let value = q_eval(q, &z).expect("dimensions match");
    assert!(value.is_negative(), "counterexample must give a negative form");
    PsdWitness::NotPsd { counterexample: z, value }
}

fn sparse_to_dense(v: &[(usize, Rational)], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `y += a·x` on sorted sparse vectors.
fn axpy_sparse(y: &mut Vec<(usize, Rational)>, a: &Rational, x: &[(usize, Rational)]) {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, a * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + a * &x[j].1;
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *y = out;
}

/// Exact check of `Σ d_r w_r w_rᵀ == Q`.
pub(crate) fn reconstructs(q: &SymMatQ, terms: &[RankOneTerm]) -> bool {
    let n = q.dim();
    let mut acc = vec![Rational::zero(); n * n];
    for t in terms {
        let nz: Vec<usize> = (0..n).filter(|&i| !t.vector[i].is_zero()).collect();
        for &i in &nz {
            let wi = &t.weight * &t.vector[i];
            for &j in &nz {
                acc[i * n + j] += &wi * &t.vector[j];
            }
        }
    }
    (0..n).all(|i| (0..n).all(|j| &acc[i * n + j] == q.get(i, j)))
}

#[cfg(test)]
mod tests {
    use super::super::q;
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: &[&[i64]]) -> SymMatQ {
        SymMatQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn identity_is_psd_with_unit_terms() {
        let w = ldl_psd_check(&SymMatQ::identity(2));
        let PsdWitness::Psd { decomposition } = w else { panic!("expected PSD") };
        assert_eq!(decomposition.len(), 2);
        let mut vecs: Vec<Vec<Rational>> = decomposition.iter().map(|t| t.vector.clone()).collect();
        vecs.sort();
        assert_eq!(vecs, vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        assert!(decomposition.iter().all(|t| t.weight == q(1, 1)));
    }

    #[test]
    fn rank_one_gram_matrix() {
        let w = ldl_psd_check(&mat(&[&[1, 1], &[1, 1]]));
        let PsdWitness::Psd { decomposition } = w else { panic!("expected PSD") };
        assert_eq!(decomposition, vec![RankOneTerm { vector: vec![q(1, 1), q(1, 1)], weight: q(1, 1) }]);
    }

    #[test]
    fn indefinite_gives_witness() {
        let m = mat(&[&[1, 2], &[2, 1]]);
        let PsdWitness::NotPsd { counterexample, value } = ldl_psd_check(&m) else { panic!("expected NOT_PSD") };
        assert!(value < q(0, 1));
        assert_eq!(q_eval(&m, &counterexample).unwrap(), value);
        // Along (1, -1) the form is -2.
        assert_eq!(q_eval(&m, &[q(1, 1), q(-1, 1)]).unwrap(), q(-2, 1));
    }

    #[test]
    fn zero_pivot_with_nonzero_row() {
        let m = mat(&[&[0, 1, 0], &[1, 3, 0], &[0, 0, 2]]);
        let PsdWitness::NotPsd { counterexample, value } = ldl_psd_check(&m) else { panic!() };
        assert!(value < q(0, 1));
        assert_eq!(q_eval(&m, &counterexample).unwrap(), value);
    }

    #[test]
    fn negative_diagonal() {
        let m = mat(&[&[2, 0], &[0, -1]]);
        assert!(!ldl_psd_check(&m).is_psd());
        assert!(ldl_psd_check(&SymMatQ::zeros(3)).is_psd());
    }

    fn random_gram(rng: &mut ChaCha8Rng) -> SymMatQ {
        let n = rng.random_range(1..=12);
        let r = rng.random_range(1..=n + 2);
        let g: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect()).collect();
        SymMatQ::from_fn(n, |i, j| q((0..r).map(|k| g[k][i] * g[k][j]).sum(), 1))
    }

    #[test]
    fn gram_matrices_are_psd_and_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let m = random_gram(&mut rng);
            let w = ldl_psd_check(&m);
            let PsdWitness::Psd { decomposition } = w else { panic!("Gram matrix rejected: {m:?}") };
            assert!(reconstructs(&m, &decomposition));
            assert!(decomposition.iter().all(|t| t.weight > q(0, 1)));
        }
    }

    #[test]
    fn perturbed_gram_matrices_are_caught() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut checked = 0;
        while checked < 200 {
            let m = random_gram(&mut rng);
            let i = rng.random_range(0..m.dim());
            // Subtract more than the diagonal entry so e_i itself is a negative direction.
            let c = m.get(i, i) + q(rng.random_range(1..5), rng.random_range(1..4));
            let mut bad = m.clone();
            bad.set(i, i, m.get(i, i) - &c);
            let PsdWitness::NotPsd { counterexample, value } = ldl_psd_check(&bad) else { panic!("missed") };
            assert!(value < q(0, 1));
            assert_eq!(q_eval(&bad, &counterexample).unwrap(), value);
            checked += 1;
        }
    }

    proptest! {
        #[test]
        fn verdict_agrees_with_float_spectrum(entries in proptest::collection::vec(-4i64..=4, 10)) {
            // 4x4 symmetric from 10 upper-triangle entries.
            let mut k = 0;
            let m = SymMatQ::from_fn(4, |_, _| { let v = q(entries[k], 1); k += 1; v });
            let ev = crate::numerics::eigvalsh(&m.to_f64()).unwrap();
            let min = *ev.last().unwrap();
            let w = ldl_psd_check(&m);
            if min > 1e-9 { prop_assert!(w.is_psd()); }
            if min < -1e-9 { prop_assert!(!w.is_psd()); }
        }
    }
}
