use super::{EigenDecomp, Matrix, SymMatF};
use crate::error::{Error, Result};

/// Stopping rule for the cyclic Jacobi sweep.
#[derive(Clone, Copy, Debug)]
pub struct EighOptions {
    /// Converged once the off-diagonal Frobenius norm drops below
    /// `offdiag_tol · max(1, ‖M‖_F)`.
    pub offdiag_tol: f64,
    pub max_sweeps: usize,
}

impl Default for EighOptions {
    fn default() -> Self {
        EighOptions { offdiag_tol: 1e-12, max_sweeps: 100 }
    }
}

/// Full symmetric eigendecomposition with default options.
pub fn eigh(m: &SymMatF) -> Result<EigenDecomp> {
    eigh_with(m, &EighOptions::default())
}

/// Cyclic Jacobi eigendecomposition.
///
/// Eigenvalues come back sorted descending, ties broken by the diagonal position
/// they converged in. Each eigenvector is sign-normalised so that its largest-magnitude
/// entry (first one on ties) is positive, which makes the output deterministic.
pub fn eigh_with(m: &SymMatF, opts: &EighOptions) -> Result<EigenDecomp> {
    m.check_finite()?;
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut v = Matrix::identity(n);
    jacobi_in_place(&mut a, n, Some(&mut v), opts)?;

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the original index order among equal eigenvalues.
    order.sort_by(|&i, &j| a[j * n + j].partial_cmp(&a[i * n + i]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        for r in 0..n {
            if v[(r, src)].abs() > v[(pivot, src)].abs() {
                pivot = r;
            }
        }
        let sign = if v[(pivot, src)] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            vectors[(r, dst)] = sign * v[(r, src)];
        }
    }
    Ok(EigenDecomp { eigenvalues, eigenvectors: vectors })
}

/// Eigenvalues only (descending). Skips eigenvector accumulation.
pub fn eigvalsh(m: &SymMatF) -> Result<Vec<f64>> {
    m.check_finite()?;
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    jacobi_in_place(&mut a, n, None, &EighOptions::default())?;
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(ev)
}

fn off_norm_sq(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[i * n + j] * a[i * n + j];
        }
    }
    2.0 * s
}

fn jacobi_in_place(a: &mut [f64], n: usize, mut v: Option<&mut Matrix>, opts: &EighOptions) -> Result<()> {
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = opts.offdiag_tol * frob.max(1.0);
    let mut off = off_norm_sq(a, n).sqrt();
    let mut sweeps = 0;
    while off >= threshold {
        if sweeps == opts.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Rotation angle chosen so the (p, q) entry vanishes; smaller root for stability.
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let np = arp - s * (arq + tau * arp);
                    let nq = arq + s * (arp - tau * arq);
                    a[r * n + p] = np;
                    a[p * n + r] = np;
                    a[r * n + q] = nq;
                    a[q * n + r] = nq;
                }
                if let Some(v) = v.as_deref_mut() {
                    for r in 0..n {
                        let vp = v[(r, p)];
                        let vq = v[(r, q)];
                        v[(r, p)] = vp - s * (vq + tau * vp);
                        v[(r, q)] = vq + s * (vp - tau * vq);
                    }
                }
            }
        }
        off = off_norm_sq(a, n).sqrt();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMatF {
        SymMatF::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn identity_spectrum() {
        let d = eigh(&SymMatF::identity(3)).unwrap();
        assert_close(&d.eigenvalues, &[1.0, 1.0, 1.0], 0.0);
    }

    #[test]
    fn triangle_spectrum() {
        let k3 = SymMatF::from_fn(3, |i, j| if i == j { 0.0 } else { 1.0 });
        let d = eigh(&k3).unwrap();
        assert_close(&d.eigenvalues, &[2.0, -1.0, -1.0], 1e-12);
    }

    #[test]
    fn weighted_path_spectrum() {
        // M* for the looped path with weights (2/7, 3/7, 2/7); the reference spectrum
        // (6/7, 2/7, -1/7) comes from bisection on det(M - λI) in the test below.
        let u: [f64; 3] = [2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0];
        let adj = [[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0]];
        let m = SymMatF::from_fn(3, |i, j| adj[i][j] * (u[i] * u[j]).sqrt());
        let roots = bisect_char_poly_3(&m);
        assert_close(&roots, &[6.0 / 7.0, 2.0 / 7.0, -1.0 / 7.0], 1e-12);
        let d = eigh(&m).unwrap();
        assert_close(&d.eigenvalues, &roots, 1e-12);
    }

    /// Independent oracle: roots of the cubic characteristic polynomial by bisection
    /// on sign changes over a fine grid.
    fn bisect_char_poly_3(m: &SymMatF) -> Vec<f64> {
        let det = |l: f64| {
            let a = |i, j| m.get(i, j) - if i == j { l } else { 0.0 };
            a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
        };
        let mut roots = Vec::new();
        let steps = 3000;
        let (lo, hi) = (-3.0, 3.0);
        for s in 0..steps {
            let mut a = lo + (hi - lo) * s as f64 / steps as f64;
            let mut b = lo + (hi - lo) * (s + 1) as f64 / steps as f64;
            if det(a) == 0.0 {
                roots.push(a);
                continue;
            }
            if det(a).signum() == det(b).signum() {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if det(a).signum() == det(mid).signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
        roots
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = SymMatF::identity(2);
        m.set(0, 1, f64::NAN);
        assert!(matches!(eigh(&m), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 13, 20] {
            for _ in 0..10 {
                let m = random_sym(&mut rng, n);
                let d = eigh(&m).unwrap();
                assert!(d.reconstruct().max_abs_diff(&m) <= 1e-8);
                let v = &d.eigenvectors;
                for i in 0..n {
                    let mv = m.to_matrix().matvec(&d.vector(i)).unwrap();
                    for r in 0..n {
                        assert!((mv[r] - d.eigenvalues[i] * v[(r, i)]).abs() <= 1e-10);
                    }
                    for j in 0..n {
                        let dot: f64 = (0..n).map(|r| v[(r, i)] * v[(r, j)]).sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((dot - want).abs() <= 1e-10);
                    }
                }
                let tr: f64 = d.eigenvalues.iter().sum();
                assert!((tr - m.trace()).abs() <= 1e-9);
                assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn deterministic_and_sign_normalised() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_sym(&mut rng, 9);
        let a = eigh(&m).unwrap();
        let b = eigh(&m).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
        for i in 0..9 {
            let col = a.vector(i);
            let big = col.iter().cloned().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
            assert!(big > 0.0);
        }
    }

    #[test]
    fn eigvalsh_matches_eigh() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_sym(&mut rng, 12);
        let a = eigh(&m).unwrap().eigenvalues;
        let b = eigvalsh(&m).unwrap();
        assert_close(&a, &b, 1e-12);
    }
}
