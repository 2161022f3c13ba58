use super::Certificate;
use crate::compound::psi;
use crate::exactq::{ldl_psd_check, PsdWitness, SymMatQ};
use crate::Rational;
use num_traits::{One, Zero};
use std::fmt;

/// Which coefficient (or structural check) a violation belongs to. Indices are 1-based
/// block indices in `Display` output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Constant,
    Linear(usize),
    Square(usize),
    Cross(usize, usize),
    QSymmetry,
    TSymmetry,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Location::Constant => write!(f, "coefficient of 1"),
            Location::Linear(i) => write!(f, "coefficient of x{}", i + 1),
            Location::Square(i) => write!(f, "coefficient of x{}^2", i + 1),
            Location::Cross(i, j) => write!(f, "coefficient of x{}*x{}", i + 1, j + 1),
            Location::QSymmetry => write!(f, "symmetry of Q"),
            Location::TSymmetry => write!(f, "symmetry of T"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub location: Location,
    /// 0-based entry inside the `m×m` coefficient (or inside `Q`/`T` for symmetry).
    pub row: usize,
    pub col: usize,
    /// Left-hand side, or the mirrored entry for symmetry checks.
    pub expected: Rational,
    pub found: Rational,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub holds: bool,
    /// Scalar equalities compared.
    pub entries_checked: usize,
    /// First violations found, at most [`MAX_REPORTED`].
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    /// Every coefficient (or symmetry check) with at least one mismatch, in check order.
    pub failed: Vec<Location>,
}

pub const MAX_REPORTED: usize = 20;

/// Exact coefficientwise check of
/// `c·I − ψ(M*(x)) = V(x)ᵀ Q V(x) + (1 − ‖x‖²)·T`.
///
/// Both sides are quadratic matrix polynomials in `x`. With blocks `Q_ab`:
///
/// | monomial  | left side                 | right side        |
/// |-----------|---------------------------|-------------------|
/// | 1         | `c·I`                     | `Q_00 + T`        |
/// | `x_i`     | 0                         | `Q_0i + Q_i0`     |
/// | `x_i²`    | `−A_ii·ψ(E_ii)`           | `Q_ii − T`        |
/// | `x_i x_j` | `−A_ij·ψ(E_ij + E_ji)`    | `Q_ij + Q_ji`     |
///
/// `Q` and `T` are also required to be exactly symmetric. Nothing here touches floats.
pub fn verify_identity(cert: &Certificate) -> IdentityReport {
    let (k, m) = (cert.k, cert.m);
    let graph = cert.candidate.graph();
    let mut report = IdentityReport { holds: true, entries_checked: 0, violations: Vec::new(), violation_count: 0, failed: Vec::new() };
    let record = |report: &mut IdentityReport, location: Location, row, col, expected: Rational, found: Rational| {
        report.entries_checked += 1;
        if expected != found {
            report.holds = false;
            report.violation_count += 1;
            if report.failed.last() != Some(&location) {
                report.failed.push(location);
            }
            if report.violations.len() < MAX_REPORTED {
                report.violations.push(Violation { location, row, col, expected, found });
            }
        }
    };

    let n = (k + 1) * m;
    for i in 0..n {
        for j in (i + 1)..n {
            record(&mut report, Location::QSymmetry, i, j, cert.q[j][i].clone(), cert.q[i][j].clone());
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            record(&mut report, Location::TSymmetry, i, j, cert.t[j][i].clone(), cert.t[i][j].clone());
        }
    }

    let q = |a: usize, b: usize, r: usize, s: usize| &cert.q[a * m + r][b * m + s];
    let unit = |i: usize, j: usize| SymMatQ::from_fn(k, |a, b| if (a, b) == (i, j) { Rational::one() } else { Rational::zero() });
    let adj = |i: usize, j: usize| if graph.adjacent(i, j) { Rational::one() } else { Rational::zero() };

    for r in 0..m {
        for s in 0..m {
            let id = if r == s { cert.bound.clone() } else { Rational::zero() };
            record(&mut report, Location::Constant, r, s, id, q(0, 0, r, s) + &cert.t[r][s]);
        }
    }
    for i in 1..=k {
        for r in 0..m {
            for s in 0..m {
                record(&mut report, Location::Linear(i - 1), r, s, Rational::zero(), q(0, i, r, s) + q(i, 0, r, s));
            }
        }
    }
    for i in 0..k {
        let p = psi(&unit(i, i));
        let a = adj(i, i);
        for r in 0..m {
            for s in 0..m {
                let lhs = -(&a * p.get(r, s));
                record(&mut report, Location::Square(i), r, s, lhs, q(i + 1, i + 1, r, s) - &cert.t[r][s]);
            }
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let p = psi(&unit(i, j));
            let a = adj(i, j);
            for r in 0..m {
                for s in 0..m {
                    let lhs = -(&a * p.get(r, s));
                    record(&mut report, Location::Cross(i, j), r, s, lhs, q(i + 1, j + 1, r, s) + q(j + 1, i + 1, r, s));
                }
            }
        }
    }
    report
}

/// Exact PSD test of `Q`. A non-symmetric `Q` is tested through its symmetric part,
/// which is what its quadratic form sees; [`verify_identity`] rejects such files anyway.
pub fn verify_psd(cert: &Certificate) -> PsdWitness {
    let half = Rational::new(1.into(), 2.into());
    let n = cert.q.len();
    let q = SymMatQ::from_fn(n, |i, j| if i == j { cert.q[i][i].clone() } else { (&cert.q[i][j] + &cert.q[j][i]) * &half });
    ldl_psd_check(&q)
}
