//! Computational companion to the bound `λ1(G) + λ2(G) ≤ 8n/7`.
//!
//! The crate is split along the lines of the argument it mirrors:
//!
//! * [`numerics`]: dense symmetric eigensolver, Kronecker products, simplex projection.
//! * [`exactq`]: exact rational matrices, LDLᵀ-based PSD witnesses, bounded-denominator rounding.
//! * [`graphs`]: graphs with loops, spectral sums, blowups, the `K(n,p,q)` family and exhaustive search.
//! * [`stepmodel`]: looped base graphs with simplex weights and the weighted matrix `M*`.
//! * [`compound`]: wedge bases, the second additive compound `ψ(M)` and general `k`-th compounds.
//! * [`certify`]: the matrix sum-of-squares pipeline producing exact certificates.
//! * [`textfmt`]: the plain-text matrix, graph and rational formats shared by every tool.

pub mod certify;
pub mod compound;
pub mod error;
pub mod exactq;
pub mod graphs;
pub mod numerics;
pub mod stepmodel;
pub mod textfmt;

pub use certify::{Certificate, SosProblem};
pub use error::{Error, Result};
pub use exactq::{PsdWitness, SymMatQ};
pub use graphs::{Graph, SpectralSummary};
pub use numerics::{EigenDecomp, Matrix, SymMatF};
pub use stepmodel::{Candidate, CandidateGraph, StepEigs, StepModel};

/// Exact rational scalar used throughout the exact pipeline.
pub type Rational = num_rational::BigRational;
