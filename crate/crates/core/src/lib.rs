//! Intuitionistic fuzzy normed algebras over concrete real carriers.
//!
//! The crate is layered bottom-up:
//!
//! - [`triangular`]: t-norms, t-conorms and their grid axiom checks.
//! - [`algebra`]: scalar, matrix, truncated-series and null-product algebras
//!   with crisp norms and an exact inversion oracle.
//! - [`if_norm`]: the induced fuzzy norm μ = t/(t+‖x‖), ν = ‖x‖/(t+‖x‖),
//!   open balls and the normed-algebra axiom checker.
//! - [`convergence`]: fuzzy convergence and Cauchy verdicts over finite horizons.
//! - [`inversion`]: Neumann and resolvent series with openness and continuity probes.
//! - [`divisors`]: topological divisor-of-zero witnesses.

pub mod algebra;
pub mod convergence;
pub mod divisors;
pub mod error;
pub mod if_norm;
pub mod inversion;
pub mod report;
pub mod sampling;
pub mod triangular;

pub use algebra::{AlgebraElement, AlgebraModel, DirectInverse, ModelKind, NormKind};
pub use error::{Error, Result};
pub use if_norm::{BallSpec, FuzzyDegreePair, IFNormModel};
pub use report::{AxiomRecord, AxiomReport, AxiomStatus, Witness};
pub use triangular::{TriangularConorm, TriangularNorm, TriangularOp};
