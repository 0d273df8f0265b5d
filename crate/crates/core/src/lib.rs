//! Exact computations for the family of polytopal norm balls
//! `rho(d,k) = conv(cross-polytope ∪ cube/k)` and their polars
//! `rho*(d,k) = k·cross-polytope ∩ cube`.
//!
//! Everything that can be exact is exact: rationals are [`BigRational`],
//! lengths and areas carrying square roots are [`SurdValue`]s. Floating point
//! only appears in the Monte Carlo and bisection oracles and in display code.
//!
//! Module map:
//!
//! - [`arith`] and [`surd`]: big rationals, combinatorial numbers, `Params`, surds.
//! - [`norms`]: the k-norm, its dual, sparsity and membership tests.
//! - [`combinatorics`]: vertex/facet generators and closed-form f-vectors.
//! - [`face_lattice`]: brute-force face enumeration from vertex–facet incidences.
//! - [`volume`]: closed-form volumes, boundary volumes and Mahler volumes.
//! - [`oracle`]: Monte Carlo, simplex/triangulation measures and gauge bisection.
//! - [`suites`]: the verification suites shared by the CLI and the acceptance run.

pub mod arith;
pub mod combinatorics;
pub mod error;
pub mod face_lattice;
mod linalg;
pub mod norms;
pub mod oracle;
pub mod suites;
pub mod surd;
pub mod volume;

pub use arith::{BigInt, BigRational, Params};
pub use combinatorics::{FVector, Family, Inequality, PolytopeRep};
pub use error::{Error, Result};
pub use face_lattice::{FaceLattice, FaceRecord, IncidenceMatrix};
pub use norms::Membership;
pub use surd::SurdValue;
