//! Online bipartite matching with stochastic rewards.
//!
//! The crate bundles the pieces needed to run and verify the potential-based
//! matching algorithms at desk scale: problem instances and generators,
//! potential functions (closed forms and the iterative solver), the online
//! algorithms with full dual bookkeeping, the reward/budget reductions with a
//! Monte Carlo harness, and LP benchmarks backed by a dense simplex engine.
//!
//! Numeric kernels are generic over the scalar (see [`num::Scalar`]); the
//! simulation and I/O layers use the `f64` aliases exported below.

pub mod num;
pub mod quad;

pub mod potential;

pub use num::Scalar;

/// Scalar type used by the concrete simulation/benchmark layers.
pub type Real = f64;

/// `f64` potential table (the type the algorithms consume).
pub type Potential = potential::PotentialTable<Real>;
/// `f64` cutoff table.
pub type Cutoff = potential::CutoffTable<Real>;
