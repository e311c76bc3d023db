//! Bargmann invariants of tuples of quantum states.
//!
//! For a tuple of states `(ρ_1, …, ρ_n)` the Bargmann invariant is
//! `Tr(ρ_1 ρ_2 ⋯ ρ_n)`; for pure states it is the cyclic product of consecutive
//! overlaps `⟨ψ_1|ψ_2⟩⟨ψ_2|ψ_3⟩⋯⟨ψ_n|ψ_1⟩`. The set of values the invariant can
//! take is the same for mixed and pure states in every dimension `d ≥ 2`, and it
//! coincides with the set reachable by tuples with a circulant Gram matrix:
//!
//! ```text
//! { t·[p + (1 − p)·ξ_n]^n : t, p ∈ [0, 1] },   ξ_n = e^{2πi/n}
//! ```
//!
//! The crate is organised as:
//!
//! - [`state`]: states, tuples, invariant evaluation and random sampling.
//! - [`gram`]: Gram matrices, Schur/convex closure, factorization back into states.
//! - [`range`]: closed-form boundary of the range and membership decisions.
//! - [`synthesis`]: explicit tuples realizing a requested value.
//! - [`symmetrize`]: phase alignment and cyclic averaging of a tuple.
//! - [`verify`]: the seeded Monte Carlo / cross-check harness behind `bargmann verify`.
//! - [`io`]: JSON and CSV formats shared with the command-line tool.

#![forbid(unsafe_code)]
// `!(x <= tol)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gram;
pub mod io;
mod linalg;
pub mod range;
pub mod state;
pub mod symmetrize;
pub mod synthesis;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use gram::GramMatrix;
pub use range::{CanonicalParams, Classification, MembershipVerdict, RegionSpec};
pub use state::{BargmannValue, DensityMatrix, MixedTuple, PureTuple, StateVector, Tuple};
pub use synthesis::{Method, OptimizerConfig, SynthesisResult};
pub use tolerance::Tolerances;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
