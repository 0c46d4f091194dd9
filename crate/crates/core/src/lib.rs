//! Security estimation for hash-based signatures and ring lattice
//! encryption under a physically constrained quantum adversary, together
//! with the desk-scale brute-force oracles that keep the closed forms
//! honest.
//!
//! Modules:
//! - [`entropy`]: Rényi entropy family and entropy-to-advantage bounds.
//! - [`quantum`]: decoherence, parallelization, and query-floor model.
//! - [`sphincs`]: hypertree collision bounds and the height optimizer.
//! - [`ntru`]: lattice hardness terms and the ring parameter optimizer.
//! - [`oracle`]: seeded Monte Carlo and exhaustive-enumeration checks.
//! - [`lattice`]: small exact integer lattices shared by the above.
//!
//! All functions are pure; every type is immutable after construction, so
//! concurrent callers need no coordination.

#![forbid(unsafe_code)]
// `!(x > 0.0)` and friends are used on purpose: the negation is true for
// NaN, so one comparison both validates the range and rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod lattice;
pub mod logdomain;
pub mod ntru;
pub mod oracle;
pub mod quantum;
pub mod sphincs;

pub use error::{Error, Result};
pub use logdomain::{log_sum_exp2, Log2Quantity, QuantityKind};
pub use quantum::QuantumEnvironment;
