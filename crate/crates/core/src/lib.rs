//! Exact L2 discrepancy of shifted and symmetrized Hammersley point sets.
//!
//! The crate constructs digit-shifted Hammersley point sets and their
//! symmetrizations with exact dyadic coordinates, evaluates local and L2
//! discrepancies in exact rational arithmetic, and machine-verifies the
//! closed forms these constructions satisfy — most prominently that
//! `(2^{m+1}·L2(H_sym))² = m/24 + 11/8 + 2^{−m} − 1/(9·2^{2m+1})`
//! independently of the shift.
//!
//! Two independent evaluation routes exist everywhere it matters: a
//! pairwise-sum identity derived from the definition of the local
//! discrepancy ([`l2`]), and the digit formula with its extensions
//! ([`localdisc`], [`oracles`]). All comparisons are exact; no tolerances.
//!
//! With the default `parallel` feature the heavy pair sums and grid sweeps
//! run on rayon; disabling it falls back to identical sequential loops.
//! Results are bit-identical either way.

pub mod decimal;
mod error;
pub mod exact;
pub mod l2;
pub mod localdisc;
pub mod oracles;
mod par;
pub mod pointset;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{DyadicRational, ExactRational};
pub use par::set_worker_count;
pub use pointset::{PointSet, SetKind, Shift};
