//! Nilpotent orbits meeting the nilpotent centralizer of a matrix `B` with
//! Jordan type `(n,n)`.
//!
//! The centralizer of `B` is modelled as `M_2(F[X]/(X^n))`. On top of that the
//! crate enumerates every admissible Jordan type (cases P1 to P9), builds
//! explicit witness matrices for them, and checks the classification by
//! exhaustive search over small prime fields.

pub mod algebra;
pub mod centralizer;
pub mod enumerator;
pub mod error;
pub mod oracle;
pub mod partition;
pub mod witness;

pub use error::{Error, Result};
pub use partition::Partition;
