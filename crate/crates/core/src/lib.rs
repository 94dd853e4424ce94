//! Exponentiability of functors between finite quantaloid-enriched categories.
//!
//! The crate is layered bottom-up:
//!
//! - [`order`]: finite complete lattices, monotone maps and their right adjoints.
//! - [`quantaloid`]: finite quantaloids, residuation and instance builders.
//! - [`qcat`]: Q-categories, functors, matrices, distributors, finite limits and collages.
//! - [`expcheck`]: the two elementary exponentiability conditions, the `hat ⊣ sharp`
//!   adjunctions between fibres, the lax squares and the partial-product construction.
//! - [`oracle`]: brute-force verification of universal properties that does not trust
//!   the formulas in [`expcheck`].
//! - [`instance`]: the JSON instance-file schema.

#![allow(clippy::needless_range_loop)]

pub mod expcheck;
pub mod instance;
pub mod oracle;
pub mod order;
pub mod qcat;
pub mod quantaloid;

pub use expcheck::{is_exponentiable, partial_product, slice_exponential, PartialProduct, SliceExponential};
pub use instance::{Instance, InstanceError, ValidationReport};
pub use order::{FiniteLattice, MonotoneMap, OrderError};
pub use qcat::{QCategory, QDistributor, QFunctor};
pub use quantaloid::Quantaloid;
