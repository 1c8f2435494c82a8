//! Exact-arithmetic kernels for arc-space invariants of singular varieties:
//! Rees-algebra orders and singular loci, differential saturation, Nash
//! multiplicity sequences by arc-directed blow-ups, persistence invariants,
//! and transversality checks for finite morphisms.

pub mod error;
pub mod field;
pub mod order;
pub mod poly;
pub mod series;
pub mod rees;
pub mod arc;
pub mod hickel;
pub mod morphism;
pub mod scenario;
pub mod report;

pub use error::Error;
