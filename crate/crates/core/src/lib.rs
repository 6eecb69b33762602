//! Exact-arithmetic constructive measure theory on finite carriers.
//!
//! Scalars are exact rationals. The crate covers complemented subsets,
//! pre-measure spaces over algebras of complemented subsets, simple
//! functions, pre-integration spaces, and an `L¹` layer built from
//! representations with certified tail bounds.

pub mod arith;
pub mod dsl;
pub mod error;
pub mod l1;
pub mod laws;
pub mod preint;
pub mod report;
pub mod premeasure;
pub mod sets;
pub mod simple;

pub use arith::{cotransitive_compare, pair, sum_with_tail, unpair, Decision, Scalar, ScalarInterval};
pub use error::{Error, Result};
pub use sets::{BoolPartialFn, Carrier, ComplementedSubset, RealPartialFn, Subset};
