// NaN must fail the `!(x > a)` guards, which the lint would rewrite away.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod character;
pub mod classify;
pub mod coefficients;
pub mod datum;
pub mod error;
pub mod explicit;
pub mod instances;
pub mod quadrature;
pub mod sieve;
pub mod spec_doc;
pub mod special;
pub mod test_function;
pub mod twists;

pub use error::{Error, Result};
