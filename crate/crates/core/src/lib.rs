//! Weighted-mediant Stern-Brocot sequences with exact arithmetic.
//!
//! The unit case (weight 3, start pair `0/1, 1/1`, reduced fractions) gets
//! the full treatment: rows, cross-difference rows by three independent
//! routes, counting formulas, a mod-9 census and deterministic figures.

pub mod analytics;
pub mod crossdiff;
pub mod fraction;
pub mod oracle;
pub mod render;
pub mod row;
pub mod verify;

pub use crossdiff::{CrossDiffRow, Steeple};
pub use fraction::{cross_difference, weighted_mediants, Fraction, Mediant, ReductionResult};
pub use row::{RowSpec, RowStream};
