//! Exact computations around left orders on lattices, circle actions and
//! elementary generation of `SL(n, Z)`.
//!
//! Everything outside [`navas`] is exact: rationals are arbitrary precision
//! and group elements are compared by matrix evaluation.

pub mod circle;
pub mod decomposition;
pub mod exact;
pub mod navas;
pub mod order;
