//! Exact rational linear algebra: the substrate every other module uses.

pub mod json;
pub mod matrix;
pub mod rational;
pub mod word;

pub use json::{matrix_to_json, parse_matrix, MatrixJson, MatrixJsonError};
pub use matrix::{ElementaryMatrix, MatrixError, SpecialLinearElement, SquareMatrix};
pub use rational::{format_rational, parse_rational, Rational};
pub use word::{GroupElement, GroupError, GroupWord, Letter, MatrixGroup};
