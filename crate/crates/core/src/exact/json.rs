//! `{"n": 3, "rows": [["1","2","0"], ...]}` matrix encoding.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::matrix::{MatrixError, SpecialLinearElement, SquareMatrix};
use super::rational::{format_rational, parse_rational, ParseRationalError};

#[derive(Debug, Error)]
pub enum MatrixJsonError {
    #[error("malformed matrix JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("declared n = {declared} but found {actual} rows")]
    DeclaredSize { declared: usize, actual: usize },
    #[error("entry ({row}, {col}): {source}")]
    Entry {
        row: usize,
        col: usize,
        source: ParseRationalError,
    },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &SquareMatrix) -> Self {
        MatrixJson {
            n: m.n(),
            rows: m
                .rows()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<SquareMatrix, MatrixJsonError> {
        if self.rows.len() != self.n {
            return Err(MatrixJsonError::DeclaredSize {
                declared: self.n,
                actual: self.rows.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(row, r)| {
                r.iter()
                    .enumerate()
                    .map(|(col, s)| {
                        parse_rational(s).map_err(|source| MatrixJsonError::Entry {
                            row,
                            col,
                            source,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SquareMatrix::from_rows(rows)?)
    }

    pub fn to_special_linear(&self) -> Result<SpecialLinearElement, MatrixJsonError> {
        Ok(SpecialLinearElement::new(self.to_matrix()?)?)
    }
}

pub fn parse_matrix(text: &str) -> Result<SquareMatrix, MatrixJsonError> {
    serde_json::from_str::<MatrixJson>(text)?.to_matrix()
}

pub fn matrix_to_json(m: &SquareMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_round_trips_bit_exactly() {
        let text = r#"{"n":3,"rows":[["1","2","0"],["0","1","0"],["0","0","1"]]}"#;
        let m = parse_matrix(text).unwrap();
        assert_eq!(matrix_to_json(&m), text);
    }

    #[test]
    fn rational_entries() {
        let text = r#"{"n":2,"rows":[["2","-1/3"],["0","1/2"]]}"#;
        let m = parse_matrix(text).unwrap();
        assert_eq!(matrix_to_json(&m), text);
        assert!(MatrixJson::from_matrix(&m).to_special_linear().is_ok());
    }

    #[test]
    fn errors_are_specific() {
        assert!(matches!(
            parse_matrix("{\"n\":2"),
            Err(MatrixJsonError::Syntax(_))
        ));
        assert!(matches!(
            parse_matrix(r#"{"n":3,"rows":[["1","0"],["0","1"]]}"#),
            Err(MatrixJsonError::DeclaredSize { .. })
        ));
        assert!(matches!(
            parse_matrix(r#"{"n":2,"rows":[["1","x"],["0","1"]]}"#),
            Err(MatrixJsonError::Entry { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            parse_matrix(r#"{"n":2,"rows":[["1","0","0"],["0","1"]]}"#),
            Err(MatrixJsonError::Matrix(MatrixError::Ragged { .. }))
        ));
    }
}
