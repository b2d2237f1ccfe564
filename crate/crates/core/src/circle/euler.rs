//! Tabulated Euler cocycle on a finite piece of the acting group.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ball::ActionBall;
use super::{euler_z, CircleMap};
use crate::exact::GroupWord;

/// `values[i][j] = z(γ_i, γ_j)`; `products[i][j]` is the index of `γ_i γ_j`
/// when it lies in the domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCocycleTable {
    pub domain: Vec<GroupWord>,
    pub values: Vec<Vec<u8>>,
    pub products: Vec<Vec<Option<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("no table entry for the product of elements {0} and {1}")]
    MissingEntry(usize, usize),
    #[error("index {0} outside the domain")]
    OutOfDomain(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CocycleFailure {
    pub triple: [usize; 3],
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CocycleReport {
    pub triples_checked: usize,
    pub first_failure: Option<CocycleFailure>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

impl EulerCocycleTable {
    pub fn from_ball<M: CircleMap>(ball: &ActionBall<M>) -> Self {
        let n = ball.len();
        let values = (0..n)
            .map(|i| (0..n).map(|j| euler_z(ball.map(i), ball.map(j))).collect())
            .collect();
        let products = (0..n)
            .map(|i| (0..n).map(|j| ball.product(i, j)).collect())
            .collect();
        EulerCocycleTable {
            domain: ball.words().to_vec(),
            values,
            products,
        }
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.values[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|&v| v == 0)
    }

    pub fn values_in_range(&self) -> bool {
        self.values.iter().flatten().all(|&v| v <= 1)
    }

    /// Triples whose two partial products both lie in the domain.
    pub fn closed_triples(&self) -> Vec<[usize; 3]> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let Some(_) = self.products[i][j] else {
                    continue;
                };
                for k in 0..n {
                    if self.products[j][k].is_some() {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }
}

/// Checks `z(a,b) + z(ab,c) = z(a,bc) + z(b,c)` on each triple.
pub fn check_cocycle_identity(
    table: &EulerCocycleTable,
    triples: &[[usize; 3]],
) -> Result<CocycleReport, CocycleError> {
    let n = table.len();
    let mut checked = 0;
    for &[a, b, c] in triples {
        if let Some(&bad) = [a, b, c].iter().find(|&&x| x >= n) {
            return Err(CocycleError::OutOfDomain(bad));
        }
        let ab = table.products[a][b].ok_or(CocycleError::MissingEntry(a, b))?;
        let bc = table.products[b][c].ok_or(CocycleError::MissingEntry(b, c))?;
        let lhs = table.get(a, b) as i64 + table.get(ab, c) as i64;
        let rhs = table.get(a, bc) as i64 + table.get(b, c) as i64;
        checked += 1;
        if lhs != rhs {
            return Ok(CocycleReport {
                triples_checked: checked,
                first_failure: Some(CocycleFailure {
                    triple: [a, b, c],
                    lhs,
                    rhs,
                }),
            });
        }
    }
    Ok(CocycleReport {
        triples_checked: checked,
        first_failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::PlCircleHomeo;
    use crate::exact::rational::ratio;

    #[test]
    fn rotation_group_table() {
        let ball = ActionBall::image(&[PlCircleHomeo::rotation(ratio(1, 6))], 3);
        let table = EulerCocycleTable::from_ball(&ball);
        assert_eq!(table.len(), 6);
        assert!(table.values_in_range());
        let triples = table.closed_triples();
        assert_eq!(triples.len(), 216);
        assert!(check_cocycle_identity(&table, &triples).unwrap().passed());
    }

    #[test]
    fn corruption_is_reported() {
        let ball = ActionBall::image(&[PlCircleHomeo::rotation(ratio(1, 4))], 2);
        let mut table = EulerCocycleTable::from_ball(&ball);
        table.values[1][1] ^= 1;
        let report = check_cocycle_identity(&table, &table.closed_triples()).unwrap();
        let failure = report.first_failure.unwrap();
        assert_ne!(failure.lhs, failure.rhs);
    }

    #[test]
    fn trivial_group_passes_vacuously() {
        let ball = ActionBall::image(&[PlCircleHomeo::rotation(ratio(0, 1))], 2);
        let table = EulerCocycleTable::from_ball(&ball);
        assert_eq!(table.len(), 1);
        assert!(check_cocycle_identity(&table, &table.closed_triples())
            .unwrap()
            .passed());
        assert!(check_cocycle_identity(&table, &[]).unwrap().passed());
    }

    #[test]
    fn missing_product_is_an_error() {
        let ball = ActionBall::integers(&PlCircleHomeo::rotation(ratio(1, 3)), 1);
        let table = EulerCocycleTable::from_ball(&ball);
        assert_eq!(
            check_cocycle_identity(&table, &[[1, 1, 0]]),
            Err(CocycleError::MissingEntry(1, 1))
        );
    }
}
