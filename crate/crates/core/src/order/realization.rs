//! Finite dynamical realization: a left-ordered ball placed on the rational
//! line, with each generator acting by a partial piecewise-linear map.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::line::PlLineMap;
use super::oracle::{compare, OracleError, OrderOracle};
use crate::exact::rational::{int, Rational};
use crate::exact::{GroupError, GroupWord, MatrixGroup, SquareMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("words {0} and {1} are the same element")]
    Duplicate(GroupWord, GroupWord),
    #[error("order is not left-invariant: {u} < {v} but g{generator}^{exponent} reverses them")]
    NotLeftInvariant {
        generator: usize,
        exponent: i64,
        u: GroupWord,
        v: GroupWord,
    },
    #[error("order is not total on the ball: {0}")]
    NotTotal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedPoint {
    pub word: GroupWord,
    #[serde(with = "crate::exact::rational")]
    pub point: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLineMap {
    pub generator: usize,
    /// `(t(w), t(g w))` for every `w` with both in the ball, increasing.
    pub pairs: Vec<(Rational, Rational)>,
}

impl PartialLineMap {
    /// Affine interpolation between assigned points, slope 1 outside.
    pub fn extension(&self) -> Option<PlLineMap> {
        if self.pairs.is_empty() {
            return None;
        }
        PlLineMap::new(self.pairs.clone()).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    /// Ball in increasing order with its assigned rationals.
    pub points: Vec<RealizedPoint>,
    pub maps: Vec<PartialLineMap>,
}

/// Places an increasing list of words on `Z ⊂ Q` with the identity at 0 and
/// checks that each generator preserves the order wherever it stays inside.
pub fn dynamical_realization(
    group: &MatrixGroup,
    ordered: &[GroupWord],
) -> Result<Realization, RealizationError> {
    let mut position: HashMap<SquareMatrix, usize> = HashMap::new();
    for (i, w) in ordered.iter().enumerate() {
        group.check_word(w)?;
        if let Some(&j) = position.get(group.evaluate(w).matrix()) {
            return Err(RealizationError::Duplicate(ordered[j].clone(), w.clone()));
        }
        position.insert(group.evaluate(w).into_matrix(), i);
    }
    let origin = position
        .get(&SquareMatrix::identity(group.n()))
        .copied()
        .unwrap_or(0) as i64;
    let t = |i: usize| int(i as i64 - origin);

    let mut maps = Vec::new();
    for g in 0..group.rank() {
        for exponent in [1i64, -1] {
            let gm = group.generators()[g].pow(exponent);
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for (i, w) in ordered.iter().enumerate() {
                let image = &gm * &group.evaluate(w);
                if let Some(&j) = position.get(image.matrix()) {
                    pairs.push((i, j));
                }
            }
            for win in pairs.windows(2) {
                if win[0].1 > win[1].1 {
                    return Err(RealizationError::NotLeftInvariant {
                        generator: g,
                        exponent,
                        u: ordered[win[0].0].clone(),
                        v: ordered[win[1].0].clone(),
                    });
                }
            }
            if exponent == 1 {
                maps.push(PartialLineMap {
                    generator: g,
                    pairs: pairs.into_iter().map(|(i, j)| (t(i), t(j))).collect(),
                });
            }
        }
    }
    let points = ordered
        .iter()
        .enumerate()
        .map(|(i, w)| RealizedPoint {
            word: w.clone(),
            point: t(i),
        })
        .collect();
    Ok(Realization { points, maps })
}

/// Sorts a ball by an oracle, counting for each word the words below it.
/// Fails if the counts are not a permutation (the oracle is not a total
/// order on the ball) or a comparison is declined.
pub fn order_ball<O: OrderOracle + ?Sized>(
    oracle: &mut O,
    ball: &[GroupWord],
) -> Result<Vec<GroupWord>, RealizationError> {
    let n = ball.len();
    let mut below = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match compare(oracle, &ball[j], &ball[i]) {
                Ok(Ordering::Less) => below[i] += 1,
                Ok(Ordering::Greater) => {}
                Ok(Ordering::Equal) => {
                    return Err(RealizationError::Duplicate(
                        ball[i].clone(),
                        ball[j].clone(),
                    ));
                }
                Err(OracleError::Undecided(r)) => return Err(RealizationError::NotTotal(r)),
                Err(OracleError::Partition(w)) => {
                    return Err(RealizationError::NotTotal(format!(
                        "partition fails at {w}"
                    )))
                }
            }
        }
    }
    let mut slots: Vec<Option<GroupWord>> = vec![None; n];
    for (i, &b) in below.iter().enumerate() {
        if b >= n || slots[b].is_some() {
            return Err(RealizationError::NotTotal(format!(
                "rank collision at {}",
                ball[i]
            )));
        }
        slots[b] = Some(ball[i].clone());
    }
    Ok(slots.into_iter().map(|s| s.expect("permutation")).collect())
}
