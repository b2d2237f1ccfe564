//! Orders induced by actions on the line, with ties broken along a fixed
//! enumeration of the rationals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::line::{LineMapError, PlLineMap, PlLineMapJson};
use super::oracle::{OracleError, OrderOracle, Sign};
use crate::exact::rational::Rational;
use crate::exact::{GroupWord, MatrixGroup};

pub const DEFAULT_DEPTH: usize = 4096;

/// `0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 3/2, -3/2, 1/3, ...`: reduced `p/q`
/// ordered by height `max(|p|, q)`, then by denominator, then by `|p|`,
/// positive before negative.
pub fn rational_enumeration(count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(Rational::from_integer(BigInt::from(0)));
    let mut h: i64 = 1;
    while out.len() < count {
        let mut level = Vec::new();
        for q in 1..=h {
            for p in 1..=h {
                if p.max(q) != h || p.gcd(&q) != 1 {
                    continue;
                }
                level.push((q, p));
            }
        }
        for (q, p) in level {
            for s in [1, -1] {
                out.push(Rational::new(BigInt::from(s * p), BigInt::from(q)));
                if out.len() == count {
                    return out;
                }
            }
        }
        h += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("action has {maps} maps for {generators} generators")]
    Arity { maps: usize, generators: usize },
    #[error(transparent)]
    Map(#[from] LineMapError),
}

/// Generator `i` acts by `maps[i]`; a word `l_1 ... l_n` acts by
/// `l_1 ∘ ... ∘ l_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineAction {
    maps: Vec<PlLineMap>,
    inverses: Vec<PlLineMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineActionJson {
    pub maps: Vec<PlLineMapJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl LineAction {
    pub fn new(maps: Vec<PlLineMap>) -> Self {
        let inverses = maps.iter().map(PlLineMap::inverse).collect();
        LineAction { maps, inverses }
    }

    pub fn from_json(json: &LineActionJson) -> Result<Self, ActionError> {
        let maps = json
            .maps
            .iter()
            .map(PlLineMap::from_json)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LineAction::new(maps))
    }

    pub fn maps(&self) -> &[PlLineMap] {
        &self.maps
    }

    pub fn apply(&self, word: &GroupWord, x: &Rational) -> Rational {
        let mut y = x.clone();
        for l in word.letters().iter().rev() {
            let f = if l.exponent > 0 {
                &self.maps[l.generator]
            } else {
                &self.inverses[l.generator]
            };
            for _ in 0..l.exponent.unsigned_abs() {
                y = f.eval(&y);
            }
        }
        y
    }

    /// The map of `word` as a single PL map.
    pub fn compose(&self, word: &GroupWord) -> PlLineMap {
        let mut out = PlLineMap::identity();
        for l in word.letters() {
            let f = if l.exponent > 0 {
                &self.maps[l.generator]
            } else {
                &self.inverses[l.generator]
            };
            for _ in 0..l.exponent.unsigned_abs() {
                out = out.compose(f);
            }
        }
        out
    }
}

/// Sign of `w` is read off the first enumerated rational it moves.
pub struct ActionOracle {
    group: MatrixGroup,
    action: LineAction,
    points: Vec<Rational>,
}

pub fn order_from_action(
    group: MatrixGroup,
    action: LineAction,
    depth: usize,
) -> Result<ActionOracle, ActionError> {
    if action.maps.len() != group.rank() {
        return Err(ActionError::Arity {
            maps: action.maps.len(),
            generators: group.rank(),
        });
    }
    Ok(ActionOracle {
        group,
        action,
        points: rational_enumeration(depth),
    })
}

impl ActionOracle {
    pub fn action(&self) -> &LineAction {
        &self.action
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    /// Compares `u` and `v` by evaluating both at the enumerated points.
    pub fn compare_pointwise(&self, u: &GroupWord, v: &GroupWord) -> Option<Ordering> {
        self.points.iter().find_map(|q| {
            let c = self.action.apply(u, q).cmp(&self.action.apply(v, q));
            (c != Ordering::Equal).then_some(c)
        })
    }
}

impl OrderOracle for ActionOracle {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }

    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError> {
        if self.group.is_identity(word) {
            return Ok(Sign::Identity);
        }
        for q in &self.points {
            match self.action.apply(word, q).cmp(q) {
                Ordering::Greater => return Ok(Sign::Positive),
                Ordering::Less => return Ok(Sign::Negative),
                Ordering::Equal => {}
            }
        }
        Err(OracleError::Undecided(format!(
            "{word} fixes the first {} enumerated rationals",
            self.points.len()
        )))
    }
}
