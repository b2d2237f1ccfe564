use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{GroupWord, MatrixGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Identity,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            Sign::Identity => Sign::Identity,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Identity => "identity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// The oracle declines to answer, e.g. a depth-limited search.
    #[error("undecided: {0}")]
    Undecided(String),
    /// Both `w` and `w^-1` are in the cone, or neither is and `w != e`.
    #[error("partition axiom fails at {0}")]
    Partition(GroupWord),
}

/// Sign queries for a candidate left order on a matrix group.
///
/// `a < b` is read as `sign(b^-1 a) = Negative`, which is left-invariant by
/// construction. Oracles may be stateful, so queries take `&mut self`.
pub trait OrderOracle {
    fn group(&self) -> &MatrixGroup;
    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError>;
}

impl<O: OrderOracle + ?Sized> OrderOracle for &mut O {
    fn group(&self) -> &MatrixGroup {
        (**self).group()
    }

    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError> {
        (**self).sign(word)
    }
}

impl<O: OrderOracle + ?Sized> OrderOracle for Box<O> {
    fn group(&self) -> &MatrixGroup {
        (**self).group()
    }

    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError> {
        (**self).sign(word)
    }
}

/// Oracle given by a sign function on matrix values.
pub struct FnOracle<F> {
    group: MatrixGroup,
    f: F,
}

impl<F> FnOracle<F>
where
    F: FnMut(&crate::exact::SpecialLinearElement) -> Sign,
{
    pub fn new(group: MatrixGroup, f: F) -> Self {
        FnOracle { group, f }
    }
}

impl<F> OrderOracle for FnOracle<F>
where
    F: FnMut(&crate::exact::SpecialLinearElement) -> Sign,
{
    fn group(&self) -> &MatrixGroup {
        &self.group
    }

    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError> {
        let m = self.group.evaluate(word);
        if m.is_identity() {
            return Ok(Sign::Identity);
        }
        Ok((self.f)(&m))
    }
}

/// Compares `u` and `v` through the oracle: `Less` iff `sign(v^-1 u)` is negative.
pub fn compare<O: OrderOracle + ?Sized>(
    oracle: &mut O,
    u: &GroupWord,
    v: &GroupWord,
) -> Result<std::cmp::Ordering, OracleError> {
    Ok(match oracle.sign(&v.inverse().mul(u))? {
        Sign::Negative => std::cmp::Ordering::Less,
        Sign::Identity => std::cmp::Ordering::Equal,
        Sign::Positive => std::cmp::Ordering::Greater,
    })
}
