use std::collections::HashMap;

use thiserror::Error;

use super::certificate::{TranscriptEntry, Violation, ViolationCertificate};
use super::oracle::{OracleError, OrderOracle, Sign};
use crate::exact::{GroupWord, MatrixGroup, SquareMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("oracle left {0} undecided: {1}")]
    Undecided(GroupWord, String),
    #[error("oracle rejected {0}: {1}")]
    Rejected(GroupWord, OracleError),
    #[error("{}", .0.kind())]
    Violation(Box<ViolationCertificate>),
}

/// Records every oracle query in order and checks each new answer against
/// the identity, earlier answers for the same element, and earlier answers
/// for its inverse. A word is sent to the oracle at most once.
pub struct OracleSession<O> {
    oracle: O,
    transcript: Vec<TranscriptEntry>,
    by_word: HashMap<GroupWord, Sign>,
    by_element: HashMap<SquareMatrix, (GroupWord, Sign)>,
    frontier: Vec<GroupWord>,
}

impl<O: OrderOracle> OracleSession<O> {
    pub fn new(oracle: O) -> Self {
        OracleSession {
            oracle,
            transcript: Vec::new(),
            by_word: HashMap::new(),
            by_element: HashMap::new(),
            frontier: Vec::new(),
        }
    }

    pub fn group(&self) -> &MatrixGroup {
        self.oracle.group()
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    /// Queries the oracle declined to answer.
    pub fn frontier(&self) -> &[GroupWord] {
        &self.frontier
    }

    pub fn into_oracle(self) -> O {
        self.oracle
    }

    pub fn certificate(&self, violation: Violation) -> ViolationCertificate {
        ViolationCertificate::new(self.transcript.clone(), violation)
    }

    fn violation(&self, violation: Violation) -> QueryError {
        QueryError::Violation(Box::new(self.certificate(violation)))
    }

    pub fn query(&mut self, word: &GroupWord) -> Result<Sign, QueryError> {
        if let Some(&s) = self.by_word.get(word) {
            return Ok(s);
        }
        let answer = match self.oracle.sign(word) {
            Ok(s) => s,
            Err(OracleError::Undecided(reason)) => {
                if !self.frontier.contains(word) {
                    self.frontier.push(word.clone());
                }
                return Err(QueryError::Undecided(word.clone(), reason));
            }
            Err(e) => return Err(QueryError::Rejected(word.clone(), e)),
        };
        self.transcript.push(TranscriptEntry {
            word: word.clone(),
            answer,
        });
        self.by_word.insert(word.clone(), answer);

        let value = self.oracle.group().evaluate(word);
        if value.is_identity() != (answer == Sign::Identity) {
            return Err(self.violation(Violation::PartitionViolation {
                word: word.clone(),
                partner: None,
            }));
        }
        let key = value.matrix().clone();
        if let Some((first, s)) = self.by_element.get(&key) {
            if *s != answer {
                return Err(self.violation(Violation::LeftInvarianceViolation {
                    first: first.clone(),
                    second: word.clone(),
                }));
            }
            return Ok(answer);
        }
        if answer != Sign::Identity {
            let inverse = value.inverse().into_matrix();
            if let Some((first, s)) = self.by_element.get(&inverse) {
                if *s == answer {
                    return Err(self.violation(Violation::PartitionViolation {
                        word: first.clone(),
                        partner: Some(word.clone()),
                    }));
                }
            }
        }
        self.by_element.insert(key, (word.clone(), answer));
        Ok(answer)
    }

    /// Answer already known for this element, if any, without asking.
    pub fn known(&self, value: &SquareMatrix) -> Option<Sign> {
        self.by_element.get(value).map(|(_, s)| *s)
    }
}
