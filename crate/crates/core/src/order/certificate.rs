//! Finite refutations of the left-order axioms.
//!
//! A certificate pairs the full query transcript of a session with one
//! violated axiom instance. [`ViolationCertificate::check`] re-derives the
//! violation from the transcript by exact evaluation and nothing else;
//! [`ViolationCertificate::replay`] additionally re-asks a fresh oracle every
//! transcript query, in order, and demands the same answers.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::oracle::{OrderOracle, Sign};
use crate::exact::{GroupError, GroupWord, MatrixGroup, MatrixJson, SpecialLinearElement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub word: GroupWord,
    pub answer: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub word: GroupWord,
    pub repeat: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// With no partner: `word` is the identity but was not answered
    /// `identity`, or the converse. With a partner: `word * partner = e` and
    /// both carry the same non-identity sign.
    PartitionViolation {
        word: GroupWord,
        partner: Option<GroupWord>,
    },
    /// Two words for the same element with different answers, so the
    /// comparison `u < v` is not preserved under left multiplication.
    LeftInvarianceViolation { first: GroupWord, second: GroupWord },
    /// `left` and `right` share a non-identity sign that `product` lacks.
    ClosureViolation {
        left: GroupWord,
        right: GroupWord,
        product: GroupWord,
    },
    /// Every factor carries `required`, so their ordered product must too;
    /// the product evaluates to `target`, which was answered otherwise.
    EvaluatedIdentityContradiction {
        factors: Vec<Factor>,
        required: Sign,
        target: GroupWord,
        evaluation: MatrixJson,
        answer: Sign,
    },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::PartitionViolation { .. } => "PartitionViolation",
            Violation::LeftInvarianceViolation { .. } => "LeftInvarianceViolation",
            Violation::ClosureViolation { .. } => "ClosureViolation",
            Violation::EvaluatedIdentityContradiction { .. } => "EvaluatedIdentityContradiction",
        }
    }
}

/// Sign changes applied to a Heisenberg triple before the witness search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Normalization {
    pub inverted_a: bool,
    pub inverted_b: bool,
    pub inverted_z: bool,
    pub swapped: bool,
    /// Exponent `k` with `[a, b] = z^k` after the substitution; always positive.
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ViolationCertificate {
    pub transcript: Vec<TranscriptEntry>,
    pub violation: Violation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<super::heisenberg::ObstructionWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("word {0} is used by the violation but absent from the transcript")]
    MissingEntry(GroupWord),
    #[error("replay of query {index} ({word}) gave {got}, transcript says {recorded}")]
    ReplayMismatch {
        index: usize,
        word: GroupWord,
        recorded: Sign,
        got: Sign,
    },
    #[error("replay of query {index} ({word}) was not answered: {reason}")]
    ReplayUnanswered {
        index: usize,
        word: GroupWord,
        reason: String,
    },
    #[error("violation does not hold: {0}")]
    NotAViolation(String),
}

impl ViolationCertificate {
    pub fn new(transcript: Vec<TranscriptEntry>, violation: Violation) -> Self {
        ViolationCertificate {
            transcript,
            violation,
            normalization: None,
            witness: None,
        }
    }

    pub fn kind(&self) -> &'static str {
        self.violation.kind()
    }

    /// Confirms the violation from the recorded answers by exact evaluation.
    pub fn check(&self, group: &MatrixGroup) -> Result<(), CertificateError> {
        let mut answers: HashMap<&GroupWord, Sign> = HashMap::new();
        for entry in &self.transcript {
            group.check_word(&entry.word)?;
            answers.entry(&entry.word).or_insert(entry.answer);
        }
        let answer = |w: &GroupWord| {
            answers
                .get(w)
                .copied()
                .ok_or_else(|| CertificateError::MissingEntry(w.clone()))
        };
        let fail = |msg: String| Err(CertificateError::NotAViolation(msg));

        match &self.violation {
            Violation::PartitionViolation {
                word,
                partner: None,
            } => {
                let is_e = group.is_identity(word);
                let a = answer(word)?;
                if is_e == (a == Sign::Identity) {
                    return fail(format!("{word} answered {a}, consistent with its value"));
                }
            }
            Violation::PartitionViolation {
                word,
                partner: Some(partner),
            } => {
                group.check_word(partner)?;
                if !group.is_identity(&word.mul(partner)) {
                    return fail(format!("{word} and {partner} are not mutually inverse"));
                }
                let (a, b) = (answer(word)?, answer(partner)?);
                if a != b || a == Sign::Identity {
                    return fail(format!("answers {a} and {b} respect the partition"));
                }
            }
            Violation::LeftInvarianceViolation { first, second } => {
                if group.evaluate(first) != group.evaluate(second) {
                    return fail(format!("{first} and {second} are different elements"));
                }
                if answer(first)? == answer(second)? {
                    return fail("both words carry the same answer".into());
                }
            }
            Violation::ClosureViolation {
                left,
                right,
                product,
            } => {
                group.check_word(product)?;
                if &group.evaluate(left) * &group.evaluate(right) != group.evaluate(product) {
                    return fail(format!(
                        "{product} is not the product of {left} and {right}"
                    ));
                }
                let (a, b, c) = (answer(left)?, answer(right)?, answer(product)?);
                if a != b || a == Sign::Identity || c == a {
                    return fail(format!("answers {a}, {b}, {c} respect closure"));
                }
            }
            Violation::EvaluatedIdentityContradiction {
                factors,
                required,
                target,
                evaluation,
                answer: recorded,
            } => {
                if *required == Sign::Identity || recorded == required {
                    return fail("required and recorded signs agree".into());
                }
                if factors.is_empty() {
                    return fail("empty factor list".into());
                }
                let mut product = SpecialLinearElement::identity(group.n());
                for f in factors {
                    group.check_word(&f.word)?;
                    if f.repeat == 0 {
                        return fail(format!("factor {} has zero repeat", f.word));
                    }
                    let a = answer(&f.word)?;
                    if a != *required {
                        return fail(format!("factor {} answered {a}, not {required}", f.word));
                    }
                    let value = group.evaluate(&f.word).pow(f.repeat as i64);
                    product = &product * &value;
                }
                group.check_word(target)?;
                let target_value = group.evaluate(target);
                if product != target_value {
                    return fail("factor product differs from the target".into());
                }
                let stored = evaluation
                    .to_matrix()
                    .map_err(|e| CertificateError::NotAViolation(e.to_string()))?;
                if &stored != target_value.matrix() {
                    return fail("stored evaluation differs from the target".into());
                }
                if answer(target)? != *recorded {
                    return fail("target answer differs from the transcript".into());
                }
            }
        }
        Ok(())
    }

    /// Re-asks every transcript query of `oracle` in order, then checks.
    pub fn replay<O: OrderOracle + ?Sized>(&self, oracle: &mut O) -> Result<(), CertificateError> {
        for (index, entry) in self.transcript.iter().enumerate() {
            oracle.group().check_word(&entry.word)?;
            match oracle.sign(&entry.word) {
                Ok(got) if got == entry.answer => {}
                Ok(got) => {
                    return Err(CertificateError::ReplayMismatch {
                        index,
                        word: entry.word.clone(),
                        recorded: entry.answer,
                        got,
                    })
                }
                Err(e) => {
                    return Err(CertificateError::ReplayUnanswered {
                        index,
                        word: entry.word.clone(),
                        reason: e.to_string(),
                    })
                }
            }
        }
        self.check(oracle.group())
    }
}
