use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{OracleError, OrderOracle, Sign};
use crate::exact::{GroupWord, MatrixGroup, SpecialLinearElement, SquareMatrix};

pub const DEFAULT_WARMUP_QUERIES: usize = 12;
pub const DEFAULT_WARMUP_LENGTH: usize = 4;

/// Adversary that extends a partial order one query at a time.
///
/// An answer is forced when the element or its inverse is already known, or
/// when it is a product of two known positives (or its inverse is). Free
/// choices are answered positive. The seed only drives a short run of random
/// warmup queries made on construction, so two oracles with the same seed
/// give identical answers to identical query sequences.
#[derive(Debug, Clone)]
pub struct GreedyOracle {
    group: MatrixGroup,
    known: HashMap<SquareMatrix, Sign>,
    positives: Vec<SpecialLinearElement>,
}

impl GreedyOracle {
    pub fn new(group: MatrixGroup) -> Self {
        GreedyOracle {
            group,
            known: HashMap::new(),
            positives: Vec::new(),
        }
    }

    pub fn seeded(group: MatrixGroup, seed: u64) -> Self {
        Self::with_warmup(group, seed, DEFAULT_WARMUP_QUERIES, DEFAULT_WARMUP_LENGTH)
    }

    pub fn with_warmup(group: MatrixGroup, seed: u64, queries: usize, max_length: usize) -> Self {
        let mut oracle = GreedyOracle::new(group);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = oracle.group.rank();
        for _ in 0..queries {
            let len = rng.gen_range(1..=max_length.max(1));
            let word = GroupWord::from_letters((0..len).map(|_| {
                (
                    rng.gen_range(0..rank),
                    if rng.gen_bool(0.5) { 1 } else { -1 },
                )
            }));
            oracle.decide(&oracle.group.evaluate(&word));
        }
        oracle
    }

    pub fn known_count(&self) -> usize {
        self.known.len()
    }

    fn is_positive(&self, m: &SquareMatrix) -> bool {
        self.known.get(m) == Some(&Sign::Positive)
    }

    fn product_of_positives(&self, target: &SpecialLinearElement) -> bool {
        self.positives.iter().any(|p| {
            let rest = &p.inverse() * target;
            self.is_positive(rest.matrix())
        })
    }

    fn decide(&mut self, m: &SpecialLinearElement) -> Sign {
        if m.is_identity() {
            return Sign::Identity;
        }
        if let Some(&s) = self.known.get(m.matrix()) {
            return s;
        }
        let inverse = m.inverse();
        let sign = if let Some(&s) = self.known.get(inverse.matrix()) {
            s.opposite()
        } else if self.product_of_positives(m) {
            Sign::Positive
        } else if self.product_of_positives(&inverse) {
            Sign::Negative
        } else {
            Sign::Positive
        };
        self.known.insert(m.matrix().clone(), sign);
        self.known.insert(inverse.matrix().clone(), sign.opposite());
        self.positives.push(if sign == Sign::Positive {
            m.clone()
        } else {
            inverse
        });
        sign
    }
}

impl OrderOracle for GreedyOracle {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }

    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError> {
        let m = self.group.evaluate(word);
        Ok(self.decide(&m))
    }
}
