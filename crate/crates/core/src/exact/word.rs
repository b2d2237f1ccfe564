//! Freely reduced words over numbered generators, and their evaluation in a
//! matrix group.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::matrix::{MatrixError, SpecialLinearElement};

/// One syllable `g^e` of a word, `e != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i64,
}

/// A freely reduced word: adjacent letters always carry distinct generators
/// and no exponent is zero. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn generator(generator: usize) -> Self {
        GroupWord::power(generator, 1)
    }

    pub fn power(generator: usize, exponent: i64) -> Self {
        GroupWord::from_letters([(generator, exponent)])
    }

    /// Builds a word from `(generator, exponent)` pairs, reducing freely.
    pub fn from_letters<I: IntoIterator<Item = (usize, i64)>>(letters: I) -> Self {
        let mut word = GroupWord::identity();
        for (generator, exponent) in letters {
            word.push(generator, exponent);
        }
        word
    }

    fn push(&mut self, generator: usize, exponent: i64) {
        if exponent == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some(last) if last.generator == generator => {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push(Letter {
                generator,
                exponent,
            }),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of syllables.
    pub fn syllables(&self) -> usize {
        self.letters.len()
    }

    /// Word length in the generators and their inverses.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.exponent.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    generator: l.generator,
                    exponent: -l.exponent,
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for l in &other.letters {
            out.push(l.generator, l.exponent);
        }
        out
    }

    pub fn pow(&self, exponent: i64) -> GroupWord {
        if exponent == 0 || self.is_identity() {
            return GroupWord::identity();
        }
        if self.letters.len() == 1 {
            let l = self.letters[0];
            return GroupWord::power(l.generator, l.exponent * exponent);
        }
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = GroupWord::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn product<'a, I: IntoIterator<Item = &'a GroupWord>>(words: I) -> GroupWord {
        words
            .into_iter()
            .fold(GroupWord::identity(), |acc, w| acc.mul(w))
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if l.exponent == 1 {
                write!(f, "g{}", l.generator)?;
            } else {
                write!(f, "g{}^{}", l.generator, l.exponent)?;
            }
        }
        Ok(())
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(usize, i64)> = self
            .letters
            .iter()
            .map(|l| (l.generator, l.exponent))
            .collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(usize, i64)>::deserialize(deserializer)?;
        Ok(GroupWord::from_letters(pairs))
    }
}

/// Minimal group interface used by cochains and searches.
pub trait GroupElement: Clone + Eq + std::hash::Hash {
    fn op(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_neutral(&self) -> bool;
}

impl GroupElement for GroupWord {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inv(&self) -> Self {
        self.inverse()
    }

    fn is_neutral(&self) -> bool {
        self.is_identity()
    }
}

impl GroupElement for SpecialLinearElement {
    fn op(&self, other: &Self) -> Self {
        self * other
    }

    fn inv(&self) -> Self {
        self.inverse()
    }

    fn is_neutral(&self) -> bool {
        self.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a matrix group needs at least one generator")]
    NoGenerators,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("word uses generator {0}, group has {1}")]
    UnknownGenerator(usize, usize),
}

/// Finitely generated subgroup of SL(n, Q) with a fixed generator list; words
/// are evaluated by exact multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGroup {
    n: usize,
    generators: Vec<SpecialLinearElement>,
}

impl MatrixGroup {
    pub fn new(generators: Vec<SpecialLinearElement>) -> Result<Self, GroupError> {
        let first = generators.first().ok_or(GroupError::NoGenerators)?;
        let n = first.n();
        if let Some(bad) = generators.iter().find(|g| g.n() != n) {
            return Err(MatrixError::DimensionMismatch(n, bad.n()).into());
        }
        Ok(MatrixGroup { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[SpecialLinearElement] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn check_word(&self, word: &GroupWord) -> Result<(), GroupError> {
        match word.max_generator() {
            Some(g) if g >= self.generators.len() => {
                Err(GroupError::UnknownGenerator(g, self.generators.len()))
            }
            _ => Ok(()),
        }
    }

    /// Panics if the word mentions a generator outside the group; call
    /// [`MatrixGroup::check_word`] first on untrusted input.
    pub fn evaluate(&self, word: &GroupWord) -> SpecialLinearElement {
        let mut acc = SpecialLinearElement::identity(self.n);
        for l in word.letters() {
            let g = &self.generators[l.generator];
            let p = if l.exponent == 1 {
                g.clone()
            } else {
                g.pow(l.exponent)
            };
            acc = &acc * &p;
        }
        acc
    }

    pub fn is_identity(&self, word: &GroupWord) -> bool {
        self.evaluate(word).is_identity()
    }

    /// Distinct elements of the word ball of the given radius, each with its
    /// first-found (shortlex-smallest) representative word, in discovery order.
    pub fn ball(&self, radius: u64) -> Vec<(GroupWord, SpecialLinearElement)> {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        let identity = SpecialLinearElement::identity(self.n);
        seen.insert(identity.clone());
        let mut out = vec![(GroupWord::identity(), identity)];
        let mut frontier = vec![0usize];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &idx in &frontier {
                for g in 0..self.generators.len() {
                    for e in [1i64, -1] {
                        let word = out[idx].0.mul(&GroupWord::power(g, e));
                        let elem = &out[idx].1 * &self.generators[g].pow(e);
                        if seen.insert(elem.clone()) {
                            out.push((word, elem));
                            next.push(out.len() - 1);
                        }
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::ElementaryMatrix;
    use crate::exact::rational::int;

    #[test]
    fn free_reduction_on_construction() {
        let w = GroupWord::from_letters([(0, 2), (1, 1), (1, -1), (0, -2), (2, 3)]);
        assert_eq!(w, GroupWord::power(2, 3));
        let w = GroupWord::from_letters([(0, 1), (0, 0), (0, 2)]);
        assert_eq!(
            w.letters(),
            &[Letter {
                generator: 0,
                exponent: 3
            }]
        );
        assert!(GroupWord::from_letters([(3, 0)]).is_identity());
    }

    #[test]
    fn inverse_and_product() {
        let w = GroupWord::from_letters([(0, 2), (1, -1), (2, 1)]);
        assert!(w.mul(&w.inverse()).is_identity());
        assert!(w.inverse().mul(&w).is_identity());
        assert_eq!(w.length(), 4);
        assert_eq!(w.syllables(), 3);
        assert_eq!(w.to_string(), "g0^2 g1^-1 g2");
        assert_eq!(GroupWord::identity().to_string(), "e");
    }

    #[test]
    fn pow_of_multi_letter_word() {
        let w = GroupWord::from_letters([(0, 1), (1, 1)]);
        assert_eq!(
            w.pow(2),
            GroupWord::from_letters([(0, 1), (1, 1), (0, 1), (1, 1)])
        );
        assert_eq!(w.pow(-1), w.inverse());
        assert_eq!(GroupWord::power(4, 3).pow(-2), GroupWord::power(4, -6));
    }

    #[test]
    fn serde_as_pairs() {
        let w = GroupWord::from_letters([(0, 2), (1, -1)]);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, "[[0,2],[1,-1]]");
        let back: GroupWord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    fn heisenberg() -> MatrixGroup {
        MatrixGroup::new(vec![
            ElementaryMatrix::new(3, 0, 1, int(1)).unwrap().realize(),
            ElementaryMatrix::new(3, 1, 2, int(1)).unwrap().realize(),
        ])
        .unwrap()
    }

    #[test]
    fn evaluation_respects_products() {
        let g = heisenberg();
        let u = GroupWord::from_letters([(0, 2), (1, -1)]);
        let v = GroupWord::from_letters([(1, 3), (0, 1)]);
        assert_eq!(g.evaluate(&u.mul(&v)), &g.evaluate(&u) * &g.evaluate(&v));
        assert!(g.is_identity(&u.mul(&u.inverse())));
        assert!(g.check_word(&GroupWord::generator(5)).is_err());
    }

    #[test]
    fn ball_sizes_in_free_abelian_rank_one() {
        let z = MatrixGroup::new(vec![ElementaryMatrix::new(2, 0, 1, int(1))
            .unwrap()
            .realize()])
        .unwrap();
        assert_eq!(z.ball(4).len(), 9);
    }
}
