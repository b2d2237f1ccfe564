//! Positive cones and the two translations between cones and orders.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::certificate::{Violation, ViolationCertificate};
use super::oracle::{OracleError, OrderOracle, Sign};
use super::session::{OracleSession, QueryError};
use crate::exact::rational::int;
use crate::exact::{
    ElementaryMatrix, GroupError, GroupWord, MatrixGroup, MatrixJson, SpecialLinearElement,
    SquareMatrix,
};

/// Membership predicate for a candidate positive cone `P`.
pub trait PositiveCone {
    fn group(&self) -> &MatrixGroup;
    fn contains(&self, word: &GroupWord) -> bool;
    /// Explicit finite support, when the cone is finite.
    fn support(&self) -> Option<Vec<GroupWord>> {
        None
    }
}

impl<C: PositiveCone + ?Sized> PositiveCone for &C {
    fn group(&self) -> &MatrixGroup {
        (**self).group()
    }
    fn contains(&self, word: &GroupWord) -> bool {
        (**self).contains(word)
    }
    fn support(&self) -> Option<Vec<GroupWord>> {
        (**self).support()
    }
}

/// Cone given by a predicate on matrix values; never contains `e`.
pub struct PredicateCone<F> {
    group: MatrixGroup,
    predicate: F,
}

impl<F: Fn(&SpecialLinearElement) -> bool> PredicateCone<F> {
    pub fn new(group: MatrixGroup, predicate: F) -> Self {
        PredicateCone { group, predicate }
    }
}

impl<F: Fn(&SpecialLinearElement) -> bool> PositiveCone for PredicateCone<F> {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }
    fn contains(&self, word: &GroupWord) -> bool {
        let m = self.group.evaluate(word);
        !m.is_identity() && (self.predicate)(&m)
    }
}

/// Membership decided on the word itself rather than its value. Useful for
/// fixtures that are deliberately not cones.
pub struct WordPredicateCone<F> {
    group: MatrixGroup,
    predicate: F,
}

impl<F: Fn(&GroupWord) -> bool> WordPredicateCone<F> {
    pub fn new(group: MatrixGroup, predicate: F) -> Self {
        WordPredicateCone { group, predicate }
    }
}

impl<F: Fn(&GroupWord) -> bool> PositiveCone for WordPredicateCone<F> {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }
    fn contains(&self, word: &GroupWord) -> bool {
        (self.predicate)(word)
    }
}

/// Finite explicit cone.
pub struct FiniteCone {
    group: MatrixGroup,
    members: Vec<GroupWord>,
    values: HashMap<SquareMatrix, ()>,
}

impl FiniteCone {
    pub fn new(group: MatrixGroup, members: Vec<GroupWord>) -> Self {
        let values = members
            .iter()
            .map(|w| (group.evaluate(w).into_matrix(), ()))
            .collect();
        FiniteCone {
            group,
            members,
            values,
        }
    }
}

impl PositiveCone for FiniteCone {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }
    fn contains(&self, word: &GroupWord) -> bool {
        self.values.contains_key(self.group.evaluate(word).matrix())
    }
    fn support(&self) -> Option<Vec<GroupWord>> {
        Some(self.members.clone())
    }
}

/// Sign of `m - I` read at `positions` in order: the first nonzero entry.
pub fn lex_sign(m: &SquareMatrix, positions: &[(usize, usize)]) -> Sign {
    for &(r, c) in positions {
        let mut v = m.get(r, c).clone();
        if r == c {
            v -= int(1);
        }
        if !v.is_zero() {
            return if v.is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            };
        }
    }
    Sign::Identity
}

/// Lexicographic cone on chosen matrix entries (zero-based positions).
pub struct LexCone {
    group: MatrixGroup,
    positions: Vec<(usize, usize)>,
    reversed: bool,
}

impl LexCone {
    pub fn new(group: MatrixGroup, positions: Vec<(usize, usize)>) -> Self {
        LexCone {
            group,
            positions,
            reversed: false,
        }
    }

    /// The opposite cone `P^-1`.
    pub fn reversed(mut self) -> Self {
        self.reversed = !self.reversed;
        self
    }
}

impl PositiveCone for LexCone {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }
    fn contains(&self, word: &GroupWord) -> bool {
        let want = if self.reversed {
            Sign::Negative
        } else {
            Sign::Positive
        };
        lex_sign(self.group.evaluate(word).matrix(), &self.positions) == want
    }
}

/// `P = { w : sign(w) = Positive }` for an order oracle. Declined queries
/// count as non-members.
pub struct OrderCone<O> {
    group: MatrixGroup,
    oracle: RefCell<O>,
}

pub fn cone_from_order<O: OrderOracle>(oracle: O) -> OrderCone<O> {
    OrderCone {
        group: oracle.group().clone(),
        oracle: RefCell::new(oracle),
    }
}

impl<O: OrderOracle> OrderCone<O> {
    pub fn into_oracle(self) -> O {
        self.oracle.into_inner()
    }
}

impl<O: OrderOracle> PositiveCone for OrderCone<O> {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }
    fn contains(&self, word: &GroupWord) -> bool {
        self.oracle.borrow_mut().sign(word) == Ok(Sign::Positive)
    }
}

/// The order whose positive elements are the cone: `a < b` iff `b^-1 a` lies
/// in `P^-1`.
pub struct ConeOracle<C> {
    cone: C,
}

pub fn order_from_cone<C: PositiveCone>(cone: C) -> ConeOracle<C> {
    ConeOracle { cone }
}

impl<C: PositiveCone> OrderOracle for ConeOracle<C> {
    fn group(&self) -> &MatrixGroup {
        self.cone.group()
    }

    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError> {
        let is_e = self.cone.group().is_identity(word);
        let pos = self.cone.contains(word);
        let neg = self.cone.contains(&word.inverse());
        match (is_e, pos, neg) {
            (true, false, false) => Ok(Sign::Identity),
            (false, true, false) => Ok(Sign::Positive),
            (false, false, true) => Ok(Sign::Negative),
            _ => Err(OracleError::Partition(word.clone())),
        }
    }
}

/// Reports raw membership as a sign without any consistency check:
/// members are positive, `e` is identity, everything else is negative.
/// Partition failures then surface as inverse pairs with equal signs.
pub struct MembershipOracle<C> {
    cone: C,
}

impl<C: PositiveCone> MembershipOracle<C> {
    pub fn new(cone: C) -> Self {
        MembershipOracle { cone }
    }
}

impl<C: PositiveCone> OrderOracle for MembershipOracle<C> {
    fn group(&self) -> &MatrixGroup {
        self.cone.group()
    }

    fn sign(&mut self, word: &GroupWord) -> Result<Sign, OracleError> {
        Ok(if self.cone.contains(word) {
            Sign::Positive
        } else if self.cone.group().is_identity(word) {
            Sign::Identity
        } else {
            Sign::Negative
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeCheckError {
    #[error("ball must contain the identity")]
    MissingIdentity,
    #[error("ball is not closed under inversion at {0}")]
    NotSymmetric(GroupWord),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConeReport {
    pub elements_checked: usize,
    pub positive_elements: usize,
    pub products_checked: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConeCheck {
    Pass(ConeReport),
    Violation(Box<ViolationCertificate>),
}

/// Checks the partition and closure axioms on a finite ball of words.
pub fn check_cone_axioms<C: PositiveCone>(
    cone: C,
    ball: &[GroupWord],
) -> Result<ConeCheck, ConeCheckError> {
    let group = cone.group().clone();
    let mut index: HashMap<SquareMatrix, usize> = HashMap::new();
    let mut values = Vec::with_capacity(ball.len());
    for (i, w) in ball.iter().enumerate() {
        group.check_word(w)?;
        let v = group.evaluate(w);
        index.entry(v.matrix().clone()).or_insert(i);
        values.push(v);
    }
    if !values.iter().any(|v| v.is_identity()) {
        return Err(ConeCheckError::MissingIdentity);
    }
    for (w, v) in ball.iter().zip(&values) {
        if !index.contains_key(v.inverse().matrix()) {
            return Err(ConeCheckError::NotSymmetric(w.clone()));
        }
    }

    let mut session = OracleSession::new(MembershipOracle::new(cone));
    let mut positives = Vec::new();
    for (i, w) in ball.iter().enumerate() {
        for q in [w.clone(), w.inverse()] {
            match session.query(&q) {
                Ok(_) => {}
                Err(QueryError::Violation(cert)) => return Ok(ConeCheck::Violation(cert)),
                Err(e) => unreachable!("membership oracle always answers: {e}"),
            }
        }
        if session.query(w) == Ok(Sign::Positive) {
            positives.push(i);
        }
    }

    let mut products = 0usize;
    for &i in &positives {
        for &j in &positives {
            let prod = &values[i] * &values[j];
            let Some(&k) = index.get(prod.matrix()) else {
                continue;
            };
            products += 1;
            let s = session.query(&ball[k]).expect("already answered");
            if s != Sign::Positive {
                let cert = session.certificate(Violation::ClosureViolation {
                    left: ball[i].clone(),
                    right: ball[j].clone(),
                    product: ball[k].clone(),
                });
                return Ok(ConeCheck::Violation(Box::new(cert)));
            }
        }
    }
    Ok(ConeCheck::Pass(ConeReport {
        elements_checked: ball.len(),
        positive_elements: positives.len(),
        products_checked: products,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRule {
    pub word: GroupWord,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DefaultRule {
    Named(Sign),
    /// One-based `(row, column)` positions.
    Lex {
        lex: Vec<(usize, usize)>,
    },
}

/// Cone file: optional generators, explicit word rules, and a default rule
/// for every element not covered by a rule or the inverse of one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<MatrixJson>>,
    #[serde(default)]
    pub rules: Vec<ConeRule>,
    pub default: DefaultRule,
}

#[derive(Debug, Error)]
pub enum ConeFileError {
    #[error("cone file names no generators and none were supplied")]
    NoGenerators,
    #[error("generator {index}: {message}")]
    Generator { index: usize, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("lex position ({0}, {1}) is outside the matrix")]
    BadPosition(usize, usize),
}

pub struct RuleCone {
    group: MatrixGroup,
    rules: HashMap<SquareMatrix, Sign>,
    default: RuleDefault,
}

enum RuleDefault {
    Sign(Sign),
    Lex(Vec<(usize, usize)>),
}

impl RuleCone {
    /// Uses the file's generators if present, otherwise `fallback`.
    pub fn from_file(
        file: &ConeFile,
        fallback: Option<&MatrixGroup>,
    ) -> Result<Self, ConeFileError> {
        let group = match (&file.generators, fallback) {
            (Some(gens), _) => {
                let elems = gens
                    .iter()
                    .enumerate()
                    .map(|(index, g)| {
                        g.to_special_linear().map_err(|e| ConeFileError::Generator {
                            index,
                            message: e.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                MatrixGroup::new(elems)?
            }
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(ConeFileError::NoGenerators),
        };
        let mut rules = HashMap::new();
        for r in &file.rules {
            group.check_word(&r.word)?;
            rules
                .entry(group.evaluate(&r.word).into_matrix())
                .or_insert(r.sign);
        }
        let default = match &file.default {
            DefaultRule::Named(s) => RuleDefault::Sign(*s),
            DefaultRule::Lex { lex } => {
                let n = group.n();
                let mut positions = Vec::new();
                for &(r, c) in lex {
                    if r == 0 || c == 0 || r > n || c > n {
                        return Err(ConeFileError::BadPosition(r, c));
                    }
                    positions.push((r - 1, c - 1));
                }
                RuleDefault::Lex(positions)
            }
        };
        Ok(RuleCone {
            group,
            rules,
            default,
        })
    }
}

impl PositiveCone for RuleCone {
    fn group(&self) -> &MatrixGroup {
        &self.group
    }

    fn contains(&self, word: &GroupWord) -> bool {
        let m = self.group.evaluate(word);
        if let Some(s) = self.rules.get(m.matrix()) {
            return *s == Sign::Positive;
        }
        if let Some(s) = self.rules.get(m.inverse().matrix()) {
            return *s == Sign::Negative;
        }
        if m.is_identity() {
            return false;
        }
        match &self.default {
            RuleDefault::Sign(s) => *s == Sign::Positive,
            RuleDefault::Lex(p) => lex_sign(m.matrix(), p) == Sign::Positive,
        }
    }
}

/// `Z` as `<E12(1)>` in `SL(2)`.
pub fn integers_group() -> MatrixGroup {
    MatrixGroup::new(vec![ElementaryMatrix::new(2, 0, 1, int(1))
        .expect("2x2")
        .realize()])
    .expect("one generator")
}

/// `Z^2` as `<E12(1), E13(1)>` in `SL(3)`.
pub fn z2_group() -> MatrixGroup {
    MatrixGroup::new(vec![
        ElementaryMatrix::new(3, 0, 1, int(1))
            .expect("3x3")
            .realize(),
        ElementaryMatrix::new(3, 0, 2, int(1))
            .expect("3x3")
            .realize(),
    ])
    .expect("two generators")
}

/// Integer Heisenberg group `<E12(1), E23(1)>`; the center is `E13`.
pub fn heisenberg_group() -> MatrixGroup {
    MatrixGroup::new(vec![
        ElementaryMatrix::new(3, 0, 1, int(1))
            .expect("3x3")
            .realize(),
        ElementaryMatrix::new(3, 1, 2, int(1))
            .expect("3x3")
            .realize(),
        ElementaryMatrix::new(3, 0, 2, int(1))
            .expect("3x3")
            .realize(),
    ])
    .expect("three generators")
}

/// Standard cone on `Z`: `g^n` with `n >= 1`, or `n <= -1` when reversed.
pub fn integer_cone(reversed: bool) -> LexCone {
    let cone = LexCone::new(integers_group(), vec![(0, 1)]);
    if reversed {
        cone.reversed()
    } else {
        cone
    }
}
