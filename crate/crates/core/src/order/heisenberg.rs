//! Bounded-witness refutation for a Heisenberg configuration
//! `[a, b] = z^k`, `[a, z] = [b, z] = e`.
//!
//! After making `a, b, z` positive and `k > 0`, the search looks for
//! `a < z^p` and `b < z^q` with `p, q <= bound`. With both in hand,
//! `m = p + q + 1` gives
//!
//! ```text
//! (b^-1 z^q)^m (a^-1 z^p)^m b^m a^m = z^(-k m^2 + (p+q) m)
//! ```
//!
//! a product of positive elements equal to a negative power of the positive
//! element `z`. A missing witness is the branch `z << a` (or `z << b`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::certificate::{Factor, Normalization, Violation, ViolationCertificate};
use super::oracle::{OrderOracle, Sign};
use super::session::{OracleSession, QueryError};
use crate::exact::{GroupError, GroupWord, MatrixGroup, MatrixJson, SpecialLinearElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("not a Heisenberg configuration: {0}")]
    NotHeisenberg(String),
    #[error("witness bound must be at least 1")]
    ZeroBound,
    #[error("oracle rejected a query: {0}")]
    Oracle(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergTriple {
    pub a: GroupWord,
    pub b: GroupWord,
    pub z: GroupWord,
    pub k: i64,
}

impl HeisenbergTriple {
    /// Checks `[a,z] = [b,z] = e`, `[a,b] = z^k`, `k != 0` exactly.
    pub fn new(
        group: &MatrixGroup,
        a: GroupWord,
        b: GroupWord,
        z: GroupWord,
        k: i64,
    ) -> Result<Self, HeisenbergError> {
        for w in [&a, &b, &z] {
            group.check_word(w)?;
        }
        if k == 0 {
            return Err(HeisenbergError::NotHeisenberg("k = 0".into()));
        }
        let (av, bv, zv) = (group.evaluate(&a), group.evaluate(&b), group.evaluate(&z));
        let comm = |x: &SpecialLinearElement, y: &SpecialLinearElement| {
            SpecialLinearElement::commutator(x, y).expect("same dimension")
        };
        if !comm(&av, &zv).is_identity() || !comm(&bv, &zv).is_identity() {
            return Err(HeisenbergError::NotHeisenberg(
                "z is not central in <a, b, z>".into(),
            ));
        }
        if comm(&av, &bv) != zv.pow(k) {
            return Err(HeisenbergError::NotHeisenberg(format!("[a, b] != z^{k}")));
        }
        Ok(HeisenbergTriple { a, b, z, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    pub p: u64,
    pub q: u64,
    pub m: u64,
    pub k: i64,
}

impl ObstructionWitness {
    pub fn from_witnesses(p: u64, q: u64, k: i64) -> Self {
        ObstructionWitness {
            p,
            q,
            m: p + q + 1,
            k,
        }
    }

    /// `-k m^2 + (p + q) m`, negative whenever `k >= 1` and `m > p + q`.
    pub fn exponent(&self) -> i64 {
        let m = self.m as i64;
        -self.k * m * m + (self.p + self.q) as i64 * m
    }
}

/// One surviving branch `z << x`, witnessed by the oracle-negative factors
/// below. Their ordered product is `larger^-1 smaller`, where `smaller` and
/// `larger` are the oracle-positive forms of `z` and `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchFact {
    pub smaller: GroupWord,
    pub larger: GroupWord,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HeisenbergOutcome {
    Certificate(Box<ViolationCertificate>),
    /// `z << a` up to the bound.
    LeftBranch(BranchFact),
    /// `z << b` up to the bound.
    RightBranch(BranchFact),
    /// No witness on either side.
    BothBranches {
        left: BranchFact,
        right: BranchFact,
    },
    /// Some query needed for a decision was declined.
    Inconclusive {
        frontier: Vec<GroupWord>,
    },
}

enum Step<T> {
    Done(T),
    Stop(HeisenbergOutcome),
}

fn lift<T, O: OrderOracle>(
    session: &OracleSession<O>,
    result: Result<T, QueryError>,
    normalization: Option<&Normalization>,
) -> Result<Step<T>, HeisenbergError> {
    match result {
        Ok(v) => Ok(Step::Done(v)),
        Err(QueryError::Violation(mut cert)) => {
            cert.normalization = normalization.cloned();
            Ok(Step::Stop(HeisenbergOutcome::Certificate(cert)))
        }
        Err(QueryError::Undecided(..)) => Ok(Step::Stop(HeisenbergOutcome::Inconclusive {
            frontier: session.frontier().to_vec(),
        })),
        Err(QueryError::Rejected(w, e)) => Err(HeisenbergError::Oracle(format!("{w}: {e}"))),
    }
}

macro_rules! step {
    ($session:ident, $e:expr, $norm:expr) => {{
        let result = $e;
        match lift(&*$session, result, $norm)? {
            Step::Done(v) => v,
            Step::Stop(outcome) => return Ok(outcome),
        }
    }};
}

/// Positive form of `x`, querying both `x` and `x^-1`.
fn positive_form<O: OrderOracle>(
    session: &mut OracleSession<O>,
    x: &GroupWord,
) -> Result<(GroupWord, bool), QueryError> {
    let s = session.query(x)?;
    // The session raises a partition failure if both answers agree.
    session.query(&x.inverse())?;
    Ok(if s == Sign::Positive {
        (x.clone(), false)
    } else {
        (x.inverse(), true)
    })
}

struct Search {
    witness: Option<u64>,
    first_negative: Option<(u64, GroupWord)>,
}

/// Scans `x^-1 z^p` for `p = 1..=bound`, stopping at the first positive.
fn search_witness<O: OrderOracle>(
    session: &mut OracleSession<O>,
    x: &GroupWord,
    z: &GroupWord,
    bound: u64,
) -> Result<Search, QueryError> {
    let mut out = Search {
        witness: None,
        first_negative: None,
    };
    for p in 1..=bound {
        let w = x.inverse().mul(&z.pow(p as i64));
        match session.query(&w) {
            Ok(Sign::Positive) => {
                out.witness = Some(p);
                break;
            }
            Ok(_) => {
                if out.first_negative.is_none() {
                    out.first_negative = Some((p, w));
                }
            }
            Err(QueryError::Undecided(..)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn branch_fact(smaller: &GroupWord, larger: &GroupWord, p: u64, negative: GroupWord) -> BranchFact {
    // x^-1 z = (x^-1 z^p) (z^-1)^(p-1)
    let mut factors = vec![Factor {
        word: negative,
        repeat: 1,
    }];
    if p > 1 {
        factors.push(Factor {
            word: smaller.inverse(),
            repeat: p - 1,
        });
    }
    BranchFact {
        smaller: smaller.clone(),
        larger: larger.clone(),
        factors,
    }
}

pub fn heisenberg_contradiction<O: OrderOracle>(
    triple: &HeisenbergTriple,
    session: &mut OracleSession<O>,
    witness_bound: u64,
) -> Result<HeisenbergOutcome, HeisenbergError> {
    if witness_bound == 0 {
        return Err(HeisenbergError::ZeroBound);
    }
    let (a, inv_a) = step!(session, positive_form(session, &triple.a), None);
    let (b, inv_b) = step!(session, positive_form(session, &triple.b), None);
    let (z, inv_z) = step!(session, positive_form(session, &triple.z), None);
    let flips = [inv_a, inv_b, inv_z].iter().filter(|&&f| f).count();
    let k_signed = if flips % 2 == 0 { triple.k } else { -triple.k };
    let swapped = k_signed < 0;
    let normalization = Normalization {
        inverted_a: inv_a,
        inverted_b: inv_b,
        inverted_z: inv_z,
        swapped,
        k: k_signed.abs(),
    };
    let norm = Some(&normalization);
    let k = normalization.k;
    let (first, second) = if swapped { (&b, &a) } else { (&a, &b) };

    let sa = step!(
        session,
        search_witness(session, first, &z, witness_bound),
        norm
    );
    let sb = step!(
        session,
        search_witness(session, second, &z, witness_bound),
        norm
    );

    let (p, q) = match (sa.witness, sb.witness) {
        (Some(p), Some(q)) => (p, q),
        _ => {
            let fact = |s: Search, x: &GroupWord| {
                s.first_negative
                    .map(|(p, w)| branch_fact(&z, x, p, w))
                    .filter(|_| s.witness.is_none())
            };
            let f1 = fact(sa, first);
            let f2 = fact(sb, second);
            // Undo the swap so that "left" always refers to the caller's `a`.
            let (left, right) = if swapped { (f2, f1) } else { (f1, f2) };
            let frontier = session.frontier().to_vec();
            return Ok(match (left, right) {
                (Some(l), Some(r)) => HeisenbergOutcome::BothBranches { left: l, right: r },
                (Some(l), None) => HeisenbergOutcome::LeftBranch(l),
                (None, Some(r)) => HeisenbergOutcome::RightBranch(r),
                _ => HeisenbergOutcome::Inconclusive { frontier },
            });
        }
    };

    let witness = ObstructionWitness::from_witnesses(p, q, k);
    let m = witness.m;
    let e = witness.exponent();
    debug_assert!(e < 0);
    let factors = vec![
        Factor {
            word: second.inverse().mul(&z.pow(q as i64)),
            repeat: m,
        },
        Factor {
            word: first.inverse().mul(&z.pow(p as i64)),
            repeat: m,
        },
        Factor {
            word: second.clone(),
            repeat: m,
        },
        Factor {
            word: first.clone(),
            repeat: m,
        },
    ];
    let target = z.pow(e);
    let value = session.group().evaluate(&target);
    let answer = step!(session, session.query(&target), norm);
    let finish = |mut cert: ViolationCertificate| {
        cert.normalization = Some(normalization.clone());
        cert.witness = Some(witness);
        Ok(HeisenbergOutcome::Certificate(Box::new(cert)))
    };
    if answer != Sign::Positive {
        let cert = session.certificate(Violation::EvaluatedIdentityContradiction {
            factors,
            required: Sign::Positive,
            target,
            evaluation: MatrixJson::from_matrix(value.matrix()),
            answer,
        });
        return finish(cert);
    }

    // z^e is positive with e < 0 while z is positive: walking z^e, z^(e+1),
    // ... up to z^-1 (known negative) must break closure somewhere.
    let mut previous = target;
    for t in (1..-e).rev() {
        let w = z.pow(-t);
        let s = step!(session, session.query(&w), norm);
        if s != Sign::Positive {
            let cert = session.certificate(Violation::ClosureViolation {
                left: previous,
                right: z.clone(),
                product: w,
            });
            return finish(cert);
        }
        previous = w;
    }
    unreachable!("z^-1 was answered negative during normalization")
}

/// Runs the procedure in a fresh session.
pub fn heisenberg_contradiction_with<O: OrderOracle>(
    triple: &HeisenbergTriple,
    oracle: O,
    witness_bound: u64,
) -> Result<HeisenbergOutcome, HeisenbergError> {
    let mut session = OracleSession::new(oracle);
    heisenberg_contradiction(triple, &mut session, witness_bound)
}
