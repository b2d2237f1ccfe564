//! The six unipotent generators of `SL(3, Z)` around the hexagon of roots,
//! and a pipeline that turns any sign oracle on them into a certificate.
//!
//! Each center `a_i` with neighbors `a_{i-1}`, `a_{i+1}` is a Heisenberg
//! configuration, so every triple yields a certificate or at least one branch
//! `a_i << a_j`. Each branch carries a concrete oracle fact (`z < x` for the
//! positive forms), and six nodes with an out-edge each always contain a
//! directed cycle; multiplying the facts around it gives a product of
//! negative elements equal to `e`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::certificate::{Violation, ViolationCertificate};
use super::heisenberg::{
    heisenberg_contradiction, BranchFact, HeisenbergError, HeisenbergOutcome, HeisenbergTriple,
};
use super::oracle::{OrderOracle, Sign};
use super::session::{OracleSession, QueryError};
use crate::exact::rational::int;
use crate::exact::{ElementaryMatrix, GroupWord, MatrixGroup, MatrixJson, SpecialLinearElement};

/// Zero-based `(row, column)` of the nonzero off-diagonal entry of `a_1 .. a_6`.
pub const WITTE_POSITIONS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitteError {
    #[error("k must be positive")]
    NonPositiveK,
    #[error("relation fails at index {index}: {detail}")]
    Relation { index: usize, detail: String },
    #[error("oracle generators are not the six matrices for k = {0}")]
    WrongGenerators(i64),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
}

/// `[a_i, a_{i+1}] = e` and `[a_{i-1}, a_{i+1}] = a_i^(sign * k)`; indices
/// are zero-based and read mod 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitteRelation {
    pub index: usize,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitteSystem {
    k: i64,
    group: MatrixGroup,
    relations: Vec<WitteRelation>,
}

pub fn witte_generators(k: i64) -> Vec<SpecialLinearElement> {
    WITTE_POSITIONS
        .iter()
        .map(|&(i, j)| {
            ElementaryMatrix::new(3, i, j, int(k))
                .expect("valid position")
                .realize()
        })
        .collect()
}

impl WitteSystem {
    /// Builds the generators and verifies every relation by multiplication.
    pub fn new(k: i64) -> Result<Self, WitteError> {
        if k <= 0 {
            return Err(WitteError::NonPositiveK);
        }
        let gens = witte_generators(k);
        let mut relations = Vec::with_capacity(6);
        for i in 0..6 {
            let prev = &gens[(i + 5) % 6];
            let next = &gens[(i + 1) % 6];
            let comm = |x: &SpecialLinearElement, y: &SpecialLinearElement| {
                SpecialLinearElement::commutator(x, y).expect("3x3")
            };
            if !comm(&gens[i], next).is_identity() {
                return Err(WitteError::Relation {
                    index: i,
                    detail: "neighbors do not commute".into(),
                });
            }
            let c = comm(prev, next);
            let sign = if c == gens[i].pow(k) {
                1
            } else if c == gens[i].pow(-k) {
                -1
            } else {
                return Err(WitteError::Relation {
                    index: i,
                    detail: "outer commutator is not a power of the center".into(),
                });
            };
            relations.push(WitteRelation { index: i, sign });
        }
        let group = MatrixGroup::new(gens).expect("six 3x3 generators");
        Ok(WitteSystem {
            k,
            group,
            relations,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn relations(&self) -> &[WitteRelation] {
        &self.relations
    }

    /// Triple centered at `a_i`: `(a_{i-1}, a_{i+1}, a_i)` with exponent `±k`.
    pub fn triple(&self, i: usize) -> HeisenbergTriple {
        let rel = self.relations[i];
        HeisenbergTriple::new(
            &self.group,
            GroupWord::generator((i + 5) % 6),
            GroupWord::generator((i + 1) % 6),
            GroupWord::generator(i),
            rel.sign * self.k,
        )
        .expect("relations verified on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleStatus {
    Certificate,
    Left,
    Right,
    Both,
    Inconclusive,
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitteOutcome {
    Certificate(Box<ViolationCertificate>),
    Inconclusive {
        bound: u64,
        frontier: Vec<GroupWord>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitteReport {
    pub k: i64,
    pub witness_bound: u64,
    pub outcome: WitteOutcome,
    /// One entry per center `a_1 .. a_6`.
    pub triples: Vec<TripleStatus>,
    /// `(i, j)` for each found branch `a_i << a_j`, zero-based.
    pub branches: Vec<(usize, usize)>,
    /// Centers of the cycle used for the final certificate, if any.
    pub cycle: Vec<usize>,
    pub queries: usize,
}

impl WitteReport {
    pub fn certificate(&self) -> Option<&ViolationCertificate> {
        match &self.outcome {
            WitteOutcome::Certificate(c) => Some(c),
            WitteOutcome::Inconclusive { .. } => None,
        }
    }
}

fn find_cycle(edges: &[Vec<(usize, BranchFact)>; 6]) -> Option<Vec<usize>> {
    for start in 0..6 {
        // Iterative DFS with the current path on a stack.
        let mut path = vec![start];
        let mut next_edge = vec![0usize];
        while let Some(&node) = path.last() {
            let e = next_edge.last_mut().expect("parallel stacks");
            if *e >= edges[node].len() {
                path.pop();
                next_edge.pop();
                continue;
            }
            let target = edges[node][*e].0;
            *e += 1;
            if let Some(pos) = path.iter().position(|&n| n == target) {
                return Some(path[pos..].to_vec());
            }
            if path.len() < 6 {
                path.push(target);
                next_edge.push(0);
            }
        }
    }
    None
}

/// Refutes `oracle` on the six generators for parameter `k`.
pub fn witte_pipeline<O: OrderOracle>(
    k: i64,
    oracle: O,
    witness_bound: u64,
) -> Result<WitteReport, WitteError> {
    let system = WitteSystem::new(k)?;
    if oracle.group().generators() != system.group().generators() {
        return Err(WitteError::WrongGenerators(k));
    }
    let mut session = OracleSession::new(oracle);
    let mut report = WitteReport {
        k,
        witness_bound,
        outcome: WitteOutcome::Inconclusive {
            bound: witness_bound,
            frontier: Vec::new(),
        },
        triples: vec![TripleStatus::Skipped; 6],
        branches: Vec::new(),
        cycle: Vec::new(),
        queries: 0,
    };
    let finish = |mut report: WitteReport,
                  session: &OracleSession<O>,
                  outcome: WitteOutcome|
     -> Result<WitteReport, WitteError> {
        report.outcome = outcome;
        report.queries = session.transcript().len() + session.frontier().len();
        Ok(report)
    };

    // Commuting neighbors give two words for one element.
    for i in 0..6 {
        let (x, y) = (GroupWord::generator(i), GroupWord::generator((i + 1) % 6));
        for w in [x.mul(&y), y.mul(&x)] {
            match session.query(&w) {
                Err(QueryError::Violation(cert)) => {
                    return finish(report, &session, WitteOutcome::Certificate(cert));
                }
                Err(QueryError::Rejected(w, e)) => {
                    return Err(HeisenbergError::Oracle(format!("{w}: {e}")).into());
                }
                _ => {}
            }
        }
    }

    let mut edges: [Vec<(usize, BranchFact)>; 6] = Default::default();
    for i in 0..6 {
        let triple = system.triple(i);
        let (prev, next) = ((i + 5) % 6, (i + 1) % 6);
        match heisenberg_contradiction(&triple, &mut session, witness_bound)? {
            HeisenbergOutcome::Certificate(cert) => {
                report.triples[i] = TripleStatus::Certificate;
                return finish(report, &session, WitteOutcome::Certificate(cert));
            }
            HeisenbergOutcome::LeftBranch(f) => {
                report.triples[i] = TripleStatus::Left;
                edges[i].push((prev, f));
            }
            HeisenbergOutcome::RightBranch(f) => {
                report.triples[i] = TripleStatus::Right;
                edges[i].push((next, f));
            }
            HeisenbergOutcome::BothBranches { left, right } => {
                report.triples[i] = TripleStatus::Both;
                edges[i].push((next, right));
                edges[i].push((prev, left));
            }
            HeisenbergOutcome::Inconclusive { .. } => {
                report.triples[i] = TripleStatus::Inconclusive;
            }
        }
    }
    report.branches = edges
        .iter()
        .enumerate()
        .flat_map(|(i, es)| es.iter().map(move |(j, _)| (i, *j)))
        .collect();

    let Some(cycle) = find_cycle(&edges) else {
        let frontier = session.frontier().to_vec();
        return finish(
            report,
            &session,
            WitteOutcome::Inconclusive {
                bound: witness_bound,
                frontier,
            },
        );
    };

    // Along c_1 -> c_2 -> ... -> c_r -> c_1 each fact n_t satisfies
    // y_t = y_{t+1} n_t, hence n_r ... n_1 = e.
    let mut factors = Vec::new();
    for t in (0..cycle.len()).rev() {
        let from = cycle[t];
        let to = cycle[(t + 1) % cycle.len()];
        let fact = &edges[from]
            .iter()
            .find(|(j, _)| *j == to)
            .expect("cycle follows edges")
            .1;
        factors.extend(fact.factors.iter().cloned());
    }
    let target = GroupWord::identity();
    let answer = match session.query(&target) {
        Ok(s) => s,
        Err(QueryError::Violation(cert)) => {
            return finish(report, &session, WitteOutcome::Certificate(cert))
        }
        Err(QueryError::Undecided(..)) => {
            let frontier = session.frontier().to_vec();
            return finish(
                report,
                &session,
                WitteOutcome::Inconclusive {
                    bound: witness_bound,
                    frontier,
                },
            );
        }
        Err(QueryError::Rejected(w, e)) => {
            return Err(HeisenbergError::Oracle(format!("{w}: {e}")).into())
        }
    };
    let cert = session.certificate(Violation::EvaluatedIdentityContradiction {
        factors,
        required: Sign::Negative,
        target,
        evaluation: MatrixJson::from_matrix(SpecialLinearElement::identity(3).matrix()),
        answer,
    });
    report.cycle = cycle;
    finish(report, &session, WitteOutcome::Certificate(Box::new(cert)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_signs_for_small_k() {
        for k in 1..=5 {
            let s = WitteSystem::new(k).unwrap();
            assert_eq!(s.relations().len(), 6);
        }
        assert!(WitteSystem::new(0).is_err());
    }

    #[test]
    fn cycle_finder_prefers_any_cycle() {
        let fact = BranchFact {
            smaller: GroupWord::identity(),
            larger: GroupWord::identity(),
            factors: Vec::new(),
        };
        let mut edges: [Vec<(usize, BranchFact)>; 6] = Default::default();
        for i in 0..6 {
            edges[i].push(((i + 1) % 6, fact.clone()));
        }
        assert_eq!(find_cycle(&edges).unwrap().len(), 6);
        let mut edges: [Vec<(usize, BranchFact)>; 6] = Default::default();
        edges[2].push((3, fact.clone()));
        edges[3].push((2, fact.clone()));
        assert_eq!(find_cycle(&edges).unwrap(), vec![2, 3]);
        let edges: [Vec<(usize, BranchFact)>; 6] = Default::default();
        assert!(find_cycle(&edges).is_none());
    }
}
