//! Bounded search for `φ` with `δφ = z` on a ball, and the fixed point that a
//! bounded `φ` produces through the corrected lifts `γ̂ = γ̃ - φ(γ)`.

use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ball::ActionBall;
use super::cochain::BoundedCochain;
use super::euler::EulerCocycleTable;
use super::pl::{CirclePoint, PlCircleHomeo};
use super::CircleMap;
use crate::exact::rational::{floor_int, Rational};

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoboundaryError {
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("phi bound must be nonnegative")]
    NegativeBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchVerdict {
    /// A bounded `φ` with `δφ = z` on every pair with product in the ball.
    Found,
    /// No `φ` within the bound on this ball; says nothing about larger bounds
    /// or balls.
    NoneWithinBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoboundarySearch {
    pub verdict: SearchVerdict,
    pub phi: Option<BoundedCochain>,
    pub table: EulerCocycleTable,
    pub constraints: usize,
    pub nodes: u64,
}

/// `Σ coeff · φ(var) = rhs`, with vars merged.
#[derive(Debug, Clone)]
struct Constraint {
    terms: Vec<(usize, i64)>,
    rhs: i64,
    last: usize,
}

fn constraints_for(table: &EulerCocycleTable) -> Vec<Constraint> {
    let n = table.len();
    let mut out = Vec::new();
    for g in 0..n {
        for h in 0..n {
            let Some(gh) = table.products[g][h] else {
                continue;
            };
            // φ(h) - φ(gh) + φ(g) = z(g, h).
            let mut terms: Vec<(usize, i64)> = Vec::new();
            for (v, c) in [(h, 1), (gh, -1), (g, 1)] {
                match terms.iter_mut().find(|t| t.0 == v) {
                    Some(t) => t.1 += c,
                    None => terms.push((v, c)),
                }
            }
            terms.retain(|t| t.1 != 0);
            let last = terms.iter().map(|t| t.0).max().unwrap_or(0);
            out.push(Constraint {
                terms,
                rhs: table.get(g, h) as i64,
                last,
            });
        }
    }
    out
}

/// Exhaustive backtracking over `φ: ball → [-bound, bound]`, trying values
/// in the order `0, 1, -1, 2, ...`. Each constraint is checked as soon as its
/// last variable is assigned, and a constraint with one free variable fixes
/// its value.
pub fn coboundary_search<M: CircleMap>(
    ball: &ActionBall<M>,
    phi_bound: i64,
    budget: u64,
) -> Result<CoboundarySearch, CoboundaryError> {
    if phi_bound < 0 {
        return Err(CoboundaryError::NegativeBound);
    }
    let table = EulerCocycleTable::from_ball(ball);
    let cons = constraints_for(&table);
    let n = table.len();
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in cons.iter().enumerate() {
        by_last[c.last].push(i);
    }
    let mut candidates = vec![0i64];
    for v in 1..=phi_bound {
        candidates.push(v);
        candidates.push(-v);
    }

    let mut assignment = vec![0i64; n];
    let mut nodes = 0u64;
    // Explicit stack of candidate positions per variable.
    let mut pos = vec![0usize; n];
    let mut var = 0usize;
    let found = loop {
        if var == n {
            break true;
        }
        // Forced value from constraints whose other variables are set.
        let mut forced: Option<Option<i64>> = None;
        for &ci in &by_last[var] {
            let c = &cons[ci];
            let own: i64 = c.terms.iter().filter(|t| t.0 == var).map(|t| t.1).sum();
            let rest: i64 = c
                .terms
                .iter()
                .filter(|t| t.0 != var)
                .map(|t| t.1 * assignment[t.0])
                .sum();
            let need = c.rhs - rest;
            let value = if need % own == 0 {
                Some(need / own)
            } else {
                None
            };
            forced = match forced {
                None => Some(value),
                Some(prev) if prev == value => Some(prev),
                Some(_) => Some(None),
            };
            if forced == Some(None) {
                break;
            }
        }
        let choice = match forced {
            Some(Some(v)) if v.abs() <= phi_bound && pos[var] == 0 => Some(v),
            Some(_) => None,
            None => candidates.get(pos[var]).copied(),
        };
        match choice {
            Some(v) => {
                nodes += 1;
                if nodes > budget {
                    return Err(CoboundaryError::BudgetExceeded(budget));
                }
                assignment[var] = v;
                pos[var] += 1;
                var += 1;
                if var < n {
                    pos[var] = 0;
                }
            }
            None => {
                if var == 0 {
                    break false;
                }
                var -= 1;
            }
        }
    };
    let phi = found.then(|| BoundedCochain::from_fn(n, 1, |t| assignment[t[0]]));
    Ok(CoboundarySearch {
        verdict: if found {
            SearchVerdict::Found
        } else {
            SearchVerdict::NoneWithinBound
        },
        phi,
        table,
        constraints: cons.len(),
        nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixedPointError {
    #[error("orbit of 0 reached {point}, past the limit {limit}: phi does not correct the action")]
    OrbitEscape { point: String, limit: String },
    #[error("phi has arity {0}, expected 1")]
    Arity(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FixedPointRecovery {
    pub orbit_size: usize,
    #[serde(with = "crate::exact::rational")]
    pub sup: Rational,
    /// The supremum projected to the circle.
    pub approximate: CirclePoint,
    /// Least common fixed point of the corrected generators at or above the
    /// supremum, when the refinement closes.
    pub exact: Option<CirclePoint>,
}

/// Corrected lift `x ↦ F(x) - shift` and its inverse.
struct Corrected<'a> {
    map: &'a PlCircleHomeo,
    shift: Rational,
}

impl Corrected<'_> {
    fn eval(&self, x: &Rational) -> Rational {
        self.map.lift_eval(x) - &self.shift
    }

    fn eval_inverse(&self, y: &Rational) -> Rational {
        self.map.lift_inverse_eval(&(y + &self.shift))
    }

    /// Least fixed point `≥ x`, searching the next two periods.
    fn least_fixed_at_or_above(&self, x: &Rational) -> Option<Rational> {
        if &self.eval(x) == x {
            return Some(x.clone());
        }
        let base = Rational::from_integer(floor_int(x));
        let (points, intervals) = self.map.lift_fixed_points(&self.shift);
        let mut best: Option<Rational> = None;
        for period in 0..2 {
            let off = &base + Rational::from_integer(period.into());
            let cands = points
                .iter()
                .cloned()
                .chain(intervals.iter().flat_map(|(a, b)| [a.clone(), b.clone()]));
            for p in cands {
                let p = p + &off;
                if &p >= x && best.as_ref().map_or(true, |b| &p < b) {
                    best = Some(p);
                }
            }
        }
        best
    }
}

/// Runs the orbit of 0 under the corrected generators over words of length
/// at most `radius`, takes its supremum, then refines it to the least common
/// fixed point above. `limit` defaults to `max|φ| + 1`.
pub fn fixed_point_from_coboundary(
    ball: &ActionBall<PlCircleHomeo>,
    phi: &BoundedCochain,
    radius: u64,
    limit: Option<Rational>,
) -> Result<FixedPointRecovery, FixedPointError> {
    if phi.arity() != 1 {
        return Err(FixedPointError::Arity(phi.arity()));
    }
    let limit = limit.unwrap_or_else(|| Rational::from_integer((phi.bound() + 1).into()));
    let lower = -&limit;
    let gens: Vec<Corrected> = ball
        .generator_indices()
        .iter()
        .map(|&i| Corrected {
            map: ball.map(i),
            shift: Rational::from_integer(phi.get(&[i]).into()),
        })
        .collect();

    let mut seen: HashSet<Rational> = HashSet::new();
    seen.insert(Rational::zero());
    let mut frontier = vec![Rational::zero()];
    let mut sup = Rational::zero();
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                for y in [g.eval(x), g.eval_inverse(x)] {
                    if y >= limit || y < lower {
                        return Err(FixedPointError::OrbitEscape {
                            point: y.to_string(),
                            limit: limit.to_string(),
                        });
                    }
                    if seen.insert(y.clone()) {
                        if y > sup {
                            sup = y.clone();
                        }
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
    }

    let mut x = sup.clone();
    let mut exact = None;
    for _ in 0..256 {
        let mut moved = false;
        let mut ok = true;
        for g in &gens {
            match g.least_fixed_at_or_above(&x) {
                Some(p) if p > x => {
                    x = p;
                    moved = true;
                }
                Some(_) => {}
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || x >= limit {
            break;
        }
        if !moved {
            exact = Some(CirclePoint::new(x.clone()));
            break;
        }
    }
    Ok(FixedPointRecovery {
        orbit_size: seen.len(),
        approximate: CirclePoint::new(sup.clone()),
        sup,
        exact,
    })
}
