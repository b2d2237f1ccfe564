//! Bounded integer cochains on a finite piece of the acting group, in the
//! inhomogeneous and homogeneous forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ball::ActionBall;
use super::euler::EulerCocycleTable;
use super::CircleMap;
use crate::exact::GroupWord;

/// A `k`-cochain given by its finite support; absent tuples are 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundedCochain {
    arity: usize,
    values: BTreeMap<Vec<usize>, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub args: Vec<GroupWord>,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub arity: usize,
    pub bound: i64,
    pub support: Vec<CochainEntry>,
}

/// A result computed only where every needed product lies in the ball;
/// `restricted` counts the tuples skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restricted<T> {
    pub value: T,
    pub restricted: usize,
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(k as u32).unwrap_or(0);
    let total = if k == 0 { 1 } else { total };
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n.max(1);
            code /= n.max(1);
        }
        t
    })
}

impl BoundedCochain {
    pub fn zero(arity: usize) -> Self {
        BoundedCochain {
            arity,
            values: BTreeMap::new(),
        }
    }

    /// Tabulates `f` on every `arity`-tuple of an `n`-element domain.
    pub fn from_fn<F: FnMut(&[usize]) -> i64>(n: usize, arity: usize, mut f: F) -> Self {
        let mut c = BoundedCochain::zero(arity);
        for t in tuples(n, arity) {
            let v = f(&t);
            c.set(t, v);
        }
        c
    }

    pub fn from_table(table: &EulerCocycleTable) -> Self {
        BoundedCochain::from_fn(table.len(), 2, |t| table.get(t[0], t[1]) as i64)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, args: &[usize]) -> i64 {
        self.values.get(args).copied().unwrap_or(0)
    }

    pub fn set(&mut self, args: Vec<usize>, value: i64) {
        assert_eq!(args.len(), self.arity, "cochain arity");
        if value == 0 {
            self.values.remove(&args);
        } else {
            self.values.insert(args, value);
        }
    }

    /// Max absolute value over the support.
    pub fn bound(&self) -> i64 {
        self.values.values().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<usize>, &i64)> {
        self.values.iter()
    }

    pub fn to_json(&self, words: &[GroupWord]) -> CochainJson {
        CochainJson {
            arity: self.arity,
            bound: self.bound(),
            support: self
                .values
                .iter()
                .map(|(args, &value)| CochainEntry {
                    args: args.iter().map(|&i| words[i].clone()).collect(),
                    value,
                })
                .collect(),
        }
    }
}

/// Inhomogeneous differential
/// `δc(γ₀..γ_k) = c(γ₁..γ_k) + Σ (-1)^i c(..γ_{i-1}γ_i..) + (-1)^{k+1} c(γ₀..γ_{k-1})`.
pub fn delta<M: CircleMap>(ball: &ActionBall<M>, c: &BoundedCochain) -> Restricted<BoundedCochain> {
    let k = c.arity;
    let mut out = BoundedCochain::zero(k + 1);
    let mut restricted = 0;
    'tuples: for t in tuples(ball.len(), k + 1) {
        let mut v = c.get(&t[1..]);
        for i in 1..=k {
            let Some(p) = ball.product(t[i - 1], t[i]) else {
                restricted += 1;
                continue 'tuples;
            };
            let mut merged = Vec::with_capacity(k);
            merged.extend_from_slice(&t[..i - 1]);
            merged.push(p);
            merged.extend_from_slice(&t[i + 1..]);
            let term = c.get(&merged);
            v += if i % 2 == 0 { term } else { -term };
        }
        let last = c.get(&t[..k]);
        v += if (k + 1) % 2 == 0 { last } else { -last };
        out.set(t, v);
    }
    Restricted {
        value: out,
        restricted,
    }
}

/// A homogeneous `k`-cochain on `(k+1)`-tuples; only tuples in `values` are
/// defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousCochain {
    pub arity: usize,
    pub values: BTreeMap<Vec<usize>, i64>,
}

impl HomogeneousCochain {
    /// A pair `(γ, tuple)` with `ċ(γ·tuple) ≠ ċ(tuple)`, both defined.
    pub fn left_invariance_violation<M: CircleMap>(
        &self,
        ball: &ActionBall<M>,
    ) -> Option<(usize, Vec<usize>)> {
        for g in 0..ball.len() {
            for (t, v) in &self.values {
                let moved: Option<Vec<usize>> = t.iter().map(|&x| ball.product(g, x)).collect();
                if let Some(w) = moved.and_then(|m| self.values.get(&m)) {
                    if w != v {
                        return Some((g, t.clone()));
                    }
                }
            }
        }
        None
    }
}

/// `ċ(γ₀..γ_k) = c(γ₀⁻¹γ₁, ..., γ_{k-1}⁻¹γ_k)`.
pub fn homogenize<M: CircleMap>(
    ball: &ActionBall<M>,
    c: &BoundedCochain,
) -> Restricted<HomogeneousCochain> {
    let k = c.arity;
    let mut values = BTreeMap::new();
    let mut restricted = 0;
    for t in tuples(ball.len(), k + 1) {
        let args: Option<Vec<usize>> = t
            .windows(2)
            .map(|w| ball.inverse(w[0]).and_then(|i| ball.product(i, w[1])))
            .collect();
        match args {
            Some(a) => {
                values.insert(t, c.get(&a));
            }
            None => restricted += 1,
        }
    }
    Restricted {
        value: HomogeneousCochain { arity: k, values },
        restricted,
    }
}

/// `c(γ₁..γ_k) = ċ(e, γ₁, γ₁γ₂, ..., γ₁⋯γ_k)`.
pub fn inhomogenize<M: CircleMap>(
    ball: &ActionBall<M>,
    h: &HomogeneousCochain,
) -> Restricted<BoundedCochain> {
    let k = h.arity;
    let mut out = BoundedCochain::zero(k);
    let mut restricted = 0;
    for t in tuples(ball.len(), k) {
        let mut partial = vec![ball.identity()];
        for &g in &t {
            match ball.product(*partial.last().expect("nonempty"), g) {
                Some(p) => partial.push(p),
                None => break,
            }
        }
        match (partial.len() == k + 1)
            .then(|| h.values.get(&partial))
            .flatten()
        {
            Some(&v) => out.set(t, v),
            None => restricted += 1,
        }
    }
    Restricted {
        value: out,
        restricted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::PlCircleHomeo;
    use crate::exact::rational::ratio;

    #[test]
    fn tuple_enumeration() {
        assert_eq!(tuples(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(tuples(3, 2).count(), 9);
        assert_eq!(tuples(2, 2).last(), Some(vec![1, 1]));
    }

    #[test]
    fn delta_of_zero_and_of_constants() {
        let ball = ActionBall::image(&[PlCircleHomeo::rotation(ratio(1, 3))], 2);
        let d = delta(&ball, &BoundedCochain::zero(1));
        assert!(d.value.is_zero());
        assert_eq!(d.restricted, 0);
        // δ of a constant 0-cochain vanishes.
        let c = BoundedCochain::from_fn(ball.len(), 0, |_| 5);
        assert!(delta(&ball, &c).value.is_zero());
    }

    #[test]
    fn euler_cocycle_round_trips_through_homogeneous_form() {
        let ball = ActionBall::image(&[PlCircleHomeo::rotation(ratio(1, 2))], 1);
        assert_eq!(ball.len(), 2);
        let z = BoundedCochain::from_table(&EulerCocycleTable::from_ball(&ball));
        assert_eq!(z.get(&[1, 1]), 1);
        let h = homogenize(&ball, &z);
        assert_eq!(h.restricted, 0);
        assert!(h.value.left_invariance_violation(&ball).is_none());
        let back = inhomogenize(&ball, &h.value);
        assert_eq!(back.value, z);
    }
}
