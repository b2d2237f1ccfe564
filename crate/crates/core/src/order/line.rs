//! Piecewise-linear homeomorphisms of the line with rational knots.
//!
//! A map is given by knots `(x_0, y_0) < ... < (x_r, y_r)`, interpolated
//! linearly between them and continued with slope 1 beyond the ends. A single
//! knot is a translation.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::rational::{self, format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineMapError {
    #[error("a line map needs at least one knot")]
    Empty,
    #[error("knots must be strictly increasing in both coordinates (at index {0})")]
    NotIncreasing(usize),
    #[error("breakpoint and value lists differ in length")]
    LengthMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("orbit of {point} under generator {generator} is unbounded above")]
pub struct UnboundedOrbit {
    pub generator: usize,
    pub point: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlLineMap {
    knots: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlLineMapJson {
    #[serde(with = "rational::vec")]
    pub breakpoints: Vec<Rational>,
    #[serde(with = "rational::vec")]
    pub values: Vec<Rational>,
}

impl PlLineMap {
    pub fn new(knots: Vec<(Rational, Rational)>) -> Result<Self, LineMapError> {
        if knots.is_empty() {
            return Err(LineMapError::Empty);
        }
        for (i, w) in knots.windows(2).enumerate() {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(LineMapError::NotIncreasing(i + 1));
            }
        }
        Ok(PlLineMap { knots })
    }

    pub fn from_json(json: &PlLineMapJson) -> Result<Self, LineMapError> {
        if json.breakpoints.len() != json.values.len() {
            return Err(LineMapError::LengthMismatch);
        }
        PlLineMap::new(
            json.breakpoints
                .iter()
                .cloned()
                .zip(json.values.iter().cloned())
                .collect(),
        )
    }

    pub fn to_json(&self) -> PlLineMapJson {
        PlLineMapJson {
            breakpoints: self.knots.iter().map(|k| k.0.clone()).collect(),
            values: self.knots.iter().map(|k| k.1.clone()).collect(),
        }
    }

    pub fn identity() -> Self {
        PlLineMap::translation(Rational::zero())
    }

    pub fn translation(shift: Rational) -> Self {
        PlLineMap {
            knots: vec![(Rational::zero(), shift)],
        }
    }

    /// Identity outside `[left, right]`, sends `from` to `to` inside.
    pub fn bump(
        left: Rational,
        from: Rational,
        to: Rational,
        right: Rational,
    ) -> Result<Self, LineMapError> {
        PlLineMap::new(vec![
            (left.clone(), left),
            (from, to),
            (right.clone(), right),
        ])
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let first = &self.knots[0];
        if x <= &first.0 {
            return &first.1 + (x - &first.0);
        }
        let last = self.knots.last().expect("nonempty");
        if x >= &last.0 {
            return &last.1 + (x - &last.0);
        }
        let idx = self.knots.partition_point(|k| &k.0 <= x);
        let (x0, y0) = &self.knots[idx - 1];
        let (x1, y1) = &self.knots[idx];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn inverse(&self) -> Self {
        PlLineMap {
            knots: self
                .knots
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlLineMap) -> PlLineMap {
        let inner_inv = inner.inverse();
        let mut xs: Vec<Rational> = inner.knots.iter().map(|k| k.0.clone()).collect();
        xs.extend(self.knots.iter().map(|k| inner_inv.eval(&k.0)));
        xs.sort();
        xs.dedup();
        PlLineMap {
            knots: xs
                .into_iter()
                .map(|x| {
                    let y = self.eval(&inner.eval(&x));
                    (x, y)
                })
                .collect(),
        }
        .canonical()
    }

    pub fn pow(&self, exponent: i64) -> PlLineMap {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = PlLineMap::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    fn slope(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
        (&b.1 - &a.1) / (&b.0 - &a.0)
    }

    /// Drops knots where the slope does not change; keeps at least one.
    pub fn canonical(&self) -> PlLineMap {
        let n = self.knots.len();
        let mut kept: Vec<(Rational, Rational)> = Vec::with_capacity(n);
        for i in 0..n {
            let left = if i == 0 {
                Rational::one()
            } else {
                Self::slope(kept.last().unwrap_or(&self.knots[i - 1]), &self.knots[i])
            };
            let right = if i + 1 == n {
                Rational::one()
            } else {
                Self::slope(&self.knots[i], &self.knots[i + 1])
            };
            if left != right || (kept.is_empty() && i + 1 == n) {
                kept.push(self.knots[i].clone());
            }
        }
        PlLineMap { knots: kept }
    }

    pub fn is_identity(&self) -> bool {
        self.knots.iter().all(|(x, y)| x == y)
    }

    /// Least fixed point strictly above `x`, for `x` not itself fixed.
    pub fn least_fixed_point_above(&self, x: &Rational) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        let mut offer = |t: Rational| {
            if &t > x && best.as_ref().map_or(true, |b| &t < b) {
                best = Some(t);
            }
        };
        let first = &self.knots[0];
        let last = self.knots.last().expect("nonempty");
        if first.0 == first.1 {
            // Left tail is fixed pointwise; points above x there start at max(x, .).
            if x < &first.0 {
                offer(first.0.clone());
            }
        }
        for w in self.knots.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            // d(t) = f(t) - t is affine on [x0, x1].
            let d0 = y0 - x0;
            let d1 = y1 - x1;
            if d0.is_zero() {
                offer(x0.clone());
            }
            if d1.is_zero() {
                offer(x1.clone());
            }
            if (d0 < Rational::zero()) != (d1 < Rational::zero()) && !d0.is_zero() && !d1.is_zero()
            {
                let root = x0 + (x1 - x0) * (&d0 / (&d0 - &d1));
                offer(root);
            }
            // A fixed segment crossing x: x would be fixed, excluded by caller.
        }
        if last.0 == last.1 {
            offer(last.0.clone());
        }
        best
    }

    /// `sup { g^n(x) : n ∈ Z }`, exact. `generator` only labels the error.
    pub fn orbit_sup(&self, x: &Rational, generator: usize) -> Result<Rational, UnboundedOrbit> {
        if &self.eval(x) == x {
            return Ok(x.clone());
        }
        self.least_fixed_point_above(x)
            .ok_or_else(|| UnboundedOrbit {
                generator,
                point: format_rational(x),
            })
    }

    /// Compares `self` and `other` at the first point of `points` where they
    /// differ.
    pub fn compare_at(&self, other: &PlLineMap, points: &[Rational]) -> Option<Ordering> {
        points.iter().find_map(|q| {
            let c = self.eval(q).cmp(&other.eval(q));
            (c != Ordering::Equal).then_some(c)
        })
    }
}

impl fmt::Display for PlLineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .knots
            .iter()
            .map(|(x, y)| format!("{}->{}", format_rational(x), format_rational(y)))
            .collect();
        write!(f, "PL[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};

    fn bump(l: i64, from: i64, to: i64, r: i64) -> PlLineMap {
        PlLineMap::bump(int(l), int(from), int(to), int(r)).unwrap()
    }

    #[test]
    fn translation_and_inverse() {
        let t = PlLineMap::translation(int(1));
        assert_eq!(t.eval(&ratio(1, 2)), ratio(3, 2));
        assert_eq!(t.inverse().eval(&int(0)), int(-1));
        assert!(t.compose(&t.inverse()).is_identity());
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = bump(0, 1, 3, 4);
        let g = PlLineMap::new(vec![(int(-1), int(0)), (int(2), int(2))]).unwrap();
        let h = f.compose(&g);
        for k in -10..10 {
            let x = ratio(k, 3);
            assert_eq!(h.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn canonical_removes_collinear_knots() {
        let m = PlLineMap::new(vec![
            (int(0), int(0)),
            (int(1), int(1)),
            (int(2), int(3)),
            (int(3), int(4)),
        ])
        .unwrap();
        let c = m.canonical();
        assert_eq!(c.knots().len(), 2);
        assert_eq!(
            PlLineMap::identity()
                .compose(&PlLineMap::identity())
                .knots()
                .len(),
            1
        );
    }

    #[test]
    fn orbit_sup_of_bump() {
        let g = bump(0, 1, 3, 4);
        assert_eq!(g.orbit_sup(&int(1), 0).unwrap(), int(4));
        assert_eq!(g.orbit_sup(&int(5), 0).unwrap(), int(5));
        // Down-moving bump: backward orbit climbs to the right end.
        let h = bump(0, 3, 1, 4);
        assert_eq!(h.orbit_sup(&int(2), 1).unwrap(), int(4));
        let t = PlLineMap::translation(int(1));
        assert_eq!(t.orbit_sup(&int(0), 7).unwrap_err().generator, 7);
    }

    #[test]
    fn interior_crossing_fixed_point() {
        // f(t) = 2t on [0, 2] region: fixed at 0; f(-1)=-2 below.
        let f = PlLineMap::new(vec![(int(-2), int(-3)), (int(2), int(3))]).unwrap();
        // d(-2) = -1, d(2) = 1, root at 0.
        assert_eq!(f.least_fixed_point_above(&int(-1)), Some(int(0)));
    }
}
