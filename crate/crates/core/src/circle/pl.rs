//! Piecewise-linear circle homeomorphisms with rational breakpoints, on
//! `ℝ/ℤ`, stored through their normalized lift.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{CircleMap, FixedPoints};
use crate::exact::rational::{self, floor_int, format_rational, frac, Rational};

/// A point of `ℝ/ℤ`, kept in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(Rational);

impl CirclePoint {
    /// Reduces any rational mod 1.
    pub fn new(x: Rational) -> Self {
        CirclePoint(frac(&x))
    }

    pub fn zero() -> Self {
        CirclePoint(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        rational::serialize(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        rational::deserialize(deserializer).map(CirclePoint::new)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlCircleError {
    #[error("a PL circle map needs at least one breakpoint")]
    Empty,
    #[error("breakpoint and value lists differ in length")]
    LengthMismatch,
    #[error("breakpoints must be strictly increasing in [0, 1)")]
    BadBreakpoints,
    #[error("values must increase and stay below the first value plus 1 (orientation-preserving degree 1)")]
    NotOrientationPreserving,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlCircleJson {
    #[serde(with = "rational::vec")]
    pub breakpoints: Vec<Rational>,
    #[serde(with = "rational::vec")]
    pub values: Vec<Rational>,
}

/// The lift `F` is linear between knots and satisfies `F(x + 1) = F(x) + 1`.
/// Canonical form: the first knot is at 0 with `F(0) ∈ [0, 1)`, and every
/// other knot is a genuine change of slope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlCircleHomeo {
    knots: Vec<(Rational, Rational)>,
}

/// Evaluates the periodic extension of knots `(x_i, y_i)` with
/// `x_0 ≤ x < x_0 + 1` spanning one period.
fn periodic_eval(knots: &[(Rational, Rational)], x: &Rational) -> Rational {
    let x0 = &knots[0].0;
    let shift = Rational::from_integer(floor_int(&(x - x0)));
    let r = x - &shift;
    let idx = knots.partition_point(|k| k.0 <= r);
    let (xa, ya) = &knots[idx - 1];
    let (xb, yb) = match knots.get(idx) {
        Some((xb, yb)) => (xb.clone(), yb.clone()),
        None => (x0 + Rational::one(), &knots[0].1 + Rational::one()),
    };
    let y = if &r == xa {
        ya.clone()
    } else {
        ya + (&yb - ya) * (&r - xa) / (&xb - xa)
    };
    y + shift
}

impl PlCircleHomeo {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self, PlCircleError> {
        if breakpoints.is_empty() {
            return Err(PlCircleError::Empty);
        }
        if breakpoints.len() != values.len() {
            return Err(PlCircleError::LengthMismatch);
        }
        let zero = Rational::zero();
        let one = Rational::one();
        if breakpoints.windows(2).any(|w| w[0] >= w[1])
            || breakpoints[0] < zero
            || breakpoints.last().is_some_and(|b| b >= &one)
        {
            return Err(PlCircleError::BadBreakpoints);
        }
        if values.windows(2).any(|w| w[0] >= w[1])
            || values.last().expect("nonempty") >= &(&values[0] + &one)
        {
            return Err(PlCircleError::NotOrientationPreserving);
        }
        let knots: Vec<(Rational, Rational)> = breakpoints.into_iter().zip(values).collect();
        Ok(PlCircleHomeo::from_lift(
            |x| periodic_eval(&knots, x),
            knots.iter().map(|k| k.0.clone()),
        ))
    }

    pub fn from_json(json: &PlCircleJson) -> Result<Self, PlCircleError> {
        PlCircleHomeo::new(json.breakpoints.clone(), json.values.clone())
    }

    pub fn to_json(&self) -> PlCircleJson {
        PlCircleJson {
            breakpoints: self.knots.iter().map(|k| k.0.clone()).collect(),
            values: self.knots.iter().map(|k| k.1.clone()).collect(),
        }
    }

    pub fn rotation(angle: Rational) -> Self {
        PlCircleHomeo {
            knots: vec![(Rational::zero(), frac(&angle))],
        }
    }

    /// Builds the canonical form of a lift known to be linear away from the
    /// given candidate breakpoints (taken mod 1).
    fn from_lift<F: Fn(&Rational) -> Rational>(
        lift: F,
        candidates: impl IntoIterator<Item = Rational>,
    ) -> Self {
        let mut xs: Vec<Rational> = candidates.into_iter().map(|x| frac(&x)).collect();
        xs.push(Rational::zero());
        xs.sort();
        xs.dedup();
        let offset = Rational::from_integer(floor_int(&lift(&Rational::zero())));
        let knots: Vec<(Rational, Rational)> = xs
            .into_iter()
            .map(|x| {
                let y = lift(&x) - &offset;
                (x, y)
            })
            .collect();
        PlCircleHomeo {
            knots: Self::drop_straight(knots),
        }
    }

    fn drop_straight(knots: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
        let n = knots.len();
        let one = Rational::one();
        let slope =
            |a: &(Rational, Rational), b: &(Rational, Rational)| (&b.1 - &a.1) / (&b.0 - &a.0);
        let next = |i: usize| -> (Rational, Rational) {
            if i + 1 < n {
                knots[i + 1].clone()
            } else {
                (&knots[0].0 + &one, &knots[0].1 + &one)
            }
        };
        let mut kept = vec![knots[0].clone()];
        for i in 1..n {
            let before = slope(&knots[i - 1], &knots[i]);
            let after = slope(&knots[i], &next(i));
            if before != after {
                kept.push(knots[i].clone());
            }
        }
        // Re-check against kept neighbors: removing a knot can expose no new
        // straight knot since slopes only merge across equal values.
        kept
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    /// The normalized lift `F` with `F(0) ∈ [0, 1)`.
    pub fn lift_eval(&self, x: &Rational) -> Rational {
        periodic_eval(&self.knots, x)
    }

    /// `F⁻¹` for the normalized lift `F`.
    pub fn lift_inverse_eval(&self, y: &Rational) -> Rational {
        let one = Rational::one();
        let y0 = &self.knots[0].1;
        let shift = Rational::from_integer(floor_int(&(y - y0)));
        let r = y - &shift;
        let idx = self.knots.partition_point(|k| k.1 <= r);
        let (xa, ya) = &self.knots[idx - 1];
        let (xb, yb) = match self.knots.get(idx) {
            Some((xb, yb)) => (xb.clone(), yb.clone()),
            None => (&self.knots[0].0 + &one, y0 + &one),
        };
        let x = if &r == ya {
            xa.clone()
        } else {
            xa + (&xb - xa) * (&r - ya) / (&yb - ya)
        };
        x + shift
    }

    /// Fixed points of the lift `F - n` inside `[lo, lo + 1)` for the given
    /// integer shift, with intervals where `F - n` is the identity.
    pub(crate) fn lift_fixed_points(
        &self,
        shift: &Rational,
    ) -> (Vec<Rational>, Vec<(Rational, Rational)>) {
        let one = Rational::one();
        let n = self.knots.len();
        let mut points = Vec::new();
        let mut intervals = Vec::new();
        for i in 0..n {
            let (x0, y0) = self.knots[i].clone();
            let (x1, y1) = if i + 1 < n {
                self.knots[i + 1].clone()
            } else {
                (&self.knots[0].0 + &one, &self.knots[0].1 + &one)
            };
            let d0 = &y0 - shift - &x0;
            let d1 = &y1 - shift - &x1;
            if d0.is_zero() && d1.is_zero() {
                intervals.push((x0, x1));
            } else if d0.is_zero() {
                points.push(x0);
            } else if (d0 < Rational::zero()) != (d1 < Rational::zero()) && !d1.is_zero() {
                points.push(&x0 + (&x1 - &x0) * (&d0 / (&d0 - &d1)));
            }
        }
        (points, intervals)
    }
}

impl CircleMap for PlCircleHomeo {
    type Point = CirclePoint;

    fn origin() -> CirclePoint {
        CirclePoint::zero()
    }

    fn apply(&self, p: &CirclePoint) -> CirclePoint {
        CirclePoint::new(self.lift_eval(&p.0))
    }

    fn compose(&self, inner: &Self) -> Self {
        let one = Rational::one();
        let c = inner.lift_eval(&Rational::zero());
        let mut candidates: Vec<Rational> = inner.knots.iter().map(|k| k.0.clone()).collect();
        for (x, _) in &self.knots {
            // The translate of x inside inner's image of [0, 1).
            let t = x + Rational::from_integer(floor_int(&(&c - x)));
            let t = if t < c { t + &one } else { t };
            candidates.push(inner.lift_inverse_eval(&t));
        }
        PlCircleHomeo::from_lift(|x| self.lift_eval(&inner.lift_eval(x)), candidates)
    }

    fn inverse(&self) -> Self {
        PlCircleHomeo::from_lift(
            |y| self.lift_inverse_eval(y),
            self.knots.iter().map(|k| k.1.clone()),
        )
    }

    fn identity_like(&self) -> Self {
        PlCircleHomeo::rotation(Rational::zero())
    }

    fn is_identity(&self) -> bool {
        self.knots.len() == 1 && self.knots[0].1.is_zero()
    }

    fn fixed_points(&self) -> FixedPoints<CirclePoint> {
        if self.is_identity() {
            return FixedPoints::all();
        }
        // F(x) - x lies in (F(0) - 1, F(0) + 1) ⊂ (-1, 2).
        let mut points = Vec::new();
        let mut intervals = Vec::new();
        for n in [0i64, 1] {
            let (p, i) = self.lift_fixed_points(&Rational::from_integer(n.into()));
            points.extend(p.into_iter().map(CirclePoint::new));
            intervals.extend(
                i.into_iter()
                    .map(|(a, b)| (CirclePoint::new(a), CirclePoint::new(b))),
            );
        }
        FixedPoints::new(points, intervals)
    }

    fn seed_points(&self) -> Vec<CirclePoint> {
        let mut seeds: Vec<CirclePoint> = self
            .knots
            .iter()
            .map(|k| CirclePoint::new(k.0.clone()))
            .collect();
        seeds.extend(self.knots.iter().map(|k| CirclePoint::new(k.1.clone())));
        seeds.extend(self.fixed_points().points);
        seeds
    }
}

impl fmt::Display for PlCircleHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .knots
            .iter()
            .map(|(x, y)| format!("{}->{}", format_rational(x), format_rational(y)))
            .collect();
        write!(f, "PLS1[{}]", parts.join(", "))
    }
}
