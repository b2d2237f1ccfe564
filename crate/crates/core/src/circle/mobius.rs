//! Linear-fractional maps of the projective line, read on the circle through
//! the chart `t ↦ tan(π(t - 1/2))`, so that `t = 0` is `∞` and the circle order
//! starting at `∞` is the usual order of finite points.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::surd::QuadraticSurd;
use super::{CircleMap, FixedPoints};
use crate::exact::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Infinity,
    Finite(QuadraticSurd),
}

impl ProjectivePoint {
    pub fn rational(x: Rational) -> Self {
        ProjectivePoint::Finite(QuadraticSurd::rational(x))
    }

    /// Position on `[0, 1)` under the chart, for display only.
    pub fn chart(&self) -> f64 {
        match self {
            ProjectivePoint::Infinity => 0.0,
            ProjectivePoint::Finite(x) => 0.5 + x.to_f64().atan() / std::f64::consts::PI,
        }
    }
}

impl PartialOrd for ProjectivePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjectivePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjectivePoint::Infinity, ProjectivePoint::Infinity) => Ordering::Equal,
            (ProjectivePoint::Infinity, _) => Ordering::Less,
            (_, ProjectivePoint::Infinity) => Ordering::Greater,
            (ProjectivePoint::Finite(x), ProjectivePoint::Finite(y)) => x.cmp(y),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Infinity => write!(f, "inf"),
            ProjectivePoint::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            ProjectivePoint::Infinity => {
                map.serialize_entry("kind", "infinity")?;
            }
            ProjectivePoint::Finite(x) => match x.as_rational() {
                Some(r) => {
                    map.serialize_entry("kind", "rational")?;
                    map.serialize_entry("value", &format_rational(r))?;
                }
                None => {
                    map.serialize_entry("kind", "surd")?;
                    map.serialize_entry("rational", &format_rational(x.rational_part()))?;
                    map.serialize_entry("coefficient", &format_rational(x.coefficient()))?;
                    map.serialize_entry("radicand", &x.radicand().to_string())?;
                }
            },
        }
        map.serialize_entry("chart", &self.chart())?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MobiusError {
    #[error("determinant {0} is not positive: the map reverses orientation or is singular")]
    NotOrientationPreserving(String),
}

/// `x ↦ (ax + b) / (cx + d)` with integer entries and `ad - bc > 0`, stored up
/// to a nonzero scalar: entries are coprime and the first nonzero one is
/// positive, so equal maps have equal matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    m: [BigInt; 4],
}

impl MobiusMap {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, MobiusError> {
        let det = &a * &d - &b * &c;
        if !det.is_positive() {
            return Err(MobiusError::NotOrientationPreserving(det.to_string()));
        }
        Ok(MobiusMap::normalized([a, b, c, d]))
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Result<Self, MobiusError> {
        MobiusMap::new(
            rows[0][0].into(),
            rows[0][1].into(),
            rows[1][0].into(),
            rows[1][1].into(),
        )
    }

    fn normalized(mut m: [BigInt; 4]) -> Self {
        let g = m.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let first_negative = m
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative());
        for x in m.iter_mut() {
            *x = &*x / &g;
            if first_negative {
                *x = -&*x;
            }
        }
        MobiusMap { m }
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.m
    }

    /// Entries as `[[a, b], [c, d]]` when they fit in `i64`.
    pub fn rows_i64(&self) -> Option<[[i64; 2]; 2]> {
        let v: Option<Vec<i64>> = self.m.iter().map(|x| x.to_i64()).collect();
        v.map(|v| [[v[0], v[1]], [v[2], v[3]]])
    }

    fn entry(&self, i: usize) -> Rational {
        Rational::from_integer(self.m[i].clone())
    }
}

impl CircleMap for MobiusMap {
    type Point = ProjectivePoint;

    fn origin() -> ProjectivePoint {
        ProjectivePoint::Infinity
    }

    fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let [a, b, c, d] = [0, 1, 2, 3].map(|i| self.entry(i));
        match p {
            ProjectivePoint::Infinity => {
                if c.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::rational(a / c)
                }
            }
            ProjectivePoint::Finite(x) => {
                let num = &(x * &a) + &QuadraticSurd::rational(b);
                let den = &(x * &c) + &QuadraticSurd::rational(d);
                match num.checked_div(&den) {
                    Some(y) => ProjectivePoint::Finite(y),
                    None => ProjectivePoint::Infinity,
                }
            }
        }
    }

    fn compose(&self, inner: &Self) -> Self {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &inner.m;
        MobiusMap::normalized([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.m;
        MobiusMap::normalized([d.clone(), -b, -c, a.clone()])
    }

    fn identity_like(&self) -> Self {
        MobiusMap::normalized([1, 0, 0, 1].map(BigInt::from))
    }

    fn is_identity(&self) -> bool {
        self.m[1].is_zero() && self.m[2].is_zero() && self.m[0] == self.m[3]
    }

    /// Solves `cx² + (d - a)x - b = 0` on the projective line.
    fn fixed_points(&self) -> FixedPoints<ProjectivePoint> {
        if self.is_identity() {
            return FixedPoints::all();
        }
        let [a, b, c, d] = [0, 1, 2, 3].map(|i| self.entry(i));
        let mut points = Vec::new();
        if c.is_zero() {
            points.push(ProjectivePoint::Infinity);
            if a != d {
                points.push(ProjectivePoint::rational(b / (&d - &a)));
            }
            return FixedPoints::isolated(points);
        }
        let p = &d - &a;
        let disc = &p * &p + Rational::from_integer(BigInt::from(4)) * &b * &c;
        let two_c = &c + &c;
        if disc.is_negative() {
            return FixedPoints::isolated(points);
        }
        let centre = -&p / &two_c;
        if disc.is_zero() {
            points.push(ProjectivePoint::rational(centre));
            return FixedPoints::isolated(points);
        }
        // disc is an integer since the entries are.
        let disc_int = disc.to_integer();
        for s in [-1i64, 1] {
            let coeff = Rational::from_integer(BigInt::from(s)) / &two_c;
            points.push(ProjectivePoint::Finite(QuadraticSurd::new(
                centre.clone(),
                coeff,
                disc_int.clone(),
            )));
        }
        points.sort();
        FixedPoints::isolated(points)
    }

    fn seed_points(&self) -> Vec<ProjectivePoint> {
        let mut seeds = vec![
            ProjectivePoint::Infinity,
            ProjectivePoint::rational(Rational::zero()),
        ];
        seeds.extend(self.fixed_points().points);
        seeds
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}
