//! Exact circle dynamics: PL and Möbius carriers on `ℝ/ℤ`, normalized lifts,
//! the Euler cocycle, bounded cochains, and bounded searches for fixed points
//! and finite orbits.

pub mod ball;
pub mod coboundary;
pub mod cochain;
pub mod euler;
pub mod mobius;
pub mod orbit;
pub mod pl;
pub mod propagate;
pub mod surd;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ball::ActionBall;
pub use coboundary::{
    coboundary_search, fixed_point_from_coboundary, CoboundarySearch, FixedPointRecovery,
};
pub use cochain::{delta, homogenize, inhomogenize, BoundedCochain, HomogeneousCochain};
pub use euler::{check_cocycle_identity, CocycleReport, EulerCocycleTable};
pub use mobius::{MobiusMap, ProjectivePoint};
pub use orbit::{finite_orbit_search, holder_witness, FiniteOrbit, HolderOutcome};
pub use pl::{CirclePoint, PlCircleHomeo};
pub use propagate::{propagate_orbit_bound, OrbitBound};
pub use surd::QuadraticSurd;

/// An orientation-preserving homeomorphism of the circle with exact points.
/// `Point` is ordered by position on `[0, 1)` starting at [`CircleMap::origin`].
pub trait CircleMap: Clone + Eq + Hash + Debug + Display {
    type Point: Clone + Ord + Hash + Debug + Display + Serialize;

    /// The image of `0 ∈ ℝ` on the circle.
    fn origin() -> Self::Point;
    fn apply(&self, p: &Self::Point) -> Self::Point;
    /// `self ∘ inner`.
    fn compose(&self, inner: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn identity_like(&self) -> Self;
    fn is_identity(&self) -> bool;
    fn fixed_points(&self) -> FixedPoints<Self::Point>;
    /// Exact points worth trying as orbit seeds.
    fn seed_points(&self) -> Vec<Self::Point>;
}

/// Fixed-point set: everything, or isolated points plus closed arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPoints<P> {
    pub all: bool,
    pub points: Vec<P>,
    pub intervals: Vec<(P, P)>,
}

impl<P: Ord + Clone> FixedPoints<P> {
    pub fn all() -> Self {
        FixedPoints {
            all: true,
            points: Vec::new(),
            intervals: Vec::new(),
        }
    }

    pub fn isolated(points: Vec<P>) -> Self {
        FixedPoints::new(points, Vec::new())
    }

    /// Sorts, merges abutting arcs and drops points inside arcs.
    pub fn new(mut points: Vec<P>, mut intervals: Vec<(P, P)>) -> Self {
        intervals.sort();
        let mut merged: Vec<(P, P)> = Vec::new();
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => merged.push((a, b)),
            }
        }
        if merged.len() > 1 && merged[merged.len() - 1].1 == merged[0].0 {
            let (a, _) = merged.pop().expect("nonempty");
            merged[0].0 = a;
        }
        let inside = |p: &P| {
            merged.iter().any(|(a, b)| {
                if a <= b {
                    a <= p && p <= b
                } else {
                    p >= a || p <= b
                }
            })
        };
        points.sort();
        points.dedup();
        points.retain(|p| !inside(p));
        FixedPoints {
            all: false,
            points,
            intervals: merged,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.all && self.points.is_empty() && self.intervals.is_empty()
    }

    /// Some fixed point, if any: `origin` when everything is fixed.
    pub fn any(&self, origin: P) -> Option<P> {
        if self.all {
            return Some(origin);
        }
        self.points
            .first()
            .cloned()
            .or_else(|| self.intervals.first().map(|i| i.0.clone()))
    }
}

/// `turns + x` for a point `x` of the circle read in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedPoint<P> {
    pub turns: BigInt,
    pub point: P,
}

/// A lift of a circle map to `ℝ`: the normalized lift plus an integer
/// translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedHomeo<M> {
    pub map: M,
    pub offset: BigInt,
}

/// The normalized lift, with value at 0 in `[0, 1)`.
pub fn lift<M: CircleMap>(map: &M) -> LiftedHomeo<M> {
    LiftedHomeo {
        map: map.clone(),
        offset: BigInt::from(0),
    }
}

impl<M: CircleMap> LiftedHomeo<M> {
    /// The normalized lift maps `[0, 1)` onto `[g(0), g(0) + 1)`, so a point
    /// wraps exactly when its image falls below `g(0)`.
    pub fn eval(&self, x: &LiftedPoint<M::Point>) -> LiftedPoint<M::Point> {
        let image = self.map.apply(&x.point);
        let wrap = image < self.map.apply(&M::origin());
        LiftedPoint {
            turns: &x.turns + &self.offset + BigInt::from(wrap as u8),
            point: image,
        }
    }

    pub fn at_zero(&self) -> LiftedPoint<M::Point> {
        self.eval(&LiftedPoint {
            turns: BigInt::from(0),
            point: M::origin(),
        })
    }
}

/// `z(g, h)` with `g̃ h̃ = (gh)~ + z`; always 0 or 1.
pub fn euler_z<M: CircleMap>(g: &M, h: &M) -> u8 {
    let origin = M::origin();
    (g.apply(&h.apply(&origin)) < g.apply(&origin)) as u8
}

/// `z(g₁,g₂) + z(g₁g₂,g₃) - z(g₁,g₂g₃) - z(g₂,g₃)`, zero for a cocycle.
pub fn cocycle_defect<M: CircleMap>(g1: &M, g2: &M, g3: &M) -> i64 {
    let g12 = g1.compose(g2);
    let g23 = g2.compose(g3);
    euler_z(g1, g2) as i64 + euler_z(&g12, g3) as i64
        - euler_z(g1, &g23) as i64
        - euler_z(g2, g3) as i64
}

/// One generator in a JSON generator file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorSpec {
    Rotation(#[serde(with = "crate::exact::rational")] crate::exact::Rational),
    Pl(pl::PlCircleJson),
    Mobius([[i64; 2]; 2]),
}

/// Either a bare list of generators or `{"generators": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum GeneratorFile {
    List(Vec<GeneratorSpec>),
    Object { generators: Vec<GeneratorSpec> },
}

impl GeneratorFile {
    pub fn specs(&self) -> &[GeneratorSpec] {
        match self {
            GeneratorFile::List(v) | GeneratorFile::Object { generators: v } => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error("no generators given")]
    Empty,
    #[error("generators mix Möbius maps with rotations or PL maps")]
    Mixed,
    #[error("generator {0}: {1}")]
    Pl(usize, pl::PlCircleError),
    #[error("generator {0}: {1}")]
    Mobius(usize, mobius::MobiusError),
}

/// A generator list with a single carrier type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carriers {
    Pl(Vec<PlCircleHomeo>),
    Mobius(Vec<MobiusMap>),
}

impl Carriers {
    pub fn from_specs(specs: &[GeneratorSpec]) -> Result<Self, CarrierError> {
        if specs.is_empty() {
            return Err(CarrierError::Empty);
        }
        if specs.iter().all(|s| matches!(s, GeneratorSpec::Mobius(_))) {
            let maps = specs
                .iter()
                .enumerate()
                .map(|(i, s)| match s {
                    GeneratorSpec::Mobius(rows) => {
                        MobiusMap::from_i64(*rows).map_err(|e| CarrierError::Mobius(i, e))
                    }
                    _ => unreachable!(),
                })
                .collect::<Result<_, _>>()?;
            return Ok(Carriers::Mobius(maps));
        }
        let maps = specs
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                GeneratorSpec::Rotation(a) => Ok(PlCircleHomeo::rotation(a.clone())),
                GeneratorSpec::Pl(json) => {
                    PlCircleHomeo::from_json(json).map_err(|e| CarrierError::Pl(i, e))
                }
                GeneratorSpec::Mobius(_) => Err(CarrierError::Mixed),
            })
            .collect::<Result<_, _>>()?;
        Ok(Carriers::Pl(maps))
    }

    pub fn len(&self) -> usize {
        match self {
            Carriers::Pl(v) => v.len(),
            Carriers::Mobius(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
