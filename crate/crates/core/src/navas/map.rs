//! Circle diffeomorphisms in floating point: a Fourier perturbation of the
//! identity, an optional rotation, and an optional rough bump whose
//! derivative is only Hölder continuous.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::NavasError;
use crate::exact::rational::{parse_rational, to_f64};

/// Grid used to confirm `g' > 0` on construction.
pub const VERIFICATION_GRID: usize = 4096;

/// Anything with a lift to the line and a derivative.
pub trait CircleDiffeo: Sync {
    /// Value of the lift at `x`; `lift(x + 1) = lift(x) + 1`.
    fn lift(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// `sign(u) |u|^α (1 - (u/W)²)²` on `|u| < W`, zero elsewhere, scaled by
/// `amplitude` and centered at `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughBump {
    pub alpha: f64,
    pub center: f64,
    pub amplitude: f64,
    pub width: f64,
}

impl RoughBump {
    fn offset(&self, x: f64) -> f64 {
        let u = x - self.center;
        u - u.round()
    }

    fn value(&self, x: f64) -> f64 {
        let u = self.offset(x);
        if u.abs() >= self.width {
            return 0.0;
        }
        let r = u / self.width;
        let w = (1.0 - r * r).powi(2);
        self.amplitude * u.signum() * u.abs().powf(self.alpha) * w
    }

    fn derivative(&self, x: f64) -> f64 {
        let u = self.offset(x);
        if u.abs() >= self.width {
            return 0.0;
        }
        let a = u.abs();
        let r = u / self.width;
        let w = (1.0 - r * r).powi(2);
        let main = if a == 0.0 {
            0.0
        } else {
            self.alpha * a.powf(self.alpha - 1.0) * w
        };
        let cut = 4.0 * a.powf(self.alpha + 1.0) * (1.0 - r * r) / (self.width * self.width);
        self.amplitude * (main - cut)
    }
}

/// `x ↦ x + shift + Σ_j (c_j sin 2πjx + d_j cos 2πjx) + bump(x)`, `j ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCircleMap {
    shift: f64,
    c: Vec<f64>,
    d: Vec<f64>,
    rough: Option<RoughBump>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierJson {
    #[serde(default)]
    pub c: Vec<f64>,
    #[serde(default)]
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughJson {
    pub alpha: f64,
    pub center: String,
    pub amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fourier: Option<FourierJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rough: Option<RoughJson>,
}

pub const DEFAULT_ROUGH_WIDTH: f64 = 0.25;

impl SmoothCircleMap {
    /// Checks `Σ 2πj (|c_j| + |d_j|) < 1` and `g' > 0` on the verification grid.
    pub fn new(
        shift: f64,
        c: Vec<f64>,
        d: Vec<f64>,
        rough: Option<RoughBump>,
    ) -> Result<Self, NavasError> {
        let all = c.iter().chain(&d).copied().chain([shift]);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(NavasError::InvalidMap("coefficients must be finite".into()));
        }
        let mass = Self::fourier_mass(&c, &d);
        if mass >= 1.0 {
            return Err(NavasError::InvalidMap(format!(
                "sum of 2*pi*j*(|c_j| + |d_j|) is {mass}, needs to be below 1"
            )));
        }
        if let Some(b) = &rough {
            if !(b.alpha > 1.0 && b.alpha.is_finite()) {
                return Err(NavasError::InvalidMap(format!(
                    "rough exponent {} must exceed 1",
                    b.alpha
                )));
            }
            if !(b.width > 0.0 && b.width <= 0.5)
                || !b.amplitude.is_finite()
                || !b.center.is_finite()
            {
                return Err(NavasError::InvalidMap(
                    "rough bump needs 0 < width <= 1/2 and finite parameters".into(),
                ));
            }
        }
        let g = SmoothCircleMap { shift, c, d, rough };
        for i in 0..VERIFICATION_GRID {
            let x = i as f64 / VERIFICATION_GRID as f64;
            let v = g.derivative(x);
            if !(v > 0.0) {
                return Err(NavasError::NonPositiveDerivative { x, value: v });
            }
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        SmoothCircleMap {
            shift: 0.0,
            c: Vec::new(),
            d: Vec::new(),
            rough: None,
        }
    }

    pub fn rotation(shift: f64) -> Self {
        SmoothCircleMap {
            shift,
            ..Self::identity()
        }
    }

    fn fourier_mass(c: &[f64], d: &[f64]) -> f64 {
        let n = c.len().max(d.len());
        (0..n)
            .map(|k| {
                let j = (k + 1) as f64;
                TAU * j * (c.get(k).map_or(0.0, |v| v.abs()) + d.get(k).map_or(0.0, |v| v.abs()))
            })
            .sum()
    }

    /// `Σ 2πj (|c_j| + |d_j|)`, an upper bound for `|g' - 1|` without the bump.
    pub fn mass(&self) -> f64 {
        Self::fourier_mass(&self.c, &self.d)
    }

    pub fn rough(&self) -> Option<&RoughBump> {
        self.rough.as_ref()
    }

    /// Fourier coefficients drawn uniformly, then scaled to a mass drawn
    /// from `[0.2, 0.8]`.
    pub fn random(modes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut d: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let target = rng.gen_range(0.2..0.8);
        let scale = target / Self::fourier_mass(&c, &d).max(f64::MIN_POSITIVE);
        c.iter_mut().chain(d.iter_mut()).for_each(|v| *v *= scale);
        Self::new(0.0, c, d, None).expect("mass below 1 keeps the derivative positive")
    }

    pub fn from_json(json: &MapJson) -> Result<Self, NavasError> {
        let shift = match &json.shift {
            Some(s) => to_f64(
                &parse_rational(s).map_err(|e| NavasError::InvalidMap(format!("shift: {e}")))?,
            ),
            None => 0.0,
        };
        let (c, d) = json
            .fourier
            .as_ref()
            .map_or((Vec::new(), Vec::new()), |f| (f.c.clone(), f.d.clone()));
        let rough = match &json.rough {
            Some(r) => Some(RoughBump {
                alpha: r.alpha,
                center: to_f64(
                    &parse_rational(&r.center)
                        .map_err(|e| NavasError::InvalidMap(format!("center: {e}")))?,
                ),
                amplitude: r.amplitude,
                width: r.width.unwrap_or(DEFAULT_ROUGH_WIDTH),
            }),
            None => None,
        };
        Self::new(shift, c, d, rough)
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            shift: (self.shift != 0.0).then(|| format!("{}", self.shift)),
            fourier: Some(FourierJson {
                c: self.c.clone(),
                d: self.d.clone(),
            }),
            rough: self.rough.map(|b| RoughJson {
                alpha: b.alpha,
                center: format!("{}", b.center),
                amplitude: b.amplitude,
                width: Some(b.width),
            }),
        }
    }

    /// Second derivative of the smooth part; the bump has none at its center.
    pub fn second_derivative(&self, x: f64) -> Option<f64> {
        if self.rough.is_some() {
            return None;
        }
        let mut s = 0.0;
        for (k, (c, d)) in self.modes().enumerate() {
            let w = TAU * (k + 1) as f64;
            s -= w * w * (c * (w * x).sin() + d * (w * x).cos());
        }
        Some(s)
    }

    fn modes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.c.len().max(self.d.len());
        (0..n).map(|k| {
            (
                self.c.get(k).copied().unwrap_or(0.0),
                self.d.get(k).copied().unwrap_or(0.0),
            )
        })
    }
}

impl CircleDiffeo for SmoothCircleMap {
    fn lift(&self, x: f64) -> f64 {
        let mut y = x + self.shift;
        for (k, (c, d)) in self.modes().enumerate() {
            let w = TAU * (k + 1) as f64;
            y += c * (w * x).sin() + d * (w * x).cos();
        }
        if let Some(b) = &self.rough {
            y += b.value(x);
        }
        y
    }

    fn derivative(&self, x: f64) -> f64 {
        let mut s = 1.0;
        for (k, (c, d)) in self.modes().enumerate() {
            let w = TAU * (k + 1) as f64;
            s += w * (c * (w * x).cos() - d * (w * x).sin());
        }
        if let Some(b) = &self.rough {
            s += b.derivative(x);
        }
        s
    }
}

/// `outer ∘ inner`.
pub struct Composed<'a, A: ?Sized, B: ?Sized> {
    pub outer: &'a A,
    pub inner: &'a B,
}

impl<A: CircleDiffeo + ?Sized, B: CircleDiffeo + ?Sized> CircleDiffeo for Composed<'_, A, B> {
    fn lift(&self, x: f64) -> f64 {
        self.outer.lift(self.inner.lift(x))
    }

    fn derivative(&self, x: f64) -> f64 {
        self.outer.derivative(self.inner.lift(x)) * self.inner.derivative(x)
    }
}
