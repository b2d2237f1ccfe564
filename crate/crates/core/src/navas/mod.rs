//! Floating-point probes of the half-density action on the singular kernel
//! `Φ(x, y) = 1/dist(x, y)` of the circle.

pub mod kernel;
pub mod map;
pub mod probe;

use thiserror::Error;

pub use kernel::{act_on_kernel, Acted, ConstantKernel, Kernel, SingularKernel};
pub use map::{CircleDiffeo, Composed, MapJson, RoughBump, SmoothCircleMap};
pub use probe::{
    boundedness_probe, kernel_probe, square_integrability_probe, GridLevel, KernelGrid,
    LevelReport, ProbeReport, ProbeVerdict, StabilizationCriterion,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NavasError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("derivative {value} at x = {x} is not positive")]
    NonPositiveDerivative { x: f64, value: f64 },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("non-finite values near the diagonal at n = {n}, even after widening the band")]
    Overflow { n: usize },
}
