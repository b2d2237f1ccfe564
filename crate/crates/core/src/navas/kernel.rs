//! The singular kernel `Φ(x, y) = f(x - y)` with `f = 1/dist(·, 0)` and the
//! action `F^g(x, y) = F(g x, g y) |g'(x)|^{1/2} |g'(y)|^{1/2}`.

use super::map::CircleDiffeo;
use super::NavasError;

/// Distance to the nearest integer.
pub fn circle_dist(t: f64) -> f64 {
    (t - t.round()).abs()
}

/// `f(t) = 1 / dist(t, 0)`.
pub fn profile(t: f64) -> f64 {
    1.0 / circle_dist(t)
}

pub trait Kernel: Sync {
    fn eval(&self, x: f64, y: f64) -> f64;
}

/// `Φ(x, y) = f(x - y)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SingularKernel;

impl Kernel for SingularKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        profile(x - y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantKernel(pub f64);

impl Kernel for ConstantKernel {
    fn eval(&self, _: f64, _: f64) -> f64 {
        self.0
    }
}

/// `F^g` as a kernel in its own right.
pub struct Acted<'a, K: ?Sized, G: ?Sized> {
    pub kernel: &'a K,
    pub map: &'a G,
}

impl<K: Kernel + ?Sized, G: CircleDiffeo + ?Sized> Kernel for Acted<'_, K, G> {
    fn eval(&self, x: f64, y: f64) -> f64 {
        let scale = (self.map.derivative(x).abs() * self.map.derivative(y).abs()).sqrt();
        self.kernel.eval(self.map.lift(x), self.map.lift(y)) * scale
    }
}

/// Samples of `F^g` at the given points.
pub fn act_on_kernel<K: Kernel + ?Sized, G: CircleDiffeo + ?Sized>(
    kernel: &K,
    map: &G,
    points: &[(f64, f64)],
) -> Result<Vec<f64>, NavasError> {
    for &(x, y) in points {
        for t in [x, y] {
            let v = map.derivative(t);
            if !(v > 0.0) {
                return Err(NavasError::NonPositiveDerivative { x: t, value: v });
            }
        }
    }
    let acted = Acted { kernel, map };
    Ok(points.iter().map(|&(x, y)| acted.eval(x, y)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::navas::map::SmoothCircleMap;

    #[test]
    fn profile_is_even_and_periodic() {
        for t in [0.1, 0.25, 0.4, 0.49] {
            assert_eq!(profile(t), profile(-t));
            assert!((profile(t + 3.0) - profile(t)).abs() < 1e-9);
        }
        assert_eq!(profile(0.5), 2.0);
    }

    #[test]
    fn identity_and_rotation_fix_kernels() {
        let pts = [(0.1, 0.4), (0.7, 0.2), (0.05, 0.95)];
        let id = SmoothCircleMap::identity();
        let phi: Vec<f64> = pts
            .iter()
            .map(|&(x, y)| SingularKernel.eval(x, y))
            .collect();
        assert_eq!(act_on_kernel(&SingularKernel, &id, &pts).unwrap(), phi);
        let r = SmoothCircleMap::rotation(0.3);
        let ones = act_on_kernel(&ConstantKernel(1.0), &r, &pts).unwrap();
        assert!(ones.iter().all(|&v| v == 1.0));
        let rotated = act_on_kernel(&SingularKernel, &r, &pts).unwrap();
        for (a, b) in rotated.iter().zip(&phi) {
            assert!((a - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn action_preserves_symmetry() {
        let g = SmoothCircleMap::random(3, 4);
        let acted = Acted {
            kernel: &SingularKernel,
            map: &g,
        };
        for (x, y) in [(0.1, 0.3), (0.8, 0.15)] {
            assert_eq!(acted.eval(x, y), acted.eval(y, x));
        }
    }
}
