//! Upper bound for the orbit of 0 under products `⟨g_k⟩ ⋯ ⟨g_1⟩` of cyclic
//! subgroups of line homeomorphisms.

use num_traits::Zero;
use serde::Serialize;

use crate::exact::rational::Rational;
use crate::order::line::{PlLineMap, UnboundedOrbit};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitBound {
    #[serde(with = "crate::exact::rational")]
    pub bound: Rational,
    /// `x_1, ..., x_depth`.
    #[serde(with = "crate::exact::rational::vec")]
    pub steps: Vec<Rational>,
    /// Generator used at each step.
    pub generators: Vec<usize>,
}

/// `x_0 = 0`, `x_k = sup(⟨g⟩ · x_{k-1})` with `g` running through the
/// generators cyclically. `x_depth` bounds the orbit of 0 under every word
/// that reads as a product of `depth` cyclic factors in that order, so depth
/// `r · L` covers all words of length `≤ L` in `r` generators.
pub fn propagate_orbit_bound(
    generators: &[PlLineMap],
    depth: usize,
) -> Result<OrbitBound, UnboundedOrbit> {
    let mut x = Rational::zero();
    let mut steps = Vec::with_capacity(depth);
    let mut used = Vec::with_capacity(depth);
    if !generators.is_empty() {
        for k in 0..depth {
            let i = k % generators.len();
            x = generators[i].orbit_sup(&x, i)?;
            steps.push(x.clone());
            used.push(i);
        }
    }
    Ok(OrbitBound {
        bound: x,
        steps,
        generators: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn identity_generators_give_zero() {
        let id = PlLineMap::identity();
        let out = propagate_orbit_bound(&[id.clone(), id], 6).unwrap();
        assert_eq!(out.bound, int(0));
    }

    #[test]
    fn two_bumps() {
        let g = PlLineMap::bump(int(-1), int(0), int(1), int(2)).unwrap();
        let h = PlLineMap::bump(int(1), int(2), int(3), int(5)).unwrap();
        let out = propagate_orbit_bound(&[g, h], 2).unwrap();
        assert_eq!(out.steps, vec![int(2), int(5)]);
    }

    #[test]
    fn translation_is_unbounded() {
        let t = PlLineMap::translation(int(1));
        let err = propagate_orbit_bound(&[PlLineMap::identity(), t], 4).unwrap_err();
        assert_eq!(err.generator, 1);
    }
}
