//! Bounded searches for finite orbits and for nonidentity elements with a
//! fixed point.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::CircleMap;
use crate::exact::GroupWord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteOrbit<P> {
    pub seed: P,
    /// Sorted in circle order from the origin.
    pub points: Vec<P>,
}

/// Words of length at most `max_length`, one per distinct map, shortest
/// first.
pub fn enumerate_elements<M: CircleMap>(generators: &[M], max_length: u64) -> Vec<(GroupWord, M)> {
    let Some(first) = generators.first() else {
        return Vec::new();
    };
    let identity = first.identity_like();
    let mut seen: HashSet<M> = HashSet::new();
    seen.insert(identity.clone());
    let mut out = vec![(GroupWord::identity(), identity)];
    let mut frontier = vec![0usize];
    let inverses: Vec<M> = generators.iter().map(|g| g.inverse()).collect();
    for _ in 0..max_length {
        let mut next = Vec::new();
        for &i in &frontier {
            for (g, gen) in generators.iter().enumerate() {
                for (e, m) in [(1i64, gen), (-1, &inverses[g])] {
                    let image = out[i].1.compose(m);
                    if seen.insert(image.clone()) {
                        out.push((out[i].0.mul(&GroupWord::power(g, e)), image));
                        next.push(out.len() - 1);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

fn orbit_of<M: CircleMap>(
    generators: &[M],
    inverses: &[M],
    seed: &M::Point,
    max_orbit: usize,
    max_word: u64,
) -> Option<BTreeSet<M::Point>> {
    let mut orbit = BTreeSet::new();
    orbit.insert(seed.clone());
    let mut frontier = vec![seed.clone()];
    for _ in 0..max_word {
        let mut next = Vec::new();
        for p in &frontier {
            for m in generators.iter().chain(inverses) {
                let q = m.apply(p);
                if orbit.insert(q.clone()) {
                    if orbit.len() > max_orbit {
                        return None;
                    }
                    next.push(q);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let closed = orbit
        .iter()
        .all(|p| generators.iter().all(|g| orbit.contains(&g.apply(p))));
    closed.then_some(orbit)
}

/// Tries the origin, breakpoints, and fixed points of words up to length 3
/// (capped by `max_word`) as seeds; returns the first seed whose orbit under
/// words of length `≤ max_word` has at most `max_orbit` points and is closed
/// under every generator.
pub fn finite_orbit_search<M: CircleMap>(
    generators: &[M],
    max_orbit: usize,
    max_word: u64,
) -> Option<FiniteOrbit<M::Point>> {
    let inverses: Vec<M> = generators.iter().map(|g| g.inverse()).collect();
    let mut seeds = vec![M::origin()];
    for g in generators {
        seeds.extend(g.seed_points());
    }
    for (_, m) in enumerate_elements(generators, max_word.min(3))
        .into_iter()
        .skip(1)
    {
        let fp = m.fixed_points();
        seeds.extend(fp.points);
        seeds.extend(fp.intervals.into_iter().flat_map(|(a, b)| [a, b]));
    }
    let mut tried = HashSet::new();
    for seed in seeds {
        if !tried.insert(seed.clone()) {
            continue;
        }
        if let Some(orbit) = orbit_of(generators, &inverses, &seed, max_orbit, max_word) {
            return Some(FiniteOrbit {
                seed,
                points: orbit.into_iter().collect(),
            });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum HolderOutcome<P> {
    /// The generators commute pairwise, so the group is abelian.
    Abelian,
    Found {
        word: GroupWord,
        point: P,
        #[serde(rename = "wordLength")]
        word_length: u64,
    },
    NotFound {
        #[serde(rename = "elementsChecked")]
        elements_checked: usize,
    },
}

/// Shortest nonidentity element (up to `max_word`) with a fixed point, after
/// checking that some pair of generators fails to commute.
pub fn holder_witness<M: CircleMap>(generators: &[M], max_word: u64) -> HolderOutcome<M::Point> {
    let commute = generators.iter().enumerate().all(|(i, a)| {
        generators[i + 1..]
            .iter()
            .all(|b| a.compose(b) == b.compose(a))
    });
    if commute {
        return HolderOutcome::Abelian;
    }
    let elements = enumerate_elements(generators, max_word);
    for (word, m) in elements.iter().skip(1) {
        if let Some(p) = m.fixed_points().any(M::origin()) {
            debug_assert!(m.apply(&p) == p);
            return HolderOutcome::Found {
                word_length: word.length(),
                word: word.clone(),
                point: p,
            };
        }
    }
    HolderOutcome::NotFound {
        elements_checked: elements.len().saturating_sub(1),
    }
}
