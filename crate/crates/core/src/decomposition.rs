//! Factoring determinant-one matrices into unipotent elementary matrices.
//!
//! Over the rationals the reduction is plain Gaussian elimination with a
//! row addition standing in for a swap, followed by the four-factor identity
//!
//! ```text
//! diag(d, 1/d) = E21(1) E12((1-d)/d) E21(-d) E12((d-1)/d^2)
//! ```
//!
//! for the remaining diagonal, applied to adjacent coordinate pairs. Over the
//! integers each column is cleared by the Euclidean algorithm on rows; the
//! diagonal left behind is `±1`, and the same identity with `d = -1` has
//! integer parameters. Neither route is length-optimal; [`minimal_decomposition`]
//! is a breadth-first oracle for small instances.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::rational::{format_rational, int, parse_rational, Rational};
use crate::exact::{ElementaryMatrix, SpecialLinearElement, SquareMatrix};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "z")]
    Integers,
    #[serde(rename = "q")]
    Rationals,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("matrix has non-integer entries; integer decomposition needs SL(n, Z)")]
    NotIntegral,
    #[error("coefficient bound must be at least 1")]
    InvalidCoefficientBound,
    #[error("search frontier exceeded the node budget of {0}")]
    BudgetExceeded(usize),
    #[error("invalid factor: {0}")]
    BadFactor(String),
}

/// Ordered elementary factors whose left-to-right product is the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    n: usize,
    factors: Vec<ElementaryMatrix>,
    ring: Ring,
}

impl Decomposition {
    pub fn new(n: usize, factors: Vec<ElementaryMatrix>, ring: Ring) -> Self {
        Decomposition { n, factors, ring }
    }

    pub fn factors(&self) -> &[ElementaryMatrix] {
        &self.factors
    }

    pub fn count(&self) -> usize {
        self.factors.len()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn product(&self) -> SpecialLinearElement {
        let mut m = SquareMatrix::identity(self.n);
        for f in &self.factors {
            f.apply_right(&mut m);
        }
        SpecialLinearElement::new(m).expect("product of unipotents has determinant one")
    }

    pub fn max_abs_parameter(&self) -> Rational {
        self.factors
            .iter()
            .map(|f| f.t().abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            ring: self.ring,
            n: self.n,
            factors: self
                .factors
                .iter()
                .map(|f| FactorJson {
                    i: f.i() + 1,
                    j: f.j() + 1,
                    t: format_rational(f.t()),
                })
                .collect(),
            count: self.count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub i: usize,
    pub j: usize,
    pub t: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub ring: Ring,
    pub n: usize,
    pub factors: Vec<FactorJson>,
    pub count: usize,
}

impl DecompositionJson {
    pub fn to_decomposition(&self) -> Result<Decomposition, DecompositionError> {
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let t = parse_rational(&f.t)
                    .map_err(|e| DecompositionError::BadFactor(e.to_string()))?;
                if f.i == 0 || f.j == 0 {
                    return Err(DecompositionError::BadFactor(
                        "indices are one-based".into(),
                    ));
                }
                ElementaryMatrix::new(self.n, f.i - 1, f.j - 1, t)
                    .map_err(|e| DecompositionError::BadFactor(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if factors.len() != self.count {
            return Err(DecompositionError::BadFactor(
                "count disagrees with factor list".into(),
            ));
        }
        Ok(Decomposition::new(self.n, factors, self.ring))
    }
}

/// Records row operations `L_1, L_2, ...` applied to a working copy; the
/// input equals `L_1^{-1} L_2^{-1} ... L_r^{-1} * (working copy)`.
struct Reducer {
    work: SquareMatrix,
    inverses: Vec<ElementaryMatrix>,
}

impl Reducer {
    fn new(m: &SpecialLinearElement) -> Self {
        Reducer {
            work: m.matrix().clone(),
            inverses: Vec::new(),
        }
    }

    fn n(&self) -> usize {
        self.work.n()
    }

    /// `row_i += t * row_j`.
    fn row_add(&mut self, i: usize, j: usize, t: Rational) {
        if t.is_zero() {
            return;
        }
        let op = ElementaryMatrix::new(self.n(), i, j, t).expect("distinct indices");
        op.apply_left(&mut self.work);
        self.inverses.push(op.inverse());
    }

    fn entry(&self, i: usize, j: usize) -> &Rational {
        self.work.get(i, j)
    }

    /// Clears everything above the diagonal of an upper-triangular work matrix.
    fn clear_above(&mut self) {
        let n = self.n();
        for c in (0..n).rev() {
            for r in 0..c {
                if !self.entry(r, c).is_zero() {
                    let t = -(self.entry(r, c) / self.entry(c, c));
                    self.row_add(r, c, t);
                }
            }
        }
    }

    fn finish(self, ring: Ring) -> Decomposition {
        let n = self.work.n();
        let diag: Vec<Rational> = (0..n).map(|i| self.work.get(i, i).clone()).collect();
        let mut factors = self.inverses;
        factors.extend(diagonal_factors(&diag));
        Decomposition::new(n, factors, ring)
    }
}

/// Elementary factors of `diag(values)`, which must have product one.
pub fn diagonal_factors(values: &[Rational]) -> Vec<ElementaryMatrix> {
    let n = values.len();
    let mut out = Vec::new();
    let mut cumulative = Rational::one();
    for k in 0..n.saturating_sub(1) {
        cumulative *= &values[k];
        if cumulative.is_one() {
            continue;
        }
        let d = &cumulative;
        let one = Rational::one();
        let e = |i: usize, j: usize, t: Rational| {
            ElementaryMatrix::new(n, i, j, t).expect("adjacent indices")
        };
        out.push(e(k + 1, k, one.clone()));
        out.push(e(k, k + 1, (&one - d) / d));
        out.push(e(k + 1, k, -d.clone()));
        out.push(e(k, k + 1, (d - &one) / (d * d)));
    }
    out
}

/// Elimination over Q. For `n = 3` at most 2 pivot fixes, 3 + 3 eliminations
/// and 8 diagonal factors: never more than 16 factors.
pub fn decompose_over_field(m: &SpecialLinearElement) -> Decomposition {
    let n = m.n();
    let mut red = Reducer::new(m);
    for c in 0..n {
        if red.entry(c, c).is_zero() {
            let r = (c + 1..n)
                .find(|&r| !red.entry(r, c).is_zero())
                .expect("nonsingular matrix has a nonzero entry below a zero pivot");
            red.row_add(c, r, Rational::one());
        }
        for r in c + 1..n {
            if !red.entry(r, c).is_zero() {
                let t = -(red.entry(r, c) / red.entry(c, c));
                red.row_add(r, c, t);
            }
        }
    }
    red.clear_above();
    red.finish(Ring::Rationals)
}

/// Euclidean reduction over Z; every emitted parameter is an integer.
pub fn decompose_over_integers(
    m: &SpecialLinearElement,
) -> Result<Decomposition, DecompositionError> {
    if !m.matrix().is_integral() {
        return Err(DecompositionError::NotIntegral);
    }
    let n = m.n();
    let mut red = Reducer::new(m);
    let numer = |x: &Rational| -> BigInt { x.numer().clone() };
    for c in 0..n - 1 {
        loop {
            let nonzero: Vec<usize> = (c..n).filter(|&r| !red.entry(r, c).is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let pivot = *nonzero
                .iter()
                .min_by(|&&a, &&b| {
                    red.entry(a, c)
                        .abs()
                        .cmp(&red.entry(b, c).abs())
                        .then(a.cmp(&b))
                })
                .expect("nonempty");
            let p = numer(red.entry(pivot, c));
            for &r in &nonzero {
                if r == pivot {
                    continue;
                }
                let q = numer(red.entry(r, c)) / &p;
                if !q.is_zero() {
                    red.row_add(r, pivot, Rational::from_integer(-q));
                }
            }
        }
        let r = (c..n)
            .find(|&r| !red.entry(r, c).is_zero())
            .expect("column of a unimodular matrix cannot vanish");
        if r != c {
            red.row_add(c, r, Rational::one());
            red.row_add(r, c, -Rational::one());
        }
    }
    red.clear_above();
    Ok(red.finish(Ring::Integers))
}

pub fn decompose(
    m: &SpecialLinearElement,
    ring: Ring,
) -> Result<Decomposition, DecompositionError> {
    match ring {
        Ring::Integers => decompose_over_integers(m),
        Ring::Rationals => Ok(decompose_over_field(m)),
    }
}

/// Product of `word_length` random elementary matrices; deterministic in `seed`.
pub fn random_special_linear(
    n: usize,
    ring: Ring,
    word_length: usize,
    coeff_bound: i64,
    seed: u64,
) -> Result<SpecialLinearElement, DecompositionError> {
    if coeff_bound < 1 {
        return Err(DecompositionError::InvalidCoefficientBound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = SquareMatrix::identity(n);
    for _ in 0..word_length {
        random_elementary(&mut rng, n, ring, coeff_bound).apply_right(&mut m);
    }
    Ok(SpecialLinearElement::new(m).expect("unipotent product"))
}

fn random_elementary(rng: &mut ChaCha8Rng, n: usize, ring: Ring, bound: i64) -> ElementaryMatrix {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let mut numer = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        numer = -numer;
    }
    let t = match ring {
        Ring::Integers => int(numer),
        Ring::Rationals => {
            Rational::new(BigInt::from(numer), BigInt::from(rng.gen_range(1..=bound)))
        }
    };
    ElementaryMatrix::new(n, i, j, t).expect("distinct indices")
}

/// Breadth-first search for a shortest product of elementary matrices with
/// integer parameters in `[-coeff_bound, coeff_bound] \ {0}`. Among shortest
/// products the lexicographically smallest factor sequence is returned.
pub fn minimal_decomposition(
    m: &SpecialLinearElement,
    coeff_bound: i64,
    length_bound: usize,
    node_budget: usize,
) -> Result<Option<Decomposition>, DecompositionError> {
    if coeff_bound < 1 {
        return Err(DecompositionError::InvalidCoefficientBound);
    }
    let n = m.n();
    let target = m.matrix();
    let mut generators = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for t in (-coeff_bound..=coeff_bound).filter(|&t| t != 0) {
                generators.push(ElementaryMatrix::new(n, i, j, int(t)).expect("distinct indices"));
            }
        }
    }
    generators.sort();

    // (state, parent index, generator index)
    let mut nodes: Vec<(SquareMatrix, usize, usize)> =
        vec![(SquareMatrix::identity(n), usize::MAX, 0)];
    let mut seen: HashMap<SquareMatrix, ()> = HashMap::new();
    seen.insert(SquareMatrix::identity(n), ());
    let rebuild = |nodes: &[(SquareMatrix, usize, usize)], mut idx: usize| {
        let mut factors = Vec::new();
        while nodes[idx].1 != usize::MAX {
            factors.push(generators[nodes[idx].2].clone());
            idx = nodes[idx].1;
        }
        factors.reverse();
        Decomposition::new(n, factors, Ring::Integers)
    };
    if target.is_identity() {
        return Ok(Some(Decomposition::new(n, Vec::new(), Ring::Integers)));
    }
    let mut layer_start = 0;
    for _ in 0..length_bound {
        let layer_end = nodes.len();
        for parent in layer_start..layer_end {
            for (gi, g) in generators.iter().enumerate() {
                let mut next = nodes[parent].0.clone();
                g.apply_right(&mut next);
                if seen.contains_key(&next) {
                    continue;
                }
                if nodes.len() >= node_budget {
                    return Err(DecompositionError::BudgetExceeded(node_budget));
                }
                let hit = &next == target;
                seen.insert(next.clone(), ());
                nodes.push((next, parent, gi));
                if hit {
                    return Ok(Some(rebuild(&nodes, nodes.len() - 1)));
                }
            }
        }
        layer_start = layer_end;
        if layer_start == nodes.len() {
            break;
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionStats {
    pub ring: Ring,
    pub n: usize,
    pub word_length: usize,
    pub coeff_bound: i64,
    pub seed: u64,
    pub sample_size: usize,
    pub count_histogram: BTreeMap<usize, usize>,
    pub max_count: usize,
    pub mean_count: f64,
    pub all_round_trips_exact: bool,
}

impl DecompositionStats {
    pub fn from_counts(
        ring: Ring,
        n: usize,
        word_length: usize,
        coeff_bound: i64,
        seed: u64,
        counts: &[usize],
        all_round_trips_exact: bool,
    ) -> Self {
        let mut count_histogram = BTreeMap::new();
        for &c in counts {
            *count_histogram.entry(c).or_insert(0) += 1;
        }
        let sample_size = counts.len();
        let mean_count = if sample_size == 0 {
            0.0
        } else {
            counts.iter().sum::<usize>() as f64 / sample_size as f64
        };
        DecompositionStats {
            ring,
            n,
            word_length,
            coeff_bound,
            seed,
            sample_size,
            count_histogram,
            max_count: counts.iter().copied().max().unwrap_or(0),
            mean_count,
            all_round_trips_exact,
        }
    }
}

/// Per-sample seeds are `seed + index`, so sample `k` is reproducible alone.
pub fn sample_matrices(
    n: usize,
    ring: Ring,
    samples: usize,
    word_length: usize,
    coeff_bound: i64,
    seed: u64,
) -> Result<Vec<SpecialLinearElement>, DecompositionError> {
    (0..samples)
        .into_par_iter()
        .map(|k| {
            random_special_linear(
                n,
                ring,
                word_length,
                coeff_bound,
                seed.wrapping_add(k as u64),
            )
        })
        .collect()
}

/// Decomposes a batch in parallel; results stay in input order.
pub fn decompose_batch(
    matrices: &[SpecialLinearElement],
    ring: Ring,
) -> Result<Vec<Decomposition>, DecompositionError> {
    matrices.par_iter().map(|m| decompose(m, ring)).collect()
}

pub fn decomposition_stats(
    n: usize,
    ring: Ring,
    samples: usize,
    word_length: usize,
    coeff_bound: i64,
    seed: u64,
) -> Result<DecompositionStats, DecompositionError> {
    let matrices = sample_matrices(n, ring, samples, word_length, coeff_bound, seed)?;
    let decomps = decompose_batch(&matrices, ring)?;
    let exact = matrices
        .par_iter()
        .zip(decomps.par_iter())
        .all(|(m, d)| &d.product() == m);
    let counts: Vec<usize> = decomps.iter().map(Decomposition::count).collect();
    Ok(DecompositionStats::from_counts(
        ring,
        n,
        word_length,
        coeff_bound,
        seed,
        &counts,
        exact,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn elementary(n: usize, i: usize, j: usize, t: i64) -> ElementaryMatrix {
        ElementaryMatrix::new(n, i, j, int(t)).unwrap()
    }

    #[test]
    fn identity_has_empty_decomposition() {
        let id = SpecialLinearElement::identity(3);
        assert_eq!(decompose_over_field(&id).count(), 0);
        assert_eq!(decompose_over_integers(&id).unwrap().count(), 0);
    }

    #[test]
    fn single_elementary_is_its_own_factor() {
        let e21 = elementary(3, 1, 0, 5);
        let d = decompose_over_field(&e21.realize());
        assert_eq!(d.factors(), &[e21.clone()]);
        let a4 = elementary(3, 1, 0, 3);
        let d = decompose_over_integers(&a4.realize()).unwrap();
        assert_eq!(d.factors(), &[a4]);
    }

    #[test]
    fn diagonal_uses_four_factor_identity() {
        let diag =
            SpecialLinearElement::new(SquareMatrix::diagonal(vec![int(2), ratio(1, 2), int(1)]))
                .unwrap();
        let d = decompose_over_field(&diag);
        assert_eq!(d.count(), 4);
        assert_eq!(d.product(), diag);
    }

    #[test]
    fn negative_identity_block_over_integers() {
        let m = SpecialLinearElement::new(SquareMatrix::diagonal(vec![int(-1), int(-1), int(1)]))
            .unwrap();
        let d = decompose_over_integers(&m).unwrap();
        assert_eq!(d.count(), 4);
        assert!(d.factors().iter().all(|f| f.t().is_integer()));
        assert_eq!(d.product(), m);
    }

    #[test]
    fn zero_pivot_is_fixed_by_row_addition() {
        let m = SpecialLinearElement::new(SquareMatrix::from_int_rows([
            [0, -1, 0],
            [1, 0, 0],
            [0, 0, 1],
        ]))
        .unwrap();
        for ring in [Ring::Integers, Ring::Rationals] {
            let d = decompose(&m, ring).unwrap();
            assert_eq!(d.product(), m);
        }
    }

    #[test]
    fn rejects_rational_input_over_integers() {
        let m =
            SpecialLinearElement::new(SquareMatrix::diagonal(vec![int(2), ratio(1, 2)])).unwrap();
        assert_eq!(
            decompose_over_integers(&m),
            Err(DecompositionError::NotIntegral)
        );
    }

    #[test]
    fn random_generator_is_deterministic() {
        assert!(random_special_linear(3, Ring::Integers, 0, 3, 9)
            .unwrap()
            .is_identity());
        let a = random_special_linear(3, Ring::Integers, 20, 3, 42).unwrap();
        let b = random_special_linear(3, Ring::Integers, 20, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matrix().determinant(), int(1));
        let c = random_special_linear(3, Ring::Integers, 20, 3, 43).unwrap();
        assert_ne!(a, c);
        assert!(random_special_linear(3, Ring::Integers, 2, 0, 1).is_err());
    }

    #[test]
    fn minimal_search_small_cases() {
        let id = SpecialLinearElement::identity(3);
        assert_eq!(
            minimal_decomposition(&id, 1, 4, DEFAULT_NODE_BUDGET)
                .unwrap()
                .unwrap()
                .count(),
            0
        );

        let a2 = elementary(3, 0, 2, 1).realize();
        let d = minimal_decomposition(&a2, 1, 4, DEFAULT_NODE_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(d.count(), 1);
        assert_eq!(d.product(), a2);
    }

    #[test]
    fn minimal_search_budget_error() {
        let m = random_special_linear(3, Ring::Integers, 12, 3, 5).unwrap();
        assert_eq!(
            minimal_decomposition(&m, 1, 6, 50),
            Err(DecompositionError::BudgetExceeded(50))
        );
    }

    #[test]
    fn json_factor_indices_are_one_based() {
        let d = decompose_over_integers(&elementary(3, 0, 1, 3).realize()).unwrap();
        let json = serde_json::to_string(&d.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"ring":"z","n":3,"factors":[{"i":1,"j":2,"t":"3"}],"count":1}"#
        );
        let back: DecompositionJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_decomposition().unwrap(), d);
    }

    #[test]
    fn stats_histogram_totals_sample_size() {
        let stats = decomposition_stats(3, Ring::Integers, 25, 10, 2, 7).unwrap();
        assert_eq!(stats.count_histogram.values().sum::<usize>(), 25);
        assert!(stats.all_round_trips_exact);
        assert_eq!(
            stats.max_count,
            *stats.count_histogram.keys().last().unwrap()
        );
    }
}
