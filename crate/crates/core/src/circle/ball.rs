//! Finite pieces of a group acting on the circle: each element carries a word,
//! its map, and products or inverses that stay inside the piece.

use std::collections::HashMap;

use crate::exact::GroupWord;

use super::CircleMap;

#[derive(Debug, Clone)]
pub struct ActionBall<M: CircleMap> {
    words: Vec<GroupWord>,
    maps: Vec<M>,
    /// Index of each generator's element, in generator order.
    generator_index: Vec<usize>,
    generators: Vec<M>,
    product: Vec<Vec<Option<usize>>>,
    inverse: Vec<Option<usize>>,
}

impl<M: CircleMap> ActionBall<M> {
    /// Word ball of the image group: elements are distinct maps, found by
    /// breadth-first search with generators and inverses. Element 0 is `e`.
    pub fn image(generators: &[M], radius: u64) -> Self {
        let identity = generators
            .first()
            .map(|g| g.identity_like())
            .expect("at least one generator");
        let mut index: HashMap<M, usize> = HashMap::new();
        index.insert(identity.clone(), 0);
        let mut words = vec![GroupWord::identity()];
        let mut maps = vec![identity];
        let mut frontier = vec![0usize];
        let inverses: Vec<M> = generators.iter().map(|g| g.inverse()).collect();
        for _ in 0..radius {
            let mut next = Vec::new();
            for &i in &frontier {
                for (g, gen) in generators.iter().enumerate() {
                    for (e, m) in [(1i64, gen), (-1, &inverses[g])] {
                        let image = maps[i].compose(m);
                        if !index.contains_key(&image) {
                            index.insert(image.clone(), maps.len());
                            words.push(words[i].mul(&GroupWord::power(g, e)));
                            maps.push(image);
                            next.push(maps.len() - 1);
                        }
                    }
                }
            }
            frontier = next;
        }
        let generator_index = generators
            .iter()
            .map(|g| index.get(g).copied().unwrap_or(0))
            .collect();
        let n = maps.len();
        let product = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| index.get(&maps[i].compose(&maps[j])).copied())
                    .collect()
            })
            .collect();
        let inverse = maps
            .iter()
            .map(|m| index.get(&m.inverse()).copied())
            .collect();
        ActionBall {
            words,
            maps,
            generator_index,
            generators: generators.to_vec(),
            product,
            inverse,
        }
    }

    /// `{gⁿ : |n| ≤ radius}` as elements of `ℤ` acting through `g`, ordered
    /// `0, 1, -1, 2, -2, ...`; distinct exponents stay distinct even when the
    /// maps coincide.
    pub fn integers(generator: &M, radius: u64) -> Self {
        let r = radius as i64;
        let mut exps = vec![0i64];
        for n in 1..=r {
            exps.push(n);
            exps.push(-n);
        }
        let pos: HashMap<i64, usize> = exps.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let inv = generator.inverse();
        let power = |e: i64| {
            let base = if e < 0 { &inv } else { generator };
            let mut m = generator.identity_like();
            for _ in 0..e.unsigned_abs() {
                m = m.compose(base);
            }
            m
        };
        let maps: Vec<M> = exps.iter().map(|&e| power(e)).collect();
        let words = exps.iter().map(|&e| GroupWord::power(0, e)).collect();
        let product = exps
            .iter()
            .map(|&a| exps.iter().map(|&b| pos.get(&(a + b)).copied()).collect())
            .collect();
        let inverse = exps.iter().map(|&e| pos.get(&-e).copied()).collect();
        ActionBall {
            words,
            maps,
            generator_index: if r >= 1 { vec![1] } else { vec![] },
            generators: vec![generator.clone()],
            product,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn words(&self) -> &[GroupWord] {
        &self.words
    }

    pub fn maps(&self) -> &[M] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &M {
        &self.maps[i]
    }

    pub fn generators(&self) -> &[M] {
        &self.generators
    }

    /// Ball indices of the generators (empty for a radius-0 ball).
    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_index
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        self.product[i][j]
    }

    pub fn inverse(&self, i: usize) -> Option<usize> {
        self.inverse[i]
    }

    /// Product of a sequence, if every partial product stays in the ball.
    pub fn product_of(&self, items: &[usize]) -> Option<usize> {
        items
            .iter()
            .try_fold(0usize, |acc, &i| self.product(acc, i))
    }
}
