//! Reproducible random sentences for test corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::formula::Formula;
use crate::structure::Vocabulary;

struct Sampler {
    rng: ChaCha8Rng,
    vocab: Vocabulary,
    points: Vec<String>,
    sets: Vec<String>,
    fresh: usize,
}

impl Sampler {
    fn fresh_point(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn fresh_set(&mut self) -> String {
        self.fresh += 1;
        format!("S{}", self.fresh)
    }

    fn atom(&mut self) -> Formula {
        if self.points.is_empty() {
            return if self.rng.gen_bool(0.5) { Formula::True } else { Formula::False };
        }
        let x = self.points.choose(&mut self.rng).unwrap().clone();
        let y = self.points.choose(&mut self.rng).unwrap().clone();
        let mut choices = vec![0, 1, 1];
        if self.vocab.labels > 0 {
            choices.push(2);
        }
        if self.vocab.root {
            choices.push(3);
        }
        if !self.sets.is_empty() {
            choices.extend([4, 4]);
        }
        match *choices.choose(&mut self.rng).unwrap() {
            0 => Formula::eq(x, y),
            1 => Formula::edge(x, y),
            2 => Formula::label(self.rng.gen_range(1..=self.vocab.labels), x),
            3 => Formula::root(x),
            _ => Formula::member(x, self.sets.choose(&mut self.rng).unwrap().clone()),
        }
    }

    fn formula(&mut self, rank: usize, size: usize) -> Formula {
        let quantify = rank > 0 && (self.points.is_empty() || self.rng.gen_bool(0.6));
        if quantify {
            let set = self.rng.gen_bool(0.35);
            return if set {
                let v = self.fresh_set();
                self.sets.push(v.clone());
                let body = self.formula(rank - 1, size);
                self.sets.pop();
                if self.rng.gen_bool(0.5) {
                    Formula::exists_set(v, body)
                } else {
                    Formula::forall_set(v, body)
                }
            } else {
                let v = self.fresh_point();
                self.points.push(v.clone());
                let body = self.formula(rank - 1, size);
                self.points.pop();
                if self.rng.gen_bool(0.5) {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            };
        }
        if size <= 1 {
            return self.atom();
        }
        match self.rng.gen_range(0..5) {
            0 => Formula::Not(Box::new(self.formula(rank, size - 1))),
            1 | 2 => {
                let parts = (0..self.rng.gen_range(2..=3)).map(|_| self.formula(rank, size / 2)).collect();
                if self.rng.gen_bool(0.5) {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
            3 => Formula::implies(self.formula(rank, size / 2), self.formula(rank, size / 2)),
            _ => self.atom(),
        }
    }
}

/// A pseudo-random sentence of rank at most `m` over `vocab`, determined by
/// `seed`. At `m = 0` only variable-free combinations of `true`/`false` arise.
pub fn sample_formula(seed: u64, m: usize, vocab: Vocabulary) -> Formula {
    let mut s = Sampler {
        rng: ChaCha8Rng::seed_from_u64(seed),
        vocab,
        points: Vec::new(),
        sets: Vec::new(),
        fresh: 0,
    };
    s.formula(m, 6)
}

/// `count` sentences with seeds derived from `seed`.
pub fn sample_corpus(seed: u64, count: usize, m: usize, vocab: Vocabulary) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_formula(rng.gen(), m, vocab)).collect()
}
