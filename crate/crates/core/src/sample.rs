//! Seeded random generators for property checks, the CLI `--random` driver
//! and the benches. The same seed always produces the same values.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{AlgebraDescriptor, AlgebraElement, BasisKey};
use crate::free_rb::{FreeRb, ShuffleElement, TensorWord};
use crate::linear::{add_term, Terms};
use crate::localize::{LocalizedElement, RbLocalization};
use crate::presented::RBExpression;
use crate::scalar::Scalar;

/// Which part of S⁻¹A a sampled key is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyKind {
    Polynomial,
    Fractional,
    Any,
}

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    /// Coefficients are nonzero integers in `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
    pub max_terms: usize,
    pub max_exp: u32,
    pub max_denom_power: u32,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            coeff_bound: 5,
            max_terms: 3,
            max_exp: 2,
            max_denom_power: 2,
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn flip(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn coeff(&mut self) -> Scalar {
        let b = self.coeff_bound.max(1);
        loop {
            let c = self.rng.gen_range(-b..=b);
            if c != 0 {
                return Scalar::from_int(c);
            }
        }
    }

    pub fn key(&mut self, alg: &AlgebraDescriptor, kind: KeyKind) -> BasisKey {
        let kind = match (kind, alg.denominator()) {
            (_, None) => KeyKind::Polynomial,
            (KeyKind::Any, Some(_)) => {
                if self.flip() {
                    KeyKind::Polynomial
                } else {
                    KeyKind::Fractional
                }
            }
            (k, Some(_)) => k,
        };
        let mut exps: Vec<u32> = (0..alg.nvars())
            .map(|_| self.rng.gen_range(0..=self.max_exp))
            .collect();
        let mut denom_power = 0;
        if kind == KeyKind::Fractional {
            let d = alg.denominator().expect("checked above");
            exps[d.var] = self.rng.gen_range(0..d.degree());
            denom_power = self.rng.gen_range(1..=self.max_denom_power.max(1));
        }
        BasisKey { exps, denom_power }
    }

    fn combination<K: Ord>(&mut self, mut next: impl FnMut(&mut Self) -> K) -> Terms<K> {
        let n = self.range(1, self.max_terms.max(1));
        let mut terms = Terms::new();
        for _ in 0..n {
            let k = next(self);
            let c = self.coeff();
            add_term(&mut terms, k, c);
        }
        terms
    }

    pub fn element(&mut self, alg: &Arc<AlgebraDescriptor>, kind: KeyKind) -> AlgebraElement {
        let terms = self.combination(|s| s.key(alg, kind));
        AlgebraElement::from_terms(alg, terms).expect("sampled keys are valid")
    }

    pub fn word(
        &mut self,
        alg: &AlgebraDescriptor,
        len: usize,
        head: KeyKind,
        rest: KeyKind,
    ) -> TensorWord {
        let mut slots = vec![self.key(alg, head)];
        for _ in 1..len {
            slots.push(self.key(alg, rest));
        }
        TensorWord::new(slots).expect("nonempty")
    }

    /// An element of Ш(A) with words of length `1..=max_len`.
    pub fn shuffle_element(&mut self, ring: &Arc<FreeRb>, max_len: usize) -> ShuffleElement {
        let alg = Arc::clone(ring.algebra());
        let terms = self.combination(|s| {
            let len = s.range(1, max_len);
            s.word(&alg, len, KeyKind::Any, KeyKind::Any)
        });
        ShuffleElement::from_terms(ring, terms).expect("sampled words are valid")
    }

    /// An element of the localized carrier with words of length `1..=max_len`.
    pub fn localized_element(
        &mut self,
        loc: &Arc<RbLocalization>,
        max_len: usize,
    ) -> LocalizedElement {
        let alg = Arc::clone(loc.algebra());
        let terms = self.combination(|s| {
            let len = s.range(1, max_len);
            s.word(&alg, len, KeyKind::Any, KeyKind::Fractional)
        });
        LocalizedElement::from_terms(loc, terms).expect("sampled words are valid")
    }

    /// A random expression tree of depth at most `depth` over `alg`.
    pub fn expression(&mut self, alg: &Arc<AlgebraDescriptor>, depth: usize) -> RBExpression {
        let choice = if depth == 0 { 0 } else { self.below(5) };
        match choice {
            0 => {
                let saved = self.max_terms;
                self.max_terms = saved.min(2);
                let a = self.element(alg, KeyKind::Any);
                self.max_terms = saved;
                RBExpression::Leaf(a)
            }
            1 => RBExpression::sum(vec![
                self.expression(alg, depth - 1),
                self.expression(alg, depth - 1),
            ]),
            2 => {
                let c = self.coeff();
                RBExpression::scale(c, self.expression(alg, depth - 1))
            }
            3 => RBExpression::product(vec![
                self.expression(alg, depth - 1),
                self.expression(alg, depth - 1),
            ]),
            _ => RBExpression::p(self.expression(alg, depth - 1)),
        }
    }
}
