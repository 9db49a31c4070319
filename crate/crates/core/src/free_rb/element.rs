use std::fmt;
use std::sync::Arc;

use crate::base::{check_same, AlgebraDescriptor, AlgebraElement};
use crate::error::{Error, Result};
use crate::free_rb::word::{check_len, prepend_unit, DisplayTerms, MixableShuffle, TensorWord};
use crate::limits::Limits;
use crate::linear::{add_scaled, add_term, scaled, Terms};
use crate::rb::RotaBaxterAlgebra;
use crate::scalar::Scalar;

/// The free commutative Rota-Baxter algebra Ш(A) of a given weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeRb {
    alg: Arc<AlgebraDescriptor>,
    weight: Scalar,
    limits: Limits,
}

impl FreeRb {
    pub fn new(alg: Arc<AlgebraDescriptor>, weight: Scalar) -> Arc<Self> {
        Self::with_limits(alg, weight, Limits::default())
    }

    pub fn with_limits(alg: Arc<AlgebraDescriptor>, weight: Scalar, limits: Limits) -> Arc<Self> {
        Arc::new(FreeRb {
            alg,
            weight,
            limits,
        })
    }

    pub fn algebra(&self) -> &Arc<AlgebraDescriptor> {
        &self.alg
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }
}

/// An element of Ш(A): a combination of tensor words over basis keys.
#[derive(Clone, Debug)]
pub struct ShuffleElement {
    ring: Arc<FreeRb>,
    terms: Terms<TensorWord>,
}

impl PartialEq for ShuffleElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl ShuffleElement {
    pub fn zero(ring: &Arc<FreeRb>) -> Self {
        ShuffleElement {
            ring: Arc::clone(ring),
            terms: Terms::new(),
        }
    }

    pub fn one(ring: &Arc<FreeRb>) -> Self {
        Self::embed(ring, &AlgebraElement::one(&ring.alg)).expect("unit embeds")
    }

    /// `coeff * word`, validating every slot.
    pub fn from_word(ring: &Arc<FreeRb>, word: TensorWord, coeff: Scalar) -> Result<Self> {
        let mut terms = Terms::new();
        add_term(&mut terms, word, coeff);
        Self::from_terms(ring, terms)
    }

    pub fn from_terms(ring: &Arc<FreeRb>, terms: Terms<TensorWord>) -> Result<Self> {
        for w in terms.keys() {
            check_len(w.len(), ring.limits.max_word_len)?;
            for k in w.slots() {
                ring.alg.validate_key(k)?;
            }
        }
        Ok(ShuffleElement {
            ring: Arc::clone(ring),
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// The natural algebra map A → Ш(A): a sum of length-1 words.
    pub fn embed(ring: &Arc<FreeRb>, a: &AlgebraElement) -> Result<Self> {
        check_same(&ring.alg, a.algebra())?;
        Ok(ShuffleElement {
            ring: Arc::clone(ring),
            terms: a
                .terms()
                .iter()
                .map(|(k, c)| (TensorWord::single(k.clone()), c.clone()))
                .collect(),
        })
    }

    /// The tensor `a₀ ⊗ ⋯ ⊗ a_k` of arbitrary elements, expanded multilinearly.
    pub fn tensor(ring: &Arc<FreeRb>, slots: &[AlgebraElement]) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::domain("tensor needs at least one slot"));
        }
        check_len(slots.len(), ring.limits.max_word_len)?;
        let mut acc: Vec<(Vec<crate::base::BasisKey>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for s in slots {
            check_same(&ring.alg, s.algebra())?;
            let mut next = Vec::new();
            for (prefix, c) in &acc {
                for (k, ck) in s.terms() {
                    let mut p = prefix.clone();
                    p.push(k.clone());
                    next.push((p, c * ck));
                }
            }
            acc = next;
        }
        let mut terms = Terms::new();
        for (slots, c) in acc {
            add_term(&mut terms, TensorWord::new(slots)?, c);
        }
        Ok(ShuffleElement {
            ring: Arc::clone(ring),
            terms,
        })
    }

    pub fn ring(&self) -> &Arc<FreeRb> {
        &self.ring
    }

    pub fn terms(&self) -> &Terms<TensorWord> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        check_same(&self.ring.alg, &other.ring.alg)?;
        crate::rb::check_weight(&self.ring.weight, &other.ring.weight)
    }

    fn with_terms(&self, terms: Terms<TensorWord>) -> Self {
        ShuffleElement {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &Scalar::one(), &other.terms);
        Ok(self.with_terms(terms))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.with_terms(scaled(c, &self.terms))
    }

    /// The mixable shuffle product `self ⋄ other`.
    pub fn msh_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut engine = MixableShuffle::new(&self.ring.alg, &self.ring.weight);
        let terms = engine.product(&self.terms, &other.terms, self.ring.limits.max_word_len)?;
        Ok(self.with_terms(terms))
    }

    /// The operator of Ш(A): `x₀ ⊗ ⋯ ⊗ x_n ↦ 1 ⊗ x₀ ⊗ ⋯ ⊗ x_n`.
    pub fn shuffle_p(&self) -> Result<Self> {
        let terms = prepend_unit(&self.ring.alg, &self.terms, self.ring.limits.max_word_len)?;
        Ok(self.with_terms(terms))
    }
}

impl fmt::Display for ShuffleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        DisplayTerms {
            alg: &self.ring.alg,
            terms: &self.terms,
        }
        .fmt(f)
    }
}

impl RotaBaxterAlgebra for Arc<FreeRb> {
    type Element = ShuffleElement;

    fn weight(&self) -> &Scalar {
        &self.weight
    }

    fn zero(&self) -> ShuffleElement {
        ShuffleElement::zero(self)
    }

    fn one(&self) -> ShuffleElement {
        ShuffleElement::one(self)
    }

    fn add(&self, a: &ShuffleElement, b: &ShuffleElement) -> Result<ShuffleElement> {
        a.add(b)
    }

    fn scale(&self, c: &Scalar, a: &ShuffleElement) -> ShuffleElement {
        a.scale(c)
    }

    fn mul(&self, a: &ShuffleElement, b: &ShuffleElement) -> Result<ShuffleElement> {
        a.msh_product(b)
    }

    fn apply_p(&self, a: &ShuffleElement) -> Result<ShuffleElement> {
        a.shuffle_p()
    }
}
