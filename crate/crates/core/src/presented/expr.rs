use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::base::{AlgebraDescriptor, AlgebraElement, BasisKey};
use crate::error::Result;
use crate::free_rb::TensorWord;
use crate::linear::Terms;
use crate::rb::RotaBaxterAlgebra;
use crate::scalar::Scalar;

/// An element of a presented Rota-Baxter algebra before normalization.
#[derive(Clone, Debug, PartialEq)]
pub enum RBExpression {
    Leaf(AlgebraElement),
    Sum(Vec<RBExpression>),
    Scale(Scalar, Box<RBExpression>),
    Product(Vec<RBExpression>),
    PNode(Box<RBExpression>),
}

impl RBExpression {
    pub fn leaf(a: AlgebraElement) -> Self {
        RBExpression::Leaf(a)
    }

    pub fn key(alg: &Arc<AlgebraDescriptor>, key: BasisKey) -> Self {
        RBExpression::Leaf(AlgebraElement::from_key(alg, key, Scalar::one()))
    }

    pub fn p(e: RBExpression) -> Self {
        RBExpression::PNode(Box::new(e))
    }

    pub fn scale(c: Scalar, e: RBExpression) -> Self {
        RBExpression::Scale(c, Box::new(e))
    }

    pub fn sum(items: Vec<RBExpression>) -> Self {
        RBExpression::Sum(items)
    }

    pub fn product(items: Vec<RBExpression>) -> Self {
        RBExpression::Product(items)
    }

    /// The word `a₀ ⊗ ⋯ ⊗ a_k` as `a₀·P(a₁·P(⋯ P(a_k)⋯))`.
    pub fn from_word(alg: &Arc<AlgebraDescriptor>, w: &TensorWord) -> Self {
        let slots = w.slots();
        let mut acc = Self::key(alg, slots[slots.len() - 1].clone());
        for k in slots[..slots.len() - 1].iter().rev() {
            let inner = Self::p(acc);
            acc = if k.is_unit() {
                inner
            } else {
                Self::product(vec![Self::key(alg, k.clone()), inner])
            };
        }
        acc
    }

    /// A combination of words, each lifted by [`RBExpression::from_word`].
    pub fn from_terms(alg: &Arc<AlgebraDescriptor>, terms: &Terms<TensorWord>) -> Self {
        let mut items: Vec<RBExpression> = terms
            .iter()
            .map(|(w, c)| {
                let e = Self::from_word(alg, w);
                if c.is_one() {
                    e
                } else {
                    Self::scale(c.clone(), e)
                }
            })
            .collect();
        match items.len() {
            0 => Self::leaf(AlgebraElement::zero(alg)),
            1 => items.pop().expect("one item"),
            _ => Self::sum(items),
        }
    }

    /// The single descriptor shared by every leaf, if there are leaves.
    pub fn algebra(&self) -> Option<&Arc<AlgebraDescriptor>> {
        match self {
            RBExpression::Leaf(a) => Some(a.algebra()),
            RBExpression::Sum(v) | RBExpression::Product(v) => v.iter().find_map(|e| e.algebra()),
            RBExpression::Scale(_, e) | RBExpression::PNode(e) => e.algebra(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RBExpression::Leaf(_) => 0,
            RBExpression::Sum(v) | RBExpression::Product(v) => {
                1 + v.iter().map(RBExpression::depth).max().unwrap_or(0)
            }
            RBExpression::Scale(_, e) | RBExpression::PNode(e) => 1 + e.depth(),
        }
    }

    /// Evaluate in a concrete Rota-Baxter algebra, interpreting each leaf key
    /// through `leaf` and P-nodes through the target operator.
    pub fn evaluate<T, F>(&self, target: &T, mut leaf: F) -> Result<T::Element>
    where
        T: RotaBaxterAlgebra,
        F: FnMut(&BasisKey) -> Result<T::Element>,
    {
        let mut cache = HashMap::new();
        self.eval_inner(target, &mut leaf, &mut cache)
    }

    fn eval_inner<T, F>(
        &self,
        target: &T,
        leaf: &mut F,
        cache: &mut HashMap<BasisKey, T::Element>,
    ) -> Result<T::Element>
    where
        T: RotaBaxterAlgebra,
        F: FnMut(&BasisKey) -> Result<T::Element>,
    {
        match self {
            RBExpression::Leaf(a) => {
                let mut acc = target.zero();
                for (k, c) in a.terms() {
                    let im = match cache.get(k) {
                        Some(hit) => hit.clone(),
                        None => {
                            let im = leaf(k)?;
                            cache.insert(k.clone(), im.clone());
                            im
                        }
                    };
                    acc = target.add(&acc, &target.scale(c, &im))?;
                }
                Ok(acc)
            }
            RBExpression::Sum(items) => {
                let mut acc = target.zero();
                for e in items {
                    acc = target.add(&acc, &e.eval_inner(target, leaf, cache)?)?;
                }
                Ok(acc)
            }
            RBExpression::Scale(c, e) => Ok(target.scale(c, &e.eval_inner(target, leaf, cache)?)),
            RBExpression::Product(items) => {
                let mut acc = target.one();
                for e in items {
                    acc = target.mul(&acc, &e.eval_inner(target, leaf, cache)?)?;
                }
                Ok(acc)
            }
            RBExpression::PNode(e) => target.apply_p(&e.eval_inner(target, leaf, cache)?),
        }
    }

    /// Checks that every leaf lives over `alg`.
    pub fn check_algebra(&self, alg: &Arc<AlgebraDescriptor>) -> Result<()> {
        match self {
            RBExpression::Leaf(a) => crate::base::check_same(alg, a.algebra()),
            RBExpression::Sum(v) | RBExpression::Product(v) => {
                v.iter().try_for_each(|e| e.check_algebra(alg))
            }
            RBExpression::Scale(_, e) | RBExpression::PNode(e) => e.check_algebra(alg),
        }
    }
}

fn needs_parens(a: &AlgebraElement) -> bool {
    a.terms().len() > 1 || a.terms().values().any(|c| c.is_negative() || !c.is_one())
}

impl fmt::Display for RBExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RBExpression::Leaf(a) => {
                if needs_parens(a) {
                    write!(f, "({a})")
                } else {
                    write!(f, "{a}")
                }
            }
            RBExpression::Sum(items) => {
                if items.is_empty() {
                    return f.write_str("0");
                }
                f.write_str("(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
            RBExpression::Scale(c, e) => write!(f, "({c})*{e}"),
            RBExpression::Product(items) => {
                if items.is_empty() {
                    return f.write_str("1");
                }
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            RBExpression::PNode(e) => write!(f, "P({e})"),
        }
    }
}

impl From<AlgebraElement> for RBExpression {
    fn from(a: AlgebraElement) -> Self {
        RBExpression::Leaf(a)
    }
}
