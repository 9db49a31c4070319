//! The interface shared by every concrete Rota-Baxter algebra in the crate,
//! and the axiom check `P(x)P(y) = P(x P(y) + P(x) y + λ x y)`.

use std::fmt::Debug;
use std::sync::Arc;

use crate::base::{AlgebraDescriptor, AlgebraElement, BaseOperator};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub trait RotaBaxterAlgebra {
    type Element: Clone + PartialEq + Debug;

    fn weight(&self) -> &Scalar;
    fn zero(&self) -> Self::Element;
    fn one(&self) -> Self::Element;
    fn add(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element>;
    fn scale(&self, c: &Scalar, a: &Self::Element) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element>;
    fn apply_p(&self, a: &Self::Element) -> Result<Self::Element>;

    fn sub(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element> {
        self.add(a, &self.scale(&Scalar::from_int(-1), b))
    }
}

/// Whether `P(x)P(y) = P(x P(y) + P(x) y + λ x y)` holds exactly in `alg`.
///
/// `lambda` is taken as given, so an operator can be tested against a weight
/// other than the one it was built for.
pub fn verify_rb_axiom<R: RotaBaxterAlgebra>(
    alg: &R,
    lambda: &Scalar,
    x: &R::Element,
    y: &R::Element,
) -> Result<bool> {
    let px = alg.apply_p(x)?;
    let py = alg.apply_p(y)?;
    let lhs = alg.mul(&px, &py)?;
    let inner = alg.add(&alg.mul(x, &py)?, &alg.mul(&px, y)?)?;
    let inner = alg.add(&inner, &alg.scale(lambda, &alg.mul(x, y)?))?;
    let rhs = alg.apply_p(&inner)?;
    Ok(lhs == rhs)
}

/// A base algebra with one of the concrete operators.
#[derive(Clone, Debug)]
pub struct BaseRb {
    alg: Arc<AlgebraDescriptor>,
    op: BaseOperator,
}

impl BaseRb {
    pub fn new(alg: Arc<AlgebraDescriptor>, op: BaseOperator) -> Result<Self> {
        op.check_for(&alg)?;
        Ok(BaseRb { alg, op })
    }

    pub fn algebra(&self) -> &Arc<AlgebraDescriptor> {
        &self.alg
    }

    pub fn operator(&self) -> &BaseOperator {
        &self.op
    }

    fn check(&self, a: &AlgebraElement) -> Result<()> {
        crate::base::check_same(&self.alg, a.algebra())
    }
}

impl RotaBaxterAlgebra for BaseRb {
    type Element = AlgebraElement;

    fn weight(&self) -> &Scalar {
        self.op.weight()
    }

    fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(&self.alg)
    }

    fn one(&self) -> AlgebraElement {
        AlgebraElement::one(&self.alg)
    }

    fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        a.add(b)
    }

    fn scale(&self, c: &Scalar, a: &AlgebraElement) -> AlgebraElement {
        a.scale(c)
    }

    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        a.mul(b)
    }

    fn apply_p(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        self.op.apply(a)
    }
}

pub(crate) fn check_weight(expected: &Scalar, got: &Scalar) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "weight mismatch: {expected} vs {got}"
        )))
    }
}
