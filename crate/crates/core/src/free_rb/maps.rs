use std::collections::HashMap;
use std::sync::Arc;

use crate::base::{check_same, AlgebraDescriptor, AlgebraElement, BasisKey};
use crate::error::{Error, Result};
use crate::free_rb::element::{FreeRb, ShuffleElement};
use crate::free_rb::word::TensorWord;
use crate::linear::Terms;
use crate::rb::{check_weight, BaseRb, RotaBaxterAlgebra};

/// A unital algebra map between descriptors, given by the images of the
/// source variables. When the source is localized at `s`, the image of `s`
/// must be a unit of the target.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    source: Arc<AlgebraDescriptor>,
    target: Arc<AlgebraDescriptor>,
    images: Vec<AlgebraElement>,
    inverse_s: Option<AlgebraElement>,
}

impl AlgebraMap {
    pub fn new(
        source: Arc<AlgebraDescriptor>,
        target: Arc<AlgebraDescriptor>,
        images: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::domain("one image per source variable is required"));
        }
        for im in &images {
            check_same(&target, im.algebra())?;
        }
        let mut map = AlgebraMap {
            source,
            target,
            images,
            inverse_s: None,
        };
        if let Some(d) = map.source.denominator() {
            let mut fs = AlgebraElement::zero(&map.target);
            for (i, c) in d.s.coeffs().iter().enumerate() {
                fs = fs.add(&map.images[d.var].pow(i as u32)?.scale(c))?;
            }
            map.inverse_s = Some(fs.try_inverse()?);
        }
        Ok(map)
    }

    /// The map sending each source variable to the target variable of the same name.
    pub fn inclusion(
        source: Arc<AlgebraDescriptor>,
        target: Arc<AlgebraDescriptor>,
    ) -> Result<Self> {
        let images = source
            .vars()
            .iter()
            .map(|v| AlgebraElement::variable(&target, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<AlgebraDescriptor> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraDescriptor> {
        &self.target
    }

    pub fn apply_key(&self, key: &BasisKey) -> Result<AlgebraElement> {
        self.source.validate_key(key)?;
        let mut acc = AlgebraElement::one(&self.target);
        for (i, &e) in key.exps.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.images[i].pow(e)?)?;
            }
        }
        if key.denom_power > 0 {
            let inv = self
                .inverse_s
                .as_ref()
                .ok_or_else(|| Error::Internal("fractional key without inverse image".into()))?;
            acc = acc.mul(&inv.pow(key.denom_power)?)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        check_same(&self.source, a.algebra())?;
        let mut acc = AlgebraElement::zero(&self.target);
        for (k, c) in a.terms() {
            acc = acc.add(&self.apply_key(k)?.scale(c))?;
        }
        Ok(acc)
    }
}

/// `Ш(f)`: apply `f` slot by slot and re-expand into basis words.
pub fn map_words(f: &AlgebraMap, u: &ShuffleElement) -> Result<ShuffleElement> {
    check_same(f.source(), u.ring().algebra())?;
    let ring = FreeRb::with_limits(
        Arc::clone(f.target()),
        u.ring().weight().clone(),
        u.ring().limits(),
    );
    let mut cache: HashMap<BasisKey, AlgebraElement> = HashMap::new();
    let mut acc = ShuffleElement::zero(&ring);
    for (w, c) in u.terms() {
        let slots = w
            .slots()
            .iter()
            .map(|k| match cache.get(k) {
                Some(hit) => Ok(hit.clone()),
                None => {
                    let im = f.apply_key(k)?;
                    cache.insert(k.clone(), im.clone());
                    Ok(im)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        acc = acc.add(&ShuffleElement::tensor(&ring, &slots)?.scale(c))?;
    }
    Ok(acc)
}

/// Evaluate `Σ c · w` as `Σ c · f(a₀)·P(f(a₁)·P(⋯P(f(a_k))⋯))` in `target`.
pub(crate) fn eval_words<T, F>(
    target: &T,
    terms: &Terms<TensorWord>,
    mut f: F,
) -> Result<T::Element>
where
    T: RotaBaxterAlgebra,
    F: FnMut(&BasisKey) -> Result<T::Element>,
{
    let mut images: HashMap<BasisKey, T::Element> = HashMap::new();
    let mut image = |k: &BasisKey| -> Result<T::Element> {
        if let Some(hit) = images.get(k) {
            return Ok(hit.clone());
        }
        let im = f(k)?;
        images.insert(k.clone(), im.clone());
        Ok(im)
    };
    let mut acc = target.zero();
    for (w, c) in terms {
        let slots = w.slots();
        let mut inner = image(&slots[slots.len() - 1])?;
        for k in slots[..slots.len() - 1].iter().rev() {
            let p = target.apply_p(&inner)?;
            inner = target.mul(&image(k)?, &p)?;
        }
        acc = target.add(&acc, &target.scale(c, &inner))?;
    }
    Ok(acc)
}

/// The unique Rota-Baxter morphism Ш(A) → target extending the algebra map `f`
/// (given on basis keys).
pub fn free_extension<T, F>(target: &T, f: F, u: &ShuffleElement) -> Result<T::Element>
where
    T: RotaBaxterAlgebra,
    F: FnMut(&BasisKey) -> Result<T::Element>,
{
    check_weight(target.weight(), u.ring().weight())?;
    eval_words(target, u.terms(), f)
}

/// The collapse morphism Ш(R) → R induced by the identity of R.
pub fn collapse_phi(u: &ShuffleElement, target: &BaseRb) -> Result<AlgebraElement> {
    check_same(target.algebra(), u.ring().algebra())?;
    let alg = Arc::clone(target.algebra());
    free_extension(
        target,
        |k| {
            Ok(AlgebraElement::from_key(
                &alg,
                k.clone(),
                crate::scalar::Scalar::one(),
            ))
        },
        u,
    )
}
