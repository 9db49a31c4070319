use crate::base::BasisKey;
use crate::error::{Error, Result};
use crate::free_rb::eval_words;
use crate::localize::carrier::LocalizedElement;
use crate::rb::{check_weight, RotaBaxterAlgebra};

/// The unique Rota-Baxter morphism `f_S : B → target` with `f_S ∘ i_S = f`.
///
/// `f` is the morphism on A, given on polynomial basis keys; `s_inverse` is
/// the inverse of `f(s)` in the target. A word `a ⊗ v₁ ⊗ ⋯ ⊗ v_k` evaluates
/// to `f̃(a)·P(f̃(v₁)·P(⋯ P(f̃(v_k))⋯))`, where `f̃(m / s^k) = f(m)·s_inverse^k`.
pub fn extend_to_localization<T, F>(
    target: &T,
    mut f: F,
    s_inverse: &T::Element,
    u: &LocalizedElement,
) -> Result<T::Element>
where
    T: RotaBaxterAlgebra,
    F: FnMut(&BasisKey) -> Result<T::Element>,
{
    let loc = u.localization();
    check_weight(target.weight(), loc.weight())?;
    let alg = loc.algebra();
    let d = alg
        .denominator()
        .expect("localized carrier has a denominator");

    let mut fs = target.zero();
    for (i, c) in d.s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut exps = vec![0; alg.nvars()];
        exps[d.var] = i as u32;
        fs = target.add(&fs, &target.scale(c, &f(&BasisKey::monomial(exps))?))?;
    }
    if target.mul(&fs, s_inverse)? != target.one() {
        return Err(Error::domain(
            "the supplied inverse does not invert the image of s",
        ));
    }

    let mut powers = vec![target.one()];
    eval_words(target, u.terms(), |k| {
        let numer = BasisKey::monomial(k.exps.clone());
        let mut im = f(&numer)?;
        let need = k.denom_power as usize;
        while powers.len() <= need {
            let next = target.mul(powers.last().expect("nonempty"), s_inverse)?;
            powers.push(next);
        }
        if need > 0 {
            im = target.mul(&im, &powers[need])?;
        }
        Ok(im)
    })
}
