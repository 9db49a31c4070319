use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::base::{AlgebraDescriptor, AlgebraElement, BaseOperator, BasisKey, UPoly};
use crate::error::Error;
use crate::free_rb::TensorWord;
use crate::linear::{add_term, Terms};
use crate::rb::{verify_rb_axiom, RotaBaxterAlgebra};
use crate::sample::{KeyKind, Sampler};
use crate::scalar::Scalar;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d).unwrap()
}

fn laurent() -> Arc<AlgebraDescriptor> {
    Arc::new(AlgebraDescriptor::laurent(&["x"], "x").unwrap())
}

fn quadratic() -> Arc<AlgebraDescriptor> {
    let s = UPoly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
    Arc::new(AlgebraDescriptor::localized(&["x"], "x", &s).unwrap())
}

fn p(e: u32) -> BasisKey {
    BasisKey::monomial(vec![e])
}

fn v(j: u32, k: u32) -> BasisKey {
    BasisKey {
        exps: vec![j],
        denom_power: k,
    }
}

fn elem(loc: &Arc<RbLocalization>, terms: &[(Scalar, &[BasisKey])]) -> LocalizedElement {
    let mut t = Terms::new();
    for (c, w) in terms {
        add_term(&mut t, TensorWord::new(w.to_vec()).unwrap(), c.clone());
    }
    LocalizedElement::from_terms(loc, t).unwrap()
}

fn one(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// The five configurations whose operators must satisfy the axiom.
fn configurations() -> Vec<Arc<RbLocalization>> {
    vec![
        RbLocalization::new(laurent(), BaseOperator::integral(0), Variant::WeightZero).unwrap(),
        RbLocalization::new(laurent(), BaseOperator::identity(), Variant::GeneralWeight).unwrap(),
        RbLocalization::new(
            laurent(),
            BaseOperator::neg_identity(),
            Variant::GeneralWeight,
        )
        .unwrap(),
        RbLocalization::new(quadratic(), BaseOperator::integral(0), Variant::WeightZero).unwrap(),
        RbLocalization::new(
            Arc::new(AlgebraDescriptor::laurent(&["x", "y"], "x").unwrap()),
            BaseOperator::zero(Scalar::zero()),
            Variant::ZeroOperatorQuotient,
        )
        .unwrap(),
    ]
}

#[test]
fn variant_constraints() {
    assert!(RbLocalization::new(laurent(), BaseOperator::identity(), Variant::WeightZero).is_err());
    assert!(RbLocalization::new(
        laurent(),
        BaseOperator::integral(0),
        Variant::ZeroOperatorQuotient
    )
    .is_err());
    assert!(RbLocalization::new(
        laurent(),
        BaseOperator::zero(one(1)),
        Variant::ZeroOperatorQuotient
    )
    .is_err());
    let plain = Arc::new(AlgebraDescriptor::polynomial(&["x"]).unwrap());
    assert!(matches!(
        RbLocalization::new(plain, BaseOperator::integral(0), Variant::WeightZero),
        Err(Error::Domain(_))
    ));
}

#[test]
fn header_line() {
    let loc =
        RbLocalization::new(laurent(), BaseOperator::integral(0), Variant::WeightZero).unwrap();
    assert_eq!(loc.header(), "variant=weight-zero weight=0/1");
}

#[test]
fn product_examples() {
    let loc =
        RbLocalization::new(laurent(), BaseOperator::integral(0), Variant::WeightZero).unwrap();
    let a = elem(&loc, &[(one(1), &[p(1), v(0, 1)])]);
    let b = elem(&loc, &[(one(1), &[v(0, 1)])]);
    assert_eq!(
        a.b_product(&b).unwrap(),
        elem(&loc, &[(one(1), &[p(0), v(0, 1)])])
    );
    assert_eq!(a.b_product(&LocalizedElement::one(&loc)).unwrap(), a);

    let zq = RbLocalization::new(
        laurent(),
        BaseOperator::zero(Scalar::zero()),
        Variant::ZeroOperatorQuotient,
    )
    .unwrap();
    let u = elem(&zq, &[(one(1), &[p(0), v(0, 1)])]);
    assert_eq!(
        u.b_product(&u).unwrap(),
        elem(&zq, &[(one(2), &[p(0), v(0, 1), v(0, 1)])])
    );
}

#[test]
fn operator_examples() {
    let loc =
        RbLocalization::new(laurent(), BaseOperator::integral(0), Variant::WeightZero).unwrap();
    let u = elem(&loc, &[(one(1), &[p(1), v(0, 1)])]);
    let got = u.p_localized().unwrap();
    assert_eq!(
        got,
        elem(&loc, &[(q(1, 2), &[p(2), v(0, 1)]), (q(-1, 4), &[p(2)])])
    );
    assert_eq!(got.to_string(), "-1/4*x^2 + 1/2*T[x^2, x^-1]");

    let id =
        RbLocalization::new(laurent(), BaseOperator::identity(), Variant::GeneralWeight).unwrap();
    let u = elem(&id, &[(one(1), &[p(1), v(0, 1)])]);
    assert_eq!(u.p_localized().unwrap(), u);

    let zq = RbLocalization::new(
        laurent(),
        BaseOperator::zero(Scalar::zero()),
        Variant::ZeroOperatorQuotient,
    )
    .unwrap();
    assert!(elem(&zq, &[(one(1), &[p(2)])])
        .p_localized()
        .unwrap()
        .is_zero());
    assert_eq!(
        elem(&zq, &[(one(1), &[v(0, 1)])]).p_localized().unwrap(),
        elem(&zq, &[(one(1), &[p(0), v(0, 1)])])
    );
}

#[test]
fn structure_map_examples() {
    let alg = laurent();
    let loc = RbLocalization::new(
        Arc::clone(&alg),
        BaseOperator::integral(0),
        Variant::WeightZero,
    )
    .unwrap();
    let x = AlgebraElement::variable(&alg, "x").unwrap();
    let ix = LocalizedElement::structure_map(&loc, &x).unwrap();
    assert_eq!(ix, elem(&loc, &[(one(1), &[p(1)])]));
    let px = BaseOperator::integral(0).apply(&x).unwrap();
    assert_eq!(
        ix.p_localized().unwrap(),
        LocalizedElement::structure_map(&loc, &px).unwrap()
    );
    assert!(matches!(
        LocalizedElement::structure_map(&loc, &x.try_inverse().unwrap()),
        Err(Error::Domain(_))
    ));

    let zq = RbLocalization::new(
        Arc::clone(&alg),
        BaseOperator::zero(Scalar::zero()),
        Variant::ZeroOperatorQuotient,
    )
    .unwrap();
    let x2 = LocalizedElement::structure_map(&zq, &x.pow(2).unwrap()).unwrap();
    assert!(x2.p_localized().unwrap().is_zero());
}

#[test]
fn invert_image_examples() {
    for alg in [laurent(), quadratic()] {
        let loc = RbLocalization::new(
            Arc::clone(&alg),
            BaseOperator::integral(0),
            Variant::WeightZero,
        )
        .unwrap();
        let s = AlgebraElement::denominator_element(&alg).unwrap();
        let is = LocalizedElement::structure_map(&loc, &s).unwrap();
        let one = LocalizedElement::one(&loc);
        assert_eq!(
            LocalizedElement::invert_image(&loc, 1)
                .unwrap()
                .b_product(&is)
                .unwrap(),
            one
        );
        let is2 = is.b_product(&is).unwrap();
        assert_eq!(
            LocalizedElement::invert_image(&loc, 2)
                .unwrap()
                .b_product(&is2)
                .unwrap(),
            one
        );
    }
}

#[test]
fn extend_examples() {
    let alg = laurent();
    let loc = RbLocalization::new(
        Arc::clone(&alg),
        BaseOperator::integral(0),
        Variant::WeightZero,
    )
    .unwrap();
    let f =
        |k: &BasisKey| LocalizedElement::word(&loc, TensorWord::single(k.clone()), Scalar::one());
    let inv = LocalizedElement::invert_image(&loc, 1).unwrap();

    let x = AlgebraElement::variable(&alg, "x").unwrap();
    let a = x
        .pow(2)
        .unwrap()
        .scale(&q(3, 2))
        .add(&AlgebraElement::one(&alg))
        .unwrap();
    let ia = LocalizedElement::structure_map(&loc, &a).unwrap();
    assert_eq!(extend_to_localization(&loc, f, &inv, &ia).unwrap(), ia);

    let w = elem(&loc, &[(one(1), &[p(0), v(0, 1)])]);
    let unfolded = elem(&loc, &[(one(1), &[v(0, 1)])]).p_localized().unwrap();
    assert_eq!(extend_to_localization(&loc, f, &inv, &w).unwrap(), unfolded);

    let wrong = LocalizedElement::invert_image(&loc, 2).unwrap();
    assert!(matches!(
        extend_to_localization(&loc, f, &wrong, &w),
        Err(Error::Domain(_))
    ));
}

/// `a ⋄ P(v₁ ⋄ P(⋯ P(v_k)⋯))` from length-1 words.
fn reconstruct(loc: &Arc<RbLocalization>, w: &TensorWord) -> LocalizedElement {
    let single = |k: &BasisKey| {
        LocalizedElement::word(loc, TensorWord::single(k.clone()), Scalar::one()).unwrap()
    };
    let slots = w.slots();
    let mut acc = single(&slots[slots.len() - 1]);
    for k in slots[..slots.len() - 1].iter().rev() {
        acc = single(k).b_product(&acc.p_localized().unwrap()).unwrap();
    }
    acc
}

#[test]
fn reconstruction_on_short_words() {
    for loc in configurations() {
        let n = loc.algebra().nvars();
        let pad = |mut k: BasisKey| {
            k.exps.resize(n, 0);
            k
        };
        let heads = [p(0), p(1), p(2), v(0, 1), v(0, 2)].map(pad);
        let tails = [v(0, 1), v(0, 2)].map(pad);
        for h in &heads {
            for t1 in &tails {
                for t2 in &tails {
                    let w = TensorWord::new(vec![h.clone(), t1.clone(), t2.clone()]).unwrap();
                    let want = LocalizedElement::word(&loc, w.clone(), Scalar::one()).unwrap();
                    assert_eq!(reconstruct(&loc, &w), want, "{}", loc.header());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn localized_rb_axiom(seed in any::<u64>(), ci in 0usize..5) {
        let loc = &configurations()[ci];
        let mut s = Sampler::new(seed);
        let a = s.localized_element(loc, 3);
        let b = s.localized_element(loc, 3);
        prop_assert!(verify_rb_axiom(loc, loc.weight(), &a, &b).unwrap());
    }

    #[test]
    fn structure_map_is_a_morphism(seed in any::<u64>(), ci in 0usize..5) {
        let loc = &configurations()[ci];
        let alg = loc.algebra();
        let mut s = Sampler::new(seed);
        let a = s.element(alg, KeyKind::Polynomial);
        let b = s.element(alg, KeyKind::Polynomial);
        let ia = LocalizedElement::structure_map(loc, &a).unwrap();
        let ib = LocalizedElement::structure_map(loc, &b).unwrap();
        prop_assert_eq!(LocalizedElement::structure_map(loc, &a.mul(&b).unwrap()).unwrap(), ia.b_product(&ib).unwrap());
        let pa = loc.operator().apply(&a).unwrap();
        prop_assert_eq!(ia.p_localized().unwrap(), LocalizedElement::structure_map(loc, &pa).unwrap());
    }

    #[test]
    fn reconstruction_on_samples(seed in any::<u64>(), ci in 0usize..5) {
        let loc = &configurations()[ci];
        let mut s = Sampler::new(seed);
        let u = s.localized_element(loc, 4);
        for w in u.terms().keys() {
            let want = LocalizedElement::word(loc, w.clone(), Scalar::one()).unwrap();
            prop_assert_eq!(reconstruct(loc, w), want);
        }
    }

    #[test]
    fn extension_into_self_is_identity(seed in any::<u64>(), ci in 0usize..5) {
        let loc = &configurations()[ci];
        let f = |k: &BasisKey| LocalizedElement::word(loc, TensorWord::single(k.clone()), Scalar::one());
        let inv = LocalizedElement::invert_image(loc, 1).unwrap();
        let mut s = Sampler::new(seed);
        let u = s.localized_element(loc, 3);
        let w = s.localized_element(loc, 2);
        prop_assert_eq!(extend_to_localization(loc, f, &inv, &u).unwrap(), u.clone());
        let fu = extend_to_localization(loc, f, &inv, &u).unwrap();
        let fw = extend_to_localization(loc, f, &inv, &w).unwrap();
        prop_assert_eq!(extend_to_localization(loc, f, &inv, &u.b_product(&w).unwrap()).unwrap(), fu.b_product(&fw).unwrap());
        prop_assert_eq!(extend_to_localization(loc, f, &inv, &u.p_localized().unwrap()).unwrap(), fu.p_localized().unwrap());
    }

    #[test]
    fn fractional_heads_behave_like_shuffle_p(seed in any::<u64>(), ci in 0usize..5) {
        let loc = &configurations()[ci];
        let mut s = Sampler::new(seed);
        let alg = Arc::clone(loc.algebra());
        let len = s.range(1, 3);
        let w = s.word(&alg, len, KeyKind::Fractional, KeyKind::Fractional);
        let got = LocalizedElement::word(loc, w.clone(), Scalar::one()).unwrap().p_localized().unwrap();
        let want = LocalizedElement::word(loc, w.prepend(alg.unit_key()), Scalar::one()).unwrap();
        prop_assert_eq!(got, want);
    }
}
