use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::base::{AlgebraDescriptor, AlgebraElement, BaseOperator, BasisKey};
use crate::error::Error;
use crate::limits::Limits;
use crate::linear::{add_term, Terms};
use crate::rb::{verify_rb_axiom, BaseRb, RotaBaxterAlgebra};
use crate::sample::{KeyKind, Sampler};
use crate::scalar::Scalar;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d).unwrap()
}

fn poly(vars: &[&str]) -> Arc<AlgebraDescriptor> {
    Arc::new(AlgebraDescriptor::polynomial(vars).unwrap())
}

fn mono(e: &[u32]) -> BasisKey {
    BasisKey::monomial(e.to_vec())
}

fn word(keys: &[BasisKey]) -> TensorWord {
    TensorWord::new(keys.to_vec()).unwrap()
}

fn elem(ring: &Arc<FreeRb>, terms: &[(i64, &[BasisKey])]) -> ShuffleElement {
    let mut t = Terms::new();
    for (c, w) in terms {
        add_term(&mut t, word(w), Scalar::from_int(*c));
    }
    ShuffleElement::from_terms(ring, t).unwrap()
}

/// Quasi-shuffle by brute force: after multiplying the two first slots,
/// walk every interleaving of the two tails in which each step takes the
/// next letter of the left tail, of the right tail, or merges both (weight λ).
fn oracle(
    alg: &AlgebraDescriptor,
    lambda: &Scalar,
    a: &[BasisKey],
    b: &[BasisKey],
) -> Terms<TensorWord> {
    fn walk(
        alg: &AlgebraDescriptor,
        lambda: &Scalar,
        a: &[BasisKey],
        b: &[BasisKey],
        prefix: &mut Vec<Vec<(BasisKey, Scalar)>>,
        coeff: Scalar,
        out: &mut Terms<TensorWord>,
    ) {
        if a.is_empty() && b.is_empty() {
            let mut partial: Vec<(Vec<BasisKey>, Scalar)> = vec![(Vec::new(), coeff)];
            for slot in prefix.iter() {
                let mut next = Vec::new();
                for (p, c) in &partial {
                    for (k, ck) in slot {
                        let mut p = p.clone();
                        p.push(k.clone());
                        next.push((p, c * ck));
                    }
                }
                partial = next;
            }
            for (p, c) in partial {
                add_term(out, TensorWord::new(p).unwrap(), c);
            }
            return;
        }
        if let Some((x, rest)) = a.split_first() {
            prefix.push(vec![(x.clone(), Scalar::one())]);
            walk(alg, lambda, rest, b, prefix, coeff.clone(), out);
            prefix.pop();
        }
        if let Some((y, rest)) = b.split_first() {
            prefix.push(vec![(y.clone(), Scalar::one())]);
            walk(alg, lambda, a, rest, prefix, coeff.clone(), out);
            prefix.pop();
        }
        if let (Some((x, ra)), Some((y, rb))) = (a.split_first(), b.split_first()) {
            if !lambda.is_zero() {
                prefix.push(alg.mul_keys(x, y));
                walk(alg, lambda, ra, rb, prefix, &coeff * lambda, out);
                prefix.pop();
            }
        }
    }
    let mut out = Terms::new();
    let mut prefix = vec![alg.mul_keys(&a[0], &b[0])];
    walk(
        alg,
        lambda,
        &a[1..],
        &b[1..],
        &mut prefix,
        Scalar::one(),
        &mut out,
    );
    out
}

fn oracle_product(u: &ShuffleElement, v: &ShuffleElement) -> Terms<TensorWord> {
    let alg = u.ring().algebra();
    let mut out = Terms::new();
    for (wu, cu) in u.terms() {
        for (wv, cv) in v.terms() {
            for (w, c) in oracle(alg, u.ring().weight(), wu.slots(), wv.slots()) {
                add_term(&mut out, w, &(cu * cv) * &c);
            }
        }
    }
    out
}

#[test]
fn length_one_words_multiply_in_the_base() {
    let ring = FreeRb::new(poly(&["x"]), Scalar::zero());
    let a = elem(&ring, &[(1, &[mono(&[1])])]);
    let b = elem(&ring, &[(1, &[mono(&[2])])]);
    assert_eq!(
        a.msh_product(&b).unwrap(),
        elem(&ring, &[(1, &[mono(&[3])])])
    );
}

#[test]
fn long_word_times_letter_appends_tail() {
    let ring = FreeRb::new(poly(&["x", "y"]), Scalar::one());
    let a = elem(&ring, &[(1, &[mono(&[0, 0]), mono(&[1, 0])])]);
    let b = elem(&ring, &[(1, &[mono(&[0, 1])])]);
    let want = elem(&ring, &[(1, &[mono(&[0, 1]), mono(&[1, 0])])]);
    assert_eq!(a.msh_product(&b).unwrap(), want);
    assert_eq!(b.msh_product(&a).unwrap(), want);
}

#[test]
fn two_letter_words_pick_up_the_weight() {
    for lambda in [0, 1, -1, 2, 3] {
        let ring = FreeRb::new(poly(&["x"]), Scalar::from_int(lambda));
        let u = elem(&ring, &[(1, &[mono(&[0]), mono(&[1])])]);
        let got = u.msh_product(&u).unwrap();
        let want = elem(
            &ring,
            &[
                (2, &[mono(&[0]), mono(&[1]), mono(&[1])]),
                (lambda, &[mono(&[0]), mono(&[2])]),
            ],
        );
        assert_eq!(got, want, "lambda = {lambda}");
        assert_eq!(got.terms(), &oracle_product(&u, &u));
    }
}

#[test]
fn prints_like_the_cli() {
    let ring = FreeRb::new(poly(&["x"]), Scalar::zero());
    let u = elem(&ring, &[(1, &[mono(&[0]), mono(&[1])])]);
    assert_eq!(u.msh_product(&u).unwrap().to_string(), "2*T[1, x, x]");
}

#[test]
fn shuffle_p_prepends_the_unit() {
    let ring = FreeRb::new(poly(&["x", "y"]), Scalar::zero());
    let u = elem(&ring, &[(1, &[mono(&[1, 0]), mono(&[0, 1])])]);
    let want = elem(
        &ring,
        &[(1, &[mono(&[0, 0]), mono(&[1, 0]), mono(&[0, 1])])],
    );
    assert_eq!(u.shuffle_p().unwrap(), want);
    assert!(ShuffleElement::zero(&ring).shuffle_p().unwrap().is_zero());

    let v = elem(
        &ring,
        &[(3, &[mono(&[1, 0])]), (2, &[mono(&[0, 0]), mono(&[1, 0])])],
    );
    let want = elem(
        &ring,
        &[
            (3, &[mono(&[0, 0]), mono(&[1, 0])]),
            (2, &[mono(&[0, 0]), mono(&[0, 0]), mono(&[1, 0])]),
        ],
    );
    assert_eq!(v.shuffle_p().unwrap(), want);
}

#[test]
fn embed_gives_length_one_words() {
    let alg = Arc::new(AlgebraDescriptor::laurent(&["x"], "x").unwrap());
    let ring = FreeRb::new(Arc::clone(&alg), Scalar::zero());
    let x = AlgebraElement::variable(&alg, "x").unwrap();
    let half_x2 = x.pow(2).unwrap().scale(&q(1, 2));
    let e = ShuffleElement::embed(&ring, &half_x2).unwrap();
    assert_eq!(e.terms().len(), 1);
    assert_eq!(e.terms()[&TensorWord::single(mono(&[2]))], q(1, 2));
    assert!(ShuffleElement::embed(&ring, &AlgebraElement::zero(&alg))
        .unwrap()
        .is_zero());
    let sum = x.add(&x.try_inverse().unwrap()).unwrap();
    let e = ShuffleElement::embed(&ring, &sum).unwrap();
    assert_eq!(e.terms().len(), 2);
    assert!(e.terms().keys().all(|w| w.len() == 1));
}

#[test]
fn collapse_examples() {
    let alg = poly(&["x"]);
    let ring = FreeRb::new(Arc::clone(&alg), Scalar::zero());
    let integral = BaseRb::new(Arc::clone(&alg), BaseOperator::integral(0)).unwrap();
    let x = AlgebraElement::variable(&alg, "x").unwrap();

    let one_one = elem(&ring, &[(1, &[mono(&[0]), mono(&[0])])]);
    assert_eq!(collapse_phi(&one_one, &integral).unwrap(), x);

    let x_x = elem(&ring, &[(1, &[mono(&[1]), mono(&[1])])]);
    assert_eq!(
        collapse_phi(&x_x, &integral).unwrap(),
        x.pow(3).unwrap().scale(&q(1, 2))
    );

    let ring_id = FreeRb::new(Arc::clone(&alg), Scalar::from_int(-1));
    let identity = BaseRb::new(Arc::clone(&alg), BaseOperator::identity()).unwrap();
    let x_x = elem(&ring_id, &[(1, &[mono(&[1]), mono(&[1])])]);
    assert_eq!(collapse_phi(&x_x, &identity).unwrap(), x.pow(2).unwrap());
}

#[test]
fn collapse_rejects_weight_mismatch() {
    let alg = poly(&["x"]);
    let ring = FreeRb::new(Arc::clone(&alg), Scalar::one());
    let integral = BaseRb::new(Arc::clone(&alg), BaseOperator::integral(0)).unwrap();
    let u = elem(&ring, &[(1, &[mono(&[0]), mono(&[0])])]);
    assert!(matches!(collapse_phi(&u, &integral), Err(Error::Domain(_))));
}

#[test]
fn collapse_propagates_undefined_operator() {
    let alg = Arc::new(AlgebraDescriptor::laurent(&["x"], "x").unwrap());
    let ring = FreeRb::new(Arc::clone(&alg), Scalar::zero());
    let integral = BaseRb::new(Arc::clone(&alg), BaseOperator::integral(0)).unwrap();
    let u = ShuffleElement::from_word(
        &ring,
        word(&[
            mono(&[0]),
            BasisKey {
                exps: vec![0],
                denom_power: 1,
            },
        ]),
        Scalar::one(),
    )
    .unwrap();
    assert_eq!(collapse_phi(&u, &integral), Err(Error::OperatorUndefined));
}

#[test]
fn map_words_examples() {
    let src = poly(&["x"]);
    let wide = poly(&["x", "y"]);
    let ring = FreeRb::new(Arc::clone(&src), Scalar::zero());
    let x = AlgebraElement::variable(&src, "x").unwrap();

    let incl = AlgebraMap::inclusion(Arc::clone(&src), Arc::clone(&wide)).unwrap();
    let u = elem(&ring, &[(1, &[mono(&[1]), mono(&[1])])]);
    let got = map_words(&incl, &u).unwrap();
    assert_eq!(got.to_string(), "T[x, x]");
    assert_eq!(got.ring().algebra().vars(), &["x", "y"]);

    let double = AlgebraMap::new(
        Arc::clone(&src),
        Arc::clone(&src),
        vec![x.scale(&Scalar::from_int(2))],
    )
    .unwrap();
    let u = elem(&ring, &[(1, &[mono(&[0]), mono(&[1])])]);
    assert_eq!(
        map_words(&double, &u).unwrap(),
        elem(&ring, &[(2, &[mono(&[0]), mono(&[1])])])
    );

    let shift = AlgebraMap::new(
        Arc::clone(&src),
        Arc::clone(&src),
        vec![x.add(&AlgebraElement::one(&src)).unwrap()],
    )
    .unwrap();
    assert_eq!(
        map_words(&shift, &u).unwrap(),
        elem(
            &ring,
            &[
                (1, &[mono(&[0]), mono(&[1])]),
                (1, &[mono(&[0]), mono(&[0])])
            ]
        )
    );
}

#[test]
fn free_extension_examples() {
    let alg = poly(&["x"]);
    let ring = FreeRb::new(Arc::clone(&alg), Scalar::zero());
    let integral = BaseRb::new(Arc::clone(&alg), BaseOperator::integral(0)).unwrap();
    let x = AlgebraElement::variable(&alg, "x").unwrap();
    let id = |k: &BasisKey| Ok(AlgebraElement::from_key(&alg, k.clone(), Scalar::one()));

    let u = elem(&ring, &[(1, &[mono(&[0]), mono(&[1])])]);
    assert_eq!(
        free_extension(&integral, id, &u).unwrap(),
        x.pow(2).unwrap().scale(&q(1, 2))
    );

    let a = x
        .pow(2)
        .unwrap()
        .scale(&q(-3, 4))
        .add(&AlgebraElement::one(&alg))
        .unwrap();
    let e = ShuffleElement::embed(&ring, &a).unwrap();
    assert_eq!(free_extension(&integral, id, &e).unwrap(), a);

    let ys = poly(&["y"]);
    let iy = BaseRb::new(Arc::clone(&ys), BaseOperator::integral(0)).unwrap();
    let sub = AlgebraMap::new(
        Arc::clone(&alg),
        Arc::clone(&ys),
        vec![AlgebraElement::variable(&ys, "y").unwrap()],
    )
    .unwrap();
    let u = elem(&ring, &[(1, &[mono(&[1]), mono(&[1])])]);
    let y = AlgebraElement::variable(&ys, "y").unwrap();
    assert_eq!(
        free_extension(&iy, |k| sub.apply_key(k), &u).unwrap(),
        y.pow(3).unwrap().scale(&q(1, 2))
    );
}

#[test]
fn word_length_guard() {
    let limits = Limits {
        max_word_len: 3,
        ..Limits::default()
    };
    let ring = FreeRb::with_limits(poly(&["x"]), Scalar::zero(), limits);
    let u = elem(&ring, &[(1, &[mono(&[0]), mono(&[1])])]);
    let uu = u.msh_product(&u).unwrap();
    assert_eq!(uu.shuffle_p(), Err(Error::WordLength { len: 4, limit: 3 }));
    assert!(matches!(uu.msh_product(&u), Err(Error::WordLength { .. })));
}

#[test]
fn mismatched_rings_are_rejected() {
    let a = FreeRb::new(poly(&["x"]), Scalar::zero());
    let b = FreeRb::new(poly(&["x"]), Scalar::one());
    let u = ShuffleElement::one(&a);
    let v = ShuffleElement::one(&b);
    assert!(matches!(u.msh_product(&v), Err(Error::Domain(_))));
}

/// `a₀ ⋄ P(a₁ ⋄ P(⋯ P(a_k)⋯))` rebuilt from length-1 embeddings.
fn reconstruct(ring: &Arc<FreeRb>, w: &TensorWord) -> ShuffleElement {
    let embed = |k: &BasisKey| {
        ShuffleElement::from_word(ring, TensorWord::single(k.clone()), Scalar::one()).unwrap()
    };
    let slots = w.slots();
    let mut acc = embed(&slots[slots.len() - 1]);
    for k in slots[..slots.len() - 1].iter().rev() {
        acc = embed(k).msh_product(&acc.shuffle_p().unwrap()).unwrap();
    }
    acc
}

#[test]
fn reconstruction_of_all_short_words() {
    let ring = FreeRb::new(poly(&["x"]), Scalar::one());
    let letters = [mono(&[0]), mono(&[1]), mono(&[2])];
    let mut words: Vec<Vec<BasisKey>> = letters.iter().map(|k| vec![k.clone()]).collect();
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &words {
            for k in &letters {
                let mut w = w.clone();
                w.push(k.clone());
                next.push(w);
            }
        }
        for w in next {
            let tw = TensorWord::new(w.clone()).unwrap();
            let want = ShuffleElement::from_word(&ring, tw.clone(), Scalar::one()).unwrap();
            assert_eq!(reconstruct(&ring, &tw), want);
            words.push(w);
        }
    }
}

const WEIGHTS: [i64; 4] = [0, 1, -1, 2];

fn ring_for(lambda: i64, laurent: bool) -> Arc<FreeRb> {
    let alg = if laurent {
        Arc::new(AlgebraDescriptor::laurent(&["x", "y"], "x").unwrap())
    } else {
        poly(&["x", "y"])
    };
    FreeRb::new(alg, Scalar::from_int(lambda))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recursion_matches_interleavings(seed in any::<u64>(), li in 0usize..4, laurent in any::<bool>()) {
        let ring = ring_for(WEIGHTS[li], laurent);
        let mut s = Sampler::new(seed);
        let u = s.shuffle_element(&ring, 3);
        let v = s.shuffle_element(&ring, 3);
        let got = u.msh_product(&v).unwrap();
        prop_assert_eq!(got.terms(), &oracle_product(&u, &v));
    }

    #[test]
    fn ring_laws(seed in any::<u64>(), li in 0usize..4) {
        let ring = ring_for(WEIGHTS[li], false);
        let mut s = Sampler::new(seed);
        let (a, b, c) = (s.shuffle_element(&ring, 2), s.shuffle_element(&ring, 2), s.shuffle_element(&ring, 2));
        prop_assert_eq!(a.msh_product(&b).unwrap(), b.msh_product(&a).unwrap());
        prop_assert_eq!(
            a.msh_product(&b).unwrap().msh_product(&c).unwrap(),
            a.msh_product(&b.msh_product(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.msh_product(&ShuffleElement::one(&ring)).unwrap(), a);
    }

    #[test]
    fn rb_axiom(seed in any::<u64>(), li in 0usize..4) {
        let ring = ring_for(WEIGHTS[li], false);
        let mut s = Sampler::new(seed);
        let u = s.shuffle_element(&ring, 3);
        let v = s.shuffle_element(&ring, 3);
        prop_assert!(verify_rb_axiom(&ring, ring.weight(), &u, &v).unwrap());
    }

    #[test]
    fn collapse_is_a_morphism(seed in any::<u64>(), identity in any::<bool>()) {
        let alg = poly(&["x"]);
        let (op, lambda) = if identity {
            (BaseOperator::identity(), -1)
        } else {
            (BaseOperator::integral(0), 0)
        };
        let target = BaseRb::new(Arc::clone(&alg), op).unwrap();
        let ring = FreeRb::new(Arc::clone(&alg), Scalar::from_int(lambda));
        let mut s = Sampler::new(seed);
        let a = s.element(&alg, KeyKind::Polynomial);
        prop_assert_eq!(collapse_phi(&ShuffleElement::embed(&ring, &a).unwrap(), &target).unwrap(), a);
        let u = s.shuffle_element(&ring, 3);
        let v = s.shuffle_element(&ring, 2);
        let fu = collapse_phi(&u, &target).unwrap();
        let fv = collapse_phi(&v, &target).unwrap();
        prop_assert_eq!(collapse_phi(&u.msh_product(&v).unwrap(), &target).unwrap(), fu.mul(&fv).unwrap());
        prop_assert_eq!(collapse_phi(&u.shuffle_p().unwrap(), &target).unwrap(), target.apply_p(&fu).unwrap());
    }

    #[test]
    fn map_words_is_a_morphism(seed in any::<u64>(), li in 0usize..4) {
        let alg = poly(&["x"]);
        let ring = FreeRb::new(Arc::clone(&alg), Scalar::from_int(WEIGHTS[li]));
        let x = AlgebraElement::variable(&alg, "x").unwrap();
        let f = AlgebraMap::new(Arc::clone(&alg), Arc::clone(&alg), vec![x.add(&AlgebraElement::one(&alg)).unwrap()]).unwrap();
        let mut s = Sampler::new(seed);
        s.max_exp = 1;
        let u = s.shuffle_element(&ring, 2);
        let v = s.shuffle_element(&ring, 2);
        let (fu, fv) = (map_words(&f, &u).unwrap(), map_words(&f, &v).unwrap());
        prop_assert_eq!(map_words(&f, &u.msh_product(&v).unwrap()).unwrap(), fu.msh_product(&fv).unwrap());
        prop_assert_eq!(map_words(&f, &u.shuffle_p().unwrap()).unwrap(), fu.shuffle_p().unwrap());
    }

    #[test]
    fn free_extension_factors_through_collapse(seed in any::<u64>()) {
        let src = poly(&["x"]);
        let wide = poly(&["x", "y"]);
        let target = BaseRb::new(Arc::clone(&wide), BaseOperator::integral(0)).unwrap();
        let incl = AlgebraMap::inclusion(Arc::clone(&src), Arc::clone(&wide)).unwrap();
        let ring = FreeRb::new(Arc::clone(&src), Scalar::zero());
        let mut s = Sampler::new(seed);
        let u = s.shuffle_element(&ring, 3);
        let direct = free_extension(&target, |k| incl.apply_key(k), &u).unwrap();
        prop_assert_eq!(direct, collapse_phi(&map_words(&incl, &u).unwrap(), &target).unwrap());
    }
}
