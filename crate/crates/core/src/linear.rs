//! Sparse ℚ-linear combinations keyed by an ordered basis.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type Terms<K> = BTreeMap<K, Scalar>;

/// `map[key] += coeff`, dropping the entry if it cancels.
pub fn add_term<K: Ord>(map: &mut Terms<K>, key: K, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// `acc += factor * other`.
pub fn add_scaled<K: Ord + Clone>(acc: &mut Terms<K>, factor: &Scalar, other: &Terms<K>) {
    if factor.is_zero() {
        return;
    }
    for (k, c) in other {
        add_term(acc, k.clone(), factor * c);
    }
}

pub fn scaled<K: Ord + Clone>(factor: &Scalar, terms: &Terms<K>) -> Terms<K> {
    let mut out = Terms::new();
    add_scaled(&mut out, factor, terms);
    out
}
