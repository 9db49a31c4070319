use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::base::{push_term, AlgebraDescriptor, BasisKey};
use crate::error::{Error, Result};
use crate::linear::{add_scaled, add_term, Terms};
use crate::scalar::Scalar;

/// A pure tensor `a₀ ⊗ a₁ ⊗ ⋯ ⊗ a_k` of basis keys (k ≥ 0).
///
/// Words order by length first, then lexicographically by slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorWord(Vec<BasisKey>);

impl TensorWord {
    pub fn new(slots: Vec<BasisKey>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::domain("tensor words need at least one slot"));
        }
        Ok(TensorWord(slots))
    }

    pub fn single(key: BasisKey) -> Self {
        TensorWord(vec![key])
    }

    pub fn slots(&self) -> &[BasisKey] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn head(&self) -> &BasisKey {
        &self.0[0]
    }

    /// Slots 1..k.
    pub fn tail(&self) -> &[BasisKey] {
        &self.0[1..]
    }

    /// `1 ⊗ self`.
    pub fn prepend(&self, key: BasisKey) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(key);
        v.extend_from_slice(&self.0);
        TensorWord(v)
    }

    pub(crate) fn from_parts(head: BasisKey, tail: &[BasisKey]) -> Self {
        let mut v = Vec::with_capacity(tail.len() + 1);
        v.push(head);
        v.extend_from_slice(tail);
        TensorWord(v)
    }

    pub fn into_slots(self) -> Vec<BasisKey> {
        self.0
    }
}

impl PartialOrd for TensorWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TensorWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

pub(crate) fn check_len(len: usize, limit: usize) -> Result<()> {
    if len > limit {
        Err(Error::WordLength { len, limit })
    } else {
        Ok(())
    }
}

pub(crate) fn max_len(terms: &Terms<TensorWord>) -> usize {
    terms.keys().map(TensorWord::len).max().unwrap_or(0)
}

type Memo = HashMap<(Vec<BasisKey>, Vec<BasisKey>), Terms<TensorWord>>;

/// The mixable shuffle product of two pure words, computed by the defining
/// recursion on word length, memoized on `(left, right)` pairs.
pub(crate) struct MixableShuffle<'a> {
    alg: &'a AlgebraDescriptor,
    weight: &'a Scalar,
    unit: BasisKey,
    memo: Memo,
}

impl<'a> MixableShuffle<'a> {
    pub fn new(alg: &'a AlgebraDescriptor, weight: &'a Scalar) -> Self {
        MixableShuffle {
            alg,
            weight,
            unit: alg.unit_key(),
            memo: Memo::new(),
        }
    }

    pub fn words(&mut self, a: &[BasisKey], b: &[BasisKey]) -> Terms<TensorWord> {
        if let Some(hit) = self.memo.get(&(a.to_vec(), b.to_vec())) {
            return hit.clone();
        }
        let head = self.alg.mul_keys(&a[0], &b[0]);
        let mut out = Terms::new();
        if a.len() == 1 || b.len() == 1 {
            // a₀b₀ followed by the tail of the longer word
            let tail = if a.len() == 1 { &b[1..] } else { &a[1..] };
            for (h, c) in head {
                add_term(&mut out, TensorWord::from_parts(h, tail), c);
            }
        } else {
            let (at, bt) = (&a[1..], &b[1..]);
            let one_bt = self.with_unit(bt);
            let one_at = self.with_unit(at);
            let mut inner = self.words(at, &one_bt);
            let second = self.words(&one_at, bt);
            add_scaled(&mut inner, &Scalar::one(), &second);
            if !self.weight.is_zero() {
                let third = self.words(at, bt);
                let w = self.weight.clone();
                add_scaled(&mut inner, &w, &third);
            }
            for (h, ch) in head {
                for (w, cw) in &inner {
                    add_term(&mut out, w.prepend(h.clone()), &ch * cw);
                }
            }
        }
        self.memo.insert((a.to_vec(), b.to_vec()), out.clone());
        out
    }

    fn with_unit(&self, tail: &[BasisKey]) -> Vec<BasisKey> {
        let mut v = Vec::with_capacity(tail.len() + 1);
        v.push(self.unit.clone());
        v.extend_from_slice(tail);
        v
    }

    /// Bilinear extension to combinations of words, with the length guard.
    pub fn product(
        &mut self,
        u: &Terms<TensorWord>,
        v: &Terms<TensorWord>,
        limit: usize,
    ) -> Result<Terms<TensorWord>> {
        if !u.is_empty() && !v.is_empty() {
            check_len(max_len(u) + max_len(v) - 1, limit)?;
        }
        let mut out = Terms::new();
        for (wu, cu) in u {
            for (wv, cv) in v {
                let prod = self.words(wu.slots(), wv.slots());
                add_scaled(&mut out, &(cu * cv), &prod);
            }
        }
        Ok(out)
    }
}

/// Prepend the unit to every word.
pub(crate) fn prepend_unit(
    alg: &AlgebraDescriptor,
    u: &Terms<TensorWord>,
    limit: usize,
) -> Result<Terms<TensorWord>> {
    check_len(max_len(u) + 1, limit)?;
    let unit = alg.unit_key();
    Ok(u.iter()
        .map(|(w, c)| (w.prepend(unit.clone()), c.clone()))
        .collect())
}

/// A word as text: length-1 words print as their key, longer ones as `T[...]`.
pub fn format_word(alg: &AlgebraDescriptor, w: &TensorWord) -> String {
    if w.len() == 1 {
        return alg.format_key(w.head());
    }
    let slots: Vec<String> = w.slots().iter().map(|k| alg.format_key(k)).collect();
    format!("T[{}]", slots.join(", "))
}

pub(crate) struct DisplayTerms<'a> {
    pub alg: &'a AlgebraDescriptor,
    pub terms: &'a Terms<TensorWord>,
}

impl fmt::Display for DisplayTerms<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (w, c) in self.terms {
            push_term(&mut out, c, &format_word(self.alg, w));
        }
        f.write_str(&out)
    }
}
