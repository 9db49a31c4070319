use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::base::{
    check_same, AlgebraDescriptor, AlgebraElement, BaseOperator, BasisKey, OperatorKind,
};
use crate::error::{Error, Result};
use crate::free_rb::{check_len, DisplayTerms, MixableShuffle, TensorWord};
use crate::limits::Limits;
use crate::linear::{add_scaled, add_term, scaled, Terms};
use crate::rb::{check_weight, RotaBaxterAlgebra};
use crate::scalar::Scalar;

/// Which construction of the localized operator is in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Any weight; the complement V must be closed under multiplication.
    GeneralWeight,
    /// Weight zero; no multiplicative condition on V.
    WeightZero,
    /// Weight zero with the zero operator on A; V stands for S⁻¹A / A.
    ZeroOperatorQuotient,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::GeneralWeight => "general",
            Variant::WeightZero => "weight-zero",
            Variant::ZeroOperatorQuotient => "zero-op",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Variant::GeneralWeight),
            "weight-zero" => Ok(Variant::WeightZero),
            "zero-op" => Ok(Variant::ZeroOperatorQuotient),
            _ => Err(Error::domain(format!("unknown variant {s:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The Rota-Baxter localization S⁻¹_RB A realized on
/// B = S⁻¹A ⊕ ⊕_{k≥1} (S⁻¹A ⊗ V^{⊗k}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbLocalization {
    alg: Arc<AlgebraDescriptor>,
    op: BaseOperator,
    variant: Variant,
    limits: Limits,
}

impl RbLocalization {
    pub fn new(
        alg: Arc<AlgebraDescriptor>,
        op: BaseOperator,
        variant: Variant,
    ) -> Result<Arc<Self>> {
        Self::with_limits(alg, op, variant, Limits::default())
    }

    pub fn with_limits(
        alg: Arc<AlgebraDescriptor>,
        op: BaseOperator,
        variant: Variant,
        limits: Limits,
    ) -> Result<Arc<Self>> {
        if alg.denominator().is_none() {
            return Err(Error::domain(
                "localization requires a descriptor with a denominator",
            ));
        }
        op.check_for(&alg)?;
        match variant {
            Variant::GeneralWeight => {}
            Variant::WeightZero => {
                if !op.weight().is_zero() {
                    return Err(Error::domain("the weight-zero variant requires weight 0"));
                }
            }
            Variant::ZeroOperatorQuotient => {
                if !op.weight().is_zero() || op.kind() != OperatorKind::Zero {
                    return Err(Error::domain(
                        "the zero-operator variant requires the zero operator at weight 0",
                    ));
                }
            }
        }
        Ok(Arc::new(RbLocalization {
            alg,
            op,
            variant,
            limits,
        }))
    }

    pub fn algebra(&self) -> &Arc<AlgebraDescriptor> {
        &self.alg
    }

    pub fn operator(&self) -> &BaseOperator {
        &self.op
    }

    pub fn weight(&self) -> &Scalar {
        self.op.weight()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// `variant=weight-zero weight=0/1`
    pub fn header(&self) -> String {
        format!(
            "variant={} weight={}",
            self.variant.name(),
            self.weight().to_ratio_string()
        )
    }
}

/// An element of the localized carrier B.
#[derive(Clone, Debug)]
pub struct LocalizedElement {
    loc: Arc<RbLocalization>,
    terms: Terms<TensorWord>,
}

impl PartialEq for LocalizedElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.loc, &other.loc) || self.loc == other.loc) && self.terms == other.terms
    }
}

fn validate_word(loc: &RbLocalization, w: &TensorWord) -> Result<()> {
    check_len(w.len(), loc.limits.max_word_len)?;
    loc.alg.validate_key(w.head())?;
    for k in w.tail() {
        loc.alg.validate_key(k)?;
        if !k.is_fractional() {
            return Err(Error::domain(
                "slots after the first must be fractional (V-part) keys",
            ));
        }
    }
    Ok(())
}

impl LocalizedElement {
    pub fn zero(loc: &Arc<RbLocalization>) -> Self {
        LocalizedElement {
            loc: Arc::clone(loc),
            terms: Terms::new(),
        }
    }

    pub fn one(loc: &Arc<RbLocalization>) -> Self {
        Self::word(loc, TensorWord::single(loc.alg.unit_key()), Scalar::one()).expect("unit word")
    }

    pub fn word(loc: &Arc<RbLocalization>, w: TensorWord, coeff: Scalar) -> Result<Self> {
        let mut terms = Terms::new();
        add_term(&mut terms, w, coeff);
        Self::from_terms(loc, terms)
    }

    pub fn from_terms(loc: &Arc<RbLocalization>, terms: Terms<TensorWord>) -> Result<Self> {
        for w in terms.keys() {
            validate_word(loc, w)?;
        }
        Ok(LocalizedElement {
            loc: Arc::clone(loc),
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// The structure map i_S : A → B, defined on the polynomial part only.
    pub fn structure_map(loc: &Arc<RbLocalization>, a: &AlgebraElement) -> Result<Self> {
        if !a.is_polynomial() {
            return Err(Error::domain(
                "structure_map expects an element of A (no denominators)",
            ));
        }
        Self::from_fraction(loc, a)
    }

    /// An element of S⁻¹A ⊂ B as length-1 words.
    pub fn from_fraction(loc: &Arc<RbLocalization>, a: &AlgebraElement) -> Result<Self> {
        check_same(&loc.alg, a.algebra())?;
        Ok(LocalizedElement {
            loc: Arc::clone(loc),
            terms: a
                .terms()
                .iter()
                .map(|(k, c)| (TensorWord::single(k.clone()), c.clone()))
                .collect(),
        })
    }

    /// The inverse of `i_S(s^k)`: the length-1 word `1/s^k`.
    pub fn invert_image(loc: &Arc<RbLocalization>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("invert_image expects k >= 1"));
        }
        let key = BasisKey {
            exps: vec![0; loc.alg.nvars()],
            denom_power: k,
        };
        Self::word(loc, TensorWord::single(key), Scalar::one())
    }

    pub fn localization(&self) -> &Arc<RbLocalization> {
        &self.loc
    }

    pub fn terms(&self) -> &Terms<TensorWord> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.loc, &other.loc) || self.loc == other.loc {
            Ok(())
        } else {
            check_same(&self.loc.alg, &other.loc.alg)?;
            check_weight(self.loc.weight(), other.loc.weight())?;
            Err(Error::domain(
                "localized elements belong to different carriers",
            ))
        }
    }

    fn with_terms(&self, terms: Terms<TensorWord>) -> Self {
        LocalizedElement {
            loc: Arc::clone(&self.loc),
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

    /// The product of B: the mixable shuffle restricted to B. In the
    /// zero-operator quotient, words that pick up an A-part after slot 0 are
    /// projected away.
    pub fn b_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let loc = &self.loc;
        let mut engine = MixableShuffle::new(&loc.alg, loc.weight());
        let raw = engine.product(&self.terms, &other.terms, loc.limits.max_word_len)?;
        let mut terms = Terms::new();
        for (w, c) in raw {
            if w.tail().iter().all(BasisKey::is_fractional) {
                add_term(&mut terms, w, c);
            } else if loc.variant != Variant::ZeroOperatorQuotient {
                return Err(Error::Internal(
                    "product left the localized carrier (V not closed under multiplication)".into(),
                ));
            }
        }
        Ok(self.with_terms(terms))
    }

    /// The localized Rota-Baxter operator.
    pub fn p_localized(&self) -> Result<Self> {
        let mut memo = HashMap::new();
        let mut out = Terms::new();
        for (w, c) in &self.terms {
            let image = p_word(&self.loc, w, &mut memo)?;
            add_scaled(&mut out, c, &image);
        }
        Ok(self.with_terms(out))
    }
}

/// The operator on a single word `a ⊗ ū`, by recursion on word length.
///
/// A fractional head gets a unit slot prepended. A polynomial head `a` maps to
/// `P_A(a) ⊗ ū − P(P_A(a)·ū) − λ P(a·ū)`, where `c·ū` multiplies `c` into the
/// first slot of `ū`, producing words one slot shorter.
fn p_word(
    loc: &RbLocalization,
    w: &TensorWord,
    memo: &mut HashMap<TensorWord, Terms<TensorWord>>,
) -> Result<Terms<TensorWord>> {
    if let Some(hit) = memo.get(w) {
        return Ok(hit.clone());
    }
    let alg = &*loc.alg;
    let head = w.head();
    let mut out = Terms::new();
    if head.is_fractional() {
        check_len(w.len() + 1, loc.limits.max_word_len)?;
        add_term(&mut out, w.prepend(alg.unit_key()), Scalar::one());
    } else if loc.variant != Variant::ZeroOperatorQuotient {
        let image = loc.op.apply_key(alg, head)?;
        let tail = w.tail();
        for (h, c) in &image {
            add_term(&mut out, TensorWord::from_parts(h.clone(), tail), c.clone());
        }
        if let Some((first, rest)) = tail.split_first() {
            let minus_one = Scalar::from_int(-1);
            for (h, c) in &image {
                for (k, ck) in alg.mul_keys(h, first) {
                    let sub = p_word(loc, &TensorWord::from_parts(k, rest), memo)?;
                    add_scaled(&mut out, &(&minus_one * &(c * &ck)), &sub);
                }
            }
            let lambda = loc.weight();
            if !lambda.is_zero() {
                for (k, ck) in alg.mul_keys(head, first) {
                    let sub = p_word(loc, &TensorWord::from_parts(k, rest), memo)?;
                    add_scaled(&mut out, &(-(lambda * &ck)), &sub);
                }
            }
        }
    }
    memo.insert(w.clone(), out.clone());
    Ok(out)
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        DisplayTerms {
            alg: &self.loc.alg,
            terms: &self.terms,
        }
        .fmt(f)
    }
}

impl RotaBaxterAlgebra for Arc<RbLocalization> {
    type Element = LocalizedElement;

    fn weight(&self) -> &Scalar {
        self.op.weight()
    }

    fn zero(&self) -> LocalizedElement {
        LocalizedElement::zero(self)
    }

    fn one(&self) -> LocalizedElement {
        LocalizedElement::one(self)
    }

    fn add(&self, a: &LocalizedElement, b: &LocalizedElement) -> Result<LocalizedElement> {
        a.add(b)
    }

    fn scale(&self, c: &Scalar, a: &LocalizedElement) -> LocalizedElement {
        a.scale(c)
    }

    fn mul(&self, a: &LocalizedElement, b: &LocalizedElement) -> Result<LocalizedElement> {
        a.b_product(b)
    }

    fn apply_p(&self, a: &LocalizedElement) -> Result<LocalizedElement> {
        a.p_localized()
    }
}
