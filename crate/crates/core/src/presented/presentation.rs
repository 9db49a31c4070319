use std::sync::Arc;

use crate::base::{AlgebraDescriptor, AlgebraElement, BaseOperator, BasisKey};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linear::{add_term, Terms};
use crate::presented::expr::RBExpression;
use crate::rb::check_weight;
use crate::scalar::Scalar;

/// A base algebra together with its operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub alg: Arc<AlgebraDescriptor>,
    pub op: BaseOperator,
}

impl Component {
    pub fn new(alg: Arc<AlgebraDescriptor>, op: BaseOperator) -> Result<Self> {
        op.check_for(&alg)?;
        Ok(Component { alg, op })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TensorData {
    pub r0: Vec<String>,
    pub r1: Component,
    pub r2: Component,
    /// Carrier index of each R₁ variable.
    pub left_idx: Vec<usize>,
    /// Carrier index of each R₂ variable.
    pub right_idx: Vec<usize>,
    pub left_mask: Vec<bool>,
    pub right_mask: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Kind {
    Localization(BaseOperator),
    Tensor(Box<TensorData>),
}

/// A free Rota-Baxter algebra on a carrier together with the oriented
/// relations that define a quotient of it.
///
/// * Localization: `Ш(S⁻¹A)` modulo `P(a) − P_A(a)` for `a` in A.
/// * Tensor product: `Ш(R₁ ⊗_{R₀} R₂)` modulo `P(r₁□1) − P₁(r₁)□1` and
///   `P(1□r₂) − 1□P₂(r₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub(crate) kind: Kind,
    weight: Scalar,
    carrier: Arc<AlgebraDescriptor>,
    limits: Limits,
}

/// Which side of a tensor presentation an injection comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The carrier R₁ ⊗_{R₀} R₂ for variable inclusions: R₁'s variables, then
/// R₂'s variables outside R₀. A denominator can only come from R₁.
pub fn tensor_base<S: AsRef<str>>(
    r0: &[S],
    r1: &AlgebraDescriptor,
    r2: &AlgebraDescriptor,
) -> Result<AlgebraDescriptor> {
    let r0: Vec<&str> = r0.iter().map(AsRef::as_ref).collect();
    for v in &r0 {
        if r1.var_index(v).is_none() || r2.var_index(v).is_none() {
            return Err(Error::domain(format!(
                "shared variable {v:?} must appear in both components"
            )));
        }
    }
    if r2.denominator().is_some() {
        return Err(Error::domain(
            "only the first tensor component may carry a denominator",
        ));
    }
    let mut vars: Vec<String> = r1.vars().to_vec();
    for v in r2.vars() {
        if r0.contains(&v.as_str()) {
            continue;
        }
        if vars.contains(v) {
            return Err(Error::domain(format!(
                "variable {v:?} appears in both components but is not shared"
            )));
        }
        vars.push(v.clone());
    }
    match r1.denominator() {
        None => AlgebraDescriptor::polynomial(&vars),
        Some(d) => AlgebraDescriptor::localized(&vars, &r1.vars()[d.var], &d.s),
    }
}

/// Exponent vectors of R₀ monomials used to check operator compatibility.
fn r0_probe(n: usize) -> Vec<Vec<u32>> {
    let bound = if n <= 2 { 3 } else { 1 };
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &out {
            for k in 0..=bound {
                let mut e = e.clone();
                e.push(k);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

impl Presentation {
    /// The Rota-Baxter localization of `(A, P_A)` at the denominator of `alg`.
    /// Without a denominator the multiplicative set is `{1}`.
    pub fn localization(alg: Arc<AlgebraDescriptor>, op: BaseOperator) -> Result<Arc<Self>> {
        Self::localization_with_limits(alg, op, Limits::default())
    }

    pub fn localization_with_limits(
        alg: Arc<AlgebraDescriptor>,
        op: BaseOperator,
        limits: Limits,
    ) -> Result<Arc<Self>> {
        op.check_for(&alg)?;
        Ok(Arc::new(Presentation {
            weight: op.weight().clone(),
            kind: Kind::Localization(op),
            carrier: alg,
            limits,
        }))
    }

    pub fn tensor<S: AsRef<str>>(r0: &[S], r1: Component, r2: Component) -> Result<Arc<Self>> {
        Self::tensor_with_limits(r0, r1, r2, Limits::default())
    }

    pub fn tensor_with_limits<S: AsRef<str>>(
        r0: &[S],
        r1: Component,
        r2: Component,
        limits: Limits,
    ) -> Result<Arc<Self>> {
        check_weight(r1.op.weight(), r2.op.weight())?;
        let carrier = Arc::new(tensor_base(r0, &r1.alg, &r2.alg)?);
        let index = |name: &str| {
            carrier
                .var_index(name)
                .expect("carrier contains component variables")
        };
        let left_idx: Vec<usize> = r1.alg.vars().iter().map(|v| index(v)).collect();
        let right_idx: Vec<usize> = r2.alg.vars().iter().map(|v| index(v)).collect();
        let mut left_mask = vec![false; carrier.nvars()];
        let mut right_mask = vec![false; carrier.nvars()];
        left_idx.iter().for_each(|&i| left_mask[i] = true);
        right_idx.iter().for_each(|&i| right_mask[i] = true);
        let pres = Presentation {
            weight: r1.op.weight().clone(),
            kind: Kind::Tensor(Box::new(TensorData {
                r0: r0.iter().map(|v| v.as_ref().to_string()).collect(),
                r1,
                r2,
                left_idx,
                right_idx,
                left_mask,
                right_mask,
            })),
            carrier,
            limits,
        };
        pres.check_shared_operators()?;
        Ok(Arc::new(pres))
    }

    /// Both operators must agree on R₀ and map it into itself.
    fn check_shared_operators(&self) -> Result<()> {
        let t = self.tensor_data().expect("tensor presentation");
        let shared: Vec<usize> =
            t.r0.iter()
                .map(|v| self.carrier.var_index(v).expect("shared"))
                .collect();
        for exps in r0_probe(shared.len()) {
            let mut key = BasisKey::unit(self.carrier.nvars());
            for (&i, &e) in shared.iter().zip(&exps) {
                key.exps[i] = e;
            }
            let left = self.apply_component(Side::Left, &key)?;
            let right = self.apply_component(Side::Right, &key)?;
            if left != right {
                return Err(Error::domain(
                    "the component operators disagree on the shared subalgebra",
                ));
            }
            let inside = left.keys().all(|k| {
                k.is_polynomial()
                    && k.exps
                        .iter()
                        .enumerate()
                        .all(|(i, &e)| e == 0 || shared.contains(&i))
            });
            if !inside {
                return Err(Error::domain(
                    "the component operators do not preserve the shared subalgebra",
                ));
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    /// The algebra whose free Rota-Baxter algebra is being presented.
    pub fn carrier(&self) -> &Arc<AlgebraDescriptor> {
        &self.carrier
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn is_tensor(&self) -> bool {
        matches!(self.kind, Kind::Tensor(_))
    }

    pub(crate) fn tensor_data(&self) -> Option<&TensorData> {
        match &self.kind {
            Kind::Tensor(t) => Some(t),
            Kind::Localization(_) => None,
        }
    }

    pub fn component(&self, side: Side) -> Option<&Component> {
        self.tensor_data().map(|t| match side {
            Side::Left => &t.r1,
            Side::Right => &t.r2,
        })
    }

    pub fn shared_vars(&self) -> Option<&[String]> {
        self.tensor_data().map(|t| t.r0.as_slice())
    }

    /// The polynomial algebra on the shared variables.
    pub fn shared_algebra(&self) -> Option<Arc<AlgebraDescriptor>> {
        self.tensor_data().map(|t| {
            Arc::new(AlgebraDescriptor::polynomial(&t.r0).expect("component names are valid"))
        })
    }

    /// Short description for headers.
    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Localization(op) => format!(
                "localization {} op={} weight={}",
                self.carrier.summary(),
                op.describe(&self.carrier),
                self.weight.to_ratio_string()
            ),
            Kind::Tensor(t) => format!(
                "tensor shared={} left=[{} op={}] right=[{} op={}] weight={}",
                t.r0.join(","),
                t.r1.alg.summary(),
                t.r1.op.describe(&t.r1.alg),
                t.r2.alg.summary(),
                t.r2.op.describe(&t.r2.alg),
                self.weight.to_ratio_string()
            ),
        }
    }

    /// Carrier key of a component key.
    pub fn embed_key(&self, side: Side, key: &BasisKey) -> Result<BasisKey> {
        let t = self
            .tensor_data()
            .ok_or_else(|| Error::domain("not a tensor presentation"))?;
        let (comp, idx) = match side {
            Side::Left => (&t.r1, &t.left_idx),
            Side::Right => (&t.r2, &t.right_idx),
        };
        comp.alg.validate_key(key)?;
        let mut out = BasisKey::unit(self.carrier.nvars());
        for (i, &e) in key.exps.iter().enumerate() {
            out.exps[idx[i]] = e;
        }
        out.denom_power = key.denom_power;
        Ok(out)
    }

    /// Component key of a carrier key that only uses that side's variables.
    fn restrict_key(&self, side: Side, key: &BasisKey) -> Option<BasisKey> {
        let t = self.tensor_data()?;
        let (mask, idx) = match side {
            Side::Left => (&t.left_mask, &t.left_idx),
            Side::Right => (&t.right_mask, &t.right_idx),
        };
        if side == Side::Right && key.denom_power > 0 {
            return None;
        }
        if key.exps.iter().enumerate().any(|(i, &e)| e > 0 && !mask[i]) {
            return None;
        }
        Some(BasisKey {
            exps: idx.iter().map(|&i| key.exps[i]).collect(),
            denom_power: key.denom_power,
        })
    }

    /// Splits a carrier key into the R₁ key and the R₂-only monomial (also
    /// as an R₂ key), so that the carrier key is their product.
    pub fn split_key(&self, key: &BasisKey) -> Result<(BasisKey, BasisKey)> {
        let t = self
            .tensor_data()
            .ok_or_else(|| Error::domain("not a tensor presentation"))?;
        let left = BasisKey {
            exps: t.left_idx.iter().map(|&i| key.exps[i]).collect(),
            denom_power: key.denom_power,
        };
        let right = BasisKey::monomial(
            t.right_idx
                .iter()
                .map(|&i| if t.left_mask[i] { 0 } else { key.exps[i] })
                .collect(),
        );
        Ok((left, right))
    }

    fn apply_component(&self, side: Side, key: &BasisKey) -> Result<Terms<BasisKey>> {
        let comp = self.component(side).expect("tensor presentation");
        let local = self
            .restrict_key(side, key)
            .ok_or_else(|| Error::Internal("key is not pure on this side".into()))?;
        let mut out = Terms::new();
        for (k, c) in comp.op.apply_key(&comp.alg, &local)? {
            add_term(&mut out, self.embed_key(side, &k)?, c);
        }
        Ok(out)
    }

    /// The evaluation rule for `P(key)`, when one applies: the image under the
    /// base operator of the side the key belongs to.
    pub(crate) fn evaluate_key(&self, key: &BasisKey) -> Result<Option<Terms<BasisKey>>> {
        if key.is_fractional() {
            return Ok(None);
        }
        match &self.kind {
            Kind::Localization(op) => Ok(Some(op.apply_key(&self.carrier, key)?)),
            Kind::Tensor(_) => {
                for side in [Side::Left, Side::Right] {
                    if self.restrict_key(side, key).is_some() {
                        return Ok(Some(self.apply_component(side, key)?));
                    }
                }
                Ok(None)
            }
        }
    }

    pub(crate) fn is_evaluable(&self, key: &BasisKey) -> bool {
        if key.is_fractional() {
            return false;
        }
        match &self.kind {
            Kind::Localization(_) => true,
            Kind::Tensor(_) => {
                self.restrict_key(Side::Left, key).is_some()
                    || self.restrict_key(Side::Right, key).is_some()
            }
        }
    }
}

/// `k₁(r) = r□1` or `k₂(r) = 1□r` as a leaf over the tensor carrier.
pub fn tensor_injections(
    pres: &Presentation,
    side: Side,
    r: &AlgebraElement,
) -> Result<RBExpression> {
    let comp = pres
        .component(side)
        .ok_or_else(|| Error::domain("not a tensor presentation"))?;
    crate::base::check_same(&comp.alg, r.algebra())?;
    let mut terms = Terms::new();
    for (k, c) in r.terms() {
        add_term(&mut terms, pres.embed_key(side, k)?, c.clone());
    }
    Ok(RBExpression::Leaf(AlgebraElement::from_terms(
        pres.carrier(),
        terms,
    )?))
}
