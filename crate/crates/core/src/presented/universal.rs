use std::sync::Arc;

use crate::base::{AlgebraDescriptor, BaseOperator, BasisKey};
use crate::batch::{run_checks, Exec};
use crate::error::{Error, Result};
use crate::free_rb::TensorWord;
use crate::limits::Limits;
use crate::localize::{LocalizedElement, RbLocalization, Variant};
use crate::presented::expr::RBExpression;
use crate::presented::presentation::{Component, Presentation, Side};
use crate::presented::rewrite::{equal_mod_ideal, normal_form_of, normalize, EqualityVerdict};
use crate::rb::{check_weight, RotaBaxterAlgebra};
use crate::scalar::Scalar;

/// Evaluates `e` in `target` through the pair `(ψ₁, ψ₂)`: a carrier key
/// `r₁·r₂` goes to `ψ₁(r₁)·ψ₂(r₂)` and P-nodes to the target operator.
///
/// The two maps must agree on the shared subalgebra; this is checked on
/// low-degree monomials before evaluating.
pub fn universal_map<T, F1, F2>(
    e: &RBExpression,
    pres: &Presentation,
    target: &T,
    mut psi1: F1,
    mut psi2: F2,
) -> Result<T::Element>
where
    T: RotaBaxterAlgebra,
    F1: FnMut(&BasisKey) -> Result<T::Element>,
    F2: FnMut(&BasisKey) -> Result<T::Element>,
{
    check_weight(target.weight(), pres.weight())?;
    let t = pres
        .tensor_data()
        .ok_or_else(|| Error::domain("universal_map needs a tensor presentation"))?;
    e.check_algebra(pres.carrier())?;

    let shared: Vec<(usize, usize)> =
        t.r0.iter()
            .map(|v| {
                (
                    t.r1.alg.var_index(v).expect("shared"),
                    t.r2.alg.var_index(v).expect("shared"),
                )
            })
            .collect();
    for d in 0..=2u32 {
        for (i1, i2) in &shared {
            let mut k1 = BasisKey::unit(t.r1.alg.nvars());
            let mut k2 = BasisKey::unit(t.r2.alg.nvars());
            k1.exps[*i1] = d;
            k2.exps[*i2] = d;
            if psi1(&k1)? != psi2(&k2)? {
                return Err(Error::domain(
                    "the two maps disagree on the shared subalgebra",
                ));
            }
        }
    }

    e.evaluate(target, |key| {
        let (left, right) = pres.split_key(key)?;
        let a = psi1(&left)?;
        if right.is_unit() {
            Ok(a)
        } else {
            target.mul(&a, &psi2(&right)?)
        }
    })
}

/// Normalizes the expression of `u` under the localization presentation of
/// its carrier and compares the result with `u` word for word.
pub fn cross_check_localization(u: &LocalizedElement) -> Result<EqualityVerdict> {
    let loc = u.localization();
    let pres = Presentation::localization_with_limits(
        Arc::clone(loc.algebra()),
        loc.operator().clone(),
        loc.limits(),
    )?;
    let e = RBExpression::from_terms(loc.algebra(), u.terms());
    let got = normalize(&e, &pres)?;
    let expected = normal_form_of(&pres, u.terms().clone())?;
    Ok(EqualityVerdict::from_forms(got, expected))
}

/// S⁻¹_RB A ⊗_A B against T⁻¹_RB B for A = ℚ[x], s = x, B = ℚ[x,y] with the
/// integral in x at weight 0.
#[derive(Clone, Debug)]
pub struct TensorLocalizationInstance {
    pres: Arc<Presentation>,
    target: Arc<RbLocalization>,
}

/// Outcome of checking both composites on samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTripReport {
    pub forward_checked: usize,
    pub backward_checked: usize,
    pub counterexample: Option<String>,
}

impl RoundTripReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl TensorLocalizationInstance {
    pub fn new(limits: Limits) -> Result<Self> {
        let a = Arc::new(AlgebraDescriptor::laurent(&["x"], "x")?);
        let b = Arc::new(AlgebraDescriptor::polynomial(&["x", "y"])?);
        let pres = Presentation::tensor_with_limits(
            &["x"],
            Component::new(a, BaseOperator::integral(0))?,
            Component::new(b, BaseOperator::integral(0))?,
            limits,
        )?;
        let target = RbLocalization::with_limits(
            Arc::clone(pres.carrier()),
            BaseOperator::integral(0),
            Variant::WeightZero,
            limits,
        )?;
        Ok(TensorLocalizationInstance { pres, target })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn target(&self) -> &Arc<RbLocalization> {
        &self.target
    }

    /// `ψ₁`: the Laurent keys of S⁻¹A as length-1 words of T⁻¹_RB B.
    pub fn psi1(&self, key: &BasisKey) -> Result<LocalizedElement> {
        let k = self.pres.embed_key(Side::Left, key)?;
        LocalizedElement::word(&self.target, TensorWord::single(k), Scalar::one())
    }

    /// `ψ₂`: the structure map of B's localization.
    pub fn psi2(&self, key: &BasisKey) -> Result<LocalizedElement> {
        let k = self.pres.embed_key(Side::Right, key)?;
        LocalizedElement::word(&self.target, TensorWord::single(k), Scalar::one())
    }

    /// The map from the presented tensor product to T⁻¹_RB B.
    pub fn forward(&self, e: &RBExpression) -> Result<LocalizedElement> {
        universal_map(
            e,
            &self.pres,
            &self.target,
            |k| self.psi1(k),
            |k| self.psi2(k),
        )
    }

    /// The inverse on generators: each word of T⁻¹_RB B is rebuilt from its
    /// slots with the operator.
    pub fn backward(&self, t: &LocalizedElement) -> RBExpression {
        RBExpression::from_terms(self.pres.carrier(), t.terms())
    }

    pub fn check(&self, samples: usize, seed: u64) -> Result<RoundTripReport> {
        self.check_with(Exec::default(), samples, seed)
    }

    /// `g∘h = id` on `samples` sampled words of length ≤ 2 and `h∘g ≡ id`
    /// on `samples` sampled expressions of depth ≤ 3.
    pub fn check_with(&self, exec: Exec, samples: usize, seed: u64) -> Result<RoundTripReport> {
        let forward = run_checks(exec, samples, seed, |s| {
            s.max_terms = 2;
            let t = s.localized_element(&self.target, 2);
            let back = self.forward(&self.backward(&t))?;
            Ok((back != t).then(|| format!("g(h({t})) = {back}")))
        })?;
        let mut report = RoundTripReport {
            forward_checked: samples,
            backward_checked: 0,
            counterexample: forward.failure.map(|(_, msg)| msg),
        };
        if !report.passed() {
            return Ok(report);
        }
        let backward = run_checks(exec, samples, !seed, |s| {
            s.max_terms = 2;
            let e = s.expression(self.pres.carrier(), 3);
            let round = self.backward(&self.forward(&e)?);
            let verdict = equal_mod_ideal(&round, &e, &self.pres)?;
            Ok((!verdict.is_proven()).then(|| {
                format!(
                    "h(g({e})) normalizes to {} but the input normalizes to {}",
                    verdict.left, verdict.right
                )
            }))
        })?;
        report.backward_checked = samples;
        report.counterexample = backward.failure.map(|(_, msg)| msg);
        Ok(report)
    }
}
