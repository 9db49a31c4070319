use std::str::FromStr;
use std::sync::Arc;

use crate::base::{AlgebraDescriptor, BaseOperator, OperatorKind, UPoly};
use crate::error::{Error, Result};
use crate::free_rb::FreeRb;
use crate::limits::Limits;
use crate::localize::{RbLocalization, Variant};
use crate::presented::Presentation;
use crate::scalar::Scalar;

use super::parse::parse_element;

/// An operator as named on the command line, before its variable is resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpSpec {
    Zero,
    Identity,
    NegIdentity,
    /// `integral[:var]`
    Integral(Option<String>),
}

impl FromStr for OpSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "zero" => OpSpec::Zero,
            "id" => OpSpec::Identity,
            "negid" => OpSpec::NegIdentity,
            "integral" => OpSpec::Integral(None),
            _ => match s.strip_prefix("integral:") {
                Some(v) => OpSpec::Integral(Some(v.to_string())),
                None => {
                    return Err(Error::domain(format!(
                        "unknown operator {s:?} (expected zero, id, negid or integral[:var])"
                    )))
                }
            },
        })
    }
}

impl OpSpec {
    /// The weight the operator is a Rota-Baxter operator of, if it is fixed.
    pub fn natural_weight(&self) -> Option<Scalar> {
        match self {
            OpSpec::Zero => None,
            OpSpec::Identity => Some(Scalar::from_int(-1)),
            OpSpec::NegIdentity => Some(Scalar::one()),
            OpSpec::Integral(_) => Some(Scalar::zero()),
        }
    }

    /// The kind over `alg`; an unnamed integral uses `fallback`, then the
    /// denominator variable, then the first variable.
    pub fn resolve(&self, alg: &AlgebraDescriptor, fallback: Option<&str>) -> Result<OperatorKind> {
        Ok(match self {
            OpSpec::Zero => OperatorKind::Zero,
            OpSpec::Identity => OperatorKind::Identity,
            OpSpec::NegIdentity => OperatorKind::NegIdentity,
            OpSpec::Integral(Some(v)) => {
                OperatorKind::Integral(alg.var_index(v).ok_or_else(|| {
                    Error::domain(format!("integral over unknown variable {v:?}"))
                })?)
            }
            OpSpec::Integral(None) => {
                let idx = fallback
                    .and_then(|v| alg.var_index(v))
                    .or_else(|| alg.denominator().map(|d| d.var))
                    .or(if alg.nvars() > 0 { Some(0) } else { None })
                    .ok_or_else(|| Error::domain("the integral needs a variable"))?;
                OperatorKind::Integral(idx)
            }
        })
    }
}

/// The algebra, operator, weight and guards every subcommand works in.
#[derive(Clone, Debug)]
pub struct Session {
    pub alg: Arc<AlgebraDescriptor>,
    pub op: OpSpec,
    pub kind: OperatorKind,
    pub weight: Scalar,
    pub variant: Variant,
    pub limits: Limits,
}

impl Session {
    /// `localize` is `var` or `var:poly`; `vars` defaults to the localized
    /// variable, else `x`.
    pub fn new(
        vars: &[String],
        localize: Option<&str>,
        op: Option<OpSpec>,
        weight: Option<Scalar>,
        variant: Option<Variant>,
        limits: Limits,
    ) -> Result<Self> {
        let (dvar, spoly) = match localize {
            None => (None, None),
            Some(l) => match l.split_once(':') {
                Some((v, p)) => (Some(v.trim().to_string()), Some(p.to_string())),
                None => (Some(l.trim().to_string()), None),
            },
        };
        let vars: Vec<String> = if !vars.is_empty() {
            vars.iter().map(|v| v.trim().to_string()).collect()
        } else if let Some(v) = &dvar {
            vec![v.clone()]
        } else {
            vec!["x".to_string()]
        };
        let poly = AlgebraDescriptor::polynomial(&vars)?;
        let alg = match &dvar {
            None => poly,
            Some(v) => {
                let idx = poly.var_index(v).ok_or_else(|| {
                    Error::domain(format!("--localize variable {v:?} is not among --vars"))
                })?;
                let s = match &spoly {
                    None => UPoly::monomial(Scalar::one(), 1),
                    Some(text) => univariate(&poly, idx, text)?,
                };
                AlgebraDescriptor::localized(&vars, v, &s)?
            }
        };
        let op = op.unwrap_or(OpSpec::Zero);
        let kind = op.resolve(&alg, None)?;
        let weight = weight
            .or_else(|| op.natural_weight())
            .unwrap_or_else(Scalar::zero);
        let variant = variant.unwrap_or(if weight.is_zero() {
            Variant::WeightZero
        } else {
            Variant::GeneralWeight
        });
        Ok(Session {
            alg: Arc::new(alg),
            op,
            kind,
            weight,
            variant,
            limits,
        })
    }

    pub fn is_localized(&self) -> bool {
        self.alg.denominator().is_some()
    }

    /// The operator at the session weight; fails if it is not a Rota-Baxter
    /// operator of that weight.
    pub fn operator(&self) -> Result<BaseOperator> {
        BaseOperator::new(self.kind, self.weight.clone())
    }

    /// The operator at its own weight, for checking it against another one.
    pub fn natural_operator(&self) -> Result<BaseOperator> {
        let w = self
            .op
            .natural_weight()
            .unwrap_or_else(|| self.weight.clone());
        BaseOperator::new(self.kind, w)
    }

    pub fn free_ring(&self) -> Arc<FreeRb> {
        FreeRb::with_limits(Arc::clone(&self.alg), self.weight.clone(), self.limits)
    }

    pub fn localization(&self) -> Result<Arc<RbLocalization>> {
        if !self.is_localized() {
            return Err(Error::domain("this command needs --localize"));
        }
        RbLocalization::with_limits(
            Arc::clone(&self.alg),
            self.operator()?,
            self.variant,
            self.limits,
        )
    }

    pub fn presentation(&self) -> Result<Arc<Presentation>> {
        Presentation::localization_with_limits(Arc::clone(&self.alg), self.operator()?, self.limits)
    }
}

/// Reads `text` as a polynomial in variable `idx` alone.
fn univariate(alg: &AlgebraDescriptor, idx: usize, text: &str) -> Result<UPoly> {
    let alg = Arc::new(alg.clone());
    let p = parse_element(text, &alg)?;
    let mut coeffs = Vec::new();
    for (k, c) in p.terms() {
        if k.exps.iter().enumerate().any(|(i, e)| i != idx && *e != 0) {
            return Err(Error::domain(
                "the denominator must be a polynomial in the localized variable",
            ));
        }
        let d = k.exps[idx] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Scalar::zero());
        }
        coeffs[d] = c.clone();
    }
    Ok(UPoly::from_coeffs(coeffs))
}
