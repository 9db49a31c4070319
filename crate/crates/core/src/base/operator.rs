use std::fmt;

use crate::base::descriptor::{AlgebraDescriptor, BasisKey};
use crate::base::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::linear::{add_term, Terms};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Zero,
    Identity,
    NegIdentity,
    /// Formal integration `x^n ↦ x^{n+1}/(n+1)` in the given variable.
    Integral(usize),
}

/// A concrete Rota-Baxter operator on the polynomial part of an algebra,
/// together with the weight it is declared for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseOperator {
    kind: OperatorKind,
    weight: Scalar,
}

impl BaseOperator {
    /// Fails when the kind cannot satisfy the Rota-Baxter identity at `weight`
    /// (`Integral` needs 0, `Identity` needs −1, `NegIdentity` needs +1).
    pub fn new(kind: OperatorKind, weight: Scalar) -> Result<Self> {
        let required = match kind {
            OperatorKind::Zero => None,
            OperatorKind::Identity => Some(Scalar::from_int(-1)),
            OperatorKind::NegIdentity => Some(Scalar::one()),
            OperatorKind::Integral(_) => Some(Scalar::zero()),
        };
        if let Some(req) = required {
            if req != weight {
                return Err(Error::domain(format!(
                    "{} requires weight {req}, got {weight}",
                    kind_name(kind)
                )));
            }
        }
        Ok(BaseOperator { kind, weight })
    }

    pub fn zero(weight: Scalar) -> Self {
        BaseOperator {
            kind: OperatorKind::Zero,
            weight,
        }
    }

    pub fn integral(var: usize) -> Self {
        BaseOperator {
            kind: OperatorKind::Integral(var),
            weight: Scalar::zero(),
        }
    }

    pub fn identity() -> Self {
        BaseOperator {
            kind: OperatorKind::Identity,
            weight: Scalar::from_int(-1),
        }
    }

    pub fn neg_identity() -> Self {
        BaseOperator {
            kind: OperatorKind::NegIdentity,
            weight: Scalar::one(),
        }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    /// Checks that the operator refers to a variable of `alg`.
    pub fn check_for(&self, alg: &AlgebraDescriptor) -> Result<()> {
        match self.kind {
            OperatorKind::Integral(v) if v >= alg.nvars() => {
                Err(Error::domain("integration variable out of range"))
            }
            _ => Ok(()),
        }
    }

    /// Image of one basis key as a combination of keys.
    pub fn apply_key(&self, alg: &AlgebraDescriptor, key: &BasisKey) -> Result<Terms<BasisKey>> {
        let mut out = Terms::new();
        match self.kind {
            OperatorKind::Zero => {}
            OperatorKind::Identity => add_term(&mut out, key.clone(), Scalar::one()),
            OperatorKind::NegIdentity => add_term(&mut out, key.clone(), Scalar::from_int(-1)),
            OperatorKind::Integral(v) => {
                self.check_for(alg)?;
                if key.is_fractional() {
                    return Err(Error::OperatorUndefined);
                }
                let mut exps = key.exps.clone();
                let n = exps[v];
                exps[v] = n + 1;
                add_term(
                    &mut out,
                    BasisKey::monomial(exps),
                    Scalar::ratio(1, n as i64 + 1).expect("nonzero"),
                );
            }
        }
        Ok(out)
    }

    /// The operator applied linearly to an element.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        let alg = a.algebra();
        let mut out = Terms::new();
        for (k, c) in a.terms() {
            for (k2, c2) in self.apply_key(alg, k)? {
                add_term(&mut out, k2, c * &c2);
            }
        }
        AlgebraElement::from_terms(alg, out)
    }

    pub fn describe(&self, alg: &AlgebraDescriptor) -> String {
        match self.kind {
            OperatorKind::Integral(v) => format!("integral:{}", alg.vars()[v]),
            k => kind_name(k).to_string(),
        }
    }
}

fn kind_name(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::Zero => "zero",
        OperatorKind::Identity => "id",
        OperatorKind::NegIdentity => "negid",
        OperatorKind::Integral(_) => "integral",
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(kind_name(*self))
    }
}

/// Convenience: apply `op` to a single key of `alg` and wrap as an element.
pub fn apply_base_operator(op: &BaseOperator, a: &AlgebraElement) -> Result<AlgebraElement> {
    op.apply(a)
}
