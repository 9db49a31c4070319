use std::fmt;
use std::sync::Arc;

use crate::base::descriptor::{push_term, AlgebraDescriptor, BasisKey};
use crate::base::upoly::UPoly;
use crate::error::{Error, Result};
use crate::linear::{add_scaled, add_term, scaled, Terms};
use crate::scalar::Scalar;

/// An element of S⁻¹A as a sparse combination of canonical basis keys.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    alg: Arc<AlgebraDescriptor>,
    terms: Terms<BasisKey>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

pub(crate) fn same_algebra(a: &Arc<AlgebraDescriptor>, b: &Arc<AlgebraDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_same(a: &Arc<AlgebraDescriptor>, b: &Arc<AlgebraDescriptor>) -> Result<()> {
    if same_algebra(a, b) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "descriptor mismatch: [{}] vs [{}]",
            a.summary(),
            b.summary()
        )))
    }
}

impl AlgebraElement {
    pub fn zero(alg: &Arc<AlgebraDescriptor>) -> Self {
        AlgebraElement {
            alg: Arc::clone(alg),
            terms: Terms::new(),
        }
    }

    pub fn one(alg: &Arc<AlgebraDescriptor>) -> Self {
        Self::constant(alg, Scalar::one())
    }

    pub fn constant(alg: &Arc<AlgebraDescriptor>, c: Scalar) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, alg.unit_key(), c);
        AlgebraElement {
            alg: Arc::clone(alg),
            terms,
        }
    }

    pub fn variable(alg: &Arc<AlgebraDescriptor>, name: &str) -> Result<Self> {
        let i = alg
            .var_index(name)
            .ok_or_else(|| Error::domain(format!("unknown variable {name:?}")))?;
        let mut exps = vec![0; alg.nvars()];
        exps[i] = 1;
        Ok(Self::from_key(alg, BasisKey::monomial(exps), Scalar::one()))
    }

    /// `coeff * key`; the key is assumed valid for `alg`.
    pub fn from_key(alg: &Arc<AlgebraDescriptor>, key: BasisKey, coeff: Scalar) -> Self {
        debug_assert!(alg.validate_key(&key).is_ok());
        let mut terms = Terms::new();
        add_term(&mut terms, key, coeff);
        AlgebraElement {
            alg: Arc::clone(alg),
            terms,
        }
    }

    pub fn from_terms(alg: &Arc<AlgebraDescriptor>, terms: Terms<BasisKey>) -> Result<Self> {
        for k in terms.keys() {
            alg.validate_key(k)?;
        }
        Ok(AlgebraElement {
            alg: Arc::clone(alg),
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// The element `x^exps / s^denom_power` for an arbitrary raw exponent vector.
    pub fn raw_monomial(
        alg: &Arc<AlgebraDescriptor>,
        exps: Vec<u32>,
        denom_power: u32,
    ) -> Result<Self> {
        if exps.len() != alg.nvars() {
            return Err(Error::domain("exponent vector arity mismatch"));
        }
        if denom_power > 0 && alg.denominator().is_none() {
            return Err(Error::domain("no denominator declared"));
        }
        let mut terms = Terms::new();
        for (k, c) in alg.canonicalize(exps, denom_power) {
            add_term(&mut terms, k, c);
        }
        Ok(AlgebraElement {
            alg: Arc::clone(alg),
            terms,
        })
    }

    /// The univariate polynomial `p` in variable `var`.
    pub fn from_upoly(alg: &Arc<AlgebraDescriptor>, var: usize, p: &UPoly) -> Self {
        let mut terms = Terms::new();
        for (i, c) in p.coeffs().iter().enumerate() {
            let mut exps = vec![0; alg.nvars()];
            exps[var] = i as u32;
            add_term(&mut terms, BasisKey::monomial(exps), c.clone());
        }
        AlgebraElement {
            alg: Arc::clone(alg),
            terms,
        }
    }

    pub fn algebra(&self) -> &Arc<AlgebraDescriptor> {
        &self.alg
    }

    pub fn terms(&self) -> &Terms<BasisKey> {
        &self.terms
    }

    pub fn into_terms(self) -> Terms<BasisKey> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &BasisKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Every key lies in the polynomial part A.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(BasisKey::is_polynomial)
    }

    /// `Some(c)` when the element is the constant `c`.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().expect("one term");
                k.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.alg, &other.alg)?;
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &Scalar::one(), &other.terms);
        Ok(AlgebraElement {
            alg: Arc::clone(&self.alg),
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        AlgebraElement {
            alg: Arc::clone(&self.alg),
            terms: scaled(c, &self.terms),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    /// Commutative product in S⁻¹A, followed by canonicalization.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same(&self.alg, &other.alg)?;
        let mut terms = Terms::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let c = ca * cb;
                for (k, ck) in self.alg.mul_keys(ka, kb) {
                    add_term(&mut terms, k, &c * &ck);
                }
            }
        }
        Ok(AlgebraElement {
            alg: Arc::clone(&self.alg),
            terms,
        })
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut acc = Self::one(&self.alg);
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The decomposition S⁻¹A = A ⊕ V: (polynomial part, fractional part).
    pub fn split(&self) -> Result<(Self, Self)> {
        if self.alg.denominator().is_none() {
            return Err(Error::domain(
                "split requires a descriptor with a denominator",
            ));
        }
        let (a, v): (Terms<_>, Terms<_>) = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), c.clone()))
            .partition(|(k, _)| k.is_polynomial());
        Ok((
            AlgebraElement {
                alg: Arc::clone(&self.alg),
                terms: a,
            },
            AlgebraElement {
                alg: Arc::clone(&self.alg),
                terms: v,
            },
        ))
    }

    /// The denominator `s` as an element, if one is declared.
    pub fn denominator_element(alg: &Arc<AlgebraDescriptor>) -> Option<Self> {
        alg.denominator()
            .map(|d| Self::from_upoly(alg, d.var, &d.s))
    }

    /// Inverse of a unit of the form `c * s^m` (m ∈ ℤ, c ≠ 0).
    ///
    /// Units of any other shape are reported as a domain error.
    pub fn try_inverse(&self) -> Result<Self> {
        if let Some(c) = self.as_constant() {
            return Ok(Self::constant(&self.alg, c.recip()?));
        }
        let not_unit = || Error::domain(format!("{self} is not a recognized unit"));
        let d = self.alg.denominator().ok_or_else(not_unit)?;
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().expect("one term");
            if k.is_fractional() && k.exps.iter().all(|&e| e == 0) {
                // c / s^m -> s^m / c
                let s = Self::from_upoly(&self.alg, d.var, &d.s);
                return Ok(s.pow(k.denom_power)?.scale(&c.recip()?));
            }
        }
        // c * s^m with m >= 1: m is fixed by the degree in the denominator variable
        if !self.is_polynomial() {
            return Err(not_unit());
        }
        let top = self
            .terms
            .keys()
            .map(|k| k.exps[d.var])
            .max()
            .ok_or_else(not_unit)?;
        if top % d.degree() != 0 {
            return Err(not_unit());
        }
        let m = top / d.degree();
        let power = Self::from_upoly(&self.alg, d.var, &d.s.pow(m));
        let lead = power
            .terms
            .keys()
            .next_back()
            .cloned()
            .ok_or_else(not_unit)?;
        let ratio = self.coeff(&lead);
        if ratio.is_zero() || power.scale(&ratio) != *self {
            return Err(not_unit());
        }
        let inv = Self::raw_monomial(&self.alg, vec![0; self.alg.nvars()], m)?;
        Ok(inv.scale(&ratio.recip()?))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, c) in &self.terms {
            push_term(&mut out, c, &self.alg.format_key(k));
        }
        f.write_str(&out)
    }
}
