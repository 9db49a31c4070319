use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::base::upoly::UPoly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A basis element of S⁻¹A.
///
/// With `denom_power == 0` the key is the plain monomial `x^exps`. With
/// `denom_power == k >= 1` it is `x^exps / s^k`, where the exponent of the
/// denominator variable is strictly below `deg s`. Ordering is lexicographic
/// on `exps` (declaration order), then by `denom_power`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKey {
    pub exps: Vec<u32>,
    pub denom_power: u32,
}

impl BasisKey {
    pub fn unit(nvars: usize) -> Self {
        BasisKey {
            exps: vec![0; nvars],
            denom_power: 0,
        }
    }

    pub fn monomial(exps: Vec<u32>) -> Self {
        BasisKey {
            exps,
            denom_power: 0,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.denom_power == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// True for keys of the polynomial part A.
    pub fn is_polynomial(&self) -> bool {
        self.denom_power == 0
    }

    /// True for keys of the complement V (strict fractional part).
    pub fn is_fractional(&self) -> bool {
        self.denom_power > 0
    }
}

/// The multiplicative set {s^k | k ≥ 1} for a monic nonconstant `s` in one variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Denominator {
    pub var: usize,
    pub s: UPoly,
}

impl Denominator {
    pub fn degree(&self) -> u32 {
        self.s.degree().expect("nonconstant denominator") as u32
    }
}

/// Reduced forms of `x^e / s^k` as `(exponent, denom_power, coeff)` triples.
type Reduction = Arc<Vec<(u32, u32, Scalar)>>;

#[derive(Default)]
struct ReductionCache(Mutex<HashMap<(u32, u32), Reduction>>);

impl Clone for ReductionCache {
    fn clone(&self) -> Self {
        ReductionCache::default()
    }
}

impl fmt::Debug for ReductionCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ReductionCache")
    }
}

/// A monomial algebra ℚ[x₁,…,xₙ], optionally localized at powers of one
/// univariate polynomial.
#[derive(Clone, Debug)]
pub struct AlgebraDescriptor {
    vars: Vec<String>,
    denom: Option<Denominator>,
    cache: ReductionCache,
}

impl PartialEq for AlgebraDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.denom == other.denom
    }
}

impl Eq for AlgebraDescriptor {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "P"
        && name != "T"
}

impl AlgebraDescriptor {
    pub fn polynomial<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::domain(format!("invalid variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::domain(format!("duplicate variable {v:?}")));
            }
        }
        Ok(AlgebraDescriptor {
            vars,
            denom: None,
            cache: ReductionCache::default(),
        })
    }

    /// Localize at powers of `s`, a polynomial in `var`; `s` is made monic.
    pub fn localized<S: AsRef<str>>(vars: &[S], var: &str, s: &UPoly) -> Result<Self> {
        let mut d = Self::polynomial(vars)?;
        let idx = d
            .var_index(var)
            .ok_or_else(|| Error::domain(format!("unknown denominator variable {var:?}")))?;
        match s.degree() {
            Some(deg) if deg >= 1 => {}
            _ => {
                return Err(Error::domain(
                    "denominator must be a nonconstant polynomial",
                ))
            }
        }
        d.denom = Some(Denominator {
            var: idx,
            s: s.make_monic(),
        });
        Ok(d)
    }

    /// ℚ[vars] localized at powers of `var` itself.
    pub fn laurent<S: AsRef<str>>(vars: &[S], var: &str) -> Result<Self> {
        Self::localized(vars, var, &UPoly::monomial(Scalar::one(), 1))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn denominator(&self) -> Option<&Denominator> {
        self.denom.as_ref()
    }

    /// The polynomial part of this descriptor (same variables, no denominator).
    pub fn without_denominator(&self) -> Self {
        AlgebraDescriptor {
            vars: self.vars.clone(),
            denom: None,
            cache: ReductionCache::default(),
        }
    }

    /// True when the denominator is the variable itself (Laurent case).
    pub fn is_laurent(&self) -> bool {
        self.denom
            .as_ref()
            .is_some_and(|d| d.s == UPoly::monomial(Scalar::one(), 1))
    }

    pub fn unit_key(&self) -> BasisKey {
        BasisKey::unit(self.nvars())
    }

    pub fn validate_key(&self, key: &BasisKey) -> Result<()> {
        if key.exps.len() != self.nvars() {
            return Err(Error::domain(
                "basis key arity does not match the descriptor",
            ));
        }
        if key.denom_power == 0 {
            return Ok(());
        }
        match &self.denom {
            None => Err(Error::domain(
                "fractional key in an algebra without denominator",
            )),
            Some(d) if key.exps[d.var] >= d.degree() => Err(Error::domain(
                "fractional key is not reduced against the denominator",
            )),
            Some(_) => Ok(()),
        }
    }

    fn reduce_power(&self, d: &Denominator, e: u32, k: u32) -> Reduction {
        if let Some(hit) = self.cache.0.lock().expect("cache lock").get(&(e, k)) {
            return Arc::clone(hit);
        }
        let mut out = Vec::new();
        let num = UPoly::monomial(Scalar::one(), e as usize);
        let (quot, mut rem) = num.div_rem_monic(&d.s.pow(k));
        for (i, c) in quot.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.push((i as u32, 0, c.clone()));
            }
        }
        // s-adic expansion: rem = r_0 + r_1 s + ... + r_{k-1} s^{k-1}
        for j in 0..k {
            let (q, r) = rem.div_rem_monic(&d.s);
            for (i, c) in r.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((i as u32, k - j, c.clone()));
                }
            }
            rem = q;
        }
        debug_assert!(rem.is_zero());
        let out = Arc::new(out);
        self.cache
            .0
            .lock()
            .expect("cache lock")
            .insert((e, k), Arc::clone(&out));
        out
    }

    /// Canonical expansion of the raw term `x^exps / s^denom_power` into basis keys.
    pub fn canonicalize(&self, exps: Vec<u32>, denom_power: u32) -> Vec<(BasisKey, Scalar)> {
        let d = match &self.denom {
            Some(d) if denom_power > 0 => d,
            _ => return vec![(BasisKey { exps, denom_power }, Scalar::one())],
        };
        let e = exps[d.var];
        self.reduce_power(d, e, denom_power)
            .iter()
            .map(|(j, k, c)| {
                let mut ex = exps.clone();
                ex[d.var] = *j;
                (
                    BasisKey {
                        exps: ex,
                        denom_power: *k,
                    },
                    c.clone(),
                )
            })
            .collect()
    }

    pub fn mul_keys(&self, a: &BasisKey, b: &BasisKey) -> Vec<(BasisKey, Scalar)> {
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        self.canonicalize(exps, a.denom_power + b.denom_power)
    }

    /// Human-readable monomial for a key (`1` for the unit).
    pub fn format_key(&self, key: &BasisKey) -> String {
        let laurent = self.is_laurent();
        let mut factors: Vec<String> = Vec::new();
        for (i, name) in self.vars.iter().enumerate() {
            let mut e = key.exps[i] as i64;
            if laurent && self.denom.as_ref().is_some_and(|d| d.var == i) {
                e -= key.denom_power as i64;
            }
            match e {
                0 => {}
                1 => factors.push(name.clone()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        if key.denom_power > 0 && !laurent {
            let d = self
                .denom
                .as_ref()
                .expect("fractional key needs a denominator");
            factors.push(format!(
                "({})^-{}",
                self.format_upoly(d.var, &d.s),
                key.denom_power
            ));
        }
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    /// A univariate polynomial in variable `var`, ascending, in element syntax.
    pub fn format_upoly(&self, var: usize, p: &UPoly) -> String {
        let name = &self.vars[var];
        let mut out = String::new();
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => name.clone(),
                _ => format!("{name}^{i}"),
            };
            push_term(&mut out, c, &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Header-style summary, e.g. `vars=x,y localize=x` or `localize=x:1 + x^2`.
    pub fn summary(&self) -> String {
        let mut s = format!("vars={}", self.vars.join(","));
        if let Some(d) = &self.denom {
            if self.is_laurent() {
                s.push_str(&format!(" localize={}", self.vars[d.var]));
            } else {
                s.push_str(&format!(
                    " localize={}:{}",
                    self.vars[d.var],
                    self.format_upoly(d.var, &d.s).replace(' ', "")
                ));
            }
        }
        s
    }
}

/// Append `coeff * mono` to a sum being built, handling signs and unit coefficients.
pub(crate) fn push_term(out: &mut String, coeff: &Scalar, mono: &str) {
    let neg = coeff.is_negative();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let abs = coeff.abs();
    if mono.is_empty() || mono == "1" {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&format!("{abs}*{mono}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx2p1() -> UPoly {
        UPoly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::one()])
    }

    #[test]
    fn descriptor_validation() {
        assert!(AlgebraDescriptor::polynomial(&["x", "x"]).is_err());
        assert!(AlgebraDescriptor::polynomial(&["P"]).is_err());
        assert!(AlgebraDescriptor::localized(
            &["x"],
            "x",
            &UPoly::monomial(Scalar::from_int(3), 0)
        )
        .is_err());
        assert!(AlgebraDescriptor::localized(&["x"], "y", &sx2p1()).is_err());
        let d = AlgebraDescriptor::localized(
            &["x"],
            "x",
            &UPoly::from_coeffs(vec![Scalar::from_int(2), Scalar::from_int(2)]),
        )
        .unwrap();
        assert!(d.denominator().unwrap().s.is_monic());
    }

    #[test]
    fn canonical_key_forms() {
        let d = AlgebraDescriptor::localized(&["x"], "x", &sx2p1()).unwrap();
        // x^2 / s  ->  1 - 1/s
        let out = d.canonicalize(vec![2], 1);
        assert_eq!(
            out,
            vec![
                (BasisKey::monomial(vec![0]), Scalar::one()),
                (
                    BasisKey {
                        exps: vec![0],
                        denom_power: 1
                    },
                    Scalar::from_int(-1)
                ),
            ]
        );
        assert!(d
            .validate_key(&BasisKey {
                exps: vec![2],
                denom_power: 1
            })
            .is_err());
        assert!(d
            .validate_key(&BasisKey {
                exps: vec![1],
                denom_power: 3
            })
            .is_ok());
    }

    #[test]
    fn key_formatting() {
        let d = AlgebraDescriptor::laurent(&["x", "y"], "x").unwrap();
        assert_eq!(
            d.format_key(&BasisKey {
                exps: vec![0, 2],
                denom_power: 2
            }),
            "x^-2*y^2"
        );
        assert_eq!(d.format_key(&d.unit_key()), "1");
        let e = AlgebraDescriptor::localized(&["x"], "x", &sx2p1()).unwrap();
        assert_eq!(
            e.format_key(&BasisKey {
                exps: vec![1],
                denom_power: 2
            }),
            "x*(1 + x^2)^-2"
        );
        assert_eq!(e.summary(), "vars=x localize=x:1+x^2");
    }
}
