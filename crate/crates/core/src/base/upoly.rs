//! Dense univariate polynomials over [`Scalar`], used for denominators and
//! the division / s-adic expansion behind key canonicalization.

use crate::scalar::Scalar;

/// Coefficients in ascending degree order; empty for zero, last entry nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn monomial(coeff: Scalar, deg: usize) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        coeffs[deg] = coeff;
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lead) => {
                let inv = lead.recip().expect("nonzero leading coefficient");
                UPoly::from_coeffs(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn pow(&self, exp: u32) -> UPoly {
        let mut acc = UPoly::monomial(Scalar::one(), 0);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        debug_assert!(divisor.is_monic());
        let dd = divisor.degree().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top].clone();
            if c.is_zero() {
                continue;
            }
            let shift = top - dd;
            quot[shift] = c.clone();
            for (i, d) in divisor.coeffs.iter().enumerate() {
                let t = &c * d;
                rem[shift + i] = &rem[shift + i] - &t;
            }
        }
        rem.truncate(dd);
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }
}
