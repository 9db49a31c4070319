//! Exact base algebras: monomial algebras ℚ[x₁,…,xₙ], their localizations
//! at powers of a single univariate polynomial `s`, the canonical splitting
//! S⁻¹A = A ⊕ V, and concrete Rota-Baxter operators on A.
//!
//! Fractional basis keys are `x^j / s^k` with `0 ≤ j < deg s`; every product
//! is brought back to this form by polynomial division followed by an
//! s-adic expansion of the remainder.

mod descriptor;
mod element;
mod operator;
mod upoly;

pub use descriptor::{AlgebraDescriptor, BasisKey, Denominator};
pub use element::AlgebraElement;
pub use operator::{apply_base_operator, BaseOperator, OperatorKind};
pub use upoly::UPoly;

pub(crate) use descriptor::push_term;
pub(crate) use element::check_same;
