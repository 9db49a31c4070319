//! Presented quotients of free Rota-Baxter algebras and their normal forms.
//!
//! An expression is expanded by linearity, then rewritten with three rule
//! families until no rule applies:
//!
//! * `rb`: `P(u)·P(v) → P(u·P(v)) + P(P(u)·v) + λ P(u·v)`
//! * `eval`: `P(a) → P_A(a)` for a key `a` on which a base operator acts
//! * `eval-rb`: `P(a·P(w)) → P_A(a)·P(w) − P(P_A(a)·w) − λ P(a·w)`
//!
//! What remains is a combination of chains `a₀·P(a₁·P(⋯))`, read out as
//! tensor words.

mod expr;
mod presentation;
mod rewrite;
mod universal;

pub use expr::RBExpression;
pub use presentation::{tensor_base, tensor_injections, Component, Presentation, Side};
pub use rewrite::{
    equal_mod_ideal, normalize, normalize_with, EqualityVerdict, NormalForm, Normalized, Strategy,
    Verdict,
};
pub use universal::{
    cross_check_localization, universal_map, RoundTripReport, TensorLocalizationInstance,
};
