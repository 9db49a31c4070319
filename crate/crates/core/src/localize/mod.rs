//! Rota-Baxter localization S⁻¹_RB A on the explicit carrier
//! B = S⁻¹A ⊕ ⊕_{k≥1} (S⁻¹A ⊗ V^{⊗k}), where V holds the strictly fractional
//! basis keys.
//!
//! Three regimes share the carrier: any weight with V closed under products,
//! weight zero, and the zero operator where V stands for S⁻¹A / A.

mod carrier;
mod extend;

pub use carrier::{LocalizedElement, RbLocalization, Variant};
pub use extend::extend_to_localization;

#[cfg(test)]
mod tests;
