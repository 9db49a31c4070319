//! The free commutative Rota-Baxter algebra Ш(A) = ⊕_{i≥1} A^{⊗i}.
//!
//! Elements are sparse combinations of [`TensorWord`]s. The product is the
//! mixable shuffle, computed by its defining recursion on word length (first
//! slots multiply in A; the tails combine in three ways, the last carrying
//! the weight λ). The operator prepends the unit of A.

mod element;
mod maps;
mod word;

pub use element::{FreeRb, ShuffleElement};
pub use maps::{collapse_phi, free_extension, map_words, AlgebraMap};
pub use word::{format_word, TensorWord};

pub(crate) use maps::eval_words;
pub(crate) use word::{check_len, DisplayTerms, MixableShuffle};

#[cfg(test)]
mod tests;
