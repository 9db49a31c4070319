/// Resource guards shared by the word algebras and the rewriting engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Limits {
    /// Longest tensor word any operation may produce.
    pub max_word_len: usize,
    /// Rewrite steps allowed per normalization.
    pub max_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_word_len: 16,
            max_steps: 100_000,
        }
    }
}
