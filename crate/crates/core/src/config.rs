//! Size and search caps shared by the exhaustive algorithms.

/// Caps with their defaults; the CLI can override them from a config file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order a closure may reach.
    pub group_cap: usize,
    /// Node budget for homomorphism and representation searches.
    pub hom_nodes: u64,
    /// Largest filtration level accepted for free-group words.
    pub max_level: usize,
    /// Longest free-group word accepted.
    pub max_word_length: u64,
    /// Groups up to this order are checked on all pairs of elements.
    pub exhaustive_check: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            group_cap: 20_000,
            hom_nodes: 100_000_000,
            max_level: 8,
            max_word_length: 32,
            exhaustive_check: 2000,
        }
    }
}
