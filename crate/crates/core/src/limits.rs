/// Resource caps shared by the enumeration-based routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest field order that may be enumerated element by element.
    pub enumeration_cap: u64,
    /// Largest number of candidate points a brute-force scan may visit.
    pub oracle_cap: u64,
    /// Largest direction height tried by the Hilbert identity search.
    pub hilbert_max_height: u32,
    /// Largest number of candidate orbit subsets solved by the Hilbert
    /// identity search before giving up.
    pub hilbert_max_subsets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_cap: 1_000_000,
            oracle_cap: 100_000_000,
            hilbert_max_height: 6,
            hilbert_max_subsets: 200_000,
        }
    }
}
