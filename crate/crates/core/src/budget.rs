/// Resource limits shared by the expensive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_order: usize,
    pub max_vectors: usize,
    pub max_orbit: usize,
    pub max_automorphisms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_order: 512,
            max_vectors: 2_000_000,
            max_orbit: 4_000_000,
            max_automorphisms: 500_000,
        }
    }
}
