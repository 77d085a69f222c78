/// Enumeration caps. Exceeding a cap is an error, never silent truncation.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Maximum Weyl group order for full element enumeration.
    pub weyl_order: u128,
    /// Maximum number of points in a finite-field enumeration domain.
    pub domain: u128,
    /// Largest admissible field characteristic.
    pub p_max: u64,
    /// Largest admissible extension degree for a base field.
    pub k_max: usize,
    /// Iteration bound for affine-alcove reduction.
    pub alcove_iters: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            // covers E7; E8 callers fall back to order formulas
            weyl_order: 4_000_000,
            domain: 100_000_000,
            p_max: 101,
            k_max: 6,
            alcove_iters: 1_000_000,
        }
    }
}

impl Caps {
    pub fn with_domain(mut self, domain: u128) -> Self {
        self.domain = domain;
        self
    }
}
