/// Floating tolerances used by constructors and diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Operator identities (commutators, exact algebra).
    pub identity: f64,
    /// State construction residuals.
    pub state: f64,
    /// Matrix exponential accuracy.
    pub exponential: f64,
    /// Allowed norm deficit for states advertised as normalized.
    pub tail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-12,
            state: 1e-10,
            exponential: 1e-10,
            tail: 1e-10,
        }
    }
}

impl Tolerances {
    /// Accept `norm_sqr` as unit norm: within [1 − tail, 1 + 1e-12].
    pub fn accepts_norm(&self, norm_sqr: f64) -> bool {
        norm_sqr >= 1.0 - self.tail && norm_sqr <= 1.0 + 1e-12
    }
}
