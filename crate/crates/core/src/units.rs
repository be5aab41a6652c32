/// The unit system shared by every module.
///
/// Operators are written with explicit factors of these constants so that the
/// natural-unit choice lives in exactly one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalUnits {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

pub const NATURAL_UNITS: NaturalUnits = NaturalUnits {
    hbar: 1.0,
    mass: 1.0,
    omega: 1.0,
};

impl NaturalUnits {
    /// Length scale √(ħ/2mω) multiplying (a + a†) in x.
    pub fn x_scale(&self) -> f64 {
        (self.hbar / (2.0 * self.mass * self.omega)).sqrt()
    }

    /// Momentum scale √(mħω/2) multiplying −i(a − a†) in p.
    pub fn p_scale(&self) -> f64 {
        (self.mass * self.hbar * self.omega / 2.0).sqrt()
    }

    /// Heisenberg floor (ħ/2)² for the product of quadrature variances.
    pub fn heisenberg_floor(&self) -> f64 {
        0.25 * self.hbar * self.hbar
    }
}
