use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{interior_defect, OperatorMatrix};

/// Hyperbolic rotation a → a cosh θ − a† sinh θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovMap {
    pub theta: f64,
}

impl BogoliubovMap {
    pub fn new(theta: f64) -> Result<Self> {
        super::check_squeeze(theta)?;
        Ok(BogoliubovMap { theta })
    }

    /// [[cosh θ, −sinh θ], [−sinh θ, cosh θ]]
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (c, s) = (self.theta.cosh(), self.theta.sinh());
        [[c, -s], [-s, c]]
    }

    pub fn determinant(&self) -> f64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// This map followed by `other`.
    pub fn compose(&self, other: &BogoliubovMap) -> BogoliubovMap {
        BogoliubovMap {
            theta: self.theta + other.theta,
        }
    }

    /// (a_θ, a_θ†).
    pub fn apply(
        &self,
        a: &OperatorMatrix,
        adag: &OperatorMatrix,
    ) -> Result<(OperatorMatrix, OperatorMatrix)> {
        if a.dim() != adag.dim() {
            return Err(Error::Shape {
                expected: a.dim(),
                got: adag.dim(),
            });
        }
        let [[c, s], _] = self.matrix();
        let at = &a.scale_real(c) + &adag.scale_real(s);
        let adt = &adag.scale_real(c) + &a.scale_real(s);
        Ok((at, adt))
    }

    /// max |[a_θ, a_θ†] − I| on the leading 75% of the basis.
    pub fn commutator_defect(&self, a: &OperatorMatrix, adag: &OperatorMatrix) -> Result<f64> {
        let (at, adt) = self.apply(a, adag)?;
        let comm = at.commutator(&adt)?;
        Ok(interior_defect(
            &comm,
            &OperatorMatrix::identity(a.dim()),
            a.dim() * 3 / 4,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_ladder;

    fn mat_mul(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let mut o = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                o[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        o
    }

    #[test]
    fn zero_is_identity() {
        let (a, ad) = build_ladder(8).unwrap();
        let (at, adt) = BogoliubovMap::new(0.0).unwrap().apply(&a, &ad).unwrap();
        assert_eq!(at, a);
        assert_eq!(adt, ad);
    }

    #[test]
    fn determinant_is_one() {
        for t in [0.0, 0.3, 1.0, 2.5] {
            assert!((BogoliubovMap::new(t).unwrap().determinant() - 1.0).abs() < 1e-14 * t.cosh().powi(2).max(1.0));
        }
    }

    #[test]
    fn composition_adds_rapidities() {
        let (m1, m2) = (BogoliubovMap::new(0.4).unwrap(), BogoliubovMap::new(-1.1).unwrap());
        let direct = m1.compose(&m2).matrix();
        let product = mat_mul(m2.matrix(), m1.matrix());
        for i in 0..2 {
            for j in 0..2 {
                assert!((direct[i][j] - product[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn commutator_preserved() {
        let (a, ad) = build_ladder(64).unwrap();
        assert!(BogoliubovMap::new(0.7).unwrap().commutator_defect(&a, &ad).unwrap() <= 1e-10);
    }
}
