use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::two_mode::{shifted, su11_two_mode_generator};
use crate::C64;

/// Coefficients of exp(ζ₀K⁰ + ζ₊K⁺ + ζ₋K⁻) = e^{γ₊K⁺} e^{ln γ₀ K⁰} e^{γ₋K⁻}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisentangleCoeffs {
    pub gamma0: C64,
    /// −2 ln D on the branch continuous from the origin; γ₀ = e^{ln γ₀}.
    pub ln_gamma0: C64,
    pub gamma_plus: C64,
    pub gamma_minus: C64,
    /// θ² = ζ₀²/4 − ζ₊ζ₋
    pub theta_sq: C64,
}

const SINGULAR: f64 = 1e-12;

/// (cosh θ, sinh θ/θ) as functions of θ², continued through θ² < 0.
fn even_parts(theta_sq: C64) -> (C64, C64, C64) {
    let theta = theta_sq.sqrt();
    if theta.norm() < 1e-4 {
        let t2 = theta_sq;
        let c = 1.0 + t2 / 2.0 + t2 * t2 / 24.0;
        let sc = 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
        return (theta, c, sc);
    }
    (theta, theta.cosh(), theta.sinh() / theta)
}

pub fn su11_disentangle_general(zeta0: C64, zeta_plus: C64, zeta_minus: C64) -> Result<DisentangleCoeffs> {
    for (name, z) in [("zeta0", zeta0), ("zeta_plus", zeta_plus), ("zeta_minus", zeta_minus)] {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }
    let theta_sq = zeta0 * zeta0 / 4.0 - zeta_plus * zeta_minus;
    let (theta, c, sc) = even_parts(theta_sq);
    // D = cosh θ − (ζ₀/2θ) sinh θ
    let d = c - zeta0 / 2.0 * sc;
    if d.norm() < SINGULAR || !d.re.is_finite() || !d.im.is_finite() {
        return Err(Error::DisentangleSingularity {
            theta_re: theta.re,
            theta_im: theta.im,
        });
    }
    let ln_gamma0 = -2.0 * d.ln();
    Ok(DisentangleCoeffs {
        gamma0: ln_gamma0.exp(),
        ln_gamma0,
        gamma_plus: zeta_plus * sc / d,
        gamma_minus: zeta_minus * sc / d,
        theta_sq,
    })
}

/// Σ_k (γ X)^k v / k! with X one of the pair ladders; exact on a truncated
/// grid because each step only moves amplitude away from the edge it drops.
fn pair_series(v: Array2<C64>, gamma: C64, raise: bool) -> Array2<C64> {
    let d = if raise { -1 } else { 1 };
    let mut acc = v.clone();
    let mut term = v;
    for k in 1.. {
        term = shifted(&shifted(&term, d, 0), 0, d).mapv(|z| z * gamma / k as f64);
        if term.iter().all(|z| z.norm() == 0.0) {
            break;
        }
        acc += &term;
    }
    acc
}

/// max |LHS − RHS| / max(1, max |RHS|) between the exponential of the
/// generator and the ordered product, over rows and columns with
/// n₁ < dim_a/3 and n₂ < dim_b/3.
pub fn disentangle_residual(
    zeta0: C64,
    zeta_plus: C64,
    zeta_minus: C64,
    dim_a: usize,
    dim_b: usize,
) -> Result<f64> {
    let coeffs = su11_disentangle_general(zeta0, zeta_plus, zeta_minus)?;
    let lhs = matrix_exponential(&su11_two_mode_generator(
        dim_a, dim_b, zeta0, zeta_plus, zeta_minus,
    )?)?;
    let (ca, cb) = (dim_a / 3, dim_b / 3);
    let mut diff = 0f64;
    let mut scale = 1f64;
    for i in 0..ca {
        for j in 0..cb {
            let mut col = Array2::<C64>::zeros((dim_a, dim_b));
            col[[i, j]] = C64::new(1.0, 0.0);
            let col = pair_series(col, coeffs.gamma_minus, false);
            let col = Array2::from_shape_fn((dim_a, dim_b), |(p, q)| {
                col[[p, q]] * (coeffs.ln_gamma0 * (0.5 * (p + q + 1) as f64)).exp()
            });
            let col = pair_series(col, coeffs.gamma_plus, true);
            for p in 0..ca {
                for q in 0..cb {
                    let rhs = col[[p, q]];
                    let l = lhs.get(p * dim_b + q, i * dim_b + j);
                    diff = diff.max((l - rhs).norm());
                    scale = scale.max(rhs.norm());
                }
            }
        }
    }
    Ok(diff / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn two_mode_squeeze_specialization() {
        for s in [0.3, 1.0, 2.0] {
            let k = su11_disentangle_general(c(0.0, 0.0), c(-s / 2.0, 0.0), c(s / 2.0, 0.0)).unwrap();
            let ch = (s / 2.0).cosh();
            assert!((k.gamma0 - c(1.0 / (ch * ch), 0.0)).norm() <= 1e-14);
            assert!((k.gamma_plus + c((s / 2.0).tanh(), 0.0)).norm() <= 1e-14);
            assert!((k.gamma_minus - c((s / 2.0).tanh(), 0.0)).norm() <= 1e-14);
        }
    }

    #[test]
    fn pure_k0_limit() {
        let z0 = c(0.3, -0.7);
        let k = su11_disentangle_general(z0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((k.gamma0 - z0.exp()).norm() < 1e-14);
        assert_eq!(k.gamma_plus, c(0.0, 0.0));
        assert_eq!(k.gamma_minus, c(0.0, 0.0));
    }

    #[test]
    fn imaginary_theta_continuation() {
        // ζ₊ζ₋ > 0 gives θ² < 0: the compact branch
        let k = su11_disentangle_general(c(0.0, 0.0), c(0.4, 0.0), c(0.4, 0.0)).unwrap();
        assert!(k.theta_sq.re < 0.0);
        assert!((k.gamma_plus - c(0.4f64.tan(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_denominator_reported() {
        // ζ₀ = 2 with ζ± = 0: D = e^{−1} ≠ 0; ζ₀ = 2, ζ₊ζ₋ = 1 gives θ = 0, D = 0
        let e = su11_disentangle_general(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap_err();
        assert!(matches!(e, Error::DisentangleSingularity { .. }));
    }

    #[test]
    fn matrix_identity_random_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut draw = || {
            let r = 0.5 * rng.random::<f64>();
            C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        };
        for _ in 0..4 {
            let (z0, zp, zm) = (draw(), draw(), draw());
            assert!(disentangle_residual(z0, zp, zm, 24, 24).unwrap() <= 1e-8);
        }
    }
}
