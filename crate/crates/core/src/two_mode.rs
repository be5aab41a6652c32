//! Two-mode states over a rectangular truncated basis |n₁, n₂⟩ and the
//! two-mode ladder operators. Flattened index is n₁·dim_b + n₂.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{build_ladder, quadratures_from_ladder, OperatorMatrix};
use crate::units::NATURAL_UNITS;
use crate::C64;

/// Complex amplitudes amps[(n₁, n₂)].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoModeState {
    #[serde(with = "grid_serde")]
    amps: Array2<C64>,
    #[serde(default)]
    pub tail_warning: bool,
}

mod grid_serde {
    use ndarray::Array2;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::C64;

    pub fn serialize<S: Serializer>(a: &Array2<C64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = a
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Array2<C64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != nc) {
            return Err(serde::de::Error::custom("ragged amplitude grid"));
        }
        let flat: Vec<C64> = rows
            .into_iter()
            .flatten()
            .map(|[re, im]| C64::new(re, im))
            .collect();
        Array2::from_shape_vec((nr, nc), flat).map_err(serde::de::Error::custom)
    }
}

fn check_dims(dim_a: usize, dim_b: usize) -> Result<()> {
    for d in [dim_a, dim_b] {
        if d < 2 {
            return Err(Error::InvalidDimension { dim: d, min: 2 });
        }
    }
    Ok(())
}

impl TwoModeState {
    pub fn new(amps: Array2<C64>) -> Result<Self> {
        check_dims(amps.nrows(), amps.ncols())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("two-mode amplitudes"));
        }
        Ok(TwoModeState {
            amps,
            tail_warning: false,
        })
    }

    pub fn basis(dim_a: usize, dim_b: usize, na: usize, nb: usize) -> Result<Self> {
        check_dims(dim_a, dim_b)?;
        if na >= dim_a || nb >= dim_b {
            return Err(Error::param(
                "n",
                format!("({na}, {nb}) outside basis {dim_a}×{dim_b}"),
            ));
        }
        let mut amps = Array2::zeros((dim_a, dim_b));
        amps[[na, nb]] = C64::new(1.0, 0.0);
        Ok(TwoModeState {
            amps,
            tail_warning: false,
        })
    }

    pub fn vacuum(dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::basis(dim_a, dim_b, 0, 0)
    }

    /// From a flattened row-major vector.
    pub fn from_vector(dim_a: usize, dim_b: usize, v: Array1<C64>) -> Result<Self> {
        if v.len() != dim_a * dim_b {
            return Err(Error::Shape {
                expected: dim_a * dim_b,
                got: v.len(),
            });
        }
        let amps = v
            .into_shape_with_order((dim_a, dim_b))
            .map_err(|_| Error::Shape {
                expected: dim_a * dim_b,
                got: 0,
            })?;
        Self::new(amps)
    }

    pub fn to_vector(&self) -> Array1<C64> {
        self.amps.iter().copied().collect()
    }

    pub fn with_tail_warning(mut self, flag: bool) -> Self {
        self.tail_warning |= flag;
        self
    }

    pub fn dim_a(&self) -> usize {
        self.amps.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.amps.ncols()
    }

    pub fn amps(&self) -> &Array2<C64> {
        &self.amps
    }

    pub fn amp(&self, na: usize, nb: usize) -> C64 {
        self.amps[[na, nb]]
    }

    /// Frobenius norm squared.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: n * n });
        }
        Ok(TwoModeState {
            amps: self.amps.mapv(|z| z / n),
            tail_warning: self.tail_warning,
        })
    }

    pub fn scaled(&self, c: C64) -> Self {
        TwoModeState {
            amps: self.amps.mapv(|z| z * c),
            tail_warning: self.tail_warning,
        }
    }

    fn check_same(&self, other: &TwoModeState) -> Result<()> {
        if self.amps.dim() != other.amps.dim() {
            return Err(Error::Shape {
                expected: self.amps.len(),
                got: other.amps.len(),
            });
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &TwoModeState) -> Result<C64> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &TwoModeState) -> Result<f64> {
        let ov = self.inner(other)?;
        Ok(ov.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }

    pub fn distance(&self, other: &TwoModeState) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Apply an operator on the flattened product space.
    pub fn apply(&self, op: &OperatorMatrix) -> Result<TwoModeState> {
        let v = op.apply(&self.to_vector())?;
        Ok(TwoModeState::from_vector(self.dim_a(), self.dim_b(), v)?
            .with_tail_warning(self.tail_warning))
    }

    /// ⟨ψ|M|ψ⟩ / ⟨ψ|ψ⟩.
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<C64> {
        let v = self.to_vector();
        let mv = op.apply(&v)?;
        let num: C64 = v.iter().zip(mv.iter()).map(|(a, b)| a.conj() * b).sum();
        Ok(num / self.norm_sqr())
    }

    /// Joint photon-number distribution P(n₁, n₂).
    pub fn joint_distribution(&self) -> Array2<f64> {
        let norm = self.norm_sqr();
        self.amps.mapv(|z| z.norm_sqr() / norm)
    }

    /// Probability mass off the diagonal n₁ = n₂.
    pub fn off_diagonal_mass(&self) -> f64 {
        let norm = self.norm_sqr();
        self.amps
            .indexed_iter()
            .filter(|((i, j), _)| i != j)
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            / norm
    }

    /// a₁|ψ⟩ as an amplitude grid.
    pub fn lower_a(&self) -> Array2<C64> {
        shifted(&self.amps, 1, 0)
    }

    /// a₁†|ψ⟩ as an amplitude grid; the top row is truncated.
    pub fn raise_a(&self) -> Array2<C64> {
        shifted(&self.amps, -1, 0)
    }

    pub fn lower_b(&self) -> Array2<C64> {
        shifted(&self.amps, 0, 1)
    }

    pub fn raise_b(&self) -> Array2<C64> {
        shifted(&self.amps, 0, -1)
    }

    /// Means, variances and cross-correlations of the four quadratures.
    pub fn quadrature_moments(&self) -> Result<TwoModeMoments> {
        let s = self.normalized()?;
        let (xs, ps) = (NATURAL_UNITS.x_scale(), NATURAL_UNITS.p_scale());
        let i = C64::new(0.0, 1.0);
        let (la, ra, lb, rb) = (s.lower_a(), s.raise_a(), s.lower_b(), s.raise_b());
        let x1 = (&la + &ra).mapv(|z| z * xs);
        let p1 = (&la - &ra).mapv(|z| -i * z * ps);
        let x2 = (&lb + &rb).mapv(|z| z * xs);
        let p2 = (&lb - &rb).mapv(|z| -i * z * ps);
        let bra = |u: &Array2<C64>, v: &Array2<C64>| -> f64 {
            u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum::<C64>().re
        };
        let psi = s.amps();
        let (mx1, mp1, mx2, mp2) = (bra(psi, &x1), bra(psi, &p1), bra(psi, &x2), bra(psi, &p2));
        Ok(TwoModeMoments {
            mean_x1: mx1,
            mean_p1: mp1,
            mean_x2: mx2,
            mean_p2: mp2,
            var_x1: bra(&x1, &x1) - mx1 * mx1,
            var_p1: bra(&p1, &p1) - mp1 * mp1,
            var_x2: bra(&x2, &x2) - mx2 * mx2,
            var_p2: bra(&p2, &p2) - mp2 * mp2,
            // x₁ and x₂ commute, so ⟨x₁x₂⟩ = ⟨x₁ψ|x₂ψ⟩
            cov_x: bra(&x1, &x2) - mx1 * mx2,
            cov_p: bra(&p1, &p2) - mp1 * mp2,
        })
    }

    /// Probability mass in states with n₁ or n₂ in the top `fraction` of its
    /// mode's basis.
    pub fn tail_mass(&self, fraction: f64) -> f64 {
        let ca = self.dim_a() - ((self.dim_a() as f64 * fraction).ceil() as usize).max(1);
        let cb = self.dim_b() - ((self.dim_b() as f64 * fraction).ceil() as usize).max(1);
        self.amps
            .indexed_iter()
            .filter(|((i, j), _)| *i >= ca || *j >= cb)
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            / self.norm_sqr()
    }
}

/// out[i, j] = √(weight)·amps[i + di, j + dj], the single-mode ladder action
/// along one axis (d = 1 lowers, d = −1 raises).
pub(crate) fn shifted(amps: &Array2<C64>, di: isize, dj: isize) -> Array2<C64> {
    let (na, nb) = amps.dim();
    Array2::from_shape_fn((na, nb), |(i, j)| {
        let (si, sj) = (i as isize + di, j as isize + dj);
        if si < 0 || sj < 0 || si >= na as isize || sj >= nb as isize {
            return C64::new(0.0, 0.0);
        }
        // a|n⟩ = √n|n−1⟩: lowering reads amplitude n = i+1 with weight √(i+1);
        // raising reads n = i−1 with weight √i
        let w = match (di, dj) {
            (1, 0) => (i + 1) as f64,
            (-1, 0) => i as f64,
            (0, 1) => (j + 1) as f64,
            (0, -1) => j as f64,
            _ => unreachable!("single-step shifts only"),
        };
        amps[[si as usize, sj as usize]] * w.sqrt()
    })
}

/// Quadrature moments of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeMoments {
    pub mean_x1: f64,
    pub mean_p1: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    pub var_x1: f64,
    pub var_p1: f64,
    pub var_x2: f64,
    pub var_p2: f64,
    /// ⟨Δx₁Δx₂⟩.
    pub cov_x: f64,
    /// ⟨Δp₁Δp₂⟩.
    pub cov_p: f64,
}

/// Ladder and quadrature operators of both modes on the product space.
#[derive(Debug, Clone)]
pub struct TwoModeOps {
    pub dim_a: usize,
    pub dim_b: usize,
    pub a1: OperatorMatrix,
    pub a1dag: OperatorMatrix,
    pub a2: OperatorMatrix,
    pub a2dag: OperatorMatrix,
}

impl TwoModeOps {
    /// a₁ = a ⊗ I, a₂ = I ⊗ a.
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        let (a, _) = build_ladder(dim_a)?;
        let (b, _) = build_ladder(dim_b)?;
        let a1 = a.kron(&OperatorMatrix::identity(dim_b));
        let a2 = OperatorMatrix::identity(dim_a).kron(&b);
        Ok(TwoModeOps {
            dim_a,
            dim_b,
            a1dag: a1.dagger(),
            a2dag: a2.dagger(),
            a1,
            a2,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn n1(&self) -> OperatorMatrix {
        diag_counts(self.dim_a, self.dim_b, |i, _| i as f64)
    }

    pub fn n2(&self) -> OperatorMatrix {
        diag_counts(self.dim_a, self.dim_b, |_, j| j as f64)
    }

    pub fn identity(&self) -> OperatorMatrix {
        OperatorMatrix::identity(self.dim())
    }

    /// (x₁, p₁, x₂, p₂).
    pub fn quadratures(&self) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix, OperatorMatrix) {
        let (x1, p1) = quadratures_from_ladder(&self.a1, &self.a1dag);
        let (x2, p2) = quadratures_from_ladder(&self.a2, &self.a2dag);
        (x1, p1, x2, p2)
    }

    /// Flattened indices with n₁ < cut_a and n₂ < cut_b.
    pub fn box_indices(&self, cut_a: usize, cut_b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..cut_a.min(self.dim_a) {
            for j in 0..cut_b.min(self.dim_b) {
                out.push(i * self.dim_b + j);
            }
        }
        out
    }
}

/// ζ₀K⁰ + ζ₊K⁺ + ζ₋K⁻ with K⁺ = a₁†a₂†, K⁻ = a₁a₂, K⁰ = ½(N₁ + N₂ + 1),
/// filled entry by entry so that large product spaces hold one matrix.
pub fn su11_two_mode_generator(
    dim_a: usize,
    dim_b: usize,
    z0: C64,
    zp: C64,
    zm: C64,
) -> Result<OperatorMatrix> {
    check_dims(dim_a, dim_b)?;
    let n = dim_a * dim_b;
    let idx = |i: usize, j: usize| i * dim_b + j;
    let mut m = Array2::<C64>::zeros((n, n));
    for i in 0..dim_a {
        for j in 0..dim_b {
            let k = idx(i, j);
            m[[k, k]] = z0 * (0.5 * (i as f64 + j as f64 + 1.0));
            if i + 1 < dim_a && j + 1 < dim_b {
                let w = ((i + 1) as f64 * (j + 1) as f64).sqrt();
                // a₁†a₂†|i,j⟩ = w|i+1,j+1⟩ and a₁a₂|i+1,j+1⟩ = w|i,j⟩
                m[[idx(i + 1, j + 1), k]] = zp * w;
                m[[k, idx(i + 1, j + 1)]] = zm * w;
            }
        }
    }
    OperatorMatrix::from_array(m)
}

fn diag_counts(dim_a: usize, dim_b: usize, f: impl Fn(usize, usize) -> f64) -> OperatorMatrix {
    OperatorMatrix::diagonal(
        (0..dim_a * dim_b).map(|k| C64::new(f(k / dim_b, k % dim_b), 0.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattening_round_trip() {
        let s = TwoModeState::basis(3, 4, 2, 1).unwrap();
        let v = s.to_vector();
        assert_eq!(v[2 * 4 + 1], C64::new(1.0, 0.0));
        assert_eq!(TwoModeState::from_vector(3, 4, v).unwrap(), s);
    }

    #[test]
    fn ladders_act_on_own_mode() {
        let ops = TwoModeOps::new(5, 4).unwrap();
        let s = TwoModeState::basis(5, 4, 3, 2).unwrap();
        let t = s.apply(&ops.a1).unwrap();
        assert!((t.amp(2, 2) - C64::new(3f64.sqrt(), 0.0)).norm() < 1e-15);
        let t = s.apply(&ops.a2dag).unwrap();
        assert!((t.amp(3, 3) - C64::new(3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(ops.a1.commutator(&ops.a2).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn number_operators_match_products() {
        let ops = TwoModeOps::new(4, 6).unwrap();
        let n1 = ops.a1dag.matmul(&ops.a1).unwrap();
        assert!((&n1 - &ops.n1()).max_abs() < 1e-14);
        let n2 = ops.a2dag.matmul(&ops.a2).unwrap();
        assert!((&n2 - &ops.n2()).max_abs() < 1e-14);
    }

    #[test]
    fn direct_generator_matches_kron_build() {
        let ops = TwoModeOps::new(5, 7).unwrap();
        let (z0, zp, zm) = (C64::new(0.3, -0.2), C64::new(-0.1, 0.4), C64::new(0.25, 0.05));
        let kp = ops.a1dag.matmul(&ops.a2dag).unwrap();
        let km = ops.a1.matmul(&ops.a2).unwrap();
        let k0 = (&(&ops.n1() + &ops.n2()) + &ops.identity()).scale_real(0.5);
        let expect = &(&k0.scale(z0) + &kp.scale(zp)) + &km.scale(zm);
        let got = su11_two_mode_generator(5, 7, z0, zp, zm).unwrap();
        assert!((&got - &expect).max_abs() < 1e-15);
    }

    #[test]
    fn grid_ladders_match_kron_operators() {
        let ops = TwoModeOps::new(4, 5).unwrap();
        let v: Array1<C64> = (0..20).map(|k| C64::new(k as f64 * 0.1, 1.0 / (k + 1) as f64)).collect();
        let s = TwoModeState::from_vector(4, 5, v).unwrap();
        let pairs = [
            (s.lower_a(), &ops.a1),
            (s.raise_a(), &ops.a1dag),
            (s.lower_b(), &ops.a2),
            (s.raise_b(), &ops.a2dag),
        ];
        for (grid, op) in pairs {
            let expect = s.apply(op).unwrap();
            let d = (&grid - expect.amps()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(d < 1e-15);
        }
    }

    #[test]
    fn vacuum_moments() {
        let m = TwoModeState::vacuum(6, 6).unwrap().quadrature_moments().unwrap();
        for v in [m.var_x1, m.var_p1, m.var_x2, m.var_p2] {
            assert!((v - 0.5).abs() < 1e-15);
        }
        assert_eq!(m.cov_x, 0.0);
    }

    #[test]
    fn rejects_small_dims() {
        assert!(TwoModeState::vacuum(1, 4).is_err());
        assert!(TwoModeOps::new(4, 1).is_err());
    }
}
