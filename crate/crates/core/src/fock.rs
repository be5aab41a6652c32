//! Truncated single-mode Fock space: states, dense operators, ladder and
//! quadrature operators, expectations and uncertainty reports.

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::units::NATURAL_UNITS;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Below this fill fraction, products skip zero entries of the left factor.
const SPARSE_FILL: f64 = 0.1;

/// Dense complex matrix acting on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
}

impl OperatorMatrix {
    pub fn from_array(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::Shape {
                expected: r,
                got: c,
            });
        }
        if r == 0 {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        Ok(OperatorMatrix { entries })
    }

    pub(crate) fn from_array_unchecked(entries: Array2<C64>) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        OperatorMatrix { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            entries: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix {
            entries: Array2::eye(dim),
        }
    }

    pub fn diagonal(diag: impl IntoIterator<Item = C64>) -> Self {
        let d: Vec<C64> = diag.into_iter().collect();
        let mut m = Array2::zeros((d.len(), d.len()));
        for (i, v) in d.into_iter().enumerate() {
            m[[i, i]] = v;
        }
        OperatorMatrix { entries: m }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[[row, col]]
    }

    pub fn dagger(&self) -> Self {
        OperatorMatrix {
            entries: self.entries.t().mapv(|z| z.conj()),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        OperatorMatrix {
            entries: &self.entries * c,
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    fn nonzeros(&self) -> usize {
        self.entries.iter().filter(|z| **z != ZERO).count()
    }

    /// Matrix product. Ladder-built operators are mostly zeros, so sparse
    /// left factors take a row-accumulation path instead of a full gemm.
    pub fn matmul(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_dim(rhs.dim())?;
        let n = self.dim();
        if (self.nonzeros() as f64) < SPARSE_FILL * (n * n) as f64 {
            let mut out = Array2::<C64>::zeros((n, n));
            for i in 0..n {
                let mut row = out.row_mut(i);
                for k in 0..n {
                    let v = self.entries[[i, k]];
                    if v != ZERO {
                        row.scaled_add(v, &rhs.entries.row(k));
                    }
                }
            }
            Ok(OperatorMatrix { entries: out })
        } else {
            Ok(OperatorMatrix {
                entries: self.entries.dot(&rhs.entries),
            })
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Array1<C64>) -> Result<Array1<C64>> {
        self.check_dim(v.len())?;
        let n = self.dim();
        let mut out = Array1::<C64>::zeros(n);
        for (i, row) in self.entries.axis_iter(Axis(0)).enumerate() {
            let mut acc = ZERO;
            for (m, x) in row.iter().zip(v.iter()) {
                if *m != ZERO {
                    acc += m * x;
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    pub fn powi(&self, k: u32) -> Result<OperatorMatrix> {
        let mut out = OperatorMatrix::identity(self.dim());
        for _ in 0..k {
            out = self.matmul(&out)?;
        }
        Ok(out)
    }

    /// Kronecker product, row-major: index (i, j) ↦ i·dim(rhs) + j.
    pub fn kron(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        let (n, m) = (self.dim(), rhs.dim());
        let mut out = Array2::<C64>::zeros((n * m, n * m));
        for ((i, k), a) in self.entries.indexed_iter() {
            if *a == ZERO {
                continue;
            }
            for ((j, l), b) in rhs.entries.indexed_iter() {
                if *b != ZERO {
                    out[[i * m + j, k * m + l]] = a * b;
                }
            }
        }
        OperatorMatrix { entries: out }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entry modulus restricted to rows and columns `< cut`.
    pub fn max_abs_leading(&self, cut: usize) -> f64 {
        let cut = cut.min(self.dim());
        let mut m: f64 = 0.0;
        for i in 0..cut {
            for j in 0..cut {
                m = m.max(self.entries[[i, j]].norm());
            }
        }
        m
    }

    /// Largest entry modulus over an arbitrary index set (rows × cols).
    pub fn max_abs_on(&self, idx: &[usize]) -> f64 {
        let mut m: f64 = 0.0;
        for &i in idx {
            for &j in idx {
                m = m.max(self.entries[[i, j]].norm());
            }
        }
        m
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.dagger()).max_abs()
    }

    /// Induced 1-norm (max column sum).
    pub fn norm1(&self) -> f64 {
        self.entries
            .axis_iter(Axis(1))
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if other != self.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: other,
            });
        }
        Ok(())
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: C64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

/// Complex amplitude vector over |0⟩..|dim−1⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockState {
    #[serde(with = "amps_serde")]
    amps: Array1<C64>,
    /// Set by constructors whose parameters exceed the tight-dimension rule.
    #[serde(default)]
    pub tail_warning: bool,
}

pub(crate) mod amps_serde {
    use ndarray::Array1;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::C64;

    pub fn serialize<S: Serializer>(a: &Array1<C64>, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = a.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Array1<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl FockState {
    pub fn new(amps: Array1<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidDimension {
                dim: amps.len(),
                min: 2,
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Ok(FockState {
            amps,
            tail_warning: false,
        })
    }

    /// Number state |n⟩ in a basis of size `dim`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        if n >= dim {
            return Err(Error::param("n", format!("{n} outside basis of size {dim}")));
        }
        let mut amps = Array1::zeros(dim);
        amps[n] = ONE;
        Ok(FockState {
            amps,
            tail_warning: false,
        })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::basis(dim, 0)
    }

    pub fn with_tail_warning(mut self, flag: bool) -> Self {
        self.tail_warning |= flag;
        self
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn amp(&self, n: usize) -> C64 {
        self.amps[n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: n * n,
            });
        }
        Ok(FockState {
            amps: self.amps.mapv(|z| z / n),
            tail_warning: self.tail_warning,
        })
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &FockState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|² / (‖self‖²‖other‖²).
    pub fn fidelity(&self, other: &FockState) -> Result<f64> {
        let ov = self.inner(other)?;
        Ok(ov.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }

    /// Probability mass in the top `fraction` of the basis.
    pub fn tail_mass(&self, fraction: f64) -> f64 {
        let start = self.dim() - ((self.dim() as f64 * fraction).ceil() as usize).max(1);
        self.amps
            .iter()
            .skip(start)
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            / self.norm_sqr()
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        let norm = self.norm_sqr();
        self.amps.iter().map(|z| z.norm_sqr() / norm).collect()
    }

    /// (mean, variance) of the photon-number distribution.
    pub fn photon_statistics(&self) -> (f64, f64) {
        let p = self.photon_distribution();
        let mean: f64 = p.iter().enumerate().map(|(n, w)| n as f64 * w).sum();
        let second: f64 = p
            .iter()
            .enumerate()
            .map(|(n, w)| (n * n) as f64 * w)
            .sum();
        (mean, second - mean * mean)
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<FockState> {
        Ok(FockState {
            amps: op.apply(&self.amps)?,
            tail_warning: self.tail_warning,
        })
    }

    /// Euclidean norm of the difference of two amplitude vectors.
    pub fn distance(&self, other: &FockState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn scaled(&self, c: C64) -> FockState {
        FockState {
            amps: self.amps.mapv(|z| z * c),
            tail_warning: self.tail_warning,
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    Ok(())
}

/// Annihilation and creation operators: a|n⟩ = √n|n−1⟩, a†|n⟩ = √(n+1)|n+1⟩.
pub fn build_ladder(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_dim(dim)?;
    let mut a = Array2::<C64>::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    let a = OperatorMatrix::from_array_unchecked(a);
    let adag = a.dagger();
    Ok((a, adag))
}

/// Number operator N = a†a, built diagonally.
pub fn number_operator(dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim)?;
    Ok(OperatorMatrix::diagonal(
        (0..dim).map(|n| C64::new(n as f64, 0.0)),
    ))
}

/// Oscillator Hamiltonian ħω(N + ½).
pub fn hamiltonian(dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim)?;
    let u = NATURAL_UNITS;
    Ok(OperatorMatrix::diagonal(
        (0..dim).map(|n| C64::new(u.hbar * u.omega * (n as f64 + 0.5), 0.0)),
    ))
}

/// Position and momentum quadratures x = (a + a†)/√2, p = −i(a − a†)/√2.
pub fn build_quadratures(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let (a, adag) = build_ladder(dim)?;
    Ok(quadratures_from_ladder(&a, &adag))
}

pub(crate) fn quadratures_from_ladder(
    a: &OperatorMatrix,
    adag: &OperatorMatrix,
) -> (OperatorMatrix, OperatorMatrix) {
    let u = NATURAL_UNITS;
    let x = (a + adag).scale_real(u.x_scale());
    let p = (a - adag).scale(C64::new(0.0, -u.p_scale()));
    (x, p)
}

/// ⟨s|M|s⟩.
pub fn expectation(m: &OperatorMatrix, s: &FockState) -> Result<C64> {
    let ms = m.apply(s.amps())?;
    Ok(s.amps()
        .iter()
        .zip(ms.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Means, variances and uncertainty product of the position and momentum
/// quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub product: f64,
    /// Set when more than `tail` probability sits in the top 10% of the basis.
    pub tail_warning: bool,
}

pub fn quadrature_report(s: &FockState) -> Result<QuadratureReport> {
    quadrature_report_with(s, &Tolerances::default())
}

pub fn quadrature_report_with(s: &FockState, tol: &Tolerances) -> Result<QuadratureReport> {
    let norm_sqr = s.norm_sqr();
    if !tol.accepts_norm(norm_sqr) {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let (x, p) = build_quadratures(s.dim())?;
    let x2 = x.matmul(&x)?;
    let p2 = p.matmul(&p)?;
    let mean_x = expectation(&x, s)?.re;
    let mean_p = expectation(&p, s)?.re;
    let var_x = expectation(&x2, s)?.re - mean_x * mean_x;
    let var_p = expectation(&p2, s)?.re - mean_p * mean_p;
    Ok(QuadratureReport {
        mean_x,
        mean_p,
        var_x,
        var_p,
        product: var_x * var_p,
        tail_warning: s.tail_warning || s.tail_mass(0.1) > tol.tail,
    })
}

/// Largest entry of `op − target` on the leading `cut × cut` block.
pub fn interior_defect(op: &OperatorMatrix, target: &OperatorMatrix, cut: usize) -> f64 {
    (op - target).max_abs_leading(cut)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_dim_two_has_single_entry() {
        let (a, adag) = build_ladder(2).unwrap();
        assert_eq!(a.get(0, 1), ONE);
        assert_eq!(a.get(1, 0), ZERO);
        assert_eq!(a.get(0, 0), ZERO);
        assert_eq!(adag, a.dagger());
    }

    #[test]
    fn ladder_rejects_small_dims() {
        assert_eq!(
            build_ladder(1).unwrap_err(),
            Error::InvalidDimension { dim: 1, min: 2 }
        );
        assert!(build_quadratures(0).is_err());
    }

    #[test]
    fn annihilation_lowers_number_state() {
        let (a, _) = build_ladder(4).unwrap();
        let out = FockState::basis(4, 3).unwrap().apply(&a).unwrap();
        let expected = FockState::basis(4, 2).unwrap().scaled(C64::new(3f64.sqrt(), 0.0));
        assert!(out.distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn canonical_commutator_on_interior() {
        for dim in [8, 16, 32, 64] {
            let (a, adag) = build_ladder(dim).unwrap();
            let c = a.commutator(&adag).unwrap();
            let id = OperatorMatrix::identity(dim);
            assert!(interior_defect(&c, &id, dim - 1) <= 1e-12);
            // the truncation row is where the algebra breaks
            assert!((c.get(dim - 1, dim - 1).re + (dim as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn number_algebra() {
        let dim = 24;
        let (a, adag) = build_ladder(dim).unwrap();
        let n = number_operator(dim).unwrap();
        // (n−1)√n − n√n rounds, so exact zero is not expected
        assert!((&n.commutator(&a).unwrap() + &a).max_abs() < 1e-13);
        assert!((&n.commutator(&adag).unwrap() - &adag).max_abs() < 1e-13);
        let ata = adag.matmul(&a).unwrap();
        assert!((&ata - &n).max_abs() < 1e-14);
    }

    #[test]
    fn quadratures_hermitian_and_canonical() {
        let (x, p) = build_quadratures(32).unwrap();
        assert!(x.hermiticity_defect() < 1e-14);
        assert!(p.hermiticity_defect() < 1e-14);
        let c = x.commutator(&p).unwrap();
        let target = OperatorMatrix::identity(32).scale(C64::new(0.0, 1.0));
        assert!(interior_defect(&c, &target, 31) <= 1e-12);
    }

    #[test]
    fn number_states_have_zero_mean_quadratures() {
        let (x, p) = build_quadratures(16).unwrap();
        for n in 0..16 {
            let s = FockState::basis(16, n).unwrap();
            assert_eq!(expectation(&x, &s).unwrap().norm(), 0.0);
            assert_eq!(expectation(&p, &s).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn number_expectation_and_identity() {
        let n = number_operator(10).unwrap();
        for k in 0..10 {
            let s = FockState::basis(10, k).unwrap();
            assert_eq!(expectation(&n, &s).unwrap().re, k as f64);
        }
        let s = FockState::new(Array1::from_elem(10, C64::new(1.0, 1.0)))
            .unwrap()
            .normalized()
            .unwrap();
        let one = expectation(&OperatorMatrix::identity(10), &s).unwrap();
        assert!((one - ONE).norm() < 1e-15);
    }

    #[test]
    fn expectation_rejects_dim_mismatch() {
        let s = FockState::basis(4, 0).unwrap();
        assert!(matches!(
            expectation(&OperatorMatrix::identity(5), &s),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn fock_state_uncertainty_law() {
        for n in 0..=10 {
            let r = quadrature_report(&FockState::basis(64, n).unwrap()).unwrap();
            let expected = (2.0 * n as f64 + 1.0).powi(2) / 4.0;
            assert!((r.product - expected).abs() <= 1e-10, "n={n}");
        }
    }

    #[test]
    fn quadrature_report_rejects_unnormalized() {
        let s = FockState::basis(8, 1).unwrap().scaled(C64::new(2.0, 0.0));
        assert!(matches!(
            quadrature_report(&s),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn tail_warning_for_edge_mass() {
        let r = quadrature_report(&FockState::basis(20, 19).unwrap()).unwrap();
        assert!(r.tail_warning);
        let r = quadrature_report(&FockState::basis(20, 3).unwrap()).unwrap();
        assert!(!r.tail_warning);
    }

    #[test]
    fn sparse_and_dense_products_agree() {
        let (a, adag) = build_ladder(12).unwrap();
        let dense = OperatorMatrix::from_array(Array2::from_shape_fn((12, 12), |(i, j)| {
            C64::new((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.05)
        }))
        .unwrap();
        let fast = a.matmul(&dense).unwrap();
        let slow = OperatorMatrix::from_array(a.entries().dot(dense.entries())).unwrap();
        assert!((&fast - &slow).max_abs() < 1e-14);
        let fast = dense.matmul(&adag).unwrap();
        let slow = OperatorMatrix::from_array(dense.entries().dot(adag.entries())).unwrap();
        assert!((&fast - &slow).max_abs() < 1e-14);
    }

    #[test]
    fn kron_matches_row_major_index() {
        let (a, _) = build_ladder(3).unwrap();
        let id = OperatorMatrix::identity(2);
        let k = a.kron(&id);
        // a ⊗ I sends |1, j⟩ → |0, j⟩
        assert_eq!(k.get(1, 3), ONE);
        assert_eq!(k.get(0, 2), ONE);
    }
}
