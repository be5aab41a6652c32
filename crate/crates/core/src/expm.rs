//! Dense complex matrix exponential.
//!
//! exp(M) is evaluated by scaling and squaring around a Taylor series. Before
//! that, the basis is split into the connected components of M's nonzero
//! pattern: exp(M) is block diagonal on them, and generators built from ladder
//! operators (charge sectors, parity classes, m-step ladders) split into many
//! small blocks.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::fock::OperatorMatrix;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Scaled matrices are brought below this 1-norm before the series.
const SCALED_NORM: f64 = 0.5;
const MAX_TERMS: usize = 60;

/// exp(M) for a square complex matrix with finite entries.
pub fn matrix_exponential(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix_exponential input"));
    }
    let n = m.dim();
    let blocks = invariant_blocks(m.entries());
    if blocks.len() == 1 {
        return Ok(OperatorMatrix::from_array_unchecked(dense_expm(m.entries())));
    }
    let mut out = Array2::<C64>::zeros((n, n));
    for block in &blocks {
        if block.len() == 1 {
            let i = block[0];
            out[[i, i]] = m.entries()[[i, i]].exp();
            continue;
        }
        let k = block.len();
        let sub = Array2::from_shape_fn((k, k), |(r, c)| m.entries()[[block[r], block[c]]]);
        let e = dense_expm(&sub);
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                out[[i, j]] = e[[r, c]];
            }
        }
    }
    let out = OperatorMatrix::from_array_unchecked(out);
    if !out.is_finite() {
        return Err(Error::NonFinite("matrix_exponential output"));
    }
    Ok(out)
}

/// exp(M)·v, exponentiating block by block without assembling exp(M).
pub fn expm_apply(m: &OperatorMatrix, v: &Array1<C64>) -> Result<Array1<C64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix_exponential input"));
    }
    if v.len() != m.dim() {
        return Err(Error::Shape {
            expected: m.dim(),
            got: v.len(),
        });
    }
    let mut out = Array1::<C64>::zeros(v.len());
    for block in invariant_blocks(m.entries()) {
        if block.iter().all(|&i| v[i] == ZERO) {
            continue;
        }
        let k = block.len();
        let sub = Array2::from_shape_fn((k, k), |(r, c)| m.entries()[[block[r], block[c]]]);
        let e = dense_expm(&sub);
        for (r, &i) in block.iter().enumerate() {
            out[i] = block.iter().enumerate().map(|(c, &j)| e[[r, c]] * v[j]).sum();
        }
    }
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix_exponential output"));
    }
    Ok(out)
}

/// Connected components of the symmetric nonzero pattern, each sorted.
pub fn invariant_blocks(m: &Array2<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for ((i, j), z) in m.indexed_iter() {
        if i != j && *z != ZERO {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn norm1(a: &Array2<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn dense_expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    let norm = norm1(a);
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / C64::new(2f64.powi(squarings), 0.0);

    let mut sum = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=MAX_TERMS {
        term = term.dot(&scaled) / C64::new(k as f64, 0.0);
        sum += &term;
        if norm1(&term) <= f64::EPSILON * 1e-2 * norm1(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

/// Taylor-series reference for exp(M) without block splitting or squaring;
/// only suitable for small norms. Kept for cross-checks.
pub fn taylor_reference(m: &OperatorMatrix, terms: usize) -> OperatorMatrix {
    let n = m.dim();
    let mut sum = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=terms {
        term = term.dot(m.entries()) / C64::new(k as f64, 0.0);
        sum += &term;
    }
    OperatorMatrix::from_array_unchecked(sum)
}

/// exp(M)·v by a scaled Taylor series on the vector only. Used when the
/// generator couples the whole space and a full exponential is not needed.
pub fn expm_action(m: &OperatorMatrix, v: &Array1<C64>) -> Result<Array1<C64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("expm_action input"));
    }
    let steps = m.norm1().ceil().max(1.0) as usize;
    let h = C64::new(1.0 / steps as f64, 0.0);
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..=MAX_TERMS {
            term = m.apply(&term)? * (h / C64::new(k as f64, 0.0));
            acc += &term;
            let tn: f64 = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let an: f64 = acc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if tn <= f64::EPSILON * 1e-2 * an {
                break;
            }
        }
        out = acc;
    }
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("expm_action output"));
    }
    Ok(out)
}

/// Largest entry modulus of `exp(M)·exp(−M) − I`.
pub fn inverse_defect(m: &OperatorMatrix) -> Result<f64> {
    let e = matrix_exponential(m)?;
    let f = matrix_exponential(&m.scale_real(-1.0))?;
    let p = e.matmul(&f)?;
    let mut worst: f64 = 0.0;
    for ((i, j), z) in p.entries().indexed_iter() {
        let target = if i == j { 1.0 } else { 0.0 };
        worst = worst.max((z - C64::new(target, 0.0)).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_ladder, build_quadratures, number_operator};

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exponential(&OperatorMatrix::zeros(7)).unwrap();
        assert_eq!(e, OperatorMatrix::identity(7));
    }

    #[test]
    fn exp_of_diagonal() {
        let d: Vec<C64> = (0..6).map(|k| C64::new(0.3 * k as f64 - 1.0, 0.2 * k as f64)).collect();
        let e = matrix_exponential(&OperatorMatrix::diagonal(d.clone())).unwrap();
        for (k, z) in d.iter().enumerate() {
            assert!((e.get(k, k) - z.exp()).norm() <= 1e-15 * z.exp().norm());
        }
    }

    #[test]
    fn inverse_identity_for_position_generator() {
        let (x, _) = build_quadratures(16).unwrap();
        let m = x.scale(C64::new(0.0, std::f64::consts::PI));
        assert!(inverse_defect(&m).unwrap() <= 1e-10);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = OperatorMatrix::identity(3).into_entries();
        m[[0, 1]] = C64::new(f64::NAN, 0.0);
        let m = OperatorMatrix::from_array(m).unwrap();
        assert_eq!(
            matrix_exponential(&m).unwrap_err(),
            Error::NonFinite("matrix_exponential input")
        );
    }

    #[test]
    fn blocks_follow_parity_for_quadratic_generators() {
        let (a, adag) = build_ladder(10).unwrap();
        let g = &adag.matmul(&adag).unwrap() - &a.matmul(&a).unwrap();
        let blocks = invariant_blocks(g.entries());
        assert_eq!(blocks, vec![vec![0, 2, 4, 6, 8], vec![1, 3, 5, 7, 9]]);
    }

    #[test]
    fn block_split_matches_unsplit_series() {
        let (a, adag) = build_ladder(12).unwrap();
        let g = (&adag.matmul(&adag).unwrap() - &a.matmul(&a).unwrap()).scale_real(0.05);
        let split = matrix_exponential(&g).unwrap();
        let reference = taylor_reference(&g, 40);
        assert!((&split - &reference).max_abs() < 1e-14);
    }

    #[test]
    fn commuting_group_law() {
        let n = number_operator(20).unwrap();
        let h = crate::fock::hamiltonian(20).unwrap();
        let a = n.scale(C64::new(0.3, -0.7));
        let b = h.scale(C64::new(-0.1, 1.9));
        let lhs = matrix_exponential(&a)
            .unwrap()
            .matmul(&matrix_exponential(&b).unwrap())
            .unwrap();
        let rhs = matrix_exponential(&(&a + &b)).unwrap();
        assert!((&lhs - &rhs).max_abs() <= 1e-10 * rhs.max_abs());
    }

    #[test]
    fn action_matches_full_exponential() {
        let (a, adag) = build_ladder(30).unwrap();
        let g = &adag.scale(C64::new(0.8, 0.3)) - &a.scale(C64::new(0.8, -0.3));
        let mut v = Array1::zeros(30);
        v[0] = C64::new(1.0, 0.0);
        let full = matrix_exponential(&g).unwrap().apply(&v).unwrap();
        let act = expm_action(&g, &v).unwrap();
        let d: f64 = (&full - &act).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(d < 1e-13);
    }

    #[test]
    fn blockwise_apply_matches_full() {
        let (a, adag) = build_ladder(20).unwrap();
        let g = (&adag.matmul(&adag).unwrap() - &a.matmul(&a).unwrap()).scale(C64::new(0.2, 0.1));
        let v: Array1<C64> = (0..20).map(|k| C64::new(1.0 / (k + 1) as f64, 0.1 * k as f64)).collect();
        let full = matrix_exponential(&g).unwrap().apply(&v).unwrap();
        let blocks = expm_apply(&g, &v).unwrap();
        assert!((&full - &blocks).iter().all(|z| z.norm() < 1e-14));
    }
}
