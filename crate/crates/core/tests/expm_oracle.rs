// matrix_exponential against a Hermitian eigendecomposition: exp(iH) = V e^{iΛ} V†.

use fockbench::expm::{expm_apply, matrix_exponential};
use fockbench::fock::{build_ladder, build_quadratures, OperatorMatrix};
use fockbench::C64;
use nalgebra::DMatrix;
use ndarray::{Array1, Array2};

fn to_na(m: &OperatorMatrix) -> DMatrix<C64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

fn exp_i_hermitian(h: &OperatorMatrix) -> DMatrix<C64> {
    let eig = to_na(h).symmetric_eigen();
    let v = eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, l)));
    &v * d * v.adjoint()
}

fn max_diff(a: &OperatorMatrix, b: &DMatrix<C64>) -> f64 {
    let n = a.dim();
    let mut worst = 0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a.get(i, j) - b[(i, j)]).norm());
        }
    }
    worst
}

#[test]
fn position_generator() {
    let (x, _) = build_quadratures(40).unwrap();
    let h = x.scale_real(0.7);
    let ours = matrix_exponential(&h.scale(C64::new(0.0, 1.0))).unwrap();
    assert!(max_diff(&ours, &exp_i_hermitian(&h)) < 1e-11);
}

#[test]
fn squeeze_like_generator() {
    // i(a² + a†²) is block diagonal by parity, exercising the block split
    let (a, ad) = build_ladder(50).unwrap();
    let h = (&a.matmul(&a).unwrap() + &ad.matmul(&ad).unwrap()).scale_real(0.4);
    let ours = matrix_exponential(&h.scale(C64::new(0.0, 1.0))).unwrap();
    assert!(max_diff(&ours, &exp_i_hermitian(&h)) < 1e-10);
}

#[test]
fn dense_random_hermitian() {
    let n = 24;
    let mut m = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let v = C64::new(((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.5, if i == j { 0.0 } else { ((i + 2 * j) % 5) as f64 / 5.0 - 0.4 });
            m[[i, j]] = v;
            m[[j, i]] = v.conj();
        }
    }
    let h = OperatorMatrix::from_array(m).unwrap();
    let ours = matrix_exponential(&h.scale(C64::new(0.0, 2.0))).unwrap();
    let oracle = exp_i_hermitian(&h.scale_real(2.0));
    assert!(max_diff(&ours, &oracle) < 1e-11);

    let v = Array1::from_shape_fn(n, |k| C64::new(1.0 / (k + 1) as f64, 0.0));
    let applied = expm_apply(&h.scale(C64::new(0.0, 2.0)), &v).unwrap();
    let direct = ours.apply(&v).unwrap();
    assert!((applied - direct).iter().all(|z| z.norm() < 1e-12));
}
