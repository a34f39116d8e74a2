//! Shared dense linear algebra: Hermitian exponentials, eigendecomposition,
//! truncated-SVD least squares, finite differences.
//!
//! Everything here is deterministic; the LAPACK drivers used (`?heevd`,
//! `?syevd`) have no randomized stages.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

/// Dimension guard for dense eigendecompositions (2^12).
pub const MAX_EIG_DIM: usize = 4096;

fn hermiticity_residual(h: &Array2<Complex64>) -> f64 {
    let (r, c) = h.dim();
    assert_eq!(r, c, "matrix must be square");
    let mut worst = 0.0f64;
    for i in 0..r {
        for j in i..c {
            let d = (h[[i, j]] - h[[j, i]].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `exp(scale·h)` for Hermitian `h`, via `h = QΛQ†`,
/// `exp(scale·h) = Q·exp(scale·Λ)·Q†`.
///
/// For purely imaginary `scale` the result is unitary; for real negative
/// `scale` it is Hermitian positive definite.
pub fn hermitian_expm(h: &Array2<Complex64>, scale: Complex64) -> Array2<Complex64> {
    let dim = h.dim().0;
    assert!(dim <= MAX_EIG_DIM, "dimension {dim} exceeds the guard");
    let res = hermiticity_residual(h);
    assert!(
        res <= 1e-10,
        "input is not Hermitian (residual {res:e} > 1e-10)"
    );
    let (vals, q) = complex_eigh(h);
    // Q · diag(exp(scale λ)) · Q†
    let mut scaled = q.clone();
    for (mut col, &lambda) in scaled.columns_mut().into_iter().zip(vals.iter()) {
        let f = (scale * lambda).exp();
        col.map_inplace(|v| *v *= f);
    }
    let qdag = q.mapv(|v| v.conj()).reversed_axes();
    scaled.dot(&qdag)
}

/// Full spectrum of a Hermitian matrix, eigenvalues ascending, eigenvectors
/// as the columns of the returned matrix.
pub fn eigh_ascending(h: &Array2<Complex64>) -> (Array1<f64>, Array2<Complex64>) {
    let dim = h.dim().0;
    assert!(dim <= MAX_EIG_DIM, "dimension {dim} exceeds the guard");
    let res = hermiticity_residual(h);
    assert!(
        res <= 1e-10,
        "input is not Hermitian (residual {res:e} > 1e-10)"
    );
    complex_eigh(h)
}

// The LAPACK driver sees the row-major buffer as its transpose, so its
// "lower triangle" holds our conjugated entries and the eigenvectors come
// back conjugated; the spectrum is unaffected. Conjugate them back.
fn complex_eigh(h: &Array2<Complex64>) -> (Array1<f64>, Array2<Complex64>) {
    let (vals, q) = h.eigh(UPLO::Lower).expect("eigendecomposition failed");
    (vals, q.mapv(|v| v.conj()))
}

/// Minimum-norm least-squares solution of `A x = b` for real symmetric `A`,
/// with eigenvalues below `rcond · max|λ|` truncated (pseudo-inverse
/// semantics).
pub fn lstsq_psd(a: &Array2<f64>, b: &[f64], rcond: f64) -> Array1<f64> {
    let (r, c) = a.dim();
    assert_eq!(r, c, "matrix must be square");
    assert_eq!(b.len(), r, "dimension mismatch between A and b");
    assert!(rcond > 0.0 && rcond < 1.0, "rcond must lie in (0, 1)");
    assert!(
        a.iter().all(|v| v.is_finite()) && b.iter().all(|v| v.is_finite()),
        "non-finite entries"
    );
    let mut sym_res = 0.0f64;
    for i in 0..r {
        for j in i..c {
            sym_res = sym_res.max((a[[i, j]] - a[[j, i]]).abs());
        }
    }
    assert!(
        sym_res <= 1e-10,
        "input is not symmetric (residual {sym_res:e} > 1e-10)"
    );

    let (vals, q) = a.eigh(UPLO::Lower).expect("eigendecomposition failed");
    let max_abs = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = rcond * max_abs;
    let b = Array1::from_vec(b.to_vec());
    // x = Σ_k (q_k·b / λ_k) q_k over eigenvalues above the cutoff
    let proj = q.t().dot(&b);
    let mut x = Array1::zeros(r);
    for (k, &lambda) in vals.iter().enumerate() {
        if lambda.abs() > cutoff && lambda != 0.0 {
            let w = proj[k] / lambda;
            x.scaled_add(w, &q.column(k));
        }
    }
    x
}

/// Central finite differences of a scalar function, one coordinate at a time.
pub fn finite_diff<F>(mut f: F, x: &[f64], eps: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    assert!(eps > 0.0, "eps must be positive");
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + eps;
        let up = f(&probe);
        probe[i] = x[i] - eps;
        let down = f(&probe);
        probe[i] = x[i];
        assert!(
            up.is_finite() && down.is_finite(),
            "non-finite function value in finite_diff"
        );
        grad.push((up - down) / (2.0 * eps));
    }
    grad
}
