//! Rank-revealing complex linear algebra used for kernels, annihilators and
//! subspace comparisons. All routines work in the Euclidean inner product;
//! callers rescale for Haar weights.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Singular values below `RANK_CUTOFF * σ_max` count as zero.
pub const RANK_CUTOFF: f64 = 1e-10;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// Orthonormal basis of `{x : A x = 0}` for an `m × n` matrix.
pub fn nullspace(a: &CMatrix) -> Vec<CVector> {
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Pad to at least n rows so the SVD yields a full set of right singular vectors.
    let padded = if a.nrows() < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_CUTOFF * sigma_max;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max == 0.0 || s <= cutoff)
        .map(|(i, _)| v_t.row(i).transpose().map(|z| z.conj()))
        .collect()
}

/// Orthonormal basis of the span of `vectors` (all of length `n`).
pub fn orthonormal_span(vectors: &[CVector], n: usize) -> Vec<CVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let cols = CMatrix::from_columns(vectors);
    debug_assert_eq!(cols.nrows(), n);
    // Wide matrices: pad with zero columns so U has a full column set.
    let padded = if cols.ncols() < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (n, cols.ncols())).copy_from(&cols);
        p
    } else {
        cols
    };
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested U");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Vec::new();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > RANK_CUTOFF * sigma_max)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// `‖x − P x‖₂` where `P` projects onto the span of an orthonormal basis.
pub fn projection_residual(x: &CVector, basis: &[CVector]) -> f64 {
    let mut r = x.clone();
    for b in basis {
        let c = b.dotc(x);
        r -= b * c;
    }
    r.norm()
}

/// Distance between two subspaces given by orthonormal bases: the largest
/// projection residual of either basis onto the other, or `f64::INFINITY`
/// when the dimensions differ.
pub fn subspace_distance(a: &[CVector], b: &[CVector]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .map(|x| projection_residual(x, b))
        .chain(b.iter().map(|y| projection_residual(y, a)))
        .fold(0.0, f64::max)
}

/// Largest entry of `|G − I|` for the Gram matrix of `basis`.
pub fn gram_deviation(basis: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((x.dotc(y) - target).norm());
        }
    }
    worst
}
