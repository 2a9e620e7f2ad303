//! Small dense helpers shared by the phase-space modules.
//!
//! Everything here works on `DMatrix<f64>`; dimensions in this crate are
//! desk-scale (phase spaces of dimension 2 to 16), so clarity wins over
//! blocked algorithms.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{shape_mismatch, Result};

pub type Mat = DMatrix<f64>;

/// Default relative tolerance used when callers do not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `residual <= tol * max(1, scale)`.
#[inline]
pub fn within(residual: f64, scale: f64, tol: f64) -> bool {
    residual <= tol * scale.max(1.0)
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

pub fn skew_part(m: &Mat) -> Mat {
    (m - m.transpose()) * 0.5
}

/// Frobenius norm of `m - mᵀ`.
pub fn asymmetry(m: &Mat) -> f64 {
    (m - m.transpose()).norm()
}

/// Frobenius norm of `m + mᵀ`.
pub fn skewness_defect(m: &Mat) -> f64 {
    (m + m.transpose()).norm()
}

pub fn ensure_square(m: &Mat, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(shape_mismatch(
            format!("square {what}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m.nrows())
}

pub fn ensure_dim(m: &Mat, dim: usize, what: &str) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(shape_mismatch(
            format!("{dim}x{dim} {what}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted ascending
/// (columns of the returned matrix follow the same order).
pub fn sym_eigen_sorted(m: &Mat) -> (Vec<f64>, Mat) {
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Mat::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_sym_eigenvalue(m: &Mat) -> f64 {
    sym_eigen_sorted(m).0.first().copied().unwrap_or(0.0)
}

/// Applies `f` to the spectrum of a symmetric matrix: `V f(D) Vᵀ`.
pub fn sym_function(m: &Mat, f: impl Fn(f64) -> f64) -> Mat {
    let (values, vectors) = sym_eigen_sorted(m);
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let fv = f(v);
        scaled.column_mut(j).scale_mut(fv);
    }
    symmetrize(&(scaled * vectors.transpose()))
}

/// Eigenvalues (ascending) of the Hermitian matrix `sym + i·skew`.
///
/// Computed from the real symmetric embedding `[[X, −Y], [Y, X]]`, whose
/// spectrum is that of `X + iY` with every eigenvalue doubled.
pub fn hermitian_eigenvalues(sym: &Mat, skew: &Mat) -> Vec<f64> {
    let n = sym.nrows();
    let x = symmetrize(sym);
    let y = skew_part(skew);
    let mut big = Mat::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(&x);
    big.view_mut((n, n), (n, n)).copy_from(&x);
    big.view_mut((0, n), (n, n)).copy_from(&(-&y));
    big.view_mut((n, 0), (n, n)).copy_from(&y);
    let (values, _) = sym_eigen_sorted(&big);
    // Consecutive entries are the doubled copies; average each pair.
    values
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect()
}

pub fn to_complex(re: &Mat, im: &Mat) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        Complex::new(re[(i, j)], im[(i, j)])
    })
}

/// Determinant of `re + i·im`.
pub fn complex_det(re: &Mat, im: &Mat) -> Complex<f64> {
    to_complex(re, im).determinant()
}

/// Block diagonal matrix from two square blocks.
pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = Mat::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(a);
    out.view_mut((na, na), (nb, nb)).copy_from(b);
    out
}

/// `[[a, b], [c, d]]` from four equally sized square blocks.
pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let n = a.nrows();
    let mut out = Mat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

/// Distance of `m` from the orthogonal group, `‖mᵀm − I‖_F`.
pub fn orthogonality_defect(m: &Mat) -> f64 {
    (m.transpose() * m - Mat::identity(m.ncols(), m.ncols())).norm()
}
