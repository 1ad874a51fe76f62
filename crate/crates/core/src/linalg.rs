//! Dense complex linear algebra used throughout the crate.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMat {
    assert_eq!(data.len(), rows * cols);
    CMat::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn mat_pow(a: &CMat, k: usize) -> CMat {
    let mut out = identity(a.nrows());
    for _ in 0..k {
        out = &out * a;
    }
    out
}

/// Singular value decomposition with singular values sorted in decreasing order.
///
/// Both bases are complete: `u` is rows×rows and `v` is cols×cols, the thin
/// side extended by Gram-Schmidt. Only the min(rows, cols) singular values are
/// returned.
pub struct FullSvd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

pub fn svd_full(a: &CMat) -> Result<FullSvd> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(FullSvd {
            u: identity(m),
            singular_values: Vec::new(),
            v: identity(n),
        });
    }
    if m < n {
        let t = svd_full(&a.adjoint())?;
        return Ok(FullSvd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (w, v) = one_sided_jacobi(a)?;
    let norms: Vec<f64> = w.column_iter().map(|col| col.norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut u_thin = CMat::zeros(m, n);
    let mut v_sorted = CMat::zeros(n, n);
    let mut nonzero = 0;
    for (dst, &src) in order.iter().enumerate() {
        if norms[src] > 0.0 {
            u_thin.set_column(dst, &(w.column(src) / c(norms[src], 0.0)));
            nonzero += 1;
        }
        v_sorted.set_column(dst, &v.column(src));
    }
    Ok(FullSvd {
        u: orthonormal_completion(&u_thin.columns(0, nonzero).into_owned(), m),
        singular_values: order.iter().map(|&i| norms[i]).collect(),
        v: v_sorted,
    })
}

/// One-sided (Hestenes) Jacobi for m ≥ n: returns W = A·V with mutually
/// orthogonal columns and unitary V. Chosen over nalgebra's complex SVD,
/// whose vectors fail to reconstruct some inputs.
fn one_sided_jacobi(a: &CMat) -> Result<(CMat, CMat)> {
    const MAX_SWEEPS: usize = 60;
    let (m, n) = a.shape();
    let rel = m as f64 * f64::EPSILON;
    // pairs this small next to ‖A‖ are rounding noise
    let floor = f64::EPSILON * f64::EPSILON * a.norm_squared();
    let mut w = a.clone();
    let mut v = identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g <= floor || g <= rel * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = cs * t;
                for mat in [&mut w, &mut v] {
                    let col_p = mat.column(p).into_owned();
                    let col_q = mat.column(q) * e.conj();
                    mat.set_column(p, &(&col_p * c(cs, 0.0) - &col_q * c(sn, 0.0)));
                    mat.set_column(q, &(col_p * c(sn, 0.0) + col_q * c(cs, 0.0)));
                }
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NoConvergence("singular value decomposition"))
}

/// Extends orthonormal columns to an orthonormal basis of C^n.
pub fn orthonormal_completion(cols: &CMat, n: usize) -> CMat {
    let mut basis: Vec<CVec> = cols.column_iter().map(|c| c.into_owned()).collect();
    let mut e = 0;
    while basis.len() < n && e < n {
        let mut cand = CVec::zeros(n);
        cand[e] = ONE;
        for b in &basis {
            let proj = b.dotc(&cand);
            cand -= b * proj;
        }
        for b in &basis {
            let proj = b.dotc(&cand);
            cand -= b * proj;
        }
        let nrm = cand.norm();
        if nrm > 1e-8 {
            basis.push(cand / c(nrm, 0.0));
        }
        e += 1;
    }
    let mut out = CMat::zeros(n, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn rank_from_singular_values(sv: &[f64], rel_tol: f64) -> usize {
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

pub fn numerical_rank(a: &CMat, rel_tol: f64) -> Result<usize> {
    if a.is_empty() {
        return Ok(0);
    }
    let svd = svd_full(a)?;
    Ok(rank_from_singular_values(&svd.singular_values, rel_tol))
}

/// Orthonormal basis of { x : a x = 0 } for the given rank.
pub fn null_space_with_rank(a: &CMat, rank: usize) -> Result<CMat> {
    let n = a.ncols();
    let svd = svd_full(a)?;
    Ok(svd.v.columns(rank, n - rank).into_owned())
}

pub fn null_space(a: &CMat, rel_tol: f64) -> Result<CMat> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Ok(identity(n));
    }
    let svd = svd_full(a)?;
    let r = rank_from_singular_values(&svd.singular_values, rel_tol);
    Ok(svd.v.columns(r, n - r).into_owned())
}

/// Orthonormal basis of the column space.
pub fn range_basis(a: &CMat, rel_tol: f64) -> Result<CMat> {
    if a.ncols() == 0 {
        return Ok(CMat::zeros(a.nrows(), 0));
    }
    let svd = svd_full(a)?;
    let r = rank_from_singular_values(&svd.singular_values, rel_tol);
    Ok(svd.u.columns(0, r).into_owned())
}

/// Minimum-norm least-squares solution of `a x = b` with rank cut at `rel_tol`.
pub fn pinv_solve(a: &CMat, b: &CMat, rel_tol: f64) -> Result<CMat> {
    let (m, n) = a.shape();
    if b.nrows() != m {
        return Err(Error::DimensionMismatch {
            what: "least-squares right-hand side",
            expected: m,
            found: b.nrows(),
        });
    }
    if m == 0 || n == 0 {
        return Ok(CMat::zeros(n, b.ncols()));
    }
    let svd = svd_full(a)?;
    let r = rank_from_singular_values(&svd.singular_values, rel_tol);
    let mut x = CMat::zeros(n, b.ncols());
    for i in 0..r {
        let ui = svd.u.column(i);
        let vi = svd.v.column(i);
        let coef = ui.adjoint() * b / c(svd.singular_values[i], 0.0);
        x += vi * coef;
    }
    Ok(x)
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    a.clone()
        .try_inverse()
        .ok_or(Error::NoConvergence("matrix inversion (singular matrix)"))
}

pub fn determinant(a: &CMat) -> Complex64 {
    if a.nrows() == 0 {
        return ONE;
    }
    a.clone().lu().determinant()
}

/// Eigenvalues from a complex Schur decomposition.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, 10_000 * n)
        .ok_or(Error::NoConvergence("Schur decomposition"))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in decreasing order.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    let herm = (a + a.adjoint()) * c(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (order.iter().map(|&i| eig.eigenvalues[i]).collect(), vecs)
}

/// Adjugate of a constant square matrix by cofactors.
pub fn adjugate(a: &CMat) -> CMat {
    let n = a.nrows();
    if n == 1 {
        return CMat::from_element(1, 1, ONE);
    }
    let mut adj = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = a.clone().remove_row(i).remove_column(j);
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            // adj(A)_{ji} = (-1)^{i+j} det(minor_{ij})
            adj[(j, i)] = determinant(&minor) * sign;
        }
    }
    adj
}

/// Stacks matrices with equal column counts vertically.
pub fn vstack(blocks: &[CMat]) -> CMat {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    out
}

/// diag(Id_s, 0) of size d.
pub fn leading_projector(d: usize, s: usize) -> CMat {
    CMat::from_fn(d, d, |i, j| if i == j && i < s { ONE } else { ZERO })
}
