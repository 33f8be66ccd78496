//! Dense complex matrix helpers: GNS-weighted adjoints, Hilbert-Schmidt
//! pairings, rank-revealing orthonormalization.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Frobenius-relative error `||a - b|| / max(1, ||b||)`.
pub fn rel_err(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm() / f64::max(1.0, b.norm())
}

/// Relative deviation of `m` from `scale * id`.
pub fn rel_err_scaled_id(m: &DMatrix<C64>, scale: f64) -> f64 {
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    (m - id * C64::new(scale, 0.0)).norm() / f64::max(1.0, scale * (m.nrows() as f64).sqrt())
}

/// Hilbert-Schmidt inner product `tr(a* b)`, conjugate-linear in `a`.
pub fn hs_dot(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    a.dotc(b)
}

/// Row-major vectorization; pairs `(i, j)` map to index `i * ncols + j`,
/// matching the tensor-leg convention used for `m` and `m*`.
pub fn vec_row_major(m: &DMatrix<C64>) -> DVector<C64> {
    let (r, c) = m.shape();
    DVector::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

pub fn mat_from_row_major(v: &DVector<C64>, nrows: usize, ncols: usize) -> DMatrix<C64> {
    assert_eq!(v.len(), nrows * ncols);
    DMatrix::from_fn(nrows, ncols, |i, j| v[i * ncols + j])
}

/// Adjoint of `op` with respect to the weighted inner product `<x, y> = x* G y`.
///
/// Returns `G^{-1} op^H G`; involutive, and the identity maps to itself.
pub fn gns_adjoint(op: &DMatrix<C64>, gram: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    gns_adjoint_rect(op, gram, gram)
}

/// Adjoint of a map between two weighted inner-product spaces.
///
/// `j` maps the domain (Gram `gram_dom`) into the codomain (Gram `gram_cod`);
/// the result is `gram_dom^{-1} j^H gram_cod`, mapping codomain to domain.
pub fn gns_adjoint_rect(
    j: &DMatrix<C64>,
    gram_dom: &DMatrix<C64>,
    gram_cod: &DMatrix<C64>,
) -> Result<DMatrix<C64>> {
    // a positive-definite Hermitian matrix has a strictly positive diagonal;
    // nalgebra's complex Cholesky does not reject indefinite inputs itself
    if gram_dom
        .diagonal()
        .iter()
        .any(|z| z.re <= 0.0 || !z.re.is_finite() || z.im.abs() > 1e-14 * z.re.abs().max(1.0))
    {
        return Err(Error::SingularGram);
    }
    let chol = nalgebra::linalg::Cholesky::new(gram_dom.clone()).ok_or(Error::SingularGram)?;
    let rhs = j.adjoint() * gram_cod;
    let out = chol.solve(&rhs);
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularGram);
    }
    Ok(out)
}

/// Largest singular value of the collection, via power iteration on `M M^H`.
pub fn sigma_max(vectors: &[DVector<C64>]) -> f64 {
    let Some(start) = vectors
        .iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .filter(|v| v.norm() > 0.0)
    else {
        return 0.0;
    };
    let mut u = start.normalize();
    let mut lambda = 0.0;
    for _ in 0..100 {
        let mut w = DVector::<C64>::zeros(u.len());
        for col in vectors {
            w += col * col.dotc(&u);
        }
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        lambda = n;
        u = w / C64::new(n, 0.0);
    }
    lambda.sqrt()
}

/// Rank-revealing orthonormalization: pivoted modified Gram-Schmidt with a
/// second orthogonalization sweep, discarding directions below
/// `tol * sigma_max` (the singular-value cutoff of the collection).
pub fn orthonormalize(vectors: &[DVector<C64>], tol: f64) -> Vec<DVector<C64>> {
    let cutoff = tol * sigma_max(vectors);
    let mut work: Vec<DVector<C64>> = vectors.to_vec();
    let mut basis: Vec<DVector<C64>> = Vec::new();
    while let Some((idx, norm)) = work
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
    {
        if norm <= cutoff || norm == 0.0 {
            break;
        }
        let mut v = work.swap_remove(idx);
        // residuals of MGS are already orthogonal to the basis; one extra
        // sweep restores orthogonality lost to rounding
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let n = v.norm();
        if n <= cutoff || n == 0.0 {
            continue;
        }
        let v = v / C64::new(n, 0.0);
        for w in work.iter_mut() {
            let c = v.dotc(w);
            *w -= &v * c;
        }
        basis.push(v);
    }
    basis
}

/// Orthogonal projection of `v` onto the span of an orthonormal `basis`.
pub fn project_onto(basis: &[DVector<C64>], v: &DVector<C64>) -> DVector<C64> {
    let mut p = DVector::<C64>::zeros(v.len());
    for b in basis {
        p += b * b.dotc(v);
    }
    p
}

/// Membership residual `||v - proj(v)|| / max(1, ||v||)` against a span.
pub fn span_residual(basis: &[DVector<C64>], v: &DVector<C64>) -> f64 {
    (v - project_onto(basis, v)).norm() / f64::max(1.0, v.norm())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let eig = nalgebra::linalg::SymmetricEigen::new(m.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Nearest positive-semidefinite matrix: symmetrize and clip negative
/// eigenvalues.
pub fn psd_project(m: &DMatrix<C64>) -> DMatrix<C64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut out = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k];
        if lam > 0.0 {
            let v = eig.eigenvectors.column(k);
            out += DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj() * C64::new(lam, 0.0));
        }
    }
    out
}
