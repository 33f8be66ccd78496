//! Finite quantum spaces with faithful δ-form states.
//!
//! A space is a direct sum of full matrix blocks `⊕_b Mat_{n_b}` together
//! with a faithful state given by positive diagonal density weights per
//! block. The GNS construction turns the algebra into a Hilbert space and
//! materializes the multiplication `m`, its adjoint `m*`, the unit `η` and
//! the state `η*` as explicit matrices over the canonical basis:
//! blocks in declaration order, matrix units row-major within a block.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::C64;

/// A direct sum of matrix blocks with a faithful δ-form state.
///
/// The state is `ψ(x) = Σ_b tr(Q_b x_b)` with `Q_b = diag(state_weights[b])`.
/// Every faithful state is unitarily equivalent to one with diagonal density,
/// so restricting to diagonal weights fixes a canonical form without loss.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteQuantumSpace {
    blocks: Vec<usize>,
    state_weights: Vec<Vec<f64>>,
    delta_squared: f64,
}

impl FiniteQuantumSpace {
    /// Block sizes `n_1, ..., n_B`.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Per-block diagonal density weights.
    pub fn state_weights(&self) -> &[Vec<f64>] {
        &self.state_weights
    }

    /// δ² of the δ-form condition `m m* = δ² id`.
    pub fn delta_squared(&self) -> f64 {
        self.delta_squared
    }

    /// Vector-space dimension of the GNS space, `Σ_b n_b²`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// True when all blocks have size one (the algebra is commutative).
    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|&n| n == 1)
    }

    /// Offset of each block in the canonical basis.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &n in &self.blocks {
            offsets.push(acc);
            acc += n * n;
        }
        offsets
    }

    /// Canonical index of the matrix unit `e^b_{ij}`.
    pub fn basis_index(&self, block: usize, i: usize, j: usize) -> usize {
        self.block_offsets()[block] + i * self.blocks[block] + j
    }
}

/// Validates the state data and computes δ² from the global `m m*` check.
///
/// Errors with `NotAState` when the weights do not sum to one, `NotFaithful`
/// on a non-positive weight, and `NotDeltaForm` when `m m*` is not a scalar
/// multiple of the identity within `tol`.
pub fn build_space(
    blocks: &[usize],
    state_weights: &[Vec<f64>],
    tol: f64,
) -> Result<FiniteQuantumSpace> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    if state_weights.len() != blocks.len() {
        return Err(Error::DimensionMismatch {
            expected: blocks.len(),
            found: state_weights.len(),
        });
    }
    for (b, (&n, q)) in blocks.iter().zip(state_weights).enumerate() {
        if q.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: q.len(),
            });
        }
        for (i, &w) in q.iter().enumerate() {
            if w <= 0.0 || !w.is_finite() {
                return Err(Error::NotFaithful {
                    block: b,
                    index: i,
                    weight: w,
                });
            }
        }
    }
    let sum: f64 = state_weights.iter().flatten().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::NotAState { sum });
    }

    let mut space = FiniteQuantumSpace {
        blocks: blocks.to_vec(),
        state_weights: state_weights.to_vec(),
        delta_squared: f64::NAN,
    };
    // the δ-form test goes through the full m m* matrix rather than any
    // per-block shortcut
    let structure = gns_unchecked(&space);
    let mm = structure.mult() * structure.comult();
    let n = mm.nrows();
    let scale = (0..n).map(|i| mm[(i, i)].re).sum::<f64>() / n as f64;
    let residual = linalg::rel_err_scaled_id(&mm, scale);
    if scale <= 0.0 || residual > tol {
        return Err(Error::NotDeltaForm { residual });
    }
    space.delta_squared = scale;
    Ok(space)
}

/// The GNS-space operators of a space, all over the canonical basis.
#[derive(Debug, Clone)]
pub struct GnsStructure {
    dim: usize,
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    delta_squared: f64,
    gram_diag: Vec<f64>,
    gram: DMatrix<C64>,
    mult: DMatrix<C64>,
    comult: DMatrix<C64>,
    unit_vec: DVector<C64>,
    co_unit: DVector<C64>,
    /// Per basis column `j` of `m*`: terms `(α, β, coeff)` with
    /// `m*(e_j) = Σ coeff · e_α ⊗ e_β`.
    comult_terms: Vec<Vec<(usize, usize, f64)>>,
    left_regular: Vec<DMatrix<C64>>,
}

/// Materializes the GNS structure of a validated space.
pub fn gns(space: &FiniteQuantumSpace) -> GnsStructure {
    let mut s = gns_unchecked(space);
    s.delta_squared = space.delta_squared();
    s
}

fn gns_unchecked(space: &FiniteQuantumSpace) -> GnsStructure {
    let n = space.dim();
    let offsets = space.block_offsets();

    // <e^b_ij, e^c_kl> = δ_bc δ_ik δ_jl q_b[j]: the Gram matrix is diagonal
    let mut gram_diag = vec![0.0; n];
    for (b, &nb) in space.blocks.iter().enumerate() {
        for i in 0..nb {
            for j in 0..nb {
                gram_diag[offsets[b] + i * nb + j] = space.state_weights[b][j];
            }
        }
    }
    let gram = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(gram_diag[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });

    // m(e^b_ij ⊗ e^c_kl) = δ_bc δ_jk e^b_il
    let mut mult = DMatrix::<C64>::zeros(n, n * n);
    for (b, &nb) in space.blocks.iter().enumerate() {
        let o = offsets[b];
        for i in 0..nb {
            for j in 0..nb {
                for k in 0..nb {
                    let col = (o + i * nb + j) * n + (o + j * nb + k);
                    mult[(o + i * nb + k, col)] = C64::new(1.0, 0.0);
                }
            }
        }
    }

    // m* = (G ⊗ G)^{-1} m^H G, entrywise because all Grams are diagonal
    let mut comult = DMatrix::<C64>::zeros(n * n, n);
    let mut comult_terms: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n];
    for col in 0..n * n {
        let (alpha, beta) = (col / n, col % n);
        for row in 0..n {
            let v = mult[(row, col)];
            if v != C64::new(0.0, 0.0) {
                let coeff = v.re * gram_diag[row] / (gram_diag[alpha] * gram_diag[beta]);
                comult[(col, row)] = C64::new(coeff, 0.0);
                comult_terms[row].push((alpha, beta, coeff));
            }
        }
    }

    let mut unit_vec = DVector::<C64>::zeros(n);
    let mut co_unit = DVector::<C64>::zeros(n);
    for (b, &nb) in space.blocks.iter().enumerate() {
        for i in 0..nb {
            unit_vec[offsets[b] + i * nb + i] = C64::new(1.0, 0.0);
            co_unit[offsets[b] + i * nb + i] = C64::new(space.state_weights[b][i], 0.0);
        }
    }

    // left multiplication by e_α, column β = coefficients of e_α e_β
    let mut left_regular = Vec::with_capacity(n);
    for alpha in 0..n {
        let mut l = DMatrix::<C64>::zeros(n, n);
        for beta in 0..n {
            for row in 0..n {
                l[(row, beta)] = mult[(row, alpha * n + beta)];
            }
        }
        left_regular.push(l);
    }

    GnsStructure {
        dim: n,
        blocks: space.blocks.clone(),
        offsets,
        delta_squared: f64::NAN,
        gram_diag,
        gram,
        mult,
        comult,
        unit_vec,
        co_unit,
        comult_terms,
        left_regular,
    }
}

impl GnsStructure {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn delta_squared(&self) -> f64 {
        self.delta_squared
    }

    /// Gram matrix of GNS inner products over the canonical basis.
    pub fn gram(&self) -> &DMatrix<C64> {
        &self.gram
    }

    /// Multiplication `m: L² ⊗ L² → L²` as an `N × N²` matrix; tensor pairs
    /// are indexed row-major, `(α, β) ↦ α·N + β`.
    pub fn mult(&self) -> &DMatrix<C64> {
        &self.mult
    }

    /// `m*`, the GNS adjoint of `m`, as an `N² × N` matrix.
    pub fn comult(&self) -> &DMatrix<C64> {
        &self.comult
    }

    /// Coefficients of the unit `𝟙`.
    pub fn unit_vec(&self) -> &DVector<C64> {
        &self.unit_vec
    }

    /// `η*` as a functional: `η*(x) = ψ(x) = Σ_α co_unit[α] x_α`.
    pub fn co_unit(&self) -> &DVector<C64> {
        &self.co_unit
    }

    /// Left-multiplication operators of the canonical basis elements.
    pub fn left_regular(&self) -> &[DMatrix<C64>] {
        &self.left_regular
    }

    /// Right-multiplication operators; these span the commutant of the
    /// left-regular algebra.
    pub fn right_regular(&self) -> Vec<DMatrix<C64>> {
        let n = self.dim;
        (0..n)
            .map(|alpha| {
                let mut r = DMatrix::<C64>::zeros(n, n);
                for beta in 0..n {
                    for row in 0..n {
                        r[(row, beta)] = self.mult[(row, beta * n + alpha)];
                    }
                }
                r
            })
            .collect()
    }

    /// Left-multiplication operator of an arbitrary algebra element.
    pub fn left_mult_operator(&self, x: &DVector<C64>) -> DMatrix<C64> {
        let mut op = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (alpha, l) in self.left_regular.iter().enumerate() {
            if x[alpha] != C64::new(0.0, 0.0) {
                op += l * x[alpha];
            }
        }
        op
    }

    /// Algebra product of two coefficient vectors, `m(x ⊗ y)`.
    pub fn multiply(&self, x: &DVector<C64>, y: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::<C64>::zeros(self.dim);
        for (b, &nb) in self.blocks.iter().enumerate() {
            let o = self.offsets[b];
            for i in 0..nb {
                for k in 0..nb {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..nb {
                        acc += x[o + i * nb + j] * y[o + j * nb + k];
                    }
                    out[o + i * nb + k] = acc;
                }
            }
        }
        out
    }

    /// State evaluation `ψ(x)`.
    pub fn state(&self, x: &DVector<C64>) -> C64 {
        (0..self.dim).map(|a| self.co_unit[a] * x[a]).sum()
    }

    /// GNS inner product `<x, y> = ψ(x* y)`, conjugate-linear in `x`.
    pub fn inner(&self, x: &DVector<C64>, y: &DVector<C64>) -> C64 {
        (0..self.dim)
            .map(|a| x[a].conj() * y[a] * C64::new(self.gram_diag[a], 0.0))
            .sum()
    }

    /// GNS norm of a vector.
    pub fn norm(&self, x: &DVector<C64>) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }

    /// The quantum Schur product `δ⁻² m(a ⊗ x) m*`, evaluated column by
    /// column through the sparse support of `m*`.
    pub fn schur_product(&self, a: &DMatrix<C64>, x: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.dim;
        assert_eq!(a.shape(), (n, n));
        assert_eq!(x.shape(), (n, n));
        let mut out = DMatrix::<C64>::zeros(n, n);
        for j in 0..n {
            let mut col = DVector::<C64>::zeros(n);
            for &(alpha, beta, coeff) in &self.comult_terms[j] {
                let ua = DVector::from(a.column(alpha).into_owned());
                let xb = DVector::from(x.column(beta).into_owned());
                col += self.multiply(&ua, &xb) * C64::new(coeff, 0.0);
            }
            out.set_column(j, &(col / C64::new(self.delta_squared_or_one(), 0.0)));
        }
        out
    }

    fn delta_squared_or_one(&self) -> f64 {
        if self.delta_squared.is_finite() {
            self.delta_squared
        } else {
            1.0
        }
    }

    /// The transform of axiom (2): `(id ⊗ η*m)(𝟙 ⊗ a ⊗ 𝟙)(m*η ⊗ id)`,
    /// contracted to a product of three `N × N` matrices.
    pub fn one_sided_transform(&self, a: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.dim;
        let m1_vec = &self.comult * &self.unit_vec;
        let m1 = linalg::mat_from_row_major(&DVector::from(m1_vec), n, n);
        let w_vec = self.mult.transpose() * &self.co_unit;
        let w = linalg::mat_from_row_major(&DVector::from(w_vec), n, n);
        m1 * (a.transpose() * w)
    }
}

/// Adjoint of an operator on the GNS space with respect to the GNS inner
/// product: `G⁻¹ op^H G`.
pub fn adjoint_in_gns(op: &DMatrix<C64>, structure: &GnsStructure) -> Result<DMatrix<C64>> {
    if op.nrows() != structure.dim() || op.ncols() != structure.dim() {
        return Err(Error::DimensionMismatch {
            expected: structure.dim(),
            found: op.nrows(),
        });
    }
    linalg::gns_adjoint(op, structure.gram())
}

/// Uniformly weighted commutative space on `n` points (δ² = n).
pub fn classical_space(n: usize) -> Result<FiniteQuantumSpace> {
    build_space(
        &vec![1; n],
        &vec![vec![1.0 / n as f64]; n],
        crate::DEFAULT_TOL,
    )
}

/// The tracial δ-form on `⊕_b Mat_{n_b}`: weights `q_b[i] = n_b / Σ_c n_c²`,
/// giving δ² = Σ_c n_c².
pub fn tracial_space(blocks: &[usize]) -> Result<FiniteQuantumSpace> {
    let total: usize = blocks.iter().map(|n| n * n).sum();
    let weights: Vec<Vec<f64>> = blocks
        .iter()
        .map(|&n| vec![n as f64 / total as f64; n])
        .collect();
    build_space(blocks, &weights, crate::DEFAULT_TOL)
}
