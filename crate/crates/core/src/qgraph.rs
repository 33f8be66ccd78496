//! Quantum adjacency matrices, the axiom battery, the operator space `S_G`,
//! complete quantum graphs, and the bridge to classical graphs.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::generators::EdgeList;
use crate::linalg;
use crate::qspace::{self, FiniteQuantumSpace, GnsStructure};
use crate::C64;

/// A finite quantum space together with a quantum adjacency operator acting
/// on its GNS space in the canonical basis.
#[derive(Debug, Clone)]
pub struct QuantumGraph {
    space: FiniteQuantumSpace,
    structure: GnsStructure,
    adjacency: DMatrix<C64>,
}

impl QuantumGraph {
    /// Wraps a space and an adjacency operator; only dimensions are checked
    /// here, the axioms are verified by [`check_axioms`].
    pub fn new(space: FiniteQuantumSpace, adjacency: DMatrix<C64>) -> Result<Self> {
        let n = space.dim();
        if adjacency.nrows() != n || adjacency.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: adjacency.nrows(),
            });
        }
        let structure = qspace::gns(&space);
        Ok(QuantumGraph {
            space,
            structure,
            adjacency,
        })
    }

    pub fn space(&self) -> &FiniteQuantumSpace {
        &self.space
    }

    pub fn structure(&self) -> &GnsStructure {
        &self.structure
    }

    pub fn adjacency(&self) -> &DMatrix<C64> {
        &self.adjacency
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn delta_squared(&self) -> f64 {
        self.space.delta_squared()
    }
}

/// Outcome of a single residual check.
#[derive(Debug, Clone, Copy)]
pub struct Check {
    pub pass: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflexivityKind {
    Reflexive,
    Irreflexive,
    Neither,
}

/// Classification of `m(A ⊗ 𝟙)m*`: `δ²𝟙` (reflexive), `0` (irreflexive), or
/// neither; `residual` is the relative distance to the nearest class.
#[derive(Debug, Clone, Copy)]
pub struct ReflexivityStatus {
    pub kind: ReflexivityKind,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AxiomReport {
    pub selfadjoint: Check,
    pub eq1: Check,
    pub eq2: Check,
    pub reflexivity: ReflexivityStatus,
    pub tol: f64,
}

impl AxiomReport {
    /// True when the defining axioms hold; reflexivity is informational.
    pub fn all_pass(&self) -> bool {
        self.selfadjoint.pass && self.eq1.pass && self.eq2.pass
    }
}

/// Runs the axiom battery: GNS self-adjointness, the Schur idempotency
/// `A = δ⁻² m(A ⊗ A)m*`, the one-sided identity
/// `A = (id ⊗ η*m)(𝟙 ⊗ A ⊗ 𝟙)(m*η ⊗ id)`, and the reflexivity
/// classification. Residuals are Frobenius-relative.
pub fn check_axioms(g: &QuantumGraph, tol: f64) -> AxiomReport {
    let s = g.structure();
    let a = g.adjacency();
    let denom = f64::max(1.0, a.norm());

    let adjoint = linalg::gns_adjoint(a, s.gram()).expect("gram is positive definite");
    let selfadjoint = (a - adjoint).norm() / denom;

    let eq1 = (a - s.schur_product(a, a)).norm() / denom;
    let eq2 = (a - s.one_sided_transform(a)).norm() / denom;

    let n = g.dim();
    let d2 = g.delta_squared();
    let id = DMatrix::<C64>::identity(n, n);
    // m(A ⊗ 𝟙)m* = δ² · (A • 𝟙)
    let loops = s.schur_product(a, &id) * C64::new(d2, 0.0);
    let scale = d2 * (n as f64).sqrt();
    let r_irr = loops.norm() / scale;
    let r_refl = (&loops - &id * C64::new(d2, 0.0)).norm() / scale;
    let reflexivity = if r_irr < tol {
        ReflexivityStatus {
            kind: ReflexivityKind::Irreflexive,
            residual: r_irr,
        }
    } else if r_refl < tol {
        ReflexivityStatus {
            kind: ReflexivityKind::Reflexive,
            residual: r_refl,
        }
    } else {
        ReflexivityStatus {
            kind: ReflexivityKind::Neither,
            residual: r_irr.min(r_refl),
        }
    };

    AxiomReport {
        selfadjoint: Check {
            pass: selfadjoint < tol,
            residual: selfadjoint,
        },
        eq1: Check {
            pass: eq1 < tol,
            residual: eq1,
        },
        eq2: Check {
            pass: eq2 < tol,
            residual: eq2,
        },
        reflexivity,
        tol,
    }
}

/// An orthonormalized (Hilbert-Schmidt) basis of a self-adjoint subspace of
/// operators on the GNS space.
#[derive(Debug, Clone)]
pub struct OperatorSubspace {
    pub ambient_dim: usize,
    pub basis: Vec<DMatrix<C64>>,
    basis_vecs: Vec<DVector<C64>>,
}

impl OperatorSubspace {
    pub fn from_basis(ambient_dim: usize, basis: Vec<DMatrix<C64>>) -> Self {
        let basis_vecs = basis.iter().map(linalg::vec_row_major).collect();
        OperatorSubspace {
            ambient_dim,
            basis,
            basis_vecs,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn basis_vecs(&self) -> &[DVector<C64>] {
        &self.basis_vecs
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

/// The operator space `S_G`: the image of `P(X) = δ⁻² m(A ⊗ X)m*` over all
/// matrix units of `B(L²)`, orthonormalized with the rank cutoff
/// `tol · σ_max`. For a classical graph this is the span of the matrix units
/// indexed by edges.
pub fn operator_space(g: &QuantumGraph, tol: f64) -> Result<OperatorSubspace> {
    let s = g.structure();
    let n = g.dim();
    let mut images = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let mut unit = DMatrix::<C64>::zeros(n, n);
            unit[(u, v)] = C64::new(1.0, 0.0);
            images.push(linalg::vec_row_major(&s.schur_product(g.adjacency(), &unit)));
        }
    }
    let basis_vecs = linalg::orthonormalize(&images, tol);
    let basis: Vec<DMatrix<C64>> = basis_vecs
        .iter()
        .map(|v| linalg::mat_from_row_major(v, n, n))
        .collect();
    // P restricted to its image must act as the identity
    for b in &basis {
        let residual = linalg::rel_err(&s.schur_product(g.adjacency(), b), b);
        if residual > tol.max(1e-12) {
            return Err(Error::AxiomViolation {
                check: "P idempotency on its image",
                residual,
            });
        }
    }
    Ok(OperatorSubspace::from_basis(n, basis))
}

/// Membership test against the span, with residual
/// `||X - proj_S(X)|| / max(1, ||X||)`.
pub fn membership(s: &OperatorSubspace, x: &DMatrix<C64>) -> Result<Membership> {
    membership_with_tol(s, x, crate::DEFAULT_TOL)
}

pub fn membership_with_tol(s: &OperatorSubspace, x: &DMatrix<C64>, tol: f64) -> Result<Membership> {
    if x.nrows() != s.ambient_dim || x.ncols() != s.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim,
            found: x.nrows(),
        });
    }
    let residual = linalg::span_residual(s.basis_vecs(), &linalg::vec_row_major(x));
    Ok(Membership {
        member: residual < tol,
        residual,
    })
}

/// The complete quantum graph on a space: `A x = δ² ψ(x) 𝟙 - x`.
///
/// On a uniformly weighted classical space this is the all-ones matrix minus
/// the identity over the vertex basis; in general it is Schur-idempotent and
/// irreflexive.
pub fn complete_quantum_graph(space: &FiniteQuantumSpace) -> Result<QuantumGraph> {
    let structure = qspace::gns(space);
    let n = space.dim();
    let d2 = space.delta_squared();
    let mut a = DMatrix::<C64>::zeros(n, n);
    for col in 0..n {
        let psi = structure.co_unit()[col];
        for row in 0..n {
            a[(row, col)] = structure.unit_vec()[row] * psi * C64::new(d2, 0.0);
        }
        a[(col, col)] -= C64::new(1.0, 0.0);
    }
    QuantumGraph::new(space.clone(), a)
}

/// Lifts a classical graph: `n` one-dimensional blocks with uniform weights
/// (δ² = n) and the 0/1 adjacency matrix on the vertex basis.
pub fn classical_to_quantum(g: &EdgeList) -> Result<QuantumGraph> {
    let space = qspace::classical_space(g.n)?;
    let mut a = DMatrix::<C64>::zeros(g.n, g.n);
    for &(u, v) in &g.edges {
        a[(u, v)] = C64::new(1.0, 0.0);
        a[(v, u)] = C64::new(1.0, 0.0);
    }
    QuantumGraph::new(space, a)
}

/// Recovers the edge list of a commutative quantum graph whose adjacency is
/// a symmetric 0/1 matrix with zero diagonal; anything else is rejected.
pub fn quantum_to_classical(g: &QuantumGraph, tol: f64) -> Result<EdgeList> {
    if !g.space().is_commutative() {
        return Err(Error::NotClassical {
            reason: "space has a matrix block of size > 1".into(),
        });
    }
    let n = g.dim();
    let a = g.adjacency();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let entry = a[(u, v)];
            let rounded = entry.re.round();
            if entry.im.abs() > tol || (entry.re - rounded).abs() > tol {
                return Err(Error::NotClassical {
                    reason: format!("entry ({u}, {v}) = {entry} is not 0/1"),
                });
            }
            if rounded != 0.0 && rounded != 1.0 {
                return Err(Error::NotClassical {
                    reason: format!("entry ({u}, {v}) = {entry} is not 0/1"),
                });
            }
            if (a[(u, v)] - a[(v, u)]).norm() > tol {
                return Err(Error::NotClassical {
                    reason: format!("adjacency not symmetric at ({u}, {v})"),
                });
            }
            if u == v && rounded != 0.0 {
                return Err(Error::NotClassical {
                    reason: format!("nonzero diagonal at vertex {u}"),
                });
            }
            if u < v && rounded == 1.0 {
                edges.push((u, v));
            }
        }
    }
    EdgeList::new(n, edges)
}

/// True when the graph is a lifted classical graph.
pub fn is_classical(g: &QuantumGraph, tol: f64) -> bool {
    quantum_to_classical(g, tol).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::qspace::{build_space, tracial_space};
    use crate::DEFAULT_TOL;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pseudo_random_matrix(n: usize, seed: u64) -> DMatrix<C64> {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(7);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        DMatrix::from_fn(n, n, |_, _| C64::new(next(), next()))
    }

    /// Independent rank oracle: complex Gaussian elimination with partial
    /// pivoting over the raw image vectors.
    #[allow(clippy::needless_range_loop)]
    fn oracle_rank(vectors: &[DVector<C64>], cutoff_ratio: f64) -> usize {
        if vectors.is_empty() {
            return 0;
        }
        let rows = vectors.len();
        let cols = vectors[0].len();
        let mut m: Vec<Vec<C64>> = vectors.iter().map(|v| v.iter().copied().collect()).collect();
        let scale = m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        if scale == 0.0 {
            return 0;
        }
        let cutoff = cutoff_ratio * scale;
        let mut rank = 0;
        for col in 0..cols {
            let Some((pivot_row, pivot)) = (rank..rows)
                .map(|r| (r, m[r][col]))
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            else {
                break;
            };
            if pivot.norm() <= cutoff {
                continue;
            }
            m.swap(rank, pivot_row);
            for r in 0..rows {
                if r != rank {
                    let f = m[r][col] / pivot;
                    for k in 0..cols {
                        let sub = m[rank][k] * f;
                        m[r][k] -= sub;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    #[test]
    fn zero_adjacency_passes_axioms_and_is_irreflexive() {
        let space = tracial_space(&[2]).unwrap();
        let g = QuantumGraph::new(space, DMatrix::zeros(4, 4)).unwrap();
        let report = check_axioms(&g, DEFAULT_TOL);
        assert!(report.all_pass());
        assert_eq!(report.reflexivity.kind, ReflexivityKind::Irreflexive);
    }

    #[test]
    fn classical_cycle_passes_axioms() {
        let g = classical_to_quantum(&generators::cycle_graph(5)).unwrap();
        let report = check_axioms(&g, DEFAULT_TOL);
        assert!(report.all_pass());
        assert_eq!(report.reflexivity.kind, ReflexivityKind::Irreflexive);
    }

    #[test]
    fn identity_adjacency_is_a_reflexive_quantum_graph() {
        let space = tracial_space(&[1, 2]).unwrap();
        let n = space.dim();
        let g = QuantumGraph::new(space, DMatrix::identity(n, n)).unwrap();
        let report = check_axioms(&g, DEFAULT_TOL);
        assert!(report.all_pass());
        assert_eq!(report.reflexivity.kind, ReflexivityKind::Reflexive);
    }

    #[test]
    fn mixed_loops_are_neither_reflexive_nor_irreflexive() {
        // one looped vertex, one bare vertex
        let space = qspace::classical_space(2).unwrap();
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        let g = QuantumGraph::new(space, a).unwrap();
        let report = check_axioms(&g, DEFAULT_TOL);
        assert!(report.all_pass());
        assert_eq!(report.reflexivity.kind, ReflexivityKind::Neither);
        assert!(report.reflexivity.residual > DEFAULT_TOL);
    }

    #[test]
    fn k2_lifts_to_the_swap_adjacency() {
        let g = classical_to_quantum(&generators::complete_graph(2)).unwrap();
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        assert!(linalg::rel_err(g.adjacency(), &expected) < 1e-15);
        assert!((g.delta_squared() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn schur_product_matches_dense_kron_route() {
        for space in [
            tracial_space(&[2]).unwrap(),
            build_space(&[1, 1, 1], &vec![vec![1.0 / 3.0]; 3], DEFAULT_TOL).unwrap(),
            tracial_space(&[1, 2]).unwrap(),
        ] {
            let s = qspace::gns(&space);
            let n = space.dim();
            let a = pseudo_random_matrix(n, 5);
            let x = pseudo_random_matrix(n, 11);
            let fast = s.schur_product(&a, &x);
            let dense = s.mult() * a.kronecker(&x) * s.comult()
                / c(space.delta_squared(), 0.0);
            assert!(linalg::rel_err(&fast, &dense) < 1e-12);
        }
    }

    #[test]
    fn one_sided_transform_matches_dense_kron_route() {
        for space in [
            tracial_space(&[2]).unwrap(),
            build_space(&[1, 1], &[vec![0.5], vec![0.5]], DEFAULT_TOL).unwrap(),
        ] {
            let s = qspace::gns(&space);
            let n = space.dim();
            let a = pseudo_random_matrix(n, 3);
            let id = DMatrix::<C64>::identity(n, n);
            // (id ⊗ η*m)(𝟙 ⊗ A ⊗ 𝟙)(m*η ⊗ id), all legs dense
            let counit_m = {
                let mut row = DMatrix::<C64>::zeros(1, n * n);
                for pair in 0..n * n {
                    let mut acc = c(0.0, 0.0);
                    for r in 0..n {
                        acc += s.co_unit()[r] * s.mult()[(r, pair)];
                    }
                    row[(0, pair)] = acc;
                }
                row
            };
            let comult_unit = s.comult() * s.unit_vec();
            let comult_unit = DMatrix::from_fn(n * n, 1, |i, _| comult_unit[i]);
            let left = id.kronecker(&counit_m); // N × N³
            let middle = id.kronecker(&a).kronecker(&id); // N³ × N³
            let right = comult_unit.kronecker(&id); // N³ × N
            let dense = left * middle * right;
            assert!(linalg::rel_err(&s.one_sided_transform(&a), &dense) < 1e-12);
        }
    }

    #[test]
    fn operator_space_of_classical_graph_is_the_edge_span() {
        for el in [generators::cycle_graph(5), generators::complete_graph(3)] {
            let g = classical_to_quantum(&el).unwrap();
            let s = operator_space(&g, DEFAULT_TOL).unwrap();
            assert_eq!(s.dim(), 2 * el.edges.len());
            let n = g.dim();
            for &(u, v) in &el.edges {
                let mut x = DMatrix::<C64>::zeros(n, n);
                x[(u, v)] = c(1.0, 0.0);
                assert!(membership(&s, &x).unwrap().member);
            }
            let mut diag = DMatrix::<C64>::zeros(n, n);
            diag[(0, 0)] = c(1.0, 0.0);
            assert!(!membership(&s, &diag).unwrap().member);
        }
    }

    #[test]
    fn operator_space_of_zero_adjacency_is_trivial() {
        let space = tracial_space(&[2]).unwrap();
        let g = QuantumGraph::new(space, DMatrix::zeros(4, 4)).unwrap();
        let s = operator_space(&g, DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 0);
        let zero = DMatrix::<C64>::zeros(4, 4);
        let m = membership(&s, &zero).unwrap();
        assert!(m.member);
        assert_eq!(m.residual, 0.0);
    }

    #[test]
    fn complete_quantum_graph_on_five_points_has_rank_twenty_image() {
        let space = qspace::classical_space(5).unwrap();
        let g = complete_quantum_graph(&space).unwrap();
        let s = operator_space(&g, DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 20);
        // independent oracle: Gaussian-elimination rank of the raw images
        let structure = g.structure();
        let mut images = Vec::new();
        for u in 0..5 {
            for v in 0..5 {
                let mut unit = DMatrix::<C64>::zeros(5, 5);
                unit[(u, v)] = c(1.0, 0.0);
                images.push(linalg::vec_row_major(
                    &structure.schur_product(g.adjacency(), &unit),
                ));
            }
        }
        assert_eq!(oracle_rank(&images, 1e-6), 20);
    }

    #[test]
    fn complete_quantum_graph_matches_all_ones_minus_identity_classically() {
        let space = qspace::classical_space(4).unwrap();
        let g = complete_quantum_graph(&space).unwrap();
        let expected = DMatrix::from_fn(4, 4, |i, j| if i == j { c(0.0, 0.0) } else { c(1.0, 0.0) });
        assert!(linalg::rel_err(g.adjacency(), &expected) < 1e-12);
    }

    #[test]
    fn complete_quantum_graph_on_tracial_mat2_passes_axioms() {
        let space = tracial_space(&[2]).unwrap();
        let g = complete_quantum_graph(&space).unwrap();
        let report = check_axioms(&g, DEFAULT_TOL);
        assert!(report.all_pass());
        assert_eq!(report.reflexivity.kind, ReflexivityKind::Irreflexive);
    }

    #[test]
    fn complete_quantum_graph_on_one_point_is_zero() {
        let space = qspace::classical_space(1).unwrap();
        let g = complete_quantum_graph(&space).unwrap();
        assert!(g.adjacency().norm() < 1e-15);
    }

    #[test]
    fn quantum_to_classical_round_trips() {
        let c5 = generators::cycle_graph(5);
        let g = classical_to_quantum(&c5).unwrap();
        assert_eq!(quantum_to_classical(&g, DEFAULT_TOL).unwrap(), c5);

        let space = qspace::classical_space(3).unwrap();
        let complete = complete_quantum_graph(&space).unwrap();
        assert_eq!(
            quantum_to_classical(&complete, DEFAULT_TOL).unwrap(),
            generators::complete_graph(3)
        );

        let quantum = complete_quantum_graph(&tracial_space(&[2]).unwrap()).unwrap();
        assert!(matches!(
            quantum_to_classical(&quantum, DEFAULT_TOL),
            Err(Error::NotClassical { .. })
        ));
    }

    #[test]
    fn projection_is_idempotent_on_matrix_units() {
        let g = classical_to_quantum(&generators::cycle_graph(4)).unwrap();
        let s = g.structure();
        let n = g.dim();
        for u in 0..n {
            for v in 0..n {
                let mut unit = DMatrix::<C64>::zeros(n, n);
                unit[(u, v)] = c(1.0, 0.0);
                let once = s.schur_product(g.adjacency(), &unit);
                let twice = s.schur_product(g.adjacency(), &once);
                assert!((&twice - &once).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_commutes_with_right_multiplications() {
        // P(XT) = P(X)T and P(TX) = TP(X) for T in the commutant
        let space = tracial_space(&[2]).unwrap();
        let g = complete_quantum_graph(&space).unwrap();
        let s = g.structure();
        let x = pseudo_random_matrix(g.dim(), 23);
        for t in s.right_regular() {
            let a = g.adjacency();
            assert!(
                linalg::rel_err(&s.schur_product(a, &(&x * &t)), &(s.schur_product(a, &x) * &t))
                    < 1e-10
            );
            assert!(
                linalg::rel_err(&s.schur_product(a, &(&t * &x)), &(&t * s.schur_product(a, &x)))
                    < 1e-10
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn projection_preserves_gns_adjoints(seed in 0u64..1000) {
            let space = tracial_space(&[2]).unwrap();
            let g = complete_quantum_graph(&space).unwrap();
            let s = g.structure();
            let x = pseudo_random_matrix(g.dim(), seed);
            let px = s.schur_product(g.adjacency(), &x);
            let x_star = linalg::gns_adjoint(&x, s.gram()).unwrap();
            let px_star = linalg::gns_adjoint(&px, s.gram()).unwrap();
            let p_of_x_star = s.schur_product(g.adjacency(), &x_star);
            prop_assert!(linalg::rel_err(&p_of_x_star, &px_star) < 1e-9);
        }
    }
}
