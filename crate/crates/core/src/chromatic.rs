//! Quantum coloring certificates and exact chromatic numbers for the
//! commutative case.
//!
//! A quantum c-coloring of an irreflexive quantum graph is a partition of
//! unity `{P_a} ⊂ C(G) ⊗ Mat_d` with `P_a (X ⊗ 𝟙_d) P_a = 0` for every `X`
//! in the operator space `S_G`; `d = 1` recovers loc colorings. Exact values
//! are computed only for classical graphs, where the problem reduces to
//! proper vertex coloring; for noncommutative graphs only certificates are
//! checked. A finite von Neumann algebra that is a direct sum of matrix
//! blocks can be represented here by a block-diagonal `Mat_d`; this is not
//! enforced.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::generators::EdgeList;
use crate::linalg;
use crate::mycielski;
use crate::qgraph::{self, QuantumGraph, ReflexivityKind};
use crate::C64;

/// A family of projections claimed to be a (quantum) c-coloring.
#[derive(Debug, Clone)]
pub struct ColoringCertificate {
    /// Number of colors `c >= 1`.
    pub colors: usize,
    /// Dimension of the auxiliary factor `Mat_d`; `d = 1` is a loc certificate.
    pub aux_dim: usize,
    /// `c` matrices of size `(N·d) × (N·d)` acting on `L²(G) ⊗ ℂ^d`.
    pub projections: Vec<DMatrix<C64>>,
}

impl ColoringCertificate {
    /// Loc certificate of a classical proper coloring: diagonal 0/1
    /// projections per color class.
    pub fn from_classes(n: usize, coloring: &[usize]) -> Self {
        assert_eq!(coloring.len(), n);
        let colors = coloring.iter().copied().max().map_or(0, |m| m + 1);
        let projections = (0..colors)
            .map(|c| {
                DMatrix::from_fn(n, n, |i, j| {
                    if i == j && coloring[i] == c {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        ColoringCertificate {
            colors,
            aux_dim: 1,
            projections,
        }
    }

    /// Tensors the certificate with an identity auxiliary block, turning a
    /// `d`-certificate into a `d·k`-certificate with the same color classes.
    pub fn tensor_identity(&self, k: usize) -> Self {
        let id = DMatrix::<C64>::identity(k, k);
        ColoringCertificate {
            colors: self.colors,
            aux_dim: self.aux_dim * k,
            projections: self.projections.iter().map(|p| p.kronecker(&id)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ColoringReport {
    pub valid: bool,
    pub worst_residual: f64,
}

/// Checks the certificate invariants (self-adjoint idempotents summing to
/// the identity, membership in `C(G) ⊗ Mat_d`) and then the kill condition
/// `P_a (X ⊗ 𝟙_d) P_a = 0` over an orthonormal basis of `S_G`.
///
/// Idempotency is tested at `√tol` since residuals compound when squaring;
/// everything else at `tol`.
pub fn verify_coloring(
    g: &QuantumGraph,
    cert: &ColoringCertificate,
    tol: f64,
) -> Result<ColoringReport> {
    let reflexivity = qgraph::check_axioms(g, tol).reflexivity;
    if reflexivity.kind != ReflexivityKind::Irreflexive {
        return Err(Error::NotIrreflexive {
            residual: reflexivity.residual,
        });
    }
    let n = g.dim();
    let d = cert.aux_dim;
    if cert.colors == 0 || d == 0 || cert.projections.len() != cert.colors {
        return Err(Error::DimensionMismatch {
            expected: cert.colors.max(1),
            found: cert.projections.len(),
        });
    }
    let ext = n * d;
    for p in &cert.projections {
        if p.nrows() != ext || p.ncols() != ext {
            return Err(Error::DimensionMismatch {
                expected: ext,
                found: p.nrows(),
            });
        }
    }

    let id_d = DMatrix::<C64>::identity(d, d);
    let gram_ext = g.structure().gram().kronecker(&id_d);
    let mut worst = 0.0f64;
    let mut valid = true;
    let mut track = |residual: f64, bound: f64| {
        worst = worst.max(residual);
        if residual >= bound {
            valid = false;
        }
    };

    let sqrt_tol = tol.sqrt();
    for p in &cert.projections {
        let denom = f64::max(1.0, p.norm());
        let adj = linalg::gns_adjoint(p, &gram_ext)?;
        track((p - adj).norm() / denom, tol);
        track((p * p - p).norm() / denom, sqrt_tol);
    }

    let mut sum = DMatrix::<C64>::zeros(ext, ext);
    for p in &cert.projections {
        sum += p;
    }
    let id_ext = DMatrix::<C64>::identity(ext, ext);
    track((sum - &id_ext).norm() / (ext as f64).sqrt(), tol);

    let algebra_span = algebra_tensor_span(g, d, tol);
    for p in &cert.projections {
        track(
            linalg::span_residual(&algebra_span, &linalg::vec_row_major(p)),
            tol,
        );
    }

    let s = qgraph::operator_space(g, tol)?;
    for x in &s.basis {
        let x_ext = x.kronecker(&id_d);
        for p in &cert.projections {
            track((p * &x_ext * p).norm() / f64::max(1.0, x_ext.norm()), tol);
        }
    }

    Ok(ColoringReport {
        valid,
        worst_residual: worst,
    })
}

/// Orthonormal (Hilbert-Schmidt) basis of the span of `L_α ⊗ E_pq`, the
/// algebra `C(G) ⊗ Mat_d` acting on `L²(G) ⊗ ℂ^d`.
pub(crate) fn algebra_tensor_span(g: &QuantumGraph, d: usize, tol: f64) -> Vec<DVector<C64>> {
    let mut raw = Vec::new();
    for l in g.structure().left_regular() {
        for p in 0..d {
            for q in 0..d {
                let mut e = DMatrix::<C64>::zeros(d, d);
                e[(p, q)] = C64::new(1.0, 0.0);
                raw.push(linalg::vec_row_major(&l.kronecker(&e)));
            }
        }
    }
    linalg::orthonormalize(&raw, tol)
}

/// Exact chromatic number of a classical graph by DSATUR branch and bound
/// with a maximum-clique lower bound, plus a witnessing loc certificate.
pub fn chi_loc_exact(g: &QuantumGraph, tol: f64) -> Result<(usize, ColoringCertificate)> {
    let el = qgraph::quantum_to_classical(g, tol)?;
    let (chi, coloring) = chi_exact_edge_list(&el);
    Ok((chi, ColoringCertificate::from_classes(el.n, &coloring)))
}

/// DSATUR branch and bound on an edge list. Deterministic: saturation,
/// then degree, then lowest index select the branching vertex, and color
/// indices are forced to first-use order.
pub fn chi_exact_edge_list(g: &EdgeList) -> (usize, Vec<usize>) {
    let n = g.n;
    if n == 0 {
        return (0, Vec::new());
    }
    if g.edges.is_empty() {
        return (1, vec![0; n]);
    }
    let adj = g.adjacency_masks();

    let (omega, clique) = crate::clique::max_clique_edge_list(g);
    let (mut best, mut best_coloring) = dsatur_greedy(n, &adj);
    if best > omega {
        // symmetry breaking: the vertices of a maximum clique can always be
        // assumed to carry the first ω colors
        let mut colors = vec![usize::MAX; n];
        for (c, &v) in clique.iter().enumerate() {
            colors[v] = c;
        }
        let mut search = Search {
            n,
            adj: &adj,
            colors,
            best: &mut best,
            best_coloring: &mut best_coloring,
        };
        search.expand(clique.len(), omega);
    }
    (best, best_coloring)
}

struct Search<'a> {
    n: usize,
    adj: &'a [u64],
    colors: Vec<usize>,
    best: &'a mut usize,
    best_coloring: &'a mut Vec<usize>,
}

impl Search<'_> {
    fn expand(&mut self, colored: usize, used: usize) {
        if used >= *self.best {
            return;
        }
        if colored == self.n {
            *self.best = used;
            *self.best_coloring = self.colors.clone();
            return;
        }
        let v = self.select_vertex();
        let mut neighbor_colors = 0u64;
        let mut nb = self.adj[v];
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if self.colors[u] != usize::MAX {
                neighbor_colors |= 1 << self.colors[u];
            }
        }
        for c in 0..=used {
            if c == used && used + 1 >= *self.best {
                break;
            }
            if neighbor_colors & (1 << c) != 0 {
                continue;
            }
            self.colors[v] = c;
            self.expand(colored + 1, used.max(c + 1));
            self.colors[v] = usize::MAX;
        }
    }

    fn select_vertex(&self) -> usize {
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize);
        for v in 0..self.n {
            if self.colors[v] != usize::MAX {
                continue;
            }
            let mut seen = 0u64;
            let mut degree = 0usize;
            let mut nb = self.adj[v];
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                degree += 1;
                if self.colors[u] != usize::MAX {
                    seen |= 1 << self.colors[u];
                }
            }
            let key = (seen.count_ones() as usize, degree);
            if pick == usize::MAX || key > pick_key {
                pick = v;
                pick_key = key;
            }
        }
        pick
    }
}

fn dsatur_greedy(n: usize, adj: &[u64]) -> (usize, Vec<usize>) {
    let mut colors = vec![usize::MAX; n];
    for _ in 0..n {
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize);
        for v in 0..n {
            if colors[v] != usize::MAX {
                continue;
            }
            let mut seen = 0u64;
            let mut degree = 0usize;
            let mut nb = adj[v];
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                degree += 1;
                if colors[u] != usize::MAX {
                    seen |= 1 << colors[u];
                }
            }
            let key = (seen.count_ones() as usize, degree);
            if pick == usize::MAX || key > pick_key {
                pick = v;
                pick_key = key;
            }
        }
        let mut forbidden = 0u64;
        let mut nb = adj[pick];
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if colors[u] != usize::MAX {
                forbidden |= 1 << colors[u];
            }
        }
        colors[pick] = (!forbidden).trailing_zeros() as usize;
    }
    let used = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
    (used, colors)
}

/// One row of the monotonicity table: exact chromatic numbers of the base
/// graph and of its `μ_{r-1}` transformation.
#[derive(Debug, Clone, Copy)]
pub struct MonotonicityRow {
    pub r: usize,
    pub chi_base: usize,
    pub chi_mu: usize,
    /// `χ(μ) = χ(G)`.
    pub lower_tight: bool,
    /// `χ(μ) = χ(G) + 1`.
    pub upper_tight: bool,
}

/// For each `r`, computes exact chromatic numbers of `G` and `μ_{r-1}(G)`
/// and checks the sandwich `χ(G) ≤ χ(μ_{r-1}(G)) ≤ χ(G) + 1`; a violation
/// is reported as an error because it can only signal a bug.
pub fn monotonicity_harness(
    g: &QuantumGraph,
    r_values: &[usize],
    tol: f64,
) -> Result<Vec<MonotonicityRow>> {
    let (chi_base, _) = chi_loc_exact(g, tol)?;
    let mut rows = Vec::with_capacity(r_values.len());
    for &r in r_values {
        let mu = mycielski::mycielskian(g, r, tol)?;
        let (chi_mu, _) = chi_loc_exact(mu.graph(), tol)?;
        if chi_mu < chi_base || chi_mu > chi_base + 1 {
            return Err(Error::SandwichViolation {
                r,
                chi_base,
                chi_mu,
            });
        }
        rows.push(MonotonicityRow {
            r,
            chi_base,
            chi_mu,
            lower_tight: chi_mu == chi_base,
            upper_tight: chi_mu == chi_base + 1,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::qgraph::classical_to_quantum;
    use crate::DEFAULT_TOL;

    /// Brute-force oracle: smallest c admitting a proper assignment, by
    /// exhaustive enumeration.
    fn brute_chi(g: &EdgeList, max_colors: usize) -> Option<usize> {
        (1..=max_colors).find(|&c| exists_proper(g, c))
    }

    fn exists_proper(g: &EdgeList, c: usize) -> bool {
        let mut assignment = vec![0usize; g.n];
        loop {
            if g.edges
                .iter()
                .all(|&(u, v)| assignment[u] != assignment[v])
            {
                return true;
            }
            let mut k = 0;
            loop {
                if k == g.n {
                    return false;
                }
                assignment[k] += 1;
                if assignment[k] < c {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
        }
    }

    fn is_proper(g: &EdgeList, coloring: &[usize]) -> bool {
        g.edges.iter().all(|&(u, v)| coloring[u] != coloring[v])
    }

    #[test]
    fn k2_diagonal_projections_form_a_valid_two_coloring() {
        let g = classical_to_quantum(&generators::complete_graph(2)).unwrap();
        let cert = ColoringCertificate::from_classes(2, &[0, 1]);
        let report = verify_coloring(&g, &cert, DEFAULT_TOL).unwrap();
        assert!(report.valid);
        assert!(report.worst_residual < 1e-12);
    }

    #[test]
    fn two_coloring_of_c5_is_rejected() {
        let g = classical_to_quantum(&generators::cycle_graph(5)).unwrap();
        let cert = ColoringCertificate::from_classes(5, &[0, 1, 0, 1, 0]);
        let report = verify_coloring(&g, &cert, DEFAULT_TOL).unwrap();
        assert!(!report.valid);
    }

    #[test]
    fn exact_chromatic_numbers_match_brute_force() {
        for (el, expected) in [
            (generators::complete_graph(3), 3),
            (generators::complete_graph(5), 5),
            (generators::cycle_graph(5), 3),
            (generators::cycle_graph(6), 2),
            (generators::path_graph(4), 2),
        ] {
            let (chi, coloring) = chi_exact_edge_list(&el);
            assert_eq!(chi, expected, "solver on {el:?}");
            assert_eq!(brute_chi(&el, 6), Some(expected), "oracle on {el:?}");
            assert!(is_proper(&el, &coloring));
            assert_eq!(coloring.iter().max().unwrap() + 1, chi);
        }
    }

    #[test]
    fn groetzsch_graph_is_four_chromatic() {
        let el = generators::groetzsch();
        // independent route: exhaustively rule out 3 colors, exhibit 4
        assert!(!exists_proper(&el, 3));
        assert!(exists_proper(&el, 4));
        let (chi, coloring) = chi_exact_edge_list(&el);
        assert_eq!(chi, 4);
        assert!(is_proper(&el, &coloring));
    }

    #[test]
    fn certificate_checker_agrees_with_proper_coloring_predicate() {
        // every assignment of up to 4 colors on small graphs
        for el in [
            generators::path_graph(3),
            generators::cycle_graph(4),
            generators::cycle_graph(5),
            generators::complete_graph(3),
            generators::complete_graph(4),
        ] {
            let g = classical_to_quantum(&el).unwrap();
            let mut assignment = vec![0usize; el.n];
            'outer: loop {
                let cert = ColoringCertificate::from_classes(el.n, &assignment);
                let report = verify_coloring(&g, &cert, DEFAULT_TOL).unwrap();
                assert_eq!(
                    report.valid,
                    is_proper(&el, &assignment),
                    "disagreement on {assignment:?} for {el:?}"
                );
                let mut k = 0;
                loop {
                    if k == el.n {
                        break 'outer;
                    }
                    assignment[k] += 1;
                    if assignment[k] < 4 {
                        break;
                    }
                    assignment[k] = 0;
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn chi_is_isomorphism_invariant() {
        let el = generators::petersen_minus_vertex();
        let (chi, _) = chi_exact_edge_list(&el);
        assert_eq!(chi, 3);
        let mut state = 0x243f6a8885a308d3u64;
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..el.n).collect();
            for i in (1..el.n).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let j = (state % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            let permuted =
                EdgeList::new(el.n, el.edges.iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap();
            assert_eq!(chi_exact_edge_list(&permuted).0, chi);
        }
    }

    #[test]
    fn tensoring_identity_preserves_validity() {
        let g = classical_to_quantum(&generators::cycle_graph(5)).unwrap();
        let (_, cert) = chi_loc_exact(&g, DEFAULT_TOL).unwrap();
        let widened = cert.tensor_identity(2);
        assert_eq!(widened.aux_dim, 2);
        let report = verify_coloring(&g, &widened, DEFAULT_TOL).unwrap();
        assert!(report.valid);
    }

    #[test]
    fn exact_solver_rejects_noncommutative_graphs() {
        let g = crate::qgraph::complete_quantum_graph(&crate::qspace::tracial_space(&[2]).unwrap())
            .unwrap();
        assert!(matches!(
            chi_loc_exact(&g, DEFAULT_TOL),
            Err(Error::NotClassical { .. })
        ));
    }

    #[test]
    fn verify_rejects_reflexive_graphs() {
        let space = crate::qspace::tracial_space(&[2]).unwrap();
        let n = space.dim();
        let g = QuantumGraph::new(space, DMatrix::identity(n, n)).unwrap();
        let cert = ColoringCertificate {
            colors: 1,
            aux_dim: 1,
            projections: vec![DMatrix::identity(n, n)],
        };
        assert!(matches!(
            verify_coloring(&g, &cert, DEFAULT_TOL),
            Err(Error::NotIrreflexive { .. })
        ));
    }

    #[test]
    fn monotonicity_table_for_small_bases() {
        let k2 = classical_to_quantum(&generators::complete_graph(2)).unwrap();
        let rows = monotonicity_harness(&k2, &[2], DEFAULT_TOL).unwrap();
        assert_eq!((rows[0].chi_base, rows[0].chi_mu), (2, 3));
        assert!(rows[0].upper_tight);

        let c5 = classical_to_quantum(&generators::cycle_graph(5)).unwrap();
        let rows = monotonicity_harness(&c5, &[2], DEFAULT_TOL).unwrap();
        assert_eq!((rows[0].chi_base, rows[0].chi_mu), (3, 4));
        assert!(rows[0].upper_tight);

        let rows = monotonicity_harness(&k2, &[3], DEFAULT_TOL).unwrap();
        assert!(rows[0].lower_tight || rows[0].upper_tight);
    }
}
