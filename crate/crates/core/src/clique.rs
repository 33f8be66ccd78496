//! Clique witnesses, graph homomorphisms, exact classical clique numbers,
//! and the Motzkin-Straus optimizer.
//!
//! A clique of size K in a quantum graph is witnessed by nonzero GNS vectors
//! `ψ_1, ..., ψ_K` whose cross operators `|ψ_i><ψ_j|` (bras taken in the GNS
//! inner product) all lie in `S_G`. Homomorphisms `G → F` are isometries
//! `J: L²(G) → L²(F) ⊗ H` with `J S_G J* ⊆ S_F ⊗ B(H)`; tensoring the domain
//! side with a positive semidefinite `Λ` gives quantum homomorphisms. All
//! noncommutative clique-type parameters are handled by verification only.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generators::EdgeList;
use crate::linalg;
use crate::qgraph::{self, QuantumGraph};
use crate::C64;

/// Nonzero GNS vectors claimed to witness a clique.
#[derive(Debug, Clone)]
pub struct CliqueWitness {
    pub vectors: Vec<DVector<C64>>,
}

impl CliqueWitness {
    /// Witness made of vertex basis vectors, the classical case.
    pub fn from_vertices(dim: usize, vertices: &[usize]) -> Self {
        let vectors = vertices
            .iter()
            .map(|&v| {
                let mut e = DVector::<C64>::zeros(dim);
                e[v] = C64::new(1.0, 0.0);
                e
            })
            .collect();
        CliqueWitness { vectors }
    }

    pub fn size(&self) -> usize {
        self.vectors.len()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WitnessReport {
    pub valid: bool,
    pub worst_residual: f64,
}

/// Checks that every cross operator `|ψ_i><ψ_j|`, `i ≠ j`, lies in `S_G`.
pub fn verify_clique_witness(
    g: &QuantumGraph,
    witness: &CliqueWitness,
    tol: f64,
) -> Result<WitnessReport> {
    let n = g.dim();
    let structure = g.structure();
    for (index, v) in witness.vectors.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let norm = structure.norm(v);
        if norm <= tol {
            return Err(Error::ZeroVector { index, norm });
        }
    }
    let s = qgraph::operator_space(g, tol)?;
    let gram = structure.gram();
    let mut worst = 0.0f64;
    let mut valid = true;
    for (i, vi) in witness.vectors.iter().enumerate() {
        for (j, vj) in witness.vectors.iter().enumerate() {
            if i == j {
                continue;
            }
            // |ψ_i><ψ_j| x = ψ_i <ψ_j, x>, i.e. ψ_i (G ψ_j)^H as a matrix
            let bra = (gram * vj).adjoint();
            let op = vi * bra;
            let m = qgraph::membership_with_tol(&s, &op, tol)?;
            worst = worst.max(m.residual);
            if !m.member {
                valid = false;
            }
        }
    }
    Ok(WitnessReport {
        valid,
        worst_residual: worst,
    })
}

/// Exact maximum clique of a classical graph, with the witness given by
/// vertex basis vectors.
pub fn omega_exact_classical(g: &QuantumGraph, tol: f64) -> Result<(usize, CliqueWitness)> {
    let el = qgraph::quantum_to_classical(g, tol)?;
    let (omega, vertices) = max_clique_edge_list(&el);
    Ok((omega, CliqueWitness::from_vertices(g.dim(), &vertices)))
}

/// Branch-and-bound maximum clique with a greedy coloring bound.
/// Deterministic: candidates are processed in a fixed order.
pub fn max_clique_edge_list(g: &EdgeList) -> (usize, Vec<usize>) {
    let n = g.n;
    if n == 0 {
        return (0, Vec::new());
    }
    let adj = g.adjacency_masks();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand_clique(&adj, full, &mut current, &mut best);
    (best.len(), best)
}

fn expand_clique(adj: &[u64], p: u64, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if p == 0 {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    // greedy coloring of the candidate set; a clique meets each color class
    // at most once, so color indices bound the reachable clique size
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut rest = p;
    let mut color = 0;
    while rest != 0 {
        color += 1;
        let mut candidates = rest;
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            candidates &= !adj[v];
            rest &= !(1u64 << v);
            order.push((v, color));
        }
    }
    let mut p_local = p;
    for &(v, color) in order.iter().rev() {
        if current.len() + color <= best.len() {
            return;
        }
        current.push(v);
        expand_clique(adj, p_local & adj[v], current, best);
        current.pop();
        p_local &= !(1u64 << v);
    }
}

/// An isometry `J: L²(G) ⊗ ℂ^h → L²(F) ⊗ ℂ^{h'}` claimed to implement a
/// (quantum) homomorphism; `Λ`, when present, is the positive semidefinite
/// factor of a quantum homomorphism and defaults to the identity on `ℂ^h`.
#[derive(Debug, Clone)]
pub struct HomomorphismWitness {
    pub isometry: DMatrix<C64>,
    pub aux_dims: (usize, usize),
    pub lambda: Option<DMatrix<C64>>,
}

impl HomomorphismWitness {
    /// Plain homomorphism witness (no auxiliary factors).
    pub fn plain(isometry: DMatrix<C64>) -> Self {
        HomomorphismWitness {
            isometry,
            aux_dims: (1, 1),
            lambda: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HomomorphismReport {
    pub valid: bool,
    pub worst_residual: f64,
}

/// Verifies `J (S_G ⊗ Λ) J* ⊆ S_F ⊗ B(ℂ^{h'})` after checking that `J` is an
/// isometry for the GNS inner products and that `Λ` is positive
/// semidefinite.
pub fn verify_homomorphism(
    g: &QuantumGraph,
    f: &QuantumGraph,
    witness: &HomomorphismWitness,
    tol: f64,
) -> Result<HomomorphismReport> {
    let (h, hp) = witness.aux_dims;
    if h == 0 || hp == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let j = &witness.isometry;
    let (rows, cols) = (f.dim() * hp, g.dim() * h);
    if j.nrows() != rows || j.ncols() != cols {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: j.nrows(),
        });
    }

    let id_h = DMatrix::<C64>::identity(h, h);
    let id_hp = DMatrix::<C64>::identity(hp, hp);
    let gram_dom = g.structure().gram().kronecker(&id_h);
    let gram_cod = f.structure().gram().kronecker(&id_hp);
    let j_star = linalg::gns_adjoint_rect(j, &gram_dom, &gram_cod)?;
    let isometry_residual =
        (&j_star * j - DMatrix::<C64>::identity(cols, cols)).norm() / (cols as f64).sqrt();
    if isometry_residual > tol {
        return Err(Error::NotIsometry {
            residual: isometry_residual,
        });
    }

    let lambda = match &witness.lambda {
        Some(l) => {
            if l.nrows() != h || l.ncols() != h {
                return Err(Error::DimensionMismatch {
                    expected: h,
                    found: l.nrows(),
                });
            }
            let hermitian_residual = (l - l.adjoint()).norm() / f64::max(1.0, l.norm());
            let eigenvalues =
                linalg::hermitian_eigenvalues(&((l + l.adjoint()) * C64::new(0.5, 0.0)));
            let min_eig = eigenvalues.first().copied().unwrap_or(0.0);
            let scale = eigenvalues.last().copied().unwrap_or(0.0).abs().max(1.0);
            if hermitian_residual > tol || min_eig < -tol * scale {
                return Err(Error::LambdaNotPsd {
                    min_eigenvalue: min_eig,
                });
            }
            l.clone()
        }
        None => id_h,
    };

    let s_g = qgraph::operator_space(g, tol)?;
    let s_f = qgraph::operator_space(f, tol)?;
    // S_F ⊗ B(ℂ^{h'}): tensors of an orthonormal basis with matrix units
    // stay orthonormal, so no re-orthonormalization is needed
    let mut target = Vec::with_capacity(s_f.dim() * hp * hp);
    for b in &s_f.basis {
        for p in 0..hp {
            for q in 0..hp {
                let mut e = DMatrix::<C64>::zeros(hp, hp);
                e[(p, q)] = C64::new(1.0, 0.0);
                target.push(linalg::vec_row_major(&b.kronecker(&e)));
            }
        }
    }

    let mut worst = 0.0f64;
    let mut valid = true;
    for b in &s_g.basis {
        let x = b.kronecker(&lambda);
        let image = j * x * &j_star;
        let residual = linalg::span_residual(&target, &linalg::vec_row_major(&image));
        worst = worst.max(residual);
        if residual >= tol {
            valid = false;
        }
    }
    Ok(HomomorphismReport {
        valid,
        worst_residual: worst,
    })
}

/// Tensor composition of plain homomorphism witnesses:
/// `g → f` followed by `f → e` gives `(J_2 ⊗ id) J_1 : g → e`.
pub fn compose_homomorphisms(
    first: &HomomorphismWitness,
    second: &HomomorphismWitness,
) -> Result<HomomorphismWitness> {
    if first.aux_dims.0 != 1 || second.aux_dims.0 != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: first.aux_dims.0.max(second.aux_dims.0),
        });
    }
    let h1p = first.aux_dims.1;
    let id = DMatrix::<C64>::identity(h1p, h1p);
    let isometry = second.isometry.kronecker(&id) * &first.isometry;
    Ok(HomomorphismWitness {
        isometry,
        aux_dims: (1, second.aux_dims.1 * h1p),
        lambda: None,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct OmegaQReport {
    pub valid: bool,
    /// `dim C(F)`, the size certified by a valid witness.
    pub size: usize,
    pub worst_residual: f64,
}

/// Certifies `ω_q(G) >= dim C(F)` from a homomorphism of the complete
/// quantum graph on `space` into `G`.
pub fn omega_q_lower_bound_verify(
    g: &QuantumGraph,
    space: &crate::qspace::FiniteQuantumSpace,
    witness: &HomomorphismWitness,
    tol: f64,
) -> Result<OmegaQReport> {
    let complete = qgraph::complete_quantum_graph(space)?;
    let report = verify_homomorphism(&complete, g, witness, tol)?;
    Ok(OmegaQReport {
        valid: report.valid,
        size: space.dim(),
        worst_residual: report.worst_residual,
    })
}

/// Cone over which the Motzkin-Straus quadratic program is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    /// Nonnegative coordinates in the canonical basis summing to one, paired
    /// with the coordinate inner product; on classical graphs this is
    /// exactly the classical Motzkin-Straus program.
    SimplexInBasis,
    /// Positive algebra elements with ψ(x) = 1, paired with the δ⁻²-scaled
    /// GNS form so that commutative inputs reproduce the coordinate simplex
    /// program. Exploratory: which cone reproduces which clique-type
    /// parameter is open, so values here are best-found only.
    PsdNormalized,
}

#[derive(Debug, Clone)]
pub struct MotzkinStrausOutcome {
    /// Best objective value found.
    pub value: f64,
    /// `1 / (1 - value)`.
    pub omega_ms: f64,
    pub argmax: DVector<C64>,
    /// Exact clique number, filled on the classical simplex path.
    pub omega_exact: Option<usize>,
    /// `|value - (1 - 1/ω_exact)|` when the exact reference is available.
    pub exact_gap: Option<f64>,
}

/// Multi-start ascent for `max <v, A v>` over the chosen cone: replicator
/// dynamics on the simplex (projected gradient when the adjacency has
/// negative or complex entries), projected gradient on the PSD cone.
/// Starts are uniform plus seeded noise; results are deterministic per seed.
pub fn motzkin_straus(
    g: &QuantumGraph,
    cone: Cone,
    restarts: usize,
    iters: usize,
    seed: u64,
    tol: f64,
) -> Result<MotzkinStrausOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (value, argmax) = match cone {
        Cone::SimplexInBasis => simplex_ascent(g, restarts, iters, &mut rng),
        Cone::PsdNormalized => psd_ascent(g, restarts, iters, &mut rng),
    };
    if value >= 1.0 - tol {
        return Err(Error::ValueAtLeastOne { value });
    }
    let (omega_exact, exact_gap) = if cone == Cone::SimplexInBasis && qgraph::is_classical(g, tol)
    {
        let (omega, _) = omega_exact_classical(g, tol)?;
        let reference = 1.0 - 1.0 / omega as f64;
        (Some(omega), Some((value - reference).abs()))
    } else {
        (None, None)
    };
    Ok(MotzkinStrausOutcome {
        value,
        omega_ms: 1.0 / (1.0 - value),
        argmax,
        omega_exact,
        exact_gap,
    })
}

fn simplex_ascent(
    g: &QuantumGraph,
    restarts: usize,
    iters: usize,
    rng: &mut ChaCha8Rng,
) -> (f64, DVector<C64>) {
    let n = g.dim();
    let a = g.adjacency();
    let sym = DMatrix::<f64>::from_fn(n, n, |i, j| 0.5 * (a[(i, j)].re + a[(j, i)].re));
    let replicator_safe = a.iter().all(|z| z.im.abs() <= 1e-12 && z.re >= -1e-12)
        && (a - a.transpose()).norm() <= 1e-12 * (1.0 + a.norm());
    let objective = |v: &DVector<f64>| (&sym * v).dot(v);

    let mut best_value = f64::NEG_INFINITY;
    let mut best_v = DVector::<f64>::from_element(n, 1.0 / n as f64);
    for restart in 0..restarts.max(1) {
        let mut v = DVector::<f64>::from_element(n, 1.0 / n as f64);
        if restart > 0 {
            for i in 0..n {
                v[i] *= 1.0 + 0.5 * rng.random::<f64>();
            }
            let total: f64 = v.iter().sum();
            v /= total;
        }
        let mut value = objective(&v);
        if replicator_safe {
            for _ in 0..iters {
                let w = &sym * &v;
                let q = v.dot(&w);
                if q <= f64::MIN_POSITIVE {
                    break;
                }
                v = v.component_mul(&w) / q;
                let new_value = objective(&v);
                // Baum-Eagon monotonicity of the replicator map
                assert!(
                    new_value >= value - 1e-9 * (1.0 + value.abs()),
                    "replicator step decreased the objective"
                );
                if new_value - value <= f64::EPSILON * value.abs() {
                    value = new_value;
                    break;
                }
                value = new_value;
            }
        } else {
            let mut step = 1.0 / (sym.norm() + 1.0);
            for _ in 0..iters {
                let grad = &sym * &v * 2.0;
                let mut trial_step = step;
                let mut improved = false;
                for _ in 0..30 {
                    let trial = project_simplex(&(&v + &grad * trial_step));
                    let trial_value = objective(&trial);
                    if trial_value > value {
                        v = trial;
                        value = trial_value;
                        step = trial_step * 1.5;
                        improved = true;
                        break;
                    }
                    trial_step *= 0.5;
                }
                if !improved {
                    break;
                }
            }
        }
        if value > best_value {
            best_value = value;
            best_v = v;
        }
    }
    let argmax = DVector::from_fn(n, |i, _| C64::new(best_v[i], 0.0));
    (best_value, argmax)
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(u: &DVector<f64>) -> DVector<f64> {
    let n = u.len();
    let mut sorted: Vec<f64> = u.iter().copied().collect();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let mut acc = 0.0;
    let mut tau = sorted[0] - 1.0;
    for (k, &val) in sorted.iter().enumerate() {
        acc += val;
        let t = (acc - 1.0) / (k as f64 + 1.0);
        if val - t > 0.0 {
            tau = t;
        }
    }
    DVector::from_fn(n, |i, _| (u[i] - tau).max(0.0))
}

fn psd_ascent(
    g: &QuantumGraph,
    restarts: usize,
    iters: usize,
    rng: &mut ChaCha8Rng,
) -> (f64, DVector<C64>) {
    let structure = g.structure();
    let n = g.dim();
    let a = g.adjacency();
    let inv_d2 = 1.0 / g.delta_squared();
    let objective = |x: &DVector<C64>| structure.inner(x, &(a * x)).re * inv_d2;

    let unit: DVector<C64> = structure.unit_vec().clone();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_x = unit.clone();
    for restart in 0..restarts.max(1) {
        let mut x = unit.clone();
        if restart > 0 {
            for i in 0..n {
                x[i] += C64::new(0.4 * rng.random::<f64>(), 0.4 * rng.random::<f64>());
            }
            x = normalize_psd(structure, &x);
        }
        let mut value = objective(&x);
        let mut step = 1.0 / (a.norm() + 1.0);
        for _ in 0..iters {
            let grad = DVector::from(a * &x);
            let mut improved = false;
            // multiplicative update (x·Ax + Ax·x)/2: on commutative spaces
            // this is exactly the replicator map in simplex coordinates
            let symmetrized = (structure.multiply(&x, &grad)
                + structure.multiply(&grad, &x))
                * C64::new(0.5, 0.0);
            let trial = normalize_psd(structure, &symmetrized);
            let trial_value = objective(&trial);
            if trial_value > value + 1e-15 {
                x = trial;
                value = trial_value;
                improved = true;
            } else {
                let mut trial_step = step;
                for _ in 0..30 {
                    let trial =
                        normalize_psd(structure, &(&x + &grad * C64::new(trial_step, 0.0)));
                    let trial_value = objective(&trial);
                    if trial_value > value + 1e-15 {
                        x = trial;
                        value = trial_value;
                        step = trial_step * 1.5;
                        improved = true;
                        break;
                    }
                    trial_step *= 0.5;
                }
            }
            if !improved {
                break;
            }
        }
        if value > best_value {
            best_value = value;
            best_x = x;
        }
    }
    (best_value, best_x)
}

/// Projects each block onto the PSD cone and rescales to ψ(x) = 1.
fn normalize_psd(structure: &crate::qspace::GnsStructure, x: &DVector<C64>) -> DVector<C64> {
    let mut out = x.clone();
    for (b, &nb) in structure.blocks().iter().enumerate() {
        let o = structure.block_offsets()[b];
        let block = DMatrix::from_fn(nb, nb, |i, j| x[o + i * nb + j]);
        let projected = linalg::psd_project(&block);
        for i in 0..nb {
            for j in 0..nb {
                out[o + i * nb + j] = projected[(i, j)];
            }
        }
    }
    let mass = structure.state(&out).re;
    if mass > 1e-12 {
        out /= C64::new(mass, 0.0);
    } else {
        out = structure.unit_vec().clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::mycielski::mycielskian;
    use crate::qgraph::{classical_to_quantum, complete_quantum_graph};
    use crate::qspace::{classical_space, tracial_space};
    use crate::DEFAULT_TOL;
    use proptest::prelude::*;

    fn quantum(el: &EdgeList) -> QuantumGraph {
        classical_to_quantum(el).unwrap()
    }

    /// Vertex embedding of a small uniform classical space onto chosen
    /// vertices of a larger one, scaled to be a GNS isometry.
    fn vertex_embedding(
        domain: &QuantumGraph,
        codomain: &QuantumGraph,
        verts: &[usize],
    ) -> DMatrix<C64> {
        let nd = domain.dim();
        let nc = codomain.dim();
        assert_eq!(verts.len(), nd);
        let mut j = DMatrix::<C64>::zeros(nc, nd);
        for (i, &v) in verts.iter().enumerate() {
            let qd = domain.structure().gram()[(i, i)].re;
            let qc = codomain.structure().gram()[(v, v)].re;
            j[(v, i)] = C64::new((qd / qc).sqrt(), 0.0);
        }
        j
    }

    #[test]
    fn single_vector_witnesses_a_clique_of_size_one() {
        let g = quantum(&generators::cycle_graph(5));
        let w = CliqueWitness::from_vertices(5, &[0]);
        let report = verify_clique_witness(&g, &w, DEFAULT_TOL).unwrap();
        assert!(report.valid);
    }

    #[test]
    fn triangle_vertices_witness_a_clique() {
        let g = quantum(&generators::complete_graph(4));
        let w = CliqueWitness::from_vertices(4, &[0, 1, 2]);
        assert!(verify_clique_witness(&g, &w, DEFAULT_TOL).unwrap().valid);
    }

    #[test]
    fn non_adjacent_pair_is_rejected() {
        let g = quantum(&generators::cycle_graph(5));
        let w = CliqueWitness::from_vertices(5, &[0, 2]);
        assert!(!verify_clique_witness(&g, &w, DEFAULT_TOL).unwrap().valid);
    }

    #[test]
    fn vertex_witnesses_match_cliques_exhaustively() {
        // over every vertex subset of size >= 2: the witness verifies
        // exactly when the subset is a clique
        for el in [
            generators::cycle_graph(5),
            generators::complete_graph(4),
            generators::petersen_minus_vertex(),
        ] {
            let g = quantum(&el);
            let n = el.n;
            for mask in 0u64..(1 << n) {
                if mask.count_ones() < 2 {
                    continue;
                }
                let verts: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
                let is_clique = verts
                    .iter()
                    .enumerate()
                    .all(|(i, &u)| verts[i + 1..].iter().all(|&v| el.has_edge(u, v)));
                let witness = CliqueWitness::from_vertices(n, &verts);
                let report = verify_clique_witness(&g, &witness, DEFAULT_TOL).unwrap();
                assert_eq!(report.valid, is_clique, "subset {verts:?} of {el:?}");
            }
        }
    }

    #[test]
    fn zero_vectors_are_rejected() {
        let g = quantum(&generators::cycle_graph(5));
        let w = CliqueWitness {
            vectors: vec![DVector::zeros(5)],
        };
        assert!(matches!(
            verify_clique_witness(&g, &w, DEFAULT_TOL),
            Err(Error::ZeroVector { .. })
        ));
    }

    #[test]
    fn exact_clique_numbers() {
        assert_eq!(max_clique_edge_list(&generators::complete_graph(5)).0, 5);
        assert_eq!(max_clique_edge_list(&generators::groetzsch()).0, 2);
        assert_eq!(max_clique_edge_list(&generators::petersen()).0, 2);
        assert_eq!(max_clique_edge_list(&generators::cycle_graph(5)).0, 2);
        assert_eq!(max_clique_edge_list(&generators::empty_graph(4)).0, 1);

        let g = quantum(&generators::complete_graph(5));
        let (omega, witness) = omega_exact_classical(&g, DEFAULT_TOL).unwrap();
        assert_eq!(omega, 5);
        assert!(verify_clique_witness(&g, &witness, DEFAULT_TOL)
            .unwrap()
            .valid);
    }

    #[test]
    fn mycielskian_preserves_the_clique_number() {
        for el in [
            generators::complete_graph(2),
            generators::complete_graph(3),
            generators::cycle_graph(5),
            generators::petersen(),
        ] {
            let (omega, _) = max_clique_edge_list(&el);
            let mu = generators::classical_mycielskian(&el, 2);
            assert_eq!(max_clique_edge_list(&mu).0, omega, "on {el:?}");
        }
    }

    #[test]
    fn identity_is_a_homomorphism() {
        let g = quantum(&generators::cycle_graph(5));
        let w = HomomorphismWitness::plain(DMatrix::identity(5, 5));
        let report = verify_homomorphism(&g, &g, &w, DEFAULT_TOL).unwrap();
        assert!(report.valid);
        assert!(report.worst_residual < 1e-12);
    }

    #[test]
    fn iota_one_embeds_the_base_into_the_mycielskian() {
        for g in [
            quantum(&generators::cycle_graph(5)),
            complete_quantum_graph(&tracial_space(&[2]).unwrap()).unwrap(),
        ] {
            let mu = mycielskian(&g, 2, DEFAULT_TOL).unwrap();
            let w = HomomorphismWitness::plain(mu.iota(1).clone());
            let report = verify_homomorphism(&g, mu.graph(), &w, DEFAULT_TOL).unwrap();
            assert!(report.valid, "residual {}", report.worst_residual);
        }
    }

    #[test]
    fn non_isometries_are_rejected() {
        let g = quantum(&generators::cycle_graph(5));
        let w = HomomorphismWitness::plain(DMatrix::identity(5, 5) * C64::new(0.7, 0.0));
        assert!(matches!(
            verify_homomorphism(&g, &g, &w, DEFAULT_TOL),
            Err(Error::NotIsometry { .. })
        ));
    }

    #[test]
    fn non_psd_lambda_is_rejected() {
        let g = quantum(&generators::cycle_graph(5));
        let mut w = HomomorphismWitness::plain(DMatrix::identity(5, 5));
        w.lambda = Some(DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(
            -1.0, 0.0,
        )])));
        assert!(matches!(
            verify_homomorphism(&g, &g, &w, DEFAULT_TOL),
            Err(Error::LambdaNotPsd { .. })
        ));
    }

    #[test]
    fn omega_q_lower_bounds_via_complete_graph_embeddings() {
        // the complete quantum graph on 2 classical points is K2
        let k2_space = classical_space(2).unwrap();
        let k2 = complete_quantum_graph(&k2_space).unwrap();
        let w = HomomorphismWitness::plain(DMatrix::identity(2, 2));
        let report = omega_q_lower_bound_verify(&k2, &k2_space, &w, DEFAULT_TOL).unwrap();
        assert!(report.valid);
        assert_eq!(report.size, 2);

        // K3 embeds onto a triangle of K4
        let k3_space = classical_space(3).unwrap();
        let k3 = complete_quantum_graph(&k3_space).unwrap();
        let k4 = quantum(&generators::complete_graph(4));
        let j = vertex_embedding(&k3, &k4, &[0, 1, 2]);
        let report = omega_q_lower_bound_verify(
            &k4,
            &k3_space,
            &HomomorphismWitness::plain(j),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(report.valid);
        assert_eq!(report.size, 3);

        // no triangle embeds into C5: every vertex embedding fails
        let c5 = quantum(&generators::cycle_graph(5));
        for a in 0..5usize {
            for b in 0..5usize {
                for c in 0..5usize {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let j = vertex_embedding(&k3, &c5, &[a, b, c]);
                    let report = omega_q_lower_bound_verify(
                        &c5,
                        &k3_space,
                        &HomomorphismWitness::plain(j),
                        DEFAULT_TOL,
                    )
                    .unwrap();
                    assert!(!report.valid);
                }
            }
        }
    }

    #[test]
    fn homomorphisms_compose() {
        // K2 -> C5 on an edge, then C5 -> mu(C5) through iota_1
        let k2 = quantum(&generators::complete_graph(2));
        let c5 = quantum(&generators::cycle_graph(5));
        let first = HomomorphismWitness::plain(vertex_embedding(&k2, &c5, &[0, 1]));
        assert!(verify_homomorphism(&k2, &c5, &first, DEFAULT_TOL)
            .unwrap()
            .valid);
        let mu = mycielskian(&c5, 2, DEFAULT_TOL).unwrap();
        let second = HomomorphismWitness::plain(mu.iota(1).clone());
        let composite = compose_homomorphisms(&first, &second).unwrap();
        let report = verify_homomorphism(&k2, mu.graph(), &composite, DEFAULT_TOL).unwrap();
        assert!(report.valid, "residual {}", report.worst_residual);
    }

    #[test]
    fn clique_witnesses_push_through_iota_one() {
        let g = quantum(&generators::complete_graph(3));
        let (_, witness) = omega_exact_classical(&g, DEFAULT_TOL).unwrap();
        let mu = mycielskian(&g, 2, DEFAULT_TOL).unwrap();
        let pushed = CliqueWitness {
            vectors: witness
                .vectors
                .iter()
                .map(|v| DVector::from(mu.iota(1) * v))
                .collect(),
        };
        assert!(verify_clique_witness(mu.graph(), &pushed, DEFAULT_TOL)
            .unwrap()
            .valid);
    }

    /// Brute-force grid over the simplex, the independent reference for the
    /// classical Motzkin-Straus identity at small n.
    fn grid_max(a: &DMatrix<f64>, resolution: usize) -> f64 {
        fn rec(
            a: &DMatrix<f64>,
            point: &mut Vec<usize>,
            idx: usize,
            left: usize,
            resolution: usize,
            best: &mut f64,
        ) {
            let n = point.len();
            if idx == n - 1 {
                point[idx] = left;
                let v = DVector::from_fn(n, |i, _| point[i] as f64 / resolution as f64);
                let val = (a * &v).dot(&v);
                if val > *best {
                    *best = val;
                }
                return;
            }
            for k in 0..=left {
                point[idx] = k;
                rec(a, point, idx + 1, left - k, resolution, best);
            }
        }
        let n = a.ncols();
        let mut best = f64::NEG_INFINITY;
        let mut point = vec![0usize; n];
        rec(a, &mut point, 0, resolution, resolution, &mut best);
        best
    }

    #[test]
    fn motzkin_straus_on_complete_graphs() {
        for n in 2..=4usize {
            let g = quantum(&generators::complete_graph(n));
            let outcome = motzkin_straus(&g, Cone::SimplexInBasis, 8, 500, 0, DEFAULT_TOL).unwrap();
            let expected = 1.0 - 1.0 / n as f64;
            assert!((outcome.value - expected).abs() < 1e-7, "n = {n}");
            assert_eq!(outcome.omega_exact, Some(n));
            // uniform is the maximizer
            for i in 0..n {
                assert!((outcome.argmax[i].re - 1.0 / n as f64).abs() < 1e-5);
            }
            let adj = DMatrix::<f64>::from_fn(n, n, |i, j| g.adjacency()[(i, j)].re);
            let grid = grid_max(&adj, 12);
            assert!(outcome.value >= grid - 1e-9);
            assert!((grid - expected).abs() < 0.05);
        }
    }

    #[test]
    fn motzkin_straus_on_the_empty_graph_is_exactly_zero() {
        let g = quantum(&generators::empty_graph(4));
        let outcome = motzkin_straus(&g, Cone::SimplexInBasis, 5, 100, 0, DEFAULT_TOL).unwrap();
        assert_eq!(outcome.value, 0.0);
        assert_eq!(outcome.omega_ms, 1.0);
    }

    #[test]
    fn motzkin_straus_on_c5_certifies_omega_two() {
        let g = quantum(&generators::cycle_graph(5));
        let outcome = motzkin_straus(&g, Cone::SimplexInBasis, 50, 2000, 0, DEFAULT_TOL).unwrap();
        assert!((outcome.value - 0.5).abs() < 1e-6);
        assert_eq!(outcome.omega_exact, Some(2));
        assert!(outcome.exact_gap.unwrap() < 1e-6);
    }

    #[test]
    fn motzkin_straus_detects_unbounded_cones() {
        // reflexive one-point graph: the objective reaches 1 on the simplex
        let space = classical_space(1).unwrap();
        let g = crate::qgraph::QuantumGraph::new(space, DMatrix::identity(1, 1)).unwrap();
        assert!(matches!(
            motzkin_straus(&g, Cone::SimplexInBasis, 3, 50, 0, DEFAULT_TOL),
            Err(Error::ValueAtLeastOne { .. })
        ));
    }

    #[test]
    fn motzkin_straus_psd_cone_on_the_complete_quantum_graph() {
        // on the complete quantum graph the objective is 1 - <x,x>/δ²,
        // maximized at the unit with value 1 - 1/δ² = 3/4
        let g = complete_quantum_graph(&tracial_space(&[2]).unwrap()).unwrap();
        let outcome = motzkin_straus(&g, Cone::PsdNormalized, 6, 200, 1, DEFAULT_TOL).unwrap();
        assert!((outcome.value - 0.75).abs() < 1e-9);
        assert!((outcome.omega_ms - 4.0).abs() < 1e-7);
        assert!(outcome.omega_exact.is_none());
    }

    #[test]
    fn motzkin_straus_psd_cone_reduces_to_the_simplex_program_classically() {
        // on a commutative space, w_i = q_i v_i turns the ψ-normalized
        // positive cone into the coordinate simplex and the δ⁻²-scaled GNS
        // form into the coordinate pairing
        let g = quantum(&generators::cycle_graph(5));
        let outcome = motzkin_straus(&g, Cone::PsdNormalized, 50, 2000, 0, DEFAULT_TOL).unwrap();
        assert!((outcome.value - 0.5).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn witness_validity_is_scale_invariant(re in 0.1f64..3.0, im in -2.0f64..2.0) {
            let g = quantum(&generators::complete_graph(3));
            let base = CliqueWitness::from_vertices(3, &[0, 1]);
            let scaled = CliqueWitness {
                vectors: base
                    .vectors
                    .iter()
                    .map(|v| v * C64::new(re, im))
                    .collect(),
            };
            let a = verify_clique_witness(&g, &base, DEFAULT_TOL).unwrap();
            let b = verify_clique_witness(&g, &scaled, DEFAULT_TOL).unwrap();
            prop_assert_eq!(a.valid, b.valid);
        }
    }
}
