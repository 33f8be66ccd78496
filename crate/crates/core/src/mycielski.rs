//! Generalized Mycielski transformations of quantum graphs.
//!
//! `μ_{r-1}(G)` lives on `ℂ ⊕ C(G)^{⊕r}` with the state
//! `(1/(1+rδ²))(id ⊕ δ²ψ^{⊕r})`, which is a `√(1+rδ²)`-form. The adjacency
//! is assembled twice: componentwise (the normative route) and through the
//! embedding isometries `ι_k` with their normalizations `√((1+rδ²)/δ²)`;
//! the two must agree or construction aborts, which guards against scaling
//! mistakes in either derivation.

use nalgebra::{DMatrix, DVector};

use crate::chromatic::{self, ColoringCertificate};
use crate::error::{Error, Result};
use crate::linalg;
use crate::qgraph::{self, QuantumGraph};
use crate::qspace;
use crate::C64;

/// A Mycielskian together with its embedding isometries.
#[derive(Debug, Clone)]
pub struct MycielskiResult {
    graph: QuantumGraph,
    base: QuantumGraph,
    r: usize,
    embeddings: Vec<DMatrix<C64>>,
    formula_residual: f64,
}

impl MycielskiResult {
    /// The transformed graph `μ_{r-1}(G)`.
    pub fn graph(&self) -> &QuantumGraph {
        &self.graph
    }

    /// The input graph.
    pub fn base(&self) -> &QuantumGraph {
        &self.base
    }

    /// Number of copies of the base space.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Isometries `ι_0, ι_1, ..., ι_r`; `ι_0` embeds `ℂ` (the apex), the
    /// others embed `L²(G)` onto the copies.
    pub fn embeddings(&self) -> &[DMatrix<C64>] {
        &self.embeddings
    }

    pub fn iota(&self, k: usize) -> &DMatrix<C64> {
        &self.embeddings[k]
    }

    /// GNS adjoint `ι_k*` as a matrix from the new space onto the k-th leg.
    pub fn iota_adjoint(&self, k: usize) -> Result<DMatrix<C64>> {
        let gram_cod = self.graph.structure().gram();
        if k == 0 {
            let gram_dom = DMatrix::<C64>::identity(1, 1);
            linalg::gns_adjoint_rect(&self.embeddings[0], &gram_dom, gram_cod)
        } else {
            linalg::gns_adjoint_rect(&self.embeddings[k], self.base.structure().gram(), gram_cod)
        }
    }

    /// Relative disagreement between the componentwise and embedding-form
    /// adjacency matrices.
    pub fn formula_residual(&self) -> f64 {
        self.formula_residual
    }
}

/// Builds `μ_{r-1}(G)`.
///
/// The componentwise adjacency sends `(λ, x_1, ..., x_r)` to the vector with
/// apex component `δ²ψ(x_r)`, first copy `A(x_1 + x_2)`, middle copies
/// `A(x_{j-1} + x_{j+1})` and last copy `λ𝟙 + A(x_{r-1})`; for `r = 1` this
/// degenerates to the apex cone `(λ, x) ↦ (δ²ψ(x), λ𝟙 + Ax)`, exactly what
/// the embedding form evaluates to when the middle sum is empty.
pub fn mycielskian(g: &QuantumGraph, r: usize, tol: f64) -> Result<MycielskiResult> {
    if r < 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let report = qgraph::check_axioms(g, tol);
    if !report.all_pass() {
        let residual = report
            .selfadjoint
            .residual
            .max(report.eq1.residual)
            .max(report.eq2.residual);
        return Err(Error::AxiomViolation {
            check: "input quantum graph axioms",
            residual,
        });
    }

    let n = g.dim();
    let d2 = g.delta_squared();
    let scale = 1.0 + r as f64 * d2;

    let mut blocks = vec![1usize];
    let mut weights = vec![vec![1.0 / scale]];
    for _ in 0..r {
        for (b, &nb) in g.space().blocks().iter().enumerate() {
            blocks.push(nb);
            weights.push(
                g.space().state_weights()[b]
                    .iter()
                    .map(|q| q * d2 / scale)
                    .collect(),
            );
        }
    }
    let space = qspace::build_space(&blocks, &weights, tol)?;
    let np = space.dim();
    debug_assert_eq!(np, 1 + r * n);
    let slot = |copy: usize, alpha: usize| 1 + (copy - 1) * n + alpha;

    let base_structure = g.structure();
    let a = g.adjacency();

    // componentwise assembly
    let mut comp = DMatrix::<C64>::zeros(np, np);
    for alpha in 0..n {
        // apex column feeds the unit into copy r
        comp[(slot(r, alpha), 0)] = base_structure.unit_vec()[alpha];
        // copy r feeds δ²ψ into the apex
        comp[(0, slot(r, alpha))] = base_structure.co_unit()[alpha] * C64::new(d2, 0.0);
    }
    let mut copy_pairs = vec![(1usize, 1usize)];
    for k in 1..r {
        copy_pairs.push((k, k + 1));
        copy_pairs.push((k + 1, k));
    }
    for (row_copy, col_copy) in copy_pairs {
        for alpha in 0..n {
            for beta in 0..n {
                comp[(slot(row_copy, alpha), slot(col_copy, beta))] += a[(alpha, beta)];
            }
        }
    }

    // embedding isometries
    let mut embeddings = Vec::with_capacity(r + 1);
    let mut iota0 = DMatrix::<C64>::zeros(np, 1);
    iota0[(0, 0)] = C64::new(scale.sqrt(), 0.0);
    embeddings.push(iota0);
    let copy_scale = (scale / d2).sqrt();
    for k in 1..=r {
        let mut iota = DMatrix::<C64>::zeros(np, n);
        for alpha in 0..n {
            iota[(slot(k, alpha), alpha)] = C64::new(copy_scale, 0.0);
        }
        embeddings.push(iota);
    }

    // embedding-form adjacency:
    // δ ι_r η ι_0* + δ ι_0 η* ι_r* + ι_1 A ι_1* + Σ_k (ι_k A ι_{k+1}* + ι_{k+1} A ι_k*)
    let structure_mu = qspace::gns(&space);
    let gram_mu = structure_mu.gram();
    let gram_base = base_structure.gram();
    let gram_c = DMatrix::<C64>::identity(1, 1);
    let iota_star: Vec<DMatrix<C64>> = embeddings
        .iter()
        .enumerate()
        .map(|(k, iota)| {
            let dom = if k == 0 { &gram_c } else { gram_base };
            linalg::gns_adjoint_rect(iota, dom, gram_mu)
        })
        .collect::<Result<_>>()?;
    let delta = d2.sqrt();
    let unit = DMatrix::from_fn(n, 1, |i, _| base_structure.unit_vec()[i]);
    let co_unit = DMatrix::from_fn(1, n, |_, j| base_structure.co_unit()[j]);
    let mut iota_form = &embeddings[r] * &unit * &iota_star[0] * C64::new(delta, 0.0);
    iota_form += &embeddings[0] * &co_unit * &iota_star[r] * C64::new(delta, 0.0);
    iota_form += &embeddings[1] * a * &iota_star[1];
    for k in 1..r {
        iota_form += &embeddings[k] * a * &iota_star[k + 1];
        iota_form += &embeddings[k + 1] * a * &iota_star[k];
    }

    let formula_residual = linalg::rel_err(&iota_form, &comp);
    if formula_residual > tol {
        return Err(Error::FormulaMismatch {
            residual: formula_residual,
        });
    }

    Ok(MycielskiResult {
        graph: QuantumGraph::new(space, comp)?,
        base: g.clone(),
        r,
        embeddings,
        formula_residual,
    })
}

/// `μ_{r_k-1}(... μ_{r_1-1}(G) ...)`, left to right; the empty list returns
/// the input unchanged.
pub fn iterated_mycielskian(g: &QuantumGraph, rs: &[usize], tol: f64) -> Result<QuantumGraph> {
    let mut current = g.clone();
    for &r in rs {
        current = mycielskian(&current, r, tol)?.graph;
    }
    Ok(current)
}

/// Lifts a c-coloring of `G` to a (c+1)-coloring of `μ_{r-1}(G)`:
/// `Q_0 = ι_0 ι_0*` and `Q_i = Σ_j ι_j P_i ι_j*`, with any auxiliary factor
/// carried through unchanged.
pub fn lift_coloring(
    g: &QuantumGraph,
    r: usize,
    cert: &ColoringCertificate,
    tol: f64,
) -> Result<ColoringCertificate> {
    let report = chromatic::verify_coloring(g, cert, tol)?;
    if !report.valid {
        return Err(Error::InvalidCertificate {
            reason: "input certificate does not verify".into(),
            residual: report.worst_residual,
        });
    }
    let mu = mycielskian(g, r, tol)?;
    let d = cert.aux_dim;
    let id_d = DMatrix::<C64>::identity(d, d);

    let q0 = (&mu.embeddings[0] * mu.iota_adjoint(0)?).kronecker(&id_d);
    let mut projections = vec![q0];
    for p in &cert.projections {
        let np = mu.graph.dim();
        let mut q = DMatrix::<C64>::zeros(np * d, np * d);
        for j in 1..=r {
            let emb = mu.embeddings[j].kronecker(&id_d);
            let emb_star = mu.iota_adjoint(j)?.kronecker(&id_d);
            q += emb * p * emb_star;
        }
        projections.push(q);
    }
    Ok(ColoringCertificate {
        colors: cert.colors + 1,
        aux_dim: d,
        projections,
    })
}

/// Reduces a loc coloring of `μ(G)` (`r = 2`) to one of `G` with one color
/// fewer, via `Q_l = P_{l1} + P_{01} P_{l2}`.
///
/// The certificate is normalized so that color 0 is the unique color whose
/// apex component is 1. The apex color must then have vanishing second-copy
/// component (`P_02 = 0`), and the reduction applies only when `P_01`
/// commutes with every `P_l2`.
pub fn reduce_coloring(
    mu: &MycielskiResult,
    cert: &ColoringCertificate,
    tol: f64,
) -> Result<ColoringCertificate> {
    if mu.r != 2 {
        return Err(Error::InvalidCertificate {
            reason: format!("reduction is defined for r = 2, got r = {}", mu.r),
            residual: 0.0,
        });
    }
    if cert.aux_dim != 1 {
        return Err(Error::InvalidCertificate {
            reason: "reduction requires a loc certificate (aux_dim = 1)".into(),
            residual: 0.0,
        });
    }
    let np = mu.graph.dim();
    let n = mu.base.dim();
    for p in &cert.projections {
        if p.nrows() != np || p.ncols() != np {
            return Err(Error::DimensionMismatch {
                expected: np,
                found: p.nrows(),
            });
        }
    }

    // each projection must be left multiplication by an algebra element,
    // recovered by applying it to the unit
    let structure_mu = mu.graph.structure();
    let sqrt_tol = tol.sqrt();
    let mut components: Vec<(C64, DVector<C64>, DVector<C64>)> = Vec::new();
    for p in &cert.projections {
        let x = p * structure_mu.unit_vec();
        let as_left_mult = structure_mu.left_mult_operator(&DVector::from(x.clone()));
        let residual = linalg::rel_err(&as_left_mult, p);
        if residual > tol {
            return Err(Error::InvalidCertificate {
                reason: "projection is not in C(mu(G))".into(),
                residual,
            });
        }
        let apex = x[0];
        let comp1 = DVector::from_fn(n, |i, _| x[1 + i]);
        let comp2 = DVector::from_fn(n, |i, _| x[1 + n + i]);
        components.push((apex, comp1, comp2));
    }

    // normalize: the unique color with apex component 1 becomes color 0
    let mut apex_colors = Vec::new();
    for (k, (apex, _, _)) in components.iter().enumerate() {
        if (apex - C64::new(1.0, 0.0)).norm() < sqrt_tol {
            apex_colors.push(k);
        } else if apex.norm() > sqrt_tol {
            return Err(Error::InvalidCertificate {
                reason: format!("apex component of color {k} is neither 0 nor 1"),
                residual: apex.norm().min((apex - C64::new(1.0, 0.0)).norm()),
            });
        }
    }
    let [apex_color] = apex_colors[..] else {
        return Err(Error::InvalidCertificate {
            reason: format!(
                "expected exactly one color with apex component 1, found {}",
                apex_colors.len()
            ),
            residual: 0.0,
        });
    };

    let base_structure = mu.base.structure();
    let p01 = components[apex_color].1.clone();
    let p02_norm = base_structure.norm(&components[apex_color].2);
    if p02_norm > tol {
        return Err(Error::LemmaViolation { residual: p02_norm });
    }

    // commutativity hypothesis P_01 P_l2 = P_l2 P_01
    let mut comm_residual = 0.0f64;
    for (k, (_, _, comp2)) in components.iter().enumerate() {
        if k == apex_color {
            continue;
        }
        let forward = base_structure.multiply(&p01, comp2);
        let backward = base_structure.multiply(comp2, &p01);
        let denom = f64::max(1.0, base_structure.norm(comp2));
        comm_residual = comm_residual.max((forward - backward).norm() / denom);
    }
    if comm_residual > tol {
        return Err(Error::CommutativityFailure {
            residual: comm_residual,
        });
    }

    let input_report = chromatic::verify_coloring(mu.graph(), cert, tol)?;
    if !input_report.valid {
        return Err(Error::InvalidCertificate {
            reason: "input certificate does not verify on mu(G)".into(),
            residual: input_report.worst_residual,
        });
    }

    let mut projections = Vec::with_capacity(cert.colors - 1);
    for (k, (_, comp1, comp2)) in components.iter().enumerate() {
        if k == apex_color {
            continue;
        }
        let q = comp1 + base_structure.multiply(&p01, comp2);
        projections.push(base_structure.left_mult_operator(&q));
    }
    let reduced = ColoringCertificate {
        colors: cert.colors - 1,
        aux_dim: 1,
        projections,
    };
    let out_report = chromatic::verify_coloring(mu.base(), &reduced, tol)?;
    if !out_report.valid {
        return Err(Error::InvalidCertificate {
            reason: "reduced certificate failed verification".into(),
            residual: out_report.worst_residual,
        });
    }
    Ok(reduced)
}

/// A member of the Stiebitz family: the iterated Mycielskian of `K_2`
/// (or of the complete quantum graph on tracial `Mat_2` when
/// `quantum_base` is set) over `k - 2` rounds.
pub fn stiebitz_family(
    k: usize,
    rs: &[usize],
    quantum_base: bool,
    tol: f64,
) -> Result<QuantumGraph> {
    if k < 2 || rs.len() != k - 2 {
        return Err(Error::DimensionMismatch {
            expected: k.saturating_sub(2),
            found: rs.len(),
        });
    }
    let base = if quantum_base {
        qgraph::complete_quantum_graph(&qspace::tracial_space(&[2])?)?
    } else {
        qgraph::classical_to_quantum(&crate::generators::complete_graph(2))?
    };
    iterated_mycielskian(&base, rs, tol)
}
