//! Versioned JSON schemas for graphs, certificates, witnesses, isometries
//! and reports, plus the plain-text edge-list format.
//!
//! All complex scalars are stored as `[re, im]` pairs; JSON numbers carry
//! the shortest decimal that round-trips the underlying binary f64, so
//! read/write is exact and writing is byte-stable.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qmt_core::chromatic::ColoringCertificate;
use qmt_core::clique::{CliqueWitness, HomomorphismWitness};
use qmt_core::generators::EdgeList;
use qmt_core::qgraph::{self, QuantumGraph};
use qmt_core::qspace;
use qmt_core::C64;

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: &str = "1";

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &DMatrix<C64>) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> CliResult<DMatrix<C64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Malformed("matrix rows are empty or ragged".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn vector_to_json(v: &DVector<C64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_json(entries: &[[f64; 2]]) -> DVector<C64> {
    DVector::from_fn(entries.len(), |i, _| C64::new(entries[i][0], entries[i][1]))
}

/// Dense quantum-graph file: block sizes, state weights, adjacency.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub format_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub blocks: Vec<usize>,
    pub state_weights: Vec<Vec<f64>>,
    pub adjacency: JsonMatrix,
}

impl GraphFile {
    pub fn from_graph(g: &QuantumGraph, name: Option<String>, provenance: Option<String>) -> Self {
        GraphFile {
            format_version: FORMAT_VERSION.into(),
            name,
            provenance,
            blocks: g.space().blocks().to_vec(),
            state_weights: g.space().state_weights().to_vec(),
            adjacency: matrix_to_json(g.adjacency()),
        }
    }

    pub fn to_graph(&self, tol: f64) -> CliResult<QuantumGraph> {
        check_version(&self.format_version)?;
        let space = qspace::build_space(&self.blocks, &self.state_weights, tol)?;
        let adjacency = matrix_from_json(&self.adjacency)?;
        Ok(qgraph::QuantumGraph::new(space, adjacency)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format_version: String,
    pub colors: usize,
    pub aux_dim: usize,
    pub projections: Vec<JsonMatrix>,
}

impl CertificateFile {
    pub fn from_certificate(cert: &ColoringCertificate) -> Self {
        CertificateFile {
            format_version: FORMAT_VERSION.into(),
            colors: cert.colors,
            aux_dim: cert.aux_dim,
            projections: cert.projections.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_certificate(&self) -> CliResult<ColoringCertificate> {
        check_version(&self.format_version)?;
        let projections = self
            .projections
            .iter()
            .map(matrix_from_json)
            .collect::<CliResult<Vec<_>>>()?;
        Ok(ColoringCertificate {
            colors: self.colors,
            aux_dim: self.aux_dim,
            projections,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub format_version: String,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl WitnessFile {
    pub fn from_witness(w: &CliqueWitness) -> Self {
        WitnessFile {
            format_version: FORMAT_VERSION.into(),
            vectors: w.vectors.iter().map(vector_to_json).collect(),
        }
    }

    pub fn to_witness(&self) -> CliResult<CliqueWitness> {
        check_version(&self.format_version)?;
        Ok(CliqueWitness {
            vectors: self.vectors.iter().map(|v| vector_from_json(v)).collect(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryFile {
    pub format_version: String,
    pub aux_dims: [usize; 2],
    pub isometry: JsonMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<JsonMatrix>,
}

impl IsometryFile {
    pub fn from_witness(w: &HomomorphismWitness) -> Self {
        IsometryFile {
            format_version: FORMAT_VERSION.into(),
            aux_dims: [w.aux_dims.0, w.aux_dims.1],
            isometry: matrix_to_json(&w.isometry),
            lambda: w.lambda.as_ref().map(matrix_to_json),
        }
    }

    pub fn to_witness(&self) -> CliResult<HomomorphismWitness> {
        check_version(&self.format_version)?;
        Ok(HomomorphismWitness {
            isometry: matrix_from_json(&self.isometry)?,
            aux_dims: (self.aux_dims[0], self.aux_dims[1]),
            lambda: self.lambda.as_ref().map(matrix_from_json).transpose()?,
        })
    }
}

/// Standalone positive semidefinite factor for `hom --lambda`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaFile {
    pub format_version: String,
    pub matrix: JsonMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportCheck {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub elapsed_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub format_version: String,
    pub tool_version: String,
    pub input_digest: String,
    pub checks: Vec<ReportCheck>,
    pub verdict: String,
}

impl Report {
    pub fn new(input_digest: String) -> Self {
        Report {
            format_version: FORMAT_VERSION.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            input_digest,
            checks: Vec::new(),
            verdict: "pass".into(),
        }
    }

    pub fn push(&mut self, check: ReportCheck) {
        if !check.pass {
            self.verdict = "fail".into();
        }
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.verdict == "pass"
    }

    /// Text rendering carrying the same facts as the JSON document.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "tool qmt {} | input digest {}\n",
            self.tool_version, self.input_digest
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{:<24} {}  residual {:.3e}  (tol {:.1e}, {:.3}s)",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.residual,
                c.tolerance,
                c.elapsed_seconds
            ));
            if let Some(v) = c.value {
                out.push_str(&format!("  value {v}"));
            }
            if let Some(d) = &c.detail {
                out.push_str(&format!("  [{d}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

fn check_version(v: &str) -> CliResult<()> {
    if v != FORMAT_VERSION {
        return Err(CliError::Malformed(format!(
            "unsupported format_version {v:?}, expected {FORMAT_VERSION:?}"
        )));
    }
    Ok(())
}

pub fn digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let hex: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    format!("sha256:{hex}")
}

/// Parses the plain edge-list format: vertex count on the first line, then
/// one `u v` pair per line, 1-indexed.
pub fn parse_edge_list(text: &str) -> CliResult<EdgeList> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| CliError::Malformed("empty edge-list file".into()))?
        .trim()
        .parse()
        .map_err(|e| CliError::Malformed(format!("bad vertex count: {e}")))?;
    let mut edges = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(CliError::Malformed(format!(
                    "expected 'u v' on line {line:?}"
                )))
            }
        };
        let u: usize = u
            .parse()
            .map_err(|e| CliError::Malformed(format!("bad vertex {u:?}: {e}")))?;
        let v: usize = v
            .parse()
            .map_err(|e| CliError::Malformed(format!("bad vertex {v:?}: {e}")))?;
        if u == 0 || v == 0 {
            return Err(CliError::Malformed("vertices are 1-indexed".into()));
        }
        edges.push((u - 1, v - 1));
    }
    Ok(EdgeList::new(n, edges)?)
}

/// Loads a graph from a JSON graph file or an edge-list text file (detected
/// by the leading character) without running the axiom battery; returns the
/// graph with the input digest.
pub fn load_graph_unchecked(path: &std::path::Path, tol: f64) -> CliResult<(QuantumGraph, String)> {
    let bytes = std::fs::read(path)?;
    let digest = digest(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|e| CliError::Malformed(format!("input is not utf-8: {e}")))?;
    let graph = if text.trim_start().starts_with('{') {
        let file: GraphFile = serde_json::from_str(&text)?;
        file.to_graph(tol)?
    } else {
        let el = parse_edge_list(&text)?;
        qgraph::classical_to_quantum(&el)?
    };
    Ok((graph, digest))
}

/// Loads a graph and requires it to pass the quantum-graph axioms.
pub fn load_graph(path: &std::path::Path, tol: f64) -> CliResult<(QuantumGraph, String)> {
    let (graph, digest) = load_graph_unchecked(path, tol)?;
    let report = qgraph::check_axioms(&graph, tol);
    if !report.all_pass() {
        return Err(CliError::Verification(format!(
            "{} does not satisfy the quantum-graph axioms (selfadjoint {:.2e},              schur {:.2e}, one-sided {:.2e}); use `check` for the full report",
            path.display(),
            report.selfadjoint.residual,
            report.eq1.residual,
            report.eq2.residual,
        )));
    }
    Ok((graph, digest))
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
