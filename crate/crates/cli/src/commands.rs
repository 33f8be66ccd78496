//! Subcommand definitions and handlers.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qmt_core::chromatic;
use qmt_core::clique::{self, Cone, HomomorphismWitness};
use qmt_core::generators;
use qmt_core::mycielski;
use qmt_core::qgraph::{self, QuantumGraph};
use qmt_core::qspace;

use crate::error::{CliError, CliResult};
use crate::format::{
    self, CertificateFile, GraphFile, IsometryFile, LambdaFile, Report, ReportCheck, WitnessFile,
};

#[derive(Parser, Debug)]
#[command(
    name = "qmt",
    version,
    about = "Quantum graphs, Mycielski transformations, and coloring/clique verification"
)]
pub struct Cli {
    /// Relative tolerance for all residual checks.
    #[arg(long, global = true, default_value_t = qmt_core::DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated graph file. Names: kn N | cn N | groetzsch | g13 |
    /// g14 | complete-classical N | complete-quantum N1 N2 ... |
    /// mycielski-k2 R1 R2 ...
    Generate {
        /// Generator name followed by its integer parameters.
        spec: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run the full axiom report on a graph; exit 0 iff all axioms pass.
    Check {
        graph: PathBuf,
        /// Load and validate the state only, skipping the axiom battery.
        #[arg(long)]
        unchecked: bool,
    },
    /// Write the Mycielski transformation with r copies, plus its report.
    Mycielski {
        graph: PathBuf,
        #[arg(short)]
        r: usize,
        #[arg(short, long)]
        out: PathBuf,
        /// Also write the copy-1 embedding as an isometry file.
        #[arg(long)]
        emit_iota1: Option<PathBuf>,
    },
    /// Exact chromatic number (classical graphs) or certificate checking.
    Chromatic {
        graph: PathBuf,
        /// Verify a coloring certificate instead of solving.
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Also solve the r-copy Mycielskian and report both bounds.
        #[arg(long, value_name = "R")]
        compare_mycielski: Option<usize>,
    },
    /// Exact clique number (classical graphs) or witness checking.
    Clique {
        graph: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Multi-start Motzkin-Straus ascent over a cone.
    MotzkinStraus {
        graph: PathBuf,
        #[arg(long, value_enum)]
        cone: ConeArg,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
    },
    /// Verify a homomorphism witness between two graphs.
    Hom {
        g: PathBuf,
        f: PathBuf,
        #[arg(long)]
        isometry: PathBuf,
        #[arg(long)]
        lambda: Option<PathBuf>,
    },
    /// Full verification battery as a single JSON document.
    Report {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ConeArg {
    Simplex,
    Psd,
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let tol = cli.tol;
    let seed = cli.seed;
    match cli.command {
        Command::Generate { spec, out: path } => generate(&spec, &path, out),
        Command::Check { graph, unchecked } => check(&graph, unchecked, tol, out),
        Command::Mycielski {
            graph,
            r,
            out: path,
            emit_iota1,
        } => mycielski_cmd(&graph, r, &path, emit_iota1.as_deref(), tol, out),
        Command::Chromatic {
            graph,
            verify,
            compare_mycielski,
        } => chromatic_cmd(&graph, verify.as_deref(), compare_mycielski, tol, out),
        Command::Clique { graph, witness } => clique_cmd(&graph, witness.as_deref(), tol, out),
        Command::MotzkinStraus {
            graph,
            cone,
            restarts,
            iters,
        } => motzkin_cmd(&graph, cone, restarts, iters, seed, tol, out),
        Command::Hom {
            g,
            f,
            isometry,
            lambda,
        } => hom_cmd(&g, &f, &isometry, lambda.as_deref(), tol, out),
        Command::Report { graph, out: path } => report_cmd(&graph, path.as_deref(), tol, seed, out),
    }
}

fn parse_param(value: &str, what: &str) -> CliResult<usize> {
    value
        .parse()
        .map_err(|e| CliError::Malformed(format!("bad {what} {value:?}: {e}")))
}

fn generate(spec: &[String], path: &Path, out: &mut dyn Write) -> CliResult<i32> {
    let unknown = || CliError::Malformed(format!("unknown generator: {:?}", spec.join(" ")));
    let (name, rest) = spec.split_first().ok_or_else(unknown)?;
    let graph = match (name.as_str(), rest) {
        ("kn", [n]) => {
            qgraph::classical_to_quantum(&generators::complete_graph(parse_param(n, "n")?))?
        }
        ("cn", [n]) => {
            let n = parse_param(n, "n")?;
            if n < 3 {
                return Err(CliError::Malformed("cn needs n >= 3".into()));
            }
            qgraph::classical_to_quantum(&generators::cycle_graph(n))?
        }
        ("groetzsch", []) => qgraph::classical_to_quantum(&generators::groetzsch())?,
        ("g13", []) => qgraph::classical_to_quantum(&generators::g13())?,
        ("g14", []) => qgraph::classical_to_quantum(&generators::g14())?,
        ("complete-classical", [n]) => {
            qgraph::complete_quantum_graph(&qspace::classical_space(parse_param(n, "n")?)?)?
        }
        ("complete-quantum", blocks) if !blocks.is_empty() => {
            let blocks = blocks
                .iter()
                .map(|b| parse_param(b, "block size"))
                .collect::<CliResult<Vec<_>>>()?;
            qgraph::complete_quantum_graph(&qspace::tracial_space(&blocks)?)?
        }
        ("mycielski-k2", rs) if !rs.is_empty() => {
            let rs = rs
                .iter()
                .map(|r| parse_param(r, "copy count"))
                .collect::<CliResult<Vec<_>>>()?;
            if rs.iter().any(|&r| r < 1) {
                return Err(CliError::Malformed("copy counts must be >= 1".into()));
            }
            let el = generators::iterated_classical_mycielskian(&generators::complete_graph(2), &rs);
            qgraph::classical_to_quantum(&el)?
        }
        _ => return Err(unknown()),
    };
    let file = GraphFile::from_graph(
        &graph,
        Some(spec.join(" ")),
        Some("qmt generate".to_string()),
    );
    format::write_json(path, &file)?;
    writeln!(out, "wrote {} ({} basis elements)", path.display(), graph.dim())?;
    Ok(0)
}

fn axiom_report(g: &QuantumGraph, digest: String, tol: f64) -> Report {
    let mut report = Report::new(digest);
    let t = Instant::now();
    let d2 = g.delta_squared();
    let s = g.structure();
    let residual = qmt_core::linalg::rel_err_scaled_id(&(s.mult() * s.comult()), d2);
    report.push(ReportCheck {
        name: "delta_form".into(),
        pass: residual < tol,
        residual,
        tolerance: tol,
        elapsed_seconds: t.elapsed().as_secs_f64(),
        value: Some(d2),
        detail: Some("delta^2 from m m* = delta^2 id".into()),
    });
    let t = Instant::now();
    let axioms = qgraph::check_axioms(g, tol);
    let elapsed = t.elapsed().as_secs_f64();
    for (name, check) in [
        ("selfadjoint", axioms.selfadjoint),
        ("schur_idempotent", axioms.eq1),
        ("one_sided_identity", axioms.eq2),
    ] {
        report.push(ReportCheck {
            name: name.into(),
            pass: check.pass,
            residual: check.residual,
            tolerance: tol,
            elapsed_seconds: elapsed,
            value: None,
            detail: None,
        });
    }
    report.push(ReportCheck {
        name: "reflexivity".into(),
        pass: true,
        residual: axioms.reflexivity.residual,
        tolerance: tol,
        elapsed_seconds: elapsed,
        value: None,
        detail: Some(format!("{:?}", axioms.reflexivity.kind)),
    });
    report
}

fn check(path: &Path, unchecked: bool, tol: f64, out: &mut dyn Write) -> CliResult<i32> {
    let (graph, digest) = format::load_graph_unchecked(path, tol)?;
    if unchecked {
        writeln!(
            out,
            "loaded {} basis elements, delta^2 = {} (axioms not checked)",
            graph.dim(),
            graph.delta_squared()
        )?;
        return Ok(0);
    }
    let report = axiom_report(&graph, digest, tol);
    write!(out, "{}", report.render_text())?;
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn mycielski_cmd(
    path: &Path,
    r: usize,
    out_path: &Path,
    emit_iota1: Option<&Path>,
    tol: f64,
    out: &mut dyn Write,
) -> CliResult<i32> {
    if r < 1 {
        return Err(CliError::Malformed("r must be >= 1".into()));
    }
    // the transformation re-checks the axioms itself
    let (graph, digest) = format::load_graph_unchecked(path, tol)?;
    let mu = mycielski::mycielskian(&graph, r, tol)?;
    let file = GraphFile::from_graph(
        mu.graph(),
        Some(format!("mycielski r={r}")),
        Some(format!("qmt mycielski of {}", digest)),
    );
    format::write_json(out_path, &file)?;
    if let Some(iota_path) = emit_iota1 {
        let witness = HomomorphismWitness::plain(mu.iota(1).clone());
        format::write_json(iota_path, &IsometryFile::from_witness(&witness))?;
    }
    writeln!(
        out,
        "wrote {} ({} -> {} basis elements, formula residual {:.3e})",
        out_path.display(),
        graph.dim(),
        mu.graph().dim(),
        mu.formula_residual()
    )?;
    let report = axiom_report(mu.graph(), digest, tol);
    write!(out, "{}", report.render_text())?;
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn chromatic_cmd(
    path: &Path,
    verify: Option<&Path>,
    compare_mycielski: Option<usize>,
    tol: f64,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let (graph, _) = format::load_graph(path, tol)?;
    if let Some(cert_path) = verify {
        let file: CertificateFile = format::read_json(cert_path)?;
        let cert = file.to_certificate()?;
        let report = chromatic::verify_coloring(&graph, &cert, tol)?;
        writeln!(
            out,
            "certificate with {} colors (aux dim {}): {} (worst residual {:.3e})",
            cert.colors,
            cert.aux_dim,
            if report.valid { "valid" } else { "INVALID" },
            report.worst_residual
        )?;
        return Ok(if report.valid { 0 } else { 1 });
    }
    let (chi, _) = chromatic::chi_loc_exact(&graph, tol)?;
    writeln!(out, "chi_loc = {chi}")?;
    if let Some(r) = compare_mycielski {
        if r < 1 {
            return Err(CliError::Malformed("r must be >= 1".into()));
        }
        let rows = chromatic::monotonicity_harness(&graph, &[r], tol)?;
        let row = &rows[0];
        writeln!(
            out,
            "chi_loc(mu_{}(G)) = {}; bounds chi <= chi_mu <= chi + 1 hold; {}",
            r - 1,
            row.chi_mu,
            if row.upper_tight {
                "upper bound tight"
            } else {
                "lower bound tight"
            }
        )?;
    }
    Ok(0)
}

fn clique_cmd(path: &Path, witness: Option<&Path>, tol: f64, out: &mut dyn Write) -> CliResult<i32> {
    let (graph, _) = format::load_graph(path, tol)?;
    if let Some(witness_path) = witness {
        let file: WitnessFile = format::read_json(witness_path)?;
        let w = file.to_witness()?;
        let report = clique::verify_clique_witness(&graph, &w, tol)?;
        writeln!(
            out,
            "witness of size {}: {} (worst residual {:.3e})",
            w.size(),
            if report.valid { "valid" } else { "INVALID" },
            report.worst_residual
        )?;
        return Ok(if report.valid { 0 } else { 1 });
    }
    let (omega, w) = clique::omega_exact_classical(&graph, tol)?;
    writeln!(out, "omega = {omega} (witness of {} vertex vectors)", w.size())?;
    Ok(0)
}

fn motzkin_cmd(
    path: &Path,
    cone: ConeArg,
    restarts: usize,
    iters: usize,
    seed: u64,
    tol: f64,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let (graph, _) = format::load_graph(path, tol)?;
    let cone = match cone {
        ConeArg::Simplex => Cone::SimplexInBasis,
        ConeArg::Psd => Cone::PsdNormalized,
    };
    let outcome = clique::motzkin_straus(&graph, cone, restarts, iters, seed, tol)?;
    writeln!(
        out,
        "best value {} over {restarts} restarts; omega_S = {}",
        outcome.value, outcome.omega_ms
    )?;
    if let (Some(omega), Some(gap)) = (outcome.omega_exact, outcome.exact_gap) {
        writeln!(out, "exact omega = {omega}; |value - (1 - 1/omega)| = {gap:.3e}")?;
    }
    writeln!(
        out,
        "note: the cone choice is exploratory; values are best-found, not certified optima"
    )?;
    Ok(0)
}

fn hom_cmd(
    g_path: &Path,
    f_path: &Path,
    isometry: &Path,
    lambda: Option<&Path>,
    tol: f64,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let (g, _) = format::load_graph(g_path, tol)?;
    let (f, _) = format::load_graph(f_path, tol)?;
    let file: IsometryFile = format::read_json(isometry)?;
    let mut witness = file.to_witness()?;
    if let Some(lambda_path) = lambda {
        let lf: LambdaFile = format::read_json(lambda_path)?;
        witness.lambda = Some(format::matrix_from_json(&lf.matrix)?);
    }
    let report = clique::verify_homomorphism(&g, &f, &witness, tol)?;
    writeln!(
        out,
        "homomorphism witness: {} (worst residual {:.3e})",
        if report.valid { "valid" } else { "INVALID" },
        report.worst_residual
    )?;
    Ok(if report.valid { 0 } else { 1 })
}

fn report_cmd(
    path: &Path,
    out_path: Option<&Path>,
    tol: f64,
    seed: u64,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let (graph, digest) = format::load_graph(path, tol)?;
    let mut report = axiom_report(&graph, digest, tol);

    let t = Instant::now();
    let s = qgraph::operator_space(&graph, tol)?;
    let classical = qgraph::quantum_to_classical(&graph, tol).ok();
    let expected_dim = classical.as_ref().map(|el| 2 * el.edges.len());
    report.push(ReportCheck {
        name: "operator_space_dim".into(),
        pass: expected_dim.is_none_or(|d| d == s.dim()),
        residual: 0.0,
        tolerance: tol,
        elapsed_seconds: t.elapsed().as_secs_f64(),
        value: Some(s.dim() as f64),
        detail: expected_dim.map(|d| format!("classical graph, 2|E| = {d}")),
    });

    if classical.is_some() {
        let t = Instant::now();
        let (chi, _) = chromatic::chi_loc_exact(&graph, tol)?;
        report.push(ReportCheck {
            name: "chi_loc".into(),
            pass: true,
            residual: 0.0,
            tolerance: tol,
            elapsed_seconds: t.elapsed().as_secs_f64(),
            value: Some(chi as f64),
            detail: None,
        });
        let t = Instant::now();
        let (omega, _) = clique::omega_exact_classical(&graph, tol)?;
        report.push(ReportCheck {
            name: "omega".into(),
            pass: true,
            residual: 0.0,
            tolerance: tol,
            elapsed_seconds: t.elapsed().as_secs_f64(),
            value: Some(omega as f64),
            detail: None,
        });
        let t = Instant::now();
        let outcome =
            clique::motzkin_straus(&graph, Cone::SimplexInBasis, 50, 2000, seed, tol)?;
        report.push(ReportCheck {
            name: "motzkin_straus_simplex".into(),
            pass: outcome.exact_gap.is_none_or(|g| g < 1e-6),
            residual: outcome.exact_gap.unwrap_or(0.0),
            tolerance: 1e-6,
            elapsed_seconds: t.elapsed().as_secs_f64(),
            value: Some(outcome.value),
            detail: Some("exploratory cone; best-found value".into()),
        });
    }

    let json = serde_json::to_string_pretty(&report)?;
    if let Some(p) = out_path {
        std::fs::write(p, format!("{json}\n"))?;
        writeln!(out, "wrote {}", p.display())?;
    } else {
        writeln!(out, "{json}")?;
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}
