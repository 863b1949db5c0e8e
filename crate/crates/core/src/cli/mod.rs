//! Command-line surface: grid file ingestion, the six commands and their
//! reports.
//!
//! Commands run entirely in the library; the `polygrid` binary only parses
//! arguments with [`Cli`] and forwards to [`run`]. Every command returns an
//! [`Outcome`] holding the exit code and the text for stdout and stderr.
//!
//! Exit codes: `0` success, `1` hypothesis or precondition violation
//! (including infeasible reductions and failed checks), `2` I/O, parse or
//! argument error.

mod format;
mod json;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use format::{emit_grid_file, parse_grid_file, MatrixDocument};
pub use json::{format_f64, Json};

use crate::admittance::{self, assemble, check_shunt_sum_lemma, GridModel, ReportOptions};
use crate::error::{Error, Result};
use crate::graph::{self, NodeId};
use crate::hybrid::hybrid_matrix;
use crate::linalg::{self, DEFAULT_RANK_TOL};
use crate::oracle;
use crate::reduction::{kron_reduce, sequential_reduce, verify_reduction, ReducedGrid, ZeroInjectionSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "polygrid",
    version,
    about = "Admittance matrices of unbalanced polyphase grids"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Validate parameters, connectivity and the shunt-sum property.
    Check { file: PathBuf },
    /// Assemble Y and write it as a matrix document.
    Build {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predicted against measured rank of Y, or of Y[M, M] with --subset.
    Rank {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
        /// Relative singular value threshold.
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
        /// Measure even when the preconditions fail.
        #[arg(long)]
        force: bool,
    },
    /// Kron-reduce zero-injection nodes.
    Reduce {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        eliminate: Vec<String>,
        /// Stages separated by ';', nodes within a stage by ','.
        #[arg(long)]
        sequential: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Random voltage trials, written `trials=T` or `T`.
        #[arg(long)]
        verify: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hybrid parameters for the partition (set, complement).
    Hybrid {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ground everything outside --subset and report what folds where.
    Explain {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Build { .. } => "build",
            Command::Rank { .. } => "rank",
            Command::Reduce { .. } => "reduce",
            Command::Hybrid { .. } => "hybrid",
            Command::Explain { .. } => "explain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Violation => EXIT_VIOLATION,
            Status::Error => EXIT_INPUT,
        }
    }
}

/// Command report. The JSON form has the fields `command`, `status`,
/// `predicted`, `measured`, `residuals`, `violations` and `details`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub predicted: Option<usize>,
    pub measured: Option<usize>,
    pub residuals: Vec<(String, f64)>,
    pub violations: Vec<String>,
    pub details: Vec<(String, Json)>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            status: Status::Ok,
            predicted: None,
            measured: None,
            residuals: Vec::new(),
            violations: Vec::new(),
            details: Vec::new(),
        }
    }

    fn residual(&mut self, name: &str, value: f64) {
        self.residuals.push((name.to_string(), value));
    }

    fn detail(&mut self, name: &str, value: Json) {
        self.details.push((name.to_string(), value));
    }

    fn violation(&mut self, v: impl Into<String>) {
        self.violations.push(v.into());
        if self.status == Status::Ok {
            self.status = Status::Violation;
        }
    }

    /// Folds a failed command into the report.
    fn fail(&mut self, err: &Error) {
        match err {
            Error::HypothesisViolation(list) => {
                for v in list {
                    self.violation(v.to_string());
                }
            }
            Error::PreconditionViolated(p) => self.violation(p.tag()),
            Error::Parse { .. }
            | Error::Io(_)
            | Error::UnknownNode(_)
            | Error::Usage(_)
            | Error::InvalidTolerance(_) => {
                self.violations.push(err.to_string());
                self.status = Status::Error;
            }
            other => self.violation(other.to_string()),
        }
    }

    pub fn to_json(&self) -> Json {
        let opt = |v: Option<usize>| v.map_or(Json::Null, |x| Json::Int(x as i64));
        Json::obj([
            ("command", Json::str(self.command)),
            ("status", Json::str(self.status.tag())),
            ("predicted", opt(self.predicted)),
            ("measured", opt(self.measured)),
            (
                "residuals",
                Json::Obj(self.residuals.iter().map(|(k, v)| (k.clone(), Json::Num(*v))).collect()),
            ),
            ("violations", Json::strings(&self.violations)),
            ("details", Json::Obj(self.details.clone())),
        ])
    }

    /// `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("command={}\nstatus={}\n", self.command, self.status.tag());
        if let Some(p) = self.predicted {
            out += &format!("predicted={p}\n");
        }
        if let Some(m) = self.measured {
            out += &format!("measured={m}\n");
        }
        for (k, v) in &self.residuals {
            out += &format!("residual.{k}={}\n", format_f64(*v));
        }
        for (k, v) in &self.details {
            out += &format!("{k}={}\n", v.inline());
        }
        for v in &self.violations {
            out += &format!("violation={v}\n");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Report,
}

/// Runs one command.
pub fn run(cli: &Cli) -> Outcome {
    let mut report = Report::new(cli.command.name());
    if let Err(e) = execute(&cli.command, &mut report) {
        report.fail(&e);
    }
    let stdout = if cli.json {
        report.to_json().render()
    } else {
        report.to_text()
    };
    let stderr = match report.status {
        Status::Error => report.violations.iter().map(|v| format!("error: {v}\n")).collect(),
        _ => String::new(),
    };
    Outcome {
        exit_code: report.status.exit_code(),
        stdout,
        stderr,
        report,
    }
}

/// Reads and parses a grid file.
pub fn load_grid(path: &Path) -> Result<GridModel> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_grid_file(&text)
}

fn write_doc(path: &Path, doc: &Json) -> Result<()> {
    fs::write(path, doc.render())
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn resolve(model: &GridModel, names: &[String]) -> Result<Vec<NodeId>> {
    let names: Vec<&str> = names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    model.resolve(&names)
}

fn names_of(model: &GridModel, ids: &[NodeId]) -> Vec<String> {
    ids.iter().map(|&n| model.node_name(n).to_string()).collect()
}

fn execute(cmd: &Command, r: &mut Report) -> Result<()> {
    match cmd {
        Command::Check { file } => check(&load_grid(file)?, r),
        Command::Build { file, out } => build(&load_grid(file)?, out, r),
        Command::Rank {
            file,
            subset,
            tol,
            force,
        } => rank(&load_grid(file)?, subset, *tol, *force, r),
        Command::Reduce {
            file,
            eliminate,
            sequential,
            out,
            verify,
            seed,
        } => reduce(
            &load_grid(file)?,
            eliminate,
            sequential.as_deref(),
            out,
            verify.as_deref(),
            *seed,
            r,
        ),
        Command::Hybrid { file, set, out } => hybrid(&load_grid(file)?, set, out, r),
        Command::Explain { file, subset } => explain(&load_grid(file)?, subset, r),
    }
}

fn summary(model: &GridModel, r: &mut Report) {
    r.detail("phases", Json::Int(model.phase_count() as i64));
    r.detail("nodes", Json::Int(model.node_count() as i64));
    r.detail("branches", Json::Int(model.graph().edge_count() as i64));
}

fn check(model: &GridModel, r: &mut Report) -> Result<()> {
    summary(model, r);
    let shunts = model.shunt_admittances().iter().filter(|s| !s.is_zero()).count();
    r.detail("nonzero_shunts", Json::Int(shunts as i64));
    r.detail("strictly_passive", Json::Bool(model.is_strictly_passive()));
    let parts = graph::components(model.graph()).len();
    r.detail("components", Json::Int(parts as i64));
    let y = assemble(model)?;
    let scale = y.data().max_abs().max(1.0);
    let lemma = check_shunt_sum_lemma(model, &y, 1e-12 * scale);
    r.residual("shunt_sum", lemma.max_residual);
    r.residual("symmetry", linalg::symmetry_defect(y.data()));
    if parts != 1 {
        r.violation(crate::error::Precondition::NotWeaklyConnected.tag());
    }
    if !lemma.passed {
        r.violation("shunt_sum_mismatch");
    }
    Ok(())
}

fn build(model: &GridModel, out: &Path, r: &mut Report) -> Result<()> {
    summary(model, r);
    let y = assemble(model)?;
    let doc = MatrixDocument {
        kind: "admittance".into(),
        phases: model.phase_count(),
        nodes: model.node_names().to_vec(),
        matrix: y.into_data(),
    };
    write_doc(out, &doc.to_json())?;
    r.detail("out", Json::str(out.display().to_string()));
    Ok(())
}

fn rank(model: &GridModel, subset: &[String], tol: f64, force: bool, r: &mut Report) -> Result<()> {
    let opts = ReportOptions { rel_tol: tol, force };
    let subset = resolve(model, subset)?;
    let report = if subset.is_empty() {
        r.detail("matrix", Json::str("Y"));
        admittance::rank_report_with(model, &opts)?
    } else {
        r.detail("matrix", Json::str("Y[M, M]"));
        let mut sorted = subset.clone();
        sorted.sort_unstable();
        sorted.dedup();
        r.detail("subset", Json::strings(&names_of(model, &sorted)));
        admittance::block_rank_report_with(model, &subset, &opts)?
    };
    r.predicted = Some(report.predicted);
    r.measured = Some(report.measured);
    r.detail("agrees", Json::Bool(report.agrees));
    r.detail("tolerance_used", Json::Num(report.tolerance_used));
    if !report.agrees {
        r.violation("rank_mismatch");
    }
    Ok(())
}

fn parse_stages(model: &GridModel, text: &str) -> Result<Vec<Vec<NodeId>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|stage| {
            let names: Vec<String> = stage.split(',').map(str::to_string).collect();
            resolve(model, &names)
        })
        .collect()
}

fn parse_trials(text: &str) -> Result<usize> {
    let value = text.strip_prefix("trials=").unwrap_or(text);
    value
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("--verify expects trials=T, got {text:?}")))
}

fn reduce(
    model: &GridModel,
    eliminate: &[String],
    sequential: Option<&str>,
    out: &Path,
    verify: Option<&str>,
    seed: u64,
    r: &mut Report,
) -> Result<()> {
    let y = assemble(model)?;
    let eliminate = resolve(model, eliminate)?;
    let rg: ReducedGrid = match sequential {
        Some(text) => {
            let stages = parse_stages(model, text)?;
            if !eliminate.is_empty() {
                let mut a: Vec<NodeId> = stages.concat();
                let mut b = eliminate.clone();
                a.sort_unstable();
                b.sort_unstable();
                b.dedup();
                if a != b {
                    return Err(Error::Usage(
                        "--sequential stages must cover exactly the --eliminate set".into(),
                    ));
                }
            }
            r.detail("stages", Json::Int(stages.len() as i64));
            sequential_reduce(&y, &stages)?
        }
        None if eliminate.is_empty() => {
            return Err(Error::Usage("reduce needs --eliminate or --sequential".into()));
        }
        None => kron_reduce(&y, &ZeroInjectionSet::new(y.node_count(), &eliminate)?)?,
    };
    r.detail("retained", Json::strings(&names_of(model, &rg.retained_nodes)));
    r.detail("eliminated", Json::strings(&names_of(model, &rg.eliminated_nodes)));

    let doc = Json::obj([
        ("kind", Json::str("kron_reduction")),
        ("phases", Json::Int(model.phase_count() as i64)),
        ("nodes", Json::strings(&names_of(model, &rg.retained_nodes))),
        ("eliminated", Json::strings(&names_of(model, &rg.eliminated_nodes))),
        ("matrix", Json::matrix(rg.reduced_matrix.data())),
        ("elimination_map", Json::matrix(&rg.elimination_map)),
    ]);
    write_doc(out, &doc)?;
    r.detail("out", Json::str(out.display().to_string()));

    if let Some(v) = verify {
        let trials = parse_trials(v)?;
        let check = verify_reduction(model, &rg, trials, 1e-9, seed)?;
        r.detail("trials", Json::Int(trials as i64));
        r.detail("seed", Json::Int(seed as i64));
        r.residual("eliminated_current", check.max_eliminated_current);
        r.residual("retained_mismatch", check.max_retained_mismatch);
        if !check.passed {
            r.violation("verification_failed");
        }
    }
    Ok(())
}

fn hybrid(model: &GridModel, set: &[String], out: &Path, r: &mut Report) -> Result<()> {
    let y = assemble(model)?;
    let h = hybrid_matrix(&y, &resolve(model, set)?)?;
    let m_names = names_of(model, &h.m_set);
    let c_names = names_of(model, &h.complement);
    let doc = Json::obj([
        ("kind", Json::str("hybrid")),
        ("phases", Json::Int(h.block_size as i64)),
        ("m_set", Json::strings(&m_names)),
        ("complement", Json::strings(&c_names)),
        ("h_mm", Json::matrix(&h.h_mm)),
        ("h_mmc", Json::matrix(&h.h_mmc)),
        ("h_mcm", Json::matrix(&h.h_mcm)),
        ("h_mcmc", Json::matrix(&h.h_mcmc)),
    ]);
    write_doc(out, &doc)?;
    r.detail("m_set", Json::strings(&m_names));
    r.detail("complement", Json::strings(&c_names));
    r.detail("out", Json::str(out.display().to_string()));
    Ok(())
}

fn explain(model: &GridModel, subset: &[String], r: &mut Report) -> Result<()> {
    let y = assemble(model)?;
    let grounded = oracle::ground_complement(model, &resolve(model, subset)?)?;
    let fictional = assemble(&grounded.model)?;
    let expected = y.subblock(&grounded.nodes, &grounded.nodes)?;
    r.residual("subblock_identity", fictional.data().max_abs_diff(&expected));
    r.predicted = Some(grounded.nodes.len() * model.phase_count());
    r.measured = Some(linalg::numerical_rank(fictional.data(), DEFAULT_RANK_TOL)?.numerical_rank);

    r.detail("subset", Json::strings(&names_of(model, &grounded.nodes)));
    r.detail("strictly_passive", Json::Bool(model.is_strictly_passive()));
    r.detail(
        "weakly_connected",
        Json::Bool(graph::is_weakly_connected(model.graph())),
    );
    for (k, comp) in grounded.components.iter().enumerate() {
        r.detail(
            &format!("component.{k}.nodes"),
            Json::strings(&names_of(model, &comp.nodes)),
        );
        let cut: Vec<String> = comp.cut_edges.iter().map(|&e| model.describe_edge(e)).collect();
        r.detail(&format!("component.{k}.cut"), Json::strings(&cut));
        if comp.cut_edges.is_empty() {
            r.violation(format!("component {k} has no cut branch"));
        }
    }
    for (k, folded) in grounded.folded_branches.iter().enumerate() {
        let name = grounded.model.node_name(NodeId(k));
        let list: Vec<String> = folded.iter().map(|&e| model.describe_edge(e)).collect();
        r.detail(&format!("folded.{name}"), Json::strings(&list));
        r.detail(
            &format!("folded_shunt_nonzero.{name}"),
            Json::Bool(!grounded.model.shunt(NodeId(k)).is_zero()),
        );
    }

    if model.has_nonzero_shunt() {
        let augmented = oracle::augment_virtual_ground(model)?;
        let aug_rank = linalg::numerical_rank(assemble(&augmented)?.data(), DEFAULT_RANK_TOL)?;
        let (ground, body) = oracle::virtual_ground_elimination_residual(model)?;
        r.detail(
            "augmented.predicted",
            Json::Int((model.node_count() * model.phase_count()) as i64),
        );
        r.detail("augmented.measured", Json::Int(aug_rank.numerical_rank as i64));
        r.residual("ground_elimination", ground);
        r.residual("ground_body", body);
    }
    if r.predicted != r.measured && model.is_strictly_passive() {
        r.violation("rank_mismatch");
    }
    Ok(())
}
