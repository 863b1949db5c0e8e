//! The grid file format and the matrix documents written by the commands.
//!
//! A grid file is JSON:
//!
//! ```text
//! {
//!   "phases": 1,
//!   "nodes": [{"name": "a", "shunt": [[[0.0, 0.1]]]}, {"name": "b"}],
//!   "branches": [{"from": "a", "to": "b", "impedance": [[[1.0, 1.0]]]}],
//!   "tees": [{"from": "b", "to": "a", "z_primary": ..., "z_secondary": ..., "y_center": ...}]
//! }
//! ```
//!
//! Complex scalars are `[re, im]`; matrices are row-major nested arrays of
//! scalars. `branches` and `tees` may be omitted.

use serde::Deserialize;

use super::json::Json;
use crate::admittance::{GridBuilder, GridModel};
use crate::error::{Error, Result, Violation};
use crate::graph::NodeId;
use crate::linalg::{Complex64, ComplexMatrix};

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    phases: usize,
    nodes: Vec<NodeEntry>,
    #[serde(default)]
    branches: Vec<BranchEntry>,
    #[serde(default)]
    tees: Vec<TeeEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeEntry {
    name: String,
    #[serde(default)]
    shunt: Option<RawMatrix>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchEntry {
    from: String,
    to: String,
    impedance: RawMatrix,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TeeEntry {
    from: String,
    to: String,
    z_primary: RawMatrix,
    z_secondary: RawMatrix,
    y_center: RawMatrix,
}

fn to_matrix(raw: &RawMatrix) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

/// Collects element-level problems before the model is built.
struct Collector {
    violations: Vec<Violation>,
}

impl Collector {
    fn flag(&mut self, element: String, reason: &str) {
        self.violations.push(Violation {
            element,
            reasons: vec![reason.to_string()],
        });
    }

    fn matrix(&mut self, element: &str, raw: &RawMatrix) -> Option<ComplexMatrix> {
        match to_matrix(raw) {
            Ok(m) => Some(m),
            Err(_) => {
                self.flag(element.to_string(), "ragged_matrix");
                None
            }
        }
    }
}

/// Parses a grid file. Syntax and schema errors give [`Error::Parse`] with
/// the offending line; duplicate names, unresolved endpoints, wrong sizes
/// and hypothesis failures are collected into one
/// [`Error::HypothesisViolation`].
pub fn parse_grid_file(text: &str) -> Result<GridModel> {
    let file: GridFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut c = Collector { violations: Vec::new() };
    if file.phases == 0 {
        c.flag("document".into(), "invalid_phase_count");
        return Err(Error::HypothesisViolation(c.violations));
    }

    let mut builder = GridBuilder::new(file.phases);
    let mut ids: Vec<(String, NodeId)> = Vec::new();
    for node in &file.nodes {
        if ids.iter().any(|(n, _)| *n == node.name) {
            c.flag(format!("node {}", node.name), "duplicate_name");
            continue;
        }
        let id = builder.add_node(node.name.clone())?;
        ids.push((node.name.clone(), id));
        if let Some(raw) = &node.shunt {
            if let Some(y) = c.matrix(&format!("node {}", node.name), raw) {
                builder.add_shunt(id, y)?;
            }
        }
    }
    let lookup = |name: &str| ids.iter().find(|(n, _)| n == name).map(|&(_, id)| id);

    let endpoints = |c: &mut Collector, label: String, from: &str, to: &str| -> Option<(NodeId, NodeId)> {
        match (lookup(from), lookup(to)) {
            (Some(a), Some(b)) if a == b => {
                c.flag(label, "self_loop");
                None
            }
            (Some(a), Some(b)) => Some((a, b)),
            _ => {
                c.flag(label, "unknown_endpoint");
                None
            }
        }
    };

    let mut branch_ok = Vec::new();
    for (k, br) in file.branches.iter().enumerate() {
        let label = format!("branch {k} ({} -> {})", br.from, br.to);
        let ends = endpoints(&mut c, label.clone(), &br.from, &br.to);
        let z = c.matrix(&label, &br.impedance);
        branch_ok.push(ends.zip(z));
    }
    let mut tee_ok = Vec::new();
    for (k, tee) in file.tees.iter().enumerate() {
        let label = format!("tee {k} ({} -> {})", tee.from, tee.to);
        let ends = endpoints(&mut c, label.clone(), &tee.from, &tee.to);
        let zp = c.matrix(&format!("{label} z_primary"), &tee.z_primary);
        let zs = c.matrix(&format!("{label} z_secondary"), &tee.z_secondary);
        let yc = c.matrix(&format!("{label} y_center"), &tee.y_center);
        tee_ok.push(ends.zip(zp.zip(zs).zip(yc)));
    }
    if !c.violations.is_empty() {
        return Err(Error::HypothesisViolation(c.violations));
    }

    for ((from, to), z) in branch_ok.into_iter().flatten() {
        builder.add_branch(from, to, z)?;
    }
    for ((from, to), ((zp, zs), yc)) in tee_ok.into_iter().flatten() {
        builder.add_tee(from, to, zp, zs, yc)?;
    }
    builder.build()
}

/// Writes a model back as a grid file. Tees are re-emitted as tees, so
/// parsing the output reproduces the model exactly.
pub fn emit_grid_file(model: &GridModel) -> String {
    let p = model.phase_count();
    let is_tee_edge = |e: usize| {
        model
            .tees()
            .iter()
            .any(|t| t.primary_edge == e || t.secondary_edge == e)
    };
    let nodes = model
        .graph()
        .nodes()
        .filter(|&n| !model.is_virtual(n))
        .map(|n| {
            let mut fields = vec![("name", Json::str(model.node_name(n)))];
            let shunt = model.shunt(n).matrix();
            if shunt.max_abs() != 0.0 {
                fields.push(("shunt", Json::matrix(shunt)));
            }
            Json::obj(fields)
        })
        .collect();
    let branches = model
        .graph()
        .edges()
        .iter()
        .filter(|e| !is_tee_edge(e.edge_index))
        .map(|e| {
            Json::obj([
                ("from", Json::str(model.node_name(e.from))),
                ("to", Json::str(model.node_name(e.to))),
                (
                    "impedance",
                    Json::matrix(model.branch_impedances()[e.edge_index].matrix()),
                ),
            ])
        })
        .collect();
    let tees = model
        .tees()
        .iter()
        .map(|t| {
            Json::obj([
                ("from", Json::str(model.node_name(t.from))),
                ("to", Json::str(model.node_name(t.to))),
                (
                    "z_primary",
                    Json::matrix(model.branch_impedances()[t.primary_edge].matrix()),
                ),
                (
                    "z_secondary",
                    Json::matrix(model.branch_impedances()[t.secondary_edge].matrix()),
                ),
                ("y_center", Json::matrix(model.shunt(t.center).matrix())),
            ])
        })
        .collect();
    Json::obj([
        ("phases", Json::Int(p as i64)),
        ("nodes", Json::Arr(nodes)),
        ("branches", Json::Arr(branches)),
        ("tees", Json::Arr(tees)),
    ])
    .render()
}

/// A single matrix with its node ordering, as written by `build` and
/// `reduce`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub kind: String,
    pub phases: usize,
    pub nodes: Vec<String>,
    pub matrix: ComplexMatrix,
}

#[derive(Deserialize)]
struct RawMatrixDocument {
    kind: String,
    phases: usize,
    nodes: Vec<String>,
    matrix: RawMatrix,
}

impl MatrixDocument {
    pub fn to_json(&self) -> Json {
        Json::obj([
            ("kind", Json::str(self.kind.clone())),
            ("phases", Json::Int(self.phases as i64)),
            ("nodes", Json::strings(&self.nodes)),
            ("matrix", Json::matrix(&self.matrix)),
        ])
    }

    /// Reads the `kind`, `phases`, `nodes` and `matrix` fields of a matrix
    /// document; other fields are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawMatrixDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let matrix = to_matrix(&raw.matrix).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })?;
        Ok(Self {
            kind: raw.kind,
            phases: raw.phases,
            nodes: raw.nodes,
            matrix,
        })
    }
}
