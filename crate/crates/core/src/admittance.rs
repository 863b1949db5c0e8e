//! Grid model and the compound nodal admittance matrix.
//!
//! `Y = (A ⊗ I_P)ᵀ · diag(Z_ℓ⁻¹) · (A ⊗ I_P) + diag(Y_t)`, where `A` is the
//! branch-to-node incidence matrix. Node order is fixed when the model is
//! built (physical nodes, then virtual T-section centers) and every matrix
//! produced here inherits it.

use std::collections::HashMap;

use crate::error::{Error, Precondition, Result, Violation};
use crate::graph::{self, BranchGraph, NodeId};
use crate::linalg::{self, Complex64, ComplexMatrix, DEFAULT_RANK_TOL};
use crate::params::{
    validate_branch_impedance, validate_shunt_admittance, BranchCheck, CompoundBranchImpedance,
    CompoundShuntAdmittance, PiSection, ShuntCheck, TeeSection, Tolerances,
};

/// Bookkeeping for an installed T-section: the virtual center node and the
/// two branches meeting there.
#[derive(Debug, Clone, PartialEq)]
pub struct TeeRecord {
    pub from: NodeId,
    pub to: NodeId,
    pub center: NodeId,
    pub primary_edge: usize,
    pub secondary_edge: usize,
}

/// A validated polyphase grid: nodes, branches with their impedances, and
/// one (possibly zero) shunt per node.
#[derive(Debug, Clone, PartialEq)]
pub struct GridModel {
    phase_count: usize,
    node_names: Vec<String>,
    graph: BranchGraph,
    branch_impedances: Vec<CompoundBranchImpedance>,
    shunt_admittances: Vec<CompoundShuntAdmittance>,
    tees: Vec<TeeRecord>,
}

impl GridModel {
    /// Assembles a model from already-validated parameters. Checks counts,
    /// matrix sizes and name uniqueness.
    pub fn new(
        phase_count: usize,
        node_names: Vec<String>,
        graph: BranchGraph,
        branch_impedances: Vec<CompoundBranchImpedance>,
        shunt_admittances: Vec<CompoundShuntAdmittance>,
    ) -> Result<Self> {
        Self::with_tees(
            phase_count,
            node_names,
            graph,
            branch_impedances,
            shunt_admittances,
            Vec::new(),
        )
    }

    pub(crate) fn with_tees(
        phase_count: usize,
        node_names: Vec<String>,
        graph: BranchGraph,
        branch_impedances: Vec<CompoundBranchImpedance>,
        shunt_admittances: Vec<CompoundShuntAdmittance>,
        tees: Vec<TeeRecord>,
    ) -> Result<Self> {
        if phase_count == 0 {
            return Err(Error::InvalidPhaseCount);
        }
        let n = graph.node_count();
        if node_names.len() != n || shunt_admittances.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} nodes in graph, {} names, {} shunts",
                n,
                node_names.len(),
                shunt_admittances.len()
            )));
        }
        if branch_impedances.len() != graph.edge_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} edges, {} branch impedances",
                graph.edge_count(),
                branch_impedances.len()
            )));
        }
        let mut seen = HashMap::new();
        for (i, name) in node_names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::InvalidPartition(format!("duplicate node name {name:?}")));
            }
        }
        let wrong_size = branch_impedances.iter().any(|z| z.phase_count() != phase_count)
            || shunt_admittances.iter().any(|y| y.phase_count() != phase_count);
        if wrong_size {
            return Err(Error::ShapeMismatch(format!(
                "every compound parameter must be {phase_count}x{phase_count}"
            )));
        }
        Ok(Self {
            phase_count,
            node_names,
            graph,
            branch_impedances,
            shunt_admittances,
            tees,
        })
    }

    pub fn phase_count(&self) -> usize {
        self.phase_count
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        &self.node_names[n.0]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.node_names.iter().position(|x| x == name).map(NodeId)
    }

    /// Maps names to ids, failing on the first unknown name.
    pub fn resolve(&self, names: &[&str]) -> Result<Vec<NodeId>> {
        names
            .iter()
            .map(|name| self.node_id(name).ok_or_else(|| Error::UnknownNode(name.to_string())))
            .collect()
    }

    pub fn graph(&self) -> &BranchGraph {
        &self.graph
    }

    pub fn branch_impedances(&self) -> &[CompoundBranchImpedance] {
        &self.branch_impedances
    }

    pub fn shunt_admittances(&self) -> &[CompoundShuntAdmittance] {
        &self.shunt_admittances
    }

    pub fn shunt(&self, n: NodeId) -> &CompoundShuntAdmittance {
        &self.shunt_admittances[n.0]
    }

    pub fn tees(&self) -> &[TeeRecord] {
        &self.tees
    }

    pub fn is_virtual(&self, n: NodeId) -> bool {
        self.tees.iter().any(|t| t.center == n)
    }

    pub fn has_nonzero_shunt(&self) -> bool {
        self.shunt_admittances.iter().any(|y| !y.is_zero())
    }

    /// `Re{Z_ℓ} ≻ 0` for every branch.
    pub fn is_strictly_passive(&self) -> bool {
        self.branch_impedances
            .iter()
            .all(CompoundBranchImpedance::is_strictly_passive)
    }

    /// Human-readable identity of a branch, e.g. `branch 2 (a -> b)`.
    pub fn describe_edge(&self, edge: usize) -> String {
        let e = self.graph.edge(edge);
        format!("branch {edge} ({} -> {})", self.node_name(e.from), self.node_name(e.to))
    }
}

/// Incremental construction of a [`GridModel`] from raw matrices.
///
/// Hypothesis violations are collected rather than raised one at a time;
/// [`GridBuilder::build`] reports every offending branch and node.
#[derive(Debug, Clone)]
pub struct GridBuilder {
    phase_count: usize,
    tolerances: Tolerances,
    names: Vec<String>,
    shunt_terms: Vec<Vec<ComplexMatrix>>,
    branches: Vec<(NodeId, NodeId, ComplexMatrix)>,
    tees: Vec<(NodeId, NodeId, ComplexMatrix, ComplexMatrix, ComplexMatrix)>,
}

impl GridBuilder {
    pub fn new(phase_count: usize) -> Self {
        Self::with_tolerances(phase_count, Tolerances::default())
    }

    pub fn with_tolerances(phase_count: usize, tolerances: Tolerances) -> Self {
        Self {
            phase_count,
            tolerances,
            names: Vec::new(),
            shunt_terms: Vec::new(),
            branches: Vec::new(),
            tees: Vec::new(),
        }
    }

    /// Adds a physical node. Names must be unique.
    pub fn add_node(&mut self, name: impl Into<String>) -> Result<NodeId> {
        let name = name.into();
        if self.names.contains(&name) {
            return Err(Error::InvalidPartition(format!("duplicate node name {name:?}")));
        }
        self.names.push(name);
        self.shunt_terms.push(Vec::new());
        Ok(NodeId(self.names.len() - 1))
    }

    fn check(&self, n: NodeId) -> Result<()> {
        if n.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(n.to_string()))
        }
    }

    /// Adds a shunt contribution at `node`; contributions are summed.
    pub fn add_shunt(&mut self, node: NodeId, y: ComplexMatrix) -> Result<()> {
        self.check(node)?;
        self.shunt_terms[node.0].push(y);
        Ok(())
    }

    /// Adds a branch `from → to` with compound impedance `z`.
    pub fn add_branch(&mut self, from: NodeId, to: NodeId, z: ComplexMatrix) -> Result<usize> {
        self.check(from)?;
        self.check(to)?;
        if from == to {
            return Err(Error::InvalidPartition(format!("self-loop at node {from}")));
        }
        self.branches.push((from, to, z));
        Ok(self.branches.len() - 1)
    }

    /// Installs a π-section: one branch plus its end shunts.
    pub fn add_pi_section(&mut self, from: NodeId, to: NodeId, section: &PiSection) -> Result<usize> {
        let edge = self.add_branch(from, to, section.series_impedance.matrix().clone())?;
        self.add_shunt(from, section.shunt_from.matrix().clone())?;
        self.add_shunt(to, section.shunt_to.matrix().clone())?;
        Ok(edge)
    }

    /// Installs a T-section between `from` and `to` from raw matrices. The
    /// virtual center node is appended after all physical nodes at build.
    pub fn add_tee(
        &mut self,
        from: NodeId,
        to: NodeId,
        z_primary: ComplexMatrix,
        z_secondary: ComplexMatrix,
        y_center: ComplexMatrix,
    ) -> Result<()> {
        self.check(from)?;
        self.check(to)?;
        if from == to {
            return Err(Error::InvalidPartition(format!("T-section loops at node {from}")));
        }
        self.tees.push((from, to, z_primary, z_secondary, y_center));
        Ok(())
    }

    pub fn add_tee_section(&mut self, from: NodeId, to: NodeId, section: &TeeSection) -> Result<()> {
        self.add_tee(
            from,
            to,
            section.primary_impedance.matrix().clone(),
            section.secondary_impedance.matrix().clone(),
            section.center_shunt.matrix().clone(),
        )
    }

    /// Validates everything and produces the model. Tees become a virtual
    /// node named `<from>__<to>__T<k>` plus two branches, appended after
    /// the plain branches.
    pub fn build(self) -> Result<GridModel> {
        if self.phase_count == 0 {
            return Err(Error::InvalidPhaseCount);
        }
        let p = self.phase_count;
        let tol = self.tolerances;
        let mut names = self.names.clone();
        let mut shunt_terms = self.shunt_terms.clone();
        let mut graph = BranchGraph::new(names.len());
        let mut raw_branches: Vec<(String, ComplexMatrix)> = Vec::new();
        let mut tees = Vec::new();

        for (from, to, z) in &self.branches {
            let edge = graph.add_edge(*from, *to)?;
            raw_branches.push((
                format!("branch {edge} ({} -> {})", names[from.0], names[to.0]),
                z.clone(),
            ));
        }
        for (k, (from, to, zp, zs, yc)) in self.tees.iter().enumerate() {
            let center_name = format!("{}__{}__T{k}", names[from.0], names[to.0]);
            if names.contains(&center_name) {
                return Err(Error::InvalidPartition(format!("duplicate node name {center_name:?}")));
            }
            names.push(center_name.clone());
            shunt_terms.push(vec![yc.clone()]);
            let center = graph.add_node();
            let primary_edge = graph.add_edge(*from, center)?;
            let secondary_edge = graph.add_edge(center, *to)?;
            raw_branches.push((
                format!("tee {k} primary ({} -> {center_name})", names[from.0]),
                zp.clone(),
            ));
            raw_branches.push((
                format!("tee {k} secondary ({center_name} -> {})", names[to.0]),
                zs.clone(),
            ));
            tees.push(TeeRecord {
                from: *from,
                to: *to,
                center,
                primary_edge,
                secondary_edge,
            });
        }

        let mut violations = Vec::new();
        let mut impedances = Vec::new();
        for (label, z) in raw_branches {
            if z.shape() != (p, p) {
                violations.push(Violation {
                    element: label,
                    reasons: vec!["wrong_size".into()],
                });
                continue;
            }
            match validate_branch_impedance(&z, &tol) {
                BranchCheck::Conformant { .. } => impedances.push(CompoundBranchImpedance::new(z, &tol)?),
                BranchCheck::Violation { reasons } => violations.push(Violation {
                    element: label,
                    reasons: reasons.iter().map(|r| r.tag().to_string()).collect(),
                }),
            }
        }
        let mut shunts = Vec::new();
        for (name, terms) in names.iter().zip(&shunt_terms) {
            let label = format!("node {name}");
            if terms.iter().any(|t| t.shape() != (p, p)) {
                violations.push(Violation {
                    element: label,
                    reasons: vec!["wrong_size".into()],
                });
                continue;
            }
            let sum = terms.iter().fold(ComplexMatrix::zeros(p, p), |acc, t| &acc + t);
            match validate_shunt_admittance(&sum, &tol) {
                ShuntCheck::Violation { reasons } => violations.push(Violation {
                    element: label,
                    reasons: reasons.iter().map(|r| r.tag().to_string()).collect(),
                }),
                _ => shunts.push(CompoundShuntAdmittance::new(sum, &tol)?),
            }
        }
        if !violations.is_empty() {
            return Err(Error::HypothesisViolation(violations));
        }
        GridModel::with_tees(p, names, graph, impedances, shunts, tees)
    }
}

/// Square block matrix over polyphase nodes: block `(m, n)` occupies rows
/// `m·P..(m+1)·P` and columns `n·P..(n+1)·P`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    block_size: usize,
    node_count: usize,
    data: ComplexMatrix,
}

impl BlockMatrix {
    pub fn new(block_size: usize, data: ComplexMatrix) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::InvalidPhaseCount);
        }
        if !data.is_square() || !data.rows().is_multiple_of(block_size) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} is not a square matrix of {block_size}x{block_size} blocks",
                data.rows(),
                data.cols()
            )));
        }
        Ok(Self {
            block_size,
            node_count: data.rows() / block_size,
            data,
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn data(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn into_data(self) -> ComplexMatrix {
        self.data
    }

    fn check(&self, n: NodeId) -> Result<()> {
        if n.0 < self.node_count {
            Ok(())
        } else {
            Err(Error::UnknownNode(n.to_string()))
        }
    }

    /// Scalar indices covered by the given nodes, in the given order.
    pub fn scalar_indices(&self, nodes: &[NodeId]) -> Vec<usize> {
        let p = self.block_size;
        nodes.iter().flat_map(|n| n.0 * p..(n.0 + 1) * p).collect()
    }

    /// Copy of block `(m, n)`.
    pub fn block(&self, m: NodeId, n: NodeId) -> Result<ComplexMatrix> {
        self.check(m)?;
        self.check(n)?;
        let p = self.block_size;
        Ok(self.data.window(m.0 * p, n.0 * p, p, p))
    }

    /// Blocks for `rows × cols`, both gathered in ascending node order.
    pub fn subblock(&self, rows: &[NodeId], cols: &[NodeId]) -> Result<ComplexMatrix> {
        let rows = self.sorted_set(rows)?;
        let cols = self.sorted_set(cols)?;
        Ok(self
            .data
            .select(&self.scalar_indices(&rows), &self.scalar_indices(&cols)))
    }

    /// Sorted, de-duplicated, range-checked node set.
    pub fn sorted_set(&self, nodes: &[NodeId]) -> Result<Vec<NodeId>> {
        for &n in nodes {
            self.check(n)?;
        }
        let mut v = nodes.to_vec();
        v.sort();
        v.dedup();
        Ok(v)
    }

    /// Complement of `nodes` in ascending order.
    pub fn complement(&self, nodes: &[NodeId]) -> Result<Vec<NodeId>> {
        let set = self.sorted_set(nodes)?;
        Ok((0..self.node_count)
            .map(NodeId)
            .filter(|n| set.binary_search(n).is_err())
            .collect())
    }
}

/// Stacked per-node vector of voltages or currents.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalVector {
    block_size: usize,
    values: Vec<Complex64>,
}

impl NodalVector {
    pub fn new(block_size: usize, values: Vec<Complex64>) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::InvalidPhaseCount);
        }
        if !values.len().is_multiple_of(block_size) {
            return Err(Error::ShapeMismatch(format!(
                "{} values do not fill {block_size}-phase nodes",
                values.len()
            )));
        }
        Ok(Self { block_size, values })
    }

    pub fn zeros(block_size: usize, node_count: usize) -> Self {
        Self {
            block_size,
            values: vec![Complex64::new(0.0, 0.0); block_size * node_count],
        }
    }

    pub fn from_column(block_size: usize, column: &ComplexMatrix) -> Result<Self> {
        if column.cols() != 1 {
            return Err(Error::ShapeMismatch(format!(
                "expected a column, got {:?}",
                column.shape()
            )));
        }
        Self::new(block_size, column.as_dmatrix().iter().copied().collect())
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn node_count(&self) -> usize {
        self.values.len() / self.block_size
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Phase values at one node.
    pub fn node(&self, n: usize) -> &[Complex64] {
        &self.values[n * self.block_size..(n + 1) * self.block_size]
    }

    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.values.len(), 1, |i, _| self.values[i]).expect("finite values")
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Gathers the given node-local positions into a new vector.
    pub fn gather(&self, nodes: &[usize]) -> NodalVector {
        let values = nodes.iter().flat_map(|&n| self.node(n).iter().copied()).collect();
        NodalVector {
            block_size: self.block_size,
            values,
        }
    }
}

/// `diag_ℓ(Z_ℓ⁻¹)` in edge order.
pub fn primitive_branch_admittance(model: &GridModel) -> Result<ComplexMatrix> {
    let blocks = branch_admittances(model)?;
    Ok(ComplexMatrix::block_diagonal(&blocks))
}

/// Per-branch `Y_ℓ = Z_ℓ⁻¹`.
pub fn branch_admittances(model: &GridModel) -> Result<Vec<ComplexMatrix>> {
    model
        .branch_impedances
        .iter()
        .enumerate()
        .map(|(edge, z)| linalg::inverse(z.matrix()).map_err(|_| Error::SingularBranch { edge }))
        .collect()
}

/// The polyphase incidence matrix `A ⊗ I_P`.
pub fn polyphase_incidence(model: &GridModel) -> Result<ComplexMatrix> {
    linalg::kronecker_identity_expand(&graph::incidence_matrix(&model.graph), model.phase_count)
}

/// `Y = (A^P)ᵀ Y_L A^P + Y_T`.
pub fn assemble(model: &GridModel) -> Result<BlockMatrix> {
    let p = model.phase_count;
    let shunts = ComplexMatrix::block_diagonal(
        &model
            .shunt_admittances
            .iter()
            .map(|y| y.matrix().clone())
            .collect::<Vec<_>>(),
    );
    let y = if model.graph.edge_count() == 0 {
        shunts
    } else {
        let a = polyphase_incidence(model)?;
        let y_l = primitive_branch_admittance(model)?;
        &(&a.transpose() * &(&y_l * &a)) + &shunts
    };
    BlockMatrix::new(p, y)
}

/// `I = Y V`.
pub fn apply_ohm(y: &BlockMatrix, v: &NodalVector) -> Result<NodalVector> {
    if v.block_size != y.block_size || v.node_count() != y.node_count {
        return Err(Error::ShapeMismatch(format!(
            "vector of {} {}-phase nodes against matrix of {} {}-phase nodes",
            v.node_count(),
            v.block_size,
            y.node_count,
            y.block_size
        )));
    }
    NodalVector::from_column(y.block_size, &y.data.matmul(&v.to_column())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShuntSumReport {
    /// Per node: max over the row-sum and column-sum residuals.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub passed: bool,
}

/// Checks `Σ_m Y_nm = Y_t` and `Σ_m Y_mn = Y_t` for every node `n`.
pub fn check_shunt_sum_lemma(model: &GridModel, y: &BlockMatrix, tol: f64) -> ShuntSumReport {
    let p = y.block_size;
    let n = y.node_count;
    let mut residuals = Vec::with_capacity(n);
    for node in 0..n {
        let mut row_sum = ComplexMatrix::zeros(p, p);
        let mut col_sum = ComplexMatrix::zeros(p, p);
        for other in 0..n {
            row_sum = &row_sum + &y.data.window(node * p, other * p, p, p);
            col_sum = &col_sum + &y.data.window(other * p, node * p, p, p);
        }
        let shunt = model.shunt_admittances[node].matrix();
        residuals.push(row_sum.max_abs_diff(shunt).max(col_sum.max_abs_diff(shunt)));
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    ShuntSumReport {
        residuals,
        max_residual,
        passed: max_residual <= tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub rel_tol: f64,
    /// Skip precondition gates and report anyway. `agrees` may then be false.
    pub force: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_RANK_TOL,
            force: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub predicted: usize,
    pub measured: usize,
    pub agrees: bool,
    pub tolerance_used: f64,
}

/// Predicted rank of `Y` (`(|N|−1)|P|` without shunts, `|N||P|` with at
/// least one) against the measured numerical rank.
pub fn rank_report(model: &GridModel) -> Result<RankReport> {
    rank_report_with(model, &ReportOptions::default())
}

pub fn rank_report_with(model: &GridModel, opts: &ReportOptions) -> Result<RankReport> {
    if !opts.force && !graph::is_weakly_connected(&model.graph) {
        return Err(Error::PreconditionViolated(Precondition::NotWeaklyConnected));
    }
    let n = model.node_count();
    let p = model.phase_count;
    let predicted = if model.has_nonzero_shunt() { n * p } else { (n - 1) * p };
    let y = assemble(model)?;
    let rank = linalg::numerical_rank(y.data(), opts.rel_tol)?;
    Ok(RankReport {
        predicted,
        measured: rank.numerical_rank,
        agrees: predicted == rank.numerical_rank,
        tolerance_used: rank.tolerance_used,
    })
}

/// Predicted full rank `|M||P|` of the diagonal subblock `Y[M, M]` for a
/// proper subset `M`, against the measured rank.
pub fn block_rank_report(model: &GridModel, m: &[NodeId]) -> Result<RankReport> {
    block_rank_report_with(model, m, &ReportOptions::default())
}

pub fn block_rank_report_with(model: &GridModel, m: &[NodeId], opts: &ReportOptions) -> Result<RankReport> {
    let y = assemble(model)?;
    let set = y.sorted_set(m)?;
    if set.is_empty() || set.len() == model.node_count() {
        return Err(Error::InvalidSubset(format!(
            "block rank needs a proper non-empty subset, got {} of {} nodes",
            set.len(),
            model.node_count()
        )));
    }
    if !opts.force {
        if !graph::is_weakly_connected(&model.graph) {
            return Err(Error::PreconditionViolated(Precondition::NotWeaklyConnected));
        }
        if !model.is_strictly_passive() {
            return Err(Error::PreconditionViolated(Precondition::NotStrictlyPassive));
        }
    }
    let predicted = set.len() * model.phase_count;
    let rank = linalg::numerical_rank(&y.subblock(&set, &set)?, opts.rel_tol)?;
    Ok(RankReport {
        predicted,
        measured: rank.numerical_rank,
        agrees: predicted == rank.numerical_rank,
        tolerance_used: rank.tolerance_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_node(shunt: Option<Complex64>) -> GridModel {
        let mut b = GridBuilder::new(1);
        let a = b.add_node("a").unwrap();
        let z = b.add_node("b").unwrap();
        b.add_branch(a, z, ComplexMatrix::scaled_identity(1, c(1.0, 1.0)))
            .unwrap();
        if let Some(y) = shunt {
            b.add_shunt(a, ComplexMatrix::scaled_identity(1, y)).unwrap();
        }
        b.build().unwrap()
    }

    fn chain3(p: usize, z: Complex64) -> GridModel {
        let mut b = GridBuilder::new(p);
        let n: Vec<_> = ["a", "b", "c"].iter().map(|s| b.add_node(*s).unwrap()).collect();
        b.add_branch(n[0], n[1], ComplexMatrix::scaled_identity(p, z)).unwrap();
        b.add_branch(n[1], n[2], ComplexMatrix::scaled_identity(p, z)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn primitive_admittance_examples() {
        let mut b = GridBuilder::new(2);
        let a = b.add_node("a").unwrap();
        let z = b.add_node("b").unwrap();
        b.add_branch(a, z, ComplexMatrix::scaled_identity(2, c(2.0, 0.0)))
            .unwrap();
        let model = b.build().unwrap();
        let y = primitive_branch_admittance(&model).unwrap();
        assert!(y.max_abs_diff(&ComplexMatrix::scaled_identity(2, c(0.5, 0.0))) < 1e-15);

        let y = primitive_branch_admittance(&chain3(2, c(1.0, 1.0))).unwrap();
        assert_eq!(y.shape(), (4, 4));
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (3, 1)] {
            assert_eq!(y[(i, j)], c(0.0, 0.0));
        }
    }

    #[test]
    fn primitive_admittance_inverts_coupled_impedance() {
        let z = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(1.0, 0.0)]]).unwrap();
        let mut b = GridBuilder::new(2);
        let a = b.add_node("a").unwrap();
        let n = b.add_node("b").unwrap();
        b.add_branch(a, n, z.clone()).unwrap();
        let y = primitive_branch_admittance(&b.build().unwrap()).unwrap();
        assert!((&z * &y).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn assemble_two_node() {
        let y = assemble(&two_node(None)).unwrap();
        let g = c(0.5, -0.5);
        let expected = ComplexMatrix::from_rows(&[vec![g, -g], vec![-g, g]]).unwrap();
        assert!(y.data().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn assemble_single_node_is_shunt() {
        let mut b = GridBuilder::new(2);
        let a = b.add_node("a").unwrap();
        let yt = ComplexMatrix::scaled_identity(2, c(0.1, 0.2));
        b.add_shunt(a, yt.clone()).unwrap();
        let y = assemble(&b.build().unwrap()).unwrap();
        assert_eq!(y.data(), &yt);
    }

    #[test]
    fn block_access() {
        let y = assemble(&chain3(2, c(1.0, 1.0))).unwrap();
        let b01 = y.block(NodeId(0), NodeId(1)).unwrap();
        assert!(b01.max_abs_diff(&ComplexMatrix::scaled_identity(2, -c(0.5, -0.5))) < 1e-15);
        let b11 = y.block(NodeId(1), NodeId(1)).unwrap();
        assert!(b11.max_abs_diff(&ComplexMatrix::scaled_identity(2, c(1.0, -1.0))) < 1e-15);
        assert_eq!(y.block(NodeId(2), NodeId(0)).unwrap(), ComplexMatrix::zeros(2, 2));
        assert!(matches!(y.block(NodeId(3), NodeId(0)), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn subblock_access() {
        let y = assemble(&chain3(2, c(1.0, 1.0))).unwrap();
        let all = [NodeId(2), NodeId(0), NodeId(1)];
        assert_eq!(&y.subblock(&all, &all).unwrap(), y.data());
        assert_eq!(
            y.subblock(&[NodeId(1)], &[NodeId(2)]).unwrap(),
            y.block(NodeId(1), NodeId(2)).unwrap()
        );
        assert_eq!(
            y.subblock(&[NodeId(0), NodeId(2)], &[NodeId(1)]).unwrap().shape(),
            (4, 2)
        );
        assert!(y.subblock(&[NodeId(5)], &[NodeId(0)]).is_err());
    }

    #[test]
    fn ohm_examples() {
        let model = two_node(None);
        let y = assemble(&model).unwrap();
        let zero = apply_ohm(&y, &NodalVector::zeros(1, 2)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);

        let i = apply_ohm(&y, &NodalVector::new(1, vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap()).unwrap();
        assert!((i.values()[0] - c(0.5, -0.5)).norm() < 1e-15);
        assert!((i.values()[1] + c(0.5, -0.5)).norm() < 1e-15);

        let y3 = assemble(&chain3(3, c(0.3, 1.0))).unwrap();
        let ones = NodalVector::new(3, vec![c(1.0, 0.0); 9]).unwrap();
        assert!(apply_ohm(&y3, &ones).unwrap().max_abs() < 1e-14);

        assert!(matches!(
            apply_ohm(&y3, &ones.gather(&[0, 1])),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn shunt_sum_examples() {
        let model = chain3(2, c(0.3, 1.0));
        let r = check_shunt_sum_lemma(&model, &assemble(&model).unwrap(), 1e-12);
        assert!(r.passed && r.max_residual < 1e-15);

        let model = two_node(Some(c(0.2, 0.1)));
        let r = check_shunt_sum_lemma(&model, &assemble(&model).unwrap(), 1e-12);
        assert!(r.passed);

        let mut b = GridBuilder::new(1);
        let a = b.add_node("solo").unwrap();
        b.add_shunt(a, ComplexMatrix::scaled_identity(1, c(1.0, 1.0))).unwrap();
        let model = b.build().unwrap();
        let r = check_shunt_sum_lemma(&model, &assemble(&model).unwrap(), 1e-12);
        assert_eq!(r.residuals, vec![0.0]);
    }

    #[test]
    fn rank_report_examples() {
        let r = rank_report(&two_node(None)).unwrap();
        assert_eq!((r.predicted, r.measured, r.agrees), (1, 1, true));
        let r = rank_report(&two_node(Some(c(0.0, 0.1)))).unwrap();
        assert_eq!((r.predicted, r.measured, r.agrees), (2, 2, true));
    }

    #[test]
    fn rank_report_refuses_disconnected() {
        let mut b = GridBuilder::new(1);
        b.add_node("a").unwrap();
        b.add_node("b").unwrap();
        let model = b.build().unwrap();
        assert!(matches!(
            rank_report(&model),
            Err(Error::PreconditionViolated(Precondition::NotWeaklyConnected))
        ));
        let forced = rank_report_with(
            &model,
            &ReportOptions {
                force: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(forced.measured, 0);
        assert!(!forced.agrees);
    }

    #[test]
    fn block_rank_middle_node() {
        let model = chain3(3, c(0.2, 1.0));
        let r = block_rank_report(&model, &[NodeId(1)]).unwrap();
        assert_eq!((r.predicted, r.measured), (3, 3));
        let r = block_rank_report(&model, &[NodeId(0), NodeId(2)]).unwrap();
        assert!(r.agrees);
        assert!(matches!(
            block_rank_report(&model, &[NodeId(0), NodeId(1), NodeId(2)]),
            Err(Error::InvalidSubset(_))
        ));
        assert!(matches!(block_rank_report(&model, &[]), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn block_rank_lossless_gate_and_force() {
        // Two reactances of opposite sign resonate: Y[{b}, {b}] = −j + j = 0.
        let mut b = GridBuilder::new(1);
        let n: Vec<_> = ["a", "b", "c"].iter().map(|s| b.add_node(*s).unwrap()).collect();
        b.add_branch(n[0], n[1], ComplexMatrix::scaled_identity(1, c(0.0, 1.0)))
            .unwrap();
        b.add_branch(n[1], n[2], ComplexMatrix::scaled_identity(1, c(0.0, -1.0)))
            .unwrap();
        let model = b.build().unwrap();
        assert!(matches!(
            block_rank_report(&model, &[NodeId(1)]),
            Err(Error::PreconditionViolated(Precondition::NotStrictlyPassive))
        ));
        let forced = block_rank_report_with(
            &model,
            &[NodeId(1)],
            &ReportOptions {
                force: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((forced.predicted, forced.measured, forced.agrees), (1, 0, false));
    }

    #[test]
    fn tee_expansion() {
        let mut b = GridBuilder::new(1);
        let a = b.add_node("a").unwrap();
        let z = b.add_node("b").unwrap();
        b.add_branch(a, z, ComplexMatrix::scaled_identity(1, c(1.0, 1.0)))
            .unwrap();
        let zt = ComplexMatrix::scaled_identity(1, c(0.01, 0.1));
        b.add_tee(a, z, zt.clone(), zt, ComplexMatrix::scaled_identity(1, c(0.001, 0.05)))
            .unwrap();
        let model = b.build().unwrap();
        assert_eq!(model.node_count(), 3);
        assert_eq!(model.graph().edge_count(), 3);
        assert_eq!(model.node_names()[2], "a__b__T0");
        assert!(model.is_virtual(NodeId(2)));
        assert!(!model.shunt(NodeId(2)).is_zero());
    }

    #[test]
    fn builder_collects_every_violation() {
        let mut b = GridBuilder::new(1);
        let a = b.add_node("a").unwrap();
        let z = b.add_node("b").unwrap();
        b.add_branch(a, z, ComplexMatrix::zeros(1, 1)).unwrap();
        b.add_branch(z, a, ComplexMatrix::scaled_identity(1, c(-1.0, 0.0)))
            .unwrap();
        b.add_shunt(z, ComplexMatrix::scaled_identity(1, c(-1.0, 0.0))).unwrap();
        match b.build() {
            Err(Error::HypothesisViolation(v)) => {
                assert_eq!(v.len(), 3);
                assert_eq!(v[0].element, "branch 0 (a -> b)");
                assert_eq!(v[1].reasons, vec!["not_passive"]);
                assert_eq!(v[2].element, "node b");
            }
            other => panic!("{other:?}"),
        }
    }
}
