//! Kron reduction of zero-injection nodes.
//!
//! With `I_Z = 0` the voltages at `Z` are a linear function of the
//! retained voltages, `V_Z = −Y_ZZ⁻¹ Y_{Z×Zᶜ} V_{Zᶜ}`, and the retained
//! currents obey `I_{Zᶜ} = (Y / Y_ZZ) V_{Zᶜ}`. Both the Schur complement and
//! the recovery map come out of one factor-and-solve of `Y_ZZ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admittance::{apply_ohm, assemble, BlockMatrix, GridModel, NodalVector};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::linalg::{self, Complex64, ComplexMatrix};

/// A proper, non-empty set of zero-injection nodes of a block matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroInjectionSet {
    node_count: usize,
    nodes: Vec<NodeId>,
}

impl ZeroInjectionSet {
    pub fn new(node_count: usize, nodes: &[NodeId]) -> Result<Self> {
        let mut nodes = nodes.to_vec();
        nodes.sort();
        nodes.dedup();
        if let Some(bad) = nodes.iter().find(|n| n.0 >= node_count) {
            return Err(Error::UnknownNode(bad.to_string()));
        }
        if nodes.is_empty() || nodes.len() == node_count {
            return Err(Error::InvalidSubset(format!(
                "zero-injection set must be a proper non-empty subset, got {} of {node_count} nodes",
                nodes.len()
            )));
        }
        Ok(Self { node_count, nodes })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }
}

/// Result of Kron reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGrid {
    /// Retained nodes (indices into the original matrix), ascending.
    pub retained_nodes: Vec<NodeId>,
    /// Eliminated nodes (indices into the original matrix), ascending.
    pub eliminated_nodes: Vec<NodeId>,
    /// `Ŷ = Y / Y_ZZ`, blocks ordered as `retained_nodes`.
    pub reduced_matrix: BlockMatrix,
    /// `−Y_ZZ⁻¹ Y_{Z×Zᶜ}`, rows ordered as `eliminated_nodes`.
    pub elimination_map: ComplexMatrix,
}

/// Eliminates `z` from `y` by Schur complement.
pub fn kron_reduce(y: &BlockMatrix, z: &ZeroInjectionSet) -> Result<ReducedGrid> {
    kron_reduce_stage(y, z, 0)
}

fn kron_reduce_stage(y: &BlockMatrix, z: &ZeroInjectionSet, stage: usize) -> Result<ReducedGrid> {
    if z.node_count != y.node_count() {
        return Err(Error::InvalidSubset(format!(
            "zero-injection set built for {} nodes, matrix has {}",
            z.node_count,
            y.node_count()
        )));
    }
    let retained = y.complement(&z.nodes)?;
    let keep_idx = y.scalar_indices(&retained);
    let elim_idx = y.scalar_indices(&z.nodes);
    let data = y.data();
    let y_zz = data.select(&elim_idx, &elim_idx);
    let y_zr = data.select(&elim_idx, &keep_idx);
    let y_rz = data.select(&keep_idx, &elim_idx);
    let y_rr = data.select(&keep_idx, &keep_idx);
    let solved = linalg::solve(&y_zz, &y_zr).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::InfeasibleReduction { stage },
        other => other,
    })?;
    let reduced = &y_rr - &(&y_rz * &solved);
    Ok(ReducedGrid {
        retained_nodes: retained,
        eliminated_nodes: z.nodes.clone(),
        reduced_matrix: BlockMatrix::new(y.block_size(), reduced)?,
        elimination_map: -&solved,
    })
}

/// `V_Z = elimination_map · V_retained`.
pub fn recover_voltages(rg: &ReducedGrid, v_retained: &NodalVector) -> Result<NodalVector> {
    let p = rg.reduced_matrix.block_size();
    if v_retained.block_size() != p || v_retained.node_count() != rg.retained_nodes.len() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} retained {p}-phase nodes, got {} {}-phase nodes",
            rg.retained_nodes.len(),
            v_retained.node_count(),
            v_retained.block_size()
        )));
    }
    NodalVector::from_column(p, &rg.elimination_map.matmul(&v_retained.to_column())?)
}

/// Eliminates `parts` one after another. Node ids in every part refer to
/// the original matrix; errors carry the index of the failing stage.
pub fn sequential_reduce(y: &BlockMatrix, parts: &[Vec<NodeId>]) -> Result<ReducedGrid> {
    let n = y.node_count();
    let mut used = vec![false; n];
    for part in parts {
        for &node in part {
            if node.0 >= n {
                return Err(Error::UnknownNode(node.to_string()));
            }
            if std::mem::replace(&mut used[node.0], true) {
                return Err(Error::InvalidPartition(format!("node {node} appears in two parts")));
            }
        }
    }
    if parts.is_empty() || parts.iter().any(Vec::is_empty) {
        return Err(Error::InvalidSubset("every part must be non-empty".into()));
    }
    if used.iter().all(|&u| u) {
        return Err(Error::InvalidSubset("parts cover every node".into()));
    }

    // `current[i]` is the original id of the i-th node of `matrix`.
    let mut current: Vec<NodeId> = (0..n).map(NodeId).collect();
    let mut matrix = y.clone();
    // Per stage: eliminated original ids, the retained original ids after
    // the stage, and the stage's recovery map.
    let mut stages: Vec<(Vec<NodeId>, Vec<NodeId>, ComplexMatrix)> = Vec::new();
    for (stage, part) in parts.iter().enumerate() {
        let local: Vec<NodeId> = part
            .iter()
            .map(|orig| {
                NodeId(
                    current
                        .iter()
                        .position(|c| c == orig)
                        .expect("part nodes are still present"),
                )
            })
            .collect();
        let z = ZeroInjectionSet::new(matrix.node_count(), &local)?;
        let rg = kron_reduce_stage(&matrix, &z, stage)?;
        let eliminated: Vec<NodeId> = rg.eliminated_nodes.iter().map(|l| current[l.0]).collect();
        let retained: Vec<NodeId> = rg.retained_nodes.iter().map(|l| current[l.0]).collect();
        stages.push((eliminated, retained.clone(), rg.elimination_map));
        current = retained;
        matrix = rg.reduced_matrix;
    }

    let map = compose_elimination_maps(y.block_size(), &current, &stages)?;
    let mut eliminated_nodes: Vec<NodeId> = stages.iter().flat_map(|s| s.0.iter().copied()).collect();
    eliminated_nodes.sort();
    let p = y.block_size();
    let rows: Vec<ComplexMatrix> = eliminated_nodes
        .iter()
        .map(|node| map[node.0].clone().expect("eliminated node has a map"))
        .collect();
    let elimination_map = if rows.is_empty() {
        ComplexMatrix::zeros(0, current.len() * p)
    } else {
        ComplexMatrix::vstack(&rows.iter().collect::<Vec<_>>())?
    };
    Ok(ReducedGrid {
        retained_nodes: current,
        eliminated_nodes,
        reduced_matrix: matrix,
        elimination_map,
    })
}

/// Expresses every eliminated node's voltage in terms of the final retained
/// voltages by walking the stages backwards. Returns, per original node,
/// its `P × (|final|·P)` map.
fn compose_elimination_maps(
    p: usize,
    final_retained: &[NodeId],
    stages: &[(Vec<NodeId>, Vec<NodeId>, ComplexMatrix)],
) -> Result<Vec<Option<ComplexMatrix>>> {
    let total = final_retained.len() * p;
    let node_count = stages
        .iter()
        .flat_map(|s| s.0.iter().chain(s.1.iter()))
        .map(|n| n.0 + 1)
        .max()
        .unwrap_or(0);
    let mut map: Vec<Option<ComplexMatrix>> = vec![None; node_count];
    for (k, node) in final_retained.iter().enumerate() {
        map[node.0] = Some(ComplexMatrix::identity(total).window(k * p, 0, p, total));
    }
    for (eliminated, retained, stage_map) in stages.iter().rev() {
        let retained_in_final: Vec<&ComplexMatrix> = retained
            .iter()
            .map(|n| map[n.0].as_ref().expect("later stage resolved"))
            .collect();
        let stacked = ComplexMatrix::vstack(&retained_in_final)?;
        let composed = stage_map.matmul(&stacked)?;
        for (k, node) in eliminated.iter().enumerate() {
            map[node.0] = Some(composed.window(k * p, 0, p, total));
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionVerification {
    pub trials: usize,
    /// Largest eliminated-node current, relative to `max|Y|·max|V|`.
    pub max_eliminated_current: f64,
    /// Largest mismatch between full-system retained currents and `Ŷ·V`,
    /// on the same relative scale.
    pub max_retained_mismatch: f64,
    pub passed: bool,
}

/// Checks a reduction against the full model on random retained voltages:
/// expand with [`recover_voltages`], apply Ohm's law on the full `Y`, then
/// compare eliminated currents with zero and retained currents with `Ŷ·V`.
pub fn verify_reduction(
    model: &GridModel,
    rg: &ReducedGrid,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<ReductionVerification> {
    let y = assemble(model)?;
    let p = y.block_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale_y = y.data().max_abs().max(f64::MIN_POSITIVE);
    let mut max_elim = 0.0_f64;
    let mut max_ret = 0.0_f64;
    for _ in 0..trials {
        let values: Vec<Complex64> = (0..rg.retained_nodes.len() * p)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let v_ret = NodalVector::new(p, values)?;
        let v_elim = recover_voltages(rg, &v_ret)?;

        let mut full = vec![Complex64::new(0.0, 0.0); y.node_count() * p];
        for (k, node) in rg.retained_nodes.iter().enumerate() {
            full[node.0 * p..(node.0 + 1) * p].copy_from_slice(v_ret.node(k));
        }
        for (k, node) in rg.eliminated_nodes.iter().enumerate() {
            full[node.0 * p..(node.0 + 1) * p].copy_from_slice(v_elim.node(k));
        }
        let v_full = NodalVector::new(p, full)?;
        let current = apply_ohm(&y, &v_full)?;
        let reduced_current = apply_ohm(&rg.reduced_matrix, &v_ret)?;

        let scale = scale_y * v_full.max_abs().max(f64::MIN_POSITIVE);
        for node in &rg.eliminated_nodes {
            for z in current.node(node.0) {
                max_elim = max_elim.max(z.norm() / scale);
            }
        }
        for (k, node) in rg.retained_nodes.iter().enumerate() {
            for (a, b) in current.node(node.0).iter().zip(reduced_current.node(k)) {
                max_ret = max_ret.max((a - b).norm() / scale);
            }
        }
    }
    Ok(ReductionVerification {
        trials,
        max_eliminated_current: max_elim,
        max_retained_mismatch: max_ret,
        passed: max_elim <= tol && max_ret <= tol,
    })
}
