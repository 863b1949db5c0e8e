//! Independent constructions for cross-checking the rank results.
//!
//! * [`augment_virtual_ground`] turns ground into an ordinary node and
//!   every non-zero shunt into a branch `Z = Y_t⁻¹`. The augmented grid has
//!   no shunts, so its rank is `(|N|+1−1)|P| = |N||P|`, and elementary
//!   block row/column operations reduce it to `diag(Y, 0)`.
//! * [`ground_complement`] shorts every node outside `M` to ground. Branches
//!   inside `M` survive unchanged, cut branches fold into the shunts of
//!   their `M` endpoint, and the resulting fictional grid has exactly
//!   `Y[M, M]` as its admittance matrix.
//!
//! Both return ordinary [`GridModel`]s, validated like any other, so a
//! hypothesis failure in the construction surfaces as an error.

use crate::admittance::{assemble, branch_admittances, GridModel};
use crate::error::{Error, Result};
use crate::graph::{self, BranchGraph, NodeId};
use crate::linalg::{self, ComplexMatrix};
use crate::params::{CompoundBranchImpedance, CompoundShuntAdmittance, Tolerances};

/// Name given to the former ground node; underscores are appended until it
/// does not clash with an existing node.
fn ground_name(model: &GridModel) -> String {
    let mut name = String::from("ground");
    while model.node_id(&name).is_some() {
        name.push('_');
    }
    name
}

/// Grid with ground promoted to a node and every non-zero shunt turned into
/// a branch `node → ground` with `Z = Y_t⁻¹`. All shunts of the result are
/// zero. The former ground is the last node.
pub fn augment_virtual_ground(model: &GridModel) -> Result<GridModel> {
    if !model.has_nonzero_shunt() {
        return Err(Error::NothingToAugment);
    }
    let tol = Tolerances::default();
    let p = model.phase_count();
    let mut graph = model.graph().clone();
    let mut names = model.node_names().to_vec();
    let mut impedances = model.branch_impedances().to_vec();
    names.push(ground_name(model));
    let ground = graph.add_node();
    for (i, shunt) in model.shunt_admittances().iter().enumerate() {
        if shunt.is_zero() {
            continue;
        }
        let z = linalg::inverse(shunt.matrix())?;
        impedances.push(CompoundBranchImpedance::new(z, &tol)?);
        graph.add_edge(NodeId(i), ground)?;
    }
    let shunts = vec![CompoundShuntAdmittance::zero(p); names.len()];
    GridModel::new(p, names, graph, impedances, shunts)
}

/// Applies the elimination from the rank argument to the augmented matrix:
/// add every other block row to the ground row, then every other block
/// column to the ground column. Returns the largest entry left in the
/// ground row and column (zero in exact arithmetic) and the largest
/// deviation of the remaining block from the original `Y`.
pub fn virtual_ground_elimination_residual(model: &GridModel) -> Result<(f64, f64)> {
    let y = assemble(model)?;
    let augmented = assemble(&augment_virtual_ground(model)?)?;
    let p = model.phase_count();
    let n = model.node_count();
    let mut m = augmented.into_data().into_dmatrix();
    let g = n * p;
    for node in 0..n {
        for k in 0..p {
            let row = m.row(node * p + k).into_owned();
            let mut target = m.row_mut(g + k);
            target += &row;
        }
    }
    for node in 0..n {
        for k in 0..p {
            let col = m.column(node * p + k).into_owned();
            let mut target = m.column_mut(g + k);
            target += &col;
        }
    }
    let m = ComplexMatrix::from_dmatrix(m)?;
    let ground_row = m.window(g, 0, p, g + p).max_abs();
    let ground_col = m.window(0, g, g + p, p).max_abs();
    let body = m.window(0, 0, g, g).max_abs_diff(y.data());
    Ok((ground_row.max(ground_col), body))
}

/// One weakly connected part `M_k` of `M` and the branches joining it to
/// the rest of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentCut {
    pub nodes: Vec<NodeId>,
    /// `cut(M_k) ∪ cut(N ∖ M_k)`, ascending edge indices.
    pub cut_edges: Vec<usize>,
}

/// The fictional grid over `M` plus diagnostics about what was folded.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundedGrid {
    pub model: GridModel,
    /// Original ids of the nodes of `model`, ascending.
    pub nodes: Vec<NodeId>,
    pub components: Vec<ComponentCut>,
    /// Per node of `model`: original indices of the cut branches folded
    /// into its shunt.
    pub folded_branches: Vec<Vec<usize>>,
}

impl GroundedGrid {
    /// Every component has at least one cut branch, so every component
    /// gets a non-zero folded shunt.
    pub fn every_component_grounded(&self) -> bool {
        self.components.iter().all(|c| !c.cut_edges.is_empty())
    }
}

/// Grounds every node outside `m`. Internal branches keep their impedance;
/// each cut branch adds its admittance to the shunt of its endpoint in `m`.
pub fn ground_complement(model: &GridModel, m: &[NodeId]) -> Result<GroundedGrid> {
    let g = model.graph();
    let inside = g.mask(m)?;
    let nodes: Vec<NodeId> = g.nodes().filter(|n| inside[n.0]).collect();
    if nodes.is_empty() || nodes.len() == g.node_count() {
        return Err(Error::InvalidSubset(format!(
            "grounding needs a proper non-empty subset, got {} of {} nodes",
            nodes.len(),
            g.node_count()
        )));
    }
    let tol = Tolerances::default();
    let p = model.phase_count();
    let local = |n: NodeId| nodes.binary_search(&n).expect("node inside M");
    let y_branch = branch_admittances(model)?;

    let mut graph = BranchGraph::new(nodes.len());
    let mut impedances = Vec::new();
    let mut shunt_sums: Vec<ComplexMatrix> = nodes.iter().map(|&n| model.shunt(n).matrix().clone()).collect();
    let mut folded_branches = vec![Vec::new(); nodes.len()];
    for e in g.edges() {
        match (inside[e.from.0], inside[e.to.0]) {
            (true, true) => {
                graph.add_edge(NodeId(local(e.from)), NodeId(local(e.to)))?;
                impedances.push(model.branch_impedances()[e.edge_index].clone());
            }
            (true, false) | (false, true) => {
                let end = if inside[e.from.0] { e.from } else { e.to };
                let k = local(end);
                shunt_sums[k] = &shunt_sums[k] + &y_branch[e.edge_index];
                folded_branches[k].push(e.edge_index);
            }
            (false, false) => {}
        }
    }
    let shunts = shunt_sums
        .into_iter()
        .map(|y| CompoundShuntAdmittance::new(y, &tol))
        .collect::<Result<Vec<_>>>()?;
    let names = nodes.iter().map(|&n| model.node_name(n).to_string()).collect();
    let fictional = GridModel::new(p, names, graph, impedances, shunts)?;

    let components = graph::induced_components(g, &nodes)?
        .into_iter()
        .map(|part| {
            let rest: Vec<NodeId> = {
                let mask = g.mask(&part)?;
                g.nodes().filter(|n| !mask[n.0]).collect()
            };
            let mut cut_edges = graph::cut_set(g, &part)?;
            cut_edges.extend(graph::cut_set(g, &rest)?);
            cut_edges.sort_unstable();
            Ok(ComponentCut { nodes: part, cut_edges })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GroundedGrid {
        model: fictional,
        nodes,
        components,
        folded_branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admittance::GridBuilder;
    use crate::linalg::{numerical_rank, Complex64};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn chain3(shunt_at_a: bool) -> GridModel {
        let mut b = GridBuilder::new(2);
        let n: Vec<_> = ["a", "b", "c"].iter().map(|s| b.add_node(*s).unwrap()).collect();
        b.add_branch(n[0], n[1], ComplexMatrix::scaled_identity(2, c(0.2, 1.0)))
            .unwrap();
        b.add_branch(n[2], n[1], ComplexMatrix::scaled_identity(2, c(0.1, 0.5)))
            .unwrap();
        if shunt_at_a {
            b.add_shunt(n[0], ComplexMatrix::scaled_identity(2, c(0.01, 0.3)))
                .unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn augmentation_counts_and_rank() {
        let model = chain3(true);
        let aug = augment_virtual_ground(&model).unwrap();
        assert_eq!(aug.node_count(), 4);
        assert_eq!(aug.graph().edge_count(), 3);
        assert!(!aug.has_nonzero_shunt());
        assert_eq!(aug.node_names()[3], "ground");
        let y = assemble(&aug).unwrap();
        assert_eq!(numerical_rank(y.data(), 1e-10).unwrap().numerical_rank, 3 * 2);
    }

    #[test]
    fn augmentation_needs_a_shunt() {
        assert!(matches!(
            augment_virtual_ground(&chain3(false)),
            Err(Error::NothingToAugment)
        ));
    }

    #[test]
    fn elimination_zeroes_ground_row_and_column() {
        let (ground, body) = virtual_ground_elimination_residual(&chain3(true)).unwrap();
        assert!(ground <= 1e-12, "{ground}");
        assert!(body <= 1e-12, "{body}");
    }

    #[test]
    fn grounding_middle_node_folds_two_branches() {
        let model = chain3(false);
        let grounded = ground_complement(&model, &[NodeId(1)]).unwrap();
        assert_eq!(grounded.model.node_count(), 1);
        assert_eq!(grounded.folded_branches, vec![vec![0, 1]]);
        assert!(grounded.every_component_grounded());
        let y = assemble(&model).unwrap();
        let expected = y.subblock(&[NodeId(1)], &[NodeId(1)]).unwrap();
        assert!(assemble(&grounded.model).unwrap().data().max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn grounding_split_subset() {
        let model = chain3(true);
        let m = [NodeId(2), NodeId(0)];
        let grounded = ground_complement(&model, &m).unwrap();
        assert_eq!(grounded.nodes, vec![NodeId(0), NodeId(2)]);
        assert_eq!(grounded.components.len(), 2);
        assert_eq!(grounded.components[0].cut_edges, vec![0]);
        assert_eq!(grounded.components[1].cut_edges, vec![1]);
        let y = assemble(&model).unwrap();
        let expected = y.subblock(&m, &m).unwrap();
        assert!(assemble(&grounded.model).unwrap().data().max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn grounding_rejects_improper_subsets() {
        let model = chain3(false);
        assert!(matches!(ground_complement(&model, &[]), Err(Error::InvalidSubset(_))));
        let all: Vec<NodeId> = (0..3).map(NodeId).collect();
        assert!(matches!(ground_complement(&model, &all), Err(Error::InvalidSubset(_))));
        assert!(matches!(
            ground_complement(&model, &[NodeId(9)]),
            Err(Error::UnknownNode(_))
        ));
    }
}
