//! Audit constructions: ground everything outside a node subset, and turn
//! ground into an ordinary node.
//!
//! cargo run --example proof_oracles

use polygrid::admittance::{assemble, rank_report};
use polygrid::linalg::numerical_rank;
use polygrid::oracle::{augment_virtual_ground, ground_complement, virtual_ground_elimination_residual};
use polygrid::random::{random_grid, GridSpec};
use polygrid::{NodeId, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = random_grid(
        &mut rng,
        &GridSpec {
            at_least_one_shunt: true,
            ..GridSpec::new(7, 2)
        },
    );
    let y = assemble(&model)?;

    let m = [NodeId(0), NodeId(2), NodeId(5)];
    let grounded = ground_complement(&model, &m)?;
    for comp in &grounded.components {
        let cut: Vec<String> = comp.cut_edges.iter().map(|&e| model.describe_edge(e)).collect();
        println!("component {:?} is grounded through {cut:?}", comp.nodes);
    }
    let diff = assemble(&grounded.model)?.data().max_abs_diff(&y.subblock(&m, &m)?);
    println!("fictional grid reproduces Y[M, M] to {diff:.1e}");

    let augmented = augment_virtual_ground(&model)?;
    let rank = numerical_rank(assemble(&augmented)?.data(), 1e-10)?.numerical_rank;
    println!(
        "augmented grid: {} nodes, rank {rank}; original grid predicted rank {}",
        augmented.node_count(),
        rank_report(&model)?.predicted
    );
    let (ground, body) = virtual_ground_elimination_residual(&model)?;
    println!("row/column elimination leaves {ground:.1e} in the ground block, {body:.1e} elsewhere");
    Ok(())
}
