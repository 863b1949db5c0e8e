//! Eliminate zero-injection nodes, check the equivalent against the full
//! grid, and reduce in stages.
//!
//! cargo run --example kron_reduction

use polygrid::admittance::assemble;
use polygrid::random::{random_grid, GridSpec};
use polygrid::reduction::{kron_reduce, recover_voltages, sequential_reduce, verify_reduction, ZeroInjectionSet};
use polygrid::{NodalVector, NodeId, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let model = random_grid(
        &mut rng,
        &GridSpec {
            shunt_probability: 0.3,
            ..GridSpec::new(8, 3)
        },
    );
    let y = assemble(&model)?;

    let z = [NodeId(1), NodeId(4), NodeId(6)];
    let reduced = kron_reduce(&y, &ZeroInjectionSet::new(model.node_count(), &z)?)?;
    println!(
        "kept {:?}, eliminated {:?}; reduced matrix is {}x{}",
        reduced.retained_nodes,
        reduced.eliminated_nodes,
        reduced.reduced_matrix.data().rows(),
        reduced.reduced_matrix.data().cols()
    );

    // Voltages at the eliminated nodes follow from the retained ones.
    let v = NodalVector::new(
        3,
        vec![polygrid::Complex64::new(1.0, 0.0); reduced.retained_nodes.len() * 3],
    )?;
    let v_inner = recover_voltages(&reduced, &v)?;
    println!(
        "eliminated-node voltage magnitude at {:?}: {:.6}",
        reduced.eliminated_nodes[0],
        v_inner.node(0)[0].norm()
    );

    let check = verify_reduction(&model, &reduced, 20, 1e-9, 0)?;
    println!(
        "verification over {} trials: eliminated current {:.1e}, retained mismatch {:.1e}",
        check.trials, check.max_eliminated_current, check.max_retained_mismatch
    );

    let staged = sequential_reduce(&y, &[vec![NodeId(4)], vec![NodeId(6), NodeId(1)]])?;
    let diff = staged.reduced_matrix.data().max_abs_diff(reduced.reduced_matrix.data());
    println!("staged vs en-bloc difference: {diff:.1e}");
    Ok(())
}
