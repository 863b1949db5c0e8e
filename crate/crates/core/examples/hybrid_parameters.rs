//! Hybrid parameters for a partition: prescribe voltages outside M and
//! currents inside M, solve for the rest.
//!
//! cargo run --example hybrid_parameters

use polygrid::admittance::{apply_ohm, assemble};
use polygrid::hybrid::{apply_hybrid, hybrid_matrix};
use polygrid::random::{complex_values, random_grid, GridSpec};
use polygrid::{NodalVector, NodeId, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let model = random_grid(&mut rng, &GridSpec::new(6, 2));
    let y = assemble(&model)?;
    let h = hybrid_matrix(&y, &[NodeId(0), NodeId(3)])?;
    println!("M = {:?}, complement = {:?}", h.m_set, h.complement);

    // Take a consistent operating point from the admittance equations...
    let v = NodalVector::new(2, complex_values(&mut rng, 12))?;
    let i = apply_ohm(&y, &v)?;
    let pick = |x: &NodalVector, nodes: &[NodeId]| x.gather(&nodes.iter().map(|n| n.0).collect::<Vec<_>>());

    // ...and recover the unknown halves from the hybrid form.
    let (i_c, v_m) = apply_hybrid(&h, &pick(&v, &h.complement), &pick(&i, &h.m_set))?;
    let err_i = i_c
        .values()
        .iter()
        .zip(pick(&i, &h.complement).values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let err_v = v_m
        .values()
        .iter()
        .zip(pick(&v, &h.m_set).values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("current error {err_i:.1e}, voltage error {err_v:.1e}");
    Ok(())
}
