//! Assemble the admittance matrix of a small three-phase feeder and compare
//! predicted and measured ranks.
//!
//! cargo run --example assemble_and_rank

use polygrid::admittance::{assemble, block_rank_report, rank_report, GridBuilder};
use polygrid::linalg::{Complex64, ComplexMatrix};
use polygrid::Result;

/// Symmetric coupling matrix with `self_z` on the diagonal and `mutual`
/// elsewhere.
fn coupled(p: usize, self_z: Complex64, mutual: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_fn(p, p, |i, j| if i == j { self_z } else { mutual }).unwrap()
}

fn main() -> Result<()> {
    let mut b = GridBuilder::new(3);
    let slack = b.add_node("slack")?;
    let mid = b.add_node("mid")?;
    let load = b.add_node("load")?;
    let z = coupled(3, Complex64::new(0.08, 0.40), Complex64::new(0.02, 0.15));
    b.add_branch(slack, mid, z.clone())?;
    b.add_branch(mid, load, z.scale(Complex64::new(1.5, 0.0)))?;
    let without_shunts = b.clone().build()?;

    b.add_shunt(load, ComplexMatrix::scaled_identity(3, Complex64::new(0.5, -0.1)))?;
    let with_load = b.build()?;

    for (label, model) in [("no shunts", &without_shunts), ("with load", &with_load)] {
        let y = assemble(model)?;
        let r = rank_report(model)?;
        println!(
            "{label}: Y is {}x{}, predicted rank {}, measured {}",
            y.data().rows(),
            y.data().cols(),
            r.predicted,
            r.measured
        );
    }

    // Any proper diagonal subblock is invertible for strictly passive grids.
    let m = [slack, load];
    let r = block_rank_report(&without_shunts, &m)?;
    println!("Y[{{slack, load}}]: predicted {}, measured {}", r.predicted, r.measured);
    Ok(())
}
