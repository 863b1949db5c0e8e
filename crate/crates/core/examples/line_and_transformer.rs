//! Build branch models from physical data: a π-section line from per-length
//! constants and a transformer T-section, then install both in a grid.
//!
//! cargo run --example line_and_transformer

use std::f64::consts::PI;

use nalgebra::DMatrix;
use polygrid::admittance::{assemble, rank_report, GridBuilder};
use polygrid::params::{build_pi_line, build_tee_transformer, LineParameters, TransformerParameters};
use polygrid::Result;

fn main() -> Result<()> {
    let omega = 2.0 * PI * 50.0;
    // Per-km constants of a three-phase overhead line.
    let mutual = |d: f64, m: f64| DMatrix::from_fn(3, 3, |i, j| if i == j { d } else { m });
    let line = build_pi_line(&LineParameters {
        r_per_len: mutual(0.25, 0.05),
        l_per_len: mutual(1.2e-3, 0.5e-3),
        g_per_len: DMatrix::identity(3, 3) * 1e-8,
        c_per_len: mutual(10e-9, -2e-9),
        length: 4.0,
        omega,
    })?;
    println!("line series impedance:\n{:?}", line.series_impedance.matrix());

    let transformer = build_tee_transformer(&TransformerParameters {
        rw1: DMatrix::identity(3, 3) * 0.01,
        ll1: DMatrix::identity(3, 3) * 1e-4,
        rw2: DMatrix::identity(3, 3) * 0.01,
        ll2: DMatrix::identity(3, 3) * 1e-4,
        gh: DMatrix::identity(3, 3) * 1e-3,
        bm: DMatrix::identity(3, 3) * 5e-2,
        omega,
    })?;

    let mut b = GridBuilder::new(3);
    let hv = b.add_node("hv")?;
    let mv = b.add_node("mv")?;
    let feeder_end = b.add_node("feeder_end")?;
    b.add_tee_section(hv, mv, &transformer)?;
    b.add_pi_section(mv, feeder_end, &line)?;
    let model = b.build()?;

    println!("nodes: {:?}", model.node_names());
    let y = assemble(&model)?;
    let r = rank_report(&model)?;
    println!(
        "Y is {}x{}; rank {} of predicted {}",
        y.data().rows(),
        y.data().cols(),
        r.measured,
        r.predicted
    );
    Ok(())
}
