//! Compound hybrid parameters for a node partition `(M, Mᶜ)`.
//!
//! ```text
//! [ I_Mᶜ ]   [ H_MᶜM   H_MᶜMᶜ ] [ I_M  ]
//! [ V_M  ] = [ H_MM    H_MMᶜ  ] [ V_Mᶜ ]
//! ```
//!
//! with `H_MM = Y_MM⁻¹`, `H_MMᶜ = −Y_MM⁻¹ Y_MMᶜ`, `H_MᶜM = Y_MᶜM Y_MM⁻¹` and
//! `H_MᶜMᶜ = Y / Y_MM`. Both sets are kept in ascending node order.

use crate::admittance::{BlockMatrix, NodalVector};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::linalg::{self, Complex64, ComplexMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct HybridMatrix {
    pub block_size: usize,
    pub m_set: Vec<NodeId>,
    pub complement: Vec<NodeId>,
    pub h_mm: ComplexMatrix,
    pub h_mmc: ComplexMatrix,
    pub h_mcm: ComplexMatrix,
    pub h_mcmc: ComplexMatrix,
}

/// Hybrid parameters of `y` for the proper subset `m`.
pub fn hybrid_matrix(y: &BlockMatrix, m: &[NodeId]) -> Result<HybridMatrix> {
    let m_set = y.sorted_set(m)?;
    if m_set.is_empty() || m_set.len() == y.node_count() {
        return Err(Error::InvalidSubset(format!(
            "hybrid parameters need a proper non-empty subset, got {} of {} nodes",
            m_set.len(),
            y.node_count()
        )));
    }
    let complement = y.complement(&m_set)?;
    let mi = y.scalar_indices(&m_set);
    let ci = y.scalar_indices(&complement);
    let data = y.data();
    let y_mm = data.select(&mi, &mi);
    let y_mc = data.select(&mi, &ci);
    let y_cm = data.select(&ci, &mi);
    let y_cc = data.select(&ci, &ci);

    // One solve against [I | Y_MMᶜ] gives both Y_MM⁻¹ and Y_MM⁻¹ Y_MMᶜ.
    let rhs = ComplexMatrix::from_fn(mi.len(), mi.len() + ci.len(), |i, j| match j.checked_sub(mi.len()) {
        Some(k) => y_mc[(i, k)],
        None if i == j => Complex64::new(1.0, 0.0),
        None => Complex64::new(0.0, 0.0),
    })?;
    let solved = linalg::solve(&y_mm, &rhs).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::InfeasibleHybrid,
        other => other,
    })?;
    let h_mm = solved.window(0, 0, mi.len(), mi.len());
    let y_mm_inv_y_mc = solved.window(0, mi.len(), mi.len(), ci.len());
    let h_mcm = &y_cm * &h_mm;
    let h_mcmc = &y_cc - &(&y_cm * &y_mm_inv_y_mc);
    Ok(HybridMatrix {
        block_size: y.block_size(),
        m_set,
        complement,
        h_mm,
        h_mmc: -&y_mm_inv_y_mc,
        h_mcm,
        h_mcmc,
    })
}

/// Response `(I_Mᶜ, V_M)` to the stimulus `(V_Mᶜ, I_M)`.
pub fn apply_hybrid(
    h: &HybridMatrix,
    v_complement: &NodalVector,
    i_m: &NodalVector,
) -> Result<(NodalVector, NodalVector)> {
    let p = h.block_size;
    let check = |v: &NodalVector, nodes: usize, what: &str| {
        if v.block_size() != p || v.node_count() != nodes {
            Err(Error::ShapeMismatch(format!(
                "{what}: expected {nodes} {p}-phase nodes, got {} {}-phase nodes",
                v.node_count(),
                v.block_size()
            )))
        } else {
            Ok(())
        }
    };
    check(v_complement, h.complement.len(), "complement voltages")?;
    check(i_m, h.m_set.len(), "subset currents")?;
    let vc = v_complement.to_column();
    let im = i_m.to_column();
    let i_complement = &h.h_mcm.matmul(&im)? + &h.h_mcmc.matmul(&vc)?;
    let v_m = &h.h_mm.matmul(&im)? + &h.h_mmc.matmul(&vc)?;
    Ok((
        NodalVector::from_column(p, &i_complement)?,
        NodalVector::from_column(p, &v_m)?,
    ))
}
