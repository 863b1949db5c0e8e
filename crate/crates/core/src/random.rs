//! Seeded generators for random grids and matrices.
//!
//! Used by the property tests, the acceptance suite and `--verify`; also
//! handy for audits. Every generator takes an explicit RNG so results are
//! reproducible from a seed.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::admittance::{GridBuilder, GridModel};
use crate::graph::NodeId;
use crate::linalg::{Complex64, ComplexMatrix};

/// Random real symmetric positive definite `n × n` matrix:
/// `scale · (B Bᵀ / n + floor · I)` with `B` uniform in `[-1, 1]`.
pub fn spd_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64, floor: f64) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    (&b * b.transpose() / n as f64 + DMatrix::identity(n, n) * floor) * scale
}

/// Random real symmetric matrix with entries in `[-scale, scale]`.
pub fn symmetric_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-scale..scale));
    (&b + b.transpose()) * 0.5
}

/// Complex-symmetric matrix with the requested real/imaginary structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartKind {
    Zero,
    PositiveDefinite,
    Symmetric,
}

pub fn complex_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, re: PartKind, im: PartKind) -> ComplexMatrix {
    let mut part = |kind: PartKind| match kind {
        PartKind::Zero => DMatrix::zeros(n, n),
        PartKind::PositiveDefinite => spd_matrix(rng, n, 1.0, 0.1),
        PartKind::Symmetric => symmetric_matrix(rng, n, 1.0),
    };
    let re = part(re);
    let im = part(im);
    ComplexMatrix::from_parts(&re, &im).expect("finite parts")
}

/// Compound branch impedance resembling a line or transformer winding:
/// positive definite inductive part, and a positive definite resistive part
/// unless `lossless`.
pub fn branch_impedance<R: Rng + ?Sized>(rng: &mut R, p: usize, lossless: bool) -> ComplexMatrix {
    let re = if lossless {
        DMatrix::zeros(p, p)
    } else {
        let scale = rng.gen_range(0.05..0.5);
        spd_matrix(rng, p, scale, 0.2)
    };
    let scale = rng.gen_range(0.2..1.5);
    let im = spd_matrix(rng, p, scale, 0.2);
    ComplexMatrix::from_parts(&re, &im).expect("finite parts")
}

/// Compound shunt admittance with positive definite real and imaginary
/// parts, typically much smaller than branch admittances.
pub fn shunt_admittance<R: Rng + ?Sized>(rng: &mut R, p: usize) -> ComplexMatrix {
    let (re_scale, im_scale) = (rng.gen_range(0.005..0.05), rng.gen_range(0.01..0.2));
    let re = spd_matrix(rng, p, re_scale, 0.2);
    let im = spd_matrix(rng, p, im_scale, 0.2);
    ComplexMatrix::from_parts(&re, &im).expect("finite parts")
}

/// Shape of a random grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nodes: usize,
    pub phases: usize,
    /// Branches added on top of a random spanning tree; may be parallel.
    pub extra_branches: usize,
    /// Probability that a node gets a non-zero shunt.
    pub shunt_probability: f64,
    /// Force at least one non-zero shunt.
    pub at_least_one_shunt: bool,
    /// Purely reactive branches (`Re{Z} = 0`).
    pub lossless: bool,
}

impl GridSpec {
    pub fn new(nodes: usize, phases: usize) -> Self {
        Self {
            nodes,
            phases,
            extra_branches: nodes / 2,
            shunt_probability: 0.0,
            at_least_one_shunt: false,
            lossless: false,
        }
    }
}

/// Random weakly connected branch list: a random spanning tree with random
/// orientations plus `extra` random branches.
pub fn connected_pairs<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        pairs.push(if rng.gen_bool(0.5) {
            (parent, child)
        } else {
            (child, parent)
        });
    }
    if n >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            pairs.push((a, b));
        }
    }
    pairs.shuffle(rng);
    pairs
}

/// Random hypothesis-conformant, weakly connected grid.
pub fn random_grid<R: Rng + ?Sized>(rng: &mut R, spec: &GridSpec) -> GridModel {
    let mut b = GridBuilder::new(spec.phases);
    let ids: Vec<NodeId> = (0..spec.nodes)
        .map(|i| b.add_node(format!("n{i}")).expect("unique names"))
        .collect();
    for (from, to) in connected_pairs(rng, spec.nodes, spec.extra_branches) {
        let z = branch_impedance(rng, spec.phases, spec.lossless);
        b.add_branch(ids[from], ids[to], z).expect("valid endpoints");
    }
    let mut any_shunt = false;
    for &id in &ids {
        if rng.gen_bool(spec.shunt_probability.clamp(0.0, 1.0)) {
            b.add_shunt(id, shunt_admittance(rng, spec.phases)).expect("valid node");
            any_shunt = true;
        }
    }
    if spec.at_least_one_shunt && !any_shunt {
        let id = ids[rng.gen_range(0..ids.len())];
        b.add_shunt(id, shunt_admittance(rng, spec.phases)).expect("valid node");
    }
    b.build().expect("random grids are conformant")
}

/// Uniformly random proper, non-empty subset of `0..n` (needs `n ≥ 2`).
pub fn proper_subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<NodeId> {
    assert!(n >= 2, "no proper non-empty subset of {n} nodes");
    loop {
        let set: Vec<NodeId> = (0..n).filter(|_| rng.gen_bool(0.5)).map(NodeId).collect();
        if !set.is_empty() && set.len() < n {
            return set;
        }
    }
}

/// Random complex column of `len` entries in the unit box.
pub fn complex_values<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::is_weakly_connected;

    #[test]
    fn generated_grids_are_connected_and_reproducible() {
        let spec = GridSpec {
            shunt_probability: 0.3,
            ..GridSpec::new(12, 3)
        };
        let a = random_grid(&mut ChaCha8Rng::seed_from_u64(5), &spec);
        let b = random_grid(&mut ChaCha8Rng::seed_from_u64(5), &spec);
        assert_eq!(a, b);
        assert!(is_weakly_connected(a.graph()));
        assert_eq!(a.graph().edge_count(), 11 + 6);
        assert!(a.is_strictly_passive());
    }

    #[test]
    fn lossless_grids_are_not_strictly_passive() {
        let spec = GridSpec {
            lossless: true,
            ..GridSpec::new(4, 2)
        };
        let g = random_grid(&mut ChaCha8Rng::seed_from_u64(1), &spec);
        assert!(!g.is_strictly_passive());
    }

    #[test]
    fn subsets_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = proper_subset(&mut rng, 3);
            assert!(!s.is_empty() && s.len() < 3);
        }
    }
}
