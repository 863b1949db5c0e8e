mod common;

use nalgebra::DMatrix;
use polygrid::linalg::{
    self, imag_part_definiteness, kronecker_identity_expand, numerical_rank, real_part_definiteness, schur_complement,
    Complex64, ComplexMatrix, Definiteness,
};
use polygrid::random::{complex_symmetric, PartKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(r, c, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
    .unwrap()
}

/// Random `r × c` matrix of rank `k` as a product of two random factors.
fn low_rank(rng: &mut ChaCha8Rng, r: usize, c: usize, k: usize) -> ComplexMatrix {
    random_matrix(rng, r, k).matmul(&random_matrix(rng, k, c)).unwrap()
}

fn conj_transpose(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_dmatrix(m.as_dmatrix().adjoint()).unwrap()
}

/// Diagonally dominant, hence well conditioned.
fn well_conditioned(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let m = random_matrix(rng, n, n);
    &m + &ComplexMatrix::scaled_identity(n, Complex64::new(2.0 * n as f64, 0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_real_part_survives_inversion(seed in any::<u64>(), n in 1usize..=12) {
        let mut r = rng(seed);
        let m = complex_symmetric(&mut r, n, PartKind::PositiveDefinite, PartKind::Symmetric);
        let inv = linalg::inverse(&m).unwrap();
        prop_assert_eq!(real_part_definiteness(&inv, 1e-8).unwrap(), Definiteness::PositiveDefinite);
    }

    #[test]
    fn positive_imag_part_turns_negative(seed in any::<u64>(), n in 1usize..=12) {
        let mut r = rng(seed);
        let m = complex_symmetric(&mut r, n, PartKind::Symmetric, PartKind::PositiveDefinite);
        let inv = linalg::inverse(&m).unwrap();
        prop_assert_eq!(imag_part_definiteness(&inv, 1e-8).unwrap(), Definiteness::NegativeDefinite);
    }

    #[test]
    fn determinant_factors_through_schur(seed in any::<u64>(), n in 2usize..=10, k in 1usize..=9) {
        prop_assume!(k < n);
        let mut r = rng(seed);
        let m = well_conditioned(&mut r, n);
        let keep: Vec<usize> = (0..n - k).collect();
        let elim: Vec<usize> = (n - k..n).collect();
        let s = schur_complement(&m, &keep, &elim).unwrap();
        let d = m.select(&elim, &elim);
        let lhs = m.determinant().unwrap().norm();
        let rhs = d.determinant().unwrap().norm() * s.determinant().unwrap().norm();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs, "{lhs} vs {rhs}");
    }

    #[test]
    fn gram_rank_equals_rank_for_real_matrices(seed in any::<u64>(), r in 1usize..=10, c in 1usize..=10, k in 0usize..=10) {
        let mut g = rng(seed);
        let k = k.min(r).min(c);
        let re = DMatrix::from_fn(r, k, |_, _| g.gen_range(-1.0..1.0)) * DMatrix::from_fn(k, c, |_, _| g.gen_range(-1.0..1.0));
        let m = ComplexMatrix::from_parts(&re, &DMatrix::zeros(r, c)).unwrap();
        let gram = m.transpose().matmul(&m).unwrap();
        let rank = numerical_rank(&m, 1e-10).unwrap().numerical_rank;
        prop_assert_eq!(rank, k);
        prop_assert_eq!(numerical_rank(&gram, 1e-10).unwrap().numerical_rank, rank);
    }

    #[test]
    fn hermitian_gram_rank_equals_rank(seed in any::<u64>(), r in 1usize..=10, c in 1usize..=10, k in 0usize..=10) {
        let mut g = rng(seed);
        let k = k.min(r).min(c);
        let m = if k == 0 { ComplexMatrix::zeros(r, c) } else { low_rank(&mut g, r, c, k) };
        let gram = conj_transpose(&m).matmul(&m).unwrap();
        prop_assert_eq!(numerical_rank(&gram, 1e-10).unwrap().numerical_rank, k);
        prop_assert_eq!(numerical_rank(&m, 1e-10).unwrap().numerical_rank, k);
    }

    #[test]
    fn generic_transpose_gram_keeps_rank(seed in any::<u64>(), r in 1usize..=10, c in 1usize..=10, k in 1usize..=10) {
        let mut g = rng(seed);
        let k = k.min(r).min(c);
        let m = low_rank(&mut g, r, c, k);
        let gram = m.transpose().matmul(&m).unwrap();
        prop_assert_eq!(numerical_rank(&gram, 1e-10).unwrap().numerical_rank, k);
    }

    #[test]
    fn rank_invariant_under_nonsingular_factors(seed in any::<u64>(), r in 1usize..=8, c in 1usize..=8, k in 1usize..=8) {
        let mut g = rng(seed);
        let k = k.min(r).min(c);
        let m = low_rank(&mut g, r, c, k);
        let a = well_conditioned(&mut g, r);
        let b = well_conditioned(&mut g, c);
        prop_assert_eq!(numerical_rank(&a.matmul(&m).unwrap(), 1e-10).unwrap().numerical_rank, k);
        prop_assert_eq!(numerical_rank(&m.matmul(&b).unwrap(), 1e-10).unwrap().numerical_rank, k);
    }

    #[test]
    fn schur_blocks_are_bordered_complements(seed in any::<u64>(), n in 3usize..=10) {
        let mut g = rng(seed);
        let m = well_conditioned(&mut g, n);
        let split = g.gen_range(1..n);
        let keep: Vec<usize> = (0..split).collect();
        let elim: Vec<usize> = (split..n).collect();
        let s = schur_complement(&m, &keep, &elim).unwrap();
        let d = m.select(&elim, &elim);
        for i in 0..keep.len() {
            for j in 0..keep.len() {
                let b_i = m.select(&[keep[i]], &elim);
                let c_j = m.select(&elim, &[keep[j]]);
                let expect = m[(keep[i], keep[j])] - b_i.matmul(&linalg::solve(&d, &c_j).unwrap()).unwrap()[(0, 0)];
                prop_assert!((s[(i, j)] - expect).norm() <= 1e-10 * (1.0 + expect.norm()));
            }
            // The diagonal entry is also the Schur complement of the
            // bordered principal submatrix.
            let mut sub = vec![keep[i]];
            sub.extend(&elim);
            let local_elim: Vec<usize> = (1..sub.len()).collect();
            let bordered = schur_complement(&m.select(&sub, &sub), &[0], &local_elim).unwrap();
            prop_assert!((bordered[(0, 0)] - s[(i, i)]).norm() <= 1e-10 * (1.0 + s[(i, i)].norm()));
        }
    }

    #[test]
    fn kronecker_expansion_multiplies_rank(seed in any::<u64>(), r in 1usize..=6, c in 1usize..=6, k in 1usize..=6, p in 1usize..=4) {
        let mut g = rng(seed);
        let k = k.min(r).min(c);
        let a = low_rank(&mut g, r, c, k);
        let expanded = kronecker_identity_expand(&a, p).unwrap();
        prop_assert_eq!(expanded.shape(), (r * p, c * p));
        prop_assert_eq!(numerical_rank(&expanded, 1e-10).unwrap().numerical_rank, k * p);
    }

    #[test]
    fn svd_agrees_with_jacobi_oracle(seed in any::<u64>(), r in 1usize..=9, c in 1usize..=9, k in 1usize..=9) {
        let mut g = rng(seed);
        let k = k.min(r).min(c);
        let m = low_rank(&mut g, r, c, k);
        let lib = linalg::singular_values(&m);
        let oracle = common::jacobi_singular_values(&m);
        prop_assert_eq!(lib.len(), oracle.len());
        for (a, b) in lib.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + lib[0]), "{a} vs {b}");
        }
        prop_assert_eq!(common::jacobi_rank(&m, 1e-10), numerical_rank(&m, 1e-10).unwrap().numerical_rank);
    }

    #[test]
    fn solve_matches_gauss_jordan(seed in any::<u64>(), n in 1usize..=10) {
        let mut g = rng(seed);
        let a = well_conditioned(&mut g, n);
        let inv = linalg::inverse(&a).unwrap();
        prop_assert!(common::rel_diff(&inv, &common::gauss_jordan_inverse(&a)) <= 1e-12);
    }
}

/// With a plain transpose the Gram identity fails for complex matrices:
/// `[1, j]ᵀ[1, j] = 1 + j² = 0`. The library makes no claim here; the
/// rank results only apply it to real incidence matrices.
#[test]
fn transpose_gram_can_drop_rank_for_complex_matrices() {
    let m = ComplexMatrix::from_rows(&[vec![Complex64::new(1.0, 0.0)], vec![Complex64::new(0.0, 1.0)]]).unwrap();
    let gram = m.transpose().matmul(&m).unwrap();
    assert_eq!(gram.max_abs(), 0.0);
    assert_eq!(numerical_rank(&m, 1e-10).unwrap().numerical_rank, 1);
    assert_eq!(numerical_rank(&gram, 1e-10).unwrap().numerical_rank, 0);
    let hermitian = conj_transpose(&m).matmul(&m).unwrap();
    assert_eq!(numerical_rank(&hermitian, 1e-10).unwrap().numerical_rank, 1);
}
