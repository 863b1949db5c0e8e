//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is the numeric carrier for every matrix in the crate
//! (impedances, admittances, incidence matrices, hybrid blocks). The
//! decompositions are delegated to `nalgebra`; this module adds the
//! scale-aware tolerances used throughout: numerical rank from singular
//! values, definiteness of symmetrized real and imaginary parts, and
//! condition-checked solves.
//!
//! Symmetry means `M = Mᵀ` (no conjugation). Admittance matrices of
//! passive grids are complex-symmetric, not Hermitian.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative tolerance for numerical rank and singularity detection.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// `value · I_n`.
    pub fn scaled_identity(n: usize, value: Complex64) -> Self {
        Self(DMatrix::from_diagonal_element(n, n, value))
    }

    /// Builds a matrix from rows of equal length. Rejects ragged or
    /// non-finite input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        Self::from_dmatrix(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    /// Builds a matrix with zero imaginary part.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// `re + j·im` from two real matrices of equal shape.
    pub fn from_parts(re: &DMatrix<f64>, im: &DMatrix<f64>) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::ShapeMismatch(format!(
                "real part {:?} vs imaginary part {:?}",
                re.shape(),
                im.shape()
            )));
        }
        Self::from_dmatrix(DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        }))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self(m))
    }

    /// Block-diagonal matrix from square or rectangular blocks.
    pub fn block_diagonal(blocks: &[ComplexMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.view_mut((r0, c0), (b.rows(), b.cols())).copy_from(&b.0);
            r0 += b.rows();
            c0 += b.cols();
        }
        Self(out)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.0.map(|z| z.re)
    }

    pub fn imag_part(&self) -> DMatrix<f64> {
        self.0.map(|z| z.im)
    }

    /// Largest entry modulus, 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Gathers rows and columns in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self(DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.0[(rows[i], cols[j])]
        }))
    }

    /// Copy of the `(r0, c0)`-anchored `rows × cols` window.
    pub fn window(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self(self.0.view((r0, c0), (rows, cols)).into_owned())
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&ComplexMatrix]) -> Result<Self> {
        let cols = parts.first().map_or(0, |p| p.cols());
        if parts.iter().any(|p| p.cols() != cols) {
            return Err(Error::ShapeMismatch("vstack column counts differ".into()));
        }
        let rows = parts.iter().map(|p| p.rows()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            out.view_mut((r0, 0), (p.rows(), cols)).copy_from(&p.0);
            r0 += p.rows();
        }
        Ok(Self(out))
    }

    /// Matrix product with a shape check.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    /// Entrywise sum with a shape check.
    pub fn try_add(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} plus {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(Self(&self.0 + &rhs.0))
    }

    pub fn determinant(&self) -> Result<Complex64> {
        require_square(self)?;
        Ok(self.0.clone().lu().determinant())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

// Operators panic on shape mismatch, like nalgebra's. Use `matmul` /
// `try_add` where shapes come from user input.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub numerical_rank: usize,
    /// Sorted descending.
    pub singular_values: Vec<f64>,
    /// Absolute threshold the singular values were compared against.
    pub tolerance_used: f64,
}

/// Singular values, sorted descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.0.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Counts singular values above `rel_tol · σ_max · max(rows, cols)`.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> Result<RankResult> {
    check_rel_tol(rel_tol)?;
    check_finite(m)?;
    let sv = singular_values(m);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let tolerance_used = rel_tol * sigma_max * m.rows().max(m.cols()) as f64;
    let numerical_rank = sv.iter().filter(|&&s| s > tolerance_used).count();
    Ok(RankResult {
        numerical_rank,
        singular_values: sv,
        tolerance_used,
    })
}

/// `max|M_ij − M_ji| ≤ tol · (1 + max|M_ij|)`.
pub fn is_symmetric(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    require_square(m)?;
    Ok(symmetry_defect(m) <= tol * (1.0 + m.max_abs()))
}

/// Largest `|M_ij − M_ji|`.
pub fn symmetry_defect(m: &ComplexMatrix) -> f64 {
    let n = m.rows().min(m.cols());
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemiDefinite,
    Indefinite,
    NegativeSemiDefinite,
    NegativeDefinite,
}

impl Definiteness {
    /// True for the `⪰ 0` cone (definite or semi-definite).
    pub fn is_positive_semidefinite(self) -> bool {
        matches!(self, Self::PositiveDefinite | Self::PositiveSemiDefinite)
    }
}

/// Classifies a real symmetric matrix by its eigenvalue signs. Eigenvalues
/// within `±zero_band` count as zero; an all-zero spectrum is
/// `PositiveSemiDefinite`.
pub fn classify_symmetric(m: &DMatrix<f64>, zero_band: f64) -> Definiteness {
    if m.is_empty() {
        return Definiteness::PositiveSemiDefinite;
    }
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    let all = |f: &dyn Fn(f64) -> bool| eig.iter().all(|&x| f(x));
    if all(&|x| x > zero_band) {
        Definiteness::PositiveDefinite
    } else if all(&|x| x < -zero_band) {
        Definiteness::NegativeDefinite
    } else if all(&|x| x >= -zero_band) {
        Definiteness::PositiveSemiDefinite
    } else if all(&|x| x <= zero_band) {
        Definiteness::NegativeSemiDefinite
    } else {
        Definiteness::Indefinite
    }
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Definiteness of `½(Re{M} + Re{M}ᵀ)` against `±tol·(1 + max|M_ij|)`.
pub fn real_part_definiteness(m: &ComplexMatrix, tol: f64) -> Result<Definiteness> {
    part_definiteness(m, tol, ComplexMatrix::real_part)
}

/// Definiteness of `½(Im{M} + Im{M}ᵀ)`, same conventions as
/// [`real_part_definiteness`].
pub fn imag_part_definiteness(m: &ComplexMatrix, tol: f64) -> Result<Definiteness> {
    part_definiteness(m, tol, ComplexMatrix::imag_part)
}

fn part_definiteness(m: &ComplexMatrix, tol: f64, part: fn(&ComplexMatrix) -> DMatrix<f64>) -> Result<Definiteness> {
    if !m.is_square() {
        return Err(Error::InvalidMatrix(format!(
            "definiteness needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !is_symmetric(m, tol)? {
        return Err(Error::InvalidMatrix("matrix is not symmetric".into()));
    }
    let band = tol * (1.0 + m.max_abs());
    Ok(classify_symmetric(&symmetrize(&part(m)), band))
}

/// Solves `A X = B` with the default singularity threshold.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve_with_tol(a, b, DEFAULT_RANK_TOL)
}

/// Solves `A X = B` by partially pivoted LU. Fails with `SingularMatrix`
/// when the 2-norm condition number exceeds `1 / rel_tol`.
pub fn solve_with_tol(a: &ComplexMatrix, b: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    check_rel_tol(rel_tol)?;
    require_square(a)?;
    if b.rows() != a.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side has {} rows, matrix has {}",
            b.rows(),
            a.rows()
        )));
    }
    if a.rows() == 0 {
        return Ok(ComplexMatrix::zeros(0, b.cols()));
    }
    let condition = condition_number(a);
    if condition.is_nan() || condition > 1.0 / rel_tol {
        return Err(Error::SingularMatrix { condition });
    }
    a.0.clone()
        .lu()
        .solve(&b.0)
        .map(ComplexMatrix)
        .ok_or(Error::SingularMatrix { condition })
}

/// `A⁻¹`, with the same singularity rule as [`solve`].
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(a, &ComplexMatrix::identity(a.rows()))
}

/// `σ_max / σ_min`; infinite for singular or all-zero matrices.
pub fn condition_number(a: &ComplexMatrix) -> f64 {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Schur complement `A − B D⁻¹ C` of `D = M[eliminate, eliminate]`,
/// indexed in the order of `keep`.
pub fn schur_complement(m: &ComplexMatrix, keep: &[usize], eliminate: &[usize]) -> Result<ComplexMatrix> {
    require_square(m)?;
    check_partition(m.rows(), keep, eliminate)?;
    let a = m.select(keep, keep);
    if eliminate.is_empty() {
        return Ok(a);
    }
    let b = m.select(keep, eliminate);
    let c = m.select(eliminate, keep);
    let d = m.select(eliminate, eliminate);
    let d_inv_c = solve(&d, &c).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::SingularBlock,
        other => other,
    })?;
    Ok(&a - &(&b * &d_inv_c))
}

fn check_partition(n: usize, keep: &[usize], eliminate: &[usize]) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::InvalidPartition("keep set is empty".into()));
    }
    let mut seen = vec![false; n];
    for &i in keep.iter().chain(eliminate) {
        if i >= n {
            return Err(Error::InvalidPartition(format!("index {i} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidPartition(format!("index {i} appears twice")));
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::InvalidPartition(format!("index {missing} not covered")));
    }
    Ok(())
}

/// `A ⊗ I_p`: every scalar `a_ij` becomes the block `a_ij · I_p`.
pub fn kronecker_identity_expand(a: &ComplexMatrix, p: usize) -> Result<ComplexMatrix> {
    if p == 0 {
        return Err(Error::InvalidPhaseCount);
    }
    let (r, c) = a.shape();
    let mut out = DMatrix::zeros(r * p, c * p);
    for i in 0..r {
        for j in 0..c {
            let v = a[(i, j)];
            if v != Complex64::new(0.0, 0.0) {
                for k in 0..p {
                    out[(i * p + k, j * p + k)] = v;
                }
            }
        }
    }
    Ok(ComplexMatrix(out))
}

pub(crate) fn require_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )))
    }
}

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(rel_tol))
    }
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.0.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidMatrix("non-finite entry".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(
            numerical_rank(&ComplexMatrix::identity(3), 1e-10)
                .unwrap()
                .numerical_rank,
            3
        );
        let zero = numerical_rank(&ComplexMatrix::zeros(4, 4), 1e-10).unwrap();
        assert_eq!(zero.numerical_rank, 0);
        assert_eq!(zero.tolerance_used, 0.0);
    }

    #[test]
    fn rank_of_laplacian_pair() {
        // singular values {2, 0}
        let r = numerical_rank(&real(&[&[1.0, -1.0], &[-1.0, 1.0]]), 1e-10).unwrap();
        assert_eq!(r.numerical_rank, 1);
        assert!((r.singular_values[0] - 2.0).abs() < 1e-14);
        assert!(r.singular_values[1] < 1e-14);
    }

    #[test]
    fn rank_rejects_bad_tolerance_and_nan() {
        assert!(matches!(
            numerical_rank(&ComplexMatrix::identity(2), 0.0),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(matches!(
            numerical_rank(&ComplexMatrix::identity(2), 1.0),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(ComplexMatrix::from_rows(&[vec![c(f64::NAN, 0.0)]]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![c(0.0, f64::INFINITY)]]).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(3.0, 0.0)]]).unwrap();
        assert!(is_symmetric(&m, 1e-9).unwrap());
        assert!(!is_symmetric(&real(&[&[1.0, 2.0], &[-2.0, 1.0]]), 1e-9).unwrap());
        assert!(is_symmetric(&ComplexMatrix::scaled_identity(1, c(0.0, 5.0)), 1e-9).unwrap());
        assert!(matches!(
            is_symmetric(&ComplexMatrix::zeros(2, 3), 1e-9),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn symmetry_is_not_hermitian() {
        // Hermitian but not symmetric.
        let h = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]).unwrap();
        assert!(!is_symmetric(&h, 1e-9).unwrap());
    }

    #[test]
    fn definiteness_examples() {
        use Definiteness::*;
        assert_eq!(
            real_part_definiteness(&real(&[&[2.0, 0.0], &[0.0, 3.0]]), 1e-9).unwrap(),
            PositiveDefinite
        );
        assert_eq!(
            real_part_definiteness(&real(&[&[1.0, 1.0], &[1.0, 1.0]]), 1e-9).unwrap(),
            PositiveSemiDefinite
        );
        assert_eq!(
            real_part_definiteness(&ComplexMatrix::zeros(2, 2), 1e-9).unwrap(),
            PositiveSemiDefinite
        );
        assert_eq!(
            real_part_definiteness(&real(&[&[-1.0, 0.0], &[0.0, -2.0]]), 1e-9).unwrap(),
            NegativeDefinite
        );
        assert_eq!(
            real_part_definiteness(&real(&[&[-1.0, 0.0], &[0.0, 0.0]]), 1e-9).unwrap(),
            NegativeSemiDefinite
        );
        assert_eq!(
            real_part_definiteness(&real(&[&[1.0, 0.0], &[0.0, -1.0]]), 1e-9).unwrap(),
            Indefinite
        );
        // imaginary part ignored by the real-part test
        let z = ComplexMatrix::scaled_identity(3, c(0.0, 1.0));
        assert_eq!(real_part_definiteness(&z, 1e-9).unwrap(), PositiveSemiDefinite);
        assert_eq!(imag_part_definiteness(&z, 1e-9).unwrap(), PositiveDefinite);
    }

    #[test]
    fn definiteness_rejects_asymmetric() {
        assert!(matches!(
            real_part_definiteness(&real(&[&[1.0, 2.0], &[3.0, 4.0]]), 1e-9),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(matches!(
            real_part_definiteness(&ComplexMatrix::zeros(1, 2), 1e-9),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let b = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0)], vec![c(-3.0, 0.5)]]).unwrap();
        assert_eq!(solve(&ComplexMatrix::identity(2), &b).unwrap(), b);
        let x = solve(&real(&[&[2.0, 0.0], &[0.0, 4.0]]), &real(&[&[2.0], &[8.0]])).unwrap();
        assert!(x.max_abs_diff(&real(&[&[1.0], &[2.0]])) < 1e-15);
        assert!(matches!(
            solve(&real(&[&[1.0, 1.0], &[1.0, 1.0]]), &b),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(matches!(
            solve(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(3, 1)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn schur_examples() {
        let m = real(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let s = schur_complement(&m, &[0], &[1]).unwrap();
        assert!((s[(0, 0)] - c(1.5, 0.0)).norm() < 1e-15);

        let s = schur_complement(&ComplexMatrix::identity(4), &[0, 1], &[2, 3]).unwrap();
        assert_eq!(s, ComplexMatrix::identity(2));

        let bd = ComplexMatrix::block_diagonal(&[real(&[&[3.0, 1.0], &[1.0, 2.0]]), real(&[&[5.0]])]);
        let s = schur_complement(&bd, &[0, 1], &[2]).unwrap();
        assert_eq!(s, real(&[&[3.0, 1.0], &[1.0, 2.0]]));
    }

    #[test]
    fn schur_keeps_caller_order() {
        let m = real(&[&[4.0, 1.0, 0.5], &[1.0, 3.0, 0.2], &[0.5, 0.2, 2.0]]);
        let fwd = schur_complement(&m, &[0, 1], &[2]).unwrap();
        let rev = schur_complement(&m, &[1, 0], &[2]).unwrap();
        assert_eq!(fwd[(0, 1)], rev[(1, 0)]);
        assert_eq!(fwd[(0, 0)], rev[(1, 1)]);
    }

    #[test]
    fn schur_errors() {
        let m = real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(schur_complement(&m, &[0], &[1]), Err(Error::SingularBlock)));
        assert!(matches!(
            schur_complement(&ComplexMatrix::identity(3), &[0, 1], &[1, 2]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            schur_complement(&ComplexMatrix::identity(3), &[0], &[1]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn kronecker_examples() {
        let a = real(&[&[1.0, -1.0]]);
        let e = kronecker_identity_expand(&a, 2).unwrap();
        assert_eq!(e, real(&[&[1.0, 0.0, -1.0, 0.0], &[0.0, 1.0, 0.0, -1.0]]));
        assert_eq!(kronecker_identity_expand(&a, 1).unwrap(), a);
        assert!(matches!(
            kronecker_identity_expand(&a, 0),
            Err(Error::InvalidPhaseCount)
        ));
    }
}
