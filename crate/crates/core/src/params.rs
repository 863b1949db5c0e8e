//! Compound electrical parameters and component builders.
//!
//! Every branch impedance must be symmetric, invertible and passive
//! (`Re{Z} ⪰ 0`). Shunt admittances may be zero; otherwise the same three
//! conditions apply. The validated wrappers [`CompoundBranchImpedance`]
//! and [`CompoundShuntAdmittance`] can only be built from conformant
//! matrices, so everything downstream may assume the hypothesis holds.
//!
//! The builders turn physical component data (per-length line constants,
//! transformer winding and core data, compensators) into π- and T-section
//! equivalents. All values are per-unit; `omega` is always an explicit
//! argument.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result, Violation};
use crate::linalg::{
    classify_symmetric, is_symmetric, numerical_rank, real_part_definiteness, Complex64, ComplexMatrix, Definiteness,
};

/// Tolerances shared by every validator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative symmetry tolerance, see [`is_symmetric`].
    pub symmetry: f64,
    /// Relative singular-value threshold for invertibility.
    pub rank: f64,
    /// Eigenvalue sign band, scaled by `1 + max|entry|`.
    pub definiteness: f64,
    /// Absolute entry magnitude below which a shunt counts as zero.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-9,
            rank: 1e-10,
            definiteness: 1e-9,
            zero: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    NotSquare,
    WrongSize,
    Asymmetric,
    Singular,
    NotPassive,
}

impl Reason {
    pub fn tag(self) -> &'static str {
        match self {
            Reason::NotSquare => "not_square",
            Reason::WrongSize => "wrong_size",
            Reason::Asymmetric => "asymmetric",
            Reason::Singular => "singular",
            Reason::NotPassive => "not_passive",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchCheck {
    Conformant { strictly_passive: bool },
    Violation { reasons: Vec<Reason> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShuntCheck {
    Zero,
    Conformant,
    Violation { reasons: Vec<Reason> },
}

/// Symmetry, invertibility and passivity. Returns the violated conditions,
/// or the real-part definiteness when all hold.
fn check_conformant(m: &ComplexMatrix, tol: &Tolerances) -> std::result::Result<Definiteness, Vec<Reason>> {
    if !m.is_square() || m.rows() == 0 {
        return Err(vec![Reason::NotSquare]);
    }
    let mut reasons = Vec::new();
    let symmetric = is_symmetric(m, tol.symmetry).unwrap_or(false);
    if !symmetric {
        reasons.push(Reason::Asymmetric);
    }
    let full_rank = numerical_rank(m, tol.rank).is_ok_and(|r| r.numerical_rank == m.rows());
    if !full_rank {
        reasons.push(Reason::Singular);
    }
    // Passivity is judged on the symmetrized real part even when the
    // matrix is asymmetric, so every failing condition gets reported.
    let re = m.real_part();
    let band = tol.definiteness * (1.0 + m.max_abs());
    let definiteness = classify_symmetric(&((&re + re.transpose()) * 0.5), band);
    if !definiteness.is_positive_semidefinite() {
        reasons.push(Reason::NotPassive);
    }
    if reasons.is_empty() {
        Ok(definiteness)
    } else {
        Err(reasons)
    }
}

/// Checks a branch impedance against the hypothesis and reports strict
/// passivity (`Re{Z} ≻ 0`).
pub fn validate_branch_impedance(z: &ComplexMatrix, tol: &Tolerances) -> BranchCheck {
    match check_conformant(z, tol) {
        Ok(d) => BranchCheck::Conformant {
            strictly_passive: d == Definiteness::PositiveDefinite,
        },
        Err(reasons) => BranchCheck::Violation { reasons },
    }
}

/// Checks a shunt admittance: zero, or symmetric + invertible + passive.
pub fn validate_shunt_admittance(y: &ComplexMatrix, tol: &Tolerances) -> ShuntCheck {
    if y.is_square() && y.max_abs() <= tol.zero {
        return ShuntCheck::Zero;
    }
    match check_conformant(y, tol) {
        Ok(_) => ShuntCheck::Conformant,
        Err(reasons) => ShuntCheck::Violation { reasons },
    }
}

fn violation(element: impl Into<String>, reasons: &[Reason]) -> Error {
    Error::HypothesisViolation(vec![Violation {
        element: element.into(),
        reasons: reasons.iter().map(|r| r.tag().to_string()).collect(),
    }])
}

/// A validated compound branch impedance `Z_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundBranchImpedance {
    matrix: ComplexMatrix,
    strictly_passive: bool,
}

impl CompoundBranchImpedance {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        match validate_branch_impedance(&matrix, tol) {
            BranchCheck::Conformant { strictly_passive } => Ok(Self {
                matrix,
                strictly_passive,
            }),
            BranchCheck::Violation { reasons } => Err(violation("branch impedance", &reasons)),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn phase_count(&self) -> usize {
        self.matrix.rows()
    }

    /// `Re{Z} ≻ 0`, computed once at construction.
    pub fn is_strictly_passive(&self) -> bool {
        self.strictly_passive
    }
}

/// A validated compound shunt admittance `Y_t`, possibly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundShuntAdmittance {
    matrix: ComplexMatrix,
    zero: bool,
}

impl CompoundShuntAdmittance {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        match validate_shunt_admittance(&matrix, tol) {
            ShuntCheck::Zero => Ok(Self { matrix, zero: true }),
            ShuntCheck::Conformant => Ok(Self { matrix, zero: false }),
            ShuntCheck::Violation { reasons } => Err(violation("shunt admittance", &reasons)),
        }
    }

    pub fn zero(phase_count: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(phase_count, phase_count),
            zero: true,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn phase_count(&self) -> usize {
        self.matrix.rows()
    }
}

/// π-section: series impedance with a shunt at each end.
#[derive(Debug, Clone, PartialEq)]
pub struct PiSection {
    pub series_impedance: CompoundBranchImpedance,
    pub shunt_from: CompoundShuntAdmittance,
    pub shunt_to: CompoundShuntAdmittance,
}

/// T-section: two series impedances meeting at a virtual center node that
/// carries a shunt.
#[derive(Debug, Clone, PartialEq)]
pub struct TeeSection {
    pub primary_impedance: CompoundBranchImpedance,
    pub secondary_impedance: CompoundBranchImpedance,
    pub center_shunt: CompoundShuntAdmittance,
}

/// Per-unit-length line constants `R′, L′, G′, C′` (all `|P|×|P|`).
#[derive(Debug, Clone, PartialEq)]
pub struct LineParameters {
    pub r_per_len: DMatrix<f64>,
    pub l_per_len: DMatrix<f64>,
    pub g_per_len: DMatrix<f64>,
    pub c_per_len: DMatrix<f64>,
    pub length: f64,
    pub omega: f64,
}

/// Transformer T-section data: winding resistances, leakage inductances,
/// core loss conductance and magnetizing term.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformerParameters {
    pub rw1: DMatrix<f64>,
    pub ll1: DMatrix<f64>,
    pub rw2: DMatrix<f64>,
    pub ll2: DMatrix<f64>,
    pub gh: DMatrix<f64>,
    pub bm: DMatrix<f64>,
    pub omega: f64,
}

fn real_band(m: &DMatrix<f64>, tol: &Tolerances) -> f64 {
    tol.definiteness * (1.0 + m.amax())
}

fn is_real_spd(m: &DMatrix<f64>, tol: &Tolerances) -> bool {
    m.is_square()
        && m.nrows() > 0
        && (m - m.transpose()).amax() <= tol.symmetry * (1.0 + m.amax())
        && classify_symmetric(m, real_band(m, tol)) == Definiteness::PositiveDefinite
}

fn is_positive_diagonal(m: &DMatrix<f64>, tol: &Tolerances) -> bool {
    let band = real_band(m, tol);
    m.is_square()
        && m.nrows() > 0
        && (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| if i == j { m[(i, j)] > band } else { m[(i, j)] == 0.0 }))
}

/// `a + j·omega·b` for real matrices of equal shape.
fn complex_combination(a: &DMatrix<f64>, omega: f64, b: &DMatrix<f64>) -> Result<ComplexMatrix> {
    ComplexMatrix::from_parts(a, &(b * omega))
}

/// π-section of an electrically short line:
/// `Z = (R′ + jωL′)·length`, each shunt `½(G′ + jωC′)·length`.
pub fn build_pi_line(p: &LineParameters) -> Result<PiSection> {
    let tol = Tolerances::default();
    if !(p.length > 0.0 && p.length.is_finite()) {
        return Err(Error::InvalidLineParameters(format!("length {} must be > 0", p.length)));
    }
    if !(p.omega > 0.0 && p.omega.is_finite()) {
        return Err(Error::InvalidLineParameters(format!("omega {} must be > 0", p.omega)));
    }
    let n = p.r_per_len.nrows();
    for (name, m) in [
        ("R'", &p.r_per_len),
        ("L'", &p.l_per_len),
        ("G'", &p.g_per_len),
        ("C'", &p.c_per_len),
    ] {
        if m.shape() != (n, n) {
            return Err(Error::InvalidLineParameters(format!(
                "{name} is {:?}, expected {n}x{n}",
                m.shape()
            )));
        }
        if !is_real_spd(m, &tol) {
            return Err(Error::InvalidLineParameters(format!(
                "{name} is not symmetric positive definite"
            )));
        }
    }
    let series = complex_combination(&p.r_per_len, p.omega, &p.l_per_len)?.scale(Complex64::new(p.length, 0.0));
    let shunt = complex_combination(&p.g_per_len, p.omega, &p.c_per_len)?.scale(Complex64::new(0.5 * p.length, 0.0));
    let section = PiSection {
        series_impedance: CompoundBranchImpedance::new(series, &tol)?,
        shunt_from: CompoundShuntAdmittance::new(shunt.clone(), &tol)?,
        shunt_to: CompoundShuntAdmittance::new(shunt, &tol)?,
    };
    debug_assert!(section.series_impedance.is_strictly_passive());
    Ok(section)
}

/// T-section of a transformer:
/// `Z_primary = R_w1 + jωL_ℓ1`, `Z_secondary = R_w2 + jωL_ℓ2`,
/// `Y_center = G_h + jωB_m`.
pub fn build_tee_transformer(p: &TransformerParameters) -> Result<TeeSection> {
    let tol = Tolerances::default();
    let bad = |msg: String| Error::InvalidTransformerParameters(msg);
    if !(p.omega > 0.0 && p.omega.is_finite()) {
        return Err(bad(format!("omega {} must be > 0", p.omega)));
    }
    let n = p.rw1.nrows();
    let all = [
        ("rw1", &p.rw1),
        ("ll1", &p.ll1),
        ("rw2", &p.rw2),
        ("ll2", &p.ll2),
        ("gh", &p.gh),
        ("bm", &p.bm),
    ];
    for (name, m) in all {
        if m.shape() != (n, n) || n == 0 {
            return Err(bad(format!("{name} is {:?}, expected {n}x{n}", m.shape())));
        }
    }
    for (name, m) in [("rw1", &p.rw1), ("rw2", &p.rw2), ("gh", &p.gh)] {
        if !is_positive_diagonal(m, &tol) {
            return Err(bad(format!("{name} must be positive diagonal")));
        }
    }
    for (name, m) in [("ll1", &p.ll1), ("ll2", &p.ll2), ("bm", &p.bm)] {
        if !is_real_spd(m, &tol) {
            return Err(bad(format!("{name} must be symmetric positive definite")));
        }
    }
    let wrap = |e: Error| bad(e.to_string());
    Ok(TeeSection {
        primary_impedance: CompoundBranchImpedance::new(complex_combination(&p.rw1, p.omega, &p.ll1)?, &tol)
            .map_err(wrap)?,
        secondary_impedance: CompoundBranchImpedance::new(complex_combination(&p.rw2, p.omega, &p.ll2)?, &tol)
            .map_err(wrap)?,
        center_shunt: CompoundShuntAdmittance::new(complex_combination(&p.gh, p.omega, &p.bm)?, &tol).map_err(wrap)?,
    })
}

/// Compensator devices must be symmetric with `Re ≻ 0`.
fn check_compensator(m: &ComplexMatrix, phase_count: usize, tol: &Tolerances) -> Result<()> {
    if m.shape() != (phase_count, phase_count) {
        return Err(Error::InvalidCompensator(format!(
            "compensator is {:?}, expected {phase_count}x{phase_count}",
            m.shape()
        )));
    }
    if !is_symmetric(m, tol.symmetry)? {
        return Err(Error::InvalidCompensator("compensator is not symmetric".into()));
    }
    if real_part_definiteness(m, tol.definiteness)? != Definiteness::PositiveDefinite {
        return Err(Error::InvalidCompensator(
            "compensator real part is not positive definite".into(),
        ));
    }
    Ok(())
}

/// Adds a series compensator's impedance to the line's series impedance.
pub fn apply_series_compensation(line: &PiSection, z_comp: &ComplexMatrix) -> Result<PiSection> {
    let tol = Tolerances::default();
    check_compensator(z_comp, line.series_impedance.phase_count(), &tol)?;
    let series = line.series_impedance.matrix() + z_comp;
    Ok(PiSection {
        series_impedance: CompoundBranchImpedance::new(series, &tol)?,
        shunt_from: line.shunt_from.clone(),
        shunt_to: line.shunt_to.clone(),
    })
}

/// Adds shunt compensators at either end. A zero matrix means no
/// compensator on that side.
pub fn apply_shunt_compensation(line: &PiSection, y_m: &ComplexMatrix, y_n: &ComplexMatrix) -> Result<PiSection> {
    let tol = Tolerances::default();
    let p = line.series_impedance.phase_count();
    let add = |shunt: &CompoundShuntAdmittance, comp: &ComplexMatrix| -> Result<CompoundShuntAdmittance> {
        if comp.shape() == (p, p) && comp.max_abs() <= tol.zero {
            return Ok(shunt.clone());
        }
        check_compensator(comp, p, &tol)?;
        CompoundShuntAdmittance::new(shunt.matrix() + comp, &tol)
    };
    Ok(PiSection {
        series_impedance: line.series_impedance.clone(),
        shunt_from: add(&line.shunt_from, y_m)?,
        shunt_to: add(&line.shunt_to, y_n)?,
    })
}

/// Sums all shunt contributions at one node and validates the result.
pub fn aggregate_node_shunt(
    phase_count: usize,
    contributions: &[ComplexMatrix],
    tol: &Tolerances,
) -> Result<CompoundShuntAdmittance> {
    let mut sum = ComplexMatrix::zeros(phase_count, phase_count);
    for c in contributions {
        sum = sum.try_add(c)?;
    }
    CompoundShuntAdmittance::new(sum, tol)
}
