//! Analyzer verdicts shared by the ARMA(1,q) and ARMA(p,q) paths.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::CVec;
use crate::rational::{LaurentSeries, Obstruction};
use crate::tol::{CirclePosition, Tolerances};

/// A yes/no answer that may be unavailable for a stated reason.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    /// The criterion's hypotheses do not hold for this model.
    NotApplicable,
    /// The numerics cannot decide (for instance a pole too close to the circle).
    Undetermined,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::NotApplicable => "not_applicable",
            Verdict::Undetermined => "undetermined",
        }
    }
}

/// First condition of the applicable criterion that fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailingCondition {
    None,
    /// A unit-circle singularity of P⁻¹Q̃ is not removable.
    Removability,
    /// A Laurent coefficient image lacks a finite log-moment.
    LogMoment,
    /// P(1) g = Q(1) U* (v, u) has no solution.
    MeanEquation,
    /// Block log-moment condition of the ARMA(1,q) criterion.
    ConditionI,
    /// Unit-modulus block image is not almost surely constant.
    ConditionII,
    /// Eigenvalue-one block image is not constant with leading entry zero.
    ConditionIII,
}

impl FailingCondition {
    pub fn name(self) -> &'static str {
        match self {
            FailingCondition::None => "none",
            FailingCondition::Removability => "removability",
            FailingCondition::LogMoment => "log_moment",
            FailingCondition::MeanEquation => "mean_equation",
            FailingCondition::ConditionI => "condition_i",
            FailingCondition::ConditionII => "condition_ii",
            FailingCondition::ConditionIII => "condition_iii",
        }
    }
}

/// How a Jordan block of Ψ₁ is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockCase {
    Inside,
    Outside,
    Zero,
    UnitNontrivial,
    UnitOne,
}

impl BlockCase {
    pub fn name(self) -> &'static str {
        match self {
            BlockCase::Inside => "inside",
            BlockCase::Outside => "outside",
            BlockCase::Zero => "zero",
            BlockCase::UnitNontrivial => "unit_nontrivial",
            BlockCase::UnitOne => "unit_one",
        }
    }

    pub fn is_unit(self) -> bool {
        matches!(self, BlockCase::UnitNontrivial | BlockCase::UnitOne)
    }
}

/// Per-block outcome on the ARMA(1,q) path.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockCondition {
    pub h: usize,
    pub lambda: Complex64,
    pub size: usize,
    pub start: usize,
    pub case: BlockCase,
    pub position: CirclePosition,
    /// Σ_k Φ_h^{q−k} I_h S⁻¹ Θ_k.
    pub test_matrix: crate::linalg::CMat,
    pub passes: bool,
    pub reason: String,
    pub alpha: Option<CVec>,
    pub f: Option<CVec>,
    /// Outcome under the off-circle reading of a boundary eigenvalue.
    pub off_circle_passes: Option<bool>,
}

/// Numerical side information of an analysis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub jordan_residual: Option<f64>,
    pub convolution_residual: Option<f64>,
    pub mean_equation_residual: Option<f64>,
    pub obstruction: Option<Obstruction>,
    /// Laurent index whose image has infinite log-moment.
    pub log_moment_index: Option<i64>,
    /// Roots of det P (or eigenvalues) inside the uncertainty band.
    pub boundary_points: Vec<Complex64>,
    pub laurent_nodes: Option<usize>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StationarityReport {
    /// Verdict under the on-circle reading of any boundary point.
    pub exists_strict: bool,
    pub boundary_uncertain: bool,
    /// Verdict when boundary points are read as lying off the circle.
    pub exists_strict_off_circle: Verdict,
    pub unique: bool,
    pub exists_weak: Verdict,
    pub exists_causal: Verdict,
    pub failing_condition: FailingCondition,
    pub g: Option<CVec>,
    pub v: Option<CVec>,
    pub laurent: Option<LaurentSeries>,
    pub blocks: Vec<BlockCondition>,
    pub tolerances: Tolerances,
    pub diagnostics: Diagnostics,
}

impl StationarityReport {
    pub(crate) fn empty(tol: &Tolerances) -> Self {
        Self {
            exists_strict: false,
            boundary_uncertain: false,
            exists_strict_off_circle: Verdict::NotApplicable,
            unique: false,
            exists_weak: Verdict::Undetermined,
            exists_causal: Verdict::Undetermined,
            failing_condition: FailingCondition::None,
            g: None,
            v: None,
            laurent: None,
            blocks: Vec::new(),
            tolerances: *tol,
            diagnostics: Diagnostics::default(),
        }
    }
}
