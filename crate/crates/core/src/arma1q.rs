//! Strict stationarity of Y_t − Ψ₁Y_{t−1} = Σ_{k=0}^q Θ_k Z_{t−k} through the
//! Jordan structure of Ψ₁.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jordan::{block_power, jordan_decompose, JordanForm};
use crate::linalg::{eigenvalues, max_abs, identity, mat_pow, numerical_rank, pinv_solve, vstack, CMat, CVec, ZERO};
use crate::noise::NoiseModel;
use crate::rational::LaurentSeries;
use crate::report::{BlockCase, BlockCondition, FailingCondition, StationarityReport, Verdict};
use crate::sim::LinearSolution;
use crate::tol::{CirclePosition, Tolerances};

#[derive(Clone, Debug)]
pub struct Arma1qModel {
    psi1: CMat,
    thetas: Vec<CMat>,
    noise: NoiseModel,
    jordan: Option<JordanForm>,
}

impl Arma1qModel {
    pub fn new(psi1: CMat, thetas: Vec<CMat>, noise: NoiseModel) -> Result<Self> {
        if !psi1.is_square() {
            return Err(Error::NotSquare {
                rows: psi1.nrows(),
                cols: psi1.ncols(),
            });
        }
        let m = psi1.nrows();
        if thetas.is_empty() {
            return Err(Error::InvalidModel(String::from("at least Θ₀ is required")));
        }
        for t in &thetas {
            if t.shape() != (m, noise.dim()) {
                return Err(Error::DimensionMismatch {
                    what: "moving-average coefficient shape (rows·cols)",
                    expected: m * noise.dim(),
                    found: t.nrows() * t.ncols(),
                });
            }
        }
        Ok(Self {
            psi1,
            thetas,
            noise,
            jordan: None,
        })
    }

    /// Supplies an exact Jordan decomposition of Ψ₁, bypassing the numerics.
    pub fn with_jordan(mut self, form: JordanForm) -> Result<Self> {
        if form.dim() != self.m() {
            return Err(Error::DimensionMismatch {
                what: "Jordan form dimension",
                expected: self.m(),
                found: form.dim(),
            });
        }
        self.jordan = Some(form);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.psi1.nrows()
    }

    pub fn d(&self) -> usize {
        self.noise.dim()
    }

    pub fn q(&self) -> usize {
        self.thetas.len() - 1
    }

    pub fn psi1(&self) -> &CMat {
        &self.psi1
    }

    pub fn thetas(&self) -> &[CMat] {
        &self.thetas
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    /// The supplied decomposition, or a numerical one.
    pub fn jordan_form(&self, tol: &Tolerances) -> Result<JordanForm> {
        match &self.jordan {
            Some(form) => Ok(form.clone()),
            None => jordan_decompose(&self.psi1, tol.jordan_cluster, tol.jordan_residual),
        }
    }

    /// Σ_k Ψ₁^{q−k} Θ_k.
    pub fn total_test_matrix(&self) -> CMat {
        let q = self.q();
        self.thetas
            .iter()
            .enumerate()
            .fold(CMat::zeros(self.m(), self.d()), |acc, (k, t)| acc + mat_pow(&self.psi1, q - k) * t)
    }
}

/// B_h = Σ_{k=0}^q Φ_h^{q−k} I_h S⁻¹ Θ_k.
pub fn block_test_matrix(form: &JordanForm, h: usize, thetas: &[CMat]) -> Result<CMat> {
    Ok(block_test_terms(form, h, thetas)?.0)
}

/// B_h and the largest magnitude among its summands, the scale against
/// which cancellation is judged.
fn block_test_terms(form: &JordanForm, h: usize, thetas: &[CMat]) -> Result<(CMat, f64)> {
    let selected = form.block_selector(h)? * form.s_inv();
    let b = form.blocks()[h];
    let q = thetas.len().saturating_sub(1);
    let mut acc = CMat::zeros(b.size, thetas.first().map_or(0, |t| t.ncols()));
    let mut scale = 0.0f64;
    for (k, theta) in thetas.iter().enumerate() {
        let term = block_power(b.lambda, b.size, (q - k) as i64)? * &selected * theta;
        scale = scale.max(max_abs(&term));
        acc += term;
    }
    Ok((acc, scale))
}

pub(crate) fn classify(lambda: num_complex::Complex64, tol: &Tolerances) -> (BlockCase, CirclePosition) {
    let modulus = lambda.norm();
    if modulus <= tol.zero_eigen {
        return (BlockCase::Zero, CirclePosition::Inside);
    }
    let position = tol.classify_modulus(modulus);
    let case = match position {
        CirclePosition::Inside => BlockCase::Inside,
        CirclePosition::Outside => BlockCase::Outside,
        CirclePosition::OnCircle | CirclePosition::Boundary => {
            if (lambda - num_complex::Complex64::new(1.0, 0.0)).norm() < tol.circle {
                BlockCase::UnitOne
            } else {
                BlockCase::UnitNontrivial
            }
        }
    };
    (case, position)
}

struct BlockOutcome {
    passes: bool,
    reason: String,
    alpha: Option<CVec>,
    f: Option<CVec>,
}

fn evaluate_case(case: BlockCase, lambda: num_complex::Complex64, size: usize, b: &CMat, scale: f64, noise: &NoiseModel, tol: &Tolerances) -> Result<BlockOutcome> {
    match case {
        BlockCase::Zero => Ok(BlockOutcome {
            passes: true,
            reason: String::from("eigenvalue zero imposes no condition"),
            alpha: None,
            f: None,
        }),
        BlockCase::Inside | BlockCase::Outside => {
            let ok = noise.image_has_finite_log_moment_at_scale(b, scale)?;
            Ok(BlockOutcome {
                passes: ok,
                reason: String::from(if ok {
                    "block image has finite log-moment"
                } else {
                    "block image has infinite log-moment"
                }),
                alpha: None,
                f: None,
            })
        }
        BlockCase::UnitNontrivial | BlockCase::UnitOne => {
            let Some(alpha) = noise.image_is_constant_at_scale(b, scale)? else {
                return Ok(BlockOutcome {
                    passes: false,
                    reason: String::from("block image is not almost surely constant"),
                    alpha: None,
                    f: None,
                });
            };
            let scale = alpha.iter().fold(1.0f64, |m, z| m.max(z.norm()));
            if case == BlockCase::UnitOne && alpha[0].norm() > tol.rank * scale {
                return Ok(BlockOutcome {
                    passes: false,
                    reason: format!("constant block image has nonzero leading entry {}", alpha[0]),
                    alpha: Some(alpha),
                    f: None,
                });
            }
            // (Id − Φ_h) f_h = α_h, minimum-norm
            let lhs = identity(size) - block_power(lambda, size, 1)?;
            let alpha_mat = CMat::from_column_slice(size, 1, alpha.as_slice());
            let f = pinv_solve(&lhs, &alpha_mat, tol.rank)?;
            let f = CVec::from_column_slice(f.as_slice());
            Ok(BlockOutcome {
                passes: true,
                reason: String::from("block image is almost surely constant"),
                alpha: Some(alpha),
                f: Some(f),
            })
        }
    }
}

/// Coefficient of Z_{t−j} in the block solution X^{(h)}, where `base[k]` is
/// I_h S⁻¹ Θ_k and `m` the full state dimension.
pub(crate) fn block_coefficient(case: BlockCase, lambda: num_complex::Complex64, size: usize, base: &[CMat], j: i64, m: usize) -> Result<CMat> {
    let q = base.len() as i64 - 1;
    let d = base.first().map_or(0, |b| b.ncols());
    // Σ_{k=lo}^{hi} Φ^{j−k} B_k
    let partial = |lo: i64, hi: i64| -> Result<CMat> {
        let mut acc = CMat::zeros(size, d);
        for k in lo..=hi {
            acc += block_power(lambda, size, j - k)? * &base[k as usize];
        }
        Ok(acc)
    };
    let active = match case {
        BlockCase::Inside => j >= 0,
        BlockCase::Zero => j >= 0 && j < m as i64 + q,
        BlockCase::Outside => j < q,
        BlockCase::UnitNontrivial | BlockCase::UnitOne => j >= 0 && j < q,
    };
    if !active {
        return Ok(CMat::zeros(size, d));
    }
    match case {
        BlockCase::Outside => Ok(-partial((j + 1).max(0), q)?),
        _ => partial(0, j.min(q)),
    }
}

/// Per-block analysis and the overall verdict.
pub fn check_existence_1q(model: &Arma1qModel, tol: &Tolerances) -> Result<StationarityReport> {
    let form = model.jordan_form(tol)?;
    let mut report = StationarityReport::empty(tol);
    report.diagnostics.jordan_residual = Some(form.residual());

    let mut exists = true;
    let mut off_circle = true;
    let mut unique = true;
    for (h, block) in form.blocks().iter().enumerate() {
        let (b, scale) = block_test_terms(&form, h, &model.thetas)?;
        let (case, position) = classify(block.lambda, tol);
        let lambda = if case == BlockCase::Zero { ZERO } else { block.lambda };
        let outcome = evaluate_case(case, lambda, block.size, &b, scale, &model.noise, tol)?;
        let off_circle_passes = if position == CirclePosition::Boundary {
            report.boundary_uncertain = true;
            report.diagnostics.boundary_points.push(block.lambda);
            let alternative = if block.lambda.norm() < 1.0 { BlockCase::Inside } else { BlockCase::Outside };
            Some(evaluate_case(alternative, lambda, block.size, &b, scale, &model.noise, tol)?.passes)
        } else {
            None
        };
        if case.is_unit() {
            unique = false;
        }
        if !outcome.passes && exists {
            exists = false;
            report.failing_condition = match case {
                BlockCase::Inside | BlockCase::Outside => FailingCondition::ConditionI,
                BlockCase::UnitNontrivial => FailingCondition::ConditionII,
                _ => FailingCondition::ConditionIII,
            };
        }
        off_circle &= off_circle_passes.unwrap_or(outcome.passes);
        report.blocks.push(BlockCondition {
            h,
            lambda: block.lambda,
            size: block.size,
            start: block.start,
            case,
            position,
            test_matrix: b,
            passes: outcome.passes,
            reason: outcome.reason,
            alpha: outcome.alpha,
            f: outcome.f,
            off_circle_passes,
        });
    }
    report.exists_strict = exists;
    report.unique = unique;
    report.exists_strict_off_circle = if report.boundary_uncertain {
        Verdict::from_bool(off_circle)
    } else {
        Verdict::NotApplicable
    };
    Ok(report)
}

/// No eigenvalue of Ψ₁ within the uncertainty band of the unit circle.
pub fn is_unique_1q(model: &Arma1qModel, tol: &Tolerances) -> Result<bool> {
    Ok(model
        .jordan_form(tol)?
        .blocks()
        .iter()
        .all(|b| !classify(b.lambda, tol).0.is_unit()))
}

/// Constructed solution: per-block series and their assembly Y = S·X.
#[derive(Clone, Debug)]
pub struct SolutionSeries1q {
    pub form: JordanForm,
    /// Coefficients of X^{(h)} on Z_{t−j}.
    pub blocks: Vec<LaurentSeries>,
    pub block_constants: Vec<CVec>,
    pub assembled: LinearSolution,
}

/// Coefficients of the explicit solution, truncated to lags |j| ≤ `window`
/// for the infinite geometric cases.
pub fn solution_coeffs_1q(model: &Arma1qModel, window: usize, tol: &Tolerances) -> Result<SolutionSeries1q> {
    let report = check_existence_1q(model, tol)?;
    if !report.exists_strict {
        return Err(Error::NoSolution);
    }
    let form = model.jordan_form(tol)?;
    let (m, d, q) = (model.m(), model.d(), model.q());
    let window = window as i64;

    let mut blocks = Vec::with_capacity(form.blocks().len());
    let mut constants = Vec::with_capacity(form.blocks().len());
    for (h, cond) in report.blocks.iter().enumerate() {
        let size = cond.size;
        let lambda = if cond.case == BlockCase::Zero { ZERO } else { cond.lambda };
        let selected = form.block_selector(h)? * form.s_inv();
        let base: Vec<CMat> = model.thetas.iter().map(|t| &selected * t).collect();
        let (j_min, j_max) = match cond.case {
            BlockCase::Inside => (0, window),
            BlockCase::Zero => (0, (m + q) as i64 - 1),
            BlockCase::Outside => (-window, q as i64 - 1),
            BlockCase::UnitNontrivial | BlockCase::UnitOne => (0, q as i64 - 1),
        };
        let coeffs = (j_min..=j_max)
            .map(|j| block_coefficient(cond.case, lambda, size, &base, j, m))
            .collect::<Result<Vec<_>>>()?;
        let rho = lambda.norm();
        let (rc, ra) = match cond.case {
            BlockCase::Inside => (rho, 0.0),
            BlockCase::Outside => (0.0, 1.0 / rho),
            _ => (0.0, 0.0),
        };
        let coeffs = if coeffs.is_empty() { vec![CMat::zeros(size, d)] } else { coeffs };
        blocks.push(LaurentSeries::from_coeffs(j_min, coeffs, rc.max(0.1), ra.max(0.1)));
        constants.push(cond.f.clone().unwrap_or_else(|| CVec::zeros(size)));
    }

    let j_lo = blocks.iter().map(|b| b.j_min()).min().unwrap_or(0);
    let j_hi = blocks.iter().map(|b| b.j_max()).max().unwrap_or(0);
    let mut assembled = Vec::with_capacity((j_hi - j_lo + 1) as usize);
    for j in j_lo..=j_hi {
        let stacked: Vec<CMat> = blocks
            .iter()
            .zip(report.blocks.iter())
            .map(|(series, cond)| series.get(j).cloned().unwrap_or_else(|| CMat::zeros(cond.size, d)))
            .collect();
        assembled.push(form.s() * vstack(&stacked));
    }
    let constant_stack = vstack(&constants.iter().map(|c| CMat::from_column_slice(c.len(), 1, c.as_slice())).collect::<Vec<_>>());
    let constant = form.s() * CVec::from_column_slice(constant_stack.as_slice());
    let rho_c = blocks.iter().map(|b| b.decay.rho_causal).fold(0.0, f64::max);
    let rho_a = blocks.iter().map(|b| b.decay.rho_anticausal).fold(0.0, f64::max);
    Ok(SolutionSeries1q {
        form,
        blocks,
        block_constants: constants,
        assembled: LinearSolution {
            constant,
            coeffs: LaurentSeries::from_coeffs(j_lo, assembled, rho_c, rho_a),
        },
    })
}

fn eigen_cases(model: &Arma1qModel, tol: &Tolerances) -> Result<Vec<BlockCase>> {
    Ok(eigenvalues(&model.psi1)?
        .into_iter()
        .map(|l| classify(l, tol))
        .map(|(case, position)| if position == CirclePosition::Boundary { BlockCase::UnitNontrivial } else { case })
        .collect())
}

/// Simplified verdict when every eigenvalue has modulus in (0,1) ∪ (1,∞).
pub fn cor1_check(model: &Arma1qModel, tol: &Tolerances) -> Result<Verdict> {
    let applicable = eigen_cases(model, tol)?
        .iter()
        .all(|c| matches!(c, BlockCase::Inside | BlockCase::Outside));
    if !applicable {
        return Ok(Verdict::NotApplicable);
    }
    Ok(Verdict::from_bool(model.noise.image_has_finite_log_moment(&model.total_test_matrix())?))
}

/// Verdict through the log-moment of Z₀ itself when Σ_k Ψ₁^{q−k}Θ_k has
/// full column rank d ≤ m and no eigenvalue is zero or on the circle.
pub fn cor2_check(model: &Arma1qModel, tol: &Tolerances) -> Result<Verdict> {
    let d = model.d();
    if d > model.m() {
        return Ok(Verdict::NotApplicable);
    }
    let off = eigen_cases(model, tol)?
        .iter()
        .all(|c| matches!(c, BlockCase::Inside | BlockCase::Outside));
    if !off || numerical_rank(&model.total_test_matrix(), tol.rank)? != d {
        return Ok(Verdict::NotApplicable);
    }
    Ok(Verdict::from_bool(model.noise.image_has_finite_log_moment(&identity(d))?))
}
