//! Strict and weak stationarity of Y_t − Σ_k Ψ_k Y_{t−k} = Σ_k Θ_k Z_{t−k}
//! through the transfer function M(z) = P⁻¹(z)·Q̃(z).
//!
//! The primary verdict needs only polynomial and Laurent numerics. The
//! companion embedding and its Jordan path are kept for cross-checks.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arma1q::{block_coefficient, classify, Arma1qModel};
use crate::error::{Error, Result};
use crate::jordan::jordan_decompose;
use crate::linalg::{hermitian_eigen, leading_projector, max_abs, pinv_solve, range_basis, vstack, CMat, CVec, ONE, ZERO};
use crate::mpoly::{are_left_coprime, det_poly, MatrixPoly};
use crate::noise::{NoiseModel, UnitarySplit};
use crate::rational::{causal_coeffs, convolution_residual, is_removable_at, laurent_from_removable, singularities_of, vanishing_order, LaurentSeries, Removability, Singularity};
use crate::report::{BlockCase, FailingCondition, StationarityReport, Verdict};
use crate::sim::LinearSolution;
use crate::tol::{CirclePosition, Tolerances};

#[derive(Clone, Debug)]
pub struct ArmapqModel {
    psis: Vec<CMat>,
    thetas: Vec<CMat>,
    noise: NoiseModel,
}

impl ArmapqModel {
    pub fn new(psis: Vec<CMat>, thetas: Vec<CMat>, noise: NoiseModel) -> Result<Self> {
        let Some(first) = psis.first() else {
            return Err(Error::InvalidModel(String::from("at least Ψ₁ is required")));
        };
        let m = first.nrows();
        for psi in &psis {
            if !psi.is_square() {
                return Err(Error::NotSquare {
                    rows: psi.nrows(),
                    cols: psi.ncols(),
                });
            }
            if psi.nrows() != m {
                return Err(Error::DimensionMismatch {
                    what: "autoregressive coefficient size",
                    expected: m,
                    found: psi.nrows(),
                });
            }
        }
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
        Ok(Self { psis, thetas, noise })
    }

    pub fn m(&self) -> usize {
        self.psis[0].nrows()
    }

    pub fn d(&self) -> usize {
        self.noise.dim()
    }

    pub fn p(&self) -> usize {
        self.psis.len()
    }

    pub fn q(&self) -> usize {
        self.thetas.len() - 1
    }

    pub fn psis(&self) -> &[CMat] {
        &self.psis
    }

    pub fn thetas(&self) -> &[CMat] {
        &self.thetas
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    /// P(z) = Id − Σ_k Ψ_k z^k.
    pub fn p_poly(&self) -> MatrixPoly {
        MatrixPoly::autoregressive(&self.psis).expect("validated at construction")
    }

    /// Q(z) = Σ_k Θ_k z^k.
    pub fn q_poly(&self) -> MatrixPoly {
        MatrixPoly::moving_average(&self.thetas).expect("validated at construction")
    }

    /// Same model with another noise law of equal dimension.
    pub fn with_noise(&self, noise: NoiseModel) -> Result<Self> {
        Self::new(self.psis.clone(), self.thetas.clone(), noise)
    }
}

/// Companion form of an ARMA(p,q) model as an ARMA(1,q) model of dimension mp.
#[derive(Clone, Debug, PartialEq)]
pub struct CompanionEmbedding {
    pub phi: CMat,
    pub thetas: Vec<CMat>,
}

impl CompanionEmbedding {
    pub fn to_arma1q(&self, noise: NoiseModel) -> Result<Arma1qModel> {
        Arma1qModel::new(self.phi.clone(), self.thetas.clone(), noise)
    }
}

pub fn embed_companion(model: &ArmapqModel) -> CompanionEmbedding {
    let (m, p, d) = (model.m(), model.p(), model.d());
    let mut phi = CMat::zeros(m * p, m * p);
    for (k, psi) in model.psis.iter().enumerate() {
        phi.view_mut((0, k * m), (m, m)).copy_from(psi);
    }
    for k in 1..p {
        phi.view_mut((k * m, (k - 1) * m), (m, m)).fill_with_identity();
    }
    let thetas = model
        .thetas
        .iter()
        .map(|t| {
            let mut big = CMat::zeros(m * p, d);
            big.view_mut((0, 0), (m, d)).copy_from(t);
            big
        })
        .collect();
    CompanionEmbedding { phi, thetas }
}

/// Q̃(z) = Q(z)·U*·diag(Id_s, 0).
pub fn build_qtilde(model: &ArmapqModel, split: &UnitarySplit) -> MatrixPoly {
    let right = split.u_mat.adjoint() * leading_projector(model.d(), split.s);
    model.q_poly().mul_const(&right).expect("shapes agree")
}

/// Whether `b` lies in the column range of `a`, relative to `rel_tol`.
fn in_range(a: &CMat, b: &CMat, rel_tol: f64) -> Result<bool> {
    let scale = max_abs(a).max(max_abs(b));
    if scale == 0.0 {
        return Ok(true);
    }
    let basis = range_basis(a, rel_tol)?;
    let rest = b - &basis * (basis.adjoint() * b);
    Ok(max_abs(&rest) <= 1e2 * rel_tol * scale)
}

/// Condition (iii) solved by minimum-norm least squares.
struct MeanEquation {
    solvable: bool,
    /// For every v a g exists (the stronger form implied under removability).
    solvable_for_all_v: bool,
    g: CVec,
    v: CVec,
    residual: f64,
}

fn solve_mean_equation(model: &ArmapqModel, split: &UnitarySplit, tol: &Tolerances) -> Result<MeanEquation> {
    let (m, d, s) = (model.m(), model.d(), split.s);
    let p1 = model.p_poly().eval(ONE);
    let q1u = model.q_poly().eval(ONE) * split.u_mat.adjoint();
    let mut tail = CVec::zeros(d);
    tail.rows_mut(s, d - s).copy_from(&split.u);
    let b = CMat::from_column_slice(m, 1, (&q1u * tail).as_slice());
    let q1s = q1u.columns(0, s).into_owned();

    let mut a = CMat::zeros(m, m + s);
    a.view_mut((0, 0), (m, m)).copy_from(&p1);
    a.view_mut((0, m), (m, s)).copy_from(&(-&q1s));
    let x = pinv_solve(&a, &b, tol.rank)?;
    let residual = max_abs(&(&a * &x - &b));
    let solvable = in_range(&a, &b, tol.rank)?;
    let mut all = CMat::zeros(m, s + 1);
    all.view_mut((0, 0), (m, s)).copy_from(&q1s);
    all.set_column(s, &b.column(0));
    let solvable_for_all_v = in_range(&p1, &all, tol.rank)?;
    Ok(MeanEquation {
        solvable,
        solvable_for_all_v,
        g: CVec::from_iterator(m, x.rows(0, m).iter().copied()),
        v: CVec::from_iterator(s, x.rows(m, s).iter().copied()),
        residual,
    })
}

/// Indices j whose image M_j·U·Z₀ must have finite log-moment.
pub fn log_moment_indices(model: &ArmapqModel) -> Vec<i64> {
    let (m, p, q) = (model.m() as i64, model.p() as i64, model.q() as i64);
    let top = m * p + q;
    (-p..=-1).chain(top - p + 1..=top).collect()
}

/// Strict-stationarity analysis of the ARMA(p,q) equation.
pub fn check_existence_pq(model: &ArmapqModel, tol: &Tolerances) -> Result<StationarityReport> {
    let split = model.noise.unitary_split()?;
    let p_poly = model.p_poly();
    let qt = build_qtilde(model, &split);
    let det = det_poly(&p_poly)?.trim_relative(tol.poly_zero);
    let singularities = singularities_of(&det, tol)?;
    let on_circle: Vec<Singularity> = singularities
        .iter()
        .copied()
        .filter(|s| s.position == CirclePosition::OnCircle)
        .collect();

    let mut report = StationarityReport::empty(tol);
    report.unique = singularities.is_empty();
    report.boundary_uncertain = singularities.len() != on_circle.len();
    report.diagnostics.boundary_points = singularities
        .iter()
        .filter(|s| s.position == CirclePosition::Boundary)
        .map(|s| s.z0)
        .collect();

    let mean = solve_mean_equation(model, &split, tol)?;
    report.diagnostics.mean_equation_residual = Some(mean.residual);

    // (i)
    let rem = is_removable_at(&p_poly, &qt, &singularities, tol)?;
    report.diagnostics.obstruction = rem.obstruction;
    let mut failing = if rem.removable { FailingCondition::None } else { FailingCondition::Removability };

    // (ii)
    if rem.removable {
        let idx = log_moment_indices(model);
        let (lo, hi) = (idx[0], *idx.last().unwrap_or(&0));
        let series = laurent_from_removable(&rem, lo, hi, tol)?;
        report.diagnostics.laurent_nodes = Some(series.nodes);
        report.diagnostics.convolution_residual = Some(convolution_residual(&p_poly, &qt, &series));
        let peak = series_peak(&series);
        for &j in &idx {
            let mj = series.get(j).expect("index inside window");
            if !model.noise.image_has_finite_log_moment_at_scale(&(mj * &split.u_mat), peak)? {
                report.diagnostics.log_moment_index = Some(j);
                failing = FailingCondition::LogMoment;
                break;
            }
        }
        report.laurent = Some(series);
    }

    // (iii)
    if failing == FailingCondition::None && !mean.solvable {
        failing = FailingCondition::MeanEquation;
    }
    if rem.removable && mean.solvable != mean.solvable_for_all_v {
        report.diagnostics.warnings.push(format!(
            "mean equation: solvable for the reported v is {}, solvable for every v is {}",
            mean.solvable, mean.solvable_for_all_v
        ));
    }

    report.failing_condition = failing;
    report.exists_strict = failing == FailingCondition::None;
    if report.exists_strict {
        report.g = Some(mean.g.clone());
        report.v = Some(mean.v.clone());
    }

    if report.boundary_uncertain {
        let rem_off = is_removable_at(&p_poly, &qt, &on_circle, tol)?;
        report.exists_strict_off_circle = if !rem_off.removable || !mean.solvable {
            Verdict::No
        } else if model.noise.all_finite_log_moment() {
            Verdict::Yes
        } else {
            Verdict::Undetermined
        };
    }

    report.exists_weak = match (model.noise.mean(), model.noise.covariance()) {
        (Some(mu), Some(cov)) => Verdict::from_bool(check_weak(model, &mu, &cov, tol)?.exists),
        _ => Verdict::NotApplicable,
    };
    report.exists_causal = match check_causal(model, tol) {
        Ok(v) => v,
        Err(e) => {
            report.diagnostics.warnings.push(format!("causal check failed: {e}"));
            Verdict::Undetermined
        }
    };
    Ok(report)
}

/// Constructed strict solution Y_t = g + Σ_j M_j (U Z_{t−j} − (v, u)).
#[derive(Clone, Debug)]
pub struct PqSolution {
    pub g: CVec,
    pub v: CVec,
    pub split: UnitarySplit,
    /// Laurent coefficients M_j of P⁻¹Q̃.
    pub transfer: LaurentSeries,
    /// The same solution written as constant + Σ_j (M_j U) Z_{t−j}.
    pub solution: LinearSolution,
}

/// The solution over the Laurent window [j_min, j_max]. The constant uses
/// the exact M(1) rather than the truncated sum.
pub fn solution_coeffs_pq(model: &ArmapqModel, j_min: i64, j_max: i64, tol: &Tolerances) -> Result<PqSolution> {
    let report = check_existence_pq(model, tol)?;
    if !report.exists_strict {
        return Err(Error::NoSolution);
    }
    let split = model.noise.unitary_split()?;
    let (g, v) = (report.g.expect("present on existence"), report.v.expect("present on existence"));
    let rem = removability(model, &build_qtilde(model, &split), tol)?;
    let transfer = laurent_from_removable(&rem, j_min, j_max, tol)?;
    let mut shift = CVec::zeros(model.d());
    shift.rows_mut(0, split.s).copy_from(&v);
    shift.rows_mut(split.s, model.d() - split.s).copy_from(&split.u);
    let constant = &g - transfer_at_one(&rem) * shift;
    let solution = LinearSolution {
        constant,
        coeffs: map_series(&transfer, |mj| mj * &split.u_mat),
    };
    Ok(PqSolution {
        g,
        v,
        split,
        transfer,
        solution,
    })
}

fn removability(model: &ArmapqModel, qt: &MatrixPoly, tol: &Tolerances) -> Result<Removability> {
    let p_poly = model.p_poly();
    let det = det_poly(&p_poly)?.trim_relative(tol.poly_zero);
    let sing = singularities_of(&det, tol)?;
    is_removable_at(&p_poly, qt, &sing, tol)
}

/// Largest entry over a window; coefficients are resolved only to a
/// fraction of it.
fn series_peak(series: &LaurentSeries) -> f64 {
    series.coeffs().iter().map(max_abs).fold(0.0, f64::max)
}

fn transfer_at_one(rem: &Removability) -> CMat {
    rem.numerator.eval(ONE) / rem.denominator.eval(ONE)
}

fn map_series(series: &LaurentSeries, f: impl Fn(&CMat) -> CMat) -> LaurentSeries {
    let coeffs = series.coeffs().iter().map(f).collect();
    let mut out = LaurentSeries::from_coeffs(series.j_min(), coeffs, series.decay.rho_causal, series.decay.rho_anticausal);
    out.nodes = series.nodes;
    out
}

/// Outcome of the weak-stationarity criterion.
#[derive(Clone, Debug)]
pub struct WeakReport {
    pub exists: bool,
    pub boundary_uncertain: bool,
    pub failing_condition: FailingCondition,
    /// Rank of the covariance.
    pub s: usize,
    /// Rows are eigenvectors of the covariance, positive eigenvalues first.
    pub u_mat: CMat,
    pub g: Option<CVec>,
}

fn weak_unitary(cov: &CMat, tol: &Tolerances) -> Result<(CMat, usize)> {
    let (values, vectors) = hermitian_eigen(cov);
    let top = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cut = tol.rank * top;
    if let Some(&min) = values.last() {
        if min < -cut.max(f64::MIN_POSITIVE) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
    }
    let s = if top == 0.0 { 0 } else { values.iter().filter(|&&v| v > cut).count() };
    Ok((vectors.adjoint(), s))
}

/// Weak stationarity for noise with the given mean and covariance.
pub fn check_weak(model: &ArmapqModel, mean: &CVec, cov: &CMat, tol: &Tolerances) -> Result<WeakReport> {
    let d = model.d();
    if mean.len() != d || cov.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            what: "noise moment dimension",
            expected: d,
            found: mean.len(),
        });
    }
    let (u_mat, s) = weak_unitary(cov, tol)?;
    let p_poly = model.p_poly();
    let qt = model
        .q_poly()
        .mul_const(&(u_mat.adjoint() * leading_projector(d, s)))
        .expect("shapes agree");
    let det = det_poly(&p_poly)?.trim_relative(tol.poly_zero);
    let sing = singularities_of(&det, tol)?;
    let boundary_uncertain = sing.iter().any(|z| z.position == CirclePosition::Boundary);
    let rem = is_removable_at(&p_poly, &qt, &sing, tol)?;

    let p1 = p_poly.eval(ONE);
    let rhs = model.q_poly().eval(ONE) * mean;
    let rhs = CMat::from_column_slice(rhs.len(), 1, rhs.as_slice());
    let solvable = in_range(&p1, &rhs, tol.rank)?;
    let failing_condition = if !rem.removable {
        FailingCondition::Removability
    } else if !solvable {
        FailingCondition::MeanEquation
    } else {
        FailingCondition::None
    };
    let exists = failing_condition == FailingCondition::None;
    let g = if exists {
        let x = pinv_solve(&p1, &rhs, tol.rank)?;
        Some(CVec::from_column_slice(x.as_slice()))
    } else {
        None
    };
    Ok(WeakReport {
        exists,
        boundary_uncertain,
        failing_condition,
        s,
        u_mat,
        g,
    })
}

/// Weak solution Y_t = g + Σ_j M_j U (Z_{t−j} − μ) over [j_min, j_max].
pub fn weak_solution_coeffs(model: &ArmapqModel, mean: &CVec, cov: &CMat, j_min: i64, j_max: i64, tol: &Tolerances) -> Result<LinearSolution> {
    let weak = check_weak(model, mean, cov, tol)?;
    let Some(g) = weak.g else {
        return Err(Error::NoSolution);
    };
    let qt = model
        .q_poly()
        .mul_const(&(weak.u_mat.adjoint() * leading_projector(model.d(), weak.s)))
        .expect("shapes agree");
    let rem = removability(model, &qt, tol)?;
    let transfer = laurent_from_removable(&rem, j_min, j_max, tol)?;
    let constant = &g - transfer_at_one(&rem) * &weak.u_mat * mean;
    Ok(LinearSolution {
        constant,
        coeffs: map_series(&transfer, |mj| mj * &weak.u_mat),
    })
}

/// Existence of a causal (equivalently non-anticipative) strict solution.
/// Not applicable unless P and Q̃ are left-coprime.
pub fn check_causal(model: &ArmapqModel, tol: &Tolerances) -> Result<Verdict> {
    let split = model.noise.unitary_split()?;
    let p_poly = model.p_poly();
    let qt = build_qtilde(model, &split);
    if !are_left_coprime(&p_poly, &qt, tol.rank)? {
        return Ok(Verdict::NotApplicable);
    }
    let series = match causal_coeffs(&p_poly, &qt, (model.m() * model.p() + model.q()) as i64, tol) {
        Ok(series) => series,
        Err(Error::RootInsideDisk { root }) => {
            return Ok(if tol.classify_modulus(root.norm()) == CirclePosition::Boundary {
                Verdict::Undetermined
            } else {
                Verdict::No
            });
        }
        Err(e) => return Err(e),
    };
    let peak = series_peak(&series);
    for j in log_moment_indices(model).into_iter().filter(|&j| j >= 0) {
        let mj = series.get(j).expect("index inside window");
        if !model.noise.image_has_finite_log_moment_at_scale(&(mj * &split.u_mat), peak)? {
            return Ok(Verdict::No);
        }
    }
    Ok(Verdict::Yes)
}

/// Necessary condition: |det P|⁻²·det(Q̃Q̃*) has only removable singularities
/// on the unit circle, and so does det Q̃ / det P when d = m.
pub fn cor3_necessary(model: &ArmapqModel, tol: &Tolerances) -> Result<bool> {
    let split = model.noise.unitary_split()?;
    let qt = build_qtilde(model, &split);
    let det = det_poly(&model.p_poly())?.trim_relative(tol.poly_zero);
    let sing = singularities_of(&det, tol)?;
    // on the circle Q̃Q̃^♯ = z^n·Q̃Q̃*, and z^n has no zero there
    let gram = det_poly(&qt.mul(&qt.para_conjugate())?)?;
    let square = if model.d() == model.m() { Some(det_poly(&qt)?) } else { None };
    for s in &sing {
        let mu = s.multiplicity;
        if vanishing_order(&gram, s.z0, 2 * mu, tol.poly_zero) < 2 * mu {
            return Ok(false);
        }
        if let Some(dq) = &square {
            if vanishing_order(dq, s.z0, mu, tol.poly_zero) < mu {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// N̲_j, j_min ≤ j ≤ j_max, from the Jordan form of the companion matrix.
pub fn jordan_path_coeffs(model: &ArmapqModel, j_min: i64, j_max: i64, tol: &Tolerances) -> Result<LaurentSeries> {
    if j_max < j_min {
        return Err(Error::InvalidModel(format!("empty window [{j_min}, {j_max}]")));
    }
    let emb = embed_companion(model);
    let n = emb.phi.nrows();
    let form = jordan_decompose(&emb.phi, tol.jordan_cluster, tol.jordan_residual)?;
    let mut rho_c = 0.1f64;
    let mut rho_a = 0.1f64;
    let mut per_block = Vec::with_capacity(form.blocks().len());
    for (h, block) in form.blocks().iter().enumerate() {
        let (case, _) = classify(block.lambda, tol);
        let lambda = if case == BlockCase::Zero { ZERO } else { block.lambda };
        match case {
            BlockCase::Inside => rho_c = rho_c.max(lambda.norm()),
            BlockCase::Outside => rho_a = rho_a.max(1.0 / lambda.norm()),
            _ => {}
        }
        let selected = form.block_selector(h)? * form.s_inv();
        let base: Vec<CMat> = emb.thetas.iter().map(|t| &selected * t).collect();
        per_block.push((case, lambda, block.size, base));
    }
    let coeffs = (j_min..=j_max)
        .map(|j| {
            let stacked = per_block
                .iter()
                .map(|(case, lambda, size, base)| block_coefficient(*case, *lambda, *size, base, j, n))
                .collect::<Result<Vec<_>>>()?;
            Ok(form.s() * vstack(&stacked))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentSeries::from_coeffs(j_min, coeffs, rho_c, rho_a))
}

/// max_j ‖(M_j; …; M_{j−p+1}) − N̲_j·U*·diag(Id_s, 0)‖ over the window.
pub fn cross_check_lemma3(model: &ArmapqModel, j_min: i64, j_max: i64, tol: &Tolerances) -> Result<f64> {
    let split = model.noise.unitary_split()?;
    let qt = build_qtilde(model, &split);
    let rem = removability(model, &qt, tol)?;
    let p = model.p() as i64;
    let transfer = laurent_from_removable(&rem, j_min - p + 1, j_max, tol)?;
    let jordan = jordan_path_coeffs(model, j_min, j_max, tol)?;
    let right = split.u_mat.adjoint() * leading_projector(model.d(), split.s);
    let mut worst = 0.0f64;
    for j in j_min..=j_max {
        let stacked: Vec<CMat> = (0..p).map(|i| transfer.get(j - i).expect("inside window").clone()).collect();
        let lhs = vstack(&stacked);
        let rhs = jordan.get(j).expect("inside window") * &right;
        worst = worst.max(max_abs(&(lhs - rhs)));
    }
    Ok(worst)
}

/// Whether the strict and weak criteria agree; needs finite-variance noise.
pub fn check_strict_weak_equivalence(model: &ArmapqModel, tol: &Tolerances) -> Result<bool> {
    let (Some(mean), Some(cov)) = (model.noise.mean(), model.noise.covariance()) else {
        return Err(Error::InvalidNoise(String::from("every component needs finite variance")));
    };
    let strict = check_existence_pq(model, tol)?.exists_strict;
    let weak = check_weak(model, &mean, &cov, tol)?.exists;
    Ok(strict == weak)
}

fn block_diagonal(a: &CMat, copies: usize) -> CMat {
    let (r, c) = a.shape();
    let mut out = CMat::zeros(r * copies, c * copies);
    for i in 0..copies {
        out.view_mut((i * r, i * c), (r, c)).copy_from(a);
    }
    out
}

/// Model for matrix-valued Y_t (m×d′) and Z_t (d×d′) with stacked columns;
/// `noise` is the law of the stacked dd′-vector.
pub fn stack_matrix_noise(psis: &[CMat], thetas: &[CMat], d_prime: usize, noise: NoiseModel) -> Result<ArmapqModel> {
    if d_prime == 0 {
        return Err(Error::InvalidModel(String::from("column count d′ must be positive")));
    }
    ArmapqModel::new(
        psis.iter().map(|p| block_diagonal(p, d_prime)).collect(),
        thetas.iter().map(|t| block_diagonal(t, d_prime)).collect(),
        noise,
    )
}
