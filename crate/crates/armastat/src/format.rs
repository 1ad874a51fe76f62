//! JSON model and report documents. Complex scalars are `[re, im]`; model
//! files may also give a plain number for a real entry.

use std::collections::BTreeMap;

use armastat_core::arma1q::Arma1qModel;
use armastat_core::armapq::ArmapqModel;
use armastat_core::linalg::{CMat, CVec};
use armastat_core::noise::{family_from_name, Component, NoiseModel};
use armastat_core::rational::Obstruction;
use armastat_core::report::{BlockCondition, StationarityReport};
use armastat_core::tol::{CirclePosition, Tolerances};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum FormatError {
    Json(serde_json::Error),
    Schema(String),
    Model(armastat_core::Error),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Json(e) => write!(f, "malformed JSON: {e}"),
            FormatError::Schema(msg) => write!(f, "invalid model file: {msg}"),
            FormatError::Model(e) => write!(f, "invalid model: {e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

impl From<armastat_core::Error> for FormatError {
    fn from(e: armastat_core::Error) -> Self {
        FormatError::Model(e)
    }
}

/// A complex number as `[re, im]`, or a bare real on input.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Pair([f64; 2]),
    Real(f64),
}

impl Scalar {
    fn value(self) -> Complex64 {
        match self {
            Scalar::Pair([re, im]) => Complex64::new(re, im),
            Scalar::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let z = self.value();
        [z.re, z.im].serialize(s)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Pair([z.re, z.im])
    }
}

/// Row-major matrix.
pub type MatrixJson = Vec<Vec<Scalar>>;

fn to_matrix(rows: &MatrixJson, shape: (usize, usize), what: &str) -> Result<CMat, FormatError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(FormatError::Schema(format!("{what} must be {}×{}", shape.0, shape.1)));
    }
    Ok(CMat::from_fn(shape.0, shape.1, |i, j| rows[i][j].value()))
}

pub fn matrix_json(m: &CMat) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect()).collect()
}

pub fn vector_json(v: &CVec) -> Vec<Scalar> {
    v.iter().map(|&z| z.into()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentJson {
    pub family: String,
    /// Family parameter, `nu` for student_t and `alpha` for alpha_stable.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_log_moment: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_variance: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoiseJson {
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Scalar>>,
    pub components: Vec<ComponentJson>,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly_zero: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, tol: &mut Tolerances) {
        if let Some(v) = self.circle {
            tol.circle = v;
        }
        if let Some(v) = self.rank {
            tol.rank = v;
        }
        if let Some(v) = self.poly_zero {
            tol.poly_zero = v;
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub m: usize,
    pub d: usize,
    pub p: usize,
    pub q: usize,
    pub psi: Vec<MatrixJson>,
    pub theta: Vec<MatrixJson>,
    /// Independent standard Gaussian components when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn noise_model(&self) -> Result<NoiseModel, FormatError> {
        let Some(noise) = &self.noise else {
            return Ok(NoiseModel::gaussian(self.d));
        };
        let n = noise.components.len();
        let l = match &noise.l {
            Some(rows) => to_matrix(rows, (self.d, n), "noise.L")?,
            None if n == self.d => CMat::identity(self.d, self.d),
            None => return Err(FormatError::Schema(format!("noise.L is required when there are {n} components and d = {}", self.d))),
        };
        let c = match &noise.c {
            Some(v) if v.len() == self.d => CVec::from_iterator(self.d, v.iter().map(|s| s.value())),
            Some(v) => return Err(FormatError::Schema(format!("noise.c has length {}, expected {}", v.len(), self.d))),
            None => CVec::zeros(self.d),
        };
        let components = noise
            .components
            .iter()
            .map(|comp| {
                if comp.params.len() > 1 {
                    return Err(FormatError::Schema(format!("{} takes at most one parameter", comp.family)));
                }
                let family = family_from_name(&comp.family, comp.params.values().next().copied())?;
                let derived = Component::new(family)?;
                let flm = comp.finite_log_moment.unwrap_or(derived.finite_log_moment);
                let fv = comp.finite_variance.unwrap_or(derived.finite_variance);
                Ok(Component::with_flags(family, flm, fv)?)
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(NoiseModel::new(l, c, components)?)
    }

    /// Ψ_1..Ψ_p; a pure moving average (p = 0) gets Ψ₁ = 0.
    pub fn psis(&self) -> Result<Vec<CMat>, FormatError> {
        if self.psi.len() != self.p {
            return Err(FormatError::Schema(format!("psi has {} matrices, p = {}", self.psi.len(), self.p)));
        }
        if self.p == 0 {
            return Ok(vec![CMat::zeros(self.m, self.m)]);
        }
        self.psi.iter().enumerate().map(|(k, m)| to_matrix(m, (self.m, self.m), &format!("psi[{k}]"))).collect()
    }

    pub fn thetas(&self) -> Result<Vec<CMat>, FormatError> {
        if self.theta.len() != self.q + 1 {
            return Err(FormatError::Schema(format!("theta has {} matrices, q + 1 = {}", self.theta.len(), self.q + 1)));
        }
        self.theta.iter().enumerate().map(|(k, m)| to_matrix(m, (self.m, self.d), &format!("theta[{k}]"))).collect()
    }

    pub fn pq_model(&self) -> Result<ArmapqModel, FormatError> {
        Ok(ArmapqModel::new(self.psis()?, self.thetas()?, self.noise_model()?)?)
    }

    pub fn first_order_model(&self) -> Result<Arma1qModel, FormatError> {
        if self.p > 1 {
            return Err(FormatError::Schema(format!("the first-order analyzer needs p ≤ 1, got p = {}", self.p)));
        }
        let psi = self.psis()?.remove(0);
        Ok(Arma1qModel::new(psi, self.thetas()?, self.noise_model()?)?)
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(o) = &self.tolerances {
            o.apply(&mut tol);
        }
        tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub exists_strict: bool,
    pub boundary_uncertain: bool,
    /// Verdict when boundary points are read as off the circle.
    pub exists_strict_off_circle: String,
    pub unique: bool,
    pub exists_weak: String,
    pub exists_causal: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub h: usize,
    pub lambda: Scalar,
    pub size: usize,
    pub start: usize,
    pub case: String,
    pub position: String,
    pub passes: bool,
    pub reason: String,
    pub test_matrix: MatrixJson,
    pub alpha: Option<Vec<Scalar>>,
    pub f: Option<Vec<Scalar>>,
    pub off_circle_passes: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub j_min: i64,
    pub j_max: i64,
    /// Frobenius norm of M_j, j = j_min..=j_max.
    pub norms: Vec<f64>,
    pub rho_causal: f64,
    pub rho_anticausal: f64,
    pub decay_constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionJson {
    pub row: usize,
    pub col: usize,
    pub z0: Scalar,
    pub order: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    pub jordan_residual: Option<f64>,
    pub convolution_residual: Option<f64>,
    pub mean_equation_residual: Option<f64>,
    pub obstruction: Option<ObstructionJson>,
    pub log_moment_index: Option<i64>,
    pub boundary_points: Vec<Scalar>,
    pub laurent_nodes: Option<usize>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancesJson {
    pub circle: f64,
    pub circle_exact: f64,
    pub root_cluster: f64,
    pub jordan_cluster: f64,
    pub jordan_residual: f64,
    pub rank: f64,
    pub poly_zero: f64,
    pub laurent: f64,
    pub zero_eigen: f64,
}

impl From<&Tolerances> for TolerancesJson {
    fn from(t: &Tolerances) -> Self {
        Self {
            circle: t.circle,
            circle_exact: t.circle_exact,
            root_cluster: t.root_cluster,
            jordan_cluster: t.jordan_cluster,
            jordan_residual: t.jordan_residual,
            rank: t.rank,
            poly_zero: t.poly_zero,
            laurent: t.laurent,
            zero_eigen: t.zero_eigen,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    /// `pq` or `1q`.
    pub order: String,
    pub verdicts: Verdicts,
    pub failing_condition: String,
    pub g: Option<Vec<Scalar>>,
    pub v: Option<Vec<Scalar>>,
    pub blocks: Vec<BlockJson>,
    pub laurent: Option<LaurentJson>,
    pub tolerances: TolerancesJson,
    pub diagnostics: DiagnosticsJson,
}

fn position_name(p: CirclePosition) -> &'static str {
    match p {
        CirclePosition::Inside => "inside",
        CirclePosition::OnCircle => "on_circle",
        CirclePosition::Boundary => "boundary",
        CirclePosition::Outside => "outside",
    }
}

fn block_json(b: &BlockCondition) -> BlockJson {
    BlockJson {
        h: b.h,
        lambda: b.lambda.into(),
        size: b.size,
        start: b.start,
        case: b.case.name().into(),
        position: position_name(b.position).into(),
        passes: b.passes,
        reason: b.reason.clone(),
        test_matrix: matrix_json(&b.test_matrix),
        alpha: b.alpha.as_ref().map(vector_json),
        f: b.f.as_ref().map(vector_json),
        off_circle_passes: b.off_circle_passes,
    }
}

fn obstruction_json(o: &Obstruction) -> ObstructionJson {
    ObstructionJson {
        row: o.row,
        col: o.col,
        z0: o.z0.into(),
        order: o.order,
        multiplicity: o.multiplicity,
    }
}

impl ReportFile {
    pub fn from_report(order: &str, r: &StationarityReport) -> Self {
        Self {
            order: order.into(),
            verdicts: Verdicts {
                exists_strict: r.exists_strict,
                boundary_uncertain: r.boundary_uncertain,
                exists_strict_off_circle: r.exists_strict_off_circle.name().into(),
                unique: r.unique,
                exists_weak: r.exists_weak.name().into(),
                exists_causal: r.exists_causal.name().into(),
            },
            failing_condition: r.failing_condition.name().into(),
            g: r.g.as_ref().map(vector_json),
            v: r.v.as_ref().map(vector_json),
            blocks: r.blocks.iter().map(block_json).collect(),
            laurent: r.laurent.as_ref().map(|s| LaurentJson {
                j_min: s.j_min(),
                j_max: s.j_max(),
                norms: s.coeffs().iter().map(|m| m.norm()).collect(),
                rho_causal: s.decay.rho_causal,
                rho_anticausal: s.decay.rho_anticausal,
                decay_constant: s.decay.constant,
            }),
            tolerances: (&r.tolerances).into(),
            diagnostics: DiagnosticsJson {
                jordan_residual: r.diagnostics.jordan_residual,
                convolution_residual: r.diagnostics.convolution_residual,
                mean_equation_residual: r.diagnostics.mean_equation_residual,
                obstruction: r.diagnostics.obstruction.as_ref().map(obstruction_json),
                log_moment_index: r.diagnostics.log_moment_index,
                boundary_points: r.diagnostics.boundary_points.iter().map(|&z| z.into()).collect(),
                laurent_nodes: r.diagnostics.laurent_nodes,
                warnings: r.diagnostics.warnings.clone(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
