//! Truncated-series simulation and recursion residuals.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, ONE};
use crate::noise::NoiseModel;
use crate::rational::LaurentSeries;

/// Y_t = constant + Σ_j C_j Z_{t−j} over the window of `coeffs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub constant: CVec,
    pub coeffs: LaurentSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    /// Number of output times t = 0..horizon−1.
    pub horizon: usize,
    /// Lags |j| ≤ truncation enter the sum.
    pub truncation: usize,
    /// Times this close to either end are left out of residual checks.
    pub burn_guard: usize,
    pub seed: u64,
}

impl SimConfig {
    /// Checks truncation > p + q and burn_guard ≥ p + q.
    pub fn validate(&self, p: usize, q: usize) -> Result<()> {
        if self.truncation <= p + q {
            return Err(Error::InvalidModel(format!("truncation {} must exceed p + q = {}", self.truncation, p + q)));
        }
        if self.burn_guard < p + q {
            return Err(Error::InvalidModel(format!("burn guard {} must be at least p + q = {}", self.burn_guard, p + q)));
        }
        if self.horizon <= 2 * self.burn_guard {
            return Err(Error::InvalidModel(format!("horizon {} leaves no interior past the burn guard", self.horizon)));
        }
        Ok(())
    }
}

/// Simulated output with the noise it consumed. `z[i]` is Z at time
/// `i − z_offset`, so anticausal terms can read ahead.
#[derive(Clone, Debug, PartialEq)]
pub struct SimPath {
    pub y: Vec<CVec>,
    pub z: Vec<CVec>,
    pub z_offset: usize,
}

impl SimPath {
    /// Z_t for −z_offset ≤ t.
    pub fn z_at(&self, t: i64) -> Option<&CVec> {
        usize::try_from(t + self.z_offset as i64).ok().and_then(|i| self.z.get(i))
    }
}

/// Evaluates the solution on fresh noise drawn from `noise` with `cfg.seed`.
/// Lags outside both the window and [−J, J] are dropped.
pub fn simulate_path(solution: &LinearSolution, noise: &NoiseModel, cfg: &SimConfig) -> Result<SimPath> {
    let series = &solution.coeffs;
    let (rows, cols) = series.shape();
    if series.coeffs().is_empty() {
        return Err(Error::InvalidModel(String::from("empty coefficient window")));
    }
    if cols != noise.dim() || rows != solution.constant.len() {
        return Err(Error::DimensionMismatch {
            what: "solution coefficient shape (rows·cols)",
            expected: solution.constant.len() * noise.dim(),
            found: rows * cols,
        });
    }
    let j = cfg.truncation as i64;
    let lo = series.j_min().max(-j);
    let hi = series.j_max().min(j);
    // times −hi ..= T−1−lo are read; keep the symmetric span for alignment
    let back = hi.max(0) as usize;
    let ahead = (-lo).max(0) as usize;
    let z = noise.sample(cfg.horizon + back + ahead, cfg.seed);
    let mut y = Vec::with_capacity(cfg.horizon);
    for t in 0..cfg.horizon as i64 {
        let mut acc = solution.constant.clone();
        for lag in lo..=hi {
            let c: &CMat = series.get(lag).expect("lag inside window");
            let idx = (t - lag + back as i64) as usize;
            acc.gemv(ONE, c, &z[idx], ONE);
        }
        y.push(acc);
    }
    Ok(SimPath { y, z, z_offset: back })
}

/// max over t in [guard, T − guard) of ‖Y_t − Σ_k Ψ_k Y_{t−k} − Σ_k Θ_k Z_{t−k}‖∞.
pub fn residual_check(psis: &[CMat], thetas: &[CMat], path: &SimPath, cfg: &SimConfig) -> Result<f64> {
    let p = psis.len();
    let q = thetas.len().saturating_sub(1);
    let guard = cfg.burn_guard.max(p).max(q);
    let horizon = path.y.len();
    if horizon != cfg.horizon {
        return Err(Error::DimensionMismatch {
            what: "path length",
            expected: cfg.horizon,
            found: horizon,
        });
    }
    if path.z_offset < q.saturating_sub(guard) || path.z.len() < path.z_offset + horizon {
        return Err(Error::DimensionMismatch {
            what: "noise path length",
            expected: path.z_offset + horizon,
            found: path.z.len(),
        });
    }
    let mut worst = 0.0f64;
    for t in guard..horizon.saturating_sub(guard) {
        let mut r = path.y[t].clone();
        for (k, psi) in psis.iter().enumerate() {
            r.gemv(-ONE, psi, &path.y[t - k - 1], ONE);
        }
        for (k, theta) in thetas.iter().enumerate() {
            let z = path.z_at(t as i64 - k as i64).ok_or(Error::IndexOutOfRange {
                index: t - k,
                len: path.z.len(),
            })?;
            r.gemv(-ONE, theta, z, ONE);
        }
        worst = worst.max(r.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

/// Biased sample autocovariances γ(h) = T⁻¹ Σ_t (Y_{t+h} − Ȳ)(Y_t − Ȳ)*, h = 0..=max_lag.
pub fn autocov_empirical(y: &[CVec], max_lag: usize) -> Result<Vec<CMat>> {
    let Some(first) = y.first() else {
        return Err(Error::InvalidModel(String::from("empty path")));
    };
    if max_lag >= y.len() {
        return Err(Error::IndexOutOfRange {
            index: max_lag,
            len: y.len(),
        });
    }
    let n = y.len();
    let mut mean = CVec::zeros(first.len());
    for v in y {
        mean += v;
    }
    mean /= ONE * n as f64;
    let centred: Vec<CVec> = y.iter().map(|v| v - &mean).collect();
    Ok((0..=max_lag)
        .map(|h| {
            let mut acc = CMat::zeros(first.len(), first.len());
            for t in 0..n - h {
                acc.ger(ONE, &centred[t + h], &centred[t].conjugate(), ONE);
            }
            acc / (ONE * n as f64)
        })
        .collect())
}
