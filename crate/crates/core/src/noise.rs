//! Structured i.i.d. noise Z = L·V + c with independent scalar components.
//!
//! The probabilistic predicates the existence criteria need (degenerate
//! directions, almost-sure constancy of a linear image, finiteness of its
//! log-moment) are decided by linear algebra on L. A linear image A·Z has
//! finite log-moment exactly when no column of A·L hitting a heavy
//! component is nonzero, because independent non-degenerate components
//! cannot cancel almost surely.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Cauchy, Distribution, Exp1, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::linalg::{c, max_abs, rank_from_singular_values, svd_full, CMat, CVec};

/// Distribution family of one scalar component V_i (real-valued).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Gaussian,
    StudentT { nu: f64 },
    Cauchy,
    /// Symmetric α-stable, 0 < α ≤ 2, standard scale.
    AlphaStable { alpha: f64 },
    /// exp of a standard Cauchy variable.
    LogCauchy,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::StudentT { .. } => "student_t",
            Family::Cauchy => "cauchy",
            Family::AlphaStable { .. } => "alpha_stable",
            Family::LogCauchy => "log_cauchy",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::StudentT { nu } if !(nu > 0.0 && nu.is_finite()) => {
                Err(Error::InvalidNoise(format!("student_t needs nu > 0, got {nu}")))
            }
            Family::AlphaStable { alpha } if !(alpha > 0.0 && alpha <= 2.0) => {
                Err(Error::InvalidNoise(format!("alpha_stable needs 0 < alpha <= 2, got {alpha}")))
            }
            _ => Ok(()),
        }
    }

    pub fn has_finite_log_moment(&self) -> bool {
        !matches!(self, Family::LogCauchy)
    }

    /// Variance when finite.
    pub fn variance(&self) -> Option<f64> {
        match *self {
            Family::Gaussian => Some(1.0),
            Family::StudentT { nu } if nu > 2.0 => Some(nu / (nu - 2.0)),
            Family::AlphaStable { alpha: 2.0 } => Some(2.0),
            _ => None,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Family::Gaussian => rng.sample(StandardNormal),
            Family::StudentT { nu } => StudentT::new(nu).expect("validated").sample(rng),
            Family::Cauchy => Cauchy::new(0.0, 1.0).expect("unit scale").sample(rng),
            Family::AlphaStable { alpha } => chambers_mallows_stuck(alpha, rng),
            Family::LogCauchy => libm::exp(Cauchy::new(0.0, 1.0).expect("unit scale").sample(rng)),
        }
    }
}

/// Symmetric stable draw; α = 1 gives Cauchy and α = 2 a normal of variance 2.
fn chambers_mallows_stuck<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
    let w: f64 = rng.sample(Exp1);
    if alpha == 1.0 {
        return libm::tan(u);
    }
    libm::sin(alpha * u) / libm::pow(libm::cos(u), 1.0 / alpha)
        * libm::pow(libm::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha)
}

/// One scalar component with its declared moment flags.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Component {
    pub family: Family,
    pub finite_log_moment: bool,
    pub finite_variance: bool,
    pub variance: Option<f64>,
}

impl Component {
    /// Flags derived from the family.
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        let variance = family.variance();
        Ok(Self {
            family,
            finite_log_moment: family.has_finite_log_moment(),
            finite_variance: variance.is_some(),
            variance,
        })
    }

    /// Explicitly declared flags, rejected when they contradict the family.
    pub fn with_flags(family: Family, finite_log_moment: bool, finite_variance: bool) -> Result<Self> {
        let derived = Self::new(family)?;
        if derived.finite_log_moment != finite_log_moment || derived.finite_variance != finite_variance {
            return Err(Error::InvalidNoise(format!(
                "flags (finite_log_moment={finite_log_moment}, finite_variance={finite_variance}) \
                 contradict family {}",
                family.name()
            )));
        }
        Ok(derived)
    }
}

/// Z = L·V + c with d×n mixing matrix L.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    l: CMat,
    c: CVec,
    components: Vec<Component>,
    rank_tol: Option<f64>,
    zero_tol: f64,
}

/// U with U·K^⊥ = C^s × {0}; the last d−s coordinates of U·Z equal `u` a.s.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarySplit {
    pub u_mat: CMat,
    pub s: usize,
    pub u: CVec,
}

impl UnitarySplit {
    pub fn dim(&self) -> usize {
        self.u_mat.nrows()
    }
}

const DEFAULT_ZERO_TOL: f64 = 1e-9;

impl NoiseModel {
    pub fn new(l: CMat, c: CVec, components: Vec<Component>) -> Result<Self> {
        if l.ncols() != components.len() {
            return Err(Error::DimensionMismatch {
                what: "noise component count",
                expected: l.ncols(),
                found: components.len(),
            });
        }
        if c.len() != l.nrows() {
            return Err(Error::DimensionMismatch {
                what: "noise shift length",
                expected: l.nrows(),
                found: c.len(),
            });
        }
        for comp in &components {
            comp.family.validate()?;
        }
        Ok(Self {
            l,
            c,
            components,
            rank_tol: None,
            zero_tol: DEFAULT_ZERO_TOL,
        })
    }

    /// d independent standard Gaussians, Z = V.
    pub fn gaussian(d: usize) -> Self {
        Self::iid(d, Family::Gaussian).expect("gaussian is valid")
    }

    /// d independent components of one family, Z = V.
    pub fn iid(d: usize, family: Family) -> Result<Self> {
        let comp = Component::new(family)?;
        Self::new(CMat::identity(d, d), CVec::zeros(d), alloc::vec![comp; d])
    }

    /// Overrides the relative singular-value threshold for the rank of L.
    pub fn with_rank_tol(mut self, rel_tol: f64) -> Self {
        self.rank_tol = Some(rel_tol);
        self
    }

    /// Overrides the relative threshold for zero tests on A·L.
    pub fn with_zero_tol(mut self, rel_tol: f64) -> Self {
        self.zero_tol = rel_tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn component_count(&self) -> usize {
        self.l.ncols()
    }

    pub fn mixing(&self) -> &CMat {
        &self.l
    }

    pub fn shift(&self) -> &CVec {
        &self.c
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn all_finite_variance(&self) -> bool {
        self.components.iter().all(|c| c.finite_variance)
    }

    pub fn all_finite_log_moment(&self) -> bool {
        self.components.iter().all(|c| c.finite_log_moment)
    }

    fn rank_tol(&self) -> f64 {
        self.rank_tol
            .unwrap_or_else(|| self.dim().max(self.component_count()) as f64 * f64::EPSILON)
    }

    /// Orthonormal basis (columns) of K = { a : a*·L = 0 }.
    pub fn degenerate_subspace(&self) -> Result<CMat> {
        let split = self.unitary_split()?;
        let d = self.dim();
        Ok(split.u_mat.rows(split.s, d - split.s).adjoint())
    }

    /// U from the left singular vectors of L, K^⊥ first.
    pub fn unitary_split(&self) -> Result<UnitarySplit> {
        let d = self.dim();
        let svd = svd_full(&self.l)?;
        let s = rank_from_singular_values(&svd.singular_values, self.rank_tol());
        let u_mat = svd.u.adjoint();
        let u = (&u_mat * &self.c).rows(s, d - s).into_owned();
        Ok(UnitarySplit { u_mat, s, u })
    }

    fn image_mixing(&self, a: &CMat, reference: f64) -> Result<(CMat, f64)> {
        if a.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "linear image columns",
                expected: self.dim(),
                found: a.ncols(),
            });
        }
        let al = a * &self.l;
        let scale = max_abs(a).max(reference) * max_abs(&self.l) * self.dim().max(1) as f64;
        Ok((al, self.zero_tol * scale))
    }

    /// A·c when A·Z is almost surely constant, otherwise `None`.
    pub fn image_is_constant(&self, a: &CMat) -> Result<Option<CVec>> {
        self.image_is_constant_at_scale(a, 0.0)
    }

    /// As [`Self::image_is_constant`], with entries of A·L below the zero
    /// threshold relative to `reference` (the magnitude of the terms that
    /// produced A) counted as cancelled.
    pub fn image_is_constant_at_scale(&self, a: &CMat, reference: f64) -> Result<Option<CVec>> {
        let (al, cut) = self.image_mixing(a, reference)?;
        if al.iter().all(|z| z.norm() <= cut) {
            Ok(Some(a * &self.c))
        } else {
            Ok(None)
        }
    }

    /// E log⁺‖A·Z‖ < ∞ under the structural rule.
    pub fn image_has_finite_log_moment(&self, a: &CMat) -> Result<bool> {
        self.image_has_finite_log_moment_at_scale(a, 0.0)
    }

    /// As [`Self::image_has_finite_log_moment`] with a reference magnitude.
    pub fn image_has_finite_log_moment_at_scale(&self, a: &CMat, reference: f64) -> Result<bool> {
        let (al, cut) = self.image_mixing(a, reference)?;
        Ok(self
            .components
            .iter()
            .enumerate()
            .filter(|(_, comp)| !comp.finite_log_moment)
            .all(|(i, _)| al.column(i).iter().all(|z| z.norm() <= cut)))
    }

    /// E Z when every component has finite variance (all families are centred).
    pub fn mean(&self) -> Option<CVec> {
        self.all_finite_variance().then(|| self.c.clone())
    }

    /// L·diag(var)·L* when every component has finite variance.
    pub fn covariance(&self) -> Option<CMat> {
        if !self.all_finite_variance() {
            return None;
        }
        let weights = CMat::from_fn(self.component_count(), self.component_count(), |i, j| {
            if i == j {
                c(self.components[i].variance.unwrap_or(0.0), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        Some(&self.l * weights * self.l.adjoint())
    }

    /// `count` draws of Z, reproducible from `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<CVec> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let n = self.component_count();
        let mut v = CVec::zeros(n);
        (0..count)
            .map(|_| {
                for (slot, comp) in v.iter_mut().zip(&self.components) {
                    *slot = c(comp.family.draw(&mut rng), 0.0);
                }
                &self.l * &v + &self.c
            })
            .collect()
    }
}

/// Parses a family from its schema name and optional parameter.
pub fn family_from_name(name: &str, param: Option<f64>) -> Result<Family> {
    let need = |what: &str| -> Result<f64> {
        param.ok_or_else(|| Error::InvalidNoise(format!("{name} needs parameter {what}")))
    };
    let family = match name {
        "gaussian" => Family::Gaussian,
        "student_t" => Family::StudentT { nu: need("nu")? },
        "cauchy" => Family::Cauchy,
        "alpha_stable" => Family::AlphaStable { alpha: need("alpha")? },
        "log_cauchy" => Family::LogCauchy,
        other => return Err(Error::InvalidNoise(String::from("unknown family ") + other)),
    };
    family.validate()?;
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, real_matrix};
    use alloc::vec;

    fn mixed_noise(first: Family) -> NoiseModel {
        NoiseModel::new(
            real_matrix(2, 2, &[1.0, 0.0, 1.0, 1.0]),
            CVec::zeros(2),
            vec![Component::new(first).unwrap(), Component::new(Family::Gaussian).unwrap()],
        )
        .unwrap()
    }

    fn column_noise(col: [f64; 2], shift: [f64; 2]) -> NoiseModel {
        NoiseModel::new(
            real_matrix(2, 1, &col),
            CVec::from_vec(vec![c(shift[0], 0.0), c(shift[1], 0.0)]),
            vec![Component::new(Family::Gaussian).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn full_rank_has_no_degenerate_directions() {
        let noise = NoiseModel::gaussian(3);
        assert_eq!(noise.degenerate_subspace().unwrap().ncols(), 0);
        let split = noise.unitary_split().unwrap();
        assert_eq!(split.s, 3);
        assert!(split.u.is_empty());
        assert!(max_abs(&(&split.u_mat * split.u_mat.adjoint() - identity(3))) < 1e-12);
    }

    #[test]
    fn rank_one_mixing() {
        let noise = column_noise([1.0, 1.0], [0.0, 5.0]);
        let k = noise.degenerate_subspace().unwrap();
        assert_eq!(k.ncols(), 1);
        // K is spanned by (1, -1)/sqrt 2 up to phase
        let a = k[(0, 0)];
        let b = k[(1, 0)];
        assert!((a + b).norm() < 1e-12);
        assert!((a.norm() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        let split = noise.unitary_split().unwrap();
        assert_eq!(split.s, 1);
        let expected = (split.u_mat.row(1) * noise.shift())[(0, 0)];
        assert!((split.u[0] - expected).norm() < 1e-14);
        for z in noise.sample(10_000, 7) {
            let uz = &split.u_mat * z;
            assert!((uz[1] - split.u[0]).norm() < 1e-10);
        }
        // K is orthogonal to the leading rows of U
        let inner = split.u_mat.rows(0, split.s) * &k;
        assert!(max_abs(&inner) < 1e-10);
    }

    #[test]
    fn zero_mixing_is_deterministic() {
        let noise = column_noise([0.0, 0.0], [2.0, -1.0]);
        assert_eq!(noise.degenerate_subspace().unwrap().ncols(), 2);
        let split = noise.unitary_split().unwrap();
        assert_eq!(split.s, 0);
        let back = split.u_mat.adjoint() * &split.u;
        assert!((back - noise.shift()).norm() < 1e-12);
    }

    #[test]
    fn constancy_of_images() {
        let noise = NoiseModel::gaussian(2);
        let zero = CMat::zeros(1, 2);
        assert_eq!(noise.image_is_constant(&zero).unwrap(), Some(CVec::zeros(1)));
        let a = real_matrix(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(noise.image_is_constant(&a).unwrap(), None);

        let rank_one = column_noise([1.0, 1.0], [0.0, 5.0]);
        let annihilator = rank_one.degenerate_subspace().unwrap().adjoint();
        let alpha = rank_one.image_is_constant(&annihilator).unwrap().unwrap();
        assert!((alpha - &annihilator * rank_one.shift()).norm() < 1e-14);
        assert!(noise.image_is_constant(&CMat::zeros(1, 3)).is_err());
    }

    #[test]
    fn heavy_component_cancels_in_image() {
        let a = real_matrix(2, 2, &[1.0, -1.0, 1.0, -1.0]);
        assert!(mixed_noise(Family::LogCauchy).image_has_finite_log_moment(&a).unwrap());
        let both_heavy = NoiseModel::iid(2, Family::LogCauchy).unwrap();
        assert!(!both_heavy.image_has_finite_log_moment(&a).unwrap());
        assert!(both_heavy.image_has_finite_log_moment(&CMat::zeros(2, 2)).unwrap());
    }

    #[test]
    fn sampling_contract() {
        let noise = NoiseModel::new(
            real_matrix(1, 1, &[1.0]),
            CVec::from_vec(vec![c(3.0, 0.0)]),
            vec![Component::new(Family::Gaussian).unwrap()],
        )
        .unwrap();
        assert!(noise.sample(0, 1).is_empty());
        let draws = noise.sample(1_000_000, 11);
        let mean = draws.iter().map(|z| z[0].re).sum::<f64>() / draws.len() as f64;
        assert!((mean - 3.0).abs() < 0.01);
        assert_eq!(noise.sample(50, 5), noise.sample(50, 5));
        assert_ne!(noise.sample(50, 5), noise.sample(50, 6));
    }

    #[test]
    fn stable_family_limits() {
        // alpha = 2 is normal with variance 2
        let draws = NoiseModel::iid(1, Family::AlphaStable { alpha: 2.0 })
            .unwrap()
            .sample(200_000, 3);
        let var = draws.iter().map(|z| z[0].re * z[0].re).sum::<f64>() / draws.len() as f64;
        assert!((var - 2.0).abs() < 0.05);
        // heavy tails have a median absolute value of 1 for the standard Cauchy
        let mut abs: Vec<f64> = NoiseModel::iid(1, Family::AlphaStable { alpha: 1.0 })
            .unwrap()
            .sample(100_001, 4)
            .iter()
            .map(|z| z[0].re.abs())
            .collect();
        abs.sort_by(f64::total_cmp);
        assert!((abs[50_000] - 1.0).abs() < 0.03);
    }

    #[test]
    fn flags_must_match_family() {
        assert!(Component::with_flags(Family::Gaussian, true, true).is_ok());
        assert!(Component::with_flags(Family::Cauchy, true, true).is_err());
        assert!(Component::with_flags(Family::LogCauchy, true, false).is_err());
        assert!(Component::new(Family::StudentT { nu: -1.0 }).is_err());
        assert_eq!(Component::new(Family::StudentT { nu: 4.0 }).unwrap().variance, Some(2.0));
        assert!(family_from_name("laplace", None).is_err());
        assert_eq!(family_from_name("student_t", Some(3.0)).unwrap(), Family::StudentT { nu: 3.0 });
    }

    #[test]
    fn moments_from_structure() {
        let noise = mixed_noise(Family::Gaussian);
        let cov = noise.covariance().unwrap();
        assert!(max_abs(&(cov - real_matrix(2, 2, &[1.0, 1.0, 1.0, 2.0]))) < 1e-14);
        assert!(mixed_noise(Family::Cauchy).covariance().is_none());
    }
}
