/// Numerical knobs shared by the analyzers.
///
/// Every boundary decision the engine makes (is a root on the unit circle,
/// is a coefficient zero, which eigenvalues coincide) goes through one of
/// these fields, and reports echo the values used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Half-width of the band around |z| = 1 in which a root or eigenvalue
    /// cannot be classified with confidence.
    pub circle: f64,
    /// Distance from the unit circle below which a root counts as lying on it.
    pub circle_exact: f64,
    /// Clustering radius for polynomial roots.
    pub root_cluster: f64,
    /// Clustering radius for eigenvalues in the Jordan decomposition.
    pub jordan_cluster: f64,
    /// Largest accepted relative reconstruction residual of a Jordan form.
    pub jordan_residual: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank: f64,
    /// Relative threshold for zero tests on polynomial coefficients.
    pub poly_zero: f64,
    /// Agreement required between successive Laurent coefficient estimates.
    pub laurent: f64,
    /// Eigenvalues with modulus below this count as zero.
    pub zero_eigen: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            circle: 1e-7,
            circle_exact: 1e-13,
            root_cluster: 1e-7,
            jordan_cluster: 1e-6,
            jordan_residual: 1e-6,
            rank: 1e-9,
            poly_zero: 1e-9,
            laurent: 1e-12,
            zero_eigen: 1e-9,
        }
    }
}

/// Where a point sits relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CirclePosition {
    Inside,
    OnCircle,
    /// Within the uncertainty band but not on the circle to `circle_exact`.
    Boundary,
    Outside,
}

impl Tolerances {
    pub fn classify_modulus(&self, modulus: f64) -> CirclePosition {
        let gap = modulus - 1.0;
        if gap.abs() <= self.circle_exact {
            CirclePosition::OnCircle
        } else if gap.abs() < self.circle {
            CirclePosition::Boundary
        } else if gap < 0.0 {
            CirclePosition::Inside
        } else {
            CirclePosition::Outside
        }
    }
}
