//! Finite-dimensional surrogate of the restarted flow near an integrable
//! Ricci-flat metric.
//!
//! The state space is `ℝ^m`. A symmetric PSD matrix `L` plays the linearized
//! operator, a bilinear map `Q` the quadratic remainder, and a chart over
//! `ker L` the manifold of fixed points. Tier A uses the affine manifold
//! `h₀ + ker L`; tier B bends it by a quadratic graph and transports `L`
//! along it.

mod constants;
mod picard;
mod projection;
mod restart;
mod system;

pub use constants::{choose_constants, Constants};
pub use picard::{
    picard_fixed_point, richardson_defect, PicardSolution, PICARD_MAX_ITER, PICARD_TOL,
};
pub use projection::{
    certify_projection_constant, polar_transport, project_to_manifold, sample_projection_ratio,
    transported_semigroup, Projection, CERTIFY_INFLATION,
};
pub use restart::{restart_flow, run_flow, FlowRecord, FlowTrace, RestartOptions};
pub use system::{Chart, QuadraticMap, Semigroup, SurrogateSystem, KERNEL_TOL, Q_SAMPLES};

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Tier {
    /// Affine manifold, fixed operator, `c = 1`.
    A,
    /// Curved manifold with a quadratic chart and transported operator.
    B,
}

impl std::fmt::Display for Tier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tier::A => "A",
            Tier::B => "B",
        })
    }
}

/// Parameters of a surrogate run.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub tier: Tier,
    /// State dimension `m`.
    pub dimension: usize,
    /// `dim ker L`.
    pub kernel_dim: usize,
    /// Spectral gap of `L`.
    pub alpha: f64,
    /// Assumed Lipschitz constant of the projection.
    pub c: f64,
    /// Assumed bound on `‖e^{−tL}‖`; the estimates use `max(c, c_semigroup)`.
    pub c_semigroup: f64,
    pub c_tilde: f64,
    /// Restart contraction parameter `N`.
    pub n: usize,
    /// Confinement radius; `None` picks `4ε·max(1, c/(N−c−1))`.
    pub r: Option<f64>,
    pub seed: u64,
    pub time_steps: usize,
    pub zero_quadratic: bool,
    /// Size of the chart's second fundamental form (tier B).
    pub curvature: f64,
    /// Random pairs used to certify the projection constant.
    pub projection_samples: usize,
    /// Start at distance `initial_fraction·ε` from the manifold.
    pub initial_fraction: f64,
    pub min_legs: usize,
    pub max_legs: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            tier: Tier::A,
            dimension: 6,
            kernel_dim: 2,
            alpha: 1.0,
            c: 1.0,
            c_semigroup: 1.0,
            c_tilde: 1.0,
            n: 4,
            r: None,
            seed: DEFAULT_SEED,
            time_steps: 256,
            zero_quadratic: false,
            curvature: 0.5,
            projection_samples: 1000,
            initial_fraction: 0.99,
            min_legs: 0,
            max_legs: 64,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.kernel_dim == 0 || self.kernel_dim >= self.dimension {
            return bad(format!(
                "kernel dimension {} must lie in 1..{}",
                self.kernel_dim, self.dimension
            ));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.c >= 1.0) || !(self.c_semigroup >= 1.0) {
            return bad(format!(
                "c must be at least 1, got {} and {}",
                self.c, self.c_semigroup
            ));
        }
        if !(self.c_tilde > 0.0) || !self.c_tilde.is_finite() {
            return bad(format!("c_tilde must be positive, got {}", self.c_tilde));
        }
        if self.n < 2 {
            return bad(format!("N must be at least 2, got {}", self.n));
        }
        if self.time_steps < 64 {
            return bad(format!(
                "at least 64 time steps are required, got {}",
                self.time_steps
            ));
        }
        if !(self.curvature >= 0.0) {
            return bad(format!(
                "curvature must be non-negative, got {}",
                self.curvature
            ));
        }
        if !(self.initial_fraction >= 0.0 && self.initial_fraction <= 1.0) {
            return bad(format!(
                "initial fraction must lie in [0, 1], got {}",
                self.initial_fraction
            ));
        }
        if self.max_legs == 0 || self.min_legs > self.max_legs {
            return bad(format!(
                "leg limits {}..{} are inconsistent",
                self.min_legs, self.max_legs
            ));
        }
        if let Some(r) = self.r {
            if !(r > 0.0) {
                return bad(format!("R must be positive, got {r}"));
            }
        }
        Ok(())
    }

    /// `max(c, c_semigroup)`.
    pub fn effective_c(&self) -> f64 {
        self.c.max(self.c_semigroup)
    }
}
