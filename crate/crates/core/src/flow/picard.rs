use nalgebra::DVector;

use super::system::{Semigroup, SurrogateSystem};
use crate::error::{Error, Result};

/// Sup-over-time change at which the iteration stops.
pub const PICARD_TOL: f64 = 1e-12;
pub const PICARD_MAX_ITER: usize = 1000;

/// Fixed point `ω = e^{−tL}(g−h) + ∫₀ᵗ e^{−(t−s)L} Q(ω(s)) ds` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardSolution {
    pub times: Vec<f64>,
    pub trajectory: Vec<DVector<f64>>,
    pub iterations: usize,
    /// Sup-norm change per iteration.
    pub defects: Vec<f64>,
    /// Successive defect ratios.
    pub ratios: Vec<f64>,
    /// `2Tcc̃μ`.
    pub contraction_factor: f64,
    pub sup_norm: f64,
}

impl PicardSolution {
    pub fn last(&self) -> &DVector<f64> {
        self.trajectory
            .last()
            .expect("trajectory has at least two points")
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().cloned().fold(0.0, f64::max)
    }
}

/// Runs the Picard iteration for one leg of length `t` with operator `semigroup`.
pub fn picard_fixed_point(
    system: &SurrogateSystem,
    semigroup: &Semigroup,
    g_minus_h: &DVector<f64>,
    t: f64,
    mu: f64,
    time_steps: usize,
) -> Result<PicardSolution> {
    if time_steps < 64 {
        return Err(Error::Config(format!(
            "picard: at least 64 time steps required, got {time_steps}"
        )));
    }
    if !(t > 0.0) || !(mu > 0.0) {
        return Err(Error::Config(format!(
            "picard: T and mu must be positive, got {t} and {mu}"
        )));
    }
    let c = system.c();
    let eps = mu / (2.0 * c);
    let start = g_minus_h.norm();
    if start > eps {
        return Err(Error::Config(format!(
            "picard: |g - h| = {start:e} exceeds eps = mu/(2c) = {eps:e}"
        )));
    }
    let factor = 2.0 * t * c * system.c_tilde() * mu;
    if factor >= 1.0 {
        return Err(Error::Config(format!(
            "picard: contraction factor 2 T c c~ mu = {factor} is not below 1"
        )));
    }

    let dt = t / time_steps as f64;
    let times: Vec<f64> = (0..=time_steps).map(|j| j as f64 * dt).collect();
    let v = &semigroup.vectors;
    let decay_step: Vec<f64> = semigroup.values.iter().map(|l| (-dt * l).exp()).collect();
    // Free evolution in eigen-coordinates.
    let init = v.tr_mul(g_minus_h);
    let free: Vec<DVector<f64>> = times
        .iter()
        .map(|&s| {
            DVector::from_fn(init.len(), |i, _| {
                init[i] * (-s * semigroup.values[i]).exp()
            })
        })
        .collect();

    let quad_zero = system.quadratic.is_zero();
    let mut omega: Vec<DVector<f64>> = free.iter().map(|f| v * f).collect();
    let mut defects = Vec::new();
    let mut ratios = Vec::new();
    let mut iterations = 0;
    if !quad_zero {
        loop {
            if iterations >= PICARD_MAX_ITER {
                return Err(Error::Numerical(format!(
                    "picard: no convergence in {PICARD_MAX_ITER} iterations (last defect {:e})",
                    defects.last().copied().unwrap_or(f64::NAN)
                )));
            }
            iterations += 1;
            let q: Vec<DVector<f64>> = omega
                .iter()
                .map(|w| v.tr_mul(&system.quadratic.apply(w)))
                .collect();
            // Cumulative trapezoid rule for the convolution:
            // I_j = D I_{j−1} + (Δ/2)(D q_{j−1} + q_j), with D = e^{−ΔL}.
            let mut acc = DVector::zeros(init.len());
            let mut next = Vec::with_capacity(omega.len());
            for j in 0..omega.len() {
                if j > 0 {
                    for i in 0..acc.len() {
                        acc[i] =
                            decay_step[i] * (acc[i] + 0.5 * dt * q[j - 1][i]) + 0.5 * dt * q[j][i];
                    }
                }
                next.push(v * (&free[j] + &acc));
            }
            let defect = next
                .iter()
                .zip(&omega)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if let Some(&prev) = defects.last() {
                if prev > 0.0 {
                    ratios.push(defect / prev);
                }
            }
            defects.push(defect);
            omega = next;
            if defect < PICARD_TOL {
                break;
            }
        }
    }
    let sup_norm = omega.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if sup_norm > mu {
        return Err(Error::BoundViolation(format!(
            "picard: sup |omega| = {sup_norm:e} leaves the ball of radius {mu:e}"
        )));
    }
    Ok(PicardSolution {
        times,
        trajectory: omega,
        iterations,
        defects,
        ratios,
        contraction_factor: factor,
        sup_norm,
    })
}

/// Sup-norm difference between the fixed points at `time_steps` and `2·time_steps`,
/// compared on the common grid.
pub fn richardson_defect(
    system: &SurrogateSystem,
    semigroup: &Semigroup,
    g_minus_h: &DVector<f64>,
    t: f64,
    mu: f64,
    time_steps: usize,
) -> Result<f64> {
    let coarse = picard_fixed_point(system, semigroup, g_minus_h, t, mu, time_steps)?;
    let fine = picard_fixed_point(system, semigroup, g_minus_h, t, mu, 2 * time_steps)?;
    Ok(coarse
        .trajectory
        .iter()
        .enumerate()
        .map(|(j, w)| (w - &fine.trajectory[2 * j]).norm())
        .fold(0.0, f64::max))
}
