//! Heat semigroup `e^{−tA}`, `A = M⁻¹K`, on the complement of a designated kernel.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::format::fmt17;
use crate::tridiag::{Pencil, TridiagLu};

/// Tolerance on `|‖e^{−tA}‖ − e^{−tλ₁}|`.
pub const SEMIGROUP_TOL: f64 = 1e-12;
/// Relative tolerance between the spectral and time-stepped decay.
pub const STEPPER_TOL: f64 = 0.01;
/// Crank–Nicolson steps over `[0, 1/λ₁]`.
pub const STEPPER_STEPS: usize = 2048;
/// Extra eigenpairs computed beyond the kernel.
const EXTRA_MODES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatRow {
    pub t: f64,
    /// Operator norm on the kernel complement, from the eigenbasis.
    pub norm: f64,
    /// `e^{−tλ₁}`.
    pub bound: f64,
    /// `|norm(2t) − norm(t)²|`.
    pub semigroup_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatReport {
    pub kernel_dim: usize,
    /// First eigenvalue past the kernel.
    pub lambda1: f64,
    pub rows: Vec<HeatRow>,
    /// `1/λ₁`, where the time stepper is compared.
    pub stepper_time: f64,
    pub stepper_norm: f64,
    pub stepper_rel_error: f64,
    /// Violated inequalities, in check order.
    pub violations: Vec<String>,
}

impl HeatReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("t\tnorm\tbound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                fmt17(r.t),
                fmt17(r.norm),
                fmt17(r.bound)
            ));
        }
        out
    }
}

/// Runs the decay checks for the pencil `(K, M)`.
pub fn heat_decay_check(
    pencil: &Pencil,
    kernel_dim: usize,
    t_samples: &[f64],
) -> Result<HeatReport> {
    if let Some(t) = t_samples.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return domain(format!("heat: sample times must be positive, got {t}"));
    }
    if kernel_dim >= pencil.len() {
        return domain(format!(
            "heat: kernel dimension {kernel_dim} leaves no complement"
        ));
    }
    let k = (kernel_dim + EXTRA_MODES).min(pencil.len());
    let pairs = pencil.smallest_eigenpairs(k)?;
    let lambda1 = pairs.values[kernel_dim];
    let complement = &pairs.values[kernel_dim..];
    let mut violations = Vec::new();

    // e^{−tA} acts on the M-orthonormal eigenvector v_j as e^{−tθ_j}; the
    // restricted operator norm is the largest of these factors.
    let norm_at = |t: f64| {
        complement
            .iter()
            .map(|&th| (-t * th).exp())
            .fold(0.0, f64::max)
    };
    let mut rows = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let norm = norm_at(t);
        let bound = (-t * lambda1).exp();
        let semigroup_defect = (norm_at(2.0 * t) - norm * norm).abs();
        if (norm - bound).abs() > SEMIGROUP_TOL {
            violations.push(format!(
                "semigroup norm {norm:e} differs from e^(-t lambda1) = {bound:e} at t = {t}"
            ));
        }
        if semigroup_defect > SEMIGROUP_TOL {
            violations.push(format!(
                "semigroup property defect {semigroup_defect:e} at t = {t}"
            ));
        }
        rows.push(HeatRow {
            t,
            norm,
            bound,
            semigroup_defect,
        });
    }

    let (stepper_time, stepper_norm, stepper_rel_error) = if lambda1 > 0.0 {
        let t = 1.0 / lambda1;
        let u = crank_nicolson(pencil, &pairs.vectors[kernel_dim], t, STEPPER_STEPS)?;
        let got = pencil.m_norm(&u);
        let want = (-1.0f64).exp();
        let rel = (got - want).abs() / want;
        if !(rel <= STEPPER_TOL) {
            violations.push(format!(
                "time stepper decay {got:e} differs from e^-1 by {rel:e} at t = 1/lambda1"
            ));
        }
        (t, got, rel)
    } else {
        violations.push(format!(
            "first eigenvalue past the kernel is not positive: {lambda1:e}"
        ));
        (f64::NAN, f64::NAN, f64::NAN)
    };

    Ok(HeatReport {
        kernel_dim,
        lambda1,
        rows,
        stepper_time,
        stepper_norm,
        stepper_rel_error,
        violations,
    })
}

/// Crank–Nicolson for `M u' = −K u` over `[0, t]`.
pub fn crank_nicolson(pencil: &Pencil, u0: &[f64], t: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(t > 0.0) {
        return domain("crank_nicolson: need positive time and at least one step");
    }
    let dt = t / steps as f64;
    let lhs = pencil.mass.axpy(0.5 * dt, &pencil.stiffness);
    let rhs_op = pencil.mass.axpy(-0.5 * dt, &pencil.stiffness);
    let lu = TridiagLu::factor(&lhs.off, &lhs.diag, &lhs.off)?;
    let mut u = u0.to_vec();
    for _ in 0..steps {
        u = lu.solve(&rhs_op.matvec(&u));
    }
    Ok(u)
}
