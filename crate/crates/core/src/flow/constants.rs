use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest dyadic `μ` tried.
const MU_FLOOR: f64 = 1e-12;

/// Step constants of the restart scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub n: usize,
    pub c: f64,
    pub c_tilde: f64,
    pub alpha: f64,
    /// Radius of the Picard ball.
    pub mu: f64,
    /// Admissible initial distance `μ/(2c)`.
    pub epsilon: f64,
    /// Leg length `(1/(4μcc̃))·min(1/(cN), 1)`.
    pub t: f64,
}

impl Constants {
    /// `2Tcc̃μ`, the contraction factor of the Picard map.
    pub fn contraction_factor(&self) -> f64 {
        2.0 * self.t * self.c * self.c_tilde * self.mu
    }
}

fn leg_time(mu: f64, n: usize, c: f64, c_tilde: f64) -> f64 {
    (1.0 / (c * n as f64)).min(1.0) / (4.0 * mu * c * c_tilde)
}

/// Largest dyadic `μ ≤ 1` with `c·e^{−αT(μ)} < 1/(2N)`, and the derived `ε`, `T`.
pub fn choose_constants(n: usize, c: f64, c_tilde: f64, alpha: f64) -> Result<Constants> {
    if n < 2 || !(c >= 1.0) || !(c_tilde > 0.0) || !(alpha > 0.0) {
        return Err(Error::Config(format!(
            "choose_constants: need N >= 2, c >= 1, c_tilde > 0, alpha > 0 (got {n}, {c}, {c_tilde}, {alpha})"
        )));
    }
    let target = 1.0 / (2.0 * n as f64);
    let mut mu = 1.0;
    while mu >= MU_FLOOR {
        let t = leg_time(mu, n, c, c_tilde);
        if c * (-alpha * t).exp() < target {
            let k = Constants {
                n,
                c,
                c_tilde,
                alpha,
                mu,
                epsilon: mu / (2.0 * c),
                t,
            };
            check_inequalities(&k)?;
            return Ok(k);
        }
        mu *= 0.5;
    }
    Err(Error::Config(format!(
        "choose_constants: no dyadic mu above {MU_FLOOR:e} satisfies c e^(-alpha T) < 1/(2N)"
    )))
}

fn check_inequalities(k: &Constants) -> Result<()> {
    let checks = [
        (
            "T c c~ mu^2 <= mu/4",
            k.t * k.c * k.c_tilde * k.mu * k.mu <= k.mu / 4.0 * (1.0 + 1e-15),
        ),
        (
            "c eps <= mu/2",
            k.c * k.epsilon <= k.mu / 2.0 * (1.0 + 1e-15),
        ),
        (
            "2 T c c~ mu <= 1/2",
            k.contraction_factor() <= 0.5 * (1.0 + 1e-15),
        ),
    ];
    for (name, ok) in checks {
        if !ok {
            return Err(Error::Internal(format!(
                "choose_constants: {name} fails for {k:?}"
            )));
        }
    }
    Ok(())
}
