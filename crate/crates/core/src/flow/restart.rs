use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::constants::{choose_constants, Constants};
use super::picard::picard_fixed_point;
use super::projection::{
    certify_projection_constant, project_to_manifold, sample_projection_ratio,
    transported_semigroup,
};
use super::system::SurrogateSystem;
use super::{FlowConfig, Tier};
use crate::error::{Error, Result};
use crate::format::fmt17;

/// Step distance below which the scheme counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Absolute slack on every bound, in units of `ε_mach·max(1, ‖h₀‖)`.
pub const ROUNDOFF_ULPS: f64 = 64.0;
/// Allowed excess of an empirical Picard ratio over `2Tcc̃μ`.
pub const RATIO_SLACK: f64 = 0.05;
/// Required first-order accuracy of the projection.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartOptions {
    pub time_steps: usize,
    pub min_legs: usize,
    pub max_legs: usize,
}

impl Default for RestartOptions {
    fn default() -> Self {
        Self {
            time_steps: 256,
            min_legs: 0,
            max_legs: 64,
        }
    }
}

/// Distances recorded for leg `k`: from `g(kT)` to `((k+1)T)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowRecord {
    pub k: usize,
    #[serde(skip)]
    pub g: DVector<f64>,
    #[serde(skip)]
    pub pi_g: DVector<f64>,
    /// `‖g(kT) − Πg(kT)‖`.
    pub dist_g_to_pi: f64,
    pub bound_g_to_pi: f64,
    /// `‖g((k+1)T) − Πg(kT)‖`.
    pub dist_step: f64,
    pub bound_step: f64,
    /// `‖Πg((k+1)T) − Πg(kT)‖`.
    pub dist_pi_step: f64,
    pub bound_pi_step: f64,
    pub dist_pi_to_h0: f64,
    pub dist_g_to_h0: f64,
    pub within_r: bool,
    pub picard_iterations: usize,
    pub picard_max_ratio: f64,
    pub orthogonality_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTrace {
    pub tier: Tier,
    pub seed: u64,
    pub constants: Constants,
    pub r: f64,
    /// Sampled projection constant, when certified.
    pub certified_c_projection: Option<f64>,
    pub records: Vec<FlowRecord>,
    pub converged: bool,
    #[serde(skip)]
    pub limit: DVector<f64>,
    pub limit_dist_to_h0: f64,
    /// Violated inequalities, in the order found.
    pub violations: Vec<String>,
}

impl FlowTrace {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// `max_k (‖g(kT) − Πg(kT)‖/ε)^{1/k}` over `k ≥ 1` with nonzero distance.
    pub fn geometric_ratio(&self) -> f64 {
        let eps = self.constants.epsilon;
        self.records
            .iter()
            .filter(|r| r.k >= 1 && r.dist_g_to_pi > 0.0)
            .map(|r| (r.dist_g_to_pi / eps).powf(1.0 / r.k as f64))
            .fold(0.0, f64::max)
    }

    /// Largest ratio of a tail sum of projected steps to its geometric bound
    /// `εc(c+1)^k / (N^{k+1}(1 − (c+1)/N))`.
    pub fn cauchy_tail_ratio(&self) -> f64 {
        let k = &self.constants;
        let q = (k.c + 1.0) / k.n as f64;
        let mut worst = 0.0f64;
        for (i, r) in self.records.iter().enumerate() {
            let tail: f64 = self.records[i..].iter().map(|x| x.dist_pi_step).sum();
            let bound = r.bound_pi_step / (1.0 - q);
            if bound > 0.0 {
                worst = worst.max(tail / bound);
            }
        }
        worst
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "k\tdist_g_to_Pi\tbound_g_to_Pi\tdist_step\tbound_step\tdist_Pi_step\tbound_Pi_step\twithin_R\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.k,
                fmt17(r.dist_g_to_pi),
                fmt17(r.bound_g_to_pi),
                fmt17(r.dist_step),
                fmt17(r.bound_step),
                fmt17(r.dist_pi_step),
                fmt17(r.bound_pi_step),
                r.within_r
            ));
        }
        out
    }
}

/// Restarted flow from `g0` with restart parameter `n` and radius `r`.
pub fn restart_flow(
    system: &SurrogateSystem,
    g0: &DVector<f64>,
    n: usize,
    r: f64,
    options: RestartOptions,
) -> Result<FlowTrace> {
    let c = system.c();
    let constants = choose_constants(n, c, system.c_tilde(), system.alpha)?;
    let eps = constants.epsilon;
    let nf = n as f64;
    let q = (c + 1.0) / nf;
    if q >= 1.0 {
        return Err(Error::Config(format!(
            "restart: (c+1)/N = {q} must be below 1"
        )));
    }
    if options.max_legs == 0 || options.min_legs > options.max_legs {
        return Err(Error::Config("restart: inconsistent leg limits".into()));
    }
    let h0 = &system.chart.h0;
    // Distances between points of size ‖h₀‖ carry this much rounding.
    let floor = ROUNDOFF_ULPS * f64::EPSILON * h0.norm().max(1.0);
    let first = project_to_manifold(system, g0)?;
    let start_dist = (g0 - &first.point).norm();
    if start_dist > eps {
        return Err(Error::Config(format!(
            "restart: |g0 - Pi g0| = {start_dist:e} exceeds eps = {eps:e}"
        )));
    }
    let drift = (&first.point - h0).norm();
    let budget = eps * c / nf / (1.0 - q);
    if !(drift + budget < r / 2.0) || !(eps < r / 2.0) {
        return Err(Error::Config(format!(
            "restart: radius R = {r:e} violates |Pi g0 - h0| + eps c/N sum ((c+1)/N)^j = {:e} < R/2 or eps < R/2",
            drift + budget
        )));
    }

    let mut records = Vec::new();
    let mut violations = Vec::new();
    let mut g = g0.clone();
    let mut proj = first;
    let mut converged = false;
    for k in 0..options.max_legs {
        let h = proj.point.clone();
        let semigroup = transported_semigroup(system, &proj.frame)?;
        let leg = picard_fixed_point(
            system,
            &semigroup,
            &(&g - &h),
            constants.t,
            constants.mu,
            options.time_steps,
        )?;
        let g_next = &h + leg.last();
        let next = project_to_manifold(system, &g_next)?;

        let kf = k as i32;
        let grow = (c + 1.0).powi(kf);
        let rec = FlowRecord {
            k,
            dist_g_to_pi: (&g - &h).norm(),
            bound_g_to_pi: eps * grow / nf.powi(kf),
            dist_step: (&g_next - &h).norm(),
            bound_step: eps * grow / nf.powi(kf + 1),
            dist_pi_step: (&next.point - &h).norm(),
            bound_pi_step: eps * c * grow / nf.powi(kf + 1),
            dist_pi_to_h0: (&h - h0).norm(),
            dist_g_to_h0: (&g - h0).norm(),
            within_r: (&h - h0).norm() <= r / 2.0 && (&g - h0).norm() <= r,
            picard_iterations: leg.iterations,
            picard_max_ratio: leg.max_ratio(),
            orthogonality_residual: proj.residual,
            g,
            pi_g: h,
        };
        check_record(
            &rec,
            &constants,
            leg.contraction_factor,
            r,
            floor,
            &mut violations,
        );
        let step = rec.dist_pi_step;
        records.push(rec);
        g = g_next;
        proj = next;
        if step < CONVERGENCE_TOL && k + 1 >= options.min_legs {
            converged = true;
            break;
        }
    }
    let limit_dist_to_h0 = (&g - h0).norm();
    if limit_dist_to_h0 > r {
        violations.push(format!(
            "limit: |g* - h0| = {limit_dist_to_h0:e} exceeds R = {r:e}"
        ));
    }
    if !converged {
        violations.push(format!("no convergence within {} legs", options.max_legs));
    }
    Ok(FlowTrace {
        tier: system.tier,
        seed: system.seed,
        constants,
        r,
        certified_c_projection: None,
        records,
        converged,
        limit: g,
        limit_dist_to_h0,
        violations,
    })
}

fn check_record(
    rec: &FlowRecord,
    k: &Constants,
    factor: f64,
    r: f64,
    floor: f64,
    out: &mut Vec<String>,
) {
    let mut fail = |name: &str, lhs: f64, rhs: f64| {
        if !(lhs <= rhs + floor) {
            out.push(format!("k={}: {name}: {lhs:e} > {rhs:e}", rec.k));
        }
    };
    fail(
        "dist_g_to_Pi <= eps((c+1)/N)^k",
        rec.dist_g_to_pi,
        rec.bound_g_to_pi,
    );
    fail(
        "dist_step <= eps(c+1)^k/N^(k+1)",
        rec.dist_step,
        rec.bound_step,
    );
    fail(
        "dist_Pi_step <= eps c(c+1)^k/N^(k+1)",
        rec.dist_pi_step,
        rec.bound_pi_step,
    );
    fail(
        "dist_step <= dist_g_to_Pi/N",
        rec.dist_step,
        rec.dist_g_to_pi / k.n as f64,
    );
    fail("|Pi g - h0| <= R/2", rec.dist_pi_to_h0, r / 2.0);
    fail("|g - h0| <= R", rec.dist_g_to_h0, r);
    fail(
        "picard ratio <= 2Tcc~mu + 0.05",
        rec.picard_max_ratio,
        factor + RATIO_SLACK,
    );
    fail(
        "orthogonality residual <= 1e-10",
        rec.orthogonality_residual,
        ORTHOGONALITY_TOL,
    );
}

/// Builds the system from `config`, certifies the projection constant,
/// and runs the restarted flow from a point at distance
/// `initial_fraction·ε` from `h₀` along the slowest decaying normal direction.
pub fn run_flow(config: &FlowConfig) -> Result<FlowTrace> {
    let system = SurrogateSystem::build(config)?;
    let c = system.c();
    let constants = choose_constants(config.n, c, system.c_tilde(), system.alpha)?;
    let eps = constants.epsilon;
    let nf = config.n as f64;
    let r = config
        .r
        .unwrap_or_else(|| 4.0 * eps * (c / (nf - c - 1.0)).max(1.0));

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xC0FFEE);
    system
        .quadratic
        .verify(super::system::Q_SAMPLES, &mut rng)?;
    // The affine projection is orthogonal, so tier A needs no inflation.
    let certified = match system.tier {
        Tier::A => sample_projection_ratio(&system, config.projection_samples, r, &mut rng)?,
        Tier::B => certify_projection_constant(&system, config.projection_samples, r, &mut rng)?,
    };
    if certified > system.c_projection * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "certified projection constant {certified} exceeds the configured c = {}",
            system.c_projection
        )));
    }

    // The first complement column spans the α-eigenspace.
    let g0 = &system.chart.h0 + system.chart.complement.column(0) * (config.initial_fraction * eps);
    let options = RestartOptions {
        time_steps: config.time_steps,
        min_legs: config.min_legs,
        max_legs: config.max_legs,
    };
    let mut trace = restart_flow(&system, &g0, config.n, r, options)?;
    trace.certified_c_projection = Some(certified);
    Ok(trace)
}
