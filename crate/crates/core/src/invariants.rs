//! The invariant suite behind `conestab check`.
//!
//! Every check is deterministic. A tolerance override replaces the
//! tolerance of every numeric check, which makes `0` unsatisfiable for any
//! quantity carrying rounding error.

use std::f64::consts::PI;

use crate::bessel::bessel_zeros;
use crate::catalog::{lambda_threshold, reproduce_table, table1, table2, StabilityLabel};
use crate::error::Result;
use crate::flow::{run_flow, FlowConfig, Tier, DEFAULT_SEED};
use crate::format::fmt17;
use crate::heat::heat_decay_check;
use crate::radial::{
    build_radial_model, friedrichs_eigenvalues, garding_constants, hardy_bound, hardy_quotient,
    min_eps_margin, RadialBasis, RadialModel,
};
use crate::spectrum::{nu, CrossSectionSpectrum};
use crate::tangential::{
    block_spectrum, det3, tangential_verdict, v4_form, v4_reduced_det, v4_rescaled, A33Variant,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    /// Replaces every numeric tolerance when set.
    pub tolerance: Option<f64>,
    pub a33: A33Variant,
    pub seed: u64,
    /// Mesh size of the radial checks.
    pub mesh: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tolerance: None,
            a33: A33Variant::MatrixEntry,
            seed: DEFAULT_SEED,
            mesh: 4000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Measured deviation, for numeric checks.
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(if r.passed { "PASS " } else { "FAIL " });
            out.push_str(r.name);
            if let (Some(v), Some(t)) = (r.value, r.tolerance) {
                out.push_str(&format!(" value={} tolerance={}", fmt17(v), fmt17(t)));
            }
            if !r.detail.is_empty() {
                out.push_str(" -- ");
                out.push_str(&r.detail);
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} checks, {} passed, {} failed\n",
            self.results.len(),
            self.results.len() - failed,
            failed
        ));
        out
    }
}

struct Suite<'a> {
    opts: &'a CheckOptions,
    results: Vec<CheckResult>,
}

impl Suite<'_> {
    fn tol(&self, default: f64) -> f64 {
        self.opts.tolerance.unwrap_or(default)
    }

    fn numeric(&mut self, name: &'static str, value: f64, default_tol: f64, detail: String) {
        let tolerance = self.tol(default_tol);
        self.results.push(CheckResult {
            name,
            passed: value <= tolerance,
            value: Some(value),
            tolerance: Some(tolerance),
            detail,
        });
    }

    fn boolean(&mut self, name: &'static str, passed: bool, detail: String) {
        self.results.push(CheckResult {
            name,
            passed,
            value: None,
            tolerance: None,
            detail,
        });
    }

    fn error(&mut self, name: &'static str, err: crate::Error) {
        self.boolean(name, false, err.to_string());
    }

    fn run(&mut self, name: &'static str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.error(name, e);
        }
    }
}

pub fn run_checks(opts: &CheckOptions) -> CheckReport {
    let mut s = Suite {
        opts,
        results: Vec::new(),
    };
    s.run("spectrum.indicial_root", check_indicial);
    s.run("tangential.determinant_identity", check_determinant);
    s.run("tangential.psd_boundary", check_psd_boundary);
    s.run("tangential.sphere_edge_case", check_sphere);
    s.run("catalog.threshold_decreasing", check_threshold);
    s.run("catalog.label_monotonicity", |s| {
        let bad: Vec<_> = table1()
            .into_iter()
            .chain(table2())
            .filter(|e| {
                e.expected_tangential == StabilityLabel::StrictlyStable
                    && e.expected_einstein != StabilityLabel::StrictlyStable
            })
            .map(|e| e.family)
            .collect();
        s.boolean("catalog.label_monotonicity", bad.is_empty(), bad.join("; "));
        Ok(())
    });
    for (table, name) in [
        (1u8, "catalog.table1_reproduction"),
        (2, "catalog.table2_reproduction"),
    ] {
        s.run(name, |s| {
            let report = reproduce_table(table, 3)?;
            let bad: Vec<String> = report
                .mismatches()
                .iter()
                .map(|r| format!("{} {:?}", r.family, r.evaluation.params))
                .collect();
            s.boolean(
                name,
                bad.is_empty(),
                if bad.is_empty() {
                    String::new()
                } else {
                    format!("mismatch: {}", bad.join("; "))
                },
            );
            Ok(())
        });
    }
    s.run("radial.bessel_oracle", check_bessel);
    s.run("radial.hardy", check_hardy);
    s.run("radial.garding", check_garding);
    s.run("heat.semigroup", check_heat);
    for (tier, c, name) in [(Tier::A, 1.0, "flow.tier_a"), (Tier::B, 1.2, "flow.tier_b")] {
        let seed = opts.seed;
        s.run(name, move |s| {
            let config = FlowConfig {
                tier,
                c,
                seed,
                min_legs: if tier == Tier::A { 11 } else { 9 },
                ..FlowConfig::default()
            };
            let trace = run_flow(&config)?;
            let detail = trace.violations.first().cloned().unwrap_or_else(|| {
                format!(
                    "legs={} geometric_ratio={}",
                    trace.records.len(),
                    fmt17(trace.geometric_ratio())
                )
            });
            s.boolean(name, trace.passed(), detail);
            Ok(())
        });
    }
    CheckReport { results: s.results }
}

fn check_indicial(s: &mut Suite) -> Result<()> {
    let cases = [(12.0, 5, 4.0), (0.0, 3, 1.0), (3.0, 3, 2.0), (5.0, 5, 3.0)];
    let mut worst = 0.0f64;
    for (l, n, want) in cases {
        worst = worst.max((nu(l, n)? - want).abs());
    }
    s.numeric("spectrum.indicial_root", worst, 1e-15, String::new());
    Ok(())
}

fn check_determinant(s: &mut Suite) -> Result<()> {
    let mut worst = 0.0f64;
    let mut at = String::new();
    for n in 3..=12usize {
        let nf = n as f64;
        let steps = ((6.0 * nf - nf - 0.25) / 0.25).round() as usize;
        for i in 0..=steps {
            let l = nf + 0.25 + 0.25 * i as f64;
            let d = det3(&v4_rescaled(l, n, 0.0, s.opts.a33)?);
            let want = v4_reduced_det(l, n);
            // At the root λ = 2n+2 the deviation is taken relative to the
            // size of the other factors.
            let scale = if want != 0.0 {
                want.abs()
            } else {
                (l * l * nf * nf * (l + 2.0 * nf - 6.0)).abs()
            };
            let dev = (d - want).abs() / scale;
            if dev > worst {
                worst = dev;
                at = format!("worst at n={n} lambda={l}");
            }
        }
    }
    s.numeric("tangential.determinant_identity", worst, 1e-10, at);
    Ok(())
}

fn check_psd_boundary(s: &mut Suite) -> Result<()> {
    let mut worst = 0.0f64;
    let mut positive = true;
    for n in 3..=12 {
        let th = block_spectrum(&v4_form(2.0 * n as f64 + 2.0, n, 0.0)?)?;
        worst = worst.max(th[0].abs());
        positive &= th[1] > 0.0 && th[2] > 0.0;
    }
    if !positive {
        s.boolean(
            "tangential.psd_boundary",
            false,
            "theta_2 or theta_3 not positive".into(),
        );
    } else {
        s.numeric("tangential.psd_boundary", worst, 1e-8, String::new());
    }
    Ok(())
}

fn check_sphere(s: &mut Suite) -> Result<()> {
    let mut bad = Vec::new();
    for n in 3..=5 {
        let v = tangential_verdict(&CrossSectionSpectrum::round_sphere(n, 6)?)?;
        let top = 2.0 * (n as f64 + 1.0);
        if !v.tangentially_stable
            || v.strictly_tangentially_stable
            || !v.offending_closed.contains(&top)
        {
            bad.push(format!("S^{n}"));
        }
    }
    s.boolean("tangential.sphere_edge_case", bad.is_empty(), bad.join(" "));
    Ok(())
}

fn check_threshold(s: &mut Suite) -> Result<()> {
    let mut ok = true;
    let mut prev = lambda_threshold(3)?;
    for d in 4..=2000 {
        let t = lambda_threshold(d)?;
        ok &= t < prev && t > 2.0;
        prev = t;
    }
    s.boolean(
        "catalog.threshold_decreasing",
        ok && prev - 2.0 < 1e-2,
        String::new(),
    );
    Ok(())
}

fn check_bessel(s: &mut Suite) -> Result<()> {
    let m = s.opts.mesh;
    let mut worst = 0.0f64;
    let mut at = String::new();
    for nu in [0.0, 0.5, 1.0, 2.0] {
        let got = friedrichs_eigenvalues(&build_radial_model(nu, 0.0, m, 2.0)?, 1)?[0];
        let want = if nu == 0.5 {
            PI * PI
        } else {
            bessel_zeros(nu, 1)?[0].powi(2)
        };
        let rel = (got - want).abs() / want;
        if rel > worst {
            worst = rel;
            at = format!("worst at nu={nu}");
        }
    }
    s.numeric("radial.bessel_oracle", worst, 5e-3, at);
    Ok(())
}

fn check_hardy(s: &mut Suite) -> Result<()> {
    let mut worst = 0.0f64;
    for n in [2, 3, 4, 6] {
        worst = worst.max(hardy_quotient(n, 2000, 2.0)? / hardy_bound(n)?);
    }
    // Excess of the quotient over the sharp constant, in relative terms.
    s.numeric(
        "radial.hardy",
        (worst - 1.0).max(0.0),
        0.02,
        format!("max ratio {}", fmt17(worst)),
    );
    Ok(())
}

fn check_garding(s: &mut Suite) -> Result<()> {
    let n = 4;
    let d = (n - 1) as f64;
    let threshold = -d * d / 4.0 + 0.25;
    let mut bad = Vec::new();
    for c in [threshold + 0.1, threshold + 0.5, 0.0, 2.0] {
        let p = c + d * d / 4.0 - 0.25;
        let model = RadialModel::new(p, 0.0, 256, 2.0, RadialBasis::Hat)?;
        let (g, w) = (model.gradient.as_ref(), model.inverse_square.as_ref());
        let (Some(g), Some(_)) = (g, w) else {
            unreachable!("hat models carry their forms")
        };
        let (e1, e2) = garding_constants(&model.stiffness, g, &model.mass, 0)?;
        min_eps_margin(c, n)?;
        if !(e1 > 0.0 && e2 > 0.0) {
            bad.push(format!("C={c}: eps1={e1} eps2={e2}"));
        }
    }
    s.boolean("radial.garding", bad.is_empty(), bad.join("; "));
    Ok(())
}

fn check_heat(s: &mut Suite) -> Result<()> {
    let model = build_radial_model(1.0, 0.0, 400, 2.0)?;
    let report = heat_decay_check(&model.pencil(), 0, &[0.1, 0.2, 0.5])?;
    let defect = report
        .rows
        .iter()
        .map(|r| r.semigroup_defect)
        .fold(0.0, f64::max);
    s.numeric("heat.semigroup", defect, 1e-12, String::new());
    let stepper = report.stepper_rel_error;
    s.numeric("heat.stepper", stepper, 0.01, String::new());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast() -> CheckOptions {
        CheckOptions {
            mesh: 1000,
            ..CheckOptions::default()
        }
    }

    #[test]
    fn sign_flip_breaks_determinant() {
        let report = run_checks(&CheckOptions {
            a33: A33Variant::SignFlipped,
            ..fast()
        });
        let det = report
            .results
            .iter()
            .find(|r| r.name == "tangential.determinant_identity")
            .unwrap();
        assert!(!det.passed);
    }

    #[test]
    fn zero_tolerance_fails() {
        let report = run_checks(&CheckOptions {
            tolerance: Some(0.0),
            ..fast()
        });
        assert!(report.failures().any(|r| r.tolerance == Some(0.0)));
    }

    #[test]
    fn deterministic_text() {
        assert_eq!(run_checks(&fast()).to_text(), run_checks(&fast()).to_text());
    }
}
