//! Finite element model of the radial operator `−(1−ε)∂ₓ² + (ν²−¼)/x²`
//! on `(0, 1)`.
//!
//! Piecewise linear hat functions vanishing at both ends discretize the
//! quadratic form, so the computed spectrum approximates the Friedrichs
//! extension. The `1/x²` element integrals are evaluated in closed form.

use serde::Serialize;

use crate::bessel::{bessel_zeros, SERIES_LIMIT};
use crate::error::{domain, Error, Result};
use crate::format::fmt17;
use crate::quadrature::GaussLegendre;
use crate::spectrum::{friedrichs_classification, CrossSectionSpectrum, DEDUP_TOL};
use crate::tangential::tangential_block_spectrum;
use crate::tridiag::{Pencil, SymTridiag};

pub const DEFAULT_GAMMA: f64 = 2.0;
pub const DEFAULT_MESH: usize = 4000;
/// Relative slack allowed above the sharp Hardy constant.
pub const HARDY_SLACK: f64 = 0.02;
/// Bisection steps of the Gårding search.
pub const GARDING_STEPS: usize = 40;
/// Value reported in place of `1⁻` by [`min_eps_margin`].
pub const EPS_CLAMP: f64 = 1.0 - 1e-6;

/// Trial space of the discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadialBasis {
    /// Hat functions vanishing at `x = 0` and `x = 1`.
    Hat,
    /// `u = x^a·w` with `w` piecewise linear, free at `x = 0` and vanishing at
    /// `x = 1`, where `x^a` is the Friedrichs branch at the tip.
    Weighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialModel {
    /// Indicial root; `None` when the potential lies below `−¼`.
    pub nu: Option<f64>,
    /// Coefficient `ν² − ¼` of `1/x²`.
    pub potential: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub basis: RadialBasis,
    /// Exponent `a` of the weight `x^a` (zero for hats).
    pub weight_exponent: f64,
    /// Nodes `x_0 = 0 < … < x_M = 1`.
    pub mesh: Vec<f64>,
    /// `(1−ε)∫u'² + (ν²−¼)∫u²/x²` on the trial space.
    pub stiffness: SymTridiag,
    /// `∫u²`.
    pub mass: SymTridiag,
    /// `∫u'²`; hat basis only.
    pub gradient: Option<SymTridiag>,
    /// `∫u²/x²`; hat basis only.
    pub inverse_square: Option<SymTridiag>,
}

/// Graded nodes `x_i = (i/M)^γ`.
pub fn graded_mesh(m: usize, gamma: f64) -> Vec<f64> {
    let mf = m as f64;
    (0..=m)
        .map(|i| {
            if i == m {
                1.0
            } else {
                (i as f64 / mf).powf(gamma)
            }
        })
        .collect()
}

fn check_mesh(m: usize, gamma: f64) -> Result<()> {
    if m < 16 {
        return domain(format!("radial model: M must be at least 16, got {m}"));
    }
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return domain(format!(
            "radial model: gamma must be at least 1, got {gamma}"
        ));
    }
    Ok(())
}

pub fn build_radial_model(nu: f64, epsilon: f64, m: usize, gamma: f64) -> Result<RadialModel> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return domain(format!(
            "radial model: nu must be finite and non-negative, got {nu}"
        ));
    }
    let mut model = RadialModel::with_potential(nu * nu - 0.25, epsilon, m, gamma)?;
    model.nu = Some(nu);
    Ok(model)
}

impl RadialModel {
    /// Model with an arbitrary `1/x²` coefficient, including values below
    /// the Hardy threshold `−¼`.
    ///
    /// The weighted basis is used when the effective indicial root
    /// `√(¼ + P/(1−ε))` lies in `[0, ½)`, where the tip behaviour `x^{ν+½}` is
    /// not Lipschitz and hat functions converge slowly (only logarithmically
    /// for `ν = 0`). Otherwise hats are used.
    pub fn with_potential(potential: f64, epsilon: f64, m: usize, gamma: f64) -> Result<Self> {
        let basis = match effective_root(potential, epsilon) {
            Some(nu) if nu < 0.5 => RadialBasis::Weighted,
            _ => RadialBasis::Hat,
        };
        Self::new(potential, epsilon, m, gamma, basis)
    }

    pub fn new(
        potential: f64,
        epsilon: f64,
        m: usize,
        gamma: f64,
        basis: RadialBasis,
    ) -> Result<Self> {
        check_mesh(m, gamma)?;
        if !(0.0..1.0).contains(&epsilon) {
            return domain(format!(
                "radial model: epsilon must lie in [0, 1), got {epsilon}"
            ));
        }
        if !potential.is_finite() {
            return domain("radial model: potential coefficient must be finite");
        }
        let mesh = graded_mesh(m, gamma);
        let nu = (potential >= -0.25).then(|| (potential + 0.25).sqrt());
        match basis {
            RadialBasis::Hat => {
                let (gradient, inverse_square, mass) = assemble_hats(&mesh);
                let stiffness = gradient
                    .scaled(1.0 - epsilon)
                    .axpy(potential, &inverse_square);
                Ok(Self {
                    nu,
                    potential,
                    epsilon,
                    gamma,
                    basis,
                    weight_exponent: 0.0,
                    mesh,
                    stiffness,
                    mass,
                    gradient: Some(gradient),
                    inverse_square: Some(inverse_square),
                })
            }
            RadialBasis::Weighted => {
                let Some(root) = effective_root(potential, epsilon) else {
                    return domain(format!(
                        "radial model: potential {potential} with epsilon {epsilon} is unbounded below; \
                         no weighted Friedrichs basis exists"
                    ));
                };
                let a = 0.5 + root;
                let (derivative, mass) = assemble_weighted(&mesh, 2.0 * a);
                Ok(Self {
                    nu,
                    potential,
                    epsilon,
                    gamma,
                    basis,
                    weight_exponent: a,
                    mesh,
                    stiffness: derivative.scaled(1.0 - epsilon),
                    mass,
                    gradient: None,
                    inverse_square: None,
                })
            }
        }
    }

    /// Number of elements `M`.
    pub fn elements(&self) -> usize {
        self.mesh.len() - 1
    }

    pub fn pencil(&self) -> Pencil {
        Pencil {
            stiffness: self.stiffness.clone(),
            mass: self.mass.clone(),
        }
    }
}

/// `√(¼ + P/(1−ε))` when real.
fn effective_root(potential: f64, epsilon: f64) -> Option<f64> {
    let q = 0.25 + potential / (1.0 - epsilon);
    (q >= 0.0).then(|| q.sqrt())
}

/// Element integrals `(∫φ_a²/x², ∫φ_aφ_b/x², ∫φ_b²/x²)` over `[a, a+h]`
/// for `a > 0`, where `φ_a` is the hat at `a` and `φ_b` the hat at `a+h`.
pub fn inverse_square_element(a: f64, h: f64) -> (f64, f64, f64) {
    let t = h / a;
    let scale = 1.0 / (a * t * t);
    if t < 0.1 {
        let aa = scale * series(2, 0, t);
        let ab = scale * series(1, 1, t);
        let bb = scale * series(0, 2, t);
        return (aa, ab, bb);
    }
    let w = 1.0 + t;
    let l = t.ln_1p();
    let bb = scale * (t - 2.0 * l + t / w);
    let ab = scale * ((w + 1.0) * l - 2.0 * t);
    let aa = scale * (w * t - 2.0 * w * l + t);
    (aa, ab, bb)
}

/// `∫₀ᵗ (t−s)^p s^q (1+s)^{−2} ds` by expanding `(1+s)^{−2}`.
fn series(p: i32, q: i32, t: f64) -> f64 {
    // ∫₀ᵗ (t−s)^p s^{q+j} ds = t^{p+q+j+1} · p!(q+j)!/(p+q+j+1)!
    let mut sum = 0.0;
    let mut tp = t.powi(p + q + 1);
    for j in 0..60 {
        let beta = beta_int(p, q + j);
        let term = (if j % 2 == 0 { 1.0 } else { -1.0 }) * (j + 1) as f64 * tp * beta;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        tp *= t;
    }
    sum
}

/// `p! r! / (p + r + 1)!`.
fn beta_int(p: i32, r: i32) -> f64 {
    let mut v = 1.0 / (r + 1) as f64;
    for k in 1..=p {
        v *= k as f64 / (r + 1 + k) as f64;
    }
    v
}

/// Gradient, `1/x²` and mass matrices on the interior nodes of `mesh`.
fn assemble_hats(mesh: &[f64]) -> (SymTridiag, SymTridiag, SymTridiag) {
    let n = mesh.len() - 2;
    let mut g = SymTridiag::zeros(n);
    let mut v = SymTridiag::zeros(n);
    let mut m = SymTridiag::zeros(n);
    for e in 0..mesh.len() - 1 {
        let (a, b) = (mesh[e], mesh[e + 1]);
        let h = b - a;
        // Interior unknown indices of the left and right nodes.
        let left = e.checked_sub(1).filter(|_| e >= 1);
        let right = (e < n).then_some(e);
        let (vaa, vab, vbb) = if e == 0 {
            (0.0, 0.0, 1.0 / b)
        } else {
            inverse_square_element(a, h)
        };
        if let Some(i) = left {
            g.diag[i] += 1.0 / h;
            v.diag[i] += vaa;
            m.diag[i] += h / 3.0;
        }
        if let Some(j) = right {
            g.diag[j] += 1.0 / h;
            v.diag[j] += vbb;
            m.diag[j] += h / 3.0;
        }
        if let (Some(i), Some(_)) = (left, right) {
            g.off[i] -= 1.0 / h;
            v.off[i] += vab;
            m.off[i] += h / 6.0;
        }
    }
    (g, v, m)
}

/// `∫x^p w'²` and `∫x^p w²` for piecewise linear `w` on nodes `0..M−1`
/// (free at the tip, zero at `x = 1`).
fn assemble_weighted(mesh: &[f64], p: f64) -> (SymTridiag, SymTridiag) {
    let n = mesh.len() - 1;
    let mut s = SymTridiag::zeros(n);
    let mut m = SymTridiag::zeros(n);
    let rule = GaussLegendre::new(16);
    for e in 0..n {
        let (x0, x1) = (mesh[e], mesh[e + 1]);
        let h = x1 - x0;
        // (∫x^p, ∫x^p φ_l², ∫x^p φ_l φ_r, ∫x^p φ_r²)
        let (w0, ll, lr, rr) = if e == 0 {
            // Exact: ∫₀^{x₁} x^p (1−x/x₁)^i (x/x₁)^j dx = x₁^{p+1} B(p+j+1, i+1).
            let c = x1.powf(p + 1.0);
            let al = p + 1.0;
            (
                c / al,
                c * 2.0 / (al * (al + 1.0) * (al + 2.0)),
                c / ((al + 1.0) * (al + 2.0)),
                c / (al + 2.0),
            )
        } else {
            let f = |g: &dyn Fn(f64) -> f64| {
                h * rule.integrate(0.0, 1.0, |u| (x0 + h * u).powf(p) * g(u))
            };
            (
                f(&|_| 1.0),
                f(&|u| (1.0 - u) * (1.0 - u)),
                f(&|u| (1.0 - u) * u),
                f(&|u| u * u),
            )
        };
        let d = w0 / (h * h);
        s.diag[e] += d;
        m.diag[e] += ll;
        if e + 1 < n {
            s.diag[e + 1] += d;
            s.off[e] -= d;
            m.diag[e + 1] += rr;
            m.off[e] += lr;
        }
    }
    (s, m)
}

/// The `k` smallest eigenvalues of the model pencil.
pub fn friedrichs_eigenvalues(model: &RadialModel, k: usize) -> Result<Vec<f64>> {
    let size = model.elements() - 1;
    if k == 0 || k > size {
        return domain(format!(
            "friedrichs_eigenvalues: k = {k} outside 1..={size}"
        ));
    }
    model.pencil().smallest_eigenvalues(k)
}

/// Smallest eigenvalue of the model with the given potential and deflation.
pub fn ground_state(potential: f64, epsilon: f64, m: usize, gamma: f64) -> Result<f64> {
    Ok(friedrichs_eigenvalues(
        &RadialModel::with_potential(potential, epsilon, m, gamma)?,
        1,
    )?[0])
}

/// `4/(n−1)²`, the sharp constant for `∫u²x^{n−2} ≤ C∫(u')²xⁿ`.
pub fn hardy_bound(n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("hardy: n must be at least 2, got {n}"));
    }
    let d = n as f64 - 1.0;
    Ok(4.0 / (d * d))
}

/// Weighted forms `A = ∫x^{n−2}φᵢφⱼ` and `B = ∫xⁿφᵢ'φⱼ'` on the hats at
/// nodes `1..=j`, where `j` is the last node whose hat support stays in `(0, ½]`.
pub fn hardy_forms(n: usize, mesh: &[f64]) -> Result<(SymTridiag, SymTridiag)> {
    hardy_bound(n)?;
    let last = mesh.iter().rposition(|&x| x <= 0.5).unwrap_or(0);
    let nodes = last.saturating_sub(1);
    if nodes == 0 {
        return domain("hardy: mesh has no hat function supported in (0, 1/2]");
    }
    let rule = GaussLegendre::new(8);
    let nf = n as i32;
    let mut a = SymTridiag::zeros(nodes);
    let mut b = SymTridiag::zeros(nodes);
    for e in 0..=nodes {
        let (x0, x1) = (mesh[e], mesh[e + 1]);
        let h = x1 - x0;
        let wa = |f: &dyn Fn(f64) -> f64| rule.integrate(x0, x1, f);
        let left = (e >= 1).then(|| e - 1);
        let right = (e < nodes).then_some(e);
        let pl = |x: f64| (x1 - x) / h;
        let pr = |x: f64| (x - x0) / h;
        let deriv = wa(&|x| x.powi(nf)) / (h * h);
        if let Some(i) = left {
            a.diag[i] += wa(&|x| x.powi(nf - 2) * pl(x) * pl(x));
            b.diag[i] += deriv;
        }
        if let Some(j) = right {
            a.diag[j] += wa(&|x| x.powi(nf - 2) * pr(x) * pr(x));
            b.diag[j] += deriv;
        }
        if let (Some(i), Some(_)) = (left, right) {
            a.off[i] += wa(&|x| x.powi(nf - 2) * pl(x) * pr(x));
            b.off[i] -= deriv;
        }
    }
    Ok((a, b))
}

/// Supremum of `∫u²x^{n−2} / ∫(u')²xⁿ` over mesh functions supported in `(0, ½]`.
pub fn hardy_quotient(n: usize, m: usize, gamma: f64) -> Result<f64> {
    check_mesh(m, gamma)?;
    let (a, b) = hardy_forms(n, &graded_mesh(m, gamma))?;
    let theta = Pencil::new(b, a)?.eigenvalue(0)?;
    if !(theta > 0.0) {
        return Err(Error::Numerical(format!(
            "hardy: non-positive gradient form eigenvalue {theta}"
        )));
    }
    Ok(1.0 / theta)
}

/// Rayleigh quotient of a given coefficient vector on the forms of [`hardy_forms`].
pub fn hardy_rayleigh(a: &SymTridiag, b: &SymTridiag, u: &[f64]) -> f64 {
    a.quadratic(u) / b.quadratic(u)
}

/// Largest `ε₁ ∈ [0, 1)` such that `K − ε₁G` stays positive on the
/// complement of the first `kernel_dim` modes, and the minimum eigenvalue there.
pub fn garding_constants(
    stiffness_full: &SymTridiag,
    gradient_form: &SymTridiag,
    mass: &SymTridiag,
    kernel_dim: usize,
) -> Result<(f64, f64)> {
    let min_eig = |eps: f64| -> Result<f64> {
        Pencil::new(stiffness_full.axpy(-eps, gradient_form), mass.clone())?.eigenvalue(kernel_dim)
    };
    let at_zero = min_eig(0.0)?;
    if !(at_zero > 0.0) {
        return Err(Error::BoundViolation(format!(
            "garding: operator not positive on the kernel complement (min eigenvalue {at_zero:e})"
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut eps2 = at_zero;
    for _ in 0..GARDING_STEPS {
        let mid = 0.5 * (lo + hi);
        let e = min_eig(mid)?;
        if e > 0.0 {
            lo = mid;
            eps2 = e;
        } else {
            hi = mid;
        }
    }
    Ok((lo, eps2))
}

/// Largest deflation `ε*` keeping `(C + (n−1)²/4 − ¼)/(1−ε) ≥ −¼`,
/// i.e. `min(4C + (n−1)², 1⁻)`.
pub fn min_eps_margin(c: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("min_eps_margin: n must be at least 2, got {n}"));
    }
    let d = n as f64 - 1.0;
    let threshold = -d * d / 4.0 + 0.25;
    if !(c > threshold) {
        return domain(format!(
            "min_eps_margin: C = {c} is not above the threshold {threshold}"
        ));
    }
    Ok((4.0 * c + d * d).min(EPS_CLAMP))
}

/// One eigenvalue of the merged model cone spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeEigenvalue {
    /// Tangential eigenvalue of the mode.
    pub lambda: f64,
    pub nu: f64,
    /// 1-based index within the mode.
    pub index: usize,
    pub eigenvalue: f64,
    /// `j_{ν,m}²` when available.
    pub oracle: Option<f64>,
}

impl ModeEigenvalue {
    pub fn rel_error(&self) -> Option<f64> {
        self.oracle.map(|o| (self.eigenvalue - o).abs() / o)
    }
}

/// Radial spectra for the lowest `modes` distinct tangential eigenvalues of
/// the link, merged and sorted.
pub fn model_cone_spectrum(
    spectrum: &CrossSectionSpectrum,
    modes: usize,
    per_mode: usize,
    m: usize,
    gamma: f64,
) -> Result<Vec<ModeEigenvalue>> {
    let mut lambdas = tangential_block_spectrum(spectrum)?;
    // The PSD boundary block has a zero eigenvalue that arrives as ±1e−16.
    for l in lambdas.iter_mut() {
        if l.abs() <= DEDUP_TOL {
            *l = 0.0;
        }
    }
    lambdas.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
    lambdas.truncate(modes);
    model_cone_spectrum_from(&lambdas, spectrum.n, per_mode, m, gamma)
}

/// As [`model_cone_spectrum`], from explicit tangential eigenvalues.
pub fn model_cone_spectrum_from(
    lambdas: &[f64],
    n: usize,
    per_mode: usize,
    m: usize,
    gamma: f64,
) -> Result<Vec<ModeEigenvalue>> {
    let mut out = Vec::new();
    for &lambda in lambdas {
        let nu = friedrichs_classification(lambda, n)?.nu;
        out.extend(mode_eigenvalues(lambda, nu, per_mode, m, gamma)?);
    }
    out.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
    Ok(out)
}

/// Radial eigenvalues of a single mode with oracle values attached.
pub fn mode_eigenvalues(
    lambda: f64,
    nu: f64,
    count: usize,
    m: usize,
    gamma: f64,
) -> Result<Vec<ModeEigenvalue>> {
    let model = build_radial_model(nu, 0.0, m, gamma)?;
    let values = friedrichs_eigenvalues(&model, count)?;
    let zeros = bessel_oracle(nu, count);
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, eigenvalue)| ModeEigenvalue {
            lambda,
            nu,
            index: i + 1,
            eigenvalue,
            oracle: zeros.get(i).map(|z| z * z),
        })
        .collect())
}

/// Bessel zeros within the reliable series range; may return fewer than asked.
fn bessel_oracle(nu: f64, count: usize) -> Vec<f64> {
    let mut zeros = Vec::new();
    for k in (1..=count).rev() {
        if let Ok(z) = bessel_zeros(nu, k) {
            zeros = z;
            break;
        }
    }
    zeros.retain(|&z| z < SERIES_LIMIT);
    zeros
}

pub fn radial_tsv(rows: &[ModeEigenvalue]) -> String {
    let mut out = String::from("lambda\tnu\tm\teigenvalue\toracle\trel_error\n");
    let opt = |x: Option<f64>| x.map_or_else(|| "nan".to_string(), fmt17);
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            fmt17(r.lambda),
            fmt17(r.nu),
            r.index,
            fmt17(r.eigenvalue),
            opt(r.oracle),
            opt(r.rel_error()),
        ));
    }
    out
}
