use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::system::{unit_vector, Semigroup, SurrogateSystem};
use crate::error::{Error, Result};

/// Gauss–Newton iteration cap.
const GN_MAX_ITER: usize = 100;
/// Orthogonality residual at which Gauss–Newton stops.
const GN_TOL: f64 = 1e-14;
/// Inflation applied to sampled Lipschitz ratios.
pub const CERTIFY_INFLATION: f64 = 1.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub point: DVector<f64>,
    /// Chart coordinates of `point`.
    pub coords: DVector<f64>,
    /// Orthonormal frame of `ker L_h` at `point`.
    pub frame: DMatrix<f64>,
    pub iterations: usize,
    /// `max_i |⟨g − Π(g), e_i⟩|`.
    pub residual: f64,
}

/// `Π(g)`: the point `h` on the manifold with `g − h ⟂ ker L_h`.
pub fn project_to_manifold(system: &SurrogateSystem, g: &DVector<f64>) -> Result<Projection> {
    let chart = &system.chart;
    let mut k = chart.kernel.tr_mul(&(g - &chart.h0));
    if chart.is_flat() {
        let point = chart.point(&k);
        let residual = chart.kernel.tr_mul(&(g - &point)).amax();
        return Ok(Projection {
            point,
            coords: k,
            frame: chart.kernel.clone(),
            iterations: 0,
            residual,
        });
    }
    let scale = g.norm().max(1.0);
    for it in 1..=GN_MAX_ITER {
        let r = g - chart.point(&k);
        let j = chart.jacobian(&k);
        let frame = chart.frame(&k);
        let residual = frame.tr_mul(&r).amax();
        if residual <= GN_TOL * scale {
            return Ok(Projection {
                point: chart.point(&k),
                coords: k,
                frame,
                iterations: it - 1,
                residual,
            });
        }
        let jtj = j.tr_mul(&j);
        let step = jtj
            .cholesky()
            .ok_or_else(|| Error::Domain("projection: degenerate chart Jacobian".into()))?
            .solve(&j.tr_mul(&r));
        k += &step;
        if !k.iter().all(|x| x.is_finite()) {
            break;
        }
    }
    // Accept a stalled iteration only if the first-order condition holds.
    let r = g - chart.point(&k);
    let frame = chart.frame(&k);
    let residual = frame.tr_mul(&r).amax();
    if residual <= 1e-12 * scale {
        return Ok(Projection {
            point: chart.point(&k),
            coords: k,
            frame,
            iterations: GN_MAX_ITER,
            residual,
        });
    }
    Err(Error::Domain(format!(
        "projection: Gauss-Newton did not converge in {GN_MAX_ITER} iterations; point outside the chart radius \
         (residual {residual:e})"
    )))
}

/// Orthogonal `R` with `R E = Q_h`: the polar factor of
/// `Q_h Eᵀ + (I − Q_hQ_hᵀ)(I − EEᵀ)`.
pub fn polar_transport(kernel: &DMatrix<f64>, frame: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = kernel.nrows();
    let id = DMatrix::<f64>::identity(m, m);
    let a = frame * kernel.transpose()
        + (&id - frame * frame.transpose()) * (&id - kernel * kernel.transpose());
    let svd = a.svd(true, true);
    if svd.singular_values.min() < 1e-8 {
        return Err(Error::Domain(
            "transport: frame is too far from the kernel to transport".into(),
        ));
    }
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    Ok(u * vt)
}

/// Spectral data of `L_h = R L Rᵀ` for the frame at `h`.
pub fn transported_semigroup(system: &SurrogateSystem, frame: &DMatrix<f64>) -> Result<Semigroup> {
    if system.chart.is_flat() {
        return Ok(system.semigroup.clone());
    }
    let r = polar_transport(&system.kernel_basis, frame)?;
    Ok(system.semigroup.rotated(&r))
}

/// Largest sampled `‖Π(g) − h‖/‖g − h‖` over `h` on the manifold and `g`
/// near it, both within `radius` of `h₀`, inflated by [`CERTIFY_INFLATION`].
pub fn certify_projection_constant(
    system: &SurrogateSystem,
    samples: usize,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    Ok(sample_projection_ratio(system, samples, radius, rng)? * CERTIFY_INFLATION)
}

/// The uninflated sample maximum behind [`certify_projection_constant`].
pub fn sample_projection_ratio(
    system: &SurrogateSystem,
    samples: usize,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let chart = &system.chart;
    let d = chart.dim();
    let m = system.dimension;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let k1 = unit_vector(d, rng) * (radius * rng.random::<f64>());
        let k2 = unit_vector(d, rng) * (radius * rng.random::<f64>());
        let offset = unit_vector(m, rng) * (radius * rng.random::<f64>());
        let g = chart.point(&k1) + offset;
        let h = chart.point(&k2);
        let denom = (&g - &h).norm();
        if denom == 0.0 {
            continue;
        }
        let p = project_to_manifold(system, &g)?;
        worst = worst.max((&p.point - &h).norm() / denom);
    }
    Ok(worst)
}
