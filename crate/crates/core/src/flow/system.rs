//! The surrogate operator, quadratic nonlinearity and manifold chart.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{FlowConfig, Tier};
use crate::error::{Error, Result};

/// Tolerance for `L·kernel_basis = 0`.
pub const KERNEL_TOL: f64 = 1e-12;
/// Random unit samples used to certify the quadratic bounds.
pub const Q_SAMPLES: usize = 10_000;

/// Spectral data of a symmetric PSD operator, `L = V diag(values) Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Semigroup {
    pub vectors: DMatrix<f64>,
    pub values: DVector<f64>,
}

impl Semigroup {
    pub fn from_operator(l: &DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(l.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vectors =
            DMatrix::from_fn(l.nrows(), l.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
        let values = DVector::from_fn(order.len(), |j, _| eig.eigenvalues[order[j]]);
        Self { vectors, values }
    }

    /// The same spectrum carried by `R L Rᵀ`.
    pub fn rotated(&self, r: &DMatrix<f64>) -> Self {
        Self {
            vectors: r * &self.vectors,
            values: self.values.clone(),
        }
    }

    pub fn operator(&self) -> DMatrix<f64> {
        &self.vectors * DMatrix::from_diagonal(&self.values) * self.vectors.transpose()
    }

    /// `e^{−tL} v`.
    pub fn apply(&self, t: f64, v: &DVector<f64>) -> DVector<f64> {
        let mut c = self.vectors.tr_mul(v);
        for (x, l) in c.iter_mut().zip(self.values.iter()) {
            *x *= (-t * l).exp();
        }
        &self.vectors * c
    }

    /// Operator norm of `e^{−tL}` on the span of eigenvectors `from..`.
    pub fn restricted_norm(&self, t: f64, from: usize) -> f64 {
        self.values
            .iter()
            .skip(from)
            .map(|l| (-t * l).exp())
            .fold(0.0, f64::max)
    }
}

/// Symmetric bilinear map `Q(ω)_i = ωᵀ T_i ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticMap {
    pub tensor: Vec<DMatrix<f64>>,
    /// Certified constant: `‖Q(ω)‖ ≤ c̃‖ω‖²`.
    pub c_tilde: f64,
}

impl QuadraticMap {
    pub fn zero(m: usize, c_tilde: f64) -> Self {
        Self {
            tensor: vec![DMatrix::zeros(m, m); m],
            c_tilde,
        }
    }

    /// Random symmetric tensor scaled so that `√(Σ‖T_i‖₂²) = c̃`, which
    /// bounds `‖Q(ω)‖/‖ω‖²`.
    pub fn random(m: usize, c_tilde: f64, rng: &mut ChaCha8Rng) -> Self {
        let mut tensor: Vec<DMatrix<f64>> = (0..m)
            .map(|_| {
                let a = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
                (&a + a.transpose()) * 0.5
            })
            .collect();
        let s: f64 = tensor
            .iter()
            .map(|t| spectral_norm_sym(t).powi(2))
            .sum::<f64>()
            .sqrt();
        for t in tensor.iter_mut() {
            *t *= c_tilde / s;
        }
        Self { tensor, c_tilde }
    }

    pub fn apply(&self, w: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.tensor.len(),
            self.tensor.iter().map(|t| w.dot(&(t * w))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(|t| t.iter().all(|&x| x == 0.0))
    }

    /// Checks both quadratic bounds on random samples; returns the largest
    /// observed ratios `(‖Q(ω)‖/‖ω‖², ‖Q(ω)−Q(ω′)‖/(2 max‖·‖ ‖ω−ω′‖))`.
    pub fn verify(&self, samples: usize, rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
        let m = self.tensor.len();
        let (mut worst_size, mut worst_lip) = (0.0f64, 0.0f64);
        for _ in 0..samples {
            let w = unit_vector(m, rng);
            let r: f64 = rng.random();
            let w2 = unit_vector(m, rng) * r;
            worst_size = worst_size.max(self.apply(&w).norm());
            let diff = (&w - &w2).norm();
            if diff > 0.0 {
                let lhs = (self.apply(&w) - self.apply(&w2)).norm();
                worst_lip = worst_lip.max(lhs / (2.0 * w.norm().max(w2.norm()) * diff));
            }
        }
        let slack = 1.0 + 1e-12;
        if worst_size > self.c_tilde * slack || worst_lip > self.c_tilde * slack {
            return Err(Error::BoundViolation(format!(
                "quadratic map exceeds its certified constant {}: size ratio {worst_size}, Lipschitz ratio {worst_lip}",
                self.c_tilde
            )));
        }
        Ok((worst_size, worst_lip))
    }
}

fn spectral_norm_sym(t: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(t.clone())
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
}

pub(crate) fn unit_vector(m: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let v = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let n = v.norm();
    v / n
}

pub(crate) fn random_orthogonal(m: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}

/// Manifold `h(k) = h₀ + E k + F ψ(k)` over kernel coordinates `k`, with
/// `ψ(k)_j = kᵀ B_j k` (all `B_j = 0` for the affine tier).
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub h0: DVector<f64>,
    /// Orthonormal kernel basis at `h₀` (`m × d`).
    pub kernel: DMatrix<f64>,
    /// Orthonormal complement (`m × (m−d)`).
    pub complement: DMatrix<f64>,
    pub quadratic: Vec<DMatrix<f64>>,
}

impl Chart {
    pub fn is_flat(&self) -> bool {
        self.quadratic.iter().all(|b| b.iter().all(|&x| x == 0.0))
    }

    pub fn dim(&self) -> usize {
        self.kernel.ncols()
    }

    pub fn psi(&self, k: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.quadratic.len(),
            self.quadratic.iter().map(|b| k.dot(&(b * k))),
        )
    }

    pub fn point(&self, k: &DVector<f64>) -> DVector<f64> {
        &self.h0 + &self.kernel * k + &self.complement * self.psi(k)
    }

    /// Tangent vectors `∂h/∂k` as columns.
    pub fn jacobian(&self, k: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim();
        let dpsi = DMatrix::from_fn(self.quadratic.len(), d, |j, i| {
            2.0 * (&self.quadratic[j] * k)[i]
        });
        &self.kernel + &self.complement * dpsi
    }

    /// Orthonormal tangent frame at `h(k)`, oriented to agree with the kernel basis.
    pub fn frame(&self, k: &DVector<f64>) -> DMatrix<f64> {
        let qr = self.jacobian(k).qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..q.ncols() {
            if r[(j, j)] < 0.0 {
                let mut col = q.column_mut(j);
                col *= -1.0;
            }
        }
        q
    }

    /// Sum of `‖B_j‖₂` squared, rooted: bounds the second derivative of `ψ`.
    pub fn curvature(&self) -> f64 {
        self.quadratic
            .iter()
            .map(|b| spectral_norm_sym(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Finite-dimensional stand-in for the linearized flow near a Ricci-flat metric.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateSystem {
    pub tier: Tier,
    pub dimension: usize,
    /// `L` at `h₀`.
    pub operator: DMatrix<f64>,
    pub semigroup: Semigroup,
    /// Orthonormal basis of `ker L`.
    pub kernel_basis: DMatrix<f64>,
    /// Smallest nonzero eigenvalue of `L`.
    pub alpha: f64,
    pub quadratic: QuadraticMap,
    pub chart: Chart,
    /// Bound on `‖Π(g) − h‖/‖g − h‖` assumed by the scheme.
    pub c_projection: f64,
    /// Bound on `‖e^{−tL}‖` assumed by the scheme.
    pub c_semigroup: f64,
    pub seed: u64,
}

impl SurrogateSystem {
    /// `max(c_projection, c_semigroup)`, the single constant of the estimates.
    pub fn c(&self) -> f64 {
        self.c_projection.max(self.c_semigroup)
    }

    pub fn c_tilde(&self) -> f64 {
        self.quadratic.c_tilde
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.ncols()
    }

    /// Builds and validates a system from its configuration.
    pub fn build(config: &FlowConfig) -> Result<Self> {
        config.validate()?;
        let m = config.dimension;
        let d = config.kernel_dim;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let basis = random_orthogonal(m, &mut rng);
        let mut values = vec![0.0; m];
        for (j, v) in values.iter_mut().enumerate().skip(d) {
            // α, then evenly spaced up to 3α.
            let s = (j - d) as f64 / (m - d).max(2) as f64;
            *v = config.alpha * (1.0 + 2.0 * s);
        }
        let semigroup = Semigroup {
            vectors: basis.clone(),
            values: DVector::from_vec(values),
        };
        let operator = semigroup.operator();
        let kernel_basis = basis.columns(0, d).into_owned();
        let complement = basis.columns(d, m - d).into_owned();
        let quadratic = if config.zero_quadratic {
            QuadraticMap::zero(m, config.c_tilde)
        } else {
            QuadraticMap::random(m, config.c_tilde, &mut rng)
        };
        let h0 = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let quadratic_chart = match config.tier {
            Tier::A => vec![DMatrix::zeros(d, d); m - d],
            Tier::B => {
                let mut bs: Vec<DMatrix<f64>> = (0..m - d)
                    .map(|_| {
                        let a = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
                        (&a + a.transpose()) * 0.5
                    })
                    .collect();
                let s: f64 = bs
                    .iter()
                    .map(|b| spectral_norm_sym(b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                for b in bs.iter_mut() {
                    *b *= config.curvature / s;
                }
                bs
            }
        };
        let chart = Chart {
            h0,
            kernel: kernel_basis.clone(),
            complement,
            quadratic: quadratic_chart,
        };
        let system = Self {
            tier: config.tier,
            dimension: m,
            operator,
            semigroup,
            kernel_basis,
            alpha: config.alpha,
            quadratic,
            chart,
            c_projection: config.c,
            c_semigroup: config.c_semigroup,
            seed: config.seed,
        };
        system.check_invariants()?;
        Ok(system)
    }

    /// `L·kernel_basis = 0`, `α` is the `(d+1)`-th eigenvalue and the
    /// semigroup constant covers `‖e^{−tL}‖ ≤ 1`.
    pub fn check_invariants(&self) -> Result<()> {
        let residual = (&self.operator * &self.kernel_basis).abs().max();
        if residual > KERNEL_TOL {
            return Err(Error::Internal(format!(
                "L applied to the kernel basis leaves {residual:e}"
            )));
        }
        let d = self.kernel_dim();
        let eig = Semigroup::from_operator(&self.operator);
        let gap = eig.values[d];
        if (gap - self.alpha).abs() > 1e-10 * self.alpha.max(1.0) || eig.values[d - 1].abs() > 1e-10
        {
            return Err(Error::Internal(format!(
                "spectral gap {gap} does not match alpha {}",
                self.alpha
            )));
        }
        if self.c_semigroup < 1.0 {
            return Err(Error::Config(format!(
                "semigroup constant {} is below 1",
                self.c_semigroup
            )));
        }
        Ok(())
    }
}
