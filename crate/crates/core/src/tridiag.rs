//! Symmetric tridiagonal matrices and the generalized eigenproblem
//! `K v = θ M v` with `M` positive definite.
//!
//! Eigenvalues are located by bisection on the Sylvester inertia of
//! `K − θM` (count of negative pivots in its `LDLᵀ` factorization) and the
//! vectors are recovered by inverse iteration.

use crate::error::{domain, Error, Result};

/// Relative width at which eigenvalue bisection stops.
pub const BISECTION_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return domain(format!(
                "tridiagonal: {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            ));
        }
        Ok(Self { diag, off })
    }

    pub fn from_diagonal(diag: Vec<f64>) -> Self {
        let off = vec![0.0; diag.len().saturating_sub(1)];
        Self { diag, off }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_diagonal(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    pub fn quadratic(&self, x: &[f64]) -> f64 {
        dot(x, &self.matvec(x))
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &SymTridiag) -> SymTridiag {
        SymTridiag {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a + s * b)
                .collect(),
            off: self
                .off
                .iter()
                .zip(&other.off)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> SymTridiag {
        SymTridiag {
            diag: self.diag.iter().map(|a| s * a).collect(),
            off: self.off.iter().map(|a| s * a).collect(),
        }
    }

    /// Rows and columns `range`, as a new matrix.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SymTridiag {
        let off_end = range.end.saturating_sub(1).max(range.start);
        SymTridiag {
            diag: self.diag[range.clone()].to_vec(),
            off: self.off[range.start..off_end].to_vec(),
        }
    }

    fn inf_norm(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let r = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + l + r
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Generalized pencil `(K, M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub stiffness: SymTridiag,
    pub mass: SymTridiag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// `M`-orthonormal eigenvectors, one per value.
    pub vectors: Vec<Vec<f64>>,
}

impl Pencil {
    pub fn new(stiffness: SymTridiag, mass: SymTridiag) -> Result<Self> {
        if stiffness.len() != mass.len() {
            return domain("pencil: stiffness and mass sizes differ");
        }
        let p = Self { stiffness, mass };
        if p.mass.diag.iter().any(|&d| !(d > 0.0)) || p.inertia_of(&p.mass, 0.0, &p.mass) != 0 {
            return domain("pencil: mass matrix is not positive definite");
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.stiffness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stiffness.is_empty()
    }

    /// Number of eigenvalues strictly below `theta`.
    pub fn count_below(&self, theta: f64) -> usize {
        self.inertia_of(&self.stiffness, theta, &self.mass)
    }

    fn inertia_of(&self, k: &SymTridiag, theta: f64, m: &SymTridiag) -> usize {
        let scale = k.inf_norm() + theta.abs() * m.inf_norm();
        let guard = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        let n = k.len();
        let mut negatives = 0;
        let mut pivot = 0.0;
        for i in 0..n {
            let a = k.diag[i] - theta * m.diag[i];
            pivot = if i == 0 {
                a
            } else {
                let b = k.off[i - 1] - theta * m.off[i - 1];
                a - b * b / pivot
            };
            if pivot == 0.0 {
                pivot = -guard;
            }
            if pivot < 0.0 {
                negatives += 1;
            }
        }
        negatives
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.len() {
            return domain(format!(
                "eigenvalue index {index} out of range for size {}",
                self.len()
            ));
        }
        let (mut lo, mut hi) = self.bracket(index)?;
        for _ in 0..2000 {
            let width = hi - lo;
            if width <= BISECTION_REL_TOL * lo.abs().min(hi.abs()) || width <= f64::MIN_POSITIVE {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Interval `[lo, hi)` with `count_below(lo) ≤ index < count_below(hi)`.
    fn bracket(&self, index: usize) -> Result<(f64, f64)> {
        let ratio = self.stiffness.inf_norm()
            / self.mass.diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut step = ratio.max(1.0);
        let mut lo = -step;
        while self.count_below(lo) > index {
            step *= 2.0;
            lo = -step;
            if !lo.is_finite() {
                return Err(Error::Numerical("pencil: no finite lower bracket".into()));
            }
        }
        let mut hi = step;
        while self.count_below(hi) <= index {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Numerical("pencil: no finite upper bracket".into()));
            }
        }
        Ok((lo, hi))
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub fn smallest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k == 0 || k > self.len() {
            return domain(format!(
                "requested {k} eigenvalues of a size-{} pencil",
                self.len()
            ));
        }
        (0..k).map(|i| self.eigenvalue(i)).collect()
    }

    /// The `k` smallest eigenpairs, vectors normalized in the `M` inner product.
    pub fn smallest_eigenpairs(&self, k: usize) -> Result<Eigenpairs> {
        let values = self.smallest_eigenvalues(k)?;
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        for (i, &theta) in values.iter().enumerate() {
            let mut v = self.inverse_iteration(theta, i)?;
            // Orthogonalize against earlier vectors with nearly equal values.
            for (j, u) in vectors.iter().enumerate() {
                if (values[j] - theta).abs() <= 1e-8 * theta.abs().max(1.0) {
                    let c = dot(u, &self.mass.matvec(&v));
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= c * y;
                    }
                }
            }
            self.normalize(&mut v);
            vectors.push(v);
        }
        Ok(Eigenpairs { values, vectors })
    }

    pub fn m_norm(&self, v: &[f64]) -> f64 {
        self.mass.quadratic(v).max(0.0).sqrt()
    }

    fn normalize(&self, v: &mut [f64]) {
        let s = self.m_norm(v);
        for x in v.iter_mut() {
            *x /= s;
        }
        // Fix the sign so the largest component is positive.
        let big = v
            .iter()
            .cloned()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if big < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }

    fn inverse_iteration(&self, theta: f64, seed: usize) -> Result<Vec<f64>> {
        let n = self.len();
        let shift = theta + 1e-10 * theta.abs().max(1e-3);
        let shifted = self.stiffness.axpy(-shift, &self.mass);
        let lu = TridiagLu::factor(&shifted.off, &shifted.diag, &shifted.off)?;
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + ((i * 7 + seed * 13) % 17) as f64 / 17.0)
            .collect();
        for _ in 0..4 {
            let rhs = self.mass.matvec(&v);
            v = lu.solve(&rhs);
            self.normalize(&mut v);
        }
        Ok(v)
    }
}

/// LU factorization of a general tridiagonal matrix with partial pivoting.
#[derive(Debug, Clone)]
pub struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    /// `lower[i]` is entry `(i+1, i)`, `upper[i]` is entry `(i, i+1)`.
    pub fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut dl = lower.to_vec();
        let mut d = diag.to_vec();
        let mut du = upper.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let scale = diag
            .iter()
            .chain(lower)
            .chain(upper)
            .fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
                }
                let f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - f * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(
                "tridiagonal factorization produced non-finite pivots".into(),
            ));
        }
        Ok(Self {
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.dl[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * b[i + 2];
            }
            b[i] = s / self.d[i];
        }
        b
    }
}

/// Solves a symmetric tridiagonal system.
pub fn solve_sym(a: &SymTridiag, rhs: &[f64]) -> Result<Vec<f64>> {
    Ok(TridiagLu::factor(&a.off, &a.diag, &a.off)?.solve(rhs))
}
