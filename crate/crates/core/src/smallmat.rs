//! Closed-form linear algebra for symmetric matrices of size at most three.

use std::f64::consts::PI;

/// Symmetric matrix of dimension 1, 2 or 3 stored in a fixed 3×3 array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallSym {
    dim: usize,
    a: [[f64; 3]; 3],
}

impl SmallSym {
    /// Builds from the leading `dim × dim` block of `a`; the rest is zeroed.
    pub fn new(dim: usize, a: [[f64; 3]; 3]) -> Self {
        assert!((1..=3).contains(&dim), "SmallSym dimension must be 1..=3");
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate().take(dim) {
            row[..dim].copy_from_slice(&a[i][..dim]);
        }
        Self { dim, a: m }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut a = [[0.0; 3]; 3];
        for (i, &x) in d.iter().enumerate() {
            a[i][i] = x;
        }
        Self::new(d.len(), a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.a[i][..self.dim].to_vec())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.rows()
            .iter()
            .flatten()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Largest `|a_ij − a_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..i {
                worst = worst.max((self.a[i][j] - self.a[j][i]).abs());
            }
        }
        worst / self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// Keeps only the listed rows and columns, in order.
    pub fn select(&self, keep: &[usize]) -> Option<Self> {
        if keep.is_empty() {
            return None;
        }
        let mut a = [[0.0; 3]; 3];
        for (r, &i) in keep.iter().enumerate() {
            for (c, &j) in keep.iter().enumerate() {
                a[r][c] = self.a[i][j];
            }
        }
        Some(Self::new(keep.len(), a))
    }

    pub fn det(&self) -> f64 {
        det(&self.a, self.dim)
    }

    /// Determinant of the leading `k × k` block.
    pub fn leading_minor(&self, k: usize) -> f64 {
        det(&self.a, k)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let a = &self.a;
        match self.dim {
            1 => vec![a[0][0]],
            2 => {
                let mean = 0.5 * (a[0][0] + a[1][1]);
                let half_diff = 0.5 * (a[0][0] - a[1][1]);
                let r = half_diff.hypot(a[0][1]);
                let hi = mean + r.copysign(mean);
                // Product form for the eigenvalue prone to cancellation.
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                let lo = if hi != 0.0 { det / hi } else { mean - r };
                let mut v = vec![lo, hi];
                v.sort_by(f64::total_cmp);
                v
            }
            _ => sym3_eigenvalues(a),
        }
    }
}

fn det(a: &[[f64; 3]; 3], k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => {
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        }
    }
}

/// Trigonometric solution of the characteristic cubic, refined by a few
/// Newton steps on `det(A − θI)`.
fn sym3_eigenvalues(a: &[[f64; 3]; 3]) -> Vec<f64> {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let mut eig = if p1 == 0.0 {
        vec![a[0][0], a[1][1], a[2][2]]
    } else {
        let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
        let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let mut b = *a;
        for (i, row) in b.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (*x - if i == j { q } else { 0.0 }) / p;
            }
        }
        let r = (det(&b, 3) / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
        vec![e1, 3.0 * q - e1 - e3, e3]
    };
    let scale = a.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    for e in eig.iter_mut() {
        for _ in 0..3 {
            let mut s = *a;
            for (i, row) in s.iter_mut().enumerate() {
                row[i] -= *e;
            }
            let f = det(&s, 3);
            // d/dθ det(A − θI) = −(sum of principal 2×2 minors)
            let df = -((s[1][1] * s[2][2] - s[1][2] * s[2][1])
                + (s[0][0] * s[2][2] - s[0][2] * s[2][0])
                + (s[0][0] * s[1][1] - s[0][1] * s[1][0]));
            if df.abs() <= 1e-14 * scale * scale {
                break;
            }
            let step = f / df;
            if !step.is_finite() || step.abs() > 1e-6 * scale {
                break;
            }
            *e -= step;
        }
    }
    eig.sort_by(f64::total_cmp);
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let m = SmallSym::new(2, [[1.0, -1.0, 0.0], [-1.0, 3.0, 0.0], [0.0; 3]]);
        let e = m.eigenvalues();
        assert!((e[0] - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((e[1] - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn three_by_three_known() {
        // Tridiagonal (2,-1) Toeplitz: eigenvalues 2 − 2cos(kπ/4).
        let m = SmallSym::new(3, [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]);
        let e = m.eigenvalues();
        for (k, v) in e.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / 4.0).cos();
            assert!((v - exact).abs() < 1e-14, "{v} vs {exact}");
        }
        assert!((m.det() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn singular_three_by_three() {
        // Rank one: u uᵀ with u = (1,2,3).
        let u = [1.0, 2.0, 3.0];
        let mut a = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = u[i] * u[j];
            }
        }
        let e = SmallSym::new(3, a).eigenvalues();
        assert!(e[0].abs() < 1e-13 && e[1].abs() < 1e-13);
        assert!((e[2] - 14.0).abs() < 1e-13);
    }

    #[test]
    fn select_and_minors() {
        let m = SmallSym::new(3, [[1.0, 2.0, 0.0], [2.0, 5.0, 1.0], [0.0, 1.0, 4.0]]);
        assert_eq!(m.leading_minor(1), 1.0);
        assert_eq!(m.leading_minor(2), 1.0);
        let s = m.select(&[1, 2]).unwrap();
        assert_eq!(s.rows(), vec![vec![5.0, 1.0], vec![1.0, 4.0]]);
        assert!(m.select(&[]).is_none());
    }
}
