//! Bessel functions of the first kind by power series, and their zeros.
//!
//! Used as an independent oracle for the radial eigenvalue solver: the
//! Dirichlet eigenvalues of the model operator on `(0, 1)` are `j_{ν,m}²`.

use crate::error::{domain, Error, Result};

/// Largest argument for which the series is evaluated; beyond it the
/// alternating terms cancel too much for double precision.
pub const SERIES_LIMIT: f64 = 25.0;

/// `Γ(ν+1)·(2/x)^ν·J_ν(x)`, which shares the positive zeros of `J_ν`.
pub fn reduced_bessel_j(nu: f64, x: f64) -> f64 {
    let z = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= z / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && kf > 0.5 * x {
            break;
        }
    }
    sum
}

/// The first `count` positive zeros of `J_ν`, located by a sign scan and
/// refined by bisection.
pub fn bessel_zeros(nu: f64, count: usize) -> Result<Vec<f64>> {
    if !(nu >= 0.0) {
        return domain(format!(
            "bessel_zeros: order must be non-negative, got {nu}"
        ));
    }
    let mut zeros = Vec::with_capacity(count);
    let step = 0.01;
    let mut a = step;
    let mut fa = reduced_bessel_j(nu, a);
    while zeros.len() < count {
        let b = a + step;
        if b > SERIES_LIMIT {
            return Err(Error::Numerical(format!(
                "bessel_zeros: zero {} of J_{nu} lies beyond the series range",
                zeros.len() + 1
            )));
        }
        let fb = reduced_bessel_j(nu, b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > 1e-15 * hi {
                let mid = 0.5 * (lo + hi);
                let fm = reduced_bessel_j(nu, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn tabulated_zeros() {
        let cases = [
            (0.0, 2.404_825_557_695_773),
            (1.0, 3.831_705_970_207_512),
            (2.0, 5.135_622_301_840_683),
            (0.0, 2.404_825_557_695_773),
        ];
        for (nu, j) in cases {
            let z = bessel_zeros(nu, 1).unwrap()[0];
            assert!((z - j).abs() < 1e-12, "nu={nu}: {z}");
        }
        let z1 = bessel_zeros(1.0, 2).unwrap();
        assert!((z1[1] - 7.015_586_669_815_619).abs() < 1e-12);
    }

    #[test]
    fn half_integer_order_is_sine() {
        // J_{1/2} ∝ sin(x)/√x.
        let z = bessel_zeros(0.5, 4).unwrap();
        for (m, v) in z.iter().enumerate() {
            assert!((v - (m + 1) as f64 * PI).abs() < 1e-10, "{v}");
        }
        // J_{3/2} zeros solve tan x = x.
        let j = bessel_zeros(1.5, 1).unwrap()[0];
        assert!((j.tan() - j).abs() < 1e-9);
    }

    #[test]
    fn zeros_increase_with_order() {
        let mut prev = 0.0;
        for k in 0..8 {
            let z = bessel_zeros(0.5 * k as f64, 1).unwrap()[0];
            assert!(z > prev);
            prev = z;
        }
    }

    #[test]
    fn negative_order_rejected() {
        assert!(bessel_zeros(-0.5, 1).is_err());
    }
}
