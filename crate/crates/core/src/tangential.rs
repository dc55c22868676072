//! Tangential stability of a cone from the spectral data of its link.
//!
//! Trace-free symmetric 2-tensors over the link split into invariant blocks
//! of the tangential Lichnerowicz operator `□_L`:
//!
//! * `V1` — one TT eigentensor per `κ`; `□_L` acts as `κ`.
//! * `V3` — built from a coclosed 1-form with eigenvalue `μ`; a 2×2 form.
//! * `V4` — built from a function with Laplace eigenvalue `λ`; a 3×3 form.
//!
//! The forms are written in non-orthonormal bases, so each block is a
//! pencil `(form, gram)`. Its generalized eigenvalues are the eigenvalues of
//! `□_L` on the block.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::smallmat::SmallSym;
use crate::spectrum::{CrossSectionSpectrum, DEDUP_TOL};

/// Endpoint tolerance of the verdict's interval tests.
pub const ENDPOINT_TOL: f64 = 1e-9;

/// Relative size below which a Gram diagonal entry marks a vanishing basis tensor.
pub const GRAM_DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    V1,
    V3,
    V4,
}

impl std::fmt::Display for BlockKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BlockKind::V1 => "V1",
            BlockKind::V3 => "V3",
            BlockKind::V4 => "V4",
        })
    }
}

/// The constant term of the `(3,3)` entry of the V4 matrix.
///
/// The two printed versions disagree; `MatrixEntry` is the one the minor
/// computation is consistent with. `SignFlipped` is a deliberate mutation
/// used to check that the determinant identity catches a wrong constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum A33Variant {
    /// `n{(n+1)λ − 2(n−1) − ε(n+1) + 2n(n+3)}`
    #[default]
    MatrixEntry,
    /// `n{(n+1)λ − 2(n+1)} + 2n²(n+3) − εn(n+1)`
    ScalarProduct,
    /// `n{(n+1)λ + 2(n−1) − ε(n+1) + 2n(n+3)}`
    SignFlipped,
}

impl A33Variant {
    pub fn a33(self, lambda: f64, n: f64, epsilon: f64) -> f64 {
        match self {
            A33Variant::MatrixEntry => {
                n * ((n + 1.0) * lambda - 2.0 * (n - 1.0) - epsilon * (n + 1.0)
                    + 2.0 * n * (n + 3.0))
            }
            A33Variant::ScalarProduct => {
                n * ((n + 1.0) * lambda - 2.0 * (n + 1.0)) + 2.0 * n * n * (n + 3.0)
                    - epsilon * n * (n + 1.0)
            }
            A33Variant::SignFlipped => {
                n * ((n + 1.0) * lambda + 2.0 * (n - 1.0) - epsilon * (n + 1.0)
                    + 2.0 * n * (n + 3.0))
            }
        }
    }
}

/// Quadratic form of `□_L − ε` on one invariant block, with the Gram matrix
/// of the basis it is written in.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm {
    pub kind: BlockKind,
    /// `κ` for V1, `μ` for V3, `λ` for V4.
    pub parameter: f64,
    pub n: usize,
    pub form_matrix: SmallSym,
    pub gram_matrix: SmallSym,
    pub epsilon: f64,
}

pub fn v1_form(kappa: f64, n: usize) -> BlockForm {
    BlockForm {
        kind: BlockKind::V1,
        parameter: kappa,
        n,
        form_matrix: SmallSym::diagonal(&[kappa]),
        gram_matrix: SmallSym::diagonal(&[1.0]),
        epsilon: 0.0,
    }
}

/// V3 block for a coclosed 1-form eigenvalue `μ ≥ n − 1`.
pub fn v3_form(mu: f64, n: usize) -> Result<BlockForm> {
    if n < 2 {
        return domain(format!("v3_form: n must be at least 2, got {n}"));
    }
    if !(mu > 0.0) {
        return domain(format!("v3_form: mu must be positive, got {mu}"));
    }
    let nf = n as f64;
    let a = mu - (nf - 1.0);
    // The h̃₁ norm ½(μ−(n−1)) presumes μ ≥ n−1.
    if a < -DEDUP_TOL {
        return domain(format!(
            "v3_form: mu = {mu} < n - 1 = {} gives a negative Gram entry",
            nf - 1.0
        ));
    }
    let a = a.max(0.0);
    let form = SmallSym::new(
        2,
        [
            [0.5 * a * a, -2.0 * a, 0.0],
            [-2.0 * a, 2.0 * mu + 2.0 * nf + 6.0, 0.0],
            [0.0; 3],
        ],
    );
    Ok(BlockForm {
        kind: BlockKind::V3,
        parameter: mu,
        n,
        form_matrix: form,
        gram_matrix: SmallSym::diagonal(&[0.5 * a, 2.0]),
        epsilon: 0.0,
    })
}

/// V4 block for a Laplace eigenvalue `λ`, shifted by `−ε·gram`.
pub fn v4_form(lambda: f64, n: usize, epsilon: f64) -> Result<BlockForm> {
    v4_form_with(lambda, n, epsilon, A33Variant::MatrixEntry)
}

pub fn v4_form_with(lambda: f64, n: usize, epsilon: f64, variant: A33Variant) -> Result<BlockForm> {
    if n < 2 {
        return domain(format!("v4_form: n must be at least 2, got {n}"));
    }
    if !(lambda >= 0.0) {
        return domain(format!(
            "v4_form: lambda must be non-negative, got {lambda}"
        ));
    }
    if !(0.0..2.0).contains(&epsilon) {
        return domain(format!(
            "v4_form: epsilon must lie in [0, 2), got {epsilon}"
        ));
    }
    let nf = n as f64;
    let l = lambda;
    let c1 = nf * (nf - 1.0) * l * (l - nf);
    let a11 = c1 * (l - 2.0 * (nf - 1.0) - epsilon);
    let a22 = 2.0 * l * (l - (nf - 1.0) - epsilon + nf + 3.0);
    let a33 = variant.a33(l, nf, epsilon);
    let a12 = -4.0 * (nf - 1.0) * l * (l - nf);
    let a23 = 4.0 * (nf + 1.0) * l;
    let form = SmallSym::new(3, [[a11, a12, 0.0], [a12, a22, a23], [0.0, a23, a33]]);
    Ok(BlockForm {
        kind: BlockKind::V4,
        parameter: lambda,
        n,
        form_matrix: form,
        gram_matrix: SmallSym::diagonal(&[c1, 2.0 * l, nf * (nf + 1.0)]),
        epsilon,
    })
}

/// The V4 matrix with its columns divided by `(n−1)λ(λ−n)`, `2λ` and `n+1`.
///
/// Undefined at `λ ∈ {0, n}`, where the first two basis tensors degenerate.
pub fn v4_rescaled(
    lambda: f64,
    n: usize,
    epsilon: f64,
    variant: A33Variant,
) -> Result<[[f64; 3]; 3]> {
    let nf = n as f64;
    if lambda.abs() < DEDUP_TOL || (lambda - nf).abs() < DEDUP_TOL {
        return domain(format!(
            "v4_rescaled: lambda = {lambda} makes a column scale vanish"
        ));
    }
    let b = v4_form_with(lambda, n, epsilon, variant)?;
    let scales = [(nf - 1.0) * lambda * (lambda - nf), 2.0 * lambda, nf + 1.0];
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = b.form_matrix.get(i, j) / scales[j];
        }
    }
    Ok(m)
}

/// Factored determinant `λn²(λ−2n−2)(λ+2n−6)` of the rescaled V4 matrix at `ε = 0`.
pub fn v4_reduced_det(lambda: f64, n: usize) -> f64 {
    let nf = n as f64;
    lambda * nf * nf * (lambda - 2.0 * nf - 2.0) * (lambda + 2.0 * nf - 6.0)
}

/// Determinant of a 3×3 matrix by cofactor expansion.
pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Leading principal minors of a 3×3 matrix.
pub fn leading_minors(m: &[[f64; 3]; 3]) -> [f64; 3] {
    [m[0][0], m[0][0] * m[1][1] - m[0][1] * m[1][0], det3(m)]
}

/// Indices of basis directions whose Gram entry does not vanish.
fn active_directions(block: &BlockForm) -> Result<Vec<usize>> {
    let g = &block.gram_matrix;
    let dim = g.dim();
    for i in 0..dim {
        for j in 0..dim {
            if i != j && g.get(i, j) != 0.0 {
                return Err(Error::Internal(format!(
                    "{} Gram matrix is not diagonal",
                    block.kind
                )));
            }
        }
    }
    let scale = (0..dim)
        .map(|i| g.get(i, i).abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    Ok((0..dim)
        .filter(|&i| g.get(i, i).abs() > GRAM_DEGENERACY_TOL * scale)
        .collect())
}

/// Generalized eigenvalues of `form·v = θ·gram·v` after dropping degenerate directions.
pub fn block_spectrum(block: &BlockForm) -> Result<Vec<f64>> {
    if block.kind == BlockKind::V1 {
        return Ok(vec![block.form_matrix.get(0, 0)]);
    }
    let keep = active_directions(block)?;
    let (Some(form), Some(gram)) = (
        block.form_matrix.select(&keep),
        block.gram_matrix.select(&keep),
    ) else {
        return Ok(Vec::new());
    };
    let d = gram.dim();
    let mut inv_sqrt = [0.0; 3];
    for (i, s) in inv_sqrt.iter_mut().enumerate().take(d) {
        let g = gram.get(i, i);
        if g <= 0.0 {
            return Err(Error::Internal(format!(
                "{} block at parameter {} has indefinite Gram matrix",
                block.kind, block.parameter
            )));
        }
        *s = 1.0 / g.sqrt();
    }
    let mut a = [[0.0; 3]; 3];
    for i in 0..d {
        for j in 0..d {
            a[i][j] = inv_sqrt[i] * form.get(i, j) * inv_sqrt[j];
        }
    }
    Ok(SmallSym::new(d, a).eigenvalues())
}

/// All block eigenvalues of `□_L` on trace-free tensors, sorted.
///
/// Laplace eigenvalues strictly between 0 and `n` violate the Obata bound and
/// have no valid V4 block; they are skipped here.
pub fn tangential_block_spectrum(spectrum: &CrossSectionSpectrum) -> Result<Vec<f64>> {
    Ok(collect_blocks(spectrum)?.0)
}

fn collect_blocks(spectrum: &CrossSectionSpectrum) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = spectrum.n;
    let nf = n as f64;
    let mut eigs = Vec::new();
    let mut skipped = Vec::new();
    for &k in &spectrum.tt_einstein_eigenvalues {
        eigs.extend(block_spectrum(&v1_form(k, n))?);
    }
    for &mu in &spectrum.coclosed_oneform_eigenvalues {
        eigs.extend(block_spectrum(&v3_form(mu, n)?)?);
    }
    for &l in &spectrum.laplace_eigenvalues {
        if l > DEDUP_TOL && l < nf - DEDUP_TOL {
            skipped.push(l);
            continue;
        }
        eigs.extend(block_spectrum(&v4_form(l, n, 0.0)?)?);
    }
    eigs.sort_by(f64::total_cmp);
    Ok((eigs, skipped))
}

/// Outcome of the tangential-stability decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub tangentially_stable: bool,
    pub strictly_tangentially_stable: bool,
    /// `Spec(Δ_E|TT) ≥ 0`.
    pub einstein_condition: bool,
    /// `Spec(Δ_E|TT) > 0`.
    pub strict_einstein_condition: bool,
    /// No nonzero Laplace eigenvalue in the open interval `(n, 2(n+1))`.
    pub gap_condition: bool,
    /// No nonzero Laplace eigenvalue in the closed interval `[n, 2(n+1)]`.
    pub strict_gap_condition: bool,
    /// Nonzero Laplace eigenvalues inside the open interval.
    pub offending_open: Vec<f64>,
    /// Nonzero Laplace eigenvalues inside the closed interval.
    pub offending_closed: Vec<f64>,
    /// Infimum of the block spectra of `□_L` on trace-free tensors.
    pub min_tangential_eigenvalue: f64,
    pub diagnostics: Vec<String>,
}

/// Decides (strict) tangential stability of the link.
pub fn tangential_verdict(spectrum: &CrossSectionSpectrum) -> Result<StabilityVerdict> {
    let warnings = spectrum.validate()?;
    let n = spectrum.n as f64;
    let lo = n;
    let hi = 2.0 * (n + 1.0);

    let mut diagnostics = Vec::new();
    for w in &warnings {
        diagnostics.push(match w {
            crate::spectrum::SpectrumWarning::BelowObata(l) => {
                format!("laplace eigenvalue {l} is below the Obata bound n = {n}")
            }
            crate::spectrum::SpectrumWarning::EmptyTtSpectrum => {
                "tt_einstein is empty; Einstein condition holds vacuously".to_string()
            }
        });
    }

    let kappa_min = spectrum
        .tt_einstein_eigenvalues
        .first()
        .copied()
        .unwrap_or(f64::INFINITY);
    let einstein_condition = kappa_min >= -ENDPOINT_TOL;
    let strict_einstein_condition = kappa_min > ENDPOINT_TOL;

    let offending_open: Vec<f64> = spectrum
        .nonzero_laplace()
        .filter(|&l| l > lo + ENDPOINT_TOL && l < hi - ENDPOINT_TOL)
        .collect();
    let offending_closed: Vec<f64> = spectrum
        .nonzero_laplace()
        .filter(|&l| l >= lo - ENDPOINT_TOL && l <= hi + ENDPOINT_TOL)
        .collect();
    let gap_condition = offending_open.is_empty();
    let strict_gap_condition = offending_closed.is_empty();

    let (eigs, skipped) = collect_blocks(spectrum)?;
    for l in skipped {
        diagnostics.push(format!(
            "V4 block at lambda = {l} skipped (degenerate Gram matrix)"
        ));
    }
    let min_tangential_eigenvalue = eigs.first().copied().unwrap_or(f64::INFINITY);

    let tangentially_stable = einstein_condition && gap_condition;
    let strictly_tangentially_stable = strict_einstein_condition && strict_gap_condition;
    Ok(StabilityVerdict {
        tangentially_stable,
        strictly_tangentially_stable,
        einstein_condition,
        strict_einstein_condition,
        gap_condition,
        strict_gap_condition,
        offending_open,
        offending_closed,
        min_tangential_eigenvalue,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent evaluation of the printed entries, term by term.
    fn a_entries(l: f64, n: f64) -> [f64; 6] {
        let a11 = n * (n - 1.0) * l * (l - n) * (l - 2.0 * (n - 1.0));
        let a12 = -4.0 * (n - 1.0) * l * (l - n);
        let a22 = 2.0 * l * (l - (n - 1.0)) + (2.0 * n + 6.0) * l;
        let a23 = 4.0 * (n + 1.0) * l;
        let a33 = n * (n + 1.0) * l - 2.0 * n * (n - 1.0) + 2.0 * n * n * (n + 3.0);
        [a11, a12, a22, a23, a33, 0.0]
    }

    #[test]
    fn v3_examples() {
        let b = v3_form(3.0, 4).unwrap();
        assert_eq!(b.form_matrix.rows(), vec![vec![0.0, 0.0], vec![0.0, 20.0]]);
        let b = v3_form(5.0, 3).unwrap();
        assert_eq!(
            b.form_matrix.rows(),
            vec![vec![4.5, -6.0], vec![-6.0, 22.0]]
        );
        assert_eq!(b.form_matrix.det(), 63.0);
        // a = μ−(n−1): ½a²(2μ+2n+6) − 4a² = a²(μ+n−1)
        let a = 3.0;
        assert_eq!(0.5 * a * a * 22.0 - 4.0 * a * a, 63.0);
        assert_eq!(a * a * (5.0 + 2.0), 63.0);
        assert_eq!(b.gram_matrix.rows(), vec![vec![1.5, 0.0], vec![0.0, 2.0]]);
    }

    #[test]
    fn v3_rejects_small_mu() {
        assert!(v3_form(0.0, 3).is_err());
        assert!(v3_form(1.5, 3).is_err());
    }

    #[test]
    fn v4_examples() {
        let b = v4_form(8.0, 3, 0.0).unwrap();
        let m = b.form_matrix;
        assert_eq!(m.get(0, 0), 960.0);
        assert_eq!(m.get(0, 1), -320.0);
        assert_eq!(m.get(1, 1), 192.0);
        assert_eq!(m.get(1, 2), 128.0);
        assert_eq!(m.get(2, 2), 192.0);
        assert_eq!(m.get(0, 2), 0.0);
        let e = a_entries(8.0, 3.0);
        assert_eq!(
            [
                m.get(0, 0),
                m.get(0, 1),
                m.get(1, 1),
                m.get(1, 2),
                m.get(2, 2)
            ],
            e[..5]
        );

        for n in 2..8 {
            let nf = n as f64;
            let b = v4_form(0.0, n, 0.0).unwrap();
            let rows = b.form_matrix.rows();
            assert_eq!(rows[0], vec![0.0, 0.0, 0.0]);
            assert_eq!(rows[1], vec![0.0, 0.0, 0.0]);
            assert_eq!(rows[2][2], nf * (-2.0 * (nf - 1.0) + 2.0 * nf * (nf + 3.0)));

            let b = v4_form(nf, n, 0.0).unwrap();
            for j in 0..3 {
                assert_eq!(b.form_matrix.get(0, j), 0.0);
            }
        }
        assert!(v4_form(8.0, 3, 2.0).is_err());
        assert!(v4_form(-1.0, 3, 0.0).is_err());
    }

    #[test]
    fn epsilon_shift_is_gram_shift() {
        let b0 = v4_form(11.0, 4, 0.0).unwrap();
        let be = v4_form(11.0, 4, 0.3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = b0.form_matrix.get(i, j) - 0.3 * b0.gram_matrix.get(i, j);
                assert!((be.form_matrix.get(i, j) - expect).abs() < 1e-9 * (1.0 + expect.abs()));
            }
        }
        let s0 = block_spectrum(&b0).unwrap();
        let se = block_spectrum(&be).unwrap();
        for (a, b) in s0.iter().zip(&se) {
            assert!((a - 0.3 - b).abs() < 1e-9);
        }
    }

    #[test]
    fn reduced_det_examples() {
        assert_eq!(v4_reduced_det(8.0, 3), 0.0);
        assert_eq!(v4_reduced_det(9.0, 3), 729.0);
        assert_eq!(v4_reduced_det(3.0, 3), -405.0);
        let m = v4_rescaled(9.0, 3, 0.0, A33Variant::MatrixEntry).unwrap();
        assert!((det3(&m) - 729.0).abs() < 1e-10);
        assert!(v4_rescaled(3.0, 3, 0.0, A33Variant::MatrixEntry).is_err());
    }

    #[test]
    fn both_a33_variants_positive_below_two() {
        for n in 2..13 {
            let nf = n as f64;
            for &eps in &[0.0, 0.5, 1.0, 1.5, 1.999] {
                for &l in &[0.0, nf, 2.0 * nf + 2.0, 5.0 * nf] {
                    assert!(A33Variant::MatrixEntry.a33(l, nf, eps) > 0.0);
                    assert!(A33Variant::ScalarProduct.a33(l, nf, eps) > 0.0);
                }
            }
        }
        // The two constants differ by 4n.
        let d = A33Variant::MatrixEntry.a33(7.0, 5.0, 0.0)
            - A33Variant::ScalarProduct.a33(7.0, 5.0, 0.0);
        assert!((d - 20.0).abs() < 1e-12);
    }

    #[test]
    fn block_spectrum_examples() {
        assert_eq!(block_spectrum(&v1_form(3.0, 4)).unwrap(), vec![3.0]);
        let s = block_spectrum(&v4_form(0.0, 3, 0.0).unwrap()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 8.0).abs() < 1e-13);
        for n in 2..10 {
            let nf = n as f64;
            let s = block_spectrum(&v3_form(nf - 1.0, n).unwrap()).unwrap();
            assert_eq!(s.len(), 1);
            assert!((s[0] - (2.0 * nf + 2.0)).abs() < 1e-13);
        }
        // λ = n: h̃₁ degenerates, 2×2 remainder is positive definite.
        let s = block_spectrum(&v4_form(4.0, 4, 0.0).unwrap()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[0] > 0.0);
    }

    #[test]
    fn indefinite_gram_is_internal_error() {
        let b = v4_form(1.0, 4, 0.0).unwrap();
        assert!(matches!(block_spectrum(&b), Err(Error::Internal(_))));
    }

    #[test]
    fn v3_strictly_positive_above_threshold() {
        for n in 2..12 {
            let nf = n as f64;
            for i in 1..200 {
                let mu = nf - 1.0 + 0.05 * i as f64;
                let s = block_spectrum(&v3_form(mu, n).unwrap()).unwrap();
                assert!(s[0] > 0.0, "n={n} mu={mu} min={}", s[0]);
            }
        }
    }

    #[test]
    fn psd_at_boundary() {
        for n in 3..=12 {
            let l = 2.0 * n as f64 + 2.0;
            let s = block_spectrum(&v4_form(l, n, 0.0).unwrap()).unwrap();
            assert!(s[0].abs() <= 1e-8, "n={n} theta={}", s[0]);
            assert!(s[1] > 0.0 && s[2] > 0.0);
        }
    }

    #[test]
    fn minors_positive_past_boundary() {
        for n in 3..=12 {
            let nf = n as f64;
            let mut l = 2.0 * nf + 2.25;
            while l <= 8.0 * nf {
                let m = v4_rescaled(l, n, 0.0, A33Variant::MatrixEntry).unwrap();
                assert!(leading_minors(&m).iter().all(|&x| x > 0.0), "n={n} l={l}");
                l += 0.5;
            }
        }
    }

    #[test]
    fn sphere_verdicts() {
        for n in 3..=5 {
            let s = CrossSectionSpectrum::round_sphere(n, 6).unwrap();
            let v = tangential_verdict(&s).unwrap();
            assert!(v.tangentially_stable);
            assert!(!v.strictly_tangentially_stable);
            let top = 2.0 * (n as f64 + 1.0);
            assert!(v.offending_closed.contains(&top));
            assert!(v.offending_open.is_empty());
            assert!(v.min_tangential_eigenvalue.abs() < 1e-8);
        }
    }

    #[test]
    fn negative_kappa_is_unstable() {
        let s = CrossSectionSpectrum::new(4, vec![-1.0, 3.0], vec![3.0], vec![0.0, 20.0], "neg")
            .unwrap();
        let v = tangential_verdict(&s).unwrap();
        assert!(!v.einstein_condition);
        assert!(!v.tangentially_stable && !v.strictly_tangentially_stable);
        assert_eq!(v.min_tangential_eigenvalue, -1.0);
    }

    #[test]
    fn strictly_stable_example() {
        let s = CrossSectionSpectrum::new(
            5,
            vec![0.1, 2.0],
            vec![4.0, 9.0],
            vec![0.0, 12.5, 30.0],
            "x",
        )
        .unwrap();
        let v = tangential_verdict(&s).unwrap();
        assert!(v.strictly_tangentially_stable && v.tangentially_stable);
        assert!(v.min_tangential_eigenvalue > 0.0);
    }

    #[test]
    fn endpoint_tolerance_only_affects_strict() {
        let s = CrossSectionSpectrum::new(4, vec![1.0], vec![3.0], vec![0.0, 10.0 + 5e-10], "edge")
            .unwrap();
        let v = tangential_verdict(&s).unwrap();
        assert!(v.tangentially_stable);
        assert!(!v.strictly_tangentially_stable);
    }

    #[test]
    fn empty_tt_is_flagged() {
        let s = CrossSectionSpectrum::new(4, vec![], vec![3.0], vec![0.0, 20.0], "e").unwrap();
        let v = tangential_verdict(&s).unwrap();
        assert!(v.einstein_condition);
        assert!(v.diagnostics.iter().any(|d| d.contains("vacuously")));
    }
}
