//! Cross-section spectral data and indicial-root computations.
//!
//! A cone `(0,1) × F` over an Einstein link `(F, g_F)` with Einstein
//! constant `n − 1` is described, for stability purposes, by three spectra
//! of the link: the Einstein operator on TT tensors (`κ`), the connection
//! Laplacian on coclosed 1-forms (`μ`) and the Laplace–Beltrami operator on
//! functions (`λ`). Multiplicities are carried as repeated entries.
//!
//! A tangential eigenvalue `λ` produces formal solutions `x^{±ν − (n−1)/2}`
//! near the tip, with indicial root `ν(λ) = √(λ + ((n−1)/2)²)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Absolute tolerance used when deduplicating eigenvalue lists.
pub const DEDUP_TOL: f64 = 1e-9;

/// Spectral data of an Einstein link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionSpectrum {
    pub n: usize,
    #[serde(rename = "tt_einstein")]
    pub tt_einstein_eigenvalues: Vec<f64>,
    #[serde(rename = "coclosed_oneforms")]
    pub coclosed_oneform_eigenvalues: Vec<f64>,
    #[serde(rename = "laplace")]
    pub laplace_eigenvalues: Vec<f64>,
    pub label: String,
}

/// Non-fatal findings from [`CrossSectionSpectrum::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumWarning {
    /// A nonzero Laplace eigenvalue lies below the Obata bound `λ ≥ n`.
    BelowObata(f64),
    /// No TT eigenvalues were supplied; the Einstein condition holds vacuously.
    EmptyTtSpectrum,
}

impl CrossSectionSpectrum {
    pub fn new(
        n: usize,
        tt_einstein: Vec<f64>,
        coclosed_oneforms: Vec<f64>,
        laplace: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut s = Self {
            n,
            tt_einstein_eigenvalues: tt_einstein,
            coclosed_oneform_eigenvalues: coclosed_oneforms,
            laplace_eigenvalues: laplace,
            label: label.into(),
        };
        s.normalize();
        s.validate()?;
        Ok(s)
    }

    /// Parses the flat JSON document `{n, tt_einstein, coclosed_oneforms, laplace, label}`.
    ///
    /// Unknown keys are rejected. Sequences are sorted before validation.
    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            n: usize,
            tt_einstein: Vec<f64>,
            coclosed_oneforms: Vec<f64>,
            laplace: Vec<f64>,
            label: String,
        }
        let doc: Doc = serde_json::from_str(text)
            .map_err(|e| Error::Schema(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Self::new(
            doc.n,
            doc.tt_einstein,
            doc.coclosed_oneforms,
            doc.laplace,
            doc.label,
        )
        .map_err(|e| match e {
            Error::Schema(msg) => Error::Schema(with_field_line(text, msg)),
            other => other,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    fn normalize(&mut self) {
        for v in [
            &mut self.tt_einstein_eigenvalues,
            &mut self.coclosed_oneform_eigenvalues,
            &mut self.laplace_eigenvalues,
        ] {
            v.sort_by(f64::total_cmp);
        }
    }

    /// Checks the hard invariants and returns the soft ones as warnings.
    pub fn validate(&self) -> Result<Vec<SpectrumWarning>> {
        if self.n < 2 {
            return Err(Error::Schema(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        let all = self
            .tt_einstein_eigenvalues
            .iter()
            .chain(&self.coclosed_oneform_eigenvalues)
            .chain(&self.laplace_eigenvalues);
        if all.clone().any(|x| !x.is_finite()) {
            return Err(Error::Schema("eigenvalues must be finite".into()));
        }
        for (name, v) in [
            ("tt_einstein", &self.tt_einstein_eigenvalues),
            ("coclosed_oneforms", &self.coclosed_oneform_eigenvalues),
            ("laplace", &self.laplace_eigenvalues),
        ] {
            if v.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Schema(format!("{name} must be sorted ascending")));
            }
        }
        match self.laplace_eigenvalues.first() {
            None => return Err(Error::Schema("laplace must not be empty".into())),
            Some(&l0) if l0.abs() > DEDUP_TOL => {
                return Err(Error::Schema(format!(
                    "laplace must start with the constant mode 0, got {l0}"
                )))
            }
            _ => {}
        }
        if let Some(&mu) = self
            .coclosed_oneform_eigenvalues
            .iter()
            .find(|&&m| m <= 0.0)
        {
            return Err(Error::Schema(format!(
                "coclosed_oneforms must be positive, got {mu}"
            )));
        }

        let n = self.n as f64;
        let mut warnings: Vec<SpectrumWarning> = self
            .nonzero_laplace()
            .filter(|&l| l < n - DEDUP_TOL)
            .map(SpectrumWarning::BelowObata)
            .collect();
        if self.tt_einstein_eigenvalues.is_empty() {
            warnings.push(SpectrumWarning::EmptyTtSpectrum);
        }
        Ok(warnings)
    }

    /// Laplace eigenvalues with the constant mode removed.
    pub fn nonzero_laplace(&self) -> impl Iterator<Item = f64> + '_ {
        self.laplace_eigenvalues
            .iter()
            .copied()
            .filter(|l| l.abs() > DEDUP_TOL)
    }

    /// Spectrum of the round sphere `S^n` up to harmonic degree `levels`.
    ///
    /// Laplace: `k(k+n−1)`, `k ≥ 0`. Coclosed 1-forms (connection Laplacian):
    /// `(k+1)(k+n−2) − (n−1)`, `k ≥ 1`. TT tensors (Einstein operator):
    /// `k(k+n−1)`, `k ≥ 2`. Multiplicities are not expanded.
    pub fn round_sphere(n: usize, levels: usize) -> Result<Self> {
        if n < 2 || levels < 2 {
            return domain("round_sphere needs n >= 2 and levels >= 2");
        }
        let nf = n as f64;
        let laplace = (0..=levels)
            .map(|k| (k as f64) * (k as f64 + nf - 1.0))
            .collect();
        let coclosed = (1..=levels)
            .map(|k| (k as f64 + 1.0) * (k as f64 + nf - 2.0) - (nf - 1.0))
            .collect();
        let tt = if n >= 3 {
            (2..=levels)
                .map(|k| (k as f64) * (k as f64 + nf - 1.0))
                .collect()
        } else {
            Vec::new()
        };
        Self::new(n, tt, coclosed, laplace, format!("S^{n}"))
    }
}

/// Prefixes a validation message with the line of the field it names.
fn with_field_line(text: &str, msg: String) -> String {
    let field = ["tt_einstein", "coclosed_oneforms", "laplace", "n"]
        .into_iter()
        .find(|f| msg.starts_with(&format!("{f} ")));
    let line = field.and_then(|f| {
        let key = format!("\"{f}\"");
        text.lines().position(|l| l.contains(&key)).map(|i| i + 1)
    });
    match line {
        Some(l) => format!("line {l}: {msg}"),
        None => msg,
    }
}

/// Which branch of the tip asymptotics the Friedrichs realization keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryClass {
    /// `ν = 0`: power and logarithmic branches coincide in exponent.
    LogCase,
    /// `0 < ν < 1`: both branches are in the maximal domain; `c⁻ = 0` is imposed.
    Constrained,
    /// `ν ≥ 1`: the singular branch is not in the maximal domain.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicialData {
    pub lambda: f64,
    pub nu: f64,
    pub exponent_plus: f64,
    pub exponent_minus: f64,
    pub boundary_class: BoundaryClass,
}

fn half_dim(n: usize) -> f64 {
    (n as f64 - 1.0) / 2.0
}

/// Indicial root `√(λ + ((n−1)/2)²)` for `λ ≥ 0`, `n ≥ 2`.
pub fn nu(lambda: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("nu: n must be at least 2, got {n}"));
    }
    if !(lambda >= 0.0) {
        return domain(format!("nu: lambda must be non-negative, got {lambda}"));
    }
    Ok(indicial_root(lambda, n))
}

// Accepts λ ≥ −((n−1)/2)², where the root is still real.
fn indicial_root(lambda: f64, n: usize) -> f64 {
    let h = half_dim(n);
    (lambda + h * h).max(0.0).sqrt()
}

fn classify_nu(nu: f64) -> BoundaryClass {
    if nu == 0.0 {
        BoundaryClass::LogCase
    } else if nu < 1.0 {
        BoundaryClass::Constrained
    } else {
        BoundaryClass::Free
    }
}

/// Indicial data and Friedrichs boundary class of a tangential eigenvalue.
///
/// `n = 1` is accepted here so that the degenerate log case `ν(0) = 0` is
/// reachable.
pub fn friedrichs_classification(lambda: f64, n: usize) -> Result<IndicialData> {
    if n < 1 {
        return domain("friedrichs_classification: n must be positive");
    }
    if !(lambda >= 0.0) {
        return domain(format!(
            "friedrichs_classification: lambda must be non-negative, got {lambda}"
        ));
    }
    let h = half_dim(n);
    let nu = indicial_root(lambda, n);
    Ok(IndicialData {
        lambda,
        nu,
        exponent_plus: nu - h,
        exponent_minus: -nu - h,
        boundary_class: classify_nu(nu),
    })
}

/// Which tangential spectrum feeds [`exceptional_weights`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// Block spectrum of the tangential Lichnerowicz operator on trace-free tensors.
    Lichnerowicz,
    /// Raw Laplace–Beltrami eigenvalues of the link.
    Connection,
}

/// `{±ν(λ)}` over the given tangential eigenvalues, sorted and deduplicated.
///
/// Eigenvalues down to `−((n−1)/2)²` are accepted, since the roots stay
/// real there; anything lower gives complex weights and is a domain error.
pub fn exceptional_weights_from(eigenvalues: &[f64], n: usize) -> Result<Vec<f64>> {
    if eigenvalues.is_empty() {
        return domain("exceptional_weights: empty tangential spectrum");
    }
    if n < 2 {
        return domain(format!(
            "exceptional_weights: n must be at least 2, got {n}"
        ));
    }
    let h = half_dim(n);
    let mut out = Vec::with_capacity(2 * eigenvalues.len());
    for &l in eigenvalues {
        if l + h * h < -DEDUP_TOL {
            return domain(format!(
                "exceptional_weights: eigenvalue {l} below -((n-1)/2)^2 gives complex weights"
            ));
        }
        let v = indicial_root(l, n);
        out.push(v);
        out.push(-v);
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= DEDUP_TOL);
    Ok(out)
}

/// Exceptional weights of a link, see [`WeightKind`].
pub fn exceptional_weights(spectrum: &CrossSectionSpectrum, kind: WeightKind) -> Result<Vec<f64>> {
    let eigs = match kind {
        WeightKind::Connection => spectrum.laplace_eigenvalues.clone(),
        WeightKind::Lichnerowicz => crate::tangential::tangential_block_spectrum(spectrum)?,
    };
    exceptional_weights_from(&eigs, spectrum.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_closed_forms() {
        assert_eq!(nu(0.0, 5).unwrap(), 2.0);
        assert_eq!(nu(4.0, 4).unwrap(), 2.5);
        for n in 2..12 {
            let v = nu(n as f64, n).unwrap();
            assert!((v - (n as f64 + 1.0) / 2.0).abs() < 1e-14);
        }
        // √(12 + 4); checked against a 50-digit evaluation.
        assert_eq!(nu(12.0, 5).unwrap(), 4.0);
    }

    #[test]
    fn nu_rejects_bad_input() {
        assert!(matches!(nu(-1e-3, 3), Err(Error::Domain(_))));
        assert!(matches!(nu(1.0, 1), Err(Error::Domain(_))));
        assert!(nu(f64::NAN, 3).is_err());
    }

    #[test]
    fn classification_examples() {
        let d = friedrichs_classification(0.0, 1).unwrap();
        assert_eq!(d.boundary_class, BoundaryClass::LogCase);
        let d = friedrichs_classification(0.0, 2).unwrap();
        assert_eq!(d.nu, 0.5);
        assert_eq!(d.boundary_class, BoundaryClass::Constrained);
        let d = friedrichs_classification(2.0, 3).unwrap();
        assert!((d.nu - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.boundary_class, BoundaryClass::Free);
        assert!((d.exponent_plus - (3f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((d.exponent_minus - (-3f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn weights_examples() {
        assert_eq!(
            exceptional_weights_from(&[0.0], 5).unwrap(),
            vec![-2.0, 2.0]
        );
        assert_eq!(
            exceptional_weights_from(&[0.0, 4.0], 4).unwrap(),
            vec![-2.5, -1.5, 1.5, 2.5]
        );
        assert_eq!(
            exceptional_weights_from(&[3.0, 8.0], 3).unwrap(),
            vec![-3.0, -2.0, 2.0, 3.0]
        );
        assert!(exceptional_weights_from(&[], 3).is_err());
        assert_eq!(
            exceptional_weights_from(&[1.0, 1.0 + 1e-12], 3)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn schema_errors() {
        let ok =
            r#"{"n":4,"tt_einstein":[10],"coclosed_oneforms":[3],"laplace":[0,4],"label":"x"}"#;
        assert!(CrossSectionSpectrum::from_json_str(ok).is_ok());
        let empty =
            r#"{"n":4,"tt_einstein":[10],"coclosed_oneforms":[3],"laplace":[],"label":"x"}"#;
        assert!(matches!(
            CrossSectionSpectrum::from_json_str(empty),
            Err(Error::Schema(_))
        ));
        let no_zero =
            r#"{"n":4,"tt_einstein":[],"coclosed_oneforms":[3],"laplace":[4],"label":"x"}"#;
        assert!(CrossSectionSpectrum::from_json_str(no_zero).is_err());
        let bad_mu =
            r#"{"n":4,"tt_einstein":[],"coclosed_oneforms":[0],"laplace":[0],"label":"x"}"#;
        assert!(CrossSectionSpectrum::from_json_str(bad_mu).is_err());
        let garbage = "{\n\"n\": 4,\n\"laplace\": [0,,]\n}";
        match CrossSectionSpectrum::from_json_str(garbage) {
            Err(Error::Schema(msg)) => assert!(msg.starts_with("line 3"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn obata_is_only_a_warning() {
        let s = CrossSectionSpectrum::new(4, vec![1.0], vec![3.0], vec![0.0, 2.0], "synthetic")
            .unwrap();
        assert_eq!(
            s.validate().unwrap(),
            vec![SpectrumWarning::BelowObata(2.0)]
        );
    }

    #[test]
    fn sphere_data() {
        let s = CrossSectionSpectrum::round_sphere(4, 4).unwrap();
        assert_eq!(s.laplace_eigenvalues, vec![0.0, 4.0, 10.0, 18.0, 28.0]);
        assert_eq!(s.coclosed_oneform_eigenvalues[0], 3.0);
        assert_eq!(s.tt_einstein_eigenvalues[0], 10.0);
    }
}
