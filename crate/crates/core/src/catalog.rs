//! Tangential stability of compact simple Lie groups and irreducible
//! symmetric spaces of compact type.
//!
//! Each row stores the normalized first eigenvalue `Λ = λ₁/(d−1)` as an
//! exact rational, the dimension as printed in the published tables and the
//! standard dimension, and the printed labels. The tangential label is then
//! recomputed from `λ_abs = Λ(d−1)` and the Einstein label.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::format::fmt17;

type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityLabel {
    #[serde(rename = "unstable")]
    Unstable,
    #[serde(rename = "stable")]
    Stable,
    #[serde(rename = "s. stable")]
    StrictlyStable,
}

impl std::fmt::Display for StabilityLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityLabel::Unstable => "unstable",
            StabilityLabel::Stable => "stable",
            StabilityLabel::StrictlyStable => "s. stable",
        })
    }
}

/// Admissible parameter values of a catalog row.
#[derive(Debug, Clone, Copy)]
pub enum ParamDomain {
    Fixed,
    /// `min ≤ p ≤ max`.
    One {
        min: i64,
        max: Option<i64>,
    },
    /// Pairs `(p, q)` with `p ≥ p_min`, `q ≥ q_min` and `extra(p, q)`.
    Two {
        p_min: i64,
        q_min: i64,
        extra: fn(i64, i64) -> bool,
        text: &'static str,
    },
}

impl ParamDomain {
    pub fn contains(&self, params: &[i64]) -> bool {
        match *self {
            ParamDomain::Fixed => params.is_empty(),
            ParamDomain::One { min, max } => {
                params.len() == 1 && params[0] >= min && max.map_or(true, |m| params[0] <= m)
            }
            ParamDomain::Two {
                p_min,
                q_min,
                extra,
                ..
            } => {
                params.len() == 2
                    && params[0] >= p_min
                    && params[1] >= q_min
                    && extra(params[0], params[1])
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ParamDomain::Fixed => "-".to_string(),
            ParamDomain::One { min, max: None } => format!("p >= {min}"),
            ParamDomain::One { min, max: Some(m) } => format!("{m} >= p >= {min}"),
            ParamDomain::Two { text, .. } => text.to_string(),
        }
    }

    /// The `count` smallest admissible parameter assignments.
    ///
    /// Two-parameter rows are enumerated over the `count × count` lattice of
    /// smallest admissible pairs, ordered by `p + q` and then `p`.
    pub fn samples(&self, count: usize) -> Vec<Vec<i64>> {
        match *self {
            ParamDomain::Fixed => vec![Vec::new()],
            ParamDomain::One { min, max } => (0..count as i64)
                .map(|i| min + i)
                .take_while(|&p| max.map_or(true, |m| p <= m))
                .map(|p| vec![p])
                .collect(),
            ParamDomain::Two {
                p_min,
                q_min,
                extra,
                ..
            } => {
                let mut pairs = Vec::new();
                let span = 3 * count as i64 + 6;
                for p in p_min..p_min + span {
                    for q in q_min..q_min + span {
                        if extra(p, q) {
                            pairs.push(vec![p, q]);
                        }
                    }
                }
                pairs.sort_by_key(|v| (v[0] + v[1], v[0]));
                pairs.truncate(count * count);
                pairs
            }
        }
    }
}

/// One printed row.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub table: u8,
    pub cartan_type: &'static str,
    pub family: &'static str,
    pub domain: ParamDomain,
    pub dim_printed: fn(&[i64]) -> i64,
    pub dim_corrected: fn(&[i64]) -> i64,
    /// `Λ`, the first nonzero Laplace eigenvalue over the Einstein constant.
    pub lambda: fn(&[i64]) -> Q,
    pub expected_einstein: StabilityLabel,
    pub expected_tangential: StabilityLabel,
}

impl CatalogEntry {
    /// True when the printed dimension formula differs from the standard one.
    pub fn corrected_dim(&self) -> bool {
        self.domain
            .samples(3)
            .iter()
            .any(|p| (self.dim_printed)(p) != (self.dim_corrected)(p))
    }
}

/// `2(d+1)/(d−1)`, the normalized gap threshold for a link of dimension `d`.
pub fn lambda_threshold(d: i64) -> Result<f64> {
    if d < 3 {
        return domain(format!("lambda_threshold: d must be at least 3, got {d}"));
    }
    Ok(threshold_unchecked(d))
}

fn threshold_unchecked(d: i64) -> f64 {
    2.0 * (d as f64 + 1.0) / (d as f64 - 1.0)
}

/// Tangential label from the Einstein label and `λ_abs = Λ(d−1)`.
pub fn recompute_label(einstein: StabilityLabel, lambda_norm: f64, d: i64) -> StabilityLabel {
    let df = d as f64;
    let lambda_abs = lambda_norm * (df - 1.0);
    let top = 2.0 * (df + 1.0);
    if einstein == StabilityLabel::StrictlyStable && (lambda_abs < df || lambda_abs > top) {
        StabilityLabel::StrictlyStable
    } else if einstein != StabilityLabel::Unstable && (lambda_abs <= df || lambda_abs >= top) {
        StabilityLabel::Stable
    } else {
        StabilityLabel::Unstable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryEvaluation {
    pub params: Vec<i64>,
    pub dim_printed: i64,
    pub dim_corrected: i64,
    pub lambda: f64,
    /// Threshold `2(d+1)/(d−1)` at the corrected dimension.
    pub threshold: f64,
    pub recomputed_printed_dim: StabilityLabel,
    pub recomputed_corrected_dim: StabilityLabel,
}

impl EntryEvaluation {
    pub fn matches(&self, expected: StabilityLabel) -> bool {
        self.recomputed_printed_dim == expected && self.recomputed_corrected_dim == expected
    }
}

pub fn evaluate_entry(entry: &CatalogEntry, params: &[i64]) -> Result<EntryEvaluation> {
    if !entry.domain.contains(params) {
        return domain(format!(
            "{}: parameters {params:?} outside {}",
            entry.family,
            entry.domain.describe()
        ));
    }
    let dim_printed = (entry.dim_printed)(params);
    let dim_corrected = (entry.dim_corrected)(params);
    let lam = (entry.lambda)(params);
    let lambda = *lam.numer() as f64 / *lam.denom() as f64;
    Ok(EntryEvaluation {
        params: params.to_vec(),
        dim_printed,
        dim_corrected,
        lambda,
        threshold: threshold_unchecked(dim_corrected),
        recomputed_printed_dim: recompute_label(entry.expected_einstein, lambda, dim_printed),
        recomputed_corrected_dim: recompute_label(entry.expected_einstein, lambda, dim_corrected),
    })
}

/// One emitted row of a reproduced table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub family: &'static str,
    pub cartan_type: &'static str,
    pub expected_einstein: StabilityLabel,
    pub expected_tangential: StabilityLabel,
    pub evaluation: EntryEvaluation,
    pub matched: bool,
}

impl TableRow {
    /// Label shown in the `recomputed_tangential` column; both dimension
    /// conventions are shown when they disagree.
    pub fn recomputed(&self) -> String {
        let e = &self.evaluation;
        if e.recomputed_printed_dim == e.recomputed_corrected_dim {
            e.recomputed_corrected_dim.to_string()
        } else {
            format!(
                "{}/{}",
                e.recomputed_printed_dim, e.recomputed_corrected_dim
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub table: u8,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matched)
    }

    pub fn mismatches(&self) -> Vec<&TableRow> {
        self.rows.iter().filter(|r| !r.matched).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "family,cartan_type,params,dim_printed,dim_corrected,Lambda,threshold,\
             expected_einstein,expected_tangential,recomputed_tangential,match\n",
        );
        for r in &self.rows {
            let e = &r.evaluation;
            let params = e
                .params
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                csv_field(r.family),
                csv_field(r.cartan_type),
                if params.is_empty() {
                    "-".to_string()
                } else {
                    params
                },
                e.dim_printed,
                e.dim_corrected,
                fmt17(e.lambda),
                fmt17(e.threshold),
                r.expected_einstein,
                r.expected_tangential,
                r.recomputed(),
                r.matched,
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Evaluates every row of table 1 or 2 at its `sample_count` smallest parameters.
pub fn reproduce_table(which: u8, sample_count: usize) -> Result<TableReport> {
    if sample_count == 0 {
        return domain("reproduce_table: sample_count must be at least 1");
    }
    let entries = match which {
        1 => table1(),
        2 => table2(),
        _ => return domain(format!("reproduce_table: no table {which}")),
    };
    let mut rows = Vec::new();
    for entry in entries {
        for params in entry.domain.samples(sample_count) {
            let evaluation = evaluate_entry(&entry, &params)?;
            rows.push(TableRow {
                family: entry.family,
                cartan_type: entry.cartan_type,
                expected_einstein: entry.expected_einstein,
                expected_tangential: entry.expected_tangential,
                matched: evaluation.matches(entry.expected_tangential),
                evaluation,
            });
        }
    }
    Ok(TableReport { table: which, rows })
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn fixed(v: i64) -> fn(&[i64]) -> i64 {
    // Non-capturing closures only; each fixed dimension gets its own arm.
    match v {
        5 => |_| 5,
        4 => |_| 4,
        8 => |_| 8,
        10 => |_| 10,
        12 => |_| 12,
        14 => |_| 14,
        15 => |_| 15,
        16 => |_| 16,
        21 => |_| 21,
        26 => |_| 26,
        28 => |_| 28,
        32 => |_| 32,
        40 => |_| 40,
        42 => |_| 42,
        52 => |_| 52,
        54 => |_| 54,
        64 => |_| 64,
        70 => |_| 70,
        78 => |_| 78,
        112 => |_| 112,
        128 => |_| 128,
        133 => |_| 133,
        156 => |_| 156,
        248 => |_| 248,
        266 => |_| 266,
        496 => |_| 496,
        6 => |_| 6,
        _ => unreachable!("no fixed-dimension arm for {v}"),
    }
}

use StabilityLabel::{Stable as S, StrictlyStable as SS, Unstable as U};

const fn one(min: i64) -> ParamDomain {
    ParamDomain::One { min, max: None }
}

/// Simple compact Lie groups with bi-invariant Einstein metrics.
pub fn table1() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            table: 1,
            cartan_type: "A_p",
            family: "SU(p+1)",
            domain: one(2),
            dim_printed: |p| p[0] * p[0] - 1,
            dim_corrected: |p| p[0] * (p[0] + 2),
            lambda: |p| q(2 * p[0] * (p[0] + 2), (p[0] + 1) * (p[0] + 1)),
            expected_einstein: U,
            expected_tangential: U,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "B_n",
            family: "Spin(5)",
            domain: ParamDomain::Fixed,
            dim_printed: fixed(10),
            dim_corrected: fixed(10),
            lambda: |_| q(5, 3),
            expected_einstein: U,
            expected_tangential: U,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "B_n",
            family: "Spin(7)",
            domain: ParamDomain::Fixed,
            dim_printed: fixed(21),
            dim_corrected: fixed(21),
            lambda: |_| q(21, 10),
            expected_einstein: SS,
            expected_tangential: U,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "B_n",
            family: "Spin(2p+1)",
            domain: one(4),
            dim_printed: |p| 2 * p[0] * (p[0] + 1),
            dim_corrected: |p| p[0] * (2 * p[0] + 1),
            lambda: |p| q(4 * p[0], 2 * p[0] - 1),
            expected_einstein: SS,
            expected_tangential: SS,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "C_p",
            family: "Sp(p)",
            domain: one(3),
            dim_printed: |p| p[0] * (2 * p[0] + 1),
            dim_corrected: |p| p[0] * (2 * p[0] + 1),
            lambda: |p| q(2 * p[0] + 1, p[0] + 1),
            expected_einstein: U,
            expected_tangential: U,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "D_p",
            family: "Spin(2p)",
            domain: one(3),
            dim_printed: |p| p[0] * (2 * p[0] + 1),
            dim_corrected: |p| p[0] * (2 * p[0] - 1),
            lambda: |p| q(2 * p[0] - 1, p[0] - 1),
            expected_einstein: SS,
            expected_tangential: SS,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "E_6",
            family: "E6",
            domain: ParamDomain::Fixed,
            dim_printed: fixed(156),
            dim_corrected: fixed(78),
            lambda: |_| q(26, 9),
            expected_einstein: SS,
            expected_tangential: SS,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "E_7",
            family: "E7",
            domain: ParamDomain::Fixed,
            dim_printed: fixed(266),
            dim_corrected: fixed(133),
            lambda: |_| q(19, 6),
            expected_einstein: SS,
            expected_tangential: SS,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "E_8",
            family: "E8",
            domain: ParamDomain::Fixed,
            dim_printed: fixed(496),
            dim_corrected: fixed(248),
            lambda: |_| q(4, 1),
            expected_einstein: SS,
            expected_tangential: SS,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "F_4",
            family: "F4",
            domain: ParamDomain::Fixed,
            dim_printed: fixed(52),
            dim_corrected: fixed(52),
            lambda: |_| q(8, 3),
            expected_einstein: SS,
            expected_tangential: SS,
        },
        CatalogEntry {
            table: 1,
            cartan_type: "G_2",
            family: "G2",
            domain: ParamDomain::Fixed,
            dim_printed: fixed(14),
            dim_corrected: fixed(14),
            lambda: |_| q(2, 1),
            expected_einstein: S,
            expected_tangential: U,
        },
    ]
}

type DimFn = fn(&[i64]) -> i64;

fn same(dim: DimFn) -> (DimFn, DimFn) {
    (dim, dim)
}

#[allow(clippy::too_many_arguments)]
fn row2(
    cartan_type: &'static str,
    family: &'static str,
    domain: ParamDomain,
    dims: (DimFn, DimFn),
    lambda: fn(&[i64]) -> Q,
    einstein: StabilityLabel,
    tangential: StabilityLabel,
) -> CatalogEntry {
    CatalogEntry {
        table: 2,
        cartan_type,
        family,
        domain,
        dim_printed: dims.0,
        dim_corrected: dims.1,
        lambda,
        expected_einstein: einstein,
        expected_tangential: tangential,
    }
}

/// Irreducible symmetric spaces of compact type that are not groups.
///
/// Rows are keyed by the printed family names. The `CP^p` row carries no
/// printed range; `p ≥ 2` is used, matching the accompanying classification
/// (`CP^1 = S^2` is a sphere).
pub fn table2() -> Vec<CatalogEntry> {
    vec![
        row2(
            "A I",
            "SU(p)/SO(p), 5>=p>=3",
            ParamDomain::One {
                min: 3,
                max: Some(5),
            },
            same(|p| (p[0] - 1) * (p[0] + 2) / 2),
            |p| q(2 * (p[0] - 1) * (p[0] + 2), p[0] * p[0]),
            S,
            U,
        ),
        row2(
            "A I",
            "SU(p)/SO(p), p>=6",
            one(6),
            same(|p| (p[0] - 1) * (p[0] + 2) / 2),
            |p| q(2 * (p[0] - 1) * (p[0] + 2), p[0] * p[0]),
            S,
            SS,
        ),
        row2(
            "A II",
            "SU(4)/Sp(2)=S^5",
            ParamDomain::Fixed,
            same(fixed(5)),
            |_| q(5, 4),
            SS,
            S,
        ),
        row2(
            "A II",
            "SU(2p)/Sp(p)",
            one(3),
            same(|p| 2 * p[0] * p[0] - p[0] - 1),
            |p| q((2 * p[0] + 1) * (p[0] - 1), p[0] * p[0]),
            U,
            U,
        ),
        row2(
            "A III",
            "U(p+1)/(U(p)xU(1))=CP^p",
            one(2),
            same(|p| 2 * p[0]),
            |_| q(2, 1),
            S,
            U,
        ),
        row2(
            "A III",
            "U(p+q)/(U(q)xU(p))",
            ParamDomain::Two {
                p_min: 2,
                q_min: 2,
                extra: |p, q| q >= p,
                text: "q >= p >= 2",
            },
            same(|p| 2 * p[0] * p[1]),
            |_| q(2, 1),
            S,
            U,
        ),
        row2(
            "B I",
            "SO(5)/(SO(3)xSO(2))",
            ParamDomain::Fixed,
            same(fixed(6)),
            |_| q(2, 1),
            U,
            U,
        ),
        row2(
            "B I",
            "SO(2p+3)/(SO(2p+1)xSO(2))",
            one(2),
            same(|p| 4 * p[0] + 2),
            |_| q(2, 1),
            S,
            U,
        ),
        row2(
            "B I",
            "SO(7)/(SO(4)xSO(3))",
            ParamDomain::Fixed,
            same(fixed(12)),
            |_| q(12, 5),
            SS,
            SS,
        ),
        row2(
            "B I",
            "SO(2p+3)/(SO(3)xSO(2p))",
            one(3),
            same(|p| 6 * p[0]),
            |p| q(4 * p[0] + 6, 2 * p[0] + 1),
            SS,
            SS,
        ),
        row2(
            "B I",
            "SO(2q+2p+1)/(SO(2q+1)xSO(2p))",
            ParamDomain::Two {
                p_min: 2,
                q_min: 2,
                extra: |_, _| true,
                text: "p, q >= 2",
            },
            same(|p| 2 * p[0] * (2 * p[1] + 1)),
            |p| q(4 * p[1] + 4 * p[0] + 2, 2 * p[1] + 2 * p[0] - 1),
            SS,
            SS,
        ),
        row2(
            "B II",
            "SO(2p+1)/SO(2p)=S^2p",
            one(1),
            same(|p| 2 * p[0]),
            |p| q(2 * p[0], 2 * p[0] - 1),
            SS,
            S,
        ),
        row2(
            "C I",
            "Sp(p)/U(p)",
            one(3),
            same(|p| p[0] * (p[0] + 1)),
            |_| q(2, 1),
            U,
            U,
        ),
        row2(
            "C II",
            "Sp(2)/(Sp(1)xSp(1))=S^4",
            ParamDomain::Fixed,
            same(fixed(4)),
            |_| q(4, 3),
            SS,
            S,
        ),
        row2(
            "C II",
            "Sp(p+1)/(Sp(p)xSp(1))=HP^p",
            one(2),
            same(|p| 4 * p[0]),
            |p| q(2 * (p[0] + 1), p[0] + 2),
            U,
            U,
        ),
        row2(
            "C II",
            "Sp(p+q)/(Sp(q)xSp(p))",
            ParamDomain::Two {
                p_min: 2,
                q_min: 2,
                extra: |p, q| q >= p,
                text: "q >= p >= 2",
            },
            same(|p| 4 * p[0] * p[1]),
            |p| q(2 * (p[0] + p[1]), p[0] + p[1] + 1),
            U,
            U,
        ),
        row2(
            "D I",
            "SO(8)/(SO(5)xSO(3))",
            ParamDomain::Fixed,
            same(fixed(15)),
            |_| q(5, 2),
            SS,
            SS,
        ),
        row2(
            "D I",
            "SO(2p+2)/(SO(2p)xSO(2))",
            one(3),
            same(|p| 4 * p[0]),
            |_| q(2, 1),
            S,
            U,
        ),
        row2(
            "D I",
            "SO(2p)/(SO(p)xSO(p))",
            one(4),
            same(|p| p[0] * p[0]),
            |p| q(2 * p[0], p[0] - 1),
            SS,
            SS,
        ),
        row2(
            "D I",
            "SO(2p+2)/(SO(p+2)xSO(p))",
            one(4),
            same(|p| p[0] * (p[0] + 2)),
            |p| q(2 * p[0] + 2, p[0]),
            SS,
            SS,
        ),
        row2(
            "D I",
            "SO(2p)/(SO(2p-q)xSO(q))",
            ParamDomain::Two {
                p_min: 5,
                q_min: 3,
                extra: |p, q| p - 2 >= q,
                text: "p-2 >= q >= 3",
            },
            same(|p| (2 * p[0] - p[1]) * p[1]),
            |p| q(2 * p[0], p[0] - 1),
            SS,
            SS,
        ),
        row2(
            "D II",
            "SO(2p+2)/SO(2p+1)=S^(2p+1)",
            one(3),
            same(|p| 2 * p[0] + 1),
            |p| q(2 * p[0] + 1, 2 * p[0]),
            SS,
            S,
        ),
        row2(
            "D III",
            "SO(2p)/U(p)",
            one(5),
            same(|p| p[0] * (p[0] - 1)),
            |_| q(2, 1),
            S,
            U,
        ),
        row2(
            "E I",
            "E6/[Sp(4)/{+-I}]",
            ParamDomain::Fixed,
            same(fixed(42)),
            |_| q(28, 9),
            SS,
            SS,
        ),
        row2(
            "E II",
            "E6/SU(2).SU(6)",
            ParamDomain::Fixed,
            same(fixed(40)),
            |_| q(3, 1),
            SS,
            SS,
        ),
        row2(
            "E III",
            "E6/SO(10).SO(2)",
            ParamDomain::Fixed,
            same(fixed(32)),
            |_| q(2, 1),
            S,
            U,
        ),
        row2(
            "E IV",
            "E6/F4",
            ParamDomain::Fixed,
            same(fixed(26)),
            |_| q(13, 9),
            U,
            U,
        ),
        row2(
            "E V",
            "E7/[SU(8)/{+-I}]",
            ParamDomain::Fixed,
            same(fixed(70)),
            |_| q(10, 3),
            SS,
            SS,
        ),
        row2(
            "E VI",
            "E7/SO(12).SU(2)",
            ParamDomain::Fixed,
            same(fixed(64)),
            |_| q(28, 9),
            SS,
            SS,
        ),
        row2(
            "E VII",
            "E7/E6.SO(2)",
            ParamDomain::Fixed,
            same(fixed(54)),
            |_| q(2, 1),
            S,
            U,
        ),
        row2(
            "E VIII",
            "E8/SO(16)",
            ParamDomain::Fixed,
            same(fixed(128)),
            |_| q(62, 15),
            SS,
            SS,
        ),
        row2(
            "E IX",
            "E8/E7.SU(2)",
            ParamDomain::Fixed,
            same(fixed(112)),
            |_| q(16, 5),
            SS,
            SS,
        ),
        row2(
            "F I",
            "F4/Sp(3).SU(2)",
            ParamDomain::Fixed,
            same(fixed(28)),
            |_| q(26, 9),
            SS,
            SS,
        ),
        row2(
            "F II",
            "F4/Spin(9)",
            ParamDomain::Fixed,
            same(fixed(16)),
            |_| q(4, 3),
            U,
            U,
        ),
        row2(
            "G",
            "G2/SO(4)",
            ParamDomain::Fixed,
            same(fixed(8)),
            |_| q(7, 3),
            SS,
            U,
        ),
    ]
}
