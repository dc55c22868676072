use conestab::tridiag::{Pencil, SymTridiag};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn dense(t: &SymTridiag) -> DMatrix<f64> {
    let n = t.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = t.diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = t.off[i];
            m[(i + 1, i)] = t.off[i];
        }
    }
    m
}

/// Eigenvalues of `(K, M)` through a dense Cholesky reduction.
fn dense_eigenvalues(k: &SymTridiag, m: &SymTridiag) -> Vec<f64> {
    let l = dense(m).cholesky().unwrap().l();
    let li = l.clone().try_inverse().unwrap();
    let c = &li * dense(k) * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut v: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn pencil_strategy() -> impl Strategy<Value = (SymTridiag, SymTridiag)> {
    (3usize..24).prop_flat_map(|n| {
        (
            proptest::collection::vec(-5.0f64..5.0, n),
            proptest::collection::vec(-2.0f64..2.0, n - 1),
            proptest::collection::vec(1.0f64..3.0, n),
            proptest::collection::vec(-0.4f64..0.4, n - 1),
        )
            .prop_map(|(kd, ko, md, mo)| {
                (
                    SymTridiag::new(kd, ko).unwrap(),
                    SymTridiag::new(md, mo).unwrap(),
                )
            })
    })
}

proptest! {
    #[test]
    fn eigenvalues_match_dense((k, m) in pencil_strategy()) {
        let want = dense_eigenvalues(&k, &m);
        let p = Pencil::new(k, m).unwrap();
        let got = p.smallest_eigenvalues(p.len()).unwrap();
        let scale = want.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-10 * scale, "{g} vs {w}");
        }
    }

    #[test]
    fn inertia_count_is_monotone((k, m) in pencil_strategy(), a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let p = Pencil::new(k, m).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(p.count_below(lo) <= p.count_below(hi));
    }

    #[test]
    fn eigenpairs_are_m_orthonormal((k, m) in pencil_strategy()) {
        let p = Pencil::new(k.clone(), m.clone()).unwrap();
        let count = p.len().min(4);
        let pairs = p.smallest_eigenpairs(count).unwrap();
        for (i, u) in pairs.vectors.iter().enumerate() {
            let ku = k.matvec(u);
            let mu = m.matvec(u);
            let res = ku.iter().zip(&mu).map(|(a, b)| (a - pairs.values[i] * b).abs()).fold(0.0, f64::max);
            prop_assert!(res <= 1e-7 * (1.0 + pairs.values[i].abs()), "residual {res}");
            prop_assert!((p.m_norm(u) - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn second_difference_spectrum() {
    // −u'' on (0,1), P1 elements: θ_j = (6/h²)(1−cos jπh)/(2+cos jπh).
    let n = 49;
    let h = 1.0 / (n + 1) as f64;
    let k = SymTridiag::new(vec![2.0 / h; n], vec![-1.0 / h; n - 1]).unwrap();
    let m = SymTridiag::new(vec![4.0 * h / 6.0; n], vec![h / 6.0; n - 1]).unwrap();
    let p = Pencil::new(k, m).unwrap();
    let got = p.smallest_eigenvalues(5).unwrap();
    for (j, g) in got.iter().enumerate() {
        let c = ((j + 1) as f64 * std::f64::consts::PI * h).cos();
        let want = 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
        assert!((g - want).abs() <= 1e-11 * want, "{g} {want}");
    }
}
