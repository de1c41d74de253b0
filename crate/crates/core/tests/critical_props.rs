use proptest::prelude::*;

use ternary_univoque::seq::{EPSeq, M, ONE};

use ternary_univoque::critical::{
    self, branch_root, p_bound, p_of_m, r_alternating, r_bound, r_first_component, r_of_m,
    residual, solve_pi_root, Branch, RootForm,
};

fn grid(branch: Branch, n: usize) -> Vec<f64> {
    let (lo, hi) = branch.interval::<f64>();
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn r_is_bracketed_by_p_and_r_bounds() {
    let c = critical::constants::<f64>();
    let ends = [1.0 + c.alpha, c.m_d, c.big_m_d];
    for b in Branch::ALL {
        for m in grid(b, 100) {
            let r = r_of_m(m).unwrap();
            let (p, rr) = (p_bound(m), r_bound(m));
            assert!(p - 1e-9 <= r && r < rr, "{b} m={m} P={p} r={r} R={rr}");
            if r - p < 1e-9 {
                assert!(ends.iter().any(|e| (m - e).abs() < 1e-6), "{b} r=P at m={m}");
            }
        }
    }
}

#[test]
fn r_equals_p_at_component_ends() {
    let c = critical::constants::<f64>();
    for m in [1.0 + c.alpha, c.m_d, c.big_m_d] {
        assert!((r_of_m(m).unwrap() - p_bound(m)).abs() < 1e-6, "m={m}");
    }
}

#[test]
fn critical_bases_are_ordered() {
    for b in Branch::ALL {
        for m in grid(b, 100) {
            let (p, pb, r) = (p_of_m(m).unwrap(), p_bound(m), r_of_m(m).unwrap());
            assert!(2.0 <= p && p <= pb + 1e-9 && pb <= r + 1e-9, "{b} m={m}: {p} {pb} {r}");
        }
    }
}

#[test]
fn branch_residuals_vanish() {
    for b in Branch::ALL {
        let c = b.sequence();
        for m in grid(b, 100) {
            let r = r_of_m(m).unwrap();
            let res = residual(&c, b.form(), m, r).unwrap();
            assert!(res.abs() < 1e-9, "{b} m={m} residual {res}");
        }
    }
}

#[test]
fn closed_forms_match_solver() {
    for (b, closed) in [
        (Branch::Comp0Full, r_first_component as fn(f64) -> f64),
        (Branch::Comp10Left, r_alternating as fn(f64) -> f64),
    ] {
        for m in grid(b, 100) {
            let solved = solve_pi_root(&b.sequence(), b.form(), m, (2.0, r_bound(m))).unwrap();
            assert!((solved - closed(m)).abs() < 1e-10, "{b} m={m}");
        }
    }
}

#[test]
fn polynomial_relations_hold() {
    for m in grid(Branch::Comp10Left, 100) {
        let q = r_of_m(m).unwrap();
        assert!(((m - 1.0) * q - (q * q - 1.0)).abs() < 1e-8);
    }
    for m in grid(Branch::Comp10Mid, 100) {
        let q: f64 = r_of_m(m).unwrap();
        let lhs = (m - 1.0) * (q.powi(6) - 2.0 * q.powi(5) + q.powi(4) - q.powi(3) - q * q + 2.0 * q - 1.0);
        assert!((lhs - (q.powi(5) + q.powi(3))).abs() < 1e-8, "m={m}");
    }
    for m in grid(Branch::Comp10Right, 100) {
        let q: f64 = r_of_m(m).unwrap();
        let lhs = (m - 1.0) * (q.powi(3) - q * q - 2.0 * q + 1.0);
        assert!((lhs - (q * q + q)).abs() < 1e-8, "m={m}");
    }
}

#[test]
fn gaps_are_unsupported() {
    let c = critical::constants::<f64>();
    let mids = [
        (1.0 + c.alpha + c.m_d) / 2.0,
        (c.m_1 + c.m_2) / 2.0,
        (c.m_3 + c.m_4) / 2.0,
        c.big_m_d + 1.0,
    ];
    for m in mids {
        assert!(r_of_m(m).is_err(), "m={m}");
    }
    assert!(p_of_m((c.m_1 + c.m_2) / 2.0).is_ok());
    assert!(p_of_m(2.6).is_err());
}

#[test]
fn single_precision_roots() {
    for b in Branch::ALL {
        let (lo, hi) = b.interval::<f32>();
        let m = (lo + hi) / 2.0;
        let r32 = branch_root(b, m).unwrap();
        let r64 = branch_root(b, m as f64).unwrap();
        assert!((r32 as f64 - r64).abs() < 1e-5, "{b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_inverts_residual(m in 2.0f64..6.0, k in 1usize..4) {
        let mut period = vec![M];
        period.extend(std::iter::repeat(ONE).take(k));
        let c = EPSeq::from_symbols(vec![], period).unwrap();
        if let Ok(q) = solve_pi_root(&c, RootForm::Plain, m, (1.5, 4.0)) {
            prop_assert!(residual(&c, RootForm::Plain, m, q).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn r_lies_between_bounds(t in 0.0f64..1.0, which in 0usize..4) {
        let b = Branch::ALL[which];
        let (lo, hi) = b.interval::<f64>();
        let m = lo + t * (hi - lo);
        let r = r_of_m(m).unwrap();
        prop_assert!(p_bound(m) - 1e-9 <= r && r < r_bound(m));
    }
}
