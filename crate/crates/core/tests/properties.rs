use proptest::prelude::*;

use kcanon::cli::expr;
use kcanon::cli::scenario::Perturbation;
use kcanon::jet::Basis;
use kcanon::kahler::builtin_metric;
use kcanon::majorant::{majorant_sequence, ExplicitBounds, MajorantParams, TermBound, A_MIN};
use kcanon::verifier::{laplacian_moment, residual_consequence, residual_system, Verdict};
use kcanon::{solve, Jet, SolverConfig, C64};

const DEG: usize = 5;

/// Random jet on C^n with coefficients in [-1, 1] + i [-1, 1].
fn jet(n: usize) -> impl Strategy<Value = Jet> {
    let len = Basis::shared(2 * n, DEG).len();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(move |cs| {
        let basis = Basis::shared(2 * n, DEG);
        let terms: Vec<(&[u8], C64)> = cs
            .iter()
            .enumerate()
            .map(|(i, &(re, im))| (basis.exponents(i), C64::new(re, im)))
            .collect();
        Jet::from_terms(n, DEG, terms).unwrap()
    })
}

/// Random jet with a unit constant term, safe to divide by or take logs of.
fn unit_jet(n: usize) -> impl Strategy<Value = Jet> {
    jet(n).prop_map(|j| {
        let c0 = j.constant_term();
        let mut j = j.scale(0.3);
        j.add_to_coeff(&vec![0; j.nvars()], C64::new(1.0, 0.0) - c0 * 0.3);
        j
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.05f64..0.05, 2 * n)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn ring_laws(a in jet(2), b in jet(2), c in jet(2)) {
        let ab = a.try_mul(&b).unwrap();
        prop_assert!(ab.approx_eq(&b.try_mul(&a).unwrap(), 1e-13));
        let left = ab.try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
        let dist = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let sum = ab.try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert!(dist.approx_eq(&sum, 1e-12));
    }

    #[test]
    fn validity_is_the_minimum(a in jet(1), b in jet(1), va in 0usize..=DEG, vb in 0usize..=DEG) {
        let a = a.with_valid_degree(va);
        let b = b.with_valid_degree(vb);
        prop_assert_eq!(a.try_add(&b).unwrap().valid_degree(), va.min(vb));
        prop_assert_eq!(a.try_mul(&b).unwrap().valid_degree(), va.min(vb));
        prop_assert_eq!(a.valid_coeffs().len(), a.basis().len_through(va));
        if va > 0 {
            prop_assert_eq!(a.derive(0).unwrap().valid_degree(), va - 1);
        } else {
            prop_assert!(a.derive(0).is_err());
        }
    }

    #[test]
    fn exp_log_division(a in unit_jet(2), b in unit_jet(2)) {
        prop_assert!(a.log().unwrap().exp().approx_eq(&a, 1e-12));
        let q = a.try_div(&b).unwrap();
        prop_assert!(q.try_mul(&b).unwrap().approx_eq(&a, 1e-12));
        let e = a.exp();
        prop_assert!(e.try_mul(&a.scale(-1.0).exp()).unwrap().approx_eq(&a.constant_like(1.0), 1e-12));
    }

    #[test]
    fn leibniz_rule(a in jet(2), b in jet(2), var in 0usize..4) {
        let lhs = a.try_mul(&b).unwrap().derive(var).unwrap();
        let rhs = a
            .derive(var)
            .unwrap()
            .try_mul(&b)
            .unwrap()
            .try_add(&a.try_mul(&b.derive(var).unwrap()).unwrap())
            .unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in jet(1), b in jet(1), p in point(1)) {
        // truncation error at |x| <= 0.05 and degree 5 is far below 1e-6
        let prod = a.try_mul(&b).unwrap().eval(&p);
        let want = a.eval(&p) * b.eval(&p);
        prop_assert!((prod - want).norm() < 1e-6);
        prop_assert!((a.conj().eval(&p) - a.eval(&p).conj()).norm() < 1e-14);
    }

    #[test]
    fn parsed_polynomials_match_jets(c0 in -3i32..3, c1 in -3i32..3, c2 in -3i32..3) {
        let text = format!("{c0} + {c1}*x1*y2 - ({c2})*x2^3");
        let got = expr::parse(&text).unwrap().to_jet(2, DEG).unwrap();
        let f = |v: i32| C64::new(v as f64, 0.0);
        let want = Jet::from_terms(2, DEG, [
            (&[0u8, 0, 0, 0][..], f(c0)),
            (&[1, 0, 0, 1][..], f(c1)),
            (&[0, 0, 3, 0][..], f(-c2)),
        ]).unwrap();
        prop_assert!(got.approx_eq(&want, 0.0));
    }

    #[test]
    fn majorant_sequence_is_monotone_in_the_bounds(
        a in 1e-3f64..1.0,
        bound in 0.0f64..2.0,
        extra in 0.0f64..1.0,
        q in 2usize..4,
    ) {
        let params = MajorantParams {
            radius: 0.25,
            a,
            a_sampled: a,
            a_min: A_MIN,
            sigma: 1.0,
            m_const: 4.0,
            m_const_convention: String::new(),
            euler_e: std::f64::consts::E,
            c: 1.0,
        };
        let term = |b: f64| ExplicitBounds {
            max_order: 6,
            terms: vec![TermBound { p: 0, q, s: 0, alpha: 0, beta: 0, bound: b }],
        };
        let lo = majorant_sequence(&params, &term(bound), 6).unwrap();
        let hi = majorant_sequence(&params, &term(bound + extra), 6).unwrap();
        prop_assert_eq!(lo[0], a);
        for (x, y) in lo.iter().zip(&hi) {
            prop_assert!(*x >= 0.0 && x <= y);
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn solver_outputs_satisfy_the_system(seed in 0u64..1000, n in 1usize..=2, c in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let h = builtin_metric(&format!("perturbed_flat:{n},0.1,{seed}"), 12).unwrap();
        let sol = solve(&h, &SolverConfig::new(c, 5, 12)).unwrap();
        prop_assert!(sol.g.hermitian_defect() < 1e-12);
        prop_assert!(sol.w_inv.coeff(0).is_zero());
        prop_assert_eq!(residual_system(&sol, 1e-9).unwrap().verdict, Verdict::Pass);
        prop_assert_eq!(residual_consequence(&sol, 1e-9).unwrap().verdict, Verdict::Pass);
        prop_assert_eq!(laplacian_moment(&sol, 1e-9).unwrap().verdict, Verdict::Pass);
        // validity drops by two per order
        let d0 = h.h.get(0, 0).valid_degree();
        for (k, d) in sol.v.valid_degrees().into_iter().enumerate() {
            prop_assert_eq!(d, d0 - 2 * k);
        }
    }

    #[test]
    fn solving_is_deterministic(seed in 0u64..1000) {
        let h = builtin_metric(&format!("perturbed_flat:2,0.1,{seed}"), 10).unwrap();
        let cfg = SolverConfig::new(1.0, 4, 10);
        let a = solve(&h, &cfg).unwrap();
        let b = solve(&h, &cfg).unwrap();
        for (x, y) in a.v.coeffs().iter().zip(b.v.coeffs()) {
            prop_assert_eq!(x.coeffs(), y.coeffs());
        }
        for (x, y) in a.w_inv.coeffs().iter().zip(b.w_inv.coeffs()) {
            prop_assert_eq!(x.coeffs(), y.coeffs());
        }
    }

    #[test]
    fn injected_defects_are_flagged(
        seed in 0u64..1000,
        n in 1usize..=2,
        target in prop::sample::select(vec!["v", "g", "w_inv", "exp_u"]),
        order in 1usize..=4,
    ) {
        let h = builtin_metric(&format!("perturbed_flat:{n},0.1,{seed}"), 12).unwrap();
        let mut sol = solve(&h, &SolverConfig::new(1.0, 5, 12)).unwrap();
        let p: Perturbation = format!("{target}:{order}:1e-3").parse().unwrap();
        p.apply(&mut sol).unwrap();
        let r = residual_system(&sol, 1e-9).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Fail);
        prop_assert!(r.max_residual() >= 1e-4, "{}", r.max_residual());
    }
}
