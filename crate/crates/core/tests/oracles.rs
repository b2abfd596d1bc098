//! Values frozen from the independent symbolic computation in
//! `tests/oracle/series_oracle.py` (output in `series_oracle.out`).

use kcanon::cli::expr;
use kcanon::closed_form::{p_of_t, w_inv_closed, RicciSpectrum};
use kcanon::kahler::{builtin_metric, ChartKind, HermitianJetMatrix, InitialData};
use kcanon::{solve, Jet, Solution, SolverConfig, C64};

fn close(got: C64, want: C64, tol: f64) -> bool {
    (got - want).norm() <= tol * want.norm().max(1.0)
}

#[track_caller]
fn assert_close(got: C64, want: impl Into<C64>, what: &str) {
    let want = want.into();
    assert!(close(got, want, 1e-12), "{what}: got {got}, want {want}");
}

fn inline(n: usize, entries: &[&str], degree: usize) -> InitialData {
    let jets: Vec<Jet> = entries
        .iter()
        .map(|e| expr::parse(e).unwrap().to_jet(n, degree).unwrap())
        .collect();
    let h = HermitianJetMatrix::from_entries(n, jets).unwrap();
    InitialData::new("oracle", ChartKind::Inline, h, 0.5).unwrap()
}

fn binom(n: u64, k: u64) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (n + 1 - i) as f64 / i as f64)
}

fn linear_base() -> Solution {
    solve(&inline(1, &["1 + x1"], 14), &SolverConfig::new(1.0, 3, 14)).unwrap()
}

#[test]
fn linear_base_v_along_x1() {
    let sol = linear_base();
    let table: [&[f64]; 4] = [
        &[0.0, 1.0, -1.0 / 2.0, 1.0 / 3.0, -1.0 / 4.0, 1.0 / 5.0, -1.0 / 6.0],
        &[1.0 / 2.0, -3.0 / 2.0, 3.0, -5.0, 15.0 / 2.0, -21.0 / 2.0, 14.0],
        &[-9.0 / 8.0, 27.0 / 4.0, -189.0 / 8.0, 63.0, -567.0 / 4.0, 567.0 / 2.0, -2079.0 / 4.0],
        &[
            215.0 / 48.0,
            -645.0 / 16.0,
            3225.0 / 16.0,
            -11825.0 / 16.0,
            35475.0 / 16.0,
            -92235.0 / 16.0,
            215215.0 / 16.0,
        ],
    ];
    for (k, row) in table.iter().enumerate() {
        let vk = sol.v.coeff(k);
        for (d, &want) in row.iter().enumerate() {
            assert_close(vk.coeff(&[d as u8, 0]), want, &format!("v{k} x1^{d}"));
        }
        assert_close(vk.coeff(&[2, 2]), 0.0, &format!("v{k} x1^2 y1^2"));
    }
}

#[test]
fn linear_base_g_closed_forms() {
    // g1 = (1+x)^-2, g2 = -3 (1+x)^-5, g3 = 63/4 (1+x)^-8
    let sol = linear_base();
    let forms = [(1.0, 2), (-3.0, 5), (63.0 / 4.0, 8)];
    for (k, (a, p)) in forms.into_iter().enumerate() {
        let g = sol.g.get(0, 0).coeff(k + 1);
        for d in 0..=g.valid_degree().min(6) {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let want = a * sign * binom((d + p - 1) as u64, (p - 1) as u64);
            assert_close(g.coeff(&[d as u8, 0]), want, &format!("g{} x1^{d}", k + 1));
        }
    }
}

#[test]
fn fubini_study_orders() {
    let sol = solve(
        &builtin_metric("fubini_study_chart:1,1", 14).unwrap(),
        &SolverConfig::new(1.0, 6, 14),
    )
    .unwrap();
    for (k, want) in [(1, 4.0), (2, -8.0), (3, 64.0 / 3.0)] {
        let vk = sol.v.coeff(k);
        assert_close(vk.constant_term(), want, &format!("v{k}"));
        // spatially constant
        assert!(vk.scaled_deviation(&vk.constant_like(want)) < 1e-12);
    }
    let h = sol.input.h.get(0, 0);
    let g = sol.g.get(0, 0);
    assert!(g.coeff(1).scaled_deviation(&h.scale(8.0)) < 1e-12);
    for k in 2..=3 {
        assert!(g.coeff(k).max_abs() < 1e-10, "g{k}");
    }
    let w = [0.0, 1.0, -4.0, 32.0, -256.0, 2048.0, -16384.0];
    for (k, want) in w.into_iter().enumerate() {
        assert_close(sol.w_inv.coeff(k).constant_term(), want, &format!("w_inv t^{k}"));
    }
}

#[test]
fn two_dimensional_inline_metric() {
    let h = inline(2, &["1 + x1*x2", "(x1 + i*y2)/5", "(x1 - i*y2)/5", "1 + y1^2"], 8);
    let sol = solve(&h, &SolverConfig::new(1.0, 2, 8)).unwrap();
    let z = |re: f64| C64::new(re, 0.0);
    // exponents in the order x1, y1, x2, y2
    let v_table: [(usize, [u8; 4], f64); 18] = [
        (1, [0, 0, 0, 0], -23.0 / 25.0),
        (1, [1, 0, 0, 0], 1.0 / 5.0),
        (1, [0, 1, 0, 0], 0.0),
        (1, [0, 0, 1, 0], 0.0),
        (1, [0, 0, 0, 1], 0.0),
        (1, [2, 0, 0, 0], 537.0 / 1250.0),
        (1, [1, 0, 1, 0], 4.0 / 5.0),
        (1, [0, 1, 0, 1], 0.0),
        (1, [1, 0, 0, 1], 0.0),
        (2, [0, 0, 0, 0], -7703.0 / 3750.0),
        (2, [1, 0, 0, 0], 2504.0 / 9375.0),
        (2, [0, 1, 0, 0], 0.0),
        (2, [0, 0, 1, 0], 73.0 / 375.0),
        (2, [0, 0, 0, 1], 0.0),
        (2, [2, 0, 0, 0], -37523.0 / 93750.0),
        (2, [1, 0, 1, 0], 4284.0 / 625.0),
        (2, [0, 1, 0, 1], -196.0 / 1875.0),
        (2, [1, 0, 0, 1], 0.0),
    ];
    for (k, e, want) in v_table {
        assert_close(sol.v.coeff(k).coeff(&e), want, &format!("v{k} {e:?}"));
    }
    // (order, i, j, at origin, x1 coefficient, y2 coefficient)
    let g_table: [(usize, usize, usize, f64, C64, C64); 6] = [
        (1, 0, 0, -48.0 / 25.0, z(0.0), z(0.0)),
        (1, 0, 1, -1.0, z(0.0), z(0.0)),
        (1, 1, 1, 2.0 / 25.0, z(0.0), z(0.0)),
        (2, 0, 0, -4137.0 / 1250.0, z(13.0 / 125.0), z(0.0)),
        (2, 0, 1, -2.0 / 5.0, z(73.0 / 125.0), C64::new(0.0, -46.0 / 3125.0)),
        (2, 1, 1, -537.0 / 1250.0, z(-46.0 / 3125.0), z(0.0)),
    ];
    for (k, i, j, at0, x1, y2) in g_table {
        let g = sol.g.get(i, j).coeff(k);
        assert_close(g.constant_term(), at0, &format!("g{k}[{i}{j}] at 0"));
        assert_close(g.coeff(&[1, 0, 0, 0]), x1, &format!("g{k}[{i}{j}] x1"));
        assert_close(g.coeff(&[0, 0, 0, 1]), y2, &format!("g{k}[{i}{j}] y2"));
    }
}

#[test]
fn closed_form_unit_eigenvalue() {
    let p = p_of_t(&RicciSpectrum::einstein(1, 1.0));
    let s = w_inv_closed(&p).unwrap().series(6);
    let want = [0.0, 1.0, -0.5, 0.5, -0.5, 0.5, -0.5];
    for (k, (a, b)) in s.iter().zip(want).enumerate() {
        assert!((a - b).abs() < 1e-14, "t^{k}: {a} vs {b}");
    }
}
