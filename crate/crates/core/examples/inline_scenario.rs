//! A scenario file with an inline metric, resolved and solved in-process.

use kcanon::cli::scenario::{Overrides, Scenario};
use kcanon::solve;
use kcanon::verifier::residual_system;

const SCENARIO: &str = r#"
name = "tilted"

[metric]
n = 2
h11 = "1 + x1*x2"
h12 = "(x1 + i*y2)/5"
h22 = "1 + y1^2"

[solver]
c = 1.0
M = 4
D = 12
"#;

fn main() -> kcanon::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("tilted.toml");
    std::fs::write(&path, SCENARIO)?;

    // flags override file values, as on the command line
    let ov = Overrides {
        order: Some(5),
        ..Overrides::default()
    };
    let sc = Scenario::from_file(&path, &ov)?;
    println!("resolved: M = {}, D = {}, c = {}", sc.order, sc.degree, sc.c);

    let sol = solve(&sc.initial_data()?, &sc.solver_config())?;
    for k in 0..=sol.reached_order {
        println!("v_{k}(0) = {:.8}", sol.v.coeff(k).constant_term().re);
    }
    let r = residual_system(&sol, sc.tolerance)?;
    println!("system: {} (max residual {:.1e})", r.verdict.as_str(), r.max_residual());
    Ok(())
}
