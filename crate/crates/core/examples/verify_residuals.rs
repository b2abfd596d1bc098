//! Every identity the solution must satisfy, on a randomly perturbed flat
//! metric with no symmetry to hide behind.

use kcanon::kahler::builtin_metric;
use kcanon::verifier::{curvature_and_class, laplacian_moment, residual_consequence, residual_system};
use kcanon::{solve, SolverConfig};

fn main() -> kcanon::Result<()> {
    let tol = 1e-9;
    let h = builtin_metric("perturbed_flat:2,0.1,11", 20)?;
    for c in [1.0, 2.0] {
        let sol = solve(&h, &SolverConfig::new(c, 8, 20))?;
        let reports = [
            residual_system(&sol, tol)?,
            residual_consequence(&sol, tol)?,
            laplacian_moment(&sol, tol)?,
            curvature_and_class(&sol, tol)?.closedness,
        ];
        println!("c = {c}");
        for r in &reports {
            for id in &r.identities {
                let top = id.orders_checked.last().map_or(0, |o| o.0);
                println!(
                    "  {:<12} {:<12} {:<8} max residual {:.2e} through t^{top}",
                    r.check,
                    id.identity,
                    id.verdict.as_str(),
                    id.max_residual
                );
            }
        }
    }
    Ok(())
}
