//! Fault injection: a 1e-3 defect in any solved field is caught.

use kcanon::cli::scenario::Perturbation;
use kcanon::kahler::builtin_metric;
use kcanon::verifier::{laplacian_moment, residual_consequence, residual_system};
use kcanon::{solve, SolverConfig};

fn main() -> kcanon::Result<()> {
    let h = builtin_metric("perturbed_flat:2,0.1,0", 16)?;
    let clean = solve(&h, &SolverConfig::new(1.0, 6, 16))?;
    println!("clean: system {:.1e}", residual_system(&clean, 1e-9)?.max_residual());
    for p in ["v:2:1e-3", "g:2:1e-3", "w_inv:2:1e-3", "exp_u:2:1e-3"] {
        let mut sol = clean.clone();
        p.parse::<Perturbation>()?.apply(&mut sol)?;
        println!(
            "{p:<14} system {:.1e}  consequence {:.1e}  laplacian {:.1e}",
            residual_system(&sol, 1e-9)?.max_residual(),
            residual_consequence(&sol, 1e-9)?.max_residual(),
            laplacian_moment(&sol, 1e-9)?.max_residual()
        );
    }
    Ok(())
}
