//! The curvature of the circle bundle over the sphere integrates to -2,
//! minus the first Chern class of CP^1.

use kcanon::kahler::builtin_metric;
use kcanon::verifier::curvature_and_class;
use kcanon::{solve, SolverConfig};

fn main() -> kcanon::Result<()> {
    for scale in [1.0, 0.5, 3.0] {
        let h = builtin_metric(&format!("fubini_study_chart:1,{scale}"), 12)?;
        let sol = solve(&h, &SolverConfig::new(1.0, 4, 12))?;
        let rep = curvature_and_class(&sol, 1e-9)?;
        let ci = rep.class_integral.expect("computed for the sphere");
        println!(
            "scale {scale}: int F/2pi = {:.9} (raw {:.6}, fibre factor {}), {} points, dF residual {:.1e}",
            ci.value,
            ci.raw,
            ci.fibre_factor,
            ci.quadrature_points,
            rep.closedness.max_residual()
        );
    }
    Ok(())
}
