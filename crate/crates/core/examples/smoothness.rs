//! The metric closes up smoothly over the zero section only for c = 1;
//! otherwise the fibre has a cone singularity of angle ratio c.

use kcanon::kahler::builtin_metric;
use kcanon::verifier::smoothness_check;
use kcanon::{solve, SolverConfig};

fn main() -> kcanon::Result<()> {
    for spec in ["flat:1", "fubini_study_chart:1,1"] {
        let h = builtin_metric(spec, 8)?;
        for c in [1.0, 2.0, 4.0] {
            let sol = solve(&h, &SolverConfig::new(c, 3, 8))?;
            let s = smoothness_check(&sol, 1e-9)?;
            println!(
                "{spec:<24} c = {c}: a = {:.6} (c det h = {:.6}), cone ratio {}, {}",
                s.a,
                s.c_det_h,
                s.cone_ratio,
                if s.smooth { "smooth" } else { "cone" }
            );
        }
    }
    Ok(())
}
