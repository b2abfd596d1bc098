//! Empirical majorant bounds: the constants A and C_m, domination of the
//! solver's coefficients on polydisc grids and a radius heuristic.

use kcanon::kahler::builtin_metric;
use kcanon::majorant::majorant_report;
use kcanon::{solve, SolverConfig};

fn main() -> kcanon::Result<()> {
    let h = builtin_metric("perturbed_flat:1,0.1,3", 20)?;
    let sol = solve(&h, &SolverConfig::new(1.0, 8, 20))?;
    let rep = majorant_report(&sol, 0.25)?;
    println!("A = {:.4e}, M = {}, sigma = {}", rep.params.a, rep.params.m_const, rep.params.sigma);
    for (m, c) in rep.c_m.iter().enumerate() {
        let worst = rep
            .domination
            .iter()
            .filter(|r| r.m == m + 1)
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min);
        println!("m = {}: C_m = {c:.4e}, smallest margin {worst:.3}", m + 1);
    }
    for c in &rep.cauchy {
        println!("Cauchy estimate, {} family, p = {}: ratio {:.3}", c.family, c.p, c.conclusion_ratio);
    }
    println!("radius estimate {:?} ({})", rep.radius_estimate, rep.radius_note);
    println!("overall: {}", if rep.pass { "pass" } else { "fail" });
    Ok(())
}
