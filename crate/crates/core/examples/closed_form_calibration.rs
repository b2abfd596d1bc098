//! Closed-form solutions for bases with constant principal Ricci curvatures
//! and the calibration of the series solver against them.

use kcanon::closed_form::{calibrate, cw_identity_residual, p_of_t, w_inv_closed, RicciSpectrum};
use kcanon::kahler::builtin_metric;
use kcanon::{solve, SolverConfig};

fn main() -> kcanon::Result<()> {
    for eig in [vec![0.0, 0.0], vec![1.0], vec![2.0], vec![1.0, 3.0]] {
        let spec = RicciSpectrum::new(eig.clone())?;
        let p = p_of_t(&spec);
        let w = w_inv_closed(&p)?;
        println!(
            "eigenvalues {eig:?}: P = {:?}, w_inv = {:?}, identity residual {:.1e}",
            p.0,
            w.series(5),
            cw_identity_residual(&w, &p)
        );
    }

    for spec in ["fubini_study_chart:1,1", "fubini_study_chart:1,2", "fubini_study_chart:2,1"] {
        let h = builtin_metric(spec, 12)?;
        let sol = solve(&h, &SolverConfig::new(1.0, 5, 12))?;
        let cal = calibrate(&sol, 1e-9)?;
        println!("{spec}: kappa = {:?}, deviation {:.2e}", cal.kappa, cal.deviation);
        for c in &cal.candidates {
            println!("    kappa {:<5} deviation {:.2e}", c.kappa, c.deviation());
        }
    }
    Ok(())
}
