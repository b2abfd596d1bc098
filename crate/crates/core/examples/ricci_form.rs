//! Complex Hessians and the Ricci form of built-in metrics.
//!
//! The Fubini-Study chart is Kahler-Einstein, so `h^{-1} rho` is a constant
//! multiple of the identity; a perturbed flat metric is not.

use kcanon::closed_form::ricci_spectrum;
use kcanon::kahler::{builtin_metric, ricci_form};

fn main() -> kcanon::Result<()> {
    for spec in ["flat:2", "fubini_study_chart:1,1", "fubini_study_chart:2,1", "fubini_study_chart:1,2"] {
        let h = builtin_metric(spec, 10)?;
        let rho = ricci_form(&h.h)?;
        let at0 = rho.eval(&vec![0.0; 2 * h.n()]);
        let spectrum = ricci_spectrum(&h, 1e-6)?;
        println!("{spec:<24} rho_11(0) = {:.6}  principal Ricci curvatures {:?}", at0[(0, 0)].re, spectrum.eigenvalues);
    }

    let h = builtin_metric("perturbed_flat:2,0.1,7", 10)?;
    match ricci_spectrum(&h, 1e-6) {
        Ok(s) => println!("perturbed_flat: unexpectedly constant {:?}", s.eigenvalues),
        Err(e) => println!("perturbed_flat: {e}"),
    }
    Ok(())
}
