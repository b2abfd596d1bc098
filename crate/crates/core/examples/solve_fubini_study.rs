//! The series solution over the round sphere.
//!
//! For the Fubini-Study chart `g(t) = h (1 + 8t)` exactly and `v` is
//! spatially constant, so every coefficient can be read at the origin.

use kcanon::kahler::builtin_metric;
use kcanon::{solve, SolverConfig};

fn main() -> kcanon::Result<()> {
    let h = builtin_metric("fubini_study_chart:1,1", 18)?;
    let sol = solve(&h, &SolverConfig::new(1.0, 8, 18))?;
    println!("reached order {} of {}", sol.reached_order, sol.config.order);
    println!(" k   v_k(0)            g_k(0)/h(0)   w_inv_k    valid degree");
    let h0 = h.h.get(0, 0).constant_term().re;
    for k in 0..=sol.reached_order {
        println!(
            "{k:2}   {:<16.10} {:<13.6} {:<10} {}",
            sol.v.coeff(k).constant_term().re,
            sol.g.get(0, 0).coeff(k).constant_term().re / h0,
            sol.w_inv.coeff(k).constant_term().re,
            sol.v.coeff(k).valid_degree()
        );
    }
    Ok(())
}
