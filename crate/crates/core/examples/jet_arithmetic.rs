//! Truncated Taylor jets: arithmetic, transcendental functions and the
//! bookkeeping of how many degrees are still trustworthy.

use kcanon::{Jet, C64};

fn main() -> kcanon::Result<()> {
    // jets on C^1 (real variables x1, y1) up to degree 6
    let x = Jet::coordinate(1, 6, 0);
    let y = Jet::coordinate(1, 6, 1);
    let one = Jet::constant(1, 6, 1.0);

    // f = 1 + x + i y, i.e. 1 + z
    let f = one.try_add(&x)?.try_add(&y.scale(C64::i()))?;
    let log_f = f.log()?;
    println!("log(1 + z) through degree 6:");
    for (_, mi, c) in log_f.terms() {
        println!("  {mi:>12}  {c:.6}");
    }

    // exp(log f) returns f up to rounding
    let back = log_f.exp();
    println!("|exp(log f) - f| = {:e}", back.try_sub(&f)?.max_abs());

    // division is series division; 1/(1 - x) = sum x^k
    let geom = one.try_div(&one.try_sub(&x)?)?;
    println!("1/(1-x), coefficient of x^5: {}", geom.coeff(&[5, 0]).re);

    // each derivative costs one degree of validity
    let d2 = f.try_mul(&f)?.derive(0)?.derive(0)?;
    println!(
        "d^2/dx^2 (1+z)^2 = {} (valid through degree {})",
        d2.constant_term(),
        d2.valid_degree()
    );
    Ok(())
}
