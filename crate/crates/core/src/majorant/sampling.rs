//! Deterministic sample points in complexified polydiscs.

use crate::jet::C64;

/// Irrational frequencies for Kronecker sequences, one per coordinate.
fn frequency(j: usize) -> f64 {
    const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
    PRIMES[j % PRIMES.len()].sqrt() + (j / PRIMES.len()) as f64 * 0.618_033_988_749_895
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// `count` points with every coordinate of modulus exactly `radius`.
pub fn torus_points(dim: usize, radius: f64, count: usize) -> Vec<Vec<C64>> {
    (0..count)
        .map(|k| {
            (0..dim)
                .map(|j| C64::from_polar(radius, 2.0 * std::f64::consts::PI * frac((k + 1) as f64 * frequency(j))))
                .collect()
        })
        .collect()
}

/// `count` points of the closed polydisc of the given radius: the first
/// half on its distinguished boundary, the rest inside.
pub fn polydisc_points(dim: usize, radius: f64, count: usize) -> Vec<Vec<C64>> {
    let on_torus = count.div_ceil(2);
    let mut pts = torus_points(dim, radius, on_torus);
    for k in 0..count - on_torus {
        pts.push(
            (0..dim)
                .map(|j| {
                    let u = frac((k + 1) as f64 * frequency(j + dim));
                    let th = 2.0 * std::f64::consts::PI * frac((k + 1) as f64 * frequency(j));
                    C64::from_polar(radius * u.sqrt(), th)
                })
                .collect(),
        );
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_lie_where_claimed() {
        for p in torus_points(4, 0.3, 20) {
            assert!(p.iter().all(|z| (z.norm() - 0.3).abs() < 1e-15));
        }
        let pts = polydisc_points(2, 0.5, 11);
        assert_eq!(pts.len(), 11);
        assert!(pts.iter().flatten().all(|z| z.norm() <= 0.5 + 1e-15));
        assert_eq!(pts, polydisc_points(2, 0.5, 11));
    }
}
