use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Points and weights for `int_{R^2} f dx dy` under `r^2 = s / (1 - s)`,
/// `dx dy = ds dtheta / (2 (1 - s)^2)`: composite Gauss-Legendre in `s`
/// (`panels x order` nodes) times the trapezoid rule in `theta`.
pub(crate) fn plane_rule(panels: usize, order: usize, angles: usize) -> Vec<([f64; 2], f64)> {
    let (gx, gw) = gauss_legendre(order);
    let mut out = Vec::with_capacity(panels * order * angles);
    let h = 1.0 / panels as f64;
    for p in 0..panels {
        let a = p as f64 * h;
        for (x, w) in gx.iter().zip(&gw) {
            let s = a + 0.5 * h * (x + 1.0);
            let ws = 0.5 * h * w / (2.0 * (1.0 - s) * (1.0 - s));
            let r = (s / (1.0 - s)).sqrt();
            for k in 0..angles {
                let th = 2.0 * PI * k as f64 / angles as f64;
                out.push(([r * th.cos(), r * th.sin()], ws * 2.0 * PI / angles as f64));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 14 monomial: int x^14 = 2/15
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn odd_order_has_zero_node() {
        let (x, _) = gauss_legendre(5);
        assert!(x[2].abs() < 1e-15);
    }

    #[test]
    fn plane_area_of_sphere() {
        // int dx dy / (1 + r^2)^2 = pi
        let s: f64 = plane_rule(16, 16, 8)
            .iter()
            .map(|(p, w)| w / (1.0 + p[0] * p[0] + p[1] * p[1]).powi(2))
            .sum();
        assert!((s - PI).abs() < 1e-12, "{s}");
    }
}
