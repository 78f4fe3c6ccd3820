//! Gauss-Legendre helpers and the exponentially scaled Bessel function `e^{-x} I_0(x)`.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;

/// Nodes and weights of an `n`-point Gauss-Legendre rule mapped to `[a, b]`.
pub fn gl_rule(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(n.try_into().expect("rule needs at least one node"));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.into_node_weight_pairs()
        .into_vec()
        .into_iter()
        .map(|(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Integrate `f` over `[a, b]` split into `panels` equal pieces with `n` nodes each.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let unit = gl_rule(n, 0.0, 1.0);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mut s = 0.0;
        for &(x, w) in &unit {
            s += w * f(lo + x * h);
        }
        total += s * h;
    }
    total
}

/// `e^{-x} I_0(x)` for `x >= 0`.
///
/// Small arguments use the trapezoid rule on `(1/pi) int_0^pi exp(x (cos t - 1)) dt`,
/// which converges geometrically for a periodic analytic integrand; large ones
/// use the asymptotic series truncated at its smallest term.
pub fn scaled_i0(x: f64) -> f64 {
    assert!(x >= 0.0, "scaled_i0 needs x >= 0");
    if x <= 30.0 {
        let m = 128;
        let h = PI / m as f64;
        let mut s = 0.5 * (1.0 + (-2.0 * x).exp());
        for j in 1..m {
            s += (x * ((j as f64 * h).cos() - 1.0)).exp();
        }
        s / m as f64
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let c = (2 * k - 1) as f64;
            let next = term * c * c / (8.0 * k as f64 * x);
            if next.abs() > term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn series_scaled_i0(x: f64) -> f64 {
        // power series sum (x^2/4)^k / (k!)^2, fine for moderate x
        let q = x * x / 4.0;
        let (mut t, mut s) = (1.0, 1.0);
        for k in 1..200 {
            t *= q / (k as f64 * k as f64);
            s += t;
        }
        s * (-x).exp()
    }

    #[test]
    fn bessel_matches_series() {
        for &x in &[0.0, 0.3, 1.0, 5.0, 12.5, 29.0, 30.0] {
            assert_relative_eq!(scaled_i0(x), series_scaled_i0(x), max_relative = 1e-13);
        }
        // both branches near the switch
        assert_relative_eq!(scaled_i0(30.0), scaled_i0(30.000001), max_relative = 1e-6);
        assert_relative_eq!(
            scaled_i0(45.0),
            series_scaled_i0(45.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn gl_integrates_polynomials() {
        let v = gl_integrate(|x| x.powi(7), 0.0, 2.0, 3, 5);
        assert_relative_eq!(v, 32.0, max_relative = 1e-13);
    }
}
