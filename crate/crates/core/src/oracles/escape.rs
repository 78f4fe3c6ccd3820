//! Escape probabilities `gamma_d(n)`, `gamma_d` and the rate `lambda_d`.

use super::quadrature::{gl_integrate, scaled_i0};
use super::returns::first_return_law;
use crate::error::{Error, Result};

const DYADIC_PANELS: i32 = 40;

/// Expected number of visits to the origin, `G_d = sum_k P_k(0,0)`, for `d >= 3`.
///
/// Uses `sum_k P_k = int_0^inf (e^{-t/d} I_0(t/d))^d dt`, the Laplace form of
/// the generating function, integrated on dyadic panels with an analytic tail.
pub fn green_total(d: usize) -> Result<f64> {
    if d <= 2 {
        return Err(Error::Recurrent(d));
    }
    let f = |x: f64| scaled_i0(x).powi(d as i32);
    let mut s = gl_integrate(f, 0.0, 1.0, 4, 24);
    for k in 0..DYADIC_PANELS {
        let a = 2f64.powi(k);
        s += gl_integrate(f, a, 2.0 * a, 2, 24);
    }
    // (e^{-x} I_0)^d = (2 pi x)^{-d/2} (1 + c1/x + c2/x^2 + ...)
    let x = 2f64.powi(DYADIC_PANELS);
    let df = d as f64;
    let c1 = df / 8.0;
    let c2 = df * 9.0 / 128.0 + df * (df - 1.0) / 2.0 / 64.0;
    let h = df / 2.0;
    let tail = (2.0 * std::f64::consts::PI).powf(-h)
        * (x.powf(1.0 - h) / (h - 1.0) + c1 * x.powf(-h) / h + c2 * x.powf(-h - 1.0) / (h + 1.0));
    Ok(df * (s + tail))
}

/// `gamma_d(n) = 1 - sum_{k<n} f_k` for `n = 0..=n_max`; entries 0 and 1 equal 1.
pub fn escape_profile(d: usize, n_max: usize) -> Result<Vec<f64>> {
    let law = first_return_law(d, n_max.max(2))?;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    let mut acc = 0.0;
    for n in 1..=n_max {
        acc += law.f[n - 1];
        out.push(1.0 - acc);
    }
    Ok(out)
}

/// `-1 / log(1 - gamma)`.
pub fn lambda_from_gamma(gamma: f64) -> f64 {
    -1.0 / (-gamma).ln_1p()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct EscapeConstants {
    pub d: usize,
    /// `gamma_n[n] = gamma_d(n)`
    pub gamma_n: Vec<f64>,
    pub gamma: f64,
    pub lambda: f64,
}

impl EscapeConstants {
    /// Largest `gamma_d(n) - gamma_d` violation of the strict bracket, if any.
    pub fn bracket_violation(&self) -> Option<(usize, f64)> {
        self.gamma_n
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &g)| g <= self.gamma)
            .map(|(n, &g)| (n, g - self.gamma))
    }
}

pub fn escape_constants(d: usize, n_max: usize) -> Result<EscapeConstants> {
    let g = green_total(d)?;
    let gamma = 1.0 / g;
    Ok(EscapeConstants {
        d,
        gamma_n: escape_profile(d, n_max)?,
        gamma,
        lambda: lambda_from_gamma(gamma),
    })
}
