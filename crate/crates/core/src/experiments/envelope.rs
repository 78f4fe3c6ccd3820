//! Reference bands for the normalised maxima, per theorem tag.

use std::f64::consts::PI;

use serde::Serialize;

use super::config::{ExperimentConfig, RadiusRule, TheoremTag};

/// Band `[lower, upper]` for the normalised statistic at one path length.
/// `lower` is a liminf-type claim and `upper` a limsup-type claim; for an
/// almost sure limit both equal the limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
    pub is_limit: bool,
}

impl Band {
    pub fn widened(self, factor: f64) -> Band {
        Band {
            lower: self.lower / factor,
            upper: self.upper * factor,
            is_limit: self.is_limit,
        }
    }

    pub fn contains(self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Constants the bands depend on.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BandInputs {
    /// `lambda_d` for `d >= 3`
    pub lambda: Option<f64>,
}

/// Unwidened band of the configured experiment at path length `n`.
pub fn band(cfg: &ExperimentConfig, inputs: BandInputs, n: u64) -> Option<Band> {
    use TheoremTag as T;
    let bounds = |lower: f64, upper: f64| {
        Some(Band {
            lower,
            upper,
            is_limit: false,
        })
    };
    let limit = |v: f64| {
        Some(Band {
            lower: v,
            upper: v,
            is_limit: true,
        })
    };
    let ln = (n as f64).ln();
    let eps = cfg.epsilon;
    match (cfg.theorem, cfg.radius) {
        (T::Max2d, _) => bounds(1.0 / (4.0 * PI), 1.0 / PI),
        (T::MaxLine, _) => bounds(1.0 / (8.0 * PI), 1.0 / (2.0 * PI)),
        (T::MaxBallPower, Some(RadiusRule::Power(a))) => bounds(4.0 * a * a / PI, 2.0 * a / PI),
        // normalised by (log n)^{2 beta}; upper edge (log n)^eps
        (T::MaxBallExplog, Some(RadiusRule::ExpLog(_))) => bounds(
            4.0 * (1.0 - eps) / PI,
            ln.powf(eps).max(4.0 * (1.0 - eps) / PI),
        ),
        (T::MaxBallLine, Some(RadiusRule::Power(a))) => {
            bounds(a * a / (2.0 * PI), 0.5f64.min(2.0 * a) / PI)
        }
        (T::MaxBallLine, Some(RadiusRule::ExpLog(_))) => bounds(
            (1.0 - eps) / (2.0 * PI),
            ln.powf(eps).max((1.0 - eps) / (2.0 * PI)),
        ),
        (T::MaxSpace, _) | (T::MaxCodim2, _) => limit(inputs.lambda?),
        (T::MaxHyperplane, _) => limit(inputs.lambda? / 2.0),
        (T::MaxBall, _) => limit(2.0 * inputs.lambda?),
        _ => None,
    }
}
