//! Flat `key = value` experiment descriptions.
//!
//! ```text
//! # comments start with '#'
//! theorem = max-ball-line
//! d = 2
//! subset = and(ball:rn,line:1,-1)
//! compare = ball:rn
//! compare = line:1,-1
//! radius = pow:0.25
//! schedule = 1e4, 1e5, 1e6
//! walkers = 64
//! seed = 7
//! ```
//!
//! `rn` inside a subset stands for the radius `r_n` of the current path length.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subsets::SubsetSpec;
use crate::walk::MAX_STEPS;

/// Which limit statement an experiment probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    /// planar local time at the origin over `log n`, exponential limit law
    OriginLaw2d,
    /// total local time at the origin in `d >= 3`, geometric law
    OriginGeometric,
    /// tail of the planar local time at the origin against power bounds
    OriginTail2d,
    /// planar maximal local time over `(log n)^2`
    Max2d,
    /// planar line through the origin
    MaxLine,
    /// planar disc of radius `n^alpha`
    MaxBallPower,
    /// planar disc of radius `exp((log n)^beta)`
    MaxBallExplog,
    /// disc intersected with a line
    MaxBallLine,
    /// whole space, `d >= 3`
    MaxSpace,
    /// hyperplane, `d >= 3`
    MaxHyperplane,
    /// codimension-two subspace, `d >= 3`
    MaxCodim2,
    /// ball of radius `r_n`, `d >= 3`
    MaxBall,
    Custom,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 13] = [
        TheoremTag::OriginLaw2d,
        TheoremTag::OriginGeometric,
        TheoremTag::OriginTail2d,
        TheoremTag::Max2d,
        TheoremTag::MaxLine,
        TheoremTag::MaxBallPower,
        TheoremTag::MaxBallExplog,
        TheoremTag::MaxBallLine,
        TheoremTag::MaxSpace,
        TheoremTag::MaxHyperplane,
        TheoremTag::MaxCodim2,
        TheoremTag::MaxBall,
        TheoremTag::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremTag::OriginLaw2d => "origin-law-2d",
            TheoremTag::OriginGeometric => "origin-geometric",
            TheoremTag::OriginTail2d => "origin-tail-2d",
            TheoremTag::Max2d => "max-2d",
            TheoremTag::MaxLine => "max-line",
            TheoremTag::MaxBallPower => "max-ball-power",
            TheoremTag::MaxBallExplog => "max-ball-explog",
            TheoremTag::MaxBallLine => "max-ball-line",
            TheoremTag::MaxSpace => "max-space",
            TheoremTag::MaxHyperplane => "max-hyperplane",
            TheoremTag::MaxCodim2 => "max-codim2",
            TheoremTag::MaxBall => "max-ball",
            TheoremTag::Custom => "custom",
        }
    }

    pub fn statistic(self) -> Option<Statistic> {
        match self {
            TheoremTag::OriginLaw2d | TheoremTag::OriginGeometric => Some(Statistic::Distribution),
            TheoremTag::OriginTail2d => Some(Statistic::BoundCheck),
            TheoremTag::Custom => None,
            _ => Some(Statistic::MaxLocalTime),
        }
    }

    /// Normalisation that goes with the tag; `radius` decides for the disc tags.
    pub fn normalization(self, radius: Option<RadiusRule>) -> Option<Normalization> {
        Some(match self {
            TheoremTag::OriginLaw2d | TheoremTag::MaxSpace | TheoremTag::MaxHyperplane => {
                Normalization::LogN
            }
            TheoremTag::OriginGeometric => Normalization::None,
            TheoremTag::OriginTail2d
            | TheoremTag::Max2d
            | TheoremTag::MaxLine
            | TheoremTag::MaxBallPower => Normalization::Log2N,
            TheoremTag::MaxBallExplog => Normalization::Log2Rn,
            TheoremTag::MaxBallLine => match radius? {
                RadiusRule::Power(_) => Normalization::Log2N,
                RadiusRule::ExpLog(_) => Normalization::Log2Rn,
            },
            TheoremTag::MaxCodim2 => Normalization::LogLogN,
            TheoremTag::MaxBall => Normalization::LogRn,
            TheoremTag::Custom => return None,
        })
    }
}

impl FromStr for TheoremTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown theorem tag `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    MaxLocalTime,
    Distribution,
    BoundCheck,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::MaxLocalTime => "max-local-time",
            Statistic::Distribution => "distribution",
            Statistic::BoundCheck => "bound-check",
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-local-time" => Ok(Statistic::MaxLocalTime),
            "distribution" => Ok(Statistic::Distribution),
            "bound-check" => Ok(Statistic::BoundCheck),
            _ => Err(Error::Config(format!("unknown statistic `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `(log n)^2`
    Log2N,
    LogN,
    LogLogN,
    LogRn,
    /// `(log r_n)^2`
    Log2Rn,
    None,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::Log2N => "log2n",
            Normalization::LogN => "logn",
            Normalization::LogLogN => "loglogn",
            Normalization::LogRn => "logrn",
            Normalization::Log2Rn => "log2rn",
            Normalization::None => "none",
        }
    }

    /// Divisor at path length `n`; `None` where it is not positive and finite.
    pub fn value(self, n: u64, r_n: Option<f64>) -> Option<f64> {
        let ln = (n as f64).ln();
        let v = match self {
            Normalization::Log2N => ln * ln,
            Normalization::LogN => ln,
            Normalization::LogLogN => ln.ln(),
            Normalization::LogRn => r_n?.ln(),
            Normalization::Log2Rn => r_n?.ln().powi(2),
            Normalization::None => 1.0,
        };
        (v.is_finite() && v > 0.0).then_some(v)
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Normalization::Log2N,
            Normalization::LogN,
            Normalization::LogLogN,
            Normalization::LogRn,
            Normalization::Log2Rn,
            Normalization::None,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| Error::Config(format!("unknown normalization `{s}`")))
    }
}

/// How the radius `r_n` grows with the path length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusRule {
    /// `r_n = n^alpha`
    Power(f64),
    /// `r_n = exp((log n)^beta)`
    ExpLog(f64),
}

impl RadiusRule {
    /// `r_n`, with `r_0 = 0`.
    pub fn radius(self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let x = n as f64;
        match self {
            RadiusRule::Power(a) => x.powf(a),
            RadiusRule::ExpLog(b) => x.ln().powf(b).exp(),
        }
    }

    pub fn exponent(self) -> f64 {
        match self {
            RadiusRule::Power(a) | RadiusRule::ExpLog(a) => a,
        }
    }
}

impl std::fmt::Display for RadiusRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RadiusRule::Power(a) => write!(f, "pow:{a}"),
            RadiusRule::ExpLog(b) => write!(f, "explog:{b}"),
        }
    }
}

impl FromStr for RadiusRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, v) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("radius rule `{s}` needs kind:value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad radius exponent `{v}`")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Config(format!(
                "radius exponent must be positive, got {v}"
            )));
        }
        match kind.trim() {
            "pow" => Ok(RadiusRule::Power(v)),
            "explog" => Ok(RadiusRule::ExpLog(v)),
            k => Err(Error::Config(format!("unknown radius rule `{k}`"))),
        }
    }
}

/// Subset text, `all` for the whole lattice. May contain the `rn` placeholder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetTemplate(pub String);

impl SubsetTemplate {
    pub fn is_all(&self) -> bool {
        self.0 == "all"
    }

    pub fn uses_radius(&self) -> bool {
        self.0
            .split(|c: char| !c.is_ascii_alphanumeric())
            .any(|tok| tok == "rn")
    }

    /// Concrete subset for radius `r`; `None` means the whole lattice.
    pub fn resolve(&self, r: Option<f64>) -> Result<Option<SubsetSpec>> {
        if self.is_all() {
            return Ok(None);
        }
        let text = if self.uses_radius() {
            let r = r.ok_or_else(|| Error::Config("subset uses rn but no radius rule".into()))?;
            replace_token(&self.0, "rn", &format!("{r:?}"))
        } else {
            self.0.clone()
        };
        SubsetSpec::parse(&text).map(Some)
    }
}

fn replace_token(text: &str, token: &str, with: &str) -> String {
    let mut out = String::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        out.push_str(if word == token { with } else { word });
        word.clear();
    };
    for c in text.chars() {
        if c.is_ascii_alphanumeric() || c == '.' || c == '_' {
            word.push(c);
        } else {
            flush(&mut word, &mut out);
            out.push(c);
        }
    }
    flush(&mut word, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub theorem: TheoremTag,
    pub d: usize,
    pub subset: SubsetTemplate,
    /// extra subsets tracked on the same paths
    pub compare: Vec<SubsetTemplate>,
    pub radius: Option<RadiusRule>,
    pub schedule: Vec<u64>,
    pub walkers: u64,
    pub seed: u64,
    pub statistic: Statistic,
    pub normalization: Normalization,
    /// envelope widening factor
    pub widen: f64,
    pub epsilon: f64,
    /// level `alpha` of the event `xi(0,n) >= alpha (log n)^2` in tail checks
    pub alpha: f64,
    pub delta: f64,
    pub ks_tolerance: f64,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut get: Vec<(String, String)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            get.push((k.trim().to_string(), v.trim().to_string()));
        }
        let one = |key: &str| -> Result<Option<String>> {
            let mut it = get.iter().filter(|(k, _)| k == key);
            let first = it.next().map(|(_, v)| v.clone());
            if it.next().is_some() {
                return Err(Error::Config(format!("key `{key}` given twice")));
            }
            Ok(first)
        };
        let known = [
            "theorem",
            "d",
            "subset",
            "compare",
            "radius",
            "schedule",
            "walkers",
            "seed",
            "statistic",
            "normalization",
            "widen",
            "epsilon",
            "alpha",
            "delta",
            "ks_tolerance",
        ];
        if let Some((k, _)) = get.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }
        let need = |key: &str| -> Result<String> {
            one(key)?.ok_or_else(|| Error::Config(format!("missing key `{key}`")))
        };
        let num = |key: &str, v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("`{key}`: not a number: {v}")))
        };
        let int = |key: &str, v: &str| -> Result<u64> {
            if let Ok(k) = v.parse::<u64>() {
                return Ok(k);
            }
            // scientific notation, exact below 2^53
            let x = num(key, v)?;
            if x < 0.0 || x.fract() != 0.0 || x > 9.007_199_254_740_992e15 {
                return Err(Error::Config(format!(
                    "`{key}`: not a non-negative integer: {v}"
                )));
            }
            Ok(x as u64)
        };

        let theorem: TheoremTag = need("theorem")?.parse()?;
        let radius = one("radius")?
            .map(|r| r.parse::<RadiusRule>())
            .transpose()?;
        let statistic = match one("statistic")? {
            Some(s) => s.parse()?,
            None => theorem
                .statistic()
                .ok_or_else(|| Error::Config("custom experiments need `statistic`".into()))?,
        };
        let normalization = match one("normalization")? {
            Some(s) => s.parse()?,
            None => theorem
                .normalization(radius)
                .ok_or_else(|| Error::Config("custom experiments need `normalization`".into()))?,
        };
        let schedule = need("schedule")?
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| int("schedule", s))
            .collect::<Result<Vec<_>>>()?;
        let opt = |key: &str, default: f64| -> Result<f64> {
            one(key)?.map_or(Ok(default), |v| num(key, &v))
        };
        let cfg = ExperimentConfig {
            theorem,
            d: int("d", &need("d")?)? as usize,
            subset: SubsetTemplate(need("subset")?),
            compare: get
                .iter()
                .filter(|(k, _)| k == "compare")
                .map(|(_, v)| SubsetTemplate(v.clone()))
                .collect(),
            radius,
            schedule,
            walkers: int("walkers", &need("walkers")?)?,
            seed: int("seed", &need("seed")?)?,
            statistic,
            normalization,
            widen: opt("widen", 2.0)?,
            epsilon: opt("epsilon", 0.1)?,
            alpha: opt("alpha", 0.1)?,
            delta: opt("delta", 0.5)?,
            ks_tolerance: opt("ks_tolerance", 0.05)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical text form; parsing it gives back an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "theorem = {}", self.theorem.name());
        let _ = writeln!(s, "d = {}", self.d);
        let _ = writeln!(s, "subset = {}", self.subset.0);
        for c in &self.compare {
            let _ = writeln!(s, "compare = {}", c.0);
        }
        if let Some(r) = self.radius {
            let _ = writeln!(s, "radius = {r}");
        }
        let sched: Vec<String> = self.schedule.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "schedule = {}", sched.join(", "));
        let _ = writeln!(s, "walkers = {}", self.walkers);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "statistic = {}", self.statistic.name());
        let _ = writeln!(s, "normalization = {}", self.normalization.name());
        let _ = writeln!(s, "widen = {:?}", self.widen);
        let _ = writeln!(s, "epsilon = {:?}", self.epsilon);
        let _ = writeln!(s, "alpha = {:?}", self.alpha);
        let _ = writeln!(s, "delta = {:?}", self.delta);
        let _ = writeln!(s, "ks_tolerance = {:?}", self.ks_tolerance);
        s
    }

    pub fn radius_at(&self, n: u64) -> Option<f64> {
        self.radius.map(|r| r.radius(n))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        if self.walkers == 0 {
            return bad("walkers must be at least 1".into());
        }
        if self.schedule.is_empty() {
            return bad("empty schedule".into());
        }
        if !self.schedule.windows(2).all(|w| w[0] < w[1]) {
            return bad("schedule must be strictly increasing".into());
        }
        if *self.schedule.last().unwrap() > MAX_STEPS {
            return bad(format!("path length beyond {MAX_STEPS} steps"));
        }
        if !(self.widen >= 1.0) {
            return bad("widen must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad("epsilon must lie in (0, 1)".into());
        }
        for t in std::iter::once(&self.subset).chain(&self.compare) {
            if t.uses_radius() && self.radius.is_none() {
                return bad(format!(
                    "subset `{}` uses rn but no radius rule is set",
                    t.0
                ));
            }
            if let Some(spec) = t.resolve(Some(1.0))? {
                if let Some(k) = spec.dim() {
                    if k != self.d {
                        return bad(format!(
                            "subset `{}` lives in dimension {k}, not {}",
                            t.0, self.d
                        ));
                    }
                }
            }
        }
        if let Some(expected) = self.theorem.statistic() {
            if expected != self.statistic {
                return bad(format!(
                    "{} is a {} experiment",
                    self.theorem.name(),
                    expected.name()
                ));
            }
        }
        if let Some(expected) = self.theorem.normalization(self.radius) {
            if expected != self.normalization {
                return bad(format!(
                    "{} is normalised by {}, not {}",
                    self.theorem.name(),
                    expected.name(),
                    self.normalization.name()
                ));
            }
        }
        self.validate_tag()
    }

    fn validate_tag(&self) -> Result<()> {
        use TheoremTag as T;
        let need_d = |ok: bool, what: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{} needs {what}",
                    self.theorem.name()
                )))
            }
        };
        let shape = |want: &str| -> Result<()> {
            let s = self.subset.resolve(Some(1.0))?;
            let ok = match (want, &s) {
                ("all", None) => true,
                ("origin", Some(SubsetSpec::Ball { radius, .. })) => *radius < 1.0,
                ("line", Some(SubsetSpec::Line2D { .. })) => true,
                ("hyp", Some(SubsetSpec::Hyperplane { .. })) => true,
                ("codim2", Some(SubsetSpec::Codim2 { .. })) => true,
                ("ball", Some(SubsetSpec::Ball { .. })) => self.subset.uses_radius(),
                ("ball-line", Some(SubsetSpec::Intersection(m))) => {
                    self.subset.uses_radius()
                        && m.len() == 2
                        && m.iter().any(|x| matches!(x, SubsetSpec::Ball { .. }))
                        && m.iter().any(|x| matches!(x, SubsetSpec::Line2D { .. }))
                }
                _ => false,
            };
            if ok {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{} expects a subset of kind `{want}`, got `{}`",
                    self.theorem.name(),
                    self.subset.0
                )))
            }
        };
        let power = |upper: f64| -> Result<()> {
            match self.radius {
                Some(RadiusRule::Power(a)) if a > 0.0 && a <= upper => Ok(()),
                _ => Err(Error::Config(format!(
                    "{} needs radius = pow:alpha with 0 < alpha <= {upper}",
                    self.theorem.name()
                ))),
            }
        };
        let explog = || -> Result<()> {
            match self.radius {
                Some(RadiusRule::ExpLog(b)) if (0.5..1.0).contains(&b) => Ok(()),
                _ => Err(Error::Config(format!(
                    "{} needs radius = explog:beta with 1/2 <= beta < 1",
                    self.theorem.name()
                ))),
            }
        };
        match self.theorem {
            T::OriginLaw2d | T::OriginTail2d => {
                need_d(self.d == 2, "d = 2")?;
                shape("origin")
            }
            T::OriginGeometric => {
                need_d(self.d >= 3, "d >= 3")?;
                shape("origin")
            }
            T::Max2d => {
                need_d(self.d == 2, "d = 2")?;
                shape("all")
            }
            T::MaxLine => {
                need_d(self.d == 2, "d = 2")?;
                shape("line")
            }
            T::MaxBallPower => {
                need_d(self.d == 2, "d = 2")?;
                shape("ball")?;
                power(0.5)
            }
            T::MaxBallExplog => {
                need_d(self.d == 2, "d = 2")?;
                shape("ball")?;
                explog()
            }
            T::MaxBallLine => {
                need_d(self.d == 2, "d = 2")?;
                shape("ball-line")?;
                match self.radius {
                    Some(RadiusRule::Power(_)) => power(0.5),
                    _ => explog(),
                }
            }
            T::MaxSpace => {
                need_d(self.d >= 3, "d >= 3")?;
                shape("all")
            }
            T::MaxHyperplane => {
                need_d(self.d >= 3, "d >= 3")?;
                shape("hyp")
            }
            T::MaxCodim2 => {
                need_d(self.d >= 3, "d >= 3")?;
                shape("codim2")
            }
            T::MaxBall => {
                need_d(self.d >= 3, "d >= 3")?;
                shape("ball")?;
                match self.radius {
                    Some(RadiusRule::Power(a)) if a <= 0.5 => Ok(()),
                    Some(RadiusRule::ExpLog(b)) if b < 1.0 => Ok(()),
                    _ => Err(Error::Config(
                        "max-ball needs log r_n / log n <= 1/2 eventually".into(),
                    )),
                }
            }
            T::Custom => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = "theorem = max-line\nd = 2\nsubset = line:1,-1\nschedule = 1e4, 1e5\nwalkers = 4\nseed = 1\n";

    #[test]
    fn parses_and_round_trips() {
        let c = ExperimentConfig::parse(LINE).unwrap();
        assert_eq!(c.schedule, vec![10_000, 100_000]);
        assert_eq!(c.normalization, Normalization::Log2N);
        assert_eq!(c.widen, 2.0);
        let again = ExperimentConfig::parse(&c.to_text()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn radius_placeholder() {
        let t = SubsetTemplate("and(ball:rn,line:1,-1)".into());
        assert!(t.uses_radius());
        let s = t.resolve(Some(12.5)).unwrap().unwrap();
        assert!(s.contains(&[8, 8]).unwrap() && !s.contains(&[9, 9]).unwrap());
        assert!(!SubsetTemplate("line:1,-1".into()).uses_radius());
        assert_eq!(RadiusRule::Power(0.5).radius(10_000), 100.0);
        assert_eq!(RadiusRule::Power(0.5).radius(0), 0.0);
    }

    #[test]
    fn refusals() {
        let bad = [
            LINE.replace("schedule = 1e4, 1e5", "schedule = 1e5, 1e4"),
            LINE.replace("walkers = 4", "walkers = 0"),
            LINE.replace("d = 2", "d = 3"),
            LINE.replace("subset = line:1,-1", "subset = hyp:1,0,0"),
            format!("{LINE}normalization = logn\n"),
            format!("{LINE}colour = red\n"),
            "theorem = max-ball-explog\nd = 2\nsubset = ball:rn\nradius = explog:0.4\nschedule = 10\nwalkers = 1\nseed = 0\n".into(),
            "theorem = max-ball-explog\nd = 2\nsubset = ball:rn\nradius = explog:1\nschedule = 10\nwalkers = 1\nseed = 0\n".into(),
            "theorem = max-ball-power\nd = 2\nsubset = ball:rn\nschedule = 10\nwalkers = 1\nseed = 0\n".into(),
        ];
        for text in bad {
            assert!(ExperimentConfig::parse(&text).is_err(), "{text}");
        }
        let ok = "theorem = max-ball-explog\nd = 2\nsubset = ball:rn\nradius = explog:0.5\nschedule = 10\nwalkers = 1\nseed = 0\n";
        let c = ExperimentConfig::parse(ok).unwrap();
        assert_eq!(c.normalization, Normalization::Log2Rn);
    }

    #[test]
    fn normalizers() {
        assert_eq!(Normalization::LogN.value(1, None), None);
        assert!(
            (Normalization::Log2N.value(100, None).unwrap() - 100f64.ln().powi(2)).abs() < 1e-12
        );
        assert_eq!(Normalization::LogRn.value(100, None), None);
        assert_eq!(Normalization::LogLogN.value(2, None), None);
    }
}
