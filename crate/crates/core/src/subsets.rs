//! Membership geometry: centred balls, lines and hyperplanes through the
//! origin, codimension-two subspaces, and intersections of these.
//!
//! Linear forms are kept gcd-reduced with the first nonzero coefficient
//! positive. Ball radii are stored as the exact floor of `r^2`, so membership
//! is decided in integer arithmetic.
//!
//! Text grammar:
//!
//! ```text
//! ball:2.5            line:1,-1          hyp:1,0,0
//! codim2:1,0,0;0,1,0  and(ball:10,line:1,-1)
//! ```

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum SubsetSpec {
    /// Closed Euclidean ball around the origin, any dimension.
    Ball {
        radius: f64,
        radius_sq_floor: u128,
    },
    /// `a1 x1 + a2 x2 = 0` in `Z^2`.
    Line2D {
        a1: i64,
        a2: i64,
    },
    /// `a . x = 0`.
    Hyperplane {
        a: Vec<i64>,
    },
    /// `a . x = 0` and `b . x = 0`, with `a` and `b` not parallel.
    Codim2 {
        a: Vec<i64>,
        b: Vec<i64>,
    },
    Intersection(Vec<SubsetSpec>),
}

/// Exact `floor(r^2)` for a finite nonnegative double.
fn floor_square(radius: f64) -> u128 {
    if radius == 0.0 {
        return 0;
    }
    let bits = radius.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let m2 = mantissa as u128 * mantissa as u128;
    let shift = 2 * exp;
    if shift >= 0 {
        if shift >= 128 || m2.leading_zeros() < shift as u32 {
            u128::MAX
        } else {
            m2 << shift
        }
    } else if -shift >= 128 {
        0
    } else {
        m2 >> (-shift)
    }
}

fn canonical_form(coeffs: &[i64]) -> Result<Vec<i64>> {
    let g = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
    if g == 0 {
        return Err(Error::InvalidSubset(
            "linear form has all coefficients zero".into(),
        ));
    }
    let first = coeffs.iter().copied().find(|&c| c != 0).unwrap_or(1);
    let g = if first < 0 { -g } else { g };
    Ok(coeffs.iter().map(|&c| c / g).collect())
}

/// True when `a` and `b` are linearly dependent over the rationals.
pub fn parallel(a: &[i64], b: &[i64]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] as i128 * b[j] as i128 != a[j] as i128 * b[i] as i128 {
                return false;
            }
        }
    }
    true
}

#[inline]
pub(crate) fn dot(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&a, &x)| a as i128 * x as i128).sum()
}

impl SubsetSpec {
    pub fn ball(radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidSubset(format!(
                "ball radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(SubsetSpec::Ball {
            radius,
            radius_sq_floor: floor_square(radius),
        })
    }

    pub fn line(a1: i64, a2: i64) -> Result<Self> {
        SubsetSpec::Line2D { a1, a2 }.canonicalize()
    }

    pub fn hyperplane(a: Vec<i64>) -> Result<Self> {
        SubsetSpec::Hyperplane { a }.canonicalize()
    }

    pub fn codim2(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        SubsetSpec::Codim2 { a, b }.canonicalize()
    }

    pub fn intersection(members: Vec<SubsetSpec>) -> Result<Self> {
        SubsetSpec::Intersection(members).canonicalize()
    }

    /// Dimension the spec is tied to, if any. Balls fit every dimension.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SubsetSpec::Ball { .. } => None,
            SubsetSpec::Line2D { .. } => Some(2),
            SubsetSpec::Hyperplane { a } => Some(a.len()),
            SubsetSpec::Codim2 { a, .. } => Some(a.len()),
            SubsetSpec::Intersection(m) => m.iter().find_map(|s| s.dim()),
        }
    }

    /// gcd-reduce every linear form and fix its sign. Validates the spec.
    pub fn canonicalize(&self) -> Result<Self> {
        Ok(match self {
            SubsetSpec::Ball { radius, .. } => SubsetSpec::ball(*radius)?,
            SubsetSpec::Line2D { a1, a2 } => {
                let c = canonical_form(&[*a1, *a2])?;
                SubsetSpec::Line2D { a1: c[0], a2: c[1] }
            }
            SubsetSpec::Hyperplane { a } => SubsetSpec::Hyperplane {
                a: canonical_form(a)?,
            },
            SubsetSpec::Codim2 { a, b } => {
                if a.len() != b.len() {
                    return Err(Error::InvalidSubset(format!(
                        "codim2 forms have lengths {} and {}",
                        a.len(),
                        b.len()
                    )));
                }
                if a.len() < 2 {
                    return Err(Error::InvalidSubset(
                        "codim2 needs dimension at least 2".into(),
                    ));
                }
                let (a, b) = (canonical_form(a)?, canonical_form(b)?);
                if parallel(&a, &b) {
                    return Err(Error::InvalidSubset("codim2 forms are parallel".into()));
                }
                SubsetSpec::Codim2 { a, b }
            }
            SubsetSpec::Intersection(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidSubset("empty intersection".into()));
                }
                let members = members
                    .iter()
                    .map(SubsetSpec::canonicalize)
                    .collect::<Result<Vec<_>>>()?;
                let dims: Vec<usize> = members.iter().filter_map(|m| m.dim()).collect();
                if dims.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::InvalidSubset(format!(
                        "intersection members disagree on dimension: {dims:?}"
                    )));
                }
                SubsetSpec::Intersection(members)
            }
        })
    }

    pub fn contains(&self, site: &[i64]) -> Result<bool> {
        if let Some(d) = self.dim() {
            if d != site.len() {
                return Err(Error::Usage(format!(
                    "site has dimension {} but subset has dimension {d}",
                    site.len()
                )));
            }
        }
        Ok(self.contains_unchecked(site))
    }

    /// Membership without the dimension check.
    #[inline]
    pub fn contains_unchecked(&self, site: &[i64]) -> bool {
        match self {
            SubsetSpec::Ball {
                radius_sq_floor, ..
            } => {
                let n2: i128 = site.iter().map(|&c| c as i128 * c as i128).sum();
                n2 as u128 <= *radius_sq_floor
            }
            SubsetSpec::Line2D { a1, a2 } => {
                *a1 as i128 * site[0] as i128 + *a2 as i128 * site[1] as i128 == 0
            }
            SubsetSpec::Hyperplane { a } => dot(a, site) == 0,
            SubsetSpec::Codim2 { a, b } => dot(a, site) == 0 && dot(b, site) == 0,
            SubsetSpec::Intersection(m) => m.iter().all(|s| s.contains_unchecked(site)),
        }
    }

    /// Members of an intersection, or the spec itself.
    pub fn members(&self) -> &[SubsetSpec] {
        match self {
            SubsetSpec::Intersection(m) => m,
            other => std::slice::from_ref(other),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix("and(").and_then(|t| t.strip_suffix(')')) {
            let members = split_members(inner)?
                .iter()
                .map(|m| SubsetSpec::parse(m))
                .collect::<Result<Vec<_>>>()?;
            return SubsetSpec::intersection(members);
        }
        let (kind, args) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("subset `{text}` lacks a `kind:` prefix")))?;
        match kind.trim() {
            "ball" => {
                let r: f64 = args
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ball radius `{args}`")))?;
                SubsetSpec::ball(r)
            }
            "line" => {
                let c = parse_ints(args)?;
                if c.len() != 2 {
                    return Err(Error::Parse(format!("line needs 2 coefficients: `{args}`")));
                }
                SubsetSpec::line(c[0], c[1])
            }
            "hyp" => SubsetSpec::hyperplane(parse_ints(args)?),
            "codim2" => {
                let (a, b) = args
                    .split_once(';')
                    .ok_or_else(|| Error::Parse(format!("codim2 needs `a;b`: `{args}`")))?;
                SubsetSpec::codim2(parse_ints(a)?, parse_ints(b)?)
            }
            other => Err(Error::Parse(format!("unknown subset kind `{other}`"))),
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
        })
        .collect()
}

/// Split the body of `and(...)` into member texts. Commas separate both
/// members and coefficients, so a top-level token that starts with a letter
/// opens a new member and numeric tokens continue the current one.
fn split_members(inner: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                tokens.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    tokens.push(&inner[start..]);
    let mut members: Vec<String> = Vec::new();
    for tok in tokens {
        let tok = tok.trim();
        if tok.starts_with(|c: char| c.is_ascii_alphabetic()) {
            members.push(tok.to_string());
        } else if let Some(last) = members.last_mut() {
            last.push(',');
            last.push_str(tok);
        } else {
            return Err(Error::Parse(format!("intersection starts with `{tok}`")));
        }
    }
    Ok(members)
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetSpec::Ball { radius, .. } => write!(f, "ball:{radius}"),
            SubsetSpec::Line2D { a1, a2 } => write!(f, "line:{a1},{a2}"),
            SubsetSpec::Hyperplane { a } => write!(f, "hyp:{}", join(a)),
            SubsetSpec::Codim2 { a, b } => write!(f, "codim2:{};{}", join(a), join(b)),
            SubsetSpec::Intersection(m) => {
                write!(f, "and(")?;
                for (i, s) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ball_membership() {
        let b = SubsetSpec::ball(2.0).unwrap();
        assert!(b.contains(&[1, 1]).unwrap());
        assert!(b.contains(&[2, 0]).unwrap());
        assert!(!b.contains(&[2, 1]).unwrap());
        // sqrt(5) is not a double, so 5 must be excluded for r = 2.236
        assert!(!SubsetSpec::ball(2.236).unwrap().contains(&[2, 1]).unwrap());
        assert!(SubsetSpec::ball(5f64.sqrt() + 1e-12)
            .unwrap()
            .contains(&[2, 1])
            .unwrap());
    }

    #[test]
    fn floor_square_is_exact() {
        assert_eq!(floor_square(2.0), 4);
        assert_eq!(floor_square(2.5), 6);
        assert_eq!(floor_square(0.5), 0);
        assert_eq!(floor_square(1e6), 1_000_000_000_000);
        // the nearest double to sqrt(2) is slightly above it
        assert_eq!(floor_square(2f64.sqrt()), 2);
    }

    #[test]
    fn line_membership() {
        let l = SubsetSpec::line(1, -1).unwrap();
        assert!(l.contains(&[3, 3]).unwrap());
        assert!(!l.contains(&[3, 2]).unwrap());
    }

    #[test]
    fn codim2_z_axis() {
        let s = SubsetSpec::codim2(vec![1, 0, 0], vec![0, 1, 0]).unwrap();
        assert!(s.contains(&[0, 0, 7]).unwrap());
        assert!(!s.contains(&[0, 1, 7]).unwrap());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            SubsetSpec::Line2D { a1: 2, a2: -2 }.canonicalize().unwrap(),
            SubsetSpec::Line2D { a1: 1, a2: -1 }
        );
        assert_eq!(
            SubsetSpec::Hyperplane { a: vec![0, -3, 0] }
                .canonicalize()
                .unwrap(),
            SubsetSpec::Hyperplane { a: vec![0, 1, 0] }
        );
        assert_eq!(
            SubsetSpec::Codim2 {
                a: vec![2, 2, 0],
                b: vec![2, -2, 0]
            }
            .canonicalize()
            .unwrap(),
            SubsetSpec::Codim2 {
                a: vec![1, 1, 0],
                b: vec![1, -1, 0]
            }
        );
    }

    #[test]
    fn invalid_specs() {
        assert!(SubsetSpec::line(0, 0).is_err());
        assert!(SubsetSpec::hyperplane(vec![0, 0, 0]).is_err());
        assert!(SubsetSpec::codim2(vec![1, 2, 3], vec![-2, -4, -6]).is_err());
        assert!(SubsetSpec::ball(-1.0).is_err());
        assert!(SubsetSpec::intersection(vec![
            SubsetSpec::line(1, 1).unwrap(),
            SubsetSpec::hyperplane(vec![1, 0, 0]).unwrap()
        ])
        .is_err());
    }

    #[test]
    fn dimension_mismatch_is_usage_error() {
        let h = SubsetSpec::hyperplane(vec![1, 0, 0]).unwrap();
        assert!(matches!(h.contains(&[0, 0]), Err(Error::Usage(_))));
    }

    #[test]
    fn grammar_round_trip() {
        for text in [
            "ball:2.5",
            "line:1,-1",
            "hyp:1,0,0",
            "codim2:1,0,0;0,1,0",
            "and(ball:10,line:1,-1)",
            "and(hyp:1,1,0,and(ball:3,codim2:1,0,0;0,0,1))",
        ] {
            let s = SubsetSpec::parse(text).unwrap();
            assert_eq!(s.to_string(), text);
            assert_eq!(SubsetSpec::parse(&s.to_string()).unwrap(), s);
        }
        assert_eq!(
            SubsetSpec::parse("line:2,-2").unwrap(),
            SubsetSpec::line(1, -1).unwrap()
        );
        assert!(SubsetSpec::parse("disc:3").is_err());
        assert!(SubsetSpec::parse("line:1").is_err());
    }

    fn arb_form(d: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-6i64..=6, d).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent_and_preserves_membership(
            (a, scale, sites) in (2usize..5).prop_flat_map(|d| (
                arb_form(d),
                prop_oneof![-5i64..=-1, 1i64..=5],
                prop::collection::vec(prop::collection::vec(-8i64..=8, d), 50),
            ))
        ) {
            let raw = SubsetSpec::Hyperplane { a: a.iter().map(|c| c * scale).collect() };
            let canon = raw.canonicalize().unwrap();
            prop_assert_eq!(canon.canonicalize().unwrap(), canon.clone());
            if let SubsetSpec::Hyperplane { a: ref c } = canon {
                prop_assert_eq!(c.iter().fold(0i64, |g, &x| g.gcd(&x)), 1);
                prop_assert!(*c.iter().find(|&&x| x != 0).unwrap() > 0);
            }
            for s in &sites {
                prop_assert_eq!(raw.contains(s).unwrap(), canon.contains(s).unwrap());
            }
        }

        #[test]
        fn intersection_is_conjunction(
            r in 0.0f64..6.0,
            a in arb_form(2),
            sites in prop::collection::vec(prop::collection::vec(-8i64..=8, 2), 60),
        ) {
            let ball = SubsetSpec::ball(r).unwrap();
            let line = SubsetSpec::line(a[0], a[1]).unwrap();
            let both = SubsetSpec::intersection(vec![ball.clone(), line.clone()]).unwrap();
            for s in &sites {
                prop_assert_eq!(
                    both.contains(s).unwrap(),
                    ball.contains(s).unwrap() && line.contains(s).unwrap()
                );
            }
        }

        #[test]
        fn balls_are_nested(r in 0.0f64..20.0, dr in 0.0f64..5.0,
                            site in prop::collection::vec(-25i64..=25, 3)) {
            let small = SubsetSpec::ball(r).unwrap();
            let big = SubsetSpec::ball(r + dr).unwrap();
            if small.contains(&site).unwrap() {
                prop_assert!(big.contains(&site).unwrap());
            }
        }
    }
}
