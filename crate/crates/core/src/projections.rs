//! Lower-dimensional walks whose zeros mark visits of the lattice walk to a
//! hyperplane or a codimension-two subspace.
//!
//! For a form `a`, the increment of `Z_n = a . S_n` on step `±e_j` is `±a_j`,
//! so `Z_n = 0` exactly when `S_n` lies on the hyperplane. With a second form
//! `b` the pair `(a . S_n, b . S_n)` is a planar walk that vanishes exactly on
//! the codimension-two subspace. When its steps only generate a proper
//! subgroup of `Z^2`, re-expressing them in a basis of that subgroup gives an
//! aperiodic planar walk with the same zero set.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::subsets::{dot, parallel, SubsetSpec};
use crate::walk::Step;

fn reduce_form(a: &[i64]) -> Result<Vec<i64>> {
    match SubsetSpec::hyperplane(a.to_vec())? {
        SubsetSpec::Hyperplane { a } => Ok(a),
        _ => unreachable!(),
    }
}

/// The one-dimensional walk `Z_n = a . S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection1D {
    a: Vec<i64>,
}

impl Projection1D {
    /// `a` is gcd-reduced on construction.
    pub fn new(a: &[i64]) -> Result<Self> {
        Ok(Projection1D { a: reduce_form(a)? })
    }

    pub fn from_subset(spec: &SubsetSpec) -> Result<Self> {
        match spec {
            SubsetSpec::Hyperplane { a } => Self::new(a),
            SubsetSpec::Line2D { a1, a2 } => Self::new(&[*a1, *a2]),
            other => Err(Error::Usage(format!(
                "no one-dimensional projection for `{other}`"
            ))),
        }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    #[inline]
    pub fn increment(&self, step: Step) -> i64 {
        step.sign() * self.a[step.axis()]
    }

    pub fn value(&self, site: &[i64]) -> i128 {
        dot(&self.a, site)
    }

    /// Step law as multiplicities out of `2d`; coinciding values are merged.
    pub fn law(&self) -> BTreeMap<i64, u32> {
        let mut law = BTreeMap::new();
        for &c in &self.a {
            *law.entry(c).or_insert(0) += 1;
            *law.entry(-c).or_insert(0) += 1;
        }
        law
    }

    pub fn probabilities(&self) -> BTreeMap<i64, f64> {
        let total = 2.0 * self.a.len() as f64;
        self.law()
            .into_iter()
            .map(|(k, m)| (k, f64::from(m) / total))
            .collect()
    }

    /// `sigma^2 = sum(a_i^2) / d`.
    pub fn variance(&self) -> f64 {
        self.a.iter().map(|&c| (c * c) as f64).sum::<f64>() / self.a.len() as f64
    }
}

/// Increment of `a . S` for one step; `a` is used as given.
pub fn project_1d(a: &[i64], step: Step) -> i64 {
    step.sign() * a[step.axis()]
}

/// The planar walk `(a . S_n, b . S_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection2D {
    a: Vec<i64>,
    b: Vec<i64>,
}

impl Projection2D {
    pub fn new(a: &[i64], b: &[i64]) -> Result<Self> {
        match SubsetSpec::codim2(a.to_vec(), b.to_vec())? {
            SubsetSpec::Codim2 { a, b } => Ok(Projection2D { a, b }),
            _ => unreachable!(),
        }
    }

    /// Forms used verbatim (no gcd reduction); still required not parallel.
    pub fn raw(a: &[i64], b: &[i64]) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::Usage("forms must have equal nonzero length".into()));
        }
        if parallel(a, b) {
            return Err(Error::Hypothesis("forms are parallel".into()));
        }
        Ok(Projection2D {
            a: a.to_vec(),
            b: b.to_vec(),
        })
    }

    pub fn from_subset(spec: &SubsetSpec) -> Result<Self> {
        match spec {
            SubsetSpec::Codim2 { a, b } => Self::new(a, b),
            other => Err(Error::Usage(format!("no planar projection for `{other}`"))),
        }
    }

    /// The image `(a_r, b_r)` of `+e_r`, one per axis.
    pub fn pairs(&self) -> Vec<[i64; 2]> {
        self.a.iter().zip(&self.b).map(|(&a, &b)| [a, b]).collect()
    }

    #[inline]
    pub fn increment(&self, step: Step) -> [i64; 2] {
        let (s, r) = (step.sign(), step.axis());
        [s * self.a[r], s * self.b[r]]
    }

    pub fn value(&self, site: &[i64]) -> [i128; 2] {
        [dot(&self.a, site), dot(&self.b, site)]
    }

    pub fn law(&self) -> BTreeMap<[i64; 2], u32> {
        let mut law = BTreeMap::new();
        for [a, b] in self.pairs() {
            *law.entry([a, b]).or_insert(0) += 1;
            *law.entry([-a, -b]).or_insert(0) += 1;
        }
        law
    }

    pub fn probabilities(&self) -> BTreeMap<[i64; 2], f64> {
        let total = 2.0 * self.a.len() as f64;
        self.law()
            .into_iter()
            .map(|(k, m)| (k, f64::from(m) / total))
            .collect()
    }
}

/// Increment of `(a . S, b . S)` for one step.
pub fn project_2d(pairs: &[[i64; 2]], step: Step) -> [i64; 2] {
    let [a, b] = pairs[step.axis()];
    [step.sign() * a, step.sign() * b]
}

fn det(u: [i64; 2], v: [i64; 2]) -> i128 {
    u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128
}

/// Extended gcd column step: returns `(g, x, y)` with `x*p + y*q = g >= 0`.
fn ext_gcd(p: i64, q: i64) -> (i64, i64, i64) {
    let e = p.extended_gcd(&q);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Lower-triangular column Hermite form `[[h11, 0], [h21, h22]]` of the
/// `2 x m` matrix whose columns are `cols`. `None` when the rank is below 2.
pub fn hermite_2xm(cols: &[[i64; 2]]) -> Option<[[i64; 2]; 2]> {
    let mut work: Vec<[i64; 2]> = cols.iter().copied().filter(|c| *c != [0, 0]).collect();
    // clear the first row into a single pivot column
    let mut pivot: Option<[i64; 2]> = None;
    let mut rest = Vec::new();
    for c in work.drain(..) {
        match pivot {
            None if c[0] != 0 => pivot = Some(c),
            None => rest.push(c),
            Some(p) if c[0] == 0 => {
                rest.push(c);
                pivot = Some(p);
            }
            Some(p) => {
                let (g, x, y) = ext_gcd(p[0], c[0]);
                let new_p = [g, x * p[1] + y * c[1]];
                let (sp, sc) = (p[0] / g, c[0] / g);
                // (sc * p - sp * c) has zero first entry; the two columns span
                // the same lattice as (p, c) since the transform is unimodular.
                rest.push([0, sc * p[1] - sp * c[1]]);
                pivot = Some(new_p);
            }
        }
    }
    let p = pivot?;
    let h22 = rest.iter().fold(0i64, |g, c| g.gcd(&c[1]));
    if h22 == 0 {
        return None;
    }
    let h21 = p[1].rem_euclid(h22);
    Some([[p[0], 0], [h21, h22]])
}

/// `gcd` of all 2x2 minors: the index of the generated subgroup in `Z^2`
/// (0 when the rank is below 2).
pub fn minor_gcd(cols: &[[i64; 2]]) -> i128 {
    let mut g: i128 = 0;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            g = g.gcd(&det(cols[i], cols[j]));
        }
    }
    g
}

/// True when the vectors generate all of `Z^2`.
pub fn generates_full_lattice(cols: &[[i64; 2]]) -> bool {
    minor_gcd(cols) == 1
}

/// Basis `(u, v)` of the subgroup generated by the planar steps, and the
/// integer coordinates of every step in that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperiodicReduction {
    pub u: [i64; 2],
    pub v: [i64; 2],
    /// `(alpha_r, beta_r)` with `(a_r, b_r) = alpha_r u + beta_r v`.
    pub coords: Vec<[i64; 2]>,
    /// Index of the subgroup in `Z^2`, `|det(u, v)|`.
    pub index: u64,
}

impl AperiodicReduction {
    pub fn is_identity(&self) -> bool {
        self.index == 1
    }

    #[inline]
    pub fn increment(&self, step: Step) -> [i64; 2] {
        let [al, be] = self.coords[step.axis()];
        [step.sign() * al, step.sign() * be]
    }

    /// Coordinates of a point of the subgroup; `None` when it is not in it.
    pub fn coordinates_of(&self, p: [i64; 2]) -> Option<[i64; 2]> {
        let dt = det(self.u, self.v);
        let al = det(p, self.v);
        let be = det(self.u, p);
        if al % dt != 0 || be % dt != 0 {
            return None;
        }
        Some([(al / dt) as i64, (be / dt) as i64])
    }

    /// `gcd` of the possible return times of the reduced walk (1 or 2).
    pub fn period(&self) -> u32 {
        for chi in [[0, 1], [1, 0], [1, 1]] {
            if self
                .coords
                .iter()
                .all(|c| (c[0] * chi[0] + c[1] * chi[1]).rem_euclid(2) == 1)
            {
                return 2;
            }
        }
        1
    }
}

/// Compute a basis of the subgroup generated by `pairs` and the step
/// coordinates in it. A pair of steps forming a basis is preferred, so that
/// e.g. `(1,1), (1,-1)` reduce to the simple planar walk.
pub fn subgroup_basis(pairs: &[[i64; 2]]) -> Result<AperiodicReduction> {
    let h =
        hermite_2xm(pairs).ok_or_else(|| Error::Hypothesis("planar steps span rank < 2".into()))?;
    let index = (h[0][0] as i128 * h[1][1] as i128).unsigned_abs() as u64;
    let mut basis = ([h[0][0], h[1][0]], [0, h[1][1]]);
    'search: for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if det(pairs[i], pairs[j]).unsigned_abs() == index as u128 {
                basis = (pairs[i], pairs[j]);
                break 'search;
            }
        }
    }
    let mut red = AperiodicReduction {
        u: basis.0,
        v: basis.1,
        coords: Vec::with_capacity(pairs.len()),
        index,
    };
    for &p in pairs {
        let c = red.coordinates_of(p).ok_or_else(|| Error::Numeric {
            what: "subgroup coordinates",
            residual: 1.0,
            tolerance: 0.0,
        })?;
        red.coords.push(c);
    }
    Ok(red)
}
