//! Point configurations: generators for products of simplices, hypercubes,
//! planar grids, cyclic (moment-curve) configurations, and user-supplied
//! point sets, together with weights, occupation vectors, support values,
//! test cones, and symmetry descriptors.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::dot_rat;
use crate::poset::{chain_tuples, Poset};
use crate::rational::{int, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigKind {
    /// Product of simplices; `sizes[j]` = vertex count of factor `j`.
    ProductOfSimplices { sizes: Vec<usize> },
    /// The `±1` cube on `n` coordinates.
    Hypercube { n: usize },
    /// The integer grid `{1..n} × {1..m}`.
    Grid { n: usize, m: usize },
    /// Points on the moment curve.
    Cyclic,
    /// Loaded from a file or built ad hoc.
    Custom,
}

/// A labeled finite point set with optional candidate poset and a symmetry
/// descriptor derived from its kind. Immutable after construction.
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    pub name: String,
    pub kind: ConfigKind,
    pub dim: usize,
    pub labels: Vec<String>,
    pub points: Vec<Vec<Rational>>,
    /// When present, element `i` of the poset corresponds to point `i`, and
    /// poset order implies value order on the test cone.
    pub poset: Option<Poset>,
}

impl PointConfiguration {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    fn validate(self) -> Result<Self> {
        if self.labels.len() != self.points.len() {
            return Err(Error::invalid("label/point count mismatch"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &self.labels {
            if !seen.insert(l.clone()) {
                return Err(Error::invalid(format!("duplicate label {l:?}")));
            }
        }
        let mut coords = std::collections::BTreeSet::new();
        for p in &self.points {
            if p.len() != self.dim {
                return Err(Error::invalid("point dimension mismatch"));
            }
            if !coords.insert(p.clone()) {
                return Err(Error::invalid("duplicate points in configuration"));
            }
        }
        if let Some(p) = &self.poset {
            debug_assert_eq!(p.len(), self.points.len());
        }
        Ok(self)
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Inner products of `y` with every point, in point order.
    pub fn values(&self, y: &[Rational]) -> Vec<Rational> {
        self.points.iter().map(|p| dot_rat(y, p)).collect()
    }

    /// The ordered top-`r` point indices under `y`, or `None` when a tie
    /// makes the prefix ambiguous (within the first `r`, or at the boundary
    /// between positions `r` and `r+1`).
    pub fn lineup_of(&self, y: &[Rational], r: usize) -> Option<Vec<usize>> {
        let values = self.values(y);
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
        for w in order.windows(2).take(r) {
            if values[w[0]] == values[w[1]] {
                return None;
            }
        }
        order.truncate(r);
        Some(order)
    }
}

/// The product of simplices with the given per-factor vertex counts, as
/// indicator vectors in the direct sum of the factor coordinate spaces.
/// Labels are 1-based vertex tuples in lexicographic order.
pub fn product_of_simplices(sizes: &[usize]) -> PointConfiguration {
    assert!(!sizes.is_empty() && sizes.iter().all(|&s| s >= 1));
    let dim: usize = sizes.iter().sum();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let tuples = chain_tuples(sizes);
    let mut labels = Vec::with_capacity(tuples.len());
    let mut points = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let label: Vec<String> = t.iter().map(|&v| (v + 1).to_string()).collect();
        labels.push(format!("({})", label.join(",")));
        let mut p = vec![Rational::zero(); dim];
        for (j, &v) in t.iter().enumerate() {
            p[offsets[j] + v] = Rational::one();
        }
        points.push(p);
    }
    let name = format!(
        "prod-simplices:{}",
        sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    );
    PointConfiguration {
        name,
        kind: ConfigKind::ProductOfSimplices {
            sizes: sizes.to_vec(),
        },
        dim,
        labels,
        points,
        poset: Some(Poset::chain_product(sizes)),
    }
    .validate()
    .expect("generator produces a valid configuration")
}

/// Subset label string `{i1,i2,…}` for a coordinate bit mask.
pub fn subset_label(mask: usize) -> String {
    let mut parts = Vec::new();
    let mut m = mask;
    while m != 0 {
        parts.push((m.trailing_zeros() as usize + 1).to_string());
        m &= m - 1;
    }
    format!("{{{}}}", parts.join(","))
}

/// The vertices of the `±1` cube on `n` coordinates, labeled by the subset
/// of coordinates equal to `+1`; point order = subset mask ascending. The
/// candidate poset is the extended Gale order on the labels.
pub fn hypercube(n: usize) -> PointConfiguration {
    assert!(n >= 1 && n < usize::BITS as usize);
    let count = 1usize << n;
    let mut labels = Vec::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    for mask in 0..count {
        labels.push(subset_label(mask));
        points.push(
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { int(1) } else { int(-1) })
                .collect(),
        );
    }
    PointConfiguration {
        name: format!("cube:{n}"),
        kind: ConfigKind::Hypercube { n },
        dim: n,
        labels,
        points,
        poset: Some(Poset::gale(n)),
    }
    .validate()
    .expect("generator produces a valid configuration")
}

/// The coordinate-difference projection of a product of segments onto the
/// `±1` cube: vertex tuple `t` maps to the sign vector with `+1` exactly in
/// the coordinates where `t_j = 2`. The output is the canonical hypercube
/// configuration on as many coordinates as there are factors.
pub fn gamma_project(c: &PointConfiguration) -> Result<PointConfiguration> {
    match &c.kind {
        ConfigKind::ProductOfSimplices { sizes } if sizes.iter().all(|&s| s == 2) => {
            Ok(hypercube(sizes.len()))
        }
        _ => Err(Error::invalid(
            "projection requires a product of segments (all factor sizes 2)",
        )),
    }
}

/// The planar grid `{1..n} × {1..m}`, points in lexicographic order. No
/// candidate poset: enumeration runs in generic mode.
pub fn grid(n: usize, m: usize) -> PointConfiguration {
    assert!(n >= 1 && m >= 1);
    let mut labels = Vec::new();
    let mut points = Vec::new();
    for i in 1..=n {
        for j in 1..=m {
            labels.push(format!("({i},{j})"));
            points.push(vec![int(i as i64), int(j as i64)]);
        }
    }
    PointConfiguration {
        name: format!("grid:{n},{m}"),
        kind: ConfigKind::Grid { n, m },
        dim: 2,
        labels,
        points,
        poset: None,
    }
    .validate()
    .expect("generator produces a valid configuration")
}

/// Moment-curve evaluations: one point `(1, a, a², …, a^{d−1})` per
/// parameter value, labeled by the parameter. Duplicate parameters or
/// coinciding points (d = 1) are rejected.
pub fn cyclic(params: &[Rational], d: usize) -> Result<PointConfiguration> {
    if params.is_empty() || d == 0 {
        return Err(Error::invalid("need at least one parameter and d >= 1"));
    }
    let mut labels = Vec::new();
    let mut points = Vec::new();
    for a in params {
        labels.push(crate::rational::format_rational(a));
        let mut p = Vec::with_capacity(d);
        let mut pow = Rational::one();
        for _ in 0..d {
            p.push(pow.clone());
            pow *= a;
        }
        points.push(p);
    }
    let name = format!(
        "cyclic:{d}:{}",
        labels.join(",")
    );
    PointConfiguration {
        name,
        kind: ConfigKind::Cyclic,
        dim: d,
        labels,
        points,
        poset: None,
    }
    .validate()
}

#[derive(Deserialize)]
struct FilePoint {
    label: String,
    coords: Vec<String>,
}

#[derive(Deserialize)]
struct FileConfig {
    dim: usize,
    points: Vec<FilePoint>,
}

/// Parses a configuration from its JSON document form:
/// `{"dim": d, "points": [{"label": "...", "coords": ["p/q", ...]}, ...]}`.
pub fn from_json(doc: &str) -> Result<PointConfiguration> {
    let raw: FileConfig = serde_json::from_str(doc)?;
    let mut labels = Vec::new();
    let mut points = Vec::new();
    for p in raw.points {
        labels.push(p.label);
        points.push(
            p.coords
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    PointConfiguration {
        name: "file".to_string(),
        kind: ConfigKind::Custom,
        dim: raw.dim,
        labels,
        points,
        poset: None,
    }
    .validate()
}

/// A strictly decreasing weight vector. Strict construction also demands all
/// entries in the open interval (0,1) and total sum 1 — the normalization
/// under which symbolic right-hand sides are evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn strict(entries: Vec<Rational>) -> Result<Self> {
        let w = WeightVector::relaxed(entries)?;
        let one = Rational::one();
        if !w.0.iter().all(|x| x.is_positive() && *x < one) {
            return Err(Error::invalid("weights must lie strictly between 0 and 1"));
        }
        let sum: Rational = w.0.iter().cloned().sum();
        if sum != one {
            return Err(Error::invalid("weights must sum to 1"));
        }
        Ok(w)
    }

    pub fn relaxed(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("empty weight vector"));
        }
        if !entries.windows(2).all(|p| p[0] > p[1]) {
            return Err(Error::invalid("weights must be strictly decreasing"));
        }
        Ok(WeightVector(entries))
    }

    /// The standard choice `(r, r−1, …, 1)` scaled to sum 1.
    pub fn standard(r: usize) -> Self {
        assert!(r >= 1);
        let total = int((r * (r + 1) / 2) as i64);
        WeightVector(
            (1..=r)
                .rev()
                .map(|i| int(i as i64) / &total)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }
}

/// The weighted sum of the lineup's points.
pub fn occupation_vector(
    c: &PointConfiguration,
    lineup: &[usize],
    w: &WeightVector,
) -> Result<Vec<Rational>> {
    if lineup.len() != w.len() {
        return Err(Error::invalid("lineup length differs from weight length"));
    }
    let mut out = vec![Rational::zero(); c.dim];
    for (&i, wi) in lineup.iter().zip(w.entries()) {
        for (o, x) in out.iter_mut().zip(&c.points[i]) {
            *o += wi * x;
        }
    }
    Ok(out)
}

/// The `r` largest inner products of `y` with the points, sorted decreasing,
/// with multiplicity.
pub fn top_r_values(y: &[Rational], c: &PointConfiguration, r: usize) -> Vec<Rational> {
    assert!(1 <= r && r <= c.n());
    let mut values = c.values(y);
    values.sort_by(|a, b| b.cmp(a));
    values.truncate(r);
    values
}

/// The maximum of `⟨y, ·⟩` over the lineup polytope: `⟨w, top_r_values⟩`.
pub fn support_value(
    y: &[Rational],
    c: &PointConfiguration,
    r: usize,
    w: &WeightVector,
) -> Rational {
    assert_eq!(w.len(), r);
    dot_rat(w.entries(), &top_r_values(y, c, r))
}

/// The test cone: a full-dimensional fundamental domain of the symmetry
/// group acting on functionals. Products of simplices use per-factor sorted
/// chambers; hypercubes the nonnegative sorted chamber; everything else the
/// whole space.
#[derive(Clone, Debug)]
pub struct TestCone {
    pub ambient: usize,
    pub rows: Vec<Vec<BigInt>>,
}

fn chamber_rows(offset: usize, len: usize, ambient: usize) -> Vec<Vec<BigInt>> {
    let mut rows = Vec::with_capacity(len);
    let mut first = vec![BigInt::zero(); ambient];
    first[offset] = BigInt::one();
    rows.push(first);
    for i in 1..len {
        let mut row = vec![BigInt::zero(); ambient];
        row[offset + i - 1] = BigInt::from(-1);
        row[offset + i] = BigInt::one();
        rows.push(row);
    }
    rows
}

pub fn test_cone(c: &PointConfiguration) -> TestCone {
    let rows = match &c.kind {
        ConfigKind::ProductOfSimplices { sizes } => {
            let mut rows = Vec::new();
            let mut offset = 0;
            for &s in sizes {
                rows.extend(chamber_rows(offset, s, c.dim));
                offset += s;
            }
            rows
        }
        ConfigKind::Hypercube { n } => chamber_rows(0, *n, *n),
        _ => Vec::new(),
    };
    TestCone {
        ambient: c.dim,
        rows,
    }
}

/// A signed coordinate permutation `y ↦ (ε_i · y_{src[i]})_i`, the common
/// shape of all symmetry actions used here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub src: Vec<usize>,
    pub neg: Vec<bool>,
}

impl SignedPerm {
    pub fn identity(d: usize) -> Self {
        SignedPerm {
            src: (0..d).collect(),
            neg: vec![false; d],
        }
    }

    pub fn apply(&self, y: &[Rational]) -> Vec<Rational> {
        self.src
            .iter()
            .zip(&self.neg)
            .map(|(&s, &n)| if n { -y[s].clone() } else { y[s].clone() })
            .collect()
    }

    pub fn apply_int(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.src
            .iter()
            .zip(&self.neg)
            .map(|(&s, &n)| if n { -y[s].clone() } else { y[s].clone() })
            .collect()
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Order of the declared symmetry group acting on functionals.
pub fn symmetry_order(c: &PointConfiguration) -> u128 {
    match &c.kind {
        ConfigKind::ProductOfSimplices { sizes } => {
            let per_factor: u128 = sizes.iter().map(|&s| factorial(s)).product();
            let mut class_counts = std::collections::BTreeMap::new();
            for &s in sizes {
                *class_counts.entry(s).or_insert(0usize) += 1;
            }
            let swaps: u128 = class_counts.values().map(|&k| factorial(k)).product();
            per_factor * swaps
        }
        ConfigKind::Hypercube { n } => (1u128 << n) * factorial(*n),
        _ => 1,
    }
}

fn permutations_of(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

/// Every element of the symmetry group, as signed coordinate permutations.
/// For products of simplices: all per-factor coordinate permutations
/// composed with all permutations of equal-size factors. For hypercubes:
/// all signed permutations. Trivial otherwise.
pub fn symmetry_elements(c: &PointConfiguration) -> Vec<SignedPerm> {
    match &c.kind {
        ConfigKind::ProductOfSimplices { sizes } => {
            let k = sizes.len();
            let offsets: Vec<usize> = sizes
                .iter()
                .scan(0, |acc, &s| {
                    let o = *acc;
                    *acc += s;
                    Some(o)
                })
                .collect();
            let block_perms: Vec<Vec<usize>> = permutations_of(k)
                .into_iter()
                .filter(|tau| (0..k).all(|j| sizes[tau[j]] == sizes[j]))
                .collect();
            // Cartesian product of per-factor permutation choices.
            let mut per_factor: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
            for &s in sizes {
                let choices = permutations_of(s);
                let mut next = Vec::with_capacity(per_factor.len() * choices.len());
                for partial in &per_factor {
                    for ch in &choices {
                        let mut p = partial.clone();
                        p.push(ch.clone());
                        next.push(p);
                    }
                }
                per_factor = next;
            }
            let mut out = Vec::new();
            for tau in &block_perms {
                for sigmas in &per_factor {
                    let mut src = vec![0usize; c.dim];
                    for j in 0..k {
                        let jj = tau[j];
                        for i in 0..sizes[j] {
                            src[offsets[j] + i] = offsets[jj] + sigmas[jj][i];
                        }
                    }
                    out.push(SignedPerm {
                        src,
                        neg: vec![false; c.dim],
                    });
                }
            }
            out
        }
        ConfigKind::Hypercube { n } => {
            let n = *n;
            let mut out = Vec::new();
            for perm in permutations_of(n) {
                for signs in 0..(1usize << n) {
                    out.push(SignedPerm {
                        src: perm.clone(),
                        neg: (0..n).map(|i| signs >> i & 1 == 1).collect(),
                    });
                }
            }
            out
        }
        _ => vec![SignedPerm::identity(c.dim)],
    }
}
