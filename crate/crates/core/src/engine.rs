//! The lineup-fan engine: recursive subdivision of a test cone into maximal
//! cones indexed by lineups, with candidate pruning through upper order
//! ideals, deterministic parallel traversal, ray extraction/certification,
//! H-representation assembly, and symmetry expansion of orbit counts.

use std::fs;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cone::DdState;
use crate::config::{
    occupation_vector, symmetry_elements, symmetry_order, test_cone, top_r_values,
    PointConfiguration, TestCone, WeightVector,
};
use crate::error::{Error, Result};
use crate::linalg::{affine_hull, is_zero_vec_int, to_primitive_integer, to_rational_vec, SpanReducer};
use crate::poset::{Poset, UpperIdeal};
use crate::ranking::{is_uncoarsenable, ranking_of};
use crate::rational::{format_rational, parse_bigint, Rational};

/// Resource guards for an enumeration run.
#[derive(Clone, Debug, Default)]
pub struct EngineOptions {
    /// Maximum number of cone-extension attempts.
    pub node_cap: Option<u64>,
    /// Wall-clock limit.
    pub time_cap: Option<Duration>,
}

/// One node of the recursion: a partial lineup, the upper ideal of points
/// placed so far, and the cone of functionals inducing exactly this prefix.
#[derive(Clone, Debug)]
pub struct LineupNode {
    pub lineup: Vec<usize>,
    pub ideal: UpperIdeal,
    pub state: DdState,
}

/// A depth-`r` node reduced to its serializable geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanNode {
    pub lineup: Vec<usize>,
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
    pub ineqs: Vec<Vec<BigInt>>,
}

/// All maximal cones of the r-lineup fan restricted to the test cone, in
/// lexicographic lineup order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineupFan {
    pub r: usize,
    pub nodes: Vec<FanNode>,
}

struct Ctx<'a> {
    c: &'a PointConfiguration,
    poset: &'a Poset,
    r: usize,
    counter: AtomicU64,
    node_cap: Option<u64>,
    deadline: Option<Instant>,
}

impl Ctx<'_> {
    fn tick(&self) -> Result<()> {
        let used = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(cap) = self.node_cap {
            if used > cap {
                return Err(Error::CapExceeded(format!(
                    "extension budget of {cap} nodes exhausted"
                )));
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(Error::CapExceeded("time budget exhausted".to_string()));
            }
        }
        Ok(())
    }
}

fn candidate_poset(c: &PointConfiguration) -> Poset {
    c.poset.clone().unwrap_or_else(|| Poset::antichain(c.n()))
}

/// The root of the recursion: empty lineup, empty ideal, the full test cone.
pub fn root_node(t: &TestCone, poset: &Poset) -> LineupNode {
    let mut state = DdState::universe(t.ambient);
    for row in &t.rows {
        state.insert(row);
    }
    LineupNode {
        lineup: Vec::new(),
        ideal: UpperIdeal::empty(poset),
        state,
    }
}

/// The unique depth-1 node when the configuration has a single maximal
/// point under the test cone; errors when the top of the order is ambiguous.
pub fn base_node(c: &PointConfiguration) -> Result<LineupNode> {
    let poset = candidate_poset(c);
    let t = test_cone(c);
    let root = root_node(&t, &poset);
    let cands = root.ideal.candidates();
    if cands.len() != 1 {
        return Err(Error::invalid(format!(
            "no unique top point: {} candidates at the root",
            cands.len()
        )));
    }
    extend(c, &poset, &root, cands[0])
        .ok_or_else(|| Error::invalid("top candidate yields a degenerate cone"))
}

/// Attempts to place `u` next: intersects the node cone with the halfspaces
/// putting `u` above every other current candidate, and accepts iff the
/// result still has full dimension. Rays are updated incrementally; rows
/// tight on no ray are pruned afterwards.
pub fn extend(
    c: &PointConfiguration,
    poset: &Poset,
    node: &LineupNode,
    u: usize,
) -> Option<LineupNode> {
    let mut state = node.state.clone();
    let mut removed_any = false;
    for u2 in node.ideal.candidates() {
        if u2 == u {
            continue;
        }
        let diff: Vec<Rational> = c.points[u]
            .iter()
            .zip(&c.points[u2])
            .map(|(a, b)| a - b)
            .collect();
        let row = to_primitive_integer(&diff);
        let out = state.insert(&row);
        removed_any |= out.removed > 0;
    }
    // Dimension can only drop when some ray was cut away; otherwise the
    // parent's full dimension carries over.
    if removed_any && state.generator_rank() != state.ambient {
        return None;
    }
    state.prune_redundant();
    let ideal = node.ideal.add(poset, u).expect("u is a candidate");
    let mut lineup = node.lineup.clone();
    lineup.push(u);
    Some(LineupNode {
        lineup,
        ideal,
        state,
    })
}

fn fan_node(node: &LineupNode) -> FanNode {
    FanNode {
        lineup: node.lineup.clone(),
        rays: node.state.canonical_rays(),
        lineality: node.state.canonical_lineality(),
        ineqs: node.state.rows.clone(),
    }
}

fn explore<T, F>(ctx: &Ctx, node: &LineupNode, depth: usize, f: &F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&LineupNode) -> T + Sync,
{
    if depth == ctx.r {
        return Ok(vec![f(node)]);
    }
    let cands = node.ideal.candidates();
    let parts: Result<Vec<Vec<T>>> = cands
        .par_iter()
        .map(|&u| {
            ctx.tick()?;
            match extend(ctx.c, ctx.poset, node, u) {
                Some(child) => explore(ctx, &child, depth + 1, f),
                None => Ok(Vec::new()),
            }
        })
        .collect();
    Ok(parts?.into_iter().flatten().collect())
}

fn validate_r(c: &PointConfiguration, r: usize) -> Result<()> {
    if r < 1 || r > c.n() {
        return Err(Error::invalid(format!(
            "lineup length {r} out of range 1..={}",
            c.n()
        )));
    }
    Ok(())
}

fn make_ctx<'a>(
    c: &'a PointConfiguration,
    poset: &'a Poset,
    r: usize,
    opts: &EngineOptions,
) -> Ctx<'a> {
    Ctx {
        c,
        poset,
        r,
        counter: AtomicU64::new(0),
        node_cap: opts.node_cap,
        deadline: opts.time_cap.map(|d| Instant::now() + d),
    }
}

/// Enumerates all depth-`r` nodes (depth-first, deterministic order).
pub fn enumerate(c: &PointConfiguration, r: usize, opts: &EngineOptions) -> Result<LineupFan> {
    validate_r(c, r)?;
    let poset = candidate_poset(c);
    let t = test_cone(c);
    let ctx = make_ctx(c, &poset, r, opts);
    let root = root_node(&t, &poset);
    let nodes = explore(&ctx, &root, 0, &fan_node)?;
    Ok(LineupFan { r, nodes })
}

/// Counts depth-`r` nodes without materializing them.
pub fn enumerate_count(c: &PointConfiguration, r: usize, opts: &EngineOptions) -> Result<u64> {
    validate_r(c, r)?;
    let poset = candidate_poset(c);
    let t = test_cone(c);
    let ctx = make_ctx(c, &poset, r, opts);
    let root = root_node(&t, &poset);
    let ones = explore(&ctx, &root, 0, &|_| 1u64)?;
    Ok(ones.len() as u64)
}

// ---------------------------------------------------------------------------
// Frontier checkpointing: breadth-first enumeration that serializes the
// complete frontier after every level, and resumes from such a file.

const FRONTIER_FORMAT: &str = "lineup-forge-frontier";
const FRONTIER_VERSION: u64 = 1;

fn int_rows_json(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn parse_int_rows(v: &Value, what: &str) -> Result<Vec<Vec<BigInt>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::parse(format!("{what}: expected an array of rows")))?;
    arr.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::parse(format!("{what}: expected an array row")))?
                .iter()
                .map(|x| {
                    parse_bigint(
                        x.as_str()
                            .ok_or_else(|| Error::parse(format!("{what}: expected a string entry")))?,
                    )
                })
                .collect()
        })
        .collect()
}

fn write_frontier(
    path: &Path,
    c: &PointConfiguration,
    r: usize,
    depth: usize,
    frontier: &[LineupNode],
) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        let header = json!({
            "format": FRONTIER_FORMAT,
            "version": FRONTIER_VERSION,
            "config": c.name,
            "r": r,
            "depth": depth,
        });
        writeln!(out, "{header}")?;
        for node in frontier {
            let line = json!({
                "lineup": node.lineup.iter().map(|&i| c.labels[i].clone()).collect::<Vec<_>>(),
                "ideal": ideal_members_sorted(&node.ideal),
                "rays": int_rows_json(&node.state.canonical_rays()),
                "lineality": int_rows_json(&node.state.canonical_lineality()),
                "ineqs": int_rows_json(&node.state.rows),
            });
            writeln!(out, "{line}")?;
        }
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_frontier(
    path: &Path,
    c: &PointConfiguration,
    poset: &Poset,
    r: usize,
) -> Result<(Vec<LineupNode>, usize)> {
    let file = fs::File::open(path)?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::parse("empty frontier file"))??;
    let header: Value = serde_json::from_str(&header_line)?;
    if header["format"] != FRONTIER_FORMAT || header["version"] != FRONTIER_VERSION {
        return Err(Error::parse("unrecognized frontier file header"));
    }
    if header["config"] != c.name.as_str() {
        return Err(Error::parse(format!(
            "frontier belongs to configuration {}, not {}",
            header["config"], c.name
        )));
    }
    if header["r"] != r as u64 {
        return Err(Error::parse("frontier was written for a different lineup length"));
    }
    let depth = header["depth"]
        .as_u64()
        .ok_or_else(|| Error::parse("frontier header lacks depth"))? as usize;
    let mut frontier = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line)?;
        let labels = v["lineup"]
            .as_array()
            .ok_or_else(|| Error::parse("frontier node lacks lineup"))?;
        let mut lineup = Vec::with_capacity(labels.len());
        for l in labels {
            let s = l
                .as_str()
                .ok_or_else(|| Error::parse("lineup label is not a string"))?;
            lineup.push(
                c.index_of_label(s)
                    .ok_or_else(|| Error::parse(format!("unknown label {s:?}")))?,
            );
        }
        if lineup.len() != depth {
            return Err(Error::parse("frontier node depth mismatch"));
        }
        // The ideal is replayed from the lineup; the stored mask is a check.
        let mut ideal = UpperIdeal::empty(poset);
        for &e in &lineup {
            ideal = ideal.add(poset, e).map_err(|_| {
                Error::parse("stored lineup does not replay into a valid ideal")
            })?;
        }
        let stored_ideal: Vec<u64> = v["ideal"]
            .as_array()
            .ok_or_else(|| Error::parse("frontier node lacks ideal"))?
            .iter()
            .map(|x| x.as_u64().ok_or_else(|| Error::parse("ideal entry not an integer")))
            .collect::<Result<_>>()?;
        let replayed: Vec<u64> = ideal_members_sorted(&ideal);
        if replayed != stored_ideal {
            return Err(Error::parse("frontier ideal mask disagrees with its lineup"));
        }
        // The cone state is rebuilt by reinserting the stored rows; the
        // stored generators double as an integrity check.
        let mut state = DdState::universe(c.dim);
        for row in parse_int_rows(&v["ineqs"], "ineqs")? {
            state.insert(&row);
        }
        if state.canonical_rays() != parse_int_rows(&v["rays"], "rays")?
            || state.canonical_lineality() != parse_int_rows(&v["lineality"], "lineality")?
        {
            return Err(Error::parse("frontier cone fails its integrity check"));
        }
        frontier.push(LineupNode {
            lineup,
            ideal,
            state,
        });
    }
    Ok((frontier, depth))
}

fn ideal_members_sorted(ideal: &UpperIdeal) -> Vec<u64> {
    ideal.members().iter_ones().map(|i| i as u64).collect()
}

/// Breadth-first enumeration that can persist its frontier after each level
/// (`checkpoint`) and continue from a persisted frontier (`resume`).
pub fn enumerate_with_checkpoint(
    c: &PointConfiguration,
    r: usize,
    opts: &EngineOptions,
    checkpoint: Option<&Path>,
    resume: Option<&Path>,
) -> Result<LineupFan> {
    validate_r(c, r)?;
    let poset = candidate_poset(c);
    let t = test_cone(c);
    let ctx = make_ctx(c, &poset, r, opts);
    let (mut frontier, mut depth) = match resume {
        Some(path) => read_frontier(path, c, &poset, r)?,
        None => (vec![root_node(&t, &poset)], 0),
    };
    while depth < r {
        let parts: Result<Vec<Vec<LineupNode>>> = frontier
            .par_iter()
            .map(|node| {
                let mut children = Vec::new();
                for u in node.ideal.candidates() {
                    ctx.tick()?;
                    if let Some(child) = extend(c, &poset, node, u) {
                        children.push(child);
                    }
                }
                Ok(children)
            })
            .collect();
        frontier = parts?.into_iter().flatten().collect();
        depth += 1;
        if let Some(path) = checkpoint {
            write_frontier(path, c, r, depth, &frontier)?;
        }
    }
    Ok(LineupFan {
        r,
        nodes: frontier.iter().map(fan_node).collect(),
    })
}

// ---------------------------------------------------------------------------
// Fan post-processing.

/// Serializes a fan as `{"r": …, "nodes": [{"lineup", "rays", "ineqs"}]}`,
/// with labels for lineup entries and decimal strings for integers.
pub fn fan_to_json(c: &PointConfiguration, fan: &LineupFan) -> Value {
    json!({
        "r": fan.r,
        "nodes": fan.nodes.iter().map(|n| json!({
            "lineup": n.lineup.iter().map(|&i| c.labels[i].clone()).collect::<Vec<_>>(),
            "rays": int_rows_json(&n.rays),
            "ineqs": int_rows_json(&n.ineqs),
        })).collect::<Vec<_>>(),
    })
}

/// A reducer modulo the directions on which all points take equal values
/// (the lineality of every lineup fan of the configuration).
pub fn functional_lineality_reducer(c: &PointConfiguration) -> Option<SpanReducer> {
    let hull = affine_hull(&c.points);
    if hull.equalities.is_empty() {
        return None;
    }
    let normals: Vec<Vec<BigInt>> = hull.equalities.iter().map(|(a, _)| a.clone()).collect();
    Some(SpanReducer::new(&normals, c.dim))
}

/// The union of all node-cone rays, canonicalized: reduced modulo the fan's
/// lineality, made primitive, deduplicated, sorted. Rays that fall inside
/// the lineality (pure translation directions) are dropped.
pub fn extract_rays(c: &PointConfiguration, fan: &LineupFan) -> Vec<Vec<BigInt>> {
    let reducer = functional_lineality_reducer(c);
    let mut out = std::collections::BTreeSet::new();
    for node in &fan.nodes {
        for ray in &node.rays {
            let v = match &reducer {
                Some(red) => red.reduce(ray),
                None => ray.clone(),
            };
            if !is_zero_vec_int(&v) {
                out.insert(v);
            }
        }
    }
    out.into_iter().collect()
}

/// True iff `y` spans a genuine ray of the r-lineup fan: its induced
/// ranking admits no realizable proper coarsening.
pub fn certify_ray(y: &[BigInt], c: &PointConfiguration, r: usize) -> Result<bool> {
    let s = ranking_of(&to_rational_vec(y), c, r);
    is_uncoarsenable(&s, c)
}

/// One facet inequality `⟨normal, x⟩ ≤ ⟨s, w⟩ + constant` of the lineup
/// polytope, under the convention that the weights sum to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityRow {
    pub normal: Vec<BigInt>,
    pub s: Vec<Rational>,
    pub constant: Rational,
}

/// An H-representation: facet rows from certified fan rays plus the
/// configuration's affine-hull equalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub config: String,
    pub r: usize,
    pub ambient: usize,
    pub inequalities: Vec<InequalityRow>,
    pub equalities: Vec<InequalityRow>,
}

/// Builds the H-representation for the given certified rays: each ray `y`
/// becomes `⟨y, x⟩ ≤ ⟨top_r_values(y), w⟩`; every affine-hull equality
/// `⟨a, x⟩ = b` becomes an equality row with constant right-hand side.
/// Inequality rows are sorted lexicographically by normal.
pub fn assemble_hrep(c: &PointConfiguration, r: usize, rays: &[Vec<BigInt>]) -> HRep {
    let mut inequalities: Vec<InequalityRow> = rays
        .iter()
        .map(|y| InequalityRow {
            normal: y.clone(),
            s: top_r_values(&to_rational_vec(y), c, r),
            constant: Rational::zero(),
        })
        .collect();
    inequalities.sort_by(|a, b| a.normal.cmp(&b.normal));
    let equalities = affine_hull(&c.points)
        .equalities
        .into_iter()
        .map(|(a, b)| InequalityRow {
            normal: a,
            s: vec![b.clone(); r],
            constant: Rational::zero(),
        })
        .collect();
    HRep {
        config: c.name.clone(),
        r,
        ambient: c.dim,
        inequalities,
        equalities,
    }
}

fn row_json(row: &InequalityRow) -> Value {
    json!({
        "y": row.normal.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "s": row.s.iter().map(format_rational).collect::<Vec<_>>(),
        "c": format_rational(&row.constant),
    })
}

pub fn hrep_to_json(h: &HRep) -> Value {
    json!({
        "config": h.config,
        "r": h.r,
        "ambient": h.ambient,
        "inequalities": h.inequalities.iter().map(row_json).collect::<Vec<_>>(),
        "equalities": h.equalities.iter().map(row_json).collect::<Vec<_>>(),
    })
}

/// Orbit expansion result: the fan's node count, the total number of
/// distinct lineups over the whole space, and (when weights are supplied)
/// every occupation vector.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub orbit_count: u64,
    pub total: u64,
    pub vertices: Option<Vec<(Vec<usize>, Vec<Rational>)>>,
}

/// An interior sample of a node cone: the sum of its rays.
pub fn interior_sample(node: &FanNode) -> Vec<Rational> {
    let dim = node
        .rays
        .first()
        .or_else(|| node.lineality.first())
        .map(|v| v.len())
        .unwrap_or(0);
    let mut p = vec![BigInt::zero(); dim];
    for ray in &node.rays {
        for (x, y) in p.iter_mut().zip(ray) {
            *x += y;
        }
    }
    to_rational_vec(&p)
}

/// Counts all lineups of the configuration by applying every symmetry group
/// element to an interior sample of every node cone and deduplicating the
/// induced lineups. Correct with nontrivial stabilizers and boundary
/// behavior — group order is never multiplied in.
pub fn expand_orbits(
    c: &PointConfiguration,
    fan: &LineupFan,
    w: Option<&WeightVector>,
    group_cap: u128,
) -> Result<Expansion> {
    let order = symmetry_order(c);
    if order > group_cap {
        return Err(Error::CapExceeded(format!(
            "symmetry group has {order} elements, over the cap of {group_cap}"
        )));
    }
    if let Some(w) = w {
        if w.len() != fan.r {
            return Err(Error::invalid("weight length differs from lineup length"));
        }
    }
    let elements = symmetry_elements(c);
    let mut lineups = std::collections::BTreeSet::new();
    for node in &fan.nodes {
        let p = interior_sample(node);
        for g in &elements {
            let y = g.apply(&p);
            let l = c
                .lineup_of(&y, fan.r)
                .expect("interior samples induce strict lineups");
            lineups.insert(l);
        }
    }
    let total = lineups.len() as u64;
    let vertices = match w {
        Some(w) => Some(
            lineups
                .iter()
                .map(|l| Ok((l.clone(), occupation_vector(c, l, w)?)))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(Expansion {
        orbit_count: fan.nodes.len() as u64,
        total,
        vertices,
    })
}

/// Dimension bookkeeping used by tests: the rank of the system of implicit
/// equalities of a fan node, computed from its stored generators.
pub fn node_dimension(node: &FanNode, ambient: usize) -> usize {
    let mut gens: Vec<Vec<BigInt>> = node.rays.clone();
    gens.extend(node.lineality.iter().cloned());
    crate::linalg::rank_int(&gens).min(ambient)
}

/// Confirms the LP-based dimension route agrees with the generator rank for
/// a node cone (used in cross-checks; the engine itself relies on ranks).
pub fn node_dimension_by_lp(node: &FanNode, ambient: usize) -> usize {
    let cone = crate::cone::Cone::from_h(ambient, Vec::new(), node.ineqs.clone());
    crate::cone::cone_dimension(&cone)
}
