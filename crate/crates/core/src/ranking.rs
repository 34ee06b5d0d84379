//! Ordered set partitions induced by linear functionals ("rankings"), with
//! exact-LP certificates for realizability and for geometric
//! uncoarsenability (the facet test for lineup polytopes).

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::lp::{LpBuilder, LpResult, LpStatus};
use crate::rational::Rational;

/// An ordered partition of all point indices into blocks of tied values,
/// decreasing, truncated at threshold `r`: the minimal prefix of blocks
/// covering `r` points, followed by at most one "everything else" block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    pub r: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl Ranking {
    /// The ranking with the lineup's points as singleton blocks and all
    /// remaining points in one trailing block.
    pub fn singletons(lineup: &[usize], n: usize, r: usize) -> Self {
        assert_eq!(lineup.len(), r);
        let mut blocks: Vec<Vec<usize>> = lineup.iter().map(|&i| vec![i]).collect();
        let used: std::collections::BTreeSet<usize> = lineup.iter().copied().collect();
        let rest: Vec<usize> = (0..n).filter(|i| !used.contains(i)).collect();
        if !rest.is_empty() {
            blocks.push(rest);
        }
        Ranking { r, blocks }
    }

    /// Index of the first block whose cumulative size reaches `r` — the last
    /// "head" block; every later block must be merged into the tail.
    fn head_len(&self) -> Option<usize> {
        let mut cum = 0;
        for (i, b) in self.blocks.iter().enumerate() {
            cum += b.len();
            if cum >= self.r {
                return Some(i + 1);
            }
        }
        None
    }

    /// Checks the ordered-set-partition and truncation-shape invariants
    /// against a configuration.
    pub fn validate(&self, c: &PointConfiguration) -> Result<usize> {
        let mut seen = vec![false; c.n()];
        for b in &self.blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty ranking block"));
            }
            for &i in b {
                if i >= c.n() || seen[i] {
                    return Err(Error::invalid("blocks are not a partition of the points"));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::invalid("blocks do not cover all points"));
        }
        if self.r < 1 || self.r > c.n() {
            return Err(Error::invalid("threshold out of range"));
        }
        let m = self.head_len().expect("blocks cover all points");
        if m != self.blocks.len() && m != self.blocks.len() - 1 {
            return Err(Error::invalid(
                "blocks past the threshold prefix must form a single trailing block",
            ));
        }
        Ok(m)
    }

    pub fn to_json(&self, c: &PointConfiguration) -> Value {
        json!({
            "r": self.r,
            "blocks": self.blocks.iter()
                .map(|b| b.iter().map(|&i| c.labels[i].clone()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, c: &PointConfiguration) -> Result<Ranking> {
        let r = v
            .get("r")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("ranking JSON lacks integer field \"r\""))? as usize;
        let blocks_v = v
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("ranking JSON lacks array field \"blocks\""))?;
        let mut blocks = Vec::new();
        for b in blocks_v {
            let labels = b
                .as_array()
                .ok_or_else(|| Error::parse("ranking block is not an array"))?;
            let mut block = Vec::new();
            for l in labels {
                let s = l
                    .as_str()
                    .ok_or_else(|| Error::parse("ranking label is not a string"))?;
                block.push(
                    c.index_of_label(s)
                        .ok_or_else(|| Error::parse(format!("unknown label {s:?}")))?,
                );
            }
            blocks.push(block);
        }
        Ok(Ranking { r, blocks })
    }
}

/// The ranking induced by `y`: level sets of `⟨y, ·⟩` in decreasing value
/// order, with everything after the threshold prefix merged into one block.
pub fn ranking_of(y: &[Rational], c: &PointConfiguration, r: usize) -> Ranking {
    assert!(1 <= r && r <= c.n());
    let values = c.values(y);
    let mut order: Vec<usize> = (0..c.n()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match levels.last_mut() {
            Some(last) if values[last[0]] == values[i] => last.push(i),
            _ => levels.push(vec![i]),
        }
    }
    let mut cum = 0;
    let mut blocks = Vec::new();
    let mut iter = levels.into_iter();
    for level in iter.by_ref() {
        cum += level.len();
        blocks.push(level);
        if cum >= r {
            break;
        }
    }
    let tail: Vec<usize> = iter.flatten().collect();
    if !tail.is_empty() {
        let mut tail = tail;
        tail.sort_unstable();
        blocks.push(tail);
    }
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    Ranking { r, blocks }
}

/// The linear system underlying both certificates: intra-block equalities
/// over the head blocks, plus one "gap coordinate" per consecutive head pair
/// and one "spread coordinate" per tail element.
struct GapSystem {
    dim: usize,
    equalities: Vec<Vec<Rational>>,
    coords: Vec<Vec<Rational>>,
    /// Number of head-gap coordinates (the rest are tail spreads).
    head_gaps: usize,
}

fn gap_system(s: &Ranking, c: &PointConfiguration, m: usize) -> GapSystem {
    let diff = |a: usize, b: usize| -> Vec<Rational> {
        c.points[a]
            .iter()
            .zip(&c.points[b])
            .map(|(x, y)| x - y)
            .collect()
    };
    let rep = |block: &[usize]| block.iter().copied().min().expect("nonempty block");
    let mut equalities = Vec::new();
    for b in s.blocks.iter().take(m) {
        let a = rep(b);
        for &other in b.iter().filter(|&&i| i != a) {
            equalities.push(diff(a, other));
        }
    }
    let mut coords = Vec::new();
    for t in 0..m.saturating_sub(1) {
        coords.push(diff(rep(&s.blocks[t]), rep(&s.blocks[t + 1])));
    }
    let head_gaps = coords.len();
    if s.blocks.len() == m + 1 {
        let a = rep(&s.blocks[m - 1]);
        for &b in &s.blocks[m] {
            coords.push(diff(a, b));
        }
    }
    GapSystem {
        dim: c.dim,
        equalities,
        coords,
        head_gaps,
    }
}

/// Maximizes the `t`-th gap (for `t < head_gaps`, that single coordinate;
/// for `t = head_gaps`, the minimum of all tail spreads) over the ranking's
/// weak region, optionally capped at 1. Uncapped programs are unbounded
/// exactly when the capped optimum is positive.
fn gap_lp(sys: &GapSystem, t: usize, capped: bool) -> LpResult {
    let n = sys.dim + 1; // y free, then the gap variable
    let alpha = sys.dim;
    let mut lp = LpBuilder::new(n);
    lp.set_nonneg(alpha);
    lp.objective_coeff(alpha, Rational::one());
    for e in &sys.equalities {
        let mut row = e.clone();
        row.resize(n, Rational::zero());
        lp.add_eq(row, Rational::zero());
    }
    for (j, g) in sys.coords.iter().enumerate() {
        let mut row = g.clone();
        row.resize(n, Rational::zero());
        let lower_is_alpha = if t < sys.head_gaps {
            j == t
        } else {
            j >= sys.head_gaps
        };
        if lower_is_alpha {
            row[alpha] = -Rational::one();
        }
        lp.add_ge(row, Rational::zero());
    }
    if capped {
        let mut cap = vec![Rational::zero(); n];
        cap[alpha] = Rational::one();
        lp.add_le(cap, Rational::one());
    }
    lp.solve()
}

/// Decides whether some functional induces exactly this ranking; on success
/// returns a certificate functional, built as the sum of one witness per
/// gap. The number of gap programs is the number of head blocks.
pub fn is_realizable(
    s: &Ranking,
    c: &PointConfiguration,
) -> Result<(bool, Option<Vec<Rational>>)> {
    let m = s.validate(c)?;
    let sys = gap_system(s, c, m);
    let mut cert = vec![Rational::zero(); c.dim];
    // One program per gap between consecutive head blocks, plus the program
    // for the gap between the last head block and the (possibly empty) tail.
    for t in 0..m {
        if t < sys.head_gaps || s.blocks.len() == m + 1 {
            let res = gap_lp(&sys, t, true);
            debug_assert_eq!(res.status, LpStatus::Optimal);
            if !res.value.is_positive() {
                return Ok((false, None));
            }
            let w = res.witness.expect("optimal program has a witness");
            for (ci, wi) in cert.iter_mut().zip(&w) {
                *ci += wi;
            }
        }
        // An empty tail makes the final gap program vacuous: skip it.
    }
    debug_assert_eq!(&ranking_of(&cert, c, s.r), s);
    Ok((true, Some(cert)))
}

/// Decides whether the ranking admits no realizable proper coarsening: for
/// every gap or spread coordinate, pinning it to zero and maximizing the sum
/// of all coordinates over the weak region must yield optimum zero. Errors
/// on non-realizable input.
pub fn is_uncoarsenable(s: &Ranking, c: &PointConfiguration) -> Result<bool> {
    let (realizable, _) = is_realizable(s, c)?;
    if !realizable {
        return Err(Error::invalid(
            "uncoarsenability is only defined for realizable rankings",
        ));
    }
    let m = s.validate(c)?;
    let sys = gap_system(s, c, m);
    let n = sys.dim;
    let total: Vec<Rational> = (0..n)
        .map(|i| {
            sys.coords
                .iter()
                .map(|g| g[i].clone())
                .sum::<Rational>()
        })
        .collect();
    for pinned in 0..sys.coords.len() {
        let mut lp = LpBuilder::new(n);
        for (i, ti) in total.iter().enumerate() {
            lp.objective_coeff(i, ti.clone());
        }
        for e in &sys.equalities {
            lp.add_eq(e.clone(), Rational::zero());
        }
        for (j, g) in sys.coords.iter().enumerate() {
            if j == pinned {
                lp.add_eq(g.clone(), Rational::zero());
            } else {
                lp.add_ge(g.clone(), Rational::zero());
            }
        }
        lp.add_le(total.clone(), Rational::one());
        let res = lp.solve();
        debug_assert_eq!(res.status, LpStatus::Optimal);
        if res.value.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}
