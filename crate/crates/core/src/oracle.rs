//! Independent verification routes: permutation filtering and prefix-pruned
//! search over orderings (both LP-based), and direct convex hulls of
//! occupation-vector clouds. None of these touch the cone-subdivision
//! engine, so agreement is meaningful evidence.

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{occupation_vector, PointConfiguration, WeightVector};
use crate::cone::h_from_v;
use crate::engine::{enumerate, expand_orbits, EngineOptions};
use crate::error::{Error, Result};
use crate::linalg::{dot_int_rat, rank_int, to_primitive_integer};
use crate::ranking::{is_realizable, Ranking};
use crate::rational::Rational;

const BRUTE_FORCE_POINT_CAP: usize = 8;
const HULL_TUPLE_CAP: u64 = 50_000;

/// Every total ordering of the points realizable by a linear functional,
/// found by filtering all n! permutations through the realizability LP.
/// Lexicographically sorted.
pub fn brute_force_sweeps(c: &PointConfiguration) -> Result<Vec<Vec<usize>>> {
    let n = c.n();
    if n > BRUTE_FORCE_POINT_CAP {
        return Err(Error::CapExceeded(format!(
            "brute force is capped at {BRUTE_FORCE_POINT_CAP} points, got {n}"
        )));
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let kept: Result<Vec<Option<Vec<usize>>>> = perms
        .into_par_iter()
        .map(|p| {
            let (ok, _) = is_realizable(&Ranking::singletons(&p, n, n), c)?;
            Ok(ok.then_some(p))
        })
        .collect();
    Ok(kept?.into_iter().flatten().collect())
}

/// All r-lineups, by depth-first search over prefixes with LP pruning: a
/// prefix is explored only while the ranking that pins its order (singleton
/// blocks above everything else) stays realizable. Sound because any
/// functional witnessing a lineup witnesses each of its prefixes; complete
/// because only unrealizable prefixes are cut. Lexicographically sorted.
pub fn oracle_lineups(c: &PointConfiguration, r: usize) -> Result<Vec<Vec<usize>>> {
    let n = c.n();
    if r < 1 || r > n {
        return Err(Error::invalid(format!(
            "lineup length {r} out of range 1..={n}"
        )));
    }
    fn go(
        c: &PointConfiguration,
        prefix: &[usize],
        r: usize,
    ) -> Result<Vec<Vec<usize>>> {
        if prefix.len() == r {
            return Ok(vec![prefix.to_vec()]);
        }
        let n = c.n();
        let parts: Result<Vec<Vec<Vec<usize>>>> = (0..n)
            .filter(|u| !prefix.contains(u))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|u| {
                let mut next = prefix.to_vec();
                next.push(u);
                let s = Ranking::singletons(&next, n, next.len());
                let (ok, _) = is_realizable(&s, c)?;
                if ok {
                    go(c, &next, r)
                } else {
                    Ok(Vec::new())
                }
            })
            .collect();
        Ok(parts?.into_iter().flatten().collect())
    }
    go(c, &[], r)
}

/// Vertex count of the convex hull of all occupation vectors of ordered
/// r-tuples, decided by exact duality: lift each point p to (1, p), compute
/// the facet normals of the generated cone, and count the points whose
/// active normals have corank 1.
pub fn hull_vertex_count(c: &PointConfiguration, r: usize, w: &WeightVector) -> Result<u64> {
    let n = c.n();
    if r < 1 || r > n {
        return Err(Error::invalid(format!(
            "lineup length {r} out of range 1..={n}"
        )));
    }
    if w.len() != r {
        return Err(Error::invalid("weight length differs from tuple length"));
    }
    let mut tuples: u64 = 1;
    for k in 0..r {
        tuples = tuples.saturating_mul((n - k) as u64);
        if tuples > HULL_TUPLE_CAP {
            return Err(Error::CapExceeded(format!(
                "more than {HULL_TUPLE_CAP} ordered tuples"
            )));
        }
    }
    let mut cloud = std::collections::BTreeSet::new();
    for tuple in (0..n).permutations(r) {
        cloud.insert(occupation_vector(c, &tuple, w)?);
    }
    let lifted_rat: Vec<Vec<Rational>> = cloud
        .iter()
        .map(|p| {
            let mut v = vec![Rational::from_integer(1.into())];
            v.extend(p.iter().cloned());
            v
        })
        .collect();
    let lifted_int: Vec<Vec<num_bigint::BigInt>> =
        lifted_rat.iter().map(|v| to_primitive_integer(v)).collect();
    let dual = h_from_v(c.dim + 1, &lifted_int, &[]);
    let corank_target = c.dim; // ambient (dim+1) minus face dimension 1
    let mut count = 0u64;
    for p in &lifted_rat {
        let mut active: Vec<Vec<num_bigint::BigInt>> = dual
            .inequalities
            .iter()
            .filter(|row| dot_int_rat(row, p).is_zero())
            .cloned()
            .collect();
        active.extend(dual.equalities.iter().cloned());
        if rank_int(&active) == corank_target {
            count += 1;
        }
    }
    Ok(count)
}

/// The outcome of pitting the engine against the oracle routes on one
/// configuration. Disagreements are recorded, not raised.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub config: String,
    pub r: usize,
    pub engine_orbits: u64,
    pub engine_total: u64,
    pub oracle_total: u64,
    pub lineup_sets_match: bool,
    pub engine_vertices: u64,
    pub hull_vertices: Option<u64>,
    pub vertex_counts_match: Option<bool>,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Runs the engine (enumerate + expand) and the oracle (prefix search, and
/// the hull route when within its cap) with the standard weights, and
/// compares lineup sets and vertex counts.
pub fn cross_validate(c: &PointConfiguration, r: usize) -> Result<ValidationReport> {
    let w = WeightVector::standard(r);
    let fan = enumerate(c, r, &EngineOptions::default())?;
    let expansion = expand_orbits(c, &fan, Some(&w), 1 << 40)?;
    let engine_vertices_list = expansion.vertices.expect("weights were supplied");
    let engine_lineups: Vec<Vec<usize>> =
        engine_vertices_list.iter().map(|(l, _)| l.clone()).collect();
    let engine_occupations: std::collections::BTreeSet<Vec<Rational>> = engine_vertices_list
        .iter()
        .map(|(_, o)| o.clone())
        .collect();

    let oracle = oracle_lineups(c, r)?;
    let lineup_sets_match = engine_lineups == oracle;
    let mut mismatches = Vec::new();
    if !lineup_sets_match {
        let engine_set: std::collections::BTreeSet<_> = engine_lineups.iter().collect();
        let oracle_set: std::collections::BTreeSet<_> = oracle.iter().collect();
        for l in engine_set.difference(&oracle_set).take(5) {
            mismatches.push(format!("engine only: {}", label_lineup(c, l)));
        }
        for l in oracle_set.difference(&engine_set).take(5) {
            mismatches.push(format!("oracle only: {}", label_lineup(c, l)));
        }
    }

    let hull_vertices = match hull_vertex_count(c, r, &w) {
        Ok(k) => Some(k),
        Err(Error::CapExceeded(_)) => None,
        Err(e) => return Err(e),
    };
    let engine_vertices = engine_occupations.len() as u64;
    let vertex_counts_match = hull_vertices.map(|h| h == engine_vertices);
    if vertex_counts_match == Some(false) {
        mismatches.push(format!(
            "hull reports {} vertices, engine occupation cloud has {engine_vertices}",
            hull_vertices.unwrap()
        ));
    }

    let pass = lineup_sets_match && vertex_counts_match.unwrap_or(true);
    Ok(ValidationReport {
        config: c.name.clone(),
        r,
        engine_orbits: expansion.orbit_count,
        engine_total: expansion.total,
        oracle_total: oracle.len() as u64,
        lineup_sets_match,
        engine_vertices,
        hull_vertices,
        vertex_counts_match,
        mismatches,
        pass,
    })
}

fn label_lineup(c: &PointConfiguration, l: &[usize]) -> String {
    l.iter()
        .map(|&i| c.labels[i].as_str())
        .collect::<Vec<_>>()
        .join(" > ")
}

pub fn report_to_json(r: &ValidationReport) -> Value {
    json!({
        "config": r.config,
        "r": r.r,
        "engine": {
            "orbits": r.engine_orbits,
            "total": r.engine_total,
            "vertices": r.engine_vertices,
        },
        "oracle": {
            "total": r.oracle_total,
            "hull_vertices": r.hull_vertices,
        },
        "lineup_sets_match": r.lineup_sets_match,
        "vertex_counts_match": r.vertex_counts_match,
        "mismatches": r.mismatches,
        "pass": r.pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{grid, hypercube, product_of_simplices};

    #[test]
    fn square_has_eight_sweeps() {
        let sweeps = brute_force_sweeps(&hypercube(2)).unwrap();
        assert_eq!(sweeps.len(), 8);
        // All four points appear first in some sweep (vertex transitivity).
        let firsts: std::collections::BTreeSet<usize> =
            sweeps.iter().map(|s| s[0]).collect();
        assert_eq!(firsts.len(), 4);
    }

    #[test]
    fn simplex_admits_every_ordering() {
        let sweeps = brute_force_sweeps(&product_of_simplices(&[3])).unwrap();
        assert_eq!(sweeps.len(), 6);
    }

    #[test]
    fn brute_force_cap() {
        assert!(matches!(
            brute_force_sweeps(&grid(3, 3)),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn prefix_search_agrees_with_brute_force() {
        for c in [
            hypercube(2),
            product_of_simplices(&[2, 3]),
            product_of_simplices(&[2, 2]),
            grid(2, 2),
        ] {
            let full = brute_force_sweeps(&c).unwrap();
            let pruned = oracle_lineups(&c, c.n()).unwrap();
            assert_eq!(full, pruned, "{}", c.name);
        }
    }

    #[test]
    fn prefixes_restrict_consistently() {
        let c = product_of_simplices(&[2, 3]);
        let longer = oracle_lineups(&c, 4).unwrap();
        let shorter = oracle_lineups(&c, 3).unwrap();
        let mut truncated: Vec<Vec<usize>> =
            longer.iter().map(|l| l[..3].to_vec()).collect();
        truncated.sort();
        truncated.dedup();
        assert_eq!(truncated, shorter);
    }

    #[test]
    fn large_grid_sweep_count() {
        // Independent of the closed-form claim; the acceptance gate compares
        // this number against the formula.
        let sweeps = oracle_lineups(&grid(3, 4), 12).unwrap();
        assert_eq!(sweeps.len(), 24);
        let small = oracle_lineups(&grid(2, 2), 4).unwrap();
        assert_eq!(small.len(), 8);
    }

    #[test]
    fn hull_vertex_counts() {
        let w8 = WeightVector::standard(8);
        assert_eq!(hull_vertex_count(&hypercube(3), 8, &w8).unwrap(), 96);
        let w4 = WeightVector::standard(4);
        assert_eq!(hull_vertex_count(&hypercube(2), 4, &w4).unwrap(), 8);
        let w3 = WeightVector::standard(3);
        assert_eq!(
            hull_vertex_count(&product_of_simplices(&[3]), 3, &w3).unwrap(),
            6
        );
        let w12 = WeightVector::standard(12);
        assert!(matches!(
            hull_vertex_count(&grid(3, 4), 12, &w12),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn cross_validation_passes() {
        for (c, r) in [
            (hypercube(2), 4),
            (product_of_simplices(&[2, 3]), 6),
            (grid(2, 2), 4),
            (product_of_simplices(&[3]), 3),
        ] {
            let report = cross_validate(&c, r).unwrap();
            assert!(report.pass, "{}: {:?}", c.name, report.mismatches);
            assert_eq!(report.engine_total, report.oracle_total);
        }
    }

    #[test]
    fn cross_validation_json_shape() {
        let report = cross_validate(&hypercube(2), 4).unwrap();
        let v = report_to_json(&report);
        assert_eq!(v["pass"], true);
        assert_eq!(v["engine"]["total"], 8);
        assert_eq!(v["oracle"]["total"], 8);
        assert_eq!(v["oracle"]["hull_vertices"], 8);
    }

    #[test]
    fn partial_lineups_on_the_cube() {
        // 4 lineups of length 1 on the square (one per vertex); 8 of length 2.
        let c = hypercube(2);
        assert_eq!(oracle_lineups(&c, 1).unwrap().len(), 4);
        assert_eq!(oracle_lineups(&c, 2).unwrap().len(), 8);
    }
}
