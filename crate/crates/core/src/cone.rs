//! Polyhedral cones in halfspace form and the incremental double-description
//! conversion to generators (extreme rays + lineality).
//!
//! `DdState` is the workhorse: it maintains a minimal generator pair (rays,
//! lineality) under one-at-a-time insertion of halfspaces, with per-ray
//! tight-row bit sets driving the combinatorial adjacency test. `Cone` wraps
//! an H-description and caches the converted generators.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::linalg::{
    dot_int, is_zero_vec_int, primitive, rank_int, to_primitive_integer, to_rational_vec, Matrix,
    SpanReducer,
};
use crate::lp::{LpBuilder, LpStatus};
use crate::rational::Rational;

/// One extreme ray of the pointed part, with the set of inserted rows it
/// satisfies with equality.
#[derive(Clone, Debug)]
pub struct DdRay {
    pub v: Vec<BigInt>,
    pub tight: BitSet,
}

/// Incremental double-description state: the cone of all points satisfying
/// `⟨row, x⟩ >= 0` for every inserted row, represented by generators.
#[derive(Clone, Debug)]
pub struct DdState {
    pub ambient: usize,
    pub rows: Vec<Vec<BigInt>>,
    pub rays: Vec<DdRay>,
    pub lineality: Vec<Vec<BigInt>>,
}

/// What a single halfspace insertion did to the generator pair.
#[derive(Clone, Copy, Debug, Default)]
pub struct InsertOutcome {
    /// The halfspace cut the lineality space (dimension-preserving).
    pub lineality_cut: bool,
    /// Number of rays strictly violating the new row (now removed).
    pub removed: usize,
    /// Number of newly created boundary rays.
    pub added: usize,
    /// The row was skipped entirely (zero row or exact duplicate).
    pub skipped: bool,
}

impl DdState {
    /// The whole space: full lineality, no constraints.
    pub fn universe(ambient: usize) -> Self {
        let lineality = (0..ambient)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ambient];
                v[i] = BigInt::from(1);
                v
            })
            .collect();
        DdState {
            ambient,
            rows: Vec::new(),
            rays: Vec::new(),
            lineality,
        }
    }

    /// Inserts the halfspace `⟨row, x⟩ >= 0`.
    pub fn insert(&mut self, row: &[BigInt]) -> InsertOutcome {
        assert_eq!(row.len(), self.ambient);
        let row = primitive(row);
        if is_zero_vec_int(&row) || self.rows.contains(&row) {
            return InsertOutcome {
                skipped: true,
                ..Default::default()
            };
        }

        // Case 1: the row cuts the lineality space. One lineality generator
        // becomes the pivot: the rest of the lineality and all rays are
        // projected into the row's hyperplane, and the pivot survives as the
        // single ray off the hyperplane.
        if let Some(pi) = self.lineality.iter().position(|l| !dot_int(&row, l).is_zero()) {
            let mut pivot = self.lineality.swap_remove(pi);
            let dp = dot_int(&row, &pivot);
            if dp.is_negative() {
                for x in pivot.iter_mut() {
                    *x = -x.clone();
                }
            }
            let dp = dot_int(&row, &pivot);
            for l in self.lineality.iter_mut() {
                let dl = dot_int(&row, l);
                if !dl.is_zero() {
                    let proj: Vec<BigInt> = l
                        .iter()
                        .zip(&pivot)
                        .map(|(a, b)| &dp * a - &dl * b)
                        .collect();
                    *l = primitive(&proj);
                }
            }
            let k = self.rows.len();
            for r in self.rays.iter_mut() {
                let dr = dot_int(&row, &r.v);
                if !dr.is_zero() {
                    let proj: Vec<BigInt> = r
                        .v
                        .iter()
                        .zip(&pivot)
                        .map(|(a, b)| &dp * a - &dr * b)
                        .collect();
                    r.v = primitive(&proj);
                }
                r.tight.grow(k + 1);
                r.tight.insert(k);
            }
            let mut tight = BitSet::new(k + 1);
            for i in 0..k {
                tight.insert(i);
            }
            self.rays.push(DdRay { v: pivot, tight });
            self.rows.push(row);
            return InsertOutcome {
                lineality_cut: true,
                added: 1,
                ..Default::default()
            };
        }

        // Case 2: the row is orthogonal to the lineality. Split the rays by
        // sign; adjacent (positive, negative) pairs combine into boundary
        // rays, negative rays disappear.
        let dots: Vec<BigInt> = self.rays.iter().map(|r| dot_int(&row, &r.v)).collect();
        let k = self.rows.len();
        if dots.iter().all(|d| !d.is_negative()) {
            for (r, d) in self.rays.iter_mut().zip(&dots) {
                r.tight.grow(k + 1);
                if d.is_zero() {
                    r.tight.insert(k);
                }
            }
            self.rows.push(row);
            return InsertOutcome::default();
        }

        let pos: Vec<usize> = (0..dots.len()).filter(|&i| dots[i].is_positive()).collect();
        let neg: Vec<usize> = (0..dots.len()).filter(|&i| dots[i].is_negative()).collect();

        let mut new_rays = Vec::new();
        for &p in &pos {
            for &m in &neg {
                let common = self.rays[p].tight.intersection(&self.rays[m].tight);
                let adjacent = !self
                    .rays
                    .iter()
                    .enumerate()
                    .any(|(q, rq)| q != p && q != m && common.is_subset(&rq.tight));
                if !adjacent {
                    continue;
                }
                let dp = &dots[p];
                let dm = &dots[m];
                let v: Vec<BigInt> = self.rays[p]
                    .v
                    .iter()
                    .zip(&self.rays[m].v)
                    .map(|(a, b)| dp * b - dm * a)
                    .collect();
                let mut tight = common.clone();
                tight.grow(k + 1);
                tight.insert(k);
                new_rays.push(DdRay {
                    v: primitive(&v),
                    tight,
                });
            }
        }

        let removed = neg.len();
        let added = new_rays.len();
        let mut kept = Vec::with_capacity(self.rays.len() - removed + added);
        for (i, mut r) in std::mem::take(&mut self.rays).into_iter().enumerate() {
            if dots[i].is_negative() {
                continue;
            }
            r.tight.grow(k + 1);
            if dots[i].is_zero() {
                r.tight.insert(k);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        self.rays = kept;
        self.rows.push(row);
        InsertOutcome {
            removed,
            added,
            ..Default::default()
        }
    }

    /// Drops inserted rows that are tight on no ray. Such rows support faces
    /// inside the lineality span, which cannot be facets once the pointed
    /// part is at least two-dimensional — hence the gate on ray count.
    pub fn prune_redundant(&mut self) {
        if self.rays.len() < 2 {
            return;
        }
        let n = self.rows.len();
        let mut used = vec![false; n];
        for r in &self.rays {
            for i in r.tight.iter_ones() {
                used[i] = true;
            }
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let mut remap = vec![usize::MAX; n];
        let mut rows = Vec::new();
        for (i, row) in std::mem::take(&mut self.rows).into_iter().enumerate() {
            if used[i] {
                remap[i] = rows.len();
                rows.push(row);
            }
        }
        for r in self.rays.iter_mut() {
            let mut tight = BitSet::new(rows.len());
            for i in r.tight.iter_ones() {
                if remap[i] != usize::MAX {
                    tight.insert(remap[i]);
                }
            }
            r.tight = tight;
        }
        self.rows = rows;
    }

    /// True iff `v` satisfies every inserted halfspace.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.rows.iter().all(|a| !dot_int(a, v).is_negative())
    }

    /// Rank of the generator set; the cone is full-dimensional iff this
    /// equals the ambient dimension.
    pub fn generator_rank(&self) -> usize {
        let mut gens: Vec<Vec<BigInt>> = self.rays.iter().map(|r| r.v.clone()).collect();
        gens.extend(self.lineality.iter().cloned());
        rank_int(&gens)
    }

    /// Deterministic canonical form of the ray set: each ray reduced modulo
    /// the lineality span (a cone-preserving translation), scaled primitive,
    /// deduplicated, sorted lexicographically. Zero reductions (rays falling
    /// inside the lineality span) cannot occur for a minimal pair.
    pub fn canonical_rays(&self) -> Vec<Vec<BigInt>> {
        let mut out: std::collections::BTreeSet<Vec<BigInt>> = std::collections::BTreeSet::new();
        if self.lineality.is_empty() {
            for r in &self.rays {
                out.insert(primitive(&r.v));
            }
        } else {
            let red = SpanReducer::new(&self.lineality, self.ambient);
            for r in &self.rays {
                let v = red.reduce(&r.v);
                debug_assert!(!is_zero_vec_int(&v), "extreme ray inside lineality");
                out.insert(v);
            }
        }
        out.into_iter().collect()
    }

    /// Canonical lineality basis: reduced echelon form scaled to primitive
    /// integer rows, ordered by pivot column.
    pub fn canonical_lineality(&self) -> Vec<Vec<BigInt>> {
        if self.lineality.is_empty() {
            return Vec::new();
        }
        let rows = self.lineality.iter().map(|l| to_rational_vec(l)).collect();
        let (rref, _) = Matrix::new(rows, self.ambient).rref();
        rref.iter().map(|r| to_primitive_integer(r)).collect()
    }
}

/// V-representation: generators of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

/// A polyhedral cone `{x : Ex = 0, Ax >= 0}` with lazily cached generators.
#[derive(Clone, Debug)]
pub struct Cone {
    pub ambient: usize,
    pub equalities: Vec<Vec<BigInt>>,
    pub inequalities: Vec<Vec<BigInt>>,
    vrep: OnceLock<VRep>,
}

impl Cone {
    pub fn from_h(
        ambient: usize,
        equalities: Vec<Vec<BigInt>>,
        inequalities: Vec<Vec<BigInt>>,
    ) -> Self {
        for r in equalities.iter().chain(&inequalities) {
            assert_eq!(r.len(), ambient, "row arity mismatch");
        }
        Cone {
            ambient,
            equalities: equalities.iter().map(|r| primitive(r)).collect(),
            inequalities: inequalities.iter().map(|r| primitive(r)).collect(),
            vrep: OnceLock::new(),
        }
    }

    pub fn from_h_rational(
        ambient: usize,
        equalities: &[Vec<Rational>],
        inequalities: &[Vec<Rational>],
    ) -> Self {
        Cone::from_h(
            ambient,
            equalities.iter().map(|r| to_primitive_integer(r)).collect(),
            inequalities.iter().map(|r| to_primitive_integer(r)).collect(),
        )
    }

    /// The cached V-representation, computed on first use. Equalities are
    /// inserted first (as opposing halfspace pairs); inequalities follow in a
    /// dynamic order preferring rows tight on many current rays, which keeps
    /// intermediate ray counts small.
    pub fn vrep(&self) -> &VRep {
        self.vrep.get_or_init(|| {
            let state = dd_state_of(self.ambient, &self.equalities, &self.inequalities);
            VRep {
                rays: state.canonical_rays(),
                lineality: state.canonical_lineality(),
            }
        })
    }

    /// True iff `v` satisfies every equality and inequality.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.equalities.iter().all(|a| dot_int(a, v).is_zero())
            && self.inequalities.iter().all(|a| !dot_int(a, v).is_negative())
    }
}

fn dd_state_of(
    ambient: usize,
    equalities: &[Vec<BigInt>],
    inequalities: &[Vec<BigInt>],
) -> DdState {
    let mut state = DdState::universe(ambient);
    for e in equalities {
        state.insert(e);
        let neg: Vec<BigInt> = e.iter().map(|x| -x.clone()).collect();
        state.insert(&neg);
    }
    let mut remaining: Vec<Vec<BigInt>> = inequalities.iter().map(|r| primitive(r)).collect();
    remaining.sort();
    remaining.dedup();
    while !remaining.is_empty() {
        let pick = remaining
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| {
                let za = state.rays.iter().filter(|r| dot_int(a, &r.v).is_zero()).count();
                let zb = state.rays.iter().filter(|r| dot_int(b, &r.v).is_zero()).count();
                // Most tight rays first; ties broken toward the smaller row,
                // i.e. reversed comparison on (row, index).
                za.cmp(&zb).then_with(|| (b, ib).cmp(&(a, ia)))
            })
            .map(|(i, _)| i)
            .expect("nonempty");
        let row = remaining.remove(pick);
        state.insert(&row);
    }
    state
}

/// Converts an H-description to generators: the full double-description run.
pub fn dd_convert(c: &Cone) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let v = c.vrep();
    (v.rays.clone(), v.lineality.clone())
}

/// Rebuilds an H-description from generators by running double description
/// on the polar side: the polar cone of `{rays, lineality}` has the given
/// rays as inequality normals and the lineality as equality normals, so its
/// generators are exactly the facet normals and equality normals sought.
pub fn h_from_v(ambient: usize, rays: &[Vec<BigInt>], lineality: &[Vec<BigInt>]) -> Cone {
    let polar = Cone::from_h(ambient, lineality.to_vec(), rays.to_vec());
    let v = polar.vrep();
    Cone::from_h(ambient, v.lineality.clone(), v.rays.clone())
}

/// Dimension of the cone as a polyhedron: ambient dimension minus the rank of
/// the equalities together with the implicit equalities among the inequality
/// rows. Implicitness of a row is decided exactly by maximizing it over the
/// cone with the value capped at 1: the row is implicit iff the optimum is 0.
pub fn cone_dimension(c: &Cone) -> usize {
    let d = c.ambient;
    let m = c.inequalities.len();
    let mut eq_rows: Vec<Vec<BigInt>> = c.equalities.clone();
    for i in 0..m {
        // Variables: x (free, d entries) and one slack per inequality row.
        let n = d + m;
        let mut lp = LpBuilder::new(n);
        for s in 0..m {
            lp.set_nonneg(d + s);
        }
        for e in &c.equalities {
            let mut row = to_rational_vec(e);
            row.resize(n, Rational::zero());
            lp.add_eq(row, Rational::zero());
        }
        for (j, a) in c.inequalities.iter().enumerate() {
            let mut row = to_rational_vec(a);
            row.resize(n, Rational::zero());
            row[d + j] = -Rational::one();
            lp.add_eq(row, Rational::zero());
        }
        let mut cap = vec![Rational::zero(); n];
        cap[d + i] = Rational::one();
        lp.add_le(cap, Rational::one());
        lp.objective_coeff(d + i, Rational::one());
        let res = lp.solve();
        debug_assert_eq!(res.status, LpStatus::Optimal);
        if res.value.is_zero() {
            eq_rows.push(c.inequalities[i].clone());
        }
    }
    d - rank_int(&eq_rows)
}

/// A point in the relative interior: the sum of the canonical rays (possibly
/// the origin, for a pure subspace). Errors on the zero cone.
pub fn interior_point(c: &Cone) -> Result<Vec<BigInt>> {
    let v = c.vrep();
    if v.rays.is_empty() && v.lineality.is_empty() {
        return Err(Error::invalid("interior point of the zero cone"));
    }
    let mut p = vec![BigInt::zero(); c.ambient];
    for r in &v.rays {
        for (x, y) in p.iter_mut().zip(r) {
            *x += y;
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cone(ambient: usize, eqs: &[&[i64]], ineqs: &[&[i64]]) -> Cone {
        Cone::from_h(
            ambient,
            eqs.iter().map(|r| iv(r)).collect(),
            ineqs.iter().map(|r| iv(r)).collect(),
        )
    }

    #[test]
    fn quadrant() {
        let c = cone(2, &[], &[&[1, 0], &[0, 1]]);
        let v = c.vrep();
        assert_eq!(v.rays, vec![iv(&[0, 1]), iv(&[1, 0])]);
        assert!(v.lineality.is_empty());
    }

    #[test]
    fn halfplane_has_lineality() {
        let c = cone(2, &[], &[&[1, 0]]);
        let v = c.vrep();
        assert_eq!(v.rays, vec![iv(&[1, 0])]);
        assert_eq!(v.lineality, vec![iv(&[0, 1])]);
    }

    #[test]
    fn product_of_two_planar_cones() {
        let c = cone(
            4,
            &[],
            &[&[1, 0, 0, 0], &[-1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 1]],
        );
        let v = c.vrep();
        assert_eq!(
            v.rays,
            vec![
                iv(&[0, 0, 0, 1]),
                iv(&[0, 0, 1, 1]),
                iv(&[0, 1, 0, 0]),
                iv(&[1, 1, 0, 0]),
            ]
        );
        assert!(v.lineality.is_empty());
    }

    #[test]
    fn chamber_rays_and_interior() {
        // 0 <= x1 <= x2 <= x3.
        let c = cone(3, &[], &[&[1, 0, 0], &[-1, 1, 0], &[0, -1, 1]]);
        let v = c.vrep();
        assert_eq!(v.rays, vec![iv(&[0, 0, 1]), iv(&[0, 1, 1]), iv(&[1, 1, 1])]);
        assert_eq!(interior_point(&c).unwrap(), iv(&[1, 2, 3]));
    }

    #[test]
    fn single_ray_cone() {
        let c = cone(2, &[&[2, -1]], &[&[1, 0]]);
        let v = c.vrep();
        assert_eq!(v.rays, vec![iv(&[1, 2])]);
        assert!(v.lineality.is_empty());
        assert_eq!(interior_point(&c).unwrap(), iv(&[1, 2]));
    }

    #[test]
    fn zero_cone_errors_on_interior() {
        let c = cone(2, &[&[1, 0], &[0, 1]], &[]);
        let v = c.vrep();
        assert!(v.rays.is_empty() && v.lineality.is_empty());
        assert!(interior_point(&c).is_err());
    }

    #[test]
    fn dimension_detects_implicit_equalities() {
        let c = cone(2, &[], &[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(cone_dimension(&c), 1);
        let o3 = cone(3, &[], &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(cone_dimension(&o3), 3);
        let phi4 = cone(
            4,
            &[],
            &[
                &[1, 0, 0, 0],
                &[-1, 1, 0, 0],
                &[0, -1, 1, 0],
                &[0, 0, -1, 1],
            ],
        );
        assert_eq!(cone_dimension(&phi4), 4);
    }

    #[test]
    fn whole_space_universe() {
        let c = cone(3, &[], &[]);
        let v = c.vrep();
        assert!(v.rays.is_empty());
        assert_eq!(v.lineality.len(), 3);
        assert_eq!(cone_dimension(&c), 3);
    }

    #[test]
    fn redundant_row_changes_nothing() {
        let mut s = DdState::universe(2);
        s.insert(&iv(&[1, 0]));
        s.insert(&iv(&[0, 1]));
        let before: Vec<_> = s.canonical_rays();
        let out = s.insert(&iv(&[1, 1]));
        assert_eq!(out.removed, 0);
        assert_eq!(out.added, 0);
        assert_eq!(s.canonical_rays(), before);
        // Tight on no ray: pruning removes it again.
        s.prune_redundant();
        assert_eq!(s.rows.len(), 2);
    }

    #[test]
    fn duplicate_row_skipped() {
        let mut s = DdState::universe(2);
        s.insert(&iv(&[1, 0]));
        let out = s.insert(&iv(&[2, 0]));
        assert!(out.skipped);
        assert_eq!(s.rows.len(), 1);
    }

    #[test]
    fn insertion_order_is_irrelevant() {
        let rows: Vec<Vec<BigInt>> = vec![
            iv(&[1, 0, 0]),
            iv(&[-1, 1, 0]),
            iv(&[0, -1, 1]),
            iv(&[1, 1, -1]),
            iv(&[0, 0, 1]),
        ];
        let mut reference = None;
        // A handful of distinct insertion orders must give the same cone.
        let orders = [
            vec![0, 1, 2, 3, 4],
            vec![4, 3, 2, 1, 0],
            vec![2, 0, 4, 1, 3],
            vec![3, 4, 0, 2, 1],
        ];
        for order in &orders {
            let mut s = DdState::universe(3);
            for &i in order {
                s.insert(&rows[i]);
            }
            let canon = (s.canonical_rays(), s.canonical_lineality());
            match &reference {
                None => reference = Some(canon),
                Some(r) => assert_eq!(&canon, r),
            }
        }
    }

    #[test]
    fn h_from_v_round_trip_simplicial() {
        let c = cone(3, &[], &[&[1, 0, 0], &[-1, 1, 0], &[0, -1, 1]]);
        let v = c.vrep().clone();
        let back = h_from_v(3, &v.rays, &v.lineality);
        assert_eq!(back.vrep(), &v);
        // The rebuilt halfspaces describe the same membership predicate.
        for probe in [&[1i64, 2, 3][..], &[0, 0, 1], &[1, 0, 0], &[-1, 0, 5]] {
            let p = iv(probe);
            assert_eq!(c.contains(&p), back.contains(&p));
        }
    }

    #[test]
    fn generator_rank_tracks_dimension() {
        let mut s = DdState::universe(3);
        s.insert(&iv(&[1, 0, 0]));
        assert_eq!(s.generator_rank(), 3);
        s.insert(&iv(&[-1, 0, 0]));
        assert_eq!(s.generator_rank(), 2);
    }
}
