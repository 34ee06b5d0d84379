//! Randomized properties of the double-description core: H→V→H round
//! trips, extremality of reported rays, agreement with an LP on
//! boundedness of objectives, and insertion-order invariance.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use lineup_forge_core::cone::{h_from_v, Cone};
use lineup_forge_core::linalg::{dot_int, rank_int};
use lineup_forge_core::lp::{LpBuilder, LpStatus};
use lineup_forge_core::rational::{int, Rational};

fn iv(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Membership in an H-cone, directly from the rows.
fn h_contains(c: &Cone, x: &[BigInt]) -> bool {
    c.equalities.iter().all(|e| dot_int(e, x).is_zero())
        && c.inequalities.iter().all(|a| !dot_int(a, x).is_negative())
}

/// Sample vectors that probe both cones: generators of each, pairwise sums,
/// and signed standard basis vectors.
fn probes(a: &Cone, b: &Cone, dim: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for v in a
        .vrep()
        .rays
        .iter()
        .chain(&a.vrep().lineality)
        .chain(&b.vrep().rays)
        .chain(&b.vrep().lineality)
    {
        out.push(v.clone());
        out.push(v.iter().map(|x| -x).collect());
    }
    let snapshot = out.clone();
    for pair in snapshot.chunks(2).take(6) {
        if pair.len() == 2 {
            let sum: Vec<BigInt> = pair[0].iter().zip(&pair[1]).map(|(x, y)| x + y).collect();
            out.push(sum);
        }
    }
    for i in 0..dim {
        let mut e = vec![BigInt::zero(); dim];
        e[i] = BigInt::from(1);
        out.push(e.clone());
        e[i] = BigInt::from(-1);
        out.push(e);
    }
    out
}

fn cone_strategy() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (2usize..=6).prop_flat_map(|dim| {
        let row = prop::collection::vec(-4i64..=4, dim);
        prop::collection::vec(row, 1..=8).prop_map(move |rows| (dim, rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip_preserves_membership((dim, rows) in cone_strategy()) {
        let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| iv(r)).collect();
        let cone = Cone::from_h(dim, Vec::new(), int_rows);
        let v = cone.vrep().clone();
        let back = h_from_v(dim, &v.rays, &v.lineality);
        for x in probes(&cone, &back, dim) {
            prop_assert_eq!(
                h_contains(&cone, &x),
                h_contains(&back, &x),
                "probe {:?}", x
            );
        }
    }

    #[test]
    fn rays_are_extremal((dim, rows) in cone_strategy()) {
        let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| iv(r)).collect();
        let cone = Cone::from_h(dim, Vec::new(), int_rows.clone());
        let v = cone.vrep();
        let lin_dim = v.lineality.len();
        for ray in &v.rays {
            // The rows active at an extreme ray, together with the lineality
            // directions, span a hyperplane's worth of constraints: the face
            // it generates has dimension lin_dim + 1.
            let active: Vec<Vec<BigInt>> = int_rows
                .iter()
                .filter(|r| dot_int(r, ray).is_zero())
                .cloned()
                .collect();
            prop_assert_eq!(rank_int(&active), dim - lin_dim - 1);
            // And the ray is genuinely in the cone.
            prop_assert!(h_contains(&cone, ray));
        }
    }

    #[test]
    fn lp_agrees_on_objective_boundedness((dim, rows) in cone_strategy(), obj in prop::collection::vec(-3i64..=3, 6)) {
        let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| iv(r)).collect();
        let cone = Cone::from_h(dim, Vec::new(), int_rows.clone());
        let v = cone.vrep();
        let c: Vec<BigInt> = iv(&obj[..dim]);
        // Generators say the objective can be positive somewhere in the cone...
        let generator_positive = v.rays.iter().any(|r| dot_int(&c, r).is_positive())
            || v.lineality.iter().any(|l| !dot_int(&c, l).is_zero());
        // ...iff an LP over the box-truncated cone finds a positive value.
        let mut lp = LpBuilder::new(dim);
        for row in &int_rows {
            let coeffs: Vec<Rational> = row.iter().map(|x| Rational::from_integer(x.clone())).collect();
            lp.add_ge(coeffs, int(0));
        }
        for j in 0..dim {
            let mut e = vec![int(0); dim];
            e[j] = int(1);
            lp.add_le(e.clone(), int(1));
            e[j] = int(-1);
            lp.add_le(e, int(1));
        }
        lp.set_objective(c.iter().map(|x| Rational::from_integer(x.clone())).collect());
        let res = lp.solve();
        prop_assert_eq!(res.status, LpStatus::Optimal);
        prop_assert_eq!(res.value.is_positive(), generator_positive);
    }

    #[test]
    fn insertion_order_is_immaterial((dim, rows) in cone_strategy(), seed in 0u64..1000) {
        let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| iv(r)).collect();
        let base = Cone::from_h(dim, Vec::new(), int_rows.clone());
        let mut shuffled = int_rows;
        // Deterministic Fisher–Yates driven by the seed.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let other = Cone::from_h(dim, Vec::new(), shuffled);
        prop_assert_eq!(base.vrep(), other.vrep());
    }
}
