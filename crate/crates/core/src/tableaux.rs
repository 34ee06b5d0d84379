//! The Young-tableau view of lineups of a product of two simplices:
//! tableaux from functionals by dense ranking, local consistency checks,
//! realizability counting through the engine, an exact 2×m realization,
//! the linear ray families on R²×R^{f+1}, and the closed-form grid count.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::config::product_of_simplices;
use crate::engine::{enumerate, enumerate_count, interior_sample, EngineOptions};
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

/// A rectangular grid of positive ranks, weakly increasing along rows and
/// columns; standard when the entries are exactly 1..rows*cols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    pub cells: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(cells: Vec<Vec<usize>>) -> Result<Self> {
        if cells.is_empty() || cells[0].is_empty() {
            return Err(Error::invalid("empty tableau"));
        }
        let w = cells[0].len();
        if cells.iter().any(|r| r.len() != w) {
            return Err(Error::invalid("ragged tableau"));
        }
        if cells.iter().flatten().any(|&x| x == 0) {
            return Err(Error::invalid("tableau entries must be positive"));
        }
        Ok(Tableau { cells })
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.cells[0].len()
    }

    /// All entries distinct and exactly 1..rows*cols.
    pub fn is_standard(&self) -> bool {
        let n = self.rows() * self.cols();
        let mut seen = vec![false; n + 1];
        for &x in self.cells.iter().flatten() {
            if x > n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.cells).expect("plain arrays")
    }
}

/// Dense ranks of the sums `a_i + b_j`: equal sums share a rank and ranks
/// form an initial segment 1..k. Requires both vectors weakly increasing.
pub fn tableau_from_functional(a: &[Rational], b: &[Rational]) -> Result<Tableau> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("empty functional part"));
    }
    if a.windows(2).any(|w| w[0] > w[1]) || b.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("functional parts must be weakly increasing"));
    }
    let mut values: Vec<Rational> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x + y))
        .collect();
    values.sort();
    values.dedup();
    let cells = a
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| values.binary_search(&(x + y)).expect("present") + 1)
                .collect()
        })
        .collect();
    Ok(Tableau { cells })
}

/// Local consistency: monotone rows and columns, a dense entry set, and tie
/// propagation — a tie between adjacent columns in one row forces the same
/// tie in every row, and symmetrically for rows.
pub fn is_constrained(t: &Tableau) -> bool {
    let (rows, cols) = (t.rows(), t.cols());
    let c = &t.cells;
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols && c[i][j] > c[i][j + 1] {
                return false;
            }
            if i + 1 < rows && c[i][j] > c[i + 1][j] {
                return false;
            }
        }
    }
    let max = *c.iter().flatten().max().expect("nonempty");
    let mut seen = vec![false; max + 1];
    for &x in c.iter().flatten() {
        seen[x] = true;
    }
    if seen[1..].iter().any(|&s| !s) {
        return false;
    }
    // Column-pair ties propagate down all rows; row-pair ties across all columns.
    for j in 0..cols.saturating_sub(1) {
        let tied = (0..rows).any(|i| c[i][j] == c[i][j + 1]);
        if tied && (0..rows).any(|i| c[i][j] != c[i][j + 1]) {
            return false;
        }
    }
    for i in 0..rows.saturating_sub(1) {
        let tied = (0..cols).any(|j| c[i][j] == c[i + 1][j]);
        if tied && (0..cols).any(|j| c[i][j] != c[i + 1][j]) {
            return false;
        }
    }
    true
}

/// Counts the realizable standard Young tableaux of a rows×cols rectangle
/// by enumerating the full-length lineup fan of the matching product of two
/// simplices.
pub fn count_realizable_syt(rows: usize, cols: usize, opts: &EngineOptions) -> Result<u64> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("degenerate shape"));
    }
    if rows == 1 || cols == 1 {
        return Ok(1);
    }
    enumerate_count(&product_of_simplices(&[rows, cols]), rows * cols, opts)
}

/// The realizable tableaux themselves: one per fan node, computed by dense-
/// ranking an interior functional of the node. Interior functionals are
/// generic, so every tableau is standard; order follows the fan.
pub fn realizable_tableaux(rows: usize, cols: usize, opts: &EngineOptions) -> Result<Vec<Tableau>> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("degenerate shape"));
    }
    let c = product_of_simplices(&[rows, cols]);
    let fan = enumerate(&c, rows * cols, opts)?;
    fan.nodes
        .iter()
        .map(|node| {
            let y = interior_sample(node);
            let t = tableau_from_functional(&y[..rows], &y[rows..])?;
            debug_assert!(t.is_standard());
            Ok(t)
        })
        .collect()
}

/// Total standard Young tableaux of a rows×cols rectangle, by the hook
/// length formula.
pub fn total_syt(rows: usize, cols: usize) -> BigInt {
    let mut num = BigInt::one();
    for k in 1..=(rows * cols) {
        num *= BigInt::from(k);
    }
    let mut den = BigInt::one();
    for i in 0..rows {
        for j in 0..cols {
            den *= BigInt::from((rows - i) + (cols - j) - 1);
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// All standard 2×m tableaux, generated from ballot sequences (row choices
/// whose prefix counts never let row 2 outpace row 1).
pub fn standard_2xm_tableaux(m: usize) -> Vec<Tableau> {
    let mut out = Vec::new();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    fn go(k: usize, m: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
        if k > 2 * m {
            out.push(Tableau {
                cells: rows.clone(),
            });
            return;
        }
        if rows[0].len() < m {
            rows[0].push(k);
            go(k + 1, m, rows, out);
            rows[0].pop();
        }
        if rows[1].len() < rows[0].len() {
            rows[1].push(k);
            go(k + 1, m, rows, out);
            rows[1].pop();
        }
    }
    go(1, m, &mut rows, &mut out);
    out
}

/// Realizes a 2×m constrained tableau as an exact functional with
/// a = (0, 1): columns are placed left to right, each new b_j either pinned
/// by a tie or chosen inside the open interval forced by the rank
/// comparisons of b_j and 1+b_j against all placed values. The result is
/// round-trip-verified, so success is a proof of realizability.
pub fn realize_2xm(t: &Tableau) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if t.rows() != 2 {
        return Err(Error::invalid("realization requires a 2-row tableau"));
    }
    if !is_constrained(t) {
        return Err(Error::invalid("not a constrained tableau"));
    }
    let m = t.cols();
    let a = vec![Rational::zero(), Rational::from_integer(BigInt::one())];
    let mut b: Vec<Rational> = Vec::with_capacity(m);
    // Placed cells: (rank, exact value).
    let mut placed: Vec<(usize, Rational)> = Vec::new();
    for j in 0..m {
        let (r1, r2) = (t.cells[0][j], t.cells[1][j]);
        if r1 >= r2 {
            return Err(Error::invalid(
                "column tie cannot be realized with distinct row offsets",
            ));
        }
        let x = if j == 0 {
            Rational::zero()
        } else {
            // Constraints on x = b_j from each placed (rank, value) pair,
            // via both b_j (rank r1) and 1 + b_j (rank r2).
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            let mut pin: Option<Rational> = None;
            let tighten =
                |target: &mut Option<Rational>, v: Rational, prefer_larger: bool| match target {
                    Some(cur) if (*cur >= v) == prefer_larger => {}
                    _ => *target = Some(v),
                };
            for (rank, v) in &placed {
                for (my_rank, shift) in [(r1, 0i64), (r2, 1i64)] {
                    let bound = v - rat(shift, 1);
                    match my_rank.cmp(rank) {
                        std::cmp::Ordering::Less => tighten(&mut hi, bound, false),
                        std::cmp::Ordering::Greater => tighten(&mut lo, bound, true),
                        std::cmp::Ordering::Equal => match &pin {
                            Some(p) if *p != bound => {
                                return Err(Error::invalid("inconsistent rank ties"))
                            }
                            _ => pin = Some(bound),
                        },
                    }
                }
            }
            match pin {
                Some(p) => {
                    if lo.as_ref().is_some_and(|l| p <= *l) || hi.as_ref().is_some_and(|h| p >= *h)
                    {
                        return Err(Error::invalid("tied rank falls outside its interval"));
                    }
                    p
                }
                None => {
                    let lo = lo.ok_or_else(|| Error::invalid("unbounded below"))?;
                    if hi.as_ref().is_some_and(|h| lo >= *h) {
                        return Err(Error::invalid("empty placement interval"));
                    }
                    lo + min_positive_gap(&placed, m)
                }
            }
        };
        placed.push((r1, x.clone()));
        placed.push((r2, &x + Rational::from_integer(BigInt::one())));
        b.push(x);
    }
    let check = tableau_from_functional(&a, &b)?;
    if check != *t {
        return Err(Error::invalid("tableau is not realizable"));
    }
    Ok((a, b))
}

/// The step used for interior placements: the smallest positive gap among
/// the placed values and their shifts by −1, scaled down by 2(m+2).
fn min_positive_gap(placed: &[(usize, Rational)], m: usize) -> Rational {
    let mut pts: Vec<Rational> = placed
        .iter()
        .flat_map(|(_, v)| [v.clone(), v - Rational::from_integer(BigInt::one())])
        .collect();
    pts.sort();
    pts.dedup();
    let gap = pts
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(|| Rational::from_integer(BigInt::one()));
    gap / Rational::from_integer(BigInt::from(2 * (m + 2)))
}

/// The two closed-form families of fan rays claimed for Δ₁×Δ_f, in
/// R²×R^{f+1}: staircases with zero first block, and partition-shaped
/// second blocks with first block (0,1). Lexicographically sorted.
pub fn linear_syt_rays(f: usize) -> Vec<Vec<BigInt>> {
    assert!(f >= 1);
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for k in 1..=f {
        let mut v = vec![BigInt::zero(); 2 + f + 1];
        for x in v.iter_mut().skip(2 + f + 1 - k) {
            *x = BigInt::one();
        }
        out.push(v);
    }
    for p in partitions(f + 1) {
        let mut v = vec![BigInt::zero(), BigInt::one()];
        for (level, &count) in p.iter().enumerate() {
            for _ in 0..count {
                v.push(BigInt::from(level));
            }
        }
        out.push(v);
    }
    out.sort();
    out
}

/// All partitions of n as weakly decreasing part lists.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            acc.push(part);
            go(n - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The closed-form sweep count claimed for the n×m integer grid:
/// 4·Σ_{i=1}^{n} φ(i,m) + 2, with φ(a,b) = #{k ∈ [b] : gcd(k,a) = 1}.
pub fn grid_sweep_count(n: usize, m: usize) -> u64 {
    assert!(n >= 2 && m >= 2);
    let phi = |a: usize, b: usize| (1..=b).filter(|&k| gcd(k, a) == 1).count() as u64;
    4 * (1..=n).map(|i| phi(i, m)).sum::<u64>() + 2
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::extract_rays;
    use crate::rational::int;

    fn tab(cells: &[&[usize]]) -> Tableau {
        Tableau::new(cells.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dense_ranking_examples() {
        let t = tableau_from_functional(
            &[int(0), int(1), int(7)],
            &[int(0), int(3), int(8), int(11)],
        )
        .unwrap();
        assert_eq!(
            t.cells,
            vec![vec![1, 3, 6, 9], vec![2, 4, 7, 10], vec![5, 8, 11, 12]]
        );
        assert!(t.is_standard());

        let t = tableau_from_functional(&[int(0), int(0)], &[int(0), int(1)]).unwrap();
        assert_eq!(t.cells, vec![vec![1, 2], vec![1, 2]]);
        assert!(!t.is_standard());

        let t = tableau_from_functional(&[int(0), int(1)], &[int(0), int(1)]).unwrap();
        assert_eq!(t.cells, vec![vec![1, 2], vec![2, 3]]);

        assert!(tableau_from_functional(&[int(1), int(0)], &[int(0)]).is_err());
    }

    #[test]
    fn consistency_check() {
        assert!(is_constrained(&tab(&[&[1, 1], &[2, 2]])));
        assert!(!is_constrained(&tab(&[&[1, 1], &[1, 2]])));
        assert!(is_constrained(&tab(&[&[1, 2], &[2, 3]])));
        // Dense entry set is required.
        assert!(!is_constrained(&tab(&[&[1, 2], &[2, 4]])));
        // Monotonicity is required.
        assert!(!is_constrained(&tab(&[&[2, 1], &[2, 3]])));
        // A strict step in one row with a tie in another is inconsistent.
        assert!(!is_constrained(&tab(&[&[1, 2], &[3, 3]])));
        // Outputs of dense ranking are always consistent.
        for (a, b) in [
            (vec![int(0), int(0)], vec![int(0), int(2), int(2)]),
            (vec![int(0), int(1)], vec![int(0), int(1), int(5)]),
        ] {
            assert!(is_constrained(&tableau_from_functional(&a, &b).unwrap()));
        }
    }

    #[test]
    fn realizable_counts() {
        let opts = EngineOptions::default();
        assert_eq!(count_realizable_syt(2, 3, &opts).unwrap(), 5);
        assert_eq!(count_realizable_syt(2, 4, &opts).unwrap(), 14);
        assert_eq!(count_realizable_syt(1, 7, &opts).unwrap(), 1);
        assert_eq!(count_realizable_syt(3, 3, &opts).unwrap(), 36);
    }

    #[test]
    fn realizable_tableaux_are_standard_and_distinct() {
        let opts = EngineOptions::default();
        for (rows, cols, want) in [(2, 3, 5u64), (3, 3, 36)] {
            let ts = realizable_tableaux(rows, cols, &opts).unwrap();
            assert_eq!(ts.len() as u64, want);
            assert!(ts.iter().all(|t| t.is_standard() && is_constrained(t)));
            let set: std::collections::BTreeSet<_> = ts.iter().cloned().collect();
            assert_eq!(set.len(), ts.len());
        }
    }

    #[test]
    fn hook_length_totals() {
        assert_eq!(total_syt(3, 3), BigInt::from(42));
        assert_eq!(total_syt(3, 4), BigInt::from(462));
        assert_eq!(total_syt(2, 3), BigInt::from(5));
        assert_eq!(total_syt(1, 9), BigInt::from(1));
        // Realizable never exceeds total; equal for two rows.
        assert_eq!(total_syt(2, 5), BigInt::from(42));
    }

    #[test]
    fn two_row_generator_is_catalan() {
        let counts: Vec<usize> = (1..=6).map(|m| standard_2xm_tableaux(m).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42, 132]);
        for t in standard_2xm_tableaux(4) {
            assert!(t.is_standard() && is_constrained(&t));
        }
    }

    #[test]
    fn realization_examples() {
        let (a, b) = realize_2xm(&tab(&[&[1, 2], &[2, 3]])).unwrap();
        assert_eq!(a, vec![int(0), int(1)]);
        assert_eq!(b, vec![int(0), int(1)]);

        let (_, b) = realize_2xm(&tab(&[&[1, 2, 3], &[2, 3, 4]])).unwrap();
        assert_eq!(b, vec![int(0), int(1), int(2)]);

        let (_, b) = realize_2xm(&tab(&[&[1, 3], &[2, 4]])).unwrap();
        assert_eq!(b[0], int(0));
        assert!(b[1] > int(1) && b[1] < int(2));

        // The case that breaks naive anchoring: placement must respect both
        // row ranks simultaneously.
        let t = tab(&[&[1, 3, 4], &[2, 5, 6]]);
        let (a, b) = realize_2xm(&t).unwrap();
        assert_eq!(tableau_from_functional(&a, &b).unwrap(), t);

        // A constrained (non-standard) tableau with a row tie.
        let t = tab(&[&[1, 1], &[2, 2]]);
        let (a, b) = realize_2xm(&t).unwrap();
        assert_eq!(b, vec![int(0), int(0)]);
        assert_eq!(tableau_from_functional(&a, &b).unwrap(), t);

        // Identical rows would need equal row offsets: unrealizable here.
        assert!(realize_2xm(&tab(&[&[1, 2], &[1, 2]])).is_err());
    }

    #[test]
    fn realization_round_trips_all_two_row_tableaux() {
        for m in 1..=6 {
            for t in standard_2xm_tableaux(m) {
                let (a, b) = realize_2xm(&t).unwrap();
                assert_eq!(tableau_from_functional(&a, &b).unwrap(), t);
            }
        }
    }

    #[test]
    fn linear_ray_families() {
        let iv = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let f1 = linear_syt_rays(1);
        assert_eq!(
            f1,
            vec![iv(&[0, 0, 0, 1]), iv(&[0, 1, 0, 0]), iv(&[0, 1, 0, 1])]
        );
        assert_eq!(linear_syt_rays(3).len(), 3 + 5);
        assert_eq!(linear_syt_rays(4).len(), 4 + 7);
        let f2 = linear_syt_rays(2);
        assert_eq!(
            f2,
            vec![
                iv(&[0, 0, 0, 0, 1]),
                iv(&[0, 0, 0, 1, 1]),
                iv(&[0, 1, 0, 0, 0]),
                iv(&[0, 1, 0, 0, 1]),
                iv(&[0, 1, 0, 1, 2]),
            ]
        );
    }

    #[test]
    fn engine_rays_match_claimed_families_only_for_f1() {
        let opts = EngineOptions::default();
        // f = 1: exact agreement.
        let c = product_of_simplices(&[2, 2]);
        let fan = enumerate(&c, 4, &opts).unwrap();
        assert_eq!(extract_rays(&c, &fan), linear_syt_rays(1));

        // f = 2: the fan has a ray whose level counts ascend (1 then 2),
        // which no partition-shaped vector produces; the claimed family
        // undercounts from here on.
        let c = product_of_simplices(&[2, 3]);
        let fan = enumerate(&c, 6, &opts).unwrap();
        let rays = extract_rays(&c, &fan);
        let extra: Vec<BigInt> = [0, 1, 0, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert!(rays.contains(&extra));
        let claimed = linear_syt_rays(2);
        assert!(claimed.iter().all(|y| rays.contains(y)));
        assert_eq!(rays.len(), 2 + (1 << 2));
    }

    #[test]
    fn grid_counts_closed_form() {
        assert_eq!(grid_sweep_count(3, 4), 38);
        assert_eq!(grid_sweep_count(2, 2), 14);
        assert_eq!(grid_sweep_count(2, 3), grid_sweep_count(3, 2));
        assert_eq!(grid_sweep_count(3, 4), grid_sweep_count(4, 3));
        assert_eq!(grid_sweep_count(2, 3), 22);
    }
}
