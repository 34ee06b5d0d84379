//! Finite posets driving candidate pruning during lineup enumeration:
//! products of chains, the extended Gale order on subsets, and upper order
//! ideals with an incrementally maintained addable frontier.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// A finite poset on elements `0..n`, with precomputed up-sets and cover
/// relations. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Poset {
    n: usize,
    /// `up[i]` = all `j` with `i <= j`, including `i` itself.
    up: Vec<BitSet>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
}

impl Poset {
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut up = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = BitSet::new(n);
            for j in 0..n {
                if leq(i, j) {
                    s.insert(j);
                }
            }
            debug_assert!(s.contains(i), "leq must be reflexive");
            up.push(s);
        }
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for i in 0..n {
            for j in up[i].iter_ones() {
                if j == i {
                    continue;
                }
                // j covers i iff nothing sits strictly between them.
                let between = (0..n).any(|k| {
                    k != i && k != j && up[i].contains(k) && up[k].contains(j)
                });
                if !between {
                    upper_covers[i].push(j);
                    lower_covers[j].push(i);
                }
            }
        }
        for c in upper_covers.iter_mut().chain(lower_covers.iter_mut()) {
            c.sort_unstable();
        }
        Poset {
            n,
            up,
            upper_covers,
            lower_covers,
        }
    }

    /// Product of chains with the given sizes; elements are tuples in
    /// lexicographic order (see [`chain_tuples`]), compared componentwise.
    pub fn chain_product(sizes: &[usize]) -> Self {
        assert!(!sizes.is_empty() && sizes.iter().all(|&s| s >= 1));
        let tuples = chain_tuples(sizes);
        let n = tuples.len();
        Poset::from_leq(n, |a, b| {
            tuples[a].iter().zip(&tuples[b]).all(|(x, y)| x <= y)
        })
    }

    /// The extended Gale order on all subsets of an `n_coords`-element ground
    /// set; element index = subset bit mask.
    pub fn gale(n_coords: usize) -> Self {
        assert!(n_coords >= 1 && n_coords < usize::BITS as usize);
        Poset::from_leq(1usize << n_coords, |a, b| gale_leq_masks(a, b))
    }

    /// The trivial order: every element incomparable to every other.
    pub fn antichain(n: usize) -> Self {
        Poset::from_leq(n, |a, b| a == b)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn upper_covers(&self, e: usize) -> &[usize] {
        &self.upper_covers[e]
    }

    pub fn lower_covers(&self, e: usize) -> &[usize] {
        &self.lower_covers[e]
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.upper_covers[i].is_empty())
            .collect()
    }
}

/// All tuples `(t_1,…,t_k)` with `0 <= t_j < sizes[j]`, lexicographically
/// ascending; the tuple at position `i` is poset element `i` of
/// [`Poset::chain_product`].
pub fn chain_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        let mut next = Vec::with_capacity(out.len() * s);
        for t in &out {
            for v in 0..s {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Extended Gale order on sorted index sets: `s <= t` iff `|s| <= |t|` and
/// the k-th largest element of `s` is at most the k-th largest of `t` for
/// every `k <= |s|`.
pub fn gale_leq(s: &[usize], t: &[usize]) -> bool {
    debug_assert!(s.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(t.windows(2).all(|w| w[0] < w[1]));
    s.len() <= t.len()
        && s.iter()
            .rev()
            .zip(t.iter().rev())
            .all(|(a, b)| a <= b)
}

/// [`gale_leq`] on subset bit masks.
pub fn gale_leq_masks(s: usize, t: usize) -> bool {
    gale_leq(&mask_elements(s), &mask_elements(t))
}

fn mask_elements(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i + 1);
        m &= m - 1;
    }
    out
}

/// An upward-closed subset of a poset, with the set of elements whose
/// addition keeps it upward closed (the maximal elements of the complement)
/// maintained incrementally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpperIdeal {
    members: BitSet,
    addable: BitSet,
    count: usize,
}

impl UpperIdeal {
    pub fn empty(p: &Poset) -> Self {
        let mut addable = BitSet::new(p.n);
        for e in p.maximal_elements() {
            addable.insert(e);
        }
        UpperIdeal {
            members: BitSet::new(p.n),
            addable,
            count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn is_full(&self, p: &Poset) -> bool {
        self.count == p.n
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.contains(e)
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    /// Elements addable while preserving upward closure, ascending.
    pub fn candidates(&self) -> Vec<usize> {
        self.addable.iter_ones().collect()
    }

    /// The ideal with `e` added; errors unless `e` is currently addable.
    pub fn add(&self, p: &Poset, e: usize) -> Result<UpperIdeal> {
        if !self.addable.contains(e) {
            return Err(Error::invalid(format!(
                "element {e} is not addable to this upper ideal"
            )));
        }
        let mut next = self.clone();
        next.members.insert(e);
        next.addable.remove(e);
        next.count += 1;
        for &c in p.lower_covers(e) {
            if !next.members.contains(c)
                && p.upper_covers(c).iter().all(|&u| next.members.contains(u))
            {
                next.addable.insert(c);
            }
        }
        Ok(next)
    }
}

/// Number of saturated chains of upper ideals from the empty ideal to the
/// full one — equivalently, the number of linear extensions of the poset.
pub fn count_saturated_chains(p: &Poset) -> BigInt {
    fn go(p: &Poset, i: &UpperIdeal, memo: &mut HashMap<BitSet, BigInt>) -> BigInt {
        if i.is_full(p) {
            return BigInt::one();
        }
        if let Some(v) = memo.get(i.members()) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        for e in i.candidates() {
            let next = i.add(p, e).expect("candidate is addable");
            total += go(p, &next, memo);
        }
        memo.insert(i.members().clone(), total.clone());
        total
    }
    let mut memo = HashMap::new();
    go(p, &UpperIdeal::empty(p), &mut memo)
}
