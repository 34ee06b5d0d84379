//! Fixed-width bit sets over `Vec<u64>` words. Used for tight-constraint
//! bookkeeping in the double-description state and for order-ideal masks in
//! the candidate posets; both sit in hot loops, so the operations are kept
//! branch-light.

/// Bit set of a fixed capacity chosen at construction. Ordered/compared by
/// word content, which matches lexicographic-by-lowest-index semantics only
/// per word; all uses in this crate compare for equality or containment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        debug_assert_eq!(self.len, other.len);
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    /// True iff every bit of `self` is also set in `other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Grows the capacity, preserving existing bits as the low indices.
    pub fn grow(&mut self, new_len: usize) {
        assert!(new_len >= self.len);
        self.len = new_len;
        self.words.resize(new_len.div_ceil(64), 0);
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_remove() {
        let mut s = BitSet::new(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert!(s.contains(0) && s.contains(64) && s.contains(129));
        assert!(!s.contains(1) && !s.contains(128));
        assert_eq!(s.count(), 3);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
    }

    #[test]
    fn subset_and_intersection() {
        let mut a = BitSet::new(70);
        let mut b = BitSet::new(70);
        for i in [3, 65, 69] {
            a.insert(i);
            b.insert(i);
        }
        b.insert(10);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        let c = a.intersection(&b);
        assert_eq!(c, a);
    }

    #[test]
    fn grow_preserves_bits() {
        let mut s = BitSet::new(3);
        s.insert(2);
        s.grow(100);
        s.insert(99);
        assert!(s.contains(2) && s.contains(99));
        assert_eq!(s.count(), 2);
    }
}
