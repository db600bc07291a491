//! Fixed-capacity bitset over candidate indices.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(capacity: usize) -> Self {
        BitSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub(crate) fn full(capacity: usize) -> Self {
        let mut s = BitSet::new(capacity);
        for i in 0..capacity {
            s.insert(i);
        }
        s
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Clears every index `<= i`.
    pub(crate) fn clear_through(&mut self, i: usize) {
        let w = i / 64;
        for x in &mut self.words[..w] {
            *x = 0;
        }
        let b = i % 64;
        self.words[w] &= if b == 63 { 0 } else { !0u64 << (b + 1) };
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = BitSet::new(130);
        for i in [0, 5, 63, 64, 100, 129] {
            a.insert(i);
        }
        assert_eq!(a.count(), 6);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 100, 129]);
        let mut b = a.clone();
        b.clear_through(63);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![64, 100, 129]);
        b.clear_through(64);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![100, 129]);
        let full = BitSet::full(130);
        assert_eq!(full.count(), 130);
        assert_eq!(a.intersect(&full), a);
        assert!(a.contains(100) && !a.contains(101));
    }
}
