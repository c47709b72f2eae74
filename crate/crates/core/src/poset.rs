//! Finite posets with at most 128 elements, stored as down-set bitmasks.

use std::collections::HashMap;

pub const MAX_ELEMENTS: usize = 128;

/// A set of poset elements as a bitmask.
pub type Mask = u128;

pub fn members(mask: Mask) -> Vec<usize> {
    (0..MAX_ELEMENTS).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(items: impl IntoIterator<Item = usize>) -> Mask {
    items.into_iter().fold(0, |m, i| m | 1 << i)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    len: usize,
    /// `down[i]` has bit `j` set iff `j <= i`.
    down: Vec<Mask>,
}

impl FinitePoset {
    /// Builds the poset from a reflexive, antisymmetric, transitive relation.
    /// Panics beyond [`MAX_ELEMENTS`] elements.
    pub fn new(len: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        assert!(len <= MAX_ELEMENTS, "poset too large");
        let down = (0..len).map(|i| mask_of((0..len).filter(|&j| leq(j, i)))).collect();
        Self { len, down }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn all(&self) -> Mask {
        if self.len == MAX_ELEMENTS {
            Mask::MAX
        } else {
            (1 << self.len) - 1
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b] >> a & 1 == 1
    }

    pub fn principal_lower_set(&self, i: usize) -> Mask {
        self.down[i]
    }

    pub fn is_lower_set(&self, mask: Mask) -> bool {
        members(mask).into_iter().all(|i| self.down[i] & !mask == 0)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.down[i] == 1 << i).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| (0..self.len).all(|j| j == i || !self.leq(i, j))).collect()
    }

    /// Covering relations `(a, b)` with `a < b` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.len {
            for a in 0..self.len {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = (0..self.len).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn maximal_in(&self, within: Mask) -> usize {
        let items = members(within);
        *items
            .iter()
            .find(|&&i| items.iter().all(|&j| j == i || !self.leq(i, j)))
            .expect("nonempty finite poset has a maximal element")
    }

    /// Number of lower sets, including the empty set and the whole poset.
    pub fn count_lower_sets(&self) -> u128 {
        let mut memo = HashMap::new();
        self.count_within(self.all(), &mut memo)
    }

    fn count_within(&self, within: Mask, memo: &mut HashMap<Mask, u128>) -> u128 {
        if within == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&within) {
            return c;
        }
        // lower sets of `within` either avoid a maximal x or contain all of ↓x
        let x = self.maximal_in(within);
        let c = self.count_within(within & !(1 << x), memo) + self.count_within(within & !self.down[x], memo);
        memo.insert(within, c);
        c
    }

    /// All lower sets, in a deterministic order.
    pub fn lower_sets(&self) -> Vec<Mask> {
        let mut out = Vec::new();
        self.lower_sets_within(self.all(), 0, &mut out);
        out.sort_by_key(|m| (m.count_ones(), *m));
        out
    }

    fn lower_sets_within(&self, within: Mask, forced: Mask, out: &mut Vec<Mask>) {
        if within == 0 {
            out.push(forced);
            return;
        }
        let x = self.maximal_in(within);
        self.lower_sets_within(within & !(1 << x), forced, out);
        self.lower_sets_within(within & !self.down[x], forced | (self.down[x] & within) | (1 << x), out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean(k: usize) -> FinitePoset {
        FinitePoset::new(1 << k, |a, b| a & b == a)
    }

    #[test]
    fn boolean_lower_set_counts() {
        assert_eq!(boolean(1).count_lower_sets(), 3);
        assert_eq!(boolean(2).count_lower_sets(), 6);
        assert_eq!(boolean(3).count_lower_sets(), 20);
        assert_eq!(boolean(4).count_lower_sets(), 168);
        for k in 0..4 {
            let p = boolean(k);
            let sets = p.lower_sets();
            assert_eq!(sets.len() as u128, p.count_lower_sets());
            assert!(sets.iter().all(|m| p.is_lower_set(*m)));
        }
    }

    #[test]
    fn antichain_and_chain() {
        let anti = FinitePoset::new(4, |a, b| a == b);
        assert_eq!(anti.count_lower_sets(), 16);
        let chain = FinitePoset::new(4, |a, b| a <= b);
        assert_eq!(chain.count_lower_sets(), 5);
        assert_eq!(chain.minimal(), vec![0]);
        assert_eq!(chain.maximal(), vec![3]);
        assert_eq!(chain.hasse_edges(), vec![(0, 1), (1, 2), (2, 3)]);
    }
}
