//! Adaptive per-context symbol statistics.

/// Added to a symbol's count each time it is coded.
pub const COUNT_INCREMENT: u32 = 32;
/// Tables whose total exceeds this are halved. Must not exceed the range
/// coder's bottom value so `range / total` never reaches zero.
pub const RESCALE_CEILING: u32 = 1 << 16;
/// Largest alphabet for which halving can always restore the ceiling.
pub const MAX_ALPHABET: usize = 1 << 12;

/// Symbol counts with cumulative lookups in `O(log n)` via a Fenwick tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<u32>,
    tree: Vec<u32>,
    total: u32,
}

impl FrequencyTable {
    /// All counts start at one.
    pub fn new(alphabet: usize) -> Self {
        assert!(
            (1..=MAX_ALPHABET).contains(&alphabet),
            "alphabet size {alphabet} out of range"
        );
        let mut table = FrequencyTable {
            counts: vec![1; alphabet],
            tree: vec![0; alphabet + 1],
            total: 0,
        };
        table.rebuild();
        table
    }

    pub fn alphabet(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn count(&self, symbol: usize) -> u32 {
        self.counts[symbol]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Sum of the counts of all symbols below `symbol`.
    pub fn cumulative(&self, symbol: usize) -> u32 {
        let mut i = symbol;
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i &= i - 1;
        }
        sum
    }

    /// The symbol whose cumulative interval contains `target`, with its
    /// lower bound. `target` must be below `total`.
    pub fn find(&self, target: u32) -> (usize, u32) {
        debug_assert!(target < self.total);
        let n = self.counts.len();
        let mut pos = 0usize;
        let mut remaining = target;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= remaining {
                pos = next;
                remaining -= self.tree[next];
            }
            step >>= 1;
        }
        (pos, target - remaining)
    }

    /// Records one occurrence of `symbol`.
    pub fn update(&mut self, symbol: usize) {
        self.counts[symbol] += COUNT_INCREMENT;
        self.total += COUNT_INCREMENT;
        if self.total > RESCALE_CEILING {
            for c in &mut self.counts {
                *c = c.div_ceil(2);
            }
            self.rebuild();
        } else {
            let mut i = symbol + 1;
            while i < self.tree.len() {
                self.tree[i] += COUNT_INCREMENT;
                i += i & i.wrapping_neg();
            }
        }
    }

    fn rebuild(&mut self) {
        self.tree.fill(0);
        for (i, &c) in self.counts.iter().enumerate() {
            self.tree[i + 1] += c;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent < self.tree.len() {
                let v = self.tree[i + 1];
                self.tree[parent] += v;
            }
        }
        self.total = self.counts.iter().sum();
    }
}

/// One [`FrequencyTable`] per context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextModel {
    tables: Vec<FrequencyTable>,
}

impl ContextModel {
    pub fn new(contexts: usize, alphabet: usize) -> Self {
        ContextModel {
            tables: vec![FrequencyTable::new(alphabet); contexts],
        }
    }

    pub fn contexts(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, context: usize) -> &FrequencyTable {
        &self.tables[context]
    }

    pub fn table_mut(&mut self, context: usize) -> &mut FrequencyTable {
        &mut self.tables[context]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_cumulative(t: &FrequencyTable, s: usize) -> u32 {
        t.counts()[..s].iter().sum()
    }

    #[test]
    fn starts_flat() {
        let t = FrequencyTable::new(256);
        assert_eq!(t.total(), 256);
        assert_eq!(t.cumulative(100), 100);
        assert_eq!(t.find(100), (100, 100));
    }

    #[test]
    fn rescales_at_ceiling() {
        let mut t = FrequencyTable::new(256);
        let mut rescaled = false;
        for _ in 0..5000 {
            let before = t.total();
            t.update(0);
            if t.total() < before {
                rescaled = true;
            }
            assert!(t.total() <= RESCALE_CEILING);
            assert!(t.counts().iter().all(|&c| c >= 1));
        }
        assert!(rescaled);
        assert_eq!(t.count(255), 1);
    }

    #[test]
    fn odd_alphabet() {
        let mut t = FrequencyTable::new(17);
        t.update(16);
        t.update(3);
        assert_eq!(t.total(), 17 + 64);
        assert_eq!(t.find(t.total() - 1).0, 16);
        assert_eq!(t.find(3).0, 3);
        assert_eq!(t.find(4).0, 3);
        assert_eq!(t.find(3 + 33).0, 4);
    }

    proptest! {
        #[test]
        fn fenwick_matches_naive(updates in proptest::collection::vec(0usize..256, 0..4000)) {
            let mut t = FrequencyTable::new(256);
            for s in updates {
                t.update(s);
            }
            prop_assert_eq!(t.total(), t.counts().iter().sum::<u32>());
            for s in (0..=256).step_by(5) {
                prop_assert_eq!(t.cumulative(s), naive_cumulative(&t, s));
            }
            for target in (0..t.total()).step_by(97) {
                let (s, lo) = t.find(target);
                prop_assert_eq!(lo, naive_cumulative(&t, s));
                prop_assert!(lo <= target && target < lo + t.count(s));
            }
        }
    }
}
