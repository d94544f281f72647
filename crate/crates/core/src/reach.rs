//! One-dimensional dynamic programming by reaching, plus a meet-in-the-middle
//! subset-sum used where the capacity is too large for a table.

const UNREACHED: u32 = u32::MAX;

/// Minimum number of items reaching each weight in `0..=capacity`.
///
/// Tracking the minimum cardinality rather than a bare reachability bit makes
/// the table independent of the order in which items are added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCardReach {
    count: Vec<u32>,
}

impl MinCardReach {
    pub fn new(capacity: usize) -> Self {
        let mut count = vec![UNREACHED; capacity + 1];
        count[0] = 0;
        MinCardReach { count }
    }

    pub fn capacity(&self) -> usize {
        self.count.len() - 1
    }

    /// Adds one item (0/1 semantics). Returns the number of cells visited.
    pub fn add_item(&mut self, weight: i64) -> u64 {
        let cap = self.capacity();
        let w = weight as usize;
        if weight <= 0 || w > cap {
            return 0;
        }
        // descending so a cell set by this item is never extended by it again
        for from in (0..=cap - w).rev() {
            let c = self.count[from];
            if c != UNREACHED && c + 1 < self.count[from + w] {
                self.count[from + w] = c + 1;
            }
        }
        (cap - w + 1) as u64
    }

    pub fn get(&self, weight: usize) -> Option<u32> {
        match self.count.get(weight) {
            Some(&c) if c != UNREACHED => Some(c),
            _ => None,
        }
    }

    pub fn is_reachable(&self, weight: usize) -> bool {
        self.get(weight).is_some()
    }

    pub fn reachable(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.count
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != UNREACHED)
            .map(|(w, &c)| (w, c))
    }
}

/// A minimum-cardinality subset of `items` (indices into `weights`) summing
/// exactly to `target`, or `None` if no subset does.
pub fn min_card_witness(weights: &[i64], items: &[usize], target: i64) -> Option<Vec<usize>> {
    if target < 0 {
        return None;
    }
    let cap = target as usize;
    let mut count = vec![UNREACHED; cap + 1];
    count[0] = 0;
    // took[j][w]: item j strictly improved cell w when it was added
    let words = cap / 64 + 1;
    let mut took = vec![0u64; items.len() * words];
    for (j, &item) in items.iter().enumerate() {
        let w = weights[item] as usize;
        if weights[item] <= 0 || w > cap {
            continue;
        }
        for from in (0..=cap - w).rev() {
            let c = count[from];
            if c != UNREACHED && c + 1 < count[from + w] {
                count[from + w] = c + 1;
                let cell = from + w;
                took[j * words + cell / 64] |= 1 << (cell % 64);
            }
        }
    }
    if count[cap] == UNREACHED {
        return None;
    }
    let mut chosen = Vec::new();
    let mut at = cap;
    for j in (0..items.len()).rev() {
        if at == 0 {
            break;
        }
        if took[j * words + at / 64] >> (at % 64) & 1 == 1 {
            chosen.push(items[j]);
            at -= weights[items[j]] as usize;
        }
    }
    debug_assert_eq!(at, 0);
    chosen.sort_unstable();
    Some(chosen)
}

/// Largest subset sum not exceeding `capacity`, with a witness, by reaching.
pub fn best_subset_sum_dp(weights: &[i64], items: &[usize], capacity: i64) -> (i64, Vec<usize>) {
    if capacity <= 0 {
        return (0, Vec::new());
    }
    let cap = capacity as usize;
    // first writer: the item that first reached the cell
    let mut pred = vec![u32::MAX; cap + 1];
    let mut reached = vec![false; cap + 1];
    reached[0] = true;
    for (j, &item) in items.iter().enumerate() {
        let w = weights[item];
        if w <= 0 || w > capacity {
            continue;
        }
        let w = w as usize;
        for from in (0..=cap - w).rev() {
            if reached[from] && !reached[from + w] {
                reached[from + w] = true;
                pred[from + w] = j as u32;
            }
        }
    }
    let best = (0..=cap).rev().find(|&s| reached[s]).unwrap_or(0);
    let mut chosen = Vec::new();
    let mut at = best;
    while at > 0 {
        let j = pred[at] as usize;
        chosen.push(items[j]);
        at -= weights[items[j]] as usize;
    }
    chosen.sort_unstable();
    (best as i64, chosen)
}

/// Largest subset sum not exceeding `capacity` by meet in the middle.
///
/// Enumerates both halves (2^(n/2) each), so keep `items` small.
pub fn best_subset_sum_mitm(weights: &[i64], items: &[usize], capacity: i64) -> (i64, Vec<usize>) {
    let (left, right) = items.split_at(items.len() / 2);
    let sums = |half: &[usize]| -> Vec<(i64, u32)> {
        (0u32..1 << half.len())
            .map(|mask| {
                let s = (0..half.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| weights[half[b]])
                    .sum();
                (s, mask)
            })
            .collect()
    };
    let left_sums = sums(left);
    let mut right_sums = sums(right);
    right_sums.sort_unstable();
    // keep only sums that strictly improve, so each sum keeps its smallest mask
    right_sums.dedup_by_key(|e| e.0);

    let mut best = (0i64, 0u32, 0u32);
    for &(ls, lmask) in &left_sums {
        if ls > capacity {
            continue;
        }
        let room = capacity - ls;
        let idx = right_sums.partition_point(|&(s, _)| s <= room);
        if idx == 0 {
            continue;
        }
        let (rs, rmask) = right_sums[idx - 1];
        if ls + rs > best.0 {
            best = (ls + rs, lmask, rmask);
        }
    }
    let mut chosen: Vec<usize> = (0..left.len())
        .filter(|b| best.1 >> b & 1 == 1)
        .map(|b| left[b])
        .chain((0..right.len()).filter(|b| best.2 >> b & 1 == 1).map(|b| right[b]))
        .collect();
    chosen.sort_unstable();
    (best.0, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_min_card(weights: &[i64], target: i64) -> Option<u32> {
        (0u32..1 << weights.len())
            .filter(|m| {
                (0..weights.len())
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| weights[b])
                    .sum::<i64>()
                    == target
            })
            .map(|m| m.count_ones())
            .min()
    }

    fn brute_best(weights: &[i64], cap: i64) -> i64 {
        (0u32..1 << weights.len())
            .map(|m| {
                (0..weights.len())
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| weights[b])
                    .sum::<i64>()
            })
            .filter(|&s| s <= cap)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn min_card_small() {
        let mut r = MinCardReach::new(10);
        for w in [2, 3, 5] {
            r.add_item(w);
        }
        assert_eq!(r.get(5), Some(1));
        assert_eq!(r.get(10), Some(3));
        assert_eq!(r.get(4), None);
        assert_eq!(r.get(0), Some(0));
        assert_eq!(min_card_witness(&[2, 3, 5], &[0, 1, 2], 5), Some(vec![2]));
        assert_eq!(min_card_witness(&[2, 3, 5], &[0, 1], 5), Some(vec![0, 1]));
        assert_eq!(min_card_witness(&[2, 3, 5], &[0, 1, 2], 4), None);
    }

    #[test]
    fn item_larger_than_capacity_is_skipped() {
        let mut r = MinCardReach::new(4);
        assert_eq!(r.add_item(9), 0);
        assert_eq!(r.add_item(4), 1);
        assert_eq!(r.reachable().count(), 2);
    }

    proptest! {
        #[test]
        fn min_card_matches_brute_force(
            weights in prop::collection::vec(1i64..15, 0..9),
            cap in 0usize..60,
        ) {
            let mut r = MinCardReach::new(cap);
            for &w in &weights { r.add_item(w); }
            let items: Vec<usize> = (0..weights.len()).collect();
            for t in 0..=cap {
                let expect = brute_min_card(&weights, t as i64);
                prop_assert_eq!(r.get(t), expect);
                let wit = min_card_witness(&weights, &items, t as i64);
                prop_assert_eq!(wit.as_ref().map(|w| w.len() as u32), expect);
                if let Some(w) = wit {
                    prop_assert_eq!(w.iter().map(|&i| weights[i]).sum::<i64>(), t as i64);
                }
            }
        }

        #[test]
        fn dp_and_mitm_agree_with_brute_force(
            weights in prop::collection::vec(1i64..40, 0..11),
            cap in 0i64..150,
        ) {
            let items: Vec<usize> = (0..weights.len()).collect();
            let expect = brute_best(&weights, cap);
            for (best, wit) in [best_subset_sum_dp(&weights, &items, cap), best_subset_sum_mitm(&weights, &items, cap)] {
                prop_assert_eq!(best, expect);
                prop_assert_eq!(wit.iter().map(|&i| weights[i]).sum::<i64>(), best);
                let mut dedup = wit.clone();
                dedup.dedup();
                prop_assert_eq!(dedup.len(), wit.len());
            }
        }
    }
}
