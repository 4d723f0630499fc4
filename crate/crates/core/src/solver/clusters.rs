//! Clusters and the cluster numbers δ, δ₀ via greedy interval stabbing.

use crate::ribbon::{Ribbon, Sign};

/// Pairs `(k, k+1)` with `k` at a minimum and `k+1` at a maximum.
pub fn clusters(a: &Ribbon) -> Vec<(u32, u32)> {
    let n = a.n();
    let mut is_max = vec![false; n + 2];
    for i in 0..n {
        is_max[a.value(i) as usize] = a.is_max(i);
    }
    (1..n as u32)
        .filter(|&k| !is_max[k as usize] && is_max[k as usize + 1])
        .map(|k| (k, k + 1))
        .collect()
}

/// Minimum number of points hitting every closed interval.
pub fn stabbing_number(intervals: &[(u32, u32)]) -> u32 {
    let mut sorted = intervals.to_vec();
    sorted.sort_by_key(|&(_, hi)| hi);
    let mut count = 0;
    let mut last: Option<u32> = None;
    for (lo, hi) in sorted {
        if last.is_none_or(|l| l < lo) {
            last = Some(hi);
            count += 1;
        }
    }
    count
}

fn arc_interval(a: &Ribbon, i: usize) -> (u32, u32) {
    let (u, w) = (a.value(i), a.value(a.next(i)));
    (u.min(w), u.max(w))
}

/// Cluster number; zero at `n = 2`.
pub fn delta(a: &Ribbon) -> u32 {
    if a.n() == 2 {
        return 0;
    }
    let intervals: Vec<_> = (0..a.n()).map(|i| arc_interval(a, i)).collect();
    stabbing_number(&intervals)
}

/// Reduced cluster number: only arcs with two positive ends whose interval
/// contains no negative node's level.
pub fn delta0(a: &Ribbon) -> u32 {
    if a.n() == 2 {
        return 0;
    }
    let negative_levels: Vec<u32> = (0..a.n()).filter(|&i| a.mark(i) == Sign::Minus).map(|i| a.value(i)).collect();
    let intervals: Vec<_> = (0..a.n())
        .filter(|&i| a.mark(i).is_plus() && a.mark(a.next(i)).is_plus())
        .map(|i| arc_interval(a, i))
        .filter(|&(lo, hi)| !negative_levels.iter().any(|&v| lo <= v && v <= hi))
        .collect();
    stabbing_number(&intervals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ribbon {
        s.parse().unwrap()
    }

    #[test]
    fn ladder_clusters() {
        let a = r("(1+,3+,2+,5+,4+,7+,6+,8+)");
        assert_eq!(clusters(&a), vec![(2, 3), (4, 5), (6, 7)]);
        assert_eq!(delta(&a), 3);
        assert_eq!(delta0(&a), 3);
    }

    #[test]
    fn alternation_has_one_cluster() {
        let a = r("(1+,6+,2+,4+,3+,5+)");
        assert_eq!(clusters(&a), vec![(3, 4)]);
        assert_eq!(delta(&a), 1);
    }

    #[test]
    fn two_nodes_by_convention() {
        assert_eq!(delta(&Ribbon::alpha0()), 0);
        assert_eq!(delta0(&Ribbon::alpha0()), 0);
    }

    #[test]
    fn greedy_stabbing() {
        assert_eq!(stabbing_number(&[(1, 3), (2, 5), (4, 6), (7, 8)]), 3);
        assert_eq!(stabbing_number(&[]), 0);
    }
}
