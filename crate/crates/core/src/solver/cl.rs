//! The counting function cl⁺⁺ and the primary-node indicator ξ.

use crate::ribbon::Ribbon;

/// Values `k` held by a positive maximum with `k+1` held by a positive minimum.
fn counted_pairs(a: &Ribbon) -> Vec<(usize, usize)> {
    let n = a.n();
    let mut pos = vec![0usize; n + 1];
    for i in 0..n {
        pos[a.value(i) as usize] = i;
    }
    (1..n)
        .map(|k| (pos[k], pos[k + 1]))
        .filter(|&(p, q)| a.is_max(p) && a.is_min(q) && a.mark(p).is_plus() && a.mark(q).is_plus())
        .collect()
}

pub fn cl_plus_plus(a: &Ribbon) -> u32 {
    counted_pairs(a).len() as u32
}

/// 1 iff the node is positive and belongs to a pair counted by [`cl_plus_plus`].
pub fn primary_xi(a: &Ribbon, node: usize) -> u32 {
    counted_pairs(a).iter().any(|&(p, q)| p == node || q == node) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_pairs() {
        let a: Ribbon = "(1+,3+,2+,5+,4+,7+,6+,8+)".parse().unwrap();
        assert_eq!(cl_plus_plus(&a), 2);
        let flagged: Vec<u32> = (0..8).filter(|&i| primary_xi(&a, i) == 1).map(|i| a.value(i)).collect();
        assert_eq!(flagged, vec![3, 5, 4, 6]);
    }

    #[test]
    fn general_ladder_counts_positive_pairs() {
        let a: Ribbon = "(1+,3+,2+,5-,4+,7+,6+,8+)".parse().unwrap();
        assert_eq!(cl_plus_plus(&a), 1);
    }
}
