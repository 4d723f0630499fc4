//! Short cancellations and level-gap cancellations.

use super::{Ribbon, Sign};
use crate::error::{Error, Result};

/// Removes two circle-adjacent nodes and relabels the rest to `1..=n-2`.
pub(crate) fn remove_pair(a: &Ribbon, i: usize, j: usize) -> Ribbon {
    let n = a.n();
    let mut values = Vec::with_capacity(n - 2);
    let mut marks = Vec::with_capacity(n - 2);
    for k in 0..n {
        if k != i && k != j {
            values.push(a.values()[k]);
            marks.push(a.mark(k));
        }
    }
    let (lo, hi) = {
        let (x, y) = (a.values()[i], a.values()[j]);
        (x.min(y), x.max(y))
    };
    for v in values.iter_mut() {
        *v -= (*v > lo) as u8 + (*v > hi) as u8;
    }
    Ribbon::from_cycle_unchecked(values, marks)
}

/// Adjacent pairs `(i, i+1)` with opposite marks and values differing by one.
pub fn short_cancellable_pairs(a: &Ribbon) -> Vec<(usize, usize)> {
    if a.n() < 4 {
        return Vec::new();
    }
    (0..a.n())
        .map(|i| (i, a.next(i)))
        .filter(|&(i, j)| a.mark(i) != a.mark(j) && a.value(i).abs_diff(a.value(j)) == 1)
        .collect()
}

/// Performs short cancellations until none remain or two nodes are left.
pub fn short_cancel_all(a: &Ribbon) -> Ribbon {
    let mut cur = a.clone();
    while let Some(&(i, j)) = short_cancellable_pairs(&cur).first() {
        cur = remove_pair(&cur, i, j);
    }
    cur
}

/// Pairs `(p, q)`, `p` negative and `q` positive, that may be cancelled.
pub fn cancellable_pairs(a: &Ribbon) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if a.n() < 4 {
        return out;
    }
    for p in 0..a.n() {
        if a.mark(p) != Sign::Minus {
            continue;
        }
        for q in [a.prev(p), a.next(p)] {
            if a.mark(q) != Sign::Plus {
                continue;
            }
            let r = if q == a.next(p) { a.next(q) } else { a.prev(q) };
            if a.value(p).abs_diff(a.value(q)) < a.value(q).abs_diff(a.value(r)) {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn cancel(a: &Ribbon, p: usize, q: usize) -> Result<Ribbon> {
    if !cancellable_pairs(a).contains(&(p, q)) {
        return Err(Error::NotCancellable(p, q));
    }
    Ok(remove_pair(a, p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ribbon {
        s.parse().unwrap()
    }

    #[test]
    fn short_cancel_examples() {
        assert_eq!(short_cancel_all(&r("(1+,3+,2-,4+)")), Ribbon::alpha0());
        let ladder = r("(1+,3+,2+,5+,4+,7+,6+,8+)");
        assert_eq!(short_cancel_all(&ladder), ladder);
        let a1 = r("(1+,2-)");
        assert_eq!(short_cancel_all(&a1), a1);
    }

    #[test]
    fn short_cancel_is_idempotent() {
        let a = r("(1-,5+,4-,6+,2-,3+)");
        let once = short_cancel_all(&a);
        assert_eq!(short_cancel_all(&once), once);
    }

    #[test]
    fn cancellation_preserves_signature() {
        let a = r("(1+,6+,2-,4+,3-,5+)");
        let pairs = cancellable_pairs(&a);
        assert!(!pairs.is_empty());
        for (p, q) in pairs {
            assert_eq!(cancel(&a, p, q).unwrap().signature(), a.signature());
        }
    }

    #[test]
    fn rejects_gap_violation() {
        // 5- next to 3+: the other neighbour of 3 is 4, and |5-3| > |3-4|.
        let a = r("(1+,5-,3+,4+,2+,6+)");
        assert_eq!(cancel(&a, 1, 2).unwrap_err(), Error::NotCancellable(1, 2));
        assert!(cancel(&a, 1, 0).is_ok());
    }
}
