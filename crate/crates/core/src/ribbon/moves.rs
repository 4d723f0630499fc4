//! Elementary moves between neighbouring ribbons.

use serde::{Deserialize, Serialize};

use super::cancel::{remove_pair, short_cancellable_pairs};
use super::{Ribbon, Sign};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    Meeting,
    Separation,
    Bypass,
    Birth,
    Death,
    Flip,
}

/// An elementary move. Node operands are indices into the canonical ribbon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// `p` holds `k` at a maximum, `q` holds `k+1` at a minimum.
    Meeting { p: usize, q: usize },
    /// `p` holds `k` at a minimum, `q` holds `k+1` at a maximum.
    Separation { p: usize, q: usize },
    /// `p` holds `k`, `q` holds `k+1`, both of the same extremum type.
    Bypass { p: usize, q: usize },
    /// Inserts two nodes on arc `(arc, arc+1)` with values `gap+1, gap+2`
    /// (older values above `gap` shift up by two). The node nearer `arc`
    /// gets `first`, the other its opposite.
    Birth { arc: usize, gap: u32, first: Sign },
    /// Removes a short-cancellable pair.
    Death { p: usize, q: usize },
    Flip { node: usize },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Meeting { .. } => MoveKind::Meeting,
            Move::Separation { .. } => MoveKind::Separation,
            Move::Bypass { .. } => MoveKind::Bypass,
            Move::Birth { .. } => MoveKind::Birth,
            Move::Death { .. } => MoveKind::Death,
            Move::Flip { .. } => MoveKind::Flip,
        }
    }
}

fn adjacent(a: &Ribbon, p: usize, q: usize) -> bool {
    a.next(p) == q || a.next(q) == p
}

fn not_applicable(m: &Move, why: &str) -> Error {
    Error::MoveNotApplicable(format!("{m:?}: {why}"))
}

/// Every move applicable to `a`, in a deterministic order.
pub fn applicable_moves(a: &Ribbon) -> Vec<Move> {
    let n = a.n();
    let mut pos = vec![0usize; n + 1];
    for i in 0..n {
        pos[a.value(i) as usize] = i;
    }
    let mut out = Vec::new();
    for k in 1..n {
        let (p, q) = (pos[k], pos[k + 1]);
        match (a.is_max(p), a.is_max(q)) {
            (true, false) if !adjacent(a, p, q) => out.push(Move::Meeting { p, q }),
            (false, true) if !adjacent(a, p, q) => out.push(Move::Separation { p, q }),
            (x, y) if x == y => out.push(Move::Bypass { p, q }),
            _ => {}
        }
    }
    for arc in 0..n {
        let (u, w) = (a.value(arc), a.value(a.next(arc)));
        for gap in u.min(w)..u.max(w) {
            for first in [Sign::Plus, Sign::Minus] {
                out.push(Move::Birth { arc, gap, first });
            }
        }
    }
    for (p, q) in short_cancellable_pairs(a) {
        out.push(Move::Death { p, q });
    }
    for node in 0..n {
        out.push(Move::Flip { node });
    }
    out
}

fn swap_values(a: &Ribbon, p: usize, q: usize) -> Ribbon {
    let mut values = a.values().to_vec();
    values.swap(p, q);
    Ribbon::from_cycle_unchecked(values, a.marks().to_vec())
}

pub fn apply_move(a: &Ribbon, m: Move) -> Result<Ribbon> {
    let n = a.n();
    let in_range = |i: usize| i < n;
    match m {
        Move::Meeting { p, q } | Move::Separation { p, q } | Move::Bypass { p, q } => {
            if !in_range(p) || !in_range(q) || a.value(p) + 1 != a.value(q) {
                return Err(not_applicable(&m, "nodes must hold consecutive values k, k+1"));
            }
            let ok = match m {
                Move::Meeting { .. } => a.is_max(p) && a.is_min(q) && !adjacent(a, p, q),
                Move::Separation { .. } => a.is_min(p) && a.is_max(q) && !adjacent(a, p, q),
                _ => a.is_max(p) == a.is_max(q),
            };
            if !ok {
                return Err(not_applicable(&m, "extremum types do not match the move"));
            }
            Ok(swap_values(a, p, q))
        }
        Move::Birth { arc, gap, first } => {
            if !in_range(arc) {
                return Err(not_applicable(&m, "arc out of range"));
            }
            let (u, w) = (a.value(arc), a.value(a.next(arc)));
            if gap < u.min(w) || gap >= u.max(w) {
                return Err(not_applicable(&m, "gap outside the arc's value range"));
            }
            let shift = |v: u8| if v as u32 > gap { v + 2 } else { v };
            let (x, y) = if u < w { (gap + 2, gap + 1) } else { (gap + 1, gap + 2) };
            let mut values = Vec::with_capacity(n + 2);
            let mut marks = Vec::with_capacity(n + 2);
            for i in 0..n {
                values.push(shift(a.values()[i]));
                marks.push(a.mark(i));
                if i == arc {
                    values.push(x as u8);
                    marks.push(first);
                    values.push(y as u8);
                    marks.push(first.flip());
                }
            }
            Ok(Ribbon::from_cycle_unchecked(values, marks))
        }
        Move::Death { p, q } => {
            let ok = short_cancellable_pairs(a).iter().any(|&(i, j)| (i, j) == (p, q) || (j, i) == (p, q));
            if !ok {
                return Err(not_applicable(&m, "not a short-cancellable pair"));
            }
            Ok(remove_pair(a, p, q))
        }
        Move::Flip { node } => {
            if !in_range(node) {
                return Err(not_applicable(&m, "node out of range"));
            }
            Ok(a.with_mark(node, a.mark(node).flip()))
        }
    }
}
