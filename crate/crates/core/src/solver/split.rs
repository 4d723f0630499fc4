//! Binary splits along a regular level and ternary splits through a negative node.

use serde::Serialize;

use crate::ribbon::{Crossing, Direction, Ribbon, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinarySplit {
    /// Doubled cut level.
    pub level2: u32,
    pub arcs: (usize, usize),
    pub parts: [Ribbon; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TernarySplit {
    pub node: usize,
    pub arcs: (usize, usize),
    pub parts: [Ribbon; 3],
}

/// Nodes `from, from+1, ..., to` (cyclic, inclusive) plus one positive node
/// at `level2`. Returns `None` if the result is not a zig-zag.
fn part(a: &Ribbon, from: usize, to: usize, level2: u32) -> Option<Ribbon> {
    let n = a.n();
    let len = (to + n - from) % n + 1;
    let mut keys = Vec::with_capacity(len + 1);
    let mut marks = Vec::with_capacity(len + 1);
    for d in 0..len {
        let i = (from + d) % n;
        keys.push(2 * a.value(i));
        marks.push(a.mark(i));
    }
    keys.push(level2);
    marks.push(Sign::Plus);
    Ribbon::from_ranked(&keys, marks).ok()
}

/// Splits at every opposite-direction pair of crossings of `level2`.
pub fn binary_splits(a: &Ribbon, level2: u32) -> Vec<BinarySplit> {
    let xs = a.crossings(level2);
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in (i + 1..xs.len()).step_by(2) {
            let (x, y) = (xs[i].arc, xs[j].arc);
            debug_assert_ne!(xs[i].direction, xs[j].direction);
            let p1 = part(a, x + 1, y, level2).expect("opposite crossings give a valid part");
            let p2 = part(a, y + 1, x, level2).expect("opposite crossings give a valid part");
            out.push(BinarySplit { level2, arcs: (x, y), parts: [p1, p2] });
        }
    }
    out
}

/// Splits through node `p` along its exact level, keeping only pairs whose
/// three parts are valid ribbons.
pub fn ternary_splits(a: &Ribbon, p: usize) -> Vec<TernarySplit> {
    let n = a.n();
    let level2 = 2 * a.value(p);
    let mut xs: Vec<Crossing> = a.node_level_crossings(p);
    xs.sort_by_key(|c| (c.arc + n - p) % n);
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i].direction == xs[j].direction {
                continue;
            }
            let (x, y) = (xs[i].arc, xs[j].arc);
            let parts = (
                part(a, a.next(p), x, level2),
                part(a, x + 1, y, level2),
                part(a, y + 1, a.prev(p), level2),
            );
            if let (Some(p1), Some(p2), Some(p3)) = parts {
                out.push(TernarySplit { node: p, arcs: (x, y), parts: [p1, p2, p3] });
            }
        }
    }
    out
}

/// The direction of the first crossing of the pair for a valid ternary
/// split: up when the node is a maximum.
pub fn ternary_first_direction(a: &Ribbon, p: usize) -> Direction {
    if a.is_max(p) {
        Direction::Up
    } else {
        Direction::Down
    }
}
