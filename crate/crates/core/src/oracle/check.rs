//! Re-validates a packing from its definition, without the search's point map.

use num_rational::Ratio;

use super::{CriticalElement, ElementKind};
use crate::ribbon::{Ribbon, Sign};

/// Position on the circle: arc index, then fraction along the arc.
type Coord = (usize, Ratio<i64>);

fn straddles(a: &Ribbon, arc: usize, level2: u32) -> bool {
    let (u, w) = (2 * a.value(arc), 2 * a.value(a.next(arc)));
    u.min(w) < level2 && level2 < u.max(w)
}

fn crossing_coord(a: &Ribbon, arc: usize, level2: u32) -> Coord {
    let (u, w) = (2 * a.value(arc) as i64, 2 * a.value(a.next(arc)) as i64);
    (arc, Ratio::new(level2 as i64 - u, w - u))
}

fn node_coord(i: usize) -> Coord {
    (i, Ratio::from_integer(0))
}

fn odd_count(n: usize, from: usize, to: usize) -> bool {
    ((to + n - from) % n) % 2 == 1
}

fn check_element(a: &Ribbon, e: &CriticalElement) -> Result<Vec<Coord>, String> {
    let n = a.n();
    for &arc in &e.arcs {
        if arc >= n || !straddles(a, arc, e.level2) {
            return Err(format!("arc {arc} does not cross level {}", e.level()));
        }
    }
    let mut pts: Vec<Coord> = e.arcs.iter().map(|&arc| crossing_coord(a, arc, e.level2)).collect();
    match e.kind {
        ElementKind::IsoGon => {
            let k = e.arcs.len();
            if e.anchor.is_some() || e.level2 % 2 == 0 || k < 4 || k % 2 == 1 {
                return Err("malformed iso-gon".into());
            }
            let mut arcs = e.arcs.clone();
            arcs.sort_unstable();
            arcs.dedup();
            if arcs.len() != k || (0..k).any(|j| !odd_count(n, arcs[j], arcs[(j + 1) % k])) {
                return Err("iso-gon complement has an even component".into());
            }
        }
        ElementKind::IsoTriangle | ElementKind::ZeroGon => {
            let p = e.anchor.ok_or("anchored element without anchor")?;
            if p >= n || a.mark(p) != Sign::Minus || e.level2 != 2 * a.value(p) {
                return Err(format!("bad anchor {p}"));
            }
            if e.kind == ElementKind::ZeroGon && !e.arcs.is_empty() {
                return Err("0-gon with vertices".into());
            }
            if e.kind == ElementKind::IsoTriangle {
                let [x, y] = e.arcs[..] else { return Err("iso-triangle needs two vertices".into()) };
                // Components: p+1..=x, x+1..=y, y+1..=p-1 in circle order from p.
                let (dx, dy) = ((x + n - p) % n, (y + n - p) % n);
                if !(dx < dy && dx % 2 == 1 && (dy - dx) % 2 == 1 && (n - dy - 1) % 2 == 1) {
                    return Err("iso-triangle complement has an even component".into());
                }
            }
            pts.push(node_coord(p));
        }
    }
    Ok(pts)
}

/// Checks element validity, disjointness, anchoring, and that every free face
/// has exactly two ends.
pub fn validate_packing(a: &Ribbon, q: &[CriticalElement]) -> Result<(), String> {
    let n = a.n();
    let mut labelled: Vec<(Coord, usize)> = Vec::new();
    for (id, e) in q.iter().enumerate() {
        for c in check_element(a, e)? {
            labelled.push((c, id));
        }
    }
    labelled.sort();
    if labelled.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err("elements share a point".into());
    }
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let seq: Vec<usize> = labelled.iter().map(|&(_, id)| id).filter(|&id| id == i || id == j).collect();
            let changes = (0..seq.len()).filter(|&t| seq[t] != seq[(t + 1) % seq.len()]).count();
            if changes > 2 {
                return Err(format!("elements {i} and {j} interleave"));
            }
        }
    }
    for p in 0..n {
        let anchored = q.iter().filter(|e| e.anchor == Some(p)).count();
        if a.mark(p) == Sign::Minus && anchored != 1 {
            return Err(format!("negative node {p} anchored {anchored} times"));
        }
    }
    if labelled.is_empty() {
        return if a.is_alpha0() { Ok(()) } else { Err("empty family".into()) };
    }
    // Circle order of each element's own points, for stepping along its edges.
    let own: Vec<Vec<Coord>> = (0..q.len()).map(|id| labelled.iter().filter(|l| l.1 == id).map(|l| l.0).collect()).collect();
    let k = labelled.len();
    let positives_between = |from: Coord, to: Coord| {
        (0..n)
            .filter(|&i| a.mark(i).is_plus())
            .filter(|&i| {
                let c = node_coord(i);
                if from < to {
                    from < c && c < to
                } else {
                    c > from || c < to
                }
            })
            .count()
    };
    let mut seen = vec![false; k];
    for first in 0..k {
        if seen[first] {
            continue;
        }
        let (mut positives, mut touched) = (0, Vec::new());
        let mut j = first;
        while !seen[j] {
            seen[j] = true;
            let (from, from_id) = labelled[j];
            let (to, to_id) = labelled[(j + 1) % k];
            positives += positives_between(from, to);
            touched.extend([from_id, to_id]);
            let pts = &own[to_id];
            let at = pts.iter().position(|&c| c == to).expect("own point");
            let back = pts[(at + pts.len() - 1) % pts.len()];
            j = labelled.iter().position(|l| l.0 == back).expect("labelled");
        }
        touched.sort_unstable();
        touched.dedup();
        if positives + touched.len() != 2 {
            return Err(format!("free face with {positives} positive nodes touches {} elements", touched.len()));
        }
    }
    Ok(())
}
