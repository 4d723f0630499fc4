//! Critical elements and the boundary points they occupy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ribbon::{Ribbon, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    IsoGon,
    IsoTriangle,
    ZeroGon,
}

/// A saddle surrogate (iso-gon), a touching line (iso-triangle) or a
/// trapped extremum (0-gon).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CriticalElement {
    pub kind: ElementKind,
    /// Doubled level: odd for iso-gons, `2v` of the anchor otherwise.
    pub level2: u32,
    pub anchor: Option<usize>,
    /// Arcs carrying the regular vertices, in circle order (from the anchor
    /// for iso-triangles).
    pub arcs: Vec<usize>,
}

impl CriticalElement {
    /// Number of regular vertices.
    pub fn vertex_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn level(&self) -> f64 {
        self.level2 as f64 / 2.0
    }
}

/// Global circular order of every boundary point an element may use.
#[derive(Debug, Clone)]
pub(crate) struct PointMap {
    pub count: usize,
    node_pos: Vec<u8>,
    /// `cross_pos[arc][level2]`, `u8::MAX` when absent.
    cross_pos: Vec<Vec<u8>>,
    pub positive_mask: u128,
}

impl PointMap {
    pub fn new(a: &Ribbon) -> Result<PointMap> {
        let n = a.n();
        let top = 2 * n as u32;
        let negative_levels: Vec<u32> = (0..n).filter(|&i| a.mark(i) == Sign::Minus).map(|i| 2 * a.value(i)).collect();
        let wanted = |l: u32| l % 2 == 1 || negative_levels.contains(&l);
        let mut node_pos = vec![0u8; n];
        let mut cross_pos = vec![vec![u8::MAX; top as usize + 1]; n];
        let mut count = 0usize;
        let mut positive_mask = 0u128;
        let push = |count: &mut usize| -> Result<u8> {
            if *count >= 128 {
                return Err(Error::LimitExceeded { what: "packing oracle boundary points", max: 128, n: *count + 1 });
            }
            *count += 1;
            Ok((*count - 1) as u8)
        };
        for i in 0..n {
            node_pos[i] = push(&mut count)?;
            if a.mark(i).is_plus() {
                positive_mask |= 1u128 << node_pos[i];
            }
            let (u, w) = (2 * a.value(i), 2 * a.value(a.next(i)));
            let levels: Vec<u32> = if u < w {
                (u + 1..w).filter(|&l| wanted(l)).collect()
            } else {
                (w + 1..u).rev().filter(|&l| wanted(l)).collect()
            };
            for l in levels {
                cross_pos[i][l as usize] = push(&mut count)?;
            }
        }
        Ok(PointMap { count, node_pos, cross_pos, positive_mask })
    }

    pub fn node(&self, i: usize) -> u8 {
        self.node_pos[i]
    }

    pub fn cross(&self, arc: usize, level2: u32) -> u8 {
        let p = self.cross_pos[arc][level2 as usize];
        debug_assert_ne!(p, u8::MAX, "no point for arc {arc} level {level2}");
        p
    }

    pub fn points(&self, e: &CriticalElement) -> Vec<u8> {
        let mut pts: Vec<u8> = e.arcs.iter().map(|&arc| self.cross(arc, e.level2)).collect();
        if let Some(p) = e.anchor {
            pts.push(self.node(p));
        }
        pts.sort_unstable();
        pts
    }
}

/// Nodes strictly between arcs `x` and `y` going forward: `x+1..=y`.
fn nodes_between(n: usize, x: usize, y: usize) -> usize {
    (y + n - x) % n
}

/// Every valid critical element of `a` in a deterministic order: iso-gons by
/// level, then iso-triangles and 0-gons by anchor.
pub fn enumerate_elements(a: &Ribbon) -> Vec<CriticalElement> {
    let n = a.n();
    let mut out = Vec::new();
    for k in 1..n as u32 {
        let level2 = 2 * k + 1;
        let xs = a.crossings(level2);
        let m = xs.len();
        if m < 4 {
            continue;
        }
        for subset in 1u32..(1 << m) {
            let size = subset.count_ones() as usize;
            if size < 4 || size % 2 == 1 {
                continue;
            }
            let idx: Vec<usize> = (0..m).filter(|&i| subset >> i & 1 == 1).collect();
            let alternating = (0..size).all(|j| xs[idx[j]].direction != xs[idx[(j + 1) % size]].direction);
            let arcs: Vec<usize> = idx.iter().map(|&i| xs[i].arc).collect();
            let odd_parts = (0..size).all(|j| nodes_between(n, arcs[j], arcs[(j + 1) % size]) % 2 == 1);
            assert_eq!(alternating, odd_parts, "parity lemma fails on {a} level {level2}");
            if alternating {
                out.push(CriticalElement { kind: ElementKind::IsoGon, level2, anchor: None, arcs });
            }
        }
    }
    for p in 0..n {
        if a.mark(p) != Sign::Minus {
            continue;
        }
        let level2 = 2 * a.value(p);
        let mut xs = a.crossings(level2);
        xs.sort_by_key(|c| (c.arc + n - p) % n);
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if xs[i].direction == xs[j].direction {
                    continue;
                }
                let (x, y) = (xs[i].arc, xs[j].arc);
                let parts = [nodes_between(n, p, x), nodes_between(n, x, y), nodes_between(n, y, p) - 1];
                if parts.iter().all(|c| c % 2 == 1) {
                    out.push(CriticalElement { kind: ElementKind::IsoTriangle, level2, anchor: Some(p), arcs: vec![x, y] });
                }
            }
        }
        out.push(CriticalElement { kind: ElementKind::ZeroGon, level2, anchor: Some(p), arcs: Vec::new() });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ribbon {
        s.parse().unwrap()
    }

    #[test]
    fn alpha0_has_none() {
        assert!(enumerate_elements(&Ribbon::alpha0()).is_empty());
    }

    #[test]
    fn alpha1_has_one_zerogon() {
        let e = enumerate_elements(&r("(1+,2-)"));
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].kind, ElementKind::ZeroGon);
    }

    #[test]
    fn alternation_gons_sit_at_the_cluster_gap() {
        let e = enumerate_elements(&r("(1+,3+,2+,4+)"));
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].kind, e[0].level2), (ElementKind::IsoGon, 5));
    }

    #[test]
    fn point_map_is_circular_order() {
        let a = r("(1-,3-,2-,4-)");
        let pm = PointMap::new(&a).unwrap();
        assert!(pm.node(0) < pm.cross(0, 3));
        assert!(pm.cross(0, 3) < pm.node(1));
        // Arc 1 falls from 3 to 2: level 2.5 only.
        assert!(pm.cross(1, 5) < pm.node(2));
        // Arc 3 falls from 4 to 1: levels met in decreasing order.
        assert!(pm.cross(3, 7) < pm.cross(3, 6) && pm.cross(3, 6) < pm.cross(3, 4));
    }
}
