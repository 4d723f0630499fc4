//! Packing enumeration: an independent route to the ribbon invariants.
//!
//! A packing is a family of pairwise non-interleaved critical elements such
//! that every negative node is anchored and every face of the disk left free
//! has exactly two ends, an end being a touched element or a positive node on
//! its boundary. A 0-gon touches the circle at a single point and so does not
//! separate faces.

mod check;
mod elements;

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

pub use check::validate_packing;
pub use elements::{enumerate_elements, CriticalElement, ElementKind};

use crate::error::{Error, Result};
use crate::ribbon::{Ribbon, Sign};
use crate::solver::{InvariantKind, Invariants};
use elements::PointMap;

/// Largest ribbon the oracle accepts.
pub const MAX_ORACLE_NODES: usize = 10;

pub fn element_weight(e: &CriticalElement, kind: InvariantKind) -> u32 {
    use ElementKind::*;
    match (kind, e.kind) {
        (InvariantKind::Gamma, IsoGon | ZeroGon) => 1,
        (InvariantKind::Gamma0, IsoGon) => e.vertex_count() as u32 / 2 - 1,
        (InvariantKind::Gamma0, ZeroGon) => 1,
        (InvariantKind::GammaExt, ZeroGon) => 1,
        (InvariantKind::GammaSad, IsoGon) => 1,
        _ => 0,
    }
}

/// All four weights of a family of elements.
pub fn packing_weights<'a>(elements: impl IntoIterator<Item = &'a CriticalElement>) -> Invariants {
    let mut w = Invariants::ZERO;
    for e in elements {
        w.gamma += element_weight(e, InvariantKind::Gamma);
        w.gamma0 += element_weight(e, InvariantKind::Gamma0);
        w.gamma_ext += element_weight(e, InvariantKind::GammaExt);
        w.gamma_sad += element_weight(e, InvariantKind::GammaSad);
    }
    w
}

/// Backtracking enumerator over the packings of one ribbon.
pub struct PackingSearch {
    alpha0: bool,
    pm: PointMap,
    elements: Vec<CriticalElement>,
    masks: Vec<u128>,
    points: Vec<Vec<u8>>,
    compat: Vec<FixedBitSet>,
    /// Anchored element choices for each negative node, in node order.
    anchors: Vec<Vec<usize>>,
    isogons: Vec<usize>,
}

impl PackingSearch {
    pub fn new(a: &Ribbon) -> Result<PackingSearch> {
        if a.n() > MAX_ORACLE_NODES {
            return Err(Error::LimitExceeded { what: "packing oracle nodes", max: MAX_ORACLE_NODES, n: a.n() });
        }
        let pm = PointMap::new(a)?;
        let elements = enumerate_elements(a);
        let points: Vec<Vec<u8>> = elements.iter().map(|e| pm.points(e)).collect();
        let masks: Vec<u128> = points.iter().map(|p| p.iter().fold(0u128, |m, &x| m | 1u128 << x)).collect();
        let m = elements.len();
        let mut compat = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in i + 1..m {
                if compatible(&points[i], masks[i], &points[j], masks[j]) {
                    compat[i].insert(j);
                    compat[j].insert(i);
                }
            }
        }
        let mut anchors = Vec::new();
        for p in (0..a.n()).filter(|&p| a.mark(p) == Sign::Minus) {
            anchors.push((0..m).filter(|&i| elements[i].anchor == Some(p)).collect());
        }
        let isogons = (0..m).filter(|&i| elements[i].kind == ElementKind::IsoGon).collect();
        Ok(PackingSearch { alpha0: a.is_alpha0(), pm, elements, masks, points, compat, anchors, isogons })
    }

    pub fn elements(&self) -> &[CriticalElement] {
        &self.elements
    }

    /// Calls `f` with the element indices of every packing, exactly once each,
    /// in a deterministic order.
    pub fn for_each(&self, f: &mut dyn FnMut(&[usize])) {
        let mut all = FixedBitSet::with_capacity(self.elements.len());
        all.insert_range(..);
        let mut state = State { chosen: Vec::new(), union: 0, owner: [u16::MAX; 128] };
        self.anchor_step(0, &all, &mut state, f);
    }

    pub fn collect(&self) -> Vec<Vec<CriticalElement>> {
        let mut out = Vec::new();
        self.for_each(&mut |ids| out.push(ids.iter().map(|&i| self.elements[i].clone()).collect()));
        out
    }

    fn push(&self, state: &mut State, i: usize) {
        state.chosen.push(i);
        state.union |= self.masks[i];
        for &p in &self.points[i] {
            state.owner[p as usize] = i as u16;
        }
    }

    fn pop(&self, state: &mut State) {
        let i = state.chosen.pop().expect("nonempty");
        state.union &= !self.masks[i];
    }

    fn anchor_step(&self, k: usize, allowed: &FixedBitSet, state: &mut State, f: &mut dyn FnMut(&[usize])) {
        if k == self.anchors.len() {
            self.gon_step(0, allowed, state, f);
            return;
        }
        for &i in &self.anchors[k] {
            if !allowed.contains(i) {
                continue;
            }
            let mut next = allowed.clone();
            next.intersect_with(&self.compat[i]);
            self.push(state, i);
            self.anchor_step(k + 1, &next, state, f);
            self.pop(state);
        }
    }

    fn gon_step(&self, from: usize, allowed: &FixedBitSet, state: &mut State, f: &mut dyn FnMut(&[usize])) {
        let remaining: Vec<usize> = self.isogons[from..].iter().copied().filter(|&i| allowed.contains(i)).collect();
        let crowded = self.crowded_arcs(state.union);
        if crowded.iter().any(|&arc| !remaining.iter().any(|&i| self.masks[i] & arc != 0)) {
            return;
        }
        if crowded.is_empty() && self.faces_ok(state) {
            f(&state.chosen);
        }
        for (off, &i) in self.isogons[from..].iter().enumerate() {
            if !allowed.contains(i) {
                continue;
            }
            let mut next = allowed.clone();
            next.intersect_with(&self.compat[i]);
            self.push(state, i);
            self.gon_step(from + off + 1, &next, state, f);
            self.pop(state);
        }
    }

    /// Circle gaps between chosen points, as masks of the points strictly inside, that
    /// hold two or more positive nodes.
    fn crowded_arcs(&self, union: u128) -> Vec<u128> {
        if union == 0 {
            return if self.alpha0 { Vec::new() } else { vec![self.full_mask()] };
        }
        self.free_arcs(union).into_iter().map(|(_, _, m)| m).filter(|&m| (m & self.pm.positive_mask).count_ones() >= 2).collect()
    }

    fn full_mask(&self) -> u128 {
        if self.pm.count == 128 {
            u128::MAX
        } else {
            (1u128 << self.pm.count) - 1
        }
    }

    /// `(start, end, inside)` for each arc between cyclically consecutive
    /// points of `union`.
    fn free_arcs(&self, union: u128) -> Vec<(u8, u8, u128)> {
        let pts: Vec<u8> = (0..self.pm.count as u8).filter(|&p| union >> p & 1 == 1).collect();
        let full = self.full_mask();
        let k = pts.len();
        (0..k)
            .map(|j| {
                let (s, e) = (pts[j], pts[(j + 1) % k]);
                let above = full & if s >= 127 { 0 } else { u128::MAX << (s + 1) };
                let below = if e == 0 { 0 } else { u128::MAX >> (128 - e) };
                let inside = if s < e { above & below } else { above | below };
                (s, e, inside)
            })
            .collect()
    }

    /// Walks the free faces: a face follows a circle gap to its end point,
    /// then the owning element's edge back to that element's previous vertex.
    fn faces_ok(&self, state: &State) -> bool {
        if state.union == 0 {
            return self.alpha0;
        }
        let gaps = self.free_arcs(state.union);
        let start_of = |p: u8| gaps.iter().position(|g| g.0 == p).expect("union point");
        let mut seen = vec![false; gaps.len()];
        for first in 0..gaps.len() {
            if seen[first] {
                continue;
            }
            let (mut positives, mut touched) = (0u32, Vec::new());
            let mut j = first;
            while !seen[j] {
                seen[j] = true;
                let (s, e, inside) = gaps[j];
                positives += (inside & self.pm.positive_mask).count_ones();
                let owner = state.owner[e as usize] as usize;
                touched.extend([state.owner[s as usize], owner as u16]);
                let pts = &self.points[owner];
                let at = pts.iter().position(|&x| x == e).expect("owned point");
                j = start_of(pts[(at + pts.len() - 1) % pts.len()]);
            }
            touched.sort_unstable();
            touched.dedup();
            if positives as usize + touched.len() != 2 {
                return false;
            }
        }
        true
    }
}

struct State {
    chosen: Vec<usize>,
    union: u128,
    owner: [u16; 128],
}

/// Disjoint, and `b` sits in a single gap of `a`.
fn compatible(pa: &[u8], ma: u128, pb: &[u8], mb: u128) -> bool {
    if ma & mb != 0 {
        return false;
    }
    let k = pa.len();
    let gap = |x: u8| pa.iter().filter(|&&y| y < x).count() % k;
    let g = gap(pb[0]);
    pb.iter().all(|&x| gap(x) == g)
}

/// Everything the oracle reports about one ribbon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub packings: u64,
    /// Packings keyed by their number of critical points.
    pub by_size: BTreeMap<u32, u64>,
    pub minimum: Invariants,
    /// Packings attaining each kind's minimum, in `InvariantKind::ALL` order.
    pub count_minimal: [u64; 4],
    pub compression: u32,
    pub max_nondeg_saddles: u32,
    pub min_nondeg_saddles: u32,
    /// Packings whose critical points violate `extrema - saddles = 1 - σ/2`
    /// after splitting each 2k-gon into k-1 nondegenerate saddles.
    pub index_defects: u64,
    /// Fewest distinct critical levels over all packings.
    pub min_levels: u32,
    pub max_critical_points: u32,
}

pub fn summarize(a: &Ribbon) -> Result<OracleSummary> {
    let search = PackingSearch::new(a)?;
    let els = search.elements();
    let index = 2 - a.signature();
    let mut s = OracleSummary {
        packings: 0,
        by_size: BTreeMap::new(),
        minimum: Invariants::UNSET,
        count_minimal: [0; 4],
        compression: 0,
        max_nondeg_saddles: 0,
        min_nondeg_saddles: u32::MAX,
        index_defects: 0,
        min_levels: u32::MAX,
        max_critical_points: 0,
    };
    search.for_each(&mut |ids| {
        let q = ids.iter().map(|&i| &els[i]);
        let w = packing_weights(q.clone());
        s.packings += 1;
        *s.by_size.entry(w.gamma).or_default() += 1;
        for (slot, kind) in InvariantKind::ALL.into_iter().enumerate() {
            let (cur, new) = (s.minimum.get(kind), w.get(kind));
            if new < cur {
                s.count_minimal[slot] = 1;
            } else if new == cur {
                s.count_minimal[slot] += 1;
            }
        }
        s.minimum = s.minimum.min(w);
        let gons = q.clone().filter(|e| e.kind == ElementKind::IsoGon);
        s.compression = s.compression.max(gons.clone().map(|e| e.vertex_count() as u32 / 2 - 2).sum());
        let saddles: u32 = gons.map(|e| e.vertex_count() as u32 / 2 - 1).sum();
        s.max_nondeg_saddles = s.max_nondeg_saddles.max(saddles);
        s.min_nondeg_saddles = s.min_nondeg_saddles.min(saddles);
        if 2 * (w.gamma_ext as i64 - saddles as i64) != index {
            s.index_defects += 1;
        }
        let mut levels: Vec<u32> = q.filter(|e| e.kind != ElementKind::IsoTriangle).map(|e| e.level2).collect();
        levels.sort_unstable();
        levels.dedup();
        s.min_levels = s.min_levels.min(levels.len() as u32);
        s.max_critical_points = s.max_critical_points.max(w.gamma);
    });
    if s.packings == 0 {
        return Err(Error::InternalNoCandidate(format!("no packing for {a}")));
    }
    Ok(s)
}

pub fn oracle_invariant(a: &Ribbon, kind: InvariantKind) -> Result<u32> {
    Ok(summarize(a)?.minimum.get(kind))
}

pub fn count_packings(a: &Ribbon) -> Result<u64> {
    let mut count = 0;
    PackingSearch::new(a)?.for_each(&mut |_| count += 1);
    Ok(count)
}

pub fn count_minimal(a: &Ribbon, kind: InvariantKind) -> Result<u64> {
    let slot = InvariantKind::ALL.iter().position(|&k| k == kind).expect("listed");
    Ok(summarize(a)?.count_minimal[slot])
}

/// Critical-point-free extensions of the all-negative marking of `values`.
pub fn count_free_extensions(values: &[u32]) -> Result<u64> {
    let a = Ribbon::from_signs(values, &vec![Sign::Minus; values.len()])?;
    count_minimal(&a, InvariantKind::Gamma)
}

/// JSON form used when streaming packings.
pub fn packing_json(q: &[CriticalElement]) -> serde_json::Value {
    let elements: Vec<serde_json::Value> = q
        .iter()
        .map(|e| match e.kind {
            ElementKind::IsoGon => serde_json::json!({"kind": "isogon", "level": e.level(), "arcs": e.arcs}),
            ElementKind::IsoTriangle => {
                serde_json::json!({"kind": "isotriangle", "level": e.level(), "node": e.anchor, "arcs": e.arcs})
            }
            ElementKind::ZeroGon => serde_json::json!({"kind": "zerogon", "level": e.level(), "node": e.anchor}),
        })
        .collect();
    serde_json::json!({ "elements": elements })
}
