//! Discrete ribbons: cyclic zig-zag permutations of `1..=n` with a `±1` mark on
//! every node.
//!
//! A [`Ribbon`] is always stored in canonical form, rotated so that value 1
//! sits at index 0. Orientation is significant: a ribbon and its mirror image
//! are different ribbons.
//!
//! Levels are passed around *doubled* so that half-integer cut levels stay
//! integral: the doubled level `5` is the level `2.5`, and the doubled level
//! `2 * v` is the exact level of the node holding value `v`.

mod cancel;
mod moves;
mod notation;
mod rolle;
mod semigroup;

pub use cancel::{cancel, cancellable_pairs, short_cancel_all, short_cancellable_pairs};
pub use moves::{applicable_moves, apply_move, Move, MoveKind};
pub use notation::RibbonJson;
pub use rolle::WeakProfile;
pub use semigroup::{
    compose, connected_sum, from_levels, has_positive_extremes, marked_invert, ternary_compose, MarkedRibbon,
    RigidRibbon,
};

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Node mark. `Plus` orders before `Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::BadMark(other)),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Serialized as `1` or `-1`.
impl serde::Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> serde::Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).map_err(serde::de::Error::custom)
    }
}

/// Direction of travel along an arc, following increasing node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

/// An arc `(arc, arc + 1)` that strictly straddles some level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arc: usize,
    pub direction: Direction,
}

/// A marked cyclic zig-zag permutation in canonical rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ribbon {
    values: Vec<u8>,
    marks: Vec<Sign>,
}

/// Largest node count a [`Ribbon`] can hold.
pub const MAX_NODES: usize = 254;

impl Ribbon {
    /// Validates and canonicalizes.
    pub fn new(values: &[u32], marks: &[i64]) -> Result<Ribbon> {
        let signs = marks
            .iter()
            .map(|&m| Sign::from_i64(m))
            .collect::<Result<Vec<_>>>()?;
        Ribbon::from_signs(values, &signs)
    }

    pub fn from_signs(values: &[u32], marks: &[Sign]) -> Result<Ribbon> {
        let n = values.len();
        if n != marks.len() {
            return Err(Error::LengthMismatch { values: n, marks: marks.len() });
        }
        if n < 2 {
            return Err(Error::TooFewNodes);
        }
        if n % 2 == 1 {
            return Err(Error::OddLength(n));
        }
        if n > MAX_NODES {
            return Err(Error::LimitExceeded { what: "ribbon size", max: MAX_NODES, n });
        }
        let mut seen = vec![false; n + 1];
        for &v in values {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::NotPermutation(n));
            }
            seen[v] = true;
        }
        for i in 0..n {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            let v = values[i];
            let is_max = v > prev && v > next;
            let is_min = v < prev && v < next;
            if !is_max && !is_min {
                return Err(Error::NotZigZag(i));
            }
        }
        let values: Vec<u8> = values.iter().map(|&v| v as u8).collect();
        Ok(Ribbon::rotated(values, marks.to_vec()))
    }

    /// Builds from a cycle already known to be a valid zig-zag of `1..=n`.
    pub(crate) fn from_cycle_unchecked(values: Vec<u8>, marks: Vec<Sign>) -> Ribbon {
        let r = Ribbon::rotated(values, marks);
        debug_assert!(r.check().is_ok(), "invalid cycle {r}");
        r
    }

    /// Rank-relabels arbitrary distinct keys to `1..=n` and canonicalizes.
    pub(crate) fn from_ranked<K: Ord + Copy>(keys: &[K], marks: Vec<Sign>) -> Result<Ribbon> {
        let n = keys.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| keys[i]);
        if order.windows(2).any(|w| keys[w[0]] == keys[w[1]]) {
            return Err(Error::DuplicateLevel);
        }
        let mut values = vec![0u32; n];
        for (rank, &i) in order.iter().enumerate() {
            values[i] = rank as u32 + 1;
        }
        Ribbon::from_signs(&values, &marks)
    }

    fn rotated(mut values: Vec<u8>, mut marks: Vec<Sign>) -> Ribbon {
        if let Some(start) = values.iter().position(|&v| v == 1) {
            values.rotate_left(start);
            marks.rotate_left(start);
        }
        Ribbon { values, marks }
    }

    fn check(&self) -> Result<()> {
        let values: Vec<u32> = self.values.iter().map(|&v| v as u32).collect();
        Ribbon::from_signs(&values, &self.marks).map(|_| ())
    }

    /// The minimal ribbon `(1+,2+)`.
    pub fn alpha0() -> Ribbon {
        Ribbon { values: vec![1, 2], marks: vec![Sign::Plus, Sign::Plus] }
    }

    /// The canonical ladder `(1,3,2,5,4,...,n-2,n)` with the given marks.
    pub fn ladder(n: usize, marks: &[Sign]) -> Result<Ribbon> {
        Ribbon::from_signs(&ladder_values(n), marks)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn marks(&self) -> &[Sign] {
        &self.marks
    }

    pub fn value(&self, i: usize) -> u32 {
        self.values[i] as u32
    }

    pub fn mark(&self, i: usize) -> Sign {
        self.marks[i]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }

    /// Greater than both cyclic neighbours.
    pub fn is_max(&self, i: usize) -> bool {
        self.values[i] > self.values[self.next(i)]
    }

    pub fn is_min(&self, i: usize) -> bool {
        !self.is_max(i)
    }

    /// Index of the node holding value `v`.
    pub fn position(&self, v: u32) -> usize {
        self.values
            .iter()
            .position(|&x| x as u32 == v)
            .expect("value out of range")
    }

    pub fn plus_count(&self) -> usize {
        self.marks.iter().filter(|m| m.is_plus()).count()
    }

    /// `σ = s₊ − s₋`.
    pub fn signature(&self) -> i64 {
        2 * self.plus_count() as i64 - self.n() as i64
    }

    /// `1 − σ/2`.
    pub fn index(&self) -> i64 {
        1 - self.signature() / 2
    }

    pub fn is_positive(&self) -> bool {
        self.marks.iter().all(|m| m.is_plus())
    }

    pub fn is_negative(&self) -> bool {
        self.marks.iter().all(|m| !m.is_plus())
    }

    pub fn is_alpha0(&self) -> bool {
        self.n() == 2 && self.is_positive()
    }

    /// Compares `(n, values, marks)` lexicographically.
    pub fn lex_cmp(&self, other: &Ribbon) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| self.values.cmp(&other.values))
            .then_with(|| self.marks.cmp(&other.marks))
    }

    /// The involution `ā`: every mark negated.
    pub fn flip_all(&self) -> Ribbon {
        Ribbon {
            values: self.values.clone(),
            marks: self.marks.iter().map(|m| m.flip()).collect(),
        }
    }

    /// The inversion `a′`: order reversed and `v ↦ n+1−v`.
    pub fn invert(&self) -> Ribbon {
        let n = self.n() as u8;
        let values: Vec<u8> = self.values.iter().rev().map(|&v| n + 1 - v).collect();
        let marks: Vec<Sign> = self.marks.iter().rev().copied().collect();
        Ribbon::from_cycle_unchecked(values, marks)
    }

    pub fn with_mark(&self, i: usize, s: Sign) -> Ribbon {
        let mut r = self.clone();
        r.marks[i] = s;
        r
    }

    pub fn with_marks(&self, marks: &[Sign]) -> Result<Ribbon> {
        if marks.len() != self.n() {
            return Err(Error::LengthMismatch { values: self.n(), marks: marks.len() });
        }
        Ok(Ribbon { values: self.values.clone(), marks: marks.to_vec() })
    }

    /// Arcs strictly straddling the doubled level, in circle order.
    pub fn crossings(&self, level2: u32) -> Vec<Crossing> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            let a = 2 * self.values[i] as u32;
            let b = 2 * self.values[(i + 1) % n] as u32;
            if a.min(b) < level2 && level2 < a.max(b) {
                let direction = if a < b { Direction::Up } else { Direction::Down };
                out.push(Crossing { arc: i, direction });
            }
        }
        out
    }

    /// Crossings at the half-integer level `k + 1/2`.
    pub fn crossings_half(&self, k: u32) -> Vec<Crossing> {
        self.crossings(2 * k + 1)
    }

    /// Crossings at the exact level of node `p`, in circle order.
    pub fn node_level_crossings(&self, p: usize) -> Vec<Crossing> {
        self.crossings(2 * self.value(p))
    }

    /// Every half-integer level carries at most four crossings.
    pub fn is_ladder(&self) -> bool {
        self.n() >= 4 && (1..self.n() as u32).all(|k| self.crossings_half(k).len() <= 4)
    }

    /// All-positive with minima holding exactly `1..=n/2`.
    pub fn is_alternation(&self) -> bool {
        let half = (self.n() / 2) as u32;
        self.n() >= 4
            && self.is_positive()
            && (0..self.n()).all(|i| self.is_max(i) == (self.value(i) > half))
    }

    pub fn is_canonical_ladder_shape(&self) -> bool {
        self.n() >= 4 && self.values.iter().map(|&v| v as u32).eq(ladder_values(self.n()))
    }
}

impl PartialOrd for Ribbon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ribbon {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

/// Values of the canonical ladder `(1,3,2,5,4,...,n-2,n)`.
pub fn ladder_values(n: usize) -> Vec<u32> {
    let mut v = vec![1u32];
    for k in 1..(n / 2) as u32 {
        v.push(2 * k + 1);
        v.push(2 * k);
    }
    if n >= 2 {
        v.push(n as u32);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ribbon {
        s.parse().unwrap()
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Ribbon::new(&[1, 2, 3, 4], &[1, 1, 1, 1]).unwrap_err(), Error::NotZigZag(1));
        assert_eq!(Ribbon::new(&[1, 2, 3], &[1, 1, 1]).unwrap_err(), Error::OddLength(3));
        assert_eq!(Ribbon::new(&[1, 1], &[1, 1]).unwrap_err(), Error::NotPermutation(2));
        assert_eq!(Ribbon::new(&[1, 2], &[1, 0]).unwrap_err(), Error::BadMark(0));
        assert!(matches!(Ribbon::new(&[1, 2], &[1]), Err(Error::LengthMismatch { .. })));
        assert_eq!(Ribbon::new(&[], &[]).unwrap_err(), Error::TooFewNodes);
    }

    #[test]
    fn canonical_rotation() {
        let a = Ribbon::new(&[2, 4, 1, 3], &[1, -1, 1, 1]).unwrap();
        assert_eq!(a.values(), &[1, 3, 2, 4]);
        assert_eq!(a.marks(), &[Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus]);
    }

    #[test]
    fn signature_and_index() {
        let a = r("(1+,6+,2-,4+,3+,5-)");
        assert_eq!((a.signature(), a.index()), (2, 0));
        let b = r("(1-,3-,2-,4-)");
        assert_eq!((b.signature(), b.index()), (-4, 3));
        assert_eq!(Ribbon::alpha0().signature(), 2);
    }

    #[test]
    fn lex_order() {
        let plus = r("(1+,3+,2+,4+)");
        let minus = r("(1+,3+,2+,4-)");
        assert_eq!(plus.lex_cmp(&minus), Ordering::Less);
        assert_eq!(Ribbon::alpha0().lex_cmp(&r("(1+,2-)")), Ordering::Less);
        assert_eq!(plus.lex_cmp(&plus), Ordering::Equal);
    }

    #[test]
    fn involutions() {
        assert_eq!(Ribbon::alpha0().flip_all(), r("(1-,2-)"));
        assert_eq!(r("(1+,2-)").invert(), r("(1-,2+)"));
        let a = r("(1+,6+,2-,4+,3+,5-)");
        assert_eq!(a.invert().invert(), a);
        assert_eq!(a.flip_all().signature(), -a.signature());
    }

    #[test]
    fn crossing_counts() {
        let ladder = r("(1+,3+,2+,5+,4+,7+,6+,8+)");
        assert_eq!(ladder.crossings(5).len(), 4);
        let alt = r("(1+,6+,2+,4+,3+,5+)");
        assert_eq!(alt.crossings(7).len(), 6);
        assert_eq!(alt.crossings(3).len(), 2);
        let neg = r("(1-,3-,2-,4-)");
        let p = neg.position(3);
        let c: Vec<usize> = neg.node_level_crossings(p).iter().map(|c| c.arc).collect();
        assert_eq!(c, vec![2, 3]);
        assert!(neg.node_level_crossings(0).is_empty());
        assert!(neg.node_level_crossings(neg.position(4)).is_empty());
    }

    #[test]
    fn shapes() {
        assert!(r("(1+,3+,2+,5+,4+,7+,6+,8+)").is_ladder());
        assert!(r("(1+,6+,2+,4+,3+,5+)").is_alternation());
        assert!(!r("(1+,6+,2+,4+,3+,5+)").is_ladder());
        assert_eq!(ladder_values(8), vec![1, 3, 2, 5, 4, 7, 6, 8]);
    }
}
