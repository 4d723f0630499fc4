//! Connected sum, rigid ribbons, and the binary/ternary gluing of marked ribbons.

use num_rational::Rational64;

use super::{Ribbon, Sign};
use crate::error::{Error, Result};

/// `a # b`: the maximal node of `a` is glued to the minimal node of `b` and
/// both disappear. Only the two glued nodes need to be positive.
pub fn connected_sum(a: &Ribbon, b: &Ribbon) -> Result<Ribbon> {
    let na = a.n() as u8;
    let ia = a.position(na as u32);
    if !a.mark(ia).is_plus() {
        return Err(Error::PreconditionViolated("maximal node of the left operand is negative".into()));
    }
    if !b.mark(0).is_plus() {
        return Err(Error::PreconditionViolated("minimal node of the right operand is negative".into()));
    }
    let mut values = Vec::with_capacity(a.n() + b.n() - 2);
    let mut marks = Vec::with_capacity(a.n() + b.n() - 2);
    for i in 0..a.n() {
        if i == ia {
            for j in 1..b.n() {
                values.push(b.values()[j] + na - 2);
                marks.push(b.mark(j));
            }
        } else {
            values.push(a.values()[i]);
            marks.push(a.mark(i));
        }
    }
    Ok(Ribbon::from_cycle_unchecked(values, marks))
}

/// Both global extreme nodes are positive.
pub fn has_positive_extremes(a: &Ribbon) -> bool {
    a.mark(0).is_plus() && a.mark(a.position(a.n() as u32)).is_plus()
}

/// A ribbon with explicit rational node levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidRibbon {
    levels: Vec<Rational64>,
    marks: Vec<Sign>,
}

impl RigidRibbon {
    pub fn new(levels: Vec<Rational64>, marks: Vec<Sign>) -> Result<RigidRibbon> {
        let n = levels.len();
        if n != marks.len() {
            return Err(Error::LengthMismatch { values: n, marks: marks.len() });
        }
        if n < 2 {
            return Err(Error::TooFewNodes);
        }
        if n % 2 == 1 {
            return Err(Error::OddLength(n));
        }
        let mut sorted = levels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLevel);
        }
        for i in 0..n {
            let (prev, cur, next) = (levels[(i + n - 1) % n], levels[i], levels[(i + 1) % n]);
            if !((cur > prev && cur > next) || (cur < prev && cur < next)) {
                return Err(Error::NotZigZag(i));
            }
        }
        Ok(RigidRibbon { levels, marks })
    }

    /// Integer levels equal to the ribbon's values.
    pub fn from_ribbon(r: &Ribbon) -> RigidRibbon {
        RigidRibbon {
            levels: r.values().iter().map(|&v| Rational64::from_integer(v as i64)).collect(),
            marks: r.marks().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Rational64] {
        &self.levels
    }

    pub fn marks(&self) -> &[Sign] {
        &self.marks
    }

    pub fn is_max(&self, i: usize) -> bool {
        self.levels[i] > self.levels[(i + 1) % self.n()]
    }

    pub fn translated(&self, by: Rational64) -> RigidRibbon {
        RigidRibbon { levels: self.levels.iter().map(|&l| l + by).collect(), marks: self.marks.clone() }
    }
}

/// Rank relabelling of a rigid ribbon.
pub fn from_levels(r: &RigidRibbon) -> Result<Ribbon> {
    Ribbon::from_ranked(&r.levels, r.marks.clone())
}

/// A rigid ribbon with a distinguished positive minimum (origin) and
/// positive maximum (end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedRibbon {
    pub ribbon: RigidRibbon,
    pub origin: usize,
    pub end: usize,
}

impl MarkedRibbon {
    pub fn new(ribbon: RigidRibbon, origin: usize, end: usize) -> Result<MarkedRibbon> {
        let n = ribbon.n();
        if origin >= n || end >= n {
            return Err(Error::PreconditionViolated("origin or end out of range".into()));
        }
        if ribbon.is_max(origin) || !ribbon.marks[origin].is_plus() {
            return Err(Error::PreconditionViolated("origin must be a positive minimum".into()));
        }
        if !ribbon.is_max(end) || !ribbon.marks[end].is_plus() {
            return Err(Error::PreconditionViolated("end must be a positive maximum".into()));
        }
        Ok(MarkedRibbon { ribbon, origin, end })
    }

    /// Origin at the global minimum, end at the global maximum.
    pub fn from_ribbon(r: &Ribbon) -> Result<MarkedRibbon> {
        MarkedRibbon::new(RigidRibbon::from_ribbon(r), 0, r.position(r.n() as u32))
    }

    pub fn to_ribbon(&self) -> Result<Ribbon> {
        from_levels(&self.ribbon)
    }

    fn level(&self, i: usize) -> Rational64 {
        self.ribbon.levels[i]
    }

    /// Nodes after `skip`, going once around the circle back to it.
    fn chain(&self, skip: usize) -> impl Iterator<Item = (Rational64, Sign, usize)> + '_ {
        let n = self.ribbon.n();
        (1..n).map(move |d| {
            let i = (skip + d) % n;
            (self.ribbon.levels[i], self.ribbon.marks[i], i)
        })
    }
}

struct Builder {
    levels: Vec<Rational64>,
    marks: Vec<Sign>,
    origin: Option<usize>,
    end: Option<usize>,
}

impl Builder {
    fn new() -> Builder {
        Builder { levels: Vec::new(), marks: Vec::new(), origin: None, end: None }
    }

    fn push_chain(&mut self, part: &MarkedRibbon, skip: usize, shift: Rational64, take_origin: bool, take_end: bool) {
        for (l, s, i) in part.chain(skip) {
            if take_origin && i == part.origin {
                self.origin = Some(self.levels.len());
            }
            if take_end && i == part.end {
                self.end = Some(self.levels.len());
            }
            self.levels.push(l + shift);
            self.marks.push(s);
        }
    }

    fn finish(self) -> Result<MarkedRibbon> {
        let ribbon = match RigidRibbon::new(self.levels, self.marks) {
            Ok(r) => r,
            Err(Error::DuplicateLevel) => return Err(Error::LevelCollision),
            Err(e) => return Err(e),
        };
        let origin = self.origin.expect("origin carried over");
        let end = self.end.expect("end carried over");
        MarkedRibbon::new(ribbon, origin, end)
    }
}

/// `ab`: `b` is translated so that its origin sits at the level of `a`'s end;
/// the two glued nodes disappear.
pub fn compose(a: &MarkedRibbon, b: &MarkedRibbon) -> Result<MarkedRibbon> {
    let shift = a.level(a.end) - b.level(b.origin);
    let mut out = Builder::new();
    out.push_chain(a, a.end, Rational64::from_integer(0), true, false);
    out.push_chain(b, b.origin, shift, false, true);
    out.finish()
}

/// `[abc]`: the ends of `a` and `b` and the origin of `c` are brought to one
/// level `l₀` and merge into a single new negative maximum.
pub fn ternary_compose(a: &MarkedRibbon, b: &MarkedRibbon, c: &MarkedRibbon) -> Result<MarkedRibbon> {
    let l0 = a.level(a.end);
    let zero = Rational64::from_integer(0);
    let mut out = Builder::new();
    out.levels.push(l0);
    out.marks.push(Sign::Minus);
    out.push_chain(a, a.end, zero, true, false);
    out.push_chain(c, c.origin, l0 - c.level(c.origin), false, true);
    out.push_chain(b, b.end, l0 - b.level(b.end), false, false);
    out.finish()
}

/// Order reversed, levels negated, origin and end exchanged.
pub fn marked_invert(a: &MarkedRibbon) -> MarkedRibbon {
    let n = a.ribbon.n();
    let levels = a.ribbon.levels.iter().rev().map(|&l| -l).collect();
    let marks = a.ribbon.marks.iter().rev().copied().collect();
    MarkedRibbon {
        ribbon: RigidRibbon { levels, marks },
        origin: n - 1 - a.end,
        end: n - 1 - a.origin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ribbon {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn from_levels_ranks() {
        let levels = vec![q(1, 2), q(29, 4), q(1, 1), q(3, 1), q(2, 1), q(7, 2)];
        let rr = RigidRibbon::new(levels, r("(1+,6+,2-,4+,3+,5-)").marks().to_vec()).unwrap();
        assert_eq!(from_levels(&rr).unwrap(), r("(1+,6+,2-,4+,3+,5-)"));
        let tie = RigidRibbon::new(vec![q(1, 1), q(3, 1), q(1, 1), q(2, 1)], vec![Sign::Plus; 4]);
        assert_eq!(tie.unwrap_err(), Error::DuplicateLevel);
    }

    #[test]
    fn alpha0_is_a_unit() {
        let b = r("(1+,5-,2+,4+,3-,6+)");
        assert_eq!(connected_sum(&Ribbon::alpha0(), &b).unwrap(), b);
        assert_eq!(connected_sum(&b, &Ribbon::alpha0()).unwrap(), b);
    }

    #[test]
    fn connected_sum_signature() {
        let a = r("(1+,3-,2+,4+)");
        let b = r("(1+,4+,2-,3+)");
        let s = connected_sum(&a, &b).unwrap();
        assert_eq!(s.n(), 6);
        assert_eq!(s.signature(), a.signature() + b.signature() - 2);
        assert!(connected_sum(&r("(1+,2-)"), &b).is_err());
    }

    #[test]
    fn compose_signature_and_index() {
        let a = MarkedRibbon::from_ribbon(&r("(1+,4+,2-,3+)")).unwrap();
        let b = MarkedRibbon::from_ribbon(&r("(1+,3+,2+,4+)")).unwrap();
        let ab = compose(&a, &b).unwrap();
        let ab = ab.to_ribbon().unwrap();
        let (ra, rb) = (a.to_ribbon().unwrap(), b.to_ribbon().unwrap());
        assert_eq!(ab.signature(), ra.signature() + rb.signature() - 2);
        assert_eq!(ab.index(), ra.index() + rb.index());
    }

    #[test]
    fn compose_reports_collisions() {
        // The end of `a` is the lower maximum (level 4); `b` lifted by 3 puts
        // one of its nodes on `a`'s level 5.
        let levels = [1, 5, 2, 4].map(Rational64::from_integer).to_vec();
        let a = MarkedRibbon::new(RigidRibbon::new(levels, vec![Sign::Plus; 4]).unwrap(), 0, 3).unwrap();
        let b = MarkedRibbon::from_ribbon(&r("(1+,3+,2+,4+)")).unwrap();
        assert_eq!(compose(&a, &b).unwrap_err(), Error::LevelCollision);
    }

    #[test]
    fn ternary_signature() {
        let a = MarkedRibbon::from_ribbon(&r("(1+,2+)")).unwrap();
        let b = MarkedRibbon::new(RigidRibbon::new(vec![q(1, 3), q(7, 3)], vec![Sign::Plus; 2]).unwrap(), 0, 1).unwrap();
        let c = MarkedRibbon::new(RigidRibbon::new(vec![q(1, 5), q(11, 5)], vec![Sign::Plus; 2]).unwrap(), 0, 1).unwrap();
        let abc = ternary_compose(&a, &b, &c).unwrap();
        let x = abc.to_ribbon().unwrap();
        assert_eq!(x.n(), 4);
        assert_eq!(x.signature(), 2 + 2 + 2 - 4);
    }

    #[test]
    fn marked_invert_is_involutive() {
        let a = MarkedRibbon::from_ribbon(&r("(1+,5-,2+,4+,3-,6+)")).unwrap();
        let inv = marked_invert(&a);
        assert_eq!(marked_invert(&inv), a);
        assert_eq!(inv.to_ribbon().unwrap(), a.to_ribbon().unwrap().invert());
    }
}
