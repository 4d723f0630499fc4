//! Weak extremum profiles and the absolute-extremum count predicate.

use num_rational::Rational64;

use crate::error::{Error, Result};

/// Cyclic sequence of extremum levels where non-adjacent ties are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakProfile {
    levels: Vec<Rational64>,
}

impl WeakProfile {
    pub fn new(levels: Vec<Rational64>) -> Result<WeakProfile> {
        let n = levels.len();
        if n < 2 {
            return Err(Error::TooFewNodes);
        }
        if n % 2 == 1 {
            return Err(Error::OddLength(n));
        }
        for i in 0..n {
            let (prev, cur, next) = (levels[(i + n - 1) % n], levels[i], levels[(i + 1) % n]);
            if cur == next {
                return Err(Error::DuplicateLevel);
            }
            if !((cur > prev && cur > next) || (cur < prev && cur < next)) {
                return Err(Error::NotZigZag(i));
            }
        }
        Ok(WeakProfile { levels })
    }

    pub fn from_integers(levels: &[i64]) -> Result<WeakProfile> {
        WeakProfile::new(levels.iter().map(|&l| Rational64::from_integer(l)).collect())
    }

    /// `(n, s)`: node count and number of entries at the global min or max.
    pub fn counts(&self) -> (usize, usize) {
        let lo = *self.levels.iter().min().expect("nonempty");
        let hi = *self.levels.iter().max().expect("nonempty");
        let s = self.levels.iter().filter(|&&l| l == lo || l == hi).count();
        (self.levels.len(), s)
    }

    /// `s > n/2 + 1`.
    pub fn is_rolle(&self) -> bool {
        let (n, s) = self.counts();
        2 * s > n + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let w = WeakProfile::from_integers(&[0, 1, 0, 1]).unwrap();
        assert_eq!(w.counts(), (4, 4));
        assert!(w.is_rolle());
        let w = WeakProfile::from_integers(&[0, 5, 0, 5, 1, 5]).unwrap();
        assert_eq!(w.counts(), (6, 5));
        assert!(w.is_rolle());
        let w = WeakProfile::from_integers(&[1, 6, 2, 4, 3, 5]).unwrap();
        assert_eq!(w.counts().1, 2);
        assert!(!w.is_rolle());
    }

    #[test]
    fn rejects_adjacent_ties() {
        assert!(WeakProfile::from_integers(&[0, 0, 1, 2]).is_err());
    }
}
