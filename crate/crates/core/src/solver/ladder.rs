//! Closed forms on canonical one-sided ladders.

use super::InvariantKind;
use crate::error::{Error, Result};
use crate::ribbon::{Ribbon, Sign};

/// Brings a canonical ladder or its mirror image to the orientation
/// `(1,3,2,5,4,...,n)`, returning the marks in that orientation.
pub fn normalize_ladder(a: &Ribbon) -> Result<Vec<Sign>> {
    if a.is_canonical_ladder_shape() {
        return Ok(a.marks().to_vec());
    }
    let n = a.n();
    let values: Vec<u32> = (0..n).map(|i| a.value((n - i) % n)).collect();
    let marks: Vec<Sign> = (0..n).map(|i| a.mark((n - i) % n)).collect();
    let mirrored = Ribbon::from_signs(&values, &marks)?;
    if mirrored.is_canonical_ladder_shape() {
        Ok(marks)
    } else {
        Err(Error::NotCanonicalLadder)
    }
}

/// Counts the pairs `(p₂ₖ, p₂ₖ₊₁)`, `k = 1..n/2-1`, with equal marks, where
/// `p₁` is the global minimum and labels follow the ladder's orientation.
/// `Gamma` and `Gamma0` count all such pairs, `GammaExt` the negative ones,
/// `GammaSad` the positive ones.
pub fn ladder_closed_form(a: &Ribbon, kind: InvariantKind) -> Result<u32> {
    let marks = normalize_ladder(a)?;
    let n = marks.len();
    if !marks[0].is_plus() || !marks[n - 1].is_plus() {
        return Err(Error::PreconditionViolated("extreme nodes of the ladder must be positive".into()));
    }
    // p_j is index j-1, so (p_2k, p_2k+1) is (2k-1, 2k).
    let count = (1..n / 2)
        .map(|k| (marks[2 * k - 1], marks[2 * k]))
        .filter(|&(x, y)| x == y)
        .filter(|&(x, _)| match kind {
            InvariantKind::Gamma | InvariantKind::Gamma0 => true,
            InvariantKind::GammaExt => x == Sign::Minus,
            InvariantKind::GammaSad => x == Sign::Plus,
        })
        .count();
    Ok(count as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ribbon {
        s.parse().unwrap()
    }

    #[test]
    fn positive_ladder() {
        let a = r("(1+,3+,2+,5+,4+,7+,6+,8+)");
        assert_eq!(ladder_closed_form(&a, InvariantKind::Gamma).unwrap(), 3);
        assert_eq!(ladder_closed_form(&a, InvariantKind::GammaExt).unwrap(), 0);
    }

    #[test]
    fn ten_node_example() {
        let a = r("(1+,3+,2+,5+,4+,7+,6-,9+,8+,10+)");
        assert_eq!(ladder_closed_form(&a, InvariantKind::Gamma).unwrap(), 3);
    }

    #[test]
    fn interior_negative() {
        let a = r("(1+,3-,2-,5-,4-,7-,6-,8+)");
        assert_eq!(ladder_closed_form(&a, InvariantKind::GammaExt).unwrap(), 3);
        assert_eq!(ladder_closed_form(&a, InvariantKind::GammaSad).unwrap(), 0);
    }

    #[test]
    fn mirror_and_errors() {
        let m = r("(1+,8+,6+,7+,4+,5+,2+,3+)");
        assert_eq!(ladder_closed_form(&m, InvariantKind::Gamma).unwrap(), 3);
        assert_eq!(ladder_closed_form(&r("(1+,6+,2+,4+,3+,5+)"), InvariantKind::Gamma).unwrap_err(), Error::NotCanonicalLadder);
        assert!(matches!(
            ladder_closed_form(&r("(1-,3+,2+,4+)"), InvariantKind::Gamma),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
