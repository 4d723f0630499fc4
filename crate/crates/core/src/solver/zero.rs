//! Deciding `γ = 0` by chains of cancellations.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::Result;
use crate::ribbon::{cancel, cancellable_pairs, Ribbon, Sign};

/// One cancellation: nodes `p` (negative) and `q` (positive) of `ribbon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CancelStep {
    pub ribbon: String,
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroVerdict {
    pub zero: bool,
    /// Cancellation chain reaching `(1+,2+)` when `zero` holds.
    pub witness: Vec<CancelStep>,
    /// Why the answer is negative.
    pub refutation: Option<&'static str>,
}

fn extreme_negative(a: &Ribbon) -> bool {
    a.mark(0) == Sign::Minus || a.mark(a.position(a.n() as u32)) == Sign::Minus
}

pub fn is_gamma_zero(a: &Ribbon) -> ZeroVerdict {
    if a.signature() != 2 {
        return ZeroVerdict { zero: false, witness: Vec::new(), refutation: Some("signature is not 2") };
    }
    let mut dead = HashSet::new();
    let mut chain = Vec::new();
    if search(a, &mut dead, &mut chain) {
        chain.reverse();
        ZeroVerdict { zero: true, witness: chain, refutation: None }
    } else {
        ZeroVerdict { zero: false, witness: Vec::new(), refutation: Some("no cancellation chain reaches (1+,2+)") }
    }
}

fn search(a: &Ribbon, dead: &mut HashSet<Ribbon>, chain: &mut Vec<CancelStep>) -> bool {
    if a.is_alpha0() {
        return true;
    }
    if a.n() == 2 || extreme_negative(a) || dead.contains(a) {
        return false;
    }
    for (p, q) in cancellable_pairs(a) {
        let b = cancel(a, p, q).expect("listed pair is cancellable");
        if search(&b, dead, chain) {
            chain.push(CancelStep { ribbon: a.to_string(), p, q });
            return true;
        }
    }
    dead.insert(a.clone());
    false
}

/// Replays a witness from `a`, returning the final ribbon.
pub fn replay_witness(a: &Ribbon, witness: &[CancelStep]) -> Result<Ribbon> {
    let mut cur = a.clone();
    for s in witness {
        cur = cancel(&cur, s.p, s.q)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ribbon {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert!(!is_gamma_zero(&r("(1+,2-)")).zero);
        let v = is_gamma_zero(&r("(1+,6+,2-,4+,3-,5+)"));
        assert!(v.zero);
        assert_eq!(replay_witness(&r("(1+,6+,2-,4+,3-,5+)"), &v.witness).unwrap(), Ribbon::alpha0());
        assert!(!is_gamma_zero(&r("(1+,6+,2-,4+,3+,5-)")).zero);
        assert!(is_gamma_zero(&Ribbon::alpha0()).zero);
    }
}
