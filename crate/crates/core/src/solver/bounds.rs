//! Named inequalities between the invariants of one ribbon.

use serde::Serialize;

use super::{InvariantBundle, Solver};
use crate::error::Result;
use crate::ribbon::Ribbon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: &'static str,
    pub pass: bool,
}

/// Evaluates every inequality that depends only on the bundle and `n`.
pub fn check_bounds(b: &InvariantBundle, n: usize) -> Vec<Verdict> {
    let n = n as i64;
    let s = b.sigma;
    let g = b.gamma as i64;
    let g0 = b.gamma0 as i64;
    let ext = b.gamma_ext as i64;
    let sad = b.gamma_sad as i64;
    let d = b.delta as i64;
    let d0 = b.delta0 as i64;
    let t = b.touching;
    let half = s / 2;
    let v = |name, pass| Verdict { name, pass };
    vec![
        v("gamma in [0, n/2+1]", (0..=n / 2 + 1).contains(&g)),
        v("gamma in [1-s/2, n-1-s/2]", 1 - half <= g && g <= n - 1 - half),
        v("touching number nonnegative", t >= 0),
        v("gamma <= n-1-s/2-2t", g <= n - 1 - half - 2 * t),
        v("gamma >= delta0", g >= d0),
        v("positive: gamma >= delta", s != n || g >= d),
        v("gamma0 >= |1-s/2|", g0 >= (1 - half).abs()),
        v("gamma0 = 1-s/2 mod 2", (g0 - (1 - half)).rem_euclid(2) == 0),
        v("gamma0 >= gamma", g0 >= g),
        v("gamma >= ext+sad", g >= ext + sad),
        v("ext >= 1-s/2", ext >= 1 - half),
        v("sad >= delta0+(s-n)/2", sad >= d0 + (s - n) / 2),
        v("gamma >= 1-s/2+sad", g >= 1 - half + sad),
        v("gamma <= -1+s/2+2ext", g <= -1 + half + 2 * ext),
        v("gamma = 0 implies s = 2", g != 0 || s == 2),
        v("not (s = 2 and gamma = 1)", !(s == 2 && g == 1)),
        v("not (s < 0 and gamma = 2-s/2)", !(s < 0 && g == 2 - half)),
        v("negative: gamma = gamma0 = ext = n/2+1", s != -n || (g == n / 2 + 1 && g0 == g && ext == g)),
        v("positive: gamma <= n/2-1 and gamma0 = n/2-1", s != n || (g <= n / 2 - 1 && g0 == n / 2 - 1)),
        v("beta bounds ordered", b.beta_lower <= b.beta_upper),
    ]
}

/// `(γ(a)+γ(ā), γ₀(a)+γ₀(ā))`.
pub fn sphere_lower_bounds(solver: &Solver, a: &Ribbon) -> Result<(u32, u32)> {
    let x = solver.invariants(a)?;
    let y = solver.invariants(&a.flip_all())?;
    Ok((x.gamma + y.gamma, x.gamma0 + y.gamma0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_and_alpha0_pass() {
        let s = Solver::new();
        for text in ["(1+,3+,2+,5+,4+,7+,6+,8+)", "(1+,2+)", "(1-,3-,2-,4-)"] {
            let a: Ribbon = text.parse().unwrap();
            let b = s.bundle(&a).unwrap();
            for v in check_bounds(&b, a.n()) {
                assert!(v.pass, "{text}: {}", v.name);
            }
        }
    }

    #[test]
    fn sphere_bounds() {
        let s = Solver::new();
        let a: Ribbon = "(1-,3-,2-,4-)".parse().unwrap();
        let (general, morse) = sphere_lower_bounds(&s, &a).unwrap();
        assert!(general >= 2 + 4 / 2);
        assert!(morse >= 4);
    }
}
