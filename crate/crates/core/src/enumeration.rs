//! Generating and counting zig-zag permutations and ribbons.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ribbon::{Ribbon, Sign};
use crate::solver::Solver;

/// Largest `n` accepted by the exhaustive generators.
pub const DEFAULT_MAX_N: usize = 10;
/// Largest `n` accepted by [`random_ribbon`].
pub const MAX_RANDOM_N: usize = 16;

/// Euler up/down numbers `A_0..=A_up_to` by the Seidel boustrophedon.
pub fn tangent_numbers(up_to: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::from(1u32)];
    let mut row = vec![BigUint::from(1u32)];
    for m in 1..=up_to {
        let mut next = vec![BigUint::from(0u32); m + 1];
        for k in 1..=m {
            next[k] = &next[k - 1] + &row[m - k];
        }
        out.push(next[m].clone());
        row = next;
    }
    out
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::OddLength(n));
    }
    if n < 2 {
        return Err(Error::TooFewNodes);
    }
    if n > max {
        return Err(Error::LimitExceeded { what: "nodes", max, n });
    }
    Ok(())
}

/// Canonical zig-zag permutations of `1..=n` (value 1 first), in lex order.
pub fn zigzag_perms(n: usize) -> Result<Vec<Vec<u32>>> {
    check_n(n, DEFAULT_MAX_N)?;
    let mut out = Vec::new();
    let mut cur = vec![1u32];
    let mut used = vec![false; n + 1];
    used[1] = true;
    extend(n, &mut cur, &mut used, &mut out);
    Ok(out)
}

fn extend(n: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let last = *cur.last().expect("starts with 1");
    let rising = cur.len() % 2 == 1;
    for v in 2..=n as u32 {
        if used[v as usize] || (v > last) != rising {
            continue;
        }
        used[v as usize] = true;
        cur.push(v);
        extend(n, cur, used, out);
        cur.pop();
        used[v as usize] = false;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    Positive,
    Negative,
    Sigma(i64),
}

impl Filter {
    fn markings(self, n: usize) -> Result<Vec<Vec<Sign>>> {
        let all = |mask: u32| (0..n).map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect();
        Ok(match self {
            Filter::All => (0..1u32 << n).map(all).collect(),
            Filter::Positive => vec![vec![Sign::Plus; n]],
            Filter::Negative => vec![vec![Sign::Minus; n]],
            Filter::Sigma(s) => {
                let minus = minus_count(n, s)?;
                (0..1u32 << n).filter(|m| m.count_ones() as usize == minus).map(all).collect()
            }
        })
    }
}

fn minus_count(n: usize, sigma: i64) -> Result<usize> {
    if sigma.abs() > n as i64 || (sigma + n as i64) % 2 != 0 {
        return Err(Error::InfeasibleSigma { n, sigma });
    }
    Ok(((n as i64 - sigma) / 2) as usize)
}

/// Every canonical ribbon with `n` nodes passing `filter`, permutation-major.
pub fn ribbons(n: usize, filter: Filter) -> Result<impl Iterator<Item = Ribbon>> {
    let perms = zigzag_perms(n)?;
    let markings = filter.markings(n)?;
    Ok(perms.into_iter().flat_map(move |p| {
        markings.clone().into_iter().map(move |m| Ribbon::from_signs(&p, &m).expect("generated ribbons are valid"))
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub n: usize,
    pub zigzag: BigUint,
    pub ribbons: BigUint,
    pub positive: BigUint,
    /// `(σ, count)` for `σ = -n, -n+2, ..., n`.
    pub per_sigma: Vec<(i64, BigUint)>,
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

pub fn count_ribbons(n: usize) -> Result<CountRow> {
    if n % 2 == 1 {
        return Err(Error::OddLength(n));
    }
    if n < 2 {
        return Err(Error::TooFewNodes);
    }
    let zigzag = tangent_numbers(n - 1).pop().expect("nonempty");
    let per_sigma = (0..=n).map(|plus| (2 * plus as i64 - n as i64, binomial(n, plus) * &zigzag)).collect();
    Ok(CountRow { n, ribbons: &zigzag << n, positive: zigzag.clone(), zigzag, per_sigma })
}

/// Positive alternations: `(n/2)! (n/2-1)!`.
pub fn alternation_count(n: usize) -> BigUint {
    let fact = |k: usize| (1..=k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i));
    fact(n / 2) * fact((n / 2).saturating_sub(1))
}

/// Zig-zag permutations of ladder shape: `2^(n/2-1)`. Times `2^n` markings
/// this gives the `2^(3n/2-1)` general ladders.
pub fn ladder_shape_count(n: usize) -> BigUint {
    BigUint::from(1u32) << (n / 2).saturating_sub(1)
}

/// Uniform canonical ribbon; with `sigma`, uniform among markings of that
/// signature.
pub fn random_ribbon(n: usize, sigma: Option<i64>, seed: u64) -> Result<Ribbon> {
    check_n(n, MAX_RANDOM_N)?;
    let minus = sigma.map(|s| minus_count(n, s)).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tail: Vec<u32> = (2..=n as u32).collect();
    let values = loop {
        tail.shuffle(&mut rng);
        let mut v = vec![1u32];
        v.extend_from_slice(&tail);
        if (1..n).all(|i| (v[i] > v[i - 1]) == (i % 2 == 1)) {
            break v;
        }
    };
    let marks = match minus {
        Some(k) => {
            let mut m = vec![Sign::Plus; n];
            for i in index::sample(&mut rng, n, k) {
                m[i] = Sign::Minus;
            }
            m
        }
        None => (0..n).map(|_| if rand::Rng::gen_bool(&mut rng, 0.5) { Sign::Plus } else { Sign::Minus }).collect(),
    };
    Ribbon::from_signs(&values, &marks)
}

/// Histogram of γ over all ribbons with `n` nodes.
pub fn gamma_distribution(solver: &Solver, n: usize) -> Result<BTreeMap<u32, u64>> {
    let all: Vec<Ribbon> = ribbons(n, Filter::All)?.collect();
    let gammas: Vec<u32> = all.par_iter().map(|a| solver.gamma(a)).collect::<Result<_>>()?;
    let mut h = BTreeMap::new();
    for g in gammas {
        *h.entry(g).or_default() += 1;
    }
    Ok(h)
}

/// Observed `(σ, γ)` pairs over all ribbons with `n` nodes.
pub fn realizable_pairs(solver: &Solver, n: usize) -> Result<BTreeSet<(i64, u32)>> {
    let all: Vec<Ribbon> = ribbons(n, Filter::All)?.collect();
    all.par_iter().map(|a| Ok((a.signature(), solver.gamma(a)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn tangent_values() {
        let t: Vec<u64> = tangent_numbers(9).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(t, vec![1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936]);
    }

    #[test]
    fn stream_matches_closed_forms() {
        for n in [2usize, 4, 6, 8] {
            let row = count_ribbons(n).unwrap();
            let all: HashSet<Ribbon> = ribbons(n, Filter::All).unwrap().collect();
            assert_eq!(BigUint::from(all.len()), row.ribbons);
            assert_eq!(BigUint::from(ribbons(n, Filter::Positive).unwrap().count()), row.positive);
            for (s, c) in &row.per_sigma {
                assert_eq!(BigUint::from(ribbons(n, Filter::Sigma(*s)).unwrap().count()), *c);
            }
            if n >= 4 {
                let alts = ribbons(n, Filter::Positive).unwrap().filter(Ribbon::is_alternation).count();
                assert_eq!(BigUint::from(alts), alternation_count(n));
                let ladders = ribbons(n, Filter::Positive).unwrap().filter(Ribbon::is_ladder).count();
                assert_eq!(BigUint::from(ladders), ladder_shape_count(n));
            }
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(ribbons(2, Filter::All).unwrap().count(), 4);
        assert_eq!(ribbons(4, Filter::All).unwrap().count(), 32);
        assert_eq!(ribbons(4, Filter::Positive).unwrap().count(), 2);
        assert_eq!(count_ribbons(10).unwrap().ribbons, BigUint::from(8_126_464u32));
        assert_eq!(ribbons(12, Filter::All).err(), Some(Error::LimitExceeded { what: "nodes", max: 10, n: 12 }));
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_ribbon(10, None, 7).unwrap(), random_ribbon(10, None, 7).unwrap());
        let a = random_ribbon(6, Some(2), 3).unwrap();
        assert_eq!(a.plus_count(), 4);
        assert_eq!(random_ribbon(6, Some(3), 3).unwrap_err(), Error::InfeasibleSigma { n: 6, sigma: 3 });
    }
}
