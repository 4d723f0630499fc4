//! The four ribbon invariants by recursive splitting.
//!
//! Every ribbon is first reduced by short cancellations. A ribbon with a
//! negative node is split through that node (or the node is made positive at
//! the price of one trapped extremum); an all-positive ribbon with several
//! clusters is split along a level between two clusters. Every recursive
//! argument is strictly smaller in the lexicographic order, so the recursion
//! terminates. Results are memoized per canonical ribbon and shared across
//! threads.

mod bounds;
mod clusters;
mod cl;
mod ladder;
mod split;
mod trace;
mod zero;

pub use bounds::{check_bounds, sphere_lower_bounds, Verdict};
pub use cl::{cl_plus_plus, primary_xi};
pub use clusters::{clusters, delta, delta0, stabbing_number};
pub use ladder::{ladder_closed_form, normalize_ladder};
pub use split::{binary_splits, ternary_first_direction, ternary_splits, BinarySplit, TernarySplit};
pub use trace::SplitTrace;
pub use zero::{is_gamma_zero, replay_witness, CancelStep, ZeroVerdict};

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::OnceLock;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ribbon::{short_cancel_all, Ribbon, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantKind {
    Gamma,
    Gamma0,
    GammaExt,
    GammaSad,
}

impl InvariantKind {
    pub const ALL: [InvariantKind; 4] =
        [InvariantKind::Gamma, InvariantKind::Gamma0, InvariantKind::GammaExt, InvariantKind::GammaSad];

    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Gamma => "gamma",
            InvariantKind::Gamma0 => "gamma0",
            InvariantKind::GammaExt => "ext",
            InvariantKind::GammaSad => "sad",
        }
    }
}

impl FromStr for InvariantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" | "g" => Ok(InvariantKind::Gamma),
            "gamma0" | "g0" => Ok(InvariantKind::Gamma0),
            "ext" | "gamma_ext" | "ge" => Ok(InvariantKind::GammaExt),
            "sad" | "gamma_sad" | "gs" => Ok(InvariantKind::GammaSad),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown invariant kind `{other}`") }),
        }
    }
}

/// The values `γ, γ₀, γ_ext, γ_sad` of one ribbon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Invariants {
    pub gamma: u32,
    pub gamma0: u32,
    pub gamma_ext: u32,
    pub gamma_sad: u32,
}

impl Invariants {
    pub const ZERO: Invariants = Invariants { gamma: 0, gamma0: 0, gamma_ext: 0, gamma_sad: 0 };
    /// Weights of a circle touching the boundary at a negative node.
    pub const TOUCHING: Invariants = Invariants { gamma: 1, gamma0: 1, gamma_ext: 1, gamma_sad: 0 };
    /// Identity of [`Invariants::min`].
    pub const UNSET: Invariants = Invariants { gamma: u32::MAX, gamma0: u32::MAX, gamma_ext: u32::MAX, gamma_sad: u32::MAX };

    /// Weights of a positive alternation with `n` nodes.
    pub fn alternation(n: usize) -> Invariants {
        Invariants { gamma: 1, gamma0: (n / 2 - 1) as u32, gamma_ext: 0, gamma_sad: 1 }
    }

    pub fn get(&self, kind: InvariantKind) -> u32 {
        match kind {
            InvariantKind::Gamma => self.gamma,
            InvariantKind::Gamma0 => self.gamma0,
            InvariantKind::GammaExt => self.gamma_ext,
            InvariantKind::GammaSad => self.gamma_sad,
        }
    }

    pub fn add(self, o: Invariants) -> Invariants {
        Invariants {
            gamma: self.gamma + o.gamma,
            gamma0: self.gamma0 + o.gamma0,
            gamma_ext: self.gamma_ext + o.gamma_ext,
            gamma_sad: self.gamma_sad + o.gamma_sad,
        }
    }

    pub fn min(self, o: Invariants) -> Invariants {
        Invariants {
            gamma: self.gamma.min(o.gamma),
            gamma0: self.gamma0.min(o.gamma0),
            gamma_ext: self.gamma_ext.min(o.gamma_ext),
            gamma_sad: self.gamma_sad.min(o.gamma_sad),
        }
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma={} gamma0={} ext={} sad={}", self.gamma, self.gamma0, self.gamma_ext, self.gamma_sad)
    }
}

/// Invariants together with the derived quantities of one ribbon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBundle {
    pub gamma: u32,
    pub gamma0: u32,
    pub gamma_ext: u32,
    pub gamma_sad: u32,
    pub sigma: i64,
    pub index: i64,
    pub delta: u32,
    pub delta0: u32,
    pub touching: i64,
    pub beta_lower: u32,
    pub beta_upper: u32,
    pub beta_exact: bool,
}

impl InvariantBundle {
    pub fn invariants(&self) -> Invariants {
        Invariants { gamma: self.gamma, gamma0: self.gamma0, gamma_ext: self.gamma_ext, gamma_sad: self.gamma_sad }
    }
}

/// One way of reducing a ribbon to smaller ones.
#[derive(Debug, Clone)]
pub(crate) enum Candidate {
    /// Node made positive; one trapped extremum is paid for.
    Touching { node: usize, rest: Ribbon },
    Binary(BinarySplit),
    Ternary(TernarySplit),
}

impl Candidate {
    fn parts(&self) -> Vec<&Ribbon> {
        match self {
            Candidate::Touching { rest, .. } => vec![rest],
            Candidate::Binary(s) => s.parts.iter().collect(),
            Candidate::Ternary(s) => s.parts.iter().collect(),
        }
    }

    fn extra(&self) -> Invariants {
        match self {
            Candidate::Touching { .. } => Invariants::TOUCHING,
            _ => Invariants::ZERO,
        }
    }
}

/// What the recursion does with a short-cancelled ribbon.
#[derive(Debug, Clone)]
pub(crate) enum Step {
    Alpha0,
    Alternation,
    Split(Vec<Candidate>),
}

/// The negative node whose level is crossed least, lowest index on ties.
fn thinnest_negative(a: &Ribbon) -> Option<usize> {
    (0..a.n())
        .filter(|&i| a.mark(i) == Sign::Minus)
        .min_by_key(|&i| (a.node_level_crossings(i).len(), i))
}

/// Doubled half-integer levels strictly between adjacent clusters, one per gap
/// (the one nearest the middle of the gap).
pub fn cluster_gap_levels(a: &Ribbon) -> Vec<u32> {
    let cs = clusters(a);
    cs.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0].1, w[1].0);
            let mid2 = lo + hi;
            if mid2 % 2 == 1 {
                mid2
            } else {
                mid2 - 1
            }
        })
        .collect()
}

/// Binary splits at `level2` whose parts are both lex-smaller than `a`.
pub(crate) fn shrinking_binary_splits(a: &Ribbon, level2: u32) -> Vec<BinarySplit> {
    binary_splits(a, level2)
        .into_iter()
        .filter(|s| s.parts.iter().all(|p| p.lex_cmp(a) == Ordering::Less))
        .collect()
}

/// Decides the recursion step for a ribbon without short-cancellable pairs.
pub(crate) fn step(a: &Ribbon) -> Step {
    if let Some(p) = thinnest_negative(a) {
        let rest = a.with_mark(p, Sign::Plus);
        let mut cands = Vec::new();
        let v = a.value(p);
        if v != 1 && v != a.n() as u32 {
            cands.extend(ternary_splits(a, p).into_iter().map(Candidate::Ternary));
        }
        cands.push(Candidate::Touching { node: p, rest });
        return Step::Split(cands);
    }
    let gaps = cluster_gap_levels(a);
    if gaps.is_empty() {
        return if a.n() == 2 { Step::Alpha0 } else { Step::Alternation };
    }
    let level2 = *gaps
        .iter()
        .min_by_key(|&&l| (a.crossings(l).len(), l))
        .expect("nonempty");
    Step::Split(shrinking_binary_splits(a, level2).into_iter().map(Candidate::Binary).collect())
}

/// Memoizing solver, safe to share between threads.
#[derive(Debug, Default)]
pub struct Solver {
    memo: DashMap<Ribbon, Invariants>,
}

impl Solver {
    pub fn new() -> Solver {
        Solver::default()
    }

    /// A process-wide instance.
    pub fn global() -> &'static Solver {
        static GLOBAL: OnceLock<Solver> = OnceLock::new();
        GLOBAL.get_or_init(Solver::new)
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    pub fn invariants(&self, a: &Ribbon) -> Result<Invariants> {
        if let Some(v) = self.memo.get(a) {
            return Ok(*v);
        }
        let reduced = short_cancel_all(a);
        let value = match self.memo.get(&reduced) {
            Some(v) => *v,
            None => {
                let v = self.solve_reduced(&reduced)?;
                self.memo.insert(reduced.clone(), v);
                v
            }
        };
        if reduced != *a {
            self.memo.insert(a.clone(), value);
        }
        Ok(value)
    }

    fn solve_reduced(&self, a: &Ribbon) -> Result<Invariants> {
        match step(a) {
            Step::Alpha0 => Ok(Invariants::ZERO),
            Step::Alternation => Ok(Invariants::alternation(a.n())),
            Step::Split(cands) => {
                let mut best = Invariants::UNSET;
                for c in &cands {
                    let mut total = c.extra();
                    for p in c.parts() {
                        total = total.add(self.invariants(p)?);
                    }
                    best = best.min(total);
                }
                if cands.is_empty() {
                    return Err(Error::InternalNoCandidate(a.to_string()));
                }
                Ok(best)
            }
        }
    }

    pub fn invariant(&self, a: &Ribbon, kind: InvariantKind) -> Result<u32> {
        Ok(self.invariants(a)?.get(kind))
    }

    pub fn gamma(&self, a: &Ribbon) -> Result<u32> {
        self.invariant(a, InvariantKind::Gamma)
    }

    pub fn bundle(&self, a: &Ribbon) -> Result<InvariantBundle> {
        let inv = self.invariants(a)?;
        let sigma = a.signature();
        let (d, d0) = (delta(a), delta0(a));
        let touching = (a.n() as i64 - sigma) / 2 - inv.gamma_ext as i64;
        let beta_exact = a.is_positive();
        let (beta_lower, beta_upper) = if beta_exact { (d, d) } else { (d0, inv.gamma) };
        Ok(InvariantBundle {
            gamma: inv.gamma,
            gamma0: inv.gamma0,
            gamma_ext: inv.gamma_ext,
            gamma_sad: inv.gamma_sad,
            sigma,
            index: a.index(),
            delta: d,
            delta0: d0,
            touching,
            beta_lower,
            beta_upper,
            beta_exact,
        })
    }

    /// The decomposition realizing the minimum for `kind`.
    pub fn trace(&self, a: &Ribbon, kind: InvariantKind) -> Result<SplitTrace> {
        trace::build(self, a, kind)
    }

    /// Minimum over the binary splits at one specific level, used to check
    /// that the choice of cluster gap does not matter.
    pub fn invariants_at_level(&self, a: &Ribbon, level2: u32) -> Result<Option<Invariants>> {
        let mut best: Option<Invariants> = None;
        for s in shrinking_binary_splits(a, level2) {
            let total = self.invariants(&s.parts[0])?.add(self.invariants(&s.parts[1])?);
            best = Some(best.map_or(total, |b| b.min(total)));
        }
        Ok(best)
    }

    /// Inserts trusted entries.
    pub fn insert(&self, a: Ribbon, v: Invariants) {
        self.memo.insert(a, v);
    }

    /// Writes one `<notation> g=.. g0=.. ge=.. gs=..` line per entry, sorted.
    pub fn save<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut entries: Vec<(Ribbon, Invariants)> = self.memo.iter().map(|e| (e.key().clone(), *e.value())).collect();
        entries.sort_by(|x, y| x.0.lex_cmp(&y.0));
        for (r, v) in entries {
            writeln!(w, "{} g={} g0={} ge={} gs={}", r, v.gamma, v.gamma0, v.gamma_ext, v.gamma_sad)?;
        }
        Ok(())
    }

    /// Reads cache lines. With `recheck`, every entry is recomputed and a
    /// mismatch is reported as an error naming the offending line.
    pub fn load<R: BufRead>(&self, r: R, recheck: bool) -> std::result::Result<usize, String> {
        let mut parsed = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry = parse_cache_line(line).map_err(|e| format!("line {}: {e}", lineno + 1))?;
            parsed.push((lineno + 1, entry));
        }
        let count = parsed.len();
        if recheck {
            let fresh = Solver::new();
            for (lineno, (r, v)) in &parsed {
                let got = fresh.invariants(r).map_err(|e| e.to_string())?;
                if got != *v {
                    return Err(format!("line {lineno}: cached {v} but computed {got} for {r}"));
                }
            }
        }
        for (_, (r, v)) in parsed {
            self.insert(r, v);
        }
        Ok(count)
    }
}

fn parse_cache_line(line: &str) -> std::result::Result<(Ribbon, Invariants), String> {
    let mut fields = line.split_whitespace();
    let ribbon: Ribbon = fields.next().ok_or("missing ribbon")?.parse().map_err(|e: Error| e.to_string())?;
    let mut v = Invariants::UNSET;
    for f in fields {
        let (k, val) = f.split_once('=').ok_or_else(|| format!("bad field `{f}`"))?;
        let val: u32 = val.parse().map_err(|_| format!("bad number in `{f}`"))?;
        match k {
            "g" => v.gamma = val,
            "g0" => v.gamma0 = val,
            "ge" => v.gamma_ext = val,
            "gs" => v.gamma_sad = val,
            _ => return Err(format!("unknown field `{k}`")),
        }
    }
    if [v.gamma, v.gamma0, v.gamma_ext, v.gamma_sad].contains(&u32::MAX) {
        return Err("missing invariant field".into());
    }
    Ok((ribbon, v))
}
