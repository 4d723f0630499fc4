//! Named, reproducible verification suites over exhaustive small-`n` corpora.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::{
    alternation_count, count_ribbons, random_ribbon, ribbons, zigzag_perms, Filter, ladder_shape_count,
};
use crate::error::{Error, Result};
use crate::game::{b_mirror_reply, solve_game, GameState, GameStatus, Player};
use crate::oracle::{self, validate_packing, PackingSearch};
use crate::ribbon::{
    apply_move, applicable_moves, cancel, cancellable_pairs, compose, connected_sum, has_positive_extremes,
    ladder_values, marked_invert, short_cancel_all, ternary_compose, MarkedRibbon, Move, Ribbon, RigidRibbon,
    Sign,
};
use crate::solver::{
    binary_splits, check_bounds, cl_plus_plus, cluster_gap_levels, is_gamma_zero, ladder_closed_form,
    replay_witness, InvariantKind, Invariants, Solver,
};

pub const SUITES: [&str; 11] = [
    "base-values",
    "bounds",
    "oracle-equivalence",
    "zero-detection",
    "jump-table",
    "closed-forms",
    "counting",
    "involutions",
    "semigroup",
    "realizability",
    "game-ladder",
];

/// Default exhaustive bound for a suite.
pub fn default_n_max(name: &str) -> usize {
    match name {
        "jump-table" => 6,
        _ => 8,
    }
}

/// Most failures kept in a report; `failure_count` has the full number.
const KEPT_FAILURES: usize = 200;
/// Seeded samples drawn at `n_max + 2`.
const SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Offending ribbon, absent for corpus-wide clauses.
    pub ribbon: Option<String>,
    pub clause: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n_max: usize,
    pub seed: u64,
    pub cases: u64,
    pub failure_count: usize,
    /// Sorted by the ribbon's lex order, so the first entry is a minimal
    /// counterexample.
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: n<={} seed={} cases={} failures={} time={}ms {}",
            self.suite,
            self.n_max,
            self.seed,
            self.cases,
            self.failure_count,
            self.wall_ms,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Default)]
struct Outcome {
    cases: u64,
    failures: Vec<(Option<Ribbon>, String)>,
    notes: Vec<String>,
}

impl Outcome {
    fn fail(&mut self, a: Option<&Ribbon>, clause: impl Into<String>) {
        self.failures.push((a.cloned(), clause.into()));
    }

    fn check(&mut self, ok: bool, a: Option<&Ribbon>, clause: impl Into<String>) {
        self.cases += 1;
        if !ok {
            self.fail(a, clause);
        }
    }

    /// Runs `f` on every ribbon in parallel and folds in its clauses.
    fn per_ribbon<F>(&mut self, corpus: &[Ribbon], f: F) -> Result<()>
    where
        F: Fn(&Ribbon) -> Result<Vec<String>> + Sync,
    {
        let found: Vec<(Ribbon, Vec<String>)> =
            corpus.par_iter().map(|a| Ok((a.clone(), f(a)?))).collect::<Result<_>>()?;
        self.cases += corpus.len() as u64;
        for (a, clauses) in found {
            for c in clauses {
                self.failures.push((Some(a.clone()), c));
            }
        }
        Ok(())
    }
}

/// Every ribbon with `2 <= n <= n_max` nodes.
pub fn corpus(n_max: usize) -> Result<Vec<Ribbon>> {
    let mut out = Vec::new();
    for n in (2..=n_max).step_by(2) {
        out.extend(ribbons(n, Filter::All)?);
    }
    Ok(out)
}

/// `count` seeded uniform ribbons with `n` nodes.
pub fn samples(n: usize, count: usize, seed: u64) -> Result<Vec<Ribbon>> {
    (0..count as u64).map(|i| random_ribbon(n, None, seed.wrapping_mul(1_000_003).wrapping_add(i))).collect()
}

pub fn run_suite(solver: &Solver, name: &str, n_max: usize, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let out = match name {
        "base-values" => base_values(solver, n_max)?,
        "bounds" => bounds(solver, n_max, seed)?,
        "oracle-equivalence" => oracle_equivalence(solver, n_max, seed)?,
        "zero-detection" => zero_detection(solver, n_max, seed)?,
        "jump-table" => jump_table(solver, n_max, seed)?,
        "closed-forms" => closed_forms(solver, n_max)?,
        "counting" => counting(n_max)?,
        "involutions" => involutions(solver, n_max, seed)?,
        "semigroup" => semigroup(solver, n_max, seed)?,
        "realizability" => realizability(solver, n_max)?,
        "game-ladder" => game_ladder(n_max)?,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    let mut failures = out.failures;
    failures.sort_by(|x, y| match (&x.0, &y.0) {
        (Some(a), Some(b)) => a.lex_cmp(b).then_with(|| x.1.cmp(&y.1)),
        (None, Some(_)) => std::cmp::Ordering::Less,
        (Some(_), None) => std::cmp::Ordering::Greater,
        (None, None) => x.1.cmp(&y.1),
    });
    let failure_count = failures.len();
    failures.truncate(KEPT_FAILURES);
    Ok(SuiteReport {
        suite: name.to_string(),
        n_max,
        seed,
        cases: out.cases,
        failure_count,
        failures: failures.into_iter().map(|(a, clause)| Failure { ribbon: a.map(|r| r.to_string()), clause }).collect(),
        notes: out.notes,
        wall_ms: start.elapsed().as_millis(),
    })
}

fn r(text: &str) -> Ribbon {
    text.parse().expect("literal ribbon")
}

fn inv(g: u32, g0: u32, ext: u32, sad: u32) -> Invariants {
    Invariants { gamma: g, gamma0: g0, gamma_ext: ext, gamma_sad: sad }
}

fn base_values(solver: &Solver, n_max: usize) -> Result<Outcome> {
    let mut o = Outcome::default();
    for (text, g) in [("(1+,2+)", 0), ("(1+,2-)", 1), ("(1-,2+)", 1), ("(1-,2-)", 2)] {
        let a = r(text);
        o.check(solver.gamma(&a)? == g, Some(&a), format!("gamma = {g}"));
    }
    let ex = r("(1+,6+,2-,4+,3+,5-)");
    o.check(solver.invariants(&ex)? == inv(2, 2, 1, 1), Some(&ex), "example: gamma=gamma0=2, ext=sad=1");
    for a in ribbons(4, Filter::Negative)? {
        o.check(solver.gamma(&a)? == 3, Some(&a), "all-negative n=4: gamma = 3");
    }
    let ten = r("(1+,3+,2+,5+,4+,7+,6-,9+,8+,10+)");
    o.check(solver.gamma(&ten)? == 3, Some(&ten), "10-node ladder: gamma = 3");
    for n in (4..=n_max).step_by(2) {
        let half = n as u32 / 2;
        for a in ribbons(n, Filter::Positive)? {
            if a.is_alternation() {
                o.check(solver.invariants(&a)? == Invariants::alternation(n), Some(&a), "alternation base values");
                o.check(solver.gamma(&a)? == 1, Some(&a), "alternation: gamma = 1");
            }
            if a.is_ladder() {
                let v = solver.invariants(&a)?;
                o.check(v.gamma == half - 1 && v.gamma0 == half - 1, Some(&a), "positive ladder: gamma = gamma0 = n/2-1");
            }
        }
    }
    Ok(o)
}

fn bounds(solver: &Solver, n_max: usize, seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut all = corpus(n_max)?;
    all.extend(samples(n_max + 2, SAMPLES, seed)?);
    o.per_ribbon(&all, |a| {
        let mut bad = Vec::new();
        let b = solver.bundle(a)?;
        bad.extend(check_bounds(&b, a.n()).into_iter().filter(|v| !v.pass).map(|v| v.name.to_string()));
        let s = a.signature();
        let y = solver.invariants(&a.flip_all())?;
        if s.abs() != 2 && ((b.gamma + y.gamma) as i64) < 2 + s.abs() / 2 {
            bad.push("gamma(a)+gamma(flip a) >= 2+|s|/2".into());
        }
        if ((b.gamma0 + y.gamma0) as i64) < s.abs() {
            bad.push("gamma0(a)+gamma0(flip a) >= |s|".into());
        }
        if solver.invariants(&short_cancel_all(a))? != b.invariants() {
            bad.push("short cancellation preserves the invariants".into());
        }
        Ok(bad)
    })?;
    // Split-level checks are quadratic in crossing pairs: exhaustive up to 6.
    let small = corpus(n_max.min(6))?;
    o.per_ribbon(&small, |a| {
        let mut bad = Vec::new();
        let v = solver.invariants(a)?;
        for k in 1..a.n() as u32 {
            for s in binary_splits(a, 2 * k + 1) {
                let sum = solver.invariants(&s.parts[0])?.add(solver.invariants(&s.parts[1])?);
                if InvariantKind::ALL.iter().any(|&kind| sum.get(kind) < v.get(kind)) {
                    bad.push(format!("subadditivity at level {}.5", k));
                }
            }
        }
        if a.is_positive() {
            for level2 in cluster_gap_levels(a) {
                let best = binary_splits(a, level2)
                    .iter()
                    .map(|s| Ok(solver.invariants(&s.parts[0])?.add(solver.invariants(&s.parts[1])?)))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold(Invariants::UNSET, Invariants::min);
                if best != v {
                    bad.push(format!("gap level {} gives {best}, expected {v}", level2 as f64 / 2.0));
                }
            }
        }
        Ok(bad)
    })?;
    Ok(o)
}

fn oracle_equivalence(solver: &Solver, n_max: usize, seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut all = corpus(n_max.min(oracle::MAX_ORACLE_NODES))?;
    if n_max + 2 <= oracle::MAX_ORACLE_NODES {
        all.extend(samples(n_max + 2, SAMPLES / 5, seed)?);
    }
    let revalidate_up_to = 6;
    let max_saddle_excess = AtomicU64::new(0);
    o.per_ribbon(&all, |a| {
        let mut bad = Vec::new();
        let s = oracle::summarize(a)?;
        let v = solver.invariants(a)?;
        for kind in InvariantKind::ALL {
            if s.minimum.get(kind) != v.get(kind) {
                bad.push(format!("{}: oracle {} solver {}", kind.name(), s.minimum.get(kind), v.get(kind)));
            }
        }
        if s.by_size.keys().next() != Some(&v.gamma) {
            bad.push("smallest packing size equals gamma".into());
        }
        if v.gamma0 - v.gamma > s.compression {
            bad.push("gamma0 - gamma <= compression".into());
        }
        let saddles_at_ext = v.gamma_ext as i64 + a.signature() / 2 - 1;
        if s.index_defects > 0 {
            bad.push(format!("{} packings violate extrema - saddles = 1 - s/2", s.index_defects));
        }
        if s.min_nondeg_saddles as i64 != saddles_at_ext {
            bad.push(format!("min nondegenerate saddles {} != ext + s/2 - 1", s.min_nondeg_saddles));
        }
        if s.max_nondeg_saddles as i64 != saddles_at_ext {
            max_saddle_excess.fetch_add(1, Ordering::Relaxed);
        }
        if s.max_critical_points as usize > 3 * a.n() / 2 - 1 {
            bad.push("packing with more than 3n/2-1 critical points".into());
        }
        if s.min_levels > v.gamma {
            bad.push("oracle beta <= gamma".into());
        }
        if a.is_positive() && s.min_levels != crate::solver::delta(a) {
            bad.push(format!("positive: beta {} != delta", s.min_levels));
        }
        if a.n() <= revalidate_up_to {
            for q in PackingSearch::new(a)?.collect() {
                if let Err(e) = validate_packing(a, &q) {
                    bad.push(format!("emitted packing fails the checker: {e}"));
                }
            }
        }
        Ok(bad)
    })?;
    o.notes.push(format!("packings re-validated by the independent checker for n <= {revalidate_up_to}"));
    o.notes.push(format!(
        "{} of {} ribbons have max nondegenerate saddles above ext + s/2 - 1 (the minimum attains it)",
        max_saddle_excess.into_inner(),
        all.len()
    ));
    Ok(o)
}

fn zero_detection(solver: &Solver, n_max: usize, seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut all = corpus(n_max)?;
    all.extend(samples(n_max + 2, SAMPLES, seed)?);
    o.per_ribbon(&all, |a| {
        let mut bad = Vec::new();
        let g = solver.gamma(a)?;
        let v = is_gamma_zero(a);
        if v.zero != (g == 0) {
            bad.push(format!("is_gamma_zero = {} but gamma = {g}", v.zero));
        }
        if v.zero && replay_witness(a, &v.witness)? != Ribbon::alpha0() {
            bad.push("witness does not replay to (1+,2+)".into());
        }
        if a.n() <= 6 {
            for (p, q) in cancellable_pairs(a) {
                let b = cancel(a, p, q)?;
                if b.signature() != a.signature() || solver.gamma(&b)? < g {
                    bad.push(format!("cancellation ({p},{q}) lowers gamma or changes sigma"));
                }
            }
        }
        Ok(bad)
    })?;
    Ok(o)
}

/// Move classes of the jump table, lettered as in the theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum JumpClass {
    MeetPositive,
    SeparatePositive,
    MeetOrSeparateNegative,
    MeetMixed,
    SeparateMixed,
    BypassSame,
    PositiveBypassesNegative,
    NegativeBypassesPositive,
    BirthDeath,
    Flip,
}

impl JumpClass {
    pub const ALL: [JumpClass; 10] = [
        JumpClass::MeetPositive,
        JumpClass::SeparatePositive,
        JumpClass::MeetOrSeparateNegative,
        JumpClass::MeetMixed,
        JumpClass::SeparateMixed,
        JumpClass::BypassSame,
        JumpClass::PositiveBypassesNegative,
        JumpClass::NegativeBypassesPositive,
        JumpClass::BirthDeath,
        JumpClass::Flip,
    ];

    pub fn letter(self) -> char {
        (b'a' + JumpClass::ALL.iter().position(|&c| c == self).expect("listed") as u8) as char
    }

    pub fn allowed(self) -> &'static [i64] {
        match self {
            JumpClass::MeetPositive => &[0, -1],
            JumpClass::SeparatePositive => &[0, 1],
            JumpClass::MeetOrSeparateNegative | JumpClass::BypassSame | JumpClass::BirthDeath => &[0],
            JumpClass::MeetMixed | JumpClass::PositiveBypassesNegative => &[0, -1, -2],
            JumpClass::SeparateMixed | JumpClass::NegativeBypassesPositive => &[0, 1, 2],
            JumpClass::Flip => &[-1, 0, 1],
        }
    }
}

/// Class of a move applied to `a`. In a mixed bypass the positive node is
/// said to bypass the negative one when it moves away from the ribbon's
/// interior: upward past another maximum, downward past another minimum.
pub fn jump_class(a: &Ribbon, m: Move) -> JumpClass {
    let both = |p: usize, q: usize| match (a.mark(p), a.mark(q)) {
        (Sign::Plus, Sign::Plus) => Some(true),
        (Sign::Minus, Sign::Minus) => Some(false),
        _ => None,
    };
    match m {
        Move::Meeting { p, q } => match both(p, q) {
            Some(true) => JumpClass::MeetPositive,
            Some(false) => JumpClass::MeetOrSeparateNegative,
            None => JumpClass::MeetMixed,
        },
        Move::Separation { p, q } => match both(p, q) {
            Some(true) => JumpClass::SeparatePositive,
            Some(false) => JumpClass::MeetOrSeparateNegative,
            None => JumpClass::SeparateMixed,
        },
        Move::Bypass { p, q } => match both(p, q) {
            Some(_) => JumpClass::BypassSame,
            None => {
                // p holds k and moves up to k+1.
                let positive_rises = a.mark(p).is_plus();
                if positive_rises == a.is_max(p) {
                    JumpClass::PositiveBypassesNegative
                } else {
                    JumpClass::NegativeBypassesPositive
                }
            }
        },
        Move::Birth { .. } | Move::Death { .. } => JumpClass::BirthDeath,
        Move::Flip { .. } => JumpClass::Flip,
    }
}

fn jump_table(solver: &Solver, n_max: usize, seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut all = corpus(n_max)?;
    all.extend(samples(n_max + 2, SAMPLES, seed)?);
    let seen: Vec<(Ribbon, Vec<(JumpClass, i64, Move)>)> = all
        .par_iter()
        .map(|a| {
            let g = solver.gamma(a)? as i64;
            let jumps = applicable_moves(a)
                .into_iter()
                .map(|m| Ok((jump_class(a, m), solver.gamma(&apply_move(a, m)?)? as i64 - g, m)))
                .collect::<Result<Vec<_>>>()?;
            Ok((a.clone(), jumps))
        })
        .collect::<Result<_>>()?;
    let mut attained: BTreeMap<JumpClass, BTreeSet<i64>> = BTreeMap::new();
    for (a, jumps) in &seen {
        for &(class, eps, m) in jumps {
            attained.entry(class).or_default().insert(eps);
            o.check(class.allowed().contains(&eps), Some(a), format!("{}) {m:?}: jump {eps}", class.letter()));
        }
    }
    for class in JumpClass::ALL {
        let got = attained.get(&class).cloned().unwrap_or_default();
        for eps in class.allowed() {
            o.check(got.contains(eps), None, format!("{}) jump {eps} never attained", class.letter()));
        }
        o.notes.push(format!("{}) {:?}: attained {:?}", class.letter(), class, got));
    }
    Ok(o)
}

fn closed_forms(solver: &Solver, n_max: usize) -> Result<Outcome> {
    let mut o = Outcome::default();
    for n in (4..=n_max).step_by(2) {
        for mask in 0u32..1 << n {
            let marks: Vec<Sign> = (0..n).map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect();
            let a = Ribbon::ladder(n, &marks)?;
            if !has_positive_extremes(&a) {
                continue;
            }
            let v = solver.invariants(&a)?;
            for kind in InvariantKind::ALL {
                let f = ladder_closed_form(&a, kind)?;
                o.check(f == v.get(kind), Some(&a), format!("ladder closed form for {}: {f} vs {}", kind.name(), v.get(kind)));
            }
        }
        let positive = Ribbon::ladder(n, &vec![Sign::Plus; n])?;
        o.check(cl_plus_plus(&positive) as usize == n / 2 - 2, Some(&positive), "positive ladder: cl++ = n/2-2");
    }
    let admissible: Vec<Ribbon> = corpus(n_max.saturating_sub(2).max(2))?.into_iter().filter(has_positive_extremes).collect();
    let pairs: Vec<(&Ribbon, &Ribbon)> = admissible
        .iter()
        .flat_map(|a| admissible.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.n() + b.n() - 2 <= n_max)
        .collect();
    let bad: Vec<(Ribbon, String)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let c = connected_sum(a, b)?;
            let lhs = solver.invariants(&c)?;
            let rhs = solver.invariants(a)?.add(solver.invariants(b)?);
            Ok((lhs != rhs).then(|| (c, format!("{a} # {b}: {lhs} vs {rhs}"))))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    o.cases += pairs.len() as u64;
    for (c, clause) in bad {
        o.fail(Some(&c), clause);
    }
    let e2 = connected_sum(&r("(1-,3-,2-,4+)"), &Ribbon::ladder(6, &[Sign::Plus; 6])?)?;
    let v = solver.invariants(&e2)?;
    o.check((v.gamma, v.gamma_ext, v.gamma_sad) == (4, 2, 2), Some(&e2), format!("e2 instance: {v}"));
    Ok(o)
}

fn counting(n_max: usize) -> Result<Outcome> {
    let mut o = Outcome::default();
    let big = |x: usize| num_bigint::BigUint::from(x);
    for n in (2..=n_max).step_by(2) {
        let row = count_ribbons(n)?;
        let all: Vec<Ribbon> = ribbons(n, Filter::All)?.collect();
        let distinct: std::collections::HashSet<&Ribbon> = all.iter().collect();
        o.check(big(all.len()) == row.ribbons, None, format!("n={n}: ribbon count"));
        o.check(distinct.len() == all.len(), None, format!("n={n}: no duplicates"));
        o.check(big(ribbons(n, Filter::Positive)?.count()) == row.positive, None, format!("n={n}: positive count"));
        for (s, c) in &row.per_sigma {
            o.check(big(ribbons(n, Filter::Sigma(*s))?.count()) == *c, None, format!("n={n}: sigma={s} stratum"));
        }
        if n >= 4 {
            let alts = all.iter().filter(|a| a.is_alternation()).count();
            o.check(big(alts) == alternation_count(n), None, format!("n={n}: alternation count"));
            let shapes = ribbons(n, Filter::Positive)?.filter(Ribbon::is_ladder).count();
            o.check(big(shapes) == ladder_shape_count(n), None, format!("n={n}: ladder shape count"));
            let ladders = all.iter().filter(|a| a.is_ladder()).count();
            o.check(big(ladders) == ladder_shape_count(n) << n, None, format!("n={n}: general ladder count"));
            let neg = Ribbon::ladder(n, &vec![Sign::Minus; n])?;
            let expected = 1u64 << (n / 2 - 1);
            o.check(
                oracle::count_minimal(&neg, InvariantKind::Gamma)? == expected,
                Some(&neg),
                format!("negative ladder: {expected} minimal extensions"),
            );
            let pos = Ribbon::ladder(n, &vec![Sign::Plus; n])?;
            o.check(oracle::count_packings(&pos)? == 1, Some(&pos), "positive ladder: unique packing");
        }
        let floor = 1u64 << (n / 2).saturating_sub(1);
        let negatives: Vec<Ribbon> = ribbons(n, Filter::Negative)?.collect();
        let counts: Vec<u64> = negatives
            .par_iter()
            .map(|a| oracle::count_minimal(a, InvariantKind::Gamma))
            .collect::<Result<_>>()?;
        for (a, c) in negatives.iter().zip(counts) {
            o.check(c >= floor, Some(a), format!("free extensions {c} < {floor}"));
        }
    }
    let next = n_max + 2;
    if next <= crate::enumeration::DEFAULT_MAX_N {
        let start = Instant::now();
        let streamed = ribbons(next, Filter::All)?.count();
        o.check(big(streamed) == count_ribbons(next)?.ribbons, None, format!("n={next}: streamed ribbon count"));
        o.notes.push(format!("n={next}: streamed {streamed} ribbons in {} ms", start.elapsed().as_millis()));
    }
    let perms = zigzag_perms(n_max)?.len();
    o.notes.push(format!("n={n_max}: {perms} zig-zag permutations"));
    Ok(o)
}

fn involutions(solver: &Solver, n_max: usize, seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut all = corpus(n_max)?;
    all.extend(samples(n_max + 2, SAMPLES, seed)?);
    o.per_ribbon(&all, |a| {
        let mut bad = Vec::new();
        if a.invert().invert() != *a || a.flip_all().flip_all() != *a {
            bad.push("involutions are self-inverse".into());
        }
        if solver.invariants(&a.invert())? != solver.invariants(a)? {
            bad.push("inversion preserves the invariants".into());
        }
        if a.to_string().parse::<Ribbon>().ok().as_ref() != Some(a) {
            bad.push("notation round trip".into());
        }
        let json = serde_json::to_string(a).expect("serializable");
        if serde_json::from_str::<Ribbon>(&json).ok().as_ref() != Some(a) {
            bad.push("json round trip".into());
        }
        let reduced = short_cancel_all(a);
        if short_cancel_all(&reduced) != reduced {
            bad.push("short cancellation is idempotent".into());
        }
        if a.n() <= 6 {
            for m in applicable_moves(a) {
                let b = apply_move(a, m)?;
                let sigma_ok = match m {
                    Move::Flip { node } => b.signature() - a.signature() == if a.mark(node).is_plus() { -2 } else { 2 },
                    _ => b.signature() == a.signature(),
                };
                if !sigma_ok {
                    bad.push(format!("{m:?} changes sigma wrongly"));
                }
                let back = applicable_moves(&b).into_iter().any(|m2| {
                    let inverse_kind = matches!(
                        (m, m2),
                        (Move::Meeting { .. }, Move::Separation { .. })
                            | (Move::Separation { .. }, Move::Meeting { .. })
                            | (Move::Bypass { .. }, Move::Bypass { .. })
                            | (Move::Birth { .. }, Move::Death { .. })
                            | (Move::Death { .. }, Move::Birth { .. })
                            | (Move::Flip { .. }, Move::Flip { .. })
                    );
                    inverse_kind && apply_move(&b, m2).ok().as_ref() == Some(a)
                });
                if !back {
                    bad.push(format!("{m:?} has no inverse move"));
                }
            }
        }
        Ok(bad)
    })?;
    Ok(o)
}

/// A rigid copy of `a` with levels `value * scale + offset`, origin and end
/// at the given nodes.
fn rigid(a: &Ribbon, scale: i64, offset: i64, origin: usize, end: usize) -> Result<MarkedRibbon> {
    use num_rational::Rational64;
    let levels = (0..a.n()).map(|i| Rational64::new(a.value(i) as i64 * scale + offset, 7)).collect();
    MarkedRibbon::new(RigidRibbon::new(levels, a.marks().to_vec())?, origin, end)
}

/// All `(origin, end)` choices: positive minima and positive maxima.
fn anchors(a: &Ribbon) -> Vec<(usize, usize)> {
    let mins: Vec<usize> = (0..a.n()).filter(|&i| a.is_min(i) && a.mark(i).is_plus()).collect();
    let maxs: Vec<usize> = (0..a.n()).filter(|&i| a.is_max(i) && a.mark(i).is_plus()).collect();
    mins.iter().flat_map(|&p| maxs.iter().map(move |&q| (p, q))).collect()
}

fn semigroup(solver: &Solver, n_max: usize, seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let admissible: Vec<Ribbon> = corpus(n_max)?.into_iter().filter(has_positive_extremes).collect();
    let alpha0 = Ribbon::alpha0();
    for b in &admissible {
        o.check(connected_sum(&alpha0, b)? == *b, Some(b), "alpha0 is a unit for #");
        o.check(connected_sum(b, &alpha0)? == *b, Some(b), "alpha0 is a right unit for #");
    }
    let small: Vec<&Ribbon> = admissible.iter().filter(|a| a.n() == 4).collect();
    for a in &small {
        for b in &small {
            let ab = connected_sum(a, b)?;
            o.check(ab.signature() == a.signature() + b.signature() - 2, Some(&ab), "sigma(a#b) = sigma(a)+sigma(b)-2");
            if ab.n() + 2 <= n_max {
                for c in &small {
                    let left = connected_sum(&ab, c)?;
                    let right = connected_sum(a, &connected_sum(b, c)?)?;
                    o.check(left == right, Some(&left), "# is associative");
                }
            }
        }
    }
    // Gluing of marked ribbons on parts with up to six nodes.
    let parts: Vec<Ribbon> = corpus(n_max.min(6))?.into_iter().filter(|a| !anchors(a).is_empty()).collect();
    let mut rng_state = seed;
    let mut pick = |len: usize| {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (rng_state >> 33) as usize % len
    };
    let mut collisions = 0;
    for _ in 0..400 {
        let mut marked = Vec::new();
        for (scale, offset) in [(7, 0), (5, 2), (3, 1)] {
            let a = &parts[pick(parts.len())];
            let choices = anchors(a);
            let (p, q) = choices[pick(choices.len())];
            marked.push((a.clone(), rigid(a, scale, offset, p, q)?));
        }
        let [(a, ma), (b, mb), (c, mc)] = &marked[..] else { unreachable!() };
        let back = marked_invert(&marked_invert(ma));
        o.check(back == *ma, Some(a), "marked inversion is an involution");
        match compose(ma, mb) {
            Ok(ab) => {
                let x = ab.to_ribbon()?;
                o.check(x.signature() == a.signature() + b.signature() - 2, Some(&x), "sigma(ab) = sigma(a)+sigma(b)-2");
                o.check(x.index() == a.index() + b.index(), Some(&x), "index(ab) = index(a)+index(b)");
                let sum = solver.invariants(a)?.add(solver.invariants(b)?);
                let got = solver.invariants(&x)?;
                o.check(
                    InvariantKind::ALL.iter().all(|&k| got.get(k) <= sum.get(k)),
                    Some(&x),
                    format!("gluing {a} and {b} is subadditive"),
                );
            }
            Err(Error::LevelCollision) => collisions += 1,
            Err(e) => return Err(e),
        }
        match ternary_compose(ma, mb, mc) {
            Ok(abc) => {
                let x = abc.to_ribbon()?;
                o.check(
                    x.signature() == a.signature() + b.signature() + c.signature() - 4,
                    Some(&x),
                    "sigma([abc]) = sigma(a)+sigma(b)+sigma(c)-4",
                );
                o.check(x.index() == a.index() + b.index() + c.index(), Some(&x), "index([abc]) is additive");
                let sum = solver.invariants(a)?.add(solver.invariants(b)?).add(solver.invariants(c)?);
                let got = solver.invariants(&x)?;
                o.check(
                    InvariantKind::ALL.iter().all(|&k| got.get(k) <= sum.get(k)),
                    Some(&x),
                    format!("ternary gluing of {a}, {b}, {c} is subadditive"),
                );
            }
            Err(Error::LevelCollision) => collisions += 1,
            Err(e) => return Err(e),
        }
    }
    o.notes.push(format!("{collisions} glued samples skipped on level collisions"));
    Ok(o)
}

fn realizability(solver: &Solver, n_max: usize) -> Result<Outcome> {
    let mut o = Outcome::default();
    for n in (2..=n_max).step_by(2) {
        let perms = zigzag_perms(n)?;
        let found: Vec<(Vec<u32>, BTreeSet<u32>)> = perms
            .par_iter()
            .map(|p| {
                let mut gammas = BTreeSet::new();
                for mask in 0u32..1 << n {
                    let marks: Vec<Sign> = (0..n).map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect();
                    gammas.insert(solver.gamma(&Ribbon::from_signs(p, &marks)?)?);
                }
                Ok((p.clone(), gammas))
            })
            .collect::<Result<_>>()?;
        let top = n as u32 / 2 + 1;
        for (p, gammas) in found {
            let a = Ribbon::from_signs(&p, &vec![Sign::Plus; n])?;
            let missing: Vec<u32> = (0..=top).filter(|g| !gammas.contains(g)).collect();
            o.check(missing.is_empty(), Some(&a), format!("markings miss gamma values {missing:?}"));
        }
    }
    let pairs = crate::enumeration::realizable_pairs(solver, n_max)?;
    for &(s, g) in &pairs {
        let impossible = (s != 2 && g == 0) || (s == 2 && g == 1) || (s < 0 && g as i64 == 2 - s / 2);
        o.check(!impossible, None, format!("impossible pair (sigma={s}, gamma={g}) realized"));
    }
    o.notes.push(format!("n={n_max}: realizable (sigma, gamma) pairs {pairs:?}"));
    Ok(o)
}

/// Every A strategy against the B mirror on the canonical ladder.
fn mirror_playouts(state: &GameState, solver: &Solver, out: &mut Vec<(GameState, bool)>) -> Result<()> {
    if let GameStatus::Finished { winner, .. } = state.status {
        out.push((state.clone(), winner == Player::B));
        return Ok(());
    }
    for a_node in state.legal_moves() {
        let mut next = state.clone();
        next.play(a_node, solver)?;
        let Some(b_node) = b_mirror_reply(&next, a_node) else {
            out.push((next, false));
            continue;
        };
        next.play(b_node, solver)?;
        mirror_playouts(&next, solver, out)?;
    }
    Ok(())
}

fn game_ladder(n_max: usize) -> Result<Outcome> {
    let mut o = Outcome::default();
    let solver = Solver::new();
    for n in (4..=n_max.min(crate::game::MAX_EXACT_N)).step_by(2) {
        let perm = ladder_values(n);
        let ladder = Ribbon::ladder(n, &vec![Sign::Plus; n])?;
        let mut plays = Vec::new();
        mirror_playouts(&GameState::new(perm.clone())?, &solver, &mut plays)?;
        for (end, b_won) in &plays {
            let final_ribbon = end.final_ribbon().unwrap_or_else(|| ladder.clone());
            o.check(*b_won, Some(&final_ribbon), "B mirror strategy wins");
        }
        o.check(solve_game(&perm)? == Player::B, Some(&ladder), "optimal play on the ladder: B wins");
        o.notes.push(format!("n={n}: {} mirror playouts", plays.len()));
    }
    for n in (4..=n_max.min(6)).step_by(2) {
        let perms = zigzag_perms(n)?;
        let b_wins = perms.par_iter().map(|p| solve_game(p)).collect::<Result<Vec<_>>>()?;
        let count = b_wins.iter().filter(|&&w| w == Player::B).count();
        o.notes.push(format!("n={n}: B wins under optimal play on {count} of {} permutations", perms.len()));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        let s = Solver::new();
        assert_eq!(run_suite(&s, "nope", 4, 0).unwrap_err(), Error::UnknownSuite("nope".into()));
    }

    #[test]
    fn small_suites_pass() {
        let s = Solver::new();
        for name in SUITES.iter().filter(|&&n| n != "jump-table") {
            let rep = run_suite(&s, name, 4, 1).unwrap();
            assert!(rep.passed(), "{}: {:?}", rep.summary(), &rep.failures[..rep.failures.len().min(5)]);
        }
    }

    #[test]
    fn small_jumps_stay_in_table() {
        // Attainment needs larger ribbons; membership must already hold.
        let rep = run_suite(&Solver::new(), "jump-table", 4, 1).unwrap();
        assert!(rep.failures.iter().all(|f| f.ribbon.is_none()), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
    }

    #[test]
    fn jump_letters() {
        assert_eq!(JumpClass::MeetPositive.letter(), 'a');
        assert_eq!(JumpClass::Flip.letter(), 'j');
    }
}
