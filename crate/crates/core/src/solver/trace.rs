//! Decomposition trees realizing the solver's minimum.

use serde::Serialize;

use super::{step, Candidate, InvariantKind, Invariants, Solver, Step};
use crate::error::{Error, Result};
use crate::ribbon::{short_cancel_all, Ribbon};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitTrace {
    /// Irreducible ribbon: `α₀` or a positive alternation.
    Leaf { ribbon: String, weight: u32 },
    /// Short cancellations applied before splitting.
    Reduced { from: String, to: String, child: Box<SplitTrace> },
    /// A negative node made positive; `weight` is paid for the trapped extremum.
    Touching { ribbon: String, node: usize, weight: u32, child: Box<SplitTrace> },
    Binary { ribbon: String, level: f64, arcs: (usize, usize), parts: Vec<SplitTrace> },
    Ternary { ribbon: String, node: usize, arcs: (usize, usize), parts: Vec<SplitTrace> },
}

impl SplitTrace {
    /// Sum of leaf and touching weights.
    pub fn total(&self) -> u32 {
        match self {
            SplitTrace::Leaf { weight, .. } => *weight,
            SplitTrace::Reduced { child, .. } => child.total(),
            SplitTrace::Touching { weight, child, .. } => weight + child.total(),
            SplitTrace::Binary { parts, .. } | SplitTrace::Ternary { parts, .. } => parts.iter().map(|p| p.total()).sum(),
        }
    }

    /// Number of touching contributions with nonzero weight.
    pub fn touching_count(&self) -> usize {
        match self {
            SplitTrace::Leaf { .. } => 0,
            SplitTrace::Reduced { child, .. } => child.touching_count(),
            SplitTrace::Touching { weight, child, .. } => (*weight > 0) as usize + child.touching_count(),
            SplitTrace::Binary { parts, .. } | SplitTrace::Ternary { parts, .. } => {
                parts.iter().map(|p| p.touching_count()).sum()
            }
        }
    }

    /// Indented text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match self {
            SplitTrace::Leaf { ribbon, weight } => out.push_str(&format!("{pad}leaf {ribbon} w={weight}\n")),
            SplitTrace::Reduced { from, to, child } => {
                out.push_str(&format!("{pad}cancel {from} -> {to}\n"));
                child.render_into(depth + 1, out);
            }
            SplitTrace::Touching { ribbon, node, weight, child } => {
                out.push_str(&format!("{pad}touch {ribbon} node={node} w={weight}\n"));
                child.render_into(depth + 1, out);
            }
            SplitTrace::Binary { ribbon, level, arcs, parts } => {
                out.push_str(&format!("{pad}binary {ribbon} level={level} arcs={arcs:?}\n"));
                for p in parts {
                    p.render_into(depth + 1, out);
                }
            }
            SplitTrace::Ternary { ribbon, node, arcs, parts } => {
                out.push_str(&format!("{pad}ternary {ribbon} node={node} arcs={arcs:?}\n"));
                for p in parts {
                    p.render_into(depth + 1, out);
                }
            }
        }
    }
}

pub(super) fn build(solver: &Solver, a: &Ribbon, kind: InvariantKind) -> Result<SplitTrace> {
    let reduced = short_cancel_all(a);
    if reduced != *a {
        let child = build(solver, &reduced, kind)?;
        return Ok(SplitTrace::Reduced { from: a.to_string(), to: reduced.to_string(), child: Box::new(child) });
    }
    let target = solver.invariant(a, kind)?;
    match step(a) {
        Step::Alpha0 => Ok(SplitTrace::Leaf { ribbon: a.to_string(), weight: Invariants::ZERO.get(kind) }),
        Step::Alternation => Ok(SplitTrace::Leaf { ribbon: a.to_string(), weight: Invariants::alternation(a.n()).get(kind) }),
        Step::Split(cands) => {
            for c in cands {
                let mut total = c.extra().get(kind);
                for p in c.parts() {
                    total += solver.invariant(p, kind)?;
                }
                if total != target {
                    continue;
                }
                let ribbon = a.to_string();
                return Ok(match c {
                    Candidate::Touching { node, rest } => SplitTrace::Touching {
                        ribbon,
                        node,
                        weight: Invariants::TOUCHING.get(kind),
                        child: Box::new(build(solver, &rest, kind)?),
                    },
                    Candidate::Binary(s) => SplitTrace::Binary {
                        ribbon,
                        level: s.level2 as f64 / 2.0,
                        arcs: s.arcs,
                        parts: s.parts.iter().map(|p| build(solver, p, kind)).collect::<Result<_>>()?,
                    },
                    Candidate::Ternary(s) => SplitTrace::Ternary {
                        ribbon,
                        node: s.node,
                        arcs: s.arcs,
                        parts: s.parts.iter().map(|p| build(solver, p, kind)).collect::<Result<_>>()?,
                    },
                });
            }
            Err(Error::InternalNoCandidate(a.to_string()))
        }
    }
}
