//! Ribbon invariants of marked cyclic zig-zag permutations.
//!
//! * [`ribbon`]: the discrete model, notation, moves, cancellations, gluing.
//! * [`solver`]: the four invariants by recursive splitting, plus cluster
//!   numbers, the zero test, ladder formulas and bound checks.
//! * [`oracle`]: exhaustive enumeration of packings as an independent check.
//! * [`enumeration`]: streams and closed-form counts of ribbons.
//! * [`verify`]: named exhaustive suites.
//! * [`game`]: the two-player marking game and its minimax solver.

pub mod enumeration;
pub mod error;
pub mod game;
pub mod oracle;
pub mod ribbon;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use ribbon::{Ribbon, Sign};
pub use solver::{InvariantBundle, InvariantKind, Invariants, Solver};
