//! The two-player marking game: A places negative marks, B positive ones, and
//! B wins iff the finished ribbon has γ = 0.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::enumeration::random_ribbon;
use crate::error::{Error, Result};
use crate::ribbon::{short_cancel_all, Ribbon, Sign};
use crate::solver::{is_gamma_zero, Solver};

/// Largest board solved exactly.
pub const MAX_EXACT_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            Player::A => Sign::Minus,
            Player::B => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GameStatus {
    InProgress,
    Finished { winner: Player, gamma: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub permutation: Vec<u32>,
    pub marks: Vec<Option<Sign>>,
    pub to_move: Player,
    pub pool_a: usize,
    pub pool_b: usize,
    pub status: GameStatus,
}

impl GameState {
    pub fn new(permutation: Vec<u32>) -> Result<GameState> {
        let n = permutation.len();
        let probe = Ribbon::from_signs(&permutation, &vec![Sign::Plus; n])?;
        if n < 4 {
            return Err(Error::PreconditionViolated("the game needs at least 4 nodes".into()));
        }
        if probe.values().iter().map(|&v| v as u32).ne(permutation.iter().copied()) {
            return Err(Error::PreconditionViolated("permutation must start with value 1".into()));
        }
        let mut marks = vec![None; n];
        marks[probe.position(1)] = Some(Sign::Plus);
        marks[probe.position(n as u32)] = Some(Sign::Plus);
        Ok(GameState {
            permutation,
            marks,
            to_move: Player::A,
            pool_a: n / 2 - 1,
            pool_b: n / 2 - 1,
            status: GameStatus::InProgress,
        })
    }

    /// Board with a uniform random permutation.
    pub fn random(n: usize, seed: u64) -> Result<GameState> {
        if !(4..=12).contains(&n) {
            return Err(Error::LimitExceeded { what: "game nodes", max: 12, n });
        }
        let r = random_ribbon(n, None, seed)?;
        GameState::new(r.values().iter().map(|&v| v as u32).collect())
    }

    pub fn n(&self) -> usize {
        self.permutation.len()
    }

    pub fn moves_made(&self) -> usize {
        self.marks.iter().filter(|m| m.is_some()).count() - 2
    }

    pub fn legal_moves(&self) -> Vec<usize> {
        if self.status != GameStatus::InProgress {
            return Vec::new();
        }
        (0..self.n()).filter(|&i| self.marks[i].is_none()).collect()
    }

    fn place(&mut self, node: usize) -> Result<()> {
        if self.status != GameStatus::InProgress {
            return Err(Error::MoveNotApplicable("game is finished".into()));
        }
        if node >= self.n() || self.marks[node].is_some() {
            return Err(Error::MoveNotApplicable(format!("node {node} is not free")));
        }
        let pool = match self.to_move {
            Player::A => &mut self.pool_a,
            Player::B => &mut self.pool_b,
        };
        if *pool == 0 {
            return Err(Error::MoveNotApplicable("no pools left".into()));
        }
        *pool -= 1;
        self.marks[node] = Some(self.to_move.sign());
        self.to_move = self.to_move.other();
        Ok(())
    }

    /// Places the mover's mark on `node` and settles the game once the board
    /// is full.
    pub fn play(&mut self, node: usize, solver: &Solver) -> Result<()> {
        self.place(node)?;
        if let Some(a) = self.final_ribbon() {
            let gamma = solver.gamma(&a)?;
            let winner = if gamma == 0 { Player::B } else { Player::A };
            self.status = GameStatus::Finished { winner, gamma };
        }
        Ok(())
    }

    pub fn final_ribbon(&self) -> Option<Ribbon> {
        let marks: Option<Vec<Sign>> = self.marks.iter().copied().collect();
        marks.map(|m| Ribbon::from_signs(&self.permutation, &m).expect("board holds a valid permutation"))
    }

    pub fn winner(&self) -> Option<Player> {
        match self.status {
            GameStatus::Finished { winner, .. } => Some(winner),
            GameStatus::InProgress => None,
        }
    }
}

/// B's reply on the canonical ladder: value `2k` answers `2k+1` and back.
pub fn b_mirror_reply(state: &GameState, a_node: usize) -> Option<usize> {
    let n = state.n() as u32;
    let v = *state.permutation.get(a_node)?;
    if !(2..n).contains(&v) {
        return None;
    }
    let partner = v ^ 1;
    let node = state.permutation.iter().position(|&w| w == partner)?;
    state.marks[node].is_none().then_some(node)
}

/// Exact solver over partial markings of one permutation.
pub struct GameSolver {
    permutation: Vec<u32>,
    memo: HashMap<Vec<i8>, Player>,
}

impl GameSolver {
    pub fn new(permutation: &[u32]) -> Result<GameSolver> {
        if permutation.len() > MAX_EXACT_N {
            return Err(Error::LimitExceeded { what: "exact game nodes", max: MAX_EXACT_N, n: permutation.len() });
        }
        Ok(GameSolver { permutation: permutation.to_vec(), memo: HashMap::new() })
    }

    /// Winner under optimal play from `state`.
    pub fn winner(&mut self, state: &GameState) -> Player {
        debug_assert_eq!(state.permutation, self.permutation);
        if let Some(w) = state.winner() {
            return w;
        }
        let key: Vec<i8> = state.marks.iter().map(|m| m.map_or(0, Sign::as_i8)).collect();
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let w = match state.final_ribbon() {
            Some(a) => {
                if is_gamma_zero(&a).zero {
                    Player::B
                } else {
                    Player::A
                }
            }
            None => {
                let mover = state.to_move;
                let mut best = mover.other();
                for node in state.legal_moves() {
                    let mut next = state.clone();
                    next.place(node).expect("legal move");
                    if self.winner(&next) == mover {
                        best = mover;
                        break;
                    }
                }
                best
            }
        };
        self.memo.insert(key, w);
        w
    }

    pub fn states_seen(&self) -> usize {
        self.memo.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HintVerdict {
    AWins,
    BWins,
    AFavorable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hint {
    pub node: usize,
    pub value: u32,
    pub verdict: HintVerdict,
    /// `"exact"` or `"heuristic"`.
    pub mode: String,
}

/// Outcome of each legal move for the player to move.
pub fn hints(state: &GameState) -> Vec<Hint> {
    let exact = state.n() <= MAX_EXACT_N;
    let mut solver = exact.then(|| GameSolver::new(&state.permutation).expect("size checked"));
    state
        .legal_moves()
        .into_iter()
        .map(|node| {
            let mut next = state.clone();
            next.place(node).expect("legal move");
            let verdict = match solver.as_mut() {
                Some(s) => match s.winner(&next) {
                    Player::A => HintVerdict::AWins,
                    Player::B => HintVerdict::BWins,
                },
                None => heuristic(&next),
            };
            let mode = if exact { "exact" } else { "heuristic" }.to_string();
            Hint { node, value: state.permutation[node], verdict, mode }
        })
        .collect()
}

/// Fills free nodes positively and looks for a negative global extremum
/// after short cancellation, which no completion can repair.
fn heuristic(state: &GameState) -> HintVerdict {
    let marks: Vec<Sign> = state.marks.iter().map(|m| m.unwrap_or(Sign::Plus)).collect();
    let a = Ribbon::from_signs(&state.permutation, &marks).expect("valid board");
    let r = short_cancel_all(&a);
    let n = r.n() as u32;
    if r.mark(r.position(1)) == Sign::Minus || r.mark(r.position(n)) == Sign::Minus {
        HintVerdict::AFavorable
    } else {
        HintVerdict::Unknown
    }
}

/// Optimal-play winner from the empty board of `permutation`.
pub fn solve_game(permutation: &[u32]) -> Result<Player> {
    let state = GameState::new(permutation.to_vec())?;
    Ok(GameSolver::new(permutation)?.winner(&state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::ladder_values;

    #[test]
    fn fresh_board() {
        let g = GameState::random(6, 1).unwrap();
        assert_eq!((g.pool_a, g.pool_b, g.to_move), (2, 2, Player::A));
        assert_eq!(g, GameState::random(6, 1).unwrap());
        assert_eq!(g.legal_moves().len(), 4);
    }

    #[test]
    fn mirror_wins_on_ladders() {
        let solver = Solver::new();
        for n in [4usize, 6, 8] {
            let mut g = GameState::new(ladder_values(n)).unwrap();
            while g.status == GameStatus::InProgress {
                let a = g.legal_moves()[0];
                g.play(a, &solver).unwrap();
                let b = b_mirror_reply(&g, a).unwrap();
                g.play(b, &solver).unwrap();
            }
            assert_eq!(g.winner(), Some(Player::B), "n={n}");
            assert_eq!(solve_game(&ladder_values(n)).unwrap(), Player::B);
        }
    }

    #[test]
    fn occupied_node_rejected() {
        let solver = Solver::new();
        let mut g = GameState::new(ladder_values(6)).unwrap();
        assert!(g.play(0, &solver).is_err());
        g.play(1, &solver).unwrap();
        assert!(g.play(1, &solver).is_err());
    }

    #[test]
    fn large_boards_use_heuristics() {
        let g = GameState::random(10, 5).unwrap();
        assert!(hints(&g).iter().all(|h| h.mode == "heuristic"));
    }
}
