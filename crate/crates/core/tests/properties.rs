use proptest::prelude::*;

use ribbonlab_core::enumeration::random_ribbon;
use ribbonlab_core::game::{GameState, GameStatus, Player};
use ribbonlab_core::oracle;
use ribbonlab_core::ribbon::{applicable_moves, apply_move, cancel, cancellable_pairs, short_cancel_all, Move};
use ribbonlab_core::solver::{check_bounds, delta, delta0, is_gamma_zero};
use ribbonlab_core::{Ribbon, Solver};

fn ribbon(max_n: usize) -> impl Strategy<Value = Ribbon> {
    (1..=max_n / 2, any::<u64>()).prop_map(|(half, seed)| random_ribbon(2 * half, None, seed).unwrap())
}

fn is_valid(a: &Ribbon) -> bool {
    let n = a.n();
    let mut seen = vec![false; n + 1];
    a.values()[0] == 1
        && a.values().iter().all(|&v| (v as usize) <= n && !std::mem::replace(&mut seen[v as usize], true))
        && (0..n).all(|i| a.is_max(i) != a.is_min(i) && a.is_max(i) != a.is_max(a.next(i)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn moves_yield_valid_ribbons(a in ribbon(10)) {
        for m in applicable_moves(&a) {
            let b = apply_move(&a, m).unwrap();
            prop_assert!(is_valid(&b), "{m:?} on {a} gave {b}");
            let expected = match m {
                Move::Flip { node } => a.signature() + if a.mark(node).is_plus() { -2 } else { 2 },
                _ => a.signature(),
            };
            prop_assert_eq!(b.signature(), expected);
        }
    }

    #[test]
    fn involutions_are_self_inverse(a in ribbon(16)) {
        prop_assert_eq!(a.invert().invert(), a.clone());
        prop_assert_eq!(a.flip_all().flip_all(), a.clone());
        prop_assert_eq!(a.flip_all().signature(), -a.signature());
        prop_assert_eq!(a.to_string().parse::<Ribbon>().unwrap(), a);
    }

    #[test]
    fn inversion_and_short_cancellation_keep_invariants(a in ribbon(12)) {
        let s = Solver::new();
        let v = s.invariants(&a).unwrap();
        prop_assert_eq!(s.invariants(&a.invert()).unwrap(), v);
        let r = short_cancel_all(&a);
        prop_assert_eq!(r.signature(), a.signature());
        prop_assert_eq!(s.invariants(&r).unwrap(), v);
    }

    #[test]
    fn cancellation_never_lowers_gamma(a in ribbon(10)) {
        let s = Solver::new();
        let g = s.gamma(&a).unwrap();
        for (p, q) in cancellable_pairs(&a) {
            let b = cancel(&a, p, q).unwrap();
            prop_assert_eq!(b.signature(), a.signature());
            prop_assert!(s.gamma(&b).unwrap() >= g);
        }
    }

    #[test]
    fn bundle_bounds_hold(a in ribbon(12)) {
        let b = Solver::new().bundle(&a).unwrap();
        for v in check_bounds(&b, a.n()) {
            prop_assert!(v.pass, "{} fails on {}", v.name, a);
        }
    }

    #[test]
    fn gamma_dominates_the_alternatives(a in ribbon(8)) {
        let s = Solver::new();
        let v = s.invariants(&a).unwrap();
        let o = oracle::summarize(&a).unwrap();
        prop_assert_eq!(o.minimum, v);
        prop_assert!(delta0(&a) <= v.gamma);
        prop_assert!(v.gamma_ext + v.gamma_sad <= v.gamma);
        prop_assert!(o.min_levels <= v.gamma);
        if a.is_positive() {
            prop_assert_eq!(o.min_levels, delta(&a));
        }
        prop_assert_eq!(is_gamma_zero(&a).zero, v.gamma == 0);
    }

    #[test]
    fn random_play_keeps_the_game_consistent(half in 2usize..=5, seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 8)) {
        let s = Solver::new();
        let mut g = GameState::random(2 * half, seed).unwrap();
        let n = g.n();
        for (turn, pick) in picks.iter().enumerate() {
            let moves = g.legal_moves();
            if moves.is_empty() {
                break;
            }
            let mover = g.to_move;
            prop_assert_eq!(mover, if turn % 2 == 0 { Player::A } else { Player::B });
            let node = moves[pick.index(moves.len())];
            g.play(node, &s).unwrap();
            prop_assert_eq!(g.marks[node], Some(mover.sign()));
            prop_assert!(g.play(node, &s).is_err());
        }
        prop_assert_eq!(g.pool_a + g.pool_b + g.moves_made(), n - 2);
        if let GameStatus::Finished { winner, gamma } = g.status {
            let a = g.final_ribbon().unwrap();
            prop_assert_eq!(a.signature(), 2);
            prop_assert_eq!(gamma, s.gamma(&a).unwrap());
            prop_assert_eq!(winner == Player::B, gamma == 0);
        }
    }
}
