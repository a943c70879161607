mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use scrabble_core::family::random_cnf;
use scrabble_core::logic::{parse_dimacs, Cnf, Qbf};
use scrabble_core::reduction::{compile_qbf, compile_sat, reduce_qbf, reduce_sat};
use scrabble_core::rng::SplitMix64;
use scrabble_core::rules::is_finished;
use scrabble_core::search::{
    replay, solve_game, solve_game_with, solve_solitaire, solve_solitaire_with, state_key,
    SolitaireStatus, SolveError, SolveLimits, SolveOptions,
};
use scrabble_core::{
    Bag, Board, Dictionary, Engine, GameState, Instance, Move, Outcome, Player, Rack, VariantConfig,
};

use common::{brute_qbf, brute_sat};

fn cnf(text: &str) -> Cnf {
    parse_dimacs(text).unwrap()
}

fn limits() -> SolveLimits {
    SolveLimits::default()
}

const NO_MEMO: SolveOptions = SolveOptions {
    memo: false,
    parallel_root: false,
};
const PARALLEL: SolveOptions = SolveOptions {
    memo: true,
    parallel_root: true,
};

/// Plain depth-first search over placements, no memo.
fn naive_solvable(engine: &Engine, s: &GameState) -> bool {
    if s.bags[0].is_empty() && s.racks[0].is_empty() {
        return true;
    }
    engine.legal_moves(s).iter().any(|m| {
        matches!(m, Move::Place(_))
            && naive_solvable(engine, &engine.apply_move(s, m).unwrap().next)
    })
}

/// Full-width minimax over every legal move, returning the final margin.
/// Pass chains make the bare tree exponential, so values are cached per
/// complete state (scores included, no pruning).
fn reference_margin(engine: &Engine, s: &GameState, seen: &mut HashMap<GameState, i64>) -> i64 {
    if is_finished(s) {
        return s.margin();
    }
    if let Some(&v) = seen.get(s) {
        return v;
    }
    let vals: Vec<i64> = engine
        .legal_moves(s)
        .into_iter()
        .map(|m| reference_margin(engine, &engine.apply_move(s, &m).unwrap().next, seen))
        .collect();
    let v = match s.active {
        Player::P1 => *vals.iter().max().unwrap(),
        Player::P2 => *vals.iter().min().unwrap(),
    };
    seen.insert(s.clone(), v);
    v
}

fn empty_instance(variant: VariantConfig, scores: [u64; 2]) -> Instance {
    Instance {
        dictionary: Dictionary::new(),
        k: 2,
        board: Board::new(),
        bag: Bag::default(),
        bag2: Bag::default(),
        racks: [Rack::empty(2), Rack::empty(2)],
        scores,
        variant,
        active: Player::P1,
        pass_streak: 0,
    }
}

fn arb_cnf(max_n: u32, max_m: usize) -> impl Strategy<Value = Cnf> {
    (1..=max_n, 1..=max_m, any::<u64>())
        .prop_map(|(n, m, seed)| random_cnf(&mut SplitMix64::new(seed), n, m))
}

#[test]
fn solitaire_examples() {
    let res = solve_solitaire(&reduce_sat(&cnf("p cnf 1 1\n1 1 1 0\n")), limits()).unwrap();
    let SolitaireStatus::Solvable(w) = &res.status else {
        panic!("expected solvable, got {:?}", res.status)
    };
    assert_eq!(w.len(), 2);

    let unsat = reduce_sat(&cnf("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"));
    assert_eq!(
        solve_solitaire(&unsat, limits()).unwrap().status,
        SolitaireStatus::Unsolvable
    );

    let done = empty_instance(VariantConfig::SOLITAIRE, [0, 0]);
    assert_eq!(
        solve_solitaire(&done, limits()).unwrap().status,
        SolitaireStatus::Solvable(vec![])
    );
}

#[test]
fn game_examples() {
    let done = empty_instance(VariantConfig::TWO_PLAYER_NO_EXCHANGE, [1, 0]);
    let res = solve_game(&done, limits()).unwrap();
    assert_eq!((res.winner, res.margin), (Outcome::P1Wins, 1));
    assert!(res.principal_variation.is_empty());

    let win = reduce_qbf(&Qbf::new(cnf("p cnf 2 1\n1 1 1 0\n")));
    assert_eq!(solve_game(&win, limits()).unwrap().winner, Outcome::P1Wins);
    let lose = reduce_qbf(&Qbf::new(cnf("p cnf 2 1\n2 2 2 0\n")));
    assert_eq!(solve_game(&lose, limits()).unwrap().winner, Outcome::P2Wins);
}

#[test]
fn precondition_errors() {
    let sat = reduce_sat(&cnf("p cnf 1 1\n1 1 1 0\n"));
    let qbf = reduce_qbf(&Qbf::new(cnf("p cnf 2 1\n1 1 1 0\n")));
    assert!(matches!(
        solve_game(&sat, limits()),
        Err(SolveError::NotTwoPlayer)
    ));
    assert!(matches!(
        solve_solitaire(&qbf, limits()),
        Err(SolveError::NotSolitaire)
    ));
    let mut ex = qbf.clone();
    ex.variant.exchanges_allowed = true;
    assert!(matches!(
        solve_game(&ex, limits()),
        Err(SolveError::ExchangesEnabled)
    ));
    assert!(matches!(
        SolveLimits::new(0, 5),
        Err(SolveError::InvalidLimits)
    ));
    let tight = SolveLimits::new(10, 60_000).unwrap();
    assert!(matches!(
        solve_game(&qbf, tight),
        Err(SolveError::LimitExceeded { .. })
    ));
    // The witness needs six placements, more nodes than allowed.
    let tiny = SolveLimits::new(3, 60_000).unwrap();
    let res = solve_solitaire(
        &reduce_sat(&cnf("p cnf 3 3\n1 2 3 0\n-1 2 3 0\n1 -2 -3 0\n")),
        tiny,
    )
    .unwrap();
    assert_eq!(res.status, SolitaireStatus::LimitExceeded);
}

#[test]
fn state_key_examples() {
    let s = reduce_qbf(&Qbf::new(cnf("p cnf 2 1\n1 -2 2 0\n"))).initial_state();
    assert_eq!(state_key(&s), state_key(&s.clone()));
    let mut passed = s.clone();
    passed.pass_streak += 1;
    assert_ne!(state_key(&s), state_key(&passed));
    // Fixed across runs and builds.
    let again = reduce_qbf(&Qbf::new(cnf("p cnf 2 1\n1 -2 2 0\n"))).initial_state();
    assert_eq!(state_key(&s), state_key(&again));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solitaire_agrees_with_oracle_and_naive_search(f in arb_cnf(3, 3)) {
        let red = compile_sat(&f);
        let res = solve_solitaire(&red.instance, limits()).unwrap();
        let plain = solve_solitaire_with(&red.instance, limits(), NO_MEMO).unwrap();
        prop_assert_eq!(&res.status, &plain.status);
        let naive = naive_solvable(&red.engine(), &red.instance.initial_state());
        prop_assert_eq!(res.is_solvable(), naive);
        prop_assert_eq!(res.is_solvable(), brute_sat(&f));
        if let SolitaireStatus::Solvable(w) = &res.status {
            let end = replay(&red.instance, w).unwrap();
            prop_assert!(end.bags[0].is_empty() && end.racks[0].is_empty());
        }
    }

    #[test]
    fn game_value_agrees_across_modes(f in arb_cnf(2, 2)) {
        let q = Qbf::new(f);
        let red = compile_qbf(&q);
        let res = solve_game(&red.instance, limits()).unwrap();
        let plain = solve_game_with(&red.instance, limits(), NO_MEMO).unwrap();
        let par = solve_game_with(&red.instance, limits(), PARALLEL).unwrap();
        prop_assert_eq!(res.margin, plain.margin);
        prop_assert_eq!(&res.principal_variation, &plain.principal_variation);
        prop_assert_eq!(res.margin, par.margin);
        prop_assert_eq!(&res.principal_variation, &par.principal_variation);

        prop_assert_eq!(res.winner, Outcome::from_margin(res.margin));
        let want = if brute_qbf(&q) { Outcome::P1Wins } else { Outcome::P2Wins };
        prop_assert_eq!(res.winner, want);

        let end = replay(&red.instance, &res.principal_variation).unwrap();
        prop_assert!(is_finished(&end));
        prop_assert_eq!(end.margin(), res.margin);
    }
}

proptest! {
    // The reference search is full width and slow.
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn game_value_matches_full_width_minimax(f in arb_cnf(2, 2)) {
        let red = compile_qbf(&Qbf::new(f));
        let res = solve_game(&red.instance, limits()).unwrap();
        let want = reference_margin(&red.engine(), &red.instance.initial_state(), &mut HashMap::new());
        prop_assert_eq!(res.margin, want);
    }
}
