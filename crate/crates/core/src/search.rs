//! Exact decision procedures: solitaire solvability and two-player game value.

use std::collections::{HashMap, HashSet};
use std::hash::{BuildHasherDefault, Hasher};
use std::io::Write;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use fnv::FnvHasher;
use rayon::prelude::*;
use rustc_hash::FxHasher;
use thiserror::Error;

use crate::model::{GameState, Instance, Mode, Move, Player};
use crate::rules::{is_finished, Engine, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_nodes: u64,
    pub max_millis: u64,
}

impl SolveLimits {
    pub fn new(max_nodes: u64, max_millis: u64) -> Result<Self, SolveError> {
        if max_nodes == 0 || max_millis == 0 {
            return Err(SolveError::InvalidLimits);
        }
        Ok(SolveLimits {
            max_nodes,
            max_millis,
        })
    }
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_nodes: 50_000_000,
            max_millis: 600_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Memoize visited states. Turning this off changes runtime only.
    pub memo: bool,
    /// Solve the root's children on separate threads.
    pub parallel_root: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            memo: true,
            parallel_root: false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search limit exceeded after {nodes} nodes")]
    LimitExceeded { nodes: u64 },
    #[error("solve_solitaire needs a solitaire instance")]
    NotSolitaire,
    #[error("solve_game needs a two-player instance")]
    NotTwoPlayer,
    #[error(
        "exact game solving requires exchanges to be disabled: exchanged tiles return to the bag, \
         so the game tree is infinite"
    )]
    ExchangesEnabled,
    #[error("limits must be positive")]
    InvalidLimits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolitaireStatus {
    Solvable(Vec<Move>),
    Unsolvable,
    LimitExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolitaireResult {
    pub status: SolitaireStatus,
    pub nodes: u64,
}

impl SolitaireResult {
    pub fn is_solvable(&self) -> bool {
        matches!(self.status, SolitaireStatus::Solvable(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameResult {
    pub winner: Outcome,
    /// Final score1 - score2 under margin-optimal play.
    pub margin: i64,
    pub principal_variation: Vec<Move>,
    pub nodes: u64,
}

/// Canonical text of a state: every field, board cells in row-major order.
pub fn canonical_bytes(state: &GameState) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 * state.board.len() + 64);
    write_canonical(state, true, &mut out);
    out
}

fn write_canonical(state: &GameState, with_scores: bool, out: &mut Vec<u8>) {
    // Writes into a Vec cannot fail.
    let _ = write!(
        out,
        "a{} p{} m{:?} e{} s{}|",
        state.active.number(),
        state.pass_streak,
        state.variant.mode,
        state.variant.exchanges_allowed as u8,
        state.variant.separate_bags as u8
    );
    if with_scores {
        let _ = write!(out, "{},{}|", state.scores[0], state.scores[1]);
    }
    for (cell, sym) in state.board.iter() {
        let _ = write!(out, "{} {} {sym};", cell.row, cell.col);
    }
    for bag in &state.bags {
        out.push(b'|');
        for s in bag.seq() {
            let _ = write!(out, "{s} ");
        }
    }
    for rack in &state.racks {
        out.push(b'|');
        for s in rack.letters() {
            let _ = write!(out, "{s} ");
        }
    }
}

fn fnv(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

/// Stable 64-bit digest (FNV-1a) of the canonical serialization.
pub fn state_key(state: &GameState) -> u64 {
    fnv(&canonical_bytes(state))
}

/// Memo key: the position without scores.
/// Equality compares the full position, so hash collisions are harmless.
#[derive(Clone, PartialEq, Eq, Hash)]
struct PositionKey(GameState);

impl PositionKey {
    fn of(state: &GameState) -> Self {
        let mut position = state.clone();
        position.scores = [0, 0];
        PositionKey(position)
    }
}

type FxBuild = BuildHasherDefault<FxHasher>;

struct Budget {
    limits: SolveLimits,
    started: Instant,
    nodes: u64,
}

impl Budget {
    fn new(limits: SolveLimits) -> Self {
        Budget {
            limits,
            started: Instant::now(),
            nodes: 0,
        }
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes
            || (self.nodes.is_multiple_of(256)
                && self.started.elapsed() > Duration::from_millis(self.limits.max_millis))
        {
            return Err(SolveError::LimitExceeded { nodes: self.nodes });
        }
        Ok(())
    }
}

/// Depth-first search for a sequence of placements that empties bag and rack.
pub fn solve_solitaire(
    inst: &Instance,
    limits: SolveLimits,
) -> Result<SolitaireResult, SolveError> {
    solve_solitaire_with(inst, limits, SolveOptions::default())
}

pub fn solve_solitaire_with(
    inst: &Instance,
    limits: SolveLimits,
    opts: SolveOptions,
) -> Result<SolitaireResult, SolveError> {
    if inst.variant.mode != Mode::Solitaire {
        return Err(SolveError::NotSolitaire);
    }
    let engine = Engine::new(inst.dictionary.clone());
    let mut search = SolitaireSearch {
        engine: &engine,
        budget: Budget::new(limits),
        failed: HashSet::default(),
        memo: opts.memo,
        path: Vec::new(),
    };
    let status = match search.dfs(&inst.initial_state()) {
        Ok(true) => SolitaireStatus::Solvable(search.path),
        Ok(false) => SolitaireStatus::Unsolvable,
        Err(_) => SolitaireStatus::LimitExceeded,
    };
    Ok(SolitaireResult {
        status,
        nodes: search.budget.nodes,
    })
}

struct SolitaireSearch<'e> {
    engine: &'e Engine,
    budget: Budget,
    failed: HashSet<PositionKey, FxBuild>,
    memo: bool,
    path: Vec<Move>,
}

impl SolitaireSearch<'_> {
    fn dfs(&mut self, state: &GameState) -> Result<bool, SolveError> {
        let rack = state.active_rack();
        if rack.is_empty() && state.bag_of(state.active).is_empty() {
            return Ok(true);
        }
        self.budget.tick()?;
        let key = self.memo.then(|| PositionKey::of(state));
        if let Some(k) = &key {
            if self.failed.contains(k) {
                return Ok(false);
            }
        }
        // Passing leaves board, bag and rack unchanged, so only placements
        // can make progress.
        for p in self.engine.legal_placements(&state.board, rack) {
            let next = self
                .engine
                .check_placement(state, &p)
                .expect("generated placement is legal")
                .next;
            self.path.push(Move::Place(p));
            if self.dfs(&next)? {
                return Ok(true);
            }
            self.path.pop();
        }
        if let Some(k) = key {
            self.failed.insert(k);
        }
        Ok(false)
    }
}

const INF: i64 = 1 << 40;

#[derive(Clone, Copy)]
enum Bound {
    Exact,
    Lower,
    Upper,
}

/// Alpha-beta minimax on future score margin with a transposition table.
/// Values are the margin still to be gained from a position, so entries do
/// not depend on the scores accumulated so far.
struct GameSearch<'e> {
    engine: &'e Engine,
    budget: Budget,
    table: SharedTable,
    memo: bool,
}

/// Every stored entry is a valid bound whichever search wrote it, so root
/// threads may share one table; only node counts depend on the interleaving.
type SharedTable = Arc<Mutex<HashMap<PositionKey, (i64, Bound), FxBuild>>>;

impl<'e> GameSearch<'e> {
    fn new(engine: &'e Engine, limits: SolveLimits, memo: bool) -> Self {
        Self::with_table(engine, limits, memo, SharedTable::default())
    }

    fn with_table(engine: &'e Engine, limits: SolveLimits, memo: bool, table: SharedTable) -> Self {
        GameSearch {
            engine,
            budget: Budget::new(limits),
            table,
            memo,
        }
    }

    fn value(&mut self, state: &GameState) -> Result<i64, SolveError> {
        self.search(state, -INF, INF)
    }

    fn search(&mut self, state: &GameState, alpha: i64, beta: i64) -> Result<i64, SolveError> {
        if is_finished(state) {
            return Ok(0);
        }
        self.budget.tick()?;
        let key = self.memo.then(|| PositionKey::of(state));
        let (mut lo, mut hi) = (alpha, beta);
        if let Some(k) = &key {
            let hit = self.table.lock().expect("table lock").get(k).copied();
            if let Some((v, bound)) = hit {
                match bound {
                    Bound::Exact => return Ok(v),
                    Bound::Lower => lo = lo.max(v),
                    Bound::Upper => hi = hi.min(v),
                }
                if lo >= hi {
                    return Ok(v);
                }
            }
        }
        let (a0, b0) = (lo, hi);
        let maximizing = state.active == Player::P1;
        let mut best = if maximizing { -INF } else { INF };
        for mv in self.engine.legal_moves(state) {
            let out = self
                .engine
                .apply_move(state, &mv)
                .expect("generated move is legal");
            let d = signed(state.active, out.score_delta);
            let v = d + self.search(&out.next, lo - d, hi - d)?;
            if maximizing {
                best = best.max(v);
                lo = lo.max(best);
            } else {
                best = best.min(v);
                hi = hi.min(best);
            }
            if lo >= hi {
                break;
            }
        }
        if let Some(k) = key {
            let bound = if best <= a0 {
                Bound::Upper
            } else if best >= b0 {
                Bound::Lower
            } else {
                Bound::Exact
            };
            self.table
                .lock()
                .expect("table lock")
                .insert(k, (best, bound));
        }
        Ok(best)
    }

    /// First move (canonical order) achieving the exact value at each step.
    fn principal_variation(&mut self, mut state: GameState) -> Result<Vec<Move>, SolveError> {
        let mut pv = Vec::new();
        while !is_finished(&state) {
            let target = self.value(&state)?;
            let mut chosen = None;
            for mv in self.engine.legal_moves(&state) {
                let out = self.engine.apply_move(&state, &mv).expect("legal");
                let d = signed(state.active, out.score_delta);
                if d + self.value(&out.next)? == target {
                    chosen = Some((mv, out.next));
                    break;
                }
            }
            let (mv, next) = chosen.expect("some move attains the minimax value");
            pv.push(mv);
            state = next;
        }
        Ok(pv)
    }
}

fn signed(player: Player, delta: u64) -> i64 {
    match player {
        Player::P1 => delta as i64,
        Player::P2 => -(delta as i64),
    }
}

/// Full minimax of the final margin: P1 maximizes, P2 minimizes.
pub fn solve_game(inst: &Instance, limits: SolveLimits) -> Result<GameResult, SolveError> {
    solve_game_with(inst, limits, SolveOptions::default())
}

pub fn solve_game_with(
    inst: &Instance,
    limits: SolveLimits,
    opts: SolveOptions,
) -> Result<GameResult, SolveError> {
    if inst.variant.mode != Mode::TwoPlayer {
        return Err(SolveError::NotTwoPlayer);
    }
    if inst.variant.exchanges_allowed {
        return Err(SolveError::ExchangesEnabled);
    }
    let engine = Engine::new(inst.dictionary.clone());
    let root = inst.initial_state();
    let (future, pv, nodes) = if opts.parallel_root && !is_finished(&root) {
        solve_root_parallel(&engine, &root, limits, opts.memo)?
    } else {
        let mut search = GameSearch::new(&engine, limits, opts.memo);
        let future = search.value(&root)?;
        let pv = search.principal_variation(root.clone())?;
        (future, pv, search.budget.nodes)
    };
    let margin = root.margin() + future;
    Ok(GameResult {
        winner: Outcome::from_margin(margin),
        margin,
        principal_variation: pv,
        nodes,
    })
}

/// Each root move is valued exactly on its own thread, all threads sharing
/// one table; the first best move in canonical order wins, as in the
/// sequential search.
fn solve_root_parallel(
    engine: &Engine,
    root: &GameState,
    limits: SolveLimits,
    memo: bool,
) -> Result<(i64, Vec<Move>, u64), SolveError> {
    let moves = engine.legal_moves(root);
    let table = SharedTable::default();
    let valued: Vec<Result<(i64, u64), SolveError>> = moves
        .par_iter()
        .map(|mv| {
            let out = engine.apply_move(root, mv).expect("legal");
            let mut search = GameSearch::with_table(engine, limits, memo, table.clone());
            let v = signed(root.active, out.score_delta) + search.value(&out.next)?;
            Ok((v, search.budget.nodes))
        })
        .collect();
    let valued = valued.into_iter().collect::<Result<Vec<_>, _>>()?;
    let maximizing = root.active == Player::P1;
    let mut best_idx = 0;
    for (i, (v, _)) in valued.iter().enumerate() {
        let better = if maximizing {
            *v > valued[best_idx].0
        } else {
            *v < valued[best_idx].0
        };
        if better {
            best_idx = i;
        }
    }
    let best = valued[best_idx].0;
    let mut nodes: u64 = valued.iter().map(|(_, n)| n).sum();
    let first = engine.apply_move(root, &moves[best_idx]).expect("legal");
    let mut search = GameSearch::with_table(engine, limits, memo, table);
    let mut pv = vec![moves[best_idx].clone()];
    pv.extend(search.principal_variation(first.next)?);
    nodes += search.budget.nodes;
    Ok((best, pv, nodes))
}

/// Replays `moves` from the instance's initial state, returning the final
/// state, or the index and error of the first illegal move.
pub fn replay(
    inst: &Instance,
    moves: &[Move],
) -> Result<GameState, (usize, crate::rules::MoveError)> {
    let engine = Engine::new(inst.dictionary.clone());
    let mut state = inst.initial_state();
    for (i, mv) in moves.iter().enumerate() {
        state = engine.apply_move(&state, mv).map_err(|e| (i, e))?.next;
    }
    Ok(state)
}
