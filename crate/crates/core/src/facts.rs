//! Mechanical check of the reduction's structural claims along intended play.
//!
//! At every visited state the harness compares the engine's legal placements
//! with what the construction predicts:
//!
//! * every placement uses the whole rack plus exactly two board tiles;
//! * a variable block has exactly its two assignment words;
//! * a clause block has exactly the words of its literals that are true
//!   under the assignment played so far;
//! * a lone `@` can only make a single two-letter word;
//! * every maximal run is of length 2 or at least `2r + 2`.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Board, Cell, GameState, Move, Orientation, Placement, Symbol};
use crate::reduction::{classify_rack, RackKind, Reduction};
use crate::rules::{is_finished, Engine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    WholeRack,
    ValueChoices,
    ClauseChoices,
    Finale,
    RunLength,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::WholeRack => "whole-rack",
            Check::ValueChoices => "value-choices",
            Check::ClauseChoices => "clause-choices",
            Check::Finale => "finale",
            Check::RunLength => "run-length",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: Check,
    /// Moves from the initial state to the offending state.
    pub path: Vec<Move>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} after {} moves: {}",
            self.check,
            self.path.len(),
            self.detail
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactsReport {
    pub states_checked: usize,
    pub value_states: usize,
    pub clause_states: usize,
    pub finale_states: usize,
    /// The budget ran out before every branch was walked.
    pub truncated: bool,
    pub violations: Vec<Violation>,
}

impl FactsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn passed_check(&self, check: Check) -> bool {
        self.violations.iter().all(|v| v.check != check)
    }

    /// One line per check, `name=pass|fail`.
    pub fn summary(&self) -> String {
        let checks = [
            Check::WholeRack,
            Check::ValueChoices,
            Check::ClauseChoices,
            Check::Finale,
            Check::RunLength,
        ];
        let mut out = format!(
            "states={} value={} clause={} finale={} truncated={}",
            self.states_checked,
            self.value_states,
            self.clause_states,
            self.finale_states,
            self.truncated as u8
        );
        for c in checks {
            let verdict = if self.passed_check(c) { "pass" } else { "fail" };
            out.push_str(&format!(" {c}={verdict}"));
        }
        out
    }
}

/// Maximal run through `cell` along `dir` on a board that already holds it.
fn run_len(board: &Board, cell: Cell, dir: Orientation) -> (usize, Cell) {
    let mut start = cell;
    while board.is_occupied(start.step(dir, -1)) {
        start = start.step(dir, -1);
    }
    let mut len = 0;
    while board.is_occupied(start.step(dir, len as i32)) {
        len += 1;
    }
    (len, start)
}

fn with_placement(board: &Board, p: &Placement) -> Board {
    let mut b = board.clone();
    for &(c, s) in &p.tiles {
        b.set(c, s);
    }
    b
}

struct Walker<'a> {
    red: &'a Reduction,
    engine: Engine,
    budget: usize,
    report: FactsReport,
    path: Vec<Move>,
}

impl Walker<'_> {
    fn fail(&mut self, check: Check, detail: String) {
        self.report.violations.push(Violation {
            check,
            path: self.path.clone(),
            detail,
        });
    }

    fn check_runs(&mut self, board: &Board) {
        let min_long = 2 * self.red.params.r + 2;
        for (start, dir, letters) in board.runs() {
            let n = letters.len();
            if n != 2 && n < min_long {
                self.fail(
                    Check::RunLength,
                    format!("run of length {n} at {start} ({dir:?})"),
                );
            }
        }
    }

    fn check_whole_rack(&mut self, state: &GameState, placements: &BTreeSet<Placement>) {
        let rack = state.active_rack();
        let mut want = rack.letters().to_vec();
        want.sort();
        for p in placements {
            let mut got = p.symbols();
            got.sort();
            let board = with_placement(&state.board, p);
            let (len, _) = run_len(&board, p.tiles[0].0, p.orientation);
            if got != want || len != p.tiles.len() + 2 {
                self.fail(
                    Check::WholeRack,
                    format!(
                        "{} uses {} of {} rack tiles and {} board tiles",
                        Move::Place(p.clone()),
                        got.len(),
                        want.len(),
                        len as i64 - p.tiles.len() as i64
                    ),
                );
            }
        }
    }

    fn compare(&mut self, check: Check, got: &BTreeSet<Placement>, want: &BTreeSet<Placement>) {
        for p in got.difference(want) {
            self.fail(check, format!("unexpected {}", Move::Place(p.clone())));
        }
        for p in want.difference(got) {
            self.fail(check, format!("missing {}", Move::Place(p.clone())));
        }
    }

    /// Visits `state` under the partial assignment `assigned` (bit set =
    /// true, only meaningful for vars already played).
    fn visit(&mut self, state: &GameState, assigned: u64) {
        if is_finished(state) {
            return;
        }
        if self.report.states_checked >= self.budget {
            self.report.truncated = true;
            return;
        }
        self.report.states_checked += 1;
        self.check_runs(&state.board);

        let rack = state.active_rack();
        let placements = self.engine.legal_placements(&state.board, rack);
        let kind = classify_rack(rack);
        if !matches!(kind, Some(RackKind::Finale) | Some(RackKind::Empty)) {
            self.check_whole_rack(state, &placements);
        }
        match kind {
            Some(RackKind::Value(var)) => {
                self.report.value_states += 1;
                let g = self.red.gadget(var);
                let want: BTreeSet<_> =
                    [g.assignment_placement(false), g.assignment_placement(true)]
                        .into_iter()
                        .collect();
                self.compare(Check::ValueChoices, &placements, &want);
                for value in [false, true] {
                    let bit = if value { 1u64 << (var - 1) } else { 0 };
                    self.descend(
                        state,
                        Move::Place(g.assignment_placement(value)),
                        assigned | bit,
                    );
                }
            }
            Some(RackKind::Clause(clause)) => {
                self.report.clause_states += 1;
                let want = self.red.expected_clause_moves(clause, assigned);
                self.compare(Check::ClauseChoices, &placements, &want);
                if want.is_empty() {
                    if self.red.two_player {
                        self.descend(state, Move::Pass, assigned);
                    }
                    return;
                }
                // One representative per chosen literal; the order of the
                // trailing two letters does not change what follows.
                let mut seen = BTreeSet::new();
                for p in want {
                    let cell = p.tiles[0].0;
                    if seen.insert(cell.col + 1000 * cell.row) {
                        self.descend(state, Move::Place(p), assigned);
                    }
                }
            }
            Some(RackKind::Finale) => {
                self.report.finale_states += 1;
                if placements.is_empty() {
                    self.fail(Check::Finale, "no legal spot for the final @".into());
                }
                for p in &placements {
                    let ok = p.tiles.len() == 1
                        && p.tiles[0].1 == Symbol::At
                        && self
                            .engine
                            .check_placement(state, p)
                            .map(|o| o.words.len() == 1 && o.score_delta == 2)
                            .unwrap_or(false);
                    if !ok {
                        self.fail(
                            Check::Finale,
                            format!("{} is not a lone two-letter word", Move::Place(p.clone())),
                        );
                    }
                }
                if let Some(p) = placements.into_iter().next() {
                    self.descend(state, Move::Place(p), assigned);
                }
            }
            Some(RackKind::Empty) => {
                if !placements.is_empty() {
                    self.fail(Check::WholeRack, "placement from an empty rack".into());
                }
                if self.red.two_player {
                    self.descend(state, Move::Pass, assigned);
                }
            }
            None => self.fail(Check::WholeRack, "rack holds no recognizable block".into()),
        }
    }

    fn descend(&mut self, state: &GameState, mv: Move, assigned: u64) {
        match self.engine.apply_move(state, &mv) {
            Ok(out) => {
                self.path.push(mv);
                self.visit(&out.next, assigned);
                self.path.pop();
            }
            Err(e) => {
                let detail = format!("scripted {mv} rejected: {e}");
                self.fail(Check::WholeRack, detail);
            }
        }
    }
}

/// Walks all assignments and clause choices depth first, checking at most
/// `budget` states.
pub fn verify_facts(red: &Reduction, budget: usize) -> FactsReport {
    let mut w = Walker {
        red,
        engine: red.engine(),
        budget,
        report: FactsReport::default(),
        path: Vec::new(),
    };
    let start = red.instance.initial_state();
    w.check_runs(&start.board);
    w.visit(&start, 0);
    w.report
}

/// Regression fixture: the reduction with the fourth wall tile of the first
/// gadget removed.
pub fn corrupt_wall(red: &Reduction) -> Reduction {
    let mut bad = red.clone();
    if let Some(g) = red.gadgets.first() {
        let cell = g.wall_start().step(Orientation::Horizontal, 3);
        bad.instance.board.remove(cell);
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_dimacs, Qbf};
    use crate::reduction::{compile_qbf, compile_sat};

    #[test]
    fn single_clause_passes() {
        let red = compile_sat(&parse_dimacs("p cnf 1 1\n1 1 1 0\n").unwrap());
        let rep = verify_facts(&red, 10_000);
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(rep.value_states, 1);
        assert!(!rep.truncated);
    }

    #[test]
    fn corrupted_wall_fails() {
        let red = compile_sat(&parse_dimacs("p cnf 1 1\n1 1 1 0\n").unwrap());
        let rep = verify_facts(&corrupt_wall(&red), 10_000);
        assert!(!rep.passed());
        assert!(!rep.passed_check(Check::RunLength));
    }

    #[test]
    fn qbf_passes() {
        let q = Qbf::new(parse_dimacs("p cnf 2 1\n1 -2 2 0\n").unwrap());
        let rep = verify_facts(&compile_qbf(&q), 10_000);
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(rep.finale_states > 0);
    }
}
