//! Compiles 3-CNF formulas into solitaire instances and 3-CNF-QBFs into
//! two-player instances.
//!
//! Each variable owns a horizontal band of the board. Local coordinates of a
//! band with `p` positive and `q` negative occurrences:
//!
//! ```text
//! row 0      wall        # x (4r+3)
//! row 2      @ above every occurrence cell
//! row 3      literal row # (# t)^p # (t #)^q #, right-padded with #
//! row 5      assignment  @ x .......... x @      separator column
//! ```
//!
//! The left anchor `@ x` ends at column `2p-2r`, the right anchor `x @`
//! starts at column `2p+2r+2`, so an assignment word covers exactly one half
//! of the occurrence columns. Clause words hang down from an `@` through the
//! occurrence cell. Lone `#` tiles sit diagonally beside each anchor `@`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{duplicate_clauses, Clause, Cnf, Literal, Qbf};
use crate::model::{
    Bag, Board, Cell, Dictionary, GameState, Instance, Move, Orientation, Placement, Player, Rack,
    Symbol, VariantConfig, Word,
};
use crate::rules::{is_finished, Engine, MoveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    pub n: u32,
    pub m: usize,
    /// Occurrence bound, floored at 2.
    pub r: usize,
    /// Rack size, `2r`.
    pub k: usize,
}

/// Distinct clause indices (1-based) holding `lit`.
fn occurrences(f: &Cnf, lit: Literal) -> Vec<u32> {
    f.clauses
        .iter()
        .enumerate()
        .filter(|(_, c)| c.contains(&lit))
        .map(|(j, _)| j as u32 + 1)
        .collect()
}

pub fn reduction_params(f: &Cnf) -> ReductionParams {
    let mut r = 2;
    for var in 1..=f.n_vars {
        for lit in [Literal::pos(var), Literal::neg(var)] {
            r = r.max(occurrences(f, lit).len());
        }
    }
    ReductionParams {
        n: f.n_vars,
        m: f.clauses.len(),
        r,
        k: 2 * r,
    }
}

pub fn occurrence_symbol(clause: u32, lit: Literal) -> Symbol {
    Symbol::Occ {
        var: lit.var,
        clause,
        negated: lit.negated,
    }
}

/// Geometry of one variable's band in absolute coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetSpec {
    pub var: u32,
    pub pos_occurrences: Vec<u32>,
    pub neg_occurrences: Vec<u32>,
    pub r: usize,
    /// Row offset of the band.
    pub top: i32,
}

impl GadgetSpec {
    fn p(&self) -> i32 {
        self.pos_occurrences.len() as i32
    }

    fn q(&self) -> i32 {
        self.neg_occurrences.len() as i32
    }

    fn ri(&self) -> i32 {
        self.r as i32
    }

    fn at(&self, row: i32, col: i32) -> Cell {
        Cell::new(self.top + row, col)
    }

    pub fn literal_row(&self) -> i32 {
        self.top + 3
    }

    pub fn assignment_row(&self) -> i32 {
        self.top + 5
    }

    pub fn wall_start(&self) -> Cell {
        self.at(0, 0)
    }

    pub fn wall_len(&self) -> usize {
        4 * self.r + 3
    }

    pub fn literal_row_len(&self) -> usize {
        let natural = 2 * (self.p() + self.q()) as usize + 3;
        natural.max(2 * self.r + 2)
    }

    /// The `@` of the left anchor `@ x`.
    pub fn left_anchor(&self) -> Cell {
        self.at(5, 2 * self.p() - 2 * self.ri() - 1)
    }

    /// The `x` of the right anchor `x @`.
    pub fn right_anchor(&self) -> Cell {
        self.at(5, 2 * self.p() + 2 * self.ri() + 2)
    }

    pub fn separator_col(&self) -> i32 {
        4 * self.ri() + 7
    }

    /// Top cell of the vertical separator `#^r x #^(r+1)`.
    pub fn separator_start(&self) -> Cell {
        self.at(5 - self.ri(), self.separator_col())
    }

    pub fn blockers(&self) -> [Cell; 4] {
        let l = self.left_anchor();
        let r = self.right_anchor().step(Orientation::Horizontal, 2);
        [
            Cell::new(l.row - 1, l.col - 1),
            Cell::new(l.row + 1, l.col - 1),
            Cell::new(r.row - 1, r.col),
            Cell::new(r.row + 1, r.col),
        ]
    }

    /// Occurrence cell (on the literal row) for a clause and polarity.
    pub fn occurrence_cell(&self, clause: u32, negated: bool) -> Option<Cell> {
        let col = if negated {
            let v = self.neg_occurrences.iter().position(|&c| c == clause)? as i32;
            2 * self.p() + 2 * (v + 1)
        } else {
            let u = self.pos_occurrences.iter().position(|&c| c == clause)? as i32;
            2 * (u + 1)
        };
        Some(self.at(3, col))
    }

    fn occurrences(&self) -> impl Iterator<Item = (Literal, u32)> + '_ {
        let pos = self
            .pos_occurrences
            .iter()
            .map(move |&c| (Literal::pos(self.var), c));
        let neg = self
            .neg_occurrences
            .iter()
            .map(move |&c| (Literal::neg(self.var), c));
        pos.chain(neg)
    }

    /// Every initial word of the band with its start cell and orientation.
    pub fn dummy_words(&self) -> Vec<(Cell, Orientation, Vec<Symbol>)> {
        use Orientation::*;
        let x = Symbol::Var(self.var);
        let mut out = vec![(
            self.wall_start(),
            Horizontal,
            vec![Symbol::Hash; self.wall_len()],
        )];

        let mut lit_row = vec![Symbol::Hash; self.literal_row_len()];
        for (lit, clause) in self.occurrences() {
            let cell = self
                .occurrence_cell(clause, lit.negated)
                .expect("own occurrence");
            lit_row[cell.col as usize] = occurrence_symbol(clause, lit);
            out.push((
                Cell::new(cell.row - 1, cell.col),
                Vertical,
                vec![Symbol::At, occurrence_symbol(clause, lit)],
            ));
        }
        out.push((self.at(3, 0), Horizontal, lit_row));

        out.push((self.left_anchor(), Horizontal, vec![Symbol::At, x]));
        out.push((self.right_anchor(), Horizontal, vec![x, Symbol::At]));

        let mut sep = vec![Symbol::Hash; 2 * self.r + 2];
        sep[self.r] = x;
        out.push((self.separator_start(), Vertical, sep));
        out
    }

    /// All cells the band occupies initially.
    pub fn cells(&self) -> Vec<(Cell, Symbol)> {
        let mut out = Vec::new();
        for (start, dir, letters) in self.dummy_words() {
            for (i, s) in letters.into_iter().enumerate() {
                out.push((start.step(dir, i as i32), s));
            }
        }
        out.extend(self.blockers().into_iter().map(|c| (c, Symbol::Hash)));
        out.sort();
        out.dedup();
        out
    }

    /// Row extent of the band including the area clause words may reach.
    fn row_extent(&self) -> (i32, i32) {
        let r = self.ri();
        (self.top + (5 - r).min(0), self.top + (3 + 2 * r).max(6 + r))
    }

    /// The assignment word: `true` covers the negative half via the right
    /// anchor, `false` covers the positive half via the left anchor.
    pub fn assignment_placement(&self, value: bool) -> Placement {
        let x = Symbol::Var(self.var);
        let dollars = 2 * self.ri() - 1;
        let tiles = if value {
            let x_col = self.right_anchor().col - 1;
            let mut t: Vec<_> = (1..=dollars)
                .map(|d| (Cell::new(self.assignment_row(), x_col - d), Symbol::Dollar))
                .collect();
            t.push((Cell::new(self.assignment_row(), x_col), x));
            t
        } else {
            let x_col = self.left_anchor().col + 2;
            let mut t = vec![(Cell::new(self.assignment_row(), x_col), x)];
            t.extend(
                (1..=dollars)
                    .map(|d| (Cell::new(self.assignment_row(), x_col + d), Symbol::Dollar)),
            );
            t
        };
        Placement::new(Orientation::Horizontal, tiles)
    }
}

/// Placement of `@ t_a t_a t_b t_c *^(2r-3)` hanging from the occurrence cell.
pub fn clause_placement(cell: Cell, lead: Symbol, rest: [Symbol; 2], r: usize) -> Placement {
    let mut letters = vec![lead, rest[0], rest[1]];
    letters.extend(std::iter::repeat_n(Symbol::Star, 2 * r - 3));
    let tiles = letters
        .into_iter()
        .enumerate()
        .map(|(i, s)| (cell.step(Orientation::Vertical, i as i32 + 1), s))
        .collect();
    Placement::new(Orientation::Vertical, tiles)
}

pub fn build_gadgets(f: &Cnf, p: &ReductionParams) -> Vec<GadgetSpec> {
    let mut gadgets = Vec::new();
    let mut next_free_row = 0;
    for var in 1..=f.n_vars {
        let mut g = GadgetSpec {
            var,
            pos_occurrences: occurrences(f, Literal::pos(var)),
            neg_occurrences: occurrences(f, Literal::neg(var)),
            r: p.r,
            top: 0,
        };
        let (lo, _) = g.row_extent();
        g.top = next_free_row - lo;
        let (_, hi) = g.row_extent();
        next_free_row = hi + 3;
        gadgets.push(g);
    }
    gadgets
}

pub fn build_board(f: &Cnf, p: &ReductionParams) -> (Board, Vec<GadgetSpec>) {
    let gadgets = build_gadgets(f, p);
    let mut board = Board::new();
    for g in &gadgets {
        for (cell, sym) in g.cells() {
            let prev = board.set(cell, sym);
            assert!(prev.is_none(), "gadget layout overlap at {cell}");
        }
    }
    (board, gadgets)
}

fn stars(r: usize) -> impl Iterator<Item = Symbol> {
    std::iter::repeat_n(Symbol::Star, 2 * r - 3)
}

pub fn assignment_words(var: u32, r: usize) -> [Word; 2] {
    let x = Symbol::Var(var);
    let mut left = vec![Symbol::At, x, x];
    left.extend(std::iter::repeat_n(Symbol::Dollar, 2 * r - 1));
    let mut right: Vec<Symbol> = std::iter::repeat_n(Symbol::Dollar, 2 * r - 1).collect();
    right.extend([x, x, Symbol::At]);
    [
        Word::new(left).expect("long word"),
        Word::new(right).expect("long word"),
    ]
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn clause_symbols(clause_idx: u32, clause: &Clause) -> [Symbol; 3] {
    clause.map(|l| occurrence_symbol(clause_idx, l))
}

pub fn clause_words(clause_idx: u32, clause: &Clause, r: usize) -> BTreeSet<Word> {
    let t = clause_symbols(clause_idx, clause);
    PERMUTATIONS
        .iter()
        .map(|&[a, b, c]| {
            let mut w = vec![Symbol::At, t[a], t[a], t[b], t[c]];
            w.extend(stars(r));
            Word::new(w).expect("long word")
        })
        .collect()
}

/// Assignment words, clause words, and every initial run of the board.
pub fn build_dictionary(f: &Cnf, p: &ReductionParams) -> Dictionary {
    let (board, _) = build_board(f, p);
    let mut dict = Dictionary::new();
    for var in 1..=f.n_vars {
        for w in assignment_words(var, p.r) {
            dict.insert(w).expect("long word");
        }
    }
    for (j, c) in f.clauses.iter().enumerate() {
        for w in clause_words(j as u32 + 1, c, p.r) {
            dict.insert(w).expect("long word");
        }
    }
    for (_, _, letters) in board.runs() {
        dict.insert(Word::new(letters).expect("run")).expect("run");
    }
    dict
}

/// Full tile sequence: variable blocks `x_i $^(2r-1)` then clause blocks
/// `t_a t_b t_c *^(2r-3)`.
pub fn tile_sequence(f: &Cnf, p: &ReductionParams) -> Vec<Symbol> {
    let mut seq = Vec::with_capacity(p.k * (p.n as usize + p.m));
    for var in 1..=f.n_vars {
        seq.push(Symbol::Var(var));
        seq.extend(std::iter::repeat_n(Symbol::Dollar, 2 * p.r - 1));
    }
    for (j, c) in f.clauses.iter().enumerate() {
        seq.extend(clause_symbols(j as u32 + 1, c));
        seq.extend(stars(p.r));
    }
    seq
}

/// `(bag, rack)`: the rack is the first block.
pub fn build_bag(f: &Cnf, p: &ReductionParams) -> (Bag, Rack) {
    let mut seq = tile_sequence(f, p);
    let rest = seq.split_off(p.k.min(seq.len()));
    (Bag::new(rest), Rack::new(seq, p.k).expect("block fits"))
}

/// An instance together with the construction data needed to script and
/// check intended play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub instance: Instance,
    /// The formula the board encodes (padded and duplicated for QBF).
    pub formula: Cnf,
    pub params: ReductionParams,
    pub gadgets: Vec<GadgetSpec>,
    pub two_player: bool,
}

pub fn compile_sat(f: &Cnf) -> Reduction {
    let params = reduction_params(f);
    let (board, gadgets) = build_board(f, &params);
    let (bag, rack) = build_bag(f, &params);
    let instance = Instance {
        dictionary: build_dictionary(f, &params),
        k: params.k,
        board,
        bag,
        bag2: Bag::default(),
        racks: [rack, Rack::empty(params.k)],
        scores: [0, 0],
        variant: VariantConfig::SOLITAIRE,
        active: Player::P1,
        pass_streak: 0,
    };
    Reduction {
        instance,
        formula: f.clone(),
        params,
        gadgets,
        two_player: false,
    }
}

pub fn reduce_sat(f: &Cnf) -> Instance {
    compile_sat(f).instance
}

/// Pads to an even variable count with the tautology
/// `(x_{n+1} ∨ ¬x_{n+1} ∨ x_{n+1})`, then duplicates every clause.
pub fn qbf_matrix(q: &Qbf) -> Cnf {
    let mut f = q.matrix.clone();
    if f.n_vars % 2 == 1 {
        f.n_vars += 1;
        let x = f.n_vars;
        f.clauses
            .push([Literal::pos(x), Literal::neg(x), Literal::pos(x)]);
    }
    duplicate_clauses(&f)
}

pub fn compile_qbf(q: &Qbf) -> Reduction {
    let f = qbf_matrix(q);
    let params = reduction_params(&f);
    let (board, gadgets) = build_board(&f, &params);
    let mut seq = tile_sequence(&f, &params);
    seq.push(Symbol::At);
    let k = params.k;
    let mut rest = seq.split_off(k.min(seq.len()));
    let rack1 = Rack::new(seq, k).expect("block fits");
    let bag = rest.split_off(k.min(rest.len()));
    let rack2 = Rack::new(rest, k).expect("block fits");
    let instance = Instance {
        dictionary: build_dictionary(&f, &params),
        k,
        board,
        bag: Bag::new(bag),
        bag2: Bag::default(),
        racks: [rack1, rack2],
        scores: [0, 1],
        variant: VariantConfig::TWO_PLAYER_NO_EXCHANGE,
        active: Player::P1,
        pass_streak: 0,
    };
    Reduction {
        instance,
        formula: f,
        params,
        gadgets,
        two_player: true,
    }
}

pub fn reduce_qbf(q: &Qbf) -> Instance {
    compile_qbf(q).instance
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Value { var: u32 },
    Clause { clause: u32 },
    Finale,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Value { var } => write!(f, "value phase, variable x{var}"),
            Phase::Clause { clause } => write!(f, "test phase, clause {clause}"),
            Phase::Finale => f.write_str("finale"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlayoutError {
    #[error("{phase}: scripted move is illegal: {source}")]
    Illegal { phase: Phase, source: MoveError },
    #[error("{phase}: chosen literal {literal} is not in the clause")]
    BadChoice { phase: Phase, literal: Literal },
    #[error("clause choice list has {got} entries for {want} clauses")]
    ChoiceCount { got: usize, want: usize },
    #[error("{phase}: rack does not hold the expected block")]
    UnexpectedRack { phase: Phase },
}

/// What the active rack holds, as far as scripted play is concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RackKind {
    Value(u32),
    Clause(u32),
    Finale,
    Empty,
}

pub fn classify_rack(rack: &Rack) -> Option<RackKind> {
    let letters = rack.letters();
    if letters.is_empty() {
        return Some(RackKind::Empty);
    }
    if letters == [Symbol::At] {
        return Some(RackKind::Finale);
    }
    letters.iter().find_map(|s| match *s {
        Symbol::Var(v) => Some(RackKind::Value(v)),
        Symbol::Occ { clause, .. } => Some(RackKind::Clause(clause)),
        _ => None,
    })
}

impl Reduction {
    pub fn engine(&self) -> Engine {
        Engine::new(self.instance.dictionary.clone())
    }

    pub fn gadget(&self, var: u32) -> &GadgetSpec {
        &self.gadgets[var as usize - 1]
    }

    /// The clause-word placement that leads with `lit` in its own gadget.
    /// `None` if `lit` is not a slot of the clause.
    pub fn clause_move(&self, clause: u32, lit: Literal) -> Option<Placement> {
        let c = self.formula.clauses.get(clause as usize - 1)?;
        let slot = c.iter().position(|&l| l == lit)?;
        let mut rest = c
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != slot)
            .map(|(_, &l)| l);
        let rest = [
            occurrence_symbol(clause, rest.next()?),
            occurrence_symbol(clause, rest.next()?),
        ];
        let cell = self.gadget(lit.var).occurrence_cell(clause, lit.negated)?;
        Some(clause_placement(
            cell,
            occurrence_symbol(clause, lit),
            rest,
            self.params.r,
        ))
    }

    /// All clause-word placements a satisfying literal enables: each
    /// distinct true slot in its gadget, with both orders of the other two.
    pub fn expected_clause_moves(&self, clause: u32, assignment: u64) -> BTreeSet<Placement> {
        let c = &self.formula.clauses[clause as usize - 1];
        let t = clause_symbols(clause, c);
        let mut out = BTreeSet::new();
        for &[a, b, d] in &PERMUTATIONS {
            let lit = c[a];
            if !lit.eval(assignment) {
                continue;
            }
            let cell = self
                .gadget(lit.var)
                .occurrence_cell(clause, lit.negated)
                .expect("occurrence exists");
            out.insert(clause_placement(cell, t[a], [t[b], t[d]], self.params.r));
        }
        out
    }

    /// Scripted solitaire play: every variable in order, then every clause
    /// with the chosen literal. Fails at the first illegal scripted move.
    pub fn intended_playout(
        &self,
        assignment: u64,
        clause_choice: &[Literal],
    ) -> Result<Vec<Move>, PlayoutError> {
        if clause_choice.len() != self.formula.clauses.len() {
            return Err(PlayoutError::ChoiceCount {
                got: clause_choice.len(),
                want: self.formula.clauses.len(),
            });
        }
        let engine = self.engine();
        let mut state = self.instance.initial_state();
        let mut moves = Vec::new();
        let mut play = |state: &mut GameState, phase: Phase, p: Placement| {
            let mv = Move::Place(p);
            let out = engine
                .apply_move(state, &mv)
                .map_err(|source| PlayoutError::Illegal { phase, source })?;
            *state = out.next;
            moves.push(mv);
            Ok::<_, PlayoutError>(())
        };
        for var in 1..=self.formula.n_vars {
            let value = assignment >> (var - 1) & 1 == 1;
            play(
                &mut state,
                Phase::Value { var },
                self.gadget(var).assignment_placement(value),
            )?;
        }
        for (j, &lit) in clause_choice.iter().enumerate() {
            let clause = j as u32 + 1;
            let phase = Phase::Clause { clause };
            let p = self
                .clause_move(clause, lit)
                .ok_or(PlayoutError::BadChoice {
                    phase,
                    literal: lit,
                })?;
            play(&mut state, phase, p)?;
        }
        Ok(moves)
    }

    /// Scripted two-player game under a fixed assignment: each player plays
    /// their variable block, then their clause block through its first true
    /// literal or passes when there is none, and the final `@` goes to the
    /// first legal spot. Returns the moves and the finished state.
    pub fn scripted_game(&self, assignment: u64) -> Result<(Vec<Move>, GameState), PlayoutError> {
        let engine = self.engine();
        let mut state = self.instance.initial_state();
        let mut moves = Vec::new();
        while !is_finished(&state) {
            let kind = classify_rack(state.active_rack());
            let (phase, mv) = match kind {
                Some(RackKind::Value(var)) => {
                    let value = assignment >> (var - 1) & 1 == 1;
                    (
                        Phase::Value { var },
                        Move::Place(self.gadget(var).assignment_placement(value)),
                    )
                }
                Some(RackKind::Clause(clause)) => {
                    let c = &self.formula.clauses[clause as usize - 1];
                    let phase = Phase::Clause { clause };
                    match c.iter().find(|l| l.eval(assignment)) {
                        Some(&lit) => (
                            phase,
                            Move::Place(self.clause_move(clause, lit).expect("own slot")),
                        ),
                        None => (phase, Move::Pass),
                    }
                }
                Some(RackKind::Finale) => {
                    let first = engine
                        .legal_placements(&state.board, state.active_rack())
                        .into_iter()
                        .next();
                    (Phase::Finale, first.map_or(Move::Pass, Move::Place))
                }
                Some(RackKind::Empty) => (Phase::Finale, Move::Pass),
                None => {
                    return Err(PlayoutError::UnexpectedRack {
                        phase: Phase::Finale,
                    })
                }
            };
            let out = engine
                .apply_move(&state, &mv)
                .map_err(|source| PlayoutError::Illegal { phase, source })?;
            state = out.next;
            moves.push(mv);
        }
        Ok((moves, state))
    }
}
