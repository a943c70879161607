//! Proper-play legality, move generation, scoring and state transitions.

use std::collections::BTreeSet;

use fnv::FnvHashMap;

use thiserror::Error;

use crate::model::{
    Board, Cell, Dictionary, GameState, Mode, Move, Orientation, Placement, Player, Rack, Symbol,
    Word, MAX_PASS_STREAK,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("placement sets no tiles")]
    EmptyPlacement,
    #[error("cell {0} is used twice in one placement")]
    DuplicateCell(Cell),
    #[error("cell {0} is already occupied")]
    OccupiedCell(Cell),
    #[error("placed tiles are not on the active rack")]
    TilesNotOnRack,
    #[error("placed tiles are not collinear along the stated orientation")]
    NotCollinear,
    #[error("main word has a gap at {0}")]
    GapInMainWord(Cell),
    #[error("placement does not touch any tile on the board")]
    Disconnected,
    #[error("placement forms no word of two or more letters")]
    NoWordFormed,
    #[error("`{0}` is not in the dictionary")]
    WordNotInDictionary(String),
    #[error("exchanges are not allowed in this variant")]
    ExchangeNotAllowed,
    #[error("exchange must name at least one tile")]
    EmptyExchange,
    #[error("the game is already finished")]
    GameFinished,
    #[error("the game is not finished yet")]
    NotFinished,
}

/// A maximal run of two or more letters containing at least one new tile.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FormedWord {
    pub word: Word,
    pub start: Cell,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub next: GameState,
    pub score_delta: u64,
    pub words: Vec<FormedWord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    P1Wins,
    P2Wins,
    Draw,
}

impl Outcome {
    pub fn from_margin(margin: i64) -> Outcome {
        match margin.signum() {
            1 => Outcome::P1Wins,
            -1 => Outcome::P2Wins,
            _ => Outcome::Draw,
        }
    }
}

fn lookup(board: &Board, placed: &[(Cell, Symbol)], cell: Cell) -> Option<Symbol> {
    placed
        .iter()
        .find(|(c, _)| *c == cell)
        .map(|(_, s)| *s)
        .or_else(|| board.get(cell))
}

fn check_cells(board: &Board, placed: &[(Cell, Symbol)]) -> Result<(), MoveError> {
    if placed.is_empty() {
        return Err(MoveError::EmptyPlacement);
    }
    for (i, (cell, _)) in placed.iter().enumerate() {
        if placed[..i].iter().any(|(c, _)| c == cell) {
            return Err(MoveError::DuplicateCell(*cell));
        }
        if board.is_occupied(*cell) {
            return Err(MoveError::OccupiedCell(*cell));
        }
    }
    Ok(())
}

/// Every maximal horizontal or vertical run of length >= 2 over
/// `board ∪ placed` that contains a placed cell. Horizontal runs come first,
/// each group ordered by start cell.
pub fn words_formed(
    board: &Board,
    placed: &[(Cell, Symbol)],
) -> Result<Vec<FormedWord>, MoveError> {
    check_cells(board, placed)?;
    let mut out = Vec::new();
    for dir in Orientation::BOTH {
        let mut starts = BTreeSet::new();
        for (cell, _) in placed {
            let mut start = *cell;
            while lookup(board, placed, start.step(dir, -1)).is_some() {
                start = start.step(dir, -1);
            }
            starts.insert(start);
        }
        for start in starts {
            let mut letters = Vec::new();
            let mut cur = start;
            while let Some(s) = lookup(board, placed, cur) {
                letters.push(s);
                cur = cur.step(dir, 1);
            }
            if letters.len() >= 2 {
                out.push(FormedWord {
                    word: Word::new(letters).expect("run is non-empty"),
                    start,
                    orientation: dir,
                });
            }
        }
    }
    Ok(out)
}

/// Checks a placement against a board and rack; on success returns the
/// formed words and their total length.
pub fn validate_placement(
    dict: &Dictionary,
    board: &Board,
    rack: &Rack,
    placement: &Placement,
) -> Result<(Vec<FormedWord>, u64), MoveError> {
    let placed = &placement.tiles;
    check_cells(board, placed)?;
    if !rack.contains_all(&placement.symbols()) {
        return Err(MoveError::TilesNotOnRack);
    }
    if placed.len() > 1 {
        let dir = placement.orientation;
        let first = placed[0].0;
        let collinear = placed.iter().all(|(c, _)| match dir {
            Orientation::Horizontal => c.row == first.row,
            Orientation::Vertical => c.col == first.col,
        });
        if !collinear {
            return Err(MoveError::NotCollinear);
        }
        // Tiles are sorted by cell, so first and last bound the span.
        let last = placed[placed.len() - 1].0;
        let span = match dir {
            Orientation::Horizontal => last.col - first.col,
            Orientation::Vertical => last.row - first.row,
        };
        for d in 1..span {
            let cell = first.step(dir, d);
            if lookup(board, placed, cell).is_none() {
                return Err(MoveError::GapInMainWord(cell));
            }
        }
    }
    let words = words_formed(board, placed)?;
    if words.is_empty() {
        return Err(MoveError::NoWordFormed);
    }
    if !board.is_empty()
        && !placed
            .iter()
            .any(|(c, _)| c.neighbors().iter().any(|n| board.is_occupied(*n)))
    {
        return Err(MoveError::Disconnected);
    }
    for fw in &words {
        if !dict.contains(fw.word.letters()) {
            return Err(MoveError::WordNotInDictionary(fw.word.to_string()));
        }
    }
    let score = words.iter().map(|w| w.word.len() as u64).sum();
    Ok((words, score))
}

pub fn is_finished(state: &GameState) -> bool {
    state.pass_streak >= MAX_PASS_STREAK
        || (state.bags.iter().all(|b| b.is_empty()) && state.racks.iter().all(|r| r.is_empty()))
}

pub fn outcome(state: &GameState) -> Result<Outcome, MoveError> {
    if !is_finished(state) {
        return Err(MoveError::NotFinished);
    }
    Ok(Outcome::from_margin(state.margin()))
}

struct IndexedWord {
    letters: Vec<Symbol>,
    counts: Vec<(Symbol, usize)>,
    positions: FnvHashMap<Symbol, Vec<i32>>,
}

/// Rules of one game: the dictionary plus an index used by move generation.
pub struct Engine {
    dict: Dictionary,
    words: Vec<IndexedWord>,
}

fn counts_of(letters: &[Symbol]) -> Vec<(Symbol, usize)> {
    let mut counts: Vec<(Symbol, usize)> = Vec::new();
    for s in letters {
        match counts.iter_mut().find(|(t, _)| t == s) {
            Some(entry) => entry.1 += 1,
            None => counts.push((*s, 1)),
        }
    }
    counts
}

fn count_in(counts: &[(Symbol, usize)], sym: Symbol) -> usize {
    counts
        .iter()
        .find(|(s, _)| *s == sym)
        .map_or(0, |(_, c)| *c)
}

impl Engine {
    pub fn new(dict: Dictionary) -> Self {
        let words = dict
            .iter()
            .map(|w| {
                let letters = w.letters().to_vec();
                let mut positions: FnvHashMap<Symbol, Vec<i32>> = FnvHashMap::default();
                for (i, s) in letters.iter().enumerate() {
                    positions.entry(*s).or_default().push(i as i32);
                }
                IndexedWord {
                    counts: counts_of(&letters),
                    letters,
                    positions,
                }
            })
            .collect();
        Engine { dict, words }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    /// Legality check of a placement for the active player; returns the
    /// resulting transition.
    pub fn check_placement(
        &self,
        state: &GameState,
        placement: &Placement,
    ) -> Result<MoveOutcome, MoveError> {
        if is_finished(state) {
            return Err(MoveError::GameFinished);
        }
        let (words, score) =
            validate_placement(&self.dict, &state.board, state.active_rack(), placement)?;
        let mut next = state.clone();
        let who = state.active;
        next.racks[who.index()]
            .take(&placement.symbols())
            .ok_or(MoveError::TilesNotOnRack)?;
        for (cell, sym) in &placement.tiles {
            next.board.set(*cell, *sym);
        }
        next.scores[who.index()] += score;
        let bag = state.bag_index(who);
        next.racks[who.index()].refill(&mut next.bags[bag]);
        next.pass_streak = 0;
        next.active = next_player(state);
        Ok(MoveOutcome {
            next,
            score_delta: score,
            words,
        })
    }

    pub fn apply_move(&self, state: &GameState, mv: &Move) -> Result<MoveOutcome, MoveError> {
        if is_finished(state) {
            return Err(MoveError::GameFinished);
        }
        match mv {
            Move::Place(p) => self.check_placement(state, p),
            Move::Pass => {
                let mut next = state.clone();
                next.pass_streak += 1;
                next.active = next_player(state);
                Ok(MoveOutcome {
                    next,
                    score_delta: 0,
                    words: Vec::new(),
                })
            }
            Move::Exchange(letters) => {
                if !state.variant.exchanges_allowed {
                    return Err(MoveError::ExchangeNotAllowed);
                }
                if letters.is_empty() {
                    return Err(MoveError::EmptyExchange);
                }
                let who = state.active;
                let mut next = state.clone();
                let removed = next.racks[who.index()]
                    .take(letters)
                    .ok_or(MoveError::TilesNotOnRack)?;
                let bag = state.bag_index(who);
                next.racks[who.index()].refill(&mut next.bags[bag]);
                next.bags[bag].append(&removed);
                next.pass_streak = 0;
                next.active = next_player(state);
                Ok(MoveOutcome {
                    next,
                    score_delta: 0,
                    words: Vec::new(),
                })
            }
        }
    }

    /// All legal moves in canonical order: placements, then exchanges, then
    /// the pass. Finished states have no moves.
    pub fn legal_moves(&self, state: &GameState) -> Vec<Move> {
        if is_finished(state) {
            return Vec::new();
        }
        let mut moves: Vec<Move> = self
            .legal_placements(&state.board, state.active_rack())
            .into_iter()
            .map(Move::Place)
            .collect();
        if state.variant.exchanges_allowed {
            moves.extend(
                exchanges(state.active_rack())
                    .into_iter()
                    .map(Move::Exchange),
            );
        }
        moves.push(Move::Pass);
        moves
    }

    /// Every legal placement of tiles from `rack` on `board`, deduplicated by
    /// the resulting cell assignment.
    ///
    /// Candidates are generated from dictionary words: a legal main word is a
    /// dictionary word, and either it covers an existing tile or one of its
    /// new tiles sits beside one. On an empty board only placements starting
    /// at the origin are produced.
    pub fn legal_placements(&self, board: &Board, rack: &Rack) -> BTreeSet<Placement> {
        let mut found = BTreeSet::new();
        if rack.is_empty() {
            return found;
        }
        let rack_counts = counts_of(rack.letters());
        let mut by_symbol: FnvHashMap<Symbol, Vec<Cell>> = FnvHashMap::default();
        for (cell, sym) in board.iter() {
            by_symbol.entry(sym).or_default().push(cell);
        }
        let grid = Grid::new(board);
        let mut side_cells: Option<[Vec<Cell>; 2]> = None;
        let mut starts: Vec<(Cell, Orientation)> = Vec::new();

        for iw in &self.words {
            let feasible = iw.counts.iter().all(|&(s, c)| {
                c <= count_in(&rack_counts, s) + by_symbol.get(&s).map_or(0, Vec::len)
            }) && iw
                .counts
                .iter()
                .any(|&(s, _)| count_in(&rack_counts, s) > 0);
            if !feasible {
                continue;
            }
            starts.clear();
            // A symbol the rack cannot fully supply must come from the board.
            let deficit = iw
                .counts
                .iter()
                .filter(|&&(s, c)| c > count_in(&rack_counts, s))
                .min_by_key(|&&(s, _)| {
                    by_symbol.get(&s).map_or(0, Vec::len) * (count_in(&rack_counts, s) + 1)
                });
            if let Some(&(sym, _)) = deficit {
                // With `a` copies on the rack, the leftmost board-supplied
                // copy is among the word's first `a + 1` occurrences.
                let first = count_in(&rack_counts, sym) + 1;
                for &cell in by_symbol.get(&sym).into_iter().flatten() {
                    for &d in iw.positions[&sym].iter().take(first) {
                        for dir in Orientation::BOTH {
                            starts.push((cell.step(dir, -d), dir));
                        }
                    }
                }
            } else if board.is_empty() {
                for dir in Orientation::BOTH {
                    starts.push((Cell::new(0, 0), dir));
                }
            } else {
                for (&sym, cells) in &by_symbol {
                    if let Some(ds) = iw.positions.get(&sym) {
                        for &cell in cells {
                            for &d in ds {
                                for dir in Orientation::BOTH {
                                    starts.push((cell.step(dir, -d), dir));
                                }
                            }
                        }
                    }
                }
                let sides = side_cells.get_or_insert_with(|| side_adjacent(board));
                let len = iw.letters.len() as i32;
                for dir in Orientation::BOTH {
                    let idx = dir as usize;
                    for &cell in &sides[idx] {
                        for d in 0..len {
                            starts.push((cell.step(dir, -d), dir));
                        }
                    }
                }
            }
            starts.sort_unstable();
            starts.dedup();
            for &(start, dir) in &starts {
                if let Some(p) = self.try_span(board, &grid, &rack_counts, &iw.letters, start, dir)
                {
                    found.insert(p);
                }
            }
        }
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn try_span(
        &self,
        board: &Board,
        grid: &Grid,
        rack_counts: &[(Symbol, usize)],
        letters: &[Symbol],
        start: Cell,
        dir: Orientation,
    ) -> Option<Placement> {
        let len = letters.len() as i32;
        if grid.get(start.step(dir, -1)).is_some() || grid.get(start.step(dir, len)).is_some() {
            return None;
        }
        let mut needed = Vec::new();
        for (d, &want) in letters.iter().enumerate() {
            let cell = start.step(dir, d as i32);
            match grid.get(cell) {
                Some(have) if have != want => return None,
                Some(_) => {}
                None => {
                    let used = needed.iter().filter(|&&(_, s)| s == want).count();
                    if used >= count_in(rack_counts, want) {
                        return None;
                    }
                    needed.push((cell, want));
                }
            }
        }
        if needed.is_empty() {
            return None;
        }
        // The main word is a dictionary word by construction; check the
        // cross words and connectivity against the snapshot.
        let across = dir.other();
        let mut connected = board.is_empty() || needed.len() < letters.len();
        let mut cross = Vec::new();
        for &(cell, sym) in &needed {
            let mut start = cell;
            while grid.get(start.step(across, -1)).is_some() {
                start = start.step(across, -1);
            }
            cross.clear();
            let mut cur = start;
            loop {
                let s = if cur == cell {
                    Some(sym)
                } else {
                    grid.get(cur)
                };
                match s {
                    Some(s) => cross.push(s),
                    None => break,
                }
                cur = cur.step(across, 1);
            }
            if cross.len() >= 2 {
                connected = true;
                if !self.dict.contains(&cross) {
                    return None;
                }
            }
        }
        if !connected {
            return None;
        }
        Some(Placement::new(dir, needed))
    }
}

/// Dense snapshot of a board's bounding box for constant-time lookups.
struct Grid {
    origin: Cell,
    rows: i32,
    cols: i32,
    cells: Vec<Option<Symbol>>,
}

impl Grid {
    fn new(board: &Board) -> Self {
        let Some((lo, hi)) = board.bounds() else {
            return Grid {
                origin: Cell::new(0, 0),
                rows: 0,
                cols: 0,
                cells: Vec::new(),
            };
        };
        let rows = hi.row - lo.row + 1;
        let cols = hi.col - lo.col + 1;
        let mut cells = vec![None; (rows * cols) as usize];
        for (c, s) in board.iter() {
            cells[((c.row - lo.row) * cols + c.col - lo.col) as usize] = Some(s);
        }
        Grid {
            origin: lo,
            rows,
            cols,
            cells,
        }
    }

    fn get(&self, c: Cell) -> Option<Symbol> {
        let r = c.row - self.origin.row;
        let k = c.col - self.origin.col;
        if r < 0 || k < 0 || r >= self.rows || k >= self.cols {
            return None;
        }
        self.cells[(r * self.cols + k) as usize]
    }
}

/// Empty cells orthogonally beside a tile, per main-word direction: for
/// horizontal words the cells above and below tiles, for vertical words the
/// cells left and right of them.
fn side_adjacent(board: &Board) -> [Vec<Cell>; 2] {
    let mut out: [BTreeSet<Cell>; 2] = [BTreeSet::new(), BTreeSet::new()];
    for (cell, _) in board.iter() {
        for dir in Orientation::BOTH {
            let across = dir.other();
            for n in [cell.step(across, -1), cell.step(across, 1)] {
                if !board.is_occupied(n) {
                    out[dir as usize].insert(n);
                }
            }
        }
    }
    let [h, v] = out;
    [h.into_iter().collect(), v.into_iter().collect()]
}

/// Distinct non-empty sub-multisets of the rack, each written in rack order
/// (first occurrences of each symbol are the ones exchanged).
pub fn exchanges(rack: &Rack) -> BTreeSet<Vec<Symbol>> {
    let counts = counts_of(rack.letters());
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; counts.len()];
    loop {
        let mut i = 0;
        while i < counts.len() && choice[i] == counts[i].1 {
            choice[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
        choice[i] += 1;
        let mut budget: Vec<usize> = choice.clone();
        let seq: Vec<Symbol> = rack
            .letters()
            .iter()
            .filter(|s| {
                let j = counts
                    .iter()
                    .position(|(t, _)| t == *s)
                    .expect("rack symbol");
                if budget[j] > 0 {
                    budget[j] -= 1;
                    true
                } else {
                    false
                }
            })
            .copied()
            .collect();
        out.insert(seq);
    }
    out
}

fn next_player(state: &GameState) -> Player {
    match state.variant.mode {
        Mode::Solitaire => state.active,
        Mode::TwoPlayer => state.active.other(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Bag, VariantConfig};

    fn sym(t: &str) -> Symbol {
        t.parse().unwrap()
    }

    fn board(cells: &[(i32, i32, &str)]) -> Board {
        cells
            .iter()
            .map(|&(r, c, t)| (Cell::new(r, c), sym(t)))
            .collect()
    }

    fn dict(words: &[&str]) -> Dictionary {
        Dictionary::from_words(words.iter().map(|w| Word::parse(w).unwrap())).unwrap()
    }

    fn state(b: Board, rack: &[&str], bag: &[&str], variant: VariantConfig) -> GameState {
        let k = 4;
        GameState {
            active: Player::P1,
            board: b,
            bags: [
                Bag::new(bag.iter().map(|t| sym(t)).collect()),
                Bag::default(),
            ],
            racks: [
                Rack::new(rack.iter().map(|t| sym(t)).collect(), k).unwrap(),
                Rack::empty(k),
            ],
            scores: [0, 0],
            pass_streak: 0,
            variant,
        }
    }

    fn micro() -> (Engine, GameState) {
        let engine = Engine::new(dict(&["@ x1 x1 $"]));
        let s = state(
            board(&[(0, 0, "@"), (0, 1, "x1")]),
            &["x1", "$"],
            &["#", "*", "#"],
            VariantConfig::SOLITAIRE,
        );
        (engine, s)
    }

    #[test]
    fn words_formed_examples() {
        let b = board(&[(0, 0, "@"), (0, 1, "x1")]);
        let w = words_formed(
            &b,
            &[(Cell::new(0, 2), sym("x1")), (Cell::new(0, 3), sym("$"))],
        )
        .unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].word.to_string(), "@ x1 x1 $");
        assert_eq!(w[0].start, Cell::new(0, 0));
        assert_eq!(w[0].orientation, Orientation::Horizontal);

        let b = board(&[(0, 0, "@")]);
        let w = words_formed(&b, &[(Cell::new(1, 0), sym("x2"))]).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].word.to_string(), "@ x2");
        assert_eq!(w[0].orientation, Orientation::Vertical);

        let w = words_formed(&Board::new(), &[(Cell::new(0, 0), sym("#"))]).unwrap();
        assert!(w.is_empty());

        assert_eq!(
            words_formed(&b, &[]).unwrap_err(),
            MoveError::EmptyPlacement
        );
        assert_eq!(
            words_formed(&b, &[(Cell::new(0, 0), sym("#"))]).unwrap_err(),
            MoveError::OccupiedCell(Cell::new(0, 0))
        );
    }

    #[test]
    fn micro_fixture_is_legal_and_scores_four() {
        let (engine, s) = micro();
        let p = Placement::new(
            Orientation::Horizontal,
            vec![(Cell::new(0, 2), sym("x1")), (Cell::new(0, 3), sym("$"))],
        );
        let out = engine.check_placement(&s, &p).unwrap();
        assert_eq!(out.score_delta, 4);
        assert_eq!(out.next.scores, [4, 0]);
        assert_eq!(out.next.racks[0].letters(), &[sym("#"), sym("*"), sym("#")]);
        assert!(out.next.bags[0].is_empty());
    }

    #[test]
    fn placement_errors() {
        let (engine, s) = micro();
        let gap = Placement::new(
            Orientation::Horizontal,
            vec![(Cell::new(0, 3), sym("x1")), (Cell::new(0, 5), sym("$"))],
        );
        assert_eq!(
            engine.check_placement(&s, &gap).unwrap_err(),
            MoveError::GapInMainWord(Cell::new(0, 4))
        );
        let occupied = Placement::new(Orientation::Horizontal, vec![(Cell::new(0, 1), sym("$"))]);
        assert_eq!(
            engine.check_placement(&s, &occupied).unwrap_err(),
            MoveError::OccupiedCell(Cell::new(0, 1))
        );
        let far = Placement::new(
            Orientation::Horizontal,
            vec![(Cell::new(5, 5), sym("x1")), (Cell::new(5, 6), sym("$"))],
        );
        assert_eq!(
            engine.check_placement(&s, &far).unwrap_err(),
            MoveError::Disconnected
        );
        let cross = Placement::new(Orientation::Horizontal, vec![(Cell::new(1, 0), sym("$"))]);
        assert_eq!(
            engine.check_placement(&s, &cross).unwrap_err(),
            MoveError::WordNotInDictionary("@ $".into())
        );
        let missing = Placement::new(
            Orientation::Horizontal,
            vec![(Cell::new(0, 2), sym("x1")), (Cell::new(0, 3), sym("x1"))],
        );
        assert_eq!(
            engine.check_placement(&s, &missing).unwrap_err(),
            MoveError::TilesNotOnRack
        );
        let bent = Placement::new(
            Orientation::Horizontal,
            vec![(Cell::new(0, 2), sym("x1")), (Cell::new(1, 2), sym("$"))],
        );
        assert_eq!(
            engine.check_placement(&s, &bent).unwrap_err(),
            MoveError::NotCollinear
        );
    }

    #[test]
    fn micro_fixture_has_one_placement() {
        let (engine, s) = micro();
        let moves = engine.legal_moves(&s);
        assert_eq!(moves.len(), 2);
        assert!(matches!(moves[0], Move::Place(_)));
        assert_eq!(moves[1], Move::Pass);
    }

    #[test]
    fn empty_rack_only_passes() {
        let (engine, mut s) = micro();
        s.racks[0] = Rack::empty(4);
        assert_eq!(engine.legal_moves(&s), vec![Move::Pass]);
    }

    #[test]
    fn pass_increments_streak_and_toggles() {
        let (engine, mut s) = micro();
        s.variant = VariantConfig::TWO_PLAYER_NO_EXCHANGE;
        s.pass_streak = 2;
        let out = engine.apply_move(&s, &Move::Pass).unwrap();
        let mut expected = s.clone();
        expected.pass_streak = 3;
        expected.active = Player::P2;
        assert_eq!(out.next, expected);
        assert_eq!(out.score_delta, 0);
    }

    #[test]
    fn exchange_refills_before_appending() {
        let engine = Engine::new(dict(&["@ x1"]));
        let variant = VariantConfig {
            mode: Mode::TwoPlayer,
            exchanges_allowed: true,
            separate_bags: false,
        };
        let mut s = state(Board::new(), &["$", "x1", "@"], &["#", "*", "@"], variant);
        s.pass_streak = 4;
        let out = engine
            .apply_move(&s, &Move::Exchange(vec![sym("$"), sym("x1")]))
            .unwrap();
        assert_eq!(
            out.next.racks[0].letters(),
            &[sym("@"), sym("#"), sym("*"), sym("@")]
        );
        assert_eq!(out.next.bags[0].seq(), &[sym("$"), sym("x1")]);
        assert_eq!(out.next.pass_streak, 0);
        assert_eq!(out.next.active, Player::P2);

        let no_ex = state(Board::new(), &["$"], &[], VariantConfig::SOLITAIRE);
        assert_eq!(
            engine
                .apply_move(&no_ex, &Move::Exchange(vec![sym("$")]))
                .unwrap_err(),
            MoveError::ExchangeNotAllowed
        );
    }

    #[test]
    fn refill_stops_when_bag_runs_short() {
        let engine = Engine::new(dict(&["@ x1 x1 $ $ $"]));
        let mut s = state(
            board(&[(0, 0, "@"), (0, 1, "x1")]),
            &["x1", "$", "$", "$"],
            &["*", "*", "#"],
            VariantConfig::SOLITAIRE,
        );
        s.racks[0] = Rack::new(s.racks[0].letters().to_vec(), 4).unwrap();
        let p = Placement::new(
            Orientation::Horizontal,
            (2..6)
                .zip(["x1", "$", "$", "$"])
                .map(|(c, t)| (Cell::new(0, c), sym(t)))
                .collect(),
        );
        let out = engine.check_placement(&s, &p).unwrap();
        assert_eq!(out.next.racks[0].len(), 3);
        assert!(out.next.bags[0].is_empty());
        assert_eq!(out.score_delta, 6);
    }

    #[test]
    fn exchange_menu_is_distinct_submultisets() {
        let rack = Rack::new(vec![sym("$"), sym("x1"), sym("$")], 3).unwrap();
        let ex = exchanges(&rack);
        // {$}, {$,$}, {x1}, {$,x1}, {$,$,x1}
        assert_eq!(ex.len(), 5);
        assert!(ex.contains(&vec![sym("$"), sym("x1")]));
        assert!(ex.contains(&vec![sym("$"), sym("x1"), sym("$")]));
    }

    #[test]
    fn finish_and_outcome() {
        let (_, mut s) = micro();
        s.pass_streak = 6;
        assert!(is_finished(&s));
        s.pass_streak = 3;
        assert!(!is_finished(&s));
        assert_eq!(outcome(&s).unwrap_err(), MoveError::NotFinished);
        s.bags[0] = Bag::default();
        s.racks[0] = Rack::empty(4);
        s.scores = [5, 5];
        assert!(is_finished(&s));
        assert_eq!(outcome(&s).unwrap(), Outcome::Draw);
        s.scores = [1, 0];
        assert_eq!(outcome(&s).unwrap(), Outcome::P1Wins);
    }

    #[test]
    fn single_tile_validates_both_axes() {
        let engine = Engine::new(dict(&["@ x1", "x2 x1"]));
        let b = board(&[(0, 0, "@"), (1, 1, "x2")]);
        let s = state(b, &["x1"], &["#"], VariantConfig::SOLITAIRE);
        // (0,1) forms `@ x1` across and `x1 x2` down; the latter is absent.
        let p = Placement::new(Orientation::Vertical, vec![(Cell::new(0, 1), sym("x1"))]);
        assert_eq!(p.orientation, Orientation::Horizontal);
        assert_eq!(
            engine.check_placement(&s, &p).unwrap_err(),
            MoveError::WordNotInDictionary("x1 x2".into())
        );
    }

    #[test]
    fn first_move_on_empty_board_starts_at_origin() {
        let engine = Engine::new(dict(&["x1 $"]));
        let s = state(Board::new(), &["$", "x1"], &["#"], VariantConfig::SOLITAIRE);
        let moves = engine.legal_moves(&s);
        assert_eq!(moves.len(), 3);
        let far = Placement::new(
            Orientation::Vertical,
            vec![(Cell::new(7, 3), sym("x1")), (Cell::new(8, 3), sym("$"))],
        );
        assert!(engine.check_placement(&s, &far).is_ok());
    }
}
