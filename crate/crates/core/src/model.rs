//! Domain types shared by the engine, the solvers and the reduction compilers.
//!
//! Every value here is immutable once built; transitions produce new values.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BTreeSet;

use fnv::FnvHashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown symbol token `{0}`")]
    BadToken(String),
    #[error("word must not be empty")]
    EmptyWord,
    #[error("dictionary entry `{0}` is shorter than two letters")]
    ShortEntry(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid variant: {0}")]
    InvalidVariant(String),
}

/// One alphabet element.
///
/// Tokens: `#`, `$`, `*`, `@`, `x<i>`, `p<i>c<j>` (positive occurrence of
/// variable `i` in clause `j`) and `n<i>c<j>` (negative occurrence).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Hash,
    Dollar,
    Star,
    At,
    Var(u32),
    Occ {
        var: u32,
        clause: u32,
        negated: bool,
    },
}

impl Symbol {
    /// Canonical token bytes without allocating. Two `u32` fields bound the
    /// longest token at 22 bytes.
    fn token_buf(&self) -> ([u8; 24], usize) {
        fn push_num(buf: &mut [u8; 24], len: &mut usize, mut n: u32) {
            let mut digits = [0u8; 10];
            let mut i = digits.len();
            loop {
                i -= 1;
                digits[i] = b'0' + (n % 10) as u8;
                n /= 10;
                if n == 0 {
                    break;
                }
            }
            let d = &digits[i..];
            buf[*len..*len + d.len()].copy_from_slice(d);
            *len += d.len();
        }
        let mut buf = [0u8; 24];
        let mut len = 1;
        match *self {
            Symbol::Hash => buf[0] = b'#',
            Symbol::Dollar => buf[0] = b'$',
            Symbol::Star => buf[0] = b'*',
            Symbol::At => buf[0] = b'@',
            Symbol::Var(i) => {
                buf[0] = b'x';
                push_num(&mut buf, &mut len, i);
            }
            Symbol::Occ {
                var,
                clause,
                negated,
            } => {
                buf[0] = if negated { b'n' } else { b'p' };
                push_num(&mut buf, &mut len, var);
                buf[len] = b'c';
                len += 1;
                push_num(&mut buf, &mut len, clause);
            }
        }
        (buf, len)
    }

    pub fn token(&self) -> String {
        self.to_string()
    }

    pub fn is_occurrence(&self) -> bool {
        matches!(self, Symbol::Occ { .. })
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, la) = self.token_buf();
        let (b, lb) = other.token_buf();
        a[..la].cmp(&b[..lb])
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (buf, len) = self.token_buf();
        // Tokens are ASCII.
        f.write_str(std::str::from_utf8(&buf[..len]).unwrap_or("?"))
    }
}

/// Parses a positive decimal without sign or leading zeros.
fn parse_index(text: &str) -> Option<u32> {
    if text.is_empty() || text.starts_with('0') || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok().filter(|&v| v >= 1)
}

pub fn parse_symbol(text: &str) -> Result<Symbol, ModelError> {
    let bad = || ModelError::BadToken(text.to_string());
    match text {
        "#" => return Ok(Symbol::Hash),
        "$" => return Ok(Symbol::Dollar),
        "*" => return Ok(Symbol::Star),
        "@" => return Ok(Symbol::At),
        _ => {}
    }
    let mut chars = text.chars();
    match chars.next() {
        Some('x') => parse_index(chars.as_str()).map(Symbol::Var).ok_or_else(bad),
        Some(lead @ ('p' | 'n')) => {
            let rest = chars.as_str();
            let (var, clause) = rest.split_once('c').ok_or_else(bad)?;
            Ok(Symbol::Occ {
                var: parse_index(var).ok_or_else(bad)?,
                clause: parse_index(clause).ok_or_else(bad)?,
                negated: lead == 'n',
            })
        }
        _ => Err(bad()),
    }
}

impl FromStr for Symbol {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_symbol(s)
    }
}

/// A non-empty sequence of symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(letters: Vec<Symbol>) -> Result<Self, ModelError> {
        if letters.is_empty() {
            return Err(ModelError::EmptyWord);
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let letters = text
            .split_whitespace()
            .map(parse_symbol)
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(letters)
    }
}

impl Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Finite set of words of length at least two. Membership is exact and
/// orientation-sensitive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dictionary {
    entries: BTreeSet<Word>,
    index: FnvHashSet<Word>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Result<Self, ModelError> {
        let mut dict = Dictionary::new();
        for w in words {
            dict.insert(w)?;
        }
        Ok(dict)
    }

    pub fn insert(&mut self, word: Word) -> Result<bool, ModelError> {
        if word.len() < 2 {
            return Err(ModelError::ShortEntry(word.to_string()));
        }
        self.index.insert(word.clone());
        Ok(self.entries.insert(word))
    }

    pub fn contains(&self, letters: &[Symbol]) -> bool {
        self.index.contains(letters)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.entries.iter()
    }
}

/// Grid coordinate. Rows grow downward, columns rightward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }

    /// Moves `steps` cells along `dir`.
    pub fn step(self, dir: Orientation, steps: i32) -> Cell {
        match dir {
            Orientation::Horizontal => Cell::new(self.row, self.col + steps),
            Orientation::Vertical => Cell::new(self.row + steps, self.col),
        }
    }

    pub fn neighbors(self) -> [Cell; 4] {
        [
            Cell::new(self.row - 1, self.col),
            Cell::new(self.row + 1, self.col),
            Cell::new(self.row, self.col - 1),
            Cell::new(self.row, self.col + 1),
        ]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Horizontal, Orientation::Vertical];

    pub fn other(self) -> Orientation {
        match self {
            Orientation::Horizontal => Orientation::Vertical,
            Orientation::Vertical => Orientation::Horizontal,
        }
    }
}

/// Sparse board on the unbounded plane.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Board {
    /// Sorted by cell.
    cells: Vec<(Cell, Symbol)>,
}

impl Board {
    pub fn new() -> Self {
        Self::default()
    }

    fn find(&self, cell: Cell) -> Result<usize, usize> {
        self.cells.binary_search_by(|(c, _)| c.cmp(&cell))
    }

    pub fn get(&self, cell: Cell) -> Option<Symbol> {
        self.find(cell).ok().map(|i| self.cells[i].1)
    }

    pub fn is_occupied(&self, cell: Cell) -> bool {
        self.find(cell).is_ok()
    }

    /// Returns the previous occupant, if any.
    pub fn set(&mut self, cell: Cell, sym: Symbol) -> Option<Symbol> {
        match self.find(cell) {
            Ok(i) => Some(std::mem::replace(&mut self.cells[i].1, sym)),
            Err(i) => {
                self.cells.insert(i, (cell, sym));
                None
            }
        }
    }

    pub fn remove(&mut self, cell: Cell) -> Option<Symbol> {
        self.find(cell).ok().map(|i| self.cells.remove(i).1)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (Cell, Symbol)> + '_ {
        self.cells.iter().copied()
    }

    /// Inclusive bounding box `(top_left, bottom_right)`.
    pub fn bounds(&self) -> Option<(Cell, Cell)> {
        let mut it = self.cells.iter().map(|(c, _)| c);
        let first = *it.next()?;
        let (mut r0, mut r1, mut c0, mut c1) = (first.row, first.row, first.col, first.col);
        for c in it {
            r0 = r0.min(c.row);
            r1 = r1.max(c.row);
            c0 = c0.min(c.col);
            c1 = c1.max(c.col);
        }
        Some((Cell::new(r0, c0), Cell::new(r1, c1)))
    }

    /// Every maximal run of two or more occupied cells, horizontal runs first.
    pub fn runs(&self) -> Vec<(Cell, Orientation, Vec<Symbol>)> {
        let mut out = Vec::new();
        for dir in Orientation::BOTH {
            for (cell, _) in self.iter() {
                if self.is_occupied(cell.step(dir, -1)) {
                    continue;
                }
                let mut letters = Vec::new();
                let mut cur = cell;
                while let Some(s) = self.get(cur) {
                    letters.push(s);
                    cur = cur.step(dir, 1);
                }
                if letters.len() >= 2 {
                    out.push((cell, dir, letters));
                }
            }
        }
        out
    }
}

impl FromIterator<(Cell, Symbol)> for Board {
    fn from_iter<T: IntoIterator<Item = (Cell, Symbol)>>(iter: T) -> Self {
        let mut board = Board::new();
        for (c, s) in iter {
            board.set(c, s);
        }
        board
    }
}

/// Multiset of tiles held by a player, kept in draw order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rack {
    letters: Vec<Symbol>,
    capacity: usize,
}

impl Rack {
    pub fn new(letters: Vec<Symbol>, capacity: usize) -> Result<Self, ModelError> {
        if letters.len() > capacity {
            return Err(ModelError::InvalidState(format!(
                "rack holds {} tiles but capacity is {capacity}",
                letters.len()
            )));
        }
        Ok(Rack { letters, capacity })
    }

    pub fn empty(capacity: usize) -> Self {
        Rack {
            letters: Vec::new(),
            capacity,
        }
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn count(&self, sym: Symbol) -> usize {
        self.letters.iter().filter(|&&s| s == sym).count()
    }

    /// True when `tiles` is a sub-multiset of the rack.
    pub fn contains_all(&self, tiles: &[Symbol]) -> bool {
        let mut pool = self.letters.clone();
        tiles
            .iter()
            .all(|t| match pool.iter().position(|s| s == t) {
                Some(i) => {
                    pool.swap_remove(i);
                    true
                }
                None => false,
            })
    }

    /// Removes the first occurrence of each tile; returns the removed tiles in
    /// the order they sat on the rack.
    pub(crate) fn take(&mut self, tiles: &[Symbol]) -> Option<Vec<Symbol>> {
        let mut picked = vec![false; self.letters.len()];
        for t in tiles {
            let idx = (0..self.letters.len()).find(|&i| !picked[i] && self.letters[i] == *t)?;
            picked[idx] = true;
        }
        let mut removed = Vec::with_capacity(tiles.len());
        let mut kept = Vec::with_capacity(self.letters.len() - tiles.len());
        for (s, p) in self.letters.iter().zip(&picked) {
            if *p {
                removed.push(*s);
            } else {
                kept.push(*s);
            }
        }
        self.letters = kept;
        Some(removed)
    }

    /// Draws from the front of `bag` until full or the bag runs out.
    pub(crate) fn refill(&mut self, bag: &mut Bag) {
        let want = self.capacity.saturating_sub(self.letters.len());
        self.letters.extend(bag.draw(want));
    }
}

/// Tile sequence; the front is drawn next.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bag {
    seq: Vec<Symbol>,
}

impl Bag {
    pub fn new(seq: Vec<Symbol>) -> Self {
        Bag { seq }
    }

    pub fn seq(&self) -> &[Symbol] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub(crate) fn draw(&mut self, n: usize) -> Vec<Symbol> {
        let n = n.min(self.seq.len());
        self.seq.drain(..n).collect()
    }

    pub(crate) fn append(&mut self, tiles: &[Symbol]) {
        self.seq.extend_from_slice(tiles);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Solitaire,
    TwoPlayer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariantConfig {
    pub mode: Mode,
    pub exchanges_allowed: bool,
    pub separate_bags: bool,
}

impl VariantConfig {
    pub const SOLITAIRE: VariantConfig = VariantConfig {
        mode: Mode::Solitaire,
        exchanges_allowed: false,
        separate_bags: false,
    };

    pub const TWO_PLAYER_NO_EXCHANGE: VariantConfig = VariantConfig {
        mode: Mode::TwoPlayer,
        exchanges_allowed: false,
        separate_bags: false,
    };

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.mode == Mode::Solitaire && self.exchanges_allowed {
            return Err(ModelError::InvalidVariant(
                "solitaire does not allow exchanges".into(),
            ));
        }
        if self.separate_bags && self.mode != Mode::TwoPlayer {
            return Err(ModelError::InvalidVariant(
                "separate bags require two players".into(),
            ));
        }
        if self.separate_bags && self.exchanges_allowed {
            return Err(ModelError::InvalidVariant(
                "separate bags do not allow exchanges".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::P1 => 0,
            Player::P2 => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

pub const MAX_PASS_STREAK: u8 = 6;

/// A game position plus the consecutive-pass counter and the variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub active: Player,
    pub board: Board,
    pub bags: [Bag; 2],
    pub racks: [Rack; 2],
    pub scores: [u64; 2],
    pub pass_streak: u8,
    pub variant: VariantConfig,
}

impl GameState {
    /// Bag the given player draws from.
    pub fn bag_of(&self, player: Player) -> &Bag {
        if self.variant.separate_bags {
            &self.bags[player.index()]
        } else {
            &self.bags[0]
        }
    }

    pub(crate) fn bag_index(&self, player: Player) -> usize {
        if self.variant.separate_bags {
            player.index()
        } else {
            0
        }
    }

    pub fn rack(&self, player: Player) -> &Rack {
        &self.racks[player.index()]
    }

    pub fn active_rack(&self) -> &Rack {
        self.rack(self.active)
    }

    /// score1 - score2.
    pub fn margin(&self) -> i64 {
        self.scores[0] as i64 - self.scores[1] as i64
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.variant.validate()?;
        if self.pass_streak > MAX_PASS_STREAK {
            return Err(ModelError::InvalidState(format!(
                "pass streak {} exceeds {MAX_PASS_STREAK}",
                self.pass_streak
            )));
        }
        for rack in &self.racks {
            if rack.len() > rack.capacity() {
                return Err(ModelError::InvalidState("rack over capacity".into()));
            }
        }
        if self.variant.mode == Mode::Solitaire {
            if !self.racks[1].is_empty() {
                return Err(ModelError::InvalidState(
                    "solitaire has no second rack".into(),
                ));
            }
            if self.active != Player::P1 {
                return Err(ModelError::InvalidState(
                    "solitaire is always P1 to move".into(),
                ));
            }
        }
        if !self.variant.separate_bags && !self.bags[1].is_empty() {
            return Err(ModelError::InvalidState(
                "second bag is only used with separate bags".into(),
            ));
        }
        Ok(())
    }
}

/// A proper play: tiles placed on empty cells along one axis.
///
/// Tiles are kept sorted by cell; a single tile is always stored horizontal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub orientation: Orientation,
    pub tiles: Vec<(Cell, Symbol)>,
}

impl Placement {
    pub fn new(orientation: Orientation, mut tiles: Vec<(Cell, Symbol)>) -> Self {
        tiles.sort();
        let orientation = if tiles.len() == 1 {
            Orientation::Horizontal
        } else {
            orientation
        };
        Placement { orientation, tiles }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.tiles.iter().map(|(_, s)| *s).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Place(Placement),
    Exchange(Vec<Symbol>),
    Pass,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Pass => f.write_str("pass"),
            Move::Exchange(letters) => {
                f.write_str("exchange")?;
                for s in letters {
                    write!(f, " {s}")?;
                }
                Ok(())
            }
            Move::Place(p) => {
                let dir = match p.orientation {
                    Orientation::Horizontal => 'h',
                    Orientation::Vertical => 'v',
                };
                write!(f, "place {dir}")?;
                for (c, s) in &p.tiles {
                    write!(f, " {},{}:{s}", c.row, c.col)?;
                }
                Ok(())
            }
        }
    }
}

/// A complete packaged game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub dictionary: Dictionary,
    pub k: usize,
    pub board: Board,
    pub bag: Bag,
    /// Second player's bag; only meaningful with separate bags.
    pub bag2: Bag,
    pub racks: [Rack; 2],
    pub scores: [u64; 2],
    pub variant: VariantConfig,
    pub active: Player,
    pub pass_streak: u8,
}

impl Instance {
    pub fn initial_state(&self) -> GameState {
        GameState {
            active: self.active,
            board: self.board.clone(),
            bags: [self.bag.clone(), self.bag2.clone()],
            racks: self.racks.clone(),
            scores: self.scores,
            pass_streak: self.pass_streak,
            variant: self.variant,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for rack in &self.racks {
            if rack.capacity() != self.k {
                return Err(ModelError::InvalidState(format!(
                    "rack capacity {} differs from k = {}",
                    rack.capacity(),
                    self.k
                )));
            }
        }
        if self.dictionary.iter().any(|w| w.len() < 2) {
            return Err(ModelError::InvalidState("short dictionary entry".into()));
        }
        self.initial_state().validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_encode_as_documented() {
        assert_eq!(Symbol::Var(3).token(), "x3");
        let occ = Symbol::Occ {
            var: 2,
            clause: 5,
            negated: true,
        };
        assert_eq!(occ.token(), "n2c5");
        assert_eq!(parse_symbol("n2c5").unwrap(), occ);
        assert_eq!(parse_symbol("#").unwrap(), Symbol::Hash);
    }

    #[test]
    fn rejects_unknown_tokens() {
        for bad in ["q9", "x0", "x01", "p1", "p1c", "c1", "", "x", "n1c0", "##"] {
            assert!(parse_symbol(bad).is_err(), "{bad} should be rejected");
        }
        assert_eq!(
            parse_symbol("q9"),
            Err(ModelError::BadToken("q9".to_string()))
        );
    }

    #[test]
    fn symbol_order_is_lexicographic_on_tokens() {
        let mut syms = [
            Symbol::Var(10),
            Symbol::Var(2),
            Symbol::At,
            Symbol::Hash,
            Symbol::Occ {
                var: 1,
                clause: 1,
                negated: false,
            },
        ];
        syms.sort();
        let toks: Vec<_> = syms.iter().map(Symbol::token).collect();
        assert_eq!(toks, ["#", "@", "p1c1", "x10", "x2"]);
    }

    #[test]
    fn rack_take_keeps_rack_order() {
        let x = Symbol::Var(1);
        let mut rack = Rack::new(vec![Symbol::Dollar, x, Symbol::Dollar, Symbol::Star], 4).unwrap();
        let removed = rack.take(&[Symbol::Star, Symbol::Dollar]).unwrap();
        assert_eq!(removed, vec![Symbol::Dollar, Symbol::Star]);
        assert_eq!(rack.letters(), &[x, Symbol::Dollar]);
        assert!(rack.take(&[Symbol::Hash]).is_none());
    }

    #[test]
    fn variant_invariants() {
        assert!(VariantConfig::SOLITAIRE.validate().is_ok());
        let bad = VariantConfig {
            mode: Mode::Solitaire,
            exchanges_allowed: true,
            separate_bags: false,
        };
        assert!(bad.validate().is_err());
        let bad = VariantConfig {
            mode: Mode::Solitaire,
            exchanges_allowed: false,
            separate_bags: true,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn dictionary_rejects_single_letters() {
        let mut d = Dictionary::new();
        assert!(d.insert(Word::parse("#").unwrap()).is_err());
        assert!(d.insert(Word::parse("@ x1").unwrap()).unwrap());
        assert!(d.contains(&[Symbol::At, Symbol::Var(1)]));
        assert!(!d.contains(&[Symbol::Var(1), Symbol::At]));
    }

    #[test]
    fn board_runs_are_maximal() {
        let board: Board = [
            (Cell::new(0, 0), Symbol::At),
            (Cell::new(0, 1), Symbol::Var(1)),
            (Cell::new(1, 1), Symbol::Hash),
            (Cell::new(5, 5), Symbol::Star),
        ]
        .into_iter()
        .collect();
        let runs = board.runs();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].0, Cell::new(0, 0));
        assert_eq!(runs[0].1, Orientation::Horizontal);
        assert_eq!(runs[1].2, vec![Symbol::Var(1), Symbol::Hash]);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn any_symbol() -> impl Strategy<Value = Symbol> {
        prop_oneof![
            Just(Symbol::Hash),
            Just(Symbol::Dollar),
            Just(Symbol::Star),
            Just(Symbol::At),
            (1u32..=u32::MAX).prop_map(Symbol::Var),
            (1u32..=u32::MAX, 1u32..=u32::MAX, any::<bool>()).prop_map(|(var, clause, negated)| {
                Symbol::Occ {
                    var,
                    clause,
                    negated,
                }
            }),
        ]
    }

    proptest! {
        #[test]
        fn token_round_trip(s in any_symbol()) {
            prop_assert_eq!(parse_symbol(&s.token()).unwrap(), s);
        }

        #[test]
        fn order_agrees_with_token_order(a in any_symbol(), b in any_symbol()) {
            prop_assert_eq!(a.cmp(&b), a.token().cmp(&b.token()));
            prop_assert_eq!(a == b, a.cmp(&b) == Ordering::Equal);
        }
    }
}
