//! Independent oracles shared by the integration tests. Nothing here calls
//! the engine, the logic evaluators or the solvers.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use scrabble_core::logic::{Cnf, Qbf};
use scrabble_core::rng::SplitMix64;
use scrabble_core::{Board, Cell, Dictionary, Rack, Symbol, Word};

fn lit_true(var: u32, negated: bool, assignment: &[bool]) -> bool {
    assignment[var as usize - 1] != negated
}

fn matrix_true(f: &Cnf, assignment: &[bool]) -> bool {
    f.clauses
        .iter()
        .all(|c| c.iter().any(|l| lit_true(l.var, l.negated, assignment)))
}

/// Truth-table satisfiability.
pub fn brute_sat(f: &Cnf) -> bool {
    let n = f.n_vars as usize;
    let mut a = vec![false; n];
    loop {
        if matrix_true(f, &a) {
            return true;
        }
        // Binary increment; false once every assignment was tried.
        let mut i = 0;
        while i < n && a[i] {
            a[i] = false;
            i += 1;
        }
        if i == n {
            return false;
        }
        a[i] = true;
    }
}

fn qbf_rec(f: &Cnf, a: &mut Vec<bool>) -> bool {
    let depth = a.len();
    if depth == f.n_vars as usize {
        return matrix_true(f, a);
    }
    let mut vals = [false; 2];
    for (slot, v) in [false, true].into_iter().enumerate() {
        a.push(v);
        vals[slot] = qbf_rec(f, a);
        a.pop();
    }
    // x1 is existential, then strict alternation.
    if depth.is_multiple_of(2) {
        vals[0] || vals[1]
    } else {
        vals[0] && vals[1]
    }
}

/// `∃x1 ∀x2 ∃x3 …` over the whole matrix.
pub fn brute_qbf(q: &Qbf) -> bool {
    qbf_rec(&q.matrix, &mut Vec::new())
}

/// Intended play of the quantifier game: the existential player picks false
/// unless only true wins, the universal one picks false unless only true
/// refutes. Bit `i - 1` of the result is the value of x_i.
pub fn witnessing_assignment(q: &Qbf) -> u64 {
    let f = &q.matrix;
    let mut a = Vec::new();
    for depth in 0..f.n_vars as usize {
        let mut wins = [false; 2];
        for (slot, v) in [false, true].into_iter().enumerate() {
            a.push(v);
            wins[slot] = qbf_rec(f, &mut a);
            a.pop();
        }
        let pick = if depth % 2 == 0 {
            wins[1] && !wins[0]
        } else {
            wins[0] && !wins[1]
        };
        a.push(pick);
    }
    a.iter()
        .enumerate()
        .fold(0, |acc, (i, &v)| acc | (v as u64) << i)
}

/// The formula the QBF reduction actually encodes: odd `n` padded with
/// `(x_{n+1}, ¬x_{n+1}, x_{n+1})`, then every clause doubled in place.
pub fn padded_duplicated(q: &Qbf) -> Qbf {
    use scrabble_core::logic::Literal;
    let mut f = q.matrix.clone();
    if f.n_vars % 2 == 1 {
        f.n_vars += 1;
        let v = f.n_vars;
        f.clauses
            .push([Literal::pos(v), Literal::neg(v), Literal::pos(v)]);
    }
    f.clauses = f.clauses.iter().flat_map(|c| [*c, *c]).collect();
    Qbf::new(f)
}

type Grid = HashMap<(i32, i32), Symbol>;

fn at(grid: &Grid, placed: &Grid, r: i32, c: i32) -> Option<Symbol> {
    placed.get(&(r, c)).or_else(|| grid.get(&(r, c))).copied()
}

/// Maximal runs of length >= 2 through some placed cell, as
/// `(start, horizontal, letters)`.
fn formed_words(grid: &Grid, placed: &Grid) -> BTreeSet<((i32, i32), bool, Vec<Symbol>)> {
    let mut out = BTreeSet::new();
    for &(r, c) in placed.keys() {
        for horiz in [true, false] {
            let (dr, dc) = if horiz { (0, 1) } else { (1, 0) };
            let (mut sr, mut sc) = (r, c);
            while at(grid, placed, sr - dr, sc - dc).is_some() {
                sr -= dr;
                sc -= dc;
            }
            let mut letters = Vec::new();
            let (mut cr, mut cc) = (sr, sc);
            while let Some(s) = at(grid, placed, cr, cc) {
                letters.push(s);
                cr += dr;
                cc += dc;
            }
            if letters.len() >= 2 {
                out.insert(((sr, sc), horiz, letters));
            }
        }
    }
    out
}

/// Legality straight from the rules: empty targets, one gap-free line, at
/// least one word, every formed word listed, and contact with the existing
/// tiles unless the board is empty (then the main word must start at the
/// origin, the engine's representative for translated first moves).
pub fn legal_by_definition(
    words: &BTreeSet<Vec<Symbol>>,
    grid: &Grid,
    placed: &[((i32, i32), Symbol)],
) -> bool {
    let mut p = Grid::new();
    for &(cell, s) in placed {
        if grid.contains_key(&cell) || p.insert(cell, s).is_some() {
            return false;
        }
    }
    let rows: BTreeSet<i32> = placed.iter().map(|(c, _)| c.0).collect();
    let cols: BTreeSet<i32> = placed.iter().map(|(c, _)| c.1).collect();
    if rows.len() > 1 && cols.len() > 1 {
        return false;
    }
    let (lo, hi) = (
        placed.iter().map(|x| x.0).min().unwrap(),
        placed.iter().map(|x| x.0).max().unwrap(),
    );
    let mut r = lo.0;
    let mut c = lo.1;
    while (r, c) != hi {
        if at(grid, &p, r, c).is_none() {
            return false;
        }
        if rows.len() == 1 {
            c += 1;
        } else {
            r += 1;
        }
    }
    let formed = formed_words(grid, &p);
    if formed.is_empty() || !formed.iter().all(|(_, _, w)| words.contains(w)) {
        return false;
    }
    if grid.is_empty() {
        // The main word is the placed line itself.
        return lo == (0, 0);
    }
    placed.iter().any(|&((r, c), _)| {
        [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
            .iter()
            .any(|n| grid.contains_key(n))
    })
}

/// Distinct orderings of every non-empty sub-multiset of `rack`.
fn arrangements(rack: &[Symbol]) -> BTreeSet<Vec<Symbol>> {
    let mut out = BTreeSet::new();
    let n = rack.len();
    fn go(
        rack: &[Symbol],
        used: &mut Vec<bool>,
        cur: &mut Vec<Symbol>,
        out: &mut BTreeSet<Vec<Symbol>>,
    ) {
        if !cur.is_empty() {
            out.insert(cur.clone());
        }
        for i in 0..rack.len() {
            if !used[i] {
                used[i] = true;
                cur.push(rack[i]);
                go(rack, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    go(rack, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Every legal placement, found by trying each arrangement of rack tiles at
/// each start cell of the bounding box widened by the longest word, in both
/// directions. Tiles fill successive empty cells from the start, which
/// covers every gap-free line. Results are canonical sorted tile lists.
pub fn brute_force_placements(
    dict: &Dictionary,
    board: &Board,
    rack: &Rack,
) -> BTreeSet<Vec<(Cell, Symbol)>> {
    let words: BTreeSet<Vec<Symbol>> = dict.iter().map(|w| w.letters().to_vec()).collect();
    let grid: Grid = board.iter().map(|(c, s)| ((c.row, c.col), s)).collect();
    let max_len = words.iter().map(Vec::len).max().unwrap_or(0) as i32;
    let (r0, r1, c0, c1) = if grid.is_empty() {
        (0, 0, 0, 0)
    } else {
        (
            grid.keys().map(|k| k.0).min().unwrap(),
            grid.keys().map(|k| k.0).max().unwrap(),
            grid.keys().map(|k| k.1).min().unwrap(),
            grid.keys().map(|k| k.1).max().unwrap(),
        )
    };
    let mut out = BTreeSet::new();
    for arr in arrangements(rack.letters()) {
        for r in r0 - max_len..=r1 + max_len {
            for c in c0 - max_len..=c1 + max_len {
                for (dr, dc) in [(0, 1), (1, 0)] {
                    let mut tiles = Vec::new();
                    let (mut cr, mut cc) = (r, c);
                    for &s in &arr {
                        while grid.contains_key(&(cr, cc)) {
                            cr += dr;
                            cc += dc;
                        }
                        tiles.push(((cr, cc), s));
                        cr += dr;
                        cc += dc;
                    }
                    if legal_by_definition(&words, &grid, &tiles) {
                        let mut canon: Vec<(Cell, Symbol)> = tiles
                            .iter()
                            .map(|&((r, c), s)| (Cell::new(r, c), s))
                            .collect();
                        canon.sort();
                        out.insert(canon);
                    }
                }
            }
        }
    }
    out
}

pub const MICRO_ALPHABET: [Symbol; 6] = [
    Symbol::Hash,
    Symbol::Dollar,
    Symbol::Star,
    Symbol::At,
    Symbol::Var(1),
    Symbol::Var(2),
];

#[derive(Debug)]
pub struct MicroState {
    pub dict: Dictionary,
    pub board: Board,
    pub rack: Rack,
}

fn pick(rng: &mut SplitMix64) -> Symbol {
    MICRO_ALPHABET[rng.below(MICRO_ALPHABET.len() as u64) as usize]
}

/// A small random position: tiles inside a region of at most 6x6, up to four
/// rack tiles, up to ten dictionary words of length 2..=6. Some words are
/// built around existing runs so that legal plays are common.
pub fn random_micro_state(rng: &mut SplitMix64) -> MicroState {
    let h = 1 + rng.below(6) as i32;
    let w = 1 + rng.below(6) as i32;
    let (top, left) = (rng.below(5) as i32 - 2, rng.below(5) as i32 - 2);
    let mut board = Board::new();
    // One state in twenty starts from an empty board.
    if rng.below(20) != 0 {
        let density = 1 + rng.below(4);
        for r in 0..h {
            for c in 0..w {
                if rng.below(8) < density {
                    board.set(Cell::new(top + r, left + c), pick(rng));
                }
            }
        }
        if board.is_empty() {
            board.set(Cell::new(top, left), pick(rng));
        }
    }
    let rack_len = rng.below(5) as usize;
    let letters: Vec<Symbol> = (0..rack_len).map(|_| pick(rng)).collect();

    let n_words = 1 + rng.below(10) as usize;
    let mut entries: BTreeSet<Vec<Symbol>> = BTreeSet::new();
    let tiles: Vec<(Cell, Symbol)> = board.iter().collect();
    while entries.len() < n_words {
        let len = 2 + rng.below(5) as usize;
        let word: Vec<Symbol> = if !tiles.is_empty() && rng.coin() {
            // Copy a stretch of the board along a line, filling holes from
            // the rack where possible.
            let (anchor, _) = tiles[rng.below(tiles.len() as u64) as usize];
            let horiz = rng.coin();
            let back = rng.below(len as u64) as i32;
            (0..len as i32)
                .map(|d| {
                    let off = d - back;
                    let cell = if horiz {
                        Cell::new(anchor.row, anchor.col + off)
                    } else {
                        Cell::new(anchor.row + off, anchor.col)
                    };
                    match board.get(cell) {
                        Some(s) => s,
                        None if !letters.is_empty() && rng.below(4) != 0 => {
                            letters[rng.below(letters.len() as u64) as usize]
                        }
                        None => pick(rng),
                    }
                })
                .collect()
        } else {
            (0..len).map(|_| pick(rng)).collect()
        };
        entries.insert(word);
    }
    let dict = Dictionary::from_words(entries.into_iter().map(|w| Word::new(w).unwrap())).unwrap();
    MicroState {
        dict,
        board,
        rack: Rack::new(letters, 4).unwrap(),
    }
}
