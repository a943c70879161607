//! Instance files and ASCII board rendering.
//!
//! ```text
//! % comment
//! [meta]
//! k=4
//! mode=solitaire
//! exchanges=0
//! separate_bags=0
//! scores=0,0
//! active=1
//! passes=0
//! [dictionary]
//! @ x1 x1 $ $ $
//! [board]
//! 0 0 @
//! [bag]
//! x2 $ $ $
//! [bag2]
//! [racks]
//! x1 $ $ $
//! -
//! ```
//!
//! Bag lines concatenate in draw order. `[racks]` holds exactly two lines;
//! `-` marks an empty rack. `[bag2]` is written only with separate bags.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    parse_symbol, Bag, Board, Cell, Dictionary, Instance, Mode, Placement, Player, Rack, Symbol,
    VariantConfig, Word, MAX_PASS_STREAK,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

fn tokens(seq: &[Symbol]) -> String {
    seq.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let v = inst.variant;
    let mode = match v.mode {
        Mode::Solitaire => "solitaire",
        Mode::TwoPlayer => "two_player",
    };
    // Writes into a String cannot fail.
    let _ = writeln!(out, "[meta]");
    let _ = writeln!(out, "k={}", inst.k);
    let _ = writeln!(out, "mode={mode}");
    let _ = writeln!(out, "exchanges={}", v.exchanges_allowed as u8);
    let _ = writeln!(out, "separate_bags={}", v.separate_bags as u8);
    let _ = writeln!(out, "scores={},{}", inst.scores[0], inst.scores[1]);
    let _ = writeln!(out, "active={}", inst.active.number());
    let _ = writeln!(out, "passes={}", inst.pass_streak);
    out.push_str("[dictionary]\n");
    for w in inst.dictionary.iter() {
        let _ = writeln!(out, "{w}");
    }
    out.push_str("[board]\n");
    for (c, s) in inst.board.iter() {
        let _ = writeln!(out, "{} {} {s}", c.row, c.col);
    }
    out.push_str("[bag]\n");
    if !inst.bag.is_empty() {
        let _ = writeln!(out, "{}", tokens(inst.bag.seq()));
    }
    if v.separate_bags {
        out.push_str("[bag2]\n");
        if !inst.bag2.is_empty() {
            let _ = writeln!(out, "{}", tokens(inst.bag2.seq()));
        }
    }
    out.push_str("[racks]\n");
    for r in &inst.racks {
        if r.is_empty() {
            out.push_str("-\n");
        } else {
            let _ = writeln!(out, "{}", tokens(r.letters()));
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Section {
    Meta,
    Dictionary,
    Board,
    Bag,
    Bag2,
    Racks,
}

fn parse_tokens(line_no: usize, text: &str) -> Result<Vec<Symbol>, ParseError> {
    text.split_whitespace()
        .map(|t| parse_symbol(t).map_err(|e| err(line_no, e.to_string())))
        .collect()
}

fn parse_bit(line_no: usize, key: &str, v: &str) -> Result<bool, ParseError> {
    match v {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(err(line_no, format!("{key} must be 0 or 1"))),
    }
}

pub fn read_instance(text: &str) -> Result<Instance, ParseError> {
    let mut section = None;
    let mut seen = Vec::new();
    let mut meta: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut dictionary = Dictionary::new();
    let mut board = Board::new();
    let mut bags: [Vec<Symbol>; 2] = [Vec::new(), Vec::new()];
    let mut racks: Vec<(usize, Vec<Symbol>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let s = match name {
                "meta" => Section::Meta,
                "dictionary" => Section::Dictionary,
                "board" => Section::Board,
                "bag" => Section::Bag,
                "bag2" => Section::Bag2,
                "racks" => Section::Racks,
                _ => return Err(err(n, format!("unknown section [{name}]"))),
            };
            if seen.contains(&s) {
                return Err(err(n, format!("repeated section [{name}]")));
            }
            seen.push(s);
            section = Some(s);
            continue;
        }
        match section {
            None => return Err(err(n, "content before the first section")),
            Some(Section::Meta) => {
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| err(n, "expected key=value"))?;
                let k = k.trim().to_string();
                if meta.insert(k.clone(), (n, v.trim().to_string())).is_some() {
                    return Err(err(n, format!("duplicate key {k}")));
                }
            }
            Some(Section::Dictionary) => {
                let w = Word::new(parse_tokens(n, line)?).map_err(|e| err(n, e.to_string()))?;
                dictionary.insert(w).map_err(|e| err(n, e.to_string()))?;
            }
            Some(Section::Board) => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                let [r, c, t] = parts[..] else {
                    return Err(err(n, "board lines are `<row> <col> <token>`"));
                };
                let row = r.parse().map_err(|_| err(n, format!("bad row {r:?}")))?;
                let col = c.parse().map_err(|_| err(n, format!("bad column {c:?}")))?;
                let sym = parse_symbol(t).map_err(|e| err(n, e.to_string()))?;
                let cell = Cell::new(row, col);
                if board.set(cell, sym).is_some() {
                    return Err(err(n, format!("duplicate cell {cell}")));
                }
            }
            Some(Section::Bag) => bags[0].extend(parse_tokens(n, line)?),
            Some(Section::Bag2) => bags[1].extend(parse_tokens(n, line)?),
            Some(Section::Racks) => {
                let letters = if line == "-" {
                    Vec::new()
                } else {
                    parse_tokens(n, line)?
                };
                if racks.len() == 2 {
                    return Err(err(n, "more than two rack lines"));
                }
                racks.push((n, letters));
            }
        }
    }

    let end = text.lines().count();
    let mut take = |key: &str| {
        meta.remove(key)
            .ok_or_else(|| err(end, format!("missing meta key {key}")))
    };
    let (ln, v) = take("k")?;
    let k: usize = v
        .parse()
        .map_err(|_| err(ln, "k must be a positive integer"))?;
    if k == 0 {
        return Err(err(ln, "k must be a positive integer"));
    }
    let (ln, v) = take("mode")?;
    let mode = match v.as_str() {
        "solitaire" => Mode::Solitaire,
        "two_player" => Mode::TwoPlayer,
        _ => return Err(err(ln, "mode must be solitaire or two_player")),
    };
    let (ln, v) = take("exchanges")?;
    let exchanges_allowed = parse_bit(ln, "exchanges", &v)?;
    let (ln, v) = take("separate_bags")?;
    let separate_bags = parse_bit(ln, "separate_bags", &v)?;
    let (ln, v) = take("scores")?;
    let scores = v
        .split_once(',')
        .and_then(|(a, b)| Some([a.trim().parse().ok()?, b.trim().parse().ok()?]))
        .ok_or_else(|| err(ln, "scores must be `<int>,<int>`"))?;
    let (ln, v) = take("active")?;
    let active = match v.as_str() {
        "1" => Player::P1,
        "2" => Player::P2,
        _ => return Err(err(ln, "active must be 1 or 2")),
    };
    let (ln, v) = take("passes")?;
    let pass_streak: u8 = v
        .parse()
        .ok()
        .filter(|p| *p <= MAX_PASS_STREAK)
        .ok_or_else(|| err(ln, format!("passes must be in 0..={MAX_PASS_STREAK}")))?;
    if let Some((key, (ln, _))) = meta.into_iter().next() {
        return Err(err(ln, format!("unknown meta key {key}")));
    }
    if racks.len() != 2 {
        return Err(err(end, "[racks] needs one line per player"));
    }
    let mut rack_vals = Vec::new();
    for (ln, letters) in racks {
        rack_vals.push(Rack::new(letters, k).map_err(|e| err(ln, e.to_string()))?);
    }
    let [b1, b2] = bags;
    let inst = Instance {
        dictionary,
        k,
        board,
        bag: Bag::new(b1),
        bag2: Bag::new(b2),
        racks: [rack_vals[0].clone(), rack_vals[1].clone()],
        scores,
        variant: VariantConfig {
            mode,
            exchanges_allowed,
            separate_bags,
        },
        active,
        pass_streak,
    };
    inst.validate().map_err(|e| err(end, e.to_string()))?;
    Ok(inst)
}

/// Fixed-width grid over the bounding box with row and column indices on
/// the margins; `.` marks empty cells. Highlighted cells are bracketed.
pub fn render_board(board: &Board, highlight: Option<&Placement>) -> String {
    let mut shown = board.clone();
    let mut marked = Vec::new();
    if let Some(p) = highlight {
        for &(c, s) in &p.tiles {
            shown.set(c, s);
            marked.push(c);
        }
    }
    let Some((lo, hi)) = shown.bounds() else {
        return "(empty board)\n".to_string();
    };
    let mut w = 1;
    for (_, s) in shown.iter() {
        w = w.max(s.to_string().len());
    }
    for col in lo.col..=hi.col {
        w = w.max(col.to_string().len());
    }
    let lw = (lo.row..=hi.row)
        .map(|r| r.to_string().len())
        .max()
        .unwrap_or(1);
    let boxed = highlight.is_some();
    let field = |text: &str, mark: bool| -> String {
        if !boxed {
            format!("{text:<w$}")
        } else if mark {
            format!("{:<width$}", format!("[{text}]"), width = w + 2)
        } else {
            format!("{:<width$}", format!(" {text} "), width = w + 2)
        }
    };
    let mut out = String::new();
    let header: Vec<String> = (lo.col..=hi.col)
        .map(|c| field(&c.to_string(), false))
        .collect();
    let _ = writeln!(out, "{:>lw$}  {}", "", header.join(" ").trim_end());
    for row in lo.row..=hi.row {
        let cells: Vec<String> = (lo.col..=hi.col)
            .map(|col| {
                let c = Cell::new(row, col);
                let text = shown.get(c).map_or(".".to_string(), |s| s.to_string());
                field(&text, marked.contains(&c))
            })
            .collect();
        let _ = writeln!(out, "{row:>lw$}  {}", cells.join(" ").trim_end());
    }
    out
}
