//! 3-CNF and 3-CNF-QBF formulas, DIMACS/QDIMACS parsing, and brute-force
//! truth oracles.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Value under an assignment bitmask (bit `var - 1` set means true).
    pub fn eval(self, assignment: u64) -> bool {
        let value = assignment >> (self.var - 1) & 1 == 1;
        value != self.negated
    }

    fn from_dimacs(v: i64) -> Literal {
        Literal {
            var: v.unsigned_abs() as u32,
            negated: v < 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

pub type Clause = [Literal; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: clause has {count} literals; only 3-CNF is accepted")]
    NotThreeCnf { line: usize, count: usize },
    #[error(
        "line {line}: quantifier prefix must alternate e/a one variable at a time from x1: {msg}"
    )]
    BadPrefix { line: usize, msg: String },
    #[error("literal x{var} exceeds the declared {n_vars} variables")]
    VarOutOfRange { var: u32, n_vars: u32 },
    #[error("{n_vars} variables exceed the oracle bound of {bound}")]
    TooManyVars { n_vars: u32, bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf {
    pub n_vars: u32,
    pub clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(n_vars: u32, clauses: Vec<Clause>) -> Result<Self, LogicError> {
        for lit in clauses.iter().flatten() {
            if lit.var == 0 || lit.var > n_vars {
                return Err(LogicError::VarOutOfRange {
                    var: lit.var,
                    n_vars,
                });
            }
        }
        Ok(Cnf { n_vars, clauses })
    }

    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// DIMACS text; clauses keep their three slots.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{} ", l.to_dimacs()));
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "({} ∨ {} ∨ {})", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

/// `∃x1 ∀x2 ∃x3 … matrix`, strictly alternating over all variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qbf {
    pub matrix: Cnf,
}

impl Qbf {
    pub fn new(matrix: Cnf) -> Self {
        Qbf { matrix }
    }

    pub fn n_vars(&self) -> u32 {
        self.matrix.n_vars
    }

    /// Variable `i` is existential iff `i` is odd.
    pub fn is_existential(var: u32) -> bool {
        var % 2 == 1
    }

    pub fn to_qdimacs(&self) -> String {
        let cnf = self.matrix.to_dimacs();
        let (header, body) = cnf.split_once('\n').expect("header line");
        let mut out = format!("{header}\n");
        for v in 1..=self.n_vars() {
            let q = if Qbf::is_existential(v) { 'e' } else { 'a' };
            out.push_str(&format!("{q} {v} 0\n"));
        }
        out.push_str(body);
        out
    }
}

struct Parsed {
    n_vars: u32,
    clauses: Vec<Clause>,
    prefix: Vec<(usize, char, Vec<i64>)>,
}

fn parse_common(text: &str, allow_prefix: bool) -> Result<Parsed, LogicError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut prefix = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    let mut pending_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let syntax = |msg: &str| LogicError::Syntax {
            line: line_no,
            msg: msg.to_string(),
        };
        if line.starts_with('p') {
            if header.is_some() {
                return Err(syntax("duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(syntax("expected `p cnf <vars> <clauses>`"));
            }
            let n = parts[2].parse().map_err(|_| syntax("bad variable count"))?;
            let m = parts[3].parse().map_err(|_| syntax("bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(syntax("data before `p cnf` header"));
        };
        if line.starts_with('e') || line.starts_with('a') {
            if !allow_prefix {
                return Err(syntax("quantifier line in a plain DIMACS file"));
            }
            if !clauses.is_empty() || !pending.is_empty() {
                return Err(LogicError::BadPrefix {
                    line: line_no,
                    msg: "quantifier after clauses".into(),
                });
            }
            let mut parts = line.split_whitespace();
            let q = parts.next().unwrap_or_default();
            if q != "e" && q != "a" {
                return Err(syntax("unknown quantifier"));
            }
            let nums = parts
                .map(|t| t.parse::<i64>().map_err(|_| syntax("bad variable")))
                .collect::<Result<Vec<_>, _>>()?;
            if nums.last() != Some(&0) {
                return Err(syntax("quantifier block must end with 0"));
            }
            let vars = nums[..nums.len() - 1].to_vec();
            if vars.iter().any(|&v| v < 1 || v > n_vars as i64) {
                return Err(syntax("quantified variable out of range"));
            }
            prefix.push((line_no, q.chars().next().unwrap_or('e'), vars));
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| syntax("bad literal"))?;
            if pending.is_empty() {
                pending_line = line_no;
            }
            if v == 0 {
                let count = pending.len();
                if count == 0 {
                    return Err(syntax("empty clause"));
                }
                if count > 3 {
                    return Err(LogicError::NotThreeCnf {
                        line: pending_line,
                        count,
                    });
                }
                let mut lits: Vec<Literal> = pending.drain(..).map(Literal::from_dimacs).collect();
                for l in &lits {
                    if l.var > n_vars {
                        return Err(LogicError::VarOutOfRange { var: l.var, n_vars });
                    }
                }
                while lits.len() < 3 {
                    lits.push(*lits.last().expect("non-empty"));
                }
                clauses.push([lits[0], lits[1], lits[2]]);
            } else {
                if v.unsigned_abs() > u32::MAX as u64 {
                    return Err(syntax("literal out of range"));
                }
                pending.push(v);
            }
        }
    }
    let Some((n_vars, m)) = header else {
        return Err(LogicError::Syntax {
            line: text.lines().count().max(1),
            msg: "missing `p cnf` header".into(),
        });
    };
    if !pending.is_empty() {
        return Err(LogicError::Syntax {
            line: pending_line,
            msg: "clause not terminated by 0".into(),
        });
    }
    if clauses.len() != m {
        return Err(LogicError::Syntax {
            line: text.lines().count().max(1),
            msg: format!(
                "header declares {m} clauses but {} were read",
                clauses.len()
            ),
        });
    }
    Ok(Parsed {
        n_vars,
        clauses,
        prefix,
    })
}

/// Parses DIMACS CNF. Clauses shorter than three literals are padded by
/// repeating their last literal.
pub fn parse_dimacs(text: &str) -> Result<Cnf, LogicError> {
    let p = parse_common(text, false)?;
    Cnf::new(p.n_vars, p.clauses)
}

/// Parses QDIMACS whose prefix is `e 1 0`, `a 2 0`, `e 3 0`, … covering every
/// variable in order.
pub fn parse_qdimacs(text: &str) -> Result<Qbf, LogicError> {
    let p = parse_common(text, true)?;
    let last_line = text.lines().count().max(1);
    for (i, (line, q, vars)) in p.prefix.iter().enumerate() {
        let var = i as i64 + 1;
        let want = if var % 2 == 1 { 'e' } else { 'a' };
        if vars.len() != 1 {
            return Err(LogicError::BadPrefix {
                line: *line,
                msg: "each block must quantify exactly one variable".into(),
            });
        }
        if *q != want || vars[0] != var {
            return Err(LogicError::BadPrefix {
                line: *line,
                msg: format!("expected `{want} {var} 0`"),
            });
        }
    }
    if p.prefix.len() != p.n_vars as usize {
        return Err(LogicError::BadPrefix {
            line: last_line,
            msg: format!("{} of {} variables quantified", p.prefix.len(), p.n_vars),
        });
    }
    Ok(Qbf::new(Cnf::new(p.n_vars, p.clauses)?))
}

pub const SAT_ORACLE_MAX_VARS: u32 = 24;
pub const QBF_ORACLE_MAX_VARS: u32 = 16;

/// Plain enumeration of all 2^n assignments.
pub fn sat_oracle(f: &Cnf) -> Result<bool, LogicError> {
    if f.n_vars > SAT_ORACLE_MAX_VARS {
        return Err(LogicError::TooManyVars {
            n_vars: f.n_vars,
            bound: SAT_ORACLE_MAX_VARS,
        });
    }
    Ok((0..1u64 << f.n_vars).any(|a| f.satisfied_by(a)))
}

/// Recursive evaluation: odd variables are OR-nodes, even ones AND-nodes.
pub fn qbf_eval(q: &Qbf) -> Result<bool, LogicError> {
    if q.n_vars() > QBF_ORACLE_MAX_VARS {
        return Err(LogicError::TooManyVars {
            n_vars: q.n_vars(),
            bound: QBF_ORACLE_MAX_VARS,
        });
    }
    Ok(eval_from(q, 1, 0))
}

fn eval_from(q: &Qbf, var: u32, assignment: u64) -> bool {
    if var > q.n_vars() {
        return q.matrix.satisfied_by(assignment);
    }
    let f = eval_from(q, var + 1, assignment);
    let t = eval_from(q, var + 1, assignment | 1 << (var - 1));
    if Qbf::is_existential(var) {
        f || t
    } else {
        f && t
    }
}

/// A play of the quantifier game: existential values chosen to win if
/// possible, universal values chosen to refute if possible. Returns the full
/// assignment bitmask reached. On a true formula the result satisfies the
/// matrix; on a false one it falsifies it.
pub fn qbf_principal_assignment(q: &Qbf) -> Result<u64, LogicError> {
    qbf_eval(q)?;
    let mut assignment = 0u64;
    for var in 1..=q.n_vars() {
        let with_true = assignment | 1 << (var - 1);
        let true_wins = eval_from(q, var + 1, with_true);
        let false_wins = eval_from(q, var + 1, assignment);
        // Existential prefers false unless only true wins; universal prefers
        // false unless only true refutes.
        let pick_true = if Qbf::is_existential(var) {
            true_wins && !false_wins
        } else {
            false_wins && !true_wins
        };
        if pick_true {
            assignment = with_true;
        }
    }
    Ok(assignment)
}

/// Every clause followed immediately by a copy of itself.
pub fn duplicate_clauses(f: &Cnf) -> Cnf {
    let clauses = f.clauses.iter().flat_map(|c| [*c, *c]).collect();
    Cnf {
        n_vars: f.n_vars,
        clauses,
    }
}
