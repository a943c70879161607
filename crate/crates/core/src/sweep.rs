//! End-to-end checks of single formulas: oracle, reduction, solver and the
//! facts harness must agree.

use std::fmt;

use crate::facts::verify_facts;
use crate::logic::{qbf_eval, qbf_principal_assignment, sat_oracle, Cnf, LogicError, Qbf};
use crate::reduction::{compile_qbf, compile_sat};
use crate::rules::Outcome;
use crate::search::{
    solve_game_with, solve_solitaire, SolitaireStatus, SolveError, SolveLimits, SolveOptions,
};

pub const DEFAULT_FACTS_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatCase {
    pub sat: bool,
    pub solvable: bool,
    pub witness_len: usize,
    pub facts_ok: bool,
}

impl SatCase {
    pub fn agree(&self) -> bool {
        self.sat == self.solvable && self.facts_ok
    }
}

impl fmt::Display for SatCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sat={} solvable={}", self.sat as u8, self.solvable as u8)?;
        if !self.facts_ok {
            f.write_str(" facts=fail")?;
        }
        f.write_str(if self.agree() { " AGREE" } else { " DISAGREE" })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CaseError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

pub fn verify_sat(f: &Cnf, limits: SolveLimits, facts_budget: usize) -> Result<SatCase, CaseError> {
    let sat = sat_oracle(f)?;
    let red = compile_sat(f);
    let res = solve_solitaire(&red.instance, limits)?;
    let (solvable, witness_len) = match res.status {
        SolitaireStatus::Solvable(w) => (true, w.len()),
        SolitaireStatus::Unsolvable => (false, 0),
        SolitaireStatus::LimitExceeded => {
            return Err(SolveError::LimitExceeded { nodes: res.nodes }.into())
        }
    };
    let facts_ok = verify_facts(&red, facts_budget).passed();
    Ok(SatCase {
        sat,
        solvable,
        witness_len,
        facts_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfCase {
    pub truth: bool,
    pub winner: Outcome,
    pub margin: i64,
    /// Final margin of the scripted game under the principal assignment.
    pub scripted_margin: i64,
    pub facts_ok: bool,
}

impl QbfCase {
    pub fn agree(&self) -> bool {
        let want = if self.truth {
            Outcome::P1Wins
        } else {
            Outcome::P2Wins
        };
        self.winner == want && self.facts_ok
    }
}

fn winner_token(o: Outcome) -> &'static str {
    match o {
        Outcome::P1Wins => "P1",
        Outcome::P2Wins => "P2",
        Outcome::Draw => "draw",
    }
}

impl fmt::Display for QbfCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "true={} winner={} margin={} scripted={}",
            self.truth as u8,
            winner_token(self.winner),
            self.margin,
            self.scripted_margin
        )?;
        if !self.facts_ok {
            f.write_str(" facts=fail")?;
        }
        f.write_str(if self.agree() { " AGREE" } else { " DISAGREE" })
    }
}

pub fn verify_qbf(
    q: &Qbf,
    limits: SolveLimits,
    opts: SolveOptions,
    facts_budget: usize,
) -> Result<QbfCase, CaseError> {
    let truth = qbf_eval(q)?;
    let red = compile_qbf(q);
    let res = solve_game_with(&red.instance, limits, opts)?;
    let assignment = qbf_principal_assignment(&Qbf::new(red.formula.clone()))?;
    let scripted_margin = match red.scripted_game(assignment) {
        Ok((_, end)) => end.margin(),
        // An illegal scripted move is a construction bug; report it as a
        // margin no correct game can reach.
        Err(_) => i64::MIN,
    };
    let facts_ok = verify_facts(&red, facts_budget).passed();
    Ok(QbfCase {
        truth,
        winner: res.winner,
        margin: res.margin,
        scripted_margin,
        facts_ok,
    })
}
