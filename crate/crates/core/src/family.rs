//! Formula families for sweeps: an exhaustive small family and seeded
//! random formulas.

use std::collections::BTreeSet;

use crate::logic::{Clause, Cnf, Literal};
use crate::rng::SplitMix64;

/// All clauses over `x1..=n` up to slot order, as sorted literal triples.
fn canonical_clauses(n: u32) -> Vec<Clause> {
    let lits: Vec<Literal> = (1..=n)
        .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
        .collect();
    let mut out = BTreeSet::new();
    for a in 0..lits.len() {
        for b in a..lits.len() {
            for c in b..lits.len() {
                out.insert([lits[a], lits[b], lits[c]]);
            }
        }
    }
    out.into_iter().collect()
}

/// Every formula with `1..=max_vars` variables and `1..=max_clauses`
/// distinct canonical clauses, each using only variables up to its own
/// count. Ordered by variables, then clause count, then lexicographically;
/// truncated to `cap`.
pub fn exhaustive_family(max_vars: u32, max_clauses: usize, cap: usize) -> Vec<Cnf> {
    let mut out = Vec::new();
    for n in 1..=max_vars {
        let clauses = canonical_clauses(n);
        for m in 1..=max_clauses {
            let mut idx: Vec<usize> = (0..m).collect();
            if m > clauses.len() {
                continue;
            }
            loop {
                if out.len() >= cap {
                    return out;
                }
                let cs = idx.iter().map(|&i| clauses[i]).collect();
                out.push(Cnf::new(n, cs).expect("vars in range"));
                // Next m-combination of clause indices.
                let mut i = m;
                while i > 0 && idx[i - 1] == clauses.len() - m + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..m {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
    }
    out
}

/// Each slot: variable uniform in `1..=n`, then a fair coin for negation.
pub fn random_cnf(rng: &mut SplitMix64, n: u32, m: usize) -> Cnf {
    let clauses = (0..m)
        .map(|_| {
            [(); 3].map(|_| {
                let var = 1 + rng.below(n as u64) as u32;
                if rng.coin() {
                    Literal::neg(var)
                } else {
                    Literal::pos(var)
                }
            })
        })
        .collect();
    Cnf::new(n, clauses).expect("vars in range")
}

pub fn random_family(seed: u64, n: u32, m: usize, count: usize) -> Vec<Cnf> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| random_cnf(&mut rng, n, m)).collect()
}
