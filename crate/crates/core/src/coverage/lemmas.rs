//! Minimum-yield inequalities over weighted run ensembles.

use rayon::prelude::*;
use serde::Serialize;

use super::tables::b_delta;
use super::{create_table, pattern, RunType, SpeedForm};
use crate::error::{Error, Result};
use crate::rational::{q, Rational};

struct Term {
    weight: Rational,
    run: RunType,
    delta: i128,
}

struct LemmaDef {
    id: &'static str,
    lambda: i128,
    /// `q` as a function of `(r, k)`.
    q_of: fn(i128, i128) -> i128,
    /// Valid `k` for a given `r`.
    ks: fn(i128) -> Vec<i128>,
    terms: fn(i128, i128) -> Vec<Term>,
    bound: fn(i128, i128) -> Rational,
}

fn term(weight: i128, run: RunType, delta: i128) -> Term {
    Term {
        weight: Rational::integer(weight),
        run,
        delta,
    }
}

fn int(x: i128) -> Rational {
    Rational::integer(x)
}

fn defs() -> Vec<LemmaDef> {
    let below_two = |r: i128, k: i128| r + k;
    let above_two = |r: i128, k: i128| 2 * r + k;
    vec![
        LemmaDef {
            id: "L5.1",
            lambda: 2,
            q_of: below_two,
            ks: |r| (0..=r).collect(),
            terms: |r, k| {
                vec![
                    term(2, RunType::A, 0),
                    term(1, RunType::A, r - k),
                    term(1, RunType::A, 2 * r - k),
                ]
            },
            bound: |r, k| int(2 * r + k),
        },
        LemmaDef {
            id: "LA.1",
            lambda: 2,
            q_of: above_two,
            ks: |r| (0..=r).filter(|k| 2 * k <= r).collect(),
            terms: |r, k| vec![term(3, RunType::A, 0), term(1, RunType::A, r - 2 * k)],
            bound: |r, k| int(3 * r + 2 * k),
        },
        LemmaDef {
            id: "T5.5",
            lambda: 2,
            q_of: above_two,
            ks: |r| (r..=3 * r).collect(),
            terms: |_, _| vec![term(1, RunType::A, 0)],
            bound: |r, k| q(2 * r + k, 2) - q(r, 2),
        },
        LemmaDef {
            id: "LB.1",
            lambda: 3,
            q_of: below_two,
            ks: |r| (0..=r).collect(),
            terms: |r, k| {
                vec![
                    term(2, RunType::A, 0),
                    term(1, RunType::A, r - k),
                    term(1, RunType::A, 2 * r - k),
                    term(1, RunType::A, 3 * r - k),
                ]
            },
            bound: |r, k| int(2 * r + k),
        },
        LemmaDef {
            id: "LC.1",
            lambda: 3,
            q_of: above_two,
            ks: |r| (0..=r).filter(|k| 3 * k <= r && (r + k) % 2 == 0).collect(),
            terms: |r, k| vec![term(1, RunType::A, 0), term(2, RunType::C, (3 * r - k) / 2)],
            bound: |r, k| int(2 * r + k),
        },
        LemmaDef {
            id: "LD.1",
            lambda: 3,
            q_of: above_two,
            ks: |r| {
                (0..=r)
                    .filter(|k| 3 * k >= r && 7 * k <= 3 * r && (r + k) % 2 == 0)
                    .collect()
            },
            terms: |r, k| {
                vec![
                    term(k, RunType::A, 0),
                    term(r - k, RunType::C, 2 * r - 2 * k),
                ]
            },
            bound: |r, k| q(3 * r * r + k * k, 4),
        },
        LemmaDef {
            id: "LE.1",
            lambda: 3,
            q_of: above_two,
            ks: |r| {
                (0..=r)
                    .filter(|k| 7 * k >= 3 * r && (r + k) % 2 == 0)
                    .collect()
            },
            terms: |r, k| {
                vec![
                    term(6 * r - 4 * k, RunType::A, 0),
                    term(3 * r - 3 * k, RunType::B, b_delta(r, k)),
                ]
            },
            bound: |r, k| int(6 * r * r - 2 * r * k - 2 * k * k),
        },
        LemmaDef {
            id: "T7.7",
            lambda: 3,
            q_of: above_two,
            ks: |r| (2 * r..=4 * r).collect(),
            terms: |_, _| vec![term(1, RunType::A, 0)],
            bound: |r, k| q(2 * r + k, 2) - int(r),
        },
    ]
}

/// Identifiers accepted by [`verify_lemma`].
pub fn lemma_ids() -> Vec<&'static str> {
    defs().iter().map(|d| d.id).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCase {
    pub r: i128,
    pub k: i128,
    pub bound: Rational,
    pub min: Rational,
    /// First subinterval attaining the minimum.
    pub argmin: i128,
}

impl LemmaCase {
    pub fn tight(&self) -> bool {
        self.min == self.bound
    }

    pub fn violated(&self) -> bool {
        self.min < self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub id: String,
    pub r_max: i128,
    pub cases: Vec<LemmaCase>,
}

impl LemmaReport {
    pub fn violations(&self) -> usize {
        self.cases.iter().filter(|c| c.violated()).count()
    }

    pub fn non_tight(&self) -> usize {
        self.cases.iter().filter(|c| !c.tight()).count()
    }

    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.violations() == 0 && self.non_tight() == 0
    }
}

fn yields(def: &LemmaDef, terms: &[Term], r: i128, k: i128) -> Result<Vec<Rational>> {
    let sf = SpeedForm::new((def.q_of)(r, k), r)?;
    let n = r * (def.lambda + 1);
    let mut total = vec![Rational::ZERO; (n + 1) as usize];
    for t in terms {
        let p = pattern(t.run, &sf)?;
        let table = create_table(&p, t.delta, r, def.lambda);
        for (acc, v) in total.iter_mut().zip(&table.combined) {
            *acc += t.weight * *v;
        }
    }
    Ok(total)
}

/// Minimum weighted yield over `i = 0 ..= r(λ+1)` against the lemma's
/// bound, for every valid `(r, k)` with `r <= r_max`.
pub fn verify_lemma(id: &str, r_max: i128) -> Result<LemmaReport> {
    if r_max < 1 {
        return Err(Error::InvalidParameter(format!(
            "r_max must be at least 1, got {r_max}"
        )));
    }
    let all = defs();
    let def = all
        .iter()
        .find(|d| d.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownId(id.to_string()))?;
    let pairs: Vec<(i128, i128)> = (1..=r_max)
        .flat_map(|r| (def.ks)(r).into_iter().map(move |k| (r, k)))
        .collect();
    let cases = pairs
        .par_iter()
        .map(|&(r, k)| {
            let total = yields(def, &(def.terms)(r, k), r, k)?;
            let min = *total.iter().min().expect("at least one subinterval");
            let argmin = total.iter().position(|v| *v == min).expect("present") as i128;
            Ok(LemmaCase {
                r,
                k,
                bound: (def.bound)(r, k),
                min,
                argmin,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaReport {
        id: def.id.to_string(),
        r_max,
        cases,
    })
}
