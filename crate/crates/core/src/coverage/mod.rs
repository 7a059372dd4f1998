//! Coverage patterns of the analysis runs and the tables built from them.
//!
//! A speed `s = q/r` is measured in hops of `1/(2r)` time. A pattern lists,
//! for each hop-sized subset of the optimal run, the fraction of periods in
//! which a run of the given type covers it. [`create_table`] sums `r`
//! shifted copies of a pattern and adds the mirror image, which gives the
//! combined coverage of the subintervals `w_0 .. w_{r(λ+1)}`.

mod average;
mod lemmas;
mod tables;

pub use average::{average_coverage, random_case, AverageCoverage, CoverageCase};
pub use lemmas::{lemma_ids, verify_lemma, LemmaCase, LemmaReport};
pub use tables::{table_ids, verify_table, Mismatch, TableReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RunType {
    A,
    B,
    C,
}

/// `s = q / r`, with `k` the excess over the nearest whole multiple of `r` below `s`
/// (`q - r` when `s < 2`, `q - 2r` from 2 on).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpeedForm {
    pub q: i128,
    pub r: i128,
    pub k: i128,
}

impl SpeedForm {
    pub fn new(q: i128, r: i128) -> Result<Self> {
        if q <= 0 || r <= 0 {
            return Err(Error::InvalidParameter(format!(
                "speed form needs q, r > 0, got {q}/{r}"
            )));
        }
        let k = if q < 2 * r { q - r } else { q - 2 * r };
        Ok(SpeedForm { q, r, k })
    }

    pub fn speed(&self) -> Rational {
        q(self.q, self.r)
    }

    /// The form a pattern of `run` needs: types B and C require `q + r`
    /// even, so an odd pair is doubled.
    pub fn for_run(&self, run: RunType) -> SpeedForm {
        if run != RunType::A && (self.q + self.r) % 2 != 0 {
            SpeedForm {
                q: 2 * self.q,
                r: 2 * self.r,
                k: 2 * self.k,
            }
        } else {
            *self
        }
    }
}

fn repeat(out: &mut Vec<Rational>, count: i128, value: Rational) {
    out.extend(std::iter::repeat_n(value, count.max(0) as usize));
}

/// The coverage pattern of `run` at speed `sf`.
///
/// A has length `q`, B has `2q - r` and C has `2q`.
pub fn pattern(run: RunType, sf: &SpeedForm) -> Result<Vec<Rational>> {
    let (qq, r) = (sf.q, sf.r);
    let s = sf.speed();
    let (lo, hi) = match run {
        RunType::A => (q(1, 1), q(6, 1)),
        RunType::B => (q(17, 7), q(3, 1)),
        RunType::C => (q(2, 1), q(17, 7)),
    };
    if s < lo || s > hi {
        return Err(Error::OutOfRange {
            what: "speed",
            value: s,
            lo,
            hi,
        });
    }
    if run != RunType::A && (qq + r) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "type {run:?} patterns need q + r even, got {qq}/{r}"
        )));
    }
    let one = Rational::ONE;
    let half = q(1, 2);
    let mut out = Vec::new();
    match run {
        RunType::A if qq < 2 * r => {
            repeat(&mut out, r, one);
            repeat(&mut out, qq - r, half);
        }
        RunType::A => {
            repeat(&mut out, qq - r, one);
            repeat(&mut out, r, half);
        }
        RunType::B => {
            let third = q(1, 3);
            let two_thirds = q(2, 3);
            repeat(&mut out, (qq - r) / 2, third);
            repeat(&mut out, (qq - r) / 2, two_thirds);
            repeat(&mut out, r, one);
            repeat(&mut out, qq - 2 * r, two_thirds);
            repeat(&mut out, r, third);
        }
        RunType::C => {
            let quarter = q(1, 4);
            let three_quarters = q(3, 4);
            repeat(&mut out, r, quarter);
            repeat(&mut out, qq - 2 * r, half);
            repeat(&mut out, r, three_quarters);
            repeat(&mut out, qq - 2 * r, half);
            repeat(&mut out, 3 * r - qq, three_quarters);
            repeat(&mut out, qq - 2 * r, half);
            repeat(&mut out, r, quarter);
        }
    }
    Ok(out)
}

/// Forward, reversed and combined coverage at `i = 0 ..= r(λ+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageTable {
    pub lambda: i128,
    pub r: i128,
    pub forward: Vec<Rational>,
    pub reverse: Vec<Rational>,
    pub combined: Vec<Rational>,
}

/// `F(i) = sum_{j<r} C(i + j - delta)` with `C` zero outside the pattern,
/// `F^R(i) = F(r(λ+1) - i)`, and their sum.
pub fn create_table(p: &[Rational], delta: i128, r: i128, lambda: i128) -> CoverageTable {
    let n = r * (lambda + 1);
    let c = |i: i128| -> Rational {
        if i >= 0 && (i as usize) < p.len() {
            p[i as usize]
        } else {
            Rational::ZERO
        }
    };
    let forward: Vec<Rational> = (0..=n)
        .map(|i| (0..r).map(|j| c(i + j - delta)).sum())
        .collect();
    let reverse: Vec<Rational> = (0..=n).map(|i| forward[(n - i) as usize]).collect();
    let combined = forward.iter().zip(&reverse).map(|(a, b)| *a + *b).collect();
    CoverageTable {
        lambda,
        r,
        forward,
        reverse,
        combined,
    }
}
