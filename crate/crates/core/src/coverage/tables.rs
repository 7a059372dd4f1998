//! Closed-form coverage tables, checked point by point against [`create_table`].
//!
//! Each table covers a family of speeds parameterized by integers `r` and `k`
//! and lists, per run pair, a piecewise-linear value in `i` on closed
//! sub-ranges. A point on a shared endpoint is checked against both rows.

use rayon::prelude::*;
use serde::Serialize;

use super::{create_table, pattern, RunType, SpeedForm};
use crate::error::{Error, Result};
use crate::rational::{q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Forward,
    Reverse,
    Combined,
}

/// `c0 + c1 * i` on `lo <= i <= hi`.
#[derive(Clone, Copy, Debug)]
struct Row {
    lo: Rational,
    hi: Rational,
    c0: Rational,
    c1: Rational,
}

struct RunRows {
    label: String,
    run: RunType,
    delta: i128,
    part: Part,
    rows: Vec<Row>,
}

struct TableDef {
    id: &'static str,
    lambda: i128,
    /// `q` as a function of `(r, k)`.
    q_of: fn(i128, i128) -> i128,
    applies: fn(i128, i128) -> bool,
    runs: fn(i128, i128) -> Vec<RunRows>,
}

fn row(lo: Rational, hi: Rational, c0: Rational, c1: Rational) -> Row {
    Row { lo, hi, c0, c1 }
}

fn runs(label: &str, run: RunType, delta: i128, part: Part, rows: Vec<Row>) -> RunRows {
    RunRows {
        label: label.to_string(),
        run,
        delta,
        part,
        rows,
    }
}

fn z() -> Rational {
    Rational::ZERO
}

fn rk(r: i128, k: i128) -> (Rational, Rational) {
    (Rational::integer(r), Rational::integer(k))
}

fn h() -> Rational {
    q(1, 2)
}

fn t4(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let two = Rational::integer(2);
    vec![
        runs(
            "A_{r-k}",
            RunType::A,
            r0 - k0,
            Part::Forward,
            vec![
                row(z(), r - k, k, Rational::ONE),
                row(r - k, r, q(3, 2) * r - h() * k, -h()),
                row(r, two * r - k, two * r - h() * k, -Rational::ONE),
                row(two * r - k, two * r, r, -h()),
            ],
        ),
        runs(
            "A^R_{r-k}",
            RunType::A,
            r0 - k0,
            Part::Reverse,
            vec![
                row(r, r + k, -h() * r, h()),
                row(r + k, two * r, -r - h() * k, Rational::ONE),
                row(two * r, two * r + k, -h() * k, h()),
                row(
                    two * r + k,
                    Rational::integer(3) * r,
                    Rational::integer(3) * r + k,
                    -Rational::ONE,
                ),
            ],
        ),
    ]
}

fn t5(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let top = Rational::integer(3 * r0 / 2);
    let two = Rational::integer(2);
    vec![
        runs(
            "A",
            RunType::A,
            0,
            Part::Combined,
            vec![
                row(z(), k, r, -h()),
                row(k, r, r + h() * k, -Rational::ONE),
                row(r, r + k, h() * r + h() * k, -h()),
                row(r + k, top, z(), z()),
            ],
        ),
        runs(
            "A_{r-k}",
            RunType::A,
            r0 - k0,
            Part::Combined,
            vec![
                row(z(), r - k, k, Rational::ONE),
                row(r - k, r + k, q(3, 2) * r - h() * k, -h()),
                row(r + k, top, r - k, z()),
            ],
        ),
        runs(
            "A_{2r-k}",
            RunType::A,
            2 * r0 - k0,
            Part::Combined,
            vec![
                row(z(), k, z(), h()),
                row(k, r - k, -h() * k, Rational::ONE),
                row(r - k, r, -r + h() * k, two),
                row(r, r + k, -h() * r + h() * k, q(3, 2)),
                row(r + k, top, r + two * k, z()),
            ],
        ),
    ]
}

fn t6(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let top = Rational::integer(3 * r0 / 2);
    let two = Rational::integer(2);
    vec![
        runs(
            "A",
            RunType::A,
            0,
            Part::Combined,
            vec![
                row(z(), k, r, -h()),
                row(k, r, r + h() * k, -Rational::ONE),
                row(r, two * r - k, h() * r + h() * k, -h()),
                row(two * r - k, top, k - h() * r, z()),
            ],
        ),
        runs(
            "A_{r-k}",
            RunType::A,
            r0 - k0,
            Part::Combined,
            vec![
                row(z(), r - k, k, Rational::ONE),
                row(r - k, two * r - k, q(3, 2) * r - h() * k, -h()),
                row(two * r - k, top, h() * r, z()),
            ],
        ),
        runs(
            "A_{2r-k}",
            RunType::A,
            2 * r0 - k0,
            Part::Combined,
            vec![
                row(z(), r - k, z(), h()),
                row(r - k, k, -r + k, q(3, 2)),
                row(k, r, -r + h() * k, two),
                row(r, two * r - k, -h() * r + h() * k, q(3, 2)),
                row(two * r - k, top, q(5, 2) * r - k, z()),
            ],
        ),
    ]
}

fn t8(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let top = Rational::integer(3 * r0 / 2);
    let two = Rational::integer(2);
    vec![
        runs(
            "A",
            RunType::A,
            0,
            Part::Combined,
            vec![
                row(z(), k, r, z()),
                row(k, r - k, r + h() * k, -h()),
                row(r - k, top, h() * r + k, z()),
            ],
        ),
        runs(
            "A_{r-2k}",
            RunType::A,
            r0 - 2 * k0,
            Part::Combined,
            vec![
                row(z(), k, two * k, Rational::ONE),
                row(k, r - two * k, q(3, 2) * k, q(3, 2)),
                row(r - two * k, r - k, r - h() * k, h()),
                row(r - k, top, q(3, 2) * r - k, z()),
            ],
        ),
    ]
}

fn t9(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let top = Rational::integer(3 * r0 / 2);
    let two = Rational::integer(2);
    vec![runs(
        "A_{r-2k}",
        RunType::A,
        r0 - 2 * k0,
        Part::Combined,
        vec![
            row(z(), r - two * k, two * k, Rational::ONE),
            row(r - two * k, k, r, z()),
            row(k, r - k, r - h() * k, h()),
            row(r - k, top, q(3, 2) * r - k, z()),
        ],
    )]
}

fn a_first_two_lambda3(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let two = Rational::integer(2);
    vec![
        runs(
            "A",
            RunType::A,
            0,
            Part::Combined,
            vec![
                row(z(), k, r, -h()),
                row(k, r, r + h() * k, -Rational::ONE),
                row(r, r + k, h() * r + h() * k, -h()),
                row(r + k, two * r, z(), z()),
            ],
        ),
        runs(
            "A_{r-k}",
            RunType::A,
            r0 - k0,
            Part::Combined,
            vec![
                row(z(), r - k, k, Rational::ONE),
                row(r - k, r, q(3, 2) * r - h() * k, -h()),
                row(r, two * r - k, two * r - h() * k, -Rational::ONE),
                row(two * r - k, two * r, r, -h()),
            ],
        ),
    ]
}

fn t10(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let two = Rational::integer(2);
    let mut out = a_first_two_lambda3(r0, k0);
    out.push(runs(
        "A_{2r-k}",
        RunType::A,
        2 * r0 - k0,
        Part::Combined,
        vec![
            row(z(), r - k, z(), z()),
            row(r - k, r, -r + k, Rational::ONE),
            row(r, r + k, -q(3, 2) * r + k, q(3, 2)),
            row(r + k, two * r - k, -two * r + h() * k, two),
            row(two * r - k, two * r, r - k, h()),
        ],
    ));
    out.push(runs(
        "A_{3r-k}",
        RunType::A,
        3 * r0 - k0,
        Part::Combined,
        vec![
            row(z(), k, z(), h()),
            row(k, r, -h() * k, Rational::ONE),
            row(r, r + k, h() * r - h() * k, h()),
            row(r + k, two * r - k, two * r + k, -Rational::ONE),
            row(two * r - k, two * r, two * k, z()),
        ],
    ));
    out
}

fn t11(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let two = Rational::integer(2);
    vec![
        runs(
            "A_{2r-k}",
            RunType::A,
            2 * r0 - k0,
            Part::Combined,
            vec![
                row(z(), r - k, z(), z()),
                row(r - k, r, -r + k, Rational::ONE),
                row(r, two * r - k, -q(3, 2) * r + k, q(3, 2)),
                row(two * r - k, r + k, q(3, 2) * r - h() * k, z()),
                row(r + k, two * r, r - k, h()),
            ],
        ),
        runs(
            "A_{3r-k}",
            RunType::A,
            3 * r0 - k0,
            Part::Combined,
            vec![
                row(z(), k, z(), h()),
                row(k, r, -h() * k, Rational::ONE),
                row(r, two * r - k, h() * r - h() * k, h()),
                row(two * r - k, r + k, -q(3, 2) * r + h() * k, q(3, 2)),
                row(r + k, two * r, two * k, z()),
            ],
        ),
    ]
}

fn t12(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let two = Rational::integer(2);
    vec![
        runs(
            "A",
            RunType::A,
            0,
            Part::Combined,
            vec![
                row(z(), k, r, z()),
                row(k, two * r - k, r + h() * k, -h()),
                row(two * r - k, two * r, k, z()),
            ],
        ),
        runs(
            "C_{(3r-k)/2}",
            RunType::C,
            (3 * r0 - k0) / 2,
            Part::Combined,
            vec![
                row(z(), q(r0 - 3 * k0, 2), h() * r + h() * k, h()),
                row(
                    q(r0 - 3 * k0, 2),
                    q(r0 - k0, 2),
                    q(3, 4) * r - q(1, 4) * k,
                    z(),
                ),
                row(
                    q(r0 - k0, 2),
                    q(3 * r0 - 3 * k0, 2),
                    q(5, 8) * r - q(1, 8) * k,
                    q(1, 4),
                ),
                row(
                    q(3 * r0 - 3 * k0, 2),
                    q(3 * r0 - k0, 2),
                    q(1, 4) * r + q(1, 4) * k,
                    h(),
                ),
                row(q(3 * r0 - k0, 2), two * r, r, z()),
            ],
        ),
    ]
}

fn t13(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let two = Rational::integer(2);
    let quarter = q(1, 4);
    vec![runs(
        "C_{2r-2k}",
        RunType::C,
        2 * r0 - 2 * k0,
        Part::Combined,
        vec![
            row(z(), r - two * k, q(3, 4) * r - quarter * k, z()),
            row(r - two * k, r, h() * r + quarter * k, quarter),
            row(r, r + k, quarter * r + quarter * k, h()),
            row(r + k, two * r - k, q(3, 4) * r + q(3, 4) * k, z()),
            row(two * r - k, r + two * k, quarter * r + k, quarter),
            row(r + two * k, two * r, h() * r + q(3, 2) * k, z()),
        ],
    )]
}

/// Shift of the B run in the last two tables.
pub(crate) fn b_delta(r: i128, k: i128) -> i128 {
    3 * (r - k) / 2
}

fn b_rows(r0: i128, k0: i128, middle: Vec<Row>) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    let two = Rational::integer(2);
    let third = q(1, 3);
    let mut rows = vec![
        row(z(), r - k, q(2, 3) * k, q(2, 3)),
        row(
            r - k,
            q(r0 + k0, 2).min(q(3 * r0 - 3 * k0, 2)),
            -third * r + k,
            Rational::ONE,
        ),
    ];
    rows.extend(middle);
    rows.push(row(
        q(r0 + k0, 2).max(q(3 * r0 - 3 * k0, 2)),
        two * r - k,
        third * k,
        Rational::ONE,
    ));
    rows.push(row(two * r - k, q(3 * r0 + k0, 2), q(2, 3) * r, q(2, 3)));
    rows.push(row(
        q(3 * r0 + k0, 2),
        two * r,
        q(5, 3) * r + third * k,
        z(),
    ));
    vec![runs(
        "B_{3(r-k)/2}",
        RunType::B,
        b_delta(r0, k0),
        Part::Combined,
        rows,
    )]
}

fn t14(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    b_rows(
        r0,
        k0,
        vec![row(
            q(r0 + k0, 2),
            q(3 * r0 - 3 * k0, 2),
            -h() * r + q(5, 6) * k,
            q(4, 3),
        )],
    )
}

fn t15(r0: i128, k0: i128) -> Vec<RunRows> {
    let (r, k) = rk(r0, k0);
    b_rows(
        r0,
        k0,
        vec![row(
            q(3 * r0 - 3 * k0, 2),
            q(r0 + k0, 2),
            q(1, 6) * r + h() * k,
            q(2, 3),
        )],
    )
}

fn defs() -> Vec<TableDef> {
    let s1 = |r: i128, k: i128| r + k;
    let s2 = |r: i128, k: i128| 2 * r + k;
    vec![
        TableDef {
            id: "T4",
            lambda: 2,
            q_of: s1,
            applies: |_, _| true,
            runs: t4,
        },
        TableDef {
            id: "T5",
            lambda: 2,
            q_of: s1,
            applies: |r, k| k <= r - k,
            runs: t5,
        },
        TableDef {
            id: "T6",
            lambda: 2,
            q_of: s1,
            applies: |r, k| k >= r - k,
            runs: t6,
        },
        TableDef {
            id: "T8",
            lambda: 2,
            q_of: s2,
            applies: |r, k| k <= r - 2 * k,
            runs: t8,
        },
        TableDef {
            id: "T9",
            lambda: 2,
            q_of: s2,
            applies: |r, k| k >= r - 2 * k && 2 * k <= r,
            runs: t9,
        },
        TableDef {
            id: "T10",
            lambda: 3,
            q_of: s1,
            applies: |r, k| k <= r - k,
            runs: t10,
        },
        TableDef {
            id: "T11",
            lambda: 3,
            q_of: s1,
            applies: |r, k| k >= r - k,
            runs: t11,
        },
        TableDef {
            id: "T12",
            lambda: 3,
            q_of: s2,
            applies: |r, k| 3 * k <= r && (r + k) % 2 == 0,
            runs: t12,
        },
        TableDef {
            id: "T13",
            lambda: 3,
            q_of: s2,
            applies: |r, k| 3 * k >= r && 7 * k <= 3 * r && (r + k) % 2 == 0,
            runs: t13,
        },
        TableDef {
            id: "T14",
            lambda: 3,
            q_of: s2,
            applies: |r, k| 7 * k >= 3 * r && 2 * k <= r && (r + k) % 2 == 0,
            runs: t14,
        },
        TableDef {
            id: "T15",
            lambda: 3,
            q_of: s2,
            applies: |r, k| 2 * k >= r && (r + k) % 2 == 0,
            runs: t15,
        },
    ]
}

/// Identifiers accepted by [`verify_table`].
pub fn table_ids() -> Vec<&'static str> {
    defs().iter().map(|d| d.id).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub r: i128,
    pub k: i128,
    pub run: String,
    pub i: i128,
    pub expected: Rational,
    pub got: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub id: String,
    pub r_max: i128,
    /// `(r, k)` pairs checked.
    pub cases: usize,
    /// Individual `(r, k, run, i, row)` comparisons made.
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.cases > 0
    }
}

fn check_case(def: &TableDef, r: i128, k: i128) -> Result<(usize, Vec<Mismatch>)> {
    let n = r * (def.lambda + 1);
    let sf = SpeedForm::new((def.q_of)(r, k), r)?;
    let mut comparisons = 0;
    let mut bad = Vec::new();
    for rr in (def.runs)(r, k) {
        let p = pattern(rr.run, &sf)?;
        let table = create_table(&p, rr.delta, r, def.lambda);
        let (values, top) = match rr.part {
            Part::Forward => (&table.forward, n),
            Part::Reverse => (&table.reverse, n),
            Part::Combined => (&table.combined, n / 2),
        };
        for i in 0..=top {
            let ii = Rational::integer(i);
            for row in rr.rows.iter().filter(|row| row.lo <= ii && ii <= row.hi) {
                comparisons += 1;
                let expected = row.c0 + row.c1 * ii;
                let got = values[i as usize];
                if expected != got {
                    bad.push(Mismatch {
                        r,
                        k,
                        run: rr.label.clone(),
                        i,
                        expected,
                        got,
                    });
                }
            }
        }
    }
    Ok((comparisons, bad))
}

/// Compares every closed-form row of table `id` against [`create_table`]
/// for all valid `(r, k)` with `r <= r_max`.
pub fn verify_table(id: &str, r_max: i128) -> Result<TableReport> {
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
    let cases: Vec<(i128, i128)> = (1..=r_max)
        .flat_map(|r| (0..=r).map(move |k| (r, k)))
        .filter(|&(r, k)| (def.applies)(r, k))
        .collect();
    let results: Vec<(usize, Vec<Mismatch>)> = cases
        .par_iter()
        .map(|&(r, k)| check_case(def, r, k))
        .collect::<Result<_>>()?;
    let mut report = TableReport {
        id: def.id.to_string(),
        r_max,
        cases: cases.len(),
        comparisons: 0,
        mismatches: Vec::new(),
    };
    for (n, bad) in results {
        report.comparisons += n;
        report.mismatches.extend(bad);
    }
    Ok(report)
}
