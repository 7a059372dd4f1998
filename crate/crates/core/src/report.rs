//! CSV renderings of verification and solver results.

use serde::Serialize;

use crate::bounds::{BoundsReport, TheoremRow};
use crate::coverage::{LemmaReport, TableReport};
use crate::error::{Error, Result};
use crate::model::{Instance, NodeId, ServiceRun};
use crate::rational::Rational;
use crate::trimming::TrimmedInstance;
use crate::w12::W12Report;

fn render<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Report(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

#[derive(Serialize)]
struct MismatchRow<'a> {
    table: &'a str,
    r: i128,
    k: i128,
    run: &'a str,
    i: i128,
    expected: Rational,
    got: Rational,
}

/// One line per mismatching entry; only a header when the table checks out.
pub fn table_mismatches_csv(reports: &[TableReport]) -> Result<String> {
    let rows = reports.iter().flat_map(|rep| {
        rep.mismatches.iter().map(move |m| MismatchRow {
            table: &rep.id,
            r: m.r,
            k: m.k,
            run: &m.run,
            i: m.i,
            expected: m.expected,
            got: m.got,
        })
    });
    with_header(render(rows)?, "table,r,k,run,i,expected,got")
}

#[derive(Serialize)]
struct LemmaRow<'a> {
    lemma: &'a str,
    r: i128,
    k: i128,
    bound: Rational,
    min: Rational,
    argmin: i128,
    tight: bool,
}

pub fn lemma_cases_csv(reports: &[LemmaReport]) -> Result<String> {
    let rows = reports.iter().flat_map(|rep| {
        rep.cases.iter().map(move |c| LemmaRow {
            lemma: &rep.id,
            r: c.r,
            k: c.k,
            bound: c.bound,
            min: c.min,
            argmin: c.argmin,
            tight: c.tight(),
        })
    });
    with_header(render(rows)?, "lemma,r,k,bound,min,argmin,tight")
}

#[derive(Serialize)]
struct RatioRow {
    s: Rational,
    table1_ratio: Rational,
    lp_rho: Rational,
    weights_min_b: Option<Rational>,
    slack: Rational,
}

/// Per-speed ratio, LP optimum, the stated weights' minimum and the gap
/// between the LP optimum and the guaranteed fraction.
pub fn theorem_rows_csv(rows: &[TheoremRow]) -> Result<String> {
    let out = rows.iter().map(|row| RatioRow {
        s: row.s,
        table1_ratio: row.ratio,
        lp_rho: row.lp_rho,
        weights_min_b: row.min_b,
        slack: row.slack(),
    });
    with_header(render(out)?, "s,table1_ratio,lp_rho,weights_min_b,slack")
}

#[derive(Serialize)]
struct OutcomeRow {
    alpha: Rational,
    offset: Rational,
    j: u8,
    k: u8,
    shift: Rational,
    dropped: usize,
    trimmed_profit: Rational,
    original_profit: Rational,
    chosen: bool,
}

pub fn w12_csv(report: &W12Report) -> Result<String> {
    let rows = report
        .outcomes
        .iter()
        .enumerate()
        .map(|(idx, o)| OutcomeRow {
            alpha: o.config.alpha,
            offset: o.config.offset,
            j: o.config.j,
            k: o.config.k,
            shift: o.shift,
            dropped: o.dropped,
            trimmed_profit: o.trimmed_profit,
            original_profit: o.original_profit,
            chosen: idx == report.best,
        });
    with_header(
        render(rows)?,
        "alpha,offset,j,k,shift,dropped,trimmed_profit,original_profit,chosen",
    )
}

#[derive(Serialize)]
struct TrimRow {
    id: u32,
    class: i128,
    period: Option<i128>,
    release: Option<Rational>,
    deadline: Option<Rational>,
}

pub fn trim_csv(tr: &TrimmedInstance) -> Result<String> {
    let rows = tr.entries.iter().map(|e| TrimRow {
        id: e.id,
        class: e.class,
        period: e.period,
        release: e.window.map(|w| w.release),
        deadline: e.window.map(|w| w.deadline()),
    });
    with_header(render(rows)?, "id,class,period,release,deadline")
}

#[derive(Serialize)]
struct CheckRow<'a> {
    check: &'a str,
    passed: bool,
    detail: &'a str,
}

pub fn bounds_checks_csv(report: &BoundsReport) -> Result<String> {
    let rows = report.checks.iter().map(|c| CheckRow {
        check: &c.name,
        passed: c.passed,
        detail: &c.detail,
    });
    with_header(render(rows)?, "check,passed,detail")
}

#[derive(Serialize)]
struct EventRow {
    step: usize,
    node: NodeId,
    arrival: Rational,
    departure: Rational,
}

pub fn run_csv(run: &ServiceRun) -> Result<String> {
    let rows = run.events.iter().enumerate().map(|(step, e)| EventRow {
        step,
        node: e.node,
        arrival: e.arrival,
        departure: e.departure,
    });
    with_header(render(rows)?, "step,node,arrival,departure")
}

#[derive(Serialize)]
struct RequestRow {
    id: u32,
    node: NodeId,
    release: Rational,
    length: Rational,
    profit: Rational,
}

pub fn requests_csv(inst: &Instance) -> Result<String> {
    let rows = inst.requests().iter().map(|r| RequestRow {
        id: r.id,
        node: r.node,
        release: r.window.release,
        length: r.window.length,
        profit: r.profit,
    });
    with_header(render(rows)?, "id,node,release,length,profit")
}

// The csv writer only emits a header alongside the first record.
fn with_header(body: String, header: &str) -> Result<String> {
    if body.is_empty() {
        Ok(format!("{header}\n"))
    } else {
        Ok(body)
    }
}
