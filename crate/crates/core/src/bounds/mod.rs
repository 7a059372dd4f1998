//! Fraction bounds, the max-min program over phase weights, and the ratio curve.

mod ffun;
mod lp;
mod table1;

pub use ffun::{breakpoints, domain_end, f, f_extended, table as f_branches, Branch, Breakpoint};
pub use lp::{b_coefficients, b_values, lp_rho, BValues, WeightTriple};
pub use table1::{
    boundary_samples, guarantee_fraction, ranges, ranges_at, table1_ratio, BoundarySample,
    SpeedRange,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The grid `1, 1 + step, ...` up to and including 6 when it lands there.
pub fn speed_grid(step: Rational) -> Result<Vec<Rational>> {
    if !step.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "grid step must be positive, got {step}"
        )));
    }
    let mut out = Vec::new();
    let mut s = Rational::ONE;
    while s <= Rational::integer(6) {
        out.push(s);
        s += step;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremRow {
    pub s: Rational,
    pub ratio: Rational,
    pub guarantee: Rational,
    pub lp_rho: Rational,
    /// Range whose interior holds `s`, if any.
    pub range: Option<usize>,
    pub weights: Option<WeightTriple>,
    pub min_b: Option<Rational>,
    pub closed_form: Option<Rational>,
    pub extended: bool,
    pub weights_feasible: bool,
    pub weights_exact: bool,
    pub lp_sound: bool,
}

impl TheoremRow {
    pub fn slack(&self) -> Rational {
        self.lp_rho - self.guarantee
    }

    pub fn passed(&self) -> bool {
        self.weights_feasible && self.weights_exact && self.lp_sound
    }
}

fn theorem_row(s: Rational) -> Result<TheoremRow> {
    let ratio = table1_ratio(s)?;
    let guarantee = ratio.recip();
    let (rho, _) = lp_rho(s)?;
    let all = ranges();
    let interior = all.iter().position(|r| r.lo < s && s < r.hi);
    let mut row = TheoremRow {
        s,
        ratio,
        guarantee,
        lp_rho: rho,
        range: interior,
        weights: None,
        min_b: None,
        closed_form: None,
        extended: false,
        weights_feasible: true,
        weights_exact: true,
        lp_sound: rho >= guarantee,
    };
    if let Some(idx) = interior {
        let range = &all[idx];
        let w = (range.weights)(s);
        let bv = b_values(s, &w)?;
        let closed = (range.ratio)(s).recip();
        row.weights = Some(w);
        row.min_b = Some(bv.min());
        row.closed_form = Some(closed);
        row.extended = bv.extended;
        row.weights_feasible = w.is_feasible();
        row.weights_exact = bv.min() == closed;
    }
    Ok(row)
}

/// Checks the range weights and the program optimum against the ratio curve
/// at every grid speed in `[1, 6]`.
pub fn verify_theorem91(grid_step: Rational) -> Result<Vec<TheoremRow>> {
    speed_grid(grid_step)?
        .into_par_iter()
        .map(theorem_row)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub checks: Vec<Check>,
    pub breakpoints: Vec<Breakpoint>,
    pub rows: Vec<TheoremRow>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Runs every bound property on the given grid.
pub fn verify_bounds(grid_step: Rational) -> Result<BoundsReport> {
    let mut checks = Vec::new();

    let bps = breakpoints();
    let broken: Vec<String> = bps
        .iter()
        .filter(|b| !b.agrees())
        .map(|b| {
            format!(
                "f{}({}): {} gives {}, {} gives {}",
                b.ell, b.s, b.left_tag, b.left, b.right_tag, b.right
            )
        })
        .collect();
    checks.push(check(
        "f-continuity",
        broken.is_empty(),
        if broken.is_empty() {
            format!("{} breakpoints agree", bps.len())
        } else {
            broken.join("; ")
        },
    ));

    let grid = speed_grid(grid_step)?;
    let mut drops = Vec::new();
    for ell in 1..=3u8 {
        let end = domain_end(ell)?;
        let values: Vec<(Rational, Rational)> = grid
            .iter()
            .filter(|&&s| s <= end)
            .map(|&s| f(ell, s).map(|v| (s, v)))
            .collect::<Result<_>>()?;
        for pair in values.windows(2) {
            if pair[1].1 < pair[0].1 {
                drops.push(format!("f{ell} drops at {}", pair[1].0));
            }
        }
    }
    checks.push(check(
        "f-monotone",
        drops.is_empty(),
        if drops.is_empty() {
            "nondecreasing on the grid".into()
        } else {
            drops.join("; ")
        },
    ));

    let rows = verify_theorem91(grid_step)?;
    let unsound: Vec<String> = rows
        .iter()
        .filter(|r| !r.lp_sound)
        .map(|r| r.s.to_string())
        .collect();
    checks.push(check(
        "lp-soundness",
        unsound.is_empty(),
        format!(
            "{} grid points, failures at [{}]",
            rows.len(),
            unsound.join(", ")
        ),
    ));
    let infeasible: Vec<String> = rows
        .iter()
        .filter(|r| !r.weights_feasible)
        .map(|r| r.s.to_string())
        .collect();
    checks.push(check(
        "weights-feasible",
        infeasible.is_empty(),
        format!("failures at [{}]", infeasible.join(", ")),
    ));
    let inexact: Vec<String> = rows
        .iter()
        .filter(|r| !r.weights_exact)
        .map(|r| r.s.to_string())
        .collect();
    let interior = rows.iter().filter(|r| r.range.is_some()).count();
    checks.push(check(
        "weights-exact",
        inexact.is_empty(),
        format!(
            "{interior} interior points, failures at [{}]",
            inexact.join(", ")
        ),
    ));

    let dominated: Vec<String> = rows
        .iter()
        .filter(|r| r.min_b.is_some_and(|b| r.lp_rho < b))
        .map(|r| r.s.to_string())
        .collect();
    checks.push(check(
        "lp-dominates-weights",
        dominated.is_empty(),
        format!("failures at [{}]", dominated.join(", ")),
    ));

    let int = Rational::integer;
    let spot = [
        (int(1), Rational::new(219, 52)),
        (int(6), Rational::ONE),
        (int(3), Rational::new(148, 81)),
        (int(4), Rational::new(3, 2)),
    ];
    let mut spot_fail = Vec::new();
    for (s, expected) in spot {
        let got = table1_ratio(s)?;
        if got != expected {
            spot_fail.push(format!("ratio({s}) = {got}, expected {expected}"));
        }
    }
    for s in [int(3), int(4)] {
        let sample = boundary_samples()
            .into_iter()
            .find(|b| b.s == s)
            .expect("endpoint");
        if sample.ratios.windows(2).any(|p| p[0] != p[1]) {
            spot_fail.push(format!(
                "adjacent forms disagree at {s}: {:?}",
                sample.ratios
            ));
        }
    }
    checks.push(check(
        "ratio-spot-values",
        spot_fail.is_empty(),
        if spot_fail.is_empty() {
            "all match".into()
        } else {
            spot_fail.join("; ")
        },
    ));

    Ok(BoundsReport {
        checks,
        breakpoints: bps,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn grid_has_101_points_at_a_twentieth() {
        let g = speed_grid(q(1, 20)).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(*g.last().unwrap(), Rational::integer(6));
    }

    #[test]
    fn first_range_is_tight() {
        let rows = verify_theorem91(q(1, 4)).unwrap();
        let row = rows.iter().find(|r| r.s == q(3, 2)).unwrap();
        assert_eq!(row.min_b, Some(q(65, 219)));
        assert_eq!(row.slack(), Rational::ZERO);
    }

    #[test]
    fn fourth_to_fifth_range_b3_binds() {
        let rows = verify_theorem91(q(1, 4)).unwrap();
        let row = rows.iter().find(|r| r.s == q(9, 2)).unwrap();
        let bv = b_values(row.s, &row.weights.unwrap()).unwrap();
        assert_eq!(bv.b[0], bv.b[4]);
        assert!(bv.b[1] > bv.b[0]);
    }
}
