use serde::Serialize;

use super::ffun::f_extended;
use crate::error::Result;
use crate::rational::{q, Rational};

/// Mixing weights over the three trimming phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightTriple {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl WeightTriple {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        WeightTriple { x, y, z }
    }

    pub fn sum(&self) -> Rational {
        self.x + self.y + self.z
    }

    pub fn is_feasible(&self) -> bool {
        !self.x.is_negative()
            && !self.y.is_negative()
            && !self.z.is_negative()
            && self.sum() <= Rational::ONE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BValues {
    /// `b_3` through `b_7`.
    pub b: [Rational; 5],
    /// Whether any `f` was evaluated past its stated domain.
    pub extended: bool,
}

impl BValues {
    pub fn min(&self) -> Rational {
        *self.b.iter().min().expect("five values")
    }
}

/// Coefficients of `x`, `y`, `z` in each of `b_3 .. b_7`.
pub fn b_coefficients(s: Rational) -> Result<([[Rational; 3]; 5], bool)> {
    let (f1, e1) = f_extended(1, s)?;
    let (f2, e2) = f_extended(2, s)?;
    let (f3, e3) = f_extended(3, s)?;
    let two = Rational::integer(2);
    let three = Rational::integer(3);
    let coeffs = [
        [f1, f1 / three, Rational::ZERO],
        [(f1 + f2) / two, two * f1 / three, f1 / Rational::integer(4)],
        [f2, f1, f1 / two],
        [(f2 + f3) / two, (two * f1 + f2) / three, q(3, 4) * f1],
        [f3, (f1 + two * f2) / three, f1],
    ];
    Ok((coeffs, e1 || e2 || e3))
}

pub fn b_values(s: Rational, w: &WeightTriple) -> Result<BValues> {
    let (coeffs, extended) = b_coefficients(s)?;
    let b = coeffs.map(|c| c[0] * w.x + c[1] * w.y + c[2] * w.z);
    Ok(BValues { b, extended })
}

/// Solves the 4x4 system `a * v = rhs` exactly; `None` when singular.
fn solve4(mut a: [[Rational; 5]; 4]) -> Option<[Rational; 4]> {
    #[allow(clippy::needless_range_loop)]
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        for row in 0..4 {
            if row != col && !a[row][col].is_zero() {
                let factor = a[row][col] / a[col][col];
                for k in col..5 {
                    let delta = factor * a[col][k];
                    a[row][k] -= delta;
                }
            }
        }
    }
    Some([0, 1, 2, 3].map(|i| a[i][4] / a[i][i]))
}

/// Optimum of: maximize `rho` subject to `rho <= b_l` for each `l`,
/// `x + y + z <= 1` and `x, y, z >= 0`.
///
/// Every 4-subset of the nine constraints is solved as equalities and the
/// best feasible vertex is kept (the first one found on ties).
pub fn lp_rho(s: Rational) -> Result<(Rational, WeightTriple)> {
    let (coeffs, _) = b_coefficients(s)?;
    // Rows over (rho, x, y, z) with a right-hand side; each reads `row . v <= rhs`.
    let mut rows: Vec<[Rational; 5]> = Vec::with_capacity(9);
    for c in coeffs {
        rows.push([Rational::ONE, -c[0], -c[1], -c[2], Rational::ZERO]);
    }
    rows.push([
        Rational::ZERO,
        Rational::ONE,
        Rational::ONE,
        Rational::ONE,
        Rational::ONE,
    ]);
    for j in 1..4 {
        let mut row = [Rational::ZERO; 5];
        row[j] = -Rational::ONE;
        rows.push(row);
    }

    let mut best: Option<[Rational; 4]> = None;
    let n = rows.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let Some(v) = solve4([rows[a], rows[b], rows[c], rows[d]]) else {
                        continue;
                    };
                    let feasible = rows.iter().all(|row| {
                        row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3] <= row[4]
                    });
                    if feasible && best.is_none_or(|cur| v[0] > cur[0]) {
                        best = Some(v);
                    }
                }
            }
        }
    }
    let v = best.expect("the origin is a feasible vertex");
    Ok((v[0], WeightTriple::new(v[1], v[2], v[3])))
}
