use serde::Serialize;

use super::lp::WeightTriple;
use crate::error::{Error, Result};
use crate::rational::{q, Rational};

/// One speed range of the ratio curve with its closed forms.
pub struct SpeedRange {
    pub lo: Rational,
    pub hi: Rational,
    pub ratio_tag: &'static str,
    pub ratio: fn(Rational) -> Rational,
    pub weights: fn(Rational) -> WeightTriple,
}

fn c(x: i128) -> Rational {
    Rational::integer(x)
}

fn poly(s: Rational, coeffs: &[i128]) -> Rational {
    coeffs.iter().fold(Rational::ZERO, |acc, &k| acc * s + c(k))
}

fn triple(s: Rational, x: &[i128], y: &[i128], z: &[i128], den: &[i128]) -> WeightTriple {
    let d = poly(s, den);
    WeightTriple::new(poly(s, x) / d, poly(s, y) / d, poly(s, z) / d)
}

/// The eight ranges of `[1, 6]`, in order.
pub fn ranges() -> [SpeedRange; 8] {
    [
        SpeedRange {
            lo: c(1),
            hi: c(2),
            ratio_tag: "219/(26s+26)",
            ratio: |s| c(219) / poly(s, &[26, 26]),
            weights: |_| WeightTriple::new(q(50, 73), q(6, 73), q(17, 73)),
        },
        SpeedRange {
            lo: c(2),
            hi: q(7, 3),
            ratio_tag: "(28s^2+24s+12)/(5s^3+6s^2)",
            ratio: |s| poly(s, &[28, 24, 12]) / poly(s, &[5, 6, 0, 0]),
            weights: |s| triple(s, &[6, 3, 0], &[-3, 9, 0], &[4, -6, 3], &[7, 6, 3]),
        },
        SpeedRange {
            lo: q(7, 3),
            hi: q(17, 7),
            ratio_tag: "(-4s^3+40s^2-12s+8)/(s^4-2s^3+11s^2)",
            ratio: |s| poly(s, &[-4, 40, -12, 8]) / poly(s, &[1, -2, 11, 0, 0]),
            weights: |s| {
                triple(
                    s,
                    &[4, 2, 0],
                    &[3, -18, 27, 0],
                    &[-4, 24, -32, 2],
                    &[-1, 10, -3, 2],
                )
            },
        },
        SpeedRange {
            lo: q(17, 7),
            hi: q(5, 2),
            ratio_tag: "(68s^3-172s^2-140s-92)/(11s^4-21s^3-50s^2)",
            ratio: |s| poly(s, &[68, -172, -140, -92]) / poly(s, &[11, -21, -50, 0, 0]),
            weights: |s| {
                triple(
                    s,
                    &[14, -39, -23, 0],
                    &[-9, 54, -81, 0],
                    &[12, -58, 69, -23],
                    &[17, -43, -35, -23],
                )
            },
        },
        SpeedRange {
            lo: q(5, 2),
            hi: c(3),
            ratio_tag: "(292s^3-1636s^2+2672s-1472)/(39s^4-183s^3+180s^2)",
            ratio: |s| poly(s, &[292, -1636, 2672, -1472]) / poly(s, &[39, -183, 180, 0, 0]),
            weights: |s| {
                triple(
                    s,
                    &[28, -120, 92, 0],
                    &[33, -189, 264, 0],
                    &[12, -100, 312, -368],
                    &[73, -409, 668, -368],
                )
            },
        },
        SpeedRange {
            lo: c(3),
            hi: c(4),
            ratio_tag: "(12s^2+8s+16)/(s^3+6s^2)",
            ratio: |s| poly(s, &[12, 8, 16]) / poly(s, &[1, 6, 0, 0]),
            weights: |s| triple(s, &[2, 2, 0], &[-3, 12, 0], &[4, -12, 4], &[3, 2, 4]),
        },
        SpeedRange {
            lo: c(4),
            hi: c(5),
            ratio_tag: "(16-s)/(s+4)",
            ratio: |s| poly(s, &[-1, 16]) / poly(s, &[1, 4]),
            weights: |s| triple(s, &[2, -2], &[-3, 18], &[0], &[-1, 16]),
        },
        SpeedRange {
            lo: c(5),
            hi: c(6),
            ratio_tag: "(3s-26)/(s-14)",
            ratio: |s| poly(s, &[3, -26]) / poly(s, &[1, -14]),
            weights: |s| triple(s, &[8], &[-3, 18], &[0], &[-3, 26]),
        },
    ]
}

fn check_range(s: Rational) -> Result<()> {
    if s < c(1) || s > c(6) {
        return Err(Error::OutOfRange {
            what: "speed",
            value: s,
            lo: c(1),
            hi: c(6),
        });
    }
    Ok(())
}

/// Indices of the ranges whose closed interval holds `s`.
pub fn ranges_at(s: Rational) -> Vec<usize> {
    ranges()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.lo <= s && s <= r.hi)
        .map(|(i, _)| i)
        .collect()
}

/// Approximation ratio at speed `s`; at a shared endpoint of two ranges the
/// smaller of the two closed forms.
pub fn table1_ratio(s: Rational) -> Result<Rational> {
    check_range(s)?;
    let all = ranges();
    Ok(ranges_at(s)
        .into_iter()
        .map(|i| (all[i].ratio)(s))
        .min()
        .expect("[1, 6] is covered"))
}

/// Guaranteed fraction of the unit-speed optimum at speed `s`.
pub fn guarantee_fraction(s: Rational) -> Result<Rational> {
    table1_ratio(s).map(|r| r.recip())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundarySample {
    pub s: Rational,
    pub ratios: Vec<Rational>,
}

/// Every range endpoint with the ratio of each range that touches it.
pub fn boundary_samples() -> Vec<BoundarySample> {
    let all = ranges();
    let mut points: Vec<Rational> = all.iter().flat_map(|r| [r.lo, r.hi]).collect();
    points.sort();
    points.dedup();
    points
        .into_iter()
        .map(|s| BoundarySample {
            s,
            ratios: ranges_at(s)
                .into_iter()
                .map(|i| (all[i].ratio)(s))
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_ratios() {
        assert_eq!(table1_ratio(c(1)).unwrap(), q(219, 52));
        assert_eq!(table1_ratio(c(6)).unwrap(), Rational::ONE);
        assert_eq!(table1_ratio(c(3)).unwrap(), q(148, 81));
        assert_eq!(table1_ratio(c(4)).unwrap(), q(3, 2));
        assert_eq!(table1_ratio(c(2)).unwrap(), q(43, 16));
        assert!(table1_ratio(q(13, 2)).is_err());
        assert!(table1_ratio(q(1, 2)).is_err());
    }

    #[test]
    fn guarantee_values() {
        assert_eq!(guarantee_fraction(c(1)).unwrap(), q(52, 219));
        assert_eq!(guarantee_fraction(c(6)).unwrap(), Rational::ONE);
        assert_eq!(guarantee_fraction(c(4)).unwrap(), q(2, 3));
    }

    #[test]
    fn adjacent_forms_at_three_and_four() {
        for s in [c(3), c(4)] {
            let b = boundary_samples().into_iter().find(|b| b.s == s).unwrap();
            assert_eq!(b.ratios.len(), 2);
            assert_eq!(b.ratios[0], b.ratios[1]);
        }
    }

    #[test]
    fn weights_sum_to_one_inside_ranges() {
        for range in ranges() {
            for t in 1..20 {
                let s = range.lo + (range.hi - range.lo) * q(t, 20);
                let w = (range.weights)(s);
                assert!(w.is_feasible(), "{} at {s}", range.ratio_tag);
                assert_eq!(w.sum(), Rational::ONE);
            }
        }
    }
}
