use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One branch of a piecewise bound: valid on `[lo, hi]`.
#[derive(Clone, Copy)]
pub struct Branch {
    pub lo: Rational,
    pub hi: Rational,
    pub tag: &'static str,
    pub eval: fn(Rational) -> Rational,
}

fn int(x: i128) -> Rational {
    Rational::integer(x)
}

const fn r(n: i128, d: i128) -> Rational {
    Rational::reduced(n, d)
}

static F1: [Branch; 2] = [
    Branch {
        lo: r(1, 1),
        hi: r(2, 1),
        tag: "(s+1)/6",
        eval: |s| (s + int(1)) / int(6),
    },
    Branch {
        lo: r(2, 1),
        hi: r(4, 1),
        tag: "s/4",
        eval: |s| s / int(4),
    },
];

static F2: [Branch; 4] = [
    Branch {
        lo: r(1, 1),
        hi: r(2, 1),
        tag: "(s+1)/8",
        eval: |s| (s + int(1)) / int(8),
    },
    Branch {
        lo: r(2, 1),
        hi: r(5, 2),
        tag: "(2s-1)/8",
        eval: |s| (int(2) * s - int(1)) / int(8),
    },
    Branch {
        lo: r(5, 2),
        hi: r(3, 1),
        tag: "1/2",
        eval: |_| r(1, 2),
    },
    Branch {
        lo: r(3, 1),
        hi: r(5, 1),
        tag: "(s-1)/4",
        eval: |s| (s - int(1)) / int(4),
    },
];

static F3: [Branch; 6] = [
    Branch {
        lo: r(1, 1),
        hi: r(2, 1),
        tag: "(s+1)/10",
        eval: |s| (s + int(1)) / int(10),
    },
    Branch {
        lo: r(2, 1),
        hi: r(7, 3),
        tag: "s/6",
        eval: |s| s / int(6),
    },
    Branch {
        lo: r(7, 3),
        hi: r(17, 7),
        tag: "(s^2-4s+7)/8",
        eval: |s| (s * s - int(4) * s + int(7)) / int(8),
    },
    Branch {
        lo: r(17, 7),
        hi: r(3, 1),
        tag: "(1+3s-s^2)/(23-7s)",
        eval: |s| (int(1) + int(3) * s - s * s) / (int(23) - int(7) * s),
    },
    Branch {
        lo: r(3, 1),
        hi: r(4, 1),
        tag: "1/2",
        eval: |_| r(1, 2),
    },
    Branch {
        lo: r(4, 1),
        hi: r(6, 1),
        tag: "(s-2)/4",
        eval: |s| (s - int(2)) / int(4),
    },
];

/// The branches of `f_ell`, in increasing order of `s`.
pub fn table(ell: u8) -> Result<&'static [Branch]> {
    match ell {
        1 => Ok(&F1),
        2 => Ok(&F2),
        3 => Ok(&F3),
        _ => Err(Error::UnknownId(format!("f{ell}"))),
    }
}

/// Upper end of the stated domain of `f_ell`.
pub fn domain_end(ell: u8) -> Result<Rational> {
    Ok(table(ell)?.last().expect("nonempty").hi)
}

/// `f_ell(s)` on its stated domain. Where two branches meet, the larger
/// value is returned (each branch is a valid lower bound on its closed range).
pub fn f(ell: u8, s: Rational) -> Result<Rational> {
    let rows = table(ell)?;
    let lo = rows[0].lo;
    let hi = rows.last().expect("nonempty").hi;
    if s < lo || s > hi {
        return Err(Error::OutOfRange {
            what: "s",
            value: s,
            lo,
            hi,
        });
    }
    Ok(rows
        .iter()
        .filter(|b| b.lo <= s && s <= b.hi)
        .map(|b| (b.eval)(s))
        .max()
        .expect("domain is covered"))
}

/// `f_ell(s)` for any `s` in `[1, 6]`: past the end of the stated domain the
/// value is 1, the most any fraction can be. The flag reports whether that
/// extension was used.
pub fn f_extended(ell: u8, s: Rational) -> Result<(Rational, bool)> {
    if s < Rational::ONE || s > int(6) {
        return Err(Error::OutOfRange {
            what: "s",
            value: s,
            lo: Rational::ONE,
            hi: int(6),
        });
    }
    if s > domain_end(ell)? {
        Ok((Rational::ONE, true))
    } else {
        f(ell, s).map(|v| (v, false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Breakpoint {
    pub ell: u8,
    pub s: Rational,
    pub left_tag: &'static str,
    pub right_tag: &'static str,
    pub left: Rational,
    pub right: Rational,
}

impl Breakpoint {
    pub fn agrees(&self) -> bool {
        self.left == self.right
    }
}

/// Both branch values at every interior breakpoint of `f_1`, `f_2`, `f_3`.
pub fn breakpoints() -> Vec<Breakpoint> {
    let mut out = Vec::new();
    for ell in 1..=3u8 {
        let rows = table(ell).expect("known ids");
        for pair in rows.windows(2) {
            let s = pair[0].hi;
            out.push(Breakpoint {
                ell,
                s,
                left_tag: pair[0].tag,
                right_tag: pair[1].tag,
                left: (pair[0].eval)(s),
                right: (pair[1].eval)(s),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn spot_values() {
        assert_eq!(f(2, q(5, 2)).unwrap(), q(1, 2));
        assert_eq!(f(3, q(17, 7)).unwrap(), q(39, 98));
        assert_eq!(f(1, int(4)).unwrap(), Rational::ONE);
        assert_eq!(f(1, Rational::ONE).unwrap(), q(1, 3));
    }

    #[test]
    fn domains() {
        assert!(f(1, q(9, 2)).is_err());
        assert!(f(2, int(6)).is_err());
        assert!(f(3, q(1, 2)).is_err());
        assert_eq!(f_extended(2, int(6)).unwrap(), (Rational::ONE, true));
        assert_eq!(f_extended(3, int(6)).unwrap(), (Rational::ONE, false));
        assert!(matches!(f(4, int(2)), Err(Error::UnknownId(_))));
    }

    #[test]
    fn branches_meet_except_one() {
        let bps = breakpoints();
        assert_eq!(bps.len(), 1 + 3 + 5);
        let broken: Vec<_> = bps.iter().filter(|b| !b.agrees()).collect();
        assert_eq!(broken.len(), 1);
        assert_eq!((broken[0].ell, broken[0].s), (3, int(2)));
        assert_eq!((broken[0].left, broken[0].right), (q(3, 10), q(1, 3)));
    }

    #[test]
    fn nondecreasing_on_a_grid() {
        for ell in 1..=3u8 {
            let end = domain_end(ell).unwrap();
            let mut s = Rational::ONE;
            let mut prev = f(ell, s).unwrap();
            while s + q(1, 420) <= end {
                s += q(1, 420);
                let v = f(ell, s).unwrap();
                assert!(v >= prev, "f{ell} drops at {s}");
                prev = v;
            }
        }
    }
}
