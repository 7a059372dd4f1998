//! Period grids, window classes and trimming.
//!
//! A scheme with period `alpha` and offset `o` cuts time at
//! `o - shift + t * alpha` for every integer `t`. Period `t` is the half-open
//! interval starting at that cut. A window's class is the number of whole
//! periods it contains; trimming replaces the window by one of them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, RequestId, ServiceRequest, TimeWindow};
use crate::rational::{q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodScheme {
    pub alpha: Rational,
    pub offset: Rational,
    pub shift: Rational,
}

impl PeriodScheme {
    /// The scheme for `alpha` and `offset`, with the grid nudged backwards
    /// just enough that no window of `inst` starts on a cut.
    ///
    /// If some start sits on the grid, the shift is half the smallest gap
    /// between any start and the next cut after it, which moves every start
    /// strictly inside its period without crossing another cut. If every
    /// start sits on the grid the shift is `alpha / 100`.
    pub fn for_instance(inst: &Instance, alpha: Rational, offset: Rational) -> Self {
        let residues: Vec<Rational> = inst
            .requests()
            .iter()
            .map(|r| (r.window.release - offset).rem_euclid(alpha))
            .collect();
        let shift = if residues.iter().all(|r| !r.is_zero()) {
            Rational::ZERO
        } else {
            residues
                .iter()
                .filter(|r| r.is_positive())
                .map(|r| (alpha - *r) / Rational::integer(2))
                .min()
                .unwrap_or(alpha / Rational::integer(100))
        };
        PeriodScheme {
            alpha,
            offset,
            shift,
        }
    }

    pub fn grid_start(&self) -> Rational {
        self.offset - self.shift
    }

    pub fn period(&self, t: i128) -> TimeWindow {
        TimeWindow::new(
            self.grid_start() + self.alpha * Rational::integer(t),
            self.alpha,
        )
    }

    /// Index of the first whole period in `window` and how many whole
    /// periods it holds. Fails if the window starts on a cut.
    pub fn full_periods(&self, id: RequestId, window: &TimeWindow) -> Result<(i128, i128)> {
        let rel = (window.release - self.grid_start()) / self.alpha;
        if rel.is_integer() {
            return Err(Error::BoundaryStart {
                id,
                start: window.release,
            });
        }
        let first = rel.ceil();
        let end = ((window.deadline() - self.grid_start()) / self.alpha).floor();
        Ok((first, (end - first).max(0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrimConfig {
    pub alpha: Rational,
    pub offset: Rational,
    /// Which whole period (1-based) a window holding two keeps.
    pub j: u8,
    /// Which whole period (1-based) a window holding three keeps.
    pub k: u8,
}

impl TrimConfig {
    pub fn phase(&self) -> usize {
        if self.alpha == q(1, 2) {
            1
        } else if self.alpha == q(3, 4) {
            2
        } else {
            3
        }
    }

    pub fn label(&self) -> String {
        format!(
            "a={} o={} j={} k={}",
            self.alpha, self.offset, self.j, self.k
        )
    }
}

/// The 22 configurations in phase, offset, j, k order.
pub fn enumerate_configs() -> Vec<TrimConfig> {
    let mut out = Vec::with_capacity(22);
    for i in 0..2 {
        for j in 1..=2 {
            for k in 1..=3 {
                out.push(TrimConfig {
                    alpha: q(1, 2),
                    offset: q(i, 4),
                    j,
                    k,
                });
            }
        }
    }
    for i in 0..3 {
        for j in 1..=2 {
            out.push(TrimConfig {
                alpha: q(3, 4),
                offset: q(i, 4),
                j,
                k: 1,
            });
        }
    }
    for i in 0..4 {
        out.push(TrimConfig {
            alpha: Rational::ONE,
            offset: q(i, 4),
            j: 1,
            k: 1,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowClass {
    pub id: RequestId,
    /// Number of whole periods inside the window.
    pub count: i128,
    /// Index of the first of them (meaningful when `count > 0`).
    pub first: i128,
}

/// Whole-period counts of every window under `scheme`.
pub fn classify_windows(inst: &Instance, scheme: &PeriodScheme) -> Result<Vec<WindowClass>> {
    inst.requests()
        .iter()
        .map(|r| {
            let (first, count) = scheme.full_periods(r.id, &r.window)?;
            Ok(WindowClass {
                id: r.id,
                count,
                first,
            })
        })
        .collect()
}

/// Number of whole quarter periods (grid `t / 4`) inside each window.
pub fn classify_quarters(inst: &Instance) -> Result<BTreeMap<RequestId, i128>> {
    let quarter = PeriodScheme {
        alpha: q(1, 4),
        offset: Rational::ZERO,
        shift: Rational::ZERO,
    };
    inst.requests()
        .iter()
        .map(|r| {
            quarter
                .full_periods(r.id, &r.window)
                .map(|(_, c)| (r.id, c))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrimmedRequest {
    pub id: RequestId,
    pub class: i128,
    /// Period the window was trimmed to, `None` when it vanished.
    pub period: Option<i128>,
    pub window: Option<TimeWindow>,
}

/// The outcome of trimming one instance under one configuration.
#[derive(Clone, Debug)]
pub struct TrimmedInstance {
    pub config: TrimConfig,
    pub scheme: PeriodScheme,
    pub entries: Vec<TrimmedRequest>,
    base: Instance,
    trimmed: Instance,
}

impl TrimmedInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    /// The surviving requests with their trimmed windows, on the base metric.
    pub fn instance(&self) -> &Instance {
        &self.trimmed
    }

    pub fn period_of(&self, id: RequestId) -> Option<i128> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .and_then(|e| e.period)
    }

    pub fn dropped(&self) -> impl Iterator<Item = &TrimmedRequest> {
        self.entries.iter().filter(|e| e.period.is_none())
    }

    /// Kept request ids grouped by period, in period order.
    pub fn periods(&self) -> BTreeMap<i128, Vec<RequestId>> {
        let mut out: BTreeMap<i128, Vec<RequestId>> = BTreeMap::new();
        for e in &self.entries {
            if let Some(p) = e.period {
                out.entry(p).or_default().push(e.id);
            }
        }
        out
    }

    /// Builds a trimmed instance from explicit period assignments. Used by
    /// tests and generators that need trimmed instances of a given shape.
    pub fn from_assignment(
        base: &Instance,
        scheme: PeriodScheme,
        config: TrimConfig,
        assignment: &BTreeMap<RequestId, i128>,
    ) -> Self {
        let mut entries = Vec::new();
        let mut kept = Vec::new();
        for req in base.requests() {
            let period = assignment.get(&req.id).copied();
            let window = period.map(|t| scheme.period(t));
            entries.push(TrimmedRequest {
                id: req.id,
                class: 1,
                period,
                window,
            });
            if let Some(window) = window {
                kept.push(ServiceRequest {
                    window,
                    ..req.clone()
                });
            }
        }
        TrimmedInstance {
            config,
            scheme,
            entries,
            base: base.clone(),
            trimmed: base.with_requests(kept),
        }
    }
}

/// Trims `inst` under `cfg`, nudging the grid off window starts first.
pub fn trim(inst: &Instance, cfg: &TrimConfig) -> Result<TrimmedInstance> {
    let scheme = PeriodScheme::for_instance(inst, cfg.alpha, cfg.offset);
    trim_with_scheme(inst, cfg, scheme)
}

/// Trims `inst` on a given grid.
pub fn trim_with_scheme(
    inst: &Instance,
    cfg: &TrimConfig,
    scheme: PeriodScheme,
) -> Result<TrimmedInstance> {
    let classes = classify_windows(inst, &scheme)?;
    let mut entries = Vec::with_capacity(classes.len());
    let mut kept = Vec::new();
    for (req, class) in inst.requests().iter().zip(&classes) {
        let pick = match class.count {
            0 => None,
            1 => Some(1),
            2 => Some(cfg.j as i128),
            3 => Some(cfg.k as i128),
            count => return Err(Error::UnsupportedClass { id: req.id, count }),
        };
        let period = pick.map(|p| class.first + p - 1);
        let window = period.map(|t| scheme.period(t));
        if let Some(window) = window {
            kept.push(ServiceRequest {
                window,
                ..req.clone()
            });
        }
        entries.push(TrimmedRequest {
            id: req.id,
            class: class.count,
            period,
            window,
        });
    }
    Ok(TrimmedInstance {
        config: *cfg,
        scheme,
        entries,
        base: inst.clone(),
        trimmed: inst.with_requests(kept),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MetricKind, ServiceRequest};
    use proptest::prelude::*;

    fn one_window(release: Rational, length: Rational) -> Instance {
        Instance::new(
            MetricKind::Tree,
            vec![0],
            vec![],
            vec![ServiceRequest {
                id: 0,
                node: 0,
                window: TimeWindow::new(release, length),
                profit: Rational::ONE,
            }],
        )
    }

    fn plain(alpha: Rational, offset: Rational) -> PeriodScheme {
        PeriodScheme {
            alpha,
            offset,
            shift: Rational::ZERO,
        }
    }

    #[test]
    fn class_examples() {
        let w1 = one_window(q(1, 10), q(13, 10));
        assert_eq!(
            classify_windows(&w1, &plain(q(1, 2), q(0, 1))).unwrap()[0].count,
            1
        );
        let w2 = one_window(q(1, 10), q(18, 10));
        let c = classify_windows(&w2, &plain(q(1, 2), q(0, 1))).unwrap()[0];
        assert_eq!((c.count, c.first), (2, 1));
        let w0 = one_window(q(13, 50), q(13, 10) - q(13, 50));
        assert_eq!(
            classify_windows(&w0, &plain(Rational::ONE, q(0, 1))).unwrap()[0].count,
            0
        );
    }

    #[test]
    fn quarter_examples() {
        assert_eq!(
            classify_quarters(&one_window(q(1, 10), q(13, 10))).unwrap()[&0],
            4
        );
        assert_eq!(
            classify_quarters(&one_window(q(1, 5), q(3, 2))).unwrap()[&0],
            5
        );
        assert!(classify_quarters(&one_window(q(1, 4), q(3, 2))).is_err());
    }

    #[test]
    fn trim_examples() {
        let inst = one_window(q(1, 10), q(18, 10));
        let cfg2 = TrimConfig {
            alpha: q(1, 2),
            offset: q(0, 1),
            j: 2,
            k: 1,
        };
        let t = trim(&inst, &cfg2).unwrap();
        assert_eq!(t.entries[0].window, Some(TimeWindow::new(q(1, 1), q(1, 2))));
        let cfg1 = TrimConfig { j: 1, ..cfg2 };
        let t = trim(&inst, &cfg1).unwrap();
        assert_eq!(t.entries[0].window, Some(TimeWindow::new(q(1, 2), q(1, 2))));

        let vanishing = one_window(q(13, 50), q(13, 10) - q(13, 50));
        let cfg = TrimConfig {
            alpha: Rational::ONE,
            offset: q(0, 1),
            j: 1,
            k: 1,
        };
        let t = trim(&vanishing, &cfg).unwrap();
        assert_eq!(t.dropped().count(), 1);
        assert!(t.instance().requests().is_empty());
    }

    #[test]
    fn config_order_and_count() {
        let all = enumerate_configs();
        assert_eq!(all.len(), 22);
        assert_eq!(all.iter().filter(|c| c.alpha == q(1, 2)).count(), 12);
        assert_eq!(all.iter().filter(|c| c.alpha == q(3, 4)).count(), 6);
        assert_eq!(all.iter().filter(|c| c.alpha == Rational::ONE).count(), 4);
        assert_eq!(
            all[0],
            TrimConfig {
                alpha: q(1, 2),
                offset: q(0, 1),
                j: 1,
                k: 1
            }
        );
        assert_eq!(all[21].alpha, Rational::ONE);
        assert_eq!(all[21].offset, q(3, 4));
    }

    #[test]
    fn shift_moves_starts_off_the_grid() {
        // Residues 0 and 1/3 under alpha 1/2: a shift of half the smallest
        // residue would land the second start exactly on a cut.
        let inst = Instance::new(
            MetricKind::Tree,
            vec![0],
            vec![],
            vec![
                ServiceRequest {
                    id: 0,
                    node: 0,
                    window: TimeWindow::new(q(1, 2), q(3, 2)),
                    profit: Rational::ONE,
                },
                ServiceRequest {
                    id: 1,
                    node: 0,
                    window: TimeWindow::new(q(1, 3), q(3, 2)),
                    profit: Rational::ONE,
                },
            ],
        );
        let scheme = PeriodScheme::for_instance(&inst, q(1, 2), Rational::ZERO);
        assert_eq!(scheme.shift, q(1, 12));
        assert!(classify_windows(&inst, &scheme).is_ok());
    }

    #[test]
    fn quarter_count_matches_length_formula() {
        // Starts on a 1/101 grid never hit a quarter.
        for a in 1..101 {
            for m in 0..101 {
                let start = q(a, 101);
                let length = Rational::ONE + q(m, 101);
                let h = classify_quarters(&one_window(start, length)).unwrap()[&0];
                let f = (length * Rational::integer(4)).floor();
                assert!(
                    h == f || h == f - 1,
                    "start {start} length {length} gave {h}"
                );
                assert!((3..=7).contains(&h));
            }
        }
    }

    #[test]
    fn period_count_bracketed_by_quarter_count() {
        for a in 1..101 {
            for m in (0..101).step_by(3) {
                let inst = one_window(q(a, 101), Rational::ONE + q(m, 101));
                let h = classify_quarters(&inst).unwrap()[&0];
                for jq in 2..=4i128 {
                    for i in 0..jq {
                        let scheme = plain(q(jq, 4), q(i, 4));
                        let c = classify_windows(&inst, &scheme).unwrap()[0].count;
                        let x = q(h - jq + 1, jq);
                        assert!(c == x.floor() || c == x.ceil(), "h={h} j={jq} count={c}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn trimmed_windows_nest_and_separate(
            starts in proptest::collection::vec((1i128..400, 0i128..100), 1..8),
            cfg_idx in 0usize..22,
        ) {
            let requests = starts
                .iter()
                .enumerate()
                .map(|(i, &(s, m))| ServiceRequest {
                    id: i as u32,
                    node: 0,
                    window: TimeWindow::new(q(s, 100), Rational::ONE + q(m, 100)),
                    profit: Rational::ONE,
                })
                .collect();
            let inst = Instance::new(MetricKind::Tree, vec![0], vec![], requests);
            let cfg = enumerate_configs()[cfg_idx];
            let t = trim(&inst, &cfg).unwrap();
            let kept: Vec<&TimeWindow> = t.entries.iter().filter_map(|e| e.window.as_ref()).collect();
            for e in &t.entries {
                if let Some(w) = &e.window {
                    prop_assert!(inst.request(e.id).unwrap().window.covers(w));
                    prop_assert_eq!(w.length, cfg.alpha);
                }
            }
            for a in &kept {
                for b in &kept {
                    prop_assert!(a == b || a.disjoint(b));
                }
            }
        }
    }
}
