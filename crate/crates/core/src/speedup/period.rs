use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{NodeId, RequestId};
use crate::rational::Rational;
use crate::trimming::TrimmedInstance;

/// A walk through the nodes of one period that is short enough to fit inside it.
///
/// All trimmed windows in a period coincide, so a walk is feasible exactly
/// when its length divided by the speed is less than the period length, and
/// it can start as soon as the period opens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodPathOption {
    pub period: i128,
    pub start_node: NodeId,
    pub end_node: NodeId,
    pub earliest_start: Rational,
    pub profit: Rational,
    /// Total travel distance of the walk.
    pub length: Rational,
    pub nodes: Vec<NodeId>,
    pub serviced: Vec<RequestId>,
}

struct NodeGroup {
    node: NodeId,
    requests: Vec<RequestId>,
    profit: Rational,
}

/// Pareto-optimal walks in `period`, for every ordered pair of first and last
/// serviced node.
///
/// For each pair the result holds, for every profit level reachable, the
/// shortest walk reaching it; walks that are both less profitable and no
/// shorter than another walk for the same pair are dropped. An empty period
/// yields no options.
pub fn best_period_paths(
    tr: &TrimmedInstance,
    period: i128,
    speed: Rational,
    cap: usize,
) -> Result<Vec<PeriodPathOption>> {
    let inst = tr.instance();
    let window = tr.scheme.period(period);
    let mut groups: BTreeMap<NodeId, NodeGroup> = BTreeMap::new();
    let mut count = 0usize;
    for entry in tr.entries.iter().filter(|e| e.period == Some(period)) {
        let req = inst
            .request(entry.id)
            .expect("kept entries are in the trimmed instance");
        count += 1;
        let g = groups.entry(req.node).or_insert(NodeGroup {
            node: req.node,
            requests: Vec::new(),
            profit: Rational::ZERO,
        });
        g.requests.push(req.id);
        g.profit += req.profit;
    }
    if count > cap {
        return Err(Error::CapExceeded {
            scope: format!("period {period}"),
            count,
            cap,
        });
    }
    let groups: Vec<NodeGroup> = groups.into_values().collect();
    let m = groups.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let budget = window.length * speed;
    let d = |a: usize, b: usize| inst.distance(groups[a].node, groups[b].node);

    let full = 1usize << m;
    let mut options = Vec::new();
    for first in 0..m {
        // dp[mask * m + last]: shortest walk from `first` through `mask` ending at `last`.
        let mut dp: Vec<Option<Rational>> = vec![None; full * m];
        let mut parent: Vec<usize> = vec![usize::MAX; full * m];
        dp[(1 << first) * m + first] = Some(Rational::ZERO);
        for mask in 1..full {
            if mask & (1 << first) == 0 {
                continue;
            }
            for last in 0..m {
                let Some(len) = dp[mask * m + last] else {
                    continue;
                };
                if len >= budget {
                    continue;
                }
                for next in 0..m {
                    if mask & (1 << next) != 0 {
                        continue;
                    }
                    let Some(step) = d(last, next) else { continue };
                    let cand = len + step;
                    let slot = (mask | (1 << next)) * m + next;
                    if dp[slot].is_none_or(|cur| cand < cur) {
                        dp[slot] = Some(cand);
                        parent[slot] = last;
                    }
                }
            }
        }

        for last in 0..m {
            let mut found: Vec<(Rational, Rational, usize)> = Vec::new();
            for mask in 1..full {
                if mask & (1 << first) == 0 || mask & (1 << last) == 0 {
                    continue;
                }
                if let Some(len) = dp[mask * m + last] {
                    if len < budget {
                        let profit: Rational = (0..m)
                            .filter(|i| mask & (1 << i) != 0)
                            .map(|i| groups[i].profit)
                            .sum();
                        found.push((profit, len, mask));
                    }
                }
            }
            found.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            let mut shortest: Option<Rational> = None;
            for (profit, len, mask) in found {
                if shortest.is_some_and(|s| len >= s) {
                    continue;
                }
                shortest = Some(len);
                let mut order = Vec::new();
                let (mut cur_mask, mut cur) = (mask, last);
                loop {
                    order.push(cur);
                    if cur_mask == 1 << first {
                        break;
                    }
                    let prev = parent[cur_mask * m + cur];
                    cur_mask &= !(1 << cur);
                    cur = prev;
                }
                order.reverse();
                let mut serviced: Vec<RequestId> = order
                    .iter()
                    .flat_map(|&i| groups[i].requests.iter().copied())
                    .collect();
                serviced.sort_unstable();
                options.push(PeriodPathOption {
                    period,
                    start_node: groups[first].node,
                    end_node: groups[last].node,
                    earliest_start: window.release,
                    profit,
                    length: len,
                    nodes: order.iter().map(|&i| groups[i].node).collect(),
                    serviced,
                });
            }
        }
    }
    Ok(options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, Instance, MetricKind, ServiceRequest, TimeWindow};
    use crate::rational::q;
    use crate::trimming::{PeriodScheme, TrimConfig};

    fn trimmed(inst: &Instance, alpha: Rational, periods: &[(RequestId, i128)]) -> TrimmedInstance {
        let scheme = PeriodScheme {
            alpha,
            offset: Rational::ZERO,
            shift: Rational::ZERO,
        };
        let cfg = TrimConfig {
            alpha,
            offset: Rational::ZERO,
            j: 1,
            k: 1,
        };
        TrimmedInstance::from_assignment(inst, scheme, cfg, &periods.iter().copied().collect())
    }

    fn req(id: RequestId, node: NodeId) -> ServiceRequest {
        ServiceRequest {
            id,
            node,
            window: TimeWindow::new(q(1, 10), q(3, 2)),
            profit: Rational::ONE,
        }
    }

    #[test]
    fn empty_period_has_no_paths() {
        let inst = Instance::new(MetricKind::Tree, vec![0], vec![], vec![req(0, 0)]);
        let tr = trimmed(&inst, q(1, 2), &[(0, 1)]);
        assert!(best_period_paths(&tr, 5, Rational::ONE, 10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn single_request() {
        let inst = Instance::new(
            MetricKind::Tree,
            vec![0, 1],
            vec![Edge {
                u: 0,
                v: 1,
                w: q(1, 4),
            }],
            vec![req(0, 1)],
        );
        let tr = trimmed(&inst, q(1, 2), &[(0, 1)]);
        let opts = best_period_paths(&tr, 1, Rational::ONE, 10).unwrap();
        assert_eq!(opts.len(), 1);
        assert_eq!(opts[0].profit, Rational::ONE);
        assert_eq!(opts[0].earliest_start, q(1, 2));
        assert_eq!(opts[0].nodes, vec![1]);
    }

    #[test]
    fn path_must_fit_in_the_period() {
        let inst = Instance::new(
            MetricKind::Tree,
            vec![0, 1],
            vec![Edge {
                u: 0,
                v: 1,
                w: q(1, 2),
            }],
            vec![req(0, 0), req(1, 1)],
        );
        let tr = trimmed(&inst, q(1, 2), &[(0, 1), (1, 1)]);
        let at_one = best_period_paths(&tr, 1, Rational::ONE, 10).unwrap();
        assert!(at_one.iter().all(|o| o.profit == Rational::ONE));
        let faster = best_period_paths(&tr, 1, q(3, 2), 10).unwrap();
        assert!(faster.iter().any(|o| o.profit == q(2, 1)));
    }

    #[test]
    fn cap_exceeded() {
        let inst = Instance::new(
            MetricKind::Tree,
            vec![0],
            vec![],
            vec![req(0, 0), req(1, 0)],
        );
        let tr = trimmed(&inst, q(1, 2), &[(0, 1), (1, 1)]);
        assert!(matches!(
            best_period_paths(&tr, 1, Rational::ONE, 1),
            Err(Error::CapExceeded {
                count: 2,
                cap: 1,
                ..
            })
        ));
    }
}
