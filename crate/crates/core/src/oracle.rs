//! Exhaustive search for optimal runs on small instances.
//!
//! For a fixed visit order, serving each request as early as possible is
//! never worse than any other schedule, so the search only enumerates orders:
//! `s_i = max(release_i, s_{i-1} + d / speed)` and the order is feasible when
//! every `s_i` is strictly before its deadline.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{Instance, NodeId, RequestId, ServiceRun, Stop};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Cut branches whose optimistic bound falls below the incumbent.
    Pruned,
    /// Visit every feasible order.
    Exhaustive,
}

#[derive(Clone, Debug)]
struct Job {
    id: RequestId,
    node: NodeId,
    release: Rational,
    deadline: Rational,
    profit: Rational,
}

/// Ranks two candidate schedules: higher profit wins, then earlier first
/// service, then the lexicographically smaller node sequence.
pub(crate) fn better_schedule(
    profit_a: Rational,
    stops_a: &[Stop],
    profit_b: Rational,
    stops_b: &[Stop],
) -> bool {
    match profit_a.cmp(&profit_b) {
        Ordering::Greater => return true,
        Ordering::Less => return false,
        Ordering::Equal => {}
    }
    let first = |s: &[Stop]| s.first().map(|x| x.time);
    match (first(stops_a), first(stops_b)) {
        (None, Some(_)) => return true,
        (Some(_), None) | (None, None) => return false,
        (Some(a), Some(b)) if a != b => return a < b,
        _ => {}
    }
    let nodes = |s: &[Stop]| s.iter().map(|x| x.node).collect::<Vec<_>>();
    nodes(stops_a) < nodes(stops_b)
}

struct Search<'a> {
    inst: &'a Instance,
    jobs: Vec<Job>,
    speed: Rational,
    mode: SearchMode,
    used: Vec<bool>,
    path: Vec<Stop>,
    best_profit: Rational,
    best_path: Vec<Stop>,
}

impl Search<'_> {
    fn arrival(&self, from: Option<(NodeId, Rational)>, job: &Job) -> Option<Rational> {
        let ready = match from {
            None => job.release,
            Some((node, time)) => {
                let d = self.inst.distance(node, job.node)?;
                time + d / self.speed
            }
        };
        let start = ready.max(job.release);
        (start < job.deadline).then_some(start)
    }

    fn dfs(&mut self, here: Option<(NodeId, Rational)>, profit: Rational) {
        if better_schedule(profit, &self.path, self.best_profit, &self.best_path) {
            self.best_profit = profit;
            self.best_path = self.path.clone();
        }
        if self.mode == SearchMode::Pruned {
            let reachable: Rational = self
                .jobs
                .iter()
                .enumerate()
                .filter(|(i, job)| !self.used[*i] && self.arrival(here, job).is_some())
                .map(|(_, job)| job.profit)
                .sum();
            if profit + reachable < self.best_profit {
                return;
            }
        }
        for i in 0..self.jobs.len() {
            if self.used[i] {
                continue;
            }
            let Some(time) = self.arrival(here, &self.jobs[i]) else {
                continue;
            };
            let job = &self.jobs[i];
            let stop = Stop {
                node: job.node,
                time,
                requests: vec![job.id],
            };
            let gained = job.profit;
            let node = job.node;
            self.used[i] = true;
            self.path.push(stop);
            self.dfs(Some((node, time)), profit + gained);
            self.path.pop();
            self.used[i] = false;
        }
    }
}

/// A maximum-profit run at `speed` over the requests of `inst`.
///
/// Pass `TrimmedInstance::instance()` to search the trimmed windows.
pub fn optimal_run_at_speed(inst: &Instance, speed: Rational, cap: usize) -> Result<ServiceRun> {
    search(inst, speed, cap, SearchMode::Pruned)
}

/// [`optimal_run_at_speed`] at unit speed.
pub fn optimal_unit_run(inst: &Instance, cap: usize) -> Result<ServiceRun> {
    optimal_run_at_speed(inst, Rational::ONE, cap)
}

pub fn search(
    inst: &Instance,
    speed: Rational,
    cap: usize,
    mode: SearchMode,
) -> Result<ServiceRun> {
    if !speed.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "speed must be positive, got {speed}"
        )));
    }
    let n = inst.requests().len();
    if n > cap {
        return Err(Error::CapExceeded {
            scope: "the instance".into(),
            count: n,
            cap,
        });
    }
    let mut jobs: Vec<Job> = inst
        .requests()
        .iter()
        .map(|r| Job {
            id: r.id,
            node: r.node,
            release: r.window.release,
            deadline: r.window.deadline(),
            profit: r.profit,
        })
        .collect();
    jobs.sort_by_key(|a| (a.release, a.node, a.id));
    let mut search = Search {
        inst,
        used: vec![false; jobs.len()],
        jobs,
        speed,
        mode,
        path: Vec::new(),
        best_profit: Rational::ZERO,
        best_path: Vec::new(),
    };
    search.dfs(None, Rational::ZERO);
    Ok(ServiceRun::from_stops(inst, speed, &search.best_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        generate_planted_instance, generate_random_instance, validate_run, Edge, MetricKind,
        RandomSpec, ServiceRequest, TimeWindow,
    };
    use crate::rational::q;

    fn far_apart() -> Instance {
        Instance::new(
            MetricKind::Tree,
            vec![0, 1],
            vec![Edge {
                u: 0,
                v: 1,
                w: q(10, 1),
            }],
            vec![
                ServiceRequest {
                    id: 0,
                    node: 0,
                    window: TimeWindow::new(q(0, 1), q(1, 1)),
                    profit: Rational::ONE,
                },
                ServiceRequest {
                    id: 1,
                    node: 1,
                    window: TimeWindow::new(q(1, 1), q(1, 1)),
                    profit: Rational::ONE,
                },
            ],
        )
    }

    #[test]
    fn distance_dominates_at_unit_speed() {
        let run = optimal_unit_run(&far_apart(), 10).unwrap();
        assert_eq!(validate_run(&far_apart(), &run), Ok(Rational::ONE));
    }

    #[test]
    fn fast_enough_serves_both() {
        let run = optimal_run_at_speed(&far_apart(), q(20, 1), 10).unwrap();
        assert_eq!(validate_run(&far_apart(), &run), Ok(q(2, 1)));
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(MetricKind::Tree, vec![0], vec![], vec![]);
        let run = optimal_unit_run(&inst, 10).unwrap();
        assert!(run.serviced.is_empty());
    }

    #[test]
    fn planted_instance_is_fully_served() {
        let inst = generate_planted_instance(8, MetricKind::Tree, q(3, 10), 3).unwrap();
        let run = optimal_unit_run(&inst, 10).unwrap();
        assert_eq!(validate_run(&inst, &run), Ok(q(8, 1)));
    }

    #[test]
    fn cap_is_enforced() {
        let inst = generate_planted_instance(5, MetricKind::Tree, q(3, 10), 3).unwrap();
        assert!(matches!(
            optimal_unit_run(&inst, 4),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn pruned_matches_exhaustive() {
        for seed in 0..25 {
            let spec = RandomSpec {
                requests: 6,
                nodes: 4,
                kind: MetricKind::General,
                spacing: q(1, 3),
                horizon: q(3, 1),
            };
            let inst = generate_random_instance(spec, seed).unwrap();
            for speed in [q(1, 1), q(2, 1)] {
                let a = search(&inst, speed, 10, SearchMode::Pruned).unwrap();
                let b = search(&inst, speed, 10, SearchMode::Exhaustive).unwrap();
                assert_eq!(a, b, "seed {seed}");
            }
        }
    }
}
