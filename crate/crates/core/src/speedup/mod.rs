//! Exact maximum-profit runs on trimmed instances.
//!
//! Trimmed windows are whole periods of one grid, so they are pairwise equal
//! or disjoint and any run services them period by period. The solver finds
//! the Pareto-optimal walks inside each period ([`best_period_paths`]) and
//! stitches them in time order with a label-setting pass. A label is the
//! last node, the finishing time and the profit collected so far; for each
//! last node only labels that are not beaten on both time and profit survive.

mod period;

pub use period::{best_period_paths, PeriodPathOption};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{NodeId, ServiceRun, Stop};
use crate::oracle::better_schedule;
use crate::rational::Rational;
use crate::trimming::TrimmedInstance;

#[derive(Clone, Debug)]
struct Label {
    end: NodeId,
    finish: Rational,
    profit: Rational,
    stops: Vec<Stop>,
}

fn tie_key(stops: &[Stop]) -> (Option<Rational>, Vec<NodeId>) {
    (
        stops.first().map(|s| s.time),
        stops.iter().map(|s| s.node).collect(),
    )
}

fn option_stops(
    tr: &TrimmedInstance,
    opt: &PeriodPathOption,
    start: Rational,
    speed: Rational,
) -> Vec<Stop> {
    let inst = tr.instance();
    let mut time = start;
    let mut out = Vec::with_capacity(opt.nodes.len());
    for (idx, &node) in opt.nodes.iter().enumerate() {
        if idx > 0 {
            time += inst
                .distance(opt.nodes[idx - 1], node)
                .expect("option paths are connected")
                / speed;
        }
        let requests = opt
            .serviced
            .iter()
            .copied()
            .filter(|id| inst.request(*id).is_some_and(|r| r.node == node))
            .collect();
        out.push(Stop {
            node,
            time,
            requests,
        });
    }
    out
}

fn prune(labels: Vec<Label>) -> Vec<Label> {
    let mut by_end: BTreeMap<NodeId, Vec<Label>> = BTreeMap::new();
    for label in labels {
        by_end.entry(label.end).or_default().push(label);
    }
    let mut out = Vec::new();
    for (_, mut group) in by_end {
        group.sort_by(|a, b| {
            a.finish
                .cmp(&b.finish)
                .then(b.profit.cmp(&a.profit))
                .then_with(|| tie_key(&a.stops).cmp(&tie_key(&b.stops)))
        });
        let mut best: Option<Rational> = None;
        for label in group {
            if best.is_none_or(|p| label.profit > p) {
                best = Some(label.profit);
                out.push(label);
            }
        }
    }
    out
}

/// A maximum-profit run at `speed` on the trimmed windows of `tr`.
///
/// Every period may hold at most `cap` requests.
pub fn solve_trimmed(tr: &TrimmedInstance, speed: Rational, cap: usize) -> Result<ServiceRun> {
    if !speed.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "speed must be positive, got {speed}"
        )));
    }
    let inst = tr.instance();
    let mut labels: Vec<Label> = Vec::new();
    for period in tr.periods().into_keys() {
        let window = tr.scheme.period(period);
        let options = best_period_paths(tr, period, speed, cap)?;
        let mut fresh = Vec::new();
        for opt in &options {
            let duration = opt.length / speed;
            let mut push = |start: Rational, prefix: Option<&Label>| {
                if start + duration >= window.deadline() {
                    return;
                }
                let mut stops = prefix.map(|l| l.stops.clone()).unwrap_or_default();
                stops.extend(option_stops(tr, opt, start, speed));
                fresh.push(Label {
                    end: opt.end_node,
                    finish: start + duration,
                    profit: prefix.map_or(Rational::ZERO, |l| l.profit) + opt.profit,
                    stops,
                });
            };
            push(window.release, None);
            for label in &labels {
                let Some(d) = inst.distance(label.end, opt.start_node) else {
                    continue;
                };
                let start = (label.finish + d / speed).max(window.release);
                push(start, Some(label));
            }
        }
        labels.extend(fresh);
        labels = prune(labels);
    }

    let mut best_profit = Rational::ZERO;
    let mut best_stops: Vec<Stop> = Vec::new();
    for label in &labels {
        if better_schedule(label.profit, &label.stops, best_profit, &best_stops) {
            best_profit = label.profit;
            best_stops = label.stops.clone();
        }
    }
    Ok(ServiceRun::from_stops(inst, speed, &best_stops))
}
