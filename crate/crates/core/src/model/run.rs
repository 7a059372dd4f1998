use serde::{Deserialize, Serialize};

use super::{Instance, NodeId, RequestId};
use crate::rational::Rational;

/// A visit: the repairman reaches `node` at `arrival`, services whatever it
/// services there at that instant, and leaves at `departure`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunEvent {
    pub node: NodeId,
    pub arrival: Rational,
    pub departure: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceRun {
    pub speed: Rational,
    pub events: Vec<RunEvent>,
    /// Sorted, duplicate-free.
    pub serviced: Vec<RequestId>,
}

/// One service stop as produced by the solvers: where, when, and for whom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stop {
    pub node: NodeId,
    pub time: Rational,
    pub requests: Vec<RequestId>,
}

impl ServiceRun {
    pub fn empty(speed: Rational) -> Self {
        ServiceRun {
            speed,
            events: Vec::new(),
            serviced: Vec::new(),
        }
    }

    /// Turns a time-ordered list of stops into a run whose waiting happens
    /// before each departure, so every arrival is a service time.
    ///
    /// Consecutive stops at the same node and time collapse into one event.
    /// Panics if two consecutive nodes are disconnected in `inst`.
    pub fn from_stops(inst: &Instance, speed: Rational, stops: &[Stop]) -> Self {
        let mut merged: Vec<Stop> = Vec::with_capacity(stops.len());
        for stop in stops {
            match merged.last_mut() {
                Some(last) if last.node == stop.node && last.time == stop.time => {
                    last.requests.extend_from_slice(&stop.requests);
                }
                _ => merged.push(stop.clone()),
            }
        }
        let mut events = Vec::with_capacity(merged.len());
        for (idx, stop) in merged.iter().enumerate() {
            let departure = match merged.get(idx + 1) {
                Some(next) => {
                    let d = inst
                        .distance(stop.node, next.node)
                        .expect("stops must lie in one connected component");
                    next.time - d / speed
                }
                None => stop.time,
            };
            events.push(RunEvent {
                node: stop.node,
                arrival: stop.time,
                departure,
            });
        }
        let mut serviced: Vec<RequestId> = merged
            .iter()
            .flat_map(|s| s.requests.iter().copied())
            .collect();
        serviced.sort_unstable();
        serviced.dedup();
        ServiceRun {
            speed,
            events,
            serviced,
        }
    }

    /// Time of the first event, if any.
    pub fn first_time(&self) -> Option<Rational> {
        self.events.first().map(|e| e.arrival)
    }

    pub fn node_sequence(&self) -> Vec<NodeId> {
        self.events.iter().map(|e| e.node).collect()
    }
}
