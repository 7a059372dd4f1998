use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{Instance, MetricKind, NodeId, RequestId, ServiceRun};
use crate::rational::Rational;

/// One broken invariant of an instance or a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateNode {
        node: NodeId,
    },
    DuplicateRequestId {
        id: RequestId,
    },
    UnknownNode {
        node: NodeId,
        context: String,
    },
    LengthTooShort {
        id: RequestId,
        length: Rational,
    },
    LengthTooLong {
        id: RequestId,
        length: Rational,
    },
    NegativeProfit {
        id: RequestId,
        profit: Rational,
    },
    NegativeWeight {
        u: NodeId,
        v: NodeId,
        w: Rational,
    },
    SelfLoop {
        node: NodeId,
        w: Rational,
    },
    ConflictingEdge {
        u: NodeId,
        v: NodeId,
    },
    TriangleInequality {
        u: NodeId,
        v: NodeId,
        given: Rational,
        shortest: Rational,
    },
    Disconnected {
        u: NodeId,
        v: NodeId,
    },
    NotATree {
        nodes: usize,
        edges: usize,
    },
    NonPositiveSpeed {
        speed: Rational,
    },
    WaitNegative {
        event: usize,
    },
    Kinematics {
        event: usize,
        expected: Rational,
        got: Rational,
    },
    UnknownRequest {
        id: RequestId,
    },
    DuplicateService {
        id: RequestId,
    },
    NotVisitedInWindow {
        id: RequestId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicateNode { node } => write!(f, "node {node} listed twice"),
            DuplicateRequestId { id } => write!(f, "request id {id} is not unique"),
            UnknownNode { node, context } => write!(f, "unknown node {node} in {context}"),
            LengthTooShort { id, length } => {
                write!(f, "request {id}: length must be >= 1, got {length}")
            }
            LengthTooLong { id, length } => {
                write!(f, "request {id}: length must be < 2, got {length}")
            }
            NegativeProfit { id, profit } => write!(f, "request {id}: negative profit {profit}"),
            NegativeWeight { u, v, w } => write!(f, "edge {u}-{v}: negative weight {w}"),
            SelfLoop { node, w } => write!(f, "self loop at {node} with nonzero weight {w}"),
            ConflictingEdge { u, v } => {
                write!(f, "edge {u}-{v} given twice with different weights")
            }
            TriangleInequality {
                u,
                v,
                given,
                shortest,
            } => write!(
                f,
                "triangle inequality: d({u},{v}) = {given} but a path of length {shortest} exists"
            ),
            Disconnected { u, v } => write!(f, "nodes {u} and {v} are disconnected"),
            NotATree { nodes, edges } => {
                write!(
                    f,
                    "tree metric needs a spanning tree: {nodes} nodes, {edges} edges"
                )
            }
            NonPositiveSpeed { speed } => write!(f, "speed must be positive, got {speed}"),
            WaitNegative { event } => write!(f, "event {event}: departure before arrival"),
            Kinematics {
                event,
                expected,
                got,
            } => {
                write!(f, "event {event}: arrival should be {expected}, got {got}")
            }
            UnknownRequest { id } => write!(f, "serviced request {id} does not exist"),
            DuplicateService { id } => write!(f, "request {id} listed as serviced twice"),
            NotVisitedInWindow { id } => {
                write!(f, "request {id}: no event at its node inside its window")
            }
        }
    }
}

/// Reports every violated invariant of `inst`; an empty list means the
/// instance is well formed.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut seen_nodes = BTreeSet::new();
    for &node in inst.nodes() {
        if !seen_nodes.insert(node) {
            out.push(Violation::DuplicateNode { node });
        }
    }

    let mut seen_ids = BTreeSet::new();
    for req in inst.requests() {
        if !seen_ids.insert(req.id) {
            out.push(Violation::DuplicateRequestId { id: req.id });
        }
        if !inst.has_node(req.node) {
            out.push(Violation::UnknownNode {
                node: req.node,
                context: format!("request {}", req.id),
            });
        }
        if req.window.length < Rational::ONE {
            out.push(Violation::LengthTooShort {
                id: req.id,
                length: req.window.length,
            });
        }
        if req.window.length >= Rational::integer(2) {
            out.push(Violation::LengthTooLong {
                id: req.id,
                length: req.window.length,
            });
        }
        if req.profit.is_negative() {
            out.push(Violation::NegativeProfit {
                id: req.id,
                profit: req.profit,
            });
        }
    }

    let mut given: BTreeMap<(NodeId, NodeId), Rational> = BTreeMap::new();
    let mut edge_count = 0usize;
    for edge in inst.edges() {
        for node in [edge.u, edge.v] {
            if !inst.has_node(node) {
                out.push(Violation::UnknownNode {
                    node,
                    context: format!("edge {}-{}", edge.u, edge.v),
                });
            }
        }
        if edge.w.is_negative() {
            out.push(Violation::NegativeWeight {
                u: edge.u,
                v: edge.v,
                w: edge.w,
            });
        }
        if edge.u == edge.v {
            if !edge.w.is_zero() {
                out.push(Violation::SelfLoop {
                    node: edge.u,
                    w: edge.w,
                });
            }
            continue;
        }
        let key = (edge.u.min(edge.v), edge.u.max(edge.v));
        match given.get(&key) {
            Some(&w) if w != edge.w => out.push(Violation::ConflictingEdge { u: key.0, v: key.1 }),
            Some(_) => {}
            None => {
                given.insert(key, edge.w);
                edge_count += 1;
            }
        }
    }

    // Negative weights make the closure meaningless; stop after reporting them.
    if out
        .iter()
        .any(|v| matches!(v, Violation::NegativeWeight { .. }))
    {
        return out;
    }

    for (&(u, v), &w) in &given {
        if let Some(shortest) = inst.distance(u, v) {
            if shortest < w {
                out.push(Violation::TriangleInequality {
                    u,
                    v,
                    given: w,
                    shortest,
                });
            }
        }
    }

    let distinct: Vec<NodeId> = seen_nodes.into_iter().collect();
    if let Some(&root) = distinct.first() {
        for &other in &distinct[1..] {
            if inst.distance(root, other).is_none() {
                out.push(Violation::Disconnected { u: root, v: other });
            }
        }
    }

    if inst.metric_kind() == MetricKind::Tree
        && !distinct.is_empty()
        && edge_count != distinct.len() - 1
    {
        out.push(Violation::NotATree {
            nodes: distinct.len(),
            edges: edge_count,
        });
    }

    out
}

/// Requests of `inst` that some event of `run` visits inside their window,
/// with their total profit. Ignores the run's own `serviced` claim.
pub fn score_run(inst: &Instance, run: &ServiceRun) -> (Rational, Vec<RequestId>) {
    let mut ids: Vec<RequestId> = inst
        .requests()
        .iter()
        .filter(|req| {
            run.events
                .iter()
                .any(|e| e.node == req.node && req.window.contains(e.arrival))
        })
        .map(|req| req.id)
        .collect();
    ids.sort_unstable();
    ids.dedup();
    let profit = ids
        .iter()
        .filter_map(|id| inst.request(*id))
        .map(|r| r.profit)
        .sum();
    (profit, ids)
}

/// Checks a run against `inst` and returns the profit of its serviced set.
///
/// On failure the list holds the first kinematic problem found (if any)
/// followed by every problem with the serviced set.
pub fn validate_run(inst: &Instance, run: &ServiceRun) -> Result<Rational, Vec<Violation>> {
    if !run.speed.is_positive() {
        return Err(vec![Violation::NonPositiveSpeed { speed: run.speed }]);
    }
    let mut out = Vec::new();

    for (idx, event) in run.events.iter().enumerate() {
        if !inst.has_node(event.node) {
            out.push(Violation::UnknownNode {
                node: event.node,
                context: format!("run event {idx}"),
            });
            return Err(out);
        }
        if event.departure < event.arrival {
            out.push(Violation::WaitNegative { event: idx });
            return Err(out);
        }
        if idx > 0 {
            let prev = &run.events[idx - 1];
            let Some(d) = inst.distance(prev.node, event.node) else {
                out.push(Violation::Disconnected {
                    u: prev.node,
                    v: event.node,
                });
                return Err(out);
            };
            let expected = prev.departure + d / run.speed;
            if event.arrival != expected {
                out.push(Violation::Kinematics {
                    event: idx,
                    expected,
                    got: event.arrival,
                });
                return Err(out);
            }
        }
    }

    let mut seen = BTreeSet::new();
    let mut profit = Rational::ZERO;
    for &id in &run.serviced {
        if !seen.insert(id) {
            out.push(Violation::DuplicateService { id });
            continue;
        }
        let Some(req) = inst.request(id) else {
            out.push(Violation::UnknownRequest { id });
            continue;
        };
        let visited = run
            .events
            .iter()
            .any(|e| e.node == req.node && req.window.contains(e.arrival));
        if visited {
            profit += req.profit;
        } else {
            out.push(Violation::NotVisitedInWindow { id });
        }
    }

    if out.is_empty() {
        Ok(profit)
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, RunEvent, ServiceRequest, TimeWindow};
    use crate::rational::q;

    fn request(id: RequestId, node: NodeId, release: Rational, length: Rational) -> ServiceRequest {
        ServiceRequest {
            id,
            node,
            window: TimeWindow::new(release, length),
            profit: Rational::ONE,
        }
    }

    #[test]
    fn single_request_instance_is_ok() {
        let inst = Instance::new(
            MetricKind::Tree,
            vec![0],
            vec![],
            vec![request(0, 0, Rational::ZERO, q(3, 2))],
        );
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn length_two_is_rejected() {
        let inst = Instance::new(
            MetricKind::Tree,
            vec![0],
            vec![],
            vec![request(0, 0, Rational::ZERO, q(2, 1))],
        );
        let v = validate_instance(&inst);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("length must be < 2"));
    }

    #[test]
    fn triangle_violation_is_reported() {
        let inst = Instance::new(
            MetricKind::General,
            vec![0, 1, 2],
            vec![
                Edge {
                    u: 0,
                    v: 1,
                    w: q(5, 1),
                },
                Edge {
                    u: 1,
                    v: 2,
                    w: q(1, 1),
                },
                Edge {
                    u: 0,
                    v: 2,
                    w: q(10, 1),
                },
            ],
            vec![],
        );
        let v = validate_instance(&inst);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::TriangleInequality { u: 0, v: 2, .. })));
        assert!(v[0].to_string().contains("triangle inequality"));
    }

    #[test]
    fn tree_with_cycle_is_not_a_tree() {
        let inst = Instance::new(
            MetricKind::Tree,
            vec![0, 1, 2],
            vec![
                Edge {
                    u: 0,
                    v: 1,
                    w: q(1, 1),
                },
                Edge {
                    u: 1,
                    v: 2,
                    w: q(1, 1),
                },
                Edge {
                    u: 0,
                    v: 2,
                    w: q(2, 1),
                },
            ],
            vec![],
        );
        assert!(validate_instance(&inst)
            .iter()
            .any(|x| matches!(x, Violation::NotATree { .. })));
    }

    #[test]
    fn duplicate_ids_and_disconnection() {
        let inst = Instance::new(
            MetricKind::General,
            vec![0, 1],
            vec![],
            vec![
                request(3, 0, Rational::ZERO, q(1, 1)),
                request(3, 1, Rational::ZERO, q(1, 1)),
            ],
        );
        let v = validate_instance(&inst);
        assert!(v.contains(&Violation::DuplicateRequestId { id: 3 }));
        assert!(v.contains(&Violation::Disconnected { u: 0, v: 1 }));
    }

    fn two_nodes() -> Instance {
        Instance::new(
            MetricKind::Tree,
            vec![0, 1],
            vec![Edge {
                u: 0,
                v: 1,
                w: Rational::ONE,
            }],
            vec![request(0, 1, Rational::ONE, Rational::ONE)],
        )
    }

    #[test]
    fn empty_run_has_zero_profit() {
        assert_eq!(
            validate_run(&two_nodes(), &ServiceRun::empty(Rational::ONE)),
            Ok(Rational::ZERO)
        );
    }

    #[test]
    fn arrival_must_follow_travel_time() {
        let run = ServiceRun {
            speed: q(2, 1),
            events: vec![
                RunEvent {
                    node: 0,
                    arrival: Rational::ZERO,
                    departure: Rational::ZERO,
                },
                RunEvent {
                    node: 1,
                    arrival: Rational::ONE,
                    departure: Rational::ONE,
                },
            ],
            serviced: vec![],
        };
        let err = validate_run(&two_nodes(), &run).unwrap_err();
        assert_eq!(
            err,
            vec![Violation::Kinematics {
                event: 1,
                expected: q(1, 2),
                got: Rational::ONE
            }]
        );
    }

    #[test]
    fn service_at_deadline_is_infeasible() {
        let run = ServiceRun {
            speed: Rational::ONE,
            events: vec![
                RunEvent {
                    node: 0,
                    arrival: Rational::ZERO,
                    departure: Rational::ONE,
                },
                RunEvent {
                    node: 1,
                    arrival: q(2, 1),
                    departure: q(2, 1),
                },
            ],
            serviced: vec![0],
        };
        assert_eq!(
            validate_run(&two_nodes(), &run),
            Err(vec![Violation::NotVisitedInWindow { id: 0 }])
        );
        let early = ServiceRun {
            events: vec![
                RunEvent {
                    node: 0,
                    arrival: Rational::ZERO,
                    departure: q(9, 10),
                },
                RunEvent {
                    node: 1,
                    arrival: q(19, 10),
                    departure: q(19, 10),
                },
            ],
            ..run
        };
        assert_eq!(validate_run(&two_nodes(), &early), Ok(Rational::ONE));
    }
}
