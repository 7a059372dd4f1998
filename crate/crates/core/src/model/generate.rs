//! Seeded instance generators.
//!
//! All randomness goes through `ChaCha8Rng`, so a seed reproduces the same
//! instance on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Instance, MetricKind, NodeId, ServiceRequest, ServiceRun, Stop, TimeWindow};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Denominator of the grid that release offsets and lengths are drawn from.
const GRID: i128 = 101;

fn is_quarter_multiple(t: Rational) -> bool {
    (t * Rational::integer(4)).is_integer()
}

fn random_edges(rng: &mut ChaCha8Rng, n: usize, kind: MetricKind, spacing: Rational) -> Vec<Edge> {
    let mut edges = Vec::new();
    for child in 1..n {
        let parent = rng.gen_range(0..child);
        edges.push(Edge {
            u: parent as NodeId,
            v: child as NodeId,
            w: spacing * Rational::integer(rng.gen_range(1..=3)),
        });
    }
    if kind == MetricKind::Tree || n < 3 {
        return edges;
    }
    // A few chords, then publish the full closure so the edge list is itself a metric.
    for _ in 0..n / 2 {
        let u = rng.gen_range(0..n) as NodeId;
        let v = rng.gen_range(0..n) as NodeId;
        if u != v {
            edges.push(Edge {
                u,
                v,
                w: spacing * Rational::integer(rng.gen_range(1..=3)),
            });
        }
    }
    let nodes: Vec<NodeId> = (0..n as NodeId).collect();
    let closure = Instance::new(MetricKind::General, nodes.clone(), edges, Vec::new());
    let mut full = Vec::new();
    for &u in &nodes {
        for &v in &nodes {
            if u < v {
                let w = closure
                    .distance(u, v)
                    .expect("spanning tree keeps the graph connected");
                full.push(Edge { u, v, w });
            }
        }
    }
    full
}

fn random_length(rng: &mut ChaCha8Rng) -> Rational {
    Rational::ONE + Rational::new(rng.gen_range(0..GRID), GRID)
}

/// An instance with `n` requests on `n` nodes and a recorded unit-speed run
/// that services all of them.
///
/// The hidden run visits the nodes in a random order, starting at a random
/// time in `[2, 3)`. Each request's window is drawn around the hidden
/// arrival, with length in `[1, 2)` on a grid of 1/101 and a start that is
/// never a multiple of 1/4.
pub fn generate_planted_instance(
    n: usize,
    kind: MetricKind,
    spacing: Rational,
    seed: u64,
) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !spacing.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<NodeId> = (0..n as NodeId).collect();
    let edges = random_edges(&mut rng, n, kind, spacing);
    let skeleton = Instance::new(kind, nodes.clone(), edges.clone(), Vec::new());

    let mut order = nodes.clone();
    order.shuffle(&mut rng);

    let mut t = Rational::integer(2) + Rational::new(rng.gen_range(1..GRID), GRID);
    let mut requests = Vec::with_capacity(n);
    let mut stops = Vec::with_capacity(n);
    for (idx, &node) in order.iter().enumerate() {
        if idx > 0 {
            t += skeleton
                .distance(order[idx - 1], node)
                .expect("generated metric is connected");
        }
        let length = random_length(&mut rng);
        let release = loop {
            let slack = Rational::new(rng.gen_range(0..GRID), GRID) * length;
            let release = t - slack;
            if !is_quarter_multiple(release) {
                break release;
            }
        };
        requests.push(ServiceRequest {
            id: idx as u32,
            node,
            window: TimeWindow::new(release, length),
            profit: Rational::ONE,
        });
        stops.push(Stop {
            node,
            time: t,
            requests: vec![idx as u32],
        });
    }

    let certificate = ServiceRun::from_stops(&skeleton, Rational::ONE, &stops);
    Ok(Instance::new(kind, nodes, edges, requests).with_certificate(certificate))
}

/// Parameters for [`generate_random_instance`].
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub requests: usize,
    pub nodes: usize,
    pub kind: MetricKind,
    pub spacing: Rational,
    /// Releases are drawn from `[0, horizon)`.
    pub horizon: Rational,
}

/// An instance with no planted structure: requests land on random nodes with
/// random releases in `[0, horizon)`, never on a multiple of 1/4.
pub fn generate_random_instance(spec: RandomSpec, seed: u64) -> Result<Instance> {
    if spec.nodes == 0 {
        return Err(Error::InvalidParameter(
            "at least one node is required".into(),
        ));
    }
    if !spec.spacing.is_positive() || !spec.horizon.is_positive() {
        return Err(Error::InvalidParameter(
            "spacing and horizon must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<NodeId> = (0..spec.nodes as NodeId).collect();
    let edges = random_edges(&mut rng, spec.nodes, spec.kind, spec.spacing);
    let steps = (spec.horizon * Rational::integer(GRID)).ceil().max(1);
    let mut requests = Vec::with_capacity(spec.requests);
    for id in 0..spec.requests {
        let release = loop {
            let candidate = Rational::new(rng.gen_range(0..steps), GRID);
            if !is_quarter_multiple(candidate) && candidate < spec.horizon {
                break candidate;
            }
        };
        requests.push(ServiceRequest {
            id: id as u32,
            node: rng.gen_range(0..spec.nodes) as NodeId,
            window: TimeWindow::new(release, random_length(&mut rng)),
            profit: Rational::ONE,
        });
    }
    Ok(Instance::new(spec.kind, nodes, edges, requests))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_instance, validate_run};
    use crate::rational::q;

    #[test]
    fn planted_certificate_services_everything() {
        for kind in [MetricKind::Tree, MetricKind::General] {
            for n in 1..=8 {
                let inst = generate_planted_instance(n, kind, q(3, 10), 7).unwrap();
                assert!(
                    validate_instance(&inst).is_empty(),
                    "{:?}",
                    validate_instance(&inst)
                );
                let cert = inst.certificate().unwrap();
                assert_eq!(cert.speed, Rational::ONE);
                assert_eq!(validate_run(&inst, cert), Ok(Rational::integer(n as i128)));
            }
        }
    }

    #[test]
    fn no_window_starts_on_a_quarter() {
        for seed in 0..20 {
            let inst = generate_planted_instance(6, MetricKind::Tree, q(1, 4), seed).unwrap();
            assert!(inst
                .requests()
                .iter()
                .all(|r| !is_quarter_multiple(r.window.release)));
            let spec = RandomSpec {
                requests: 6,
                nodes: 3,
                kind: MetricKind::General,
                spacing: q(1, 4),
                horizon: q(3, 1),
            };
            let inst = generate_random_instance(spec, seed).unwrap();
            assert!(validate_instance(&inst).is_empty());
            assert!(inst
                .requests()
                .iter()
                .all(|r| !is_quarter_multiple(r.window.release)));
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = generate_planted_instance(5, MetricKind::Tree, q(3, 10), 11).unwrap();
        let b = generate_planted_instance(5, MetricKind::Tree, q(3, 10), 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_planted_instance(0, MetricKind::Tree, q(1, 1), 0).is_err());
        assert!(generate_planted_instance(3, MetricKind::Tree, Rational::ZERO, 0).is_err());
    }
}
