//! Instances, windows, service runs and their checks.

mod file;
mod generate;
mod run;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

pub use file::InstanceFile;
pub use generate::{generate_planted_instance, generate_random_instance, RandomSpec};
pub use run::{RunEvent, ServiceRun, Stop};
pub use validate::{score_run, validate_instance, validate_run, Violation};

pub type NodeId = u32;
pub type RequestId = u32;

/// Half-open interval `[release, release + length)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeWindow {
    pub release: Rational,
    pub length: Rational,
}

impl TimeWindow {
    pub fn new(release: Rational, length: Rational) -> Self {
        TimeWindow { release, length }
    }

    pub fn deadline(&self) -> Rational {
        self.release + self.length
    }

    pub fn contains(&self, t: Rational) -> bool {
        self.release <= t && t < self.deadline()
    }

    /// `true` when `other` lies inside `self`.
    pub fn covers(&self, other: &TimeWindow) -> bool {
        self.release <= other.release && other.deadline() <= self.deadline()
    }

    pub fn disjoint(&self, other: &TimeWindow) -> bool {
        self.deadline() <= other.release || other.deadline() <= self.release
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceRequest {
    pub id: RequestId,
    pub node: NodeId,
    pub window: TimeWindow,
    pub profit: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Tree,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Rational,
}

/// A metric space over a finite node set plus the service requests placed on it.
///
/// Distances are the shortest-path closure of the stored edges. Whether the
/// stored edges themselves are a valid metric (or a tree, for
/// [`MetricKind::Tree`]) is checked by [`validate_instance`], not here, so an
/// `Instance` can represent malformed input long enough to report on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    metric_kind: MetricKind,
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    requests: Vec<ServiceRequest>,
    certificate: Option<ServiceRun>,
    index: BTreeMap<NodeId, usize>,
    dist: Vec<Vec<Option<Rational>>>,
}

impl Instance {
    /// Builds an instance and its distance closure.
    ///
    /// Edges or requests that mention nodes outside `nodes` are kept and
    /// reported by [`validate_instance`]; such edges do not take part in the
    /// closure.
    pub fn new(
        metric_kind: MetricKind,
        nodes: Vec<NodeId>,
        edges: Vec<Edge>,
        requests: Vec<ServiceRequest>,
    ) -> Self {
        let mut index = BTreeMap::new();
        for &node in &nodes {
            let next = index.len();
            index.entry(node).or_insert(next);
        }
        let n = index.len();
        let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = Some(Rational::ZERO);
        }
        for edge in &edges {
            if let (Some(&a), Some(&b)) = (index.get(&edge.u), index.get(&edge.v)) {
                if a == b {
                    continue;
                }
                let better = match dist[a][b] {
                    Some(current) => edge.w < current,
                    None => true,
                };
                if better {
                    dist[a][b] = Some(edge.w);
                    dist[b][a] = Some(edge.w);
                }
            }
        }
        #[allow(clippy::needless_range_loop)]
        for via in 0..n {
            for a in 0..n {
                let Some(left) = dist[a][via] else { continue };
                for b in 0..n {
                    if let Some(right) = dist[via][b] {
                        let through = left + right;
                        if dist[a][b].is_none_or(|d| through < d) {
                            dist[a][b] = Some(through);
                        }
                    }
                }
            }
        }
        Instance {
            metric_kind,
            nodes,
            edges,
            requests,
            certificate: None,
            index,
            dist,
        }
    }

    pub fn with_certificate(mut self, certificate: ServiceRun) -> Self {
        self.certificate = Some(certificate);
        self
    }

    /// Same metric, different request list.
    pub fn with_requests(&self, requests: Vec<ServiceRequest>) -> Self {
        Instance {
            requests,
            certificate: None,
            ..self.clone()
        }
    }

    /// Multiplies every edge weight by `factor`.
    pub fn scale_distances(&self, factor: Rational) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                w: e.w * factor,
                ..*e
            })
            .collect();
        Instance::new(
            self.metric_kind,
            self.nodes.clone(),
            edges,
            self.requests.clone(),
        )
    }

    pub fn metric_kind(&self) -> MetricKind {
        self.metric_kind
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn requests(&self) -> &[ServiceRequest] {
        &self.requests
    }

    pub fn request(&self, id: RequestId) -> Option<&ServiceRequest> {
        self.requests.iter().find(|r| r.id == id)
    }

    pub fn certificate(&self) -> Option<&ServiceRun> {
        self.certificate.as_ref()
    }

    pub fn has_node(&self, node: NodeId) -> bool {
        self.index.contains_key(&node)
    }

    /// Shortest-path distance, or `None` when either node is unknown or the
    /// two are disconnected.
    pub fn distance(&self, u: NodeId, v: NodeId) -> Option<Rational> {
        let a = *self.index.get(&u)?;
        let b = *self.index.get(&v)?;
        self.dist[a][b]
    }

    pub fn total_profit(&self) -> Rational {
        self.requests.iter().map(|r| r.profit).sum()
    }
}
