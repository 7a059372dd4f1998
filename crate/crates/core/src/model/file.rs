use serde::{Deserialize, Serialize};

use super::{
    Edge, Instance, MetricKind, NodeId, RequestId, ServiceRequest, ServiceRun, TimeWindow,
};
use crate::rational::Rational;

/// The on-disk JSON layout of an instance. Rationals are `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub metric_kind: MetricKind,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<Edge>,
    pub requests: Vec<RequestRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ServiceRun>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestRecord {
    pub id: RequestId,
    pub node: NodeId,
    pub release: Rational,
    pub length: Rational,
    #[serde(default = "one")]
    pub profit: Rational,
}

fn one() -> Rational {
    Rational::ONE
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            metric_kind: inst.metric_kind(),
            nodes: inst.nodes().to_vec(),
            edges: inst.edges().to_vec(),
            requests: inst
                .requests()
                .iter()
                .map(|r| RequestRecord {
                    id: r.id,
                    node: r.node,
                    release: r.window.release,
                    length: r.window.length,
                    profit: r.profit,
                })
                .collect(),
            certificate: inst.certificate().cloned(),
        }
    }
}

impl From<InstanceFile> for Instance {
    fn from(file: InstanceFile) -> Self {
        let requests = file
            .requests
            .into_iter()
            .map(|r| ServiceRequest {
                id: r.id,
                node: r.node,
                window: TimeWindow::new(r.release, r.length),
                profit: r.profit,
            })
            .collect();
        let inst = Instance::new(file.metric_kind, file.nodes, file.edges, requests);
        match file.certificate {
            Some(run) => inst.with_certificate(run),
            None => inst,
        }
    }
}

impl Instance {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from(self))
            .expect("instance serialization cannot fail")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Instance> {
        serde_json::from_str::<InstanceFile>(text).map(Instance::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn parses_the_documented_layout() {
        let text = r#"{
            "metric_kind": "general",
            "nodes": [0, 1],
            "edges": [{"u": 0, "v": 1, "w": "3/10"}],
            "requests": [{"id": 7, "node": 1, "release": "1/10", "length": "6/5", "profit": "1/1"}]
        }"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.distance(0, 1), Some(q(3, 10)));
        assert_eq!(inst.requests()[0].window.deadline(), q(13, 10));
        let again = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn decimal_rationals_are_rejected() {
        let text = r#"{"metric_kind": "tree", "nodes": [0], "edges": [],
            "requests": [{"id": 0, "node": 0, "release": "0.5", "length": "1"}]}"#;
        assert!(Instance::from_json(text).is_err());
    }
}
