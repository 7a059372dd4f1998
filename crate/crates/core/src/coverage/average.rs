use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    generate_random_instance, score_run, MetricKind, RandomSpec, RequestId, ServiceRun, Stop,
};
use crate::oracle::optimal_run_at_speed;
use crate::rational::{q, Rational};
use crate::trimming::{enumerate_configs, trim, TrimmedInstance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AverageCoverage {
    /// Smallest per-subset average coverage.
    pub mu: Rational,
    pub per_subset: Vec<Rational>,
    /// First run covering the largest fraction of the union.
    pub witness: usize,
    pub witness_fraction: Rational,
}

fn covered(tr: &TrimmedInstance, run: &ServiceRun) -> BTreeSet<RequestId> {
    score_run(tr.instance(), run).1.into_iter().collect()
}

fn fraction(set: &BTreeSet<RequestId>, hit: &BTreeSet<RequestId>) -> Rational {
    Rational::new(set.intersection(hit).count() as i128, set.len() as i128)
}

/// Average coverage of each subset over `runs` and a run that does at least
/// as well on the union as the worst subset does on average.
///
/// Coverage counts requests of the trimmed instance that a run visits inside
/// their trimmed window. The subsets must be nonempty and pairwise disjoint:
/// with overlaps the union can be covered less than every subset is.
pub fn average_coverage(
    subsets: &[Vec<RequestId>],
    runs: &[ServiceRun],
    tr: &TrimmedInstance,
) -> Result<AverageCoverage> {
    if runs.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one run is required".into(),
        ));
    }
    if subsets.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one subset is required".into(),
        ));
    }
    let sets: Vec<BTreeSet<RequestId>> = subsets
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    let mut union = BTreeSet::new();
    for (idx, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::InvalidParameter(format!("subset {idx} is empty")));
        }
        if set.len() != subsets[idx].len() || !union.is_disjoint(set) {
            return Err(Error::InvalidParameter(format!(
                "subset {idx} overlaps another subset"
            )));
        }
        union.extend(set.iter().copied());
    }

    let hits: Vec<BTreeSet<RequestId>> = runs.iter().map(|run| covered(tr, run)).collect();
    let count = Rational::integer(runs.len() as i128);
    let per_subset: Vec<Rational> = sets
        .iter()
        .map(|set| hits.iter().map(|hit| fraction(set, hit)).sum::<Rational>() / count)
        .collect();
    let mu = *per_subset.iter().min().expect("nonempty");

    let mut witness = 0;
    let mut witness_fraction = fraction(&union, &hits[0]);
    for (idx, hit) in hits.iter().enumerate().skip(1) {
        let f = fraction(&union, hit);
        if f > witness_fraction {
            witness = idx;
            witness_fraction = f;
        }
    }
    Ok(AverageCoverage {
        mu,
        per_subset,
        witness,
        witness_fraction,
    })
}

/// A generated input for [`average_coverage`].
#[derive(Clone, Debug)]
pub struct CoverageCase {
    pub trimmed: TrimmedInstance,
    pub reference: ServiceRun,
    pub subsets: Vec<Vec<RequestId>>,
    pub runs: Vec<ServiceRun>,
}

fn random_run(rng: &mut ChaCha8Rng, tr: &TrimmedInstance) -> ServiceRun {
    let inst = tr.instance();
    let speed = [q(1, 1), q(3, 2), q(2, 1)][rng.gen_range(0..3)];
    let mut requests = inst.requests().to_vec();
    requests.shuffle(rng);
    requests.truncate(rng.gen_range(0..=requests.len()));
    requests.sort_by_key(|a| (a.window.release, a.id));
    let mut stops: Vec<Stop> = Vec::new();
    for req in requests {
        let ready = match stops.last() {
            None => req.window.release,
            Some(last) => match inst.distance(last.node, req.node) {
                Some(d) => last.time + d / speed,
                None => continue,
            },
        };
        let time = ready.max(req.window.release);
        if time < req.window.deadline() {
            stops.push(Stop {
                node: req.node,
                time,
                requests: vec![req.id],
            });
        }
    }
    ServiceRun::from_stops(inst, speed, &stops)
}

/// A seeded case: a random trimmed instance, its unit-speed optimum as the
/// reference, a random partition of what the reference serves, and a few
/// random feasible runs.
pub fn random_case(seed: u64) -> Result<CoverageCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs = enumerate_configs();
    loop {
        let spec = RandomSpec {
            requests: rng.gen_range(3..=7),
            nodes: rng.gen_range(1..=4),
            kind: MetricKind::General,
            spacing: q(1, 5),
            horizon: q(3, 1),
        };
        let inst = generate_random_instance(spec, rng.gen())?;
        let tr = trim(&inst, &configs[rng.gen_range(0..configs.len())])?;
        let reference = optimal_run_at_speed(tr.instance(), Rational::ONE, 10)?;
        if reference.serviced.is_empty() {
            continue;
        }
        let mut served = reference.serviced.clone();
        served.shuffle(&mut rng);
        let parts = rng.gen_range(1..=served.len().min(3));
        let mut subsets: Vec<Vec<RequestId>> = vec![Vec::new(); parts];
        for (idx, id) in served.into_iter().enumerate() {
            let slot = if idx < parts {
                idx
            } else {
                rng.gen_range(0..parts)
            };
            subsets[slot].push(id);
        }
        let mut runs = vec![reference.clone()];
        for _ in 0..rng.gen_range(1..=4) {
            runs.push(random_run(&mut rng, &tr));
        }
        runs.shuffle(&mut rng);
        return Ok(CoverageCase {
            trimmed: tr,
            reference,
            subsets,
            runs,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, ServiceRequest, TimeWindow};
    use crate::trimming::{PeriodScheme, TrimConfig};

    fn two_request_case() -> (TrimmedInstance, ServiceRun, ServiceRun, ServiceRun) {
        let reqs = (0..2)
            .map(|id| ServiceRequest {
                id,
                node: id,
                window: TimeWindow::new(q(1, 10), q(3, 2)),
                profit: Rational::ONE,
            })
            .collect();
        let inst = Instance::new(
            MetricKind::General,
            vec![0, 1],
            vec![crate::model::Edge {
                u: 0,
                v: 1,
                w: q(1, 10),
            }],
            reqs,
        );
        let scheme = PeriodScheme {
            alpha: q(1, 2),
            offset: Rational::ZERO,
            shift: Rational::ZERO,
        };
        let cfg = TrimConfig {
            alpha: q(1, 2),
            offset: Rational::ZERO,
            j: 1,
            k: 1,
        };
        let tr = TrimmedInstance::from_assignment(
            &inst,
            scheme,
            cfg,
            &[(0, 1), (1, 1)].into_iter().collect(),
        );
        let stop = |node: u32, t: Rational| Stop {
            node,
            time: t,
            requests: vec![node],
        };
        let both = ServiceRun::from_stops(
            tr.instance(),
            Rational::ONE,
            &[stop(0, q(1, 2)), stop(1, q(3, 5))],
        );
        let only0 = ServiceRun::from_stops(tr.instance(), Rational::ONE, &[stop(0, q(1, 2))]);
        let only1 = ServiceRun::from_stops(tr.instance(), Rational::ONE, &[stop(1, q(1, 2))]);
        (tr, both, only0, only1)
    }

    #[test]
    fn full_coverage() {
        let (tr, both, _, _) = two_request_case();
        let ac = average_coverage(&[vec![0, 1]], &[both], &tr).unwrap();
        assert_eq!((ac.mu, ac.witness), (Rational::ONE, 0));
    }

    #[test]
    fn split_coverage() {
        let (tr, _, only0, only1) = two_request_case();
        let ac = average_coverage(&[vec![0], vec![1]], &[only0, only1], &tr).unwrap();
        assert_eq!(ac.mu, q(1, 2));
        assert!(ac.witness_fraction >= ac.mu);
    }

    #[test]
    fn overlapping_and_empty_subsets_are_rejected() {
        let (tr, both, _, _) = two_request_case();
        assert!(
            average_coverage(&[vec![0, 1], vec![0]], std::slice::from_ref(&both), &tr).is_err()
        );
        assert!(average_coverage(&[vec![]], std::slice::from_ref(&both), &tr).is_err());
        assert!(average_coverage(&[vec![0]], &[], &tr).is_err());
    }

    #[test]
    fn random_cases_have_a_witness() {
        for seed in 0..30 {
            let case = random_case(seed).unwrap();
            let ac = average_coverage(&case.subsets, &case.runs, &case.trimmed).unwrap();
            assert!(ac.witness_fraction >= ac.mu, "seed {seed}");
        }
    }
}
