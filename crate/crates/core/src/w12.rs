//! The 22-configuration driver.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::guarantee_fraction;
use crate::error::{Error, Result};
use crate::model::{score_run, validate_instance, validate_run, Instance, ServiceRun};
use crate::rational::Rational;
use crate::speedup::solve_trimmed;
use crate::trimming::{enumerate_configs, trim, TrimConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigOutcome {
    pub config: TrimConfig,
    pub shift: Rational,
    pub dropped: usize,
    /// Profit judged against the trimmed windows.
    pub trimmed_profit: Rational,
    /// Profit of the same run judged against the original windows.
    pub original_profit: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct W12Report {
    pub speed: Rational,
    pub outcomes: Vec<ConfigOutcome>,
    /// Index into `outcomes` of the chosen configuration.
    pub best: usize,
    /// `None` when the speed is outside the range the guarantee covers.
    pub guarantee: Option<Rational>,
    pub total_profit: Rational,
}

impl W12Report {
    pub fn best_outcome(&self) -> &ConfigOutcome {
        &self.outcomes[self.best]
    }

    /// Guaranteed profit, `guarantee * total profit`.
    pub fn guaranteed_profit(&self) -> Option<Rational> {
        self.guarantee.map(|g| g * self.total_profit)
    }

    pub fn meets_guarantee(&self) -> Option<bool> {
        self.guaranteed_profit()
            .map(|g| self.best_outcome().trimmed_profit >= g)
    }
}

/// Runs the exact trimmed solver under all 22 configurations and keeps the
/// run with the highest trimmed profit (earliest configuration on ties).
///
/// The returned run lists every request it visits inside the original
/// window, which can be more than the trimmed solve aimed for.
pub fn speedupw12(inst: &Instance, speed: Rational, cap: usize) -> Result<(ServiceRun, W12Report)> {
    let violations = validate_instance(inst);
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations));
    }
    if speed < Rational::ONE {
        return Err(Error::OutOfRange {
            what: "speed",
            value: speed,
            lo: Rational::ONE,
            hi: Rational::integer(6),
        });
    }
    let solved: Vec<(ConfigOutcome, ServiceRun)> = enumerate_configs()
        .into_par_iter()
        .map(|cfg| {
            let tr = trim(inst, &cfg)?;
            let mut run = solve_trimmed(&tr, speed, cap)?;
            let trimmed_profit = validate_run(tr.instance(), &run)
                .expect("the trimmed solver returns feasible runs");
            let (original_profit, ids) = score_run(inst, &run);
            run.serviced = ids;
            Ok((
                ConfigOutcome {
                    config: cfg,
                    shift: tr.scheme.shift,
                    dropped: tr.dropped().count(),
                    trimmed_profit,
                    original_profit,
                },
                run,
            ))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (idx, (outcome, _)) in solved.iter().enumerate() {
        if outcome.trimmed_profit > solved[best].0.trimmed_profit {
            best = idx;
        }
    }
    let run = solved[best].1.clone();
    debug_assert_eq!(validate_run(inst, &run), Ok(solved[best].0.original_profit));
    let report = W12Report {
        speed,
        outcomes: solved.into_iter().map(|(o, _)| o).collect(),
        best,
        guarantee: guarantee_fraction(speed).ok(),
        total_profit: inst.total_profit(),
    };
    Ok((run, report))
}
