use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use repairman_core::bounds::{verify_bounds, verify_theorem91};
use repairman_core::coverage::{lemma_ids, table_ids, verify_lemma, verify_table};
use repairman_core::model::{generate_planted_instance, generate_random_instance, RandomSpec};
use repairman_core::oracle::{search, SearchMode};
use repairman_core::w12::speedupw12;
use repairman_core::{report, validate_run, Instance, MetricKind, Rational, DEFAULT_CAP};

#[derive(Parser, Debug)]
#[command(
    name = "repairman",
    version,
    about = "Time-window repairman solver and analysis checker"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Write output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Seed for every random choice.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Tree,
    General,
}

impl From<Kind> for MetricKind {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::Tree => MetricKind::Tree,
            Kind::General => MetricKind::General,
        }
    }
}

fn rational(text: &str) -> std::result::Result<Rational, String> {
    text.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance.
    Gen {
        /// Number of requests.
        #[arg(short, long, default_value_t = 6)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Tree)]
        kind: Kind,
        /// Plant a unit-speed run serving every request.
        #[arg(long)]
        planted: bool,
        /// Node count for unplanted instances.
        #[arg(long, default_value_t = 4)]
        nodes: usize,
        /// Edge weight scale.
        #[arg(long, value_parser = rational, default_value = "3/10")]
        spacing: Rational,
        /// Releases fall in [0, horizon) for unplanted instances.
        #[arg(long, value_parser = rational, default_value = "4")]
        horizon: Rational,
    },
    /// Run the 22-configuration approximation.
    Solve {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long, value_parser = rational)]
        speed: Rational,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Exact optimum by search.
    Oracle {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long, value_parser = rational, default_value = "1")]
        speed: Rational,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Disable the profit bound.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Check the analysis objects.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Ratio, LP optimum and weight check on a speed grid.
    Table1 {
        #[arg(long, value_parser = rational, default_value = "1/20")]
        grid: Rational,
    },
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Rebuild the coverage tables.
    Coverage {
        #[arg(long, default_value_t = 12)]
        rmax: i128,
        #[arg(long, value_delimiter = ',')]
        which: Vec<String>,
    },
    /// Minimum-yield inequalities.
    Lemmas {
        #[arg(long, default_value_t = 12)]
        rmax: i128,
        #[arg(long, value_delimiter = ',')]
        which: Vec<String>,
    },
    /// Bound functions, LP and ratio curve.
    Bounds {
        #[arg(long, value_parser = rational, default_value = "1/20")]
        grid: Rational,
    },
}

struct Output {
    body: String,
    ok: bool,
    summary: String,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn read_instance(path: &PathBuf) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pick(which: &[String], all: Vec<&'static str>) -> Vec<String> {
    if which.is_empty() {
        all.into_iter().map(String::from).collect()
    } else {
        which.to_vec()
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let format = cli.common.format;
    match &cli.command {
        Command::Gen {
            n,
            kind,
            planted,
            nodes,
            spacing,
            horizon,
        } => {
            let inst = if *planted {
                generate_planted_instance(*n, (*kind).into(), *spacing, cli.common.seed)?
            } else {
                let spec = RandomSpec {
                    requests: *n,
                    nodes: *nodes,
                    kind: (*kind).into(),
                    spacing: *spacing,
                    horizon: *horizon,
                };
                generate_random_instance(spec, cli.common.seed)?
            };
            let body = match format {
                Format::Json => inst.to_json() + "\n",
                Format::Csv => report::requests_csv(&inst)?,
            };
            let summary = format!(
                "{} requests on {} nodes",
                inst.requests().len(),
                inst.nodes().len()
            );
            Ok(Output {
                body,
                ok: true,
                summary,
            })
        }
        Command::Solve { input, speed, cap } => {
            let inst = read_instance(input)?;
            let (service, w12) = speedupw12(&inst, *speed, *cap)?;
            let profit = validate_run(&inst, &service)
                .map_err(|v| anyhow::anyhow!("solver produced an infeasible run: {v:?}"))?;
            let body = match format {
                Format::Json => {
                    json(&serde_json::json!({ "profit": profit, "run": service, "report": w12 }))?
                }
                Format::Csv => report::w12_csv(&w12)?,
            };
            let guarantee = match w12.guaranteed_profit() {
                Some(g) => format!(", guaranteed {g}"),
                None => String::new(),
            };
            let summary = format!(
                "profit {profit} of {} at speed {speed} using {}{guarantee}",
                inst.total_profit(),
                w12.best_outcome().config.label()
            );
            Ok(Output {
                body,
                ok: true,
                summary,
            })
        }
        Command::Oracle {
            input,
            speed,
            cap,
            exhaustive,
        } => {
            let inst = read_instance(input)?;
            let mode = if *exhaustive {
                SearchMode::Exhaustive
            } else {
                SearchMode::Pruned
            };
            let best = search(&inst, *speed, *cap, mode)?;
            let profit = validate_run(&inst, &best)
                .map_err(|v| anyhow::anyhow!("oracle produced an infeasible run: {v:?}"))?;
            let body = match format {
                Format::Json => json(&serde_json::json!({ "profit": profit, "run": best }))?,
                Format::Csv => report::run_csv(&best)?,
            };
            Ok(Output {
                body,
                ok: true,
                summary: format!("optimal profit {profit} at speed {speed}"),
            })
        }
        Command::Verify {
            suite: Suite::Coverage { rmax, which },
        } => {
            let reports = pick(which, table_ids())
                .iter()
                .map(|id| Ok(verify_table(id, *rmax)?))
                .collect::<Result<Vec<_>>>()?;
            let failed: Vec<&str> = reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.id.as_str())
                .collect();
            let body = match format {
                Format::Json => json(&reports)?,
                Format::Csv => report::table_mismatches_csv(&reports)?,
            };
            let summary = if failed.is_empty() {
                format!("{} tables reproduced for r <= {rmax}", reports.len())
            } else {
                format!("mismatches in {}", failed.join(", "))
            };
            Ok(Output {
                body,
                ok: failed.is_empty(),
                summary,
            })
        }
        Command::Verify {
            suite: Suite::Lemmas { rmax, which },
        } => {
            let reports = pick(which, lemma_ids())
                .iter()
                .map(|id| Ok(verify_lemma(id, *rmax)?))
                .collect::<Result<Vec<_>>>()?;
            let failed: Vec<&str> = reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.id.as_str())
                .collect();
            let body = match format {
                Format::Json => json(&reports)?,
                Format::Csv => report::lemma_cases_csv(&reports)?,
            };
            let summary = if failed.is_empty() {
                format!(
                    "{} inequalities hold and are tight for r <= {rmax}",
                    reports.len()
                )
            } else {
                format!("failed: {}", failed.join(", "))
            };
            Ok(Output {
                body,
                ok: failed.is_empty(),
                summary,
            })
        }
        Command::Verify {
            suite: Suite::Bounds { grid },
        } => {
            let bounds = verify_bounds(*grid)?;
            let body = match format {
                Format::Json => json(&bounds)?,
                Format::Csv => report::bounds_checks_csv(&bounds)?,
            };
            let summary = bounds
                .checks
                .iter()
                .map(|c| format!("{} {}", if c.passed { "ok" } else { "FAILED" }, c.name))
                .collect::<Vec<_>>()
                .join(", ");
            Ok(Output {
                body,
                ok: bounds.passed(),
                summary,
            })
        }
        Command::Table1 { grid } => {
            let rows = verify_theorem91(*grid)?;
            let ok = rows.iter().all(|r| r.passed());
            let body = match format {
                Format::Json => json(&rows)?,
                Format::Csv => report::theorem_rows_csv(&rows)?,
            };
            Ok(Output {
                body,
                ok,
                summary: format!("{} speeds", rows.len()),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: could not start {jobs} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|out| {
        match &cli.common.output {
            Some(path) => {
                fs::write(path, &out.body).with_context(|| format!("writing {}", path.display()))?
            }
            None => io::stdout().lock().write_all(out.body.as_bytes())?,
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            eprintln!("{}", out.summary);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn decimal_speeds_are_rejected() {
        assert!(
            Cli::try_parse_from(["repairman", "solve", "-i", "x.json", "--speed", "1.5"]).is_err()
        );
        assert!(
            Cli::try_parse_from(["repairman", "solve", "-i", "x.json", "--speed", "3/2"]).is_ok()
        );
    }

    #[test]
    fn shared_flags_work_after_the_subcommand() {
        let cli = Cli::try_parse_from(["repairman", "table1", "--seed", "7", "--format", "json"])
            .unwrap();
        assert_eq!((cli.common.seed, cli.common.format), (7, Format::Json));
    }
}
