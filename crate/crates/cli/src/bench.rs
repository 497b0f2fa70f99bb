//! Benchmark configs and CSV records.
//!
//! ```toml
//! seed = 1
//! instances = 5        # per (protocol, m, |T|) cell
//! ballots = 4
//! max_weight = 5
//! budget_nodes = 1000000
//!
//! [[runs]]
//! protocol = "veto"
//! goal = "constructive"
//! m = [3]
//! t = [1, 2, 3, 4]
//! ```
//!
//! The `k`-th instance of every (protocol, m, |T|) cell is drawn with seed
//! `seed + k`, so cells that differ only in |T| share their elections and
//! the coalition grows by appending members. Rows come out in config order
//! whatever the thread count.

use std::io::Write;
use std::time::Instant;

use cwm_core::generate::{generate_random, GeneratorConfig, GoalKind, ProtocolFamily};
use cwm_core::manipulation::{planned_method, solve, SearchBudget};
use cwm_core::ManipulationError;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("bad bench config: {0}")]
    Config(String),
    #[error("instance {id}: {source}")]
    Instance {
        id: usize,
        #[source]
        source: ManipulationError,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::instances")]
    pub instances: usize,
    #[serde(default = "defaults::ballots")]
    pub ballots: usize,
    #[serde(default = "defaults::max_weight")]
    pub max_weight: u64,
    pub budget_nodes: Option<u64>,
    pub max_candidates: Option<usize>,
    #[serde(default)]
    pub runs: Vec<RunSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub protocol: String,
    #[serde(default = "defaults::goal")]
    pub goal: String,
    pub m: Vec<usize>,
    pub t: Vec<usize>,
    /// Randomized cup thresholds as `"num/den"`.
    #[serde(default)]
    pub thresholds: Vec<String>,
}

mod defaults {
    pub fn instances() -> usize {
        5
    }
    pub fn ballots() -> usize {
        4
    }
    pub fn max_weight() -> u64 {
        5
    }
    pub fn goal() -> String {
        "constructive".into()
    }
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn budget(&self) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            max_candidates: self.max_candidates.unwrap_or(d.max_candidates),
            max_manipulators: d.max_manipulators,
            max_nodes: self.budget_nodes.unwrap_or(d.max_nodes),
        }
    }

    /// Every instance the config asks for, numbered in emission order.
    pub fn jobs(&self) -> Result<Vec<Job>, BenchError> {
        let mut out = Vec::new();
        for run in &self.runs {
            let protocol: ProtocolFamily = run.protocol.parse().map_err(BenchError::Config)?;
            let goal: GoalKind = run.goal.parse().map_err(BenchError::Config)?;
            let thresholds = if run.thresholds.is_empty() {
                vec![Ratio::new(1, 2)]
            } else {
                run.thresholds
                    .iter()
                    .map(|r| {
                        r.parse::<Ratio<u64>>().map_err(|_| {
                            BenchError::Config(format!("threshold {r:?} is not num/den"))
                        })
                    })
                    .collect::<Result<_, _>>()?
            };
            for &m in &run.m {
                for &t in &run.t {
                    for k in 0..self.instances {
                        let cfg = GeneratorConfig {
                            m,
                            ballots: self.ballots,
                            max_weight: self.max_weight,
                            manipulators: t,
                            goal,
                            protocol,
                            thresholds: thresholds.clone(),
                        };
                        out.push(Job {
                            id: out.len(),
                            seed: self.seed.wrapping_add(k as u64),
                            config: cfg,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub id: usize,
    pub seed: u64,
    pub config: GeneratorConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub protocol: String,
    pub m: usize,
    pub s_weight: u64,
    pub t_count: usize,
    pub goal: String,
    pub method: String,
    /// `yes`, `no` or `timeout`.
    pub decision: String,
    pub wall_us: u64,
    /// Empty for timeouts.
    pub nodes: Option<u64>,
}

pub const CSV_HEADER: [&str; 9] = [
    "protocol", "m", "s_weight", "t_count", "goal", "method", "decision", "wall_us", "nodes",
];

fn run_one(job: &Job, budget: &SearchBudget, timing: bool) -> Result<BenchRecord, BenchError> {
    let (id, cfg) = (job.id, &job.config);
    let inst = generate_random(job.seed, cfg)
        .map_err(|e| BenchError::Config(format!("instance {id}: {e}")))?;
    let start = Instant::now();
    let result = solve(&inst, budget);
    let wall_us = if timing {
        start.elapsed().as_micros() as u64
    } else {
        0
    };
    let (method, decision, nodes) = match result {
        Ok(r) => (
            r.method,
            if r.decision { "yes" } else { "no" },
            Some(r.nodes),
        ),
        Err(ManipulationError::BudgetExceeded(_)) => (planned_method(&inst), "timeout", None),
        Err(source) => return Err(BenchError::Instance { id, source }),
    };
    Ok(BenchRecord {
        protocol: cfg.protocol.name().to_string(),
        m: cfg.m,
        s_weight: inst.nonmanipulators().total_weight(),
        t_count: inst.weights().len(),
        goal: inst.goal().kind().to_string(),
        method: method.name().to_string(),
        decision: decision.to_string(),
        wall_us,
        nodes,
    })
}

/// Solves every instance of `config`. With `timing` off the wall-time column
/// is zero, which makes the output reproducible byte for byte.
pub fn run_bench(
    config: &BenchConfig,
    threads: usize,
    timing: bool,
) -> Result<Vec<BenchRecord>, BenchError> {
    let jobs = config.jobs()?;
    let budget = config.budget();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    let mut rows: Vec<(usize, BenchRecord)> = pool.install(|| {
        jobs.par_iter()
            .map(|job| run_one(job, &budget, timing).map(|r| (job.id, r)))
            .collect::<Result<_, _>>()
    })?;
    rows.sort_by_key(|(id, _)| *id);
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_of(config: &str, threads: usize) -> String {
        let cfg = BenchConfig::from_toml(config).unwrap();
        let rows = run_bench(&cfg, threads, false).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_config_gives_header_only() {
        assert_eq!(
            csv_of("", 1),
            "protocol,m,s_weight,t_count,goal,method,decision,wall_us,nodes\n"
        );
    }

    #[test]
    fn output_does_not_depend_on_threads() {
        let cfg = "seed = 3\ninstances = 4\n[[runs]]\nprotocol = \"borda\"\nm = [3]\nt = [1, 2]\n\
                   [[runs]]\nprotocol = \"stv\"\ngoal = \"destructive\"\nm = [3, 4]\nt = [2]\n";
        let one = csv_of(cfg, 1);
        assert_eq!(one, csv_of(cfg, 4));
        assert_eq!(one, csv_of(cfg, 1));
        assert_eq!(one.lines().count(), 1 + 8 + 8);
    }

    #[test]
    fn timeouts_are_kept() {
        let cfg = "budget_nodes = 3\ninstances = 2\n[[runs]]\nprotocol = \"copeland\"\nm = [4]\nt = [3]\n";
        let cfg = BenchConfig::from_toml(cfg).unwrap();
        let rows = run_bench(&cfg, 1, true).unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert_eq!(r.decision, "timeout");
            assert_eq!(r.method, "exact_search");
            assert_eq!(r.nodes, None);
        }
    }

    #[test]
    fn bad_configs() {
        assert!(BenchConfig::from_toml("seed = \"x\"").is_err());
        assert!(BenchConfig::from_toml("colour = 1").is_err());
        let cfg =
            BenchConfig::from_toml("[[runs]]\nprotocol = \"bordaa\"\nm = [3]\nt = [1]\n").unwrap();
        assert!(matches!(
            run_bench(&cfg, 1, false),
            Err(BenchError::Config(_))
        ));
        let cfg =
            BenchConfig::from_toml("[[runs]]\nprotocol = \"maximin\"\nm = [1]\nt = [1]\n").unwrap();
        assert!(matches!(
            run_bench(&cfg, 1, false),
            Err(BenchError::Config(_))
        ));
    }
}
