use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cwm_core::generate::{generate_random, GeneratorConfig, GoalKind, ProtocolFamily};
use cwm_core::manipulation::{solve, validate_witness, SearchBudget};
use cwm_core::protocols::{winner, Outcome, TieBreak};
use cwm_core::reductions::{
    partition_multisets, verify_reduction, Encoder, PartitionInstance, ReductionReport,
};
use cwm_core::{ManipulationError, ReductionError};
use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::bench::{run_bench, write_csv, BenchConfig, BenchError};
use crate::format::{
    parse_election, parse_witness, serialize_election, serialize_witness, ElectionDocument,
};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget(_) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

impl From<ManipulationError> for CliError {
    fn from(e: ManipulationError) -> Self {
        match e {
            ManipulationError::BudgetExceeded(msg) => CliError::Budget(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Manipulation(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Io(io) => CliError::Io(io),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cwm",
    version,
    about = "Weighted elections and coalitional manipulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TieBreakArg {
    Pessimistic,
    Optimistic,
    /// Candidate order of the document, first listed wins ties.
    Lexicographic,
}

impl TieBreakArg {
    fn policy(self, m: usize) -> TieBreak {
        match self {
            TieBreakArg::Pessimistic => TieBreak::Pessimistic,
            TieBreakArg::Optimistic => TieBreak::Optimistic,
            TieBreakArg::Lexicographic => TieBreak::lexicographic(m),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EncoderArg {
    Veto,
    Stv,
    Runoff,
}

impl From<EncoderArg> for Encoder {
    fn from(e: EncoderArg) -> Self {
        match e {
            EncoderArg::Veto => Encoder::Veto,
            EncoderArg::Stv => Encoder::Stv,
            EncoderArg::Runoff => Encoder::Runoff,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveFlags {
    /// Override the document's tie policy.
    #[arg(long, value_enum)]
    pub tiebreak: Option<TieBreakArg>,
    /// Node limit for exhaustive search.
    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

impl SolveFlags {
    fn budget(&self) -> SearchBudget {
        let mut b = SearchBudget::default();
        if let Some(n) = self.budget_nodes {
            b.max_nodes = n;
        }
        b
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the winner set (or win probabilities) of an election file.
    Winner {
        file: PathBuf,
        #[arg(long, value_enum)]
        tiebreak: Option<TieBreakArg>,
    },
    /// Decide the file's manipulation question and print a witness on yes.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Check a witness file against the file's manipulation question.
    Verify {
        file: PathBuf,
        witness: PathBuf,
        #[arg(long, value_enum)]
        tiebreak: Option<TieBreakArg>,
    },
    /// Encode a PARTITION instance and compare both answers.
    Reduce {
        #[arg(required = true)]
        values: Vec<u64>,
        #[arg(long, value_enum)]
        encoder: EncoderArg,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Run the reduction equivalence sweep over all small PARTITION multisets.
    Sweep {
        /// Restrict to one encoder; default runs all three.
        #[arg(long, value_enum)]
        encoder: Option<EncoderArg>,
        /// Largest multiset size (default 6 for veto, 5 otherwise).
        #[arg(long)]
        max_len: Option<usize>,
        /// Largest value (default 5 for veto, 4 otherwise).
        #[arg(long)]
        max_value: Option<u64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Solve the instances described by a TOML config and write CSV.
    Bench {
        config: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write 0 in the wall-time column.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Write a random manipulation instance as an election file.
    Gen {
        #[arg(long)]
        protocol: ProtocolFamily,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        ballots: usize,
        #[arg(long, default_value_t = 5)]
        max_weight: u64,
        #[arg(long, default_value_t = 2)]
        manipulators: usize,
        #[arg(long, default_value = "constructive")]
        goal: GoalKind,
        /// Randomized cup threshold as num/den.
        #[arg(long, default_value = "1/2")]
        threshold: Ratio<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        tiebreak: Option<TieBreakArg>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ElectionDocument, CliError> {
    parse_election(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn policy(doc: &ElectionDocument, arg: Option<TieBreakArg>) -> TieBreak {
    arg.map_or_else(|| doc.tie_break.clone(), |a| a.policy(doc.candidates()))
}

fn ratio(r: Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn print_outcome(
    doc: &ElectionDocument,
    outcome: &Outcome,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match outcome {
        Outcome::Winners(set) => {
            let names: Vec<&str> = set.iter().map(|&c| doc.label(c)).collect();
            writeln!(out, "winners: {}", names.join(" "))
        }
        Outcome::Lottery(dist) => {
            for c in 0..doc.candidates() {
                let (lo, hi) = (dist.lower(c), dist.upper(c));
                if lo == hi {
                    writeln!(out, "{}: {}", doc.label(c), ratio(lo))?;
                } else {
                    writeln!(out, "{}: {} to {}", doc.label(c), ratio(lo), ratio(hi))?;
                }
            }
            Ok(())
        }
    }
}

fn write_to(path: Option<&Path>, text: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text)?,
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_report(r: &ReductionReport, out: &mut dyn Write) -> std::io::Result<()> {
    match &r.partition.subset {
        Some(s) => writeln!(out, "partition: yes, half at positions {s:?}")?,
        None => writeln!(out, "partition: no")?,
    }
    writeln!(
        out,
        "manipulation: {} ({}, {} nodes)",
        yes_no(r.manipulation.decision),
        r.manipulation.method.name(),
        r.manipulation.nodes
    )?;
    writeln!(out, "agreement: {}", yes_no(r.agreement))?;
    if let Some(ok) = r.transported_accepted {
        writeln!(
            out,
            "transported witness: {}",
            if ok { "accepted" } else { "rejected" }
        )?;
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Winner { file, tiebreak } => {
            let doc = load(&file)?;
            let outcome = winner(&doc.profile(), &doc.spec(), &policy(&doc, tiebreak))
                .map_err(|e| CliError::Input(e.to_string()))?;
            print_outcome(&doc, &outcome, out)?;
        }
        Command::Solve { file, flags } => {
            let doc = load(&file)?;
            let inst = doc
                .instance(Some(&policy(&doc, flags.tiebreak)))
                .map_err(CliError::Input)?;
            let res = solve(&inst, &flags.budget())?;
            writeln!(out, "decision: {}", yes_no(res.decision))?;
            writeln!(out, "method: {}", res.method.name())?;
            writeln!(out, "nodes: {}", res.nodes)?;
            if let Some(p) = res.probability {
                writeln!(out, "probability: {}", ratio(p))?;
            }
            if let Some(w) = &res.witness {
                writeln!(out, "WITNESS")?;
                out.write_all(serialize_witness(w, &doc).as_bytes())?;
            }
        }
        Command::Verify {
            file,
            witness,
            tiebreak,
        } => {
            let doc = load(&file)?;
            let inst = doc
                .instance(Some(&policy(&doc, tiebreak)))
                .map_err(CliError::Input)?;
            let w = parse_witness(&read(&witness)?, &doc)
                .map_err(|e| CliError::Input(format!("{}: {e}", witness.display())))?;
            let verdict = validate_witness(&inst, &w)?;
            writeln!(
                out,
                "{}",
                if verdict.accepted {
                    "accepted"
                } else {
                    "rejected"
                }
            )?;
            print_outcome(&doc, &verdict.outcome, out)?;
            writeln!(out, "{}", verdict.explanation)?;
        }
        Command::Reduce {
            values,
            encoder,
            budget_nodes,
        } => {
            let inst = PartitionInstance::new(values)?;
            let mut budget = SearchBudget::default();
            if let Some(n) = budget_nodes {
                budget.max_nodes = n;
            }
            let report = verify_reduction(&inst, encoder.into(), &budget)?;
            print_report(&report, out)?;
        }
        Command::Sweep {
            encoder,
            max_len,
            max_value,
            threads,
            budget_nodes,
        } => {
            let encoders: Vec<Encoder> = match encoder {
                Some(e) => vec![e.into()],
                None => vec![Encoder::Veto, Encoder::Stv, Encoder::Runoff],
            };
            let mut budget = SearchBudget::default();
            if let Some(n) = budget_nodes {
                budget.max_nodes = n;
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| CliError::Input(e.to_string()))?;
            for enc in encoders {
                let (len, value) = match enc {
                    Encoder::Veto => (max_len.unwrap_or(6), max_value.unwrap_or(5)),
                    _ => (max_len.unwrap_or(5), max_value.unwrap_or(4)),
                };
                let instances = partition_multisets(2..=len, value);
                let reports: Vec<ReductionReport> = pool.install(|| {
                    instances
                        .par_iter()
                        .map(|i| verify_reduction(i, enc, &budget))
                        .collect::<Result<_, _>>()
                })?;
                let agree = reports.iter().filter(|r| r.agreement).count();
                let transported: Vec<bool> = reports
                    .iter()
                    .filter_map(|r| r.transported_accepted)
                    .collect();
                writeln!(
                    out,
                    "{}: {agree}/{} agree, {}/{} transported witnesses accepted",
                    enc.name(),
                    reports.len(),
                    transported.iter().filter(|&&ok| ok).count(),
                    transported.len()
                )?;
                for r in reports.iter().filter(|r| !r.agreement) {
                    writeln!(out, "  mismatch on {:?}", r.instance.values())?;
                }
            }
        }
        Command::Bench {
            config,
            output,
            threads,
            seed,
            no_timing,
            budget_nodes,
        } => {
            let mut cfg = BenchConfig::from_toml(&read(&config)?)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if budget_nodes.is_some() {
                cfg.budget_nodes = budget_nodes;
            }
            let rows = run_bench(&cfg, threads, !no_timing)?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            write_to(output.as_deref(), &buf, out)?;
        }
        Command::Gen {
            protocol,
            m,
            ballots,
            max_weight,
            manipulators,
            goal,
            threshold,
            seed,
            tiebreak,
            output,
        } => {
            let cfg = GeneratorConfig {
                m,
                ballots,
                max_weight,
                manipulators,
                goal,
                protocol,
                thresholds: vec![threshold],
            };
            let inst = generate_random(seed, &cfg).map_err(|e| CliError::Input(e.to_string()))?;
            let mut doc = ElectionDocument::from_instance(&inst);
            if let Some(tb) = tiebreak {
                doc.tie_break = tb.policy(m);
            }
            write_to(output.as_deref(), serialize_election(&doc).as_bytes(), out)?;
        }
    }
    Ok(())
}
