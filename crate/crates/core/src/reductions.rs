//! PARTITION encodings into manipulation instances, and a subset-sum oracle
//! to check them against.
//!
//! All encodings use three candidates. With values `k_1..k_t` summing to `2K`,
//! the coalition has one member of weight `2 k_i` per value.
//!
//! * veto, constructive for `p`: one ballot `(a, b, p)` of weight `2K - 1`;
//! * STV / runoff, destructive for `h`: ballots `(a, h, b)` and `(b, h, a)` of
//!   weight `6K` each and `(h, a, b)` of weight `8K - 1`.
//!
//! Nonmanipulator ballots are stored merged; a weight-`w` ballot is the same
//! election as `w` unit ballots.

use num_rational::Ratio;

use crate::election::{Candidate, Profile, WeightedBallot};
use crate::error::ReductionError;
use crate::manipulation::{
    exact_search_constructive, exact_search_destructive, validate_witness, Goal,
    ManipulationInstance, ManipulationResult, SearchBudget, SearchOptions,
};
use crate::protocols::{ProtocolSpec, ScoringVector, TieBreak};

/// Largest half-sum the subset-sum table will allocate for.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 24;

const A: Candidate = 0;
const B: Candidate = 1;
/// The third candidate: `p` in the veto encoding, `h` in the STV ones.
const THIRD: Candidate = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionInstance {
    values: Vec<u64>,
    total: u64,
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>) -> Result<Self, ReductionError> {
        if values.is_empty() {
            return Err(ReductionError::Empty);
        }
        if values.contains(&0) {
            return Err(ReductionError::NonPositiveValue);
        }
        let total: u64 = values.iter().sum();
        if total % 2 == 1 {
            return Err(ReductionError::OddSum(total));
        }
        Ok(PartitionInstance { values, total })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `K`, half of the sum.
    pub fn half(&self) -> u64 {
        self.total / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionAnswer {
    pub yes: bool,
    /// Indices into the value list of a subset summing to `K`.
    pub subset: Option<Vec<usize>>,
}

/// Subset-sum table over targets `0..=K`, with the witness read back from it.
pub fn solve_partition(
    inst: &PartitionInstance,
    cap: u64,
) -> Result<PartitionAnswer, ReductionError> {
    let target = inst.half();
    if target > cap {
        return Err(ReductionError::TableCap { target, cap });
    }
    let width = target as usize + 1;
    let values = inst.values();
    // reach[i][s]: some subset of the first i values sums to s
    let mut reach = vec![vec![false; width]; values.len() + 1];
    reach[0][0] = true;
    for (i, &v) in values.iter().enumerate() {
        let v = v as usize;
        for s in 0..width {
            reach[i + 1][s] = reach[i][s] || (s >= v && reach[i][s - v]);
        }
    }
    if !reach[values.len()][target as usize] {
        return Ok(PartitionAnswer {
            yes: false,
            subset: None,
        });
    }
    let mut subset = Vec::new();
    let mut s = target as usize;
    for i in (0..values.len()).rev() {
        if !reach[i][s] {
            subset.push(i);
            s -= values[i] as usize;
        }
    }
    subset.reverse();
    Ok(PartitionAnswer {
        yes: true,
        subset: Some(subset),
    })
}

/// Which hardness construction to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoder {
    Veto,
    Stv,
    Runoff,
}

impl Encoder {
    pub fn name(&self) -> &'static str {
        match self {
            Encoder::Veto => "veto",
            Encoder::Stv => "stv",
            Encoder::Runoff => "runoff",
        }
    }
}

impl std::str::FromStr for Encoder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "veto" => Ok(Encoder::Veto),
            "stv" => Ok(Encoder::Stv),
            "runoff" => Ok(Encoder::Runoff),
            other => Err(format!(
                "unknown encoder {other:?} (expected veto, stv or runoff)"
            )),
        }
    }
}

fn coalition(inst: &PartitionInstance) -> Vec<u64> {
    inst.values().iter().map(|&k| 2 * k).collect()
}

fn build(
    ballots: Vec<WeightedBallot>,
    weights: Vec<u64>,
    goal: Goal,
    protocol: ProtocolSpec,
) -> Result<ManipulationInstance, ReductionError> {
    let profile = Profile::new(3, ballots).map_err(crate::error::ManipulationError::from)?;
    Ok(ManipulationInstance::new(
        profile,
        weights,
        goal,
        protocol,
        TieBreak::Pessimistic,
        None,
    )?)
}

/// Candidates `a, b, p` = `0, 1, 2`.
pub fn encode_veto_constructive(
    inst: &PartitionInstance,
) -> Result<ManipulationInstance, ReductionError> {
    let k = inst.half();
    build(
        vec![WeightedBallot::new(vec![A, B, THIRD], 2 * k - 1)],
        coalition(inst),
        Goal::Constructive(THIRD),
        ProtocolSpec::Scoring(ScoringVector::veto(3)),
    )
}

fn stv_profile(inst: &PartitionInstance) -> Vec<WeightedBallot> {
    let k = inst.half();
    vec![
        WeightedBallot::new(vec![A, THIRD, B], 6 * k),
        WeightedBallot::new(vec![B, THIRD, A], 6 * k),
        WeightedBallot::new(vec![THIRD, A, B], 8 * k - 1),
    ]
}

/// Candidates `a, b, h` = `0, 1, 2`.
pub fn encode_stv_destructive(
    inst: &PartitionInstance,
) -> Result<ManipulationInstance, ReductionError> {
    build(
        stv_profile(inst),
        coalition(inst),
        Goal::Destructive(THIRD),
        ProtocolSpec::Stv,
    )
}

/// The STV construction run under plurality with runoff.
pub fn encode_runoff_destructive(
    inst: &PartitionInstance,
) -> Result<ManipulationInstance, ReductionError> {
    build(
        stv_profile(inst),
        coalition(inst),
        Goal::Destructive(THIRD),
        ProtocolSpec::PluralityRunoff,
    )
}

pub fn encode(
    inst: &PartitionInstance,
    encoder: Encoder,
) -> Result<ManipulationInstance, ReductionError> {
    match encoder {
        Encoder::Veto => encode_veto_constructive(inst),
        Encoder::Stv => encode_stv_destructive(inst),
        Encoder::Runoff => encode_runoff_destructive(inst),
    }
}

/// Turns a partition half into coalition ballots.
///
/// Veto: the half votes `(p, a, b)` and the rest `(p, b, a)`.
/// STV / runoff: the half votes `(a, b, h)` and the rest `(b, a, h)`.
pub fn transport_witness(
    inst: &PartitionInstance,
    encoder: Encoder,
    subset: &[usize],
) -> Vec<Vec<Candidate>> {
    let (inside, outside) = match encoder {
        Encoder::Veto => (vec![THIRD, A, B], vec![THIRD, B, A]),
        Encoder::Stv | Encoder::Runoff => (vec![A, B, THIRD], vec![B, A, THIRD]),
    };
    (0..inst.values().len())
        .map(|i| {
            if subset.contains(&i) {
                inside.clone()
            } else {
                outside.clone()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub encoder: Encoder,
    pub instance: PartitionInstance,
    pub partition: PartitionAnswer,
    pub manipulation: ManipulationResult,
    pub agreement: bool,
    /// Whether the ballots built from the partition half were accepted (yes instances only).
    pub transported_accepted: Option<bool>,
}

/// Solves both sides of one encoding and compares.
pub fn verify_reduction(
    inst: &PartitionInstance,
    encoder: Encoder,
    budget: &SearchBudget,
) -> Result<ReductionReport, ReductionError> {
    let partition = solve_partition(inst, DEFAULT_TABLE_CAP)?;
    let encoded = encode(inst, encoder)?;
    let options = SearchOptions::default();
    let manipulation = match encoder {
        Encoder::Veto => exact_search_constructive(&encoded, budget, &options)?,
        Encoder::Stv | Encoder::Runoff => exact_search_destructive(&encoded, budget, &options)?,
    };
    let transported_accepted = match &partition.subset {
        Some(subset) => {
            let witness = transport_witness(inst, encoder, subset);
            Some(validate_witness(&encoded, &witness)?.accepted)
        }
        None => None,
    };
    Ok(ReductionReport {
        encoder,
        instance: inst.clone(),
        agreement: partition.yes == manipulation.decision,
        partition,
        manipulation,
        transported_accepted,
    })
}

/// Every multiset of `len` values in `1..=max_value` with an even sum, for
/// each `len` in `lengths`. Values come out non-decreasing.
pub fn partition_multisets(
    lengths: std::ops::RangeInclusive<usize>,
    max_value: u64,
) -> Vec<PartitionInstance> {
    fn extend(
        prefix: &mut Vec<u64>,
        len: usize,
        lo: u64,
        max: u64,
        out: &mut Vec<PartitionInstance>,
    ) {
        if prefix.len() == len {
            if let Ok(inst) = PartitionInstance::new(prefix.clone()) {
                out.push(inst);
            }
            return;
        }
        for v in lo..=max {
            prefix.push(v);
            extend(prefix, len, v, max, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for len in lengths {
        extend(&mut Vec::new(), len, 1, max_value, &mut out);
    }
    out
}

/// Runs [`verify_reduction`] on every instance.
pub fn sweep(
    instances: &[PartitionInstance],
    encoder: Encoder,
    budget: &SearchBudget,
) -> Result<Vec<ReductionReport>, ReductionError> {
    instances
        .iter()
        .map(|inst| verify_reduction(inst, encoder, budget))
        .collect()
}

/// Share of reports whose two answers agree.
pub fn agreement_rate(reports: &[ReductionReport]) -> Ratio<u64> {
    if reports.is_empty() {
        return Ratio::from_integer(1);
    }
    Ratio::new(
        reports.iter().filter(|r| r.agreement).count() as u64,
        reports.len() as u64,
    )
}
