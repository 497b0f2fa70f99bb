//! Seeded random instances.
//!
//! The generator is a pure function of its configuration and seed. It seeds a
//! ChaCha8 stream with the seed and draws, in this order:
//!
//! 1. each nonmanipulator ballot: a uniform permutation (Fisher-Yates shuffle
//!    of `0..m`) then a weight uniform in `1..=max_weight`;
//! 2. the goal candidate, uniform in `0..m`;
//! 3. each coalition weight, uniform in `1..=max_weight`;
//! 4. for regular cup, a uniform leaf assignment of the balanced tree;
//! 5. for randomized cup, a threshold picked uniformly from `thresholds`.
//!
//! With everything else fixed, adding manipulators only appends weights, so
//! the same seed gives the same election with a growing coalition.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::election::{Candidate, Profile, WeightedBallot};
use crate::error::ManipulationError;
use crate::manipulation::{Goal, ManipulationInstance};
use crate::protocols::{
    build_balanced_tree, ProtocolSpec, ScoringVector, TieBreak, RANDOMIZED_CUP_CAP,
};

/// Protocol families the generator and bench know by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolFamily {
    Plurality,
    Borda,
    Veto,
    Maximin,
    Copeland,
    Stv,
    Runoff,
    Cup,
    RandomizedCup,
}

impl ProtocolFamily {
    pub const ALL: [ProtocolFamily; 9] = [
        ProtocolFamily::Plurality,
        ProtocolFamily::Borda,
        ProtocolFamily::Veto,
        ProtocolFamily::Maximin,
        ProtocolFamily::Copeland,
        ProtocolFamily::Stv,
        ProtocolFamily::Runoff,
        ProtocolFamily::Cup,
        ProtocolFamily::RandomizedCup,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProtocolFamily::Plurality => "plurality",
            ProtocolFamily::Borda => "borda",
            ProtocolFamily::Veto => "veto",
            ProtocolFamily::Maximin => "maximin",
            ProtocolFamily::Copeland => "copeland",
            ProtocolFamily::Stv => "stv",
            ProtocolFamily::Runoff => "runoff",
            ProtocolFamily::Cup => "cup",
            ProtocolFamily::RandomizedCup => "randomized-cup",
        }
    }

    /// The family's protocol for `m` candidates; cup uses the canonical bracket.
    pub fn spec(&self, m: usize) -> ProtocolSpec {
        match self {
            ProtocolFamily::Plurality => ProtocolSpec::Scoring(ScoringVector::plurality(m)),
            ProtocolFamily::Borda => ProtocolSpec::Scoring(ScoringVector::borda(m)),
            ProtocolFamily::Veto => ProtocolSpec::Scoring(ScoringVector::veto(m)),
            ProtocolFamily::Maximin => ProtocolSpec::Maximin,
            ProtocolFamily::Copeland => ProtocolSpec::Copeland,
            ProtocolFamily::Stv => ProtocolSpec::Stv,
            ProtocolFamily::Runoff => ProtocolSpec::PluralityRunoff,
            ProtocolFamily::Cup => {
                ProtocolSpec::Cup(build_balanced_tree(m.max(1)).expect("m >= 1"))
            }
            ProtocolFamily::RandomizedCup => ProtocolSpec::RandomizedCup,
        }
    }
}

impl fmt::Display for ProtocolFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProtocolFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown protocol {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub m: usize,
    pub ballots: usize,
    pub max_weight: u64,
    pub manipulators: usize,
    pub goal: GoalKind,
    pub protocol: ProtocolFamily,
    /// Randomized-cup thresholds to draw from.
    pub thresholds: Vec<Ratio<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoalKind {
    Constructive,
    Destructive,
}

impl FromStr for GoalKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constructive" => Ok(GoalKind::Constructive),
            "destructive" => Ok(GoalKind::Destructive),
            other => Err(format!("unknown goal {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("candidate count {0} out of range")]
    Candidates(usize),
    #[error("max weight must be at least 1")]
    Weight,
    #[error("randomized cup needs at least one threshold")]
    Thresholds,
    #[error(transparent)]
    Instance(#[from] ManipulationError),
}

impl GeneratorConfig {
    pub fn new(m: usize, protocol: ProtocolFamily, goal: GoalKind) -> Self {
        GeneratorConfig {
            m,
            ballots: 4,
            max_weight: 5,
            manipulators: 2,
            goal,
            protocol,
            thresholds: vec![Ratio::new(0, 1), Ratio::new(1, 4), Ratio::new(1, 2)],
        }
    }
}

fn draw_ballots(
    rng: &mut ChaCha8Rng,
    m: usize,
    count: usize,
    max_weight: u64,
) -> Vec<WeightedBallot> {
    (0..count)
        .map(|_| {
            let mut order: Vec<Candidate> = (0..m).collect();
            order.shuffle(rng);
            WeightedBallot::new(order, rng.gen_range(1..=max_weight))
        })
        .collect()
}

/// A random profile drawn the same way as instance ballots.
pub fn random_profile(
    seed: u64,
    m: usize,
    count: usize,
    max_weight: u64,
) -> Result<Profile, GenerateError> {
    if m < 1 {
        return Err(GenerateError::Candidates(m));
    }
    if max_weight < 1 {
        return Err(GenerateError::Weight);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Profile::new(m, draw_ballots(&mut rng, m, count, max_weight))
        .map_err(|e| GenerateError::Instance(e.into()))
}

pub fn generate_random(
    seed: u64,
    config: &GeneratorConfig,
) -> Result<ManipulationInstance, GenerateError> {
    let m = config.m;
    let min_m = match config.protocol {
        ProtocolFamily::Maximin | ProtocolFamily::Copeland | ProtocolFamily::Runoff => 2,
        _ => 1,
    };
    if m < min_m || (config.protocol == ProtocolFamily::RandomizedCup && m > RANDOMIZED_CUP_CAP) {
        return Err(GenerateError::Candidates(m));
    }
    if config.max_weight < 1 {
        return Err(GenerateError::Weight);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ballots = draw_ballots(&mut rng, m, config.ballots, config.max_weight);
    let target = rng.gen_range(0..m);
    let weights: Vec<u64> = (0..config.manipulators)
        .map(|_| rng.gen_range(1..=config.max_weight))
        .collect();
    let goal = match config.goal {
        GoalKind::Constructive => Goal::Constructive(target),
        GoalKind::Destructive => Goal::Destructive(target),
    };
    let protocol = match config.protocol {
        ProtocolFamily::Cup => {
            let mut assignment: Vec<Candidate> = (0..m).collect();
            assignment.shuffle(&mut rng);
            ProtocolSpec::Cup(build_balanced_tree(m).expect("m >= 1").relabel(&assignment))
        }
        family => family.spec(m),
    };
    let threshold = match config.protocol {
        ProtocolFamily::RandomizedCup => Some(
            *config
                .thresholds
                .choose(&mut rng)
                .ok_or(GenerateError::Thresholds)?,
        ),
        _ => None,
    };
    let profile = Profile::new(m, ballots).map_err(ManipulationError::from)?;
    Ok(ManipulationInstance::new(
        profile,
        weights,
        goal,
        protocol,
        TieBreak::Pessimistic,
        threshold,
    )?)
}
