use thiserror::Error;

use crate::election::Candidate;

/// Errors raised while building or evaluating elections.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElectionError {
    #[error("ballot {ballot}: expected {expected} candidates, found {found}")]
    BallotLength {
        ballot: usize,
        expected: usize,
        found: usize,
    },
    #[error("ballot {ballot}: candidate {candidate} is out of range")]
    UnknownCandidate { ballot: usize, candidate: Candidate },
    #[error("ballot {ballot}: candidate {candidate} appears more than once")]
    DuplicateCandidate { ballot: usize, candidate: Candidate },
    #[error("ballot {ballot}: weight must be at least 1")]
    NonPositiveWeight { ballot: usize },
    #[error("total weight is too large for checked tallies")]
    WeightOverflow,
    #[error("score computation overflowed")]
    ScoreOverflow,
    #[error("expansion would produce {needed} ballots, cap is {cap}")]
    ExpansionCap { needed: u64, cap: usize },
    #[error("scoring vector has length {found}, election has {expected} candidates")]
    ScoringLength { expected: usize, found: usize },
    #[error("scoring vector must be non-increasing")]
    ScoringNotMonotone,
    #[error("protocol needs at least {needed} candidates, election has {found}")]
    TooFewCandidates { needed: usize, found: usize },
    #[error("cup tree is invalid: {0}")]
    InvalidCupTree(String),
    #[error("tie-break priority must be a permutation of the {0} candidates")]
    InvalidPriority(usize),
    #[error("randomized cup enumeration supports at most {cap} candidates, got {found}")]
    EnumerationCap { cap: usize, found: usize },
}

/// Errors raised by manipulation solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManipulationError {
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error("manipulator weights must be at least 1")]
    NonPositiveManipulatorWeight,
    #[error("goal candidate {0} is out of range")]
    GoalOutOfRange(Candidate),
    #[error("threshold must be given for randomized cup and only for randomized cup")]
    ThresholdMismatch,
    #[error("threshold must lie in [0, 1]")]
    ThresholdRange,
    #[error("solver {solver} does not apply: {reason}")]
    NotApplicable {
        solver: &'static str,
        reason: &'static str,
    },
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("witness has {found} ballots, coalition has {expected} members")]
    WitnessLength { expected: usize, found: usize },
}

/// Errors raised by the PARTITION encoders and oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("partition values must be at least 1")]
    NonPositiveValue,
    #[error("partition values must have an even sum, got {0}")]
    OddSum(u64),
    #[error("partition needs at least one value")]
    Empty,
    #[error("subset-sum target {target} exceeds table cap {cap}")]
    TableCap { target: u64, cap: u64 },
    #[error(transparent)]
    Manipulation(#[from] ManipulationError),
}
