//! Constructive and destructive coalitional weighted manipulation.
//!
//! A coalition with known weights casts open ballots on top of a fixed
//! nonmanipulator profile. Every solver answers yes/no and, on yes, returns a
//! witness: one full ranking per coalition member, in the order of the
//! instance's weight list.
//!
//! Polynomial solvers are used where they are complete; everything else goes
//! to [`exact_search_constructive`] / [`exact_search_destructive`], which
//! refuse to run past their [`SearchBudget`] rather than guess.

mod direct;
mod evaluator;
mod search;

use num_rational::Ratio;

pub use direct::{
    cup_constructive, destructive_monotone, identical_vote_search, plurality_trivial,
};
pub use search::{exact_search_constructive, exact_search_destructive, SearchOptions};

use crate::election::{Candidate, Profile, WeightedBallot};
use crate::error::ManipulationError;
use crate::protocols::{winner, Outcome, ProtocolSpec, TieBreak};

/// What the coalition wants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Goal {
    /// Make this candidate win.
    Constructive(Candidate),
    /// Make this candidate lose.
    Destructive(Candidate),
}

impl Goal {
    pub fn candidate(&self) -> Candidate {
        match *self {
            Goal::Constructive(c) | Goal::Destructive(c) => c,
        }
    }

    pub fn is_constructive(&self) -> bool {
        matches!(self, Goal::Constructive(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Goal::Constructive(_) => "constructive",
            Goal::Destructive(_) => "destructive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationInstance {
    nonmanipulators: Profile,
    weights: Vec<u64>,
    goal: Goal,
    protocol: ProtocolSpec,
    tie_break: TieBreak,
    threshold: Option<Ratio<u64>>,
}

impl ManipulationInstance {
    /// `threshold` must be present exactly when the protocol is randomized cup.
    pub fn new(
        nonmanipulators: Profile,
        weights: Vec<u64>,
        goal: Goal,
        protocol: ProtocolSpec,
        tie_break: TieBreak,
        threshold: Option<Ratio<u64>>,
    ) -> Result<Self, ManipulationError> {
        let m = nonmanipulators.candidates();
        protocol.validate(m)?;
        tie_break.validate(m)?;
        if weights.contains(&0) {
            return Err(ManipulationError::NonPositiveManipulatorWeight);
        }
        if goal.candidate() >= m {
            return Err(ManipulationError::GoalOutOfRange(goal.candidate()));
        }
        let randomized = matches!(protocol, ProtocolSpec::RandomizedCup);
        match threshold {
            Some(r) if randomized => {
                if r > Ratio::from_integer(1) {
                    return Err(ManipulationError::ThresholdRange);
                }
            }
            None if !randomized => {}
            _ => return Err(ManipulationError::ThresholdMismatch),
        }
        // Make sure the merged election stays within checked-arithmetic bounds.
        let coalition: u64 = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or(crate::error::ElectionError::WeightOverflow)?;
        nonmanipulators.extended(std::iter::once(WeightedBallot::new(
            (0..m).collect(),
            coalition.max(1),
        )))?;
        Ok(ManipulationInstance {
            nonmanipulators,
            weights,
            goal,
            protocol,
            tie_break,
            threshold,
        })
    }

    pub fn nonmanipulators(&self) -> &Profile {
        &self.nonmanipulators
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn goal(&self) -> Goal {
        self.goal
    }

    pub fn protocol(&self) -> &ProtocolSpec {
        &self.protocol
    }

    pub fn tie_break(&self) -> &TieBreak {
        &self.tie_break
    }

    pub fn threshold(&self) -> Option<Ratio<u64>> {
        self.threshold
    }

    pub fn candidates(&self) -> usize {
        self.nonmanipulators.candidates()
    }

    pub fn coalition_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// The same instance with a different goal.
    pub fn with_goal(&self, goal: Goal) -> Result<Self, ManipulationError> {
        Self::new(
            self.nonmanipulators.clone(),
            self.weights.clone(),
            goal,
            self.protocol.clone(),
            self.tie_break.clone(),
            self.threshold,
        )
    }

    /// The same instance with a different coalition.
    pub fn with_weights(&self, weights: Vec<u64>) -> Result<Self, ManipulationError> {
        Self::new(
            self.nonmanipulators.clone(),
            weights,
            self.goal,
            self.protocol.clone(),
            self.tie_break.clone(),
            self.threshold,
        )
    }

    /// The same instance with another nonmanipulator profile.
    pub fn with_nonmanipulators(&self, profile: Profile) -> Result<Self, ManipulationError> {
        Self::new(
            profile,
            self.weights.clone(),
            self.goal,
            self.protocol.clone(),
            self.tie_break.clone(),
            self.threshold,
        )
    }
}

/// Which solver produced a [`ManipulationResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PluralityTrivial,
    /// `complete` is false when a "no" only means no identical-vote manipulation exists.
    IdenticalVote {
        complete: bool,
    },
    CupConstructive,
    CupDestructive,
    DestructiveMonotone,
    ExactSearch,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::PluralityTrivial => "plurality_trivial",
            Method::IdenticalVote { complete: true } => "identical_vote",
            Method::IdenticalVote { complete: false } => "identical_vote_sound_only",
            Method::CupConstructive => "cup_constructive",
            Method::CupDestructive => "cup_destructive",
            Method::DestructiveMonotone => "destructive_monotone",
            Method::ExactSearch => "exact_search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationResult {
    pub decision: bool,
    /// One ranking per coalition member when `decision` is true.
    pub witness: Option<Vec<Vec<Candidate>>>,
    pub method: Method,
    /// Probability achieved by the witness (randomized cup only).
    pub probability: Option<Ratio<u64>>,
    /// Number of coalition ballot configurations evaluated.
    pub nodes: u64,
}

impl ManipulationResult {
    pub(crate) fn no(method: Method, nodes: u64) -> Self {
        ManipulationResult {
            decision: false,
            witness: None,
            method,
            probability: None,
            nodes,
        }
    }

    pub(crate) fn yes(
        method: Method,
        witness: Vec<Vec<Candidate>>,
        probability: Option<Ratio<u64>>,
        nodes: u64,
    ) -> Self {
        ManipulationResult {
            decision: true,
            witness: Some(witness),
            method,
            probability,
            nodes,
        }
    }
}

/// Limits for the exhaustive solvers. Exceeding any of them is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_candidates: usize,
    pub max_manipulators: usize,
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: 5,
            max_manipulators: 10,
            max_nodes: 20_000_000,
        }
    }
}

/// Decides whether `outcome` meets `goal` under the policy `tb`.
///
/// For randomized cup, returns the probability compared against the threshold:
/// constructive needs it strictly above `r`, destructive strictly below.
pub fn goal_met(
    goal: Goal,
    tb: &TieBreak,
    outcome: &Outcome,
    threshold: Option<Ratio<u64>>,
) -> (bool, Option<Ratio<u64>>) {
    match outcome {
        Outcome::Winners(set) => {
            let met = match (goal, tb) {
                (Goal::Constructive(p), TieBreak::Optimistic) => set.contains(&p),
                (Goal::Constructive(p), _) => set.len() == 1 && set.contains(&p),
                (Goal::Destructive(h), TieBreak::Optimistic) => set.iter().any(|&c| c != h),
                (Goal::Destructive(h), _) => !set.contains(&h),
            };
            (met, None)
        }
        Outcome::Lottery(dist) => {
            let r = threshold.unwrap_or_else(|| Ratio::from_integer(0));
            match (goal, tb) {
                (Goal::Constructive(p), TieBreak::Optimistic) => {
                    let prob = dist.upper(p);
                    (prob > r, Some(prob))
                }
                (Goal::Constructive(p), _) => {
                    let prob = dist.lower(p);
                    (prob > r, Some(prob))
                }
                (Goal::Destructive(h), TieBreak::Optimistic) => {
                    let prob = dist.lower(h);
                    (prob < r, Some(prob))
                }
                (Goal::Destructive(h), _) => {
                    let prob = dist.upper(h);
                    (prob < r, Some(prob))
                }
            }
        }
    }
}

/// Verdict of [`validate_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessVerdict {
    pub accepted: bool,
    pub outcome: Outcome,
    pub probability: Option<Ratio<u64>>,
    pub explanation: String,
}

/// Casts `witness` with the coalition's weights, reruns the protocol and
/// checks the goal.
pub fn validate_witness(
    inst: &ManipulationInstance,
    witness: &[Vec<Candidate>],
) -> Result<WitnessVerdict, ManipulationError> {
    if witness.len() != inst.weights.len() {
        return Err(ManipulationError::WitnessLength {
            expected: inst.weights.len(),
            found: witness.len(),
        });
    }
    let merged = inst.nonmanipulators.extended(
        witness
            .iter()
            .zip(&inst.weights)
            .map(|(order, &w)| WeightedBallot::new(order.clone(), w)),
    )?;
    let outcome = winner(&merged, &inst.protocol, &inst.tie_break)?;
    let (accepted, probability) = goal_met(inst.goal, &inst.tie_break, &outcome, inst.threshold);
    let target = inst.goal.candidate();
    let explanation = match (&outcome, probability) {
        (_, Some(prob)) => format!(
            "{} wins with probability {}; goal needs {} {}",
            target,
            prob,
            if inst.goal.is_constructive() {
                ">"
            } else {
                "<"
            },
            inst.threshold.unwrap_or_else(|| Ratio::from_integer(0))
        ),
        (outcome, None) => format!(
            "possible winners {:?}; goal {} {} {}",
            outcome.possible_winners(),
            inst.goal.kind(),
            target,
            if accepted { "met" } else { "not met" }
        ),
    };
    Ok(WitnessVerdict {
        accepted,
        outcome,
        probability,
        explanation,
    })
}

/// Answers the constructive question with the cheapest complete solver.
pub fn solve_constructive(
    inst: &ManipulationInstance,
    budget: &SearchBudget,
) -> Result<ManipulationResult, ManipulationError> {
    let Goal::Constructive(_) = inst.goal else {
        return Err(ManipulationError::NotApplicable {
            solver: "solve_constructive",
            reason: "goal is destructive",
        });
    };
    match &inst.protocol {
        ProtocolSpec::Scoring(alpha) if alpha.is_plurality_like() => plurality_trivial(inst),
        ProtocolSpec::Cup(_) => cup_constructive(inst),
        _ if direct::identical_vote_is_complete(inst) => identical_vote_search(inst),
        _ => exact_search_constructive(inst, budget, &SearchOptions::default()),
    }
}

/// Answers the destructive question with the cheapest complete solver.
pub fn solve_destructive(
    inst: &ManipulationInstance,
    budget: &SearchBudget,
) -> Result<ManipulationResult, ManipulationError> {
    let Goal::Destructive(_) = inst.goal else {
        return Err(ManipulationError::NotApplicable {
            solver: "solve_destructive",
            reason: "goal is constructive",
        });
    };
    match &inst.protocol {
        spec if spec.is_monotone_score_based() => destructive_monotone(inst),
        ProtocolSpec::Cup(_) => direct::cup_destructive(inst),
        _ => exact_search_destructive(inst, budget, &SearchOptions::default()),
    }
}

/// The solver [`solve`] will use for `inst`.
pub fn planned_method(inst: &ManipulationInstance) -> Method {
    match (&inst.protocol, inst.goal) {
        (ProtocolSpec::Scoring(alpha), Goal::Constructive(_)) if alpha.is_plurality_like() => {
            Method::PluralityTrivial
        }
        (ProtocolSpec::Cup(_), Goal::Constructive(_)) => Method::CupConstructive,
        (ProtocolSpec::Cup(_), Goal::Destructive(_)) => Method::CupDestructive,
        (_, Goal::Constructive(_)) if direct::identical_vote_is_complete(inst) => {
            Method::IdenticalVote { complete: true }
        }
        (spec, Goal::Destructive(_)) if spec.is_monotone_score_based() => {
            Method::DestructiveMonotone
        }
        _ => Method::ExactSearch,
    }
}

/// Dispatches on the instance's goal.
pub fn solve(
    inst: &ManipulationInstance,
    budget: &SearchBudget,
) -> Result<ManipulationResult, ManipulationError> {
    if inst.goal.is_constructive() {
        solve_constructive(inst, budget)
    } else {
        solve_destructive(inst, budget)
    }
}

#[cfg(test)]
mod tests;
