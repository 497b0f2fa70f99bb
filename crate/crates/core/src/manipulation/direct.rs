//! Polynomial-time solvers.

use super::evaluator::Evaluator;
use super::{validate_witness, Goal, ManipulationInstance, ManipulationResult, Method};
use crate::election::{pairwise_tally, Candidate, PairwiseMatrix};
use crate::error::ManipulationError;
use crate::protocols::{CupTree, ProtocolSpec, TieBreak};

/// `first`, then the rest in index order, with `last` (if any) at the bottom.
fn ranking(m: usize, first: Candidate, last: Option<Candidate>) -> Vec<Candidate> {
    let mut order = vec![first];
    order.extend((0..m).filter(|&c| c != first && Some(c) != last));
    order.extend(last.filter(|&l| l != first));
    order
}

/// Evaluates the coalition casting `ballot` unanimously.
fn unanimous(
    inst: &ManipulationInstance,
    ballot: &[Candidate],
    method: Method,
) -> Result<Option<ManipulationResult>, ManipulationError> {
    let witness = vec![ballot.to_vec(); inst.weights().len()];
    let verdict = validate_witness(inst, &witness)?;
    Ok(verdict
        .accepted
        .then(|| ManipulationResult::yes(method, witness, verdict.probability, 1)))
}

/// Everyone ranks the target first; for plurality nothing else can help.
pub fn plurality_trivial(
    inst: &ManipulationInstance,
) -> Result<ManipulationResult, ManipulationError> {
    let Goal::Constructive(p) = inst.goal() else {
        return Err(ManipulationError::NotApplicable {
            solver: "plurality_trivial",
            reason: "goal is destructive",
        });
    };
    match inst.protocol() {
        ProtocolSpec::Scoring(alpha) if alpha.is_plurality_like() => {}
        _ => {
            return Err(ManipulationError::NotApplicable {
                solver: "plurality_trivial",
                reason: "protocol is not plurality",
            })
        }
    }
    let ballot = ranking(inst.candidates(), p, None);
    Ok(unanimous(inst, &ballot, Method::PluralityTrivial)?
        .unwrap_or_else(|| ManipulationResult::no(Method::PluralityTrivial, 1)))
}

/// Protocol sizes where some identical-vote manipulation exists whenever any
/// manipulation does.
pub(crate) fn identical_vote_is_complete(inst: &ManipulationInstance) -> bool {
    let m = inst.candidates();
    inst.goal().is_constructive()
        && match inst.protocol() {
            ProtocolSpec::Copeland | ProtocolSpec::Maximin => m == 3,
            ProtocolSpec::RandomizedCup => m <= 6,
            _ => false,
        }
}

/// Tries each of the `m!` orderings as a unanimous coalition ballot.
pub fn identical_vote_search(
    inst: &ManipulationInstance,
) -> Result<ManipulationResult, ManipulationError> {
    if !inst.goal().is_constructive() {
        return Err(ManipulationError::NotApplicable {
            solver: "identical_vote_search",
            reason: "goal is destructive",
        });
    }
    let method = Method::IdenticalVote {
        complete: identical_vote_is_complete(inst),
    };
    let mut evaluator = Evaluator::new(inst)?;
    let total = inst.coalition_weight();
    let mut nodes = 0;
    for idx in 0..evaluator.orderings().len() {
        let mut state = evaluator.base().to_vec();
        if total > 0 {
            evaluator.apply(&mut state, idx, total, 1);
        }
        nodes += 1;
        let (met, probability) = evaluator.judge(&state);
        if met {
            let witness = vec![evaluator.orderings()[idx].clone(); inst.weights().len()];
            return Ok(ManipulationResult::yes(method, witness, probability, nodes));
        }
        if inst.weights().is_empty() {
            break;
        }
    }
    Ok(ManipulationResult::no(method, nodes))
}

/// Bottom-up possible winners of a regular cup when the whole coalition may
/// back either side of each match.
struct Bracket<'a> {
    tally: PairwiseMatrix,
    coalition: u64,
    tb: &'a TieBreak,
}

impl Bracket<'_> {
    /// Can `x` take the match against `y` with the coalition's full weight?
    fn beats(&self, x: Candidate, y: Candidate) -> bool {
        let ours = self.tally.get(x, y) + self.coalition;
        let theirs = self.tally.get(y, x);
        match self.tb {
            TieBreak::Pessimistic => ours > theirs,
            TieBreak::Optimistic => ours >= theirs,
            TieBreak::Lexicographic(_) => {
                ours > theirs || (ours == theirs && self.tb.rank(x) < self.tb.rank(y))
            }
        }
    }

    fn reach(&self, tree: &CupTree) -> Vec<Candidate> {
        match tree {
            CupTree::Leaf(c) => vec![*c],
            CupTree::Match(l, r) => {
                let (left, right) = (self.reach(l), self.reach(r));
                let mut out: Vec<Candidate> = left
                    .iter()
                    .copied()
                    .filter(|&x| right.iter().any(|&y| self.beats(x, y)))
                    .chain(
                        right
                            .iter()
                            .copied()
                            .filter(|&x| left.iter().any(|&y| self.beats(x, y))),
                    )
                    .collect();
                out.sort_unstable();
                out
            }
        }
    }

    /// Records, for one bracket in which `x` wins `tree`, the depth at which
    /// every other candidate is knocked out.
    fn realize(
        &self,
        tree: &CupTree,
        x: Candidate,
        depth: usize,
        knocked: &mut Vec<(usize, Candidate)>,
    ) {
        let CupTree::Match(l, r) = tree else {
            return;
        };
        let (own, other) = if l.leaves().contains(&x) {
            (l, r)
        } else {
            (r, l)
        };
        let y = self
            .reach(other)
            .into_iter()
            .find(|&y| self.beats(x, y))
            .expect("x was reachable");
        knocked.push((depth, y));
        self.realize(own, x, depth + 1, knocked);
        self.realize(other, y, depth + 1, knocked);
    }

    /// Winner first, then everyone else by how late they are knocked out.
    /// Every match winner sits above its loser, so all played matches go the
    /// coalition's way at once.
    fn ballot(&self, tree: &CupTree, x: Candidate) -> Vec<Candidate> {
        let mut knocked = Vec::new();
        self.realize(tree, x, 0, &mut knocked);
        knocked.sort_unstable();
        std::iter::once(x)
            .chain(knocked.into_iter().map(|(_, c)| c))
            .collect()
    }
}

fn bracket_for(inst: &ManipulationInstance) -> Option<(Bracket<'_>, &CupTree)> {
    let ProtocolSpec::Cup(tree) = inst.protocol() else {
        return None;
    };
    Some((
        Bracket {
            tally: pairwise_tally(inst.nonmanipulators()),
            coalition: inst.coalition_weight(),
            tb: inst.tie_break(),
        },
        tree,
    ))
}

fn without_coalition(
    inst: &ManipulationInstance,
    method: Method,
) -> Result<ManipulationResult, ManipulationError> {
    let verdict = validate_witness(inst, &[])?;
    Ok(if verdict.accepted {
        ManipulationResult::yes(method, Vec::new(), None, 1)
    } else {
        ManipulationResult::no(method, 1)
    })
}

/// Possible-winner recursion for the regular cup.
pub fn cup_constructive(
    inst: &ManipulationInstance,
) -> Result<ManipulationResult, ManipulationError> {
    let Goal::Constructive(p) = inst.goal() else {
        return Err(ManipulationError::NotApplicable {
            solver: "cup_constructive",
            reason: "goal is destructive",
        });
    };
    let Some((bracket, tree)) = bracket_for(inst) else {
        return Err(ManipulationError::NotApplicable {
            solver: "cup_constructive",
            reason: "protocol is not a regular cup",
        });
    };
    if inst.weights().is_empty() {
        return without_coalition(inst, Method::CupConstructive);
    }
    if !bracket.reach(tree).contains(&p) {
        return Ok(ManipulationResult::no(Method::CupConstructive, 1));
    }
    let ballot = bracket.ballot(tree, p);
    Ok(ManipulationResult::yes(
        Method::CupConstructive,
        vec![ballot; inst.weights().len()],
        None,
        1,
    ))
}

/// `h` loses a regular cup iff someone else can be made to win it.
pub(crate) fn cup_destructive(
    inst: &ManipulationInstance,
) -> Result<ManipulationResult, ManipulationError> {
    let Goal::Destructive(h) = inst.goal() else {
        return Err(ManipulationError::NotApplicable {
            solver: "cup_destructive",
            reason: "goal is constructive",
        });
    };
    let Some((bracket, tree)) = bracket_for(inst) else {
        return Err(ManipulationError::NotApplicable {
            solver: "cup_destructive",
            reason: "protocol is not a regular cup",
        });
    };
    if inst.weights().is_empty() {
        return without_coalition(inst, Method::CupDestructive);
    }
    match bracket.reach(tree).into_iter().find(|&c| c != h) {
        Some(c) => Ok(ManipulationResult::yes(
            Method::CupDestructive,
            vec![bracket.ballot(tree, c); inst.weights().len()],
            None,
            1,
        )),
        None => Ok(ManipulationResult::no(Method::CupDestructive, 1)),
    }
}

/// For monotone score-based protocols: try each rival `c` ranked first with
/// `h` last, which maximizes `c`'s score and minimizes `h`'s at once.
pub fn destructive_monotone(
    inst: &ManipulationInstance,
) -> Result<ManipulationResult, ManipulationError> {
    let Goal::Destructive(h) = inst.goal() else {
        return Err(ManipulationError::NotApplicable {
            solver: "destructive_monotone",
            reason: "goal is constructive",
        });
    };
    if !inst.protocol().is_monotone_score_based() {
        return Err(ManipulationError::NotApplicable {
            solver: "destructive_monotone",
            reason: "protocol is not monotone score-based",
        });
    }
    if inst.weights().is_empty() {
        return without_coalition(inst, Method::DestructiveMonotone);
    }
    let m = inst.candidates();
    let mut nodes = 0;
    for c in (0..m).filter(|&c| c != h) {
        nodes += 1;
        if let Some(mut found) =
            unanimous(inst, &ranking(m, c, Some(h)), Method::DestructiveMonotone)?
        {
            found.nodes = nodes;
            return Ok(found);
        }
    }
    Ok(ManipulationResult::no(Method::DestructiveMonotone, nodes))
}
