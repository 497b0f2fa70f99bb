//! Winner determination for the supported voting protocols.
//!
//! Ties are never left implicit. [`TieBreak::Lexicographic`] resolves every
//! tie with a fixed priority order and always yields a single winner. The two
//! branching policies explore every resolution and return the set of
//! candidates that win under at least one of them; the manipulation layer
//! reads that set pessimistically or optimistically.

mod cup;
mod elimination;
mod pairwise;
mod scoring;

use std::collections::BTreeSet;

pub use cup::{
    build_balanced_tree, cup_winner, randomized_cup_distribution, CupTree, WinnerDistribution,
    RANDOMIZED_CUP_CAP,
};
pub use elimination::{runoff_winner, stv_winner};
pub use pairwise::{copeland_scores, maximin_scores};
pub use scoring::{scoring_scores, ScoringVector};

pub(crate) use cup::{cup_from_tally, randomized_from_duels, Duels};
pub(crate) use elimination::{runoff_from_ballots, stv_from_ballots};
pub(crate) use pairwise::{copeland_from_tally, maximin_from_tally};

use crate::election::{pairwise_tally, Candidate, Profile};
use crate::error::ElectionError;

/// Candidates that can come out on top.
pub type WinnerSet = BTreeSet<Candidate>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TieBreak {
    /// Priority order, highest priority first. The higher-priority candidate
    /// wins ties and the lowest-priority one is eliminated first.
    Lexicographic(Vec<Candidate>),
    /// Explore every resolution; a goal counts as met only if it holds in all.
    Pessimistic,
    /// Explore every resolution; a goal counts as met if it holds in one.
    Optimistic,
}

impl TieBreak {
    /// Candidate `0` first, then `1`, and so on.
    pub fn lexicographic(m: usize) -> Self {
        TieBreak::Lexicographic((0..m).collect())
    }

    pub fn is_branching(&self) -> bool {
        !matches!(self, TieBreak::Lexicographic(_))
    }

    pub fn validate(&self, m: usize) -> Result<(), ElectionError> {
        if let TieBreak::Lexicographic(priority) = self {
            let mut seen = vec![false; m];
            if priority.len() != m {
                return Err(ElectionError::InvalidPriority(m));
            }
            for &c in priority {
                if c >= m || seen[c] {
                    return Err(ElectionError::InvalidPriority(m));
                }
                seen[c] = true;
            }
        }
        Ok(())
    }

    /// Position in the priority order (0 = highest). Zero for branching policies.
    pub(crate) fn rank(&self, c: Candidate) -> usize {
        match self {
            TieBreak::Lexicographic(priority) => {
                priority.iter().position(|&x| x == c).unwrap_or(usize::MAX)
            }
            _ => 0,
        }
    }

    /// Resolves a tie in favour of someone in `tied`.
    pub(crate) fn favour<I: IntoIterator<Item = Candidate>>(&self, tied: I) -> WinnerSet {
        match self {
            TieBreak::Lexicographic(_) => tied
                .into_iter()
                .min_by_key(|&c| self.rank(c))
                .into_iter()
                .collect(),
            _ => tied.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProtocolSpec {
    Scoring(ScoringVector),
    Maximin,
    Copeland,
    Stv,
    PluralityRunoff,
    Cup(CupTree),
    RandomizedCup,
}

impl ProtocolSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolSpec::Scoring(_) => "scoring",
            ProtocolSpec::Maximin => "maximin",
            ProtocolSpec::Copeland => "copeland",
            ProtocolSpec::Stv => "stv",
            ProtocolSpec::PluralityRunoff => "runoff",
            ProtocolSpec::Cup(_) => "cup",
            ProtocolSpec::RandomizedCup => "randomized-cup",
        }
    }

    /// Protocols where a candidate's score can only grow when it is ranked higher.
    pub fn is_monotone_score_based(&self) -> bool {
        matches!(
            self,
            ProtocolSpec::Scoring(_) | ProtocolSpec::Maximin | ProtocolSpec::Copeland
        )
    }

    pub fn validate(&self, m: usize) -> Result<(), ElectionError> {
        let needed = match self {
            ProtocolSpec::Maximin | ProtocolSpec::Copeland | ProtocolSpec::PluralityRunoff => 2,
            _ => 1,
        };
        if m < needed {
            return Err(ElectionError::TooFewCandidates { needed, found: m });
        }
        match self {
            ProtocolSpec::Scoring(alpha) if alpha.len() != m => Err(ElectionError::ScoringLength {
                expected: m,
                found: alpha.len(),
            }),
            ProtocolSpec::Cup(tree) => tree.validate(m),
            ProtocolSpec::RandomizedCup if m > RANDOMIZED_CUP_CAP => {
                Err(ElectionError::EnumerationCap {
                    cap: RANDOMIZED_CUP_CAP,
                    found: m,
                })
            }
            _ => Ok(()),
        }
    }
}

/// Result of running a protocol: a winner set, or a lottery for randomized cup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Winners(WinnerSet),
    Lottery(WinnerDistribution),
}

impl Outcome {
    /// Every candidate that can win under some tie resolution or draw.
    pub fn possible_winners(&self) -> WinnerSet {
        match self {
            Outcome::Winners(set) => set.clone(),
            Outcome::Lottery(dist) => dist.support(),
        }
    }
}

/// Highest-scoring candidates, with ties resolved per `tb`.
pub(crate) fn winners_from_scores(scores: &[i64], tb: &TieBreak) -> WinnerSet {
    let Some(&best) = scores.iter().max() else {
        return WinnerSet::new();
    };
    tb.favour((0..scores.len()).filter(|&c| scores[c] == best))
}

pub fn winner(
    profile: &Profile,
    spec: &ProtocolSpec,
    tb: &TieBreak,
) -> Result<Outcome, ElectionError> {
    let m = profile.candidates();
    spec.validate(m)?;
    tb.validate(m)?;
    let set = match spec {
        ProtocolSpec::Scoring(alpha) => winners_from_scores(&scoring_scores(profile, alpha)?, tb),
        ProtocolSpec::Maximin => winners_from_scores(&maximin_scores(profile)?, tb),
        ProtocolSpec::Copeland => winners_from_scores(&copeland_scores(profile)?, tb),
        ProtocolSpec::Stv => stv_winner(profile, tb)?,
        ProtocolSpec::PluralityRunoff => runoff_winner(profile, tb)?,
        ProtocolSpec::Cup(tree) => cup_from_tally(tree, &pairwise_tally(profile), tb),
        ProtocolSpec::RandomizedCup => {
            return randomized_cup_distribution(profile, tb).map(Outcome::Lottery)
        }
    };
    Ok(Outcome::Winners(set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{expand_weights, WeightedBallot};
    use proptest::prelude::*;

    fn all_specs(m: usize) -> Vec<ProtocolSpec> {
        vec![
            ProtocolSpec::Scoring(ScoringVector::plurality(m)),
            ProtocolSpec::Scoring(ScoringVector::borda(m)),
            ProtocolSpec::Scoring(ScoringVector::veto(m)),
            ProtocolSpec::Maximin,
            ProtocolSpec::Copeland,
            ProtocolSpec::Stv,
            ProtocolSpec::PluralityRunoff,
            ProtocolSpec::Cup(build_balanced_tree(m).unwrap()),
            ProtocolSpec::RandomizedCup,
        ]
    }

    fn policies(m: usize) -> Vec<TieBreak> {
        vec![
            TieBreak::lexicographic(m),
            TieBreak::Pessimistic,
            TieBreak::Optimistic,
        ]
    }

    #[test]
    fn dispatch_examples() {
        let p = Profile::new(2, vec![WeightedBallot::new(vec![0, 1], 1)]).unwrap();
        let plurality = ProtocolSpec::Scoring(ScoringVector::plurality(2));
        assert_eq!(
            winner(&p, &plurality, &TieBreak::lexicographic(2)).unwrap(),
            Outcome::Winners(WinnerSet::from([0]))
        );
        let sym = Profile::new(
            2,
            vec![
                WeightedBallot::new(vec![0, 1], 1),
                WeightedBallot::new(vec![1, 0], 1),
            ],
        )
        .unwrap();
        assert_eq!(
            winner(&sym, &ProtocolSpec::Copeland, &TieBreak::Optimistic).unwrap(),
            Outcome::Winners(WinnerSet::from([0, 1]))
        );
        assert_eq!(
            winner(&sym, &ProtocolSpec::Copeland, &TieBreak::lexicographic(2)).unwrap(),
            Outcome::Winners(WinnerSet::from([0]))
        );
    }

    #[test]
    fn bad_specs_are_rejected() {
        let p = Profile::empty(3);
        let tb = TieBreak::lexicographic(3);
        assert!(winner(&p, &ProtocolSpec::Scoring(ScoringVector::borda(4)), &tb).is_err());
        assert!(winner(&p, &ProtocolSpec::Cup(build_balanced_tree(4).unwrap()), &tb).is_err());
        assert!(winner(
            &p,
            &ProtocolSpec::Stv,
            &TieBreak::Lexicographic(vec![0, 0, 1])
        )
        .is_err());
        assert!(winner(
            &Profile::empty(1),
            &ProtocolSpec::Maximin,
            &TieBreak::lexicographic(1)
        )
        .is_err());
    }

    #[test]
    fn condorcet_winner_wins_every_cup() {
        // 1 beats everyone pairwise.
        let p = Profile::new(
            4,
            vec![
                WeightedBallot::new(vec![1, 0, 2, 3], 3),
                WeightedBallot::new(vec![2, 3, 1, 0], 2),
            ],
        )
        .unwrap();
        let base = build_balanced_tree(4).unwrap();
        for assignment in itertools::Itertools::permutations(0..4, 4) {
            let tree = base.relabel(&assignment);
            assert_eq!(
                cup_winner(&p, &tree, &TieBreak::Pessimistic).unwrap(),
                WinnerSet::from([1])
            );
        }
        let d = randomized_cup_distribution(&p, &TieBreak::Pessimistic).unwrap();
        assert_eq!(d.lower(1), num_rational::Ratio::from_integer(1));
    }

    fn arb_profile(ms: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Profile> {
        ms.prop_flat_map(|m| {
            let ballot = (Just((0..m).collect::<Vec<_>>()).prop_shuffle(), 1u64..5)
                .prop_map(|(order, w)| WeightedBallot::new(order, w));
            prop::collection::vec(ballot, 0..7).prop_map(move |b| Profile::new(m, b).unwrap())
        })
    }

    proptest! {
        #[test]
        fn lexicographic_always_gives_one_winner(p in arb_profile(2..=5)) {
            let m = p.candidates();
            for spec in all_specs(m) {
                match winner(&p, &spec, &TieBreak::lexicographic(m)).unwrap() {
                    Outcome::Winners(w) => prop_assert_eq!(w.len(), 1),
                    Outcome::Lottery(d) => {
                        prop_assert_eq!(d.lower_total(), num_rational::Ratio::from_integer(1));
                        for c in 0..m {
                            prop_assert_eq!(d.lower(c), d.upper(c));
                        }
                    }
                }
            }
        }

        #[test]
        fn runoff_matches_stv_with_three(p in arb_profile(3..=3)) {
            for tb in policies(3) {
                prop_assert_eq!(stv_winner(&p, &tb).unwrap(), runoff_winner(&p, &tb).unwrap());
            }
        }

        #[test]
        fn winners_ignore_expansion(p in arb_profile(2..=4)) {
            let m = p.candidates();
            let expanded = expand_weights(&p, 1000).unwrap();
            for spec in all_specs(m) {
                for tb in policies(m) {
                    prop_assert_eq!(winner(&p, &spec, &tb).unwrap(), winner(&expanded, &spec, &tb).unwrap());
                }
            }
        }

        #[test]
        fn raising_a_candidate_never_lowers_its_score(
            p in arb_profile(2..=5),
            pick in any::<prop::sample::Index>(),
            pos in any::<prop::sample::Index>(),
        ) {
            prop_assume!(!p.ballots().is_empty());
            let m = p.candidates();
            let ballots = p.ballots().to_vec();
            let b = pick.index(ballots.len());
            let at = 1 + pos.index(m - 1);
            let raised = ballots[b].order[at];
            for alpha in [ScoringVector::borda(m), ScoringVector::plurality(m), ScoringVector::veto(m)] {
                let before = scoring_scores(&p, &alpha).unwrap()[raised];
                let mut swapped = ballots.clone();
                swapped[b].order.swap(at - 1, at);
                let after = scoring_scores(&Profile::new(m, swapped).unwrap(), &alpha).unwrap()[raised];
                prop_assert!(after >= before);
            }
        }
    }
}
