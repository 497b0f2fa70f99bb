//! Protocol evaluation from compact sufficient statistics.
//!
//! Each coalition ballot is one of the `m!` orderings, listed goal-friendly first. Instead of rebuilding a
//! profile for every configuration, the search keeps a running statistic and
//! adds `weight * unit[ordering]` per manipulator:
//!
//! * scoring protocols: per-candidate score vector;
//! * maximin, Copeland, cups: the pairwise matrix `N`;
//! * STV and runoff: weight per ordering (the full anonymous profile).

use std::collections::HashMap;

use itertools::Itertools;
use num_rational::Ratio;

use super::{goal_met, ManipulationInstance};
use crate::election::{pairwise_tally, Candidate, PairwiseMatrix};
use crate::error::{ElectionError, ManipulationError};
use crate::protocols::{
    copeland_from_tally, cup_from_tally, maximin_from_tally, randomized_from_duels,
    runoff_from_ballots, stv_from_ballots, winners_from_scores, Duels, Outcome, ProtocolSpec,
    WinnerDistribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stat {
    Scores,
    Pairwise,
    Ballots,
}

pub(crate) struct Evaluator<'a> {
    inst: &'a ManipulationInstance,
    stat: Stat,
    orderings: Vec<Vec<Candidate>>,
    unit: Vec<Vec<i64>>,
    base: Vec<i64>,
    lotteries: HashMap<Vec<i8>, WinnerDistribution>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(inst: &'a ManipulationInstance) -> Result<Self, ManipulationError> {
        let m = inst.candidates();
        // Goal-friendly rankings first: the target on top, or the hated
        // candidate at the bottom. Yes answers then tend to turn up early.
        let goal = inst.goal();
        let mut orderings: Vec<Vec<Candidate>> = (0..m).permutations(m).collect();
        orderings.sort_by_key(|o| {
            let pos = o.iter().position(|&c| c == goal.candidate()).unwrap_or(0);
            if goal.is_constructive() {
                pos
            } else {
                m - 1 - pos
            }
        });
        let profile = inst.nonmanipulators();
        let (stat, unit, base) = match inst.protocol() {
            ProtocolSpec::Scoring(alpha) => {
                let bound = alpha
                    .alpha()
                    .iter()
                    .map(|a| a.unsigned_abs())
                    .max()
                    .unwrap_or(0);
                let total = profile.total_weight() + inst.coalition_weight();
                if total
                    .checked_mul(bound)
                    .is_none_or(|b| b >= crate::election::WEIGHT_LIMIT)
                {
                    return Err(ElectionError::ScoreOverflow.into());
                }
                let unit = orderings
                    .iter()
                    .map(|o| {
                        let mut s = vec![0i64; m];
                        alpha.add_ballot(&mut s, o, 1).map(|_| s)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let base = crate::protocols::scoring_scores(profile, alpha)?;
                (Stat::Scores, unit, base)
            }
            ProtocolSpec::Stv | ProtocolSpec::PluralityRunoff => {
                let index: HashMap<&[Candidate], usize> = orderings
                    .iter()
                    .enumerate()
                    .map(|(i, o)| (o.as_slice(), i))
                    .collect();
                let mut base = vec![0i64; orderings.len()];
                for b in profile.ballots() {
                    base[index[b.order.as_slice()]] += b.weight as i64;
                }
                let unit = (0..orderings.len())
                    .map(|i| {
                        let mut u = vec![0i64; orderings.len()];
                        u[i] = 1;
                        u
                    })
                    .collect();
                (Stat::Ballots, unit, base)
            }
            _ => {
                let unit = orderings
                    .iter()
                    .map(|o| {
                        let mut t = PairwiseMatrix::zero(m);
                        t.add_ballot(o, 1);
                        t.raw().iter().map(|&x| x as i64).collect()
                    })
                    .collect();
                let base = pairwise_tally(profile)
                    .raw()
                    .iter()
                    .map(|&x| x as i64)
                    .collect();
                (Stat::Pairwise, unit, base)
            }
        };
        Ok(Evaluator {
            inst,
            stat,
            orderings,
            unit,
            base,
            lotteries: HashMap::new(),
        })
    }

    pub(crate) fn orderings(&self) -> &[Vec<Candidate>] {
        &self.orderings
    }

    pub(crate) fn base(&self) -> &[i64] {
        &self.base
    }

    /// Adds (or removes, with `sign = -1`) one ballot of the given ordering.
    #[inline]
    pub(crate) fn apply(&self, state: &mut [i64], ordering: usize, weight: u64, sign: i64) {
        let w = weight as i64 * sign;
        match self.stat {
            Stat::Ballots => state[ordering] += w,
            _ => {
                for (s, &u) in state.iter_mut().zip(&self.unit[ordering]) {
                    *s += u * w;
                }
            }
        }
    }

    pub(crate) fn outcome(&mut self, state: &[i64]) -> Outcome {
        let inst = self.inst;
        let tb = inst.tie_break();
        let m = inst.candidates();
        match self.stat {
            Stat::Scores => Outcome::Winners(winners_from_scores(state, tb)),
            Stat::Ballots => {
                let ballots: Vec<(&[Candidate], u64)> = state
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w > 0)
                    .map(|(i, &w)| (self.orderings[i].as_slice(), w as u64))
                    .collect();
                Outcome::Winners(match inst.protocol() {
                    ProtocolSpec::Stv => stv_from_ballots(m, &ballots, tb),
                    _ => runoff_from_ballots(m, &ballots, tb),
                })
            }
            Stat::Pairwise => {
                let tally = PairwiseMatrix::from_raw(m, state.iter().map(|&x| x as u64).collect());
                match inst.protocol() {
                    ProtocolSpec::Maximin => {
                        Outcome::Winners(winners_from_scores(&maximin_from_tally(&tally), tb))
                    }
                    ProtocolSpec::Copeland => {
                        Outcome::Winners(winners_from_scores(&copeland_from_tally(&tally), tb))
                    }
                    ProtocolSpec::Cup(tree) => Outcome::Winners(cup_from_tally(tree, &tally, tb)),
                    ProtocolSpec::RandomizedCup => {
                        let duels = Duels::new(&tally, tb);
                        let dist = self
                            .lotteries
                            .entry(duels.signs().to_vec())
                            .or_insert_with(|| randomized_from_duels(&duels));
                        Outcome::Lottery(dist.clone())
                    }
                    ProtocolSpec::Scoring(_)
                    | ProtocolSpec::Stv
                    | ProtocolSpec::PluralityRunoff => {
                        unreachable!("handled by other statistics")
                    }
                }
            }
        }
    }

    /// Goal check for a full coalition configuration.
    pub(crate) fn judge(&mut self, state: &[i64]) -> (bool, Option<Ratio<u64>>) {
        let outcome = self.outcome(state);
        goal_met(
            self.inst.goal(),
            self.inst.tie_break(),
            &outcome,
            self.inst.threshold(),
        )
    }
}
