//! Candidates, weighted ballots, profiles and pairwise tallies.
//!
//! Candidates are dense indices `0..m`. A ballot of weight `k` behaves exactly
//! like `k` identical unit ballots; [`expand_weights`] materializes that view.

use crate::error::ElectionError;

/// Index of a candidate within an election.
pub type Candidate = usize;

/// Upper bound for `total_weight * m`, keeping every tally inside `i64`.
pub const WEIGHT_LIMIT: u64 = 1 << 62;

/// Default cap on the number of unit ballots [`expand_weights`] may create.
pub const DEFAULT_EXPANSION_CAP: usize = 1 << 20;

/// A strict ranking of all candidates, most preferred first, with a weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedBallot {
    pub order: Vec<Candidate>,
    pub weight: u64,
}

impl WeightedBallot {
    pub fn new(order: Vec<Candidate>, weight: u64) -> Self {
        WeightedBallot { order, weight }
    }

    pub fn top(&self) -> Candidate {
        self.order[0]
    }
}

/// A validated list of weighted ballots over `m` candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    ballots: Vec<WeightedBallot>,
    total_weight: u64,
}

impl Profile {
    /// Same as [`validate_profile`].
    pub fn new(m: usize, ballots: Vec<WeightedBallot>) -> Result<Self, ElectionError> {
        validate_profile(m, ballots)
    }

    /// A profile with no ballots.
    pub fn empty(m: usize) -> Self {
        Profile {
            m,
            ballots: Vec::new(),
            total_weight: 0,
        }
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    pub fn ballots(&self) -> &[WeightedBallot] {
        &self.ballots
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn into_ballots(self) -> Vec<WeightedBallot> {
        self.ballots
    }

    /// Appends more ballots, re-running validation on the result.
    pub fn extended<I>(&self, extra: I) -> Result<Profile, ElectionError>
    where
        I: IntoIterator<Item = WeightedBallot>,
    {
        let mut ballots = self.ballots.clone();
        ballots.extend(extra);
        validate_profile(self.m, ballots)
    }
}

/// Checks every ballot is a full permutation of `0..m` with weight at least 1
/// and that the total weight leaves room for checked tallies.
pub fn validate_profile(m: usize, ballots: Vec<WeightedBallot>) -> Result<Profile, ElectionError> {
    let mut total: u64 = 0;
    let mut seen = vec![false; m];
    for (i, ballot) in ballots.iter().enumerate() {
        if ballot.order.len() != m {
            return Err(ElectionError::BallotLength {
                ballot: i,
                expected: m,
                found: ballot.order.len(),
            });
        }
        if ballot.weight == 0 {
            return Err(ElectionError::NonPositiveWeight { ballot: i });
        }
        seen.iter_mut().for_each(|s| *s = false);
        for &c in &ballot.order {
            if c >= m {
                return Err(ElectionError::UnknownCandidate {
                    ballot: i,
                    candidate: c,
                });
            }
            if seen[c] {
                return Err(ElectionError::DuplicateCandidate {
                    ballot: i,
                    candidate: c,
                });
            }
            seen[c] = true;
        }
        total = total
            .checked_add(ballot.weight)
            .ok_or(ElectionError::WeightOverflow)?;
    }
    match total.checked_mul(m.max(1) as u64) {
        Some(scaled) if scaled < WEIGHT_LIMIT => {}
        _ => return Err(ElectionError::WeightOverflow),
    }
    Ok(Profile {
        m,
        ballots,
        total_weight: total,
    })
}

/// `N(i, j)` for every ordered pair: the weight ranking `i` above `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairwiseMatrix {
    m: usize,
    n: Vec<u64>,
}

impl PairwiseMatrix {
    pub fn zero(m: usize) -> Self {
        PairwiseMatrix {
            m,
            n: vec![0; m * m],
        }
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: Candidate, j: Candidate) -> u64 {
        self.n[i * self.m + j]
    }

    /// Adds `weight` to `N(i, j)` for every `i` ranked above `j` in `order`.
    pub fn add_ballot(&mut self, order: &[Candidate], weight: u64) {
        for (pos, &hi) in order.iter().enumerate() {
            for &lo in &order[pos + 1..] {
                self.n[hi * self.m + lo] += weight;
            }
        }
    }

    /// Does `x` beat `y` strictly in their pairwise election?
    pub fn beats(&self, x: Candidate, y: Candidate) -> bool {
        self.get(x, y) > self.get(y, x)
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.n
    }

    pub(crate) fn from_raw(m: usize, n: Vec<u64>) -> Self {
        debug_assert_eq!(n.len(), m * m);
        PairwiseMatrix { m, n }
    }
}

pub fn pairwise_tally(profile: &Profile) -> PairwiseMatrix {
    let mut tally = PairwiseMatrix::zero(profile.m);
    for ballot in &profile.ballots {
        tally.add_ballot(&ballot.order, ballot.weight);
    }
    tally
}

/// `D(x, y) = N(x, y) - N(y, x)`.
pub fn net_preference(tally: &PairwiseMatrix, x: Candidate, y: Candidate) -> i64 {
    tally.get(x, y) as i64 - tally.get(y, x) as i64
}

/// Replaces every weight-`k` ballot by `k` unit ballots.
pub fn expand_weights(profile: &Profile, cap: usize) -> Result<Profile, ElectionError> {
    if profile.total_weight > cap as u64 {
        return Err(ElectionError::ExpansionCap {
            needed: profile.total_weight,
            cap,
        });
    }
    let ballots = profile
        .ballots
        .iter()
        .flat_map(|b| (0..b.weight).map(move |_| WeightedBallot::new(b.order.clone(), 1)))
        .collect();
    Ok(Profile {
        m: profile.m,
        ballots,
        total_weight: profile.total_weight,
    })
}
