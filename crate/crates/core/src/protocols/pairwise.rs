//! Maximin and Copeland, both computed from the pairwise tally.

use std::cmp::Ordering;

use crate::election::{pairwise_tally, PairwiseMatrix, Profile};
use crate::error::ElectionError;

fn require_two(m: usize) -> Result<(), ElectionError> {
    if m < 2 {
        return Err(ElectionError::TooFewCandidates {
            needed: 2,
            found: m,
        });
    }
    Ok(())
}

/// Worst pairwise support: `min_{j != i} N(i, j)`.
pub fn maximin_scores(profile: &Profile) -> Result<Vec<i64>, ElectionError> {
    require_two(profile.candidates())?;
    Ok(maximin_from_tally(&pairwise_tally(profile)))
}

/// Pairwise wins minus pairwise losses.
pub fn copeland_scores(profile: &Profile) -> Result<Vec<i64>, ElectionError> {
    require_two(profile.candidates())?;
    Ok(copeland_from_tally(&pairwise_tally(profile)))
}

pub(crate) fn maximin_from_tally(tally: &PairwiseMatrix) -> Vec<i64> {
    let m = tally.candidates();
    (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| tally.get(i, j) as i64)
                .min()
                .unwrap_or(0)
        })
        .collect()
}

pub(crate) fn copeland_from_tally(tally: &PairwiseMatrix) -> Vec<i64> {
    let m = tally.candidates();
    (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| match tally.get(i, j).cmp(&tally.get(j, i)) {
                    Ordering::Greater => 1,
                    Ordering::Equal => 0,
                    Ordering::Less => -1,
                })
                .sum()
        })
        .collect()
}
