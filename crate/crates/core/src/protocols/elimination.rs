//! STV and plurality with runoff.
//!
//! A ballot always counts for its highest-ranked surviving candidate. Under
//! the branching tie policies every way of resolving an elimination tie is
//! explored, and the returned set holds every candidate that can end up the
//! winner.

use std::collections::HashMap;

use super::{TieBreak, WinnerSet};
use crate::election::{Candidate, Profile};
use crate::error::ElectionError;

type BallotRef<'a> = (&'a [Candidate], u64);

pub fn stv_winner(profile: &Profile, tb: &TieBreak) -> Result<WinnerSet, ElectionError> {
    let m = profile.candidates();
    if m < 1 {
        return Err(ElectionError::TooFewCandidates {
            needed: 1,
            found: m,
        });
    }
    tb.validate(m)?;
    Ok(stv_from_ballots(m, &as_refs(profile), tb))
}

pub fn runoff_winner(profile: &Profile, tb: &TieBreak) -> Result<WinnerSet, ElectionError> {
    let m = profile.candidates();
    if m < 2 {
        return Err(ElectionError::TooFewCandidates {
            needed: 2,
            found: m,
        });
    }
    tb.validate(m)?;
    Ok(runoff_from_ballots(m, &as_refs(profile), tb))
}

fn as_refs(profile: &Profile) -> Vec<BallotRef<'_>> {
    profile
        .ballots()
        .iter()
        .map(|b| (b.order.as_slice(), b.weight))
        .collect()
}

/// First-place weight of each candidate among those still `alive`.
fn plurality_among(m: usize, ballots: &[BallotRef<'_>], alive: &[bool]) -> Vec<u64> {
    let mut scores = vec![0u64; m];
    for &(order, weight) in ballots {
        if let Some(&c) = order.iter().find(|&&c| alive[c]) {
            scores[c] += weight;
        }
    }
    scores
}

pub(crate) fn stv_from_ballots(m: usize, ballots: &[BallotRef<'_>], tb: &TieBreak) -> WinnerSet {
    let mut alive = vec![true; m];
    match tb {
        TieBreak::Lexicographic(_) => {
            for _ in 1..m {
                let scores = plurality_among(m, ballots, &alive);
                let low = (0..m)
                    .filter(|&c| alive[c])
                    .map(|c| scores[c])
                    .min()
                    .unwrap();
                let out = (0..m)
                    .filter(|&c| alive[c] && scores[c] == low)
                    .max_by_key(|&c| tb.rank(c))
                    .unwrap();
                alive[out] = false;
            }
            (0..m).filter(|&c| alive[c]).collect()
        }
        TieBreak::Pessimistic | TieBreak::Optimistic => {
            let mut memo = HashMap::new();
            stv_branches(m, ballots, &mut alive, &mut memo)
        }
    }
}

fn stv_branches(
    m: usize,
    ballots: &[BallotRef<'_>],
    alive: &mut Vec<bool>,
    memo: &mut HashMap<Vec<bool>, WinnerSet>,
) -> WinnerSet {
    let remaining: Vec<Candidate> = (0..m).filter(|&c| alive[c]).collect();
    if remaining.len() <= 1 {
        return remaining.into_iter().collect();
    }
    if let Some(hit) = memo.get(alive.as_slice()) {
        return hit.clone();
    }
    let scores = plurality_among(m, ballots, alive);
    let low = remaining.iter().map(|&c| scores[c]).min().unwrap();
    let mut winners = WinnerSet::new();
    for &c in remaining.iter().filter(|&&c| scores[c] == low) {
        alive[c] = false;
        winners.extend(stv_branches(m, ballots, alive, memo));
        alive[c] = true;
    }
    memo.insert(alive.clone(), winners.clone());
    winners
}

pub(crate) fn runoff_from_ballots(m: usize, ballots: &[BallotRef<'_>], tb: &TieBreak) -> WinnerSet {
    if m == 1 {
        return WinnerSet::from([0]);
    }
    let alive = vec![true; m];
    let scores = plurality_among(m, ballots, &alive);
    let mut winners = WinnerSet::new();
    for (x, y) in finalists(&scores, tb) {
        let (mut for_x, mut for_y) = (0u64, 0u64);
        for &(order, weight) in ballots {
            match order.iter().find(|&&c| c == x || c == y) {
                Some(&c) if c == x => for_x += weight,
                _ => for_y += weight,
            }
        }
        if for_x > for_y {
            winners.insert(x);
        } else if for_y > for_x {
            winners.insert(y);
        } else {
            winners.extend(tb.favour([x, y]));
        }
    }
    winners
}

/// Every pair that can advance from the first round.
fn finalists(scores: &[u64], tb: &TieBreak) -> Vec<(Candidate, Candidate)> {
    let m = scores.len();
    let mut ranked: Vec<Candidate> = (0..m).collect();
    if let TieBreak::Lexicographic(_) = tb {
        ranked.sort_by_key(|&c| (std::cmp::Reverse(scores[c]), tb.rank(c)));
        return vec![(ranked[0], ranked[1])];
    }
    ranked.sort_by_key(|&c| std::cmp::Reverse(scores[c]));
    let cutoff = scores[ranked[1]];
    let sure: Vec<Candidate> = ranked
        .iter()
        .copied()
        .filter(|&c| scores[c] > cutoff)
        .collect();
    let tied: Vec<Candidate> = ranked
        .iter()
        .copied()
        .filter(|&c| scores[c] == cutoff)
        .collect();
    if sure.len() == 1 {
        tied.iter().map(|&c| (sure[0], c)).collect()
    } else {
        let mut pairs = Vec::new();
        for (i, &x) in tied.iter().enumerate() {
            for &y in &tied[i + 1..] {
                pairs.push((x, y));
            }
        }
        pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::WeightedBallot;

    const A: usize = 0;
    const B: usize = 1;
    const H: usize = 2;

    fn profile(m: usize, ballots: &[(&[usize], u64)]) -> Profile {
        Profile::new(
            m,
            ballots
                .iter()
                .map(|(o, w)| WeightedBallot::new(o.to_vec(), *w))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn stv_two_rounds() {
        let p = profile(3, &[(&[A, H, B], 6), (&[B, H, A], 6), (&[H, A, B], 7)]);
        // a has the lowest priority, so the a/b tie eliminates a.
        let tb = TieBreak::Lexicographic(vec![H, B, A]);
        assert_eq!(stv_winner(&p, &tb).unwrap(), WinnerSet::from([H]));
        assert_eq!(
            stv_winner(&p, &TieBreak::Pessimistic).unwrap(),
            WinnerSet::from([H])
        );
    }

    #[test]
    fn stv_small_elections() {
        let lone = profile(1, &[(&[0], 3)]);
        assert_eq!(
            stv_winner(&lone, &TieBreak::lexicographic(1)).unwrap(),
            WinnerSet::from([0])
        );
        let two = profile(2, &[(&[0, 1], 2), (&[1, 0], 3)]);
        assert_eq!(
            stv_winner(&two, &TieBreak::lexicographic(2)).unwrap(),
            WinnerSet::from([1])
        );
        let tied = profile(2, &[(&[0, 1], 2), (&[1, 0], 2)]);
        assert_eq!(
            stv_winner(&tied, &TieBreak::lexicographic(2)).unwrap(),
            WinnerSet::from([0])
        );
        assert_eq!(
            stv_winner(&tied, &TieBreak::Optimistic).unwrap(),
            WinnerSet::from([0, 1])
        );
    }

    #[test]
    fn runoff_on_partition_encoding() {
        // The {1, 1} destructive encoding plus the coalition split (a,b,h)/(b,a,h).
        let p = profile(
            3,
            &[
                (&[A, H, B], 6),
                (&[B, H, A], 6),
                (&[H, A, B], 7),
                (&[A, B, H], 2),
                (&[B, A, H], 2),
            ],
        );
        // plurality a:8 b:8 h:7, then a beats b 15 to 8
        assert_eq!(
            runoff_winner(&p, &TieBreak::lexicographic(3)).unwrap(),
            WinnerSet::from([A])
        );
        assert_eq!(
            runoff_winner(&p, &TieBreak::Pessimistic).unwrap(),
            WinnerSet::from([A])
        );
    }

    #[test]
    fn runoff_needs_two_candidates() {
        assert!(runoff_winner(&profile(1, &[(&[0], 1)]), &TieBreak::lexicographic(1)).is_err());
    }

    #[test]
    fn finalists_with_ties() {
        let tb = TieBreak::Pessimistic;
        assert_eq!(finalists(&[5, 3, 3], &tb), vec![(0, 1), (0, 2)]);
        assert_eq!(finalists(&[2, 2, 2], &tb), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(finalists(&[4, 4, 1], &tb), vec![(0, 1)]);
        let lex = TieBreak::Lexicographic(vec![2, 1, 0]);
        assert_eq!(finalists(&[5, 3, 3], &lex), vec![(0, 2)]);
    }
}
