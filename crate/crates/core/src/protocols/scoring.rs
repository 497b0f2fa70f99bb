use crate::election::Profile;
use crate::error::ElectionError;

/// Points awarded by position, first place first. Never increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoringVector {
    alpha: Vec<i64>,
}

impl ScoringVector {
    pub fn new(alpha: Vec<i64>) -> Result<Self, ElectionError> {
        if alpha.windows(2).any(|w| w[0] < w[1]) {
            return Err(ElectionError::ScoringNotMonotone);
        }
        Ok(ScoringVector { alpha })
    }

    /// `<m-1, m-2, ..., 0>`
    pub fn borda(m: usize) -> Self {
        ScoringVector {
            alpha: (0..m as i64).rev().collect(),
        }
    }

    /// `<1, 0, ..., 0>`
    pub fn plurality(m: usize) -> Self {
        let mut alpha = vec![0; m];
        if let Some(first) = alpha.first_mut() {
            *first = 1;
        }
        ScoringVector { alpha }
    }

    /// `<1, ..., 1, 0>`
    pub fn veto(m: usize) -> Self {
        let mut alpha = vec![1; m];
        if let Some(last) = alpha.last_mut() {
            *last = 0;
        }
        ScoringVector { alpha }
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// True when every position after the first scores the same, so only
    /// first places matter (plurality up to an affine rescaling).
    pub fn is_plurality_like(&self) -> bool {
        self.alpha.len() < 2 || self.alpha[1..].windows(2).all(|w| w[0] == w[1])
    }

    /// Points for each candidate when `order` is cast with `weight`.
    pub(crate) fn add_ballot(
        &self,
        scores: &mut [i64],
        order: &[usize],
        weight: u64,
    ) -> Result<(), ElectionError> {
        let weight = i64::try_from(weight).map_err(|_| ElectionError::ScoreOverflow)?;
        for (&c, &points) in order.iter().zip(&self.alpha) {
            let gained = points
                .checked_mul(weight)
                .ok_or(ElectionError::ScoreOverflow)?;
            scores[c] = scores[c]
                .checked_add(gained)
                .ok_or(ElectionError::ScoreOverflow)?;
        }
        Ok(())
    }
}

pub fn scoring_scores(profile: &Profile, alpha: &ScoringVector) -> Result<Vec<i64>, ElectionError> {
    let m = profile.candidates();
    if alpha.len() != m {
        return Err(ElectionError::ScoringLength {
            expected: m,
            found: alpha.len(),
        });
    }
    let mut scores = vec![0i64; m];
    for ballot in profile.ballots() {
        alpha.add_ballot(&mut scores, &ballot.order, ballot.weight)?;
    }
    Ok(scores)
}
