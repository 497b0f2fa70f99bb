//! Regular and randomized cup (single-elimination) tournaments.

use std::fmt;

use itertools::Itertools;
use num_rational::Ratio;

use super::{TieBreak, WinnerSet};
use crate::election::{pairwise_tally, Candidate, PairwiseMatrix, Profile};
use crate::error::ElectionError;

/// Largest `m` for which all `m!` bracket assignments are enumerated.
pub const RANDOMIZED_CUP_CAP: usize = 8;

/// A bracket: leaves hold candidates, internal nodes are pairwise matches.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CupTree {
    Leaf(Candidate),
    Match(Box<CupTree>, Box<CupTree>),
}

impl CupTree {
    pub fn pair(left: CupTree, right: CupTree) -> Self {
        CupTree::Match(Box::new(left), Box::new(right))
    }

    /// Leaf candidates, left to right.
    pub fn leaves(&self) -> Vec<Candidate> {
        let mut out = Vec::new();
        self.walk(0, &mut |c, _| out.push(c));
        out
    }

    pub fn leaf_depths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(0, &mut |_, d| out.push(d));
        out
    }

    fn walk(&self, depth: usize, f: &mut impl FnMut(Candidate, usize)) {
        match self {
            CupTree::Leaf(c) => f(*c, depth),
            CupTree::Match(l, r) => {
                l.walk(depth + 1, f);
                r.walk(depth + 1, f);
            }
        }
    }

    /// Checks the leaves are a permutation of `0..m` and the tree is balanced.
    pub fn validate(&self, m: usize) -> Result<(), ElectionError> {
        let mut leaves = self.leaves();
        if leaves.len() != m {
            return Err(ElectionError::InvalidCupTree(format!(
                "{} leaves for {} candidates",
                leaves.len(),
                m
            )));
        }
        leaves.sort_unstable();
        if leaves.iter().enumerate().any(|(i, &c)| i != c) {
            return Err(ElectionError::InvalidCupTree(
                "leaves must hold each candidate exactly once".into(),
            ));
        }
        let depths = self.leaf_depths();
        let (lo, hi) = depths.iter().minmax().into_option().unwrap();
        if hi - lo > 1 {
            return Err(ElectionError::InvalidCupTree(
                "leaf depths differ by more than one".into(),
            ));
        }
        Ok(())
    }

    /// Replaces leaf value `i` by `assignment[i]`.
    pub fn relabel(&self, assignment: &[Candidate]) -> CupTree {
        match self {
            CupTree::Leaf(c) => CupTree::Leaf(assignment[*c]),
            CupTree::Match(l, r) => CupTree::pair(l.relabel(assignment), r.relabel(assignment)),
        }
    }

    /// Writes the tree as nested pairs, naming leaves with `label`.
    pub fn render(&self, label: &impl Fn(Candidate) -> String) -> String {
        match self {
            CupTree::Leaf(c) => label(*c),
            CupTree::Match(l, r) => format!("({},{})", l.render(label), r.render(label)),
        }
    }
}

impl fmt::Display for CupTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|c| c.to_string()))
    }
}

/// Splits `m` into `ceil(m/2)` and `floor(m/2)` recursively, filling leaves
/// with `0..m` left to right. Shallower leaves are byes.
pub fn build_balanced_tree(m: usize) -> Result<CupTree, ElectionError> {
    if m < 1 {
        return Err(ElectionError::TooFewCandidates {
            needed: 1,
            found: m,
        });
    }
    fn build(lo: usize, count: usize) -> CupTree {
        if count == 1 {
            return CupTree::Leaf(lo);
        }
        let left = count.div_ceil(2);
        CupTree::pair(build(lo, left), build(lo + left, count - left))
    }
    Ok(build(0, m))
}

/// Outcome of every pairwise match plus the lexicographic priority ranks.
pub(crate) struct Duels {
    m: usize,
    sign: Vec<i8>,
    rank: Option<Vec<usize>>,
}

impl Duels {
    pub(crate) fn new(tally: &PairwiseMatrix, tb: &TieBreak) -> Self {
        let m = tally.candidates();
        let mut sign = vec![0i8; m * m];
        for x in 0..m {
            for y in 0..m {
                sign[x * m + y] = match tally.get(x, y).cmp(&tally.get(y, x)) {
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Less => -1,
                };
            }
        }
        let rank = match tb {
            TieBreak::Lexicographic(_) => Some((0..m).map(|c| tb.rank(c)).collect()),
            _ => None,
        };
        Duels { m, sign, rank }
    }

    pub(crate) fn signs(&self) -> &[i8] {
        &self.sign
    }

    /// Possible winners of the bracket as a bitmask. Leaf value `i` stands for
    /// candidate `assignment[i]`.
    fn play(&self, tree: &CupTree, assignment: &[Candidate]) -> u64 {
        match tree {
            CupTree::Leaf(slot) => 1 << assignment[*slot],
            CupTree::Match(l, r) => {
                let left = self.play(l, assignment);
                let right = self.play(r, assignment);
                let mut out = 0;
                for x in bits(left) {
                    for y in bits(right) {
                        out |= match self.sign[x * self.m + y] {
                            1 => 1 << x,
                            -1 => 1 << y,
                            _ => match &self.rank {
                                Some(rank) if rank[x] < rank[y] => 1 << x,
                                Some(_) => 1 << y,
                                None => (1 << x) | (1 << y),
                            },
                        };
                    }
                }
                out
            }
        }
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1 << i) != 0)
}

fn mask_to_set(mask: u64) -> WinnerSet {
    bits(mask).collect()
}

pub fn cup_winner(
    profile: &Profile,
    tree: &CupTree,
    tb: &TieBreak,
) -> Result<WinnerSet, ElectionError> {
    let m = profile.candidates();
    tree.validate(m)?;
    tb.validate(m)?;
    Ok(cup_from_tally(tree, &pairwise_tally(profile), tb))
}

pub(crate) fn cup_from_tally(tree: &CupTree, tally: &PairwiseMatrix, tb: &TieBreak) -> WinnerSet {
    let identity: Vec<Candidate> = (0..tally.candidates()).collect();
    mask_to_set(Duels::new(tally, tb).play(tree, &identity))
}

/// Winning chances over the uniformly random bracket assignment.
///
/// `lower[c]` counts assignments where `c` wins under every tie resolution,
/// `upper[c]` those where `c` wins under at least one. Under a lexicographic
/// policy both coincide and form an exact distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinnerDistribution {
    lower: Vec<u64>,
    upper: Vec<u64>,
    assignments: u64,
}

impl WinnerDistribution {
    pub fn point(m: usize, winner: Candidate) -> Self {
        let mut mass = vec![0; m];
        mass[winner] = 1;
        WinnerDistribution {
            lower: mass.clone(),
            upper: mass,
            assignments: 1,
        }
    }

    pub fn candidates(&self) -> usize {
        self.lower.len()
    }

    /// Number of equally likely assignments (`m!`).
    pub fn assignments(&self) -> u64 {
        self.assignments
    }

    pub fn lower(&self, c: Candidate) -> Ratio<u64> {
        Ratio::new(self.lower[c], self.assignments)
    }

    pub fn upper(&self, c: Candidate) -> Ratio<u64> {
        Ratio::new(self.upper[c], self.assignments)
    }

    /// Sum of the lower bounds; exactly one when no tie is ever branched on.
    pub fn lower_total(&self) -> Ratio<u64> {
        Ratio::new(self.lower.iter().sum(), self.assignments)
    }

    /// Candidates with a nonzero chance of winning.
    pub fn support(&self) -> WinnerSet {
        (0..self.upper.len())
            .filter(|&c| self.upper[c] > 0)
            .collect()
    }
}

pub fn randomized_cup_distribution(
    profile: &Profile,
    tb: &TieBreak,
) -> Result<WinnerDistribution, ElectionError> {
    let m = profile.candidates();
    if m < 1 {
        return Err(ElectionError::TooFewCandidates {
            needed: 1,
            found: m,
        });
    }
    if m > RANDOMIZED_CUP_CAP {
        return Err(ElectionError::EnumerationCap {
            cap: RANDOMIZED_CUP_CAP,
            found: m,
        });
    }
    tb.validate(m)?;
    Ok(randomized_from_duels(&Duels::new(
        &pairwise_tally(profile),
        tb,
    )))
}

pub(crate) fn randomized_from_duels(duels: &Duels) -> WinnerDistribution {
    let m = duels.m;
    let template = build_balanced_tree(m).expect("m >= 1");
    let mut lower = vec![0u64; m];
    let mut upper = vec![0u64; m];
    let mut assignments = 0u64;
    for assignment in (0..m).permutations(m) {
        let mask = duels.play(&template, &assignment);
        if mask.count_ones() == 1 {
            lower[mask.trailing_zeros() as usize] += 1;
        }
        for c in bits(mask) {
            upper[c] += 1;
        }
        assignments += 1;
    }
    WinnerDistribution {
        lower,
        upper,
        assignments,
    }
}
