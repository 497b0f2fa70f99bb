//! Complete depth-first search over coalition ballot assignments.
//!
//! Manipulators are processed heaviest first. Each one picks one of the `m!`
//! orderings. Two reductions keep the tree small:
//!
//! * symmetry: consecutive manipulators of equal weight pick non-decreasing
//!   ordering indices, so permutations of equal-weight members are visited once;
//! * memoization: a subtree is identified by its depth, its lowest allowed
//!   ordering index and the running statistic (scores, pairwise matrix or
//!   ordering weights). Failed subtrees are remembered and skipped.

use std::collections::HashSet;

use num_rational::Ratio;

use super::evaluator::Evaluator;
use super::{Goal, ManipulationInstance, ManipulationResult, Method, SearchBudget};
use crate::election::Candidate;
use crate::error::ManipulationError;

/// Pruning switches, exposed so the reductions can be checked against plain search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub symmetry: bool,
    pub memoize: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry: true,
            memoize: true,
        }
    }
}

pub fn exact_search_constructive(
    inst: &ManipulationInstance,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> Result<ManipulationResult, ManipulationError> {
    if !matches!(inst.goal(), Goal::Constructive(_)) {
        return Err(ManipulationError::NotApplicable {
            solver: "exact_search_constructive",
            reason: "goal is destructive",
        });
    }
    run(inst, budget, options)
}

pub fn exact_search_destructive(
    inst: &ManipulationInstance,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> Result<ManipulationResult, ManipulationError> {
    if !matches!(inst.goal(), Goal::Destructive(_)) {
        return Err(ManipulationError::NotApplicable {
            solver: "exact_search_destructive",
            reason: "goal is constructive",
        });
    }
    run(inst, budget, options)
}

fn run(
    inst: &ManipulationInstance,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> Result<ManipulationResult, ManipulationError> {
    let m = inst.candidates();
    if m > budget.max_candidates {
        return Err(ManipulationError::BudgetExceeded(format!(
            "{} candidates, budget allows {}",
            m, budget.max_candidates
        )));
    }
    if inst.weights().len() > budget.max_manipulators {
        return Err(ManipulationError::BudgetExceeded(format!(
            "{} manipulators, budget allows {}",
            inst.weights().len(),
            budget.max_manipulators
        )));
    }
    let mut members: Vec<(usize, u64)> = inst.weights().iter().copied().enumerate().collect();
    members.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let evaluator = Evaluator::new(inst)?;
    let mut state = evaluator.base().to_vec();
    let mut search = Search {
        evaluator,
        members,
        options: *options,
        max_nodes: budget.max_nodes,
        failed: HashSet::new(),
        nodes: 0,
        chosen: Vec::new(),
        probability: None,
    };
    let found = search.dfs(0, &mut state)?;
    let nodes = search.nodes;
    if !found {
        return Ok(ManipulationResult::no(Method::ExactSearch, nodes));
    }
    let orderings = search.evaluator.orderings();
    let mut witness: Vec<Vec<Candidate>> = vec![Vec::new(); inst.weights().len()];
    for (&(pos, _), &idx) in search.members.iter().zip(&search.chosen) {
        witness[pos] = orderings[idx].clone();
    }
    Ok(ManipulationResult::yes(
        Method::ExactSearch,
        witness,
        search.probability,
        nodes,
    ))
}

struct Search<'a> {
    evaluator: Evaluator<'a>,
    members: Vec<(usize, u64)>,
    options: SearchOptions,
    max_nodes: u64,
    failed: HashSet<(usize, usize, Vec<i64>)>,
    nodes: u64,
    chosen: Vec<usize>,
    probability: Option<Ratio<u64>>,
}

impl Search<'_> {
    fn lowest_allowed(&self, depth: usize) -> usize {
        if !self.options.symmetry || depth == 0 {
            return 0;
        }
        if self.members[depth].1 == self.members[depth - 1].1 {
            self.chosen[depth - 1]
        } else {
            0
        }
    }

    fn dfs(&mut self, depth: usize, state: &mut Vec<i64>) -> Result<bool, ManipulationError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(ManipulationError::BudgetExceeded(format!(
                "more than {} search nodes",
                self.max_nodes
            )));
        }
        if depth == self.members.len() {
            let (met, probability) = self.evaluator.judge(state);
            if met {
                self.probability = probability;
            }
            return Ok(met);
        }
        let lowest = self.lowest_allowed(depth);
        if self.options.memoize && self.failed.contains(&(depth, lowest, state.clone())) {
            return Ok(false);
        }
        let weight = self.members[depth].1;
        for idx in lowest..self.evaluator.orderings().len() {
            self.evaluator.apply(state, idx, weight, 1);
            self.chosen.push(idx);
            let found = self.dfs(depth + 1, state)?;
            if found {
                self.evaluator.apply(state, idx, weight, -1);
                return Ok(true);
            }
            self.chosen.pop();
            self.evaluator.apply(state, idx, weight, -1);
        }
        if self.options.memoize {
            self.failed.insert((depth, lowest, state.clone()));
        }
        Ok(false)
    }
}
