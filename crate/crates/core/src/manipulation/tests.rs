use itertools::Itertools;
use num_rational::Ratio;
use proptest::prelude::*;

use super::*;
use crate::election::expand_weights;
use crate::generate::{generate_random, GeneratorConfig, GoalKind, ProtocolFamily};
use crate::protocols::{build_balanced_tree, CupTree, ScoringVector};

const A: Candidate = 0;
const B: Candidate = 1;
const P: Candidate = 2;

fn b(order: &[Candidate], w: u64) -> WeightedBallot {
    WeightedBallot::new(order.to_vec(), w)
}

fn inst(
    m: usize,
    s: Vec<WeightedBallot>,
    t: Vec<u64>,
    goal: Goal,
    spec: ProtocolSpec,
) -> ManipulationInstance {
    let threshold = matches!(spec, ProtocolSpec::RandomizedCup).then(|| Ratio::new(0, 1));
    ManipulationInstance::new(
        Profile::new(m, s).unwrap(),
        t,
        goal,
        spec,
        TieBreak::Pessimistic,
        threshold,
    )
    .unwrap()
}

/// Tries every assignment of orderings to the coalition, straight through `winner`.
fn brute(inst: &ManipulationInstance) -> bool {
    let m = inst.candidates();
    let orderings: Vec<Vec<Candidate>> = (0..m).permutations(m).collect();
    let t = inst.weights().len();
    if t == 0 {
        return validate_witness(inst, &[]).unwrap().accepted;
    }
    (0..t)
        .map(|_| 0..orderings.len())
        .multi_cartesian_product()
        .any(|choice| {
            let witness: Vec<_> = choice.iter().map(|&i| orderings[i].clone()).collect();
            validate_witness(inst, &witness).unwrap().accepted
        })
}

fn assert_sound(inst: &ManipulationInstance, res: &ManipulationResult) {
    if res.decision {
        let w = res.witness.as_ref().expect("yes carries a witness");
        let v = validate_witness(inst, w).unwrap();
        assert!(
            v.accepted,
            "{:?} witness rejected: {}",
            res.method, v.explanation
        );
    } else {
        assert!(res.witness.is_none());
    }
}

fn veto_partition_11() -> ManipulationInstance {
    inst(
        3,
        vec![b(&[A, B, P], 1)],
        vec![2, 2],
        Goal::Constructive(P),
        ProtocolSpec::Scoring(ScoringVector::veto(3)),
    )
}

#[test]
fn veto_encoding_of_one_one() {
    let i = veto_partition_11();
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_eq!(res.method, Method::ExactSearch);
    assert_sound(&i, &res);
    assert!(
        validate_witness(&i, &[vec![P, A, B], vec![P, B, A]])
            .unwrap()
            .accepted
    );
    let bad = validate_witness(&i, &[vec![P, A, B], vec![P, A, B]]).unwrap();
    assert!(!bad.accepted);
    assert_eq!(bad.outcome, Outcome::Winners([A].into()));
}

#[test]
fn wrong_witness_length() {
    let i = veto_partition_11();
    assert_eq!(
        validate_witness(&i, &[vec![P, A, B]]),
        Err(ManipulationError::WitnessLength {
            expected: 2,
            found: 1
        })
    );
    assert!(validate_witness(&i, &[vec![P, A, B], vec![P, A, A]]).is_err());
}

#[test]
fn plurality_examples() {
    let plur = || ProtocolSpec::Scoring(ScoringVector::plurality(3));
    let i = inst(
        3,
        vec![b(&[A, B, P], 5)],
        vec![3, 3],
        Goal::Constructive(P),
        plur(),
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_eq!(res.method, Method::PluralityTrivial);
    assert_eq!(res.witness.unwrap(), vec![vec![P, A, B]; 2]);

    let i = inst(
        3,
        vec![b(&[A, B, P], 7)],
        vec![3, 3],
        Goal::Constructive(P),
        plur(),
    );
    assert!(!solve(&i, &SearchBudget::default()).unwrap().decision);

    // h has weight 3; one manipulator of weight 4
    let h = A;
    let i = inst(
        3,
        vec![b(&[h, B, P], 3)],
        vec![4],
        Goal::Constructive(P),
        plur(),
    );
    assert!(solve(&i, &SearchBudget::default()).unwrap().decision);
    let i = i.with_goal(Goal::Destructive(h)).unwrap();
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_eq!(res.method, Method::DestructiveMonotone);
    assert_sound(&i, &res);
}

#[test]
fn empty_coalition_asks_whether_target_already_wins() {
    let s = vec![b(&[A, B, P], 2), b(&[P, A, B], 3)];
    for family in ProtocolFamily::ALL {
        let spec = family.spec(3);
        let outcome = winner(
            &Profile::new(3, s.clone()).unwrap(),
            &spec,
            &TieBreak::Pessimistic,
        )
        .unwrap();
        for c in 0..3 {
            for goal in [Goal::Constructive(c), Goal::Destructive(c)] {
                let i = inst(3, s.clone(), vec![], goal, spec.clone());
                let res = solve(&i, &SearchBudget::default()).unwrap();
                let expect = goal_met(
                    goal,
                    &TieBreak::Pessimistic,
                    &outcome,
                    Some(Ratio::new(0, 1)),
                )
                .0;
                assert_eq!(res.decision, expect, "{family} {goal:?}");
                if res.decision {
                    assert_eq!(res.witness.unwrap(), Vec::<Vec<Candidate>>::new());
                }
            }
        }
    }
}

#[test]
fn copeland_three_candidates() {
    let i = inst(
        3,
        vec![b(&[A, B, P], 1)],
        vec![2],
        Goal::Constructive(P),
        ProtocolSpec::Copeland,
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_eq!(res.method, Method::IdenticalVote { complete: true });
    assert_sound(&i, &res);
    assert!(validate_witness(&i, &[vec![P, A, B]]).unwrap().accepted);

    let i = inst(
        3,
        vec![b(&[A, B, P], 5)],
        vec![2],
        Goal::Constructive(P),
        ProtocolSpec::Copeland,
    );
    assert!(!solve(&i, &SearchBudget::default()).unwrap().decision);
    assert!(!brute(&i));
}

#[test]
fn maximin_three_candidates() {
    let i = inst(
        3,
        vec![b(&[A, B, P], 1), b(&[B, A, P], 1)],
        vec![4],
        Goal::Constructive(P),
        ProtocolSpec::Maximin,
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_sound(&i, &res);
    assert!(validate_witness(&i, &[vec![P, A, B]]).unwrap().accepted);
}

#[test]
fn maximin_dominant_h_cannot_be_stopped() {
    let h = A;
    let i = inst(
        3,
        vec![b(&[h, B, P], 10)],
        vec![2, 2],
        Goal::Destructive(h),
        ProtocolSpec::Maximin,
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(!res.decision);
    assert!(!brute(&i));
}

#[test]
fn borda_destructive() {
    let h = A;
    let i = inst(
        3,
        vec![b(&[h, B, P], 2)],
        vec![3],
        Goal::Destructive(h),
        ProtocolSpec::Scoring(ScoringVector::borda(3)),
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_sound(&i, &res);
}

#[test]
fn veto_h_already_loses() {
    let h = P;
    let i = inst(
        3,
        vec![b(&[A, B, h], 10)],
        vec![1],
        Goal::Destructive(h),
        ProtocolSpec::Scoring(ScoringVector::veto(3)),
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    for ballot in (0..3).permutations(3) {
        assert!(validate_witness(&i, &[ballot]).unwrap().accepted);
    }
}

#[test]
fn two_candidates_empty_profile() {
    let i = inst(
        2,
        vec![],
        vec![1],
        Goal::Destructive(1),
        ProtocolSpec::Scoring(ScoringVector::borda(2)),
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_eq!(res.witness.unwrap(), vec![vec![0, 1]]);
}

#[test]
fn stv_one_one_encoding() {
    let (h, a, bb) = (2, 0, 1);
    let i = inst(
        3,
        vec![b(&[a, h, bb], 6), b(&[bb, h, a], 6), b(&[h, a, bb], 7)],
        vec![2, 2],
        Goal::Destructive(h),
        ProtocolSpec::Stv,
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert!(res.decision);
    assert_eq!(res.method, Method::ExactSearch);
    assert_sound(&i, &res);
    assert!(
        validate_witness(&i, &[vec![a, bb, h], vec![bb, a, h]])
            .unwrap()
            .accepted
    );
    assert!(
        !validate_witness(&i, &[vec![a, bb, h], vec![a, bb, h]])
            .unwrap()
            .accepted
    );
}

#[test]
fn cup_four_candidates() {
    let (p, a, bb, c) = (0, 1, 2, 3);
    let tree = CupTree::pair(
        CupTree::pair(CupTree::Leaf(p), CupTree::Leaf(a)),
        CupTree::pair(CupTree::Leaf(bb), CupTree::Leaf(c)),
    );
    let i = inst(
        4,
        vec![b(&[a, p, bb, c], 3), b(&[bb, c, p, a], 2)],
        vec![2],
        Goal::Constructive(p),
        ProtocolSpec::Cup(tree),
    );
    let res = solve(&i, &SearchBudget::default()).unwrap();
    assert_eq!(res.method, Method::CupConstructive);
    assert_sound(&i, &res);
    let exact =
        exact_search_constructive(&i, &SearchBudget::default(), &SearchOptions::default()).unwrap();
    assert_eq!(res.decision, exact.decision);
    assert_eq!(res.decision, brute(&i));
}

#[test]
fn cup_hopeless_target() {
    let tree = build_balanced_tree(3).unwrap();
    let i = inst(
        3,
        vec![b(&[A, B, P], 9)],
        vec![2, 3],
        Goal::Constructive(P),
        ProtocolSpec::Cup(tree),
    );
    assert!(!solve(&i, &SearchBudget::default()).unwrap().decision);
}

#[test]
fn solvers_refuse_wrong_goal_or_protocol() {
    let i = veto_partition_11();
    assert!(matches!(
        destructive_monotone(&i),
        Err(ManipulationError::NotApplicable { .. })
    ));
    assert!(matches!(
        cup_constructive(&i),
        Err(ManipulationError::NotApplicable { .. })
    ));
    assert!(matches!(
        plurality_trivial(&i),
        Err(ManipulationError::NotApplicable { .. })
    ));
    assert!(matches!(
        exact_search_destructive(&i, &SearchBudget::default(), &SearchOptions::default()),
        Err(ManipulationError::NotApplicable { .. })
    ));
    assert!(matches!(
        solve_destructive(&i, &SearchBudget::default()),
        Err(ManipulationError::NotApplicable { .. })
    ));
}

#[test]
fn budget_is_enforced() {
    let i = veto_partition_11();
    let tight = SearchBudget {
        max_candidates: 2,
        ..SearchBudget::default()
    };
    assert!(matches!(
        solve(&i, &tight),
        Err(ManipulationError::BudgetExceeded(_))
    ));
    let tight = SearchBudget {
        max_manipulators: 1,
        ..SearchBudget::default()
    };
    assert!(matches!(
        solve(&i, &tight),
        Err(ManipulationError::BudgetExceeded(_))
    ));
    let tight = SearchBudget {
        max_nodes: 2,
        ..SearchBudget::default()
    };
    assert!(matches!(
        solve(&i, &tight),
        Err(ManipulationError::BudgetExceeded(_))
    ));
}

#[test]
fn instance_validation() {
    let s = Profile::new(3, vec![b(&[A, B, P], 1)]).unwrap();
    let mk = |t: Vec<u64>, goal, spec, thr| {
        ManipulationInstance::new(s.clone(), t, goal, spec, TieBreak::Pessimistic, thr)
    };
    assert_eq!(
        mk(vec![0], Goal::Constructive(P), ProtocolSpec::Copeland, None),
        Err(ManipulationError::NonPositiveManipulatorWeight)
    );
    assert_eq!(
        mk(vec![1], Goal::Constructive(3), ProtocolSpec::Copeland, None),
        Err(ManipulationError::GoalOutOfRange(3))
    );
    assert_eq!(
        mk(
            vec![1],
            Goal::Constructive(P),
            ProtocolSpec::Copeland,
            Some(Ratio::new(1, 2))
        ),
        Err(ManipulationError::ThresholdMismatch)
    );
    assert_eq!(
        mk(
            vec![1],
            Goal::Constructive(P),
            ProtocolSpec::RandomizedCup,
            None
        ),
        Err(ManipulationError::ThresholdMismatch)
    );
    assert_eq!(
        mk(
            vec![1],
            Goal::Constructive(P),
            ProtocolSpec::RandomizedCup,
            Some(Ratio::new(3, 2))
        ),
        Err(ManipulationError::ThresholdRange)
    );
    assert!(mk(
        vec![u64::MAX, 1],
        Goal::Constructive(P),
        ProtocolSpec::Copeland,
        None
    )
    .is_err());
}

#[test]
fn randomized_cup_threshold_is_strict() {
    // A three-cycle gives everyone 1/3 without help.
    let s = vec![b(&[0, 1, 2], 1), b(&[1, 2, 0], 1), b(&[2, 0, 1], 1)];
    let p = Profile::new(3, s).unwrap();
    let at = |r: Ratio<u64>, goal: Goal| {
        ManipulationInstance::new(
            p.clone(),
            vec![],
            goal,
            ProtocolSpec::RandomizedCup,
            TieBreak::Pessimistic,
            Some(r),
        )
        .unwrap()
    };
    let third = Ratio::new(1, 3);
    let res = solve(&at(third, Goal::Constructive(0)), &SearchBudget::default()).unwrap();
    assert!(!res.decision);
    let res = solve(
        &at(Ratio::new(1, 4), Goal::Constructive(0)),
        &SearchBudget::default(),
    )
    .unwrap();
    assert!(res.decision);
    assert_eq!(res.probability, Some(third));
    assert!(
        !solve(&at(third, Goal::Destructive(0)), &SearchBudget::default())
            .unwrap()
            .decision
    );
    assert!(
        solve(
            &at(Ratio::new(1, 2), Goal::Destructive(0)),
            &SearchBudget::default()
        )
        .unwrap()
        .decision
    );
}

#[test]
fn goal_met_by_policy() {
    let tied = Outcome::Winners([A, P].into());
    let only = Outcome::Winners([P].into());
    for (tb, constructive, destructive) in [
        (TieBreak::Pessimistic, false, false),
        (TieBreak::Optimistic, true, true),
    ] {
        assert_eq!(
            goal_met(Goal::Constructive(P), &tb, &tied, None).0,
            constructive
        );
        assert_eq!(
            goal_met(Goal::Destructive(P), &tb, &tied, None).0,
            destructive
        );
        assert!(goal_met(Goal::Constructive(P), &tb, &only, None).0);
        assert!(!goal_met(Goal::Destructive(P), &tb, &only, None).0);
    }
}

fn random_instance(
    seed: u64,
    family: ProtocolFamily,
    goal: GoalKind,
    m: usize,
    t: usize,
) -> ManipulationInstance {
    let mut cfg = GeneratorConfig::new(m, family, goal);
    cfg.ballots = 1 + (seed % 4) as usize;
    cfg.max_weight = 5;
    cfg.manipulators = t;
    generate_random(seed, &cfg).unwrap()
}

const SMALL: [ProtocolFamily; 8] = [
    ProtocolFamily::Plurality,
    ProtocolFamily::Borda,
    ProtocolFamily::Veto,
    ProtocolFamily::Maximin,
    ProtocolFamily::Copeland,
    ProtocolFamily::Stv,
    ProtocolFamily::Runoff,
    ProtocolFamily::Cup,
];

#[test]
fn dispatch_agrees_with_brute_force() {
    for seed in 0..240u64 {
        let family = SMALL[(seed % 8) as usize];
        let goal = if seed % 16 < 8 {
            GoalKind::Constructive
        } else {
            GoalKind::Destructive
        };
        let m = 3 + (seed % 2) as usize;
        let t = if m == 4 { 2 } else { 3 };
        let i = random_instance(seed, family, goal, m, t);
        let res = solve(&i, &SearchBudget::default()).unwrap();
        assert_eq!(res.method, planned_method(&i));
        assert_sound(&i, &res);
        assert_eq!(
            res.decision,
            brute(&i),
            "{family} {goal:?} seed {seed}: {i:?}"
        );
    }
}

#[test]
fn other_policies_agree_with_brute_force() {
    for seed in 0..160u64 {
        let family = SMALL[(seed % 8) as usize];
        let goal = if seed % 2 == 0 {
            GoalKind::Constructive
        } else {
            GoalKind::Destructive
        };
        let base = random_instance(seed, family, goal, 3, 2);
        for tb in [TieBreak::Optimistic, TieBreak::Lexicographic(vec![2, 0, 1])] {
            let i = ManipulationInstance::new(
                base.nonmanipulators().clone(),
                base.weights().to_vec(),
                base.goal(),
                base.protocol().clone(),
                tb.clone(),
                None,
            )
            .unwrap();
            let res = solve(&i, &SearchBudget::default()).unwrap();
            assert_eq!(res.method, planned_method(&i));
            assert_sound(&i, &res);
            assert_eq!(res.decision, brute(&i), "{family} {tb:?} seed {seed}");
        }
    }
}

#[test]
fn pruning_does_not_change_decisions() {
    let plain = SearchOptions {
        symmetry: false,
        memoize: false,
    };
    for seed in 0..200u64 {
        let family = SMALL[(seed % 8) as usize];
        let goal = if seed % 3 == 0 {
            GoalKind::Destructive
        } else {
            GoalKind::Constructive
        };
        let i = random_instance(seed, family, goal, 3, 3);
        let budget = SearchBudget::default();
        let (fast, slow) = if i.goal().is_constructive() {
            (
                exact_search_constructive(&i, &budget, &SearchOptions::default()).unwrap(),
                exact_search_constructive(&i, &budget, &plain).unwrap(),
            )
        } else {
            (
                exact_search_destructive(&i, &budget, &SearchOptions::default()).unwrap(),
                exact_search_destructive(&i, &budget, &plain).unwrap(),
            )
        };
        assert_eq!(fast.decision, slow.decision, "seed {seed}");
        assert!(fast.nodes <= slow.nodes);
        assert_sound(&i, &fast);
    }
}

#[test]
fn borda_search_matches_unpruned() {
    let i = inst(
        3,
        vec![b(&[A, B, P], 2), b(&[B, A, P], 2)],
        vec![3, 3],
        Goal::Constructive(P),
        ProtocolSpec::Scoring(ScoringVector::borda(3)),
    );
    let plain = SearchOptions {
        symmetry: false,
        memoize: false,
    };
    let fast =
        exact_search_constructive(&i, &SearchBudget::default(), &SearchOptions::default()).unwrap();
    let slow = exact_search_constructive(&i, &SearchBudget::default(), &plain).unwrap();
    assert_eq!(fast.decision, slow.decision);
    assert_eq!(fast.decision, brute(&i));
}

#[test]
fn identical_vote_inside_exact_search() {
    for seed in 0..100u64 {
        let family = SMALL[(seed % 8) as usize];
        let i = random_instance(seed, family, GoalKind::Constructive, 3, 2);
        let iv = identical_vote_search(&i).unwrap();
        assert_sound(&i, &iv);
        if iv.decision {
            let exact =
                exact_search_constructive(&i, &SearchBudget::default(), &SearchOptions::default())
                    .unwrap();
            assert!(exact.decision);
        }
    }
}

#[test]
fn monotone_in_single_weight() {
    let families = [
        ProtocolFamily::Plurality,
        ProtocolFamily::Veto,
        ProtocolFamily::Borda,
        ProtocolFamily::Maximin,
        ProtocolFamily::Copeland,
    ];
    for seed in 0..150u64 {
        let family = families[(seed % 5) as usize];
        let i = random_instance(seed, family, GoalKind::Constructive, 3, 2);
        if !solve(&i, &SearchBudget::default()).unwrap().decision {
            continue;
        }
        for pos in 0..2 {
            let mut heavier = i.weights().to_vec();
            heavier[pos] += 1 + seed % 3;
            let j = i.with_weights(heavier).unwrap();
            assert!(
                solve(&j, &SearchBudget::default()).unwrap().decision,
                "{family} seed {seed}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariant_under_coalition_order_and_expansion(seed in 0u64..10_000, fam in 0usize..8, destructive: bool) {
        let goal = if destructive { GoalKind::Destructive } else { GoalKind::Constructive };
        let i = random_instance(seed, SMALL[fam], goal, 3, 3);
        let base = solve(&i, &SearchBudget::default()).unwrap().decision;
        let mut reversed = i.weights().to_vec();
        reversed.reverse();
        let r = solve(&i.with_weights(reversed).unwrap(), &SearchBudget::default()).unwrap();
        prop_assert_eq!(r.decision, base);
        let expanded = expand_weights(i.nonmanipulators(), 1 << 12).unwrap();
        let e = solve(&i.with_nonmanipulators(expanded).unwrap(), &SearchBudget::default()).unwrap();
        prop_assert_eq!(e.decision, base);
    }

    #[test]
    fn every_yes_is_validated(seed in 0u64..10_000, fam in 0usize..9, destructive: bool) {
        let family = ProtocolFamily::ALL[fam];
        let goal = if destructive { GoalKind::Destructive } else { GoalKind::Constructive };
        let i = random_instance(seed, family, goal, 3, 2);
        let res = solve(&i, &SearchBudget::default()).unwrap();
        assert_sound(&i, &res);
    }
}

#[test]
fn identical_vote_complete_where_claimed() {
    let cases = [
        (ProtocolFamily::Copeland, 3, 3),
        (ProtocolFamily::Maximin, 3, 3),
        (ProtocolFamily::RandomizedCup, 3, 2),
        (ProtocolFamily::RandomizedCup, 4, 2),
    ];
    let mut mismatches = Vec::new();
    for seed in 0..400u64 {
        let (family, m, t) = cases[(seed % 4) as usize];
        let base = random_instance(seed, family, GoalKind::Constructive, m, t);
        for tb in [
            TieBreak::Pessimistic,
            TieBreak::Optimistic,
            TieBreak::lexicographic(m),
        ] {
            let i = ManipulationInstance::new(
                base.nonmanipulators().clone(),
                base.weights().to_vec(),
                base.goal(),
                base.protocol().clone(),
                tb.clone(),
                base.threshold(),
            )
            .unwrap();
            let iv = identical_vote_search(&i).unwrap();
            let exact =
                exact_search_constructive(&i, &SearchBudget::default(), &SearchOptions::default())
                    .unwrap();
            if iv.decision != exact.decision {
                mismatches.push(format!("{family} m={m} {tb:?} seed {seed}"));
            }
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}
