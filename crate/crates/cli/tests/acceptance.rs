//! Release gate: one test per acceptance criterion, thresholds pinned
//! inline. A failure anywhere in this file blocks a release.

use std::process::{Command, Output};

use anticipated_surprise::analysis::{
    ambiguity_conditions, preference, region_map, switch_probability, unit_gamble_surprise, Verdict,
};
use anticipated_surprise::io::{full_precision, parse_tree_file};
use anticipated_surprise::oracle::oracle_tree_value;
use anticipated_surprise::scenario::{
    allais_problem, birnbaum_problem, blackjack_16v10, blackjack_insurance, ellsberg_two_urns,
};
use anticipated_surprise::surprise::SurpriseTable;
use anticipated_surprise::verify::GridKind;
use anticipated_surprise::{surprise_tree, DecisionTree, Domain, Scenario64, Spec64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_tree(rng: &mut StdRng, depth_left: usize) -> DecisionTree<f64> {
    if depth_left == 0 || rng.random_range(0..4) == 0 {
        return DecisionTree::leaf(rng.random_range(-10.0..10.0));
    }
    let fanout = rng.random_range(2..=4);
    let weights: Vec<f64> = (0..fanout).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let children =
        weights.into_iter().map(|w| (w / total, random_tree(rng, depth_left - 1))).collect();
    DecisionTree::branch(children).unwrap()
}

fn assert_relatively_close(a: f64, b: f64, tolerance: f64, context: &str) {
    let scale = a.abs().max(b.abs()).max(1.0);
    assert!((a - b).abs() <= tolerance * scale, "{context}: {a} vs {b}");
}

fn surprise_binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surprise")).args(args).output().expect("binary launches")
}

#[test]
fn criterion_01_long_shot_zero_and_switch_points() {
    for &k in &[1.0, 2.5] {
        let spec = Spec64::power(1.5, k).unwrap();
        for domain in [Domain::Gain, Domain::Loss] {
            let at_certainty = unit_gamble_surprise(1.0, domain, &spec).unwrap();
            assert!(at_certainty.abs() <= 1e-12, "k={k}: |delta(1)| = {}", at_certainty.abs());
        }
        let long_shot = unit_gamble_surprise(1e-6, Domain::Gain, &spec).unwrap();
        assert!(long_shot > 900.0, "k={k}: delta(1e-6) = {long_shot}");
    }

    let neutral = switch_probability(&Spec64::power(1.5, 1.0).unwrap(), Domain::Gain).unwrap();
    assert!((neutral - 0.5).abs() <= 1e-9, "neutral crossing at {neutral}");

    // Closed form for the crossing: 1/(1 + k^(1/(r-1))) = 1/7.25 here.
    let averse = switch_probability(&Spec64::power(1.5, 2.5).unwrap(), Domain::Gain).unwrap();
    assert!((averse - 1.0 / 7.25).abs() <= 1e-6, "averse crossing at {averse}");
}

#[test]
fn criterion_02_reflection_exact_only_without_loss_amplification() {
    let neutral = Spec64::power(1.5, 1.0).unwrap();
    for i in 1..=100 {
        let p = i as f64 / 100.0;
        let gain = unit_gamble_surprise(p, Domain::Gain, &neutral).unwrap();
        let loss = unit_gamble_surprise(p, Domain::Loss, &neutral).unwrap();
        assert!((loss + gain).abs() <= 1e-12, "p={p}: gain {gain}, loss {loss}");
    }

    // Amplified losses break the mirror: both frames of the even gamble
    // turn unattractive at once.
    let averse = Spec64::power(1.5, 2.5).unwrap();
    assert!(unit_gamble_surprise(0.5, Domain::Gain, &averse).unwrap() < 0.0);
    assert!(unit_gamble_surprise(0.5, Domain::Loss, &averse).unwrap() < 0.0);
}

#[test]
fn criterion_03_engine_matches_independent_rederivation() {
    let specs = [
        Spec64::power(1.5, 1.0).unwrap(),
        Spec64::power(2.0, 2.5).unwrap(),
        Spec64::power(3.0, 5.0).unwrap(),
    ];

    let mut rng = StdRng::seed_from_u64(20260816);
    for case in 0..100 {
        let tree = random_tree(&mut rng, 4);
        assert!(tree.depth() <= 4);
        for spec in &specs {
            let engine = surprise_tree(&tree, spec);
            let oracle = oracle_tree_value(&tree, spec);
            assert_relatively_close(engine, oracle, 1e-12, &format!("tree {case}"));
        }
    }

    // Two-step trees against the literal per-edge sum written out by hand.
    for case in 0..100 {
        let arm_count = rng.random_range(1..=4);
        let mut arms: Vec<(f64, Vec<(f64, f64)>)> = (0..arm_count)
            .map(|_| {
                let weight = rng.random_range(0.05..1.0);
                let sub = if rng.random_range(0..2) == 0 {
                    vec![(1.0, rng.random_range(-10.0..10.0))]
                } else {
                    let len = rng.random_range(2..=4);
                    let w: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
                    let t: f64 = w.iter().sum();
                    w.into_iter().map(|q| (q / t, rng.random_range(-10.0..10.0))).collect()
                };
                (weight, sub)
            })
            .collect();
        let total: f64 = arms.iter().map(|(w, _)| w).sum();
        for arm in &mut arms {
            arm.0 /= total;
        }

        let children = arms
            .iter()
            .map(|(p, sub)| {
                let tree = if sub.len() == 1 {
                    DecisionTree::leaf(sub[0].1)
                } else {
                    DecisionTree::branch(
                        sub.iter().map(|&(q, x)| (q, DecisionTree::leaf(x))).collect(),
                    )
                    .unwrap()
                };
                (*p, tree)
            })
            .collect();
        let tree = DecisionTree::branch(children).unwrap();

        for spec in &specs {
            let arm_mean = |sub: &[(f64, f64)]| sub.iter().map(|&(q, x)| q * x).sum::<f64>();
            let root_mean: f64 = arms.iter().map(|(p, sub)| p * arm_mean(sub)).sum();
            let mut literal = 0.0;
            for (p, sub) in &arms {
                let mean = arm_mean(sub);
                literal += p * spec.delta(mean - root_mean);
                if sub.len() > 1 {
                    for &(q, x) in sub {
                        literal += p * q * spec.delta(x - mean);
                    }
                }
            }
            let engine = surprise_tree(&tree, spec);
            assert_relatively_close(engine, literal, 1e-12, &format!("two-step tree {case}"));
        }
    }
}

#[test]
fn criterion_04_blackjack_never_rewards_the_aggressive_play() {
    let k_grid: Vec<f64> = GridKind::Fine.k_values();
    let r_grid: Vec<f64> = GridKind::Fine.r_values();

    let table = blackjack_16v10(0.23, 0.598).unwrap();
    let stand = table.option("stand").unwrap();
    let hit = table.option("hit").unwrap();
    for &k in &k_grid {
        for &r in &r_grid {
            let spec = Spec64::power(r, k).unwrap();
            let margin = surprise_tree(stand, &spec) - surprise_tree(hit, &spec);
            assert!(margin >= -1e-12, "stand vs hit at k={k} r={r}: margin {margin}");
        }
    }

    for &p2 in &[0.375, 0.5, 0.7, 0.9] {
        let offer = blackjack_insurance(p2, false).unwrap();
        let bet = offer.option("bet").unwrap();
        let no_bet = offer.option("no-bet").unwrap();
        for &k in &k_grid {
            for &r in &r_grid {
                let spec = Spec64::power(r, k).unwrap();
                let margin = surprise_tree(bet, &spec) - surprise_tree(no_bet, &spec);
                assert!(margin >= -1e-12, "insurance at p2={p2} k={k} r={r}: margin {margin}");
            }
        }
    }

    // Holding a natural, even money is a sure unit and wins the verdict.
    let special = blackjack_insurance(0.5, true).unwrap();
    let spec = Spec64::power(1.5, 2.5).unwrap();
    let outcome =
        preference(special.option("bet").unwrap(), special.option("no-bet").unwrap(), &spec);
    assert_eq!(outcome.verdict, Verdict::A);
}

#[test]
fn criterion_05_two_urn_gap_sign_pattern() {
    // Without loss amplification the two urns tie for any symmetric prior.
    let tent: Vec<f64> = {
        let raw: Vec<f64> = (0..15).map(|i| 1.0 + i.min(14 - i) as f64).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / sum).collect()
    };
    let mut rng = StdRng::seed_from_u64(7);
    let random_symmetric: Vec<f64> = {
        let half: Vec<f64> = (0..=10).map(|_| rng.random_range(0.1..10.0)).collect();
        let raw: Vec<f64> = (0..21).map(|i| half[i.min(20 - i)]).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / sum).collect()
    };
    let priors: [(usize, Option<Vec<f64>>); 3] =
        [(50, None), (7, Some(tent)), (10, Some(random_symmetric))];
    for (n, prior) in priors {
        let scenario = ellsberg_two_urns(n, prior).unwrap();
        for &r in &[1.3, 2.0, 3.5] {
            let spec = Spec64::power(r, 1.0).unwrap();
            let gap = surprise_tree(scenario.option("known").unwrap(), &spec)
                - surprise_tree(scenario.option("ambiguous").unwrap(), &spec);
            assert!(gap.abs() <= 1e-12, "n={n} r={r}: k=1 gap {gap}");
        }
    }

    // With k = 2 the uniform 101-state urn flips sign twice over r.
    let scenario = ellsberg_two_urns(50, None).unwrap();
    let known = scenario.option("known").unwrap();
    let ambiguous = scenario.option("ambiguous").unwrap();
    let gap = |r: f64| {
        let spec = Spec64::power(r, 2.0).unwrap();
        surprise_tree(known, &spec) - surprise_tree(ambiguous, &spec)
    };

    let positive: Vec<f64> = (0..=4)
        .map(|i| (11 + 2 * i) as f64 / 10.0)
        .chain((0..=17).map(|i| (26 + 2 * i) as f64 / 10.0))
        .collect();
    for r in positive {
        assert!(gap(r) > 0.0, "r={r}: gap {} not positive", gap(r));
    }
    let dip: Vec<f64> = (0..=8).map(|i| (205 + 5 * i) as f64 / 100.0).collect();
    assert!(dip.iter().any(|&r| gap(r) < 0.0), "no negative gap found between r=2.05 and r=2.45");

    // Pairing mirrored compositions collapses the gap to a pure
    // loss-amplification residue over the below-half states.
    for &r in &[1.5, 2.2, 4.0] {
        let spec = Spec64::power(r, 2.0).unwrap();
        let mut sum = 0.0;
        for i in 0..101 {
            let m = i as f64 / 100.0;
            if m < 0.5 {
                sum += (1.0 / 101.0)
                    * (spec.magnitude(0.5 - m)
                        + m * spec.magnitude(1.0 - m)
                        + (1.0 - m) * spec.magnitude(m)
                        - spec.magnitude(0.5));
            }
        }
        let identity = (spec.k() - 1.0) * sum;
        let actual = surprise_tree(known, &spec) - surprise_tree(ambiguous, &spec);
        assert!((actual - identity).abs() <= 1e-10, "r={r}: gap {actual} vs identity {identity}");
    }
}

#[test]
fn criterion_06_grouping_the_long_shot_lowers_its_value() {
    let grouped = allais_problem::<f64>(2, true).unwrap();
    let flat = allais_problem::<f64>(2, false).unwrap();
    let grouped_tree = grouped.option("option-2").unwrap();
    let flat_tree = flat.option("option-2").unwrap();
    for i in 0..=30 {
        let k = (10 + i) as f64 / 10.0;
        for j in 1..=20 {
            let r = (10 + j) as f64 / 10.0;
            let spec = Spec64::power(r, k).unwrap();
            let difference = surprise_tree(grouped_tree, &spec) - surprise_tree(flat_tree, &spec);
            assert!(difference < 0.0, "k={k} r={r}: grouped minus flat {difference}");
        }
    }

    // The frame decides the verdict at the same parameters.
    let spec = Spec64::power(1.5, 2.5).unwrap();
    let on_grouped =
        preference(grouped.option("option-1").unwrap(), grouped.option("option-2").unwrap(), &spec);
    assert_eq!(on_grouped.verdict, Verdict::A);
    let on_flat =
        preference(flat.option("option-1").unwrap(), flat.option("option-2").unwrap(), &spec);
    assert_eq!(on_flat.verdict, Verdict::B);

    let long_shot_pair = allais_problem::<f64>(1, false).unwrap();
    let spec = Spec64::power(1.5, 2.0).unwrap();
    let outcome = preference(
        long_shot_pair.option("option-1").unwrap(),
        long_shot_pair.option("option-2").unwrap(),
        &spec,
    );
    assert_eq!(outcome.verdict, Verdict::B);
}

#[test]
fn criterion_07_splitting_a_branch_flips_the_verdict() {
    let staged = birnbaum_problem::<f64>(1).unwrap();
    let flat = birnbaum_problem::<f64>(2).unwrap();

    // The shared option is the same lottery in both problems, so the values
    // must agree bit for bit.
    for &k in &[1.0, 1.5, 2.0, 3.0, 5.0] {
        for &r in &[1.1, 1.5, 2.0, 3.0, 4.0] {
            let spec = Spec64::power(r, k).unwrap();
            assert_eq!(
                surprise_tree(staged.option("option-1").unwrap(), &spec),
                surprise_tree(flat.option("option-1").unwrap(), &spec),
            );
        }
    }

    let spec = Spec64::power(2.0, 2.0).unwrap();
    let on_staged =
        preference(staged.option("option-1").unwrap(), staged.option("option-2").unwrap(), &spec);
    assert_eq!(on_staged.verdict, Verdict::B);
    let on_flat =
        preference(flat.option("option-1").unwrap(), flat.option("option-2").unwrap(), &spec);
    assert_eq!(on_flat.verdict, Verdict::A);
}

#[test]
fn criterion_08_shift_and_scale_invariance() {
    let specs = [
        Spec64::power(1.5, 1.0).unwrap(),
        Spec64::power(2.0, 2.5).unwrap(),
        Spec64::power(3.0, 5.0).unwrap(),
    ];
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..50 {
        let tree = random_tree(&mut rng, 4);
        for spec in &specs {
            let base = surprise_tree(&tree, spec);
            for &c in &[-100.0, -1.0, 0.5, 1000.0] {
                let shifted = surprise_tree(&tree.map_outcomes(|x| x + c), spec);
                assert!((shifted - base).abs() <= 1e-9, "shift {c}: {shifted} vs {base}");
            }
            let r = spec.exponent().unwrap();
            for &lambda in &[0.1, 0.5, 2.0, 7.0, 10.0] {
                let scaled = surprise_tree(&tree.map_outcomes(|x| lambda * x), spec);
                let target = lambda.powf(r) * base;
                assert!(
                    (scaled - target).abs() <= 1e-9 * target.abs().max(1.0),
                    "scale {lambda}: {scaled} vs {target}"
                );
            }
        }
    }

    // Scaling all outcomes by 7 leaves every grid verdict in place.
    let scenario = allais_problem::<f64>(2, true).unwrap();
    let mut scaled: Scenario64 = scenario.clone();
    for (_, tree) in &mut scaled.options {
        *tree = tree.map_outcomes(|x| 7.0 * x);
    }
    let k_grid: Vec<f64> = GridKind::Coarse.k_values();
    let r_grid: Vec<f64> = GridKind::Coarse.r_values();
    let labels = ("option-1", "option-2");
    let base_map = region_map(&scenario, labels, k_grid.clone(), r_grid.clone()).unwrap();
    let scaled_map = region_map(&scaled, labels, k_grid.clone(), r_grid.clone()).unwrap();
    let mut verdicts = std::collections::BTreeSet::new();
    for ik in 0..k_grid.len() {
        for ir in 0..r_grid.len() {
            let base = base_map.cells[ik][ir].verdict;
            assert_eq!(base, scaled_map.cells[ik][ir].verdict, "cell ({ik}, {ir})");
            verdicts.insert(base.letter());
        }
    }
    // Both regions appear on this grid, so the invariance is not vacuous.
    assert!(verdicts.contains(&'A') && verdicts.contains(&'B'), "verdicts: {verdicts:?}");
}

#[test]
fn criterion_09_ambiguity_aversion_screens() {
    let spec = Spec64::power(1.5, 2.0).unwrap();
    let small = ambiguity_conditions(&spec, 50, None).unwrap();
    let threshold = small.r_threshold.expect("uniform prior has a threshold");
    assert!((threshold - 4.81).abs() <= 0.01, "n=50 threshold {threshold}");
    let large = ambiguity_conditions(&spec, 1_000_000, None).unwrap();
    let threshold = large.r_threshold.expect("uniform prior has a threshold");
    assert!((threshold - 4.82).abs() <= 0.01, "n=1e6 threshold {threshold}");

    // Linear magnitude has zero curvature and sails through the mild screen.
    let line = SurpriseTable::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
    let linear = Spec64::custom(line, 2.0).unwrap();
    assert!(ambiguity_conditions(&linear, 50, None).unwrap().mild_holds);

    // z^1.5 has unbounded curvature at the origin; the witness sits on the
    // first grid step.
    assert!(!small.mild_holds);
    let witness = small.mild_witness.expect("failing screen names a witness");
    assert!(witness.m < 0.01, "witness at m = {}", witness.m);
    assert!(witness.second_derivative > witness.bound);
}

#[test]
fn criterion_10_binary_agrees_with_the_library() {
    let verify = surprise_binary(&["verify", "--grid", "coarse"]);
    assert_eq!(verify.status.code(), Some(0));

    let tree_path = format!("{}/../../trees/blackjack_hit.json", env!("CARGO_MANIFEST_DIR"));
    let eval = surprise_binary(&["eval", "--tree", &tree_path, "--r", "1.5", "--k", "2.5"]);
    assert_eq!(eval.status.code(), Some(0));
    let printed = String::from_utf8(eval.stdout).unwrap();
    let tree = parse_tree_file::<f64>(tree_path.as_ref()).unwrap();
    let expected = surprise_tree(&tree, &Spec64::power(1.5, 2.5).unwrap());
    assert_eq!(printed.trim_end(), full_precision(expected));

    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    for path in [&first, &second] {
        let run = surprise_binary(&["figure", "--id", "fig5", "--out", path.to_str().unwrap()]);
        assert_eq!(run.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}
