//! Independent evaluators used to cross-check the main engine. These walk
//! trees by a different route on purpose: expectations are recomputed on the
//! fly per node via recursion, trajectories are enumerated explicitly, and
//! each distinct edge is visited exactly once through a visited set.

use std::collections::HashSet;

use crate::num::Real;
use crate::surprise::SurpriseSpec;
use crate::tree::DecisionTree;

fn expectation<S: Real>(tree: &DecisionTree<S>) -> S {
    match tree.outcome() {
        Some(x) => x,
        None => tree.children().iter().map(|(p, child)| *p * expectation(child)).sum(),
    }
}

fn walk<S: Real>(
    tree: &DecisionTree<S>,
    spec: &SurpriseSpec<S>,
    path: &mut Vec<usize>,
    path_probability: S,
    seen: &mut HashSet<Vec<usize>>,
    total: &mut S,
) {
    let here = expectation(tree);
    for (index, (p, child)) in tree.children().iter().enumerate() {
        path.push(index);
        if seen.insert(path.clone()) {
            *total = *total + path_probability * *p * spec.delta(expectation(child) - here);
        }
        walk(child, spec, path, path_probability * *p, seen, total);
        path.pop();
    }
}

/// Reference value for a tree's anticipated surprise, computed without the
/// engine's annotation pass.
pub fn oracle_tree_value<S: Real>(tree: &DecisionTree<S>, spec: &SurpriseSpec<S>) -> S {
    let mut total = S::zero();
    let mut seen = HashSet::new();
    walk(tree, spec, &mut Vec::new(), S::one(), &mut seen, &mut total);
    total
}

/// Verdict of a numerical convexity scan over one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport<S> {
    pub convex: bool,
    /// Most negative centered second difference found, zero when none is.
    pub worst_violation: S,
    /// Triple (z0, z1, z2) realizing the worst violation.
    pub witness: Option<(S, S, S)>,
}

/// Slack granted to second differences before a scan counts as a violation.
pub const CONVEXITY_SCAN_TOLERANCE: f64 = 1e-9;

/// Scans a function's centered second differences on a uniform grid.
pub fn convexity_probe<S: Real>(
    f: impl Fn(S) -> S,
    interval: (S, S),
    samples: usize,
) -> ConvexityReport<S> {
    assert!(samples >= 3, "need at least three samples");
    let (lo, hi) = interval;
    assert!(hi > lo, "empty interval");
    let step = (hi - lo) / S::of((samples - 1) as f64);
    let mut report = ConvexityReport { convex: true, worst_violation: S::zero(), witness: None };
    for i in 0..samples - 2 {
        let z0 = lo + step * S::of(i as f64);
        let z1 = z0 + step;
        let z2 = z1 + step;
        let second = f(z2) - f(z1) - f(z1) + f(z0);
        if second < -S::of(CONVEXITY_SCAN_TOLERANCE) && second < report.worst_violation {
            report.convex = false;
            report.worst_violation = second;
            report.witness = Some((z0, z1, z2));
        }
    }
    report
}
