//! Comparative analysis: pairwise preferences, indifference points, parameter
//! sweeps, and the ambiguity-aversion conditions for the two-urn problem.

use crate::error::Error;
use crate::num::Real;
use crate::scenario::{ellsberg_two_urns, Scenario};
use crate::surprise::{Domain, SurpriseFamily, SurpriseSpec};
use crate::tree::{annotate, surprise_tree, DecisionTree};

/// Which of two options carries the higher anticipated surprise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    A,
    B,
    Indifferent,
}

impl Verdict {
    /// Single-letter form used in sweep tables.
    pub fn letter(self) -> char {
        match self {
            Verdict::A => 'A',
            Verdict::B => 'B',
            Verdict::Indifferent => 'I',
        }
    }
}

/// Pairwise comparison of two options under one surprise response.
#[derive(Debug, Clone, PartialEq)]
pub struct Preference<S> {
    pub delta_a: S,
    pub delta_b: S,
    pub expected_a: S,
    pub expected_b: S,
    pub verdict: Verdict,
    /// Absolute half-width of the indifference band that was applied.
    pub tolerance: S,
}

/// Scale factor for the default indifference band.
pub const INDIFFERENCE_RELATIVE_TOLERANCE: f64 = 1e-12;

/// Compares two options with an explicit indifference half-width.
pub fn preference_with_tolerance<S: Real>(
    a: &DecisionTree<S>,
    b: &DecisionTree<S>,
    spec: &SurpriseSpec<S>,
    tolerance: S,
) -> Preference<S> {
    let delta_a = surprise_tree(a, spec);
    let delta_b = surprise_tree(b, spec);
    let verdict = if (delta_a - delta_b).abs() <= tolerance {
        Verdict::Indifferent
    } else if delta_a > delta_b {
        Verdict::A
    } else {
        Verdict::B
    };
    Preference {
        delta_a,
        delta_b,
        expected_a: annotate(a).expected_value(),
        expected_b: annotate(b).expected_value(),
        verdict,
        tolerance,
    }
}

/// Compares two options; the indifference band scales with the surprise
/// magnitudes so verdicts survive outcome rescaling.
pub fn preference<S: Real>(
    a: &DecisionTree<S>,
    b: &DecisionTree<S>,
    spec: &SurpriseSpec<S>,
) -> Preference<S> {
    let delta_a = surprise_tree(a, spec);
    let delta_b = surprise_tree(b, spec);
    let scale = S::one().max(delta_a.abs()).max(delta_b.abs());
    preference_with_tolerance(a, b, spec, S::of(INDIFFERENCE_RELATIVE_TOLERANCE) * scale)
}

/// Surprise of the unit-mean long-shot gamble: win 1/p (gain) or lose 1/p
/// (loss) with probability p, else 0.
pub fn unit_gamble_surprise<S: Real>(
    p: S,
    domain: Domain,
    spec: &SurpriseSpec<S>,
) -> Result<S, Error> {
    if !(p > S::zero() && p <= S::one()) {
        return Err(Error::ParameterDomain {
            name: "p",
            reason: format!("must lie in (0, 1], got {}", p.as_f64()),
        });
    }
    let stake = match domain {
        Domain::Gain => S::one(),
        Domain::Loss => -S::one(),
    };
    let lottery = crate::lottery::Lottery::new(vec![(stake / p, p), (S::zero(), S::one() - p)])?;
    Ok(crate::lottery::surprise_flat(&lottery, spec))
}

/// Bisection bracket for the indifference probability.
pub const SWITCH_BRACKET_EPSILON: f64 = 1e-9;
/// Bisection stops once the bracket is this narrow...
pub const SWITCH_WIDTH_TOLERANCE: f64 = 1e-9;
/// ...and the surprise at the midpoint is this small.
pub const SWITCH_DELTA_TOLERANCE: f64 = 1e-10;

/// Probability at which the long-shot gamble's surprise changes sign, found
/// by bisection on (0, 1). Fails when no sign change exists on the bracket.
pub fn switch_probability<S: Real>(spec: &SurpriseSpec<S>, domain: Domain) -> Result<S, Error> {
    let eval = |p: S| unit_gamble_surprise(p, domain, spec);
    let mut lo = S::of(SWITCH_BRACKET_EPSILON);
    let mut hi = S::one() - S::of(SWITCH_BRACKET_EPSILON);
    let mut d_lo = eval(lo)?;
    let d_hi = eval(hi)?;
    if d_lo == S::zero() {
        return Ok(lo);
    }
    if d_hi == S::zero() {
        return Ok(hi);
    }
    if (d_lo > S::zero()) == (d_hi > S::zero()) {
        return Err(Error::NoSignChange { lo: lo.as_f64(), hi: hi.as_f64() });
    }

    let width_tol = S::of(SWITCH_WIDTH_TOLERANCE);
    let delta_tol = S::of(SWITCH_DELTA_TOLERANCE);
    let half = S::of(0.5);
    for _ in 0..200 {
        let mid = (lo + hi) * half;
        if mid == lo || mid == hi {
            break;
        }
        let d_mid = eval(mid)?;
        if d_mid == S::zero() || (hi - lo < width_tol && d_mid.abs() < delta_tol) {
            return Ok(mid);
        }
        if (d_mid > S::zero()) == (d_lo > S::zero()) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::BisectionStalled)
}

/// Preference verdicts over a (k, r) parameter grid for one option pair.
#[derive(Debug, Clone)]
pub struct RegionMap<S> {
    pub option_a: String,
    pub option_b: String,
    pub k_grid: Vec<S>,
    pub r_grid: Vec<S>,
    /// `cells[i][j]` compares the pair under `power(r_grid[j])` with `k_grid[i]`.
    pub cells: Vec<Vec<Preference<S>>>,
}

fn check_grid<S: Real>(grid: &[S]) -> Result<(), Error> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadGrid);
    }
    Ok(())
}

/// Evaluates one option pair of a scenario across a power-family grid.
pub fn region_map<S: Real>(
    scenario: &Scenario<S>,
    option_pair: (&str, &str),
    k_grid: Vec<S>,
    r_grid: Vec<S>,
) -> Result<RegionMap<S>, Error> {
    check_grid(&k_grid)?;
    check_grid(&r_grid)?;
    let a = scenario.option(option_pair.0)?;
    let b = scenario.option(option_pair.1)?;
    let mut cells = Vec::with_capacity(k_grid.len());
    for &k in &k_grid {
        let mut row = Vec::with_capacity(r_grid.len());
        for &r in &r_grid {
            let spec = SurpriseSpec::power(r, k)?;
            row.push(preference(a, b, &spec));
        }
        cells.push(row);
    }
    Ok(RegionMap {
        option_a: option_pair.0.to_string(),
        option_b: option_pair.1.to_string(),
        k_grid,
        r_grid,
        cells,
    })
}

/// Known-urn minus ambiguous-urn surprise as a function of the exponent r,
/// at fixed k, for the two-urn problem (uniform prior unless given).
pub fn ellsberg_curve<S: Real>(
    n: usize,
    k: S,
    r_grid: &[S],
    prior: Option<Vec<S>>,
) -> Result<Vec<(S, S)>, Error> {
    check_grid(r_grid)?;
    let scenario = ellsberg_two_urns(n, prior)?;
    let known = scenario.option("known")?;
    let ambiguous = scenario.option("ambiguous")?;
    r_grid
        .iter()
        .map(|&r| {
            let spec = SurpriseSpec::power(r, k)?;
            Ok((r, surprise_tree(known, &spec) - surprise_tree(ambiguous, &spec)))
        })
        .collect()
}

/// Grid point where the curvature screen failed.
#[derive(Debug, Clone, PartialEq)]
pub struct MildWitness<S> {
    pub m: S,
    pub second_derivative: S,
    /// The bound that was exceeded: 1.5 times the first derivative.
    pub bound: S,
}

/// Outcome of the ambiguity-aversion screens for the two-urn problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport<S> {
    /// Curvature stays below 1.5x slope across composition deviations:
    /// enough for the known urn to win at every composition separately.
    pub mild_holds: bool,
    pub mild_witness: Option<MildWitness<S>>,
    /// Prior-averaged sufficient condition mu0 * f(1 - mu1) > f(1/2).
    pub strong_holds: bool,
    pub mu0: S,
    pub mu1: S,
    /// Exponent above which the strong condition holds for the power family
    /// under a uniform prior; None otherwise.
    pub r_threshold: Option<S>,
}

/// Step of the composition grid the mild screen runs on.
pub const MILD_GRID_STEP: f64 = 1e-3;
/// Central-difference step for derivatives of custom magnitude functions.
pub const DERIVATIVE_STEP: f64 = 1e-5;

fn magnitude_derivatives<S: Real>(spec: &SurpriseSpec<S>, m: S) -> (S, S) {
    match spec.family() {
        SurpriseFamily::Power { exponent } => {
            let r = *exponent;
            (r * m.powf(r - S::one()), r * (r - S::one()) * m.powf(r - S::of(2.0)))
        }
        SurpriseFamily::Custom(_) => {
            let h = S::of(DERIVATIVE_STEP);
            let up = spec.magnitude(m + h);
            let mid = spec.magnitude(m);
            let down = spec.magnitude(m - h);
            ((up - down) / (h + h), (up - mid - mid + down) / (h * h))
        }
    }
}

/// Screens the surprise magnitude function for the two ambiguity-aversion
/// conditions at urn size n (uniform prior unless given).
pub fn ambiguity_conditions<S: Real>(
    spec: &SurpriseSpec<S>,
    n: usize,
    prior: Option<Vec<S>>,
) -> Result<ConditionReport<S>, Error> {
    if n == 0 {
        return Err(Error::ParameterDomain { name: "n", reason: "must be at least 1".into() });
    }
    let states = 2 * n + 1;
    let uniform = prior.is_none();
    let prior = match prior {
        Some(weights) => {
            // Reuse the scenario constructor's validation.
            ellsberg_two_urns(n, Some(weights.clone()))?;
            weights
        }
        None => vec![S::one() / S::of(states as f64); states],
    };

    // Mild screen: f''(m) <= 1.5 f'(m) on a dense grid of deviations.
    let mut mild_witness: Option<MildWitness<S>> = None;
    let bound_factor = S::of(1.5);
    let mut i = 1usize;
    loop {
        let m = S::of(i as f64 * MILD_GRID_STEP);
        if !(m < S::of(0.5)) {
            break;
        }
        let (first, second) = magnitude_derivatives(spec, m);
        let bound = bound_factor * first;
        if second > bound {
            let worse = match &mild_witness {
                Some(w) => second - bound > w.second_derivative - w.bound,
                None => true,
            };
            if worse {
                mild_witness = Some(MildWitness { m, second_derivative: second, bound });
            }
        }
        i += 1;
    }

    // Strong screen: conditional composition moments below the midpoint.
    let half = S::of(0.5);
    let mut s0 = S::zero();
    let mut s1 = S::zero();
    let mut s2 = S::zero();
    for (idx, &weight) in prior.iter().enumerate() {
        let m = S::of(idx as f64) / S::of((2 * n) as f64);
        if m < half {
            s0 = s0 + weight;
            s1 = s1 + weight * m;
            s2 = s2 + weight * m * m;
        }
    }
    // Guard degenerate priors whose below-midpoint mass sits entirely at 0.
    let mu0 = if s0 > S::zero() { s1 / s0 } else { S::zero() };
    let mu1 = if s1 > S::zero() { s2 / s1 } else { S::zero() };
    let strong_holds = mu0 * spec.magnitude(S::one() - mu1) > spec.magnitude(half);

    let r_threshold = if uniform && matches!(spec.family(), SurpriseFamily::Power { .. }) && n >= 2
    {
        let nf = n as f64;
        Some(S::of((4.0 * nf / (nf - 1.0)).ln() / ((4.0 * nf + 1.0) / (3.0 * nf)).ln()))
    } else {
        None
    };

    Ok(ConditionReport {
        mild_holds: mild_witness.is_none(),
        mild_witness,
        strong_holds,
        mu0,
        mu1,
        r_threshold,
    })
}
