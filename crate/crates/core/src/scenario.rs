//! Canonical decision problems from the experimental literature, expressed as
//! labeled option trees ready for surprise evaluation.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::lottery::Lottery;
use crate::num::Real;
use crate::surprise::Domain;
use crate::tree::DecisionTree;

/// A named choice problem: two or more labeled option trees plus the
/// parameters and source they were built from.
#[derive(Debug, Clone)]
pub struct Scenario<S> {
    pub name: String,
    pub params: BTreeMap<String, S>,
    pub options: Vec<(String, DecisionTree<S>)>,
    pub citation: String,
}

impl<S: Real> Scenario<S> {
    pub fn option(&self, label: &str) -> Result<&DecisionTree<S>, Error> {
        self.options
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, t)| t)
            .ok_or_else(|| Error::UnknownOption { label: label.to_string() })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.options.iter().map(|(l, _)| l.as_str()).collect()
    }
}

fn param<S: Real>(name: &str, value: S) -> (String, S) {
    (name.to_string(), value)
}

fn flag<S: Real>(name: &str, on: bool) -> (String, S) {
    (name.to_string(), if on { S::one() } else { S::zero() })
}

/// Certain payoff versus a long-shot gamble at the same mean: keep xbar for
/// sure, or win xbar/p with probability p (outcomes mirrored in the loss
/// domain).
pub fn kahneman_gamble<S: Real>(p: S, xbar: S, domain: Domain) -> Result<Scenario<S>, Error> {
    if !(p > S::zero() && p <= S::one()) {
        return Err(Error::ParameterDomain {
            name: "p",
            reason: format!("must lie in (0, 1], got {}", p.as_f64()),
        });
    }
    if xbar == S::zero() || xbar.is_nan() {
        return Err(Error::ParameterDomain { name: "xbar", reason: "must be nonzero".into() });
    }
    let sign = match domain {
        Domain::Gain => S::one(),
        Domain::Loss => -S::one(),
    };
    let stake = sign * xbar;
    let certain = Lottery::certain(stake);
    let gamble = Lottery::new(vec![(stake / p, p), (S::zero(), S::one() - p)])?;
    Ok(Scenario {
        name: "kahneman".into(),
        params: BTreeMap::from([
            param("p", p),
            param("xbar", xbar),
            flag("loss", domain == Domain::Loss),
        ]),
        options: vec![
            ("certain".into(), DecisionTree::from_lottery(&certain)),
            ("gamble".into(), DecisionTree::from_lottery(&gamble)),
        ],
        citation: "Kahneman & Tversky (1979): certainty-effect gambles at equal expected value"
            .into(),
    })
}

/// Blackjack holding 16 against a dealer 10: stand (resolve at once on the
/// dealer's hidden card) or hit (bust now, or survive and resolve later).
/// p0 is the chance of winning by standing, p2 the chance of winning after a
/// safe hit; the bust probability is set so both options share one mean.
pub fn blackjack_16v10<S: Real>(p0: S, p2: S) -> Result<Scenario<S>, Error> {
    if !(p0 > S::zero() && p0 < S::one()) {
        return Err(Error::ParameterDomain {
            name: "p0",
            reason: format!("must lie in (0, 1), got {}", p0.as_f64()),
        });
    }
    if !(p2 > S::zero() && p2 < S::one()) {
        return Err(Error::ParameterDomain {
            name: "p2",
            reason: format!("must lie in (0, 1), got {}", p2.as_f64()),
        });
    }
    if !(p0 < p2) {
        return Err(Error::ParameterDomain {
            name: "p0",
            reason: format!(
                "must be below p2 so the survive probability p0/p2 stays in (0, 1), got p0 = {}, p2 = {}",
                p0.as_f64(),
                p2.as_f64()
            ),
        });
    }
    let one = S::one();
    let p1 = p0 / p2;
    let stand = Lottery::new(vec![(one, p0), (-one, one - p0)])?;
    let draw = DecisionTree::branch(vec![
        (p2, DecisionTree::leaf(one)),
        (one - p2, DecisionTree::leaf(-one)),
    ])?;
    let hit = DecisionTree::branch(vec![(one - p1, DecisionTree::leaf(-one)), (p1, draw)])?;
    Ok(Scenario {
        name: "blackjack-16v10".into(),
        params: BTreeMap::from([param("p0", p0), param("p2", p2)]),
        options: vec![("stand".into(), DecisionTree::from_lottery(&stand)), ("hit".into(), hit)],
        citation: "Bennis (2004): standing on 16 against a dealer 10".into(),
    })
}

/// Insurance side bet against a dealer ace, at half the unit main bet and
/// 2:1 payout. The dealer holds blackjack with probability 1/3; otherwise the
/// main bet wins with probability p2. `player_has_blackjack` switches to the
/// even-money special case where the side bet locks in a certain unit win.
pub fn blackjack_insurance<S: Real>(
    p2: S,
    player_has_blackjack: bool,
) -> Result<Scenario<S>, Error> {
    if !(p2 > S::zero() && p2 < S::one()) {
        return Err(Error::ParameterDomain {
            name: "p2",
            reason: format!("must lie in (0, 1), got {}", p2.as_f64()),
        });
    }
    let one = S::one();
    let third = one / S::of(3.0);
    let (bet, no_bet) = if player_has_blackjack {
        // Insuring guarantees +1; declining risks the push on a dealer blackjack.
        let bet = DecisionTree::from_lottery(&Lottery::certain(one));
        let no_bet = DecisionTree::from_lottery(&Lottery::new(vec![
            (S::of(1.5), one - third),
            (S::zero(), third),
        ])?);
        (bet, no_bet)
    } else {
        let bet_live = DecisionTree::branch(vec![
            (p2, DecisionTree::leaf(S::of(0.5))),
            (one - p2, DecisionTree::leaf(S::of(-1.5))),
        ])?;
        let bet = DecisionTree::branch(vec![
            (third, DecisionTree::leaf(S::zero())),
            (one - third, bet_live),
        ])?;
        let no_bet_live = DecisionTree::branch(vec![
            (p2, DecisionTree::leaf(one)),
            (one - p2, DecisionTree::leaf(-one)),
        ])?;
        let no_bet = DecisionTree::branch(vec![
            (third, DecisionTree::leaf(-one)),
            (one - third, no_bet_live),
        ])?;
        (bet, no_bet)
    };
    Ok(Scenario {
        name: "blackjack-insurance".into(),
        params: BTreeMap::from([param("p2", p2), flag("player-blackjack", player_has_blackjack)]),
        options: vec![("bet".into(), bet), ("no-bet".into(), no_bet)],
        citation: "Standard blackjack insurance offer against a dealer ace".into(),
    })
}

/// Two-urn choice: bet on a draw from an urn with a known half-half mix, or
/// from an urn whose composition m runs over {0, 1/2n, ..., 1} under a
/// symmetric prior (uniform when none is given).
pub fn ellsberg_two_urns<S: Real>(n: usize, prior: Option<Vec<S>>) -> Result<Scenario<S>, Error> {
    if n == 0 {
        return Err(Error::ParameterDomain { name: "n", reason: "must be at least 1".into() });
    }
    let states = 2 * n + 1;
    let prior = match prior {
        Some(weights) => {
            if weights.len() != states {
                return Err(Error::PriorLength { expected: states, got: weights.len() });
            }
            let tol = S::of(1e-12);
            for i in 0..=states / 2 {
                let j = states - 1 - i;
                if (weights[i] - weights[j]).abs() > tol {
                    return Err(Error::AsymmetricPrior {
                        low: i,
                        high: j,
                        left: weights[i].as_f64(),
                        right: weights[j].as_f64(),
                    });
                }
            }
            weights
        }
        None => vec![S::one() / S::of(states as f64); states],
    };

    let one = S::one();
    let half = S::of(0.5);
    let known = Lottery::new(vec![(one, half), (S::zero(), half)])?;

    let mut children = Vec::with_capacity(states);
    for (i, &weight) in prior.iter().enumerate() {
        let m = S::of(i as f64) / S::of((2 * n) as f64);
        // The extreme compositions resolve in one step; the rest reveal the
        // composition first and the draw second.
        let subtree = if i == 0 {
            DecisionTree::leaf(S::zero())
        } else if i == 2 * n {
            DecisionTree::leaf(one)
        } else {
            DecisionTree::branch(vec![
                (m, DecisionTree::leaf(one)),
                (one - m, DecisionTree::leaf(S::zero())),
            ])?
        };
        children.push((weight, subtree));
    }
    let ambiguous = DecisionTree::branch(children)?;

    Ok(Scenario {
        name: "ellsberg".into(),
        params: BTreeMap::from([param("n", S::of(n as f64))]),
        options: vec![
            ("known".into(), DecisionTree::from_lottery(&known)),
            ("ambiguous".into(), ambiguous),
        ],
        citation: "Ellsberg (1961): two-urn choice between known and unknown mixes".into(),
    })
}

/// Common-consequence pair. Problem 1: 1 with probability 0.11 vs 5 with
/// probability 0.1. Problem 2: certain 1 vs {0: 0.01, 1: 0.89, 5: 0.1},
/// optionally with the two improbable outcomes framed as one sub-branch.
pub fn allais_problem<S: Real>(problem: u8, grouped: bool) -> Result<Scenario<S>, Error> {
    let one = S::one();
    let five = S::of(5.0);
    match problem {
        1 => Ok(Scenario {
            name: "allais-1".into(),
            params: BTreeMap::new(),
            options: vec![
                (
                    "option-1".into(),
                    DecisionTree::from_lottery(&Lottery::new(vec![
                        (S::zero(), S::of(0.89)),
                        (one, S::of(0.11)),
                    ])?),
                ),
                (
                    "option-2".into(),
                    DecisionTree::from_lottery(&Lottery::new(vec![
                        (S::zero(), S::of(0.9)),
                        (five, S::of(0.1)),
                    ])?),
                ),
            ],
            citation: "Allais (1953): common-consequence paradox, long-shot pair".into(),
        }),
        2 => {
            let flat = Lottery::new(vec![
                (S::zero(), S::of(0.01)),
                (one, S::of(0.89)),
                (five, S::of(0.1)),
            ])?;
            let option_2 = if grouped {
                group_improbable(&flat, S::of(DEFAULT_GROUPING_THRESHOLD))?
            } else {
                DecisionTree::from_lottery(&flat)
            };
            Ok(Scenario {
                name: "allais-2".into(),
                params: BTreeMap::from([flag("grouping", grouped)]),
                options: vec![
                    ("option-1".into(), DecisionTree::from_lottery(&Lottery::certain(one))),
                    ("option-2".into(), option_2),
                ],
                citation: "Allais (1953): common-consequence paradox, certainty pair".into(),
            })
        }
        other => Err(Error::ParameterDomain {
            name: "problem",
            reason: format!("must be 1 or 2, got {other}"),
        }),
    }
}

/// Framing pair on near-identical gambles. Problem 1 pits the flat
/// {100: 0.85, 50: 0.15} against a staged {100: 0.85, then 100 or 7}; Problem
/// 2 keeps the first option and flattens the second to {100: 0.95, 7: 0.05}.
pub fn birnbaum_problem<S: Real>(problem: u8) -> Result<Scenario<S>, Error> {
    let hundred = S::of(100.0);
    let fifty = S::of(50.0);
    let seven = S::of(7.0);
    let option_1 = DecisionTree::from_lottery(&Lottery::new(vec![
        (hundred, S::of(0.85)),
        (fifty, S::of(0.15)),
    ])?);
    match problem {
        1 => {
            let group = DecisionTree::branch(vec![
                (S::of(2.0) / S::of(3.0), DecisionTree::leaf(hundred)),
                (S::one() / S::of(3.0), DecisionTree::leaf(seven)),
            ])?;
            let option_2 = DecisionTree::branch(vec![
                (S::of(0.85), DecisionTree::leaf(hundred)),
                (S::of(0.15), group),
            ])?;
            Ok(Scenario {
                name: "birnbaum-1".into(),
                params: BTreeMap::new(),
                options: vec![("option-1".into(), option_1), ("option-2".into(), option_2)],
                citation: "Birnbaum (2008): branch-splitting pair, staged form".into(),
            })
        }
        2 => {
            let option_2 = DecisionTree::from_lottery(&Lottery::new(vec![
                (hundred, S::of(0.95)),
                (seven, S::of(0.05)),
            ])?);
            Ok(Scenario {
                name: "birnbaum-2".into(),
                params: BTreeMap::new(),
                options: vec![("option-1".into(), option_1), ("option-2".into(), option_2)],
                citation: "Birnbaum (2008): branch-splitting pair, flat form".into(),
            })
        }
        other => Err(Error::ParameterDomain {
            name: "problem",
            reason: format!("must be 1 or 2, got {other}"),
        }),
    }
}

/// Threshold below which outcomes count as improbable for grouping.
pub const DEFAULT_GROUPING_THRESHOLD: f64 = 0.1;

/// Reframes a flat lottery by pooling every entry with probability at or
/// below the threshold into one conditional sub-branch (original entry order
/// preserved). A pooled set with a single distinct outcome collapses to a
/// leaf. If no entry stays above the threshold the flat tree is returned.
pub fn group_improbable<S: Real>(
    lottery: &Lottery<S>,
    threshold: S,
) -> Result<DecisionTree<S>, Error> {
    if !(threshold > S::zero() && threshold < S::one()) {
        return Err(Error::ParameterDomain {
            name: "threshold",
            reason: format!("must lie in (0, 1), got {}", threshold.as_f64()),
        });
    }
    let live: Vec<(S, S)> =
        lottery.entries().iter().copied().filter(|&(_, p)| p > S::zero()).collect();
    let improbable: Vec<(S, S)> = live.iter().copied().filter(|&(_, p)| p <= threshold).collect();
    let probable: Vec<(S, S)> = live.iter().copied().filter(|&(_, p)| p > threshold).collect();
    if probable.is_empty() || improbable.is_empty() {
        return Ok(DecisionTree::from_lottery(lottery));
    }

    let pooled = improbable.iter().fold(S::zero(), |acc, &(_, p)| acc + p);
    let all_same = improbable.iter().all(|&(x, _)| x == improbable[0].0);
    let group = if all_same {
        DecisionTree::leaf(improbable[0].0)
    } else {
        DecisionTree::branch(
            improbable.iter().map(|&(x, p)| (p / pooled, DecisionTree::leaf(x))).collect(),
        )?
    };

    let mut children: Vec<(S, DecisionTree<S>)> =
        probable.into_iter().map(|(x, p)| (p, DecisionTree::leaf(x))).collect();
    children.push((pooled, group));
    DecisionTree::branch(children)
}

/// Names accepted by `build_scenario` and the command line.
pub fn scenario_names() -> &'static [&'static str] {
    &[
        "kahneman",
        "blackjack-16v10",
        "blackjack-insurance",
        "ellsberg",
        "allais-1",
        "allais-2",
        "birnbaum-1",
        "birnbaum-2",
    ]
}

fn as_flag(key: &'static str, value: f64) -> Result<bool, Error> {
    if value == 0.0 {
        Ok(false)
    } else if value == 1.0 {
        Ok(true)
    } else {
        Err(Error::ParameterDomain { name: key, reason: format!("must be 0 or 1, got {value}") })
    }
}

/// Builds a named scenario, starting from its documented defaults and
/// applying the given overrides.
pub fn build_scenario<S: Real>(
    name: &str,
    overrides: &BTreeMap<String, f64>,
) -> Result<Scenario<S>, Error> {
    let allowed: &[&str] = match name {
        "kahneman" => &["p", "xbar", "loss"],
        "blackjack-16v10" => &["p0", "p2"],
        "blackjack-insurance" => &["p2", "player-blackjack"],
        "ellsberg" => &["n"],
        "allais-1" => &[],
        "allais-2" => &["grouping"],
        "birnbaum-1" | "birnbaum-2" => &[],
        _ => return Err(Error::UnknownScenario { name: name.to_string() }),
    };
    for key in overrides.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::UnknownParameter { key: key.clone() });
        }
    }
    let get = |key: &str, default: f64| overrides.get(key).copied().unwrap_or(default);

    match name {
        "kahneman" => {
            let domain =
                if as_flag("loss", get("loss", 0.0))? { Domain::Loss } else { Domain::Gain };
            kahneman_gamble(S::of(get("p", 0.5)), S::of(get("xbar", 1.0)), domain)
        }
        "blackjack-16v10" => blackjack_16v10(S::of(get("p0", 0.23)), S::of(get("p2", 0.598))),
        "blackjack-insurance" => blackjack_insurance(
            S::of(get("p2", 0.5)),
            as_flag("player-blackjack", get("player-blackjack", 0.0))?,
        ),
        "ellsberg" => {
            let n = get("n", 50.0);
            if n < 1.0 || n.fract() != 0.0 {
                return Err(Error::ParameterDomain {
                    name: "n",
                    reason: format!("must be a positive integer, got {n}"),
                });
            }
            ellsberg_two_urns(n as usize, None)
        }
        "allais-1" => allais_problem(1, false),
        "allais-2" => allais_problem(2, as_flag("grouping", get("grouping", 1.0))?),
        "birnbaum-1" => birnbaum_problem(1),
        "birnbaum-2" => birnbaum_problem(2),
        _ => unreachable!("name validated above"),
    }
}
