//! Flat lotteries: outcome/probability pairs resolved in a single step.

use crate::error::{Error, PROBABILITY_SUM_TOLERANCE};
use crate::num::Real;
use crate::surprise::SurpriseSpec;

/// A single-step gamble: outcomes with probabilities summing to 1 (within 1e-9).
#[derive(Debug, Clone, PartialEq)]
pub struct Lottery<S> {
    entries: Vec<(S, S)>,
}

pub(crate) fn check_probability<S: Real>(p: S) -> Result<(), Error> {
    if p < S::zero() || p.is_nan() {
        return Err(Error::NegativeProbability { p: p.as_f64() });
    }
    if p > S::one() {
        return Err(Error::ProbabilityAboveOne { p: p.as_f64() });
    }
    Ok(())
}

pub(crate) fn check_probability_sum<S: Real>(sum: S) -> Result<(), Error> {
    if (sum - S::one()).abs() > S::of(PROBABILITY_SUM_TOLERANCE) {
        return Err(Error::ProbabilitySum { sum: sum.as_f64() });
    }
    Ok(())
}

impl<S: Real> Lottery<S> {
    /// Builds a lottery from (outcome, probability) pairs.
    pub fn new(entries: Vec<(S, S)>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::EmptyLottery);
        }
        let mut sum = S::zero();
        for &(_, p) in &entries {
            check_probability(p)?;
            sum = sum + p;
        }
        check_probability_sum(sum)?;
        Ok(Self { entries })
    }

    /// A lottery paying `outcome` with certainty.
    pub fn certain(outcome: S) -> Self {
        Self { entries: vec![(outcome, S::one())] }
    }

    pub fn entries(&self) -> &[(S, S)] {
        &self.entries
    }

    /// Probability-weighted mean outcome.
    pub fn expected_value(&self) -> S {
        self.entries.iter().fold(S::zero(), |acc, &(x, p)| acc + p * x)
    }
}

/// Anticipated surprise of a flat lottery: the probability-weighted surprise
/// of each outcome's deviation from the lottery's own expected value.
pub fn surprise_flat<S: Real>(lottery: &Lottery<S>, spec: &SurpriseSpec<S>) -> S {
    let ev = lottery.expected_value();
    lottery.entries().iter().fold(S::zero(), |acc, &(x, p)| acc + p * spec.delta(x - ev))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(r: f64, k: f64) -> SurpriseSpec<f64> {
        SurpriseSpec::power(r, k).unwrap()
    }

    #[test]
    fn expected_value_examples() {
        assert_eq!(Lottery::certain(5.0).expected_value(), 5.0);
        let even = Lottery::new(vec![(2.0, 0.5), (0.0, 0.5)]).unwrap();
        assert_eq!(even.expected_value(), 1.0);
        let allais: Lottery<f64> =
            Lottery::new(vec![(0.0, 0.01), (1.0, 0.89), (5.0, 0.1)]).unwrap();
        assert!((allais.expected_value() - 1.39).abs() < 1e-12);
    }

    #[test]
    fn certain_lottery_has_zero_surprise() {
        for (r, k) in [(1.5, 1.0), (2.0, 2.5), (4.0, 5.0)] {
            assert_eq!(surprise_flat(&Lottery::certain(3.0), &power(r, k)), 0.0);
        }
    }

    #[test]
    fn symmetric_gamble_is_neutral_without_loss_amplification() {
        // Win 2 or 0 with even odds: deviations +-1 cancel exactly at k = 1.
        let lottery = Lottery::new(vec![(2.0, 0.5), (0.0, 0.5)]).unwrap();
        assert_eq!(surprise_flat(&lottery, &power(1.5, 1.0)), 0.0);
        assert!(surprise_flat(&lottery, &power(1.5, 2.5)) < 0.0);
    }

    #[test]
    fn long_shot_gamble_value_matches_hand_formula() {
        // Win 1/p with probability p, else 0: surprise is p*f(1/p - 1) - (1-p)*k*f(1).
        let p = 0.25_f64;
        let lottery = Lottery::new(vec![(1.0 / p, p), (0.0, 1.0 - p)]).unwrap();
        let got = surprise_flat(&lottery, &power(1.5, 1.0));
        let hand = 0.25 * 3.0_f64.powf(1.5) - 0.75;
        assert!((got - hand).abs() < 1e-12);
        assert!((got - 0.549038).abs() < 1e-6);
    }

    #[test]
    fn malformed_lotteries_are_rejected() {
        assert!(matches!(Lottery::<f64>::new(vec![]), Err(Error::EmptyLottery)));
        assert!(matches!(
            Lottery::new(vec![(1.0, -0.1), (0.0, 1.1)]),
            Err(Error::NegativeProbability { .. })
        ));
        assert!(matches!(
            Lottery::new(vec![(1.0, 0.5), (0.0, 0.48)]),
            Err(Error::ProbabilitySum { .. })
        ));
        assert!(Lottery::new(vec![(1.0, 1.2)]).is_err());
    }

    #[test]
    fn sum_within_tolerance_is_accepted() {
        assert!(Lottery::new(vec![(1.0, 0.5), (0.0, 0.5 + 5e-10)]).is_ok());
    }
}
