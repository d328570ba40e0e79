//! The surprise kernel: a convex gauge for deviations from a reference point,
//! with losses amplified by a constant factor.

use crate::error::Error;
use crate::num::Real;

/// Sign convention for a family of gambles: outcomes above or below zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Gain,
    Loss,
}

/// Piecewise-linear table for a custom surprise magnitude function.
///
/// Points are (z, f(z)) with strictly ascending z starting at (0, 0); values
/// must be non-decreasing and convex (slope second differences >= -1e-9).
/// Evaluation interpolates linearly and extrapolates with the last slope.
#[derive(Debug, Clone, PartialEq)]
pub struct SurpriseTable<S> {
    points: Vec<(S, S)>,
}

/// Tolerance for the convexity screen on custom tables.
pub const TABLE_CONVEXITY_TOLERANCE: f64 = 1e-9;

impl<S: Real> SurpriseTable<S> {
    pub fn new(points: Vec<(S, S)>) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::InvalidCustomTable { reason: "needs at least two points".into() });
        }
        let (z0, f0) = points[0];
        if z0 != S::zero() || f0 != S::zero() {
            return Err(Error::InvalidCustomTable { reason: "must start at (0, 0)".into() });
        }
        for pair in points.windows(2) {
            let (za, fa) = pair[0];
            let (zb, fb) = pair[1];
            if zb <= za {
                return Err(Error::InvalidCustomTable {
                    reason: format!("abscissae not strictly ascending at z = {}", zb.as_f64()),
                });
            }
            if fb < fa {
                return Err(Error::InvalidCustomTable {
                    reason: format!("values decrease at z = {}", zb.as_f64()),
                });
            }
        }
        let tol = S::of(TABLE_CONVEXITY_TOLERANCE);
        for triple in points.windows(3) {
            let (z0, f0) = triple[0];
            let (z1, f1) = triple[1];
            let (z2, f2) = triple[2];
            let left = (f1 - f0) / (z1 - z0);
            let right = (f2 - f1) / (z2 - z1);
            if right - left < -tol {
                return Err(Error::InvalidCustomTable {
                    reason: format!("not convex around z = {}", z1.as_f64()),
                });
            }
        }
        Ok(Self { points })
    }

    /// Interpolated magnitude at z >= 0.
    pub fn value(&self, z: S) -> S {
        let last = self.points.len() - 1;
        // Locate the segment; past the table, extend the final slope.
        let hi = match self.points.iter().position(|&(zi, _)| zi >= z) {
            Some(0) => 1,
            Some(i) => i,
            None => last,
        };
        let (za, fa) = self.points[hi - 1];
        let (zb, fb) = self.points[hi];
        fa + (z - za) * (fb - fa) / (zb - za)
    }

    pub fn points(&self) -> &[(S, S)] {
        &self.points
    }
}

/// Shape of the surprise magnitude function f.
#[derive(Debug, Clone, PartialEq)]
pub enum SurpriseFamily<S> {
    /// f(z) = z^exponent, exponent > 0.
    Power { exponent: S },
    /// Tabulated f, linearly interpolated.
    Custom(SurpriseTable<S>),
}

/// Surprise response: a magnitude family plus the loss amplification k >= 1.
///
/// delta(z) = f(z) for z >= 0 and -k * f(-z) for z < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SurpriseSpec<S> {
    family: SurpriseFamily<S>,
    k: S,
}

impl<S: Real> SurpriseSpec<S> {
    pub fn new(family: SurpriseFamily<S>, k: S) -> Result<Self, Error> {
        if !(k >= S::one()) {
            return Err(Error::LossAmplificationTooSmall { k: k.as_f64() });
        }
        if let SurpriseFamily::Power { exponent } = family {
            if !(exponent > S::zero()) {
                return Err(Error::NonPositiveExponent { exponent: exponent.as_f64() });
            }
        }
        Ok(Self { family, k })
    }

    /// Power-family spec f(z) = z^exponent with loss amplification k.
    pub fn power(exponent: S, k: S) -> Result<Self, Error> {
        Self::new(SurpriseFamily::Power { exponent }, k)
    }

    /// Custom tabulated spec with loss amplification k.
    pub fn custom(table: SurpriseTable<S>, k: S) -> Result<Self, Error> {
        Self::new(SurpriseFamily::Custom(table), k)
    }

    /// Surprise magnitude f(z) for z >= 0.
    pub fn magnitude(&self, z: S) -> S {
        match &self.family {
            SurpriseFamily::Power { exponent } => z.powf(*exponent),
            SurpriseFamily::Custom(table) => table.value(z),
        }
    }

    /// Signed surprise of a deviation z from the reference point.
    pub fn delta(&self, z: S) -> S {
        if z >= S::zero() {
            self.magnitude(z)
        } else {
            -self.k * self.magnitude(-z)
        }
    }

    pub fn k(&self) -> S {
        self.k
    }

    pub fn family(&self) -> &SurpriseFamily<S> {
        &self.family
    }

    /// Power exponent, if this is a power-family spec.
    pub fn exponent(&self) -> Option<S> {
        match self.family {
            SurpriseFamily::Power { exponent } => Some(exponent),
            SurpriseFamily::Custom(_) => None,
        }
    }
}
