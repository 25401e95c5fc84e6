//! Orlicz functions and sampled checks of their analytic properties.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::OrliczError;

/// A convex `phi: [0, inf) -> [0, inf]` with `phi(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrliczFunction {
    /// `u^p`, `p >= 1`
    Power { p: f64 },
    /// `e^u - u - 1`
    ExpType,
    /// `u ln(1 + u)`
    Entropy,
}

impl OrliczFunction {
    pub fn power(p: f64) -> Result<Self, OrliczError> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(OrliczError::InvalidPhi {
                spec: format!("power:p={p}"),
                reason: "exponent must be finite and at least 1".into(),
            });
        }
        Ok(OrliczFunction::Power { p })
    }

    /// `phi(u)`; overflow yields `+inf`.
    pub fn eval(&self, u: f64) -> Result<f64, OrliczError> {
        if u < 0.0 || u.is_nan() {
            return Err(OrliczError::NegativeArgument(u));
        }
        Ok(self.eval_nonneg(u))
    }

    /// `phi(u)` for `u >= 0`, unchecked.
    pub(crate) fn eval_nonneg(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        match *self {
            OrliczFunction::Power { p } => {
                if p == 1.0 {
                    u
                } else if p == 2.0 {
                    u * u
                } else {
                    u.powf(p)
                }
            }
            OrliczFunction::ExpType => {
                if u < 1e-3 {
                    // e^u - 1 - u without cancellation
                    let u2 = u * u;
                    u2 * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u / 120.0)))
                } else {
                    u.exp_m1() - u
                }
            }
            OrliczFunction::Entropy => u * u.ln_1p(),
        }
    }
}

impl FromStr for OrliczFunction {
    type Err = OrliczError;

    /// Accepts `power:p=<p>`, `exp` and `entropy`.
    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| OrliczError::InvalidPhi {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        match spec.trim() {
            "exp" => Ok(OrliczFunction::ExpType),
            "entropy" => Ok(OrliczFunction::Entropy),
            s => {
                let Some(rest) = s.strip_prefix("power:") else {
                    return Err(bad("expected power:p=<p>, exp or entropy"));
                };
                let Some(p) = rest.trim().strip_prefix("p=") else {
                    return Err(bad("power needs a parameter, e.g. power:p=2"));
                };
                let p: f64 = p.trim().parse().map_err(|_| bad("p is not a number"))?;
                if !(p.is_finite() && p >= 1.0) {
                    return Err(bad("p must be finite and at least 1"));
                }
                Ok(OrliczFunction::Power { p })
            }
        }
    }
}

impl fmt::Display for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrliczFunction::Power { p } => write!(f, "power:p={p}"),
            OrliczFunction::ExpType => f.write_str("exp"),
            OrliczFunction::Entropy => f.write_str("entropy"),
        }
    }
}

impl Serialize for OrliczFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrliczFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Logarithmic sample grid for [`classify_phi`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            min: 1e-8,
            max: 1e8,
            points: 161,
        }
    }
}

impl Grid {
    pub fn samples(&self) -> Vec<f64> {
        let n = self.points.max(2);
        let (lo, hi) = (self.min.ln(), self.max.ln());
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NFunctionProbe {
    pub limit0_ok: bool,
    pub limit_inf_ok: bool,
    pub continuous_ok: bool,
    pub vanishes_only_at_0: bool,
}

impl NFunctionProbe {
    pub fn all(&self) -> bool {
        self.limit0_ok && self.limit_inf_ok && self.continuous_ok && self.vanishes_only_at_0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta2Probe {
    /// `max phi(2u)/phi(u)` over the grid.
    #[serde(with = "crate::json::extended")]
    pub k_estimate: f64,
    pub holds_on_grid: bool,
}

/// Sampled verdicts about an Orlicz function. These are probes on a grid,
/// not proofs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    pub phi: OrliczFunction,
    pub grid: Grid,
    pub convexity_ok: bool,
    pub n_function: NFunctionProbe,
    pub delta2: Delta2Probe,
    pub label: String,
}

const EDGE_POINTS: usize = 3;

pub fn classify_phi(phi: &OrliczFunction, grid: &Grid) -> PhiReport {
    let us = grid.samples();
    let vals: Vec<f64> = us.iter().map(|&u| phi.eval_nonneg(u)).collect();

    let convexity_ok = us.windows(2).zip(vals.windows(2)).all(|(u, v)| {
        if !(v[0].is_finite() && v[1].is_finite()) {
            return true;
        }
        let mid = phi.eval_nonneg(0.5 * (u[0] + u[1]));
        mid <= 0.5 * (v[0] + v[1]) * (1.0 + 1e-12)
    });
    // phi(0) = 0 together with the grid; a convex function lies below its chords
    let monotone_ok = vals.windows(2).all(|v| v[1] >= v[0]);

    let k = EDGE_POINTS.min(us.len());
    let limit0_ok = us[..k].iter().zip(&vals[..k]).all(|(u, v)| v / u < 1e-3);
    let limit_inf_ok = us[us.len() - k..]
        .iter()
        .zip(&vals[vals.len() - k..])
        .all(|(u, v)| v / u > 1e3);
    let continuous_ok = us.iter().zip(&vals).all(|(&u, &v)| {
        if !v.is_finite() {
            return true;
        }
        let nudged = phi.eval_nonneg(u * (1.0 + 1e-10));
        nudged.is_finite() && (nudged - v).abs() <= 1e-6 * v.max(f64::MIN_POSITIVE)
    });
    let vanishes_only_at_0 = vals.iter().all(|&v| v > 0.0);

    let ratios: Vec<f64> = us
        .iter()
        .zip(&vals)
        .map(|(&u, &v)| {
            let twice = phi.eval_nonneg(2.0 * u);
            match (v.is_finite(), twice.is_finite()) {
                (true, true) => twice / v,
                (true, false) => f64::INFINITY,
                // both infinite: no information at this point
                (false, _) => f64::NAN,
            }
        })
        .collect();
    let k_estimate = ratios.iter().copied().filter(|r| !r.is_nan()).fold(0.0, f64::max);
    let finite: Vec<f64> = ratios.iter().copied().filter(|r| !r.is_nan()).collect();
    let holds_on_grid = k_estimate.is_finite()
        && finite.len() >= 4
        && finite[finite.len() - 1] <= finite[finite.len() * 3 / 4] * (1.0 + 1e-9);

    PhiReport {
        phi: *phi,
        grid: *grid,
        convexity_ok: convexity_ok && monotone_ok,
        n_function: NFunctionProbe {
            limit0_ok,
            limit_inf_ok,
            continuous_ok,
            vanishes_only_at_0,
        },
        delta2: Delta2Probe {
            k_estimate,
            holds_on_grid,
        },
        label: "probe".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let sq = OrliczFunction::power(2.0).unwrap();
        assert_eq!(sq.eval(3.0).unwrap(), 9.0);
        for phi in [sq, OrliczFunction::ExpType, OrliczFunction::Entropy] {
            assert_eq!(phi.eval(0.0).unwrap(), 0.0);
        }
        let e = OrliczFunction::ExpType.eval(1.0).unwrap();
        assert!((e - (std::f64::consts::E - 2.0)).abs() < 1e-15);
        assert!(sq.eval(-1.0).is_err());
        assert_eq!(OrliczFunction::ExpType.eval(1e4).unwrap(), f64::INFINITY);
    }

    #[test]
    fn exp_small_argument_series_matches_direct() {
        for &u in &[1e-3 * 0.999, 5e-4, 1e-4] {
            let series = OrliczFunction::ExpType.eval(u).unwrap();
            let direct = u.exp_m1() - u;
            assert!((series - direct).abs() <= 1e-9 * direct);
        }
    }

    #[test]
    fn spec_strings() {
        assert_eq!("power:p=2".parse::<OrliczFunction>().unwrap(), OrliczFunction::Power { p: 2.0 });
        assert_eq!("exp".parse::<OrliczFunction>().unwrap(), OrliczFunction::ExpType);
        assert_eq!("entropy".parse::<OrliczFunction>().unwrap(), OrliczFunction::Entropy);
        for bad in ["power", "power:p=0.5", "power:q=2", "power:p=x", "cosh", ""] {
            assert!(bad.parse::<OrliczFunction>().is_err(), "{bad}");
        }
        let phi = OrliczFunction::power(1.5).unwrap();
        assert_eq!(phi.to_string().parse::<OrliczFunction>().unwrap(), phi);
    }

    #[test]
    fn classify_power_two() {
        let r = classify_phi(&OrliczFunction::power(2.0).unwrap(), &Grid::default());
        assert!(r.convexity_ok);
        assert!(r.n_function.all());
        assert_eq!(r.delta2.k_estimate, 4.0);
        assert!(r.delta2.holds_on_grid);
    }

    #[test]
    fn classify_power_one() {
        let r = classify_phi(&OrliczFunction::power(1.0).unwrap(), &Grid::default());
        assert!(!r.n_function.limit0_ok);
        assert!(!r.n_function.limit_inf_ok);
        assert_eq!(r.delta2.k_estimate, 2.0);
    }

    #[test]
    fn classify_exp() {
        let r = classify_phi(&OrliczFunction::ExpType, &Grid::default());
        assert!(r.n_function.limit0_ok && r.n_function.limit_inf_ok);
        assert!(!r.delta2.holds_on_grid);
        // K estimate grows with the grid maximum
        let small = classify_phi(&OrliczFunction::ExpType, &Grid { min: 1e-8, max: 10.0, points: 100 });
        let larger = classify_phi(&OrliczFunction::ExpType, &Grid { min: 1e-8, max: 40.0, points: 100 });
        assert!(small.delta2.k_estimate.is_finite());
        assert!(larger.delta2.k_estimate > 1e6 * small.delta2.k_estimate);
        assert!(!small.delta2.holds_on_grid);
    }

    #[test]
    fn classify_entropy() {
        let r = classify_phi(&OrliczFunction::Entropy, &Grid::default());
        assert!(r.convexity_ok);
        assert!(r.n_function.limit0_ok);
        // ln(1 + u) at u = 1e8 is about 18, below the 1e3 threshold
        assert!(!r.n_function.limit_inf_ok);
        assert!(r.delta2.holds_on_grid);
    }
}
