//! Convergence probe for nonnegative series on lazily generated spaces.
//!
//! Terms are accumulated in blocks. The sum is declared converged once enough
//! consecutive blocks are negligible relative to the running total, and
//! diverged once it exceeds a blow-up threshold. When the budget runs out
//! first, a comparison test on dyadic block sums decides: summands decaying
//! like `n^-s` with `s` close to 1 are compared with the harmonic series,
//! and faster decay is extrapolated with an integral tail estimate.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModularStatus {
    /// Summed over finitely many atoms.
    Exact,
    Converged,
    /// The sum is `+inf`.
    Diverged,
    /// Budget exhausted without a verdict; the value is a partial sum.
    Inconclusive,
}

/// Value of a modular (or any nonnegative series) with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularValue {
    #[serde(with = "crate::json::extended")]
    pub value: f64,
    pub status: ModularStatus,
    /// Number of terms actually evaluated.
    pub terms: usize,
}

impl ModularValue {
    pub fn exact(value: f64, terms: usize) -> Self {
        ModularValue {
            value,
            status: ModularStatus::Exact,
            terms,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.status, ModularStatus::Exact | ModularStatus::Converged) && self.value.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeConfig {
    /// Terms per block.
    pub block: usize,
    /// A block is negligible when it adds less than this fraction of the sum.
    pub rel_tol: f64,
    /// Consecutive negligible blocks needed to declare convergence.
    pub quiet_blocks: usize,
    /// Partial sums above this are declared divergent.
    pub blowup: f64,
    /// Estimated decay exponents at or below this are compared with the
    /// harmonic series and declared divergent.
    pub harmonic_exponent: f64,
    /// An extrapolated tail must be below this fraction of the sum to count
    /// as converged.
    pub tail_rel_tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            block: 1000,
            rel_tol: 1e-12,
            quiet_blocks: 3,
            blowup: 1e12,
            harmonic_exponent: 1.05,
            tail_rel_tol: 1e-6,
        }
    }
}

/// Sums `term(1) + term(2) + ... + term(n_max)` under the probe rules.
/// Terms must be nonnegative (or `+inf`).
pub fn probe_series(mut term: impl FnMut(usize) -> f64, n_max: usize, cfg: &ProbeConfig) -> ModularValue {
    let block = cfg.block.max(1);
    let mut sum = 0.0;
    let mut quiet = 0;
    // dyadic[k] = sum of terms with index in [2^k, 2^(k+1))
    let mut dyadic: Vec<f64> = Vec::new();
    let mut last = 0.0;
    let mut n = 1;
    while n <= n_max {
        let end = (n + block - 1).min(n_max);
        let mut block_sum = 0.0;
        for i in n..=end {
            let t = term(i);
            let k = (usize::BITS - 1 - i.leading_zeros()) as usize;
            if dyadic.len() <= k {
                dyadic.resize(k + 1, 0.0);
            }
            dyadic[k] += t;
            block_sum += t;
            last = t;
        }
        sum += block_sum;
        // NaN counts as blowup
        if sum.is_nan() || sum > cfg.blowup {
            return ModularValue {
                value: f64::INFINITY,
                status: ModularStatus::Diverged,
                terms: end,
            };
        }
        if block_sum <= cfg.rel_tol * sum {
            quiet += 1;
            if quiet >= cfg.quiet_blocks {
                return ModularValue {
                    value: sum,
                    status: ModularStatus::Converged,
                    terms: end,
                };
            }
        } else {
            quiet = 0;
        }
        n = end + 1;
    }
    compare_tail(sum, last, n_max, &dyadic, cfg)
}

fn compare_tail(sum: f64, last: f64, n_max: usize, dyadic: &[f64], cfg: &ProbeConfig) -> ModularValue {
    let inconclusive = ModularValue {
        value: sum,
        status: ModularStatus::Inconclusive,
        terms: n_max,
    };
    // complete dyadic blocks [2^k, 2^(k+1)) with 2^(k+1) - 1 <= n_max
    let complete = (usize::BITS - (n_max + 1).leading_zeros() - 1) as usize;
    if complete < 3 || dyadic.len() < complete {
        return inconclusive;
    }
    let d = &dyadic[complete - 3..complete];
    if d[2] == 0.0 && last == 0.0 {
        return ModularValue {
            value: sum,
            status: ModularStatus::Converged,
            terms: n_max,
        };
    }
    if d.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return inconclusive;
    }
    // budgets shorter than the quiet-block rule: decreasing, negligible blocks
    if d[2] <= d[1] && d[1] <= d[0] && d[2] <= cfg.rel_tol * sum {
        return ModularValue {
            value: sum,
            status: ModularStatus::Converged,
            terms: n_max,
        };
    }
    // D_k ~ C 2^{k(1-s)} for terms ~ C n^{-s}
    let s1 = 1.0 - (d[1] / d[0]).log2();
    let s2 = 1.0 - (d[2] / d[1]).log2();
    if s1 <= cfg.harmonic_exponent && s2 <= cfg.harmonic_exponent {
        return ModularValue {
            value: f64::INFINITY,
            status: ModularStatus::Diverged,
            terms: n_max,
        };
    }
    if s2 > cfg.harmonic_exponent && (s2 - s1).abs() < 0.1 * s2.max(1.0) {
        // integral of C x^{-s} from n_max to infinity, with C n_max^{-s} = last term
        let tail = last * n_max as f64 / (s2 - 1.0);
        if tail <= cfg.tail_rel_tol * sum {
            return ModularValue {
                value: sum + tail,
                status: ModularStatus::Converged,
                terms: n_max,
            };
        }
    }
    inconclusive
}
