//! Boundedness criteria for composition and multiplication operators.
//!
//! A composition operator `C_T` on a purely atomic space is bounded exactly
//! when the distortion ratios `b_n = mu(T^-1 A_n) / mu(A_n)` are bounded. For
//! supplied sample sequences the report also records scalars `lambda_1,
//! lambda_2` making `sum_n phi(lambda_i |x_{n,i}|) b_n` finite. A
//! multiplication operator `M_theta` is bounded exactly when both components
//! of `theta` are essentially bounded.

use serde::Serialize;

use crate::bicomplex::Component;
use crate::error::OperatorError;
use crate::measure::{distortion_ratios, is_nonsingular, is_surjective, AtomicMeasureSpace, IndexMap};
use crate::orlicz::{classify_phi, probe_series, Grid, NormOptions, OrliczFunction, PhiReport};
use crate::sequence::{check_len, BcSequence};

/// Exponents `k` of the lambda grid `2^-k`.
const LAMBDA_EXPONENTS: std::ops::RangeInclusive<i32> = 0..=20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

/// First lambdas on the grid `1, 1/2, ..., 2^-20` giving a finite weighted
/// modular for one sample sequence, per component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaPair {
    pub sample: usize,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
}

impl LambdaPair {
    pub fn found(&self) -> bool {
        self.lambda1.is_some() && self.lambda2.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub verdict: Verdict,
    /// `sup b_n` over the examined atoms (composition only).
    #[serde(skip_serializing_if = "Option::is_none", with = "crate::json::extended_opt")]
    pub sup_distortion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_atom: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lambda_pairs: Vec<LambdaPair>,
    /// `(sup |theta_1|, sup |theta_2|)` (multiplication only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ess_sups: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_norm: Option<f64>,
    /// The examined range was a truncation of an infinite space.
    pub truncated: bool,
    /// Suprema kept growing across truncations.
    pub unbounded_at_budget: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surjective: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonsingular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_probe: Option<PhiReport>,
    /// Reserved; no finite certificate for compactness exists.
    pub compact: Option<bool>,
    pub notes: Vec<String>,
}

impl BoundednessReport {
    fn empty(verdict: Verdict) -> Self {
        BoundednessReport {
            verdict,
            sup_distortion: None,
            sup_atom: None,
            lambda_pairs: Vec::new(),
            ess_sups: None,
            empirical_norm: None,
            truncated: false,
            unbounded_at_budget: false,
            surjective: None,
            nonsingular: None,
            phi_probe: None,
            compact: None,
            notes: Vec::new(),
        }
    }

    pub fn with_empirical_norm(mut self, estimate: f64) -> Self {
        self.empirical_norm = Some(estimate);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Stable,
    Growing,
    Unclear,
}

/// Compares running suprema at truncations `len/1000, len/100, len/10, len`.
fn trend(prefix_sup: impl Fn(usize) -> f64, len: usize) -> Trend {
    let mut cuts: Vec<usize> = [len / 1000, len / 100, len / 10, len]
        .into_iter()
        .filter(|&k| k >= 1)
        .collect();
    cuts.dedup();
    if cuts.len() < 3 {
        return Trend::Unclear;
    }
    let s: Vec<f64> = cuts.iter().map(|&k| prefix_sup(k)).collect();
    let n = s.len();
    if s[n - 1] <= s[n - 2] * (1.0 + 1e-12) {
        Trend::Stable
    } else if s[n - 2] > s[n - 3] * (1.0 + 1e-9) {
        Trend::Growing
    } else {
        Trend::Unclear
    }
}

fn first_lambda(
    phi: &OrliczFunction,
    x: &BcSequence,
    which: Component,
    ratios: &[f64],
    space: &AtomicMeasureSpace,
    opts: &NormOptions,
) -> Option<f64> {
    let comp = x.component(which);
    LAMBDA_EXPONENTS.map(|k| 2f64.powi(-k)).find(|&lambda| {
        let term = |n: usize| {
            let b = ratios.get(n - 1).copied().unwrap_or(0.0);
            if b == 0.0 {
                0.0
            } else {
                phi.eval_nonneg(lambda * comp.get(n).norm()) * b
            }
        };
        let len = if space.is_lazy() {
            comp.finite_len()
        } else {
            Some(space.len())
        };
        match len {
            Some(len) => (1..=len).map(term).sum::<f64>().is_finite(),
            None => probe_series(term, ratios.len(), &opts.probe).is_finite(),
        }
    })
}

/// Checks boundedness of `C_T` on `l^phi(BC, {a_n})`.
pub fn check_composition_bounded(
    space: &AtomicMeasureSpace,
    map: &IndexMap,
    phi: &OrliczFunction,
    samples: &[BcSequence],
    opts: &NormOptions,
) -> Result<BoundednessReport, OperatorError> {
    for s in samples {
        check_len(s.finite_len(), space)?;
    }
    let dist = distortion_ratios(space, map)?;
    let mut report = BoundednessReport::empty(Verdict::Inconclusive);
    report.sup_distortion = Some(dist.sup);
    report.sup_atom = Some(dist.argmax);
    report.truncated = dist.truncated;
    report.surjective = Some(is_surjective(space, map)?);
    report.nonsingular = Some(is_nonsingular(space, map)?.nonsingular);
    let phi_report = classify_phi(phi, &Grid::default());
    if !phi_report.delta2.holds_on_grid {
        report
            .notes
            .push(format!("{phi} fails the Delta2 probe; the distortion criterion is then only sufficient"));
    }
    report.phi_probe = Some(phi_report);
    if report.surjective == Some(false) {
        report
            .notes
            .push("T is not onto the examined atoms; reported, not required".into());
    }

    report.lambda_pairs = samples
        .iter()
        .enumerate()
        .map(|(i, x)| LambdaPair {
            sample: i,
            lambda1: first_lambda(phi, x, Component::First, &dist.ratios, space, opts),
            lambda2: first_lambda(phi, x, Component::Second, &dist.ratios, space, opts),
        })
        .collect();
    let lambdas_ok = report.lambda_pairs.iter().all(LambdaPair::found);
    if !lambdas_ok {
        report
            .notes
            .push("lambda search failed for at least one sample on the 2^-k grid, k <= 20".into());
    }

    report.verdict = if !dist.sup.is_finite() {
        Verdict::Unbounded
    } else if !space.is_lazy() {
        if lambdas_ok {
            Verdict::Bounded
        } else {
            Verdict::Inconclusive
        }
    } else {
        match trend(|k| dist.prefix_sup(k), dist.ratios.len()) {
            Trend::Stable if lambdas_ok => {
                report.notes.push(format!(
                    "sup b_n stable over the last decade of the truncation at {} atoms",
                    dist.ratios.len()
                ));
                Verdict::Bounded
            }
            Trend::Growing => {
                report.unbounded_at_budget = true;
                report.notes.push(format!(
                    "sup b_n keeps growing up to {} atoms: unbounded at budget",
                    dist.ratios.len()
                ));
                Verdict::Inconclusive
            }
            _ => Verdict::Inconclusive,
        }
    };
    Ok(report)
}

/// Checks boundedness of `M_theta`: both `|theta_1|` and `|theta_2|` must be
/// bounded over the atoms of `space`.
pub fn check_multiplication_bounded(
    theta: &BcSequence,
    space: &AtomicMeasureSpace,
) -> Result<BoundednessReport, OperatorError> {
    check_len(theta.finite_len(), space)?;
    let len = match (space.is_lazy(), theta.finite_len()) {
        (true, Some(support)) => support,
        _ => space.len(),
    };
    let mut run1 = Vec::with_capacity(len);
    let mut run2 = Vec::with_capacity(len);
    let (mut m1, mut m2) = (0.0f64, 0.0f64);
    for n in 1..=len {
        let t = theta.get(n);
        m1 = m1.max(t.b1().norm());
        m2 = m2.max(t.b2().norm());
        run1.push(m1);
        run2.push(m2);
    }
    let mut report = BoundednessReport::empty(Verdict::Inconclusive);
    report.ess_sups = Some((m1, m2));
    let rule_on_lazy = space.is_lazy() && theta.finite_len().is_none();
    report.truncated = rule_on_lazy;

    report.verdict = if !(m1.is_finite() && m2.is_finite()) {
        Verdict::Unbounded
    } else if !rule_on_lazy {
        Verdict::Bounded
    } else {
        let t1 = trend(|k| run1[k - 1], len);
        let t2 = trend(|k| run2[k - 1], len);
        if t1 == Trend::Growing || t2 == Trend::Growing {
            report.unbounded_at_budget = true;
            for (t, c) in [(t1, 1), (t2, 2)] {
                if t == Trend::Growing {
                    report
                        .notes
                        .push(format!("sup |theta_{c}| keeps growing up to {len} atoms"));
                }
            }
            Verdict::Unbounded
        } else if t1 == Trend::Stable && t2 == Trend::Stable {
            report
                .notes
                .push(format!("sups stable over the last decade of the truncation at {len} atoms"));
            Verdict::Bounded
        } else {
            Verdict::Inconclusive
        }
    };
    Ok(report)
}
