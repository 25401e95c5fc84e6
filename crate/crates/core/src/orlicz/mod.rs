//! Modulars and Luxemburg norms on (bicomplex) Orlicz sequence spaces.
//!
//! For a complex sequence `f` on an atomic space with weights `a_n`, the
//! modular is `I(f) = sum_n phi(|f_n|) a_n` and the Luxemburg norm is
//! `inf { lambda > 0 : I(f / lambda) <= 1 }`. A bicomplex sequence
//! `f = f1 e + f2 e†` has modular `I(f1) e + I(f2) e†` and norm
//! `(1/sqrt 2) (||f1||^2 + ||f2||^2)^(1/2)`.

mod phi;
mod probe;

pub use phi::{classify_phi, Delta2Probe, Grid, NFunctionProbe, OrliczFunction, PhiReport};
pub use probe::{probe_series, ModularStatus, ModularValue, ProbeConfig};

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::bicomplex::{BiComplex, Complex, Component, HyperbolicValue};
use crate::error::OrliczError;
use crate::measure::AtomicMeasureSpace;
use crate::sequence::{check_len, BcSequence, ComplexSeq};

/// Default relative tolerance of the Luxemburg bisection.
pub const DEFAULT_LUX_TOL: f64 = 1e-12;

const MAX_DOUBLINGS: usize = 200;
// enough to walk from 1 down through the whole f64 exponent range
const MAX_HALVINGS: usize = 2100;
const MAX_BISECTIONS: usize = 200;

/// Numerical knobs shared by the norm computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormOptions {
    pub lux_tol: f64,
    pub probe: ProbeConfig,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            lux_tol: DEFAULT_LUX_TOL,
            probe: ProbeConfig::default(),
        }
    }
}

/// `sum_n phi(|f_n| / scale) a_n`.
fn scaled_modular(
    phi: &OrliczFunction,
    f: &ComplexSeq,
    space: &AtomicMeasureSpace,
    scale: f64,
    probe: &ProbeConfig,
) -> ModularValue {
    let term = |n: usize| {
        let a = space.weight(n);
        if a == 0.0 {
            return 0.0;
        }
        phi.eval_nonneg(f.get(n).norm() / scale) * a
    };
    match (space.is_lazy(), f.finite_len()) {
        (false, _) => {
            let n = space.len();
            ModularValue::exact((1..=n).map(term).sum(), n)
        }
        (true, Some(support)) => ModularValue::exact((1..=support).map(term).sum(), support),
        (true, None) => probe_series(term, space.len(), probe),
    }
}

/// `I_phi(f) = sum_n phi(|f_n|) a_n`.
pub fn modular(
    phi: &OrliczFunction,
    f: &ComplexSeq,
    space: &AtomicMeasureSpace,
    probe: &ProbeConfig,
) -> Result<ModularValue, OrliczError> {
    check_len(f.finite_len(), space)?;
    Ok(scaled_modular(phi, f, space, 1.0, probe))
}

/// `I(f1) e + I(f2) e†` as a hyperbolic value. Diverged components are `+inf`;
/// inconclusive ones carry their partial sums.
pub fn modular_bc(
    phi: &OrliczFunction,
    f: &BcSequence,
    space: &AtomicMeasureSpace,
    probe: &ProbeConfig,
) -> Result<HyperbolicValue, OrliczError> {
    let (m1, m2) = modular_bc_detailed(phi, f, space, probe)?;
    Ok(HyperbolicValue {
        h1: m1.value,
        h2: m2.value,
    })
}

/// Component modulars with their probe statuses.
pub fn modular_bc_detailed(
    phi: &OrliczFunction,
    f: &BcSequence,
    space: &AtomicMeasureSpace,
    probe: &ProbeConfig,
) -> Result<(ModularValue, ModularValue), OrliczError> {
    f.check_against(space)?;
    let (f1, f2) = f.components();
    Ok((
        scaled_modular(phi, &f1, space, 1.0, probe),
        scaled_modular(phi, &f2, space, 1.0, probe),
    ))
}

fn is_identically_zero(f: &ComplexSeq, space: &AtomicMeasureSpace, probe: &ProbeConfig) -> Result<bool, OrliczError> {
    match f.finite_len() {
        Some(len) => Ok((1..=len).all(|n| f.get(n) == Complex::new(0.0, 0.0))),
        None if !space.is_lazy() => Ok((1..=space.len()).all(|n| f.get(n) == Complex::new(0.0, 0.0))),
        None => {
            let v = probe_series(|n| f.get(n).norm(), space.len(), probe);
            Ok(v.value == 0.0 && v.status != ModularStatus::Inconclusive)
        }
    }
}

/// Luxemburg norm `inf { lambda > 0 : I_phi(f / lambda) <= 1 }` by bracketed
/// bisection. Returns the upper end of the final bracket, which always
/// satisfies the level condition.
pub fn luxemburg_norm(
    phi: &OrliczFunction,
    f: &ComplexSeq,
    space: &AtomicMeasureSpace,
    opts: &NormOptions,
) -> Result<f64, OrliczError> {
    if !(opts.lux_tol > 0.0 && opts.lux_tol.is_finite()) {
        return Err(OrliczError::InvalidTolerance(opts.lux_tol));
    }
    check_len(f.finite_len(), space)?;
    if is_identically_zero(f, space, &opts.probe)? {
        return Ok(0.0);
    }

    // g(lambda) <= 1, with diverged modulars on the "> 1" side
    let below = |lambda: f64| -> Result<bool, OrliczError> {
        let v = scaled_modular(phi, f, space, lambda, &opts.probe);
        match v.status {
            ModularStatus::Inconclusive => Err(OrliczError::Inconclusive),
            ModularStatus::Diverged => Ok(false),
            _ => Ok(v.value <= 1.0),
        }
    };

    let start = match f.finite_len() {
        Some(len) => (1..=len).map(|n| f.get(n).norm()).fold(1.0, f64::max),
        None if !space.is_lazy() => (1..=space.len()).map(|n| f.get(n).norm()).fold(1.0, f64::max),
        None => 1.0,
    };
    let mut hi = start;
    let mut lo;
    if below(hi)? {
        lo = hi / 2.0;
        let mut steps = 0;
        while below(lo)? {
            hi = lo;
            lo /= 2.0;
            steps += 1;
            if steps >= MAX_HALVINGS || lo == 0.0 {
                return Ok(hi);
            }
        }
    } else {
        let mut found = false;
        for _ in 0..MAX_DOUBLINGS {
            hi *= 2.0;
            if !hi.is_finite() {
                break;
            }
            if below(hi)? {
                found = true;
                break;
            }
        }
        if !found {
            return Err(OrliczError::NotInSpace);
        }
        lo = hi / 2.0;
    }

    for _ in 0..MAX_BISECTIONS {
        if (hi - lo) / hi < opts.lux_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Luxemburg norms of both components.
pub fn component_norms(
    phi: &OrliczFunction,
    f: &BcSequence,
    space: &AtomicMeasureSpace,
    opts: &NormOptions,
) -> Result<(f64, f64), OrliczError> {
    f.check_against(space)?;
    let (f1, f2) = f.components();
    Ok((
        luxemburg_norm(phi, &f1, space, opts)?,
        luxemburg_norm(phi, &f2, space, opts)?,
    ))
}

/// `||f||_{phi,BC} = (1/sqrt 2) (||f1||_phi^2 + ||f2||_phi^2)^(1/2)`.
pub fn norm_bc(
    phi: &OrliczFunction,
    f: &BcSequence,
    space: &AtomicMeasureSpace,
    opts: &NormOptions,
) -> Result<f64, OrliczError> {
    let (n1, n2) = component_norms(phi, f, space, opts)?;
    Ok(combine_norms(n1, n2))
}

pub fn combine_norms(n1: f64, n2: f64) -> f64 {
    n1.hypot(n2) * FRAC_1_SQRT_2
}

/// `(sum_{k > n} |x_k|^p)^(1/p)`, scaled against underflow.
fn lp_tail(x: &ComplexSeq, n: usize, p: f64, budget: usize, probe: &ProbeConfig) -> Result<f64, OrliczError> {
    match x.finite_len() {
        Some(len) => {
            let mags: Vec<f64> = (n + 1..=len).map(|k| x.get(k).norm()).collect();
            let top = mags.iter().copied().fold(0.0, f64::max);
            if top == 0.0 {
                return Ok(0.0);
            }
            let s: f64 = mags.iter().map(|m| (m / top).powf(p)).sum();
            Ok(top * s.powf(1.0 / p))
        }
        None => {
            let v = probe_series(|j| x.get(n + j).norm().powf(p), budget.saturating_sub(n), probe);
            match v.status {
                ModularStatus::Diverged => Err(OrliczError::Divergent),
                ModularStatus::Inconclusive => Err(OrliczError::Inconclusive),
                _ => Ok(v.value.powf(1.0 / p)),
            }
        }
    }
}

/// Norm in `l^p(BC)` of the tail `F - sum_{k <= n} F_k e_k`. Rule sequences
/// are probed up to `budget` terms.
pub fn schauder_tail(
    f: &BcSequence,
    n: usize,
    p: f64,
    budget: usize,
    probe: &ProbeConfig,
) -> Result<f64, OrliczError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(OrliczError::InvalidExponent(p));
    }
    let t1 = lp_tail(&f.component(Component::First), n, p, budget, probe)?;
    let t2 = lp_tail(&f.component(Component::Second), n, p, budget, probe)?;
    Ok(combine_norms(t1, t2))
}

/// Duality pairing `<x, y> = (sum x_{n,1} y_{n,1} a_n) e + (sum x_{n,2} y_{n,2} a_n) e†`.
pub fn pairing(
    x: &BcSequence,
    y: &BcSequence,
    space: &AtomicMeasureSpace,
    probe: &ProbeConfig,
) -> Result<BiComplex, OrliczError> {
    x.check_against(space)?;
    y.check_against(space)?;
    let len = match (space.is_lazy(), x.finite_len(), y.finite_len()) {
        (false, _, _) => space.len(),
        (true, Some(a), Some(b)) => a.min(b),
        (true, Some(a), None) | (true, None, Some(a)) => a,
        (true, None, None) => {
            let abs = probe_series(
                |n| {
                    let (xn, yn) = (x.get(n), y.get(n));
                    let a = space.weight(n);
                    ((xn.b1() * yn.b1()).norm() + (xn.b2() * yn.b2()).norm()) * a
                },
                space.len(),
                probe,
            );
            match abs.status {
                ModularStatus::Diverged => return Err(OrliczError::Divergent),
                ModularStatus::Inconclusive => return Err(OrliczError::Inconclusive),
                _ => abs.terms,
            }
        }
    };
    let mut s1 = Complex::new(0.0, 0.0);
    let mut s2 = Complex::new(0.0, 0.0);
    for n in 1..=len {
        let (xn, yn) = (x.get(n), y.get(n));
        let a = space.weight(n);
        s1 += xn.b1() * yn.b1() * a;
        s2 += xn.b2() * yn.b2() * a;
    }
    Ok(BiComplex::from_idempotent(s1, s2))
}
