//! Roots of bicomplex polynomials.
//!
//! `sum_k c_k Z^k = 0` splits under the projections into two complex
//! polynomial equations, one per idempotent coordinate. With `n` roots each,
//! every pairing `r1 e + r2 e†` is a root, giving `n^2` in total.

use serde::Serialize;

use super::{BiComplex, Classification, Complex, Component};
use crate::error::BicomplexError;

/// Relative residual bound every returned root must meet.
pub const RESIDUAL_REL_BOUND: f64 = 1e-8;

const MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyRoot {
    #[serde(with = "crate::json::bicomplex")]
    pub root: BiComplex,
    /// `||p(root)||`, evaluated in bicomplex arithmetic.
    pub residual: f64,
    /// `RESIDUAL_REL_BOUND * max_l sum_k |pi_l(c_k)| |pi_l(root)|^k`.
    pub bound: f64,
}

/// All `n^2` roots of the polynomial with ascending coefficients `coeffs`
/// (`coeffs[k]` multiplies `Z^k`). Coincident roots are repeated.
pub fn poly_roots(coeffs: &[BiComplex]) -> Result<Vec<PolyRoot>, BicomplexError> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Err(BicomplexError::DegreeTooLow);
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(BicomplexError::NonFinite);
    }
    let lead = coeffs[degree].classify_default();
    if lead != Classification::Invertible {
        return Err(BicomplexError::LeadingNotInvertible(lead));
    }

    let p1: Vec<Complex> = coeffs.iter().map(|c| c.project(Component::First)).collect();
    let p2: Vec<Complex> = coeffs.iter().map(|c| c.project(Component::Second)).collect();
    let r1 = complex_roots(&p1);
    let r2 = complex_roots(&p2);

    let mut out = Vec::with_capacity(degree * degree);
    for &a in &r1 {
        for &b in &r2 {
            let root = BiComplex::from_idempotent(a, b);
            let residual = eval_bicomplex(coeffs, root).norm();
            let scale = horner_scale(&p1, a).max(horner_scale(&p2, b));
            let bound = RESIDUAL_REL_BOUND * scale;
            if residual > bound {
                return Err(BicomplexError::RootResidual { residual, bound });
            }
            out.push(PolyRoot {
                root,
                residual,
                bound,
            });
        }
    }
    Ok(out)
}

fn eval_bicomplex(coeffs: &[BiComplex], z: BiComplex) -> BiComplex {
    coeffs
        .iter()
        .rev()
        .fold(BiComplex::ZERO, |acc, &c| acc * z + c)
}

fn horner_scale(coeffs: &[Complex], z: Complex) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn eval(coeffs: &[Complex], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of a complex polynomial with nonzero leading coefficient, sorted by
/// real then imaginary part.
pub(crate) fn complex_roots(coeffs: &[Complex]) -> Vec<Complex> {
    let zero = Complex::new(0.0, 0.0);
    // exact zero roots deflate without error
    let shift = coeffs.iter().take_while(|c| **c == zero).count();
    let reduced = &coeffs[shift..];
    let mut roots = vec![zero; shift];
    match reduced.len() {
        0 | 1 => {}
        2 => roots.push(-reduced[0] / reduced[1]),
        _ => roots.extend(aberth(reduced)),
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

fn aberth(coeffs: &[Complex]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    // initial guesses on a circle of radius (|c0/cn|)^(1/n), off the real axis
    let radius = (coeffs[0] / lead).norm().powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..MAX_ITER {
        let mut converged = true;
        for i in 0..n {
            let (p, dp) = eval(coeffs, z[i]);
            if p == Complex::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }

    for zi in z.iter_mut() {
        polish(coeffs, zi);
    }
    z
}

fn polish(coeffs: &[Complex], z: &mut Complex) {
    let (mut p, _) = eval(coeffs, *z);
    for _ in 0..3 {
        let (_, dp) = eval(coeffs, *z);
        let next = *z - p / dp;
        if !next.re.is_finite() || !next.im.is_finite() {
            return;
        }
        let (pn, _) = eval(coeffs, next);
        if pn.norm() >= p.norm() {
            return;
        }
        *z = next;
        p = pn;
    }
}
