//! Complex and bicomplex sequences over the atoms of a measure space.
//!
//! A sequence is either an explicit finite list or a rule `n -> value`.
//! Indices are 1-based. A finite list attached to a lazy space is read as
//! finitely supported: entries past its end are zero.

use std::fmt;
use std::sync::Arc;

use crate::bicomplex::{BiComplex, Complex, Component};
use crate::error::OrliczError;
use crate::measure::AtomicMeasureSpace;

pub type Rule<T> = Arc<dyn Fn(usize) -> T + Send + Sync>;

#[derive(Clone)]
pub enum ComplexSeq {
    Finite(Vec<Complex>),
    Rule(Rule<Complex>),
}

impl ComplexSeq {
    pub fn from_fn(f: impl Fn(usize) -> Complex + Send + Sync + 'static) -> Self {
        ComplexSeq::Rule(Arc::new(f))
    }

    pub fn from_reals(values: &[f64]) -> Self {
        ComplexSeq::Finite(values.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn get(&self, n: usize) -> Complex {
        match self {
            ComplexSeq::Finite(v) => v.get(n.wrapping_sub(1)).copied().unwrap_or_default(),
            ComplexSeq::Rule(f) => f(n),
        }
    }

    pub fn finite_len(&self) -> Option<usize> {
        match self {
            ComplexSeq::Finite(v) => Some(v.len()),
            ComplexSeq::Rule(_) => None,
        }
    }

    pub fn scale(&self, s: Complex) -> ComplexSeq {
        match self {
            ComplexSeq::Finite(v) => ComplexSeq::Finite(v.iter().map(|z| z * s).collect()),
            ComplexSeq::Rule(f) => {
                let f = Arc::clone(f);
                ComplexSeq::Rule(Arc::new(move |n| f(n) * s))
            }
        }
    }
}

impl fmt::Debug for ComplexSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexSeq::Finite(v) => f.debug_tuple("Finite").field(v).finish(),
            ComplexSeq::Rule(_) => f.write_str("Rule(..)"),
        }
    }
}

/// A bicomplex sequence `f = f1 e + f2 e†`.
#[derive(Clone)]
pub enum BcSequence {
    Finite(Vec<BiComplex>),
    Rule(Rule<BiComplex>),
}

impl BcSequence {
    pub fn from_fn(f: impl Fn(usize) -> BiComplex + Send + Sync + 'static) -> Self {
        BcSequence::Rule(Arc::new(f))
    }

    /// Pairs two finite component sequences of equal length.
    pub fn from_components(f1: &[Complex], f2: &[Complex]) -> Result<Self, OrliczError> {
        if f1.len() != f2.len() {
            return Err(OrliczError::LengthMismatch {
                expected: f1.len(),
                got: f2.len(),
            });
        }
        Ok(BcSequence::Finite(
            f1.iter()
                .zip(f2)
                .map(|(&a, &b)| BiComplex::from_idempotent(a, b))
                .collect(),
        ))
    }

    pub fn zeros(len: usize) -> Self {
        BcSequence::Finite(vec![BiComplex::ZERO; len])
    }

    pub fn get(&self, n: usize) -> BiComplex {
        match self {
            BcSequence::Finite(v) => v.get(n.wrapping_sub(1)).copied().unwrap_or_default(),
            BcSequence::Rule(f) => f(n),
        }
    }

    pub fn finite_len(&self) -> Option<usize> {
        match self {
            BcSequence::Finite(v) => Some(v.len()),
            BcSequence::Rule(_) => None,
        }
    }

    /// The `e` or `e†` component as a complex sequence.
    pub fn component(&self, which: Component) -> ComplexSeq {
        match self {
            BcSequence::Finite(v) => ComplexSeq::Finite(v.iter().map(|z| z.project(which)).collect()),
            BcSequence::Rule(f) => {
                let f = Arc::clone(f);
                ComplexSeq::Rule(Arc::new(move |n| f(n).project(which)))
            }
        }
    }

    pub fn components(&self) -> (ComplexSeq, ComplexSeq) {
        (self.component(Component::First), self.component(Component::Second))
    }

    /// Recombines two component sequences. Finite inputs stay finite; the
    /// shorter one is zero-padded.
    pub fn recompose(f1: &ComplexSeq, f2: &ComplexSeq) -> Self {
        match (f1, f2) {
            (ComplexSeq::Finite(a), ComplexSeq::Finite(b)) => {
                let len = a.len().max(b.len());
                BcSequence::Finite(
                    (1..=len)
                        .map(|n| BiComplex::from_idempotent(f1.get(n), f2.get(n)))
                        .collect(),
                )
            }
            _ => {
                let (f1, f2) = (f1.clone(), f2.clone());
                BcSequence::Rule(Arc::new(move |n| {
                    BiComplex::from_idempotent(f1.get(n), f2.get(n))
                }))
            }
        }
    }

    /// Bicomplex scalar multiple `a f`.
    pub fn scale(&self, a: BiComplex) -> BcSequence {
        match self {
            BcSequence::Finite(v) => BcSequence::Finite(v.iter().map(|&z| a * z).collect()),
            BcSequence::Rule(f) => {
                let f = Arc::clone(f);
                BcSequence::Rule(Arc::new(move |n| a * f(n)))
            }
        }
    }

    /// Checks that the sequence is defined on every atom of `space`.
    pub fn check_against(&self, space: &AtomicMeasureSpace) -> Result<(), OrliczError> {
        check_len(self.finite_len(), space)
    }
}

impl fmt::Debug for BcSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BcSequence::Finite(v) => f.debug_tuple("Finite").field(v).finish(),
            BcSequence::Rule(_) => f.write_str("Rule(..)"),
        }
    }
}

impl From<Vec<BiComplex>> for BcSequence {
    fn from(v: Vec<BiComplex>) -> Self {
        BcSequence::Finite(v)
    }
}

/// Finite sequences on finite spaces must cover every atom exactly; on lazy
/// spaces they may be shorter than the truncation (finite support).
pub(crate) fn check_len(len: Option<usize>, space: &AtomicMeasureSpace) -> Result<(), OrliczError> {
    match len {
        Some(got) if !space.is_lazy() && got != space.len() => Err(OrliczError::LengthMismatch {
            expected: space.len(),
            got,
        }),
        Some(got) if space.is_lazy() && got > space.len() => Err(OrliczError::LengthMismatch {
            expected: space.len(),
            got,
        }),
        _ => Ok(()),
    }
}
