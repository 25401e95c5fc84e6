//! Bicomplex linear operators on sequence spaces.
//!
//! Every operator here splits as `T = e T1 + e† T2` with `T1, T2` acting on
//! the complex component sequences; [`decompose`] exposes that split.

mod bounded;
mod empirical;
mod matrix;

pub use bounded::{
    check_composition_bounded, check_multiplication_bounded, BoundednessReport, LambdaPair, Verdict,
};
pub use empirical::{empirical_operator_norm, random_sequence};
pub use matrix::{invert_operator, reciprocal_condition, BcMatrix, ComplexMatrix, RCOND_THRESHOLD};

use std::sync::Arc;

use crate::bicomplex::{BiComplex, Complex, Component};
use crate::error::OperatorError;
use crate::measure::{AtomicMeasureSpace, IndexMap};
use crate::sequence::{BcSequence, ComplexSeq};

#[derive(Debug, Clone)]
pub enum BcOperator {
    /// `(C_T f)_n = f_{T(n)}`
    Composition(IndexMap),
    /// `(M_theta f)_n = theta_n f_n`
    Multiplication(BcSequence),
    /// `(0, x1, x2, ...)`
    RightShift,
    Dense(BcMatrix),
}

impl BcOperator {
    pub fn identity() -> Self {
        BcOperator::Composition(IndexMap::Identity)
    }
}

/// One idempotent component of a [`BcOperator`], acting on complex sequences.
#[derive(Debug, Clone)]
pub enum ComponentOperator {
    Composition(IndexMap),
    Multiplication(ComplexSeq),
    Dense(ComplexMatrix),
}

fn check_finite_len(len: usize, space: &AtomicMeasureSpace) -> Result<(), OperatorError> {
    if !space.is_lazy() && len != space.len() {
        return Err(OperatorError::DimensionMismatch {
            expected: space.len(),
            got: len,
        });
    }
    if space.is_lazy() && len > space.len() {
        return Err(OperatorError::DimensionMismatch {
            expected: space.len(),
            got: len,
        });
    }
    Ok(())
}

/// Output length of `f o T` for a finite input, or `None` when it must stay a rule.
fn composed_len(map: &IndexMap, len: usize, space: &AtomicMeasureSpace) -> Option<usize> {
    if !space.is_lazy() {
        return Some(space.len());
    }
    map.preimage_extent(len).filter(|&n| n <= space.len())
}

impl ComponentOperator {
    pub fn apply(&self, f: &ComplexSeq, space: &AtomicMeasureSpace) -> Result<ComplexSeq, OperatorError> {
        if let Some(len) = f.finite_len() {
            check_finite_len(len, space)?;
        }
        let zero = Complex::new(0.0, 0.0);
        match self {
            ComponentOperator::Composition(map) => {
                map.validate(space)?;
                let out_len = f.finite_len().and_then(|len| composed_len(map, len, space));
                match out_len {
                    Some(len) => Ok(ComplexSeq::Finite(
                        (1..=len)
                            .map(|n| map.image(n).map_or(zero, |m| f.get(m)))
                            .collect(),
                    )),
                    None => {
                        let (map, f) = (map.clone(), f.clone());
                        Ok(ComplexSeq::Rule(Arc::new(move |n| {
                            map.image(n).map_or(zero, |m| f.get(m))
                        })))
                    }
                }
            }
            ComponentOperator::Multiplication(theta) => {
                if let Some(len) = theta.finite_len() {
                    check_finite_len(len, space)?;
                }
                let len = match (space.is_lazy(), f.finite_len()) {
                    (false, _) => Some(space.len()),
                    (true, Some(len)) => Some(len),
                    (true, None) => None,
                };
                match len {
                    Some(len) => Ok(ComplexSeq::Finite(
                        (1..=len).map(|n| theta.get(n) * f.get(n)).collect(),
                    )),
                    None => {
                        let (theta, f) = (theta.clone(), f.clone());
                        Ok(ComplexSeq::Rule(Arc::new(move |n| theta.get(n) * f.get(n))))
                    }
                }
            }
            ComponentOperator::Dense(m) => {
                if space.is_lazy() {
                    return Err(OperatorError::DenseOnLazySpace);
                }
                let n = space.len();
                if m.nrows() != n || m.ncols() != n {
                    return Err(OperatorError::DimensionMismatch {
                        expected: n,
                        got: m.nrows().max(m.ncols()),
                    });
                }
                let v = nalgebra::DVector::from_fn(n, |i, _| f.get(i + 1));
                Ok(ComplexSeq::Finite((m * v).iter().copied().collect()))
            }
        }
    }
}

/// `T -> (T1, T2)`.
pub fn decompose(op: &BcOperator) -> (ComponentOperator, ComponentOperator) {
    match op {
        BcOperator::Composition(map) => (
            ComponentOperator::Composition(map.clone()),
            ComponentOperator::Composition(map.clone()),
        ),
        BcOperator::RightShift => (
            ComponentOperator::Composition(IndexMap::RightShift),
            ComponentOperator::Composition(IndexMap::RightShift),
        ),
        BcOperator::Multiplication(theta) => {
            let (t1, t2) = theta.components();
            (
                ComponentOperator::Multiplication(t1),
                ComponentOperator::Multiplication(t2),
            )
        }
        BcOperator::Dense(m) => {
            let (m1, m2) = m.components();
            (
                ComponentOperator::Dense(m1.clone()),
                ComponentOperator::Dense(m2.clone()),
            )
        }
    }
}

/// `(T1 f1) e + (T2 f2) e†`.
pub fn apply_components(
    parts: &(ComponentOperator, ComponentOperator),
    f: &BcSequence,
    space: &AtomicMeasureSpace,
) -> Result<BcSequence, OperatorError> {
    let g1 = parts.0.apply(&f.component(Component::First), space)?;
    let g2 = parts.1.apply(&f.component(Component::Second), space)?;
    Ok(BcSequence::recompose(&g1, &g2))
}

/// Applies `op` to `f`, working directly on bicomplex entries.
pub fn apply(op: &BcOperator, f: &BcSequence, space: &AtomicMeasureSpace) -> Result<BcSequence, OperatorError> {
    if let Some(len) = f.finite_len() {
        check_finite_len(len, space)?;
    }
    match op {
        BcOperator::Composition(map) => compose(map, f, space),
        BcOperator::RightShift => compose(&IndexMap::RightShift, f, space),
        BcOperator::Multiplication(theta) => {
            if let Some(len) = theta.finite_len() {
                check_finite_len(len, space)?;
            }
            let len = match (space.is_lazy(), f.finite_len()) {
                (false, _) => Some(space.len()),
                (true, Some(len)) => Some(len),
                (true, None) => None,
            };
            Ok(match len {
                Some(len) => BcSequence::Finite((1..=len).map(|n| theta.get(n) * f.get(n)).collect()),
                None => {
                    let (theta, f) = (theta.clone(), f.clone());
                    BcSequence::Rule(Arc::new(move |n| theta.get(n) * f.get(n)))
                }
            })
        }
        BcOperator::Dense(m) => {
            if space.is_lazy() {
                return Err(OperatorError::DenseOnLazySpace);
            }
            let n = space.len();
            let (rows, cols) = m.shape();
            if rows != n || cols != n {
                return Err(OperatorError::DimensionMismatch {
                    expected: n,
                    got: rows.max(cols),
                });
            }
            let (m1, m2) = m.components();
            let out = (0..n)
                .map(|i| {
                    (0..n).fold(BiComplex::ZERO, |acc, j| {
                        acc + BiComplex::from_idempotent(m1[(i, j)], m2[(i, j)]) * f.get(j + 1)
                    })
                })
                .collect();
            Ok(BcSequence::Finite(out))
        }
    }
}

fn compose(map: &IndexMap, f: &BcSequence, space: &AtomicMeasureSpace) -> Result<BcSequence, OperatorError> {
    map.validate(space)?;
    let out_len = f.finite_len().and_then(|len| composed_len(map, len, space));
    Ok(match out_len {
        Some(len) => BcSequence::Finite(
            (1..=len)
                .map(|n| map.image(n).map_or(BiComplex::ZERO, |m| f.get(m)))
                .collect(),
        ),
        None => {
            let (map, f) = (map.clone(), f.clone());
            BcSequence::Rule(Arc::new(move |n| {
                map.image(n).map_or(BiComplex::ZERO, |m| f.get(m))
            }))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::WeightRule;

    fn seq(vals: &[(f64, f64)]) -> BcSequence {
        BcSequence::Finite(
            vals.iter()
                .map(|&(a, b)| BiComplex::from_idempotent(Complex::new(a, 0.0), Complex::new(b, 0.0)))
                .collect(),
        )
    }

    fn entries(f: &BcSequence, n: usize) -> Vec<BiComplex> {
        (1..=n).map(|k| f.get(k)).collect()
    }

    #[test]
    fn right_shift_prepends_zero() {
        let space = AtomicMeasureSpace::lazy(WeightRule::Counting, 100).unwrap();
        let f = seq(&[(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)]);
        let g = apply(&BcOperator::RightShift, &f, &space).unwrap();
        assert_eq!(g.finite_len(), Some(4));
        let mut expected = vec![BiComplex::ZERO];
        expected.extend(entries(&f, 3));
        assert_eq!(entries(&g, 4), expected);

        let finite = AtomicMeasureSpace::counting(3).unwrap();
        let g = apply(&BcOperator::RightShift, &f, &finite).unwrap();
        assert_eq!(entries(&g, 3), vec![BiComplex::ZERO, f.get(1), f.get(2)]);
    }

    #[test]
    fn multiplication_by_constant() {
        let space = AtomicMeasureSpace::counting(3).unwrap();
        let theta = BiComplex::E.scale(2.0) + BiComplex::E_DAGGER.scale(3.0);
        let op = BcOperator::Multiplication(BcSequence::Finite(vec![theta; 3]));
        let g = apply(&op, &BcSequence::Finite(vec![BiComplex::ONE; 3]), &space).unwrap();
        assert_eq!(entries(&g, 3), vec![theta; 3]);
    }

    #[test]
    fn identity_composition_is_noop() {
        let space = AtomicMeasureSpace::finite(vec![1.0, 2.0]).unwrap();
        let f = seq(&[(1.0, -1.0), (0.5, 7.0)]);
        let g = apply(&BcOperator::identity(), &f, &space).unwrap();
        assert_eq!(entries(&g, 2), entries(&f, 2));
    }

    #[test]
    fn composition_with_table() {
        let space = AtomicMeasureSpace::finite(vec![1.0, 2.0, 3.0]).unwrap();
        let f = seq(&[(1.0, 10.0), (2.0, 20.0), (3.0, 30.0)]);
        let g = apply(&BcOperator::Composition(IndexMap::table(vec![1, 1, 2])), &f, &space).unwrap();
        assert_eq!(entries(&g, 3), vec![f.get(1), f.get(1), f.get(2)]);
    }

    #[test]
    fn decomposition_examples() {
        let theta = BcSequence::Finite(vec![BiComplex::from_real4(1.0, 2.0, 3.0, 4.0)]);
        let (t1, t2) = decompose(&BcOperator::Multiplication(theta.clone()));
        match (t1, t2) {
            (ComponentOperator::Multiplication(a), ComponentOperator::Multiplication(b)) => {
                assert_eq!(a.get(1), theta.get(1).b1());
                assert_eq!(b.get(1), theta.get(1).b2());
            }
            other => panic!("unexpected {other:?}"),
        }
        let map = IndexMap::table(vec![2, 1]);
        match decompose(&BcOperator::Composition(map.clone())) {
            (ComponentOperator::Composition(a), ComponentOperator::Composition(b)) => {
                assert_eq!(a, map);
                assert_eq!(b, map);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dense_apply_matches_components() {
        let space = AtomicMeasureSpace::counting(2).unwrap();
        let c = |re: f64, im: f64| Complex::new(re, im);
        let m = BcMatrix::from_rows(
            &[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(3.0, 0.5)]],
            &[vec![c(-1.0, 0.0), c(0.0, 2.0)], vec![c(4.0, 0.0), c(1.0, 1.0)]],
        )
        .unwrap();
        let f = seq(&[(1.0, 2.0), (-3.0, 0.5)]);
        let op = BcOperator::Dense(m);
        let direct = apply(&op, &f, &space).unwrap();
        let split = apply_components(&decompose(&op), &f, &space).unwrap();
        for n in 1..=2 {
            assert!((direct.get(n) - split.get(n)).norm() < 1e-14);
        }
    }

    #[test]
    fn dimension_errors() {
        let space = AtomicMeasureSpace::counting(3).unwrap();
        let f = BcSequence::zeros(2);
        assert!(apply(&BcOperator::identity(), &f, &space).is_err());
        let lazy = AtomicMeasureSpace::lazy(WeightRule::Counting, 10).unwrap();
        let dense = BcOperator::Dense(BcMatrix::identity(2));
        assert!(matches!(
            apply(&dense, &BcSequence::zeros(2), &lazy),
            Err(OperatorError::DenseOnLazySpace)
        ));
    }

    #[test]
    fn rule_input_stays_rule() {
        let lazy = AtomicMeasureSpace::lazy(WeightRule::Counting, 1000).unwrap();
        let f = BcSequence::from_fn(|n| BiComplex::from_real(n as f64));
        let g = apply(&BcOperator::RightShift, &f, &lazy).unwrap();
        assert!(g.finite_len().is_none());
        assert_eq!(g.get(1), BiComplex::ZERO);
        assert_eq!(g.get(5), BiComplex::from_real(4.0));
    }
}
