use nalgebra::DMatrix;

use crate::bicomplex::{Complex, Component};
use crate::error::OperatorError;

/// Reciprocal condition numbers below this are treated as singular.
pub const RCOND_THRESHOLD: f64 = 1e-12;

pub type ComplexMatrix = DMatrix<Complex>;

/// A bicomplex matrix `M1 e + M2 e†`.
#[derive(Debug, Clone, PartialEq)]
pub struct BcMatrix {
    m1: ComplexMatrix,
    m2: ComplexMatrix,
}

impl BcMatrix {
    pub fn new(m1: ComplexMatrix, m2: ComplexMatrix) -> Result<Self, OperatorError> {
        if m1.shape() != m2.shape() {
            return Err(OperatorError::ShapeMismatch);
        }
        if m1.iter().chain(m2.iter()).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(OperatorError::NonFinite);
        }
        Ok(BcMatrix { m1, m2 })
    }

    /// Row-major construction from nested vectors.
    pub fn from_rows(m1: &[Vec<Complex>], m2: &[Vec<Complex>]) -> Result<Self, OperatorError> {
        Self::new(rows_to_matrix(m1)?, rows_to_matrix(m2)?)
    }

    pub fn identity(n: usize) -> Self {
        BcMatrix {
            m1: ComplexMatrix::identity(n, n),
            m2: ComplexMatrix::identity(n, n),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.m1.shape()
    }

    pub fn components(&self) -> (&ComplexMatrix, &ComplexMatrix) {
        (&self.m1, &self.m2)
    }

    pub fn component(&self, which: Component) -> &ComplexMatrix {
        match which {
            Component::First => &self.m1,
            Component::Second => &self.m2,
        }
    }

    pub fn mul(&self, rhs: &BcMatrix) -> Result<BcMatrix, OperatorError> {
        if self.shape().1 != rhs.shape().0 {
            return Err(OperatorError::DimensionMismatch {
                expected: self.shape().1,
                got: rhs.shape().0,
            });
        }
        Ok(BcMatrix {
            m1: &self.m1 * &rhs.m1,
            m2: &self.m2 * &rhs.m2,
        })
    }

    /// Largest entry modulus of `self - other` across both components.
    pub fn max_abs_diff(&self, other: &BcMatrix) -> f64 {
        let d1 = (&self.m1 - &other.m1).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let d2 = (&self.m2 - &other.m2).iter().map(|z| z.norm()).fold(0.0, f64::max);
        d1.max(d2)
    }

    pub fn to_rows(&self) -> (Vec<Vec<Complex>>, Vec<Vec<Complex>>) {
        (matrix_to_rows(&self.m1), matrix_to_rows(&self.m2))
    }
}

fn rows_to_matrix(rows: &[Vec<Complex>]) -> Result<ComplexMatrix, OperatorError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(OperatorError::DimensionMismatch {
            expected: ncols,
            got: bad.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// `sigma_min / sigma_max`; zero for empty or all-zero matrices.
pub fn reciprocal_condition(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}

/// `(M1 e + M2 e†)^-1 = M1^-1 e + M2^-1 e†`; fails naming every singular
/// component.
pub fn invert_operator(a: &BcMatrix) -> Result<BcMatrix, OperatorError> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(OperatorError::NotSquare { rows, cols });
    }
    let singular: Vec<Component> = [Component::First, Component::Second]
        .into_iter()
        .filter(|&c| reciprocal_condition(a.component(c)) < RCOND_THRESHOLD)
        .collect();
    if !singular.is_empty() {
        return Err(OperatorError::NotInvertible { singular });
    }
    let inv = |m: &ComplexMatrix, c: Component| {
        m.clone()
            .try_inverse()
            .ok_or_else(|| OperatorError::NotInvertible { singular: vec![c] })
    };
    Ok(BcMatrix {
        m1: inv(&a.m1, Component::First)?,
        m2: inv(&a.m2, Component::Second)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled_identity(n: usize, s: f64) -> ComplexMatrix {
        ComplexMatrix::identity(n, n) * Complex::new(s, 0.0)
    }

    #[test]
    fn diagonal_inverse() {
        let a = BcMatrix::new(scaled_identity(3, 2.0), scaled_identity(3, 4.0)).unwrap();
        let inv = invert_operator(&a).unwrap();
        let expected = BcMatrix::new(scaled_identity(3, 0.5), scaled_identity(3, 0.25)).unwrap();
        assert!(inv.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_divisor_operator_names_component() {
        let a = BcMatrix::new(scaled_identity(2, 1.0), ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(
            invert_operator(&a),
            Err(OperatorError::NotInvertible {
                singular: vec![Component::Second]
            })
        );
        let b = BcMatrix::new(ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(
            invert_operator(&b),
            Err(OperatorError::NotInvertible {
                singular: vec![Component::First, Component::Second]
            })
        );
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(BcMatrix::new(ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(3, 3)).is_err());
        let rect = BcMatrix::new(ComplexMatrix::zeros(2, 3), ComplexMatrix::zeros(2, 3)).unwrap();
        assert!(matches!(invert_operator(&rect), Err(OperatorError::NotSquare { .. })));
        let ragged = vec![vec![Complex::new(1.0, 0.0)], vec![]];
        assert!(BcMatrix::from_rows(&ragged, &ragged).is_err());
    }

    #[test]
    fn nearly_singular_is_rejected() {
        let mut m = ComplexMatrix::identity(2, 2);
        m[(1, 1)] = Complex::new(1e-14, 0.0);
        let a = BcMatrix::new(ComplexMatrix::identity(2, 2), m).unwrap();
        assert!(invert_operator(&a).is_err());
    }
}
