use serde::{Deserialize, Serialize};

use super::{BiComplex, Complex};

/// A subset of `C(i)` with decidable membership, used as one idempotent
/// component of a set `U = U1 e + U2 e†`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentSet {
    /// All of `C(i)`.
    Everything,
    /// A finite set of points; a point matches when within `tol` of one of them.
    Points {
        #[serde(with = "crate::json::complex_vec")]
        points: Vec<Complex>,
        #[serde(default)]
        tol: f64,
    },
    /// Closed disc `|z - center| <= radius`.
    Disc {
        #[serde(with = "crate::json::complex")]
        center: Complex,
        radius: f64,
    },
    /// Closed half-plane `Re(conj(normal) z) <= offset`.
    HalfPlane {
        #[serde(with = "crate::json::complex")]
        normal: Complex,
        offset: f64,
    },
}

impl ComponentSet {
    pub fn points(points: impl Into<Vec<Complex>>) -> Self {
        ComponentSet::Points {
            points: points.into(),
            tol: 0.0,
        }
    }

    pub fn contains(&self, z: Complex) -> bool {
        match self {
            ComponentSet::Everything => true,
            ComponentSet::Points { points, tol } => points.iter().any(|p| (p - z).norm() <= *tol),
            ComponentSet::Disc { center, radius } => (z - center).norm() <= *radius,
            ComponentSet::HalfPlane { normal, offset } => (normal.conj() * z).re <= *offset,
        }
    }
}

/// Characteristic function of `U = U1 e + U2 e†` evaluated at `z`.
pub fn indicator(u1: &ComponentSet, u2: &ComponentSet, z: &BiComplex) -> u8 {
    let (b1, b2) = z.idempotent();
    u8::from(u1.contains(b1) && u2.contains(b2))
}
