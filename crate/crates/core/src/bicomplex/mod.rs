//! Bicomplex arithmetic in the idempotent basis.
//!
//! A bicomplex number `Z = z1 + z2 j` with `z1, z2` in `C(i)` is stored by
//! its idempotent coordinates `Z = b1 e + b2 e†`, where
//! `e = (1 + ij)/2`, `e† = (1 - ij)/2`, `b1 = z1 - i z2` and `b2 = z1 + i z2`.
//! In this basis addition, multiplication and inversion are componentwise.

mod poly;
mod sets;

pub use poly::{poly_roots, PolyRoot};
pub use sets::{indicator, ComponentSet};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::BicomplexError;

/// Complex scalar over `C(i)`.
pub type Complex = num_complex::Complex64;

const I: Complex = Complex::new(0.0, 1.0);

/// Default zero-divisor tolerance used by [`BiComplex::classify_default`] and
/// [`BiComplex::invert`].
pub const DEFAULT_CLASSIFY_EPS: f64 = 1e-12;

/// Which idempotent coordinate is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// The `e` coordinate, `b1`.
    First,
    /// The `e†` coordinate, `b2`.
    Second,
}

impl Component {
    pub fn index(self) -> usize {
        match self {
            Component::First => 1,
            Component::Second => 2,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {}", self.index())
    }
}

/// Result of [`BiComplex::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "vanishing")]
pub enum Classification {
    Zero,
    /// Exactly one idempotent coordinate vanishes; it is named here.
    ZeroDivisor(Component),
    Invertible,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Zero => f.write_str("zero"),
            Classification::ZeroDivisor(c) => write!(f, "zero divisor, {c} vanishes"),
            Classification::Invertible => f.write_str("invertible"),
        }
    }
}

/// The three conjugations on `BC`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjugation {
    /// `conj(z1) + conj(z2) j`
    Bar,
    /// `z1 - z2 j`
    Dagger,
    /// `conj(z1) - conj(z2) j`
    Star,
}

/// A bicomplex number in idempotent coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BiComplex {
    b1: Complex,
    b2: Complex,
}

fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl BiComplex {
    pub const ZERO: BiComplex = BiComplex {
        b1: Complex::new(0.0, 0.0),
        b2: Complex::new(0.0, 0.0),
    };
    pub const ONE: BiComplex = BiComplex {
        b1: Complex::new(1.0, 0.0),
        b2: Complex::new(1.0, 0.0),
    };
    /// `e = (1 + ij)/2`
    pub const E: BiComplex = BiComplex {
        b1: Complex::new(1.0, 0.0),
        b2: Complex::new(0.0, 0.0),
    };
    /// `e† = (1 - ij)/2`
    pub const E_DAGGER: BiComplex = BiComplex {
        b1: Complex::new(0.0, 0.0),
        b2: Complex::new(1.0, 0.0),
    };
    /// `j`, with idempotent coordinates `(-i, i)`.
    pub const J: BiComplex = BiComplex {
        b1: Complex::new(0.0, -1.0),
        b2: Complex::new(0.0, 1.0),
    };
    /// `k = ij = e - e†`
    pub const K: BiComplex = BiComplex {
        b1: Complex::new(1.0, 0.0),
        b2: Complex::new(-1.0, 0.0),
    };

    /// Builds `b1 e + b2 e†` without validation.
    pub const fn from_idempotent(b1: Complex, b2: Complex) -> Self {
        BiComplex { b1, b2 }
    }

    pub fn try_from_idempotent(b1: Complex, b2: Complex) -> Result<Self, BicomplexError> {
        if is_finite(b1) && is_finite(b2) {
            Ok(BiComplex { b1, b2 })
        } else {
            Err(BicomplexError::NonFinite)
        }
    }

    /// Builds `z1 + z2 j` without validation.
    pub fn from_cartesian(z1: Complex, z2: Complex) -> Self {
        BiComplex {
            b1: z1 - I * z2,
            b2: z1 + I * z2,
        }
    }

    pub fn try_from_cartesian(z1: Complex, z2: Complex) -> Result<Self, BicomplexError> {
        if is_finite(z1) && is_finite(z2) {
            Ok(Self::from_cartesian(z1, z2))
        } else {
            Err(BicomplexError::NonFinite)
        }
    }

    /// Builds `a + b i + c j + d k` from its four real coordinates.
    pub fn from_real4(a: f64, b: f64, c: f64, d: f64) -> Self {
        // z1 = a + b i, z2 = c + d i since (c + d i) j = c j + d k.
        Self::from_cartesian(Complex::new(a, b), Complex::new(c, d))
    }

    /// A complex number `z` embedded as `z e + z e†`.
    pub fn from_complex(z: Complex) -> Self {
        BiComplex { b1: z, b2: z }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex::new(x, 0.0))
    }

    /// Idempotent coordinates `(b1, b2)`.
    pub fn idempotent(&self) -> (Complex, Complex) {
        (self.b1, self.b2)
    }

    /// Cartesian coordinates `(z1, z2)` with `Z = z1 + z2 j`.
    pub fn cartesian(&self) -> (Complex, Complex) {
        ((self.b1 + self.b2) * 0.5, I * (self.b1 - self.b2) * 0.5)
    }

    /// Real coordinates `(a, b, c, d)` of `a + b i + c j + d k`.
    pub fn real4(&self) -> [f64; 4] {
        let (z1, z2) = self.cartesian();
        [z1.re, z1.im, z2.re, z2.im]
    }

    /// Projection `pi_l` onto the `l`-th idempotent coordinate.
    pub fn project(&self, which: Component) -> Complex {
        match which {
            Component::First => self.b1,
            Component::Second => self.b2,
        }
    }

    pub fn b1(&self) -> Complex {
        self.b1
    }

    pub fn b2(&self) -> Complex {
        self.b2
    }

    pub fn is_finite(&self) -> bool {
        is_finite(self.b1) && is_finite(self.b2)
    }

    pub fn conjugate(&self, kind: Conjugation) -> Self {
        match kind {
            // conj(z1) - i conj(z2) = conj(z1 + i z2) = conj(b2)
            Conjugation::Bar => BiComplex {
                b1: self.b2.conj(),
                b2: self.b1.conj(),
            },
            Conjugation::Dagger => BiComplex {
                b1: self.b2,
                b2: self.b1,
            },
            Conjugation::Star => BiComplex {
                b1: self.b1.conj(),
                b2: self.b2.conj(),
            },
        }
    }

    /// `||Z|| = (1/sqrt 2) sqrt(|b1|^2 + |b2|^2)`, equal to the Euclidean norm
    /// of `(a, b, c, d)`.
    pub fn norm(&self) -> f64 {
        self.b1.norm().hypot(self.b2.norm()) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Classifies `Z` against the null cone. The threshold is `eps` scaled by
    /// `||Z||` when `||Z|| >= 1`, and absolute otherwise.
    pub fn classify(&self, eps: f64) -> Classification {
        let thr = eps * self.norm().max(1.0);
        match (self.b1.norm() <= thr, self.b2.norm() <= thr) {
            (true, true) => Classification::Zero,
            (true, false) => Classification::ZeroDivisor(Component::First),
            (false, true) => Classification::ZeroDivisor(Component::Second),
            (false, false) => Classification::Invertible,
        }
    }

    pub fn classify_default(&self) -> Classification {
        self.classify(DEFAULT_CLASSIFY_EPS)
    }

    /// `Z^-1 = b1^-1 e + b2^-1 e†`.
    pub fn invert(&self) -> Result<Self, BicomplexError> {
        self.invert_with_eps(DEFAULT_CLASSIFY_EPS)
    }

    pub fn invert_with_eps(&self, eps: f64) -> Result<Self, BicomplexError> {
        match self.classify(eps) {
            Classification::Invertible => Ok(BiComplex {
                b1: self.b1.inv(),
                b2: self.b2.inv(),
            }),
            class => Err(BicomplexError::NotInvertible(class)),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        BiComplex {
            b1: self.b1 * s,
            b2: self.b2 * s,
        }
    }
}

impl Add for BiComplex {
    type Output = BiComplex;
    fn add(self, rhs: BiComplex) -> BiComplex {
        BiComplex {
            b1: self.b1 + rhs.b1,
            b2: self.b2 + rhs.b2,
        }
    }
}

impl Sub for BiComplex {
    type Output = BiComplex;
    fn sub(self, rhs: BiComplex) -> BiComplex {
        BiComplex {
            b1: self.b1 - rhs.b1,
            b2: self.b2 - rhs.b2,
        }
    }
}

impl Mul for BiComplex {
    type Output = BiComplex;
    fn mul(self, rhs: BiComplex) -> BiComplex {
        BiComplex {
            b1: self.b1 * rhs.b1,
            b2: self.b2 * rhs.b2,
        }
    }
}

impl Neg for BiComplex {
    type Output = BiComplex;
    fn neg(self) -> BiComplex {
        BiComplex {
            b1: -self.b1,
            b2: -self.b2,
        }
    }
}

impl fmt::Display for BiComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})e + ({})e†", self.b1, self.b2)
    }
}

/// Binary arithmetic selector used by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arithmetic(op: ArithOp, lhs: BiComplex, rhs: BiComplex) -> BiComplex {
    match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
    }
}

/// A pair of extended nonnegative reals on the `(e, e†)` axes, e.g. the value
/// of the bicomplex modular. `+inf` is a legal coordinate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HyperbolicValue {
    #[serde(with = "crate::json::extended")]
    pub h1: f64,
    #[serde(with = "crate::json::extended")]
    pub h2: f64,
}

impl HyperbolicValue {
    pub fn new(h1: f64, h2: f64) -> Result<Self, BicomplexError> {
        if h1.is_nan() || h2.is_nan() || h1 < 0.0 || h2 < 0.0 {
            return Err(BicomplexError::InvalidHyperbolic { h1, h2 });
        }
        Ok(HyperbolicValue { h1, h2 })
    }

    /// The value as a bicomplex number `h1 e + h2 e†`; `None` when a
    /// coordinate is infinite.
    pub fn to_bicomplex(&self) -> Option<BiComplex> {
        (self.h1.is_finite() && self.h2.is_finite()).then(|| {
            BiComplex::from_idempotent(Complex::new(self.h1, 0.0), Complex::new(self.h2, 0.0))
        })
    }
}
