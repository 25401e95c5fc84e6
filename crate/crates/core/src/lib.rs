//! Bicomplex numbers, Orlicz sequence spaces over purely atomic measures, and
//! composition and multiplication operators acting on them.
//!
//! Every bicomplex object is handled through its idempotent decomposition
//! `Z = b1 e + b2 e†`, so ring operations, norms and operators act
//! componentwise on pairs of complex objects.

pub mod bicomplex;
pub mod cli;
pub mod error;
pub mod json;
pub mod measure;
pub mod operators;
pub mod orlicz;
pub mod sequence;

pub use bicomplex::{BiComplex, Complex};
pub use error::{BicomplexError, InputError, MeasureError, OperatorError, OrliczError};
pub use measure::{AtomicMeasureSpace, IndexMap, WeightRule};
pub use operators::BcOperator;
pub use orlicz::{NormOptions, OrliczFunction};
pub use sequence::{BcSequence, ComplexSeq};
