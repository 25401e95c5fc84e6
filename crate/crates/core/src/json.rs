//! JSON wire formats for inputs and report values.
//!
//! Complex numbers are written `[re, im]` (a bare number is accepted on
//! input). Bicomplex numbers carry both coordinate systems on output:
//!
//! ```json
//! {"cartesian": {"z1": [1, 0], "z2": [0, 0]}, "idempotent": {"b1": [1, 0], "b2": [1, 0]}}
//! ```
//!
//! On input either form suffices; when both are given they must agree.
//! Extended reals encode `+inf` as the string `"inf"`.

use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::bicomplex::{BiComplex, Complex, ComponentSet};
use crate::error::InputError;
use crate::measure::{AtomicMeasureSpace, IndexMap, WeightRule, DEFAULT_N_MAX};
use crate::operators::{BcMatrix, BcOperator};
use crate::orlicz::OrliczFunction;
use crate::sequence::BcSequence;

/// Relative disagreement tolerated between the two forms of one bicomplex input.
const FORM_AGREEMENT_TOL: f64 = 1e-9;

/// `f64` that may be `+inf`, `-inf` or NaN on the wire.
pub mod extended {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(ExtendedVisitor)
    }

    struct ExtendedVisitor;

    impl Visitor<'_> for ExtendedVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
            }
        }
    }
}

pub mod extended_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => super::extended::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::extended")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// An extended real for report values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extended(#[serde(with = "extended")] pub f64);

/// A finite complex number on the wire.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireComplex(pub Complex);

impl Serialize for WireComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.0.re)?;
        t.serialize_element(&self.0.im)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for WireComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ComplexVisitor)
    }
}

struct ComplexVisitor;

fn finite_complex<E: de::Error>(re: f64, im: f64) -> Result<WireComplex, E> {
    if re.is_finite() && im.is_finite() {
        Ok(WireComplex(Complex::new(re, im)))
    } else {
        Err(E::custom("complex entries must be finite"))
    }
}

impl<'de> Visitor<'de> for ComplexVisitor {
    type Value = WireComplex;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a complex number [re, im] or a real number")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<WireComplex, E> {
        finite_complex(v, 0.0)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<WireComplex, E> {
        finite_complex(v as f64, 0.0)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<WireComplex, E> {
        finite_complex(v as f64, 0.0)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<WireComplex, A::Error> {
        let re: f64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let im: f64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        finite_complex(re, im)
    }
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        WireComplex(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        Ok(WireComplex::deserialize(d)?.0)
    }
}

pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&z| WireComplex(z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex>, D::Error> {
        Ok(Vec::<WireComplex>::deserialize(d)?
            .into_iter()
            .map(|w| w.0)
            .collect())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CartesianRepr {
    z1: WireComplex,
    z2: WireComplex,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdempotentRepr {
    b1: WireComplex,
    b2: WireComplex,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BiComplexRepr {
    #[serde(skip_serializing_if = "Option::is_none")]
    cartesian: Option<CartesianRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    idempotent: Option<IdempotentRepr>,
}

/// A bicomplex number on the wire.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireBiComplex(pub BiComplex);

impl Serialize for WireBiComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (z1, z2) = self.0.cartesian();
        let (b1, b2) = self.0.idempotent();
        BiComplexRepr {
            cartesian: Some(CartesianRepr {
                z1: WireComplex(z1),
                z2: WireComplex(z2),
            }),
            idempotent: Some(IdempotentRepr {
                b1: WireComplex(b1),
                b2: WireComplex(b2),
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WireBiComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BiComplexRepr::deserialize(d)?;
        let from_cart = repr
            .cartesian
            .map(|c| BiComplex::try_from_cartesian(c.z1.0, c.z2.0))
            .transpose()
            .map_err(de::Error::custom)?;
        let from_idem = repr
            .idempotent
            .map(|c| BiComplex::try_from_idempotent(c.b1.0, c.b2.0))
            .transpose()
            .map_err(de::Error::custom)?;
        match (from_cart, from_idem) {
            (None, None) => Err(de::Error::custom(
                "bicomplex value needs a \"cartesian\" or \"idempotent\" form",
            )),
            (Some(z), None) | (None, Some(z)) => Ok(WireBiComplex(z)),
            (Some(c), Some(i)) => {
                let scale = c.norm().max(i.norm()).max(1.0);
                if (c - i).norm() > FORM_AGREEMENT_TOL * scale {
                    Err(de::Error::custom(format!(
                        "cartesian and idempotent forms disagree: {c} vs {i}"
                    )))
                } else {
                    Ok(WireBiComplex(i))
                }
            }
        }
    }
}

pub mod bicomplex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &BiComplex, s: S) -> Result<S::Ok, S::Error> {
        WireBiComplex(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BiComplex, D::Error> {
        Ok(WireBiComplex::deserialize(d)?.0)
    }
}

/// Atom counts written either as integers or as integral floats such as `1e6`.
fn budget<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
    let Some(v) = Option::<f64>::deserialize(d)? else {
        return Ok(None);
    };
    if !(v >= 1.0 && v.fract() == 0.0 && v <= usize::MAX as f64) {
        return Err(de::Error::custom(format!(
            "n_max must be a positive integer, got {v}"
        )));
    }
    Ok(Some(v as usize))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceRepr {
    weights: Option<Vec<f64>>,
    weights_rule: Option<String>,
    #[serde(default, deserialize_with = "budget")]
    n_max: Option<usize>,
    map: Option<Vec<usize>>,
    map_rule: Option<String>,
    #[serde(default)]
    allow_null_atoms: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapRepr {
    map: Option<Vec<usize>>,
    map_rule: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiplicationRepr {
    theta: Vec<WireBiComplex>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DenseRepr {
    m1: Vec<Vec<WireComplex>>,
    m2: Vec<Vec<WireComplex>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum OperatorRepr {
    Composition(MapRepr),
    Multiplication(MultiplicationRepr),
    RightShift(Empty),
    Dense(DenseRepr),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetsRepr {
    u1: ComponentSet,
    u2: ComponentSet,
}

/// A measure space file, optionally carrying a transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceInput {
    pub space: AtomicMeasureSpace,
    pub map: Option<IndexMap>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, context: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|source| InputError::Json {
        context: context.to_string(),
        source,
    })
}

fn schema(context: &str, message: impl fmt::Display) -> InputError {
    InputError::Schema {
        context: context.to_string(),
        message: message.to_string(),
    }
}

fn map_from_parts(
    map: Option<Vec<usize>>,
    map_rule: Option<String>,
    context: &str,
) -> Result<Option<IndexMap>, InputError> {
    match (map, map_rule) {
        (Some(_), Some(_)) => Err(schema(context, "give either \"map\" or \"map_rule\", not both")),
        (Some(t), None) => Ok(Some(IndexMap::table(t))),
        (None, Some(rule)) => rule
            .parse()
            .map(Some)
            .map_err(|e| schema(&format!("{context}: map_rule"), e)),
        (None, None) => Ok(None),
    }
}

pub fn parse_bicomplex(text: &str, context: &str) -> Result<BiComplex, InputError> {
    Ok(from_json::<WireBiComplex>(text, context)?.0)
}

/// A JSON list of bicomplex values.
pub fn parse_sequence(text: &str, context: &str) -> Result<BcSequence, InputError> {
    let items: Vec<WireBiComplex> = from_json(text, context)?;
    Ok(BcSequence::Finite(items.into_iter().map(|w| w.0).collect()))
}

/// `{"weights": [..], "map": [..]}` or `{"weights_rule": "counting", "n_max": N}`.
pub fn parse_space(text: &str, context: &str) -> Result<SpaceInput, InputError> {
    let repr: SpaceRepr = from_json(text, context)?;
    let space = match (repr.weights, repr.weights_rule) {
        (Some(_), Some(_)) => {
            return Err(schema(context, "give either \"weights\" or \"weights_rule\", not both"))
        }
        (None, None) => return Err(schema(context, "missing \"weights\" or \"weights_rule\"")),
        (Some(w), None) => {
            if repr.n_max.is_some() {
                return Err(schema(context, "\"n_max\" only applies to \"weights_rule\" spaces"));
            }
            let built = if repr.allow_null_atoms {
                AtomicMeasureSpace::diagnostic(w)
            } else {
                AtomicMeasureSpace::finite(w)
            };
            built.map_err(|e| schema(&format!("{context}: weights"), e))?
        }
        (None, Some(rule)) => {
            if repr.allow_null_atoms {
                return Err(schema(context, "\"allow_null_atoms\" only applies to finite weights"));
            }
            let rule: WeightRule = rule
                .parse()
                .map_err(|e| schema(&format!("{context}: weights_rule"), e))?;
            AtomicMeasureSpace::lazy(rule, repr.n_max.unwrap_or(DEFAULT_N_MAX))
                .map_err(|e| schema(context, e))?
        }
    };
    let map = map_from_parts(repr.map, repr.map_rule, context)?;
    if let Some(m) = &map {
        m.validate(&space).map_err(|e| schema(&format!("{context}: map"), e))?;
    }
    Ok(SpaceInput { space, map })
}

/// `{"map": [..]}` with 1-based images, or `{"map_rule": "identity" | "right_shift" | "blocks"}`.
pub fn parse_map(text: &str, context: &str) -> Result<IndexMap, InputError> {
    let repr: MapRepr = from_json(text, context)?;
    map_from_parts(repr.map, repr.map_rule, context)?
        .ok_or_else(|| schema(context, "missing \"map\" or \"map_rule\""))
}

pub fn parse_operator(text: &str, context: &str) -> Result<BcOperator, InputError> {
    let repr: OperatorRepr = from_json(text, context)?;
    match repr {
        OperatorRepr::Composition(m) => {
            let map = map_from_parts(m.map, m.map_rule, context)?
                .ok_or_else(|| schema(context, "composition needs \"map\" or \"map_rule\""))?;
            Ok(BcOperator::Composition(map))
        }
        OperatorRepr::Multiplication(m) => Ok(BcOperator::Multiplication(BcSequence::Finite(
            m.theta.into_iter().map(|w| w.0).collect(),
        ))),
        OperatorRepr::RightShift(Empty {}) => Ok(BcOperator::RightShift),
        OperatorRepr::Dense(m) => {
            let rows = |v: Vec<Vec<WireComplex>>| -> Vec<Vec<Complex>> {
                v.into_iter()
                    .map(|r| r.into_iter().map(|w| w.0).collect())
                    .collect()
            };
            BcMatrix::from_rows(&rows(m.m1), &rows(m.m2))
                .map(BcOperator::Dense)
                .map_err(|e| schema(&format!("{context}: dense"), e))
        }
    }
}

/// `{"u1": set, "u2": set}` for the indicator of `U1 e + U2 e†`.
pub fn parse_sets(text: &str, context: &str) -> Result<(ComponentSet, ComponentSet), InputError> {
    let repr: SetsRepr = from_json(text, context)?;
    Ok((repr.u1, repr.u2))
}

pub fn parse_phi(spec: &str) -> Result<OrliczFunction, InputError> {
    spec.parse().map_err(|e| schema("--phi", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bicomplex_forms() {
        let cart = parse_bicomplex(r#"{"cartesian": {"z1": [1, 2], "z2": [3, 4]}}"#, "t").unwrap();
        assert_eq!(cart, BiComplex::from_cartesian(Complex::new(1.0, 2.0), Complex::new(3.0, 4.0)));
        let idem = parse_bicomplex(r#"{"idempotent": {"b1": 3, "b2": [4, 0]}}"#, "t").unwrap();
        assert_eq!(idem.idempotent(), (Complex::new(3.0, 0.0), Complex::new(4.0, 0.0)));
        let text = serde_json::to_string(&WireBiComplex(cart)).unwrap();
        assert!(text.contains("cartesian") && text.contains("idempotent"));
        let back = parse_bicomplex(&text, "t").unwrap();
        assert!((back - cart).norm() < 1e-15);
    }

    #[test]
    fn bicomplex_rejects() {
        for bad in [
            r#"{}"#,
            r#"{"cartesian": {"z1": [1, 2]}}"#,
            r#"{"cartesian": {"z1": [1, 2], "z2": [0, 0], "z3": [0, 0]}}"#,
            r#"{"polar": 1}"#,
            r#"{"cartesian": {"z1": [1, 2, 3], "z2": [0, 0]}}"#,
            r#"{"cartesian": {"z1": [1, 0], "z2": [0, 0]}, "idempotent": {"b1": [2, 0], "b2": [1, 0]}}"#,
            r#"[1, 2]"#,
        ] {
            assert!(parse_bicomplex(bad, "t").is_err(), "{bad}");
        }
    }

    #[test]
    fn diagnostics_point_at_location() {
        let err = parse_sequence("[\n  {\"idempotent\": {\"b1\": [1, 0], \"b2\": [0, 0]}},\n  {\"oops\": 1}\n]", "seq.json")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("seq.json: "), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn spaces() {
        let s = parse_space(r#"{"weights": [1, 2], "map": [2, 2]}"#, "t").unwrap();
        assert_eq!(s.space.len(), 2);
        assert_eq!(s.map, Some(IndexMap::table(vec![2, 2])));
        let lazy = parse_space(r#"{"weights_rule": "counting", "n_max": 1e6}"#, "t").unwrap();
        assert_eq!(lazy.space.n_max(), Some(1_000_000));
        let geo = parse_space(r#"{"weights_rule": "geometric:0.5"}"#, "t").unwrap();
        assert_eq!(geo.space.rule(), Some(WeightRule::Geometric(0.5)));
        let shift = parse_space(r#"{"weights_rule": "counting", "map_rule": "right_shift"}"#, "t").unwrap();
        assert_eq!(shift.map, Some(IndexMap::RightShift));
        for bad in [
            r#"{"weights": []}"#,
            r#"{"weights": [1, -1]}"#,
            r#"{"weights": [1], "weights_rule": "counting"}"#,
            r#"{"weights": [1, 1], "map": [3, 1]}"#,
            r#"{"weights_rule": "counting", "n_max": 0}"#,
            r#"{"weights_rule": "counting", "n_max": 2.5}"#,
            r#"{"weights_rule": "poisson"}"#,
            r#"{"weights_rule": "counting", "map": [1]}"#,
        ] {
            assert!(parse_space(bad, "t").is_err(), "{bad}");
        }
        let null = parse_space(r#"{"weights": [1, 0], "allow_null_atoms": true}"#, "t").unwrap();
        assert!(null.space.allows_null_atoms());
    }

    #[test]
    fn operators() {
        assert!(matches!(
            parse_operator(r#"{"right_shift": {}}"#, "t").unwrap(),
            BcOperator::RightShift
        ));
        assert!(matches!(
            parse_operator(r#"{"composition": {"map": [1, 1]}}"#, "t").unwrap(),
            BcOperator::Composition(IndexMap::Table(_))
        ));
        let dense = parse_operator(r#"{"dense": {"m1": [[1, 0], [0, 1]], "m2": [[2, 0], [0, 2]]}}"#, "t").unwrap();
        assert!(matches!(dense, BcOperator::Dense(ref m) if m.shape() == (2, 2)));
        let mult = parse_operator(r#"{"multiplication": {"theta": [{"idempotent": {"b1": 1, "b2": 2}}]}}"#, "t");
        assert!(matches!(mult.unwrap(), BcOperator::Multiplication(_)));
        for bad in [
            r#"{"right_shift": {"by": 2}}"#,
            r#"{"dense": {"m1": [[1, 0]], "m2": [[1]]}}"#,
            r#"{"rotation": {}}"#,
            r#"{"composition": {}}"#,
        ] {
            assert!(parse_operator(bad, "t").is_err(), "{bad}");
        }
    }

    #[test]
    fn extended_reals() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct W(#[serde(with = "extended")] f64);
        assert_eq!(serde_json::to_string(&W(f64::INFINITY)).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&W(1.5)).unwrap(), "1.5");
        assert_eq!(serde_json::from_str::<W>("\"inf\"").unwrap(), W(f64::INFINITY));
        assert_eq!(serde_json::from_str::<W>("2").unwrap(), W(2.0));
    }

    #[test]
    fn sets_and_phi() {
        let (u1, u2) = parse_sets(
            r#"{"u1": {"disc": {"center": [0, 0], "radius": 1}}, "u2": "everything"}"#,
            "t",
        )
        .unwrap();
        assert_eq!(u2, ComponentSet::Everything);
        assert!(u1.contains(Complex::new(0.5, 0.0)));
        assert!(parse_phi("power:p=3").is_ok());
        assert!(parse_phi("gaussian").is_err());
    }
}
