//! Purely atomic measure spaces and index maps between their atoms.
//!
//! Atoms are indexed from 1. Every measurable set is a union of atoms, so a
//! measurable transformation is a map on atom indices and its pushforward is
//! determined by the masses `m_n = mu(T^-1 {n})`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::MeasureError;

/// Default truncation budget for lazily generated spaces.
pub const DEFAULT_N_MAX: usize = 1_000_000;

// geometric weights are cut off before they leave the normal f64 range
const GEOMETRIC_FLOOR: f64 = 1e-300;

/// Generator for the weights of a lazy space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightRule {
    /// `a_n = 1`
    Counting,
    /// `a_n = r^(n-1)`
    Geometric(f64),
}

impl WeightRule {
    pub fn weight(&self, n: usize) -> f64 {
        match *self {
            WeightRule::Counting => 1.0,
            WeightRule::Geometric(r) => r.powf((n - 1) as f64),
        }
    }

    /// `sum_{n=lo}^{hi} a_n`, zero when the range is empty.
    pub fn range_sum(&self, lo: usize, hi: usize) -> f64 {
        if hi < lo {
            return 0.0;
        }
        let len = (hi - lo + 1) as f64;
        match *self {
            WeightRule::Counting | WeightRule::Geometric(1.0) => len,
            WeightRule::Geometric(r) => {
                let first = self.weight(lo);
                if first == 0.0 {
                    0.0
                } else {
                    first * (1.0 - r.powf(len)) / (1.0 - r)
                }
            }
        }
    }

    /// Largest index whose weight stays inside the representable range.
    fn usable_len(&self, n_max: usize) -> usize {
        match *self {
            WeightRule::Counting | WeightRule::Geometric(1.0) => n_max,
            WeightRule::Geometric(r) => {
                // r^(n-1) stays within [GEOMETRIC_FLOOR, 1 / GEOMETRIC_FLOOR]
                let limit = (GEOMETRIC_FLOOR.ln().abs() / r.ln().abs()).floor() + 1.0;
                n_max.min(limit.max(1.0) as usize)
            }
        }
    }
}

impl FromStr for WeightRule {
    type Err = MeasureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "counting" {
            return Ok(WeightRule::Counting);
        }
        if let Some(r) = s.strip_prefix("geometric:") {
            let r: f64 = r
                .trim()
                .parse()
                .map_err(|_| MeasureError::InvalidRule(format!("bad geometric ratio in '{s}'")))?;
            if !(r.is_finite() && r > 0.0) {
                return Err(MeasureError::InvalidRule(format!(
                    "geometric ratio must be positive and finite, got {r}"
                )));
            }
            return Ok(WeightRule::Geometric(r));
        }
        Err(MeasureError::InvalidRule(format!(
            "unknown weights rule '{s}' (expected counting or geometric:r)"
        )))
    }
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightRule::Counting => f.write_str("counting"),
            WeightRule::Geometric(r) => write!(f, "geometric:{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Weights {
    Finite(Vec<f64>),
    Lazy { rule: WeightRule, n_max: usize },
}

/// A sigma-finite, purely atomic measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasureSpace {
    weights: Weights,
    null_atoms: bool,
}

impl AtomicMeasureSpace {
    /// A finite space; every weight must be positive and finite.
    pub fn finite(weights: Vec<f64>) -> Result<Self, MeasureError> {
        Self::checked_finite(weights, false)
    }

    /// A finite space that also admits zero-weight atoms. Only meaningful for
    /// non-singularity diagnostics.
    pub fn diagnostic(weights: Vec<f64>) -> Result<Self, MeasureError> {
        Self::checked_finite(weights, true)
    }

    fn checked_finite(weights: Vec<f64>, null_atoms: bool) -> Result<Self, MeasureError> {
        if weights.is_empty() {
            return Err(MeasureError::Empty);
        }
        for (i, &w) in weights.iter().enumerate() {
            let ok = w.is_finite() && (w > 0.0 || (null_atoms && w == 0.0));
            if !ok {
                return Err(MeasureError::InvalidWeight {
                    atom: i + 1,
                    weight: w,
                });
            }
        }
        Ok(AtomicMeasureSpace {
            weights: Weights::Finite(weights),
            null_atoms,
        })
    }

    pub fn counting(n: usize) -> Result<Self, MeasureError> {
        Self::finite(vec![1.0; n])
    }

    /// A lazily generated space truncated at `n_max` atoms.
    pub fn lazy(rule: WeightRule, n_max: usize) -> Result<Self, MeasureError> {
        if n_max == 0 {
            return Err(MeasureError::Empty);
        }
        if let WeightRule::Geometric(r) = rule {
            if !(r.is_finite() && r > 0.0) {
                return Err(MeasureError::InvalidRule(format!("geometric ratio {r}")));
            }
        }
        Ok(AtomicMeasureSpace {
            weights: Weights::Lazy { rule, n_max },
            null_atoms: false,
        })
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.weights, Weights::Lazy { .. })
    }

    pub fn allows_null_atoms(&self) -> bool {
        self.null_atoms
    }

    /// Number of atoms examined: all of them for finite spaces, the usable
    /// truncation for lazy ones.
    pub fn len(&self) -> usize {
        match &self.weights {
            Weights::Finite(w) => w.len(),
            Weights::Lazy { rule, n_max } => rule.usable_len(*n_max),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rule(&self) -> Option<WeightRule> {
        match &self.weights {
            Weights::Lazy { rule, .. } => Some(*rule),
            Weights::Finite(_) => None,
        }
    }

    /// The configured truncation budget of a lazy space.
    pub fn n_max(&self) -> Option<usize> {
        match &self.weights {
            Weights::Lazy { n_max, .. } => Some(*n_max),
            Weights::Finite(_) => None,
        }
    }

    /// Same rule with a different budget; finite spaces are returned as is.
    pub fn with_n_max(&self, n_max: usize) -> Result<Self, MeasureError> {
        match &self.weights {
            Weights::Lazy { rule, .. } => Self::lazy(*rule, n_max),
            Weights::Finite(_) => Ok(self.clone()),
        }
    }

    pub fn finite_weights(&self) -> Option<&[f64]> {
        match &self.weights {
            Weights::Finite(w) => Some(w),
            Weights::Lazy { .. } => None,
        }
    }

    /// `mu(A_n)` for a 1-based atom index. Lazy spaces answer beyond the
    /// truncation as well.
    pub fn weight(&self, n: usize) -> f64 {
        match &self.weights {
            Weights::Finite(w) => w.get(n.wrapping_sub(1)).copied().unwrap_or(0.0),
            Weights::Lazy { rule, .. } => rule.weight(n),
        }
    }

    /// `mu` of the atoms `lo..=hi`.
    pub fn range_mass(&self, lo: usize, hi: usize) -> f64 {
        match &self.weights {
            Weights::Finite(w) => {
                if hi < lo || lo == 0 {
                    return 0.0;
                }
                let hi = hi.min(w.len());
                w.get(lo - 1..hi).map(|s| s.iter().sum()).unwrap_or(0.0)
            }
            Weights::Lazy { rule, .. } => rule.range_sum(lo, hi),
        }
    }

    pub fn total_mass(&self) -> Option<f64> {
        self.finite_weights().map(|w| w.iter().sum())
    }
}

/// A measurable transformation given by its action on atom indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexMap {
    /// Explicit 1-based images `T(1), ..., T(N)` on a finite space.
    Table(Vec<usize>),
    Identity,
    /// `T(n) = n - 1`, undefined at atom 1. Acts on sequences as
    /// `(0, x1, x2, ...)`; the preimage of `{n}` is `{n + 1}`.
    RightShift,
    /// `T(k) = m` for `k` in the `m`-th block, blocks having lengths 1, 2, 3, ...
    Blocks,
}

impl IndexMap {
    pub fn table(images: Vec<usize>) -> Self {
        IndexMap::Table(images)
    }

    pub fn validate(&self, space: &AtomicMeasureSpace) -> Result<(), MeasureError> {
        if let IndexMap::Table(images) = self {
            if space.is_lazy() {
                return Err(MeasureError::TableOnLazySpace);
            }
            let len = space.len();
            if images.len() != len {
                return Err(MeasureError::MapLength {
                    expected: len,
                    got: images.len(),
                });
            }
            if let Some((i, &image)) = images
                .iter()
                .enumerate()
                .find(|(_, &m)| m == 0 || m > len)
            {
                return Err(MeasureError::MapOutOfRange {
                    atom: i + 1,
                    image,
                    len,
                });
            }
        }
        Ok(())
    }

    /// `T(n)`, or `None` where the map is undefined (right shift at atom 1).
    pub fn image(&self, n: usize) -> Option<usize> {
        match self {
            IndexMap::Table(images) => images.get(n.wrapping_sub(1)).copied(),
            IndexMap::Identity => Some(n),
            IndexMap::RightShift => (n > 1).then(|| n - 1),
            IndexMap::Blocks => Some(block_of(n)),
        }
    }

    /// Contiguous preimage `lo..=hi` of atom `n` for the rule maps.
    fn preimage_range(&self, n: usize) -> Option<(usize, usize)> {
        match self {
            IndexMap::Table(_) => None,
            IndexMap::Identity => Some((n, n)),
            IndexMap::RightShift => Some((n + 1, n + 1)),
            IndexMap::Blocks => Some((n * (n - 1) / 2 + 1, n * (n + 1) / 2)),
        }
    }

    /// Largest atom whose image lies in `1..=support`, i.e. the support of
    /// `f o T` when `f` vanishes beyond `support`.
    pub fn preimage_extent(&self, support: usize) -> Option<usize> {
        if support == 0 {
            return Some(0);
        }
        match self {
            IndexMap::Table(images) => images
                .iter()
                .rposition(|&m| m <= support)
                .map(|i| i + 1)
                .or(Some(0)),
            _ => self.preimage_range(support).map(|(_, hi)| hi),
        }
    }
}

impl FromStr for IndexMap {
    type Err = MeasureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "identity" => Ok(IndexMap::Identity),
            "right_shift" => Ok(IndexMap::RightShift),
            "blocks" => Ok(IndexMap::Blocks),
            other => Err(MeasureError::InvalidRule(format!(
                "unknown map rule '{other}' (expected identity, right_shift or blocks)"
            ))),
        }
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexMap::Table(t) => write!(f, "table{t:?}"),
            IndexMap::Identity => f.write_str("identity"),
            IndexMap::RightShift => f.write_str("right_shift"),
            IndexMap::Blocks => f.write_str("blocks"),
        }
    }
}

// block m covers m(m-1)/2 + 1 ..= m(m+1)/2
fn block_of(k: usize) -> usize {
    let mut m = ((((8 * k) as f64 + 1.0).sqrt() - 1.0) / 2.0).floor() as usize;
    while m * (m + 1) / 2 < k {
        m += 1;
    }
    while m > 1 && (m - 1) * m / 2 >= k {
        m -= 1;
    }
    m.max(1)
}

/// `mu o T^-1` restricted to atoms `1..=len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushforwardMeasure {
    pub masses: Vec<f64>,
    pub truncated: bool,
}

pub fn pushforward(
    space: &AtomicMeasureSpace,
    map: &IndexMap,
) -> Result<PushforwardMeasure, MeasureError> {
    map.validate(space)?;
    let len = space.len();
    let masses = match map {
        IndexMap::Table(images) => {
            let mut m = vec![0.0; len];
            for (k, &image) in images.iter().enumerate() {
                m[image - 1] += space.weight(k + 1);
            }
            m
        }
        IndexMap::Identity if !space.is_lazy() => space.finite_weights().unwrap().to_vec(),
        rule => (1..=len)
            .map(|n| {
                let (lo, hi) = rule.preimage_range(n).unwrap();
                if space.is_lazy() {
                    space.range_mass(lo, hi)
                } else {
                    space.range_mass(lo, hi.min(len))
                }
            })
            .collect(),
    };
    Ok(PushforwardMeasure {
        masses,
        truncated: space.is_lazy(),
    })
}

/// The ratios `b_n = mu(T^-1 A_n) / mu(A_n)` and their supremum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distortion {
    pub ratios: Vec<f64>,
    pub sup: f64,
    /// 1-based atom where the supremum is attained.
    pub argmax: usize,
    pub truncated: bool,
}

impl Distortion {
    /// `sup_{n <= k} b_n`.
    pub fn prefix_sup(&self, k: usize) -> f64 {
        self.ratios[..k.min(self.ratios.len())]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }
}

pub fn distortion_ratios(
    space: &AtomicMeasureSpace,
    map: &IndexMap,
) -> Result<Distortion, MeasureError> {
    let push = pushforward(space, map)?;
    let ratios: Vec<f64> = push
        .masses
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let a = space.weight(i + 1);
            match (a == 0.0, m == 0.0) {
                (true, true) => 0.0,
                (true, false) => f64::INFINITY,
                _ => m / a,
            }
        })
        .collect();
    let (argmax, sup) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |best, (i, b)| if b > best.1 { (i, b) } else { best });
    Ok(Distortion {
        ratios,
        sup,
        argmax: argmax + 1,
        truncated: push.truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonsingularCertificate {
    pub nonsingular: bool,
    pub reason: String,
    pub offending_atom: Option<usize>,
}

/// Checks `mu(A) = 0 => mu(T^-1 A) = 0`. With strictly positive weights the
/// only null set is empty, so the answer is always yes.
pub fn is_nonsingular(
    space: &AtomicMeasureSpace,
    map: &IndexMap,
) -> Result<NonsingularCertificate, MeasureError> {
    if !space.allows_null_atoms() {
        map.validate(space)?;
        return Ok(NonsingularCertificate {
            nonsingular: true,
            reason: "all atoms have positive weight, so the only null set is empty".into(),
            offending_atom: None,
        });
    }
    let push = pushforward(space, map)?;
    let offending = (1..=space.len()).find(|&n| space.weight(n) == 0.0 && push.masses[n - 1] > 0.0);
    Ok(match offending {
        Some(n) => NonsingularCertificate {
            nonsingular: false,
            reason: format!(
                "atom {n} is null but its preimage has mass {}",
                push.masses[n - 1]
            ),
            offending_atom: Some(n),
        },
        None => NonsingularCertificate {
            nonsingular: true,
            reason: "every null atom has a null preimage".into(),
            offending_atom: None,
        },
    })
}

/// Whether every examined atom has a nonempty preimage, i.e. `T(Omega) = Omega`
/// on the examined range.
pub fn is_surjective(space: &AtomicMeasureSpace, map: &IndexMap) -> Result<bool, MeasureError> {
    map.validate(space)?;
    let len = space.len();
    Ok(match map {
        IndexMap::Table(images) => {
            let mut hit = vec![false; len];
            for &m in images {
                hit[m - 1] = true;
            }
            hit.into_iter().all(|h| h)
        }
        IndexMap::Identity | IndexMap::Blocks => true,
        IndexMap::RightShift => space.is_lazy(),
    })
}
