use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apply, BcOperator};
use crate::bicomplex::{BiComplex, Complex};
use crate::error::OperatorError;
use crate::measure::AtomicMeasureSpace;
use crate::orlicz::{norm_bc, NormOptions, OrliczFunction};
use crate::sequence::BcSequence;

/// Support length of random inputs on lazy spaces.
const LAZY_SUPPORT: usize = 16;

fn random_complex(rng: &mut impl Rng) -> Complex {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A random finite sequence of length `len`: entries vanish with probability
/// 1/4, whole components with probability 1/8 each, and the first entry is
/// never zero.
pub fn random_sequence(len: usize, rng: &mut impl Rng) -> BcSequence {
    let drop1 = rng.gen_bool(0.125);
    let drop2 = !drop1 && rng.gen_bool(0.125);
    let zero = Complex::new(0.0, 0.0);
    let entries = (0..len)
        .map(|i| {
            let mut draw = |dropped: bool| {
                if dropped || (i > 0 && rng.gen_bool(0.25)) {
                    zero
                } else {
                    random_complex(rng)
                }
            };
            let z1 = draw(drop1);
            let z2 = draw(drop2);
            BiComplex::from_idempotent(z1, z2)
        })
        .collect();
    BcSequence::Finite(entries)
}

/// Lower estimate of the operator norm: the largest ratio
/// `||T F|| / ||F||` over `trials` random inputs. Trial `t` draws from a
/// ChaCha8 stream `t` seeded with `seed`, so results are reproducible.
pub fn empirical_operator_norm(
    op: &BcOperator,
    phi: &OrliczFunction,
    space: &AtomicMeasureSpace,
    trials: usize,
    seed: u64,
    opts: &NormOptions,
) -> Result<f64, OperatorError> {
    if trials == 0 {
        return Err(OperatorError::NoTrials);
    }
    let len = if space.is_lazy() {
        LAZY_SUPPORT.min(space.len())
    } else {
        space.len()
    };
    let mut best = 0.0f64;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let f = random_sequence(len, &mut rng);
        let denom = norm_bc(phi, &f, space, opts)?;
        if denom == 0.0 {
            continue;
        }
        let image = apply(op, &f, space)?;
        let num = norm_bc(phi, &image, space, opts)?;
        best = best.max(num / denom);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{IndexMap, WeightRule};

    #[test]
    fn identity_has_norm_one() {
        let space = AtomicMeasureSpace::finite(vec![1.0, 0.5, 2.0]).unwrap();
        let phi = OrliczFunction::power(2.0).unwrap();
        let est =
            empirical_operator_norm(&BcOperator::identity(), &phi, &space, 20, 7, &NormOptions::default()).unwrap();
        assert!((est - 1.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_per_seed() {
        let space = AtomicMeasureSpace::lazy(WeightRule::Counting, 1000).unwrap();
        let phi = OrliczFunction::power(2.0).unwrap();
        let op = BcOperator::Composition(IndexMap::Blocks);
        let a = empirical_operator_norm(&op, &phi, &space, 10, 3, &NormOptions::default()).unwrap();
        let b = empirical_operator_norm(&op, &phi, &space, 10, 3, &NormOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a >= 1.0);
    }

    #[test]
    fn random_sequence_first_entry_nonzero() {
        for s in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let f = random_sequence(5, &mut rng);
            assert_ne!(f.get(1), BiComplex::ZERO);
            assert_eq!(f.finite_len(), Some(5));
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let space = AtomicMeasureSpace::counting(1).unwrap();
        let phi = OrliczFunction::power(2.0).unwrap();
        assert_eq!(
            empirical_operator_norm(&BcOperator::identity(), &phi, &space, 0, 0, &NormOptions::default()),
            Err(OperatorError::NoTrials)
        );
    }
}
