//! Phase alignment and cyclic averaging of a pure-state tuple.
//!
//! Given a tuple whose invariant `r·e^{iθ}` is non-zero, [`phase_align`] picks
//! global phases so that every consecutive overlap has argument `θ/n`, and
//! [`symmetrize`] then averages the Gram matrices of all cyclic rotations. The
//! averaged matrix is circulant and its superdiagonal is the mean overlap
//! `(mean r_j)·e^{iθ/n}`, so the new invariant keeps the argument `θ` while its
//! modulus grows from `Π r_j` to `(mean r_j)^n`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::gram::{cyclic_average, factorize_gram, gram_from_tuple};
use crate::state::{bargmann_pure, principal_arg, PureTuple};
use crate::C64;

/// Invariants below this modulus have no usable argument.
pub const ZERO_INVARIANT: f64 = 1e-12;

/// Polar form `r·e^{iθ_j}` of one consecutive overlap, `θ_j ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarOverlap {
    pub r: f64,
    pub theta: f64,
}

impl PolarOverlap {
    pub fn value(&self) -> C64 {
        C64::from_polar(self.r, self.theta)
    }
}

/// Global phases `α_j` (radians), `α_1 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSchedule {
    pub alpha: Vec<f64>,
}

pub fn polar_overlaps(tuple: &PureTuple) -> Vec<PolarOverlap> {
    tuple
        .consecutive_overlaps()
        .into_iter()
        .map(|z| PolarOverlap {
            r: z.norm(),
            theta: principal_arg(z),
        })
        .collect()
}

fn nonzero_arg(tuple: &PureTuple) -> Result<f64> {
    let b = bargmann_pure(tuple);
    if !(b.modulus() >= ZERO_INVARIANT) {
        return Err(Error::ZeroInvariant(b.modulus()));
    }
    Ok(b.arg())
}

/// `α_j = (j − 1)·θ/n − Σ_{k<j} θ_k`, with `θ` the principal argument of the
/// invariant.
///
/// Shifting state `j` by `e^{iα_j}` turns overlap `j` into
/// `r_j·e^{i(θ_j + α_{j+1} − α_j)} = r_j·e^{iθ/n}`; the closing overlap picks up
/// `Σθ_k − (n − 1)θ/n`, which equals `θ/n` modulo 2π because `Σθ_k ≡ θ`.
pub fn phase_schedule(tuple: &PureTuple) -> Result<PhaseSchedule> {
    let theta = nonzero_arg(tuple)?;
    let n = tuple.len();
    let step = theta / n as f64;
    let overlaps = polar_overlaps(tuple);
    let mut alpha = Vec::with_capacity(n);
    let mut partial = 0.0;
    for (j, o) in overlaps.iter().enumerate() {
        alpha.push((j as f64 * step - partial).rem_euclid(TAU));
        partial += o.theta;
    }
    Ok(PhaseSchedule { alpha })
}

/// Re-phases every state so all consecutive overlaps share the argument `θ/n`.
pub fn phase_align(tuple: &PureTuple) -> Result<PureTuple> {
    let schedule = phase_schedule(tuple)?;
    PureTuple::new(
        tuple
            .states()
            .iter()
            .zip(&schedule.alpha)
            .map(|(s, &a)| s.with_phase(a))
            .collect(),
    )
}

/// Phase alignment, cyclic Gram averaging and refactorization.
///
/// The output has a circulant Gram matrix, equal consecutive overlaps, the same
/// invariant argument as the input and a modulus at least as large. Its
/// dimension is the numerical rank of the averaged Gram matrix.
pub fn symmetrize(tuple: &PureTuple) -> Result<PureTuple> {
    let aligned = phase_align(tuple)?;
    let averaged = cyclic_average(&gram_from_tuple(&aligned));
    factorize_gram(&averaged)
}

/// The invariant the symmetrized tuple must have: `(mean r_j)^n·e^{iθ}`.
pub fn symmetrized_invariant(tuple: &PureTuple) -> Result<C64> {
    let theta = nonzero_arg(tuple)?;
    let moduli: Vec<f64> = polar_overlaps(tuple).iter().map(|o| o.r).collect();
    Ok(C64::from_polar(amgm_bound(&moduli), theta))
}

/// `(mean of moduli)^n`, never below their product.
pub fn amgm_bound(moduli: &[f64]) -> f64 {
    if moduli.is_empty() {
        return 1.0;
    }
    let n = moduli.len();
    let mean = moduli.iter().sum::<f64>() / n as f64;
    mean.powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::is_circulant;
    use crate::state::{random_pure_tuple, StateVector};
    use crate::synthesis::obg_tuple;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn arg_distance(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn amgm_examples() {
        assert!((amgm_bound(&[0.4; 5]) - 0.4_f64.powi(5)).abs() < 1e-15);
        let v = [1.0, 0.0, 0.0, 0.0];
        assert!(amgm_bound(&v) >= 0.0);
        assert!((amgm_bound(&[0.9, 0.5, 0.7]) - 0.343).abs() < 1e-12);
        assert!((0.9 * 0.5 * 0.7 - 0.315_f64).abs() < 1e-12);
    }

    #[test]
    fn alignment_equalizes_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..7 {
            let t = random_pure_tuple(n, 3, &mut rng).unwrap();
            let before = bargmann_pure(&t);
            let aligned = phase_align(&t).unwrap();
            let after = bargmann_pure(&aligned);
            assert!((after.value() - before.value()).norm() < 1e-12);
            let target = before.arg() / n as f64;
            let old = polar_overlaps(&t);
            for (k, o) in polar_overlaps(&aligned).iter().enumerate() {
                assert!(arg_distance(o.theta, target) < 1e-10);
                assert!((o.r - old[k].r).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn aligned_input_keeps_arguments() {
        let t = obg_tuple(3, FRAC_PI_4).unwrap();
        let aligned = phase_align(&t).unwrap();
        let before = polar_overlaps(&t);
        for (a, b) in polar_overlaps(&aligned).iter().zip(&before) {
            assert!(arg_distance(a.theta, b.theta) < 1e-12);
        }
        let schedule = phase_schedule(&t).unwrap();
        assert_eq!(schedule.alpha[0], 0.0);
        for a in &schedule.alpha {
            assert!(arg_distance(*a, 0.0) < 1e-12);
        }
    }

    #[test]
    fn symmetrize_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let t = random_pure_tuple(4, 3, &mut rng).unwrap();
            let before = bargmann_pure(&t);
            let out = symmetrize(&t).unwrap();
            let after = bargmann_pure(&out);
            assert!(after.modulus() >= before.modulus() - 1e-12);
            assert!(arg_distance(after.arg(), before.arg()) < 1e-9);
            assert!(is_circulant(&gram_from_tuple(&out), 1e-10));
            let expected = symmetrized_invariant(&t).unwrap();
            assert!((after.value() - expected).norm() < 1e-9);
            let common = expected.norm().powf(0.25) * C64::from_polar(1.0, before.arg() / 4.0);
            for z in out.consecutive_overlaps() {
                assert!((z - common).norm() < 1e-9);
            }
            assert!(out.dim() <= 4);
        }
    }

    #[test]
    fn equal_moduli_keep_modulus() {
        let t = obg_tuple(5, 0.4).unwrap();
        let before = bargmann_pure(&t);
        let out = symmetrize(&t).unwrap();
        assert!((bargmann_pure(&out).value() - before.value()).norm() < 1e-10);
    }

    #[test]
    fn idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let t = random_pure_tuple(3, 2, &mut rng).unwrap();
        let once = symmetrize(&t).unwrap();
        let twice = symmetrize(&once).unwrap();
        assert!((bargmann_pure(&once).value() - bargmann_pure(&twice).value()).norm() < 1e-9);
    }

    #[test]
    fn zero_invariant_rejected() {
        let t = PureTuple::new(vec![
            StateVector::basis(2, 0).unwrap(),
            StateVector::basis(2, 1).unwrap(),
            StateVector::basis(2, 0).unwrap(),
        ])
        .unwrap();
        assert!(matches!(phase_align(&t), Err(Error::ZeroInvariant(_))));
        assert!(matches!(symmetrize(&t), Err(Error::ZeroInvariant(_))));
    }
}
