//! Seeded random generators for words, scalars, and elements.
//!
//! Every sampler takes the caller's RNG so that verification suites are
//! reproducible from a single seed.

use rand::Rng;

use crate::coeff::CoeffFn;
use crate::pbw::{Element, PBWKey};
use crate::scalar::Scalar;
use crate::space::SpaceBase;
use crate::word::{Letter, Word};

/// A random word over the matrix-entry letters.
pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| Letter::GENERATORS[rng.gen_range(0..Letter::GENERATORS.len())])
        .collect()
}

/// A small nonzero scalar: a signed power of v times a small integer.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let n = rng.gen_range(1..=3i64);
    let e = rng.gen_range(-4..=4i64);
    let s = Scalar::from_int(if rng.gen_bool(0.5) { n } else { -n });
    s.mul(&Scalar::v_pow(e))
}

/// A random PBW key with small entries.
fn random_key<R: Rng>(rng: &mut R) -> PBWKey {
    let k = rng.gen_range(-2..=2i64);
    if rng.gen_bool(0.5) {
        PBWKey::new(rng.gen_range(0..=2u32), k, 0)
    } else {
        PBWKey::new(0, k, rng.gen_range(0..=2u32))
    }
}

/// Grid indices available for point masses on the given base.
fn random_index<R: Rng>(rng: &mut R, base: SpaceBase) -> i64 {
    match base {
        SpaceBase::TildeX => rng.gen_range(0..=4),
        SpaceBase::TildeXi => rng.gen_range(-3..=3),
    }
}

/// Like [`random_finite`], with point masses confined to grid indices of
/// magnitude at most `max_idx`; pairing windows can then be sized to
/// dominate the support even after the key letters shift it.
pub fn random_finite_within<R: Rng>(
    rng: &mut R,
    base: SpaceBase,
    terms: usize,
    max_idx: i64,
) -> Element {
    let mut out = Element::zero(crate::space::Space::finite(base));
    for _ in 0..terms.max(1) {
        let key = random_key(rng);
        let mut coeff: CoeffFn<Scalar> = CoeffFn::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let idx = match base {
                SpaceBase::TildeX => rng.gen_range(0..=max_idx),
                SpaceBase::TildeXi => rng.gen_range(-max_idx..=max_idx),
            };
            coeff = coeff.add(&CoeffFn::delta(idx, random_scalar(rng)));
        }
        out.push_term(key, coeff);
    }
    out
}

/// A random finitely supported element: a few PBW terms whose radial parts
/// are point masses.
pub fn random_finite<R: Rng>(rng: &mut R, base: SpaceBase, terms: usize) -> Element {
    let mut out = Element::zero(crate::space::Space::finite(base));
    for _ in 0..terms.max(1) {
        let key = random_key(rng);
        let mut coeff: CoeffFn<Scalar> = CoeffFn::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let idx = random_index(rng, base);
            coeff = coeff.add(&CoeffFn::delta(idx, random_scalar(rng)));
        }
        out.push_term(key, coeff);
    }
    out
}

/// A random polynomial element: a few PBW terms with monomial radial parts
/// of small nonnegative degree.
pub fn random_polynomial<R: Rng>(rng: &mut R, base: SpaceBase, terms: usize) -> Element {
    let mut out = Element::zero(crate::space::Space::polynomial(base));
    for _ in 0..terms.max(1) {
        let key = random_key(rng);
        let p = rng.gen_range(0..=2i64);
        let coeff = CoeffFn::from_laurent(p, random_scalar(rng));
        out.push_term(key, coeff);
    }
    out
}

/// A pair of random letters, useful for sampling relation inputs.
pub fn random_letter<R: Rng>(rng: &mut R) -> Letter {
    Letter::GENERATORS[rng.gen_range(0..Letter::GENERATORS.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(random_word(&mut a, 8), random_word(&mut b, 8));
            assert_eq!(
                random_finite(&mut a, SpaceBase::TildeX, 3),
                random_finite(&mut b, SpaceBase::TildeX, 3)
            );
        }
    }

    #[test]
    fn finite_samples_are_finite() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let f = random_finite(&mut rng, SpaceBase::TildeXi, 3);
            assert!(f.is_finite_in_fact());
            assert!(!f.is_zero());
        }
    }

    #[test]
    fn polynomial_samples_multiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let f = random_polynomial(&mut rng, SpaceBase::TildeX, 2);
            let g = random_finite(&mut rng, SpaceBase::TildeX, 2);
            assert!(f.mul(&g).is_ok());
        }
    }
}
