//! The quantum disc inside the one-sided quantum space.
//!
//! The disc coordinate embeds as `z -> q t11 t12^-1` and the disc base
//! point mass as `f0 -> e0`; the embedding is a *-homomorphism onto the
//! circle-weight-zero part. Everything here lives on the one-sided grid.

use crate::error::Result;
use crate::linalg::RowSpace;
use crate::pbw::{Element, Gen, PBWKey};
use crate::scalar::Scalar;
use crate::space::SpaceBase;

const BASE: SpaceBase = SpaceBase::TildeX;

/// A letter of the disc alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscLetter {
    Z,
    ZStar,
    F0,
}

/// Image of the disc coordinate: `q t11 t12^-1`, a localized element.
pub fn embed_z() -> Element {
    Element::generator(BASE, Gen::T11)
        .mul(&Element::t12_inv(BASE))
        .expect("one-sided product")
        .scale(&Scalar::q_pow(1))
}

/// Image of the conjugate coordinate, the star of `embed_z`.
pub fn embed_z_star() -> Element {
    embed_z().star()
}

/// Image of the disc base point mass.
pub fn embed_f0() -> Element {
    Element::e0(BASE).expect("one-sided base point")
}

/// The reversed composition `q t12^-1 t11`, one power of `q` above
/// `embed_z`; the kernel generating functions read the letter this way.
pub fn embed_z_alt() -> Element {
    Element::t12_inv(BASE)
        .mul(&Element::generator(BASE, Gen::T11))
        .expect("one-sided product")
        .scale(&Scalar::q_pow(1))
}

/// Evaluates a disc word through the embedding.
pub fn embed_disc(word: &[DiscLetter]) -> Result<Element> {
    let mut acc = Element::one(crate::space::Space::localized(BASE));
    for l in word {
        let img = match l {
            DiscLetter::Z => embed_z(),
            DiscLetter::ZStar => embed_z_star(),
            DiscLetter::F0 => embed_f0(),
        };
        acc = acc.mul(&img)?;
    }
    Ok(acc)
}

/// Point mass at disc level `j` built inside the algebra: `z^j f0 z*^j`
/// rescaled to a unit point mass at grid index `j`.
pub fn disc_delta(j: i64) -> Result<Element> {
    let mut w = vec![DiscLetter::Z; j as usize];
    w.push(DiscLetter::F0);
    w.extend(std::iter::repeat(DiscLetter::ZStar).take(j as usize));
    let raw = embed_disc(&w)?;
    let unit = raw.eval_coeff(PBWKey::new(0, 0, 0), j);
    Ok(raw.scale(&unit.recip()?))
}

/// Flattens a finite element into coordinates over the listed slots.
fn coordinates(f: &Element, slots: &[(PBWKey, i64)]) -> Option<Vec<Scalar>> {
    let mut total = 0usize;
    for c in f.terms.values() {
        if !c.laurent.is_empty() {
            return None;
        }
        total += c.corrections.len();
    }
    let mut v = vec![Scalar::zero(); slots.len()];
    let mut seen = 0usize;
    for (i, (key, m)) in slots.iter().enumerate() {
        if let Some(c) = f.terms.get(key) {
            if let Some(s) = c.corrections.get(m) {
                v[i] = s.clone();
                seen += 1;
            }
        }
    }
    // Every stored point mass must land in a listed slot.
    if seen == total {
        Some(v)
    } else {
        None
    }
}

/// Double-inclusion check for the weight-space description: truncated
/// weight-`m` finite functions coincide with disc finite functions times
/// the `m`-th power of the off-diagonal letter.
pub fn weight_space_check(m: i64, trunc: i64) -> Result<bool> {
    // The m-th off-diagonal power, localized when m is negative.
    let mut shift = Element::one(crate::space::Space::localized(BASE));
    let factor = if m >= 0 {
        Element::generator(BASE, Gen::T12)
    } else {
        Element::t12_inv(BASE)
    };
    for _ in 0..m.abs() {
        shift = shift.mul(&factor)?;
    }

    // Generators of the disc image times the shift. Margins above the
    // truncation let boundary monomials find their preimages.
    let reach = trunc + m.abs() + 1;
    let mut products: Vec<Element> = Vec::new();
    for a in 0..=reach {
        for b in 0..=reach {
            for j in 0..=reach {
                let mut w = vec![DiscLetter::Z; a as usize];
                w.push(DiscLetter::F0);
                w.extend(std::iter::repeat(DiscLetter::ZStar).take(b as usize));
                let mut img = embed_disc(&w)?;
                if j > 0 {
                    // Conjugate outward to move the point mass to level j.
                    let zj = vec![DiscLetter::Z; j as usize];
                    let zsj = vec![DiscLetter::ZStar; j as usize];
                    img = embed_disc(&zj)?.mul(&img)?.mul(&embed_disc(&zsj)?)?;
                }
                img = img.mul(&shift)?;
                if !img.is_zero() {
                    products.push(img);
                }
            }
        }
    }

    // Target basis: weight-m point-mass monomials inside the truncation.
    let mut targets: Vec<(PBWKey, i64)> = Vec::new();
    for i1 in 0..=trunc {
        for j1 in 0..=trunc {
            if i1 != 0 && j1 != 0 {
                continue;
            }
            let k = m - i1 + j1;
            if i1 + k.abs() + j1 > trunc {
                continue;
            }
            for idx in 0..=trunc {
                targets.push((PBWKey::new(i1 as u32, k, j1 as u32), idx));
            }
        }
    }

    // Coordinate slots cover the truncation and everything the products
    // touch, so membership tests see full vectors.
    let mut slots = targets.clone();
    for p in &products {
        for (key, c) in &p.terms {
            for idx in c.corrections.keys() {
                if !slots.contains(&(*key, *idx)) {
                    slots.push((*key, *idx));
                }
            }
        }
    }

    let mut span = RowSpace::new();
    for p in &products {
        // Each product must be a finite function of pure weight m.
        if p.finiteness_criterion()?.is_none() {
            return Ok(false);
        }
        let weights = p.weight_components();
        if weights.keys().any(|w| *w != m) {
            return Ok(false);
        }
        let v = match coordinates(p, &slots) {
            Some(v) => v,
            None => return Ok(false),
        };
        span.insert(v);
    }

    for (key, idx) in &targets {
        let mono = Element::from_term(
            crate::space::Space::finite(BASE),
            *key,
            crate::coeff::CoeffFn::delta(*idx, Scalar::one()),
        );
        let v = coordinates(&mono, &slots).expect("monomial fits its own slots");
        if !span.contains(v) {
            return Ok(false);
        }
    }
    Ok(true)
}
