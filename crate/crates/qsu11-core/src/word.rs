//! Formal generator words and their reduction to ordered elements.
//!
//! A word is a left-to-right product of letters from the full alphabet:
//! the eight starred and unstarred matrix entries, the base point mass,
//! the radial coordinate, and the localized inverses. Second-row letters
//! are rewritten through the involution identities `t21 = -q^-1 t12*` and
//! `t22 = -t11*` before ordering, so the reduction target is always the
//! four-letter canonical alphabet.

use crate::error::Result;
use crate::pbw::{Element, Gen};
use crate::scalar::Scalar;
use crate::space::{Space, SpaceBase};

/// One formal letter: a matrix entry, its star, or a distinguished element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    T11,
    T12,
    T21,
    T22,
    T11S,
    T12S,
    T21S,
    T22S,
    E0,
    X,
    XInv,
    T12Inv,
    T12SInv,
}

impl Letter {
    /// The eight matrix-entry letters.
    pub const GENERATORS: [Letter; 8] = [
        Letter::T11,
        Letter::T12,
        Letter::T21,
        Letter::T22,
        Letter::T11S,
        Letter::T12S,
        Letter::T21S,
        Letter::T22S,
    ];

    /// The starred partner; self-adjoint symbols are fixed.
    pub fn star(self) -> Letter {
        match self {
            Letter::T11 => Letter::T11S,
            Letter::T12 => Letter::T12S,
            Letter::T21 => Letter::T21S,
            Letter::T22 => Letter::T22S,
            Letter::T11S => Letter::T11,
            Letter::T12S => Letter::T12,
            Letter::T21S => Letter::T21,
            Letter::T22S => Letter::T22,
            Letter::E0 => Letter::E0,
            Letter::X => Letter::X,
            Letter::XInv => Letter::XInv,
            Letter::T12Inv => Letter::T12SInv,
            Letter::T12SInv => Letter::T12Inv,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Letter::T11 => "t11",
            Letter::T12 => "t12",
            Letter::T21 => "t21",
            Letter::T22 => "t22",
            Letter::T11S => "t11*",
            Letter::T12S => "t12*",
            Letter::T21S => "t21*",
            Letter::T22S => "t22*",
            Letter::E0 => "e0",
            Letter::X => "x",
            Letter::XInv => "x^-1",
            Letter::T12Inv => "t12^-1",
            Letter::T12SInv => "t12*^-1",
        }
    }
}

/// A formal product of letters, read left to right.
pub type Word = Vec<Letter>;

/// The ordered image of a single letter.
pub fn letter_element(base: SpaceBase, letter: Letter) -> Result<Element> {
    Ok(match letter {
        Letter::T11 => Element::generator(base, Gen::T11),
        Letter::T12 => Element::generator(base, Gen::T12),
        Letter::T21 => Element::generator(base, Gen::T12S).scale(&Scalar::q_pow(-1)).neg(),
        Letter::T22 => Element::generator(base, Gen::T11S).neg(),
        Letter::T11S => Element::generator(base, Gen::T11S),
        Letter::T12S => Element::generator(base, Gen::T12S),
        Letter::T21S => Element::generator(base, Gen::T12).scale(&Scalar::q_pow(-1)).neg(),
        Letter::T22S => Element::generator(base, Gen::T11).neg(),
        Letter::E0 => Element::e0(base)?,
        Letter::X => Element::x_pow(base, 1),
        Letter::XInv => Element::x_pow(base, -1),
        Letter::T12Inv => Element::t12_inv(base),
        Letter::T12SInv => Element::t12s_inv(base),
    })
}

/// Reduces a word to its ordered form; the empty word is the unit.
pub fn normal_form(base: SpaceBase, word: &[Letter]) -> Result<Element> {
    let mut acc = Element::one(Space::polynomial(base));
    for letter in word {
        acc = acc.mul(&letter_element(base, *letter)?)?;
    }
    Ok(acc)
}

/// Reduces a scalar combination of words; the empty word carries constants.
pub fn combination_normal_form(base: SpaceBase, comb: &[(Scalar, Word)]) -> Result<Element> {
    let mut acc = Element::zero(Space::polynomial(base));
    for (c, w) in comb {
        acc = acc.add(&normal_form(base, w)?.scale(c))?;
    }
    Ok(acc)
}

/// Star of a formal word: reverse the letters and star each one.
pub fn word_star(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.star()).collect()
}

/// The defining exchange relations, each written as a combination of words
/// that reduces to zero. The determinant relation closes the list; its
/// constant is the unit on the one-sided space and zero on the cone.
pub fn defining_relations(base: SpaceBase) -> Vec<(&'static str, Vec<(Scalar, Word)>)> {
    use Letter::*;
    let q = Scalar::q_pow(1);
    let comm = |a: Letter, b: Letter, c: Scalar| {
        vec![(Scalar::one(), vec![a, b]), (c.neg(), vec![b, a])]
    };
    let det_const = match base {
        SpaceBase::TildeX => Scalar::one(),
        SpaceBase::TildeXi => Scalar::zero(),
    };
    vec![
        ("row-one exchange", comm(T11, T12, q.clone())),
        ("row-two exchange", comm(T21, T22, q.clone())),
        ("column-one exchange", comm(T11, T21, q.clone())),
        ("column-two exchange", comm(T12, T22, q.clone())),
        ("antidiagonal commute", comm(T12, T21, Scalar::one())),
        (
            "diagonal commutator",
            vec![
                (Scalar::one(), vec![T11, T22]),
                (Scalar::one().neg(), vec![T22, T11]),
                (Scalar::q_pow(1).sub(&Scalar::q_pow(-1)).neg(), vec![T12, T21]),
            ],
        ),
        (
            "determinant",
            vec![
                (Scalar::one(), vec![T11, T22]),
                (Scalar::q_pow(1).neg(), vec![T12, T21]),
                (det_const.neg(), vec![]),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_reduce_to_zero() {
        for base in [SpaceBase::TildeX, SpaceBase::TildeXi] {
            for (label, comb) in defining_relations(base) {
                let nf = combination_normal_form(base, &comb).unwrap();
                assert!(nf.is_zero(), "relation {label} fails on {:?}", base);
            }
        }
    }

    #[test]
    fn second_row_eliminations() {
        let base = SpaceBase::TildeX;
        let t12s = Element::generator(base, Gen::T12S);
        assert_eq!(
            normal_form(base, &[Letter::T21]).unwrap(),
            t12s.scale(&Scalar::q_pow(-1)).neg()
        );
        // t12 t11 = q^-1 t11 t12.
        let prod = normal_form(base, &[Letter::T12, Letter::T11]).unwrap();
        let expect = normal_form(base, &[Letter::T11, Letter::T12])
            .unwrap()
            .scale(&Scalar::q_pow(-1));
        assert_eq!(prod, expect);
        // t12 t12* = x.
        assert_eq!(
            normal_form(base, &[Letter::T12, Letter::T12S]).unwrap(),
            Element::x_pow(base, 1)
        );
        // t11 t22 on the cone is -x, and reversed -q^-2 x.
        let cone = SpaceBase::TildeXi;
        assert_eq!(
            normal_form(cone, &[Letter::T11, Letter::T22]).unwrap(),
            Element::x_pow(cone, 1).neg()
        );
        assert_eq!(
            normal_form(cone, &[Letter::T22, Letter::T11]).unwrap(),
            Element::x_pow(cone, 1).scale(&Scalar::q_pow(-2)).neg()
        );
    }

    #[test]
    fn words_multiply_homomorphically() {
        use Letter::*;
        let base = SpaceBase::TildeX;
        let w1 = vec![T21, T11, T12S];
        let w2 = vec![T22, T12, T11S, T11];
        let mut cat = w1.clone();
        cat.extend_from_slice(&w2);
        let lhs = normal_form(base, &cat).unwrap();
        let rhs = normal_form(base, &w1)
            .unwrap()
            .mul(&normal_form(base, &w2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_of_a_word_matches_element_star() {
        use Letter::*;
        let base = SpaceBase::TildeX;
        for w in [vec![T11, T12], vec![T21, T22S, T12], vec![E0, T12S], vec![X, T11S]] {
            let direct = normal_form(base, &word_star(&w)).unwrap();
            let starred = normal_form(base, &w).unwrap().star();
            assert_eq!(direct, starred);
        }
    }

    #[test]
    fn localized_letters_invert() {
        let base = SpaceBase::TildeXi;
        let one = Element::one(Space::localized(base));
        assert_eq!(
            normal_form(base, &[Letter::T12, Letter::T12Inv]).unwrap(),
            one
        );
        assert_eq!(
            normal_form(base, &[Letter::T12SInv, Letter::T12S]).unwrap(),
            one
        );
        assert_eq!(normal_form(base, &[Letter::X, Letter::XInv]).unwrap(), one);
    }

    #[test]
    fn base_point_mass_is_one_sided() {
        assert!(normal_form(SpaceBase::TildeXi, &[Letter::E0]).is_err());
        assert!(normal_form(SpaceBase::TildeX, &[Letter::E0, Letter::E0])
            .unwrap()
            .eq(&Element::e0(SpaceBase::TildeX).unwrap()));
    }
}
