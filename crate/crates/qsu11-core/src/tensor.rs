//! Tensor algebras over two quantum spaces, with the multiplication opposite
//! in the first factor, the duality pairing, and integral operators.
//!
//! A tensor element is stored as a first-factor expansion whose radial data
//! carry second-factor elements. The product rule (a x b)(c x d) =
//! (ca) x (bd) makes the antipode-style kernel construction a homomorphism.

use crate::action::{act, act_qh, UqConfig, UqGen};
use crate::coeff::CoeffFn;
use crate::error::{Error, Result};
use crate::integral::{integrate, IntegralTag};
use crate::pbw::{Element, PBWKey};
use crate::scalar::Scalar;
use crate::space::{Space, SpaceBase};

/// An element of the two-factor algebra.
#[derive(Clone, Debug)]
pub struct TensorElement {
    /// First-factor expansion; each radial datum is a second-factor element.
    pub outer: Element<Element<Scalar>>,
    /// The second factor's space label.
    pub space2: Space,
}

/// Equality compares data on matching base grids; layer labels are ignored.
impl PartialEq for TensorElement {
    fn eq(&self, o: &Self) -> bool {
        self.space2.base == o.space2.base && self.outer == o.outer
    }
}

fn inner_mul(a: &Element<Scalar>, b: &Element<Scalar>) -> Element<Scalar> {
    let layer = a.space.layer.join_add(b.space.layer);
    a.mul_raw(b, layer, &|x, y| x.mul(y))
}

impl TensorElement {
    pub fn zero(s1: Space, s2: Space) -> Self {
        TensorElement {
            outer: Element::zero(s1),
            space2: s2,
        }
    }

    /// The elementary tensor a x b.
    pub fn simple(a: &Element<Scalar>, b: &Element<Scalar>) -> Self {
        let mut outer = Element::zero(a.space);
        for (key, cf) in &a.terms {
            outer.push_term(*key, cf.map(&|s: &Scalar| b.scale(s)));
        }
        TensorElement {
            outer,
            space2: b.space,
        }
    }

    /// The unit 1 x 1.
    pub fn one(base1: SpaceBase, base2: SpaceBase) -> Self {
        TensorElement::simple(
            &Element::one(Space::polynomial(base1)),
            &Element::one(Space::polynomial(base2)),
        )
    }

    pub fn bases(&self) -> (SpaceBase, SpaceBase) {
        (self.outer.space.base, self.space2.base)
    }

    pub fn is_zero(&self) -> bool {
        self.outer.is_zero()
    }

    fn check_pair(&self, o: &TensorElement) -> Result<()> {
        if self.bases() != o.bases() {
            return Err(Error::SpaceMismatch(
                "tensor factors live on different grids".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, o: &TensorElement) -> Result<TensorElement> {
        self.check_pair(o)?;
        Ok(TensorElement {
            outer: self.outer.add(&o.outer)?,
            space2: self.space2,
        })
    }

    pub fn sub(&self, o: &TensorElement) -> Result<TensorElement> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TensorElement {
        TensorElement {
            outer: self.outer.neg(),
            space2: self.space2,
        }
    }

    pub fn scale(&self, s: &Scalar) -> TensorElement {
        TensorElement {
            outer: self.outer.scale(s),
            space2: self.space2,
        }
    }

    /// The algebra product: opposite order in the first factor, direct order
    /// in the second.
    pub fn tensor_mul(&self, o: &TensorElement) -> Result<TensorElement> {
        self.check_pair(o)?;
        let layer = self.outer.space.layer.join_add(o.outer.space.layer);
        let outer = o
            .outer
            .mul_raw(&self.outer, layer, &|b_val, a_val| inner_mul(a_val, b_val));
        Ok(TensorElement {
            outer,
            space2: self.space2,
        })
    }

    pub fn pow(&self, n: u32) -> Result<TensorElement> {
        let mut out = TensorElement::one(self.bases().0, self.bases().1);
        for _ in 0..n {
            out = out.tensor_mul(self)?;
        }
        Ok(out)
    }

    /// The involution, acting factorwise.
    pub fn star(&self) -> TensorElement {
        TensorElement {
            outer: self.outer.star(),
            space2: self.space2,
        }
    }

    /// Rebuilds with every second-factor element transformed.
    pub fn map_inner(&self, f: &dyn Fn(&Element<Scalar>) -> Element<Scalar>) -> TensorElement {
        let mut outer = Element::zero(self.outer.space);
        for (key, cf) in &self.outer.terms {
            outer.push_term(*key, cf.map(&|b: &Element<Scalar>| f(b)));
        }
        TensorElement {
            outer,
            space2: self.space2,
        }
    }

    /// The kernel involution: the factorwise star followed by conjugation of
    /// the second factor by its radial coordinate.
    pub fn sharp(&self) -> TensorElement {
        let base2 = self.space2.base;
        let xinv = Element::x_pow(base2, -1);
        let x = Element::x_pow(base2, 1);
        self.star()
            .map_inner(&|b| inner_mul(&inner_mul(&xinv, b), &x))
    }

    /// Splits into a finite list of elementary tensors.
    pub fn decompose(&self) -> Vec<(Element<Scalar>, Element<Scalar>)> {
        let mut out = Vec::new();
        let s1 = self.outer.space;
        for (key, cf) in &self.outer.terms {
            for (p, b) in &cf.laurent {
                let a = Element::from_term(s1, *key, CoeffFn::from_laurent(*p, Scalar::one()));
                out.push((a, b.clone()));
            }
            for (m, b) in &cf.corrections {
                let a = Element::from_term(s1, *key, CoeffFn::delta(*m, Scalar::one()));
                out.push((a, b.clone()));
            }
        }
        out
    }

    /// Reassembles a sum of elementary tensors.
    pub fn from_pairs(
        s1: Space,
        s2: Space,
        pairs: &[(Element<Scalar>, Element<Scalar>)],
    ) -> Result<TensorElement> {
        let mut out = TensorElement::zero(s1, s2);
        for (a, b) in pairs {
            out = out.add(&TensorElement::simple(a, b))?;
        }
        Ok(out)
    }

    /// Drops first-factor terms whose plain head exceeds the given length;
    /// the congruence used for truncated inverse checks.
    pub fn truncate_outer_i1(&self, max_i1: u32) -> TensorElement {
        let mut outer = Element::zero(self.outer.space);
        for (key, cf) in &self.outer.terms {
            if key.i1 <= max_i1 {
                outer.push_term(*key, cf.clone());
            }
        }
        TensorElement {
            outer,
            space2: self.space2,
        }
    }
}

/// Applies a symmetry generator through the twisted Leibniz rule, treating
/// the tensor as a product of its two factors.
pub fn act_tensor(cfg: &UqConfig, g: UqGen, k: &TensorElement) -> Result<TensorElement> {
    let (b1, b2) = k.bases();
    let s1 = k.outer.space;
    let s2 = k.space2;
    let mut out = TensorElement::zero(s1, s2);
    for (a, b) in k.decompose() {
        if g == UqGen::H {
            out = out.add(&TensorElement::simple(&act(cfg, g, &a)?, &b))?;
            out = out.add(&TensorElement::simple(&a, &act(cfg, g, &b)?))?;
            continue;
        }
        let p = cfg.doubled_twist(g);
        out = out.add(&TensorElement::simple(&act(cfg, g, &a)?, &act_qh(p, &b)))?;
        out = out.add(&TensorElement::simple(&act_qh(p + 2, &a), &act(cfg, g, &b)?))?;
    }
    let _ = (b1, b2);
    Ok(out)
}

/// True when every generator annihilates the kernel.
pub fn is_invariant_kernel(cfg: &UqConfig, k: &TensorElement) -> Result<bool> {
    for g in UqGen::ALL {
        if !act_tensor(cfg, g, k)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn nu_tag(base: SpaceBase) -> IntegralTag {
    match base {
        SpaceBase::TildeX => IntegralTag::NuTildeX,
        SpaceBase::TildeXi => IntegralTag::NuTildeXi,
    }
}

/// The double invariant integral: the radial first-factor data are summed
/// over the grid with the Jackson weight, each carried second-factor element
/// integrated in turn.
pub fn nu_nu(k: &TensorElement) -> Result<Scalar> {
    let (b1, b2) = k.bases();
    let mut total = Scalar::zero();
    if let Some(cf) = k.outer.terms.get(&PBWKey::new(0, 0, 0)) {
        if !cf.laurent.is_empty() {
            return Err(Error::NotFinite(
                "double integral needs finitely supported data".into(),
            ));
        }
        for (m, b) in &cf.corrections {
            let inner = integrate(nu_tag(b2), b)?;
            total = total.add(&inner.mul(&b1.integral_weight(*m)));
        }
    }
    let factor = Scalar::one().sub(&Scalar::q_pow(2));
    Ok(total.mul(&factor))
}

/// The duality pairing of a kernel against a finite tensor.
pub fn pairing(k: &TensorElement, f: &TensorElement) -> Result<Scalar> {
    nu_nu(&k.tensor_mul(f)?)
}

/// The integral operator attached to a kernel: multiply by 1 x f and
/// integrate out the second factor.
pub fn apply_integral_operator(k: &TensorElement, f: &Element<Scalar>) -> Result<Element<Scalar>> {
    let (b1, b2) = k.bases();
    if f.space.base != b2 {
        return Err(Error::SpaceMismatch(
            "operator input lives on the second factor".into(),
        ));
    }
    let prod = k.tensor_mul(&TensorElement::simple(
        &Element::one(Space::polynomial(b1)),
        f,
    ))?;
    let mut out = Element::zero(prod.outer.space);
    for (key, cf) in &prod.outer.terms {
        let mut acc: CoeffFn<Scalar> = CoeffFn::zero();
        for (p, b) in &cf.laurent {
            let v = integrate(nu_tag(b2), b)?;
            acc = acc.add(&CoeffFn::from_laurent(*p, v));
        }
        for (m, b) in &cf.corrections {
            let v = integrate(nu_tag(b2), b)?;
            acc = acc.add(&CoeffFn::delta(*m, v));
        }
        out.push_term(*key, acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::Gen;
    use crate::sample::{random_finite, random_polynomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bx() -> SpaceBase {
        SpaceBase::TildeX
    }

    fn gen1(g: Gen) -> TensorElement {
        TensorElement::simple(
            &Element::generator(bx(), g),
            &Element::one(Space::polynomial(bx())),
        )
    }

    fn gen2(g: Gen) -> TensorElement {
        TensorElement::simple(
            &Element::one(Space::polynomial(bx())),
            &Element::generator(bx(), g),
        )
    }

    #[test]
    fn first_factor_multiplies_oppositely() {
        let lhs = gen1(Gen::T11).tensor_mul(&gen1(Gen::T12)).unwrap();
        let expect = TensorElement::simple(
            &Element::generator(bx(), Gen::T12)
                .mul(&Element::generator(bx(), Gen::T11))
                .unwrap(),
            &Element::one(Space::polynomial(bx())),
        );
        assert_eq!(lhs, expect);
        // Reversed order once more: t12 then t11 composes to t11 t12.
        let rhs = gen1(Gen::T12).tensor_mul(&gen1(Gen::T11)).unwrap();
        let direct = TensorElement::simple(
            &Element::generator(bx(), Gen::T11)
                .mul(&Element::generator(bx(), Gen::T12))
                .unwrap(),
            &Element::one(Space::polynomial(bx())),
        );
        assert_eq!(rhs, direct);
    }

    #[test]
    fn disjoint_factors_commute() {
        let a = gen1(Gen::T12S);
        let b = gen2(Gen::T11);
        assert_eq!(
            a.tensor_mul(&b).unwrap(),
            b.tensor_mul(&a).unwrap()
        );
    }

    #[test]
    fn unit_is_neutral() {
        let one = TensorElement::one(bx(), bx());
        let k = gen1(Gen::T11).tensor_mul(&gen2(Gen::T12S)).unwrap();
        assert_eq!(one.tensor_mul(&k).unwrap(), k);
        assert_eq!(k.tensor_mul(&one).unwrap(), k);
    }

    #[test]
    fn product_is_associative_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..6 {
            let a = TensorElement::simple(
                &random_polynomial(&mut rng, bx(), 2),
                &random_finite(&mut rng, bx(), 2),
            );
            let b = TensorElement::simple(
                &random_finite(&mut rng, bx(), 2),
                &random_polynomial(&mut rng, bx(), 2),
            );
            let c = TensorElement::simple(
                &random_polynomial(&mut rng, bx(), 1),
                &random_polynomial(&mut rng, bx(), 1),
            );
            let left = a.tensor_mul(&b).unwrap().tensor_mul(&c).unwrap();
            let right = a.tensor_mul(&b.tensor_mul(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn star_is_an_antihomomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..6 {
            let a = TensorElement::simple(
                &random_polynomial(&mut rng, bx(), 2),
                &random_finite(&mut rng, bx(), 2),
            );
            let b = TensorElement::simple(
                &random_finite(&mut rng, bx(), 2),
                &random_polynomial(&mut rng, bx(), 2),
            );
            let lhs = a.tensor_mul(&b).unwrap().star();
            let rhs = b.star().tensor_mul(&a.star()).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(a.star().star(), a);
        }
    }

    #[test]
    fn sharp_on_generators_and_involution() {
        // First factor: sharp coincides with the star.
        assert_eq!(gen1(Gen::T11).sharp(), gen1(Gen::T11).star());
        // Second factor picks up the radial conjugation scale.
        let t11_2 = gen2(Gen::T11);
        let expect = gen2(Gen::T11S).scale(&Scalar::q_pow(-2));
        assert_eq!(t11_2.sharp(), expect);
        let t12_2 = gen2(Gen::T12);
        assert_eq!(t12_2.sharp(), gen2(Gen::T12S));
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let k = TensorElement::simple(
                &random_polynomial(&mut rng, bx(), 2),
                &random_polynomial(&mut rng, bx(), 2),
            );
            assert_eq!(k.sharp().sharp(), k);
        }
    }

    #[test]
    fn sharp_is_an_antihomomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..4 {
            let a = TensorElement::simple(
                &random_polynomial(&mut rng, bx(), 2),
                &random_polynomial(&mut rng, bx(), 2),
            );
            let b = TensorElement::simple(
                &random_polynomial(&mut rng, bx(), 1),
                &random_polynomial(&mut rng, bx(), 1),
            );
            let lhs = a.tensor_mul(&b).unwrap().sharp();
            let rhs = b.sharp().tensor_mul(&a.sharp()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn decompose_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..5 {
            let k = TensorElement::simple(
                &random_finite(&mut rng, bx(), 2),
                &random_finite(&mut rng, bx(), 2),
            )
            .tensor_mul(&TensorElement::simple(
                &random_polynomial(&mut rng, bx(), 1),
                &random_polynomial(&mut rng, bx(), 1),
            ))
            .unwrap();
            let pairs = k.decompose();
            let back =
                TensorElement::from_pairs(k.outer.space, k.space2, &pairs).unwrap();
            assert_eq!(back, k);
        }
    }

    #[test]
    fn pairing_values() {
        let one = TensorElement::one(bx(), bx());
        let e0e0 = TensorElement::simple(
            &Element::e0(bx()).unwrap(),
            &Element::e0(bx()).unwrap(),
        );
        let c = Scalar::one().sub(&Scalar::q_pow(2));
        assert_eq!(pairing(&one, &e0e0).unwrap(), c.mul(&c));
        let t11 = gen1(Gen::T11);
        assert!(pairing(&t11, &e0e0).unwrap().is_zero());
    }

    #[test]
    fn operator_example() {
        let k = TensorElement::simple(
            &Element::one(Space::polynomial(bx())),
            &Element::e0(bx()).unwrap(),
        );
        let out = apply_integral_operator(&k, &Element::e0(bx()).unwrap()).unwrap();
        let c = Scalar::one().sub(&Scalar::q_pow(2));
        assert_eq!(out, Element::one(Space::polynomial(bx())).scale(&c));
    }

    #[test]
    fn h_kills_balanced_tensors() {
        let cfg = UqConfig::default();
        let k = gen1(Gen::T11).tensor_mul(&gen2(Gen::T12)).unwrap();
        assert!(act_tensor(&cfg, UqGen::H, &k).unwrap().is_zero());
    }

}
