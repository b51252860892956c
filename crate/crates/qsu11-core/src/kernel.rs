//! Invariant two-point kernels: the four matrix entries, their commutation
//! relations and involution, kernel powers in factored q-Pochhammer form, the
//! terminating double series, the analytic continuation in lambda, and
//! truncated inverse series.
//!
//! Everything lives in the two-factor algebra of `tensor`, with the first
//! factor multiplying in the opposite order. The localized letters z and
//! z-star (and their second-factor copies) generate the radial series
//! calculus used by the power formulas.

use crate::coeff::CoeffFn;
use crate::error::{Error, Result};
use crate::integral::{integrate, IntegralTag};
use crate::pbw::{Element, Gen, PBWKey};
use crate::qseries::qbinomial_series;
use crate::scalar::Scalar;
use crate::space::SpaceBase;
use crate::tensor::TensorElement;

fn nu_tag(base: SpaceBase) -> IntegralTag {
    match base {
        SpaceBase::TildeX => IntegralTag::NuTildeX,
        SpaceBase::TildeXi => IntegralTag::NuTildeXi,
    }
}

/// The localized letter z = q t12^-1 t11, reduced to its canonical form
/// q t11 t12* x^-1. The same element in the second factor is called zeta.
pub fn letter_z(base: SpaceBase) -> Element<Scalar> {
    Element::generator(base, Gen::T11)
        .mul(&Element::t12_inv(base))
        .expect("localized product of one-factor letters")
        .scale(&Scalar::q_pow(1))
}

/// The star of z, equal to t22 t21^-1 = q t12 x^-1 t11*.
pub fn letter_z_star(base: SpaceBase) -> Element<Scalar> {
    letter_z(base).star()
}

/// The commuting product letter u = z x zeta*.
pub fn letter_u(base1: SpaceBase, base2: SpaceBase) -> TensorElement {
    TensorElement::simple(&letter_z(base1), &letter_z_star(base2))
}

/// The commuting product letter v = z* x zeta.
pub fn letter_v(base1: SpaceBase, base2: SpaceBase) -> TensorElement {
    TensorElement::simple(&letter_z_star(base1), &letter_z(base2))
}

/// The hook -q t12 tau21 = t12 x tau12* appearing in the k11 power formula.
pub fn hook_w(base1: SpaceBase, base2: SpaceBase) -> TensorElement {
    TensorElement::simple(
        &Element::generator(base1, Gen::T12),
        &Element::generator(base2, Gen::T12S),
    )
}

/// The inverse hook t12^-1 x (tau12*)^-1.
pub fn hook_w_inv(base1: SpaceBase, base2: SpaceBase) -> TensorElement {
    TensorElement::simple(&Element::t12_inv(base1), &Element::t12s_inv(base2))
}

/// The hook -q^-1 t21 tau12 = q^-2 t12* x tau12 from the k22 power formula.
pub fn hook_w_prime(base1: SpaceBase, base2: SpaceBase) -> TensorElement {
    TensorElement::simple(
        &Element::generator(base1, Gen::T12S).scale(&Scalar::q_pow(-2)),
        &Element::generator(base2, Gen::T12),
    )
}

/// One entry of the invariant kernel matrix, written through the eliminated
/// generators: k11 = t11 tau22 - q t12 tau21 and its three companions.
pub fn kernel_k(i: u8, j: u8, base1: SpaceBase, base2: SpaceBase) -> Result<TensorElement> {
    let g1 = |g: Gen| Element::generator(base1, g);
    let g2 = |g: Gen| Element::generator(base2, g);
    match (i, j) {
        (1, 1) => TensorElement::simple(&g1(Gen::T12), &g2(Gen::T12S))
            .sub(&TensorElement::simple(&g1(Gen::T11), &g2(Gen::T11S))),
        (1, 2) => TensorElement::simple(&g1(Gen::T12), &g2(Gen::T11)).sub(
            &TensorElement::simple(&g1(Gen::T11), &g2(Gen::T12)).scale(&Scalar::q_pow(-1)),
        ),
        (2, 1) => TensorElement::simple(&g1(Gen::T12S), &g2(Gen::T11S))
            .scale(&Scalar::q_pow(-1))
            .sub(&TensorElement::simple(&g1(Gen::T11S), &g2(Gen::T12S))),
        (2, 2) => TensorElement::simple(&g1(Gen::T12S), &g2(Gen::T12))
            .scale(&Scalar::q_pow(-2))
            .sub(&TensorElement::simple(&g1(Gen::T11S), &g2(Gen::T11))),
        _ => Err(Error::Unsupported(format!(
            "no kernel entry ({}, {})",
            i, j
        ))),
    }
}

/// Runs the seven commutation checks among the kernel entries. The constant
/// in the last one is the unit exactly when both factors are planes: each
/// factor contributes its own determinant, and the cone determinant is zero.
pub fn verify_k_relations(base1: SpaceBase, base2: SpaceBase) -> Result<Vec<(String, bool)>> {
    let k11 = kernel_k(1, 1, base1, base2)?;
    let k12 = kernel_k(1, 2, base1, base2)?;
    let k21 = kernel_k(2, 1, base1, base2)?;
    let k22 = kernel_k(2, 2, base1, base2)?;
    let qinv = Scalar::q_pow(-1);
    let mut out = Vec::new();
    let mut swap =
        |name: &str, a: &TensorElement, b: &TensorElement| -> Result<()> {
            let lhs = a.tensor_mul(b)?;
            let rhs = b.tensor_mul(a)?.scale(&qinv);
            out.push((name.to_string(), lhs == rhs));
            Ok(())
        };
    swap("k11 k12 = q^-1 k12 k11", &k11, &k12)?;
    swap("k21 k22 = q^-1 k22 k21", &k21, &k22)?;
    swap("k11 k21 = q^-1 k21 k11", &k11, &k21)?;
    swap("k12 k22 = q^-1 k22 k12", &k12, &k22)?;
    out.push((
        "k12 k21 = k21 k12".to_string(),
        k12.tensor_mul(&k21)? == k21.tensor_mul(&k12)?,
    ));
    let comm = k11.tensor_mul(&k22)?.sub(&k22.tensor_mul(&k11)?)?;
    let cross = k12.tensor_mul(&k21)?;
    out.push((
        "k11 k22 - k22 k11 = (q^-1 - q) k12 k21".to_string(),
        comm == cross.scale(&qinv.sub(&Scalar::q_pow(1))),
    ));
    let det = k22.tensor_mul(&k11)?.sub(&cross.scale(&Scalar::q_pow(1)))?;
    if base1 == SpaceBase::TildeX && base2 == SpaceBase::TildeX {
        out.push((
            "k22 k11 - q k12 k21 = 1".to_string(),
            det == TensorElement::one(base1, base2),
        ));
    } else {
        out.push(("k22 k11 - q k12 k21 = 0".to_string(), det.is_zero()));
    }
    Ok(out)
}

/// Product prod_{i<l} (1 - t ratio^i u) in the tensor algebra, for a letter
/// u commuting with itself.
fn tensor_pochhammer(
    u: &TensorElement,
    t: &Scalar,
    ratio: &Scalar,
    l: u32,
) -> Result<TensorElement> {
    let (b1, b2) = u.bases();
    let one = TensorElement::one(b1, b2);
    let mut acc = one.clone();
    let mut factor = t.clone();
    for _ in 0..l {
        acc = acc.tensor_mul(&one.sub(&u.scale(&factor))?)?;
        factor = factor.mul(ratio);
    }
    Ok(acc)
}

/// A kernel power next to its factored q-Pochhammer form.
pub struct FactoredPower {
    pub direct: TensorElement,
    pub factored: TensorElement,
}

/// The factored forms of the two kernel powers:
/// k11^l = (-q t12 tau21)^l (q^-2 u; q^-2)_l and
/// k22^l = (v; q^-2)_l (-q^-1 t21 tau12)^l.
pub fn kernel_power_factored(
    l: u32,
    base1: SpaceBase,
    base2: SpaceBase,
) -> Result<(FactoredPower, FactoredPower)> {
    let u = letter_u(base1, base2);
    let v = letter_v(base1, base2);
    let k11 = FactoredPower {
        direct: kernel_k(1, 1, base1, base2)?.pow(l)?,
        factored: hook_w(base1, base2).pow(l)?.tensor_mul(&tensor_pochhammer(
            &u,
            &Scalar::q_pow(-2),
            &Scalar::q_pow(-2),
            l,
        )?)?,
    };
    let k22 = FactoredPower {
        direct: kernel_k(2, 2, base1, base2)?.pow(l)?,
        factored: tensor_pochhammer(&v, &Scalar::one(), &Scalar::q_pow(-2), l)?
            .tensor_mul(&hook_w_prime(base1, base2).pow(l)?)?,
    };
    Ok((k11, k22))
}

fn x_left(l: u32, base1: SpaceBase, base2: SpaceBase) -> TensorElement {
    TensorElement::simple(
        &Element::x_pow(base1, l as i64),
        &Element::x_pow(base2, 0),
    )
}

fn xi_right(l: u32, base1: SpaceBase, base2: SpaceBase) -> TensorElement {
    TensorElement::simple(
        &Element::x_pow(base1, 0),
        &Element::x_pow(base2, l as i64),
    )
}

/// The terminating double series for k22^l k11^l: the radial envelope
/// xi^l ... x^l around the two q-binomial sums in v and u.
pub fn power_product_series(l: u32, base1: SpaceBase, base2: SpaceBase) -> Result<TensorElement> {
    let u = letter_u(base1, base2);
    let v = letter_v(base1, base2);
    let c = qbinomial_series(&Scalar::q_pow(-2 * l as i64), l);
    let mut vsum = TensorElement::zero(u.outer.space, u.space2);
    let mut usum = vsum.clone();
    for n in 0..=l {
        let vw = c[n as usize].mul(&Scalar::q_pow(2 * (l as i64 + 1) * n as i64));
        vsum = vsum.add(&v.pow(n)?.scale(&vw))?;
        let uw = c[n as usize].mul(&Scalar::q_pow(2 * l as i64 * n as i64));
        usum = usum.add(&u.pow(n)?.scale(&uw))?;
    }
    xi_right(l, base1, base2)
        .tensor_mul(&vsum)?
        .tensor_mul(&usum)?
        .tensor_mul(&x_left(l, base1, base2))
        .map(|k| k.scale(&Scalar::q_pow(-2 * l as i64)))
}

/// True when the direct power product equals its terminating double series.
pub fn lemma65_check(l: u32, base1: SpaceBase, base2: SpaceBase) -> Result<bool> {
    let direct = kernel_k(2, 2, base1, base2)?
        .pow(l)?
        .tensor_mul(&kernel_k(1, 1, base1, base2)?.pow(l)?)?;
    Ok(direct == power_product_series(l, base1, base2)?)
}

/// The canonical generalized-kernel shape of a tensor element. The engine
/// keeps every element normally ordered with radial coefficients in the
/// middle slot, so the map is the identity made explicit; it is idempotent
/// and equality-deciding.
pub fn to_generalized_kernel(k: &TensorElement) -> TensorElement {
    k.clone()
}

/// The power product re-expanded term by term into radial letters times
/// one-sided powers: the blocks below, on, and above the diagonal of the
/// double series.
pub fn generalized_kernel_blocks(
    l: u32,
    base1: SpaceBase,
    base2: SpaceBase,
) -> Result<TensorElement> {
    let one1 = Element::one(crate::space::Space::polynomial(base1));
    let one2 = Element::one(crate::space::Space::polynomial(base2));
    let z = TensorElement::simple(&letter_z(base1), &one2);
    let zs = TensorElement::simple(&letter_z_star(base1), &one2);
    let zeta = TensorElement::simple(&one1, &letter_z(base2));
    let zetas = TensorElement::simple(&one1, &letter_z_star(base2));
    let c = qbinomial_series(&Scalar::q_pow(-2 * l as i64), l);
    let mut acc = TensorElement::zero(z.outer.space, z.space2);
    for j in 0..=l {
        for m in 0..=l {
            let w = c[j as usize]
                .mul(&c[m as usize])
                .mul(&Scalar::q_pow(2 * j as i64 * (l as i64 + 1) + 2 * m as i64 * l as i64));
            // The three blocks group z*^j z^m as radial pairs times a
            // one-sided leftover; the letter order is unchanged.
            let term = zs
                .pow(j)?
                .tensor_mul(&z.pow(m)?)?
                .tensor_mul(&x_left(l, base1, base2))?
                .tensor_mul(&xi_right(l, base1, base2))?
                .tensor_mul(&zeta.pow(j)?)?
                .tensor_mul(&zetas.pow(m)?)?;
            acc = acc.add(&term.scale(&w))?;
        }
    }
    Ok(acc.scale(&Scalar::q_pow(-2 * l as i64)))
}

/// The analytic continuation of the power products: the double series with
/// lambda substituted for q^{2l}, truncated at a window cap, together with
/// the boundary band used to certify that the window was large enough.
pub struct LambdaKernel {
    /// Terms with both series exponents strictly below the cap.
    middle: TensorElement,
    /// Terms with either exponent equal to the cap.
    boundary: TensorElement,
    /// Window size.
    pub cap: u32,
}

/// Builds the continued kernel on a pair with at least one plane factor,
/// where the pairing against any finite function has finitely many
/// contributing terms.
pub fn continue_kernel(cap: u32, base1: SpaceBase, base2: SpaceBase) -> Result<LambdaKernel> {
    if base1 != SpaceBase::TildeX && base2 != SpaceBase::TildeX {
        return Err(Error::Unsupported(
            "continuation needs a plane factor for the pairing to localize".into(),
        ));
    }
    let u = letter_u(base1, base2);
    let v = letter_v(base1, base2);
    let c = qbinomial_series(&Scalar::lambda_pow(-1), cap);
    let mut middle = TensorElement::zero(u.outer.space, u.space2);
    let mut boundary = middle.clone();
    for j in 0..=cap {
        for m in 0..=cap {
            let w = c[j as usize]
                .mul(&c[m as usize])
                .mul(&Scalar::lambda_pow(j as i64 + m as i64 - 1))
                .mul(&Scalar::q_pow(2 * j as i64));
            let term = v.pow(j)?.tensor_mul(&u.pow(m)?)?.scale(&w);
            if j == cap || m == cap {
                boundary = boundary.add(&term)?;
            } else {
                middle = middle.add(&term)?;
            }
        }
    }
    Ok(LambdaKernel {
        middle,
        boundary,
        cap,
    })
}

/// Substitutes a value for lambda in every scalar of a second-factor element.
fn subst_inner(b: &Element<Scalar>, val: &Scalar) -> Element<Scalar> {
    let mut out = Element::zero(b.space);
    for (key, cf) in &b.terms {
        out.push_term(
            *key,
            cf.map(&|s: &Scalar| s.subst_lambda(val).expect("substituting a monomial value")),
        );
    }
    out
}

/// Multiplies a finite tensor by x^l x 1 on the left with l symbolic: each
/// first-factor term gains lambda^{-j1} and each grid index contributes the
/// lambda power of the point value.
fn absorb_x_symbolic(f: &TensorElement) -> Result<TensorElement> {
    let base1 = f.outer.space.base;
    let mut outer = Element::zero(f.outer.space);
    for (key, cf) in &f.outer.terms {
        if !cf.laurent.is_empty() {
            return Err(Error::NotFinite(
                "the continued pairing needs a finitely supported first factor".into(),
            ));
        }
        let mut acc: CoeffFn<Element<Scalar>> = CoeffFn::zero();
        for (i, b) in &cf.corrections {
            let grid = match base1 {
                SpaceBase::TildeX => -i,
                SpaceBase::TildeXi => *i,
            };
            let p = grid - key.j1 as i64;
            acc = acc.add(&CoeffFn::delta(*i, b.scale(&Scalar::lambda_pow(p))));
        }
        outer.push_term(*key, acc);
    }
    Ok(TensorElement {
        outer,
        space2: f.space2,
    })
}

/// Left-multiplies a second-factor element by xi^l with l symbolic: each term
/// gains lambda^{-i1} and each grid index the lambda power of its point.
fn absorb_xi_symbolic(b: &Element<Scalar>, base2: SpaceBase) -> Result<Element<Scalar>> {
    let mut out = Element::zero(b.space);
    for (key, cf) in &b.terms {
        if !cf.laurent.is_empty() {
            return Err(Error::NotFinite(
                "the continued pairing needs a finitely supported second factor".into(),
            ));
        }
        let mut acc: CoeffFn<Scalar> = CoeffFn::zero();
        for (i, s) in &cf.corrections {
            let grid = match base2 {
                SpaceBase::TildeX => -i,
                SpaceBase::TildeXi => *i,
            };
            let p = grid - key.i1 as i64;
            acc = acc.add(&CoeffFn::delta(*i, s.mul(&Scalar::lambda_pow(p))));
        }
        out.push_term(*key, acc);
    }
    Ok(out)
}

/// Pairs one series component against an absorbed test function, applying
/// the symbolic xi^l before the inner integral.
fn pair_component(k: &TensorElement, g: &TensorElement) -> Result<Scalar> {
    let p = k.tensor_mul(g)?;
    let (b1, b2) = p.bases();
    let mut total = Scalar::zero();
    if let Some(cf) = p.outer.terms.get(&PBWKey::new(0, 0, 0)) {
        if !cf.laurent.is_empty() {
            return Err(Error::NotFinite(
                "the continued pairing needs finitely supported products".into(),
            ));
        }
        for (m, b) in &cf.corrections {
            let with_xi = absorb_xi_symbolic(b, b2)?;
            let inner = integrate(nu_tag(b2), &with_xi)?;
            total = total.add(&inner.mul(&b1.integral_weight(*m)));
        }
    }
    Ok(total.mul(&Scalar::one().sub(&Scalar::q_pow(2))))
}

impl LambdaKernel {
    /// Substitutes lambda = q^{2l} and restores the radial envelope, giving
    /// the plain power product. Exact for l up to the window cap.
    pub fn evaluate(&self, l: u32) -> Result<TensorElement> {
        if l > self.cap {
            return Err(Error::Unsupported(format!(
                "window cap {} is below the requested power {}",
                self.cap, l
            )));
        }
        let val = Scalar::q_pow(2 * l as i64);
        let full = self.middle.add(&self.boundary)?;
        let mid = full.map_inner(&|b| subst_inner(b, &val));
        let (b1, b2) = mid.bases();
        xi_right(l, b1, b2)
            .tensor_mul(&mid)?
            .tensor_mul(&x_left(l, b1, b2))
    }

    /// Pairs the continued kernel against a finite tensor with lambda left
    /// symbolic; the result is a Laurent polynomial in lambda. Errors when
    /// the boundary band still contributes, i.e. the window was too small
    /// for the given test function.
    pub fn pair(&self, f: &TensorElement) -> Result<Scalar> {
        let g = absorb_x_symbolic(f)?;
        let leak = pair_component(&self.boundary, &g)?;
        if !leak.is_zero() {
            return Err(Error::Unsupported(
                "window cap too small for this test function".into(),
            ));
        }
        pair_component(&self.middle, &g)
    }
}

/// The truncated inverse series sum_{n <= n_max} [(q^{2l}; q^2)_n /
/// (q^2; q^2)_n] u^n from the inverse power formula.
pub fn inverse_power_series(
    l: u32,
    n_max: u32,
    base1: SpaceBase,
    base2: SpaceBase,
) -> Result<TensorElement> {
    let u = letter_u(base1, base2);
    let b = qbinomial_series(&Scalar::q_pow(2 * l as i64), n_max);
    let mut acc = TensorElement::zero(u.outer.space, u.space2);
    for n in 0..=n_max {
        acc = acc.add(&u.pow(n)?.scale(&b[n as usize]))?;
    }
    Ok(acc)
}

/// Checks that the truncated inverse inverts the kernel power from both
/// sides through the truncation window.
pub fn prop69_check(l: u32, n_max: u32, base1: SpaceBase, base2: SpaceBase) -> Result<bool> {
    let k11l = kernel_k(1, 1, base1, base2)?.pow(l)?;
    let inv = hook_w_inv(base1, base2)
        .pow(l)?
        .tensor_mul(&inverse_power_series(l, n_max, base1, base2)?)?;
    let one = TensorElement::one(base1, base2);
    let ab = k11l.tensor_mul(&inv)?.truncate_outer_i1(n_max);
    let ba = inv.tensor_mul(&k11l)?.truncate_outer_i1(n_max);
    Ok(ab == one && ba == one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{act, UqConfig, UqGen};
    use crate::sample::random_finite;
    use crate::space::Space;
    use crate::tensor::{
        act_tensor, apply_integral_operator, is_invariant_kernel, pairing,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const PAIRS: [(SpaceBase, SpaceBase); 4] = [
        (SpaceBase::TildeX, SpaceBase::TildeX),
        (SpaceBase::TildeX, SpaceBase::TildeXi),
        (SpaceBase::TildeXi, SpaceBase::TildeX),
        (SpaceBase::TildeXi, SpaceBase::TildeXi),
    ];

    fn bx() -> SpaceBase {
        SpaceBase::TildeX
    }

    #[test]
    fn z_letters_reduce_to_radial_products() {
        for base in [SpaceBase::TildeX, SpaceBase::TildeXi] {
            let z = letter_z(base);
            let zs = letter_z_star(base);
            assert_eq!(z.star(), zs);
            // z z* = 1 - x^-1 on the plane and 1 on the cone; z* z picks up
            // the shifted head product.
            let zzs = z.mul(&zs).unwrap();
            let zsz = zs.mul(&z).unwrap();
            let one = Element::one(Space::localized(base));
            match base {
                SpaceBase::TildeX => {
                    let xinv = Element::x_pow(base, -1);
                    assert_eq!(zzs, one.sub(&xinv).unwrap());
                    assert_eq!(zsz, one.sub(&xinv.scale(&Scalar::q_pow(2))).unwrap());
                }
                SpaceBase::TildeXi => {
                    assert_eq!(zzs, one);
                    assert_eq!(zsz, one);
                }
            }
        }
    }

    #[test]
    fn hook_letter_commutation() {
        for (b1, b2) in PAIRS {
            let w = hook_w(b1, b2);
            let u = letter_u(b1, b2);
            let q2 = Scalar::q_pow(2);
            // w u = q^2 u w, the relation behind the factored powers.
            assert_eq!(
                w.tensor_mul(&u).unwrap(),
                u.tensor_mul(&w).unwrap().scale(&q2)
            );
            // v (t21 x tau12) = q^2 (t21 x tau12) v.
            let t = TensorElement::simple(
                &Element::generator(b1, Gen::T12S).scale(&Scalar::q_pow(-1)).neg(),
                &Element::generator(b2, Gen::T12),
            );
            let v = letter_v(b1, b2);
            assert_eq!(
                v.tensor_mul(&t).unwrap(),
                t.tensor_mul(&v).unwrap().scale(&q2)
            );
            // The inverse hook really inverts.
            let winv = hook_w_inv(b1, b2);
            let one = TensorElement::one(b1, b2);
            assert_eq!(w.tensor_mul(&winv).unwrap(), one);
            assert_eq!(winv.tensor_mul(&w).unwrap(), one);
        }
    }

    #[test]
    fn kernel_entries_are_invariant() {
        let cfg = UqConfig::default();
        for (b1, b2) in PAIRS {
            for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let k = kernel_k(i, j, b1, b2).unwrap();
                assert!(
                    is_invariant_kernel(&cfg, &k).unwrap(),
                    "entry ({i}, {j}) is not invariant on {:?} x {:?}",
                    b1,
                    b2
                );
            }
        }
    }

    #[test]
    fn kernel_relations_hold_on_all_pairs() {
        for (b1, b2) in PAIRS {
            for (name, ok) in verify_k_relations(b1, b2).unwrap() {
                assert!(ok, "{name} fails on {:?} x {:?}", b1, b2);
            }
        }
    }

    #[test]
    fn sharp_permutes_the_entries() {
        for (b1, b2) in PAIRS {
            let k11 = kernel_k(1, 1, b1, b2).unwrap();
            let k12 = kernel_k(1, 2, b1, b2).unwrap();
            let k21 = kernel_k(2, 1, b1, b2).unwrap();
            let k22 = kernel_k(2, 2, b1, b2).unwrap();
            assert_eq!(k11.sharp(), k22.scale(&Scalar::q_pow(2)));
            assert_eq!(k12.sharp(), k21.scale(&Scalar::q_pow(-1)));
            assert_eq!(k21.sharp(), k12.scale(&Scalar::q_pow(1)));
            assert_eq!(k22.sharp(), k11.scale(&Scalar::q_pow(-2)));
        }
    }

    #[test]
    fn factored_powers_match_direct() {
        for l in 0..=2 {
            let (k11, k22) = kernel_power_factored(l, bx(), bx()).unwrap();
            assert_eq!(k11.direct, k11.factored, "k11^{l}");
            assert_eq!(k22.direct, k22.factored, "k22^{l}");
            // The factored product also reproduces the direct power product.
            let prod = k22.factored.tensor_mul(&k11.factored).unwrap();
            let direct = k22.direct.tensor_mul(&k11.direct).unwrap();
            assert_eq!(prod, direct);
        }
        let (k11, k22) = kernel_power_factored(1, SpaceBase::TildeXi, SpaceBase::TildeXi).unwrap();
        assert_eq!(k11.direct, k11.factored);
        assert_eq!(k22.direct, k22.factored);
    }

    #[test]
    fn intermediate_pochhammer_form() {
        // k22^l k11^l = q^{-2l} xi^l (q^2 v; q^2)_l (u; q^2)_l x^l before the
        // series expansion.
        for l in 0..=2u32 {
            let direct = kernel_k(2, 2, bx(), bx())
                .unwrap()
                .pow(l)
                .unwrap()
                .tensor_mul(&kernel_k(1, 1, bx(), bx()).unwrap().pow(l).unwrap())
                .unwrap();
            let u = letter_u(bx(), bx());
            let v = letter_v(bx(), bx());
            let vpart = tensor_pochhammer(&v, &Scalar::q_pow(2), &Scalar::q_pow(2), l).unwrap();
            let upart = tensor_pochhammer(&u, &Scalar::one(), &Scalar::q_pow(2), l).unwrap();
            let rhs = xi_right(l, bx(), bx())
                .tensor_mul(&vpart)
                .unwrap()
                .tensor_mul(&upart)
                .unwrap()
                .tensor_mul(&x_left(l, bx(), bx()))
                .unwrap()
                .scale(&Scalar::q_pow(-2 * l as i64));
            assert_eq!(direct, rhs, "l = {l}");
        }
    }

    #[test]
    fn power_product_series_terminates_and_matches() {
        for l in 0..=3 {
            assert!(lemma65_check(l, bx(), bx()).unwrap(), "plane pair, l = {l}");
        }
        for (b1, b2) in PAIRS {
            assert!(lemma65_check(1, b1, b2).unwrap(), "{:?} x {:?}", b1, b2);
        }
    }

    #[test]
    fn generalized_blocks_reproduce_the_product() {
        for l in 0..=2 {
            let direct = kernel_k(2, 2, bx(), bx())
                .unwrap()
                .pow(l)
                .unwrap()
                .tensor_mul(&kernel_k(1, 1, bx(), bx()).unwrap().pow(l).unwrap())
                .unwrap();
            let blocks = generalized_kernel_blocks(l, bx(), bx()).unwrap();
            assert_eq!(blocks, direct, "l = {l}");
            assert_eq!(to_generalized_kernel(&blocks), blocks);
        }
        // Diagonal coefficient at j = 1, l = 1.
        let c = qbinomial_series(&Scalar::q_pow(-2), 1);
        let diag = c[1].mul(&c[1]).mul(&Scalar::q_pow(6));
        assert_eq!(diag, Scalar::q_pow(2));
    }

    #[test]
    fn continuation_evaluates_to_the_powers() {
        let lk = continue_kernel(3, bx(), bx()).unwrap();
        for l in 0..=3u32 {
            let direct = kernel_k(2, 2, bx(), bx())
                .unwrap()
                .pow(l)
                .unwrap()
                .tensor_mul(&kernel_k(1, 1, bx(), bx()).unwrap().pow(l).unwrap())
                .unwrap();
            assert_eq!(lk.evaluate(l).unwrap(), direct, "l = {l}");
        }
        assert!(lk.evaluate(4).is_err());
        assert!(continue_kernel(2, SpaceBase::TildeXi, SpaceBase::TildeXi).is_err());
        for (b1, b2) in [(bx(), SpaceBase::TildeXi), (SpaceBase::TildeXi, bx())] {
            let lk = continue_kernel(2, b1, b2).unwrap();
            for l in 0..=2u32 {
                let direct = kernel_k(2, 2, b1, b2)
                    .unwrap()
                    .pow(l)
                    .unwrap()
                    .tensor_mul(&kernel_k(1, 1, b1, b2).unwrap().pow(l).unwrap())
                    .unwrap();
                assert_eq!(lk.evaluate(l).unwrap(), direct, "l = {l} on {:?} x {:?}", b1, b2);
            }
        }
    }

    #[test]
    fn symbolic_pairing_interpolates_the_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let lk = continue_kernel(5, bx(), bx()).unwrap();
        let mut checked = 0;
        for _ in 0..6 {
            let f = TensorElement::simple(
                &random_finite(&mut rng, bx(), 2),
                &random_finite(&mut rng, bx(), 2),
            );
            let paired = match lk.pair(&f) {
                Ok(p) => p,
                Err(_) => continue,
            };
            checked += 1;
            for l in 0..=3u32 {
                let direct = lk.evaluate(l).unwrap();
                let expect = pairing(&direct, &f).unwrap();
                let got = paired.subst_lambda(&Scalar::q_pow(2 * l as i64)).unwrap();
                assert_eq!(got, expect, "l = {l}");
            }
        }
        assert!(checked > 0);
        // A window too small for the support is rejected: both factors sit
        // away from the head, so the boundary band still contributes.
        let narrow = continue_kernel(1, bx(), bx()).unwrap();
        let far = TensorElement::simple(
            &Element::delta(bx(), 2).unwrap(),
            &Element::delta(bx(), 2).unwrap(),
        );
        assert!(narrow.pair(&far).is_err());
    }

    #[test]
    fn truncated_inverse_inverts() {
        for (b1, b2) in [(bx(), bx()), (bx(), SpaceBase::TildeXi)] {
            for l in 1..=2 {
                assert!(
                    prop69_check(l, 8, b1, b2).unwrap(),
                    "l = {l} on {:?} x {:?}",
                    b1,
                    b2
                );
            }
        }
        // The geometric case: at l = 1 every series coefficient is one.
        let series = inverse_power_series(1, 4, bx(), bx()).unwrap();
        let u = letter_u(bx(), bx());
        let mut expect = TensorElement::zero(u.outer.space, u.space2);
        for n in 0..=4 {
            expect = expect.add(&u.pow(n).unwrap()).unwrap();
        }
        assert_eq!(series, expect);
    }

    #[test]
    fn integral_operators_intertwine_the_action() {
        let cfg = UqConfig::default();
        let k11 = kernel_k(1, 1, bx(), bx()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..4 {
            let f = random_finite(&mut rng, bx(), 2);
            for g in UqGen::ALL {
                let lhs = apply_integral_operator(&k11, &act(&cfg, g, &f).unwrap()).unwrap();
                let rhs = act(&cfg, g, &apply_integral_operator(&k11, &f).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "generator {:?}", g);
            }
        }
    }

    #[test]
    fn sharp_identity_against_the_inner_integral() {
        let one = TensorElement::one(bx(), bx());
        let k12 = kernel_k(1, 2, bx(), bx()).unwrap();
        let prod = kernel_k(2, 2, bx(), bx())
            .unwrap()
            .tensor_mul(&kernel_k(1, 1, bx(), bx()).unwrap())
            .unwrap();
        let e0 = Element::e0(bx()).unwrap();
        let t12e0 = Element::generator(bx(), Gen::T12).mul(&e0).unwrap();
        for k in [&one, &k12, &prod] {
            for f in [&e0, &t12e0] {
                let lhs = apply_integral_operator(&k.sharp(), f).unwrap();
                let rhs = apply_integral_operator(k, &f.star()).unwrap().star();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn act_tensor_matches_componentwise_weights() {
        // The kernel entries have balanced weights, so H kills them termwise.
        let cfg = UqConfig::default();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let k = kernel_k(i, j, bx(), bx()).unwrap();
            assert!(act_tensor(&cfg, UqGen::H, &k).unwrap().is_zero());
        }
    }
}
