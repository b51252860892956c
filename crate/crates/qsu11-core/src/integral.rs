//! Invariant integrals on the quantum spaces and the trace functional.
//!
//! `NuTildeX` and `NuTildeXi` are the Jackson-type invariant integrals on the
//! hyperboloid and cone grids, `Eta` is the functional on homogeneity-degree
//! minus-one cone distributions, and `TraceL` is the trace functional
//! f -> nu(f x^{-1}) on finite hyperboloid functions.

use crate::action::{act, UqConfig, UqGen};
use crate::error::{Error, Result};
use crate::pbw::{Element, PBWKey};
use crate::scalar::Scalar;
use crate::space::SpaceBase;

/// The available integral functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralTag {
    /// The invariant integral on the quantum hyperboloid.
    NuTildeX,
    /// The invariant integral on the quantum cone.
    NuTildeXi,
    /// The functional on homogeneity-degree minus-one cone distributions.
    Eta,
    /// The trace functional on finite hyperboloid functions.
    TraceL,
}

impl IntegralTag {
    /// The grid the functional integrates over.
    pub fn base(self) -> SpaceBase {
        match self {
            IntegralTag::NuTildeX | IntegralTag::TraceL => SpaceBase::TildeX,
            IntegralTag::NuTildeXi | IntegralTag::Eta => SpaceBase::TildeXi,
        }
    }

    /// The CLI-facing name.
    pub fn name(self) -> &'static str {
        match self {
            IntegralTag::NuTildeX => "nu-x",
            IntegralTag::NuTildeXi => "nu-xi",
            IntegralTag::Eta => "eta",
            IntegralTag::TraceL => "trace-l",
        }
    }
}

/// Sums the radial coefficient over the grid with weight (1-q^2) x_m.
///
/// Only the coefficient at the identity key contributes: every other basis
/// monomial has a nontrivial circle weight and averages to zero.
fn nu(f: &Element) -> Result<Scalar> {
    if !f.is_finite_in_fact() {
        return Err(Error::NotFinite(
            "integral needs finitely supported coefficients".into(),
        ));
    }
    let base = f.space.base;
    let mut total = Scalar::zero();
    if let Some(psi) = f.terms.get(&PBWKey::new(0, 0, 0)) {
        for (m, c) in &psi.corrections {
            total = total.add(&c.mul(&base.integral_weight(*m)));
        }
    }
    let factor = Scalar::one().sub(&Scalar::q_pow(2));
    Ok(total.mul(&factor))
}

/// Evaluates an integral functional exactly.
pub fn integrate(tag: IntegralTag, f: &Element) -> Result<Scalar> {
    if f.space.base != tag.base() {
        return Err(Error::SpaceMismatch(format!(
            "{} integrates over the {} grid",
            tag.name(),
            tag.base().name()
        )));
    }
    match tag {
        IntegralTag::NuTildeX | IntegralTag::NuTildeXi => nu(f),
        IntegralTag::Eta => {
            if f.is_zero() {
                return Ok(Scalar::zero());
            }
            if f.homogeneity_2l() != Some(-2) {
                return Err(Error::NotHomogeneous(
                    "eta needs homogeneity degree -1".into(),
                ));
            }
            let v = f
                .terms
                .get(&PBWKey::new(0, 0, 0))
                .map(|psi| psi.value(SpaceBase::TildeXi, 0))
                .unwrap_or_else(Scalar::zero);
            Ok(v)
        }
        IntegralTag::TraceL => {
            let g = f.mul(&Element::x_pow(SpaceBase::TildeX, -1))?;
            nu(&g)
        }
    }
}

/// Checks the counit form of invariance: the integral of every generator
/// image vanishes.
pub fn is_invariant_at(cfg: &UqConfig, tag: IntegralTag, f: &Element) -> Result<bool> {
    if tag == IntegralTag::TraceL {
        // The trace functional is not itself invariant; callers use the
        // trace identity instead.
        return Err(Error::Unsupported(
            "invariance is checked for nu and eta only".into(),
        ));
    }
    for g in UqGen::ALL {
        let image = act(cfg, g, f)?;
        if !integrate(tag, &image)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The trace identity: both product orders integrate equally under `TraceL`.
pub fn trace_property_check(f1: &Element, f2: &Element) -> Result<bool> {
    let a = integrate(IntegralTag::TraceL, &f1.mul(f2)?)?;
    let b = integrate(IntegralTag::TraceL, &f2.mul(f1)?)?;
    Ok(a == b)
}
