//! Radial coefficient functions.
//!
//! A coefficient function pairs a Laurent polynomial in the radial coordinate
//! `x` with a finitely supported additive correction on the grid. Its value
//! at grid index `m` is `laurent(x_m) + corrections[m]`. The pair is kept
//! canonical: zero entries are pruned, and on the one-sided grid correction
//! indices are nonnegative.
//!
//! Coefficients are generic over the scalar type so the same machinery can
//! carry plain scalars or whole inner elements (for two-variable kernels);
//! the generic scalar is never created from nothing, only transported, so
//! the trait needs no unit.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::SpaceBase;

/// Scalar-like values a coefficient function can carry.
pub trait CoeffScalar: Clone + PartialEq + std::fmt::Debug {
    fn cs_is_zero(&self) -> bool;
    fn cs_add(&self, o: &Self) -> Self;
    fn cs_neg(&self) -> Self;
    /// Multiplication by a central scalar.
    fn cs_scale(&self, s: &Scalar) -> Self;
    /// Conjugation under the involution of the algebra of values.
    fn cs_conj(&self) -> Self;
}

impl CoeffScalar for Scalar {
    fn cs_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn cs_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn cs_neg(&self) -> Self {
        self.neg()
    }
    fn cs_scale(&self, s: &Scalar) -> Self {
        self.mul(s)
    }
    fn cs_conj(&self) -> Self {
        // The scalar field is fixed by the involution.
        self.clone()
    }
}

/// Laurent polynomial in the radial coordinate with plain scalar
/// coefficients; maps a power of `x` to its coefficient.
pub type Laurent = BTreeMap<i64, Scalar>;

/// A single scalar Laurent monomial `c x^p`.
pub fn laurent_mono(p: i64, c: Scalar) -> Laurent {
    let mut m = BTreeMap::new();
    if !c.is_zero() {
        m.insert(p, c);
    }
    m
}

/// Coefficient function: Laurent part plus finitely supported corrections.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFn<S: CoeffScalar = Scalar> {
    /// Power of `x` -> coefficient; entries are nonzero.
    pub laurent: BTreeMap<i64, S>,
    /// Grid index -> additive correction; entries are nonzero.
    pub corrections: BTreeMap<i64, S>,
}

impl<S: CoeffScalar> CoeffFn<S> {
    pub fn zero() -> Self {
        CoeffFn { laurent: BTreeMap::new(), corrections: BTreeMap::new() }
    }

    /// `value * x^p`.
    pub fn from_laurent(p: i64, value: S) -> Self {
        let mut f = CoeffFn::zero();
        if !value.cs_is_zero() {
            f.laurent.insert(p, value);
        }
        f
    }

    /// Point mass `value` at grid index `m`.
    pub fn delta(m: i64, value: S) -> Self {
        let mut f = CoeffFn::zero();
        if !value.cs_is_zero() {
            f.corrections.insert(m, value);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.laurent.is_empty() && self.corrections.is_empty()
    }

    /// No Laurent tail: the function is a finite sum of point masses.
    pub fn is_finite(&self) -> bool {
        self.laurent.is_empty()
    }

    /// Polynomial in `x` with no point masses.
    pub fn is_polynomial(&self) -> bool {
        self.corrections.is_empty() && self.laurent.keys().all(|&p| p >= 0)
    }

    fn prune(mut self) -> Self {
        self.laurent.retain(|_, c| !c.cs_is_zero());
        self.corrections.retain(|_, c| !c.cs_is_zero());
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &o.laurent {
            match out.laurent.get_mut(p) {
                Some(e) => *e = e.cs_add(c),
                None => {
                    out.laurent.insert(*p, c.clone());
                }
            }
        }
        for (m, c) in &o.corrections {
            match out.corrections.get_mut(m) {
                Some(e) => *e = e.cs_add(c),
                None => {
                    out.corrections.insert(*m, c.clone());
                }
            }
        }
        out.prune()
    }

    pub fn neg(&self) -> Self {
        CoeffFn {
            laurent: self.laurent.iter().map(|(p, c)| (*p, c.cs_neg())).collect(),
            corrections: self.corrections.iter().map(|(m, c)| (*m, c.cs_neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return CoeffFn::zero();
        }
        CoeffFn {
            laurent: self.laurent.iter().map(|(p, c)| (*p, c.cs_scale(s))).collect(),
            corrections: self.corrections.iter().map(|(m, c)| (*m, c.cs_scale(s))).collect(),
        }
        .prune()
    }

    pub fn conj(&self) -> Self {
        CoeffFn {
            laurent: self.laurent.iter().map(|(p, c)| (*p, c.cs_conj())).collect(),
            corrections: self.corrections.iter().map(|(m, c)| (*m, c.cs_conj())).collect(),
        }
    }

    /// Argument rescaling `f(x) -> f(q^{2s} x)`.
    ///
    /// Laurent monomials pick up `q^{2sp}`; point masses move along the grid
    /// and fall off the end of the one-sided grid.
    pub fn shift_arg(&self, s: i64, base: SpaceBase) -> Self {
        let mut out: CoeffFn<S> = CoeffFn::zero();
        for (p, c) in &self.laurent {
            out.laurent.insert(*p, c.cs_scale(&Scalar::q_pow(2 * s * p)));
        }
        for (m, c) in &self.corrections {
            let idx = match base {
                SpaceBase::TildeX => m + s,
                SpaceBase::TildeXi => m - s,
            };
            if base.on_grid(idx) {
                out.corrections.insert(idx, c.clone());
            }
        }
        out.prune()
    }

    /// Value of the Laurent part at grid index `m`, or `None` when the
    /// Laurent part is empty.
    fn eval_laurent(&self, base: SpaceBase, m: i64) -> Option<S> {
        let mut acc: Option<S> = None;
        for (p, c) in &self.laurent {
            let t = c.cs_scale(&base.grid_power(m, *p));
            acc = Some(match acc {
                Some(a) => a.cs_add(&t),
                None => t,
            });
        }
        acc
    }

    /// Full value at grid index `m` (Laurent part plus correction), or `None`
    /// when both contributions are empty.
    pub fn value_opt(&self, base: SpaceBase, m: i64) -> Option<S> {
        let l = self.eval_laurent(base, m);
        match (l, self.corrections.get(&m)) {
            (Some(a), Some(c)) => Some(a.cs_add(c)),
            (Some(a), None) => Some(a),
            (None, Some(c)) => Some(c.clone()),
            (None, None) => None,
        }
    }

    /// Multiplication by a plain scalar Laurent polynomial.
    pub fn mul_laurent(&self, l: &Laurent, base: SpaceBase) -> Self {
        let mut out: CoeffFn<S> = CoeffFn::zero();
        for (p1, c1) in &self.laurent {
            for (p2, c2) in l {
                let t = c1.cs_scale(c2);
                let p = p1 + p2;
                match out.laurent.get_mut(&p) {
                    Some(e) => *e = e.cs_add(&t),
                    None => {
                        out.laurent.insert(p, t);
                    }
                }
            }
        }
        for (m, c) in &self.corrections {
            let mut at = Scalar::zero();
            for (p2, c2) in l {
                at = at.add(&c2.mul(&base.grid_power(*m, *p2)));
            }
            let t = c.cs_scale(&at);
            if !t.cs_is_zero() {
                out.corrections.insert(*m, t);
            }
        }
        out.prune()
    }

    /// Pointwise product with another coefficient function; `comb` combines a
    /// left value with a right value (in that order) so callers control the
    /// multiplication of non-commuting carried values.
    pub fn mul_with(&self, o: &Self, base: SpaceBase, comb: &dyn Fn(&S, &S) -> S) -> Self {
        let mut out: CoeffFn<S> = CoeffFn::zero();
        for (p1, c1) in &self.laurent {
            for (p2, c2) in &o.laurent {
                let t = comb(c1, c2);
                let p = p1 + p2;
                match out.laurent.get_mut(&p) {
                    Some(e) => *e = e.cs_add(&t),
                    None => {
                        out.laurent.insert(p, t);
                    }
                }
            }
        }
        let mut indices: Vec<i64> = self.corrections.keys().copied().collect();
        for m in o.corrections.keys() {
            if !indices.contains(m) {
                indices.push(*m);
            }
        }
        for m in indices {
            let mut acc: Option<S> = None;
            let push = |acc: &mut Option<S>, t: S| {
                *acc = Some(match acc.take() {
                    Some(a) => a.cs_add(&t),
                    None => t,
                });
            };
            if let Some(c2) = o.corrections.get(&m) {
                if let Some(l1) = self.eval_laurent(base, m) {
                    push(&mut acc, comb(&l1, c2));
                }
            }
            if let Some(c1) = self.corrections.get(&m) {
                if let Some(l2) = o.eval_laurent(base, m) {
                    push(&mut acc, comb(c1, &l2));
                }
                if let Some(c2) = o.corrections.get(&m) {
                    push(&mut acc, comb(c1, c2));
                }
            }
            if let Some(v) = acc {
                out.corrections.insert(m, v);
            }
        }
        out.prune()
    }

    /// Difference quotient `(f(x) - f(q^{2s} x)) / ((1 - q^{2s}) x)` for
    /// `s = 1` or `s = -1`.
    ///
    /// On the one-sided grid the forward quotient (`s = 1`) of a point mass
    /// would need the value one step outside the grid, which is not defined;
    /// that combination is rejected.
    pub fn difference_quotient(&self, s: i64, base: SpaceBase) -> Result<Self> {
        assert!(s == 1 || s == -1, "difference quotient step must be +-1");
        if s == 1 && base == SpaceBase::TildeX && !self.corrections.is_empty() {
            return Err(Error::OffGrid(
                "forward difference of a point mass on the one-sided grid".into(),
            ));
        }
        let denom = Scalar::one().sub(&Scalar::q_pow(2 * s));
        let mut out: CoeffFn<S> = CoeffFn::zero();
        for (p, c) in &self.laurent {
            // x^p -> (1 - q^{2sp})/(1 - q^{2s}) x^{p-1}; vanishes at p = 0.
            let factor = Scalar::one().sub(&Scalar::q_pow(2 * s * p)).div(&denom).unwrap();
            if factor.is_zero() {
                continue;
            }
            let t = c.cs_scale(&factor);
            let p1 = p - 1;
            match out.laurent.get_mut(&p1) {
                Some(e) => *e = e.cs_add(&t),
                None => {
                    out.laurent.insert(p1, t);
                }
            }
        }
        for (j, c) in &self.corrections {
            // f(x_m) contributes at m = j; f(q^{2s} x_m) contributes at the
            // index m whose shifted argument lands on j.
            let w_j = denom.mul(&base.grid_power(*j, 1)).recip().unwrap();
            let t = c.cs_scale(&w_j);
            match out.corrections.get_mut(j) {
                Some(e) => *e = e.cs_add(&t),
                None => {
                    out.corrections.insert(*j, t);
                }
            }
            let m = match base {
                SpaceBase::TildeX => j + s,
                SpaceBase::TildeXi => j - s,
            };
            if base.on_grid(m) {
                let w_m = denom.mul(&base.grid_power(m, 1)).recip().unwrap();
                let t = c.cs_scale(&w_m).cs_neg();
                match out.corrections.get_mut(&m) {
                    Some(e) => *e = e.cs_add(&t),
                    None => {
                        out.corrections.insert(m, t);
                    }
                }
            }
        }
        Ok(out.prune())
    }

    /// Applies `f` to every carried value.
    pub fn map<T: CoeffScalar>(&self, f: &dyn Fn(&S) -> T) -> CoeffFn<T> {
        CoeffFn {
            laurent: self.laurent.iter().map(|(p, c)| (*p, f(c))).collect(),
            corrections: self.corrections.iter().map(|(m, c)| (*m, f(c))).collect(),
        }
        .prune()
    }
}

impl CoeffFn<Scalar> {
    pub fn one() -> Self {
        CoeffFn::from_laurent(0, Scalar::one())
    }

    /// Value at grid index `m`, zero when unset.
    pub fn value(&self, base: SpaceBase, m: i64) -> Scalar {
        self.value_opt(base, m).unwrap_or_else(Scalar::zero)
    }

    /// Pointwise product for plain scalars.
    pub fn mul(&self, o: &Self, base: SpaceBase) -> Self {
        self.mul_with(o, base, &|a, b| a.mul(b))
    }

    /// `Some((power, coeff))` when the function is a single Laurent monomial
    /// with no corrections.
    pub fn as_monomial(&self) -> Option<(i64, Scalar)> {
        if !self.corrections.is_empty() || self.laurent.len() != 1 {
            return None;
        }
        let (p, c) = self.laurent.iter().next().unwrap();
        Some((*p, c.clone()))
    }
}
