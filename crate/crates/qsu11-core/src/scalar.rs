//! Exact scalar arithmetic.
//!
//! Scalars are rational functions in the deformation parameter with an
//! optional Laurent dependence on the continuation variable `lambda`. They
//! are stored as `num / den` where `num` maps a lambda power to an integer
//! polynomial in `v` and `den` is a lambda-free integer polynomial in `v`.
//! The deformation parameter is `q = v^2`, so every half-integer power of `q`
//! is an integer power of `v` and stays exact.
//!
//! Invariants: numerator components are nonzero, the polynomial gcd of all
//! numerator components together with the denominator is one, and the
//! denominator has a positive leading coefficient. Equality of reduced
//! representations is therefore structural equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial in `v`; index is the power of `v`.
///
/// Kept free of trailing zeros, so the empty vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPoly(Vec<BigInt>);

impl VPoly {
    /// Zero polynomial.
    pub fn zero() -> Self {
        VPoly(Vec::new())
    }

    /// Constant one.
    pub fn one() -> Self {
        VPoly(vec![BigInt::one()])
    }

    /// `c * v^pow`.
    pub fn monomial(c: BigInt, pow: usize) -> Self {
        if c.is_zero() {
            return VPoly::zero();
        }
        let mut v = vec![BigInt::zero(); pow + 1];
        v[pow] = c;
        VPoly(v)
    }

    /// Builds from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut v: Vec<BigInt>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        VPoly(v)
    }

    /// Coefficient access, high powers read as zero.
    pub fn coeff(&self, pow: usize) -> BigInt {
        self.0.get(pow).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// `true` when the polynomial is `c * v^k` for a single `k`.
    pub fn is_monomial(&self) -> bool {
        self.0.iter().filter(|c| !c.is_zero()).count() == 1
    }

    fn add(&self, o: &VPoly) -> VPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + o.coeff(i));
        }
        VPoly::from_coeffs(v)
    }

    fn neg(&self) -> VPoly {
        VPoly(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, o: &VPoly) -> VPoly {
        self.add(&o.neg())
    }

    fn mul(&self, o: &VPoly) -> VPoly {
        if self.is_zero() || o.is_zero() {
            return VPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        VPoly::from_coeffs(v)
    }

    /// Multiplies by `v^k`.
    fn shl(&self, k: usize) -> VPoly {
        if self.is_zero() {
            return VPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        VPoly(v)
    }

    /// gcd of all coefficients, nonnegative.
    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    /// Exact division; `None` when `d` does not divide `self` over the
    /// integers.
    fn divexact(&self, d: &VPoly) -> Option<VPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(VPoly::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        let dd = d.degree().unwrap();
        let nd = self.degree()?;
        if nd < dd {
            return None;
        }
        let lead = &d.0[dd];
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = rem[i + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for j in 0..=dd {
                let t = &qc * &d.0[j];
                rem[i + j] -= t;
            }
            quot[i] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(VPoly::from_coeffs(quot))
    }

    /// Primitive part with positive leading coefficient.
    fn primitive(&self) -> VPoly {
        if self.is_zero() {
            return VPoly::zero();
        }
        let mut c = self.content();
        if self.0.last().unwrap().is_negative() {
            c = -c;
        }
        self.divexact(&VPoly(vec![c])).unwrap()
    }

    /// Polynomial gcd over the integers (primitive remainder sequence),
    /// normalized to a positive leading coefficient.
    fn gcd(&self, o: &VPoly) -> VPoly {
        if self.is_zero() {
            return o.primitive().mul(&VPoly(vec![o.content()]));
        }
        let cont = self.content().gcd(&o.content());
        let mut a = self.primitive();
        let mut b = o.primitive();
        if b.is_zero() {
            return a.mul(&VPoly(vec![cont]));
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive().mul(&VPoly(vec![cont]))
    }

    /// Pseudo-remainder of `self` by `d` (nonzero `d`, deg self >= deg d or
    /// returns self scaled trivially).
    fn prem(&self, d: &VPoly) -> VPoly {
        let dd = d.degree().expect("pseudo-remainder by zero");
        let mut r = self.clone();
        let lead = d.0[dd].clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let top = r.0[rd].clone();
            let scaled = VPoly(r.0.iter().map(|c| c * &lead).collect());
            let shifted = d.shl(rd - dd);
            let sub = VPoly(shifted.0.iter().map(|c| c * &top).collect());
            r = scaled.sub(&sub);
        }
        r
    }

}

/// Exact scalar: Laurent polynomial in `lambda` over rational functions in
/// `v`, with a lambda-free denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    /// lambda power -> polynomial in v; values are nonzero.
    num: BTreeMap<i64, VPoly>,
    /// lambda-free denominator; positive leading coefficient.
    den: VPoly,
}

impl Scalar {
    fn make(num: BTreeMap<i64, VPoly>, den: VPoly) -> Scalar {
        let mut s = Scalar { num, den };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.num.retain(|_, p| !p.is_zero());
        if self.num.is_empty() {
            self.den = VPoly::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        // Fast path: monomial denominator reduces by valuation and content.
        if self.den.is_monomial() {
            let dval = self.den.valuation().unwrap();
            let mut val = usize::MAX;
            let mut cont = self.den.content();
            for p in self.num.values() {
                val = val.min(p.valuation().unwrap());
                cont = cont.gcd(&p.content());
            }
            let shift = val.min(dval);
            if shift > 0 || !cont.is_one() {
                let g = VPoly::monomial(cont, shift);
                for p in self.num.values_mut() {
                    *p = p.divexact(&g).unwrap();
                }
                self.den = self.den.divexact(&g).unwrap();
            }
        } else {
            let mut g = self.den.clone();
            for p in self.num.values() {
                if g.is_one() {
                    break;
                }
                g = g.gcd(p);
            }
            if !g.is_one() {
                for p in self.num.values_mut() {
                    *p = p.divexact(&g).unwrap();
                }
                self.den = self.den.divexact(&g).unwrap();
            }
        }
        if self.den.0.last().unwrap().is_negative() {
            self.den = self.den.neg();
            for p in self.num.values_mut() {
                *p = p.neg();
            }
        }
    }

    pub fn zero() -> Scalar {
        Scalar { num: BTreeMap::new(), den: VPoly::one() }
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Scalar {
        let mut num = BTreeMap::new();
        if n != 0 {
            num.insert(0, VPoly(vec![BigInt::from(n)]));
        }
        Scalar { num, den: VPoly::one() }
    }

    /// `v^k` for any integer `k`.
    pub fn v_pow(k: i64) -> Scalar {
        if k >= 0 {
            let mut num = BTreeMap::new();
            num.insert(0, VPoly::monomial(BigInt::one(), k as usize));
            Scalar { num, den: VPoly::one() }
        } else {
            let mut num = BTreeMap::new();
            num.insert(0, VPoly::one());
            Scalar { num, den: VPoly::monomial(BigInt::one(), (-k) as usize) }
        }
    }

    /// `q^k = v^{2k}`.
    pub fn q_pow(k: i64) -> Scalar {
        Scalar::v_pow(2 * k)
    }

    /// `q^{half/2} = v^half`; exact half-integer powers of `q`.
    pub fn q_pow_half(half: i64) -> Scalar {
        Scalar::v_pow(half)
    }

    /// `lambda^k`.
    pub fn lambda_pow(k: i64) -> Scalar {
        let mut num = BTreeMap::new();
        num.insert(k, VPoly::one());
        Scalar { num, den: VPoly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one()
            && self.num.len() == 1
            && self.num.get(&0).is_some_and(|p| p.is_one())
    }

    /// `true` when no lambda power other than zero occurs.
    pub fn is_lambda_free(&self) -> bool {
        self.num.keys().all(|&k| k == 0)
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let mut num: BTreeMap<i64, VPoly> = BTreeMap::new();
        if self.den == o.den {
            for (k, p) in &self.num {
                num.insert(*k, p.clone());
            }
            for (k, p) in &o.num {
                let e = num.entry(*k).or_insert_with(VPoly::zero);
                *e = e.add(p);
            }
            return Scalar::make(num, self.den.clone());
        }
        for (k, p) in &self.num {
            num.insert(*k, p.mul(&o.den));
        }
        for (k, p) in &o.num {
            let t = p.mul(&self.den);
            let e = num.entry(*k).or_insert_with(VPoly::zero);
            *e = e.add(&t);
        }
        Scalar::make(num, self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.iter().map(|(k, p)| (*k, p.neg())).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let mut num: BTreeMap<i64, VPoly> = BTreeMap::new();
        for (k1, p1) in &self.num {
            for (k2, p2) in &o.num {
                let t = p1.mul(p2);
                let e = num.entry(k1 + k2).or_insert_with(VPoly::zero);
                *e = e.add(&t);
            }
        }
        if self.den.is_one() && o.den.is_one() {
            // Already reduced: a unit denominator shares no factor.
            let mut s = Scalar { num, den: VPoly::one() };
            s.num.retain(|_, p| !p.is_zero());
            return s;
        }
        Scalar::make(num, self.den.mul(&o.den))
    }

    /// Multiplicative inverse. Defined when the numerator is a single lambda
    /// power, so the result keeps a lambda-free denominator.
    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Division("division by zero".into()));
        }
        if self.num.len() != 1 {
            return Err(Error::Division(
                "inverse of a scalar with several lambda terms is not representable".into(),
            ));
        }
        let (k, p) = self.num.iter().next().unwrap();
        let mut num = BTreeMap::new();
        num.insert(-k, self.den.clone());
        Scalar::make_signed(num, p.clone())
    }

    fn make_signed(num: BTreeMap<i64, VPoly>, den: VPoly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::Division("division by zero".into()));
        }
        Ok(Scalar::make(num, den))
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.recip()?))
    }

    /// Integer power; negative exponents require an invertible scalar.
    pub fn pow(&self, n: i64) -> Result<Scalar> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Scales by an integer.
    pub fn scale_int(&self, n: i64) -> Scalar {
        self.mul(&Scalar::from_int(n))
    }

    /// Substitutes a value for `lambda`. Negative lambda powers require the
    /// value to be invertible.
    pub fn subst_lambda(&self, val: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (k, p) in &self.num {
            let mut coeff = BTreeMap::new();
            coeff.insert(0, p.clone());
            let c = Scalar { num: coeff, den: VPoly::one() };
            acc = acc.add(&c.mul(&val.pow(*k)?));
        }
        let mut dnum = BTreeMap::new();
        dnum.insert(0, self.den.clone());
        acc.div(&Scalar { num: dnum, den: VPoly::one() })
    }

    /// Decomposes a monomial scalar into `(coefficient, v power, lambda
    /// power)`, or `None` when the scalar is not of that shape.
    pub fn as_monomial(&self) -> Option<(BigInt, i64, i64)> {
        if self.num.len() != 1 || !self.den.is_monomial() {
            return None;
        }
        let (k, p) = self.num.iter().next().unwrap();
        if !p.is_monomial() {
            return None;
        }
        let pv = p.valuation().unwrap();
        let dv = self.den.valuation().unwrap();
        let dc = self.den.coeff(dv);
        if !dc.is_one() {
            return None;
        }
        Some((p.coeff(pv), pv as i64 - dv as i64, *k))
    }

    /// Canonical textual form; see the module documentation of `json` for the
    /// grammar. Always re-parseable by [`Scalar::parse`].
    pub fn to_string_v(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // Fold a pure v-power denominator into negative powers.
        let fold = if self.den.is_monomial() && self.den.coeff(self.den.valuation().unwrap()).is_one()
        {
            self.den.valuation().unwrap() as i64
        } else {
            0
        };
        let folded_den = fold > 0 || self.den.is_one();
        let num_str = render_terms(&self.num, -fold);
        if folded_den {
            num_str
        } else {
            let mut dmap = BTreeMap::new();
            dmap.insert(0, self.den.clone());
            format!("({})/({})", num_str, render_terms(&dmap, 0))
        }
    }

    /// Parses the canonical textual form produced by [`Scalar::to_string_v`].
    /// Also accepts `q` (for `v^2`) and explicit fractions of sums.
    pub fn parse(input: &str) -> Result<Scalar> {
        let mut p = ScalarParser { s: input.as_bytes(), pos: 0 };
        let v = p.parse_expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse { offset: p.pos, message: "trailing input".into() });
        }
        Ok(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_v())
    }
}

/// Renders a lambda-power map as a sum of space-joined monomial products,
/// shifting every v power by `vshift` (used to fold monomial denominators).
fn render_terms(num: &BTreeMap<i64, VPoly>, vshift: i64) -> String {
    let mut out = String::new();
    let mut first = true;
    for (k, p) in num {
        let mut powers: Vec<usize> = (0..p.0.len()).filter(|&i| !p.coeff(i).is_zero()).collect();
        powers.reverse();
        for i in powers {
            let c = p.coeff(i);
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push_str("- ");
                }
                first = false;
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let vp = i as i64 + vshift;
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (vp == 0 && *k == 0) {
                parts.push(mag.to_string());
            }
            if vp == 1 {
                parts.push("v".into());
            } else if vp != 0 {
                parts.push(format!("v^{}", vp));
            }
            if *k == 1 {
                parts.push("lambda".into());
            } else if *k != 0 {
                parts.push(format!("lambda^{}", k));
            }
            out.push_str(&parts.join(" "));
        }
    }
    out
}

struct ScalarParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

    fn parse_expr(&mut self) -> Result<Scalar> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Scalar> {
        let mut neg = false;
        while let Some(c) = self.peek() {
            if c == b'-' {
                neg = !neg;
                self.pos += 1;
            } else if c == b'+' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.parse_factor()?;
                    acc = acc.div(&d).map_err(|e| Error::Parse {
                        offset: self.pos,
                        message: e.to_string(),
                    })?;
                }
                Some(c) if c == b'(' || (c as char).is_ascii_alphanumeric() => {
                    acc = acc.mul(&self.parse_factor()?);
                }
                _ => break,
            }
        }
        Ok(if neg { acc.neg() } else { acc })
    }

    fn parse_factor(&mut self) -> Result<Scalar> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_signed_int()?;
            return base
                .pow(e)
                .map_err(|e| Error::Parse { offset: self.pos, message: e.to_string() });
        }
        Ok(base)
    }

    fn parse_signed_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let mut neg = false;
        if self.s.get(self.pos) == Some(&b'-') {
            neg = true;
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let n: i64 = txt
            .parse()
            .map_err(|_| Error::Parse { offset: start, message: "integer out of range".into() })?;
        Ok(if neg { -n } else { n })
    }

    fn parse_atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.parse_expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_signed_int()?;
                Ok(Scalar::from_int(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match word {
                    "v" => Ok(Scalar::v_pow(1)),
                    "q" => Ok(Scalar::q_pow(1)),
                    "lambda" => Ok(Scalar::lambda_pow(1)),
                    _ => Err(Error::Parse {
                        offset: start,
                        message: format!("unknown symbol '{}'", word),
                    }),
                }
            }
            _ => self.err("expected scalar atom"),
        }
    }
}
