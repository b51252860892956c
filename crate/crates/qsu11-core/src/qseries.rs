//! Basic q-arithmetic: q-integers, q-Pochhammer symbols, and the finite
//! q-binomial series, all over exact scalars.

use crate::scalar::Scalar;

/// Symmetric q-integer `[n] = (q^n - q^-n)/(q - q^-1)`.
pub fn qnum(n: i64) -> Scalar {
    if n == 0 {
        return Scalar::zero();
    }
    if n < 0 {
        return qnum(-n).neg();
    }
    // [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}
    let mut acc = Scalar::zero();
    for i in 0..n {
        acc = acc.add(&Scalar::q_pow(n - 1 - 2 * i));
    }
    acc
}

/// Evaluated q-Pochhammer symbol `(t; base)_n = prod_{i<n} (1 - t base^i)`.
pub fn qpochhammer_eval(t: &Scalar, base: &Scalar, n: u32) -> Scalar {
    let mut acc = Scalar::one();
    let mut factor = t.clone();
    for _ in 0..n {
        acc = acc.mul(&Scalar::one().sub(&factor));
        factor = factor.mul(base);
    }
    acc
}

/// Coefficients in `t` of `(t; base)_n`, low degree first (degree `n`).
pub fn qpochhammer_poly(base: &Scalar, n: u32) -> Vec<Scalar> {
    let mut coeffs = vec![Scalar::one()];
    let mut pow = Scalar::one();
    for _ in 0..n {
        // Multiply by (1 - base^i t).
        let mut next = vec![Scalar::zero(); coeffs.len() + 1];
        for (d, c) in coeffs.iter().enumerate() {
            next[d] = next[d].add(c);
            next[d + 1] = next[d + 1].sub(&c.mul(&pow));
        }
        coeffs = next;
        pow = pow.mul(base);
    }
    coeffs
}

/// Coefficients `c_n = (a; q^2)_n / (q^2; q^2)_n` for `n = 0..=n_max` of the
/// q-binomial series `sum_n c_n u^n` with `(u; q^2)-type` base `q^2`.
pub fn qbinomial_series(a: &Scalar, n_max: u32) -> Vec<Scalar> {
    let base = Scalar::q_pow(2);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    let mut apow = a.clone();
    let mut bpow = base.clone();
    out.push(Scalar::one());
    for _ in 0..n_max {
        num = num.mul(&Scalar::one().sub(&apow));
        den = den.mul(&Scalar::one().sub(&bpow));
        apow = apow.mul(&base);
        bpow = bpow.mul(&base);
        out.push(num.div(&den).expect("(q^2; q^2)_n does not vanish"));
    }
    out
}

/// Verifies the terminating expansion of a q-Pochhammer product:
/// `(t; q)_n = sum_j [(q^-n; q)_j / (q; q)_j] q^{jn} t^j`, as an identity of
/// polynomials in `t`.
pub fn verify_pochhammer_expansion(n: u32) -> bool {
    let q = Scalar::q_pow(1);
    let lhs = qpochhammer_poly(&q, n);
    let mut rhs = vec![Scalar::zero(); n as usize + 1];
    let qinvn = Scalar::q_pow(-(n as i64));
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    let mut apow = qinvn;
    let mut qpow = q.clone();
    let mut scale = Scalar::one();
    let qn = Scalar::q_pow(n as i64);
    for (j, r) in rhs.iter_mut().enumerate() {
        if j > 0 {
            num = num.mul(&Scalar::one().sub(&apow));
            den = den.mul(&Scalar::one().sub(&qpow));
            apow = apow.mul(&q);
            qpow = qpow.mul(&q);
            scale = scale.mul(&qn);
        }
        *r = num.div(&den).unwrap().mul(&scale);
    }
    lhs == rhs
}

/// Verifies the inverse q-binomial series in a commuting letter `u` after
/// aligning the two factors: `(q^-2 u; q^-2)_l * sum_n b_n q^{-2ln} u^n = 1`
/// with `b_n = (q^{2l}; q^2)_n / (q^2; q^2)_n`, exactly through degree
/// `n_max >= l`.
pub fn verify_inverse_series(l: u32, n_max: u32) -> bool {
    let poch = qpochhammer_poly(&Scalar::q_pow(-2), l);
    let b = qbinomial_series(&Scalar::q_pow(2 * l as i64), n_max);
    let n = n_max as usize;
    for d in 0..=n {
        let mut acc = Scalar::zero();
        for (i, p) in poch.iter().enumerate().take(d.min(l as usize) + 1) {
            // Coefficient i of (q^-2 u; q^-2)_l carries the substitution
            // t = q^-2 u; the series coefficient carries the alignment twist.
            let s = b[d - i].mul(&Scalar::q_pow(-2 * l as i64 * (d - i) as i64));
            acc = acc.add(&p.mul(&Scalar::q_pow(-2 * i as i64)).mul(&s));
        }
        let expect = if d == 0 { Scalar::one() } else { Scalar::zero() };
        if acc != expect {
            return false;
        }
    }
    true
}
