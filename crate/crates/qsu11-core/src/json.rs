//! Canonical JSON forms for elements, tensors, and suite reports.
//!
//! Scalars are embedded as strings in the canonical textual form of
//! [`Scalar::to_string_v`]: a sum of signed terms, each an integer
//! coefficient times optional `v^p` and `lambda^p` powers, over an optional
//! parenthesized denominator polynomial, reduced and with a positive leading
//! denominator coefficient. The form is stable and re-parseable, so exact
//! values survive a JSON round trip.
//!
//! Elements serialize as `{space, layer, terms}` with one entry per ordered
//! monomial, sorted by exponent key; each entry lists the Laurent part and
//! the point-mass corrections of its radial coefficient. Tensors extend the
//! format with a two-sided term list of `[first, second]` element pairs.
//! All maps iterate in sorted order, so serialization is deterministic.

use serde_json::{json, Value};

use crate::pbw::Element;
use crate::scalar::Scalar;
use crate::suite::SuiteReport;
use crate::tensor::TensorElement;

/// JSON form of a one-sided element.
pub fn element_to_json(f: &Element<Scalar>) -> Value {
    let mut terms = Vec::new();
    for (key, cf) in &f.terms {
        let laurent: Vec<Value> = cf
            .laurent
            .iter()
            .map(|(p, s)| json!([p, s.to_string_v()]))
            .collect();
        let corrections: Vec<Value> = cf
            .corrections
            .iter()
            .map(|(m, s)| json!([m, s.to_string_v()]))
            .collect();
        terms.push(json!({
            "i1": key.i1,
            "k": key.k,
            "j1": key.j1,
            "laurent": laurent,
            "corrections": corrections,
        }));
    }
    json!({
        "space": f.space.base.name(),
        "layer": f.space.layer.name(),
        "terms": terms,
    })
}

/// JSON form of a two-factor element as a two-sided term list.
pub fn tensor_to_json(k: &TensorElement) -> Value {
    let (b1, b2) = k.bases();
    let pairs: Vec<Value> = k
        .decompose()
        .iter()
        .map(|(a, b)| json!([element_to_json(a), element_to_json(b)]))
        .collect();
    json!({
        "space1": b1.name(),
        "space2": b2.name(),
        "terms": pairs,
    })
}

/// JSON form of a suite report; field order inside objects is alphabetical
/// and the check order is the suite's own, so output is byte-deterministic.
pub fn report_to_json(r: &SuiteReport) -> Value {
    json!({
        "suite": r.suite,
        "config": r
            .config
            .iter()
            .map(|(k, v)| json!([k, v]))
            .collect::<Vec<_>>(),
        "checks": r
            .checks
            .iter()
            .map(|c| json!({"id": c.id, "pass": c.pass, "witness": c.witness}))
            .collect::<Vec<_>>(),
        "passed": r.passed(),
        "failed": r.failed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::Gen;
    use crate::space::SpaceBase;

    #[test]
    fn element_json_is_deterministic() {
        let base = SpaceBase::TildeX;
        let f = Element::generator(base, Gen::T11)
            .mul(&Element::e0(base).unwrap())
            .unwrap()
            .add(&Element::x_pow(base, 2).scale(&Scalar::q_pow(-1)))
            .unwrap();
        let a = serde_json::to_string(&element_to_json(&f)).unwrap();
        let b = serde_json::to_string(&element_to_json(&f)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"space\":\"x\""));
    }

    #[test]
    fn tensor_json_lists_both_sides() {
        let k = crate::kernel::kernel_k(1, 1, SpaceBase::TildeX, SpaceBase::TildeX).unwrap();
        let v = tensor_to_json(&k);
        assert_eq!(v["space1"], "x");
        assert!(v["terms"].as_array().unwrap().len() >= 2);
    }
}
