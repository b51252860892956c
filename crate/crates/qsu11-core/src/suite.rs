//! Named verification suites: batch identity checks over the algebra, the
//! module structure, the integrals, and the kernel calculus, with a
//! deterministic report format shared by the command-line harness and the
//! integration tests.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{act, act_word, casimir, UqConfig, UqGen};
use crate::coeff::CoeffFn;
use crate::disc::{disc_delta, embed_f0, embed_z, embed_z_star, weight_space_check};
use crate::error::{Error, Result};
use crate::integral::{integrate, is_invariant_at, trace_property_check, IntegralTag};
use crate::kernel::{
    continue_kernel, kernel_k, lemma65_check, prop69_check, verify_k_relations,
};
use crate::linalg::nullspace;
use crate::pbw::{Element, Gen, PBWKey};
use crate::qseries::{
    qbinomial_series, qnum, qpochhammer_poly, verify_inverse_series,
    verify_pochhammer_expansion,
};
use crate::sample::{random_finite, random_finite_within, random_polynomial, random_word};
use crate::scalar::Scalar;
use crate::space::{Space, SpaceBase};
use crate::tensor::{act_tensor, apply_integral_operator, pairing, TensorElement};
use crate::word::{defining_relations, normal_form, Word};

/// One verification check with its outcome.
#[derive(Clone, Debug)]
pub struct CheckResult {
    /// Stable description of what was checked.
    pub id: String,
    pub pass: bool,
    /// Short expression describing the first failure, when available.
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn new(id: impl Into<String>, pass: bool, witness: Option<String>) -> CheckResult {
        CheckResult {
            id: id.into(),
            pass,
            witness: if pass { None } else { witness },
        }
    }

    pub fn plain(id: impl Into<String>, pass: bool) -> CheckResult {
        CheckResult::new(id, pass, None)
    }
}

/// Knobs shared by all suites. Unset options fall back to per-suite
/// defaults (both spaces, the plane pair, the documented sample counts).
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub uq: UqConfig,
    pub space: Option<SpaceBase>,
    pub pair: Option<(SpaceBase, SpaceBase)>,
    pub trunc: Option<u32>,
    pub max_l: u32,
    pub seed: u64,
    pub samples: Option<u32>,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            uq: UqConfig::default(),
            space: None,
            pair: None,
            trunc: None,
            max_l: 3,
            seed: 7,
            samples: None,
        }
    }
}

/// A finished suite run: the checks plus an echo of the configuration that
/// produced them. Reports are deterministic given the configuration.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub config: Vec<(String, String)>,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Every runnable suite name.
pub const SUITE_NAMES: [&str; 16] = [
    "relations",
    "e0",
    "embed",
    "nu-x",
    "nu-xi",
    "eta",
    "trace-l",
    "casimir",
    "module-algebra",
    "k-invariance",
    "k-relations",
    "lemma65",
    "prop67",
    "prop69",
    "sharp",
    "qseries",
];

fn half_string(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{}/2", doubled)
    }
}

fn pair_name(pair: (SpaceBase, SpaceBase)) -> String {
    format!("({}, {})", pair.0.name(), pair.1.name())
}

fn spaces_for(cfg: &SuiteConfig) -> Vec<SpaceBase> {
    match cfg.space {
        Some(s) => vec![s],
        None => vec![SpaceBase::TildeX, SpaceBase::TildeXi],
    }
}

fn pair_for(cfg: &SuiteConfig) -> (SpaceBase, SpaceBase) {
    cfg.pair.unwrap_or((SpaceBase::TildeX, SpaceBase::TildeX))
}

fn config_echo(cfg: &SuiteConfig) -> Vec<(String, String)> {
    let (cp, cm) = cfg.uq.c_values();
    vec![
        ("seed".into(), cfg.seed.to_string()),
        ("max-l".into(), cfg.max_l.to_string()),
        (
            "trunc".into(),
            cfg.trunc.map(|t| t.to_string()).unwrap_or_else(|| "default".into()),
        ),
        (
            "space".into(),
            cfg.space.map(|s| s.name().to_string()).unwrap_or_else(|| "both".into()),
        ),
        (
            "pair".into(),
            cfg.pair.map(pair_name).unwrap_or_else(|| "default".into()),
        ),
        ("a-plus".into(), half_string(cfg.uq.a_plus)),
        ("a-minus".into(), half_string(cfg.uq.a_minus)),
        ("c-plus".into(), cp.to_string_v()),
        ("c-minus".into(), cm.to_string_v()),
    ]
}

/// Runs a named suite under the given configuration.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let checks = match name {
        "relations" => relations_suite(cfg)?,
        "e0" => e0_suite(cfg)?,
        "embed" => embed_suite(cfg)?,
        "nu-x" => nu_suite(cfg, SpaceBase::TildeX)?,
        "nu-xi" => nu_suite(cfg, SpaceBase::TildeXi)?,
        "eta" => eta_suite(cfg)?,
        "trace-l" => trace_suite(cfg)?,
        "casimir" => casimir_suite(cfg)?,
        "module-algebra" => module_algebra_suite(cfg)?,
        "k-invariance" => k_invariance_suite(cfg)?,
        "k-relations" => k_relations_suite(cfg)?,
        "lemma65" => lemma65_suite(cfg)?,
        "prop67" => prop67_suite(cfg)?,
        "prop69" => prop69_suite(cfg)?,
        "sharp" => sharp_suite(cfg)?,
        "qseries" => qseries_suite()?,
        _ => {
            return Err(Error::Unsupported(format!(
                "unknown suite \"{}\"; available: {}",
                name,
                SUITE_NAMES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        config: config_echo(cfg),
        checks,
    })
}

fn tensor_witness(f: &TensorElement) -> String {
    f.decompose()
        .iter()
        .map(|(a, b)| format!("({}) | ({})", a.pretty(), b.pretty()))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn word_name(w: &[crate::word::Letter]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|l| l.name()).collect::<Vec<_>>().join(" ")
    }
}

fn relations_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let words = cfg.samples.unwrap_or(500) as usize;
    for base in spaces_for(cfg) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut pass = true;
        let mut witness = None;
        for _ in 0..words {
            let w: Word = random_word(&mut rng, 8);
            let cut = rng.gen_range(0..=w.len());
            let whole = normal_form(base, &w)?;
            let split = normal_form(base, &w[..cut])?.mul(&normal_form(base, &w[cut..])?)?;
            if whole != split {
                pass = false;
                witness = Some(word_name(&w));
                break;
            }
        }
        out.push(CheckResult::new(
            format!(
                "normal form distributes over concatenation on {} ({} words)",
                base.name(),
                words
            ),
            pass,
            witness,
        ));

        let triples = (words / 5).max(20);
        let mut pass = true;
        let mut witness = None;
        for _ in 0..triples {
            let a = normal_form(base, &random_word(&mut rng, 4))?;
            let b = normal_form(base, &random_word(&mut rng, 4))?;
            let c = normal_form(base, &random_word(&mut rng, 4))?;
            if a.mul(&b)?.mul(&c)? != a.mul(&b.mul(&c)?)? {
                pass = false;
                witness = Some(a.pretty());
                break;
            }
        }
        out.push(CheckResult::new(
            format!(
                "multiplication is associative on {} ({} triples)",
                base.name(),
                triples
            ),
            pass,
            witness,
        ));

        let pairs = 200;
        let mut anti = true;
        let mut invol = true;
        let mut witness_anti = None;
        let mut witness_invol = None;
        for i in 0..pairs {
            let f = if i % 2 == 0 {
                random_finite(&mut rng, base, 2)
            } else {
                random_polynomial(&mut rng, base, 2)
            };
            let g = random_polynomial(&mut rng, base, 2);
            if anti && f.mul(&g)?.star() != g.star().mul(&f.star())? {
                anti = false;
                witness_anti = Some(f.pretty());
            }
            if invol && (f.star().star() != f || g.star().star() != g) {
                invol = false;
                witness_invol = Some(f.pretty());
            }
        }
        out.push(CheckResult::new(
            format!(
                "star reverses products on {} ({} pairs)",
                base.name(),
                pairs
            ),
            anti,
            witness_anti,
        ));
        out.push(CheckResult::new(
            format!(
                "star is an involution on {} ({} samples)",
                base.name(),
                2 * pairs
            ),
            invol,
            witness_invol,
        ));
    }
    Ok(out)
}

/// Brute-force search for weight-zero finite elements commuting with the
/// off-diagonal letters and annihilated by `t11` on the right and `t11*` on
/// the left, inside a truncated window. Returns the solution-space dimension
/// and whether the solution line is exactly the base point mass.
pub fn solve_e0_bruteforce(trunc: u32) -> Result<(usize, bool)> {
    let base = SpaceBase::TildeX;
    let t11 = Element::generator(base, Gen::T11);
    let t12 = Element::generator(base, Gen::T12);
    let t12s = Element::generator(base, Gen::T12S);
    let t11s = Element::generator(base, Gen::T11S);

    let mut keys = vec![PBWKey::new(0, 0, 0)];
    for i in 1..=(trunc / 2) {
        keys.push(PBWKey::new(i, -(i as i64), 0));
        keys.push(PBWKey::new(0, i as i64, i));
    }
    let mut basis: Vec<(PBWKey, i64)> = Vec::new();
    for key in &keys {
        for m in 0..=trunc as i64 {
            basis.push((*key, m));
        }
    }
    let n = basis.len();

    let mut coord: HashMap<(usize, PBWKey, i64), usize> = HashMap::new();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (u, (key, m)) in basis.iter().enumerate() {
        let b = Element::from_term(
            Space::finite(base),
            *key,
            CoeffFn::delta(*m, Scalar::one()),
        );
        let images = [
            t12.mul(&b)?.sub(&b.mul(&t12)?)?,
            t12s.mul(&b)?.sub(&b.mul(&t12s)?)?,
            t11s.mul(&b)?,
            b.mul(&t11)?,
        ];
        for (mi, img) in images.iter().enumerate() {
            for (k2, cf) in &img.terms {
                for (idx, s) in &cf.corrections {
                    if s.is_zero() {
                        continue;
                    }
                    let r = *coord.entry((mi, *k2, *idx)).or_insert_with(|| {
                        rows.push(vec![Scalar::zero(); n]);
                        rows.len() - 1
                    });
                    rows[r][u] = s.clone();
                }
            }
        }
    }

    let ns = nullspace(&rows, n);
    let dim = ns.len();
    let head = PBWKey::new(0, 0, 0);
    let matches = dim == 1
        && basis.iter().zip(&ns[0]).all(|((key, m), c)| {
            if *key == head && *m == 0 {
                !c.is_zero()
            } else {
                c.is_zero()
            }
        });
    Ok((dim, matches))
}

fn e0_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let base = SpaceBase::TildeX;
    let e0 = Element::e0(base)?;
    let t11 = Element::generator(base, Gen::T11);
    let t11s = Element::generator(base, Gen::T11S);
    let t12 = Element::generator(base, Gen::T12);
    let t12s = Element::generator(base, Gen::T12S);
    let mut out = vec![
        CheckResult::plain("e0 is idempotent", e0.mul(&e0)? == e0),
        CheckResult::plain("e0 kills t11 on the right", e0.mul(&t11)?.is_zero()),
        CheckResult::plain("t11* kills e0 on the left", t11s.mul(&e0)?.is_zero()),
        CheckResult::plain(
            "e0 commutes with t12",
            e0.mul(&t12)? == t12.mul(&e0)?,
        ),
        CheckResult::plain(
            "e0 commutes with t12*",
            e0.mul(&t12s)? == t12s.mul(&e0)?,
        ),
        CheckResult::plain("e0 is self-adjoint", e0.star() == e0),
    ];
    let windows = match cfg.trunc {
        Some(t) => vec![t],
        None => vec![4, 6, 8],
    };
    for t in windows {
        let (dim, matches) = solve_e0_bruteforce(t)?;
        out.push(CheckResult::new(
            format!(
                "the weight-zero window of size {} has a one-dimensional solution space at e0",
                t
            ),
            dim == 1 && matches,
            Some(format!("dimension {}", dim)),
        ));
    }
    Ok(out)
}

fn embed_suite(_cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let base = SpaceBase::TildeX;
    let z = embed_z();
    let zs = embed_z_star();
    let f0 = embed_f0();
    let one = Element::one(Space::localized(base));
    let lhs = zs.mul(&z)?.sub(&z.mul(&zs)?.scale(&Scalar::q_pow(2)))?;
    let rhs = one.scale(&Scalar::one().sub(&Scalar::q_pow(2)));
    let mut out = vec![
        CheckResult::plain("disc exchange relation z* z - q^2 z z* = (1 - q^2) 1", lhs == rhs),
        CheckResult::plain("the base point mass kills z on the right", f0.mul(&z)?.is_zero()),
        CheckResult::plain("z* kills the base point mass on the left", zs.mul(&f0)?.is_zero()),
        CheckResult::plain(
            "conjugated point masses land on the grid",
            disc_delta(2)? == Element::delta(base, 2)?,
        ),
    ];
    for (m, t) in [(-2i64, 3i64), (-1, 4), (0, 4), (1, 4), (2, 3)] {
        out.push(CheckResult::plain(
            format!("weight-{} functions factor through the disc (window {})", m, t),
            weight_space_check(m, t)?,
        ));
    }
    Ok(out)
}

fn nu_suite(cfg: &SuiteConfig, base: SpaceBase) -> Result<Vec<CheckResult>> {
    let tag = match base {
        SpaceBase::TildeX => IntegralTag::NuTildeX,
        SpaceBase::TildeXi => IntegralTag::NuTildeXi,
    };
    let n = cfg.samples.unwrap_or(100) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<Element> = (0..n).map(|_| random_finite(&mut rng, base, 3)).collect();
    let mut out = Vec::new();
    for g in UqGen::ALL {
        let mut pass = true;
        let mut witness = None;
        for f in &samples {
            let img = act(&cfg.uq, g, f)?;
            if !integrate(tag, &img)?.is_zero() {
                pass = false;
                witness = Some(f.pretty());
                break;
            }
        }
        out.push(CheckResult::new(
            format!(
                "the integral on {} kills {} images ({} samples)",
                base.name(),
                g.name(),
                n
            ),
            pass,
            witness,
        ));
    }
    Ok(out)
}

fn eta_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let base = SpaceBase::TildeXi;
    let xinv = Element::x_pow(base, -1);
    let mut out = Vec::new();
    out.push(CheckResult::plain(
        "eta of the radial degree -1 function is one",
        integrate(IntegralTag::Eta, &xinv)? == Scalar::one(),
    ));
    out.push(CheckResult::plain(
        "the Cartan generator annihilates the radial degree -1 function",
        act(&cfg.uq, UqGen::H, &xinv)?.is_zero(),
    ));
    // The raising image of t12 x^-2 t22 is the second explicit witness.
    let w2 = Element::generator(base, Gen::T12)
        .mul(&Element::x_pow(base, -2))?
        .mul(&Element::generator(base, Gen::T11S).neg())?;
    let img = act(&cfg.uq, UqGen::XPlus, &w2)?;
    out.push(CheckResult::plain(
        "eta kills the raising image of t12 x^-2 t22",
        integrate(IntegralTag::Eta, &img)?.is_zero(),
    ));
    let samples = vec![
        ("x^-1", xinv.clone()),
        (
            "t12 x^-2 t11*",
            Element::generator(base, Gen::T12)
                .mul(&Element::x_pow(base, -2))?
                .mul(&Element::generator(base, Gen::T11S))?,
        ),
        (
            "t11 x^-2 t12*",
            Element::generator(base, Gen::T11)
                .mul(&Element::x_pow(base, -2))?
                .mul(&Element::generator(base, Gen::T12S))?,
        ),
    ];
    for (name, f) in &samples {
        let homog = f.homogeneity_2l() == Some(-2);
        out.push(CheckResult::plain(
            format!("eta is invariant on {}", name),
            homog && is_invariant_at(&cfg.uq, IntegralTag::Eta, f)?,
        ));
    }
    out.push(CheckResult::plain(
        "eta rejects inputs of the wrong homogeneity",
        integrate(IntegralTag::Eta, &Element::x_pow(base, 1)).is_err(),
    ));
    Ok(out)
}

fn trace_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let base = SpaceBase::TildeX;
    let n = cfg.samples.unwrap_or(100) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pass = true;
    let mut witness = None;
    for _ in 0..n {
        let f1 = random_finite(&mut rng, base, 2);
        let f2 = random_finite(&mut rng, base, 2);
        if !trace_property_check(&f1, &f2)? {
            pass = false;
            witness = Some(f1.pretty());
            break;
        }
    }
    Ok(vec![CheckResult::new(
        format!("the trace functional is symmetric ({} pairs)", n),
        pass,
        witness,
    )])
}

fn casimir_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let lmax = cfg.max_l as i64;
    for base in spaces_for(cfg) {
        for l in -lmax..=lmax {
            let xl = Element::x_pow(base, l);
            let eig = qnum(l + 1).mul(&qnum(l));
            out.push(CheckResult::plain(
                format!(
                    "the radial Casimir has eigenvalue [{}][{}] on x^{} over {}",
                    l + 1,
                    l,
                    l,
                    base.name()
                ),
                casimir(&xl)? == xl.scale(&eig),
            ));
        }
    }
    Ok(out)
}

fn module_algebra_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for base in spaces_for(cfg) {
        for (label, comb) in defining_relations(base) {
            for g in UqGen::ALL {
                let mut acc = Element::zero(Space::polynomial(base));
                for (c, w) in &comb {
                    acc = acc.add(&act_word(&cfg.uq, g, base, w)?.scale(c))?;
                }
                out.push(CheckResult::new(
                    format!(
                        "{} respects \"{}\" on {}",
                        g.name(),
                        label,
                        base.name()
                    ),
                    acc.is_zero(),
                    Some(acc.pretty()),
                ));
            }
        }
    }
    Ok(out)
}

fn k_invariance_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let (b1, b2) = pair_for(cfg);
    let mut out = Vec::new();
    for (i, j) in [(1u8, 1u8), (1, 2), (2, 1), (2, 2)] {
        let k = kernel_k(i, j, b1, b2)?;
        for g in UqGen::ALL {
            let img = act_tensor(&cfg.uq, g, &k)?;
            out.push(CheckResult::plain(
                format!(
                    "{} kills k{}{} on {}",
                    g.name(),
                    i,
                    j,
                    pair_name((b1, b2))
                ),
                img.is_zero(),
            ));
        }
    }
    // The operator side of invariance: the integral operator attached to an
    // invariant kernel commutes with the action.
    let n = cfg.samples.unwrap_or(20) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k11 = kernel_k(1, 1, b1, b2)?;
    let samples: Vec<Element> = (0..n).map(|_| random_finite(&mut rng, b2, 2)).collect();
    for g in UqGen::ALL {
        let mut pass = true;
        let mut witness = None;
        for f in &samples {
            let lhs = apply_integral_operator(&k11, &act(&cfg.uq, g, f)?)?;
            let rhs = act(&cfg.uq, g, &apply_integral_operator(&k11, f)?)?;
            if lhs != rhs {
                pass = false;
                witness = Some(f.pretty());
                break;
            }
        }
        out.push(CheckResult::new(
            format!(
                "the k11 integral operator commutes with {} ({} samples)",
                g.name(),
                n
            ),
            pass,
            witness,
        ));
    }
    Ok(out)
}

fn k_relations_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let pairs = match cfg.pair {
        Some(p) => vec![p],
        None => vec![
            (SpaceBase::TildeX, SpaceBase::TildeX),
            (SpaceBase::TildeX, SpaceBase::TildeXi),
            (SpaceBase::TildeXi, SpaceBase::TildeX),
        ],
    };
    let mut out = Vec::new();
    for pair in pairs {
        for (name, ok) in verify_k_relations(pair.0, pair.1)? {
            out.push(CheckResult::plain(
                format!("{} on {}", name, pair_name(pair)),
                ok,
            ));
        }
    }
    Ok(out)
}

fn lemma65_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let (b1, b2) = pair_for(cfg);
    let mut out = Vec::new();
    for l in 0..=cfg.max_l {
        out.push(CheckResult::plain(
            format!(
                "k22^{l} k11^{l} equals its terminating double series on {}",
                pair_name((b1, b2))
            ),
            lemma65_check(l, b1, b2)?,
        ));
    }
    Ok(out)
}

fn prop67_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let (b1, b2) = pair_for(cfg);
    // The window must reach every interpolated power and sit strictly above
    // every sampled grid index even after the key letters shift it, so the
    // test tensors are drawn from indices of magnitude at most 2 with keys
    // shifting by at most 2 more.
    let cap = cfg.max_l.max(3) + 2;
    let lk = continue_kernel(cap, b1, b2)?;
    let mut out = Vec::new();

    let mut direct = Vec::new();
    for l in 0..=cfg.max_l {
        let d = kernel_k(2, 2, b1, b2)?
            .pow(l)?
            .tensor_mul(&kernel_k(1, 1, b1, b2)?.pow(l)?)?;
        out.push(CheckResult::plain(
            format!("the continued kernel evaluates to k22^{l} k11^{l} at lambda = q^{}", 2 * l),
            lk.evaluate(l)? == d,
        ));
        direct.push(d);
    }

    let n = cfg.samples.unwrap_or(20) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<TensorElement> = (0..n)
        .map(|_| {
            TensorElement::simple(
                &random_finite_within(&mut rng, b1, 2, 2),
                &random_finite_within(&mut rng, b2, 2, 2),
            )
        })
        .collect();
    let mut paired = Vec::with_capacity(n);
    let mut window_ok = true;
    let mut window_witness = None;
    for f in &samples {
        match lk.pair(f) {
            Ok(p) => paired.push(Some(p)),
            Err(_) => {
                window_ok = false;
                window_witness = Some(tensor_witness(f));
                paired.push(None);
            }
        }
    }
    out.push(CheckResult::new(
        format!(
            "the boundary band vanishes against all test tensors (window {}, {} samples)",
            cap, n
        ),
        window_ok,
        window_witness,
    ));
    out.push(CheckResult::plain(
        format!("pairings are Laurent polynomials in lambda ({} samples)", n),
        paired.iter().flatten().all(|p| {
            p.subst_lambda(&Scalar::v_pow(3)).is_ok()
                && p.subst_lambda(&Scalar::one()).is_ok()
        }),
    ));
    for l in 0..=cfg.max_l {
        let mut pass = true;
        let mut witness = None;
        for (f, p) in samples.iter().zip(&paired) {
            let Some(p) = p else { continue };
            let got = p.subst_lambda(&Scalar::q_pow(2 * l as i64))?;
            let expect = pairing(&direct[l as usize], f)?;
            if got != expect {
                pass = false;
                witness = Some(tensor_witness(f));
                break;
            }
        }
        out.push(CheckResult::new(
            format!(
                "the symbolic pairing interpolates the direct pairing at l = {} ({} samples)",
                l, n
            ),
            pass,
            witness,
        ));
    }
    Ok(out)
}

fn prop69_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let (b1, b2) = pair_for(cfg);
    let n_max = 8;
    let mut out = Vec::new();
    for l in 1..=2 {
        out.push(CheckResult::plain(
            format!(
                "the truncated inverse inverts k11^{l} through degree {} on {}",
                n_max,
                pair_name((b1, b2))
            ),
            prop69_check(l, n_max, b1, b2)?,
        ));
        out.push(CheckResult::plain(
            format!("the scalar inverse series closes at l = {l} through degree {n_max}"),
            verify_inverse_series(l, n_max),
        ));
    }
    Ok(out)
}

fn sharp_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let (b1, b2) = pair_for(cfg);
    let one1 = Element::one(Space::polynomial(b1));
    let one2 = Element::one(Space::polynomial(b2));
    let g1 = |g: Gen| Element::generator(b1, g);
    let g2 = |g: Gen| Element::generator(b2, g);
    let mut out = vec![
        CheckResult::plain(
            "sharp of t11 (first factor) is t11*",
            TensorElement::simple(&g1(Gen::T11), &one2).sharp()
                == TensorElement::simple(&g1(Gen::T11S), &one2),
        ),
        CheckResult::plain(
            "sharp of t12* (first factor) is t12",
            TensorElement::simple(&g1(Gen::T12S), &one2).sharp()
                == TensorElement::simple(&g1(Gen::T12), &one2),
        ),
        CheckResult::plain(
            "sharp of tau11 is q^-2 tau11*",
            TensorElement::simple(&one1, &g2(Gen::T11)).sharp()
                == TensorElement::simple(&one1, &g2(Gen::T11S)).scale(&Scalar::q_pow(-2)),
        ),
        CheckResult::plain(
            "sharp of tau12* is tau12",
            TensorElement::simple(&one1, &g2(Gen::T12S)).sharp()
                == TensorElement::simple(&one1, &g2(Gen::T12)),
        ),
    ];
    let k11 = kernel_k(1, 1, b1, b2)?;
    let k12 = kernel_k(1, 2, b1, b2)?;
    let k21 = kernel_k(2, 1, b1, b2)?;
    let k22 = kernel_k(2, 2, b1, b2)?;
    out.push(CheckResult::plain(
        "sharp of k11 is q^2 k22",
        k11.sharp() == k22.scale(&Scalar::q_pow(2)),
    ));
    out.push(CheckResult::plain(
        "sharp of k12 is q^-1 k21",
        k12.sharp() == k21.scale(&Scalar::q_pow(-1)),
    ));
    out.push(CheckResult::plain(
        "sharp of k21 is q k12",
        k21.sharp() == k12.scale(&Scalar::q_pow(1)),
    ));
    out.push(CheckResult::plain(
        "sharp of k22 is q^-2 k11",
        k22.sharp() == k11.scale(&Scalar::q_pow(-2)),
    ));
    out.push(CheckResult::plain(
        "sharp is an involution on the kernel entries",
        [&k11, &k12, &k21, &k22].iter().all(|k| k.sharp().sharp() == **k),
    ));
    // The defining identity against the inner integral, on plane-valued
    // second factors where the point masses live.
    if b2 == SpaceBase::TildeX {
        let f1 = Element::e0(b2)?;
        let f2 = Element::generator(b2, Gen::T12).mul(&f1)?;
        let mut pass = true;
        for k in [&k12, &k22.tensor_mul(&k11)?] {
            for f in [&f1, &f2] {
                let lhs = apply_integral_operator(&k.sharp(), f)?;
                let rhs = apply_integral_operator(k, &f.star())?.star();
                if lhs != rhs {
                    pass = false;
                }
            }
        }
        out.push(CheckResult::plain(
            "sharp matches the adjoint under the inner integral",
            pass,
        ));
    }
    Ok(out)
}

fn qseries_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    out.push(CheckResult::plain(
        "terminating Pochhammer expansion holds for n <= 10",
        (0..=10).all(verify_pochhammer_expansion),
    ));
    out.push(CheckResult::plain(
        "aligned inverse series closes for l <= 4 through degree 8",
        (0..=4).all(|l| verify_inverse_series(l, 8)),
    ));
    out.push(CheckResult::plain(
        "the empty Pochhammer product is one",
        qpochhammer_poly(&Scalar::q_pow(2), 0) == vec![Scalar::one()],
    ));
    out.push(CheckResult::plain(
        "the q-binomial series terminates at the symbol length",
        (1u32..=3).all(|l| {
            let c = qbinomial_series(&Scalar::q_pow(-2 * l as i64), l + 2);
            c[(l + 1) as usize].is_zero() && c[(l + 2) as usize].is_zero()
        }),
    ));
    out.push(CheckResult::plain(
        "q-integers are symmetric and satisfy the recurrence",
        qnum(0).is_zero()
            && (1..=5).all(|n| qnum(-n) == qnum(n).neg())
            && (1..=5).all(|n| qnum(2).mul(&qnum(n)) == qnum(n + 1).add(&qnum(n - 1))),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_with_defaults() {
        let cfg = SuiteConfig::default();
        for name in SUITE_NAMES {
            // The heavyweight randomized suites are trimmed for unit runs.
            let cfg = match name {
                "relations" => SuiteConfig {
                    samples: Some(60),
                    ..cfg.clone()
                },
                "nu-x" | "nu-xi" | "trace-l" => SuiteConfig {
                    samples: Some(25),
                    ..cfg.clone()
                },
                "prop67" | "k-invariance" => SuiteConfig {
                    samples: Some(6),
                    max_l: 2,
                    ..cfg.clone()
                },
                "lemma65" => SuiteConfig {
                    max_l: 2,
                    ..cfg.clone()
                },
                _ => cfg.clone(),
            };
            let report = run_suite(name, &cfg).unwrap();
            assert!(!report.checks.is_empty(), "{name} produced no checks");
            for c in &report.checks {
                assert!(c.pass, "{name}: {} failed ({:?})", c.id, c.witness);
            }
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &SuiteConfig::default()).is_err());
    }

    #[test]
    fn bruteforce_window_pins_the_point_mass() {
        let (dim, matches) = solve_e0_bruteforce(4).unwrap();
        assert_eq!(dim, 1);
        assert!(matches);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig {
            samples: Some(10),
            ..SuiteConfig::default()
        };
        let a = run_suite("nu-x", &cfg).unwrap();
        let b = run_suite("nu-x", &cfg).unwrap();
        assert_eq!(a.config, b.config);
        assert_eq!(
            a.checks.iter().map(|c| (&c.id, c.pass)).collect::<Vec<_>>(),
            b.checks.iter().map(|c| (&c.id, c.pass)).collect::<Vec<_>>()
        );
    }
}
