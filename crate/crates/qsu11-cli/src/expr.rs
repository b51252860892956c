//! Expression parser and evaluator for the command line.
//!
//! Grammar (whitespace separates tokens and is otherwise ignored):
//!
//! ```text
//! expr     := ('-')? tterm (('+' | '-') tterm)*
//! tterm    := term (('|' | '⊗') term)?
//! term     := factor (('·')? factor | '/' factor)*
//! factor   := atom ('^' exponent)?
//! exponent := ('-')? digits | '(' ('-')? digits ('/' '2')? ')'
//! atom     := ident | ident '[' ('-')? digits ']' | digits | '(' expr ')'
//! ```
//!
//! Juxtaposed factors multiply; `·` is an optional explicit product sign.
//! Identifiers take an optional trailing `*` for the involution. First-factor
//! letters are `t11 t12 t21 t22` and their stars, `x`, `e0`, and point masses
//! `d[m]`; second-factor letters are the same spelled `tau11` etc.; `q`, `v`
//! and `lambda` are scalar letters, with `q^(p/2)` allowed for half powers.
//! A single `|` (or `⊗`) splits a two-factor product. Negative powers exist
//! for scalars and for the invertible letters `x`, `t12`, `t12*` (and their
//! tau twins); everything else rejects them during evaluation, not parsing.

use std::fmt;

use qsu11_core::pbw::{Element, Gen};
use qsu11_core::scalar::Scalar;
use qsu11_core::space::{Space, SpaceBase};
use qsu11_core::tensor::TensorElement;

/// Error with an optional byte offset into the input.
#[derive(Debug, Clone)]
pub struct CliError {
    pub offset: Option<usize>,
    pub message: String,
}

impl CliError {
    fn at(offset: usize, message: impl Into<String>) -> CliError {
        CliError { offset: Some(offset), message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.offset {
            Some(o) => write!(f, "error at byte {}: {}", o, self.message),
            None => write!(f, "error: {}", self.message),
        }
    }
}

impl From<qsu11_core::error::Error> for CliError {
    fn from(e: qsu11_core::error::Error) -> CliError {
        CliError { offset: None, message: e.to_string() }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Syntax tree node with the byte offset it started at.
#[derive(Debug, Clone)]
pub struct Spanned {
    pub off: usize,
    pub node: Node,
}

#[derive(Debug, Clone)]
pub enum Node {
    Int(i64),
    Letter(String),
    /// Point mass `d[m]` or `taud[m]`.
    Delta(String, i64),
    /// Base, exponent, and whether the exponent was a half power `(p/2)`.
    Pow(Box<Spanned>, i64, bool),
    Prod(Vec<Spanned>),
    Div(Box<Spanned>, Box<Spanned>),
    Neg(Box<Spanned>),
    Sum(Vec<Spanned>),
    Tensor(Box<Spanned>, Box<Spanned>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Caret,
    Slash,
    Dot,
    Bar,
    LPar,
    RPar,
    LBrack,
    RBrack,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
}

impl<'a> Lexer<'a> {
    fn lex(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut toks = Vec::new();
        let mut it = src.char_indices().peekable();
        while let Some(&(off, c)) = it.peek() {
            match c {
                c if c.is_whitespace() => {
                    it.next();
                }
                '+' => {
                    it.next();
                    toks.push((off, Tok::Plus));
                }
                '-' => {
                    it.next();
                    toks.push((off, Tok::Minus));
                }
                '^' => {
                    it.next();
                    toks.push((off, Tok::Caret));
                }
                '/' => {
                    it.next();
                    toks.push((off, Tok::Slash));
                }
                '(' => {
                    it.next();
                    toks.push((off, Tok::LPar));
                }
                ')' => {
                    it.next();
                    toks.push((off, Tok::RPar));
                }
                '[' => {
                    it.next();
                    toks.push((off, Tok::LBrack));
                }
                ']' => {
                    it.next();
                    toks.push((off, Tok::RBrack));
                }
                '|' | '\u{2297}' => {
                    it.next();
                    toks.push((off, Tok::Bar));
                }
                '\u{b7}' => {
                    it.next();
                    toks.push((off, Tok::Dot));
                }
                '0'..='9' => {
                    let mut end = off;
                    while let Some(&(o, d)) = it.peek() {
                        if d.is_ascii_digit() {
                            end = o + 1;
                            it.next();
                        } else {
                            break;
                        }
                    }
                    let n: i64 = src[off..end]
                        .parse()
                        .map_err(|_| CliError::at(off, "integer literal out of range"))?;
                    toks.push((off, Tok::Int(n)));
                }
                c if c.is_ascii_alphabetic() => {
                    let mut end = off;
                    while let Some(&(o, d)) = it.peek() {
                        if d.is_ascii_alphanumeric() {
                            end = o + 1;
                            it.next();
                        } else {
                            break;
                        }
                    }
                    let mut name = src[off..end].to_string();
                    if let Some(&(_, '*')) = it.peek() {
                        it.next();
                        name.push('*');
                    }
                    toks.push((off, Tok::Ident(name)));
                }
                _ => return Err(CliError::at(off, format!("unexpected character {:?}", c))),
            }
        }
        Ok(toks)
    }

    fn new(src: &'a str) -> Result<Lexer<'a>> {
        Ok(Lexer { src, toks: Self::lex(src)? })
    }
}

struct Parser<'a> {
    lx: Lexer<'a>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.pos).map(|(_, t)| t)
    }

    fn off(&self) -> usize {
        self.lx
            .toks
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.lx.src.len())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.lx.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(CliError::at(self.off(), format!("expected {}", what)))
        }
    }

    fn parse_expr(&mut self) -> Result<Spanned> {
        let off = self.off();
        let mut parts = Vec::new();
        let first = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let t = self.parse_tterm()?;
            Spanned { off, node: Node::Neg(Box::new(t)) }
        } else {
            self.parse_tterm()?
        };
        parts.push(first);
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    parts.push(self.parse_tterm()?);
                }
                Some(Tok::Minus) => {
                    let o = self.off();
                    self.bump();
                    let t = self.parse_tterm()?;
                    parts.push(Spanned { off: o, node: Node::Neg(Box::new(t)) });
                }
                _ => break,
            }
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(Spanned { off, node: Node::Sum(parts) })
        }
    }

    fn parse_tterm(&mut self) -> Result<Spanned> {
        let off = self.off();
        let left = self.parse_term()?;
        if self.peek() == Some(&Tok::Bar) {
            self.bump();
            let right = self.parse_term()?;
            Ok(Spanned { off, node: Node::Tensor(Box::new(left), Box::new(right)) })
        } else {
            Ok(left)
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LPar)
        )
    }

    fn parse_term(&mut self) -> Result<Spanned> {
        let off = self.off();
        let mut factors = vec![self.parse_factor()?];
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.bump();
                    factors.push(self.parse_factor()?);
                }
                Some(Tok::Slash) => {
                    let o = self.off();
                    self.bump();
                    let den = self.parse_factor()?;
                    let num = if factors.len() == 1 {
                        factors.pop().unwrap()
                    } else {
                        Spanned { off, node: Node::Prod(std::mem::take(&mut factors)) }
                    };
                    factors.push(Spanned {
                        off: o,
                        node: Node::Div(Box::new(num), Box::new(den)),
                    });
                }
                _ if self.starts_factor() => factors.push(self.parse_factor()?),
                _ => break,
            }
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(Spanned { off, node: Node::Prod(factors) })
        }
    }

    fn parse_factor(&mut self) -> Result<Spanned> {
        let atom = self.parse_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let (n, half) = self.parse_exponent()?;
            let off = atom.off;
            Ok(Spanned { off, node: Node::Pow(Box::new(atom), n, half) })
        } else {
            Ok(atom)
        }
    }

    fn parse_int(&mut self, what: &str) -> Result<i64> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(CliError::at(self.off(), format!("expected {}", what)))
            }
        }
    }

    fn parse_exponent(&mut self) -> Result<(i64, bool)> {
        if self.peek() == Some(&Tok::LPar) {
            self.bump();
            let n = self.parse_int("integer exponent")?;
            let half = if self.peek() == Some(&Tok::Slash) {
                self.bump();
                let o = self.off();
                match self.bump() {
                    Some(Tok::Int(2)) => true,
                    _ => return Err(CliError::at(o, "only halves are allowed: expected 2")),
                }
            } else {
                false
            };
            self.expect(Tok::RPar, "closing parenthesis in exponent")?;
            Ok((n, half))
        } else {
            Ok((self.parse_int("integer exponent")?, false))
        }
    }

    fn parse_atom(&mut self) -> Result<Spanned> {
        let off = self.off();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Spanned { off, node: Node::Int(n) }),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LBrack) {
                    self.bump();
                    let m = self.parse_int("grid index")?;
                    self.expect(Tok::RBrack, "closing bracket")?;
                    Ok(Spanned { off, node: Node::Delta(name, m) })
                } else {
                    Ok(Spanned { off, node: Node::Letter(name) })
                }
            }
            Some(Tok::LPar) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RPar, "closing parenthesis")?;
                Ok(inner)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(CliError::at(self.off(), "expected an identifier, number, or parenthesis"))
            }
        }
    }
}

/// Parses an input line into a syntax tree.
pub fn parse(src: &str) -> Result<Spanned> {
    let mut p = Parser { lx: Lexer::new(src)?, pos: 0 };
    let e = p.parse_expr()?;
    if p.pos != p.lx.toks.len() {
        return Err(CliError::at(p.off(), "trailing input"));
    }
    Ok(e)
}

/// Evaluation result: a scalar, a one-sided element, or a two-factor element.
#[derive(Debug, Clone)]
pub enum Value {
    S(Scalar),
    E(Element<Scalar>),
    T(TensorElement),
}

/// Spaces the two factors live on during evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvalCtx {
    pub base1: SpaceBase,
    pub base2: SpaceBase,
}

impl Value {
    fn into_element(self, base: SpaceBase, off: usize) -> Result<Element<Scalar>> {
        match self {
            Value::S(s) => Ok(Element::one(Space::polynomial(base)).scale(&s)),
            Value::E(e) => Ok(e),
            Value::T(_) => Err(CliError::at(off, "nested tensor product")),
        }
    }

    fn into_tensor(self, ctx: &EvalCtx, off: usize) -> Result<TensorElement> {
        match self {
            Value::T(t) => Ok(t),
            v => {
                let e = v.into_element(ctx.base1, off)?;
                Ok(TensorElement::simple(
                    &e,
                    &Element::one(Space::polynomial(ctx.base2)),
                ))
            }
        }
    }
}

/// Generator letter with its sign and star handled; `None` if not a letter.
fn base_letter(name: &str, base: SpaceBase) -> Option<Element<Scalar>> {
    let g = |g: Gen| Element::generator(base, g);
    match name {
        "t11" => Some(g(Gen::T11)),
        "t12" => Some(g(Gen::T12)),
        "t12*" => Some(g(Gen::T12S)),
        "t11*" => Some(g(Gen::T11S)),
        "t21" => Some(g(Gen::T12S).scale(&Scalar::q_pow(-1)).neg()),
        "t21*" => Some(g(Gen::T12).scale(&Scalar::q_pow(-1)).neg()),
        "t22" => Some(g(Gen::T11S).neg()),
        "t22*" => Some(g(Gen::T11).neg()),
        "x" => Some(Element::x_pow(base, 1)),
        _ => None,
    }
}

/// Negative power of an invertible letter: x^-n, t12^-n = t12*^n x^-n, and
/// t12*^-n = t12^n x^-n, all exact in the localized layer.
fn inverse_letter(name: &str, n: u32, base: SpaceBase) -> Option<Element<Scalar>> {
    let p = n as i64;
    match name {
        "x" => Some(Element::x_pow(base, -p)),
        "t12" => Some(
            Element::generator(base, Gen::T12S)
                .pow(n)
                .expect("letter powers exist")
                .mul(&Element::x_pow(base, -p))
                .expect("localized product exists"),
        ),
        "t12*" => Some(
            Element::generator(base, Gen::T12)
                .pow(n)
                .expect("letter powers exist")
                .mul(&Element::x_pow(base, -p))
                .expect("localized product exists"),
        ),
        _ => None,
    }
}

fn scalar_letter(name: &str) -> Option<Scalar> {
    match name {
        "q" => Some(Scalar::q_pow(1)),
        "v" => Some(Scalar::v_pow(1)),
        "lambda" => Some(Scalar::lambda_pow(1)),
        _ => None,
    }
}

fn mul_values(a: Value, b: Value, ctx: &EvalCtx, off: usize) -> Result<Value> {
    Ok(match (a, b) {
        (Value::S(x), Value::S(y)) => Value::S(x.mul(&y)),
        (Value::S(x), Value::E(e)) | (Value::E(e), Value::S(x)) => Value::E(e.scale(&x)),
        (Value::S(x), Value::T(t)) | (Value::T(t), Value::S(x)) => Value::T(t.scale(&x)),
        (Value::E(a), Value::E(b)) => {
            Value::E(a.mul(&b).map_err(|e| CliError::at(off, e.to_string()))?)
        }
        (a, b) => {
            let ta = a.into_tensor(ctx, off)?;
            let tb = b.into_tensor(ctx, off)?;
            Value::T(ta.tensor_mul(&tb).map_err(|e| CliError::at(off, e.to_string()))?)
        }
    })
}

fn add_values(a: Value, b: Value, ctx: &EvalCtx, off: usize) -> Result<Value> {
    Ok(match (a, b) {
        (Value::S(x), Value::S(y)) => Value::S(x.add(&y)),
        (Value::T(x), y) | (y, Value::T(x)) => {
            let t = y.into_tensor(ctx, off)?;
            Value::T(x.add(&t).map_err(|e| CliError::at(off, e.to_string()))?)
        }
        (a, b) => {
            let ea = a.into_element(ctx.base1, off)?;
            let eb = b.into_element(ctx.base1, off)?;
            Value::E(ea.add(&eb).map_err(|e| CliError::at(off, e.to_string()))?)
        }
    })
}

fn neg_value(v: Value) -> Value {
    match v {
        Value::S(s) => Value::S(s.neg()),
        Value::E(e) => Value::E(e.neg()),
        Value::T(t) => Value::T(t.neg()),
    }
}

/// Evaluates a letter in either factor; tau-prefixed names act on the second.
fn eval_letter(name: &str, ctx: &EvalCtx, off: usize) -> Result<Value> {
    if let Some(s) = scalar_letter(name) {
        return Ok(Value::S(s));
    }
    if let Some(e) = base_letter(name, ctx.base1) {
        return Ok(Value::E(e));
    }
    if name == "e0" {
        return Ok(Value::E(
            Element::e0(ctx.base1).map_err(|e| CliError::at(off, e.to_string()))?,
        ));
    }
    if let Some(rest) = name.strip_prefix("tau") {
        let second = if let Some(e) = base_letter(&format!("t{}", rest), ctx.base2) {
            e
        } else if rest == "e0" {
            Element::e0(ctx.base2).map_err(|e| CliError::at(off, e.to_string()))?
        } else {
            return Err(CliError::at(off, format!("unknown identifier `{}`", name)));
        };
        return Ok(Value::T(TensorElement::simple(
            &Element::one(Space::polynomial(ctx.base1)),
            &second,
        )));
    }
    Err(CliError::at(off, format!("unknown identifier `{}`", name)))
}

fn eval_delta(name: &str, m: i64, ctx: &EvalCtx, off: usize) -> Result<Value> {
    match name {
        "d" => Ok(Value::E(
            Element::delta(ctx.base1, m).map_err(|e| CliError::at(off, e.to_string()))?,
        )),
        "taud" => {
            let d = Element::delta(ctx.base2, m).map_err(|e| CliError::at(off, e.to_string()))?;
            Ok(Value::T(TensorElement::simple(
                &Element::one(Space::polynomial(ctx.base1)),
                &d,
            )))
        }
        _ => Err(CliError::at(off, format!("unknown point-mass family `{}`", name))),
    }
}

fn eval_pow(base: &Spanned, n: i64, half: bool, ctx: &EvalCtx) -> Result<Value> {
    if half {
        if let Node::Letter(name) = &base.node {
            if name == "q" {
                return Ok(Value::S(Scalar::q_pow_half(n)));
            }
        }
        return Err(CliError::at(base.off, "half powers are only defined for q"));
    }
    if n < 0 {
        if let Node::Letter(name) = &base.node {
            let m = u32::try_from(-n)
                .map_err(|_| CliError::at(base.off, "exponent out of range"))?;
            if let Some(e) = inverse_letter(name, m, ctx.base1) {
                return Ok(Value::E(e));
            }
            if let Some(rest) = name.strip_prefix("tau") {
                if let Some(e) = inverse_letter(&format!("t{}", rest), m, ctx.base2) {
                    return Ok(Value::T(TensorElement::simple(
                        &Element::one(Space::polynomial(ctx.base1)),
                        &e,
                    )));
                }
            }
        }
        return match eval(base, ctx)? {
            Value::S(s) => Ok(Value::S(
                s.pow(n).map_err(|e| CliError::at(base.off, e.to_string()))?,
            )),
            _ => Err(CliError::at(
                base.off,
                "negative powers exist only for scalars, x, t12, and t12*",
            )),
        };
    }
    let m = u32::try_from(n).map_err(|_| CliError::at(base.off, "exponent out of range"))?;
    Ok(match eval(base, ctx)? {
        Value::S(s) => Value::S(s.pow(n).map_err(|e| CliError::at(base.off, e.to_string()))?),
        Value::E(e) => Value::E(e.pow(m).map_err(|e| CliError::at(base.off, e.to_string()))?),
        Value::T(t) => Value::T(t.pow(m).map_err(|e| CliError::at(base.off, e.to_string()))?),
    })
}

/// Evaluates a syntax tree to a canonical value.
pub fn eval(e: &Spanned, ctx: &EvalCtx) -> Result<Value> {
    match &e.node {
        Node::Int(n) => Ok(Value::S(Scalar::from_int(*n))),
        Node::Letter(name) => eval_letter(name, ctx, e.off),
        Node::Delta(name, m) => eval_delta(name, *m, ctx, e.off),
        Node::Pow(b, n, half) => eval_pow(b, *n, *half, ctx),
        Node::Neg(inner) => Ok(neg_value(eval(inner, ctx)?)),
        Node::Prod(parts) => {
            let mut acc = eval(&parts[0], ctx)?;
            for p in &parts[1..] {
                let v = eval(p, ctx)?;
                acc = mul_values(acc, v, ctx, p.off)?;
            }
            Ok(acc)
        }
        Node::Div(num, den) => {
            let n = eval(num, ctx)?;
            match eval(den, ctx)? {
                Value::S(s) => {
                    let inv = s.recip().map_err(|e| CliError::at(den.off, e.to_string()))?;
                    mul_values(n, Value::S(inv), ctx, den.off)
                }
                _ => Err(CliError::at(den.off, "division is only defined by scalars")),
            }
        }
        Node::Sum(parts) => {
            let mut acc = eval(&parts[0], ctx)?;
            for p in &parts[1..] {
                let v = eval(p, ctx)?;
                acc = add_values(acc, v, ctx, p.off)?;
            }
            Ok(acc)
        }
        Node::Tensor(a, b) => {
            let ea = eval(a, ctx)?.into_element(ctx.base1, a.off)?;
            let eb = eval(b, ctx)?.into_element(ctx.base2, b.off)?;
            Ok(Value::T(TensorElement::simple(&ea, &eb)))
        }
    }
}

/// Canonical print of an evaluated value.
pub fn print_value(v: &Value) -> String {
    match v {
        Value::S(s) => s.pretty(),
        Value::E(e) => e.pretty(),
        Value::T(t) => {
            if t.is_zero() {
                return "0".into();
            }
            t.decompose()
                .iter()
                .map(|(a, b)| format!("({}) | ({})", a.pretty(), b.pretty()))
                .collect::<Vec<_>>()
                .join(" + ")
        }
    }
}

/// Parses, evaluates, and prints in one step.
#[cfg(test)]
pub fn normalize(src: &str, ctx: &EvalCtx) -> Result<String> {
    let ast = parse(src)?;
    Ok(print_value(&eval(&ast, ctx)?))
}
