//! Key = value configuration files overriding the action constants.
//!
//! Recognized keys (case-insensitive, `-` and `_` interchangeable):
//! `a+` / `a-plus` and `a-` / `a-minus` take half-integer twist exponents
//! written as `1`, `-1/2`, and so on; `c+` / `c-plus` and `c-` / `c-minus`
//! take either the mode words `derived` or `paper` or an explicit scalar in
//! the canonical textual form; `c` sets the mode for both constants at once.
//! Blank lines and `#` comments are ignored; unknown keys are errors.

use qsu11_core::action::{c_minus_derived, c_plus_derived, CMode, UqConfig};
use qsu11_core::scalar::Scalar;

use crate::expr::CliError;

/// Parses a half-integer written as `n` or `n/2` into its doubled value.
fn parse_half(s: &str) -> Result<i64, CliError> {
    let s = s.trim();
    let bad = || CliError {
        offset: None,
        message: format!("expected an integer or half like -1/2, got `{}`", s),
    };
    if let Some(num) = s.strip_suffix("/2") {
        num.trim().parse::<i64>().map_err(|_| bad())
    } else {
        s.parse::<i64>().map(|n| 2 * n).map_err(|_| bad())
    }
}

/// One side of the point-mass constant configuration.
#[derive(Clone)]
enum CSide {
    Derived,
    Printed,
    Value(Scalar),
}

fn parse_c_side(s: &str) -> Result<CSide, CliError> {
    match s.trim() {
        "derived" => Ok(CSide::Derived),
        "paper" | "printed" => Ok(CSide::Printed),
        other => Scalar::parse(other).map(CSide::Value).map_err(|e| CliError {
            offset: None,
            message: format!("bad scalar for c constant: {}", e),
        }),
    }
}

/// Applies a config file's contents on top of the default constants.
pub fn apply_config(text: &str, base: UqConfig) -> Result<UqConfig, CliError> {
    let mut cfg = base;
    let mut c_plus: Option<CSide> = None;
    let mut c_minus: Option<CSide> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError {
            offset: None,
            message: format!("line {}: expected key = value", lineno + 1),
        })?;
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "a+" | "a-plus" | "aplus" => cfg.a_plus = parse_half(value)?,
            "a-" | "a-minus" | "aminus" => cfg.a_minus = parse_half(value)?,
            "c+" | "c-plus" | "cplus" => c_plus = Some(parse_c_side(value)?),
            "c-" | "c-minus" | "cminus" => c_minus = Some(parse_c_side(value)?),
            "c" => {
                let side = parse_c_side(value)?;
                c_plus = Some(side.clone());
                c_minus = Some(side);
            }
            other => {
                return Err(CliError {
                    offset: None,
                    message: format!("line {}: unknown key `{}`", lineno + 1, other),
                })
            }
        }
    }
    cfg.c_mode = merge_c(cfg.c_mode, c_plus, c_minus);
    Ok(cfg)
}

/// Folds per-side overrides into a single mode; explicit scalars force the
/// custom mode with the untouched side taken from the previous mode.
fn merge_c(prev: CMode, plus: Option<CSide>, minus: Option<CSide>) -> CMode {
    if plus.is_none() && minus.is_none() {
        return prev;
    }
    let (prev_p, prev_m) = match &prev {
        CMode::Derived => (c_plus_derived(), c_minus_derived()),
        CMode::Printed => (
            c_plus_derived().mul(&Scalar::q_pow(1)),
            c_minus_derived().mul(&Scalar::q_pow(-1)),
        ),
        CMode::Custom(p, m) => (p.clone(), m.clone()),
    };
    match (&plus, &minus) {
        (Some(CSide::Derived), Some(CSide::Derived)) => return CMode::Derived,
        (Some(CSide::Printed), Some(CSide::Printed)) => return CMode::Printed,
        _ => {}
    }
    let pick = |side: Option<CSide>, derived: Scalar, printed_shift: i64, prev: Scalar| match side
    {
        None => prev,
        Some(CSide::Derived) => derived,
        Some(CSide::Printed) => derived.mul(&Scalar::q_pow(printed_shift)),
        Some(CSide::Value(s)) => s,
    };
    CMode::Custom(
        pick(plus, c_plus_derived(), 1, prev_p),
        pick(minus, c_minus_derived(), -1, prev_m),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves_parse_doubled() {
        assert_eq!(parse_half("-1/2").unwrap(), -1);
        assert_eq!(parse_half("1").unwrap(), 2);
        assert_eq!(parse_half(" 3/2 ").unwrap(), 3);
        assert!(parse_half("x").is_err());
    }

    #[test]
    fn config_overrides_apply() {
        let text = "a+ = 1/2\n# comment\na_minus = -1\nc = paper\n";
        let cfg = apply_config(text, UqConfig::default()).unwrap();
        assert_eq!(cfg.a_plus, 1);
        assert_eq!(cfg.a_minus, -2);
        assert_eq!(cfg.c_mode, CMode::Printed);
    }

    #[test]
    fn explicit_scalars_force_custom() {
        let text = "c+ = - q^3/(1 - q^2)\n";
        let cfg = apply_config(text, UqConfig::default()).unwrap();
        match cfg.c_mode {
            CMode::Custom(p, m) => {
                assert_eq!(p, Scalar::parse("- q^3/(1 - q^2)").unwrap());
                assert_eq!(m, c_minus_derived());
            }
            other => panic!("expected custom mode, got {:?}", other),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(apply_config("seed = 3\n", UqConfig::default()).is_err());
    }
}
