//! `qsu11`: verification suites and normal-form queries for the quantum
//! su(1,1) function algebras.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, and 2 on
//! usage errors (bad flags, unparseable expressions, unknown suites).

mod config;
mod expr;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use qsu11_core::space::{Layer, SpaceBase};
use qsu11_core::suite::{run_suite, SuiteConfig};

use expr::{CliError, EvalCtx};

#[derive(Parser)]
#[command(name = "qsu11", version, about = "Exact verification harness for quantum su(1,1) function algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named verification suite and report its checks.
    Verify {
        /// Suite name, one of: relations, e0, embed, nu-x, nu-xi, eta,
        /// trace-l, casimir, module-algebra, k-invariance, k-relations,
        /// lemma65, prop67, prop69, sharp, qseries.
        suite: String,
        /// Restrict single-space suites to one space: x or xi.
        #[arg(long)]
        space: Option<String>,
        /// Space pair for tensor suites: xx, xxi, or xix.
        #[arg(long)]
        pair: Option<String>,
        /// Truncation window for brute-force checks.
        #[arg(long)]
        trunc: Option<u32>,
        /// Largest power parameter l exercised by power-series suites.
        #[arg(long = "max-l")]
        max_l: Option<u32>,
        /// Seed for the sampled property checks.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random samples for the sampled property checks.
        #[arg(long)]
        samples: Option<u32>,
        /// Emit the machine-readable report instead of human text.
        #[arg(long)]
        json: bool,
        /// Key = value file overriding the action constants.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Normalize an expression and print its canonical ordered form.
    Normalize {
        /// Expression, e.g. "t21", "q^(1/2) t12*^2", "t12 | t11*".
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Space the letters live on: x (default) or xi.
        #[arg(long)]
        space: Option<String>,
        /// Require the result to land in a layer: polynomial, finite,
        /// distribution, or localized.
        #[arg(long)]
        layer: Option<String>,
    },
}

fn parse_space(s: &str) -> Result<SpaceBase, CliError> {
    match s {
        "x" => Ok(SpaceBase::TildeX),
        "xi" => Ok(SpaceBase::TildeXi),
        other => Err(CliError {
            offset: None,
            message: format!("unknown space `{}`, expected x or xi", other),
        }),
    }
}

fn parse_pair(s: &str) -> Result<(SpaceBase, SpaceBase), CliError> {
    match s {
        "xx" => Ok((SpaceBase::TildeX, SpaceBase::TildeX)),
        "xxi" => Ok((SpaceBase::TildeX, SpaceBase::TildeXi)),
        "xix" => Ok((SpaceBase::TildeXi, SpaceBase::TildeX)),
        "xixi" => Ok((SpaceBase::TildeXi, SpaceBase::TildeXi)),
        other => Err(CliError {
            offset: None,
            message: format!("unknown pair `{}`, expected xx, xxi, or xix", other),
        }),
    }
}

fn parse_layer(s: &str) -> Result<Layer, CliError> {
    match s {
        "polynomial" => Ok(Layer::Polynomial),
        "finite" => Ok(Layer::Finite),
        "distribution" => Ok(Layer::Distribution),
        "localized" => Ok(Layer::Localized),
        other => Err(CliError {
            offset: None,
            message: format!(
                "unknown layer `{}`, expected polynomial, finite, distribution, or localized",
                other
            ),
        }),
    }
}

fn cmd_verify(
    suite: &str,
    space: Option<String>,
    pair: Option<String>,
    trunc: Option<u32>,
    max_l: Option<u32>,
    seed: Option<u64>,
    samples: Option<u32>,
    json: bool,
    config: Option<PathBuf>,
) -> Result<i32, CliError> {
    let mut cfg = SuiteConfig::default();
    if let Some(s) = space {
        cfg.space = Some(parse_space(&s)?);
    }
    if let Some(p) = pair {
        cfg.pair = Some(parse_pair(&p)?);
    }
    cfg.trunc = trunc;
    if let Some(l) = max_l {
        cfg.max_l = l;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.samples = samples;
    if let Some(path) = config {
        let text = std::fs::read_to_string(&path).map_err(|e| CliError {
            offset: None,
            message: format!("cannot read {}: {}", path.display(), e),
        })?;
        cfg.uq = config::apply_config(&text, cfg.uq)?;
    }
    let start = Instant::now();
    let rep = run_suite(suite, &cfg).map_err(|e| CliError {
        offset: None,
        message: e.to_string(),
    })?;
    let millis = start.elapsed().as_millis();
    if json {
        print!("{}", report::render_json(&rep));
    } else {
        print!("{}", report::render_human(&rep, millis));
    }
    Ok(if rep.all_pass() { 0 } else { 1 })
}

fn cmd_normalize(
    text: &str,
    space: Option<String>,
    layer: Option<String>,
) -> Result<i32, CliError> {
    let base = match space {
        Some(s) => parse_space(&s)?,
        None => SpaceBase::TildeX,
    };
    let want_layer = layer.map(|l| parse_layer(&l)).transpose()?;
    let ctx = EvalCtx { base1: base, base2: base };
    let ast = expr::parse(text)?;
    let value = expr::eval(&ast, &ctx)?;
    if let Some(layer) = want_layer {
        let got = match &value {
            expr::Value::S(_) => Layer::Polynomial,
            expr::Value::E(e) => e.space.layer,
            expr::Value::T(t) => t.outer.space.layer,
        };
        if got != layer {
            return Err(CliError {
                offset: None,
                message: format!(
                    "result lives in the {} layer, not {}",
                    got.name(),
                    layer.name()
                ),
            });
        }
    }
    println!("{}", expr::print_value(&value));
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Verify {
            suite,
            space,
            pair,
            trunc,
            max_l,
            seed,
            samples,
            json,
            config,
        } => cmd_verify(
            &suite, space, pair, trunc, max_l, seed, samples, json, config,
        ),
        Cmd::Normalize { expr, space, layer } => cmd_normalize(&expr, space, layer),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("{}", e);
            std::process::exit(2);
        }
    }
}
