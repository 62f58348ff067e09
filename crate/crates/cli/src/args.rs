//! Option parsing shared by the subcommands.

use crnscope::atlas::EnumSpec;
use crnscope::error::{AcrError, AtlasError, DslError, MassActionError, SteadyError};
use crnscope::massaction::RateAssignment;
use crnscope::network::ReactionNetwork;
use crnscope::rational::{parse_q, to_f64, Q};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {0}")]
    Parse(#[from] DslError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    MassAction(#[from] MassActionError),
    #[error(transparent)]
    Steady(#[from] SteadyError),
    #[error(transparent)]
    Acr(#[from] AcrError),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            _ => 3,
        }
    }
}

fn rate(text: &str) -> Result<Q, CliError> {
    parse_q(text.trim()).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn parse_rate_list(text: &str) -> Result<Vec<Q>, CliError> {
    text.split(',').map(rate).collect()
}

/// `k1=1,k2=3/2` binds by label; `1,3/2` binds in label order. Unbound labels are reported
/// when the system is built.
pub fn parse_kappa(net: &ReactionNetwork, text: Option<&str>) -> Result<RateAssignment, CliError> {
    let Some(text) = text.map(str::trim).filter(|t| !t.is_empty()) else {
        return Ok(RateAssignment::new());
    };
    if !text.contains('=') {
        return Ok(RateAssignment::positional(net, &parse_rate_list(text)?)?);
    }
    let labels = net.labels();
    let mut out = RateAssignment::new();
    for item in text.split(',') {
        let (label, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected label=value, got `{item}`")))?;
        let label = label.trim();
        if !labels.iter().any(|l| l == label) {
            return Err(CliError::Usage(format!(
                "network has no rate label `{label}`"
            )));
        }
        out.set(label, rate(value)?);
    }
    Ok(out)
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| rate(t).map(|v| to_f64(&v)))
        .collect()
}

/// Positional values, or `T=10` / `T1=10,T2=11` naming the laws in basis order.
pub fn parse_totals(text: &str) -> Result<Vec<f64>, CliError> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let value = match item.split_once('=') {
            Some((name, v)) => {
                let name = name.trim();
                let expected = format!("T{}", i + 1);
                if !(name == expected || (name == "T" && items.len() == 1)) {
                    return Err(CliError::Usage(format!(
                        "total `{name}` out of order, expected {expected}"
                    )));
                }
                v
            }
            None => item,
        };
        out.push(to_f64(&rate(value)?));
    }
    Ok(out)
}

/// `n=2,r=3` plus flags `reversible`, `any`, `fulldim`, `nonfulldim`.
pub fn parse_enum_spec(text: &str) -> Result<EnumSpec, CliError> {
    let (mut n, mut r) = (None, None);
    let mut flags = Vec::new();
    for item in text.split(',').map(str::trim) {
        match item.split_once('=') {
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("r", v)) => r = v.parse::<usize>().ok(),
            Some(_) => return Err(CliError::Usage(format!("unknown spec field `{item}`"))),
            None => flags.push(item),
        }
    }
    let (Some(n), Some(r)) = (n, r) else {
        return Err(CliError::Usage(format!(
            "spec `{text}` needs n=<species>,r=<reactions>"
        )));
    };
    let mut spec = EnumSpec::bimolecular(n, r);
    for f in flags {
        spec = match f {
            "reversible" => spec.reversible(),
            "any" => EnumSpec {
                require_bimolecular: false,
                ..spec
            },
            "fulldim" => spec.full_dimensional(true),
            "nonfulldim" => spec.full_dimensional(false),
            other => return Err(CliError::Usage(format!("unknown spec flag `{other}`"))),
        };
    }
    Ok(spec)
}
