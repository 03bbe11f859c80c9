//! Line-oriented `key = value` documents for equations and case
//! parameters.
//!
//! `#` starts a comment; lists are bracketed and comma-separated; scalar
//! values are constant expressions in the grammar of [`crate::parser`]
//! (so `ln(6+6*sqrt(7))` and `i*pi/3` are valid values). Unknown keys are
//! rejected by name. Axis keys `i`, `j` are 1-based in documents and
//! 0-based in the API.

use crate::complex::{Cx, Tolerance};
use crate::equation::{ModelError, OmegaBranch, TrinomialPdde, Variant};
use crate::parser::{parse_constant, parse_polynomial};
use crate::poly::UniPoly;
use crate::solutions::{build_periodic, CaseId, CaseParameters, Sign, Theorem};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value'")]
    MalformedLine { line: usize },
    #[error("line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },
    #[error("unknown key '{key}'")]
    UnknownKey { key: String },
    #[error("missing key '{key}'")]
    MissingKey { key: &'static str },
    #[error("key '{key}': {message}")]
    BadValue { key: String, message: String },
    #[error("key '{key}': {source}")]
    Model {
        key: String,
        #[source]
        source: ModelError,
    },
}

/// A parsed equation document: the model plus optional tolerance
/// overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationConfig {
    pub equation: TrinomialPdde,
    pub tolerance: Option<Tolerance>,
}

fn split_document(text: &str) -> Result<BTreeMap<String, (usize, String)>, ConfigError> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let eq_pos = body.find('=').ok_or(ConfigError::MalformedLine { line })?;
        let key = body[..eq_pos].trim().to_string();
        let value = body[eq_pos + 1..].trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::MalformedLine { line });
        }
        if map.insert(key.clone(), (line, value)).is_some() {
            return Err(ConfigError::DuplicateKey { line, key });
        }
    }
    Ok(map)
}

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        message: message.into(),
    }
}

fn take<'a>(
    map: &'a BTreeMap<String, (usize, String)>,
    key: &'static str,
) -> Result<&'a str, ConfigError> {
    map.get(key)
        .map(|(_, v)| v.as_str())
        .ok_or(ConfigError::MissingKey { key })
}

fn parse_scalar(key: &str, text: &str) -> Result<Cx, ConfigError> {
    parse_constant(text).map_err(|e| bad(key, e.to_string()))
}

fn parse_usize(key: &str, text: &str) -> Result<usize, ConfigError> {
    text.parse::<usize>()
        .map_err(|_| bad(key, "expected a positive integer"))
}

fn parse_list(key: &str, text: &str) -> Result<Vec<Cx>, ConfigError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad(key, "expected a bracketed list like [1, -2, i]"))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| parse_scalar(key, s.trim()))
        .collect()
}

fn parse_int_list(key: &str, text: &str) -> Result<Vec<i64>, ConfigError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad(key, "expected a bracketed list like [0, 1, -2]"))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| bad(key, "expected integers"))
        })
        .collect()
}

const EQUATION_KEYS: &[&str] = &[
    "n", "i", "j", "a", "b", "omega", "alpha", "beta", "c", "g", "variant", "abs_tol", "rel_tol",
];

/// Parse an equation document into a validated model.
pub fn parse_equation_config(text: &str) -> Result<EquationConfig, ConfigError> {
    let map = split_document(text)?;
    for key in map.keys() {
        if !EQUATION_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { key: key.clone() });
        }
    }
    let n = parse_usize("n", take(&map, "n")?)?;
    let i = parse_usize("i", take(&map, "i")?)?;
    let j = parse_usize("j", take(&map, "j")?)?;
    if i == 0 || j == 0 {
        return Err(bad("i", "axes are 1-based in documents (i >= 1, j >= 1)"));
    }
    let a = parse_scalar("a", take(&map, "a")?)?;
    let b = parse_scalar("b", take(&map, "b")?)?;
    let omega = parse_scalar("omega", take(&map, "omega")?)?;
    let alpha = parse_scalar("alpha", take(&map, "alpha")?)?;
    let beta = parse_scalar("beta", take(&map, "beta")?)?;
    let c = parse_list("c", take(&map, "c")?)?;
    let g = parse_polynomial(take(&map, "g")?, n).map_err(|e| bad("g", e.to_string()))?;
    let variant = match take(&map, "variant")? {
        "shift" => Variant::Shift,
        "difference" => Variant::Difference,
        other => return Err(bad("variant", format!("expected 'shift' or 'difference', got '{other}'"))),
    };
    let tolerance = match (map.get("abs_tol"), map.get("rel_tol")) {
        (None, None) => None,
        (abs, rel) => {
            let abs = abs
                .map(|(_, v)| parse_scalar("abs_tol", v))
                .transpose()?
                .map(|v| v.re)
                .unwrap_or(1e-9);
            let rel = rel
                .map(|(_, v)| parse_scalar("rel_tol", v))
                .transpose()?
                .map(|v| v.re)
                .unwrap_or(1e-9);
            if abs <= 0.0 || rel <= 0.0 {
                return Err(bad("abs_tol", "tolerances must be strictly positive"));
            }
            Some(Tolerance::new(abs, rel))
        }
    };
    let equation = TrinomialPdde::new(n, i - 1, j - 1, a, b, omega, alpha, beta, c, g, variant)
        .map_err(|source| ConfigError::Model {
            key: "equation".into(),
            source,
        })?;
    Ok(EquationConfig {
        equation,
        tolerance,
    })
}

const PARAMS_KEYS: &[&str] = &[
    "branch",
    "sign",
    "xi",
    "log_branch",
    "l1",
    "e1",
    "l2",
    "e2",
    "d",
    "h1",
    "h2",
    "periodic_period",
    "periodic_k",
    "periodic_coeff",
];

/// Parse a case-parameter document for the given theorem and case.
///
/// `default_period` supplies the `w`-frame period `τ` when the document
/// adds a Fourier component without an explicit `periodic_period`.
pub fn parse_params_config(
    text: &str,
    theorem: Theorem,
    case: CaseId,
    default_period: Cx,
) -> Result<CaseParameters, ConfigError> {
    let map = split_document(text)?;
    for key in map.keys() {
        if !PARAMS_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { key: key.clone() });
        }
    }
    let mut params = CaseParameters::new(theorem, case);
    if let Some((_, v)) = map.get("branch") {
        params.branch = match v.as_str() {
            "plus" => OmegaBranch::Plus,
            "minus" => OmegaBranch::Minus,
            other => return Err(bad("branch", format!("expected 'plus' or 'minus', got '{other}'"))),
        };
    }
    if let Some((_, v)) = map.get("sign") {
        params.sign = match v.as_str() {
            "plus" | "+" => Sign::Plus,
            "minus" | "-" => Sign::Minus,
            other => return Err(bad("sign", format!("expected 'plus' or 'minus', got '{other}'"))),
        };
    }
    if let Some((_, v)) = map.get("xi") {
        params.xi = Some(parse_scalar("xi", v)?);
    }
    if let Some((_, v)) = map.get("log_branch") {
        params.log_branch = v
            .parse::<i64>()
            .map_err(|_| bad("log_branch", "expected an integer"))?;
    }
    if let Some((_, v)) = map.get("l1") {
        params.l1 = Some(parse_list("l1", v)?);
    }
    if let Some((_, v)) = map.get("l2") {
        params.l2 = Some(parse_list("l2", v)?);
    }
    if let Some((_, v)) = map.get("e1") {
        params.e1 = Some(parse_scalar("e1", v)?);
    }
    if let Some((_, v)) = map.get("e2") {
        params.e2 = Some(parse_scalar("e2", v)?);
    }
    if let Some((_, v)) = map.get("d") {
        params.d = Some(parse_list("d", v)?);
    }
    if let Some((_, v)) = map.get("h1") {
        params.h1 = Some(UniPoly::from_coeffs(parse_list("h1", v)?));
    }
    if let Some((_, v)) = map.get("h2") {
        params.h2 = Some(UniPoly::from_coeffs(parse_list("h2", v)?));
    }
    let ks = map
        .get("periodic_k")
        .map(|(_, v)| parse_int_list("periodic_k", v))
        .transpose()?;
    let coeffs = map
        .get("periodic_coeff")
        .map(|(_, v)| parse_list("periodic_coeff", v))
        .transpose()?;
    match (ks, coeffs) {
        (None, None) => {}
        (Some(ks), Some(coeffs)) if ks.len() == coeffs.len() => {
            let period = match map.get("periodic_period") {
                Some((_, v)) => parse_scalar("periodic_period", v)?,
                None => default_period,
            };
            let terms: Vec<(i64, Cx)> = ks.into_iter().zip(coeffs).collect();
            params.periodic = Some(
                build_periodic(period, &terms)
                    .map_err(|e| bad("periodic_period", e.to_string()))?,
            );
        }
        _ => {
            return Err(bad(
                "periodic_k",
                "periodic_k and periodic_coeff must both be present with equal lengths",
            ))
        }
    }
    Ok(params)
}

/// Render an equation back into document form (used by the fixtures).
pub fn equation_to_config(eq: &TrinomialPdde, g_text: &str) -> String {
    let fmt_cx = |v: Cx| {
        if v.im == 0.0 {
            format!("{}", v.re)
        } else if v.re == 0.0 {
            format!("{}*i", v.im)
        } else {
            format!("{}+{}*i", v.re, v.im)
        }
    };
    let c_list = eq
        .shift
        .iter()
        .map(|&v| fmt_cx(v))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "n = {}\ni = {}\nj = {}\na = {}\nb = {}\nomega = {}\nalpha = {}\nbeta = {}\nc = [{}]\ng = {}\nvariant = {}\n",
        eq.arity,
        eq.i + 1,
        eq.j + 1,
        fmt_cx(eq.a),
        fmt_cx(eq.b),
        fmt_cx(eq.omega),
        fmt_cx(eq.alpha),
        fmt_cx(eq.beta),
        c_list,
        g_text,
        match eq.variant {
            Variant::Shift => "shift",
            Variant::Difference => "difference",
        }
    )
}
