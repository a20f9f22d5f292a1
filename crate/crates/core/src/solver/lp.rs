//! Plain-text exchange format for the linear phase.
//!
//! ```text
//! min m1 + m2 + 2*n3
//! L m1 + m2 >= 0
//! L n3 >= 1
//! ```
//!
//! Solutions come back as `param = p/q` lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::param::{IntParam, LinComb};

use super::linear::{LinearSystem, Row, RowKind};
use super::simplex::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LpError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> LpError {
    LpError { line, message: message.into() }
}

pub fn write_lp(sys: &LinearSystem) -> String {
    let mut objective = LinComb::zero();
    for (p, w) in &sys.objective {
        objective.add_term(*p, *w);
    }
    let mut out = format!("min {objective}\n");
    for r in &sys.rows {
        match &r.origin {
            Some(o) => {
                let _ = writeln!(out, "{r}  # origin: {o}");
            }
            None => {
                let _ = writeln!(out, "{r}");
            }
        }
    }
    out
}

fn parse_param(tok: &str) -> Option<IntParam> {
    let (kind, digits) = tok.split_at(1);
    let id: u32 = digits.parse().ok()?;
    match kind {
        "m" => Some(IntParam::door(id)),
        "n" => Some(IntParam::exponent(id)),
        _ => None,
    }
}

/// Parse a combination such as `m1 - 2*n3 + n4` or `0`.
pub fn parse_comb_text(text: &str) -> Option<LinComb> {
    let mut comb = LinComb::zero();
    let text = text.trim();
    if text == "0" {
        return Some(comb);
    }
    let mut sign = 1;
    let mut expect_term = true;
    for tok in text.split_whitespace() {
        match tok {
            "+" | "-" if !expect_term => {
                sign = if tok == "+" { 1 } else { -1 };
                expect_term = true;
            }
            _ if expect_term => {
                let (s, body) = match tok.strip_prefix('-') {
                    Some(rest) => (-sign, rest),
                    None => (sign, tok),
                };
                let (coeff, name) = match body.split_once('*') {
                    Some((k, name)) => (k.parse::<i64>().ok()?, name),
                    None => (1, body),
                };
                comb.add_term(parse_param(name)?, s * coeff);
                expect_term = false;
            }
            _ => return None,
        }
    }
    (!expect_term).then_some(comb)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_lp(text: &str) -> Result<LinearSystem, LpError> {
    let mut objective = None;
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("min ") {
            objective = Some(parse_comb_text(rest).ok_or_else(|| err(k + 1, "bad objective"))?);
            continue;
        }
        let body = line.strip_prefix("L ").ok_or_else(|| err(k + 1, "expected `min` or `L` row"))?;
        let (lhs, kind, rhs) = if let Some((l, r)) = body.split_once(">=") {
            (l, RowKind::Geq, r)
        } else if let Some((l, r)) = body.split_once('=') {
            (l, RowKind::Eq, r)
        } else {
            return Err(err(k + 1, "expected `=` or `>=`"));
        };
        let lhs = parse_comb_text(lhs).ok_or_else(|| err(k + 1, "bad left-hand side"))?;
        let row = match rhs.trim().parse::<i64>() {
            Ok(v) => Row::new(lhs, kind, v, None),
            Err(_) => {
                let r = parse_comb_text(rhs).ok_or_else(|| err(k + 1, "bad right-hand side"))?;
                Row::new(&lhs - &r, kind, 0, None)
            }
        };
        rows.push(row);
    }
    let objective = objective.ok_or_else(|| err(0, "missing `min` line"))?;
    let mut sys = LinearSystem::new(objective.params(), rows);
    sys.objective = sys.vars.iter().map(|p| (*p, objective.coeff(*p))).collect();
    Ok(sys)
}

pub fn write_solution(values: &BTreeMap<IntParam, Rational>) -> String {
    let mut out = String::new();
    for (p, v) in values {
        let _ = writeln!(out, "{p} = {}/{}", v.numer(), v.denom());
    }
    out
}

pub fn parse_solution(text: &str) -> Result<BTreeMap<IntParam, Rational>, LpError> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (name, value) = line.split_once('=').ok_or_else(|| err(k + 1, "expected `param = value`"))?;
        let p = parse_param(name.trim()).ok_or_else(|| err(k + 1, "unknown parameter"))?;
        let v = Rational::from_str(value.trim()).map_err(|_| err(k + 1, "bad rational"))?;
        out.insert(p, v);
    }
    Ok(out)
}
