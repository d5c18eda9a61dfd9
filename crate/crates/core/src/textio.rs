//! Line-oriented text format for rule sets.
//!
//! One rule per line:
//!
//! ```text
//! rule id=<int> view=[!?fd<idx>,...] cmd=[m<idx>=<val>,...] q=<float> e=<float> i=<int> parents=[<id>,<id>]
//! ```
//!
//! A `!` prefix marks negated literals, empty brackets are allowed, and the
//! `parents` field is present only for composed rules. Floats are rendered
//! with 17 significant digits so a parse/render cycle is identity.

use std::fmt::Write as _;

use thiserror::Error;

use crate::controller::{Controller, ControllerError};
use crate::rule::{PartialRule, RuleId, RuleStats};
use crate::types::{ElementaryAction, FeatureLiteral, PartialCommand, PartialView};

#[derive(Debug, Error, PartialEq)]
pub enum RuleParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("rule set: {0}")]
    Structure(String),
}

fn err(line: usize, message: impl Into<String>) -> RuleParseError {
    RuleParseError::Line { line, message: message.into() }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders one rule in the line format.
pub fn render_rule(rule: &PartialRule) -> String {
    let mut out = String::new();
    write!(out, "rule id={}", rule.id).unwrap();
    out.push_str(" view=[");
    for (k, lit) in rule.view.literals().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{lit}").unwrap();
    }
    out.push_str("] cmd=[");
    for (k, ea) in rule.command.assignments().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{ea}").unwrap();
    }
    write!(
        out,
        "] q={} e={} i={}",
        fmt_float(rule.stats.q),
        fmt_float(rule.stats.e),
        rule.stats.i
    )
    .unwrap();
    if let Some((p1, p2)) = rule.parents {
        write!(out, " parents=[{p1},{p2}]").unwrap();
    }
    out
}

fn expect_field<'a>(token: Option<&'a str>, key: &str, line: usize) -> Result<&'a str, RuleParseError> {
    let token = token.ok_or_else(|| err(line, format!("missing field {key}")))?;
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| err(line, format!("expected {key}=..., got `{token}`")))
}

fn parse_bracket_list(raw: &str, line: usize) -> Result<Vec<&str>, RuleParseError> {
    let inner = raw
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected [...], got `{raw}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').collect())
}

fn parse_float(raw: &str, key: &str, line: usize) -> Result<f64, RuleParseError> {
    let value: f64 = raw
        .parse()
        .map_err(|_| err(line, format!("invalid float for {key}: `{raw}`")))?;
    if !value.is_finite() {
        return Err(err(line, format!("non-finite value for {key}")));
    }
    Ok(value)
}

/// Parses one rule line. `line` is used in error messages only.
pub fn parse_rule(text: &str, line: usize) -> Result<PartialRule, RuleParseError> {
    let mut tokens = text.split_whitespace();
    match tokens.next() {
        Some("rule") => {}
        other => return Err(err(line, format!("expected `rule`, got `{}`", other.unwrap_or("")))),
    }

    let id: RuleId = expect_field(tokens.next(), "id", line)?
        .parse()
        .map_err(|_| err(line, "invalid id"))?;

    let mut literals = Vec::new();
    for item in parse_bracket_list(expect_field(tokens.next(), "view", line)?, line)? {
        let (polarity, rest) = match item.strip_prefix('!') {
            Some(rest) => (false, rest),
            None => (true, item),
        };
        let detector: usize = rest
            .strip_prefix("fd")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| err(line, format!("invalid literal `{item}`")))?;
        literals.push(FeatureLiteral { detector, polarity });
    }
    if literals.windows(2).any(|w| w[0].detector == w[1].detector)
        || has_duplicate_by(&mut literals.clone(), |l| l.detector)
    {
        return Err(err(line, "detector repeated in view"));
    }

    let mut assignments = Vec::new();
    for item in parse_bracket_list(expect_field(tokens.next(), "cmd", line)?, line)? {
        let (motor_raw, value_raw) = item
            .split_once('=')
            .ok_or_else(|| err(line, format!("invalid assignment `{item}`")))?;
        let motor: usize = motor_raw
            .strip_prefix('m')
            .and_then(|m| m.parse().ok())
            .ok_or_else(|| err(line, format!("invalid motor in `{item}`")))?;
        let value: usize = value_raw
            .parse()
            .map_err(|_| err(line, format!("invalid value in `{item}`")))?;
        assignments.push(ElementaryAction { motor, value });
    }
    if has_duplicate_by(&mut assignments.clone(), |ea| ea.motor) {
        return Err(err(line, "motor repeated in command"));
    }

    let q = parse_float(expect_field(tokens.next(), "q", line)?, "q", line)?;
    let e = parse_float(expect_field(tokens.next(), "e", line)?, "e", line)?;
    if e < 0.0 {
        return Err(err(line, "e must be non-negative"));
    }
    let i: i64 = expect_field(tokens.next(), "i", line)?
        .parse()
        .map_err(|_| err(line, "invalid i"))?;

    let parents = match tokens.next() {
        None => None,
        Some(token) => {
            let raw = token
                .strip_prefix("parents")
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| err(line, format!("unexpected trailing token `{token}`")))?;
            let items = parse_bracket_list(raw, line)?;
            if items.len() != 2 {
                return Err(err(line, "parents must list exactly two ids"));
            }
            let p1: RuleId = items[0].parse().map_err(|_| err(line, "invalid parent id"))?;
            let p2: RuleId = items[1].parse().map_err(|_| err(line, "invalid parent id"))?;
            Some((p1, p2))
        }
    };
    if let Some(extra) = tokens.next() {
        return Err(err(line, format!("unexpected trailing token `{extra}`")));
    }

    Ok(PartialRule {
        id,
        view: PartialView::new(literals),
        command: PartialCommand::new(assignments),
        stats: RuleStats { q, e, i, used_count: 0, last_used_step: 0, creation_error: None },
        parents,
        frozen: false,
    })
}

fn has_duplicate_by<T, K: Ord>(items: &mut Vec<T>, key: impl Fn(&T) -> K) -> bool {
    items.sort_by_key(|x| key(x));
    items.windows(2).any(|w| key(&w[0]) == key(&w[1]))
}

/// Renders a whole rule set, one rule per line in ascending id order.
pub fn render_controller(controller: &Controller) -> String {
    let mut out = String::new();
    for rule in controller.iter() {
        out.push_str(&render_rule(rule));
        out.push('\n');
    }
    out
}

/// Parses the lines of a rule-set file, skipping blanks and `#` comments.
pub fn parse_rules(text: &str) -> Result<Vec<PartialRule>, RuleParseError> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        rules.push(parse_rule(trimmed, line)?);
    }
    Ok(rules)
}

/// Loads a complete controller from text. The set must contain exactly one
/// empty rule and no duplicated ids or structures.
pub fn load_controller(text: &str, capacity: usize) -> Result<Controller, RuleParseError> {
    let rules = parse_rules(text)?;
    let empties = rules.iter().filter(|r| r.is_empty_rule()).count();
    if empties != 1 {
        return Err(RuleParseError::Structure(format!(
            "rule set must contain exactly one empty rule, found {empties}"
        )));
    }
    let mut seen = std::collections::HashSet::new();
    for rule in &rules {
        if !seen.insert(rule.id) {
            return Err(RuleParseError::Structure(format!("rule id {} repeated", rule.id)));
        }
    }
    Controller::from_rules(rules, capacity).map_err(|e| match e {
        ControllerError::Duplicate(id) => {
            RuleParseError::Structure(format!("duplicate of rule {id}"))
        }
        other => RuleParseError::Structure(other.to_string()),
    })
}
