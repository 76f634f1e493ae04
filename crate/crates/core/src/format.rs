//! Automaton text format and the streaming term wire format.
//!
//! ```text
//! alphabet: f/2 a1/0 b1/0 a2/0 b2/0
//! kind: bottom-up
//! states: q1 q2 q3 q4 q5
//! final: q5
//! rules:
//! a1 -> q1
//! f(q1,q2) -> q5
//! ```
//!
//! Top-down automata use `kind: top-down`, an `initial:` line, and
//! rules written `q(f) -> f(q1,q2)` (or `q(a) -> a` for constants).
//! `#` starts a comment to end of line; blank lines are ignored;
//! whitespace within a line is insignificant. Emission is canonical:
//! symbols, states and rules in sorted order, so emitted automata
//! re-parse to equal values.
//!
//! The streaming wire format for terms is one preorder token per line,
//! `SYMBOL ARITY`.

use std::fmt::Write as _;

use crate::bu::{BottomUpAutomaton, Rule, State};
use crate::error::Error;
use crate::td::{TdRule, TopDownAutomaton};
use crate::trees::RankedAlphabet;
use crate::Result;

/// An automaton of either kind, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyAutomaton {
    Up(BottomUpAutomaton),
    Down(TopDownAutomaton),
}

impl AnyAutomaton {
    pub fn alphabet(&self) -> &RankedAlphabet {
        match self {
            AnyAutomaton::Up(a) => a.alphabet(),
            AnyAutomaton::Down(a) => a.alphabet(),
        }
    }

    /// The language as a bottom-up automaton (identity or reversal).
    pub fn to_bottom_up(&self) -> BottomUpAutomaton {
        match self {
            AnyAutomaton::Up(a) => a.clone(),
            AnyAutomaton::Down(a) => a.to_bottom_up(),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// State tokens may be any run of characters that avoids the structural
/// delimiters, so generated names like `{q1|q4}` survive a round trip.
fn is_state_token(tok: &str) -> bool {
    !tok.is_empty()
        && !tok
            .chars()
            .any(|c| c.is_ascii_whitespace() || c == '(' || c == ')' || c == ',' || c == '#')
}

struct Lines<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            lines: text.lines().enumerate(),
        }
    }

    /// Next non-blank line after comment stripping, with its 1-based
    /// number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.lines.by_ref() {
            let line = strip_comment(raw).trim();
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }
}

fn expect_header<'a>(lines: &mut Lines<'a>, key: &str) -> Result<(usize, &'a str)> {
    match lines.next() {
        Some((n, line)) => match line.strip_prefix(key) {
            Some(rest) => Ok((n, rest.trim())),
            None => Err(Error::format(n, format!("expected `{key}` line"))),
        },
        None => Err(Error::format(0, format!("missing `{key}` line"))),
    }
}

fn parse_alphabet(line: usize, body: &str) -> Result<RankedAlphabet> {
    let mut symbols = Vec::new();
    for part in body.split_whitespace() {
        let (name, arity) = part
            .rsplit_once('/')
            .ok_or_else(|| Error::format(line, format!("expected NAME/ARITY, found `{part}`")))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| Error::format(line, format!("bad arity in `{part}`")))?;
        symbols.push((name.to_string(), arity));
    }
    RankedAlphabet::new(symbols)
}

fn parse_states(line: usize, body: &str) -> Result<Vec<State>> {
    let mut out = Vec::new();
    for tok in body.split_whitespace() {
        if !is_state_token(tok) {
            return Err(Error::format(line, format!("bad state token `{tok}`")));
        }
        out.push(State::from(tok));
    }
    Ok(out)
}

/// Splits `f(q1,q2)` into its symbol and state tokens; a bare token has
/// no argument list.
fn split_application(line: usize, text: &str) -> Result<(&str, Vec<&str>)> {
    match text.find('(') {
        None => Ok((text.trim(), Vec::new())),
        Some(open) => {
            let head = text[..open].trim();
            let rest = text[open + 1..].trim();
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::format(line, format!("missing `)` in `{text}`")))?;
            if inner.contains('(') || inner.contains(')') {
                return Err(Error::format(line, format!("nested parentheses in `{text}`")));
            }
            let args = inner.split(',').map(str::trim).collect();
            Ok((head, args))
        }
    }
}

fn parse_bu_rule(line: usize, text: &str, alphabet: &RankedAlphabet) -> Result<Rule> {
    let (lhs, rhs) = text
        .split_once("->")
        .ok_or_else(|| Error::format(line, format!("expected `->` in rule `{text}`")))?;
    let (symbol, children) = split_application(line, lhs.trim())?;
    let target = rhs.trim();
    if !is_state_token(target) {
        return Err(Error::format(line, format!("bad target state `{target}`")));
    }
    let arity = alphabet
        .arity(symbol)
        .ok_or_else(|| Error::format(line, format!("unknown symbol `{symbol}`")))?;
    if arity != children.len() {
        return Err(Error::format(
            line,
            format!("`{symbol}` has arity {arity}, rule gives {}", children.len()),
        ));
    }
    for c in &children {
        if !is_state_token(c) {
            return Err(Error::format(line, format!("bad state token `{c}`")));
        }
    }
    Ok(Rule::new(
        symbol,
        children.into_iter().map(State::from).collect(),
        State::from(target),
    ))
}

fn parse_td_rule(line: usize, text: &str, alphabet: &RankedAlphabet) -> Result<TdRule> {
    let (lhs, rhs) = text
        .split_once("->")
        .ok_or_else(|| Error::format(line, format!("expected `->` in rule `{text}`")))?;
    let (source, lhs_args) = split_application(line, lhs.trim())?;
    if !is_state_token(source) {
        return Err(Error::format(line, format!("bad source state `{source}`")));
    }
    let [symbol] = lhs_args.as_slice() else {
        return Err(Error::format(
            line,
            format!("left-hand side must be `state(symbol)`, found `{lhs}`"),
        ));
    };
    let (rhs_symbol, children) = split_application(line, rhs.trim())?;
    if rhs_symbol != *symbol {
        return Err(Error::format(
            line,
            format!("rule rewrites `{symbol}` but produces `{rhs_symbol}`"),
        ));
    }
    let arity = alphabet
        .arity(symbol)
        .ok_or_else(|| Error::format(line, format!("unknown symbol `{symbol}`")))?;
    if arity != children.len() {
        return Err(Error::format(
            line,
            format!("`{symbol}` has arity {arity}, rule gives {}", children.len()),
        ));
    }
    for c in &children {
        if !is_state_token(c) {
            return Err(Error::format(line, format!("bad state token `{c}`")));
        }
    }
    Ok(TdRule::new(
        State::from(source),
        *symbol,
        children.into_iter().map(State::from).collect(),
    ))
}

/// Parses either automaton kind from its text representation.
pub fn parse_automaton(text: &str) -> Result<AnyAutomaton> {
    let mut lines = Lines::new(text);
    let (n, body) = expect_header(&mut lines, "alphabet:")?;
    let alphabet = parse_alphabet(n, body)?;
    let (n, kind) = expect_header(&mut lines, "kind:")?;
    let top_down = match kind {
        "bottom-up" => false,
        "top-down" => true,
        other => {
            return Err(Error::format(
                n,
                format!("kind must be `bottom-up` or `top-down`, found `{other}`"),
            ))
        }
    };
    let (n, body) = expect_header(&mut lines, "states:")?;
    let states = parse_states(n, body)?;
    let marker = if top_down { "initial:" } else { "final:" };
    let (n, body) = expect_header(&mut lines, marker)?;
    let marked = parse_states(n, body)?;
    let (_, _) = expect_header(&mut lines, "rules:")?;
    if top_down {
        let mut rules = Vec::new();
        while let Some((n, line)) = lines.next() {
            rules.push(parse_td_rule(n, line, &alphabet)?);
        }
        Ok(AnyAutomaton::Down(TopDownAutomaton::new(
            alphabet, states, marked, rules,
        )?))
    } else {
        let mut rules = Vec::new();
        while let Some((n, line)) = lines.next() {
            rules.push(parse_bu_rule(n, line, &alphabet)?);
        }
        Ok(AnyAutomaton::Up(BottomUpAutomaton::new(
            alphabet, states, marked, rules,
        )?))
    }
}

fn write_alphabet(out: &mut String, alphabet: &RankedAlphabet) {
    out.push_str("alphabet:");
    for (name, arity) in alphabet.symbols() {
        let _ = write!(out, " {name}/{arity}");
    }
    out.push('\n');
}

fn write_state_line(out: &mut String, key: &str, states: impl IntoIterator<Item = State>) {
    out.push_str(key);
    for q in states {
        let _ = write!(out, " {q}");
    }
    out.push('\n');
}

/// Canonical text form of a bottom-up automaton.
pub fn write_bottom_up(a: &BottomUpAutomaton) -> String {
    let mut out = String::new();
    write_alphabet(&mut out, a.alphabet());
    out.push_str("kind: bottom-up\n");
    write_state_line(&mut out, "states:", a.states().iter().cloned());
    write_state_line(&mut out, "final:", a.finals().iter().cloned());
    out.push_str("rules:\n");
    for r in a.rules() {
        let _ = writeln!(out, "{r}");
    }
    out
}

/// Canonical text form of a top-down automaton.
pub fn write_top_down(a: &TopDownAutomaton) -> String {
    let mut out = String::new();
    write_alphabet(&mut out, a.alphabet());
    out.push_str("kind: top-down\n");
    write_state_line(&mut out, "states:", a.states().iter().cloned());
    write_state_line(&mut out, "initial:", a.initials().iter().cloned());
    out.push_str("rules:\n");
    for r in a.rules() {
        let _ = writeln!(out, "{r}");
    }
    out
}

pub fn write_automaton(a: &AnyAutomaton) -> String {
    match a {
        AnyAutomaton::Up(a) => write_bottom_up(a),
        AnyAutomaton::Down(a) => write_top_down(a),
    }
}

/// Parses the streaming wire format: one `SYMBOL ARITY` token per line.
pub fn parse_stream_tokens(text: &str) -> impl Iterator<Item = Result<(String, usize)>> + '_ {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                return None;
            }
            Some((i + 1, line))
        })
        .map(|(n, line)| {
            let mut parts = line.split_whitespace();
            let symbol = parts
                .next()
                .ok_or_else(|| Error::format(n, "missing symbol"))?;
            let arity: usize = parts
                .next()
                .ok_or_else(|| Error::format(n, "missing arity"))?
                .parse()
                .map_err(|_| Error::format(n, "bad arity"))?;
            if parts.next().is_some() {
                return Err(Error::format(n, "trailing text after token"));
            }
            Ok((symbol.to_string(), arity))
        })
}

/// The streaming serialization of a term.
pub fn term_to_stream(t: &crate::trees::Term) -> String {
    let mut out = String::new();
    for (symbol, arity) in t.preorder() {
        let _ = writeln!(out, "{symbol} {arity}");
    }
    out
}
