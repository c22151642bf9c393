//! Line-oriented text formats for games, utilities and profiles.
//!
//! ```text
//! # household, two players
//! players 2
//! node v1 player=1
//! node v2 player=2
//! node t1 terminal
//! node t2 terminal
//! edge v1 v2
//! edge v2 v1
//! edge v1 t1
//! edge v2 t2
//! ```
//!
//! Utilities: `utility player=<i> outcome=<id> value=<p>/<q>` (or an integer).
//! Profiles: one `<vertex> -> <target>` line per controlled vertex.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::game::{Player, PositionalStructure, StrategyProfile, UtilityFunction, Value};

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits a line into whitespace-separated tokens with 1-based columns,
/// dropping everything from `#` on.
fn tokens(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token { text: &line[s..i], column: line[..s].chars().count() + 1 });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn key_value<'a>(tok: Token<'a>, key: &str, line: usize) -> Result<&'a str> {
    tok.text
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| syntax(line, tok.column, format!("expected `{key}=...`, found `{}`", tok.text)))
}

fn parse_number(tok: Token<'_>, text: &str, line: usize) -> Result<usize> {
    text.parse().map_err(|_| syntax(line, tok.column, format!("`{text}` is not a non-negative integer")))
}

enum NodeKind {
    Owned(usize),
    Terminal,
}

struct NodeDecl {
    kind: NodeKind,
    line: usize,
    column: usize,
}

/// Parses a game document into a normalized positional structure.
pub fn parse_game(text: &str) -> Result<PositionalStructure> {
    let mut players: Option<usize> = None;
    let mut g = Digraph::new();
    let mut nodes: Vec<NodeDecl> = Vec::new();
    let mut edges: Vec<(Token<'_>, Token<'_>, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&head) = toks.first() else { continue };
        let arity = |n: usize| -> Result<()> {
            if toks.len() != n {
                let col = toks.get(n).map_or(head.column, |t| t.column);
                return Err(syntax(line, col, format!("`{}` takes {} arguments", head.text, n - 1)));
            }
            Ok(())
        };
        match head.text {
            "players" => {
                arity(2)?;
                if players.is_some() {
                    return Err(syntax(line, head.column, "duplicate `players` directive"));
                }
                let n = parse_number(toks[1], toks[1].text, line)?;
                if n == 0 {
                    return Err(syntax(line, toks[1].column, "at least one player is required"));
                }
                players = Some(n);
            }
            "node" => {
                arity(3)?;
                let id = toks[1];
                let kind = if toks[2].text == "terminal" {
                    NodeKind::Terminal
                } else {
                    let p = key_value(toks[2], "player", line)?;
                    NodeKind::Owned(parse_number(toks[2], p, line)?)
                };
                g.add_vertex(id.text).map_err(|e| syntax(line, id.column, e.to_string()))?;
                nodes.push(NodeDecl { kind, line, column: toks[2].column });
            }
            "edge" => {
                arity(3)?;
                edges.push((toks[1], toks[2], line));
            }
            other => return Err(syntax(line, head.column, format!("unknown directive `{other}`"))),
        }
    }
    let players = players.ok_or_else(|| syntax(1, 1, "`players` directive required"))?;

    for (src, dst, line) in edges {
        let s = g.vertex(src.text).ok_or_else(|| syntax(line, src.column, format!("unknown node `{}`", src.text)))?;
        let t = g.vertex(dst.text).ok_or_else(|| syntax(line, dst.column, format!("unknown node `{}`", dst.text)))?;
        g.add_edge(s, t).map_err(|e| syntax(line, src.column, e.to_string()))?;
    }

    let normalized = g.normalized();
    let mut owner = vec![None; g.vertex_count()];
    for (v, decl) in nodes.iter().enumerate() {
        match decl.kind {
            NodeKind::Terminal if !normalized.is_terminal(v) => {
                return Err(syntax(decl.line, decl.column, format!("terminal `{}` has outgoing edges", g.name(v))));
            }
            NodeKind::Terminal => {}
            NodeKind::Owned(p) => {
                if p == 0 || p > players {
                    return Err(syntax(decl.line, decl.column, format!("player {p} out of range 1..={players}")));
                }
                if normalized.is_terminal(v) {
                    return Err(syntax(
                        decl.line,
                        decl.column,
                        format!("`{}` has no move besides a loop; declare it terminal", g.name(v)),
                    ));
                }
                owner[v] = Player::new(p);
            }
        }
    }
    PositionalStructure::new(&g, players, owner)
}

/// Renders a structure in the game format. Loops added by normalization are
/// written out explicitly.
pub fn render_game(s: &PositionalStructure) -> String {
    let g = s.digraph();
    let mut out = String::new();
    writeln!(out, "players {}", s.players()).unwrap();
    for v in g.vertices() {
        match s.owner(v) {
            Some(p) => writeln!(out, "node {} player={}", g.name(v), p).unwrap(),
            None => writeln!(out, "node {} terminal", g.name(v)).unwrap(),
        }
    }
    for e in g.edges() {
        writeln!(out, "edge {} {}", g.name(e.source), g.name(e.target)).unwrap();
    }
    out
}

/// Parses `<p>/<q>` or an integer. Decimals are rejected.
pub fn parse_value(text: &str) -> Option<Value> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: i64 = num.parse().ok()?;
    let den: i64 = den.parse().ok()?;
    (den != 0).then(|| Value::new(num, den))
}

/// Parses a utility document; every (player, outcome) pair must be given
/// exactly once.
pub fn parse_utility(text: &str, s: &PositionalStructure) -> Result<UtilityFunction> {
    let players = s.players();
    let outcomes = s.outcome_count();
    let mut values: Vec<Vec<Option<Value>>> = vec![vec![None; outcomes]; players];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&head) = toks.first() else { continue };
        if head.text != "utility" {
            return Err(syntax(line, head.column, format!("unknown directive `{}`", head.text)));
        }
        let mut fields: HashMap<&str, (Token<'_>, &str)> = HashMap::new();
        for &tok in &toks[1..] {
            let (key, value) = tok
                .text
                .split_once('=')
                .ok_or_else(|| syntax(line, tok.column, format!("expected `key=value`, found `{}`", tok.text)))?;
            if !matches!(key, "player" | "outcome" | "value") {
                return Err(syntax(line, tok.column, format!("unknown field `{key}`")));
            }
            if fields.insert(key, (tok, value)).is_some() {
                return Err(syntax(line, tok.column, format!("duplicate field `{key}`")));
            }
        }
        let field = |key: &str| {
            fields.get(key).copied().ok_or_else(|| syntax(line, head.column, format!("missing field `{key}`")))
        };
        let (ptok, p) = field("player")?;
        let p = parse_number(ptok, p, line)?;
        if p == 0 || p > players {
            return Err(syntax(line, ptok.column, format!("player {p} out of range 1..={players}")));
        }
        let (otok, name) = field("outcome")?;
        let a = s.outcome_by_name(name).ok_or_else(|| syntax(line, otok.column, format!("unknown outcome `{name}`")))?;
        let (vtok, text) = field("value")?;
        let value = parse_value(text)
            .ok_or_else(|| syntax(line, vtok.column, format!("`{text}` is not an integer or a fraction p/q")))?;
        let slot = &mut values[p - 1][a];
        if slot.is_some() {
            return Err(syntax(line, head.column, format!("utility of player {p} for `{name}` given twice")));
        }
        *slot = Some(value);
    }
    let mut rows = Vec::with_capacity(players);
    for (i, row) in values.into_iter().enumerate() {
        let mut filled = Vec::with_capacity(outcomes);
        for (a, x) in row.into_iter().enumerate() {
            filled.push(x.ok_or_else(|| {
                Error::UtilityShape(format!("missing utility of player {} for `{}`", i + 1, s.outcome(a).name))
            })?);
        }
        rows.push(filled);
    }
    Ok(UtilityFunction::new(rows))
}

pub fn render_utility(s: &PositionalStructure, u: &UtilityFunction) -> String {
    let mut out = String::new();
    for p in (1..=u.players()).filter_map(Player::new) {
        for (a, o) in s.outcomes().iter().enumerate() {
            writeln!(out, "utility player={} outcome={} value={}", p, o.name, u.get(p, a)).unwrap();
        }
    }
    out
}

/// Parses `<vertex> -> <target>` lines into a profile. Parallel edges
/// resolve to the first edge with that target.
pub fn parse_profile(text: &str, s: &PositionalStructure) -> Result<StrategyProfile> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 3 || toks[1].text != "->" {
            return Err(syntax(line, toks[0].column, "expected `<vertex> -> <target>`"));
        }
        pairs.push((toks[0].text, toks[2].text));
    }
    let profile = StrategyProfile::from_targets(s, &pairs)?;
    s.check_profile(&profile)?;
    Ok(profile)
}

pub fn render_profile(s: &PositionalStructure, profile: &StrategyProfile) -> String {
    let g = s.digraph();
    let mut out = String::new();
    for (v, w) in profile.targets(s) {
        writeln!(out, "{} -> {}", g.name(v), g.name(w)).unwrap();
    }
    out
}
