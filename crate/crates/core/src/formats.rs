//! Text formats for maps, graphs, block decompositions, geometries, s-plane
//! queries, multi-groups and affine self-maps.
//!
//! Blank lines and lines starting with `#` are ignored everywhere. Syntax
//! errors carry a 1-based line and column.

use std::collections::HashMap;

use thiserror::Error;

use crate::comb_map::{self, CombMap, GraphError, MapError, SimpleGraph};
use crate::map_geometry::{Angle, GeometryError, MapGeometry, Point, SPlaneConfig};
use crate::multi_space::{
    AffineSelfMap, GroupTable, MetricError, MultiGroup, MultiGroupError, MultiMetricSpace, SubMultiGroup,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    MultiGroup(#[from] MultiGroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn syntax<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, InputError> {
    Err(SyntaxError { line, column, message: message.into() }.into())
}

/// Whitespace-separated tokens of one line, with 1-based columns.
#[derive(Clone, Debug)]
struct Line<'a> {
    number: usize,
    text: &'a str,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].1
    }

    fn end_column(&self) -> usize {
        self.text.chars().count() + 1
    }

    fn arg(&self, i: usize, what: &str) -> Result<(usize, &'a str), InputError> {
        match self.tokens.get(i) {
            Some(&t) => Ok(t),
            None => syntax(self.number, self.end_column(), format!("expected {what}")),
        }
    }

    fn exact_args(&self, n: usize) -> Result<(), InputError> {
        if let Some(&(col, tok)) = self.tokens.get(n + 1) {
            return syntax(self.number, col, format!("unexpected token `{tok}`"));
        }
        if self.tokens.len() < n + 1 {
            return syntax(self.number, self.end_column(), format!("`{}` takes {n} arguments", self.keyword()));
        }
        Ok(())
    }
}

fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    for (byte, ch) in text.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((c, b)) = start.take() {
                out.push((c, &text[b..byte]));
            }
        } else if start.is_none() {
            start = Some((col, byte));
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &text[b..]));
    }
    out
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let toks = tokens(raw);
        match toks.first() {
            None => None,
            Some((_, t)) if t.starts_with('#') => None,
            Some(_) => Some(Line { number: i + 1, text: raw, tokens: toks }),
        }
    })
}

fn scalar<S: Scalar>(line: &Line, (col, tok): (usize, &str)) -> Result<S, InputError> {
    S::parse_scalar(tok).map_or_else(|| syntax(line.number, col, format!("`{tok}` is not a number")), Ok)
}

fn index(line: &Line, (col, tok): (usize, &str)) -> Result<usize, InputError> {
    tok.parse().map_or_else(|_| syntax(line.number, col, format!("`{tok}` is not an index")), Ok)
}

// ---------------------------------------------------------------- maps

/// Parses the map format: `edges: e1 ... en`, then P-cycles such as
/// `(x,a.y,ab.z)`, any number per line.
pub fn parse_map(text: &str) -> Result<CombMap, InputError> {
    let mut all = lines(text);
    let Some(header) = all.next() else {
        return syntax(1, 1, "missing `edges:` line");
    };
    let rest = header.text.trim_start();
    let Some(names) = rest.strip_prefix("edges:") else {
        return syntax(header.number, header.tokens[0].0, "expected `edges:`");
    };
    let offset = header.text.chars().count() - names.chars().count();
    let mut edge_names: Vec<String> = Vec::new();
    for (col, name) in tokens(names) {
        if !valid_name(name) {
            return syntax(header.number, offset + col, format!("invalid edge name `{name}`"));
        }
        if edge_names.iter().any(|n| n == name) {
            return syntax(header.number, offset + col, format!("edge `{name}` listed twice"));
        }
        edge_names.push(name.to_string());
    }
    if edge_names.is_empty() {
        return syntax(header.number, header.end_column(), "no edges listed");
    }

    let mut cycles = Vec::new();
    for line in all {
        parse_cycles(&line, &edge_names, &mut cycles)?;
    }
    Ok(CombMap::new(edge_names, &cycles)?)
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_cycles(line: &Line, edge_names: &[String], out: &mut Vec<Vec<comb_map::Flag>>) -> Result<(), InputError> {
    let chars: Vec<char> = line.text.chars().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i == chars.len() {
            return Ok(());
        }
        if chars[i] != '(' {
            return syntax(line.number, i + 1, format!("expected `(`, found `{}`", chars[i]));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut i);
            let start = i;
            while i < chars.len() && !matches!(chars[i], ',' | ')') && !chars[i].is_whitespace() {
                i += 1;
            }
            let token: String = chars[start..i].iter().collect();
            if token.is_empty() {
                return syntax(line.number, start + 1, "expected a flag");
            }
            let Some(flag) = comb_map::parse_flag(edge_names, &token) else {
                return syntax(line.number, start + 1, format!("unknown flag `{token}`"));
            };
            cycle.push(flag);
            skip_ws(&mut i);
            match chars.get(i) {
                Some(',') => i += 1,
                Some(')') => {
                    i += 1;
                    break;
                }
                Some(c) => return syntax(line.number, i + 1, format!("expected `,` or `)`, found `{c}`")),
                None => return syntax(line.number, i + 1, "unclosed cycle"),
            }
        }
        out.push(cycle);
    }
}

// ---------------------------------------------------------------- graphs

/// Parses `vertex u` and `edge u v` lines.
pub fn parse_graph(text: &str) -> Result<SimpleGraph, InputError> {
    let mut names: Vec<String> = Vec::new();
    let mut index = HashMap::new();
    let mut edges = Vec::new();
    for line in lines(text) {
        match line.keyword() {
            "vertex" => {
                line.exact_args(1)?;
                let (col, name) = line.tokens[1];
                if index.insert(name.to_string(), names.len()).is_some() {
                    return syntax(line.number, col, format!("vertex `{name}` declared twice"));
                }
                names.push(name.to_string());
            }
            "edge" => {
                line.exact_args(2)?;
                let mut ends = [0; 2];
                for (k, end) in ends.iter_mut().enumerate() {
                    let (col, name) = line.tokens[k + 1];
                    *end = match index.get(name) {
                        Some(&v) => v,
                        None => return syntax(line.number, col, format!("undeclared vertex `{name}`")),
                    };
                }
                edges.push((ends[0], ends[1]));
            }
            other => return syntax(line.number, line.tokens[0].0, format!("unknown directive `{other}`")),
        }
    }
    Ok(SimpleGraph::new(names, edges)?)
}

/// Parses `block u1 v1 u2 v2 ...` lines into edge-index blocks. Each pair
/// claims the first edge of `graph` joining those vertices not yet claimed.
pub fn parse_blocks(text: &str, graph: &SimpleGraph) -> Result<Vec<Vec<usize>>, InputError> {
    let mut used = vec![false; graph.edges().len()];
    let mut blocks = Vec::new();
    for line in lines(text) {
        if line.keyword() != "block" {
            return syntax(line.number, line.tokens[0].0, format!("unknown directive `{}`", line.keyword()));
        }
        let ends = &line.tokens[1..];
        if ends.len() % 2 == 1 {
            return syntax(line.number, line.end_column(), "vertex names must come in pairs");
        }
        let mut block = Vec::new();
        for pair in ends.chunks(2) {
            let mut ids = [0; 2];
            for (k, &(col, name)) in pair.iter().enumerate() {
                ids[k] = match graph.vertex_index(name) {
                    Some(v) => v,
                    None => return syntax(line.number, col, format!("unknown vertex `{name}`")),
                };
            }
            let found = graph
                .edges()
                .iter()
                .enumerate()
                .position(|(e, &(u, v))| !used[e] && ((u, v) == (ids[0], ids[1]) || (v, u) == (ids[0], ids[1])));
            match found {
                Some(e) => {
                    used[e] = true;
                    block.push(e);
                }
                None => {
                    return syntax(line.number, pair[0].0, format!("no unclaimed edge {} {}", pair[0].1, pair[1].1))
                }
            }
        }
        blocks.push(block);
    }
    Ok(blocks)
}

// ---------------------------------------------------------------- geometry

/// Parses a map file extended with `mu <vertex-key> <num>/<den> pi` lines.
/// The vertex key is the name of its least flag.
pub fn parse_geometry<S: Scalar>(text: &str) -> Result<MapGeometry<S>, InputError> {
    let mut map_text = String::new();
    let mut mu_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim_start().starts_with("mu") && tokens(raw).first().map(|t| t.1) == Some("mu") {
            mu_lines.push(Line { number: i + 1, text: raw, tokens: tokens(raw) });
            map_text.push('\n');
        } else {
            map_text.push_str(raw);
            map_text.push('\n');
        }
    }
    let map = parse_map(&map_text)?;
    let vertices = map.vertices();
    let mut mu: Vec<Option<Angle<S>>> = vec![None; vertices.len()];
    for line in &mu_lines {
        line.exact_args(3)?;
        let (col, key) = line.tokens[1];
        let Some(v) = vertices.iter().position(|v| map.flag_name(v.key) == key) else {
            return syntax(line.number, col, format!("`{key}` is not a vertex key"));
        };
        if mu[v].is_some() {
            return syntax(line.number, col, format!("angle for `{key}` given twice"));
        }
        let (pcol, pi) = line.tokens[3];
        if pi != "pi" {
            return syntax(line.number, pcol, "expected `pi`");
        }
        mu[v] = Some(Angle::pi_times(scalar(line, line.tokens[2])?));
    }
    let mut angles = Vec::with_capacity(mu.len());
    for (v, a) in mu.into_iter().enumerate() {
        match a {
            Some(a) => angles.push(a),
            None => {
                let line = text.lines().count() + 1;
                return syntax(line, 1, format!("no angle for vertex `{}`", map.flag_name(vertices[v].key)));
            }
        }
    }
    Ok(MapGeometry::new(map, angles)?)
}

/// An s-plane file: three `point` lines followed by query lines.
#[derive(Clone, Debug, PartialEq)]
pub struct SPlaneInput<S> {
    pub config: SPlaneConfig<S>,
    pub queries: Vec<SPlaneQuery<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SPlaneQuery<S> {
    /// `incidence px py qx qy`
    Incidence(Point<S>, Point<S>),
    /// `parallel lx1 ly1 lx2 ly2 px py`: the line through the first two
    /// points and the point the parallel must pass.
    Parallel(Point<S>, Point<S>, Point<S>),
}

pub fn parse_splane<S: Scalar>(text: &str) -> Result<SPlaneInput<S>, InputError> {
    let mut points: [Option<Point<S>>; 3] = [None, None, None];
    let mut queries = Vec::new();
    let point_at = |line: &Line, k: usize| -> Result<Point<S>, InputError> {
        Ok(Point::new(scalar(line, line.arg(k, "a coordinate")?)?, scalar(line, line.arg(k + 1, "a coordinate")?)?))
    };
    for line in lines(text) {
        match line.keyword() {
            "point" => {
                line.exact_args(3)?;
                let (col, label) = line.tokens[1];
                let slot = match label {
                    "A" => 0,
                    "B" => 1,
                    "C" => 2,
                    _ => return syntax(line.number, col, "point label must be A, B or C"),
                };
                if points[slot].is_some() {
                    return syntax(line.number, col, format!("point {label} given twice"));
                }
                points[slot] = Some(point_at(&line, 2)?);
            }
            "incidence" => {
                line.exact_args(4)?;
                queries.push(SPlaneQuery::Incidence(point_at(&line, 1)?, point_at(&line, 3)?));
            }
            "parallel" => {
                line.exact_args(6)?;
                queries.push(SPlaneQuery::Parallel(point_at(&line, 1)?, point_at(&line, 3)?, point_at(&line, 5)?));
            }
            other => return syntax(line.number, line.tokens[0].0, format!("unknown directive `{other}`")),
        }
    }
    let [Some(a), Some(b), Some(c)] = points else {
        return syntax(text.lines().count() + 1, 1, "points A, B and C are required");
    };
    Ok(SPlaneInput { config: SPlaneConfig::new(a, b, c)?, queries })
}

// ---------------------------------------------------------------- multi-groups

/// A multi-group file with optional `sub i e1 e2 ...` lines naming the
/// carrier of a sub-multi-group in part `i`.
#[derive(Clone, Debug)]
pub struct MultiGroupInput {
    pub group: MultiGroup,
    pub sub: Option<SubMultiGroup>,
}

/// Carrier, rows read so far, and the line of the `part` directive.
type PartDraft = (Vec<usize>, HashMap<(usize, usize), usize>, usize);

/// Parses `universe`, `part i carrier ...`, `row a b c` and `sub i ...`
/// lines. Rows belong to the most recent `part`. Parts are numbered from 0
/// in file order.
pub fn parse_multigroup(text: &str) -> Result<MultiGroupInput, InputError> {
    let mut universe: Option<Vec<String>> = None;
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut parts: Vec<PartDraft> = Vec::new();
    let mut subs: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    let element = |ids: &HashMap<String, usize>, line: &Line, (col, tok): (usize, &str)| -> Result<usize, InputError> {
        ids.get(tok).copied().map_or_else(|| syntax(line.number, col, format!("`{tok}` is not in the universe")), Ok)
    };

    for line in lines(text) {
        match line.keyword() {
            "universe" => {
                if universe.is_some() {
                    return syntax(line.number, line.tokens[0].0, "universe given twice");
                }
                let mut names = Vec::new();
                for &(col, tok) in &line.tokens[1..] {
                    if ids.insert(tok.to_string(), names.len()).is_some() {
                        return syntax(line.number, col, format!("element `{tok}` listed twice"));
                    }
                    names.push(tok.to_string());
                }
                if names.is_empty() {
                    return syntax(line.number, line.end_column(), "empty universe");
                }
                universe = Some(names);
            }
            "part" if universe.is_none() => return syntax(line.number, 1, "`universe` must come first"),
            "part" => {
                let number = index(&line, line.arg(1, "a part number")?)?;
                if number != parts.len() {
                    return syntax(line.number, line.tokens[1].0, format!("expected part {}", parts.len()));
                }
                let (col, kw) = line.arg(2, "`carrier`")?;
                if kw != "carrier" {
                    return syntax(line.number, col, "expected `carrier`");
                }
                let mut carrier = Vec::new();
                for &t in &line.tokens[3..] {
                    let e = element(&ids, &line, t)?;
                    if carrier.contains(&e) {
                        return syntax(line.number, t.0, format!("`{}` repeated in carrier", t.1));
                    }
                    carrier.push(e);
                }
                parts.push((carrier, HashMap::new(), line.number));
            }
            "row" => {
                line.exact_args(3)?;
                let Some((carrier, table, _)) = parts.last_mut() else {
                    return syntax(line.number, 1, "`row` before any `part`");
                };
                let mut abc = [0; 3];
                for (slot, &t) in abc.iter_mut().zip(&line.tokens[1..]) {
                    *slot = element(&ids, &line, t)?;
                    if !carrier.contains(slot) {
                        return syntax(line.number, t.0, format!("`{}` is outside the carrier", t.1));
                    }
                }
                if table.insert((abc[0], abc[1]), abc[2]).is_some() {
                    return syntax(line.number, line.tokens[1].0, "product given twice");
                }
            }
            "sub" => {
                let part = index(&line, line.arg(1, "a part number")?)?;
                let mut carrier = Vec::new();
                for &t in &line.tokens[2..] {
                    carrier.push(element(&ids, &line, t)?);
                }
                subs.push((part, carrier, line.number));
            }
            other => return syntax(line.number, line.tokens[0].0, format!("unknown directive `{other}`")),
        }
    }

    let Some(universe) = universe else {
        return syntax(1, 1, "missing `universe` line");
    };
    let mut tables = Vec::new();
    for (carrier, products, number) in parts {
        let mut table = vec![vec![0; carrier.len()]; carrier.len()];
        for (i, &a) in carrier.iter().enumerate() {
            for (j, &b) in carrier.iter().enumerate() {
                match products.get(&(a, b)) {
                    Some(&c) => table[i][j] = carrier.iter().position(|&x| x == c).expect("checked"),
                    None => {
                        return syntax(number, 1, format!("part has no row for {} {}", universe[a], universe[b]));
                    }
                }
            }
        }
        tables.push(GroupTable::new(carrier, table)?);
    }
    let group = MultiGroup::new(universe, tables)?;
    let sub = if subs.is_empty() {
        None
    } else {
        let mut carriers = vec![None; group.parts().len()];
        for (part, carrier, number) in subs {
            if part >= carriers.len() {
                return syntax(number, 5, format!("no part {part}"));
            }
            carriers[part] = Some(carrier);
        }
        Some(SubMultiGroup::new(&group, carriers)?)
    };
    Ok(MultiGroupInput { group, sub })
}

// ---------------------------------------------------------------- affine maps

/// Parses `part i: a*x+b on [lo,hi]` lines into a multi-metric space and a
/// piecewise affine self-map.
pub fn parse_affine(text: &str) -> Result<(MultiMetricSpace<f64>, AffineSelfMap<f64>), InputError> {
    let mut intervals = Vec::new();
    let mut pieces = Vec::new();
    for line in lines(text) {
        let (number, slope, offset, lo, hi) = parse_affine_line(&line)?;
        if number != intervals.len() {
            return syntax(line.number, line.tokens[1].0, format!("expected part {}", intervals.len()));
        }
        intervals.push((lo, hi));
        pieces.push((slope, offset));
    }
    if intervals.is_empty() {
        return syntax(1, 1, "no parts");
    }
    let space = MultiMetricSpace::new(intervals)?;
    let map = AffineSelfMap::new(pieces);
    Ok((space, map))
}

fn parse_affine_line(line: &Line) -> Result<(usize, f64, f64, f64, f64), InputError> {
    let text = line.text;
    let fail = |at: usize, msg: &str| syntax(line.number, text[..at].chars().count() + 1, msg.to_string());
    let body = text.trim_start();
    let mut pos = text.len() - body.len();
    let Some(rest) = body.strip_prefix("part") else {
        return fail(pos, "expected `part`");
    };
    pos += 4;
    let Some(colon) = rest.find(':') else {
        return fail(pos, "expected `part i:`");
    };
    let number: usize = match rest[..colon].trim().parse() {
        Ok(n) => n,
        Err(_) => return fail(pos, "expected a part number"),
    };
    pos += colon + 1;
    let rest = &text[pos..];
    let Some(on) = rest.find(" on ") else {
        return fail(pos, "expected `on [lo,hi]`");
    };
    let expr: String = rest[..on].chars().filter(|c| !c.is_whitespace()).collect();
    let Some((slope, offset)) = affine_expr(&expr) else {
        return fail(pos, "expected `a*x+b`");
    };
    let interval_at = pos + on + 4;
    let interval: String = text[interval_at..].chars().filter(|c| !c.is_whitespace()).collect();
    let parsed = interval
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.split_once(','))
        .and_then(|(a, b)| Some((f64::parse_scalar(a)?, f64::parse_scalar(b)?)));
    let Some((lo, hi)) = parsed else {
        return fail(interval_at, "expected `[lo,hi]`");
    };
    Ok((number, slope, offset, lo, hi))
}

/// `a*x+b`, `a*x-b`, `x+b`, `a*x`, `b` (constant) with `a`, `b` numbers or
/// ratios.
fn affine_expr(expr: &str) -> Option<(f64, f64)> {
    let Some(xpos) = expr.find('x') else {
        return Some((0.0, f64::parse_scalar(expr)?));
    };
    let coef = &expr[..xpos];
    let slope = match coef.strip_suffix('*').unwrap_or(coef) {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => f64::parse_scalar(c)?,
    };
    let tail = &expr[xpos + 1..];
    let offset = match tail.chars().next() {
        None => 0.0,
        Some('+') => f64::parse_scalar(&tail[1..])?,
        Some('-') => -f64::parse_scalar(&tail[1..])?,
        Some(_) => return None,
    };
    Some((slope, offset))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_syntax_errors_have_positions() {
        let err = parse_map("edges: x\n(x, a.x\n").unwrap_err();
        assert!(matches!(err, InputError::Syntax(SyntaxError { line: 2, .. })));
        let err = parse_map("edges: x\n(x,q.x)\n").unwrap_err();
        assert_eq!(err, InputError::Syntax(SyntaxError { line: 2, column: 4, message: "unknown flag `q.x`".into() }));
        let err = parse_map("vertices: x\n").unwrap_err();
        assert!(matches!(err, InputError::Syntax(SyntaxError { line: 1, column: 1, .. })));
        let err = parse_map("edges: x\n(x)(a.x)(b.x)\n").unwrap_err();
        assert!(matches!(err, InputError::Map(MapError::MissingFlag(_))));
    }

    #[test]
    fn map_round_trips_through_display() {
        let text = "edges: e\n(e)\n(a.e)\n(b.e)\n(ab.e)\n";
        let m = parse_map(text).unwrap();
        assert_eq!(m.to_string(), text);
        assert_eq!(parse_map(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn graph_and_blocks() {
        let g = parse_graph("vertex a\nvertex b\nvertex c\nedge a b\nedge b c\nedge b a\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (1, 0)]);
        let blocks = parse_blocks("block a b b a\nblock c b\n", &g).unwrap();
        assert_eq!(blocks, vec![vec![0, 2], vec![1]]);
        let err = parse_graph("vertex a\nedge a z\n").unwrap_err();
        assert_eq!(
            err,
            InputError::Syntax(SyntaxError { line: 2, column: 8, message: "undeclared vertex `z`".into() })
        );
        assert!(parse_blocks("block a c\n", &g).is_err());
    }

    #[test]
    fn affine_lines() {
        assert_eq!(affine_expr("1/2*x+1"), Some((0.5, 1.0)));
        assert_eq!(affine_expr("x-0.25"), Some((1.0, -0.25)));
        assert_eq!(affine_expr("0.5*x"), Some((0.5, 0.0)));
        assert_eq!(affine_expr("3"), Some((0.0, 3.0)));
        assert_eq!(affine_expr("2*y"), None);
        let (space, _) = parse_affine("part 0: 0.5*x+1 on [0,4]\npart 1: 0.5*x + 1.25 on [2, 3]\n").unwrap();
        assert_eq!(space.parts().len(), 2);
        assert!(parse_affine("part 1: x on [0,1]\n").is_err());
        assert!(parse_affine("part 0: x on 0,1\n").is_err());
    }
}
