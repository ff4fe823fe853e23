//! Text formats. All ids are 0-based, fields are separated by single spaces
//! and lines end with LF. Writers emit a canonical form, so parsing a
//! written file and writing it again reproduces the same bytes.
//!
//! Graph: `p fvs <n> <m>` followed by `e <u> <v>` lines with `u < v`, sorted.
//!
//! Objects: `p objects <n> <alpha> <gamma>` followed by
//! `o <shape> <x> <y> <inner_r> <outer_r>` lines.
//!
//! Decomposition: `s td <bags> <max_bag> <n>`, then `b <id> <v>...` per bag
//! and `<i> <j>` per tree edge.
//!
//! Lines starting with `c` are comments in every format.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{FatObject, ObjectSet, Shape};
use crate::graph::Graph;
use crate::td::TreeDecomposition;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

fn field<T: FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

fn no_more<'a>(line: usize, mut toks: impl Iterator<Item = &'a str>) -> Result<()> {
    match toks.next() {
        Some(t) => Err(perr(line, format!("unexpected token `{t}`"))),
        None => Ok(()),
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p fvs {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| perr(1, "missing `p fvs` header"))?;
    let mut toks = header.split(' ');
    if toks.next() != Some("p") || toks.next() != Some("fvs") {
        return Err(perr(ln, "expected `p fvs <n> <m>`"));
    }
    let n: usize = field(ln, toks.next(), "vertex count")?;
    let m: usize = field(ln, toks.next(), "edge count")?;
    no_more(ln, toks)?;
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut toks = line.split(' ');
        if toks.next() != Some("e") {
            return Err(perr(ln, "expected `e <u> <v>`"));
        }
        let u: usize = field(ln, toks.next(), "endpoint")?;
        let v: usize = field(ln, toks.next(), "endpoint")?;
        no_more(ln, toks)?;
        if u >= n || v >= n {
            return Err(perr(ln, format!("edge ({u},{v}) out of range for n={n}")));
        }
        if u == v {
            return Err(perr(ln, format!("self-loop at {u}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(perr(ln, format!("header announces {m} edges, found {}", edges.len())));
    }
    let g = Graph::from_edge_list(n, &edges)?;
    if g.m() != m {
        return Err(perr(ln, "duplicate edges"));
    }
    Ok(g)
}

pub fn write_objects(set: &ObjectSet) -> String {
    let mut out = format!("p objects {} {} {}\n", set.len(), set.alpha(), set.gamma());
    for o in set.objects() {
        writeln!(out, "o {} {} {} {} {}", o.shape, o.center.0, o.center.1, o.inner_radius, o.outer_radius).unwrap();
    }
    out
}

pub fn parse_objects(text: &str) -> Result<ObjectSet> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| perr(1, "missing `p objects` header"))?;
    let mut toks = header.split(' ');
    if toks.next() != Some("p") || toks.next() != Some("objects") {
        return Err(perr(ln, "expected `p objects <n> <alpha> <gamma>`"));
    }
    let n: usize = field(ln, toks.next(), "object count")?;
    let alpha: f64 = field(ln, toks.next(), "alpha")?;
    let gamma: f64 = field(ln, toks.next(), "gamma")?;
    no_more(ln, toks)?;
    let mut objects = Vec::with_capacity(n);
    for (ln, line) in lines {
        let mut toks = line.split(' ');
        if toks.next() != Some("o") {
            return Err(perr(ln, "expected `o <shape> <x> <y> <inner_r> <outer_r>`"));
        }
        let shape: Shape = field(ln, toks.next(), "shape")?;
        let x: f64 = field(ln, toks.next(), "x")?;
        let y: f64 = field(ln, toks.next(), "y")?;
        let inner_radius: f64 = field(ln, toks.next(), "inner radius")?;
        let outer_radius: f64 = field(ln, toks.next(), "outer radius")?;
        no_more(ln, toks)?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(perr(ln, "coordinates must be finite"));
        }
        objects.push(FatObject { center: (x, y), inner_radius, outer_radius, shape });
    }
    if objects.len() != n {
        return Err(perr(ln, format!("header announces {n} objects, found {}", objects.len())));
    }
    ObjectSet::new(objects, alpha, gamma)
}

/// Writes a decomposition of a graph on `n` vertices.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.len(), td.max_bag_size(), n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str("b ");
        out.push_str(&i.to_string());
        for v in bag {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for (a, b) in td.edges() {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

/// Parses a decomposition; returns it with the announced vertex count.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| perr(1, "missing `s td` header"))?;
    let mut toks = header.split(' ');
    if toks.next() != Some("s") || toks.next() != Some("td") {
        return Err(perr(ln, "expected `s td <bags> <max_bag> <n>`"));
    }
    let nbags: usize = field(ln, toks.next(), "bag count")?;
    let max_bag: usize = field(ln, toks.next(), "max bag size")?;
    let n: usize = field(ln, toks.next(), "vertex count")?;
    no_more(ln, toks)?;
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; nbags];
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let mut toks = line.split(' ');
        let first = toks.next().unwrap_or_default();
        if first == "b" {
            let id: usize = field(ln, toks.next(), "bag id")?;
            if id >= nbags {
                return Err(perr(ln, format!("bag id {id} out of range")));
            }
            if bags[id].is_some() {
                return Err(perr(ln, format!("bag {id} given twice")));
            }
            let mut bag = Vec::new();
            for t in toks {
                let v: usize = field(ln, Some(t), "vertex")?;
                if v >= n {
                    return Err(perr(ln, format!("vertex {v} out of range for n={n}")));
                }
                bag.push(v);
            }
            bags[id] = Some(bag);
        } else {
            let a: usize = field(ln, Some(first), "bag id")?;
            let b: usize = field(ln, toks.next(), "bag id")?;
            no_more(ln, toks)?;
            edges.push((a, b));
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| perr(ln, format!("bag {i} missing"))))
        .collect::<Result<_>>()?;
    let td = TreeDecomposition::new(bags, &edges).map_err(|e| perr(ln, e.to_string()))?;
    if td.max_bag_size() != max_bag {
        return Err(perr(ln, format!("header announces max bag {max_bag}, found {}", td.max_bag_size())));
    }
    Ok((td, n))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_objects(path: &Path) -> Result<ObjectSet> {
    parse_objects(&std::fs::read_to_string(path)?)
}

pub fn read_td(path: &Path) -> Result<(TreeDecomposition, usize)> {
    parse_td(&std::fs::read_to_string(path)?)
}

/// Whether a file starts with an objects header rather than a graph header.
pub fn looks_like_objects(text: &str) -> bool {
    content_lines(text).next().is_some_and(|(_, l)| l.starts_with("p objects"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::random_udg;

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edge_list(4, &[(3, 0), (1, 2), (0, 1)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "p fvs 4 3\ne 0 1\ne 0 3\ne 1 2\n");
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn comments_and_unsorted_input() {
        let g = parse_graph("c hello\np fvs 3 2\nc mid\ne 2 1\ne 0 2\n").unwrap();
        assert_eq!(write_graph(&g), "p fvs 3 2\ne 0 2\ne 1 2\n");
    }

    #[test]
    fn graph_errors_carry_lines() {
        let cases = [
            ("p fvs 2 1\ne 0 2\n", 2),
            ("p fvs 2 1\ne 1 1\n", 2),
            ("p fvs 2 2\ne 0 1\n", 1),
            ("p fvs 3 2\ne 0 1\ne 1 0\n", 1),
            ("p edge 2 1\n", 1),
            ("p fvs 2 1\ne 0 x\n", 2),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn empty_graph() {
        let g = parse_graph("p fvs 0 0\n").unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(write_graph(&g), "p fvs 0 0\n");
    }

    #[test]
    fn objects_round_trip() {
        let set = random_udg(25, 0.3, 11).unwrap();
        let text = write_objects(&set);
        let back = parse_objects(&text).unwrap();
        assert_eq!(back.objects(), set.objects());
        assert_eq!(write_objects(&back), text);
        assert!(looks_like_objects(&text));
        assert!(!looks_like_objects("p fvs 1 0\n"));
    }

    #[test]
    fn mixed_shapes_round_trip() {
        let set = ObjectSet::new(vec![FatObject::disk(0.0, 0.0, 0.5), FatObject::square(1.25, -0.5, 0.5)], 0.7, 1.5)
            .unwrap();
        let text = write_objects(&set);
        assert_eq!(write_objects(&parse_objects(&text).unwrap()), text);
    }

    #[test]
    fn objects_rejects_bad_shape() {
        let text = "p objects 1 1 1\no triangle 0 0 0.5 0.5\n";
        assert!(matches!(parse_objects(text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn td_round_trip() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2, 3]], &[(0, 1), (1, 2)]).unwrap();
        let text = write_td(&td, 4);
        assert_eq!(text, "s td 3 2 4\nb 0 0 1\nb 1 1 2\nb 2 2 3\n0 1\n1 2\n");
        let (back, n) = parse_td(&text).unwrap();
        assert_eq!(n, 4);
        assert_eq!(back, td);
        assert_eq!(write_td(&back, n), text);
    }

    #[test]
    fn td_errors() {
        assert!(parse_td("s td 2 1 2\nb 0 0\nb 1 1\n").is_err()); // not a tree
        assert!(parse_td("s td 1 1 1\nb 0 5\n").is_err());
        assert!(parse_td("s td 1 2 2\nb 0 0 1\nb 0 1\n").is_err());
        assert!(parse_td("s td 1 3 2\nb 0 0 1\n").is_err());
    }
}
