//! Text formats: graph6 and a plain edge list.
//!
//! The edge-list format is a header line `n <count>` followed by one `u v` pair per line.
//! Blank lines and lines starting with `#` are ignored. Endpoints are either all vertex
//! indices in `0..n`, or all names; names are numbered in order of first appearance and
//! kept as vertex labels.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Graph6,
    EdgeList,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph6" | "g6" => Ok(Format::Graph6),
            "edgelist" | "edge-list" => Ok(Format::EdgeList),
            other => Err(Error::Validation(format!("unknown graph format '{other}'"))),
        }
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph> {
    match format {
        Format::Graph6 => {
            let mut graphs = parse_graph6_catalog(text)?;
            match graphs.len() {
                1 => Ok(graphs.pop().unwrap()),
                0 => Err(Error::parse(1, 0, "no graph6 record found")),
                k => Err(Error::parse(
                    1,
                    0,
                    format!("expected one graph6 record, found {k}"),
                )),
            }
        }
        Format::EdgeList => parse_edge_list(text),
    }
}

pub fn serialize_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Graph6 => to_graph6(g),
        Format::EdgeList => to_edge_list(g),
    }
}

/// One graph per non-empty line, as in published graph6 catalogs.
pub fn parse_graph6_catalog(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_graph6_line(l.trim_end(), i + 1))
        .collect()
}

const HEADER: &str = ">>graph6<<";

fn parse_graph6_line(line: &str, line_no: usize) -> Result<Graph> {
    let (offset, body) = match line.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest.as_bytes()),
        None => (0, line.as_bytes()),
    };
    let err = |pos: usize, msg: String| Error::parse(line_no, offset + pos, msg);
    for (pos, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(
                pos,
                format!("byte 0x{b:02x} outside the graph6 range 63..=126"),
            ));
        }
    }
    let sextet = |pos: usize| -> Result<u64> {
        body.get(pos)
            .map(|&b| u64::from(b - 63))
            .ok_or_else(|| err(pos, "truncated vertex count".into()))
    };
    let (n, mut pos) = match body.first() {
        None => return Err(err(0, "empty graph6 record".into())),
        Some(126) if body.get(1) == Some(&126) => {
            let mut n = 0u64;
            for k in 2..8 {
                n = (n << 6) | sextet(k)?;
            }
            (n, 8)
        }
        Some(126) => {
            let mut n = 0u64;
            for k in 1..4 {
                n = (n << 6) | sextet(k)?;
            }
            (n, 4)
        }
        Some(&b) => (u64::from(b - 63), 1),
    };
    let n = usize::try_from(n).map_err(|_| err(0, "vertex count overflows".into()))?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = pos + bits.div_ceil(6);
    if body.len() != expected {
        return Err(err(
            body.len().min(expected),
            format!(
                "expected {expected} bytes for {n} vertices, found {}",
                body.len()
            ),
        ));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    'outer: for v in 1..n {
        for u in 0..v {
            let byte = body[pos] - 63;
            let bit = (byte >> (5 - k % 6)) & 1;
            if bit == 1 {
                g.set_edge(u, v, true);
            }
            k += 1;
            if k % 6 == 0 {
                pos += 1;
                if k == bits {
                    break 'outer;
                }
            }
        }
    }
    if bits % 6 != 0 {
        let pad_mask = (1u8 << (6 - bits % 6)) - 1;
        if (body[pos] - 63) & pad_mask != 0 {
            return Err(err(pos, "non-zero padding bits".into()));
        }
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n as u64 >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.h(u, v);
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 0, "missing 'n <count>' header"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|e| Error::parse(header_no, column(header, count), e.to_string()))?,
        _ => return Err(Error::parse(header_no, 0, "expected header 'n <count>'")),
    };

    let mut pairs: Vec<(usize, &str, &str, &str)> = Vec::new();
    for (no, line) in lines {
        match line.split_whitespace().collect::<Vec<_>>()[..] {
            [u, v] => pairs.push((no, line, u, v)),
            _ => return Err(Error::parse(no, 0, "expected 'u v'")),
        }
    }

    let numeric = pairs
        .iter()
        .all(|(_, _, u, v)| u.parse::<usize>().is_ok() && v.parse::<usize>().is_ok());
    let mut g = Graph::empty(n);
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    for &(no, line, u, v) in &pairs {
        let mut endpoint = |tok: &str| -> Result<usize> {
            if numeric {
                let x: usize = tok.parse().expect("checked numeric");
                if x >= n {
                    return Err(Error::parse(
                        no,
                        column(line, tok),
                        format!("vertex {x} >= n = {n}"),
                    ));
                }
                return Ok(x);
            }
            if let Some(&x) = names.get(tok) {
                return Ok(x);
            }
            if labels.len() == n {
                return Err(Error::parse(
                    no,
                    column(line, tok),
                    format!("more than {n} distinct vertex names"),
                ));
            }
            names.insert(tok.to_string(), labels.len());
            labels.push(tok.to_string());
            Ok(labels.len() - 1)
        };
        let (a, b) = (endpoint(u)?, endpoint(v)?);
        if a == b {
            return Err(Error::Validation(format!("loop at vertex {u} (line {no})")));
        }
        g.set_edge(a, b, true);
    }
    if numeric {
        return Ok(g);
    }
    while labels.len() < n {
        labels.push(format!("_{}", labels.len()));
    }
    g.with_labels(labels)
}

fn column(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.order());
    for (u, v) in g.edges() {
        if g.labels().is_some() {
            writeln!(out, "{} {}", g.label(u), g.label(v)).unwrap();
        } else {
            writeln!(out, "{u} {v}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_path() {
        let g = parse_graph("n 3\n0 1\n1 2", Format::EdgeList).unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn edge_list_loop_is_rejected() {
        let e = parse_graph("n 2\n0 0", Format::EdgeList).unwrap_err();
        assert!(matches!(e, Error::Validation(_)), "{e}");
    }

    #[test]
    fn edge_list_errors_name_the_line() {
        let e = parse_graph("n 3\n0 1\n1 7\n", Format::EdgeList).unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 3,
                byte: 2,
                message: "vertex 7 >= n = 3".into()
            }
        );
        assert!(matches!(
            parse_graph("3\n0 1", Format::EdgeList),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("n 3\n0 1 2", Format::EdgeList),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn edge_list_names_become_labels() {
        let g = parse_graph("# triangle\nn 4\na b\nb c\nc a\n", Format::EdgeList).unwrap();
        assert_eq!(g, Graph::complete(3).disjoint_union(&Graph::empty(1)));
        assert_eq!(g.labels().unwrap(), ["a", "b", "c", "_3"]);
        assert_eq!(
            parse_graph(&to_edge_list(&g), Format::EdgeList)
                .unwrap()
                .labels(),
            g.labels()
        );
    }

    #[test]
    fn graph6_star() {
        // 'D' = 5 vertices; "?{" = 000000 111100: edges {0,4},{1,4},{2,4},{3,4}
        let g = parse_graph("D?{", Format::Graph6).unwrap();
        assert_eq!(g, Graph::star(5, 4));
        assert_eq!(to_graph6(&g), "D?{");
    }

    #[test]
    fn graph6_known_strings() {
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
        assert_eq!(to_graph6(&Graph::empty(1)), "@");
        assert_eq!(to_graph6(&Graph::complete(2)), "A_");
        assert_eq!(to_graph6(&Graph::complete(3)), "Bw");
        assert_eq!(
            parse_graph(">>graph6<<Bw\n", Format::Graph6).unwrap(),
            Graph::complete(3)
        );
    }

    #[test]
    fn graph6_large_header() {
        let g = Graph::cycle(70);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph(&s, Format::Graph6).unwrap(), g);
    }

    #[test]
    fn graph6_malformed() {
        assert!(matches!(
            parse_graph("D?", Format::Graph6),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_graph("D?{?", Format::Graph6),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_graph("D? {", Format::Graph6),
            Err(Error::Parse { byte: 2, .. })
        ));
        // K3 needs 3 bits; "Bx" sets a padding bit
        assert!(matches!(
            parse_graph("Bx", Format::Graph6),
            Err(Error::Parse { .. })
        ));
        assert!(parse_graph("Bw\nBw", Format::Graph6).is_err());
    }
}
