//! graph6 and DIMACS edge-format readers and writers.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Largest order representable with the 4-byte graph6 header.
pub const GRAPH6_MAX_N: usize = 258_047;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("graph6 order {0} outside 0..={GRAPH6_MAX_N}")]
    OutOfRange(usize),
    #[error("malformed graph6 header: {0}")]
    MalformedHeader(String),
    #[error("graph6 body truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("non-printable graph6 byte {byte:#04x} at offset {position}")]
    NonPrintable { position: usize, byte: u8 },
    #[error("trailing bytes after graph6 body at offset {position}")]
    TrailingGarbage { position: usize },
    #[error("nonzero padding bits in final graph6 byte")]
    NonzeroPadding,
}

impl Graph6Error {
    /// Truncation and bad headers both count as a malformed stream.
    pub fn is_malformed(&self) -> bool {
        matches!(
            self,
            Graph6Error::MalformedHeader(_) | Graph6Error::Truncated { .. } | Graph6Error::NonzeroPadding
        )
    }
}

pub fn encode_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= GRAPH6_MAX_N {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        return Err(Graph6Error::OutOfRange(n));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

pub fn decode_graph6(input: &[u8]) -> Result<Graph, Graph6Error> {
    let input = input.strip_prefix(b">>graph6<<").unwrap_or(input);
    let mut end = input.len();
    while end > 0 && matches!(input[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    let data = &input[..end];
    if let Some(position) = data.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Graph6Error::NonPrintable {
            position,
            byte: data[position],
        });
    }
    let (n, header) = match data {
        [] => return Err(Graph6Error::MalformedHeader("empty input".into())),
        [126, 126, ..] => {
            return Err(Graph6Error::MalformedHeader(
                "8-byte order header exceeds the supported range".into(),
            ))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Graph6Error::MalformedHeader("4-byte order header cut short".into()));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
            if n <= 62 {
                return Err(Graph6Error::MalformedHeader(format!(
                    "order {n} must use the 1-byte header"
                )));
            }
            (n, 4)
        }
        [b, ..] => ((b - 63) as usize, 1),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let body = &data[header..];
    if body.len() < expected {
        return Err(Graph6Error::Truncated {
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingGarbage {
            position: header + expected,
        });
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(Graph6Error::NonzeroPadding);
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::new(n, &edges).expect("graph6 edges are in range and loop-free"))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("no problem line (p edge N M)")]
    MissingProblemLine,
    #[error("line {line}: second problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: cannot parse {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: endpoint {vertex} outside 1..={n}")]
    EndpointOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
}

/// Parses the DIMACS edge format (1-based endpoints). Repeated edges are
/// collapsed; the declared edge count is not enforced.
pub fn parse_dimacs(text: &str) -> Result<Graph, DimacsError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        let syntax = || DimacsError::Syntax {
            line,
            text: trimmed.to_string(),
        };
        let mut tok = trimmed.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(DimacsError::DuplicateProblemLine { line });
                }
                match (tok.next(), tok.next(), tok.next(), tok.next()) {
                    (Some("edge" | "col"), Some(nv), Some(m), None) => {
                        n = Some(nv.parse().map_err(|_| syntax())?);
                        m.parse::<usize>().map_err(|_| syntax())?;
                    }
                    _ => return Err(syntax()),
                }
            }
            Some("e") => {
                let nv = n.ok_or(DimacsError::MissingProblemLine)?;
                let (u, v) = match (tok.next(), tok.next(), tok.next()) {
                    (Some(u), Some(v), None) => (
                        u.parse::<usize>().map_err(|_| syntax())?,
                        v.parse::<usize>().map_err(|_| syntax())?,
                    ),
                    _ => return Err(syntax()),
                };
                for vertex in [u, v] {
                    if vertex == 0 || vertex > nv {
                        return Err(DimacsError::EndpointOutOfRange { line, vertex, n: nv });
                    }
                }
                if u == v {
                    return Err(DimacsError::Loop { line, vertex: u });
                }
                edges.push((u - 1, v - 1));
            }
            Some(_) => return Err(syntax()),
        }
    }
    let n = n.ok_or(DimacsError::MissingProblemLine)?;
    Graph::new(n, &edges).map_err(|e| match e {
        GraphError::Loop(v) => DimacsError::Loop { line: 0, vertex: v + 1 },
        _ => unreachable!("endpoints validated above"),
    })
}

pub fn write_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = String::new();
    if let Some(label) = g.label() {
        let _ = writeln!(out, "c {label}");
    }
    let _ = writeln!(out, "p edge {} {}", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paley::paley_graph;

    #[test]
    fn small_graph6_strings() {
        assert_eq!(encode_graph6(&Graph::complete(1)).unwrap(), "@");
        assert_eq!(encode_graph6(&Graph::complete(3)).unwrap(), "Bw");
        assert_eq!(encode_graph6(&Graph::empty(0)).unwrap(), "?");
        assert_eq!(decode_graph6(b"@").unwrap(), Graph::complete(1));
        assert_eq!(decode_graph6(b"Bw\n").unwrap(), Graph::complete(3));
        assert_eq!(decode_graph6(b">>graph6<<Bw").unwrap(), Graph::complete(3));
        // C5 as produced by nauty's geng
        assert_eq!(decode_graph6(b"Dhc").unwrap(), Graph::cycle(5));
    }

    #[test]
    fn long_header() {
        let g = Graph::cycle(100);
        let s = encode_graph6(&g).unwrap();
        assert!(s.starts_with("~?@c"));
        assert_eq!(decode_graph6(s.as_bytes()).unwrap(), g);
    }

    #[test]
    fn graph6_errors_are_distinct() {
        let truncated = decode_graph6(b"Dh").unwrap_err();
        assert!(matches!(truncated, Graph6Error::Truncated { expected: 2, found: 1 }));
        assert!(truncated.is_malformed());
        assert!(matches!(decode_graph6(b"Dhcx"), Err(Graph6Error::TrailingGarbage { position: 3 })));
        assert!(matches!(decode_graph6(b"D\x01c"), Err(Graph6Error::NonPrintable { position: 1, .. })));
        assert!(matches!(decode_graph6(b""), Err(Graph6Error::MalformedHeader(_))));
        assert!(matches!(decode_graph6(b"~?"), Err(Graph6Error::MalformedHeader(_))));
        assert_eq!(decode_graph6(b"Bx"), Err(Graph6Error::NonzeroPadding));
    }

    #[test]
    fn dimacs_examples() {
        let k3 = parse_dimacs("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(k3, Graph::complete(3));
        assert!(matches!(
            parse_dimacs("p edge 3 1\ne 2 2\n"),
            Err(DimacsError::Loop { line: 2, vertex: 2 })
        ));
        assert_eq!(parse_dimacs("e 1 2\n"), Err(DimacsError::MissingProblemLine));
        assert!(matches!(
            parse_dimacs("p edge 3 1\ne 1 4\n"),
            Err(DimacsError::EndpointOutOfRange { vertex: 4, .. })
        ));
        let dup = parse_dimacs("p edge 2 2\ne 1 2\ne 2 1\n").unwrap();
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn dimacs_round_trip_p13() {
        let p13 = paley_graph(13).unwrap();
        let text = write_dimacs(&p13);
        assert!(text.starts_with("c P13\np edge 13 39\ne 1 2\n"));
        assert_eq!(parse_dimacs(&text).unwrap(), p13);
    }
}
