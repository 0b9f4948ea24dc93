//! graph6 encoding (single-byte header, n <= 62) and DIMACS edge-format input.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const GRAPH6_MAX_N: usize = 62;

const HEADER: &[u8] = b">>graph6<<";

/// Decodes one graph6 line. A trailing newline and the optional
/// `>>graph6<<` prefix are accepted.
pub fn parse_graph6(text: &[u8]) -> Result<Graph> {
    let mut body = text;
    while let [rest @ .., b'\n' | b'\r'] = body {
        body = rest;
    }
    let skip = if body.starts_with(HEADER) { HEADER.len() } else { 0 };
    let body = &body[skip..];

    let Some(&head) = body.first() else {
        return Err(Error::parse(skip, "empty input"));
    };
    if !(63..=126).contains(&head) {
        return Err(Error::parse(skip, format!("byte {head} outside [63,126]")));
    }
    if head == 126 {
        return Err(Error::parse(skip, "multi-byte size header (n > 62) is not supported"));
    }
    let n = (head - 63) as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if body.len() != 1 + nbytes {
        return Err(Error::parse(
            skip + body.len().min(1 + nbytes),
            format!("expected {} data bytes for n = {n}, found {}", nbytes, body.len() - 1),
        ));
    }

    let mut g = Graph::new(n);
    let data = &body[1..];
    for (i, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(skip + 1 + i, format!("byte {b} outside [63,126]")));
        }
    }
    let bit = |idx: usize| (data[idx / 6] - 63) >> (5 - idx % 6) & 1 == 1;
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(idx) {
                g.add_edge(u, v);
            }
            idx += 1;
        }
    }
    for pad in nbits..nbytes * 6 {
        if bit(pad) {
            return Err(Error::parse(skip + 1 + pad / 6, "nonzero padding bits"));
        }
    }
    Ok(g)
}

/// Encodes `g` as a graph6 string (no trailing newline).
pub fn emit_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > GRAPH6_MAX_N {
        return Err(Error::UnsupportedSize(n));
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(1 + nbits.div_ceil(6));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | g.has_edge(u, v) as u8;
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
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Parses DIMACS edge format: `c` comments, one `p edge <n> <m>` line and
/// `e <u> <v>` lines with 1-indexed vertices.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut graph: Option<(Graph, usize)> = None;
    let mut seen_edges = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let at = offset;
        offset += line.len();
        let mut tok = line.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                if graph.is_some() {
                    return Err(Error::parse(at, "duplicate problem line"));
                }
                let (Some("edge" | "col"), Some(n), Some(m)) = (tok.next(), tok.next(), tok.next())
                else {
                    return Err(Error::parse(at, "expected 'p edge <n> <m>'"));
                };
                let n: usize = n.parse().map_err(|_| Error::parse(at, "bad vertex count"))?;
                let m: usize = m.parse().map_err(|_| Error::parse(at, "bad edge count"))?;
                graph = Some((Graph::new(n), m));
            }
            Some("e") => {
                let Some((g, _)) = graph.as_mut() else {
                    return Err(Error::parse(at, "edge before problem line"));
                };
                let mut endpoint = || -> Result<usize> {
                    let v: usize = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::parse(at, "bad edge line"))?;
                    if v == 0 || v > g.order() {
                        return Err(Error::parse(at, format!("vertex {v} out of range")));
                    }
                    Ok(v - 1)
                };
                let (u, v) = (endpoint()?, endpoint()?);
                if u == v {
                    return Err(Error::parse(at, "self-loop"));
                }
                g.add_edge(u, v);
                seen_edges += 1;
            }
            Some(other) => return Err(Error::parse(at, format!("unknown line type '{other}'"))),
        }
    }
    let (g, m) = graph.ok_or_else(|| Error::parse(offset, "missing problem line"))?;
    if seen_edges != m {
        return Err(Error::parse(offset, format!("header declares {m} edges, found {seen_edges}")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        assert_eq!(parse_graph6(b"C~").unwrap(), Graph::complete(4));
        assert_eq!(parse_graph6(b"Cl").unwrap(), Graph::cycle(4));
        assert_eq!(parse_graph6(b"@").unwrap(), Graph::new(1));
        assert_eq!(parse_graph6(b"?").unwrap(), Graph::new(0));
        assert_eq!(emit_graph6(&Graph::complete(4)).unwrap(), "C~");
        assert_eq!(emit_graph6(&Graph::new(1)).unwrap(), "@");
        assert_eq!(emit_graph6(&Graph::cycle(4)).unwrap(), "Cl");
        let p = emit_graph6(&Graph::petersen()).unwrap();
        assert_eq!(parse_graph6(p.as_bytes()).unwrap(), Graph::petersen());
    }

    #[test]
    fn header_and_newline() {
        assert_eq!(parse_graph6(b">>graph6<<C~\n").unwrap(), Graph::complete(4));
    }

    #[test]
    fn errors_carry_offsets() {
        let Error::Parse { offset, .. } = parse_graph6(b"C~~").unwrap_err() else { panic!() };
        assert_eq!(offset, 2);
        let Error::Parse { offset, .. } = parse_graph6(b"C ").unwrap_err() else { panic!() };
        assert_eq!(offset, 1);
        // n = 2 has one data bit; 'A' + 1 sets a padding bit
        let Error::Parse { offset, .. } = parse_graph6(b"A`").unwrap_err() else { panic!() };
        assert_eq!(offset, 1);
        assert!(parse_graph6(b"A_").is_ok());
        assert!(parse_graph6(b"").is_err());
        assert!(parse_graph6(b"~?").is_err());
        assert_eq!(emit_graph6(&Graph::new(63)), Err(Error::UnsupportedSize(63)));
    }

    #[test]
    fn dimacs() {
        let g = parse_dimacs("c square\np edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n").unwrap();
        assert_eq!(g, Graph::cycle(4));
        assert!(parse_dimacs("p edge 3 1\ne 1 4\n").is_err());
        assert!(parse_dimacs("p edge 3 2\ne 1 2\n").is_err());
        assert!(parse_dimacs("e 1 2\n").is_err());
    }
}
