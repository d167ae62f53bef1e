//! graph6 text encoding.
//!
//! One graph per line: a size header followed by the upper triangle of the
//! adjacency matrix in column order `x(0,1), x(0,2), x(1,2), x(0,3), …`,
//! packed six bits per byte and offset by 63. The optional `>>graph6<<`
//! prefix is accepted on input and never written.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_NODES};

const HEADER: &str = ">>graph6<<";
const BIAS: u8 = 63;

pub fn encode(g: &Graph) -> Result<String> {
    if g.has_self_loops() {
        return Err(Error::Unsupported("graph6 cannot encode self-loops".into()));
    }
    let n = g.n();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else {
        out.push(126);
        out.extend([(n >> 12) & 0x3f, (n >> 6) & 0x3f, n & 0x3f].map(|b| b as u8 + BIAS));
    }
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = chunk << 1 | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(chunk + BIAS);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + BIAS);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}

pub fn decode(text: &str) -> Result<Graph> {
    let line = text.trim();
    let line = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Graph6("empty line".into()));
    }
    match bytes[0] {
        b':' | b';' => return Err(Error::Graph6("sparse6 is not supported".into())),
        b'&' => return Err(Error::Graph6("digraph6 is not supported".into())),
        _ => {}
    }
    if let Some(pos) = bytes.iter().position(|b| !(BIAS..=126).contains(b)) {
        return Err(Error::Graph6(format!("invalid byte {:#04x} at offset {pos}", bytes[pos])));
    }
    let (n, body) = if bytes[0] != 126 {
        ((bytes[0] - BIAS) as usize, &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        return Err(Error::Graph6(format!("node count exceeds the supported maximum of {MAX_NODES}")));
    } else if bytes.len() >= 4 {
        let n = bytes[1..4].iter().fold(0usize, |acc, &b| acc << 6 | (b - BIAS) as usize);
        (n, &bytes[4..])
    } else {
        return Err(Error::Graph6("truncated size header".into()));
    };
    if n == 0 {
        return Err(Error::Graph6("graphs with zero nodes are not supported".into()));
    }
    if n > MAX_NODES {
        return Err(Error::Graph6(format!("{n} nodes exceeds the supported maximum of {MAX_NODES}")));
    }
    let expected = (n * (n - 1) / 2).div_ceil(6);
    if body.len() != expected {
        return Err(Error::Graph6(format!(
            "expected {expected} data bytes for {n} nodes, found {}",
            body.len()
        )));
    }
    let mut g = Graph::empty(n, false)?;
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[bit / 6] - BIAS;
            if byte >> (5 - bit % 6) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            bit += 1;
        }
    }
    Ok(g)
}

/// Decodes every non-blank line, reporting the 1-based line number of the first failure.
pub fn decode_lines(text: &str) -> std::result::Result<Vec<Graph>, (usize, Error)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| decode(l).map_err(|e| (i + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node() {
        let g = Graph::empty(1, false).unwrap();
        assert_eq!(encode(&g).unwrap(), "@");
        assert_eq!(decode("@").unwrap(), g);
    }

    #[test]
    fn triangle_matches_reference() {
        let g = Graph::complete(3, false).unwrap();
        assert_eq!(encode(&g).unwrap(), "Bw");
    }

    #[test]
    fn five_node_reference_string() {
        // A-C, A-E, B-D, D-E
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode(&g).unwrap(), "DQc");
        assert_eq!(decode("DQc").unwrap(), g);
    }

    #[test]
    fn header_and_whitespace_tolerated() {
        assert_eq!(decode(">>graph6<<Bw\n").unwrap(), Graph::complete(3, false).unwrap());
    }

    #[test]
    fn long_header_for_large_n() {
        let g = Graph::path(63).unwrap();
        let text = encode(&g).unwrap();
        assert!(text.starts_with("~??~"));
        assert_eq!(decode(&text).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(decode("").is_err());
        assert!(decode("Bww").is_err());
        assert!(decode("B").is_err());
        assert!(decode(":Fa@x^").is_err());
        assert!(decode("B\x01").is_err());
        assert!(decode("~~??????").is_err());
        assert!(decode("~?A?").is_err());
        let mut g = Graph::empty(2, true).unwrap();
        g.add_edge(1, 1).unwrap();
        assert!(encode(&g).is_err());
    }

    #[test]
    fn decode_lines_reports_offending_line() {
        let err = decode_lines("Bw\n\nB?\nzz\n").unwrap_err();
        assert_eq!(err.0, 4);
    }
}
