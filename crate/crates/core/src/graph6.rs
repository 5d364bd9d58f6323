//! graph6 encoding: size header followed by the upper triangle of the
//! adjacency matrix, column by column, packed six bits per printable byte.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::{Graph, VertexSet, MAX_VERTICES};

const BIAS: u8 = 63;
const LONG_HEADER: u8 = 126;
const FILE_HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidByte { byte: u8, offset: usize },
    #[error("graph6 header declares {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("unsupported graph6 size header")]
    MalformedHeader,
    #[error("graph6 payload has {got} bytes, {expected} expected for {n} vertices")]
    Truncated { n: usize, expected: usize, got: usize },
    #[error("graph6 payload has {got} bytes, only {expected} expected for {n} vertices")]
    TrailingData { n: usize, expected: usize, got: usize },
}

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Encodes `g` as a graph6 string (no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + payload_len(n));
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else {
        out.push(LONG_HEADER);
        out.extend([(n >> 12) as u8 & 0x3f, (n >> 6) as u8 & 0x3f, n as u8 & 0x3f].map(|b| b + BIAS));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let col = g.neighbors(j);
        for i in 0..j {
            acc = acc << 1 | col.contains(i) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    // every byte lies in 63..=126
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Decodes one graph6 string. Surrounding whitespace and an optional
/// `>>graph6<<` prefix are ignored.
pub fn from_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.trim();
    let text = text.strip_prefix(FILE_HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some((offset, &byte)) = bytes
        .iter()
        .enumerate()
        .find(|(_, &b)| !(BIAS..=LONG_HEADER).contains(&b))
    {
        return Err(Graph6Error::InvalidByte { byte, offset });
    }
    let (n, body) = if bytes[0] != LONG_HEADER {
        ((bytes[0] - BIAS) as usize, &bytes[1..])
    } else {
        if bytes.len() < 4 || bytes[1] == LONG_HEADER {
            return Err(Graph6Error::MalformedHeader);
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| acc << 6 | (b - BIAS) as usize);
        (n, &bytes[4..])
    };
    if n > MAX_VERTICES {
        return Err(Graph6Error::TooManyVertices(n));
    }
    let expected = payload_len(n);
    if body.len() < expected {
        return Err(Graph6Error::Truncated {
            n,
            expected,
            got: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingData {
            n,
            expected,
            got: body.len(),
        });
    }
    let mut rows = vec![VertexSet::EMPTY; n];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[bit / 6] - BIAS;
            if byte >> (5 - bit % 6) & 1 == 1 {
                rows[i].insert(j);
                rows[j].insert(i);
            }
            bit += 1;
        }
    }
    Ok(Graph::from_rows(rows).expect("decoded rows are symmetric and loop-free"))
}

/// Reads newline-separated graph6 strings, skipping blank lines.
pub fn read_graph6_lines<R: BufRead>(reader: R) -> impl Iterator<Item = io::Result<Result<Graph, Graph6Error>>> {
    reader.lines().filter_map(|line| match line {
        Ok(l) if l.trim().is_empty() => None,
        Ok(l) => Some(Ok(from_graph6(&l))),
        Err(e) => Some(Err(e)),
    })
}

/// Writes one graph6 string per line.
pub fn write_graph6_lines<'a, W, I>(mut out: W, graphs: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a Graph>,
{
    for g in graphs {
        writeln!(out, "{}", to_graph6(g))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family;

    #[test]
    fn small_known_encodings() {
        let k2 = family::complete(2).unwrap();
        let k3 = family::complete(3).unwrap();
        let k1 = Graph::empty(1).unwrap();
        assert_eq!(to_graph6(&k2), "A_");
        assert_eq!(to_graph6(&k3), "Bw");
        assert_eq!(to_graph6(&k1), "@");
        assert_eq!(to_graph6(&Graph::empty(0).unwrap()), "?");
        assert_eq!(from_graph6("A_").unwrap(), k2);
        assert_eq!(from_graph6("Bw").unwrap(), k3);
        let g = from_graph6("@").unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
    }

    #[test]
    fn reference_strings() {
        // petgraph's fixture: edges a-c, a-e, b-d, d-e on five vertices
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
        // nauty's documented example
        let g = from_graph6("DQc").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2), (0, 4), (1, 3), (3, 4)]);
        assert_eq!(to_graph6(&family::cycle(5).unwrap()), "Dhc");
        assert_eq!(to_graph6(&family::complete(4).unwrap()), "C~");
    }

    #[test]
    fn long_header_for_63_and_64() {
        for n in [63, 64] {
            let g = family::path(n).unwrap();
            let s = to_graph6(&g);
            assert!(s.starts_with('~'));
            assert_eq!(s.len(), 4 + payload_len(n));
            assert_eq!(from_graph6(&s).unwrap(), g);
        }
    }

    #[test]
    fn decode_errors() {
        assert_eq!(from_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(from_graph6("  \n"), Err(Graph6Error::Empty));
        assert!(matches!(from_graph6("B"), Err(Graph6Error::Truncated { n: 3, .. })));
        assert!(matches!(from_graph6("Bww"), Err(Graph6Error::TrailingData { .. })));
        assert!(matches!(
            from_graph6("B w"),
            Err(Graph6Error::InvalidByte { offset: 1, .. })
        ));
        assert_eq!(from_graph6("~"), Err(Graph6Error::MalformedHeader));
        assert_eq!(from_graph6("~~"), Err(Graph6Error::MalformedHeader));
        // n = 65 via long header
        assert_eq!(from_graph6("~?@@"), Err(Graph6Error::TooManyVertices(65)));
    }

    #[test]
    fn file_prefix_and_lines() {
        assert_eq!(from_graph6(">>graph6<<A_\n").unwrap().m(), 1);
        let input = b"A_\n\nBw\n";
        let gs: Vec<_> = read_graph6_lines(&input[..]).map(|r| r.unwrap().unwrap()).collect();
        assert_eq!(gs.len(), 2);
        let mut buf = Vec::new();
        write_graph6_lines(&mut buf, &gs).unwrap();
        assert_eq!(buf, b"A_\nBw\n");
    }
}
