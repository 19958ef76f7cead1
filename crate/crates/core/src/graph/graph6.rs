//! graph6 text encoding.
//!
//! Layout: a size header `N(n)` followed by the upper triangle of the adjacency
//! matrix read column by column, `x(0,1) x(0,2) x(1,2) x(0,3) ...`, packed six
//! bits per byte (most significant first) and offset by 63. The final group is
//! zero padded.

use super::{Graph, GraphError};

const BIAS: u8 = 63;
const MAX_N: u64 = (1 << 36) - 1;

fn err(msg: impl Into<String>) -> GraphError {
    GraphError::Graph6(msg.into())
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    let n = n as u64;
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    }
}

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
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
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn decode_size(bytes: &[u8]) -> Result<(u64, usize), GraphError> {
    let six = |k: usize| -> Result<u64, GraphError> {
        bytes
            .get(k)
            .map(|&b| (b - BIAS) as u64)
            .ok_or_else(|| err("truncated size header"))
    };
    match bytes.first() {
        None => Err(err("empty input")),
        Some(&b) if b < 126 => Ok(((b - BIAS) as u64, 1)),
        Some(_) if bytes.get(1) == Some(&126) => {
            let n = (2..8).try_fold(0u64, |acc, k| Ok::<_, GraphError>((acc << 6) | six(k)?))?;
            if n <= 258_047 {
                return Err(err("non-canonical 8-byte size header"));
            }
            Ok((n, 8))
        }
        Some(_) => {
            let n = (1..4).try_fold(0u64, |acc, k| Ok::<_, GraphError>((acc << 6) | six(k)?))?;
            if n <= 62 {
                return Err(err("non-canonical 4-byte size header"));
            }
            Ok((n, 4))
        }
    }
}

/// Decodes one graph6 line. An optional `>>graph6<<` prefix and surrounding
/// whitespace are ignored.
pub fn decode(line: &str) -> Result<Graph, GraphError> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(err(format!("byte {b} outside 63..=126")));
    }
    let (n, header) = decode_size(bytes)?;
    if n == 0 {
        return Err(err("zero vertices"));
    }
    if n > MAX_N {
        return Err(err("vertex count too large"));
    }
    let body = &bytes[header..];
    let pairs = n
        .checked_mul(n - 1)
        .map(|p| p / 2)
        .ok_or_else(|| err("vertex count too large"))?;
    let expected = pairs.div_ceil(6);
    if body.len() as u64 != expected {
        return Err(err(format!(
            "expected {expected} body bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let n = n as usize;
    let mut g = Graph::empty(n)?;
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - BIAS;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.insert_edge(i, j);
            }
            k += 1;
        }
    }
    let pad = (6 - pairs % 6) % 6;
    if pad > 0 {
        let last = body[body.len() - 1] - BIAS;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(err("nonzero padding bits"));
        }
    }
    Ok(g)
}

/// Decodes a newline-delimited corpus, skipping blank lines. Errors carry the
/// 1-based line number.
pub fn decode_corpus(text: &str) -> Result<Vec<Graph>, GraphError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| decode(l).map_err(|e| err(format!("line {}: {e}", i + 1))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_encoded_small_graphs() {
        // K3: bits 111 padded to 111000 = 56, 56 + 63 = 'w'.
        let k3 = decode("Bw").unwrap();
        assert_eq!(k3, Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap());
        // P3 0-1-2: x(0,1)=1 x(0,2)=0 x(1,2)=1 -> 101000 = 40 -> 'g'.
        let p3 = decode("Bg").unwrap();
        assert_eq!(p3, Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap());
        assert_eq!(encode(&k3), "Bw");
        assert_eq!(encode(&p3), "Bg");
        assert_eq!(encode(&Graph::empty(1).unwrap()), "@");
        assert_eq!(decode("@").unwrap().order(), 1);
    }

    #[test]
    fn matches_reference_string() {
        // Five vertices, edges a-c a-e b-d d-e.
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode(&g), "DQc");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(decode("").is_err());
        assert!(decode("B").is_err(), "missing body");
        assert!(decode("Bww").is_err(), "extra body");
        assert!(decode("Bx").is_err(), "nonzero padding");
        assert!(decode("B\u{7f}").is_err());
        assert!(decode("B ").is_err());
        assert!(decode("~??@").is_err(), "non-canonical long header");
    }

    #[test]
    fn long_header_round_trip() {
        let edges: Vec<_> = (0..69).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(70, &edges).unwrap();
        let s = encode(&g);
        assert!(s.starts_with('~'));
        assert_eq!(decode(&s).unwrap(), g);
    }

    #[test]
    fn corpus_reports_line_numbers() {
        let e = decode_corpus("Bw\n\nB?x\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }
}
