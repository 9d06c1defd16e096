//! graph6 encoding of simple graphs.
//!
//! The order is one byte `n + 63` for `n <= 62`, otherwise `~` followed by
//! three bytes carrying 18 bits of `n`. The upper triangle follows column by
//! column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), packed big-endian into
//! 6-bit groups, zero padded, each group offset by 63.

use crate::error::Graph6Error;
use crate::graph::{Graph, MAX_VERTICES};

const BIAS: u8 = 63;

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let row = g.row(j);
        for i in 0..j {
            acc = (acc << 1) | (row >> i & 1) as u8;
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
    // Every byte lies in 63..=126.
    String::from_utf8(out).expect("graph6 output is ASCII")
}

pub fn decode(s: &str) -> Result<Graph, Graph6Error> {
    let err = |offset: usize, reason: &str| Graph6Error { offset, reason: reason.to_string() };
    let bytes = s.as_bytes();
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(err(pos, "byte outside the printable range 63..=126"));
    }
    let (n, mut pos) = match bytes.first() {
        None => return Err(err(0, "empty string")),
        Some(&126) => {
            if bytes.get(1) == Some(&126) {
                return Err(err(1, "orders above 258047 are not supported"));
            }
            if bytes.len() < 4 {
                return Err(err(bytes.len(), "truncated order field"));
            }
            let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - BIAS) as usize);
            (n, 4)
        }
        Some(&b) => ((b - BIAS) as usize, 1),
    };
    if n == 0 || n > MAX_VERTICES {
        return Err(err(0, &format!("order {n} outside 1..={MAX_VERTICES}")));
    }
    let nbits = n * (n - 1) / 2;
    let expected = pos + nbits.div_ceil(6);
    if bytes.len() != expected {
        return Err(err(bytes.len().min(expected), &format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let mut rows = vec![0u64; n];
    let mut k = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            let group = bytes[pos + k / 6] - BIAS;
            if group >> (5 - k % 6) & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
            if k == nbits {
                break 'outer;
            }
        }
    }
    if nbits % 6 != 0 {
        pos += nbits / 6;
        let pad = 6 - nbits % 6;
        if (bytes[pos] - BIAS) & ((1 << pad) - 1) != 0 {
            return Err(err(pos, "nonzero padding bits"));
        }
    }
    Ok(Graph::from_rows(rows).expect("decoded rows are symmetric"))
}

/// Parse newline-separated graph6 text, skipping blank lines and an
/// optional `>>graph6<<` header.
pub fn decode_lines(text: &str) -> Result<Vec<Graph>, (usize, Graph6Error)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim_end_matches('\r').trim_start_matches(">>graph6<<")))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| decode(l).map_err(|e| (i + 1, e)))
        .collect()
}
