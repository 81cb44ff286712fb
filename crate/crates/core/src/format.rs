//! Text serializations.
//!
//! Full form:
//!
//! ```text
//! MATROID n=3 r=2
//! bases=0,1;0,2;1,2
//! ```
//!
//! Compact form: `<n> <r> <bits>`, one character per `r`-subset in revlex
//! order, `1` marking a basis. The parser picks the form from the first token.

use crate::error::{MatroidError, Result};
use crate::mask::{binomial, revlex_rank, revlex_subsets, SubsetMask, MAX_ELEMENTS};
use crate::matroid::Matroid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatroidFormat {
    Full,
    Compact,
}

/// `0,2,5` for a nonempty set, `-` for the empty set.
pub fn format_set(a: SubsetMask) -> String {
    if a.is_empty() {
        return "-".to_string();
    }
    a.elements()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `format_set` output; elements must be below `n`.
pub fn parse_set(text: &str, n: usize) -> Result<SubsetMask> {
    parse_set_at(text.trim(), n, 1, 1)
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> MatroidError {
    MatroidError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_set_at(text: &str, n: usize, line: usize, column: usize) -> Result<SubsetMask> {
    if text == "-" {
        return Ok(SubsetMask::EMPTY);
    }
    let mut out = SubsetMask::EMPTY;
    let mut col = column;
    for part in text.split(',') {
        let e: usize = part
            .parse()
            .map_err(|_| parse_error(line, col, format!("expected an element index, found `{part}`")))?;
        if e >= n {
            return Err(parse_error(
                line,
                col,
                format!("element {e} outside ground set of size {n}"),
            ));
        }
        out = out.with(e);
        col += part.len() + 1;
    }
    Ok(out)
}

impl std::fmt::Display for Matroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&to_full(self))
    }
}

pub fn to_full(m: &Matroid) -> String {
    let bases: Vec<String> = m.bases().iter().map(|&b| format_set(b)).collect();
    format!("MATROID n={} r={}\nbases={}\n", m.n(), m.rank(), bases.join(";"))
}

/// The revlex 0/1 basis string.
pub fn basis_bits(m: &Matroid) -> String {
    let mut bits = vec![b'0'; binomial(m.n(), m.rank())];
    for &b in m.bases() {
        bits[revlex_rank(b)] = b'1';
    }
    String::from_utf8(bits).expect("ascii")
}

pub fn to_compact(m: &Matroid) -> String {
    format!("{} {} {}\n", m.n(), m.rank(), basis_bits(m))
}

pub fn write_matroid(m: &Matroid, format: MatroidFormat) -> String {
    match format {
        MatroidFormat::Full => to_full(m),
        MatroidFormat::Compact => to_compact(m),
    }
}

/// Builds a matroid from its revlex basis string.
pub fn from_basis_bits(n: usize, r: usize, bits: &str) -> Result<Matroid> {
    if n > MAX_ELEMENTS {
        return Err(MatroidError::GroundSetTooLarge(n));
    }
    if r > n {
        return Err(MatroidError::RankOutOfRange { rank: r, n });
    }
    let expected = binomial(n, r);
    if bits.len() != expected {
        return Err(parse_error(
            1,
            1,
            format!("expected {expected} basis bits, found {}", bits.len()),
        ));
    }
    let subsets = revlex_subsets(n, r);
    let mut bases = Vec::new();
    for (i, c) in bits.bytes().enumerate() {
        match c {
            b'1' => bases.push(subsets[i]),
            b'0' => {}
            _ => return Err(parse_error(1, i + 1, "basis bits must be 0 or 1")),
        }
    }
    Matroid::from_bases(n, r, bases)
}

/// Parses one matroid in either form.
pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((line_no, first)) = lines.next() else {
        return Err(parse_error(1, 1, "empty input"));
    };
    let m = if first.starts_with("MATROID") {
        let (n, r) = parse_header(first, line_no)?;
        let Some((bl, bases_line)) = lines.next() else {
            return Err(parse_error(line_no + 1, 1, "missing `bases=` line"));
        };
        parse_bases_line(bases_line, bl, n, r)?
    } else {
        parse_compact_line(first, line_no)?
    };
    if let Some((l, _)) = lines.next() {
        return Err(parse_error(l, 1, "unexpected trailing content"));
    }
    Ok(m)
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut n = None;
    let mut r = None;
    let mut col = 1;
    for tok in line.split(' ') {
        if tok.is_empty() {
            col += 1;
            continue;
        }
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|_| parse_error(line_no, col + 2, "bad n"))?);
        } else if let Some(v) = tok.strip_prefix("r=") {
            r = Some(v.parse::<usize>().map_err(|_| parse_error(line_no, col + 2, "bad r"))?);
        } else if tok != "MATROID" {
            return Err(parse_error(line_no, col, format!("unexpected token `{tok}`")));
        }
        col += tok.len() + 1;
    }
    match (n, r) {
        (Some(n), Some(r)) => {
            if n > MAX_ELEMENTS {
                return Err(MatroidError::GroundSetTooLarge(n));
            }
            Ok((n, r))
        }
        _ => Err(parse_error(line_no, 1, "header needs `n=` and `r=`")),
    }
}

fn parse_bases_line(line: &str, line_no: usize, n: usize, r: usize) -> Result<Matroid> {
    let Some(body) = line.strip_prefix("bases=") else {
        return Err(parse_error(line_no, 1, "expected `bases=`"));
    };
    let mut bases = Vec::new();
    let mut col = "bases=".len() + 1;
    if !body.is_empty() {
        for part in body.split(';') {
            bases.push(parse_set_at(part, n, line_no, col)?);
            col += part.len() + 1;
        }
    }
    Matroid::from_bases(n, r, bases)
}

fn parse_compact_line(line: &str, line_no: usize) -> Result<Matroid> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(parse_error(line_no, 1, "compact form is `<n> <r> <bits>`"));
    }
    let n: usize = toks[0]
        .parse()
        .map_err(|_| parse_error(line_no, 1, format!("expected `MATROID` or a size, found `{}`", toks[0])))?;
    let r: usize = toks[1]
        .parse()
        .map_err(|_| parse_error(line_no, toks[0].len() + 2, "bad rank"))?;
    from_basis_bits(n, r, toks[2]).map_err(|e| match e {
        MatroidError::Parse { column, message, .. } => MatroidError::Parse {
            line: line_no,
            column: column + toks[0].len() + toks[1].len() + 2,
            message,
        },
        other => other,
    })
}
