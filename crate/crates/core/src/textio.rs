//! Line-oriented tokenizer shared by the text codecs, and the vector format.

use crate::error::{Error, Result};

pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

pub(crate) struct Lines<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    pub fn new(input: &'a str) -> Self {
        Lines {
            lines: input.lines().enumerate(),
            last_line: 0,
        }
    }

    /// Next line split into whitespace-separated tokens. Fails at end of input.
    pub fn next_tokens(&mut self, what: &str) -> Result<Vec<Token<'a>>> {
        match self.lines.next() {
            Some((idx, line)) => {
                self.last_line = idx + 1;
                Ok(tokenize(line, idx + 1))
            }
            None => Err(Error::parse(
                self.last_line + 1,
                1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    /// Trailing blank lines are allowed; anything else is garbage.
    pub fn finish(mut self) -> Result<()> {
        for (idx, line) in self.lines.by_ref() {
            if let Some(tok) = tokenize(line, idx + 1).into_iter().next() {
                return Err(Error::parse(
                    tok.line,
                    tok.column,
                    format!("trailing content `{}`", tok.text),
                ));
            }
        }
        Ok(())
    }
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    line: line_no,
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            line: line_no,
            column: s + 1,
        });
    }
    out
}

pub(crate) fn expect_count(
    tokens: &[Token<'_>],
    count: usize,
    line: usize,
    what: &str,
) -> Result<()> {
    if tokens.len() == count {
        return Ok(());
    }
    if tokens.len() > count {
        let t = &tokens[count];
        return Err(Error::parse(
            t.line,
            t.column,
            format!("trailing token `{}` after {what}", t.text),
        ));
    }
    let column = tokens.last().map_or(1, |t| t.column + t.text.len());
    Err(Error::parse(
        line,
        column,
        format!("expected {count} fields for {what}, found {}", tokens.len()),
    ))
}

pub(crate) fn parse_usize(tok: &Token<'_>) -> Result<usize> {
    if !tok.text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(
            tok.line,
            tok.column,
            format!("`{}` is not a non-negative decimal integer", tok.text),
        ));
    }
    tok.text
        .parse()
        .map_err(|_| Error::parse(tok.line, tok.column, format!("`{}` overflows", tok.text)))
}

pub(crate) fn parse_f64(tok: &Token<'_>) -> Result<f64> {
    let v: f64 = tok.text.parse().map_err(|_| {
        Error::parse(
            tok.line,
            tok.column,
            format!("`{}` is not a real number", tok.text),
        )
    })?;
    if !v.is_finite() {
        return Err(Error::parse(tok.line, tok.column, "non-finite value"));
    }
    Ok(v)
}

/// Writes `m` followed by one value per line in shortest round-trip form.
pub fn vector_to_text(v: &[f64]) -> String {
    let mut out = format!("{}\n", v.len());
    for x in v {
        out.push_str(&format!("{x:?}\n"));
    }
    out
}

pub fn vector_from_text(input: &str) -> Result<Vec<f64>> {
    let mut lines = Lines::new(input);
    let header = lines.next_tokens("length line")?;
    let line = header.first().map_or(1, |t| t.line);
    expect_count(&header, 1, line, "length line")?;
    let m = parse_usize(&header[0])?;
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let toks = lines.next_tokens(&format!("value {i}"))?;
        let line = toks.first().map_or(0, |t| t.line);
        expect_count(&toks, 1, line, "value line")?;
        out.push(parse_f64(&toks[0])?);
    }
    lines.finish()?;
    Ok(out)
}

/// Node list: a count line, then one node id per line.
pub fn nodes_to_text(nodes: &[usize]) -> String {
    let mut out = format!("{}\n", nodes.len());
    for v in nodes {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn nodes_from_text(input: &str) -> Result<Vec<usize>> {
    let mut lines = Lines::new(input);
    let header = lines.next_tokens("count line")?;
    let line = header.first().map_or(1, |t| t.line);
    expect_count(&header, 1, line, "count line")?;
    let count = parse_usize(&header[0])?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let toks = lines.next_tokens(&format!("node {i}"))?;
        let line = toks.first().map_or(0, |t| t.line);
        expect_count(&toks, 1, line, "node line")?;
        out.push(parse_usize(&toks[0])?);
    }
    lines.finish()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let v = vec![0.1, -3.0, 1e-300, 2.5e17, 0.0];
        assert_eq!(vector_from_text(&vector_to_text(&v)).unwrap(), v);
        assert!(vector_from_text("").is_err());
        assert!(vector_from_text("2\n1\n").is_err());
        assert!(vector_from_text("1\n1 2\n").is_err());
        assert!(vector_from_text("1\n1\nx\n").is_err());
        assert!(vector_from_text("1\nnan\n").is_err());
    }

    #[test]
    fn nodes_round_trip() {
        let v = vec![4, 0, 17];
        assert_eq!(nodes_from_text(&nodes_to_text(&v)).unwrap(), v);
        assert!(nodes_from_text("2\n1\n").is_err());
        assert!(nodes_from_text("1\n-1\n").is_err());
    }
}
