//! Source splitting and tokenization.
//!
//! The DSL is line-oriented: each declaration sits on one line, except that a
//! line whose brackets are left open, or an indented line, continues the
//! previous one.

use crate::diag::{ParseDiagnostic, SourceSpan};

/// One declaration after comment stripping and continuation joining.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalLine {
    pub text: String,
    pub span: SourceSpan,
}

fn bracket_delta(c: char) -> i32 {
    match c {
        '(' | '[' | '{' => 1,
        ')' | ']' | '}' => -1,
        _ => 0,
    }
}

/// Removes a `#` comment that starts outside any bracket or top-level quote.
fn strip_comment(line: &str, depth_in: i32) -> &str {
    let mut depth = depth_in;
    let mut quote: Option<char> = None;
    for (i, c) in line.char_indices() {
        if let Some(q) = quote {
            if c == q {
                quote = None;
            }
            continue;
        }
        match c {
            '#' if depth <= 0 => return &line[..i],
            '\'' | '"' if depth <= 0 => quote = Some(c),
            _ => depth = (depth + bracket_delta(c)).max(0),
        }
    }
    line
}

pub fn logical_lines(source: &str) -> (Vec<LogicalLine>, Vec<ParseDiagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    // the declaration being accumulated, with its open-bracket depth
    let mut current: Option<(LogicalLine, i32)> = None;

    for (lineno, raw) in source.lines().enumerate() {
        let depth_in = current.as_ref().map_or(0, |(_, d)| *d);
        let line = strip_comment(raw, depth_in);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            if depth_in == 0 {
                out.extend(current.take().map(|(ll, _)| ll));
            }
            continue;
        }
        let delta: i32 = trimmed.chars().map(bracket_delta).sum();
        let indented = line.starts_with(char::is_whitespace);
        match current.take() {
            Some((mut acc, depth)) if depth > 0 || indented => {
                acc.text.push(' ');
                acc.text.push_str(trimmed);
                current = Some((acc, (depth + delta).max(0)));
            }
            prev => {
                out.extend(prev.map(|(ll, _)| ll));
                let column = line.len() - line.trim_start().len() + 1;
                let ll = LogicalLine {
                    text: trimmed.to_string(),
                    span: SourceSpan::new(lineno + 1, column, trimmed.chars().count()),
                };
                current = Some((ll, delta.max(0)));
            }
        }
    }
    match current {
        Some((ll, depth)) if depth > 0 => {
            diags.push(ParseDiagnostic::error(ll.span, "unbalanced brackets at end of input"));
            out.push(ll);
        }
        Some((ll, _)) => out.push(ll),
        None => {}
    }
    (out, diags)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Eq,
    Minus,
    Slash,
    /// `*` or `•`
    Product,
    /// `°` or `∘` (the word `o` stays an identifier)
    Compose,
    /// `->` or `→`
    Arrow,
    /// `<->` or `↔`
    DoubleArrow,
    /// `⊆`
    Subset,
    Other(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    /// Byte range in the logical line.
    pub start: usize,
    pub end: usize,
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

/// Tokenizes a logical line. Never fails: unknown characters become
/// [`Tok::Other`], which only opaque formula text may contain.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let mut j = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            c if is_ident_start(c) => {
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                Tok::Ident(text[start..end_of(j)].to_string())
            }
            c if c.is_ascii_digit() => {
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j].1 == '.' && chars[j + 1].1.is_ascii_digit() {
                    j += 1;
                    while j < chars.len() && chars[j].1.is_ascii_digit() {
                        j += 1;
                    }
                }
                Tok::Number(text[start..end_of(j)].to_string())
            }
            '\'' | '"' => {
                let mut s = String::new();
                loop {
                    match chars.get(j) {
                        None => break,
                        Some(&(_, q)) if q == c => {
                            // doubled quote escapes itself
                            if chars.get(j + 1).map(|&(_, n)| n) == Some(c) {
                                s.push(c);
                                j += 2;
                            } else {
                                j += 1;
                                break;
                            }
                        }
                        Some(&(_, ch)) => {
                            s.push(ch);
                            j += 1;
                        }
                    }
                }
                Tok::Str(s)
            }
            '-' if next == Some('>') => {
                j += 1;
                Tok::Arrow
            }
            '<' if next == Some('-') && chars.get(i + 2).map(|&(_, c)| c) == Some('>') => {
                j += 2;
                Tok::DoubleArrow
            }
            '→' => Tok::Arrow,
            '↔' => Tok::DoubleArrow,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            '-' => Tok::Minus,
            '/' => Tok::Slash,
            '*' | '•' => Tok::Product,
            '°' | '∘' => Tok::Compose,
            '⊆' => Tok::Subset,
            other => Tok::Other(other),
        };
        out.push(Token {
            tok,
            start,
            end: end_of(j),
        });
        i = j;
    }
    out
}
