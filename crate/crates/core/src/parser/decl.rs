//! Classification of logical lines into raw declarations.
//!
//! Names are not resolved here; that happens once every set header is known.

use super::lexer::{tokenize, Tok, Token};
use crate::schema::DyadicProperty;
use crate::value_set::{BuiltinSet, Literal, ValueSetExpr, BUILTIN_CALLS};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum RawCodomain {
    Expr(ValueSetExpr),
    Name(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct MappingFlags {
    pub total: bool,
    pub onto: bool,
    pub default: Option<Literal>,
    pub dyadic: Vec<DyadicProperty>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum RawConstraint {
    Key(Vec<String>),
    Composition {
        outer: String,
        inner: String,
        property: DyadicProperty,
    },
    Formula(String),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Decl {
    ValueSet {
        name: String,
        expr: ValueSetExpr,
        comment: Option<String>,
    },
    /// Plain header; reopens the block when the set already exists.
    Entity { name: String, comment: Option<String> },
    Relationship {
        name: String,
        roles: Vec<(String, String)>,
        comment: Option<String>,
    },
    Computed {
        name: String,
        roles: Vec<(String, String)>,
        formula: Option<String>,
        comment: Option<String>,
    },
    Inclusion {
        name: String,
        superset: String,
        comment: Option<String>,
    },
    Mapping {
        name: String,
        domain: Option<String>,
        one_to_one: bool,
        codomain: Option<RawCodomain>,
        flags: MappingFlags,
        formula: Option<String>,
        comment: Option<String>,
    },
    Constraint {
        label: Option<String>,
        overrides: Vec<String>,
        body: RawConstraint,
        comment: Option<String>,
    },
}

const QUANTIFIER_CHARS: &[char] = &['∀', '∃'];
const MATH_CHARS: &[char] = &[
    '∀', '∃', '∈', '∉', '∧', '∨', '¬', '⇒', '⇔', '≤', '≥', '≠', '=', '<', '>',
];

/// Heuristic for telling a trailing prose comment from a formula group:
/// at least two plain words and no mathematical symbols.
pub(crate) fn looks_like_prose(text: &str) -> bool {
    if text.contains(MATH_CHARS) {
        return false;
    }
    let words = text
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| ".,;:!?\"".contains(c)))
        .filter(|w| w.chars().count() >= 2 && w.chars().all(|c| c.is_alphabetic() || c == '\''))
        .count();
    words >= 2
}

/// Index of the `(` matching the final `)` of `text`, counting parentheses only.
fn final_group_start(text: &str) -> Option<usize> {
    if !text.ends_with(')') {
        return None;
    }
    let mut depth = 0i32;
    for (i, c) in text.char_indices().rev() {
        match c {
            ')' => depth += 1,
            '(' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Splits an opaque expression into body and trailing prose comment. The
/// comment is the last parenthesized group, separated from the body by
/// whitespace, whose content reads as prose.
pub(crate) fn split_trailing_comment(raw: &str) -> (String, Option<String>) {
    let raw = raw.trim();
    if let Some(start) = final_group_start(raw) {
        let body = &raw[..start];
        let inner = &raw[start + 1..raw.len() - 1];
        if !body.trim().is_empty() && body.ends_with(char::is_whitespace) && looks_like_prose(inner) {
            return (body.trim_end().to_string(), Some(inner.trim().to_string()));
        }
    }
    (raw.to_string(), None)
}

struct Cursor<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, String>;

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(format!("expected {what}{}", self.found()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(format!("expected {what}{}", self.found())),
        }
    }

    fn found(&self) -> String {
        match self.toks.get(self.pos) {
            Some(t) => format!(", found `{}`", &self.text[t.start..t.end]),
            None => ", found end of line".to_string(),
        }
    }

    /// Raw source text from the current token to the end of the line.
    fn rest(&self) -> &'a str {
        match self.toks.get(self.pos) {
            Some(t) => &self.text[t.start..],
            None => "",
        }
    }

    /// A parenthesized comment spanning the rest of the line, if any.
    fn trailing_comment(&mut self) -> PResult<Option<String>> {
        if self.at_end() {
            return Ok(None);
        }
        if self.peek() != Some(&Tok::LParen) {
            return Err(format!("unexpected text{}", self.found()));
        }
        let rest = self.rest();
        let mut depth = 0i32;
        for (i, c) in rest.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        if !rest[i + 1..].trim().is_empty() {
                            return Err("unexpected text after comment".into());
                        }
                        self.pos = self.toks.len();
                        return Ok(Some(rest[1..i].trim().to_string()));
                    }
                }
                _ => {}
            }
        }
        Err("unterminated comment".into())
    }

    fn literal(&mut self) -> PResult<Literal> {
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Literal::Text(s))
            }
            Some(Tok::Minus) | Some(Tok::Number(_)) => {
                let neg = self.eat(&Tok::Minus);
                let mut text = String::new();
                if neg {
                    text.push('-');
                }
                match self.bump() {
                    Some(Tok::Number(n)) => text.push_str(&n),
                    _ => return Err("expected a number after `-`".into()),
                }
                if self.peek() == Some(&Tok::Slash) {
                    // date literal d/m/y
                    for _ in 0..2 {
                        self.expect(Tok::Slash, "`/` in date literal")?;
                        text.push('/');
                        if self.eat(&Tok::Minus) {
                            text.push('-');
                        }
                        match self.bump() {
                            Some(Tok::Number(n)) => text.push_str(&n),
                            _ => return Err("malformed date literal".into()),
                        }
                    }
                    return Ok(Literal::Date(text));
                }
                Ok(Literal::Number(text))
            }
            Some(Tok::Ident(name)) if self.peek_at(1) == Some(&Tok::LParen) => {
                if !BUILTIN_CALLS.contains(&name.as_str()) {
                    return Err(format!("unknown builtin `{name}()`"));
                }
                self.pos += 1;
                self.expect(Tok::LParen, "`(`")?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Literal::Call(name))
            }
            _ => Err(format!("expected a literal{}", self.found())),
        }
    }

    fn positive_arg(&mut self, builtin: &str) -> PResult<u32> {
        self.expect(Tok::LParen, "`(`")?;
        let n = match self.bump() {
            Some(Tok::Number(n)) => n
                .parse::<u32>()
                .map_err(|_| format!("malformed value-set expression `{builtin}({n})`"))?,
            _ => return Err(format!("malformed value-set expression: `{builtin}` needs a size")),
        };
        self.expect(Tok::RParen, "`)`")?;
        if n == 0 {
            return Err(format!("malformed value-set expression `{builtin}(0)`"));
        }
        Ok(n)
    }

    /// True when the previous token and the next one touch.
    fn adjacent(&self) -> bool {
        match (
            self.pos.checked_sub(1).and_then(|p| self.toks.get(p)),
            self.toks.get(self.pos),
        ) {
            (Some(a), Some(b)) => a.end == b.start,
            _ => false,
        }
    }

    fn value_set(&mut self) -> PResult<RawCodomain> {
        match self.peek().cloned() {
            Some(Tok::Ident(w)) => {
                self.pos += 1;
                let expr = match w.as_str() {
                    "NAT" => ValueSetExpr::Nat(self.positive_arg("NAT")?),
                    "ASCII" => ValueSetExpr::Ascii(self.positive_arg("ASCII")?),
                    "BOOLE" => ValueSetExpr::Builtin(BuiltinSet::Boole),
                    "DATETIME" => ValueSetExpr::Builtin(BuiltinSet::DateTime),
                    _ if self.peek() == Some(&Tok::LParen) && self.adjacent() => {
                        return Err(format!("unknown value-set builtin `{w}`"))
                    }
                    _ => return Ok(RawCodomain::Name(w)),
                };
                Ok(RawCodomain::Expr(expr))
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let mut items = vec![self.literal()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.literal()?);
                }
                self.expect(Tok::RBrace, "`}`")?;
                Ok(RawCodomain::Expr(ValueSetExpr::Enumeration(items)))
            }
            Some(open @ (Tok::LBracket | Tok::LParen)) => {
                self.pos += 1;
                let lo = self.literal()?;
                self.expect(Tok::Comma, "`,` in interval")?;
                let hi = self.literal()?;
                let hi_closed = match self.bump() {
                    Some(Tok::RBracket) => true,
                    Some(Tok::RParen) => false,
                    _ => return Err("malformed interval: expected `]` or `)`".into()),
                };
                Ok(RawCodomain::Expr(ValueSetExpr::Interval {
                    lo,
                    hi,
                    lo_closed: open == Tok::LBracket,
                    hi_closed,
                }))
            }
            _ => Err(format!("expected a value-set expression{}", self.found())),
        }
    }

    fn flags(&mut self) -> PResult<MappingFlags> {
        let mut flags = MappingFlags::default();
        while let Some(Tok::Ident(w)) = self.peek().cloned() {
            match w.as_str() {
                "total" => flags.total = true,
                "onto" => flags.onto = true,
                "default" => {
                    self.pos += 1;
                    flags.default = Some(self.literal()?);
                    continue;
                }
                _ => match DyadicProperty::from_keyword(&w) {
                    Some(p) => {
                        if !flags.dyadic.contains(&p) {
                            flags.dyadic.push(p);
                        }
                    }
                    None => return Err(format!("unknown mapping property `{w}`")),
                },
            }
            self.pos += 1;
        }
        Ok(flags)
    }

    /// `( role : SET , ... )` if the next group is a role list.
    fn try_roles(&mut self) -> Option<Vec<(String, String)>> {
        let save = self.pos;
        let parsed = (|| -> PResult<Vec<(String, String)>> {
            self.expect(Tok::LParen, "`(`")?;
            let mut roles = Vec::new();
            loop {
                let r = self.ident("role name")?;
                self.expect(Tok::Colon, "`:`")?;
                let t = self.ident("role target")?;
                roles.push((r, t));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen, "`)`")?;
            Ok(roles)
        })();
        match parsed {
            Ok(r) => Some(r),
            Err(_) => {
                self.pos = save;
                None
            }
        }
    }

    /// Mapping tail after the name (and explicit domain, if any).
    fn mapping_tail(&mut self, name: String, domain: Option<String>) -> PResult<Decl> {
        let one_to_one = match self.bump() {
            Some(Tok::Arrow) => false,
            Some(Tok::DoubleArrow) => true,
            _ => return Err("expected `->` or `<->`".into()),
        };
        let codomain = Some(self.value_set()?);
        let flags = self.flags()?;
        let (formula, comment) = if self.eat(&Tok::Eq) {
            let (f, c) = split_trailing_comment(self.rest());
            self.pos = self.toks.len();
            (Some(f), c)
        } else {
            (None, self.trailing_comment()?)
        };
        if matches!(&formula, Some(f) if f.is_empty()) {
            return Err("empty computation formula".into());
        }
        Ok(Decl::Mapping {
            name,
            domain,
            one_to_one,
            codomain,
            flags,
            formula,
            comment,
        })
    }

    fn constraint_body(&mut self) -> PResult<(RawConstraint, Option<String>)> {
        let save = self.pos;
        // key: m1 * m2 * ... key
        if let Some(Tok::Ident(_)) = self.peek() {
            let mut names = vec![self.ident("mapping")?];
            while self.eat(&Tok::Product) {
                names.push(self.ident("mapping name in key")?);
            }
            if self.peek().is_some_and(|t| matches!(t, Tok::Ident(w) if w == "key")) {
                self.pos += 1;
                let comment = self.trailing_comment()?;
                return Ok((RawConstraint::Key(names), comment));
            }
            if names.len() == 1 {
                let is_compose =
                    matches!(self.peek(), Some(Tok::Compose)) || matches!(self.peek(), Some(Tok::Ident(w)) if w == "o");
                if is_compose {
                    self.pos += 1;
                    let inner = self.ident("inner mapping of composition")?;
                    let word = self.ident("dyadic property")?;
                    let property = DyadicProperty::from_keyword(&word)
                        .ok_or_else(|| format!("unknown dyadic property `{word}`"))?;
                    let comment = self.trailing_comment()?;
                    return Ok((
                        RawConstraint::Composition {
                            outer: names.remove(0),
                            inner,
                            property,
                        },
                        comment,
                    ));
                }
            }
            if names.len() > 1 {
                return Err(format!("expected `key` after mapping product{}", self.found()));
            }
        }
        self.pos = save;
        let (body, comment) = split_trailing_comment(self.rest());
        self.pos = self.toks.len();
        if body.is_empty() {
            return Err("empty constraint".into());
        }
        Ok((RawConstraint::Formula(body), comment))
    }

    fn constraint(&mut self, label: Option<String>, overrides: Vec<String>) -> PResult<Decl> {
        let (body, comment) = self.constraint_body()?;
        Ok(Decl::Constraint {
            label,
            overrides,
            body,
            comment,
        })
    }

    fn set_list(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut sets = vec![self.ident("set name")?];
        while self.eat(&Tok::Comma) {
            sets.push(self.ident("set name")?);
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(sets)
    }
}

fn starts_formula(tok: &Tok) -> bool {
    match tok {
        Tok::LParen => true,
        Tok::Other(c) => QUANTIFIER_CHARS.contains(c),
        Tok::Ident(w) => w == "forall" || w == "exists",
        _ => false,
    }
}

/// Classifies one logical line.
pub(crate) fn parse_decl(text: &str) -> Result<Decl, String> {
    let mut c = Cursor {
        text,
        toks: tokenize(text),
        pos: 0,
    };
    let first = c.peek().cloned().ok_or("empty declaration")?;

    if starts_formula(&first) {
        return c.constraint(None, Vec::new());
    }
    let Tok::Ident(head) = first else {
        return Err(format!("unrecognized declaration{}", c.found()));
    };

    match (head.as_str(), c.peek_at(1).cloned()) {
        ("VALUE", Some(Tok::Ident(_))) => {
            c.pos = 1;
            let name = c.ident("value set name")?;
            c.expect(Tok::Eq, "`=`")?;
            let expr = match c.value_set()? {
                RawCodomain::Expr(e) => e,
                RawCodomain::Name(n) => return Err(format!("value set must be defined by an expression, not `{n}`")),
            };
            let comment = c.trailing_comment()?;
            return Ok(Decl::ValueSet { name, expr, comment });
        }
        ("COMPUTED", Some(Tok::Ident(_))) => {
            c.pos = 1;
            let name = c.ident("computed set name")?;
            let roles = c.try_roles().unwrap_or_default();
            let (formula, comment) = if c.eat(&Tok::Eq) {
                let (f, cm) = split_trailing_comment(c.rest());
                c.pos = c.toks.len();
                (Some(f), cm)
            } else {
                (None, c.trailing_comment()?)
            };
            return Ok(Decl::Computed {
                name,
                roles,
                formula,
                comment,
            });
        }
        _ => {}
    }

    c.pos = 1;
    match c.peek().cloned() {
        None => Ok(Decl::Entity {
            name: head,
            comment: None,
        }),
        Some(Tok::Ident(w)) if w == "SUBSETOF" => {
            c.pos += 1;
            let superset = c.ident("superset name")?;
            let comment = c.trailing_comment()?;
            Ok(Decl::Inclusion {
                name: head,
                superset,
                comment,
            })
        }
        Some(Tok::Subset) => {
            c.pos += 1;
            let superset = c.ident("superset name")?;
            let comment = c.trailing_comment()?;
            Ok(Decl::Inclusion {
                name: head,
                superset,
                comment,
            })
        }
        Some(Tok::LParen) => {
            if let Some(roles) = c.try_roles() {
                let comment = c.trailing_comment()?;
                return Ok(Decl::Relationship {
                    name: head,
                    roles,
                    comment,
                });
            }
            let comment = c.trailing_comment()?;
            Ok(Decl::Entity { name: head, comment })
        }
        Some(Tok::Arrow | Tok::DoubleArrow) => c.mapping_tail(head, None),
        Some(Tok::Eq) => {
            c.pos += 1;
            let (formula, comment) = split_trailing_comment(c.rest());
            if formula.is_empty() {
                return Err("empty computation formula".into());
            }
            Ok(Decl::Mapping {
                name: head,
                domain: None,
                one_to_one: false,
                codomain: None,
                flags: MappingFlags::default(),
                formula: Some(formula),
                comment,
            })
        }
        Some(Tok::Colon) => {
            let explicit_mapping = matches!(c.peek_at(1), Some(Tok::Ident(_)))
                && matches!(c.peek_at(2), Some(Tok::Arrow | Tok::DoubleArrow));
            c.pos += 1;
            if explicit_mapping {
                let domain = c.ident("domain")?;
                c.mapping_tail(head, Some(domain))
            } else {
                c.constraint(Some(head), Vec::new())
            }
        }
        Some(Tok::LBracket) => {
            let overrides = c.set_list()?;
            c.expect(Tok::Colon, "`:` after constraint label")?;
            c.constraint(Some(head), overrides)
        }
        Some(Tok::Product | Tok::Compose) => {
            c.pos = 0;
            c.constraint(None, Vec::new())
        }
        Some(Tok::Ident(w)) if w == "key" || w == "o" => {
            c.pos = 0;
            c.constraint(None, Vec::new())
        }
        _ => Err(format!("unrecognized declaration{}", c.found())),
    }
}
