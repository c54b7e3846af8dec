//! Reader for the DOT subset the exporter writes: one `digraph`, graph
//! attribute assignments, node statements and `->` edge statements, each
//! with an optional attribute list.

use std::collections::BTreeMap;

pub type Attrs = BTreeMap<String, String>;

#[derive(Debug, Default)]
pub struct Graph {
    pub name: String,
    pub attrs: Attrs,
    pub nodes: Vec<(String, Attrs)>,
    pub edges: Vec<(String, String, Attrs)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Html(String),
    Arrow,
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next().ok_or("unterminated string")? {
                        '"' => break,
                        '\\' => match chars.next().ok_or("dangling escape")? {
                            'n' => s.push('\n'),
                            e => s.push(e),
                        },
                        ch => s.push(ch),
                    }
                }
                out.push(Tok::Id(s));
            }
            '<' => {
                chars.next();
                let mut depth = 1;
                let mut s = String::new();
                while depth > 0 {
                    let ch = chars.next().ok_or("unterminated HTML label")?;
                    match ch {
                        '<' => depth += 1,
                        '>' => depth -= 1,
                        _ => {}
                    }
                    if depth > 0 {
                        s.push(ch);
                    }
                }
                out.push(Tok::Html(s));
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        out.push(Tok::Arrow);
                    }
                    Some(d) if d.is_ascii_digit() => {
                        let mut s = String::from("-");
                        while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit() || **d == '.') {
                            s.push(d);
                            chars.next();
                        }
                        out.push(Tok::Id(s));
                    }
                    _ => return Err("stray '-'".into()),
                }
            }
            '{' | '}' | '[' | ']' | '=' | ',' | ';' => {
                chars.next();
                out.push(Tok::Sym(c));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_' || **d == '.') {
                    s.push(d);
                    chars.next();
                }
                out.push(Tok::Id(s));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Reader {
    toks: Vec<Tok>,
    pos: usize,
}

impl Reader {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, String> {
        let t = self.toks.get(self.pos).cloned().ok_or("unexpected end")?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.next()? {
            Tok::Sym(s) if s == c => Ok(()),
            t => Err(format!("expected {c:?}, got {t:?}")),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next()? {
            Tok::Id(s) | Tok::Html(s) => Ok(s),
            t => Err(format!("expected identifier, got {t:?}")),
        }
    }

    fn attrs(&mut self) -> Result<Attrs, String> {
        let mut attrs = Attrs::new();
        if self.peek() != Some(&Tok::Sym('[')) {
            return Ok(attrs);
        }
        self.next()?;
        loop {
            if self.peek() == Some(&Tok::Sym(']')) {
                self.next()?;
                return Ok(attrs);
            }
            let key = self.id()?;
            self.expect('=')?;
            let value = self.id()?;
            attrs.insert(key, value);
            if self.peek() == Some(&Tok::Sym(',')) {
                self.next()?;
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Graph, String> {
    let mut r = Reader {
        toks: lex(src)?,
        pos: 0,
    };
    match r.next()? {
        Tok::Id(k) if k == "digraph" => {}
        t => return Err(format!("expected digraph, got {t:?}")),
    }
    let mut g = Graph {
        name: r.id()?,
        ..Default::default()
    };
    r.expect('{')?;
    loop {
        if r.peek() == Some(&Tok::Sym('}')) {
            r.next()?;
            break;
        }
        let first = r.id()?;
        match r.peek() {
            Some(Tok::Sym('=')) => {
                r.next()?;
                let v = r.id()?;
                g.attrs.insert(first, v);
            }
            Some(Tok::Arrow) => {
                r.next()?;
                let to = r.id()?;
                let attrs = r.attrs()?;
                g.edges.push((first, to, attrs));
            }
            _ => {
                let attrs = r.attrs()?;
                g.nodes.push((first, attrs));
            }
        }
        r.expect(';')?;
    }
    if r.pos != r.toks.len() {
        return Err("trailing input after graph".into());
    }
    let declared: std::collections::HashSet<&str> = g.nodes.iter().map(|(n, _)| n.as_str()).collect();
    for (a, b, _) in &g.edges {
        if !declared.contains(a.as_str()) || !declared.contains(b.as_str()) {
            return Err(format!("edge {a} -> {b} uses an undeclared node"));
        }
    }
    Ok(g)
}
