//! Value-set expressions used as attribute codomains.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Builtin calls allowed as interval endpoints.
pub const BUILTIN_CALLS: &[&str] = &["CurrentYear", "Today"];

/// A literal appearing in enumerations, interval bounds and defaults.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Literal {
    /// Integer or decimal number, kept as written (sign included).
    Number(String),
    /// Quoted text, without the quotes.
    Text(String),
    /// Date such as `1/1/100`.
    Date(String),
    /// Zero-argument builtin call such as `CurrentYear()`.
    Call(String),
}

impl Literal {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Literal::Number(n) => n.parse().ok(),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(n) | Literal::Date(n) => f.write_str(n),
            Literal::Text(t) => write!(f, "'{}'", t.replace('\'', "''")),
            Literal::Call(c) => write!(f, "{c}()"),
        }
    }
}

/// Builtin system value sets that take no parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BuiltinSet {
    Boole,
    DateTime,
}

impl BuiltinSet {
    pub fn keyword(self) -> &'static str {
        match self {
            BuiltinSet::Boole => "BOOLE",
            BuiltinSet::DateTime => "DATETIME",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueSetExpr {
    /// Naturals of at most `digits` digits.
    Nat(u32),
    /// ASCII strings of at most `max_len` characters.
    Ascii(u32),
    Enumeration(Vec<Literal>),
    Interval {
        lo: Literal,
        hi: Literal,
        lo_closed: bool,
        hi_closed: bool,
    },
    Builtin(BuiltinSet),
}

impl ValueSetExpr {
    /// Checks the expression's own invariants, returning a message on failure.
    pub fn check(&self) -> Result<(), String> {
        match self {
            ValueSetExpr::Nat(0) => Err("NAT needs at least one digit".into()),
            ValueSetExpr::Ascii(0) => Err("ASCII needs a maximum length of at least 1".into()),
            ValueSetExpr::Enumeration(items) => {
                if items.is_empty() {
                    return Err("empty enumeration".into());
                }
                for (i, item) in items.iter().enumerate() {
                    if items[..i].contains(item) {
                        return Err(format!("duplicate enumeration literal {item}"));
                    }
                }
                Ok(())
            }
            ValueSetExpr::Interval { lo, hi, .. } => match (lo.as_number(), hi.as_number()) {
                (Some(a), Some(b)) if a > b => Err(format!("interval lower bound {lo} exceeds upper bound {hi}")),
                _ => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Natural-language rendering used in informal descriptions.
    pub fn describe(&self) -> String {
        match self {
            ValueSetExpr::Nat(d) => format!("a natural number of at most {d} digits"),
            ValueSetExpr::Ascii(n) => format!("an ASCII string of at most {n} characters"),
            ValueSetExpr::Enumeration(items) => {
                let list: Vec<String> = items.iter().map(ToString::to_string).collect();
                format!("one of {}", list.join(", "))
            }
            ValueSetExpr::Interval { .. } => format!("a value in {self}"),
            ValueSetExpr::Builtin(BuiltinSet::Boole) => "a Boolean value".into(),
            ValueSetExpr::Builtin(BuiltinSet::DateTime) => "a date and time value".into(),
        }
    }
}

impl fmt::Display for ValueSetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSetExpr::Nat(d) => write!(f, "NAT({d})"),
            ValueSetExpr::Ascii(n) => write!(f, "ASCII({n})"),
            ValueSetExpr::Enumeration(items) => {
                f.write_str("{")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str("}")
            }
            ValueSetExpr::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => write!(
                f,
                "{}{lo}, {hi}{}",
                if *lo_closed { '[' } else { '(' },
                if *hi_closed { ']' } else { ')' }
            ),
            ValueSetExpr::Builtin(b) => f.write_str(b.keyword()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_like_the_source_notation() {
        let sex = ValueSetExpr::Enumeration(vec![
            Literal::Text("M".into()),
            Literal::Text("F".into()),
            Literal::Text("N".into()),
        ]);
        assert_eq!(sex.to_string(), "{'M', 'F', 'N'}");
        let years = ValueSetExpr::Interval {
            lo: Literal::Number("-6500".into()),
            hi: Literal::Call("CurrentYear".into()),
            lo_closed: true,
            hi_closed: true,
        };
        assert_eq!(years.to_string(), "[-6500, CurrentYear()]");
        assert_eq!(ValueSetExpr::Nat(16).to_string(), "NAT(16)");
    }

    #[test]
    fn invariant_violations() {
        assert!(ValueSetExpr::Nat(0).check().is_err());
        assert!(ValueSetExpr::Ascii(0).check().is_err());
        assert!(ValueSetExpr::Enumeration(vec![]).check().is_err());
        let dup = ValueSetExpr::Enumeration(vec![Literal::Text("a".into()), Literal::Text("a".into())]);
        assert!(dup.check().is_err());
        let bad = ValueSetExpr::Interval {
            lo: Literal::Number("5".into()),
            hi: Literal::Number("-1".into()),
            lo_closed: true,
            hi_closed: true,
        };
        assert!(bad.check().is_err());
        let calls = ValueSetExpr::Interval {
            lo: Literal::Call("Today".into()),
            hi: Literal::Number("-1".into()),
            lo_closed: true,
            hi_closed: true,
        };
        assert!(calls.check().is_ok());
    }
}
