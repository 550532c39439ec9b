//! Lexer, abstract syntax and printer of the document format.
//!
//! A document is a sequence of declarations, each introduced by a keyword:
//!
//! ```text
//! # comment
//! set A = {a, b}
//! set E = {e0, e1}
//! relation models : A -> E = {(a, e0), (b, e1)}
//! relation leq : E -> E = {(e0, e0), (e1, e1)}
//! function f : A -> A = {a -> b, b -> b}
//! rep R = (models, leq)
//! morphism m : R -> R = (id_e, id_t)
//! reduction r : R -> R = (phi, tau, psi)
//! closure c : R -> R2 = down
//! preorder P = leq
//! hor H = mon(depth = 2)
//! family rho = membership(cap = 3)
//! probes S = sizes(0, 2)
//! ```
//!
//! Words are either bare (no whitespace, none of `{}(),=:"#`, no `->`) or
//! double-quoted with `\"` and `\\` escapes. Whitespace, including newlines,
//! is insignificant.

use std::fmt;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    Punct(char),
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Arrow => write!(f, "`->`"),
        }
    }
}

const SPECIAL: &[char] = &['{', '}', '(', ')', ',', '=', ':', '"', '#'];

fn is_bare_char(c: char) -> bool {
    !c.is_whitespace() && !SPECIAL.contains(&c)
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, CliError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, pos));
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let mut w = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(CliError::syntax(pos, "unterminated quoted word")),
                    Some('"') => {
                        advance(&mut i, &mut line, &mut col);
                        break;
                    }
                    Some('\\') => {
                        let here = Pos { line, col };
                        advance(&mut i, &mut line, &mut col);
                        match chars.get(i) {
                            Some(&e @ ('"' | '\\')) => w.push(e),
                            _ => return Err(CliError::syntax(here, "unknown escape in quoted word")),
                        }
                        advance(&mut i, &mut line, &mut col);
                    }
                    Some(&ch) => {
                        w.push(ch);
                        advance(&mut i, &mut line, &mut col);
                    }
                }
            }
            out.push((Tok::Word(w), pos));
        } else if SPECIAL.contains(&c) {
            out.push((Tok::Punct(c), pos));
            advance(&mut i, &mut line, &mut col);
        } else {
            let mut w = String::new();
            while i < chars.len() && is_bare_char(chars[i]) && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>')) {
                w.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            out.push((Tok::Word(w), pos));
        }
    }
    Ok(out)
}

/// Renders a word so that `lex` reads it back as one identical token.
pub fn word(w: &str) -> String {
    let bare = !w.is_empty() && w.chars().all(is_bare_char) && !w.contains("->");
    if bare {
        return w.to_string();
    }
    let mut s = String::with_capacity(w.len() + 2);
    s.push('"');
    for c in w.chars() {
        if c == '"' || c == '\\' {
            s.push('\\');
        }
        s.push(c);
    }
    s.push('"');
    s
}

/// Argument value of a configuration call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Word(String),
    Call(Call),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arg {
    pub key: Option<String>,
    pub value: Value,
}

/// `head(arg, key = arg, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Call {
    pub head: String,
    pub args: Vec<Arg>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Set(Vec<String>),
    Relation {
        src: String,
        tgt: String,
        pairs: Vec<(String, String)>,
    },
    Function {
        src: String,
        tgt: String,
        map: Vec<(String, String)>,
    },
    Rep {
        models: String,
        leq: String,
    },
    /// `φ : E₁ → E₂`, `ψ : T₂ → T₁`.
    Morphism {
        src: String,
        tgt: String,
        phi: String,
        psi: String,
    },
    /// `φ : E₁ → E₂`, `τ : E₂ → E₁`, `ψ : T₂ → T₁`.
    Reduction {
        src: String,
        tgt: String,
        phi: String,
        tau: String,
        psi: String,
    },
    Closure {
        src: String,
        tgt: String,
        down: String,
    },
    Preorder {
        order: String,
    },
    Hor(Call),
    Family(Call),
    Probes(Call),
}

impl Body {
    pub fn keyword(&self) -> &'static str {
        match self {
            Body::Set(_) => "set",
            Body::Relation { .. } => "relation",
            Body::Function { .. } => "function",
            Body::Rep { .. } => "rep",
            Body::Morphism { .. } => "morphism",
            Body::Reduction { .. } => "reduction",
            Body::Closure { .. } => "closure",
            Body::Preorder { .. } => "preorder",
            Body::Hor(_) => "hor",
            Body::Family(_) => "family",
            Body::Probes(_) => "probes",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub body: Body,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Word(w) => f.write_str(&word(w)),
            Value::Call(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", word(&self.head))?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if let Some(k) = &a.key {
                write!(f, "{} = ", word(k))?;
            }
            write!(f, "{}", a.value)?;
        }
        f.write_str(")")
    }
}

fn list<T>(f: &mut fmt::Formatter<'_>, items: &[T], one: impl Fn(&T) -> String) -> fmt::Result {
    f.write_str("{")?;
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(&one(it))?;
    }
    f.write_str("}")
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.body.keyword(), word(&self.name))?;
        match &self.body {
            Body::Set(elems) => {
                f.write_str(" = ")?;
                list(f, elems, |e| word(e))
            }
            Body::Relation { src, tgt, pairs } => {
                write!(f, " : {} -> {} = ", word(src), word(tgt))?;
                list(f, pairs, |(a, b)| format!("({}, {})", word(a), word(b)))
            }
            Body::Function { src, tgt, map } => {
                write!(f, " : {} -> {} = ", word(src), word(tgt))?;
                list(f, map, |(a, b)| format!("{} -> {}", word(a), word(b)))
            }
            Body::Rep { models, leq } => write!(f, " = ({}, {})", word(models), word(leq)),
            Body::Morphism { src, tgt, phi, psi } => {
                write!(f, " : {} -> {} = ({}, {})", word(src), word(tgt), word(phi), word(psi))
            }
            Body::Reduction {
                src,
                tgt,
                phi,
                tau,
                psi,
            } => write!(
                f,
                " : {} -> {} = ({}, {}, {})",
                word(src),
                word(tgt),
                word(phi),
                word(tau),
                word(psi)
            ),
            Body::Closure { src, tgt, down } => {
                write!(f, " : {} -> {} = {}", word(src), word(tgt), word(down))
            }
            Body::Preorder { order } => write!(f, " = {}", word(order)),
            Body::Hor(c) | Body::Family(c) | Body::Probes(c) => write!(f, " = {c}"),
        }
    }
}

/// Prints declarations one per line.
pub fn print_decls(decls: &[Decl]) -> String {
    let mut s = String::new();
    for d in decls {
        s.push_str(&d.to_string());
        s.push('\n');
    }
    s
}
