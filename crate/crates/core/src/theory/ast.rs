use std::fmt;

use crate::strategy::Strategy;
use crate::term::{Assoc, Type};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Loc {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Untyped term as written in the source.
#[derive(Clone, Debug)]
pub enum RawTerm {
    Ident(String, Loc),
    Num(u64, Loc),
    /// `[a, b, c]`; the empty list is `Ident("[]")`.
    List(Vec<RawTerm>, Loc),
    App(Box<RawTerm>, Box<RawTerm>),
    Infix(String, Box<RawTerm>, Box<RawTerm>, Loc),
    All(String, Option<Type>, Box<RawTerm>, Loc),
    Typed(Box<RawTerm>, Type, Loc),
}

impl PartialEq for RawTerm {
    // locations are not part of the syntax
    fn eq(&self, other: &RawTerm) -> bool {
        use RawTerm::*;
        match (self, other) {
            (Ident(a, _), Ident(b, _)) => a == b,
            (Num(a, _), Num(b, _)) => a == b,
            (List(a, _), List(b, _)) => a == b,
            (App(f, a), App(g, b)) => f == g && a == b,
            (Infix(o, a, b, _), Infix(p, c, d, _)) => o == p && a == c && b == d,
            (All(n, t, b, _), All(m, u, c, _)) => n == m && t == u && b == c,
            (Typed(a, t, _), Typed(b, u, _)) => a == b && t == u,
            _ => false,
        }
    }
}

impl RawTerm {
    pub fn loc(&self) -> Loc {
        match self {
            RawTerm::Ident(_, l)
            | RawTerm::Num(_, l)
            | RawTerm::List(_, l)
            | RawTerm::Infix(_, _, _, l)
            | RawTerm::All(_, _, _, l)
            | RawTerm::Typed(_, _, l) => *l,
            RawTerm::App(f, _) => f.loc(),
        }
    }
}

impl fmt::Display for RawTerm {
    /// Fully parenthesized, so re-parsing gives back the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawTerm::Ident(n, _) => {
                if n.chars().all(crate::theory::parser::is_op_char) {
                    write!(f, "({n})")
                } else {
                    write!(f, "{n}")
                }
            }
            RawTerm::Num(k, _) => write!(f, "{k}"),
            RawTerm::List(items, _) => {
                write!(f, "[")?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "]")
            }
            RawTerm::App(g, a) => write!(f, "({g} {a})"),
            RawTerm::Infix(op, l, r, _) => write!(f, "({l} {op} {r})"),
            RawTerm::All(n, Some(ty), b, _) => write!(f, "(!!{n}::({ty}). {b})"),
            RawTerm::All(n, None, b, _) => write!(f, "(!!{n}. {b})"),
            RawTerm::Typed(t, ty, _) => write!(f, "({t} :: {ty})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Mixfix {
    /// Alternative spelling, e.g. `Nil ("[]")`.
    Notation(String),
    Infix(String, Assoc, u32),
}

impl Mixfix {
    pub fn symbol(&self) -> &str {
        match self {
            Mixfix::Notation(s) | Mixfix::Infix(s, _, _) => s,
        }
    }
}

impl fmt::Display for Mixfix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mixfix::Notation(s) => write!(f, "(\"{s}\")"),
            Mixfix::Infix(s, a, p) => {
                let kw = match a {
                    Assoc::Left => "infixl",
                    Assoc::Right => "infixr",
                    Assoc::None => "infix",
                };
                write!(f, "({kw} \"{s}\" {p})")
            }
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct CtorDecl {
    pub name: String,
    pub args: Vec<Type>,
    pub mixfix: Option<Mixfix>,
    pub loc: Loc,
}

#[derive(Clone, PartialEq, Debug)]
pub struct DatatypeDecl {
    pub params: Vec<String>,
    pub name: String,
    pub ctors: Vec<CtorDecl>,
    pub loc: Loc,
}

#[derive(Clone, PartialEq, Debug)]
pub struct FunDef {
    pub name: String,
    pub ty: Type,
    pub mixfix: Option<Mixfix>,
    pub equations: Vec<RawTerm>,
    pub loc: Loc,
}

#[derive(Clone, PartialEq, Debug)]
pub struct LemmaDecl {
    pub name: String,
    pub simp: bool,
    pub statement: RawTerm,
    pub strategy: Strategy,
    pub loc: Loc,
}

#[derive(Clone, PartialEq, Debug)]
pub struct StrategyDef {
    pub name: String,
    pub strategy: Strategy,
    pub loc: Loc,
}

#[derive(Clone, PartialEq, Debug)]
pub struct GoalItem {
    pub name: String,
    pub statement: RawTerm,
    pub strategy: Strategy,
    pub loc: Loc,
}

#[derive(Clone, PartialEq, Debug)]
pub enum TheoryItem {
    Datatype(DatatypeDecl),
    FunDef(FunDef),
    Lemma(LemmaDecl),
    Strategy(StrategyDef),
    Goal(GoalItem),
}

impl TheoryItem {
    pub fn name(&self) -> &str {
        match self {
            TheoryItem::Datatype(d) => &d.name,
            TheoryItem::FunDef(d) => &d.name,
            TheoryItem::Lemma(d) => &d.name,
            TheoryItem::Strategy(d) => &d.name,
            TheoryItem::Goal(d) => &d.name,
        }
    }
}

fn type_token(ty: &Type) -> String {
    match ty {
        Type::Var(v) => v.clone(),
        Type::Con(n, args) if args.is_empty() => n.clone(),
        other => format!("\"{other}\""),
    }
}

impl fmt::Display for TheoryItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryItem::Datatype(d) => {
                write!(f, "datatype ")?;
                match d.params.len() {
                    0 => {}
                    1 => write!(f, "{} ", d.params[0])?,
                    _ => write!(f, "({}) ", d.params.join(", "))?,
                }
                write!(f, "{} =", d.name)?;
                for (i, c) in d.ctors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " |")?;
                    }
                    write!(f, " {}", c.name)?;
                    for a in &c.args {
                        write!(f, " {}", type_token(a))?;
                    }
                    if let Some(m) = &c.mixfix {
                        write!(f, " {m}")?;
                    }
                }
                Ok(())
            }
            TheoryItem::FunDef(d) => {
                write!(f, "primrec {} :: \"{}\"", d.name, d.ty)?;
                if let Some(m) = &d.mixfix {
                    write!(f, " {m}")?;
                }
                write!(f, " where")?;
                for (i, e) in d.equations.iter().enumerate() {
                    write!(f, "{}\"{e}\"", if i == 0 { "\n  " } else { "\n| " })?;
                }
                Ok(())
            }
            TheoryItem::Lemma(l) => {
                write!(f, "lemma {}", l.name)?;
                if l.simp {
                    write!(f, " [simp]")?;
                }
                write!(f, ": \"{}\" by {}", l.statement, l.strategy)
            }
            TheoryItem::Strategy(s) => write!(f, "strategy {} = {}", s.name, s.strategy),
            TheoryItem::Goal(g) => write!(f, "theorem {}: \"{}\" by {}", g.name, g.statement, g.strategy),
        }
    }
}
