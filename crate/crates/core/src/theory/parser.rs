//! Lexer and recursive-descent parser for theory files and the term
//! language inside quoted strings.

use thiserror::Error;

use super::ast::*;
use crate::strategy::Strategy;
use crate::term::{Assoc, Syntax, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: expected {}", expected.join(" or "))]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
}

const KEYWORDS: &[&str] = &["datatype", "primrec", "lemma", "strategy", "theorem"];

pub fn is_op_char(c: char) -> bool {
    "!#$%&*+-/<=>?@^|~:".contains(c)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct LineIndex {
    starts: Vec<usize>,
    text: String,
}

impl LineIndex {
    fn new(text: &str) -> LineIndex {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts, text: text.to_string() }
    }

    fn loc(&self, offset: usize) -> Loc {
        let line = self.starts.partition_point(|&s| s <= offset).max(1);
        let start = self.starts[line - 1];
        let column = self.text.get(start..offset.min(self.text.len())).map_or(1, |s| s.chars().count() + 1);
        Loc { line, column }
    }
}

// ---------------------------------------------------------------------------
// term level

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    TyVar(String),
    Op(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::TyVar(s) | Tok::Op(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex_term(src: &str, base: usize, lines: &LineIndex) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let at = base + off;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '⋀' => Some(Tok::Op("!!".into())),
            '⟹' => Some(Tok::Op("==>".into())),
            '⇒' => Some(Tok::Op("=>".into())),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, at));
            i += 1;
        } else if c == '\'' {
            let mut j = i + 1;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            let s: String = chars[i..j].iter().map(|p| p.1).collect();
            if s.len() < 2 {
                return Err(err_at(lines, at, &["a type variable"]));
            }
            out.push((Tok::TyVar(s), at));
            i = j;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().map(|p| p.1).collect();
            let n = s.parse().map_err(|_| err_at(lines, at, &["a small numeral"]))?;
            out.push((Tok::Num(n), at));
            i = j;
        } else if is_ident_start(c) || c == '?' && chars.get(i + 1).is_some_and(|p| is_ident_start(p.1)) {
            let mut j = i + 1;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            out.push((Tok::Ident(chars[i..j].iter().map(|p| p.1).collect()), at));
            i = j;
        } else if is_op_char(c) {
            let mut j = i;
            while j < chars.len() && is_op_char(chars[j].1) {
                j += 1;
            }
            out.push((Tok::Op(chars[i..j].iter().map(|p| p.1).collect()), at));
            i = j;
        } else {
            return Err(err_at(lines, at, &["a term"]));
        }
    }
    out.push((Tok::Eof, base + src.len()));
    Ok(out)
}

fn err_at(lines: &LineIndex, offset: usize, expected: &[&str]) -> SyntaxError {
    let loc = lines.loc(offset);
    SyntaxError { line: loc.line, column: loc.column, expected: expected.iter().map(|s| s.to_string()).collect() }
}

struct TermParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    syntax: &'a Syntax,
    lines: &'a LineIndex,
}

impl TermParser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn loc(&self) -> Loc {
        self.lines.loc(self.offset())
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        let mut e = err_at(self.lines, self.offset(), expected);
        e.expected.push(format!("(found {})", self.peek().describe()));
        Err(e)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(&[what])
        }
    }

    fn is_op(&self, op: &str) -> bool {
        matches!(self.peek(), Tok::Op(o) if o == op)
    }

    fn term(&mut self) -> Result<RawTerm, SyntaxError> {
        self.expr(0)
    }

    fn expr(&mut self, min: u32) -> Result<RawTerm, SyntaxError> {
        if self.is_op("!!") {
            return self.binder();
        }
        let mut lhs = self.app()?;
        while let Tok::Op(op) = self.peek().clone() {
            let Some((prec, assoc)) = self.syntax.infix(&op) else { break };
            if prec < min {
                break;
            }
            let loc = self.loc();
            self.bump();
            let next = match assoc {
                Assoc::Right => prec,
                _ => prec + 1,
            };
            let rhs = self.expr(next)?;
            lhs = RawTerm::Infix(op, Box::new(lhs), Box::new(rhs), loc);
            if assoc == Assoc::None {
                if let Tok::Op(o) = self.peek() {
                    if self.syntax.infix(o).is_some_and(|(p, _)| p == prec) {
                        return self.fail(&["parentheses around non-associative operator"]);
                    }
                }
            }
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> Result<RawTerm, SyntaxError> {
        let loc = self.loc();
        self.bump();
        let mut names = Vec::new();
        while let Tok::Ident(n) = self.peek().clone() {
            self.bump();
            names.push((n, self.loc()));
        }
        if names.is_empty() {
            return self.fail(&["a bound variable name"]);
        }
        let mut annot = None;
        if self.is_op("::") {
            if names.len() > 1 {
                return self.fail(&["`.` (type annotation allowed on a single binder only)"]);
            }
            self.bump();
            annot = Some(self.ty()?);
        }
        self.expect(Tok::Dot, "`.`")?;
        let body = self.term()?;
        let mut out = body;
        for (i, (n, l)) in names.into_iter().enumerate().rev() {
            let l = if i == 0 { loc } else { l };
            out = RawTerm::All(n, annot.take(), Box::new(out), l);
        }
        Ok(out)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Num(_) | Tok::LParen | Tok::LBrack)
    }

    fn app(&mut self) -> Result<RawTerm, SyntaxError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = RawTerm::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<RawTerm, SyntaxError> {
        let loc = self.loc();
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.bump();
                Ok(RawTerm::Ident(n, loc))
            }
            Tok::Num(k) => {
                self.bump();
                Ok(RawTerm::Num(k, loc))
            }
            Tok::LBrack => {
                self.bump();
                if *self.peek() == Tok::RBrack {
                    self.bump();
                    return Ok(RawTerm::Ident("[]".into(), loc));
                }
                let mut items = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    items.push(self.term()?);
                }
                self.expect(Tok::RBrack, "`]`")?;
                Ok(RawTerm::List(items, loc))
            }
            Tok::LParen => {
                self.bump();
                if let Tok::Op(op) = self.peek().clone() {
                    if self.toks.get(self.pos + 1).map(|p| &p.0) == Some(&Tok::RParen) && (self.syntax.infix(&op).is_some() || op == "!!") {
                        self.bump();
                        self.bump();
                        return Ok(RawTerm::Ident(op, loc));
                    }
                }
                let t = self.term()?;
                let t = if self.is_op("::") {
                    let l = self.loc();
                    self.bump();
                    let ty = self.ty()?;
                    RawTerm::Typed(Box::new(t), ty, l)
                } else {
                    t
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.fail(&["a term"]),
        }
    }

    fn ty(&mut self) -> Result<Type, SyntaxError> {
        let dom = self.ty_postfix()?;
        if self.is_op("=>") {
            self.bump();
            let cod = self.ty()?;
            return Ok(Type::fun(dom, cod));
        }
        Ok(dom)
    }

    fn ty_postfix(&mut self) -> Result<Type, SyntaxError> {
        let mut args = match self.peek().clone() {
            Tok::TyVar(v) => {
                self.bump();
                vec![Type::Var(v)]
            }
            Tok::Ident(n) => {
                self.bump();
                vec![Type::Con(n, vec![])]
            }
            Tok::LParen => {
                self.bump();
                let mut tys = vec![self.ty()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    tys.push(self.ty()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                if tys.len() > 1 && !matches!(self.peek(), Tok::Ident(_)) {
                    return self.fail(&["a type constructor after a type argument tuple"]);
                }
                tys
            }
            _ => return self.fail(&["a type"]),
        };
        while let Tok::Ident(n) = self.peek().clone() {
            self.bump();
            args = vec![Type::Con(n, args)];
        }
        Ok(args.pop().expect("one type"))
    }
}

/// Parse a standalone term with the given operator table.
pub fn parse_term(text: &str, syntax: &Syntax) -> Result<RawTerm, SyntaxError> {
    let lines = LineIndex::new(text);
    parse_term_at(text, 0, syntax, &lines)
}

/// Parse a standalone type.
pub fn parse_type(text: &str) -> Result<Type, SyntaxError> {
    let lines = LineIndex::new(text);
    let syntax = Syntax::logical();
    let mut p = TermParser { toks: lex_term(text, 0, &lines)?, pos: 0, syntax: &syntax, lines: &lines };
    let ty = p.ty()?;
    p.expect(Tok::Eof, "end of type")?;
    Ok(ty)
}

fn parse_term_at(src: &str, base: usize, syntax: &Syntax, lines: &LineIndex) -> Result<RawTerm, SyntaxError> {
    let mut p = TermParser { toks: lex_term(src, base, lines)?, pos: 0, syntax, lines };
    let t = p.term()?;
    p.expect(Tok::Eof, "end of term")?;
    Ok(t)
}

fn parse_type_at(src: &str, base: usize, lines: &LineIndex) -> Result<Type, SyntaxError> {
    let syntax = Syntax::logical();
    let mut p = TermParser { toks: lex_term(src, base, lines)?, pos: 0, syntax: &syntax, lines };
    let ty = p.ty()?;
    p.expect(Tok::Eof, "end of type")?;
    Ok(ty)
}

// ---------------------------------------------------------------------------
// theory level

#[derive(Clone, Debug, PartialEq)]
enum TTok {
    Ident(String),
    TyVar(String),
    Num(u64),
    /// Quoted string with the byte offset of its first content character.
    Str(String, usize),
    Sym(&'static str),
    Eof,
}

impl TTok {
    fn describe(&self) -> String {
        match self {
            TTok::Ident(s) | TTok::TyVar(s) => format!("`{s}`"),
            TTok::Num(n) => format!("`{n}`"),
            TTok::Str(s, _) => format!("\"{s}\""),
            TTok::Sym(s) => format!("`{s}`"),
            TTok::Eof => "end of file".into(),
        }
    }
}

fn lex_theory(text: &str, lines: &LineIndex) -> Result<Vec<(TTok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' && chars.get(i + 1).map(|p| p.1) == Some('*') {
            // (* comment *), nestable
            let mut depth = 0;
            loop {
                match (chars.get(i).map(|p| p.1), chars.get(i + 1).map(|p| p.1)) {
                    (Some('('), Some('*')) => {
                        depth += 1;
                        i += 2;
                    }
                    (Some('*'), Some(')')) => {
                        depth -= 1;
                        i += 2;
                        if depth == 0 {
                            break;
                        }
                    }
                    (Some(_), _) => i += 1,
                    (None, _) => return Err(err_at(lines, off, &["`*)` closing the comment"])),
                }
            }
        } else if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].1 != '"' {
                j += 1;
            }
            if j >= chars.len() {
                return Err(err_at(lines, off, &["closing `\"`"]));
            }
            let s: String = chars[start..j].iter().map(|p| p.1).collect();
            let content_off = chars.get(start).map_or(text.len(), |p| p.0);
            out.push((TTok::Str(s, content_off), off));
            i = j + 1;
        } else if c == '\'' {
            let mut j = i + 1;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            out.push((TTok::TyVar(chars[i..j].iter().map(|p| p.1).collect()), off));
            i = j;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().map(|p| p.1).collect();
            out.push((TTok::Num(s.parse().map_err(|_| err_at(lines, off, &["a small number"]))?), off));
            i = j;
        } else if is_ident_start(c) {
            let mut j = i + 1;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            out.push((TTok::Ident(chars[i..j].iter().map(|p| p.1).collect()), off));
            i = j;
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().map(|p| p.1).collect();
            let sym = if two == "::" {
                "::"
            } else {
                match c {
                    '=' => "=",
                    '|' => "|",
                    ':' => ":",
                    '[' => "[",
                    ']' => "]",
                    ',' => ",",
                    '(' => "(",
                    ')' => ")",
                    _ => return Err(err_at(lines, off, &["a theory item"])),
                }
            };
            out.push((TTok::Sym(sym), off));
            i += sym.len();
        }
    }
    out.push((TTok::Eof, text.len()));
    Ok(out)
}

struct TheoryParser<'a> {
    toks: Vec<(TTok, usize)>,
    pos: usize,
    lines: &'a LineIndex,
    syntax: Syntax,
}

impl TheoryParser<'_> {
    fn peek(&self) -> &TTok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn loc(&self) -> Loc {
        self.lines.loc(self.offset())
    }

    fn bump(&mut self) -> TTok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        let mut e = err_at(self.lines, self.offset(), expected);
        e.expected.push(format!("(found {})", self.peek().describe()));
        Err(e)
    }

    fn sym(&mut self, s: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == TTok::Sym(s) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{s}`")])
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), TTok::Sym(t) if *t == s)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            TTok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[&format!("`{kw}`")]),
        }
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            TTok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&["a name"]),
        }
    }

    fn string(&mut self) -> Result<(String, usize), SyntaxError> {
        match self.peek().clone() {
            TTok::Str(s, off) => {
                self.bump();
                Ok((s, off))
            }
            _ => self.fail(&["a quoted string"]),
        }
    }

    fn quoted_term(&mut self) -> Result<RawTerm, SyntaxError> {
        let (s, off) = self.string()?;
        parse_term_at(&s, off, &self.syntax, self.lines)
    }

    fn quoted_type(&mut self) -> Result<Type, SyntaxError> {
        let (s, off) = self.string()?;
        parse_type_at(&s, off, self.lines)
    }

    fn items(&mut self) -> Result<Vec<TheoryItem>, SyntaxError> {
        let mut items = Vec::new();
        loop {
            let loc = self.loc();
            let item = match self.peek().clone() {
                TTok::Eof => break,
                TTok::Ident(kw) => match kw.as_str() {
                    "datatype" => TheoryItem::Datatype(self.datatype(loc)?),
                    "primrec" => TheoryItem::FunDef(self.fundef(loc)?),
                    "lemma" => TheoryItem::Lemma(self.lemma(loc)?),
                    "strategy" => {
                        self.bump();
                        let name = self.name()?;
                        self.sym("=")?;
                        TheoryItem::Strategy(StrategyDef { name, strategy: self.strategy()?, loc })
                    }
                    "theorem" => {
                        self.bump();
                        let name = self.name()?;
                        self.sym(":")?;
                        let statement = self.quoted_term()?;
                        self.keyword("by")?;
                        TheoryItem::Goal(GoalItem { name, statement, strategy: self.strategy()?, loc })
                    }
                    _ => return self.fail(&KEYWORDS.iter().map(|k| &k[..]).collect::<Vec<_>>()),
                },
                _ => return self.fail(&KEYWORDS.iter().map(|k| &k[..]).collect::<Vec<_>>()),
            };
            items.push(item);
        }
        Ok(items)
    }

    fn mixfix(&mut self) -> Result<Option<Mixfix>, SyntaxError> {
        if !self.is_sym("(") {
            return Ok(None);
        }
        self.bump();
        let m = match self.peek().clone() {
            TTok::Str(s, _) => {
                self.bump();
                Mixfix::Notation(s)
            }
            TTok::Ident(kw) if kw == "infixl" || kw == "infixr" || kw == "infix" => {
                self.bump();
                let (s, _) = self.string()?;
                if s.is_empty() || !s.chars().all(is_op_char) {
                    return self.fail(&["an operator symbol"]);
                }
                let prec = match self.bump() {
                    TTok::Num(n) => n as u32,
                    _ => return self.fail(&["a precedence"]),
                };
                let assoc = match kw.as_str() {
                    "infixl" => Assoc::Left,
                    "infixr" => Assoc::Right,
                    _ => Assoc::None,
                };
                self.syntax.declare(&s, prec, assoc);
                Mixfix::Infix(s, assoc, prec)
            }
            _ => return self.fail(&["a mixfix annotation"]),
        };
        self.sym(")")?;
        Ok(Some(m))
    }

    fn datatype(&mut self, loc: Loc) -> Result<DatatypeDecl, SyntaxError> {
        self.keyword("datatype")?;
        let mut params = Vec::new();
        match self.peek().clone() {
            TTok::TyVar(v) => {
                self.bump();
                params.push(v);
            }
            TTok::Sym("(") => {
                self.bump();
                loop {
                    match self.bump() {
                        TTok::TyVar(v) => params.push(v),
                        _ => return self.fail(&["a type variable"]),
                    }
                    if self.is_sym(",") {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.sym(")")?;
            }
            _ => {}
        }
        let name = self.name()?;
        self.sym("=")?;
        let mut ctors = Vec::new();
        loop {
            let cloc = self.loc();
            let cname = self.name()?;
            let mut args = Vec::new();
            loop {
                match self.peek().clone() {
                    TTok::TyVar(v) => {
                        self.bump();
                        args.push(Type::Var(v));
                    }
                    TTok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => {
                        self.bump();
                        args.push(Type::Con(n, vec![]));
                    }
                    TTok::Str(..) => args.push(self.quoted_type()?),
                    _ => break,
                }
            }
            let mixfix = self.mixfix()?;
            ctors.push(CtorDecl { name: cname, args, mixfix, loc: cloc });
            if self.is_sym("|") {
                self.bump();
            } else {
                break;
            }
        }
        Ok(DatatypeDecl { params, name, ctors, loc })
    }

    fn fundef(&mut self, loc: Loc) -> Result<FunDef, SyntaxError> {
        self.keyword("primrec")?;
        let name = self.name()?;
        self.sym("::")?;
        let ty = self.quoted_type()?;
        let mixfix = self.mixfix()?;
        self.keyword("where")?;
        let mut equations = vec![self.quoted_term()?];
        while self.is_sym("|") {
            self.bump();
            equations.push(self.quoted_term()?);
        }
        Ok(FunDef { name, ty, mixfix, equations, loc })
    }

    fn lemma(&mut self, loc: Loc) -> Result<LemmaDecl, SyntaxError> {
        self.keyword("lemma")?;
        let name = self.name()?;
        let mut simp = false;
        if self.is_sym("[") {
            self.bump();
            self.keyword("simp")?;
            self.sym("]")?;
            simp = true;
        }
        self.sym(":")?;
        let statement = self.quoted_term()?;
        self.keyword("by")?;
        let strategy = self.strategy()?;
        Ok(LemmaDecl { name, simp, statement, strategy, loc })
    }

    fn strategy(&mut self) -> Result<Strategy, SyntaxError> {
        let TTok::Ident(n) = self.peek().clone() else {
            return self.fail(&["a strategy"]);
        };
        if KEYWORDS.contains(&n.as_str()) {
            return self.fail(&["a strategy"]);
        }
        self.bump();
        Ok(match n.as_str() {
            "Thens" | "Ors" => {
                self.sym("[")?;
                let mut cs = vec![self.strategy()?];
                while self.is_sym(",") {
                    self.bump();
                    cs.push(self.strategy()?);
                }
                self.sym("]")?;
                if n == "Thens" {
                    Strategy::Thens(cs)
                } else {
                    Strategy::Ors(cs)
                }
            }
            "Dynamic" => {
                self.sym("(")?;
                self.keyword("Induct")?;
                self.sym(")")?;
                Strategy::DynamicInduct
            }
            "Auto" => Strategy::Auto,
            "IsSolved" => Strategy::IsSolved,
            "Fastforce" => Strategy::Fastforce,
            "Quickcheck" => Strategy::Quickcheck,
            "Conjecture" => Strategy::Conjecture,
            "Generalize" => Strategy::Generalize,
            _ => Strategy::Named(n),
        })
    }
}

/// Parse a whole theory file into items, in file order.
pub fn parse_theory(text: &str) -> Result<Vec<TheoryItem>, SyntaxError> {
    let lines = LineIndex::new(text);
    let toks = lex_theory(text, &lines)?;
    let mut p = TheoryParser { toks, pos: 0, lines: &lines, syntax: Syntax::logical() };
    p.items()
}

/// Parse a standalone strategy expression such as `Ors [DInd, CDInd]`.
pub fn parse_strategy(text: &str) -> Result<Strategy, SyntaxError> {
    let lines = LineIndex::new(text);
    let toks = lex_theory(text, &lines)?;
    let mut p = TheoryParser { toks, pos: 0, lines: &lines, syntax: Syntax::logical() };
    let s = p.strategy()?;
    if *p.peek() != TTok::Eof {
        return p.fail(&["end of strategy"]);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ITREV: &str = r##"
datatype 'a list = Nil ("[]") | Cons 'a "'a list" (infixr "#" 65)

primrec itrev :: "'a list => 'a list => 'a list" where
  "itrev [] ys = ys" | "itrev (x#xs) ys = itrev xs (x#ys)"
"##;

    #[test]
    fn parses_two_equation_primrec() {
        let items = parse_theory(ITREV).unwrap();
        assert_eq!(items.len(), 2);
        let TheoryItem::FunDef(f) = &items[1] else { panic!("expected FunDef") };
        assert_eq!(f.name, "itrev");
        assert_eq!(f.equations.len(), 2);
        let TheoryItem::Datatype(d) = &items[0] else { panic!("expected datatype") };
        assert_eq!(d.ctors[1].mixfix, Some(Mixfix::Infix("#".into(), Assoc::Right, 65)));
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse_theory("").unwrap(), vec![]);
        assert_eq!(parse_theory("  (* only a comment *)\n").unwrap(), vec![]);
    }

    #[test]
    fn strategy_definition_with_four_children() {
        let items = parse_theory("strategy CDInd = Thens [Conjecture, Fastforce, Quickcheck, DInd]").unwrap();
        let TheoryItem::Strategy(s) = &items[0] else { panic!() };
        assert_eq!(s.name, "CDInd");
        assert_eq!(s.strategy, Strategy::Thens(vec![Strategy::Conjecture, Strategy::Fastforce, Strategy::Quickcheck, Strategy::Named("DInd".into())]));
        assert_eq!(parse_strategy("Thens [Dynamic (Induct), Auto, IsSolved]").unwrap().to_string(), "Thens [Dynamic (Induct), Auto, IsSolved]");
    }

    #[test]
    fn syntax_error_reports_position() {
        let e = parse_theory("datatype nat = Zero (\"0\") | Suc nat\nprimrec f :: \"nat => nat\" where\n  \"f 0 = (\"").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_theory("lemma x \"a = a\" by Auto").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(e.expected[0].contains(':'));
    }

    #[test]
    fn binder_and_implication_precedence() {
        let mut syn = Syntax::default();
        syn.declare("@", 65, Assoc::Right);
        let t = parse_term("(!!Nil. itrev xs Nil = rev xs @ Nil) ==> itrev xs [] = rev xs", &syn).unwrap();
        let RawTerm::Infix(op, l, r, _) = &t else { panic!() };
        assert_eq!(op, "==>");
        assert!(matches!(**l, RawTerm::All(..)));
        assert!(matches!(**r, RawTerm::Infix(ref o, ..) if o == "="));
        let t = parse_term("!!x xs. x # xs = [x] @ xs", &syn).unwrap();
        assert!(matches!(t, RawTerm::All(ref n, _, ref b, _) if n == "x" && matches!(**b, RawTerm::All(..))));
    }

    #[test]
    fn parses_types() {
        assert_eq!(parse_type("'a list => 'a list").unwrap().to_string(), "'a list => 'a list");
        assert_eq!(parse_type("('a => 'b) => 'a list => 'b list").unwrap().to_string(), "('a => 'b) => 'a list => 'b list");
        assert_eq!(parse_type("('a, 'b) pair").unwrap(), Type::con("pair", vec![Type::var("'a"), Type::var("'b")]));
    }

    #[test]
    fn print_parse_fixpoint_on_items() {
        let src = r##"
datatype 'a list = Nil ("[]") | Cons 'a "'a list" (infixr "#" 65)
primrec app :: "'a list => 'a list => 'a list" (infixr "@" 65) where
  "[] @ ys = ys" | "(x # xs) @ ys = x # (xs @ ys)"
lemma app_Nil2 [simp]: "xs @ [] = xs" by Thens [Dynamic (Induct), Auto, IsSolved]
theorem t: "!!ys. (xs @ ys) @ [] = xs @ [y, z]" by Ors [Auto, Conjecture]
"##;
        let items = parse_theory(src).unwrap();
        let printed: String = items.iter().map(|i| format!("{i}\n")).collect();
        let again = parse_theory(&printed).unwrap();
        assert_eq!(items.len(), again.len());
        let printed2: String = again.iter().map(|i| format!("{i}\n")).collect();
        assert_eq!(printed, printed2);
    }
}
