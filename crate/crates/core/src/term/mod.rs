//! Types and terms of the object language.
//!
//! Terms are locally nameless: bound variables are de Bruijn indices and
//! abstractions only keep a display name for printing. Logic is encoded with
//! three reserved constants, `!!` (meta-universal quantifier, applied to an
//! abstraction), `==>` (meta-implication) and `=` (object equality).

mod print;
mod typing;

pub use print::{Assoc, Syntax};
pub(crate) use typing::logical_scheme;
pub use typing::{infer_type, match_type, Signature, TypeError, Unifier};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub const ALL: &str = "!!";
pub const IMP: &str = "==>";
pub const EQ: &str = "=";

/// True for the three reserved logical constants.
pub fn is_logical(name: &str) -> bool {
    matches!(name, ALL | IMP | EQ)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Type {
    /// Type constructor application, e.g. `'a list`.
    Con(String, Vec<Type>),
    /// Type variable. Names starting with `?` are flexible (unifiable or
    /// schematic); all others are fixed.
    Var(String),
    Fun(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn bool() -> Type {
        Type::Con("bool".into(), vec![])
    }

    pub fn con(name: &str, args: Vec<Type>) -> Type {
        Type::Con(name.into(), args)
    }

    pub fn var(name: &str) -> Type {
        Type::Var(name.into())
    }

    pub fn fun(dom: Type, cod: Type) -> Type {
        Type::Fun(Arc::new(dom), Arc::new(cod))
    }

    /// Right-nested function type `a1 => ... => an => res`.
    pub fn curried(args: impl IntoIterator<Item = Type>, res: Type) -> Type {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(res, |acc, a| Type::fun(a, acc))
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Type::Con(n, a) if n == "bool" && a.is_empty())
    }

    pub fn is_fun(&self) -> bool {
        matches!(self, Type::Fun(..))
    }

    /// Argument types and final result type of a curried function type.
    pub fn strip_fun(&self) -> (Vec<Type>, Type) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::Fun(d, c) = cur {
            args.push((**d).clone());
            cur = c;
        }
        (args, cur.clone())
    }

    pub fn dest_fun(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Fun(d, c) => Some((d, c)),
            _ => None,
        }
    }

    pub fn tyvars(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Var(v) => {
                out.insert(v.clone());
            }
            Type::Con(_, args) => args.iter().for_each(|a| a.tyvars(out)),
            Type::Fun(d, c) => {
                d.tyvars(out);
                c.tyvars(out);
            }
        }
    }

    pub fn has_flexible_vars(&self) -> bool {
        match self {
            Type::Var(v) => v.starts_with('?'),
            Type::Con(_, args) => args.iter().any(Type::has_flexible_vars),
            Type::Fun(d, c) => d.has_flexible_vars() || c.has_flexible_vars(),
        }
    }

    pub fn subst(&self, map: &BTreeMap<String, Type>) -> Type {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Type::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Type::Con(n, args) => Type::Con(n.clone(), args.iter().map(|a| a.subst(map)).collect()),
            Type::Fun(d, c) => Type::fun(d.subst(map), c.subst(map)),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Type, f: &mut fmt::Formatter<'_>, arrow_left: bool) -> fmt::Result {
            match t {
                Type::Var(v) => write!(f, "{v}"),
                Type::Con(n, args) => {
                    match args.len() {
                        0 => {}
                        1 => {
                            let paren = args[0].is_fun();
                            if paren {
                                write!(f, "(")?;
                            }
                            go(&args[0], f, false)?;
                            write!(f, "{} ", if paren { ")" } else { "" })?;
                        }
                        _ => {
                            write!(f, "(")?;
                            for (i, a) in args.iter().enumerate() {
                                if i > 0 {
                                    write!(f, ", ")?;
                                }
                                go(a, f, false)?;
                            }
                            write!(f, ") ")?;
                        }
                    }
                    write!(f, "{n}")
                }
                Type::Fun(d, c) => {
                    if arrow_left {
                        write!(f, "(")?;
                    }
                    go(d, f, true)?;
                    write!(f, " => ")?;
                    go(c, f, false)?;
                    if arrow_left {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, false)
    }
}

/// A term. Equality and hashing ignore binder display names, so `==` is
/// alpha-equivalence.
#[derive(Clone, Debug)]
pub enum Term {
    Free(String, Type),
    Bound(usize, Type),
    Const(String, Type),
    App(Arc<Term>, Arc<Term>),
    Abs(String, Type, Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Free(a, s), Term::Free(b, t)) => a == b && s == t,
            (Term::Bound(i, s), Term::Bound(j, t)) => i == j && s == t,
            (Term::Const(a, s), Term::Const(b, t)) => a == b && s == t,
            (Term::App(f, a), Term::App(g, b)) => f == g && a == b,
            (Term::Abs(_, s, a), Term::Abs(_, t, b)) => s == t && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Term::Free(n, t) => (0u8, n, t).hash(state),
            Term::Bound(i, t) => (1u8, i, t).hash(state),
            Term::Const(n, t) => (2u8, n, t).hash(state),
            Term::App(f, a) => {
                3u8.hash(state);
                f.hash(state);
                a.hash(state);
            }
            Term::Abs(_, t, b) => {
                4u8.hash(state);
                t.hash(state);
                b.hash(state);
            }
        }
    }
}

/// Alpha-equivalence: the terms differ at most in binder display names.
pub fn alpha_equal(t1: &Term, t2: &Term) -> bool {
    t1 == t2
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Step {
    Fun,
    Arg,
    Body,
}

/// Path from the root of a term to one of its sub-terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Position(pub Vec<Step>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, step: Step) -> Position {
        let mut p = self.0.clone();
        p.push(step);
        Position(p)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            let s = match s {
                Step::Fun => "fun",
                Step::Arg => "arg",
                Step::Body => "body",
            };
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `base` if unused, otherwise `base` with the smallest numeric suffix not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|n| !avoid.contains(n)).expect("unbounded suffix search")
}

impl Term {
    pub fn free(name: &str, ty: Type) -> Term {
        Term::Free(name.into(), ty)
    }

    pub fn constant(name: &str, ty: Type) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn mk_eq(lhs: Term, rhs: Term) -> Term {
        let ty = Type::curried([lhs.type_hint(), lhs.type_hint()], Type::bool());
        Term::apps(Term::constant(EQ, ty), [lhs, rhs])
    }

    pub fn mk_imp(prem: Term, concl: Term) -> Term {
        let ty = Type::curried([Type::bool(), Type::bool()], Type::bool());
        Term::apps(Term::constant(IMP, ty), [prem, concl])
    }

    /// `!!name. body`, abstracting the free variable `name : ty` in `body`.
    pub fn mk_all(name: &str, ty: &Type, body: &Term) -> Term {
        let abs = Term::Abs(name.into(), ty.clone(), Arc::new(body.abstract_free(name, ty)));
        let qty = Type::fun(Type::fun(ty.clone(), Type::bool()), Type::bool());
        Term::app(Term::constant(ALL, qty), abs)
    }

    /// Type read off the term without checking. Exact for well-typed terms.
    pub fn type_hint(&self) -> Type {
        match self {
            Term::Free(_, t) | Term::Bound(_, t) | Term::Const(_, t) => t.clone(),
            Term::App(f, _) => match f.type_hint() {
                Type::Fun(_, c) => (*c).clone(),
                other => other,
            },
            Term::Abs(_, t, b) => Type::fun(t.clone(), b.type_hint()),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Free(..) | Term::Bound(..))
    }

    pub fn const_name(&self) -> Option<&str> {
        match self {
            Term::Const(n, _) => Some(n),
            _ => None,
        }
    }

    /// Head and arguments of an application spine.
    pub fn strip_app(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn head_const(&self) -> Option<&str> {
        self.strip_app().0.const_name()
    }

    pub fn dest_binop(&self, name: &str) -> Option<(&Term, &Term)> {
        match self {
            Term::App(f, r) => match &**f {
                Term::App(c, l) if c.const_name() == Some(name) => Some((l, r)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn dest_eq(&self) -> Option<(&Term, &Term)> {
        self.dest_binop(EQ)
    }

    pub fn dest_imp(&self) -> Option<(&Term, &Term)> {
        self.dest_binop(IMP)
    }

    /// `!!x. body` as (display name, binder type, body with a loose index 0).
    pub fn dest_all(&self) -> Option<(&str, &Type, &Term)> {
        match self {
            Term::App(q, abs) if q.const_name() == Some(ALL) => match &**abs {
                Term::Abs(n, t, b) => Some((n, t, b)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, _, b) => 1 + b.size(),
            _ => 1,
        }
    }

    /// Free variables in first-occurrence (pre-order) order.
    pub fn frees(&self) -> Vec<(String, Type)> {
        fn go(t: &Term, out: &mut Vec<(String, Type)>) {
            match t {
                Term::Free(n, ty) => {
                    if !out.iter().any(|(m, _)| m == n) {
                        out.push((n.clone(), ty.clone()));
                    }
                }
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Abs(_, _, b) => go(b, out),
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        self.frees().into_iter().map(|(n, _)| n).collect()
    }

    /// Constants in first-occurrence order, each name once.
    pub fn consts(&self) -> Vec<(String, Type)> {
        let mut out: Vec<(String, Type)> = Vec::new();
        for (_, t) in self.subterms() {
            if let Term::Const(n, ty) = t {
                if !out.iter().any(|(m, _)| m == n) {
                    out.push((n.clone(), ty.clone()));
                }
            }
        }
        out
    }

    /// Display names of all abstractions.
    pub fn binder_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (_, t) in self.subterms() {
            if let Term::Abs(n, _, _) = t {
                out.insert(n.clone());
            }
        }
        out
    }

    /// True when some bound index points outside the term (given `depth`
    /// enclosing binders are considered local).
    pub fn has_loose_bounds_above(&self, depth: usize) -> bool {
        match self {
            Term::Bound(i, _) => *i >= depth,
            Term::App(f, a) => f.has_loose_bounds_above(depth) || a.has_loose_bounds_above(depth),
            Term::Abs(_, _, b) => b.has_loose_bounds_above(depth + 1),
            _ => false,
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.has_loose_bounds_above(0)
    }

    /// Loose bound indices, relative to the term's own root.
    pub fn loose_bounds(&self) -> BTreeSet<usize> {
        fn go(t: &Term, depth: usize, out: &mut BTreeSet<usize>) {
            match t {
                Term::Bound(i, _) if *i >= depth => {
                    out.insert(i - depth);
                }
                Term::App(f, a) => {
                    go(f, depth, out);
                    go(a, depth, out);
                }
                Term::Abs(_, _, b) => go(b, depth + 1, out),
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, 0, &mut out);
        out
    }

    /// Pre-order enumeration of all sub-terms with their positions.
    pub fn subterms(&self) -> Vec<(Position, &Term)> {
        fn go<'t>(t: &'t Term, pos: &mut Vec<Step>, out: &mut Vec<(Position, &'t Term)>) {
            out.push((Position(pos.clone()), t));
            match t {
                Term::App(f, a) => {
                    pos.push(Step::Fun);
                    go(f, pos, out);
                    pos.pop();
                    pos.push(Step::Arg);
                    go(a, pos, out);
                    pos.pop();
                }
                Term::Abs(_, _, b) => {
                    pos.push(Step::Body);
                    go(b, pos, out);
                    pos.pop();
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn at(&self, pos: &Position) -> Option<&Term> {
        pos.0.iter().try_fold(self, |t, step| match (t, step) {
            (Term::App(f, _), Step::Fun) => Some(&**f),
            (Term::App(_, a), Step::Arg) => Some(&**a),
            (Term::Abs(_, _, b), Step::Body) => Some(&**b),
            _ => None,
        })
    }

    /// Number of abstractions crossed on the way to `pos`.
    pub fn binder_depth(&self, pos: &Position) -> usize {
        pos.0.iter().filter(|s| **s == Step::Body).count()
    }

    /// Types of the binders enclosing `pos`, innermost first (index order).
    pub fn binders_at(&self, pos: &Position) -> Vec<(String, Type)> {
        let mut out = Vec::new();
        let mut cur = self;
        for step in &pos.0 {
            match (cur, step) {
                (Term::App(f, _), Step::Fun) => cur = f,
                (Term::App(_, a), Step::Arg) => cur = a,
                (Term::Abs(n, ty, b), Step::Body) => {
                    out.push((n.clone(), ty.clone()));
                    cur = b;
                }
                _ => break,
            }
        }
        out.reverse();
        out
    }

    pub fn replace_at(&self, pos: &Position, new: Term) -> Option<Term> {
        fn go(t: &Term, steps: &[Step], new: Term) -> Option<Term> {
            let Some((first, rest)) = steps.split_first() else {
                return Some(new);
            };
            match (t, first) {
                (Term::App(f, a), Step::Fun) => Some(Term::App(Arc::new(go(f, rest, new)?), a.clone())),
                (Term::App(f, a), Step::Arg) => Some(Term::App(f.clone(), Arc::new(go(a, rest, new)?))),
                (Term::Abs(n, ty, b), Step::Body) => Some(Term::Abs(n.clone(), ty.clone(), Arc::new(go(b, rest, new)?))),
                _ => None,
            }
        }
        go(self, &pos.0, new)
    }

    /// Replace every occurrence of `needle` (which must be closed) by `with`.
    pub fn replace_all(&self, needle: &Term, with: &Term) -> Term {
        if self == needle {
            return with.clone();
        }
        match self {
            Term::App(f, a) => Term::app(f.replace_all(needle, with), a.replace_all(needle, with)),
            Term::Abs(n, ty, b) => Term::Abs(n.clone(), ty.clone(), Arc::new(b.replace_all(needle, with))),
            _ => self.clone(),
        }
    }

    /// Turn free variable `name : ty` into a loose bound index 0 (shifted under binders).
    pub fn abstract_free(&self, name: &str, ty: &Type) -> Term {
        fn go(t: &Term, name: &str, ty: &Type, depth: usize) -> Term {
            match t {
                Term::Free(n, t2) if n == name && t2 == ty => Term::Bound(depth, ty.clone()),
                Term::App(f, a) => Term::app(go(f, name, ty, depth), go(a, name, ty, depth)),
                Term::Abs(n, t2, b) => Term::Abs(n.clone(), t2.clone(), Arc::new(go(b, name, ty, depth + 1))),
                _ => t.clone(),
            }
        }
        go(self, name, ty, 0)
    }

    /// Replace loose bound index 0 by the closed term `arg`.
    pub fn instantiate_bound(&self, arg: &Term) -> Term {
        fn go(t: &Term, arg: &Term, depth: usize) -> Term {
            match t {
                Term::Bound(i, ty) => {
                    if *i == depth {
                        arg.clone()
                    } else if *i > depth {
                        Term::Bound(i - 1, ty.clone())
                    } else {
                        t.clone()
                    }
                }
                Term::App(f, a) => Term::app(go(f, arg, depth), go(a, arg, depth)),
                Term::Abs(n, ty, b) => Term::Abs(n.clone(), ty.clone(), Arc::new(go(b, arg, depth + 1))),
                _ => t.clone(),
            }
        }
        go(self, arg, 0)
    }

    /// Simultaneous substitution of free variables. Replacement terms must be
    /// closed. Binder display names that would collide with a newly
    /// introduced free name are freshened.
    pub fn subst(&self, binding: &BTreeMap<String, Term>) -> Term {
        if binding.is_empty() {
            return self.clone();
        }
        let introduced: BTreeSet<String> = binding.values().flat_map(|t| t.free_names()).collect();
        fn go(t: &Term, b: &BTreeMap<String, Term>, introduced: &BTreeSet<String>) -> Term {
            match t {
                Term::Free(n, _) => b.get(n).cloned().unwrap_or_else(|| t.clone()),
                Term::App(f, a) => Term::app(go(f, b, introduced), go(a, b, introduced)),
                Term::Abs(n, ty, body) => {
                    let name = if introduced.contains(n) {
                        let mut avoid = introduced.clone();
                        avoid.extend(body.free_names());
                        fresh_name(n, &avoid)
                    } else {
                        n.clone()
                    };
                    Term::Abs(name, ty.clone(), Arc::new(go(body, b, introduced)))
                }
                _ => t.clone(),
            }
        }
        go(self, binding, &introduced)
    }

    /// Apply a type substitution to every type annotation.
    pub fn subst_types(&self, map: &BTreeMap<String, Type>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Term::Free(n, t) => Term::Free(n.clone(), t.subst(map)),
            Term::Bound(i, t) => Term::Bound(*i, t.subst(map)),
            Term::Const(n, t) => Term::Const(n.clone(), t.subst(map)),
            Term::App(f, a) => Term::app(f.subst_types(map), a.subst_types(map)),
            Term::Abs(n, t, b) => Term::Abs(n.clone(), t.subst(map), Arc::new(b.subst_types(map))),
        }
    }

    /// All type variables occurring in annotations.
    pub fn tyvars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (_, t) in self.subterms() {
            match t {
                Term::Free(_, ty) | Term::Bound(_, ty) | Term::Const(_, ty) | Term::Abs(_, ty, _) => ty.tyvars(&mut out),
                Term::App(..) => {}
            }
        }
        out
    }
}

/// A goal with its meta-quantifiers and premises peeled off.
#[derive(Clone, Debug)]
pub struct StrippedGoal {
    /// Meta-bound variables, now free, in binder order.
    pub params: Vec<(String, Type)>,
    pub premises: Vec<Term>,
    pub conclusion: Term,
}

/// Peel `!!x. ...` and `P ==> ...` layers. Meta-bound variables become free
/// variables named after their binders, freshened against the free names of
/// the goal and against each other.
pub fn strip_goal(goal: &Term) -> StrippedGoal {
    let mut avoid = goal.free_names();
    let mut params = Vec::new();
    let mut premises = Vec::new();
    let mut cur = goal.clone();
    loop {
        if let Some((n, ty, body)) = cur.dest_all() {
            let name = fresh_name(n, &avoid);
            avoid.insert(name.clone());
            params.push((name.clone(), ty.clone()));
            cur = body.instantiate_bound(&Term::free(&name, ty.clone()));
        } else if let Some((p, c)) = cur.dest_imp() {
            premises.push(p.clone());
            cur = c.clone();
        } else {
            break;
        }
    }
    StrippedGoal { params, premises, conclusion: cur }
}

/// Rebuild `!!params. premises ==> conclusion`.
pub fn mk_goal(params: &[(String, Type)], premises: &[Term], conclusion: Term) -> Term {
    let body = premises.iter().rev().fold(conclusion, |acc, p| Term::mk_imp(p.clone(), acc));
    params.iter().rev().fold(body, |acc, (n, ty)| Term::mk_all(n, ty, &acc))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Syntax::default().print(self))
    }
}
