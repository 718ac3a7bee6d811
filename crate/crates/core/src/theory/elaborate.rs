use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;
use thiserror::Error;

use super::ast::*;
use super::context::*;
use super::parser::{parse_theory, SyntaxError};
use crate::rewrite::{RewriteRule, RuleOrigin};
use crate::strategy::{replay, search, SearchBudget, Strategy};
use crate::term::{infer_type, is_logical, logical_scheme, strip_goal, Term, Type, Unifier, ALL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElabError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{loc}: type error: {message}")]
    Type { loc: Loc, message: String },
    #[error("{loc}: definition of {name} is not primitive recursive: {reason}")]
    Termination { loc: Loc, name: String, reason: String },
    #[error("{loc}: lemma {name} could not be proved")]
    ProofFailed { loc: Loc, name: String },
    #[error("{loc}: proof of lemma {name} does not replay: {reason}")]
    ReplayMismatch { loc: Loc, name: String, reason: String },
    #[error("{loc}: duplicate name {name}")]
    DuplicateName { loc: Loc, name: String },
    #[error("{loc}: unknown strategy {name}")]
    UnknownStrategy { loc: Loc, name: String },
    #[error("{loc}: {message}")]
    Invalid { loc: Loc, message: String },
}

impl ElabError {
    fn ty(loc: Loc, message: impl Into<String>) -> ElabError {
        ElabError::Type { loc, message: message.into() }
    }

    fn invalid(loc: Loc, message: impl Into<String>) -> ElabError {
        ElabError::Invalid { loc, message: message.into() }
    }
}

/// Unification-based typing of parsed terms against a context.
pub(crate) struct TermElaborator<'c> {
    ctx: &'c TheoryContext,
    u: Unifier,
    frees: IndexMap<String, Type>,
    bound: Vec<(String, Type)>,
    /// Constant being defined; used at its declared type, not instantiated.
    self_const: Option<(String, Type)>,
}

impl<'c> TermElaborator<'c> {
    pub(crate) fn new(ctx: &'c TheoryContext) -> TermElaborator<'c> {
        TermElaborator { ctx, u: Unifier::new(), frees: IndexMap::new(), bound: Vec::new(), self_const: None }
    }

    pub(crate) fn fix_free(&mut self, name: &str, ty: Type) {
        self.frees.insert(name.to_string(), ty);
    }

    fn with_self(mut self, name: &str, ty: Type) -> Self {
        self.self_const = Some((name.to_string(), ty));
        self
    }

    fn unify(&mut self, a: &Type, b: &Type, loc: Loc) -> Result<(), ElabError> {
        if self.u.unify(a, b) {
            Ok(())
        } else {
            Err(ElabError::ty(loc, format!("expected {}, found {}", self.u.resolve(a), self.u.resolve(b))))
        }
    }

    fn check_type(&self, ty: &Type, loc: Loc) -> Result<(), ElabError> {
        check_type_wf(self.ctx, ty, None, loc)
    }

    fn constant(&mut self, name: &str) -> Option<(Term, Type)> {
        if let Some((n, ty)) = &self.self_const {
            if n == name {
                return Some((Term::constant(n, ty.clone()), ty.clone()));
            }
        }
        let scheme = logical_scheme(name).or_else(|| self.ctx.const_info(name).map(|c| c.scheme.clone()))?;
        let ty = self.u.instantiate(&scheme);
        Some((Term::constant(name, ty.clone()), ty))
    }

    fn constant_or_err(&mut self, name: &str, loc: Loc) -> Result<(Term, Type), ElabError> {
        self.constant(name).ok_or_else(|| ElabError::ty(loc, format!("unknown constant {name}")))
    }

    fn apply(&mut self, f: (Term, Type), a: (Term, Type), loc: Loc) -> Result<(Term, Type), ElabError> {
        let res = self.u.fresh();
        let want = Type::fun(a.1.clone(), res.clone());
        if !self.u.unify(&f.1, &want) {
            let fty = self.u.resolve(&f.1);
            let msg = match fty.dest_fun() {
                Some((d, _)) => format!("argument of type {} but found {}", d, self.u.resolve(&a.1)),
                None => format!("a function, found a term of type {fty}"),
            };
            return Err(ElabError::ty(loc, format!("expected {msg}")));
        }
        Ok((Term::app(f.0, a.0), res))
    }

    fn elab(&mut self, r: &RawTerm) -> Result<(Term, Type), ElabError> {
        match r {
            RawTerm::Ident(n, loc) => {
                if let Some(i) = self.bound.iter().rev().position(|(m, _)| m == n) {
                    let ty = self.bound[self.bound.len() - 1 - i].1.clone();
                    return Ok((Term::Bound(i, ty.clone()), ty));
                }
                if let Some(c) = self.constant(n) {
                    return Ok(c);
                }
                if n.starts_with('?') {
                    return Err(ElabError::invalid(*loc, format!("schematic variable {n} is not allowed here")));
                }
                if !n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') {
                    return Err(ElabError::ty(*loc, format!("unknown constant {n}")));
                }
                let ty = match self.frees.get(n) {
                    Some(t) => t.clone(),
                    None => {
                        let t = self.u.fresh();
                        self.frees.insert(n.clone(), t.clone());
                        t
                    }
                };
                Ok((Term::Free(n.clone(), ty.clone()), ty))
            }
            RawTerm::Num(k, loc) => {
                let mut t = self.constant_or_err("0", *loc)?;
                self.unify(&Type::con("nat", vec![]), &t.1, *loc)?;
                for _ in 0..*k {
                    let s = self.constant_or_err("Suc", *loc)?;
                    t = self.apply(s, t, *loc)?;
                }
                Ok(t)
            }
            RawTerm::List(items, loc) => {
                let mut t = self.constant_or_err("[]", *loc)?;
                for it in items.iter().rev() {
                    let x = self.elab(it)?;
                    let c = self.constant_or_err("#", *loc)?;
                    let cx = self.apply(c, x, it.loc())?;
                    t = self.apply(cx, t, *loc)?;
                }
                Ok(t)
            }
            RawTerm::App(f, a) => {
                let f2 = self.elab(f)?;
                let a2 = self.elab(a)?;
                self.apply(f2, a2, a.loc())
            }
            RawTerm::Infix(op, l, rr, loc) => {
                let c = self.constant_or_err(op, *loc)?;
                let l2 = self.elab(l)?;
                let r2 = self.elab(rr)?;
                let cl = self.apply(c, l2, l.loc())?;
                self.apply(cl, r2, rr.loc())
            }
            RawTerm::All(n, annot, body, loc) => {
                let ty = match annot {
                    Some(t) => {
                        self.check_type(t, *loc)?;
                        t.clone()
                    }
                    None => self.u.fresh(),
                };
                self.bound.push((n.clone(), ty.clone()));
                let b = self.elab(body);
                self.bound.pop();
                let (b, bty) = b?;
                self.unify(&Type::bool(), &bty, body.loc())?;
                let q = Term::constant(ALL, Type::fun(Type::fun(ty.clone(), Type::bool()), Type::bool()));
                Ok((Term::app(q, Term::Abs(n.clone(), ty, std::sync::Arc::new(b))), Type::bool()))
            }
            RawTerm::Typed(t, ty, loc) => {
                self.check_type(ty, *loc)?;
                let t2 = self.elab(t)?;
                self.unify(ty, &t2.1, *loc)?;
                Ok(t2)
            }
        }
    }

    /// Elaborate, resolve, default leftover type variables and re-check.
    pub(crate) fn finish(&mut self, r: &RawTerm, expected: Option<&Type>) -> Result<Term, ElabError> {
        let (t, ty) = self.elab(r)?;
        if let Some(e) = expected {
            self.unify(e, &ty, r.loc())?;
        }
        let t = self.u.resolve_term(&t);
        let t = default_type_vars(&t);
        infer_type(self.ctx, &t).map_err(|e| ElabError::ty(r.loc(), e.to_string()))?;
        Ok(t)
    }

    pub(crate) fn finish_prop(&mut self, r: &RawTerm) -> Result<Term, ElabError> {
        self.finish(r, Some(&Type::bool()))
    }
}

/// Replace flexible type variables by fresh rigid ones `'a`, `'b`, ...
fn default_type_vars(t: &Term) -> Term {
    let vars = t.tyvars();
    let flexible: Vec<&String> = vars.iter().filter(|v| v.starts_with('?')).collect();
    if flexible.is_empty() {
        return t.clone();
    }
    let mut used: BTreeSet<String> = vars.iter().filter(|v| !v.starts_with('?')).cloned().collect();
    let mut map = BTreeMap::new();
    let mut names = (0..).map(|i: usize| {
        let letter = (b'a' + (i % 26) as u8) as char;
        if i < 26 {
            format!("'{letter}")
        } else {
            format!("'{letter}{}", i / 26)
        }
    });
    for v in flexible {
        let n = names.by_ref().find(|n| !used.contains(n)).expect("infinite names");
        used.insert(n.clone());
        map.insert(v.clone(), Type::Var(n));
    }
    t.subst_types(&map)
}

fn check_type_wf(ctx: &TheoryContext, ty: &Type, params: Option<&[String]>, loc: Loc) -> Result<(), ElabError> {
    match ty {
        Type::Var(v) => match params {
            Some(ps) if !ps.contains(v) => Err(ElabError::ty(loc, format!("type variable {v} is not a parameter of the datatype"))),
            _ => Ok(()),
        },
        Type::Fun(d, c) => {
            check_type_wf(ctx, d, params, loc)?;
            check_type_wf(ctx, c, params, loc)
        }
        Type::Con(n, args) => {
            match ctx.datatypes.get(n) {
                None => return Err(ElabError::ty(loc, format!("unknown type {n}"))),
                Some(d) if d.params.len() != args.len() => {
                    return Err(ElabError::ty(loc, format!("type {n} expects {} argument(s), found {}", d.params.len(), args.len())))
                }
                _ => {}
            }
            args.iter().try_for_each(|a| check_type_wf(ctx, a, params, loc))
        }
    }
}

fn mentions_type(ty: &Type, name: &str) -> bool {
    match ty {
        Type::Var(_) => false,
        Type::Con(n, args) => n == name || args.iter().any(|a| mentions_type(a, name)),
        Type::Fun(d, c) => mentions_type(d, name) || mentions_type(c, name),
    }
}

/// Elaborate with the default search budget for lemma proofs.
pub fn elaborate(items: &[TheoryItem]) -> Result<TheoryContext, ElabError> {
    elaborate_with(items, &SearchBudget::default())
}

/// Parse and elaborate a theory text.
pub fn load_theory(text: &str, budget: &SearchBudget) -> Result<TheoryContext, ElabError> {
    let items = parse_theory(text)?;
    elaborate_with(&items, budget)
}

/// Process items in order, proving each lemma with its strategy under `budget`.
pub fn elaborate_with(items: &[TheoryItem], budget: &SearchBudget) -> Result<TheoryContext, ElabError> {
    let mut ctx = TheoryContext::new();
    for item in items {
        match item {
            TheoryItem::Datatype(d) => add_datatype(&mut ctx, d)?,
            TheoryItem::FunDef(f) => add_fundef(&mut ctx, f)?,
            TheoryItem::Strategy(s) => {
                if ctx.strategies.contains_key(&s.name) {
                    return Err(ElabError::DuplicateName { loc: s.loc, name: s.name.clone() });
                }
                check_refs(&ctx, &s.strategy, s.loc)?;
                ctx.strategies.insert(s.name.clone(), s.strategy.clone());
            }
            TheoryItem::Lemma(l) => add_lemma(&mut ctx, l, budget)?,
            TheoryItem::Goal(g) => {
                check_fresh_statement_name(&ctx, &g.name, g.loc)?;
                let statement = elaborate_statement(&ctx, &g.statement)?;
                check_refs(&ctx, &g.strategy, g.loc)?;
                ctx.goals.push(Goal { name: g.name.clone(), statement, strategy: g.strategy.clone() });
            }
        }
    }
    Ok(ctx)
}

/// Named references in `s` must already be defined (which rules out cycles).
pub fn check_refs(ctx: &TheoryContext, s: &Strategy, loc: Loc) -> Result<(), ElabError> {
    match s.references().into_iter().find(|r| !ctx.strategies.contains_key(*r)) {
        Some(r) => Err(ElabError::UnknownStrategy { loc, name: r.to_string() }),
        None => Ok(()),
    }
}

fn check_fresh_statement_name(ctx: &TheoryContext, name: &str, loc: Loc) -> Result<(), ElabError> {
    if ctx.lemmas.contains_key(name) || ctx.goals.iter().any(|g| g.name == name) {
        return Err(ElabError::DuplicateName { loc, name: name.to_string() });
    }
    Ok(())
}

fn elaborate_statement(ctx: &TheoryContext, raw: &RawTerm) -> Result<Term, ElabError> {
    let t = TermElaborator::new(ctx).finish_prop(raw)?;
    let sg = strip_goal(&t);
    if sg.conclusion.dest_eq().is_none() {
        return Err(ElabError::invalid(raw.loc(), "statement must conclude with an equation"));
    }
    Ok(t)
}

fn declare_mixfix(ctx: &mut TheoryContext, m: &Option<Mixfix>, arity: usize, loc: Loc) -> Result<(), ElabError> {
    if let Some(Mixfix::Infix(op, assoc, prec)) = m {
        if arity < 2 {
            return Err(ElabError::invalid(loc, format!("infix {op} needs a binary constant")));
        }
        if is_logical(op) {
            return Err(ElabError::DuplicateName { loc, name: op.clone() });
        }
        ctx.syntax.declare(op, *prec, *assoc);
    }
    Ok(())
}

fn internal_name(name: &str, m: &Option<Mixfix>) -> String {
    m.as_ref().map_or(name, |m| m.symbol()).to_string()
}

fn add_datatype(ctx: &mut TheoryContext, d: &DatatypeDecl) -> Result<(), ElabError> {
    if ctx.datatypes.contains_key(&d.name) {
        return Err(ElabError::DuplicateName { loc: d.loc, name: d.name.clone() });
    }
    let mut seen = BTreeSet::new();
    for p in &d.params {
        if !seen.insert(p) {
            return Err(ElabError::DuplicateName { loc: d.loc, name: p.clone() });
        }
    }
    ctx.datatypes.insert(d.name.clone(), DatatypeInfo { name: d.name.clone(), params: d.params.clone(), ctors: vec![] });
    let self_ty = ctx.datatypes[&d.name].self_type();
    let mut ctors = Vec::new();
    let mut has_base = false;
    for c in &d.ctors {
        for a in &c.args {
            check_type_wf(ctx, a, Some(&d.params), c.loc)?;
            if *a != self_ty && mentions_type(a, &d.name) {
                return Err(ElabError::invalid(c.loc, format!("argument type {a} of {} uses {} in a nested position", c.name, d.name)));
            }
        }
        has_base |= !c.args.contains(&self_ty);
        let name = internal_name(&c.name, &c.mixfix);
        if ctx.constants.contains_key(&name) || ctors.iter().any(|k: &CtorInfo| k.base_name == c.name) {
            return Err(ElabError::DuplicateName { loc: c.loc, name });
        }
        declare_mixfix(ctx, &c.mixfix, c.args.len(), c.loc)?;
        ctx.constants.insert(
            name.clone(),
            ConstInfo { name: name.clone(), base_name: c.name.clone(), scheme: Type::curried(c.args.clone(), self_ty.clone()), kind: ConstKind::Constructor },
        );
        ctors.push(CtorInfo { name, base_name: c.name.clone(), args: c.args.clone() });
    }
    if !has_base {
        return Err(ElabError::invalid(d.loc, format!("datatype {} has no non-recursive constructor", d.name)));
    }
    ctx.datatypes[&d.name].ctors = ctors;
    Ok(())
}

fn add_fundef(ctx: &mut TheoryContext, f: &FunDef) -> Result<(), ElabError> {
    let name = internal_name(&f.name, &f.mixfix);
    if ctx.constants.contains_key(&name) || ctx.constants.values().any(|c| c.base_name == f.name) {
        return Err(ElabError::DuplicateName { loc: f.loc, name });
    }
    check_type_wf(ctx, &f.ty, None, f.loc)?;
    let arity = f.ty.strip_fun().0.len();
    declare_mixfix(ctx, &f.mixfix, arity, f.loc)?;
    ctx.constants.insert(name.clone(), ConstInfo { name: name.clone(), base_name: f.name.clone(), scheme: f.ty.clone(), kind: ConstKind::Defined });

    let term_err = |loc: Loc, reason: String| ElabError::Termination { loc, name: f.name.clone(), reason };
    let mut eqs = Vec::new();
    for raw in &f.equations {
        let t = TermElaborator::new(ctx).with_self(&name, f.ty.clone()).finish_prop(raw)?;
        let Some((l, r)) = t.dest_eq() else {
            return Err(term_err(raw.loc(), "expected an equation".into()));
        };
        eqs.push((raw.loc(), l.clone(), r.clone()));
    }

    // pattern shape
    let mut rec_arg: Option<usize> = None;
    let mut ctor_of_eq = Vec::new();
    for (i, (loc, l, _)) in eqs.iter().enumerate() {
        let (head, args) = l.strip_app();
        if head.const_name() != Some(name.as_str()) || args.len() != arity {
            return Err(term_err(*loc, format!("left-hand side must apply {} to {arity} argument(s)", f.name)));
        }
        let mut vars = BTreeSet::new();
        let mut pat_pos = None;
        for (k, a) in args.iter().enumerate() {
            match a {
                Term::Free(v, _) => {
                    if !vars.insert(v.clone()) {
                        return Err(term_err(*loc, format!("variable {v} occurs twice in the pattern")));
                    }
                }
                _ => {
                    let (ch, cargs) = a.strip_app();
                    let Some(cn) = ch.const_name().filter(|c| ctx.is_constructor(c)) else {
                        return Err(term_err(*loc, format!("argument {} must be a variable or a constructor pattern", k + 1)));
                    };
                    for ca in cargs {
                        let Term::Free(v, _) = ca else {
                            return Err(term_err(*loc, "nested constructor patterns are not supported".into()));
                        };
                        if !vars.insert(v.clone()) {
                            return Err(term_err(*loc, format!("variable {v} occurs twice in the pattern")));
                        }
                    }
                    if pat_pos.is_some() {
                        return Err(term_err(*loc, "constructor patterns in more than one argument".into()));
                    }
                    pat_pos = Some((k, cn.to_string()));
                }
            }
        }
        match (&pat_pos, rec_arg, i) {
            (Some((k, _)), None, 0) => rec_arg = Some(*k),
            (Some((k, _)), Some(r), _) if *k == r => {}
            (None, None, 0) => {}
            _ => return Err(term_err(*loc, "all equations must match on the same argument".into())),
        }
        ctor_of_eq.push(pat_pos.map(|p| p.1));
    }

    match rec_arg {
        None => {
            if eqs.len() != 1 {
                return Err(term_err(f.loc, "several equations without a constructor pattern".into()));
            }
        }
        Some(k) => {
            let arg_ty = f.ty.strip_fun().0[k].clone();
            let Some(dt) = ctx.datatype_of(&arg_ty) else {
                return Err(term_err(f.loc, format!("argument {} is not of a datatype", k + 1)));
            };
            for c in &dt.ctors {
                let n = ctor_of_eq.iter().filter(|e| e.as_deref() == Some(c.name.as_str())).count();
                if n == 0 {
                    return Err(term_err(f.loc, format!("missing equation for constructor {}", c.base_name)));
                }
                if n > 1 {
                    return Err(term_err(f.loc, format!("more than one equation for constructor {}", c.base_name)));
                }
            }
        }
    }

    let mut rules = Vec::new();
    for (loc, l, r) in &eqs {
        let (_, args) = l.strip_app();
        let allowed: BTreeSet<String> = match rec_arg {
            Some(k) => {
                let arg_ty = args[k].type_hint();
                args[k]
                    .strip_app()
                    .1
                    .iter()
                    .filter(|a| a.type_hint() == arg_ty)
                    .filter_map(|a| match a {
                        Term::Free(v, _) => Some(v.clone()),
                        _ => None,
                    })
                    .collect()
            }
            None => BTreeSet::new(),
        };
        check_calls(r, &name, arity, rec_arg, &allowed).map_err(|reason| term_err(*loc, reason))?;
        let lvars = l.free_names();
        if let Some(v) = r.free_names().into_iter().find(|v| !lvars.contains(v)) {
            return Err(term_err(*loc, format!("variable {v} on the right-hand side does not occur on the left")));
        }
        rules.push(RewriteRule::from_equation(l, r, RuleOrigin::Definition(name.clone())));
    }
    ctx.definitions.insert(name.clone(), Definition { constant: name, arity, rec_arg, rules });
    Ok(())
}

/// Recursive calls must be fully applied with a structurally smaller
/// variable in the recursion position.
fn check_calls(t: &Term, name: &str, arity: usize, rec_arg: Option<usize>, allowed: &BTreeSet<String>) -> Result<(), String> {
    let (head, args) = t.strip_app();
    if head.const_name() == Some(name) {
        let Some(k) = rec_arg else {
            return Err("recursive call without a constructor pattern".into());
        };
        if args.len() < arity {
            return Err("recursive call is not fully applied".into());
        }
        match args[k] {
            Term::Free(v, _) if allowed.contains(v) => {}
            other => return Err(format!("recursive call on {other}, which is not a constructor argument of the pattern")),
        }
    } else if let Term::Abs(_, _, b) = head {
        check_calls(b, name, arity, rec_arg, allowed)?;
    }
    args.iter().try_for_each(|a| check_calls(a, name, arity, rec_arg, allowed))
}

fn add_lemma(ctx: &mut TheoryContext, l: &LemmaDecl, budget: &SearchBudget) -> Result<(), ElabError> {
    check_fresh_statement_name(ctx, &l.name, l.loc)?;
    let statement = elaborate_statement(ctx, &l.statement)?;
    check_refs(ctx, &l.strategy, l.loc)?;
    let result = search(&l.strategy, &statement, ctx, budget);
    let Some(script) = result.script else {
        return Err(ElabError::ProofFailed { loc: l.loc, name: l.name.clone() });
    };
    if let Err(e) = replay(&script, &statement, ctx, budget) {
        return Err(ElabError::ReplayMismatch { loc: l.loc, name: l.name.clone(), reason: e.to_string() });
    }
    if l.simp {
        let sg = strip_goal(&statement);
        if !sg.premises.is_empty() {
            return Err(ElabError::invalid(l.loc, format!("simp lemma {} has premises; conditional rules are not supported", l.name)));
        }
        let (lhs, rhs) = sg.conclusion.dest_eq().expect("checked equation");
        let rule = RewriteRule::from_equation(lhs, rhs, RuleOrigin::SimpLemma(l.name.clone()));
        if !rule.is_well_formed() {
            return Err(ElabError::invalid(l.loc, format!("lemma {} cannot be used as a left-to-right rewrite rule", l.name)));
        }
        ctx.simp_lemmas.push(rule);
    }
    ctx.lemmas.insert(l.name.clone(), Lemma { name: l.name.clone(), statement, simp: l.simp, script });
    Ok(())
}
