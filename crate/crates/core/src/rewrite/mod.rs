//! First-order matching, budgeted rewriting and ground evaluation.

mod eval;

pub use eval::{eval_ground, EvalError};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use thiserror::Error;

use crate::term::{match_type, Position, Step, Term, Type};

/// Default number of rewrite steps allowed in one `normalize` call.
pub const DEFAULT_STEP_BUDGET: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RuleOrigin {
    Definition(String),
    SimpLemma(String),
    /// Premise of the subgoal being closed, numbered from 1.
    Premise(usize),
}

impl fmt::Display for RuleOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleOrigin::Definition(c) => write!(f, "{c}.simps"),
            RuleOrigin::SimpLemma(n) => write!(f, "{n}"),
            RuleOrigin::Premise(i) => write!(f, "premise {i}"),
        }
    }
}

/// An oriented equation. Free variables whose name starts with `?` are
/// schematic, as are type variables starting with `?`.
#[derive(Clone, PartialEq, Debug)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
    pub origin: RuleOrigin,
}

impl RewriteRule {
    pub fn new(lhs: Term, rhs: Term, origin: RuleOrigin) -> RewriteRule {
        RewriteRule { lhs, rhs, origin }
    }

    /// Rule from an equation whose free variables and type variables are all
    /// made schematic.
    pub fn from_equation(lhs: &Term, rhs: &Term, origin: RuleOrigin) -> RewriteRule {
        let eq = Term::mk_eq(lhs.clone(), rhs.clone());
        let eq = make_schematic(&eq, |_| true);
        let (l, r) = eq.dest_eq().expect("still an equation");
        RewriteRule { lhs: l.clone(), rhs: r.clone(), origin }
    }

    /// Checks the rule invariants: lhs is not a variable, rhs variables are
    /// covered by lhs, both sides have the same type.
    pub fn is_well_formed(&self) -> bool {
        if matches!(self.lhs, Term::Free(..) | Term::Bound(..)) {
            return false;
        }
        let lv = self.lhs.free_names();
        self.rhs.free_names().iter().all(|v| lv.contains(v)) && self.lhs.type_hint() == self.rhs.type_hint()
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}  [{}]", self.lhs, self.rhs, self.origin)
    }
}

/// Rename free variables accepted by `which` to `?name` and every type
/// variable `'a` to `?'a`.
pub fn make_schematic(t: &Term, which: impl Fn(&str) -> bool) -> Term {
    let mut tyvars = BTreeMap::new();
    for v in t.tyvars() {
        if !v.starts_with('?') {
            tyvars.insert(v.clone(), Type::Var(format!("?{v}")));
        }
    }
    let t = t.subst_types(&tyvars);
    let binding: BTreeMap<String, Term> =
        t.frees().into_iter().filter(|(n, _)| !n.starts_with('?') && which(n)).map(|(n, ty)| (n.clone(), Term::Free(format!("?{n}"), ty))).collect();
    t.subst(&binding)
}

/// Ordered rule list with the per-call step budget.
#[derive(Clone, Debug)]
pub struct RuleSet {
    pub rules: Vec<RewriteRule>,
    pub step_budget: usize,
}

impl RuleSet {
    pub fn new(rules: Vec<RewriteRule>) -> RuleSet {
        RuleSet { rules, step_budget: DEFAULT_STEP_BUDGET }
    }

    pub fn with_budget(mut self, budget: usize) -> RuleSet {
        self.step_budget = budget;
        self
    }

    pub fn push(&mut self, rule: RewriteRule) {
        self.rules.push(rule);
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("rewrite step budget exhausted at {partial}")]
    BudgetExhausted { partial: Term },
}

/// Term and type bindings produced by a successful match.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Binding {
    pub terms: BTreeMap<String, Term>,
    pub types: BTreeMap<String, Type>,
}

impl Binding {
    /// Instantiate schematic variables of `t`.
    pub fn apply(&self, t: &Term) -> Term {
        let t = t.subst_types(&self.types);
        t.subst(&self.terms)
    }
}

fn is_schematic(name: &str) -> bool {
    name.starts_with('?')
}

fn match_into(p: &Term, t: &Term, b: &mut Binding) -> bool {
    match (p, t) {
        (Term::Free(n, pty), _) if is_schematic(n) => {
            if !match_type(pty, &t.type_hint(), &mut b.types, &|v| is_schematic(v)) {
                return false;
            }
            match b.terms.get(n) {
                Some(bound) => bound == t,
                None => {
                    b.terms.insert(n.clone(), t.clone());
                    true
                }
            }
        }
        (Term::Free(n, pty), Term::Free(m, ty)) => n == m && match_type(pty, ty, &mut b.types, &|v| is_schematic(v)),
        (Term::Bound(i, _), Term::Bound(j, _)) => i == j,
        (Term::Const(n, pty), Term::Const(m, ty)) => n == m && match_type(pty, ty, &mut b.types, &|v| is_schematic(v)),
        (Term::App(f, a), Term::App(g, c)) => match_into(f, g, b) && match_into(a, c, b),
        (Term::Abs(_, pty, pb), Term::Abs(_, ty, tb)) => match_type(pty, ty, &mut b.types, &|v| is_schematic(v)) && match_into(pb, tb, b),
        _ => false,
    }
}

/// First-order matching of `pattern` (schematic variables start with `?`)
/// against `t`.
pub fn match_term(pattern: &Term, t: &Term) -> Option<Binding> {
    let mut b = Binding::default();
    match_into(pattern, t, &mut b).then_some(b)
}

static TRACE_REWRITES: AtomicBool = AtomicBool::new(false);

/// Turn the rewrite trace on stderr on or off (one line per step).
pub fn set_trace_rewrites(on: bool) {
    TRACE_REWRITES.store(on, Ordering::Relaxed);
}

/// One rewrite step, as reported to the trace callback.
#[derive(Clone, Debug)]
pub struct RewriteStep {
    pub position: Position,
    pub origin: RuleOrigin,
    pub before: Term,
    pub after: Term,
}

struct Normalizer<'r> {
    rules: &'r RuleSet,
    steps: usize,
    on_step: Option<&'r mut dyn FnMut(&RewriteStep)>,
    trace: bool,
}

impl Normalizer<'_> {
    fn norm(&mut self, t: &Term, pos: &mut Vec<Step>) -> Result<Term, RewriteError> {
        let t = self.norm_args(t, pos)?;
        self.root(t, pos)
    }

    fn norm_args(&mut self, t: &Term, pos: &mut Vec<Step>) -> Result<Term, RewriteError> {
        Ok(match t {
            Term::App(f, a) => {
                pos.push(Step::Fun);
                let f2 = self.norm(f, pos)?;
                pos.pop();
                pos.push(Step::Arg);
                let a2 = self.norm(a, pos)?;
                pos.pop();
                if f2 == **f && a2 == **a {
                    t.clone()
                } else {
                    Term::app(f2, a2)
                }
            }
            Term::Abs(n, ty, body) => {
                pos.push(Step::Body);
                let b2 = self.norm(body, pos)?;
                pos.pop();
                Term::Abs(n.clone(), ty.clone(), std::sync::Arc::new(b2))
            }
            _ => t.clone(),
        })
    }

    fn root(&mut self, mut t: Term, pos: &mut Vec<Step>) -> Result<Term, RewriteError> {
        'outer: loop {
            for rule in &self.rules.rules {
                let Some(b) = match_term(&rule.lhs, &t) else { continue };
                if rule.rhs.subterms().iter().any(|(_, s)| matches!(s, Term::Abs(..))) && b.terms.values().any(|v| !v.is_closed()) {
                    // would capture loose bounds of the redex
                    continue;
                }
                if self.steps >= self.rules.step_budget {
                    return Err(RewriteError::BudgetExhausted { partial: t });
                }
                self.steps += 1;
                let after = b.apply(&rule.rhs);
                if self.trace || self.on_step.is_some() {
                    let step = RewriteStep { position: Position(pos.clone()), origin: rule.origin.clone(), before: t.clone(), after: after.clone() };
                    if self.trace {
                        eprintln!("{}  {}  {} → {}", step.position, step.origin, step.before, step.after);
                    }
                    if let Some(cb) = self.on_step.as_mut() {
                        cb(&step);
                    }
                }
                t = self.norm_args(&after, pos)?;
                continue 'outer;
            }
            return Ok(t);
        }
    }
}

/// Leftmost-innermost normalization with the first matching rule.
pub fn normalize(rules: &RuleSet, t: &Term) -> Result<Term, RewriteError> {
    let mut n = Normalizer { rules, steps: 0, on_step: None, trace: TRACE_REWRITES.load(Ordering::Relaxed) };
    n.norm(t, &mut Vec::new())
}

/// `normalize`, reporting every step to `on_step`.
pub fn normalize_with(rules: &RuleSet, t: &Term, on_step: &mut dyn FnMut(&RewriteStep)) -> Result<Term, RewriteError> {
    let mut n = Normalizer { rules, steps: 0, on_step: Some(on_step), trace: TRACE_REWRITES.load(Ordering::Relaxed) };
    n.norm(t, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn la() -> Type {
        Type::con("list", vec![Type::var("'a")])
    }

    fn sla() -> Type {
        Type::con("list", vec![Type::var("?'a")])
    }

    fn cons(ty: &Type, x: Term, xs: Term) -> Term {
        let Type::Con(_, args) = ty else { unreachable!() };
        Term::apps(Term::constant("#", Type::curried([args[0].clone(), ty.clone()], ty.clone())), [x, xs])
    }

    fn rev(ty: &Type, x: Term) -> Term {
        Term::app(Term::constant("rev", Type::fun(ty.clone(), ty.clone())), x)
    }

    fn app(ty: &Type, x: Term, y: Term) -> Term {
        Term::apps(Term::constant("@", Type::curried([ty.clone(), ty.clone()], ty.clone())), [x, y])
    }

    #[test]
    fn matches_cons_pattern() {
        let p = rev(&sla(), cons(&sla(), Term::free("?x", Type::var("?'a")), Term::free("?xs", sla())));
        let a = Term::free("a", Type::var("'a"));
        let nil = Term::constant("[]", la());
        let t = rev(&la(), cons(&la(), a.clone(), nil.clone()));
        let b = match_term(&p, &t).unwrap();
        assert_eq!(b.terms["?x"], a);
        assert_eq!(b.terms["?xs"], nil);
        assert_eq!(b.apply(&p), t);
        assert!(match_term(&p, &rev(&la(), nil)).is_none());
    }

    #[test]
    fn variable_pattern_binds_any_term() {
        let p = app(&sla(), Term::free("?xs", sla()), Term::constant("[]", sla()));
        let ys = rev(&la(), Term::free("ys", la()));
        let t = app(&la(), ys.clone(), Term::constant("[]", la()));
        assert_eq!(match_term(&p, &t).unwrap().terms["?xs"], ys);
    }

    #[test]
    fn nonlinear_pattern_requires_equal_instances() {
        let p = app(&sla(), Term::free("?xs", sla()), Term::free("?xs", sla()));
        let x = Term::free("x", la());
        let y = Term::free("y", la());
        assert!(match_term(&p, &app(&la(), x.clone(), x.clone())).is_some());
        assert!(match_term(&p, &app(&la(), x, y)).is_none());
    }

    #[test]
    fn budget_turns_loop_into_error() {
        let x = Term::free("x", la());
        let loop_rule = RewriteRule::new(rev(&la(), x.clone()), rev(&la(), rev(&la(), x.clone())), RuleOrigin::Premise(1));
        let rs = RuleSet::new(vec![loop_rule]).with_budget(50);
        assert!(matches!(normalize(&rs, &rev(&la(), x)), Err(RewriteError::BudgetExhausted { .. })));
    }

    #[test]
    fn schematic_renaming() {
        let t = app(&la(), Term::free("xs", la()), Term::constant("[]", la()));
        let s = make_schematic(&t, |_| true);
        assert_eq!(s, app(&sla(), Term::free("?xs", sla()), Term::constant("[]", sla())));
    }
}
