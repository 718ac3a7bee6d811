//! Goal-oriented conjecturing: generalize the goal, then mutate sub-terms of
//! the goal and its generalizations with constants related through the
//! defining equations.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::tactics::{subgoal_tac, ProofState};
use crate::term::{fresh_name, infer_type, is_logical, mk_goal, strip_goal, Position, Term, Type, Unifier};
use crate::theory::TheoryContext;

/// Default cap on the number of cleaned candidates.
pub const DEFAULT_MAX_CONJECTURES: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    Constant,
    CommonSubterm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizationTarget {
    pub kind: TargetKind,
    pub term: Term,
    pub suggested_name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Original,
    Generalized { target: String },
    Mutated { source: String, position: Position, constant: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Original => write!(f, "original"),
            Provenance::Generalized { target } => write!(f, "generalize {target}"),
            Provenance::Mutated { source, position, constant } => write!(f, "mutate [{source}] at {position} with {constant}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Conjecture {
    pub statement: Term,
    pub provenance: Provenance,
}

/// Constants of `g` in first-occurrence order, then repeated compound
/// sub-terms in pre-order (enclosing terms before their parts).
pub fn extract_targets(ctx: &TheoryContext, g: &Term) -> Vec<GeneralizationTarget> {
    let mut out = Vec::new();
    for (name, ty) in g.consts() {
        if is_logical(&name) {
            continue;
        }
        out.push(GeneralizationTarget { kind: TargetKind::Constant, term: Term::Const(name.clone(), ty), suggested_name: ctx.base_name(&name).to_string() });
    }
    let subs = g.subterms();
    let mut seen: HashSet<&Term> = HashSet::new();
    for (pos, t) in &subs {
        if pos.0.is_empty() || t.is_var() || matches!(t, Term::Const(..) | Term::Abs(..)) || !t.is_closed() {
            continue;
        }
        if t.head_const().is_some_and(is_logical) || t.type_hint().is_fun() || !seen.insert(t) {
            continue;
        }
        if subs.iter().filter(|(_, s)| s == t).count() >= 2 {
            out.push(GeneralizationTarget { kind: TargetKind::CommonSubterm, term: (*t).clone(), suggested_name: "v".into() });
        }
    }
    out
}

/// Replace every occurrence of the target by a fresh variable bound at the
/// front of the goal. Absent when the result does not type-check.
pub fn generalize(ctx: &TheoryContext, g: &Term, target: &GeneralizationTarget) -> Option<Conjecture> {
    let ty = match target.kind {
        TargetKind::Constant => {
            let name = target.term.const_name()?;
            let types: BTreeSet<Type> = g
                .subterms()
                .into_iter()
                .filter_map(|(_, t)| match t {
                    Term::Const(n, ty) if n == name => Some(ty.clone()),
                    _ => None,
                })
                .collect();
            if types.len() != 1 {
                return None;
            }
            types.into_iter().next()?
        }
        TargetKind::CommonSubterm => target.term.type_hint(),
    };
    let mut avoid = g.free_names();
    avoid.extend(g.binder_names());
    let name = fresh_name(&target.suggested_name, &avoid);
    let var = Term::free(&name, ty.clone());
    let body = match target.kind {
        TargetKind::Constant => g.replace_all(&Term::Const(target.term.const_name()?.to_string(), ty.clone()), &var),
        TargetKind::CommonSubterm => g.replace_all(&target.term, &var),
    };
    let statement = Term::mk_all(&name, &ty, &body);
    matches!(infer_type(ctx, &statement), Ok(t) if t.is_bool())
        .then(|| Conjecture { statement, provenance: Provenance::Generalized { target: ctx.print(&target.term) } })
}

/// Non-constructor constants on the right-hand sides of the defining
/// equations of `cs`, excluding `cs` itself.
pub fn related_constants(ctx: &TheoryContext, cs: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in cs {
        for d in ctx.rhs_constants(c) {
            if is_logical(&d) || ctx.is_constructor(&d) || cs.contains(&d) || out.contains(&d) {
                continue;
            }
            out.push(d);
        }
    }
    out
}

fn is_mutation_site(ctx: &TheoryContext, ty: &Type) -> bool {
    match ty {
        Type::Var(_) => true,
        Type::Con(..) => !ty.is_bool() && ctx.datatype_of(ty).is_some(),
        Type::Fun(..) => false,
    }
}

enum Filler {
    Bound(usize, Type),
    Const(String, Type),
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect()
    })
}

/// Pre-order mutation of `base`: at every datatype-typed sub-term `t`, wrap
/// `t` in a related constant, with `t` in one argument slot and the other
/// slots filled by meta-bound variables in scope or nullary constants.
pub fn mutate(ctx: &TheoryContext, base: &Conjecture, related: &[String]) -> Vec<Conjecture> {
    let mut out = Vec::new();
    let source = ctx.print(&base.statement);
    let nullary: Vec<(String, Type)> = ctx.nullary_constants().into_iter().map(|c| (c.name.clone(), c.scheme.clone())).collect();
    for (pos, t) in base.statement.subterms() {
        let site_ty = t.type_hint();
        if !is_mutation_site(ctx, &site_ty) {
            continue;
        }
        let binders = base.statement.binders_at(&pos);
        let mut fillers: Vec<Filler> = binders.iter().enumerate().rev().map(|(i, (_, ty))| Filler::Bound(i, ty.clone())).collect();
        fillers.extend(nullary.iter().map(|(n, s)| Filler::Const(n.clone(), s.clone())));
        for c in related {
            let Some(info) = ctx.const_info(c) else { continue };
            let arity = info.scheme.strip_fun().0.len();
            if arity == 0 {
                continue;
            }
            for tuple in tuples(fillers.len(), arity - 1) {
                for slot in 0..arity {
                    let mut u = Unifier::new();
                    let cty = u.instantiate(&info.scheme);
                    let (arg_tys, res) = cty.strip_fun();
                    if !u.unify(&res, &site_ty) {
                        continue;
                    }
                    let mut args = Vec::with_capacity(arity);
                    let mut rest = tuple.iter();
                    let mut ok = true;
                    for (k, aty) in arg_tys.iter().enumerate() {
                        let arg = if k == slot {
                            ok &= u.unify(aty, &site_ty);
                            t.clone()
                        } else {
                            match &fillers[*rest.next().expect("tuple length")] {
                                Filler::Bound(i, ty) => {
                                    ok &= u.unify(aty, ty);
                                    Term::Bound(*i, ty.clone())
                                }
                                Filler::Const(n, scheme) => {
                                    let fty = u.instantiate(scheme);
                                    ok &= u.unify(aty, &fty);
                                    Term::constant(n, fty)
                                }
                            }
                        };
                        if !ok {
                            break;
                        }
                        args.push(arg);
                    }
                    if !ok {
                        continue;
                    }
                    let new = u.resolve_term(&Term::apps(Term::constant(c, cty.clone()), args));
                    if new.tyvars().iter().any(|v| v.starts_with('?')) {
                        continue;
                    }
                    if let Some(statement) = base.statement.replace_at(&pos, new) {
                        out.push(Conjecture {
                            statement,
                            provenance: Provenance::Mutated { source: source.clone(), position: pos.clone(), constant: c.clone() },
                        });
                    }
                }
            }
        }
    }
    out
}

/// Drop ill-typed candidates, duplicates up to renaming of bound variables,
/// copies of the original and premise-free `t = t`; keep at most `max`.
pub fn clean(ctx: &TheoryContext, cands: Vec<Conjecture>, original: &Term, max: usize) -> Vec<Conjecture> {
    let mut seen: HashSet<Term> = HashSet::new();
    seen.insert(original.clone());
    let mut out = Vec::new();
    for c in cands {
        if out.len() >= max {
            break;
        }
        if !matches!(infer_type(ctx, &c.statement), Ok(t) if t.is_bool()) || !c.statement.is_closed() {
            continue;
        }
        let sg = strip_goal(&c.statement);
        if sg.premises.is_empty() && sg.conclusion.dest_eq().is_some_and(|(l, r)| l == r) {
            continue;
        }
        if seen.insert(c.statement.clone()) {
            out.push(c);
        }
    }
    out
}

/// Result of one conjecturing run.
#[derive(Clone, Debug, Default)]
pub struct ConjectureSet {
    /// Candidates before cleaning.
    pub generated: usize,
    pub candidates: Vec<Conjecture>,
}

fn generalizations_of(ctx: &TheoryContext, g: &Term) -> (Vec<Conjecture>, Vec<String>) {
    let targets = extract_targets(ctx, g);
    let consts = targets.iter().filter(|t| t.kind == TargetKind::Constant).filter_map(|t| t.term.const_name().map(str::to_string)).collect();
    (targets.iter().filter_map(|t| generalize(ctx, g, t)).collect(), consts)
}

/// Generalizations of `g`, then mutations of `g`, then mutations of each
/// generalization, cleaned.
pub fn conjectures(ctx: &TheoryContext, g: &Term, max: usize) -> ConjectureSet {
    let (gens, consts) = generalizations_of(ctx, g);
    let related = related_constants(ctx, &consts);
    let mut all = gens.clone();
    all.extend(mutate(ctx, &Conjecture { statement: g.clone(), provenance: Provenance::Original }, &related));
    for c in &gens {
        all.extend(mutate(ctx, c, &related));
    }
    ConjectureSet { generated: all.len(), candidates: clean(ctx, all, g, max) }
}

/// Cleaned generalizations of `g` only.
pub fn generalizations(ctx: &TheoryContext, g: &Term, max: usize) -> ConjectureSet {
    let (gens, _) = generalizations_of(ctx, g);
    ConjectureSet { generated: gens.len(), candidates: clean(ctx, gens, g, max) }
}

fn insert_all(ctx: &TheoryContext, s: &ProofState, set: &ConjectureSet) -> Vec<ProofState> {
    set.candidates.iter().filter_map(|c| subgoal_tac(ctx, &c.statement, s).ok()).collect()
}

/// One successor per conjecture for subgoal 1, each inserting it with `subgoal_tac`.
pub fn conjecture_strategy(ctx: &TheoryContext, s: &ProofState, max: usize) -> (Vec<ProofState>, ConjectureSet) {
    let Some(g) = s.subgoals.first() else { return (Vec::new(), ConjectureSet::default()) };
    let set = conjectures(ctx, g, max);
    (insert_all(ctx, s, &set), set)
}

/// Like `conjecture_strategy` without the mutation step.
pub fn generalize_strategy(ctx: &TheoryContext, s: &ProofState, max: usize) -> (Vec<ProofState>, ConjectureSet) {
    let Some(g) = s.subgoals.first() else { return (Vec::new(), ConjectureSet::default()) };
    let set = generalizations(ctx, g, max);
    (insert_all(ctx, s, &set), set)
}

/// Goal text with its own binders, used by dumps: `!!x. P ==> l = r`.
pub fn statement_text(ctx: &TheoryContext, c: &Conjecture) -> String {
    let sg = strip_goal(&c.statement);
    ctx.print(&mk_goal(&sg.params, &sg.premises, sg.conclusion))
}
