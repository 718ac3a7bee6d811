//! Reference implementations used to check the library from the outside.
//! Nothing here calls the conjecture generator, the quickcheck module or the
//! ground evaluator.

#![allow(dead_code)]

use std::collections::HashMap;

use pgt_core::term::{strip_goal, Term, Type};
use pgt_core::theory::ast::RawTerm;
use pgt_core::theory::{parse_term, TheoryContext};

// ---------------------------------------------------------------------------
// Conjecture enumeration over untyped syntax trees. Candidates are built as
// source text and typed by the elaborator; ill-typed ones are dropped.

fn is_constant(ctx: &TheoryContext, name: &str) -> bool {
    ctx.constants.contains_key(name)
}

/// Constant names of the raw goal in left-to-right order (logical ones excluded).
fn raw_constants(ctx: &TheoryContext, t: &RawTerm, out: &mut Vec<String>) {
    let mut add = |n: &str| {
        if is_constant(ctx, n) && !out.iter().any(|m| m == n) {
            out.push(n.to_string());
        }
    };
    match t {
        RawTerm::Ident(n, _) => add(n),
        RawTerm::Infix(op, l, r, _) => {
            raw_constants(ctx, l, out);
            if op != "=" && op != "==>" && is_constant(ctx, op) && !out.iter().any(|m| m == op) {
                out.push(op.clone());
            }
            raw_constants(ctx, r, out);
        }
        RawTerm::App(f, a) => {
            raw_constants(ctx, f, out);
            raw_constants(ctx, a, out);
        }
        RawTerm::All(_, _, b, _) => raw_constants(ctx, b, out),
        RawTerm::List(items, _) => items.iter().for_each(|i| raw_constants(ctx, i, out)),
        RawTerm::Typed(t, _, _) => raw_constants(ctx, t, out),
        RawTerm::Num(..) => {}
    }
}

fn ident(n: &str) -> RawTerm {
    RawTerm::Ident(n.to_string(), Default::default())
}

fn app(f: RawTerm, a: RawTerm) -> RawTerm {
    RawTerm::App(Box::new(f), Box::new(a))
}

fn replace_constant(t: &RawTerm, c: &str, v: &str) -> RawTerm {
    let go = |x: &RawTerm| replace_constant(x, c, v);
    match t {
        RawTerm::Ident(n, _) if n == c => ident(v),
        RawTerm::Infix(op, l, r, _) if op == c => app(app(ident(v), go(l)), go(r)),
        RawTerm::Infix(op, l, r, loc) => RawTerm::Infix(op.clone(), Box::new(go(l)), Box::new(go(r)), *loc),
        RawTerm::App(f, a) => app(go(f), go(a)),
        RawTerm::All(n, ty, b, loc) if n != c => RawTerm::All(n.clone(), ty.clone(), Box::new(go(b)), *loc),
        RawTerm::List(items, loc) => RawTerm::List(items.iter().map(go).collect(), *loc),
        RawTerm::Typed(x, ty, loc) => RawTerm::Typed(Box::new(go(x)), ty.clone(), *loc),
        other => other.clone(),
    }
}

/// Every node in pre-order with the binder names in scope.
fn raw_sites(t: &RawTerm, scope: &mut Vec<String>, out: &mut Vec<(Vec<usize>, Vec<String>)>, path: &mut Vec<usize>) {
    out.push((path.clone(), scope.clone()));
    let kids: Vec<&RawTerm> = match t {
        RawTerm::App(f, a) => vec![f, a],
        RawTerm::Infix(_, l, r, _) => vec![l, r],
        RawTerm::All(_, _, b, _) => vec![b],
        RawTerm::List(items, _) => items.iter().collect(),
        RawTerm::Typed(x, _, _) => vec![x],
        _ => vec![],
    };
    if let RawTerm::All(n, _, _, _) = t {
        scope.push(n.clone());
    }
    for (i, k) in kids.into_iter().enumerate() {
        path.push(i);
        raw_sites(k, scope, out, path);
        path.pop();
    }
    if let RawTerm::All(..) = t {
        scope.pop();
    }
}

fn raw_at<'t>(t: &'t RawTerm, path: &[usize]) -> &'t RawTerm {
    let Some((&i, rest)) = path.split_first() else { return t };
    let kid = match t {
        RawTerm::App(f, a) => [f.as_ref(), a.as_ref()][i],
        RawTerm::Infix(_, l, r, _) => [l.as_ref(), r.as_ref()][i],
        RawTerm::All(_, _, b, _) => b,
        RawTerm::List(items, _) => &items[i],
        RawTerm::Typed(x, _, _) => x,
        _ => unreachable!(),
    };
    raw_at(kid, rest)
}

fn raw_replace(t: &RawTerm, path: &[usize], new: &RawTerm) -> RawTerm {
    let Some((&i, rest)) = path.split_first() else { return new.clone() };
    let mut t = t.clone();
    match &mut t {
        RawTerm::App(f, a) => {
            let k = if i == 0 { f } else { a };
            **k = raw_replace(k, rest, new);
        }
        RawTerm::Infix(_, l, r, _) => {
            let k = if i == 0 { l } else { r };
            **k = raw_replace(k, rest, new);
        }
        RawTerm::All(_, _, b, _) => **b = raw_replace(b, rest, new),
        RawTerm::List(items, _) => items[i] = raw_replace(&items[i], rest, new),
        RawTerm::Typed(x, _, _) => **x = raw_replace(x, rest, new),
        _ => unreachable!(),
    }
    t
}

fn arity(ctx: &TheoryContext, c: &str) -> usize {
    ctx.constants[c].scheme.strip_fun().0.len()
}

/// Every way to wrap each node in `c` applied to the node (one slot) and
/// fillers (the other slots): binder names in scope or nullary constants.
fn raw_mutations(ctx: &TheoryContext, base: &RawTerm, related: &[String]) -> Vec<RawTerm> {
    let nullary: Vec<String> = ctx.constants.values().filter(|c| c.scheme.strip_fun().0.is_empty()).map(|c| c.name.clone()).collect();
    let mut sites = Vec::new();
    raw_sites(base, &mut Vec::new(), &mut sites, &mut Vec::new());
    let mut out = Vec::new();
    for (path, scope) in sites {
        let t = raw_at(base, &path);
        let fillers: Vec<String> = scope.iter().cloned().chain(nullary.iter().cloned()).collect();
        for c in related {
            let n = arity(ctx, c);
            // all assignments of every slot from {t} ∪ fillers with t used exactly once
            let total = (fillers.len() + 1).pow(n as u32);
            for code in 0..total {
                let mut k = code;
                let mut choice = Vec::new();
                for _ in 0..n {
                    choice.push(k % (fillers.len() + 1));
                    k /= fillers.len() + 1;
                }
                if choice.iter().filter(|&&x| x == 0).count() != 1 {
                    continue;
                }
                let mut term = ident(c);
                for &x in &choice {
                    let arg = if x == 0 { t.clone() } else { ident(&fillers[x - 1]) };
                    term = app(term, arg);
                }
                out.push(raw_replace(base, &path, &term));
            }
        }
    }
    out
}

/// Cleaned candidate set for `goal_text`, computed by brute force.
pub fn enumerate_conjectures(ctx: &TheoryContext, goal_text: &str) -> Vec<Term> {
    let goal = ctx.read_term(goal_text, &[]).expect("goal elaborates");
    let fixed = goal.frees();
    let raw = parse_term(goal_text, &ctx.syntax).expect("goal parses");
    let mut consts = Vec::new();
    raw_constants(ctx, &raw, &mut consts);
    let mut related: Vec<String> = Vec::new();
    for c in &consts {
        if let Some(d) = ctx.definitions.get(c) {
            for r in &d.rules {
                for (n, _) in r.rhs.consts() {
                    if !ctx.is_constructor(&n) && !consts.contains(&n) && !related.contains(&n) {
                        related.push(n);
                    }
                }
            }
        }
    }
    let taken: Vec<String> = fixed.iter().map(|(n, _)| n.clone()).collect();
    let mut gens = Vec::new();
    for c in &consts {
        let mut v = ctx.constants[c].base_name.clone();
        while taken.contains(&v) {
            v.push('\'');
        }
        // the instance type at the occurrence keeps the other parts of the goal at their types
        let ty = goal.subterms().into_iter().find_map(|(_, t)| match t {
            Term::Const(n, ty) if n == c => Some(ty.clone()),
            _ => None,
        });
        gens.push(RawTerm::All(v.clone(), ty, Box::new(replace_constant(&raw, c, &v)), Default::default()));
    }
    let mut all: Vec<RawTerm> = gens.clone();
    all.extend(raw_mutations(ctx, &raw, &related));
    for g in &gens {
        all.extend(raw_mutations(ctx, g, &related));
    }
    let mut out: Vec<Term> = Vec::new();
    for r in all {
        let Ok(t) = ctx.read_term(&r.to_string(), &fixed) else { continue };
        if t == goal || out.contains(&t) {
            continue;
        }
        let sg = strip_goal(&t);
        if sg.premises.is_empty() && sg.conclusion.dest_eq().is_some_and(|(l, r)| l == r) {
            continue;
        }
        out.push(t);
    }
    out
}

// ---------------------------------------------------------------------------
// Counterexample search with a native list model of `[]`, `#`, `@`, `rev`
// and `itrev`.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Atom(usize),
    List(Vec<Value>),
}

fn eval(t: &Term, env: &HashMap<String, Value>) -> Option<Value> {
    let (head, args) = t.strip_app();
    let vals: Option<Vec<Value>> = args.iter().map(|a| eval(a, env)).collect();
    let vals = vals?;
    let list = |v: &Value| match v {
        Value::List(xs) => Some(xs.clone()),
        _ => None,
    };
    match (head, vals.as_slice()) {
        (Term::Free(n, _), []) => env.get(n).cloned(),
        (Term::Const(c, _), []) if c == "[]" => Some(Value::List(vec![])),
        (Term::Const(c, _), []) if c.starts_with('a') && c[1..].parse::<usize>().is_ok() => Some(Value::Atom(c[1..].parse().unwrap())),
        (Term::Const(c, _), [x, xs]) if c == "#" => {
            let mut v = vec![x.clone()];
            v.extend(list(xs)?);
            Some(Value::List(v))
        }
        (Term::Const(c, _), [xs, ys]) if c == "@" => {
            let mut v = list(xs)?;
            v.extend(list(ys)?);
            Some(Value::List(v))
        }
        (Term::Const(c, _), [xs]) if c == "rev" => {
            let mut v = list(xs)?;
            v.reverse();
            Some(Value::List(v))
        }
        (Term::Const(c, _), [xs, ys]) if c == "itrev" => {
            let mut v = list(xs)?;
            v.reverse();
            v.extend(list(ys)?);
            Some(Value::List(v))
        }
        _ => None,
    }
}

fn lists_upto(len: usize, atoms: usize) -> Vec<Value> {
    let mut out = vec![Value::List(vec![])];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for l in &layer {
            for a in 0..atoms {
                let mut m: Vec<Value> = l.clone();
                m.push(Value::Atom(a));
                next.push(m);
            }
        }
        out.extend(next.iter().cloned().map(Value::List));
        layer = next;
    }
    out
}

/// Status of a list-theory conjecture under exhaustive testing:
/// `Some(true)` refuted, `Some(false)` no counterexample, `None` outside the model.
pub fn refuted(goal: &Term, max_len: usize, atoms: usize) -> Option<bool> {
    let sg = strip_goal(goal);
    let vars: Vec<(String, Type)> = {
        let mut t = sg.conclusion.clone();
        for p in &sg.premises {
            t = Term::mk_imp(p.clone(), t);
        }
        t.frees()
    };
    let mut doms = Vec::new();
    for (_, ty) in &vars {
        match ty {
            Type::Con(n, _) if n == "list" => doms.push(lists_upto(max_len, atoms)),
            Type::Var(_) => doms.push((0..atoms).map(Value::Atom).collect()),
            _ => return None,
        }
    }
    let total: usize = doms.iter().map(Vec::len).product();
    let mut saw_unknown = false;
    for code in 0..total {
        let mut k = code;
        let mut env = HashMap::new();
        for ((n, _), d) in vars.iter().zip(&doms) {
            env.insert(n.clone(), d[k % d.len()].clone());
            k /= d.len();
        }
        let holds = |p: &Term| -> Option<bool> {
            let (l, r) = p.dest_eq()?;
            Some(eval(l, &env)? == eval(r, &env)?)
        };
        let prems: Option<Vec<bool>> = sg.premises.iter().map(holds).collect();
        match (prems, holds(&sg.conclusion)) {
            (Some(ps), Some(false)) if ps.iter().all(|&b| b) => return Some(true),
            (Some(_), Some(_)) => {}
            _ => saw_unknown = true,
        }
    }
    (!saw_unknown).then_some(false)
}

/// All ground lists of length at most `len` over atoms `a0..`, as terms of type `'a list`.
pub fn ground_lists(len: usize, atoms: usize) -> Vec<Term> {
    let elem = Type::var("'a");
    let lt = Type::con("list", vec![elem.clone()]);
    let cons = Term::constant("#", Type::curried([elem.clone(), lt.clone()], lt.clone()));
    lists_upto(len, atoms)
        .into_iter()
        .map(|v| {
            let Value::List(xs) = v else { unreachable!() };
            xs.iter().rev().fold(Term::constant("[]", lt.clone()), |acc, x| {
                let Value::Atom(i) = x else { unreachable!() };
                Term::apps(cons.clone(), [Term::constant(&format!("a{i}"), elem.clone()), acc])
            })
        })
        .collect()
}
