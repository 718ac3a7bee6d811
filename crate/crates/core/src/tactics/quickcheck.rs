use std::collections::{BTreeMap, HashMap};

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ProofState;
use crate::rewrite::eval_ground;
use crate::term::{mk_goal, strip_goal, Term, Type};
use crate::theory::TheoryContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuickcheckMode {
    Exhaustive,
    Random { seed: u64, trials: usize },
}

/// Bounds for counterexample search. Type variables are instantiated with
/// `element_domain_size` distinct atoms `a0, a1, ...`; `nat` values go up
/// to `max_nat`; other datatypes nest recursive constructors at most
/// `max_list_length` deep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuickcheckConfig {
    pub max_list_length: usize,
    pub element_domain_size: usize,
    pub max_nat: usize,
    pub mode: QuickcheckMode,
    /// Exhaustive mode stops after this many instantiations.
    pub max_instances: usize,
}

impl Default for QuickcheckConfig {
    fn default() -> QuickcheckConfig {
        QuickcheckConfig { max_list_length: 3, element_domain_size: 2, max_nat: 3, mode: QuickcheckMode::Exhaustive, max_instances: 100_000 }
    }
}

struct Domains<'c> {
    ctx: &'c TheoryContext,
    cfg: &'c QuickcheckConfig,
    cache: HashMap<(Type, usize), Option<Vec<Term>>>,
}

impl Domains<'_> {
    fn of(&mut self, ty: &Type) -> Option<Vec<Term>> {
        match ty {
            Type::Var(_) => Some((0..self.cfg.element_domain_size).map(|i| Term::constant(&format!("a{i}"), ty.clone())).collect()),
            Type::Fun(..) => None,
            Type::Con(n, _) => {
                let depth = if n == "nat" { self.cfg.max_nat } else { self.cfg.max_list_length };
                self.upto(ty, depth)
            }
        }
    }

    /// Values of datatype `ty` with at most `depth` nested recursive constructors.
    fn upto(&mut self, ty: &Type, depth: usize) -> Option<Vec<Term>> {
        if let Some(v) = self.cache.get(&(ty.clone(), depth)) {
            return v.clone();
        }
        let ctors = self.ctx.constructors_at(ty)?;
        let mut out: IndexSet<Term> = IndexSet::new();
        let mut ok = true;
        'ctors: for (c, arg_tys) in ctors {
            let recursive = arg_tys.iter().any(|a| a == ty);
            if recursive && depth == 0 {
                continue;
            }
            let mut doms = Vec::new();
            for a in &arg_tys {
                let d = if a == ty { self.upto(ty, depth - 1) } else { self.of(a) };
                match d {
                    Some(d) => doms.push(d),
                    None => {
                        ok = false;
                        break 'ctors;
                    }
                }
            }
            for combo in product(&doms) {
                out.insert(Term::apps(c.clone(), combo));
            }
        }
        let result = ok.then(|| {
            let mut v: Vec<Term> = out.into_iter().collect();
            v.sort_by_key(Term::size);
            v
        });
        self.cache.insert((ty.clone(), depth), result.clone());
        result
    }
}

fn product(doms: &[Vec<Term>]) -> Vec<Vec<Term>> {
    doms.iter().fold(vec![Vec::new()], |acc, d| {
        acc.iter()
            .flat_map(|prefix| {
                d.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect()
    })
}

/// Test values for `ty`, or `None` when the type cannot be enumerated
/// (function types, unknown type constructors).
pub fn domain_of(ctx: &TheoryContext, ty: &Type, cfg: &QuickcheckConfig) -> Option<Vec<Term>> {
    Domains { ctx, cfg, cache: HashMap::new() }.of(ty)
}

fn is_true(t: &Term) -> Option<bool> {
    match t.const_name() {
        Some("True") => Some(true),
        Some("False") => Some(false),
        _ => None,
    }
}

/// Three-valued truth of a closed proposition; meta-quantifiers range over
/// the bounded domains.
fn eval_prop(ctx: &TheoryContext, doms: &mut Domains, t: &Term) -> Option<bool> {
    if let Some((_, ty, body)) = t.dest_all() {
        let values = doms.of(ty)?;
        let mut unknown = false;
        for v in values {
            match eval_prop(ctx, doms, &body.instantiate_bound(&v)) {
                Some(false) => return Some(false),
                None => unknown = true,
                Some(true) => {}
            }
        }
        return (!unknown).then_some(true);
    }
    if let Some((p, q)) = t.dest_imp() {
        let p = eval_prop(ctx, doms, p);
        if p == Some(false) {
            return Some(true);
        }
        let q = eval_prop(ctx, doms, q);
        return match (p, q) {
            (_, Some(true)) => Some(true),
            (Some(true), q) => q,
            _ => None,
        };
    }
    if let Some((l, r)) = t.dest_eq() {
        return match (eval_ground(ctx, l), eval_ground(ctx, r)) {
            (Ok(a), Ok(b)) => Some(a == b),
            _ => None,
        };
    }
    eval_ground(ctx, t).ok().as_ref().and_then(is_true)
}

/// Search for an instantiation of the goal's variables that satisfies every
/// premise and falsifies the conclusion.
pub fn find_counterexample(ctx: &TheoryContext, goal: &Term, cfg: &QuickcheckConfig) -> Option<Vec<(String, Term)>> {
    let sg = strip_goal(goal);
    let body = mk_goal(&[], &sg.premises, sg.conclusion.clone());
    let vars = body.frees();
    let mut doms = Domains { ctx, cfg, cache: HashMap::new() };
    let mut values = Vec::new();
    for (_, ty) in &vars {
        values.push(doms.of(ty)?);
    }
    if values.iter().any(Vec::is_empty) {
        return None;
    }
    let check = |idx: &[usize], doms: &mut Domains| -> Option<Vec<(String, Term)>> {
        let binding: BTreeMap<String, Term> = vars.iter().enumerate().map(|(k, (n, _))| (n.clone(), values[k][idx[k]].clone())).collect();
        let prems_hold = sg.premises.iter().all(|p| eval_prop(ctx, doms, &p.subst(&binding)) == Some(true));
        if prems_hold && eval_prop(ctx, doms, &sg.conclusion.subst(&binding)) == Some(false) {
            return Some(vars.iter().map(|(n, _)| (n.clone(), binding[n].clone())).collect());
        }
        None
    };
    match cfg.mode {
        QuickcheckMode::Exhaustive => {
            let mut idx = vec![0usize; vars.len()];
            for _ in 0..cfg.max_instances {
                if let Some(cex) = check(&idx, &mut doms) {
                    return Some(cex);
                }
                // odometer, last variable fastest
                let mut k = idx.len();
                loop {
                    if k == 0 {
                        return None;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < values[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            None
        }
        QuickcheckMode::Random { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let idx: Vec<usize> = values.iter().map(|v| rng.gen_range(0..v.len())).collect();
                if let Some(cex) = check(&idx, &mut doms) {
                    return Some(cex);
                }
            }
            None
        }
    }
}

/// Identity when no counterexample to subgoal 1 is found, absent otherwise.
pub fn quickcheck_filter(ctx: &TheoryContext, s: &ProofState, cfg: &QuickcheckConfig) -> Option<ProofState> {
    let g = s.subgoals.first()?;
    match find_counterexample(ctx, g, cfg) {
        Some(_) => None,
        None => Some(s.clone()),
    }
}
