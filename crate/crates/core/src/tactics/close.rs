use std::collections::{BTreeMap, BTreeSet};

use super::ProofState;
use crate::rewrite::{match_term, normalize, RewriteRule, RuleOrigin};
use crate::term::{strip_goal, Term};
use crate::theory::TheoryContext;

fn schematic_params(t: &Term, params: &BTreeSet<String>) -> Term {
    let binding: BTreeMap<String, Term> =
        t.frees().into_iter().filter(|(n, _)| params.contains(n)).map(|(n, ty)| (n.clone(), Term::Free(format!("?{n}"), ty))).collect();
    t.subst(&binding)
}

/// Distinct constructors at corresponding positions.
fn clash(ctx: &TheoryContext, a: &Term, b: &Term) -> bool {
    let (ha, aa) = a.strip_app();
    let (hb, ab) = b.strip_app();
    match (ha.const_name(), hb.const_name()) {
        (Some(x), Some(y)) if ctx.is_constructor(x) && ctx.is_constructor(y) => {
            x != y || aa.len() != ab.len() || aa.iter().zip(&ab).any(|(p, q)| clash(ctx, p, q))
        }
        _ => false,
    }
}

fn schematic_names(t: &Term) -> BTreeSet<String> {
    t.free_names().into_iter().filter(|n| n.starts_with('?')).collect()
}

/// The closing procedure shared by `auto` and `fastforce`.
///
/// Premises are simplified with the simpset, their own meta-bound variables
/// made schematic, and become extra left-to-right rules. The goal closes when
/// the conclusion sides normalize to the same term, the conclusion is a
/// premise, or a premise is contradictory.
pub fn closes(ctx: &TheoryContext, goal: &Term, steps: usize) -> bool {
    let sg = strip_goal(goal);
    let simp = ctx.simpset(steps);
    let mut rules = simp.clone();
    for (i, p) in sg.premises.iter().enumerate() {
        if *p == sg.conclusion {
            return true;
        }
        let ps = strip_goal(p);
        if !ps.premises.is_empty() {
            continue;
        }
        let params: BTreeSet<String> = ps.params.iter().map(|(n, _)| n.clone()).collect();
        let concl = schematic_params(&ps.conclusion, &params);
        let Some((l, r)) = concl.dest_eq() else {
            if let Ok(n) = normalize(&simp, &concl) {
                if n.const_name() == Some("False") {
                    return true;
                }
            }
            continue;
        };
        let (Ok(l), Ok(r)) = (normalize(&simp, l), normalize(&simp, r)) else { continue };
        if l == r {
            continue;
        }
        if params.is_empty() && clash(ctx, &l, &r) {
            return true;
        }
        if matches!(l, Term::Free(..) | Term::Bound(..)) {
            continue;
        }
        let lv = schematic_names(&l);
        // a left side that reappears inside the right side can only loop
        let embeds = r.subterms().iter().any(|(_, s)| match_term(&l, s).is_some());
        if !schematic_names(&r).is_subset(&lv) || embeds {
            continue;
        }
        rules.push(RewriteRule::new(l, r, RuleOrigin::Premise(i + 1)));
    }
    match sg.conclusion.dest_eq() {
        Some((l, r)) => match (normalize(&rules, l), normalize(&rules, r)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        },
        None => normalize(&rules, &sg.conclusion).is_ok_and(|n| n.const_name() == Some("True")),
    }
}

/// Try to close every subgoal; fails only when none closes.
pub fn auto_tac(ctx: &TheoryContext, s: &ProofState, steps: usize) -> Option<ProofState> {
    let remaining: Vec<Term> = s.subgoals.iter().filter(|g| !closes(ctx, g, steps)).cloned().collect();
    if remaining.len() == s.subgoals.len() {
        return None;
    }
    Some(s.with(remaining, "apply auto".into()))
}

/// Close subgoal 1 completely or fail.
pub fn fastforce_tac(ctx: &TheoryContext, s: &ProofState, steps: usize) -> Option<ProofState> {
    let first = s.subgoals.first()?;
    closes(ctx, first, steps).then(|| s.with(s.subgoals[1..].to_vec(), "apply fastforce".into()))
}
