//! Proof states and the atomic proof steps.

mod close;
mod quickcheck;

pub use close::{auto_tac, closes, fastforce_tac};
pub use quickcheck::{domain_of, find_counterexample, quickcheck_filter, QuickcheckConfig, QuickcheckMode};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::{fresh_name, infer_type, mk_goal, strip_goal, Term, Type};
use crate::theory::TheoryContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TacticError {
    #[error("no subgoals")]
    NoSubgoals,
    #[error("conjecture is not a closed proposition: {0}")]
    IllTypedConjecture(String),
    #[error("cannot do induction on {0}: not of a datatype")]
    NotInductable(String),
    #[error("no variable {0} in subgoal 1")]
    UnknownVariable(String),
}

/// Ordered subgoals plus the methods applied so far.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofState {
    pub subgoals: Vec<Term>,
    pub script: Vec<String>,
}

impl ProofState {
    pub fn init(goal: Term) -> ProofState {
        ProofState { subgoals: vec![goal], script: Vec::new() }
    }

    pub fn is_complete(&self) -> bool {
        self.subgoals.is_empty()
    }

    fn with(&self, subgoals: Vec<Term>, line: String) -> ProofState {
        let mut script = self.script.clone();
        script.push(line);
        ProofState { subgoals, script }
    }

    fn first(&self) -> Result<&Term, TacticError> {
        self.subgoals.first().ok_or(TacticError::NoSubgoals)
    }

    /// Subgoals numbered from 1, one per line.
    pub fn display(&self, ctx: &TheoryContext) -> String {
        self.subgoals.iter().enumerate().map(|(i, g)| format!("{}. {}\n", i + 1, ctx.print(g))).collect()
    }
}

impl fmt::Display for ProofState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.subgoals.iter().enumerate() {
            writeln!(f, "{}. {g}", i + 1)?;
        }
        Ok(())
    }
}

/// Insert `c` as a premise of subgoal 1 and add `c` as the next subgoal.
pub fn subgoal_tac(ctx: &TheoryContext, c: &Term, s: &ProofState) -> Result<ProofState, TacticError> {
    let g = s.first()?;
    let well_typed = matches!(infer_type(ctx, c), Ok(ty) if ty.is_bool());
    if !well_typed || !c.is_closed() || c.frees().iter().any(|(n, _)| n.starts_with('?')) {
        return Err(TacticError::IllTypedConjecture(ctx.print(c)));
    }
    let mut subgoals = vec![Term::mk_imp(c.clone(), g.clone()), c.clone()];
    subgoals.extend(s.subgoals[1..].iter().cloned());
    let text = ctx.print_for_script(c, &g.frees());
    Ok(s.with(subgoals, format!("apply (subgoal_tac \"{text}\")")))
}

/// An induction step: variable plus the variables to generalize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductSpec {
    pub var: String,
    pub arbitrary: Vec<String>,
}

impl fmt::Display for InductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arbitrary.is_empty() {
            write!(f, "apply (induct {})", self.var)
        } else {
            write!(f, "apply (induct {} arbitrary: {})", self.var, self.arbitrary.join(" "))
        }
    }
}

/// Structural induction on `v` in subgoal 1. Meta-bound variables of the
/// subgoal and the `arbitrary` free variables are generalized in the
/// induction hypotheses.
pub fn induct(ctx: &TheoryContext, v: &str, arbitrary: &[String], s: &ProofState) -> Result<ProofState, TacticError> {
    let g = s.first()?;
    let sg = strip_goal(g);
    let goal_frees = g.frees();
    let v_ty =
        sg.params.iter().chain(goal_frees.iter()).find(|(n, _)| n == v).map(|(_, t)| t.clone()).ok_or_else(|| TacticError::UnknownVariable(v.to_string()))?;
    let ctors = ctx.constructors_at(&v_ty).ok_or_else(|| TacticError::NotInductable(v.to_string()))?;

    let mut gen: Vec<(String, Type)> = sg.params.iter().filter(|(n, _)| n != v).cloned().collect();
    for a in arbitrary {
        let Some(p) = goal_frees.iter().find(|(n, _)| n == a && n != v) else {
            return Err(TacticError::UnknownVariable(a.clone()));
        };
        if !gen.iter().any(|(n, _)| n == a) {
            gen.push(p.clone());
        }
    }

    let body = mk_goal(&[], &sg.premises, sg.conclusion.clone());
    let mut avoid = body.free_names();
    avoid.extend(gen.iter().map(|(n, _)| n.clone()));
    avoid.remove(v);

    let mut cases = Vec::new();
    for (c, arg_tys) in ctors {
        let mut names = avoid.clone();
        let args: Vec<Term> = arg_tys
            .iter()
            .map(|ty| {
                let base = if *ty == v_ty { v } else { "x" };
                let n = fresh_name(base, &names);
                names.insert(n.clone());
                Term::free(&n, ty.clone())
            })
            .collect();
        let inst = Term::apps(c, args.iter().cloned());
        let sub = |t: &Term, by: &Term| t.subst(&BTreeMap::from([(v.to_string(), by.clone())]));
        let mut prems: Vec<Term> = args.iter().filter(|a| a.type_hint() == v_ty).map(|a| mk_goal(&gen, &[], sub(&body, a))).collect();
        prems.extend(sg.premises.iter().map(|p| sub(p, &inst)));
        let mut params: Vec<(String, Type)> = args
            .iter()
            .map(|a| match a {
                Term::Free(n, ty) => (n.clone(), ty.clone()),
                _ => unreachable!("arguments are variables"),
            })
            .collect();
        params.extend(gen.iter().cloned());
        cases.push(mk_goal(&params, &prems, sub(&sg.conclusion, &inst)));
    }
    let spec = InductSpec { var: v.to_string(), arbitrary: arbitrary.to_vec() };
    let mut subgoals = cases;
    subgoals.extend(s.subgoals[1..].iter().cloned());
    Ok(s.with(subgoals, spec.to_string()))
}

/// Induction variants tried by `Dynamic (Induct)`: for each datatype-typed
/// variable occurring as an argument of a recursively defined constant, in
/// first-occurrence order, induction without generalization and then with
/// every other free variable generalized.
pub fn dynamic_induct_variants(ctx: &TheoryContext, s: &ProofState) -> Vec<InductSpec> {
    let Some(g) = s.subgoals.first() else { return Vec::new() };
    let sg = strip_goal(g);
    let body = mk_goal(&[], &sg.premises, sg.conclusion.clone());
    let goal_frees = g.frees();
    let mut in_call: Vec<&str> = Vec::new();
    for (_, t) in body.subterms() {
        let (head, args) = t.strip_app();
        let recursive = head.const_name().and_then(|c| ctx.definition(c)).is_some_and(|d| d.rec_arg.is_some());
        if recursive {
            in_call.extend(args.iter().filter_map(|a| match a {
                Term::Free(n, _) => Some(n.as_str()),
                _ => None,
            }));
        }
    }
    let candidates: Vec<String> =
        body.frees().into_iter().filter(|(n, ty)| in_call.contains(&n.as_str()) && ctx.datatype_of(ty).is_some()).map(|(n, _)| n).collect();
    let mut out = Vec::new();
    for v in candidates {
        out.push(InductSpec { var: v.clone(), arbitrary: vec![] });
        let others: Vec<String> = goal_frees.iter().map(|(n, _)| n.clone()).filter(|n| *n != v).collect();
        if !others.is_empty() {
            out.push(InductSpec { var: v, arbitrary: others });
        }
    }
    out
}

/// Succeeds, appending `done`, exactly when no subgoals are left.
pub fn is_solved(s: &ProofState) -> Option<ProofState> {
    s.subgoals.is_empty().then(|| s.with(Vec::new(), "done".into()))
}
