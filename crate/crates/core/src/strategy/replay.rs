use thiserror::Error;

use super::SearchBudget;
use crate::tactics::{auto_tac, fastforce_tac, induct, subgoal_tac, ProofState};
use crate::term::Term;
use crate::theory::TheoryContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("script line {line}: {reason}")]
pub struct ReplayError {
    /// 1-based line number; one past the end for a missing `done`.
    pub line: usize,
    pub reason: String,
}

fn quoted(arg: &str) -> Option<&str> {
    arg.strip_prefix('"')?.strip_suffix('"')
}

fn step(ctx: &TheoryContext, line: &str, s: &ProofState, budget: &SearchBudget) -> Result<ProofState, String> {
    let steps = budget.rewrite_steps;
    match line {
        "apply auto" => auto_tac(ctx, s, steps).ok_or_else(|| "auto closed no subgoal".to_string()),
        "apply fastforce" => fastforce_tac(ctx, s, steps).ok_or_else(|| "fastforce failed on subgoal 1".to_string()),
        _ => {
            let inner = line.strip_prefix("apply (").and_then(|r| r.strip_suffix(')')).ok_or_else(|| format!("unrecognized method `{line}`"))?;
            if let Some(arg) = inner.strip_prefix("subgoal_tac ") {
                let text = quoted(arg).ok_or_else(|| "subgoal_tac expects a quoted term".to_string())?;
                let fixed = s.subgoals.first().map(Term::frees).unwrap_or_default();
                let c = ctx.read_term(text, &fixed).map_err(|e| e.to_string())?;
                return subgoal_tac(ctx, &c, s).map_err(|e| e.to_string());
            }
            if let Some(arg) = inner.strip_prefix("induct ") {
                let (var, arbitrary) = match arg.split_once(" arbitrary: ") {
                    Some((v, rest)) => (v.trim(), rest.split_whitespace().map(str::to_string).collect()),
                    None => (arg.trim(), Vec::new()),
                };
                return induct(ctx, var, &arbitrary, s).map_err(|e| e.to_string());
            }
            Err(format!("unrecognized method `{line}`"))
        }
    }
}

/// Re-run `script` on `goal` without search. Succeeds when every method
/// applies, the last line is `done` and no subgoal is left.
pub fn replay(script: &[String], goal: &Term, ctx: &TheoryContext, budget: &SearchBudget) -> Result<(), ReplayError> {
    let mut s = ProofState::init(goal.clone());
    for (i, line) in script.iter().enumerate() {
        let line = line.trim();
        let err = |reason: String| ReplayError { line: i + 1, reason };
        if line == "done" {
            if !s.is_complete() {
                return Err(err(format!("done with {} open subgoal(s)", s.subgoals.len())));
            }
            if i + 1 != script.len() {
                return Err(err("lines after done".into()));
            }
            return Ok(());
        }
        if s.is_complete() {
            return Err(err("no subgoals left".into()));
        }
        s = step(ctx, line, &s, budget).map_err(err)?;
    }
    Err(ReplayError { line: script.len() + 1, reason: "script does not end with done".into() })
}
