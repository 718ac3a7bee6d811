use thiserror::Error;

use super::match_term;
use crate::term::{Term, Type, EQ};
use crate::theory::TheoryContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no defining equation of {0} matches the arguments")]
    IncompleteDefinition(String),
    #[error("term is not ground (free variable {0})")]
    NotGround(String),
    #[error("cannot evaluate {0}")]
    Unsupported(String),
}

/// Call-by-value evaluation of a ground term to constructor normal form.
///
/// Nullary constants that are neither constructors nor defined act as
/// opaque atoms, which is how test elements of type variables are encoded.
pub fn eval_ground(ctx: &TheoryContext, t: &Term) -> Result<Term, EvalError> {
    let (head, args) = t.strip_app();
    let name = match head {
        Term::Const(n, _) => n,
        Term::Free(n, _) => return Err(EvalError::NotGround(n.clone())),
        other => return Err(EvalError::Unsupported(other.to_string())),
    };
    let vals = args.iter().map(|a| eval_ground(ctx, a)).collect::<Result<Vec<_>, _>>()?;
    if name == EQ && vals.len() == 2 {
        let b = if vals[0] == vals[1] { "True" } else { "False" };
        return Ok(Term::constant(b, Type::bool()));
    }
    if ctx.is_constructor(name) {
        return Ok(Term::apps(head.clone(), vals));
    }
    if let Some(def) = ctx.definition(name) {
        if vals.len() < def.arity {
            return Ok(Term::apps(head.clone(), vals));
        }
        let (now, extra) = vals.split_at(def.arity);
        let redex = Term::apps(head.clone(), now.iter().cloned());
        for rule in &def.rules {
            if let Some(b) = match_term(&rule.lhs, &redex) {
                let res = eval_ground(ctx, &b.apply(&rule.rhs))?;
                if extra.is_empty() {
                    return Ok(res);
                }
                return eval_ground(ctx, &Term::apps(res, extra.iter().cloned()));
            }
        }
        return Err(EvalError::IncompleteDefinition(name.clone()));
    }
    if vals.is_empty() && ctx.const_info(name).is_none() && !crate::term::is_logical(name) {
        return Ok(head.clone());
    }
    Err(EvalError::Unsupported(t.to_string()))
}
