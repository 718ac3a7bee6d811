use std::collections::BTreeMap;

use thiserror::Error;

use super::{Position, Step, Term, Type, ALL, EQ, IMP};

/// What the type checker needs to know about a theory.
pub trait Signature {
    /// Declared type scheme of a constant (type variables are implicitly generic).
    fn const_scheme(&self, name: &str) -> Option<Type>;
    /// Parameter count of a type constructor.
    fn type_arity(&self, name: &str) -> Option<usize>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error at {position}: expected {expected}, found {found}")]
pub struct TypeError {
    pub position: Position,
    pub expected: String,
    pub found: String,
}

/// Scheme of a reserved logical constant.
pub(crate) fn logical_scheme(name: &str) -> Option<Type> {
    let b = Type::bool();
    match name {
        EQ => Some(Type::curried([Type::var("'a"), Type::var("'a")], b)),
        IMP => Some(Type::curried([b.clone(), b.clone()], b)),
        ALL => Some(Type::fun(Type::fun(Type::var("'a"), b.clone()), b)),
        _ => None,
    }
}

/// One-way matching of `pattern` against `ty`, binding pattern type
/// variables accepted by `bindable`.
pub fn match_type(pattern: &Type, ty: &Type, binding: &mut BTreeMap<String, Type>, bindable: &dyn Fn(&str) -> bool) -> bool {
    match (pattern, ty) {
        (Type::Var(v), _) if bindable(v) => match binding.get(v) {
            Some(bound) => bound == ty,
            None => {
                binding.insert(v.clone(), ty.clone());
                true
            }
        },
        (Type::Var(a), Type::Var(b)) => a == b,
        (Type::Con(n, xs), Type::Con(m, ys)) => n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_type(x, y, binding, bindable)),
        (Type::Fun(d1, c1), Type::Fun(d2, c2)) => match_type(d1, d2, binding, bindable) && match_type(c1, c2, binding, bindable),
        _ => false,
    }
}

fn check_type_wf(sig: &dyn Signature, ty: &Type, pos: &Position) -> Result<(), TypeError> {
    match ty {
        Type::Var(_) => Ok(()),
        Type::Fun(d, c) => {
            check_type_wf(sig, d, pos)?;
            check_type_wf(sig, c, pos)
        }
        Type::Con(n, args) => {
            match sig.type_arity(n) {
                Some(k) if k == args.len() => {}
                Some(k) => return Err(TypeError { position: pos.clone(), expected: format!("{k} type argument(s) for {n}"), found: ty.to_string() }),
                None => return Err(TypeError { position: pos.clone(), expected: "a declared type constructor".into(), found: n.clone() }),
            }
            args.iter().try_for_each(|a| check_type_wf(sig, a, pos))
        }
    }
}

/// Type of `t`, checking every node. Constant instances must be instances of
/// the declared scheme; bound variables must agree with their binder.
pub fn infer_type(sig: &dyn Signature, t: &Term) -> Result<Type, TypeError> {
    fn go(sig: &dyn Signature, t: &Term, binders: &mut Vec<Type>, pos: &mut Vec<Step>) -> Result<Type, TypeError> {
        let here = |pos: &Vec<Step>| Position(pos.clone());
        match t {
            Term::Free(_, ty) => {
                check_type_wf(sig, ty, &here(pos))?;
                Ok(ty.clone())
            }
            Term::Bound(i, ty) => {
                let Some(bty) = binders.len().checked_sub(i + 1).map(|k| &binders[k]) else {
                    return Err(TypeError { position: here(pos), expected: "a bound variable in scope".into(), found: format!("loose index {i}") });
                };
                if bty != ty {
                    return Err(TypeError { position: here(pos), expected: bty.to_string(), found: ty.to_string() });
                }
                Ok(ty.clone())
            }
            Term::Const(n, ty) => {
                let scheme = logical_scheme(n).or_else(|| sig.const_scheme(n)).ok_or_else(|| TypeError {
                    position: here(pos),
                    expected: "a declared constant".into(),
                    found: n.clone(),
                })?;
                check_type_wf(sig, ty, &here(pos))?;
                let mut b = BTreeMap::new();
                if !match_type(&scheme, ty, &mut b, &|_| true) {
                    return Err(TypeError { position: here(pos), expected: format!("an instance of {scheme}"), found: ty.to_string() });
                }
                Ok(ty.clone())
            }
            Term::App(f, a) => {
                pos.push(Step::Fun);
                let fty = go(sig, f, binders, pos)?;
                pos.pop();
                pos.push(Step::Arg);
                let aty = go(sig, a, binders, pos)?;
                pos.pop();
                match fty {
                    Type::Fun(d, c) if *d == aty => Ok((*c).clone()),
                    Type::Fun(d, _) => Err(TypeError { position: here(pos).child(Step::Arg), expected: d.to_string(), found: aty.to_string() }),
                    other => Err(TypeError { position: here(pos).child(Step::Fun), expected: "a function type".into(), found: other.to_string() }),
                }
            }
            Term::Abs(_, ty, body) => {
                check_type_wf(sig, ty, &here(pos))?;
                binders.push(ty.clone());
                pos.push(Step::Body);
                let r = go(sig, body, binders, pos);
                pos.pop();
                binders.pop();
                Ok(Type::fun(ty.clone(), r?))
            }
        }
    }
    go(sig, t, &mut Vec::new(), &mut Vec::new())
}

/// First-order unification over types. Only variables whose name starts
/// with `?` are unifiable; other type variables behave like constants.
#[derive(Debug, Clone, Default)]
pub struct Unifier {
    subst: BTreeMap<String, Type>,
    counter: usize,
}

impl Unifier {
    pub fn new() -> Unifier {
        Unifier::default()
    }

    pub fn fresh(&mut self) -> Type {
        self.counter += 1;
        Type::Var(format!("?t{}", self.counter))
    }

    /// Rename the scheme's type variables to fresh flexible ones.
    pub fn instantiate(&mut self, scheme: &Type) -> Type {
        let mut vars = std::collections::BTreeSet::new();
        scheme.tyvars(&mut vars);
        let map: BTreeMap<String, Type> = vars.into_iter().map(|v| (v, self.fresh())).collect();
        scheme.subst(&map)
    }

    pub fn resolve(&self, ty: &Type) -> Type {
        match ty {
            Type::Var(v) => match self.subst.get(v) {
                Some(t) => self.resolve(t),
                None => ty.clone(),
            },
            Type::Con(n, args) => Type::Con(n.clone(), args.iter().map(|a| self.resolve(a)).collect()),
            Type::Fun(d, c) => Type::fun(self.resolve(d), self.resolve(c)),
        }
    }

    fn occurs(&self, v: &str, ty: &Type) -> bool {
        match self.resolve(ty) {
            Type::Var(w) => w == v,
            Type::Con(_, args) => args.iter().any(|a| self.occurs(v, a)),
            Type::Fun(d, c) => self.occurs(v, &d) || self.occurs(v, &c),
        }
    }

    pub fn unify(&mut self, a: &Type, b: &Type) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&a, &b) {
            (Type::Var(x), Type::Var(y)) if x == y => true,
            (Type::Var(x), _) if x.starts_with('?') => {
                if self.occurs(x, &b) {
                    return false;
                }
                self.subst.insert(x.clone(), b.clone());
                true
            }
            (_, Type::Var(y)) if y.starts_with('?') => {
                if self.occurs(y, &a) {
                    return false;
                }
                self.subst.insert(y.clone(), a.clone());
                true
            }
            (Type::Con(n, xs), Type::Con(m, ys)) => n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y)),
            (Type::Fun(d1, c1), Type::Fun(d2, c2)) => self.unify(d1, d2) && self.unify(c1, c2),
            _ => false,
        }
    }

    pub fn resolve_term(&self, t: &Term) -> Term {
        match t {
            Term::Free(n, ty) => Term::Free(n.clone(), self.resolve(ty)),
            Term::Bound(i, ty) => Term::Bound(*i, self.resolve(ty)),
            Term::Const(n, ty) => Term::Const(n.clone(), self.resolve(ty)),
            Term::App(f, a) => Term::app(self.resolve_term(f), self.resolve_term(a)),
            Term::Abs(n, ty, b) => Term::Abs(n.clone(), self.resolve(ty), std::sync::Arc::new(self.resolve_term(b))),
        }
    }
}
