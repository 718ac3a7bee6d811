use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use super::elaborate::{ElabError, TermElaborator};
use super::parser;
use crate::rewrite::{RewriteRule, RuleSet};
use crate::strategy::Strategy;
use crate::term::{alpha_equal, match_type, Signature, Syntax, Term, Type};

#[derive(Clone, Debug, PartialEq)]
pub struct CtorInfo {
    /// Internal constant name (the mixfix symbol when one is declared).
    pub name: String,
    /// Name as written in the declaration.
    pub base_name: String,
    pub args: Vec<Type>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatatypeInfo {
    pub name: String,
    pub params: Vec<String>,
    pub ctors: Vec<CtorInfo>,
}

impl DatatypeInfo {
    /// The datatype applied to its own parameters, e.g. `'a list`.
    pub fn self_type(&self) -> Type {
        Type::Con(self.name.clone(), self.params.iter().map(|p| Type::Var(p.clone())).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstKind {
    Constructor,
    Defined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstInfo {
    pub name: String,
    pub base_name: String,
    pub scheme: Type,
    pub kind: ConstKind,
}

/// Oriented defining equations of one constant, in declaration order.
#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub constant: String,
    pub arity: usize,
    /// Argument position carrying the structural recursion, if any.
    pub rec_arg: Option<usize>,
    pub rules: Vec<RewriteRule>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma {
    pub name: String,
    pub statement: Term,
    pub simp: bool,
    pub script: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Goal {
    pub name: String,
    pub statement: Term,
    pub strategy: Strategy,
}

/// Checked theory: datatypes, constants, definitions, proven lemmas,
/// strategies and pending goals.
#[derive(Clone, Debug)]
pub struct TheoryContext {
    pub datatypes: IndexMap<String, DatatypeInfo>,
    pub constants: IndexMap<String, ConstInfo>,
    pub definitions: IndexMap<String, Definition>,
    /// Rules of `[simp]` lemmas, in declaration order.
    pub simp_lemmas: Vec<RewriteRule>,
    pub lemmas: IndexMap<String, Lemma>,
    pub strategies: IndexMap<String, Strategy>,
    pub goals: Vec<Goal>,
    pub syntax: Syntax,
}

impl Default for TheoryContext {
    fn default() -> TheoryContext {
        TheoryContext::new()
    }
}

impl Signature for TheoryContext {
    fn const_scheme(&self, name: &str) -> Option<Type> {
        self.constants.get(name).map(|c| c.scheme.clone())
    }

    fn type_arity(&self, name: &str) -> Option<usize> {
        self.datatypes.get(name).map(|d| d.params.len())
    }
}

impl TheoryContext {
    /// Context holding only the built-in `bool` datatype.
    pub fn new() -> TheoryContext {
        let mut ctx = TheoryContext {
            datatypes: IndexMap::new(),
            constants: IndexMap::new(),
            definitions: IndexMap::new(),
            simp_lemmas: Vec::new(),
            lemmas: IndexMap::new(),
            strategies: IndexMap::new(),
            goals: Vec::new(),
            syntax: Syntax::logical(),
        };
        let ctors = ["True", "False"].map(|n| CtorInfo { name: n.into(), base_name: n.into(), args: vec![] });
        ctx.datatypes.insert("bool".into(), DatatypeInfo { name: "bool".into(), params: vec![], ctors: ctors.to_vec() });
        for c in ctors {
            ctx.constants
                .insert(c.name.clone(), ConstInfo { name: c.name.clone(), base_name: c.base_name, scheme: Type::bool(), kind: ConstKind::Constructor });
        }
        ctx
    }

    pub fn const_info(&self, name: &str) -> Option<&ConstInfo> {
        self.constants.get(name)
    }

    pub fn is_constructor(&self, name: &str) -> bool {
        self.constants.get(name).is_some_and(|c| c.kind == ConstKind::Constructor)
    }

    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.get(name)
    }

    /// Declared base name of a constant (`Nil` for `[]`); the name itself
    /// for unknown constants.
    pub fn base_name<'a>(&'a self, name: &'a str) -> &'a str {
        self.constants.get(name).map_or(name, |c| c.base_name.as_str())
    }

    pub fn datatype_of(&self, ty: &Type) -> Option<&DatatypeInfo> {
        match ty {
            Type::Con(n, _) => self.datatypes.get(n),
            _ => None,
        }
    }

    /// Constructors of the datatype `ty` with argument types instantiated
    /// at `ty`'s type arguments.
    pub fn constructors_at(&self, ty: &Type) -> Option<Vec<(Term, Vec<Type>)>> {
        let Type::Con(_, targs) = ty else { return None };
        let dt = self.datatype_of(ty)?;
        let inst: BTreeMap<String, Type> = dt.params.iter().cloned().zip(targs.iter().cloned()).collect();
        Some(
            dt.ctors
                .iter()
                .map(|c| {
                    let args: Vec<Type> = c.args.iter().map(|a| a.subst(&inst)).collect();
                    (Term::constant(&c.name, Type::curried(args.clone(), ty.clone())), args)
                })
                .collect(),
        )
    }

    /// Constants whose scheme is not a function type, in declaration order.
    pub fn nullary_constants(&self) -> Vec<&ConstInfo> {
        self.constants.values().filter(|c| !c.scheme.is_fun()).collect()
    }

    /// Defining equations followed by `[simp]` lemmas.
    pub fn simp_rules(&self) -> Vec<RewriteRule> {
        let mut rules: Vec<RewriteRule> = self.definitions.values().flat_map(|d| d.rules.iter().cloned()).collect();
        rules.extend(self.simp_lemmas.iter().cloned());
        rules
    }

    pub fn simpset(&self, step_budget: usize) -> RuleSet {
        RuleSet::new(self.simp_rules()).with_budget(step_budget)
    }

    /// Rules of the defining equations only.
    pub fn definition_rules(&self, step_budget: usize) -> RuleSet {
        RuleSet::new(self.definitions.values().flat_map(|d| d.rules.iter().cloned()).collect()).with_budget(step_budget)
    }

    /// Parse and type a term. Free variables listed in `fixed` get the given
    /// types; other free variables are inferred. Remaining type variables are
    /// defaulted to `'a`, `'b`, ...
    pub fn read_term(&self, text: &str, fixed: &[(String, Type)]) -> Result<Term, ElabError> {
        let raw = parser::parse_term(text, &self.syntax)?;
        let mut el = TermElaborator::new(self);
        for (n, ty) in fixed {
            el.fix_free(n, ty.clone());
        }
        el.finish_prop(&raw)
    }

    pub fn print(&self, t: &Term) -> String {
        self.syntax.print(t)
    }

    /// Text for a quoted term in a proof script: the plain rendering when it
    /// reads back to the same term, otherwise the binder-annotated one.
    pub fn print_for_script(&self, t: &Term, fixed: &[(String, Type)]) -> String {
        let plain = self.syntax.print(t);
        match self.read_term(&plain, fixed) {
            Ok(back) if alpha_equal(&back, t) => plain,
            _ => self.syntax.print_annotated(t),
        }
    }

    /// Whether `ty` is an instance of the constant's declared scheme.
    pub fn is_instance_of(&self, name: &str, ty: &Type) -> bool {
        self.constants.get(name).is_some_and(|c| match_type(&c.scheme, ty, &mut BTreeMap::new(), &|_| true))
    }

    /// Names of every constant that appears in some right-hand side of
    /// `name`'s defining equations, in first-occurrence order.
    pub fn rhs_constants(&self, name: &str) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut seen = BTreeSet::new();
        if let Some(d) = self.definitions.get(name) {
            for r in &d.rules {
                for (c, _) in r.rhs.consts() {
                    if seen.insert(c.clone()) {
                        out.push(c);
                    }
                }
            }
        }
        out
    }
}
