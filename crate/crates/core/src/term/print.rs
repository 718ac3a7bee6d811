use std::collections::{BTreeMap, BTreeSet};

use super::{fresh_name, Term, ALL, EQ, IMP};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Assoc {
    Left,
    Right,
    None,
}

/// Infix operator table shared by the parser and the printer.
#[derive(Clone, Debug)]
pub struct Syntax {
    infix: BTreeMap<String, (u32, Assoc)>,
}

const APP_PREC: u32 = 1000;

impl Default for Syntax {
    fn default() -> Syntax {
        let mut s = Syntax::logical();
        s.declare("#", 65, Assoc::Right);
        s.declare("@", 65, Assoc::Right);
        s
    }
}

impl Syntax {
    /// Only the logical operators.
    pub fn logical() -> Syntax {
        let mut infix = BTreeMap::new();
        infix.insert(IMP.to_string(), (1, Assoc::Right));
        infix.insert(EQ.to_string(), (50, Assoc::Left));
        Syntax { infix }
    }

    pub fn declare(&mut self, op: &str, prec: u32, assoc: Assoc) {
        self.infix.insert(op.to_string(), (prec, assoc));
    }

    pub fn infix(&self, op: &str) -> Option<(u32, Assoc)> {
        self.infix.get(op).copied()
    }

    pub fn print(&self, t: &Term) -> String {
        let mut p = Printer { syntax: self, frees: t.free_names(), names: Vec::new(), annotate: false };
        let mut out = String::new();
        p.term(t, 0, true, &mut out);
        out
    }

    /// Like `print`, but every binder carries a type annotation.
    pub fn print_annotated(&self, t: &Term) -> String {
        let mut p = Printer { syntax: self, frees: t.free_names(), names: Vec::new(), annotate: true };
        let mut out = String::new();
        p.term(t, 0, true, &mut out);
        out
    }
}

struct Printer<'s> {
    syntax: &'s Syntax,
    frees: BTreeSet<String>,
    /// Display names of enclosing binders, outermost first.
    names: Vec<String>,
    annotate: bool,
}

impl Printer<'_> {
    fn binder_name(&self, hint: &str, body: &Term) -> String {
        let mut avoid = self.frees.clone();
        for i in body.loose_bounds() {
            // index 0 is this binder; i >= 1 refers to enclosing ones
            if i >= 1 {
                if let Some(n) = self.names.len().checked_sub(i).and_then(|k| self.names.get(k)) {
                    avoid.insert(n.clone());
                }
            }
        }
        let hint = if hint.is_empty() { "x" } else { hint };
        fresh_name(hint, &avoid)
    }

    /// `prec` is the binding strength required by the context; `rightmost`
    /// says nothing follows in the current group (binders may stay open).
    fn term(&mut self, t: &Term, prec: u32, rightmost: bool, out: &mut String) {
        if t.dest_all().is_some() {
            let open = prec == 0 || rightmost;
            if !open {
                out.push('(');
            }
            self.binder(t, out);
            if !open {
                out.push(')');
            }
            return;
        }
        let (head, args) = t.strip_app();
        if let (Some(op), 2) = (head.const_name(), args.len()) {
            if let Some((p, assoc)) = self.syntax.infix(op) {
                let paren = p < prec;
                if paren {
                    out.push('(');
                }
                let lp = if assoc == Assoc::Left { p } else { p + 1 };
                let rp = if assoc == Assoc::Right { p } else { p + 1 };
                self.term(args[0], lp, false, out);
                out.push(' ');
                out.push_str(op);
                out.push(' ');
                self.term(args[1], rp, rightmost || paren, out);
                if paren {
                    out.push(')');
                }
                return;
            }
        }
        if !args.is_empty() {
            let paren = APP_PREC < prec;
            if paren {
                out.push('(');
            }
            self.atom(head, out);
            for a in args {
                out.push(' ');
                self.term(a, APP_PREC + 1, false, out);
            }
            if paren {
                out.push(')');
            }
            return;
        }
        self.atom(t, out);
    }

    fn binder(&mut self, t: &Term, out: &mut String) {
        out.push_str("!!");
        let mut cur = t.clone();
        let mut pushed = 0;
        while let Some((n, ty, body)) = cur.dest_all() {
            let name = self.binder_name(n, body);
            if pushed > 0 {
                out.push(' ');
            }
            out.push_str(&name);
            if self.annotate {
                out.push_str("::");
                let tys = ty.to_string();
                if tys.contains(' ') {
                    out.push('(');
                    out.push_str(&tys);
                    out.push(')');
                } else {
                    out.push_str(&tys);
                }
            }
            self.names.push(name);
            pushed += 1;
            cur = body.clone();
            if self.annotate {
                break;
            }
        }
        out.push_str(". ");
        self.term(&cur, 0, true, out);
        for _ in 0..pushed {
            self.names.pop();
        }
    }

    fn atom(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Free(n, _) => out.push_str(n),
            Term::Bound(i, _) => match self.names.len().checked_sub(i + 1).and_then(|k| self.names.get(k)) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("B{i}")),
            },
            Term::Const(n, _) => {
                if self.syntax.infix(n).is_some() || n == ALL {
                    out.push('(');
                    out.push_str(n);
                    out.push(')');
                } else {
                    out.push_str(n);
                }
            }
            Term::Abs(n, _, body) => {
                let name = self.binder_name(n, body);
                out.push_str("(%");
                out.push_str(&name);
                out.push_str(". ");
                self.names.push(name);
                self.term(body, 0, true, out);
                self.names.pop();
                out.push(')');
            }
            Term::App(..) => {
                out.push('(');
                self.term(t, 0, true, out);
                out.push(')');
            }
        }
    }
}
