//! Pretty-printing of terms and judgments without annotations or assumption sets.

use super::atom::{Atom, Name};
use super::context::Context;
use super::judgment::TermJudgment;
use super::term::{Binder, Term, TermKind};
use std::collections::HashMap;

const BINDER: u8 = 0;
const ARROW: u8 = 1;
const EQUAL: u8 = 2;
const ADD: u8 = 3;
const MUL: u8 = 4;
const APP: u8 = 5;
const ATOM: u8 = 6;

/// Is this constant name written with symbols, and so printed infix?
pub fn is_operator(name: &str) -> bool {
    name.chars().next().is_some_and(|c| !(c.is_alphanumeric() || c == '_' || c == '\''))
}

fn operator_level(name: &str) -> u8 {
    match name.chars().next() {
        Some('*' | '×' | '/' | '·' | '∘') => MUL,
        _ => ADD,
    }
}

fn subscript(mut n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let mut out = Vec::new();
    loop {
        out.push(DIGITS[n % 10]);
        n /= 10;
        if n == 0 {
            break;
        }
    }
    out.iter().rev().collect()
}

/// Display names for free atoms and the bookkeeping for bound names.
#[derive(Default, Clone)]
pub struct Printer {
    atoms: HashMap<u64, String>,
    per_name: HashMap<Name, usize>,
}

impl Printer {
    pub fn new() -> Printer {
        Printer::default()
    }

    /// Names every atom of the context, numbering atoms that share a display name
    /// in dependency order.
    pub fn for_context(ctx: &Context) -> Printer {
        let mut p = Printer::new();
        let order = ctx.topological().unwrap_or_else(|_| ctx.entries().cloned().collect());
        for e in order {
            p.atom_name(&e.atom);
        }
        p
    }

    pub fn atom_name(&mut self, a: &Atom) -> String {
        if let Some(s) = self.atoms.get(&a.id()) {
            return s.clone();
        }
        let k = self.per_name.entry(a.name().clone()).or_insert(0);
        let s = format!("{}{}", a.name(), subscript(*k));
        *k += 1;
        self.atoms.insert(a.id(), s.clone());
        s
    }

    pub fn term(&mut self, t: &Term) -> String {
        let mut avoid = Vec::new();
        let mut cs = Vec::new();
        t.constants(&mut cs);
        avoid.extend(cs.iter().map(|c| c.to_string()));
        let mut out = String::new();
        self.go(t, BINDER, &mut Vec::new(), &avoid, &mut out);
        out
    }

    pub fn judgment(&mut self, j: &TermJudgment) -> String {
        let order = j.context().topological().unwrap_or_default();
        let mut hyps = Vec::new();
        for e in &order {
            let name = self.atom_name(&e.atom);
            hyps.push(format!("{} : {}", name, self.term(&e.ty)));
        }
        let body = format!("⊢ {} : {}", self.term(j.term()), self.term(j.ty()));
        if hyps.is_empty() {
            body
        } else {
            format!("{} {}", hyps.join(", "), body)
        }
    }

    fn fresh(&self, b: &Binder, scope: &[String], avoid: &[String]) -> String {
        let base: &str = if b.name.is_empty() || &*b.name == "_" { "x" } else { &b.name };
        let taken = |s: &str| scope.iter().any(|n| n == s) || avoid.iter().any(|n| n == s);
        if !taken(base) {
            return base.to_string();
        }
        (0..).map(|i| format!("{base}{i}")).find(|s| !taken(s)).unwrap()
    }

    fn go(&mut self, t: &Term, prec: u8, scope: &mut Vec<String>, avoid: &[String], out: &mut String) {
        let level = self.level(t);
        let paren = level < prec;
        if paren {
            out.push('(');
        }
        self.go_inner(t, scope, avoid, out);
        if paren {
            out.push(')');
        }
    }

    fn level(&self, t: &Term) -> u8 {
        match t.kind() {
            TermKind::Type | TermKind::Atom(_) | TermKind::Bound(_) => ATOM,
            TermKind::Constant(_) => ATOM,
            TermKind::Lambda(..) => BINDER,
            TermKind::Prod(_, _, cod) => {
                if cod.has_bound(0) {
                    BINDER
                } else {
                    ARROW
                }
            }
            TermKind::Eq(..) => EQUAL,
            TermKind::Refl(..) => APP,
            TermKind::Apply(..) => match infix(t) {
                Some((op, _, _)) => operator_level(op),
                None => APP,
            },
        }
    }

    fn go_inner(&mut self, t: &Term, scope: &mut Vec<String>, avoid: &[String], out: &mut String) {
        match t.kind() {
            TermKind::Type => out.push_str("Type"),
            TermKind::Atom(a) => {
                let s = self.atom_name(a);
                out.push_str(&s)
            }
            TermKind::Constant(c) => {
                if is_operator(c) {
                    out.push_str(&format!("( {c} )"))
                } else {
                    out.push_str(c)
                }
            }
            TermKind::Bound(k) => match scope.len().checked_sub(k + 1).and_then(|i| scope.get(i)) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("#{k}")),
            },
            TermKind::Lambda(..) => {
                out.push('λ');
                let mut t = t.clone();
                let pushed = scope.len();
                while let TermKind::Lambda(b, dom, _, body) = t.kind() {
                    let anonymous = &*b.name == "_" || matches!(dom.kind(), TermKind::Eq(..));
                    let name = if body.has_bound(0) || !anonymous {
                        self.fresh(b, scope, avoid)
                    } else {
                        "_".to_string()
                    };
                    out.push_str(" (");
                    out.push_str(&name);
                    out.push_str(" : ");
                    self.go(dom, BINDER, scope, avoid, out);
                    out.push(')');
                    scope.push(name);
                    t = body.clone();
                }
                out.push_str(", ");
                self.go(&t, BINDER, scope, avoid, out);
                scope.truncate(pushed);
            }
            TermKind::Prod(b, dom, cod) if cod.has_bound(0) => {
                let _ = b;
                out.push('Π');
                let mut t = t.clone();
                let pushed = scope.len();
                while let TermKind::Prod(b, dom, cod) = t.kind() {
                    if !cod.has_bound(0) {
                        break;
                    }
                    let name = self.fresh(b, scope, avoid);
                    out.push_str(" (");
                    out.push_str(&name);
                    out.push_str(" : ");
                    self.go(dom, BINDER, scope, avoid, out);
                    out.push(')');
                    scope.push(name);
                    t = cod.clone();
                }
                let _ = dom;
                out.push_str(", ");
                self.go(&t, BINDER, scope, avoid, out);
                scope.truncate(pushed);
            }
            TermKind::Prod(_, dom, cod) => {
                self.go(dom, ARROW + 1, scope, avoid, out);
                out.push_str(" → ");
                scope.push("_".to_string());
                self.go(cod, ARROW, scope, avoid, out);
                scope.pop();
            }
            TermKind::Eq(_, s, u) => {
                self.go(s, EQUAL + 1, scope, avoid, out);
                out.push_str(" ≡ ");
                self.go(u, EQUAL + 1, scope, avoid, out);
            }
            TermKind::Refl(_, s) => {
                out.push_str("refl ");
                self.go(s, ATOM, scope, avoid, out);
            }
            TermKind::Apply(h, _, _, _, a) => {
                if let Some((op, l, r)) = infix(t) {
                    let lv = operator_level(op);
                    self.go(&l, lv, scope, avoid, out);
                    out.push(' ');
                    out.push_str(op);
                    out.push(' ');
                    self.go(&r, lv + 1, scope, avoid, out);
                } else {
                    self.go(h, APP, scope, avoid, out);
                    out.push(' ');
                    self.go(a, ATOM, scope, avoid, out);
                }
            }
        }
    }
}

/// An operator constant applied to exactly two arguments.
fn infix(t: &Term) -> Option<(&str, Term, Term)> {
    let TermKind::Apply(h, _, _, _, r) = t.kind() else { return None };
    let TermKind::Apply(c, _, _, _, l) = h.kind() else { return None };
    let TermKind::Constant(op) = c.kind() else { return None };
    if is_operator(op) {
        Some((op, l.clone(), r.clone()))
    } else {
        None
    }
}

pub fn print_term(ctx: &Context, t: &Term) -> String {
    Printer::for_context(ctx).term(t)
}

pub fn print_judgment(j: &TermJudgment) -> String {
    Printer::for_context(j.context()).judgment(j)
}
