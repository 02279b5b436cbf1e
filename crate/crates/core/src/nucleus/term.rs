//! Locally nameless terms annotated with assumption sets.
//!
//! Every node carries the set of atoms it depends on. The set of a node always
//! contains the sets of its children, so a subterm whose set lacks an atom
//! cannot mention that atom; abstraction and substitution use this to share
//! untouched subterms.

use super::atom::{Atom, AtomSet, Name};
use std::fmt;
use std::sync::Arc;

/// Binder metadata: the printing hint and the id of the atom that was abstracted
/// to create the binder (0 when unknown). Neither takes part in alpha-equality.
#[derive(Clone, Debug)]
pub struct Binder {
    pub name: Name,
    pub atom: u64,
}

impl Binder {
    pub(crate) fn new(name: Name, atom: u64) -> Binder {
        Binder { name, atom }
    }
}

#[derive(Clone, Debug)]
pub enum TermKind {
    Type,
    Atom(Atom),
    Constant(Name),
    Bound(usize),
    /// `Π (x : dom), cod` with `cod` under the binder.
    Prod(Binder, Term, Term),
    /// `λ (x : dom . cod), body` with `cod` and `body` under the binder.
    Lambda(Binder, Term, Term, Term),
    /// `head @{x : dom . cod} arg` with `cod` under the binder.
    Apply(Term, Binder, Term, Term, Term),
    /// `lhs ≡_ty rhs`.
    Eq(Term, Term, Term),
    /// `refl_ty arg`.
    Refl(Term, Term),
}

struct TermNode {
    kind: TermKind,
    asm: AtomSet,
    /// Dependencies on enclosing binders, as de Bruijn indices relative to this node.
    bound: AtomSet,
}

#[derive(Clone)]
pub struct Term(Arc<TermNode>);

impl Term {
    fn build(kind: TermKind, extra: &AtomSet, extra_bound: &AtomSet) -> Term {
        let (asm, bound) = match &kind {
            TermKind::Type | TermKind::Constant(_) => (AtomSet::empty(), AtomSet::empty()),
            TermKind::Atom(a) => (AtomSet::singleton(a.id()), AtomSet::empty()),
            TermKind::Bound(k) => (AtomSet::empty(), AtomSet::singleton(*k as u64)),
            TermKind::Prod(_, a, b) => (a.asm().union(b.asm()), a.bnd().union(&b.bnd().unshift())),
            TermKind::Lambda(_, a, b, t) => (
                a.asm().union(b.asm()).union(t.asm()),
                a.bnd().union(&b.bnd().unshift()).union(&t.bnd().unshift()),
            ),
            TermKind::Apply(h, _, a, b, t) => (
                h.asm().union(a.asm()).union(b.asm()).union(t.asm()),
                h.bnd().union(a.bnd()).union(&b.bnd().unshift()).union(t.bnd()),
            ),
            TermKind::Eq(a, s, t) => (
                a.asm().union(s.asm()).union(t.asm()),
                a.bnd().union(s.bnd()).union(t.bnd()),
            ),
            TermKind::Refl(a, t) => (a.asm().union(t.asm()), a.bnd().union(t.bnd())),
        };
        Term(Arc::new(TermNode { kind, asm: asm.union(extra), bound: bound.union(extra_bound) }))
    }

    pub(crate) fn mk(kind: TermKind) -> Term {
        Term::build(kind, &AtomSet::empty(), &AtomSet::empty())
    }

    pub(crate) fn ty() -> Term {
        Term::mk(TermKind::Type)
    }

    pub(crate) fn atom(a: &Atom) -> Term {
        Term::mk(TermKind::Atom(a.clone()))
    }

    pub(crate) fn constant(name: Name) -> Term {
        Term::mk(TermKind::Constant(name))
    }

    pub(crate) fn bound(k: usize) -> Term {
        Term::mk(TermKind::Bound(k))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// Free atoms this term depends on, including through conversions.
    pub fn assumptions(&self) -> &AtomSet {
        &self.0.asm
    }

    /// Enclosing binders this term depends on, as de Bruijn indices.
    pub fn bound_assumptions(&self) -> &AtomSet {
        &self.0.bound
    }

    fn asm(&self) -> &AtomSet {
        &self.0.asm
    }

    fn bnd(&self) -> &AtomSet {
        &self.0.bound
    }

    pub fn is_locally_closed(&self) -> bool {
        self.0.bound.is_empty()
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Address of the shared node, stable while the term is alive.
    pub fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn with_sets(&self, asm: AtomSet, bound: AtomSet) -> Term {
        Term(Arc::new(TermNode { kind: self.0.kind.clone(), asm, bound }))
    }

    /// Adds `extra` to the assumption set of the root node.
    pub(crate) fn mention(&self, extra: &AtomSet) -> Term {
        if extra.is_subset(self.asm()) {
            return self.clone();
        }
        self.with_sets(self.asm().union(extra), self.bnd().clone())
    }

    fn map_children(
        &self,
        depth: usize,
        f: &mut dyn FnMut(&Term, usize) -> Term,
        own: AtomSet,
        own_bound: AtomSet,
    ) -> Term {
        let kind = match &self.0.kind {
            TermKind::Type | TermKind::Atom(_) | TermKind::Constant(_) | TermKind::Bound(_) => {
                return self.with_sets(own, own_bound);
            }
            TermKind::Prod(x, a, b) => TermKind::Prod(x.clone(), f(a, depth), f(b, depth + 1)),
            TermKind::Lambda(x, a, b, t) => {
                TermKind::Lambda(x.clone(), f(a, depth), f(b, depth + 1), f(t, depth + 1))
            }
            TermKind::Apply(h, x, a, b, t) => TermKind::Apply(
                f(h, depth),
                x.clone(),
                f(a, depth),
                f(b, depth + 1),
                f(t, depth),
            ),
            TermKind::Eq(a, s, t) => TermKind::Eq(f(a, depth), f(s, depth), f(t, depth)),
            TermKind::Refl(a, t) => TermKind::Refl(f(a, depth), f(t, depth)),
        };
        Term::build(kind, &own, &own_bound)
    }

    /// Replaces atom `id` by the bound variable at `depth`. Dependencies on `id`
    /// become dependencies on the binder.
    pub(crate) fn abstract_atom(&self, id: u64, depth: usize) -> Term {
        if !self.asm().contains(id) {
            return self.clone();
        }
        if let TermKind::Atom(a) = &self.0.kind {
            if a.id() == id {
                let t = Term::bound(depth);
                let rest = self.asm().remove(id);
                return if rest.is_empty() { t } else { t.mention(&rest) };
            }
        }
        let own = self.asm().remove(id);
        let own_bound = self.bnd().union(&AtomSet::singleton(depth as u64));
        self.map_children(depth, &mut |t, d| t.abstract_atom(id, d), own, own_bound)
    }

    /// Replaces the bound variable at `depth` by the locally closed term `v`.
    /// Nodes that depended on the binder pick up the assumptions of `v`.
    pub(crate) fn instantiate(&self, depth: usize, v: &Term) -> Term {
        if !self.bnd().contains(depth as u64) {
            return self.clone();
        }
        if let TermKind::Bound(k) = &self.0.kind {
            if *k == depth {
                return v.mention(self.asm());
            }
        }
        let own = self.asm().union(v.asm());
        let own_bound = self.bnd().remove(depth as u64);
        self.map_children(depth, &mut |t, d| t.instantiate(d, v), own, own_bound)
    }

    /// Substitutes the locally closed `v` for atom `id`.
    pub(crate) fn subst_atom(&self, id: u64, v: &Term) -> Term {
        if !self.asm().contains(id) {
            return self.clone();
        }
        let own = self.asm().remove(id).union(v.asm());
        if let TermKind::Atom(a) = &self.0.kind {
            if a.id() == id {
                return v.mention(&self.asm().remove(id));
            }
        }
        let own_bound = self.bnd().clone();
        self.map_children(0, &mut |t, _| t.subst_atom(id, v), own, own_bound)
    }

    /// Does the bound variable at `depth` occur syntactically?
    pub fn has_bound(&self, depth: usize) -> bool {
        if !self.bnd().contains(depth as u64) {
            return false;
        }
        match &self.0.kind {
            TermKind::Bound(k) => *k == depth,
            TermKind::Type | TermKind::Atom(_) | TermKind::Constant(_) => false,
            TermKind::Prod(_, a, b) => a.has_bound(depth) || b.has_bound(depth + 1),
            TermKind::Lambda(_, a, b, t) => {
                a.has_bound(depth) || b.has_bound(depth + 1) || t.has_bound(depth + 1)
            }
            TermKind::Apply(h, _, a, b, t) => {
                h.has_bound(depth) || a.has_bound(depth) || b.has_bound(depth + 1) || t.has_bound(depth)
            }
            TermKind::Eq(a, s, t) => a.has_bound(depth) || s.has_bound(depth) || t.has_bound(depth),
            TermKind::Refl(a, t) => a.has_bound(depth) || t.has_bound(depth),
        }
    }

    /// Atoms occurring syntactically (not through assumption sets).
    pub fn free_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort_by_key(|a| a.id());
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        if self.asm().is_empty() {
            return;
        }
        match &self.0.kind {
            TermKind::Atom(a) => out.push(a.clone()),
            TermKind::Type | TermKind::Constant(_) | TermKind::Bound(_) => {}
            TermKind::Prod(_, a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            TermKind::Lambda(_, a, b, t) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
                t.collect_atoms(out);
            }
            TermKind::Apply(h, _, a, b, t) => {
                h.collect_atoms(out);
                a.collect_atoms(out);
                b.collect_atoms(out);
                t.collect_atoms(out);
            }
            TermKind::Eq(a, s, t) => {
                a.collect_atoms(out);
                s.collect_atoms(out);
                t.collect_atoms(out);
            }
            TermKind::Refl(a, t) => {
                a.collect_atoms(out);
                t.collect_atoms(out);
            }
        }
    }

    /// Constants occurring anywhere in the term.
    pub fn constants(&self, out: &mut Vec<Name>) {
        match &self.0.kind {
            TermKind::Constant(c) => {
                if !out.contains(c) {
                    out.push(c.clone())
                }
            }
            TermKind::Type | TermKind::Atom(_) | TermKind::Bound(_) => {}
            TermKind::Prod(_, a, b) => {
                a.constants(out);
                b.constants(out);
            }
            TermKind::Lambda(_, a, b, t) => {
                a.constants(out);
                b.constants(out);
                t.constants(out);
            }
            TermKind::Apply(h, _, a, b, t) => {
                h.constants(out);
                a.constants(out);
                b.constants(out);
                t.constants(out);
            }
            TermKind::Eq(a, s, t) => {
                a.constants(out);
                s.constants(out);
                t.constants(out);
            }
            TermKind::Refl(a, t) => {
                a.constants(out);
                t.constants(out);
            }
        }
    }

    /// Syntactic identity up to bound-variable names, ignoring assumption sets.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (&self.0.kind, &other.0.kind) {
            (TermKind::Type, TermKind::Type) => true,
            (TermKind::Atom(a), TermKind::Atom(b)) => a == b,
            (TermKind::Constant(a), TermKind::Constant(b)) => a == b,
            (TermKind::Bound(a), TermKind::Bound(b)) => a == b,
            (TermKind::Prod(_, a1, b1), TermKind::Prod(_, a2, b2)) => a1.alpha_eq(a2) && b1.alpha_eq(b2),
            (TermKind::Lambda(_, a1, b1, t1), TermKind::Lambda(_, a2, b2, t2)) => {
                a1.alpha_eq(a2) && b1.alpha_eq(b2) && t1.alpha_eq(t2)
            }
            (TermKind::Apply(h1, _, a1, b1, t1), TermKind::Apply(h2, _, a2, b2, t2)) => {
                h1.alpha_eq(h2) && a1.alpha_eq(a2) && b1.alpha_eq(b2) && t1.alpha_eq(t2)
            }
            (TermKind::Eq(a1, s1, t1), TermKind::Eq(a2, s2, t2)) => {
                a1.alpha_eq(a2) && s1.alpha_eq(s2) && t1.alpha_eq(t2)
            }
            (TermKind::Refl(a1, t1), TermKind::Refl(a2, t2)) => a1.alpha_eq(a2) && t1.alpha_eq(t2),
            _ => false,
        }
    }

    pub fn is_type(&self) -> bool {
        matches!(self.0.kind, TermKind::Type)
    }

    pub fn size(&self) -> usize {
        match &self.0.kind {
            TermKind::Type | TermKind::Atom(_) | TermKind::Constant(_) | TermKind::Bound(_) => 1,
            TermKind::Prod(_, a, b) => 1 + a.size() + b.size(),
            TermKind::Lambda(_, a, b, t) => 1 + a.size() + b.size() + t.size(),
            TermKind::Apply(h, _, a, b, t) => 1 + h.size() + a.size() + b.size() + t.size(),
            TermKind::Eq(a, s, t) => 1 + a.size() + s.size() + t.size(),
            TermKind::Refl(a, t) => 1 + a.size() + t.size(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            TermKind::Type => write!(f, "Type"),
            TermKind::Atom(a) => write!(f, "{a:?}"),
            TermKind::Constant(c) => write!(f, "{c}"),
            TermKind::Bound(k) => write!(f, "#{k}"),
            TermKind::Prod(x, a, b) => write!(f, "(Π {}:{a:?}. {b:?})", x.name),
            TermKind::Lambda(x, a, b, t) => write!(f, "(λ {}:{a:?}.{b:?}. {t:?})", x.name),
            TermKind::Apply(h, x, a, b, t) => write!(f, "({h:?} @{{{}:{a:?}.{b:?}}} {t:?})", x.name),
            TermKind::Eq(a, s, t) => write!(f, "({s:?} ≡[{a:?}] {t:?})"),
            TermKind::Refl(a, t) => write!(f, "(refl[{a:?}] {t:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::constant(n.into())
    }

    #[test]
    fn abstraction_then_instantiation_is_identity() {
        let x = Atom::fresh("x");
        let t = Term::mk(TermKind::Eq(c("A"), Term::atom(&x), c("a")));
        let body = t.abstract_atom(x.id(), 0);
        assert!(!body.assumptions().contains(x.id()));
        assert_eq!(body.bound_assumptions().as_slice(), &[0]);
        let back = body.instantiate(0, &Term::atom(&x));
        assert!(back.alpha_eq(&t));
        assert!(back.assumptions().contains(x.id()));
    }

    #[test]
    fn alpha_ignores_names_and_assumptions() {
        let x = Atom::fresh("x");
        let y = Atom::fresh("y");
        let lx = Term::mk(TermKind::Lambda(Binder::new("x".into(), x.id()), c("A"), c("A"), Term::bound(0)));
        let ly = Term::mk(TermKind::Lambda(Binder::new("y".into(), y.id()), c("A"), c("A"), Term::bound(0)));
        assert!(lx.alpha_eq(&ly));
        assert!(lx.alpha_eq(&lx.mention(&AtomSet::singleton(x.id()))));
    }

    #[test]
    fn substitution_transfers_conversion_assumptions() {
        let x = Atom::fresh("x");
        let z = Atom::fresh("z");
        let t = c("a").mention(&AtomSet::singleton(x.id()));
        let s = t.subst_atom(x.id(), &Term::atom(&z));
        assert!(s.assumptions().contains(z.id()));
        assert!(!s.assumptions().contains(x.id()));
    }
}
