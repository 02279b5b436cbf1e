//! Equality certificates.
//!
//! Every equality judgment carries a small derivation tree recording how it was
//! obtained. Term judgments carry the set of certificates used by the conversions
//! inside them, so that an independent checker can re-derive every conversion.

use super::atom::{Atom, AtomSet};
use super::term::Term;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub enum Rule {
    Refl,
    Sym,
    Trans,
    TyConv,
    /// Equality reflection from a witness of the equality type.
    Reflect(Term),
    Beta,
    CongProd(Atom),
    CongEq,
    CongAbs(Atom),
    CongApp(Atom),
    CongRefl,
    /// Uniqueness of typing: the type equals the natural type of the term.
    Uniq(Term),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Refl => "eq-refl",
            Rule::Sym => "eq-sym",
            Rule::Trans => "eq-trans",
            Rule::TyConv => "eq-ty-conv",
            Rule::Reflect(_) => "eq-reflection",
            Rule::Beta => "prod-beta",
            Rule::CongProd(_) => "cong-prod",
            Rule::CongEq => "cong-eq",
            Rule::CongAbs(_) => "cong-abs",
            Rule::CongApp(_) => "cong-app",
            Rule::CongRefl => "cong-refl",
            Rule::Uniq(_) => "uniq",
        }
    }

    pub fn binder(&self) -> Option<&Atom> {
        match self {
            Rule::CongProd(a) | Rule::CongAbs(a) | Rule::CongApp(a) => Some(a),
            _ => None,
        }
    }
}

pub struct ProofNode {
    pub rule: Rule,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: Term,
    pub premises: Vec<Proof>,
    asm: AtomSet,
}

/// A derivation of `lhs ≡ rhs : ty`.
#[derive(Clone)]
pub struct Proof(Arc<ProofNode>);

impl Proof {
    pub(crate) fn new(rule: Rule, lhs: Term, rhs: Term, ty: Term, premises: Vec<Proof>) -> Proof {
        let mut inner = AtomSet::empty();
        for p in &premises {
            inner = inner.union(p.atoms());
        }
        if let Rule::Reflect(w) | Rule::Uniq(w) = &rule {
            inner = inner.union(w.assumptions());
        }
        if let Some(x) = rule.binder() {
            inner = inner.remove(x.id());
        }
        let asm = inner
            .union(lhs.assumptions())
            .union(rhs.assumptions())
            .union(ty.assumptions());
        Proof(Arc::new(ProofNode { rule, lhs, rhs, ty, premises, asm }))
    }

    pub fn node(&self) -> &ProofNode {
        &self.0
    }

    /// Free atoms the derivation mentions (binder atoms of congruences excluded).
    pub fn atoms(&self) -> &AtomSet {
        &self.0.asm
    }

    pub fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn subst_memo(&self, id: u64, v: &Term, memo: &mut HashMap<usize, Proof>) -> Proof {
        if !self.atoms().contains(id) {
            return self.clone();
        }
        if let Some(p) = memo.get(&self.ptr_id()) {
            return p.clone();
        }
        let n = &self.0;
        let bound_here = n.rule.binder().map(|a| a.id()) == Some(id);
        let premises = if bound_here {
            n.premises.clone()
        } else {
            n.premises.iter().map(|p| p.subst_memo(id, v, memo)).collect()
        };
        let rule = match &n.rule {
            Rule::Reflect(w) => Rule::Reflect(w.subst_atom(id, v)),
            Rule::Uniq(w) => Rule::Uniq(w.subst_atom(id, v)),
            r => r.clone(),
        };
        let out = Proof::new(
            rule,
            n.lhs.subst_atom(id, v),
            n.rhs.subst_atom(id, v),
            n.ty.subst_atom(id, v),
            premises,
        );
        memo.insert(self.ptr_id(), out.clone());
        out
    }
}

impl std::fmt::Debug for Proof {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({:?} ≡ {:?} : {:?})", self.0.rule.name(), self.0.lhs, self.0.rhs, self.0.ty)
    }
}

enum CertKind {
    Leaf(Proof),
    Union(CertSet, CertSet),
}

struct CertNode {
    asm: AtomSet,
    kind: CertKind,
}

/// Persistent set of certificates; unions are O(1) and shared.
#[derive(Clone, Default)]
pub struct CertSet(Option<Arc<CertNode>>);

impl CertSet {
    pub fn empty() -> CertSet {
        CertSet(None)
    }

    pub fn single(p: Proof) -> CertSet {
        let asm = p.atoms().clone();
        CertSet(Some(Arc::new(CertNode { asm, kind: CertKind::Leaf(p) })))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    fn atoms(&self) -> AtomSet {
        match &self.0 {
            Some(n) => n.asm.clone(),
            None => AtomSet::empty(),
        }
    }

    pub fn union(&self, other: &CertSet) -> CertSet {
        match (&self.0, &other.0) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) if Arc::ptr_eq(a, b) => self.clone(),
            (Some(a), Some(b)) => {
                if let CertKind::Union(l, r) = &a.kind {
                    if l.same(other) || r.same(other) {
                        return self.clone();
                    }
                }
                if let CertKind::Union(l, r) = &b.kind {
                    if l.same(self) || r.same(self) {
                        return other.clone();
                    }
                }
                let asm = a.asm.union(&b.asm);
                CertSet(Some(Arc::new(CertNode {
                    asm,
                    kind: CertKind::Union(self.clone(), other.clone()),
                })))
            }
        }
    }

    fn same(&self, other: &CertSet) -> bool {
        match (&self.0, &other.0) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            (None, None) => true,
            _ => false,
        }
    }

    /// All certificates, deduplicated by identity, in a deterministic order.
    pub fn to_vec(&self) -> Vec<Proof> {
        let mut seen_nodes = std::collections::HashSet::new();
        let mut seen_proofs = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(s) = stack.pop() {
            let Some(n) = &s.0 else { continue };
            if !seen_nodes.insert(Arc::as_ptr(n) as usize) {
                continue;
            }
            match &n.kind {
                CertKind::Leaf(p) => {
                    if seen_proofs.insert(p.ptr_id()) {
                        out.push(p.clone());
                    }
                }
                CertKind::Union(l, r) => {
                    stack.push(r.clone());
                    stack.push(l.clone());
                }
            }
        }
        out
    }

    pub fn from_proofs(ps: impl IntoIterator<Item = Proof>) -> CertSet {
        let leaves: Vec<CertSet> = ps.into_iter().map(CertSet::single).collect();
        balanced(&leaves)
    }

    /// Certificates mentioning `id`, with `v` substituted for it. The originals
    /// are kept as well.
    pub(crate) fn with_subst(&self, id: u64, v: &Term) -> CertSet {
        if !self.atoms().contains(id) {
            return self.clone();
        }
        let mut memo = HashMap::new();
        let substituted: Vec<Proof> = self
            .to_vec()
            .into_iter()
            .filter(|p| p.atoms().contains(id))
            .map(|p| p.subst_memo(id, v, &mut memo))
            .collect();
        self.union(&CertSet::from_proofs(substituted))
    }
}

fn balanced(xs: &[CertSet]) -> CertSet {
    match xs.len() {
        0 => CertSet::empty(),
        1 => xs[0].clone(),
        n => balanced(&xs[..n / 2]).union(&balanced(&xs[n / 2..])),
    }
}

impl std::fmt::Debug for CertSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.to_vec()).finish()
    }
}
