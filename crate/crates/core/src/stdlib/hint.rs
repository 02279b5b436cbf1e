//! Hints and first-order matching of their patterns against judgments.

use super::{Result, StdlibError};
use crate::nucleus::*;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HintKind {
    Beta,
    Eta,
    General,
}

/// A hint `h : Π (x₁ : A₁) … (xₙ : Aₙ), l ≡_T r`, opened once with fresh atoms
/// standing for the telescope variables.
pub struct Hint {
    pub kind: HintKind,
    pub judgment: TermJudgment,
    pub(super) vars: Vec<TermJudgment>,
    pub(super) ty: Term,
    pub(super) lhs: Term,
    pub(super) rhs: Term,
    /// Head constant and argument count of the left-hand side.
    pub(super) head: Option<(Name, usize)>,
}

/// The head of an application spine and the number of arguments.
pub fn spine(t: &Term) -> (&Term, usize) {
    let mut t = t;
    let mut n = 0;
    while let TermKind::Apply(h, ..) = t.kind() {
        t = h;
        n += 1;
    }
    (t, n)
}

fn head_constant(t: &Term) -> Option<(Name, usize)> {
    let (h, n) = spine(t);
    match h.kind() {
        TermKind::Constant(c) => Some((c.clone(), n)),
        _ => None,
    }
}

/// Opens `Π (x : A), B` into an atom judgment for `x`, `A` and `B` mentioning `x`.
pub(super) fn open_prod(ty: &TermJudgment) -> Result<Option<(TermJudgment, TermJudgment, TermJudgment)>> {
    match invert(ty) {
        InversionView::Prod(y, dom, cod) => {
            let x = match hypothesis(&cod, &y) {
                Some(x) => x,
                None => fresh_atom(&dom, y.name())?,
            };
            Ok(Some((x, dom, cod)))
        }
        _ => Ok(None),
    }
}

fn is_precondition(t: &Term) -> bool {
    match t.kind() {
        TermKind::Eq(..) => true,
        TermKind::Prod(_, _, b) => is_precondition(b),
        _ => false,
    }
}

impl Hint {
    pub fn new(kind: HintKind, j: &TermJudgment) -> Result<Hint> {
        let malformed = |m: &str| StdlibError::MalformedHint(m.to_string());
        let mut vars = Vec::new();
        let mut t = j.type_of();
        let (ty, lhs, rhs) = loop {
            match t.term().kind() {
                TermKind::Prod(..) => {
                    let (x, _, cod) = open_prod(&t)?.expect("a product inverts to a product");
                    vars.push(x);
                    t = cod;
                }
                TermKind::Eq(a, l, r) => break (a.clone(), l.clone(), r.clone()),
                _ => return Err(malformed("the type is not a universally quantified equation")),
            }
        };
        let var_ids: Vec<u64> = vars.iter().map(|v| v.as_atom().unwrap().id()).collect();
        let occurs = |t: &Term| -> Vec<u64> {
            t.free_atoms().iter().map(|a| a.id()).filter(|a| var_ids.contains(a)).collect()
        };
        let as_var = |t: &Term| match t.kind() {
            TermKind::Atom(a) if var_ids.contains(&a.id()) => Some(a.id()),
            _ => None,
        };
        match kind {
            HintKind::Beta => {
                if as_var(&lhs).is_some() {
                    return Err(malformed("the left-hand side of a β-hint is a variable"));
                }
                let seen = occurs(&lhs);
                if var_ids.iter().any(|v| !seen.contains(v)) {
                    return Err(malformed("a variable of the β-hint does not occur on its left-hand side"));
                }
            }
            HintKind::General => {
                let mut seen = occurs(&lhs);
                seen.extend(occurs(&rhs));
                if var_ids.iter().any(|v| !seen.contains(v)) {
                    return Err(malformed("a variable of the hint does not occur in its equation"));
                }
            }
            HintKind::Eta => {
                let (Some(y1), Some(y2)) = (as_var(&lhs), as_var(&rhs)) else {
                    return Err(malformed("the sides of an η-hint must be variables"));
                };
                if y1 == y2 {
                    return Err(malformed("the sides of an η-hint must be distinct variables"));
                }
                let in_ty = occurs(&ty);
                for v in &vars {
                    let id = v.as_atom().unwrap().id();
                    if id != y1 && id != y2 && !in_ty.contains(&id) && !is_precondition(v.ty()) {
                        return Err(malformed("an η-hint premise is not an equation"));
                    }
                }
            }
        }
        let head = head_constant(&lhs);
        Ok(Hint { kind, judgment: j.clone(), vars, ty, lhs, rhs, head })
    }

    pub(super) fn var_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.vars.iter().map(|v| v.as_atom().unwrap().id())
    }

    /// Can the left-hand side possibly match `t`?
    pub(super) fn may_match(&self, t: &Term) -> bool {
        match &self.head {
            Some(h) => head_constant(t).as_ref() == Some(h),
            None => true,
        }
    }
}

/// First-order matching with Miller patterns `M x` for opened binders `x`.
pub(super) struct Matcher {
    vars: Vec<u64>,
    pub(super) subst: HashMap<u64, TermJudgment>,
    locals: Vec<TermJudgment>,
}

impl Matcher {
    pub(super) fn new(h: &Hint) -> Matcher {
        Matcher { vars: h.var_ids().collect(), subst: HashMap::new(), locals: Vec::new() }
    }

    fn unbound_var(&self, id: u64) -> bool {
        self.vars.contains(&id) && !self.subst.contains_key(&id)
    }

    fn has_unbound(&self, p: &Term) -> bool {
        p.free_atoms().iter().any(|a| self.unbound_var(a.id()))
    }

    fn ground(&self, p: &Term) -> Term {
        let mut t = p.clone();
        for a in p.free_atoms() {
            if let Some(v) = self.subst.get(&a.id()) {
                t = t.subst_atom(a.id(), v.term());
            }
        }
        t
    }

    fn mentions_local(&self, g: &TermJudgment) -> bool {
        self.locals.iter().any(|x| g.context().contains(x.as_atom().unwrap().id()))
    }

    fn local(&self, id: u64) -> Option<&TermJudgment> {
        self.locals.iter().find(|x| x.as_atom().unwrap().id() == id)
    }

    pub(super) fn bind(&mut self, id: u64, g: &TermJudgment) -> bool {
        match self.subst.get(&id) {
            Some(v) => v.term().alpha_eq(g.term()),
            None => {
                if self.mentions_local(g) {
                    return false;
                }
                self.subst.insert(id, g.clone());
                true
            }
        }
    }

    fn under<A>(&mut self, x: TermJudgment, f: impl FnOnce(&mut Self, &Term) -> A) -> A {
        let xt = x.term().clone();
        self.locals.push(x);
        let out = f(self, &xt);
        self.locals.pop();
        out
    }

    /// Matches the pattern `p` against `g`, extending the substitution.
    pub(super) fn matches(&mut self, p: &Term, g: &TermJudgment) -> Result<bool> {
        if !self.has_unbound(p) {
            return Ok(self.ground(p).alpha_eq(g.term()));
        }
        match p.kind() {
            TermKind::Atom(a) => Ok(self.bind(a.id(), g)),
            TermKind::Apply(ph, _, pd, pc, pa) => {
                if let (TermKind::Atom(m), TermKind::Atom(y)) = (ph.kind(), pa.kind()) {
                    if self.unbound_var(m.id()) {
                        if let Some(yj) = self.local(y.id()).cloned() {
                            return self.miller(m.id(), &yj, g);
                        }
                    }
                }
                let InversionView::App(h, a) = invert(g) else { return Ok(false) };
                if !(self.matches(ph, &h)? && self.matches(pa, &a)?) {
                    return Ok(false);
                }
                let Some((x, d, c)) = open_prod(&h.type_of())? else { return Ok(false) };
                if !self.matches(pd, &d)? {
                    return Ok(false);
                }
                self.under(x, |s, xt| s.matches(&pc.instantiate(0, xt), &c))
            }
            TermKind::Prod(_, pd, pc) => {
                let Some((x, d, c)) = open_prod(g)? else { return Ok(false) };
                if !self.matches(pd, &d)? {
                    return Ok(false);
                }
                self.under(x, |s, xt| s.matches(&pc.instantiate(0, xt), &c))
            }
            TermKind::Lambda(_, pd, pc, pb) => {
                let InversionView::Lambda(y, d, body) = invert(g) else { return Ok(false) };
                if !self.matches(pd, &d)? {
                    return Ok(false);
                }
                let x = match hypothesis(&body, &y) {
                    Some(x) => x,
                    None => fresh_atom(&d, y.name())?,
                };
                self.under(x, |s, xt| {
                    Ok(s.matches(&pb.instantiate(0, xt), &body)?
                        && s.matches(&pc.instantiate(0, xt), &body.type_of())?)
                })
            }
            TermKind::Eq(pa, pl, pr) => {
                let InversionView::Eq(a, l, r) = invert(g) else { return Ok(false) };
                Ok(self.matches(pl, &l)? && self.matches(pr, &r)? && self.matches(pa, &a)?)
            }
            TermKind::Refl(pa, ps) => {
                let InversionView::Refl(s) = invert(g) else { return Ok(false) };
                Ok(self.matches(ps, &s)? && self.matches(pa, &s.type_of())?)
            }
            TermKind::Type | TermKind::Constant(_) | TermKind::Bound(_) => Ok(false),
        }
    }

    /// Solves `M y ≐ g` by η-contraction when `g` is `h y`, otherwise by abstracting `y`.
    fn miller(&mut self, m: u64, y: &TermJudgment, g: &TermJudgment) -> Result<bool> {
        let yid = y.as_atom().unwrap().id();
        if let InversionView::App(h, a) = invert(g) {
            if a.as_atom().is_some_and(|a| a.id() == yid) && !h.context().contains(yid) && self.bind(m, &h) {
                return Ok(true);
            }
        }
        let others = self.locals.iter().any(|x| {
            let id = x.as_atom().unwrap().id();
            id != yid && g.context().contains(id)
        });
        if others {
            return Ok(false);
        }
        let Ok(v) = form_lambda(y, g) else { return Ok(false) };
        Ok(self.bind(m, &v))
    }
}
