//! Weak head-normalization and the two-phase equality check.

use super::hint::{open_prod, spine, Hint, Matcher};
use super::{Hints, Result, StdlibError};
use crate::nucleus::*;
use std::rc::Rc;

const MAX_DEPTH: usize = 4000;

pub struct Engine<'a> {
    sig: &'a Signature,
    hints: &'a Hints,
    budget: Option<u64>,
    steps: u64,
    depth: usize,
}

/// Runs one hint attempt: nucleus failures mean "no", fatal errors propagate.
fn attempt<T>(r: Result<Option<T>>) -> Result<Option<T>> {
    match r {
        Err(e) if !e.is_fatal() => Ok(None),
        other => other,
    }
}

fn trivial(e: &EqTermJudgment) -> bool {
    e.lhs().alpha_eq(e.rhs())
}

/// Replaces the atom opened for a binder by `x`, if the judgment mentions it.
fn reopen(t: &TermJudgment, y: &TermJudgment, x: &TermJudgment) -> Result<TermJudgment> {
    let y = y.as_atom().expect("an opened binder");
    if t.context().contains(y.id()) {
        Ok(substitute(t, y, x)?)
    } else {
        Ok(t.clone())
    }
}

impl<'a> Engine<'a> {
    pub fn new(sig: &'a Signature, hints: &'a Hints, budget: Option<u64>) -> Engine<'a> {
        Engine { sig, hints, budget, steps: 0, depth: 0 }
    }

    /// Reduction steps taken so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        match self.budget {
            Some(b) if self.steps > b => Err(StdlibError::Budget(b)),
            _ => Ok(()),
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        if self.depth >= MAX_DEPTH {
            return Err(StdlibError::TooDeep);
        }
        self.depth += 1;
        let out = f(self);
        self.depth -= 1;
        out
    }

    /// Makes an equation with left-hand side `s` hold at the type of `s`.
    fn align(&mut self, e: EqTermJudgment, s: &TermJudgment) -> Result<EqTermJudgment> {
        if e.ty().alpha_eq(s.ty()) {
            return Ok(e);
        }
        let nat = natural_type_eq(self.sig, s)?;
        if nat.rhs().alpha_eq(e.ty()) {
            return Ok(eq_ty_conv(&e, &eq_sym_type(&nat))?);
        }
        match self.equal_types(&eq_lhs(&e).type_of(), &s.type_of())? {
            Some(q) => Ok(eq_ty_conv(&e, &q)?),
            None => Err(NucleusError::TypeMismatch.into()),
        }
    }

    // -----------------------------------------------------------------------
    // Normalization

    /// `t ≡ t'` at the type of `t`, with `t'` in weak head-normal form.
    pub fn whnf(&mut self, t: &TermJudgment) -> Result<EqTermJudgment> {
        self.nested(|s| {
            let mut acc = eq_refl(t);
            loop {
                let cur = eq_rhs(&acc);
                let Some(e) = s.step(&cur)? else { return Ok(acc) };
                s.tick()?;
                let e = s.align(e, &cur)?;
                acc = eq_trans(&acc, &e)?;
            }
        })
    }

    fn step(&mut self, cur: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        if let InversionView::App(h, a) = invert(cur) {
            let eh = self.whnf(&h)?;
            if !trivial(&eh) {
                return Ok(Some(self.rebuild_app(&h, &a, &eh, &eq_refl(&a))?));
            }
            match beta_witness(cur) {
                Ok(e) => return Ok(Some(e)),
                Err(NucleusError::NotARedex(_)) => {}
                Err(e) => return Err(e.into()),
            }
            if let TermKind::Lambda(..) = h.term().kind() {
                if let Some(e) = attempt(self.repair_redex(&h, &a))? {
                    return Ok(Some(e));
                }
            }
            if self.eager_last(cur.term()) {
                let ea = self.whnf(&a)?;
                if !trivial(&ea) {
                    return Ok(Some(self.rebuild_app(&h, &a, &eq_refl(&h), &ea)?));
                }
            }
        }
        let hints: Vec<Rc<Hint>> = self.hints.betas.clone();
        for hint in hints {
            if hint.may_match(cur.term()) {
                if let Some(e) = attempt(self.try_rewrite(&hint, cur))? {
                    return Ok(Some(e));
                }
            }
        }
        Ok(None)
    }

    fn eager_last(&self, t: &Term) -> bool {
        let (h, n) = spine(t);
        let TermKind::Constant(c) = h.kind() else { return false };
        self.hints.reducing.get(c).and_then(|flags| flags.get(n - 1)).copied().unwrap_or(false)
    }

    /// `h a ≡ h' a'` from `h ≡ h'` and `a ≡ a'`, keeping the annotations.
    fn rebuild_app(
        &mut self,
        h: &TermJudgment,
        _a: &TermJudgment,
        eh: &EqTermJudgment,
        ea: &EqTermJudgment,
    ) -> Result<EqTermJudgment> {
        let (x, dom, cod) = open_prod(&h.type_of())?.expect("the head of an application has a product type");
        Ok(cong_app(&x, eh, &eq_refl(&dom), &eq_refl(&cod), ea)?)
    }

    /// A λ applied at annotations other than its own: when the annotations are
    /// provably equal, re-annotate the application so that β applies.
    fn repair_redex(&mut self, h: &TermJudgment, a: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        let Some((x, d1, c1)) = open_prod(&h.type_of())? else { return Ok(None) };
        let nat = natural_type_eq(self.sig, h)?;
        let own = eq_rhs(nat.as_term_eq());
        let Some((y, d2, c2)) = open_prod(&own)? else { return Ok(None) };
        let Some(ed) = self.equal_types(&d1, &d2)? else { return Ok(None) };
        let xc = convert(&x, &ed)?;
        let c2x = reopen(&c2, &y, &xc)?;
        let Some(ec) = self.equal_types(&c1, &c2x)? else { return Ok(None) };
        Ok(Some(cong_app(&x, &eq_refl(h), ed.as_term_eq(), ec.as_term_eq(), &eq_refl(a))?))
    }

    /// Rewrites `cur` with a β-hint.
    fn try_rewrite(&mut self, hint: &Hint, cur: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        let mut m = Matcher::new(hint);
        if !m.matches(&hint.lhs, cur)? {
            return Ok(None);
        }
        let Some(app) = self.instantiate(hint, &m, false)? else { return Ok(None) };
        let e = reflect_term_eq(&app)?;
        if !e.lhs().alpha_eq(cur.term()) {
            return Ok(None);
        }
        Ok(Some(self.align(e, cur)?))
    }

    /// Applies the hint to the matched values, proving unmatched premises when asked.
    fn instantiate(&mut self, hint: &Hint, m: &Matcher, prove: bool) -> Result<Option<TermJudgment>> {
        let mut cur = hint.judgment.clone();
        for v in hint.var_ids() {
            let Some((_, dom, _)) = open_prod(&cur.type_of())? else { return Ok(None) };
            let val = match m.subst.get(&v) {
                Some(val) => val.clone(),
                None if prove => match self.prove(&dom)? {
                    Some(w) => w,
                    None => return Ok(None),
                },
                None => return Ok(None),
            };
            let val = if val.ty().alpha_eq(dom.term()) {
                val
            } else {
                match self.equal_types(&val.type_of(), &dom)? {
                    Some(e) => convert(&val, &e)?,
                    None => return Ok(None),
                }
            };
            cur = form_app(&cur, &val)?;
        }
        Ok(Some(cur))
    }

    /// Inhabits an equation type, possibly under products.
    fn prove(&mut self, p: &TermJudgment) -> Result<Option<TermJudgment>> {
        match invert(p) {
            InversionView::Eq(_, l, r) => Ok(self.equal(&l, &r)?.map(|e| refl_of_eq(&e))),
            InversionView::Prod(..) => {
                let (x, _, cod) = open_prod(p)?.expect("a product");
                match self.prove(&cod)? {
                    Some(w) => Ok(Some(form_lambda(&x, &w)?)),
                    None => Ok(None),
                }
            }
            _ => Ok(None),
        }
    }

    // -----------------------------------------------------------------------
    // Equality

    /// `s ≡ t` at the type of `s`, if the hints and the structure allow it.
    pub fn equal(&mut self, s: &TermJudgment, t: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        self.nested(|e| e.equal_inner(s, t))
    }

    /// `A ≡ B` between two types.
    pub fn equal_types(&mut self, a: &TermJudgment, b: &TermJudgment) -> Result<Option<EqTypeJudgment>> {
        Ok(self.equal(a, b)?.and_then(|e| e.as_type_eq()))
    }

    fn equal_inner(&mut self, s: &TermJudgment, t: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        if s.term().alpha_eq(t.term()) {
            return Ok(Some(eq_refl(s)));
        }
        let t = if t.ty().alpha_eq(s.ty()) {
            t.clone()
        } else {
            match self.equal_types(&t.type_of(), &s.type_of())? {
                Some(e) => convert(t, &e)?,
                None => return Ok(None),
            }
        };
        let general: Vec<Rc<Hint>> = self.hints.general.clone();
        for hint in &general {
            if let Some(e) = attempt(self.try_general(hint, s, &t))? {
                return Ok(Some(e));
            }
        }
        if !self.hints.etas.is_empty() {
            let ea = self.whnf(&s.type_of())?;
            let ety = ea.as_type_eq().expect("an equation between types");
            let a2 = eq_rhs(&ea);
            let s2 = convert(s, &ety)?;
            let t2 = convert(&t, &ety)?;
            let etas: Vec<Rc<Hint>> = self.hints.etas.clone();
            for hint in &etas {
                if let Some(e) = attempt(self.try_eta(hint, &a2, &s2, &t2))? {
                    return Ok(Some(eq_ty_conv(&e, &eq_sym_type(&ety))?));
                }
            }
        }
        self.structural(s, &t)
    }

    fn try_general(&mut self, hint: &Hint, s: &TermJudgment, t: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        for flip in [false, true] {
            let (l, r) = if flip { (t, s) } else { (s, t) };
            let mut m = Matcher::new(hint);
            if !(m.matches(&hint.lhs, l)? && m.matches(&hint.rhs, r)?) {
                continue;
            }
            let Some(app) = self.instantiate(hint, &m, false)? else { continue };
            let e = reflect_term_eq(&app)?;
            if !(e.lhs().alpha_eq(l.term()) && e.rhs().alpha_eq(r.term())) {
                continue;
            }
            let e = if flip { eq_sym(&e) } else { e };
            return Ok(Some(self.align(e, s)?));
        }
        Ok(None)
    }

    /// `s ≡ t` at `a` by an extensionality hint whose conclusion is at a type matching `a`.
    fn try_eta(
        &mut self,
        hint: &Hint,
        a: &TermJudgment,
        s: &TermJudgment,
        t: &TermJudgment,
    ) -> Result<Option<EqTermJudgment>> {
        let mut m = Matcher::new(hint);
        if !m.matches(&hint.ty, a)? {
            return Ok(None);
        }
        let (TermKind::Atom(y1), TermKind::Atom(y2)) = (hint.lhs.kind(), hint.rhs.kind()) else {
            return Ok(None);
        };
        if !(m.bind(y1.id(), s) && m.bind(y2.id(), t)) {
            return Ok(None);
        }
        let Some(app) = self.instantiate(hint, &m, true)? else { return Ok(None) };
        let e = reflect_term_eq(&app)?;
        if !(e.lhs().alpha_eq(s.term()) && e.rhs().alpha_eq(t.term())) {
            return Ok(None);
        }
        Ok(Some(self.align(e, s)?))
    }

    /// Compares weak head-normal forms by congruence.
    fn structural(&mut self, s: &TermJudgment, t: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        let es = self.whnf(s)?;
        let et = self.whnf(t)?;
        let s2 = eq_rhs(&es);
        let t2 = eq_rhs(&et);
        let mid = if s2.term().alpha_eq(t2.term()) {
            eq_refl(&s2)
        } else {
            match self.congruence(&s2, &t2)? {
                Some(e) => self.align(e, &s2)?,
                None => return Ok(None),
            }
        };
        Ok(Some(eq_trans(&eq_trans(&es, &mid)?, &eq_sym(&et))?))
    }

    /// Heads of neutral spines are compared without unfolding or extensionality.
    fn neutral(&mut self, s: &TermJudgment, t: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        if s.term().alpha_eq(t.term()) {
            return Ok(Some(eq_refl(s)));
        }
        match self.congruence(s, t)? {
            Some(e) => Ok(Some(self.align(e, s)?)),
            None => Ok(None),
        }
    }

    /// Opens two binders with the same atom: the second domain is converted to the first.
    #[allow(clippy::type_complexity)]
    fn open_pair(
        &mut self,
        ty1: &TermJudgment,
        ty2: &TermJudgment,
    ) -> Result<Option<(TermJudgment, EqTypeJudgment, TermJudgment, TermJudgment)>> {
        let (Some((x, d1, c1)), Some((y, d2, c2))) = (open_prod(ty1)?, open_prod(ty2)?) else {
            return Ok(None);
        };
        let Some(ed) = self.equal_types(&d1, &d2)? else { return Ok(None) };
        let xc = convert(&x, &ed)?;
        let c2x = reopen(&c2, &y, &xc)?;
        Ok(Some((x, ed, c1, c2x)))
    }

    fn congruence(&mut self, s: &TermJudgment, t: &TermJudgment) -> Result<Option<EqTermJudgment>> {
        match (invert(s), invert(t)) {
            (InversionView::Type, InversionView::Type) => Ok(Some(eq_refl(s))),
            (InversionView::App(h1, a1), InversionView::App(h2, a2)) => {
                let (k1, n1) = spine(s.term());
                let (k2, n2) = spine(t.term());
                if n1 != n2 || !same_head(k1, k2) {
                    return Ok(None);
                }
                let Some((x, ed, c1, c2x)) = self.open_pair(&h1.type_of(), &h2.type_of())? else {
                    return Ok(None);
                };
                let Some(ec) = self.equal_types(&c1, &c2x)? else { return Ok(None) };
                let Some(eh) = self.neutral(&h1, &h2)? else { return Ok(None) };
                let a2c = convert(&a2, &eq_sym_type(&ed))?;
                let Some(ea) = self.equal(&a1, &a2c)? else { return Ok(None) };
                Ok(Some(cong_app(&x, &eh, ed.as_term_eq(), ec.as_term_eq(), &ea)?))
            }
            (InversionView::Prod(..), InversionView::Prod(..)) => {
                let Some((x, ed, c1, c2x)) = self.open_pair(s, t)? else { return Ok(None) };
                let Some(ec) = self.equal_types(&c1, &c2x)? else { return Ok(None) };
                Ok(Some(cong_prod(&x, ed.as_term_eq(), ec.as_term_eq())?.as_term_eq().clone()))
            }
            (InversionView::Lambda(..), InversionView::Lambda(..)) => {
                let (InversionView::Lambda(y1, d1, b1), InversionView::Lambda(y2, d2, b2)) = (invert(s), invert(t))
                else {
                    unreachable!()
                };
                let x = match hypothesis(&b1, &y1) {
                    Some(x) => x,
                    None => fresh_atom(&d1, y1.name())?,
                };
                let Some(ed) = self.equal_types(&d1, &d2)? else { return Ok(None) };
                let xc = convert(&x, &ed)?;
                let b2x = match hypothesis(&b2, &y2) {
                    Some(y) => reopen(&b2, &y, &xc)?,
                    None => b2,
                };
                let Some(ec) = self.equal_types(&b1.type_of(), &b2x.type_of())? else { return Ok(None) };
                let b2c = convert(&b2x, &eq_sym_type(&ec))?;
                let Some(eb) = self.equal(&b1, &b2c)? else { return Ok(None) };
                Ok(Some(cong_lambda(&x, ed.as_term_eq(), ec.as_term_eq(), &eb)?))
            }
            (InversionView::Eq(a1, l1, r1), InversionView::Eq(a2, l2, r2)) => {
                let Some(ea) = self.equal_types(&a1, &a2)? else { return Ok(None) };
                let back = eq_sym_type(&ea);
                let Some(el) = self.equal(&l1, &convert(&l2, &back)?)? else { return Ok(None) };
                let Some(er) = self.equal(&r1, &convert(&r2, &back)?)? else { return Ok(None) };
                Ok(Some(cong_eq(ea.as_term_eq(), &el, &er)?.as_term_eq().clone()))
            }
            (InversionView::Refl(t1), InversionView::Refl(t2)) => {
                let Some(ea) = self.equal_types(&t1.type_of(), &t2.type_of())? else { return Ok(None) };
                let Some(et) = self.equal(&t1, &convert(&t2, &eq_sym_type(&ea))?)? else { return Ok(None) };
                Ok(Some(cong_refl(ea.as_term_eq(), &et)?))
            }
            _ => Ok(None),
        }
    }

    // -----------------------------------------------------------------------
    // Shapes

    /// `A ≡ Π (x : B), C` for some product.
    pub fn as_prod(&mut self, a: &TermJudgment) -> Result<Option<EqTypeJudgment>> {
        self.as_shape(a, |t| matches!(t.kind(), TermKind::Prod(..)))
    }

    /// `A ≡ (s ≡ t)` for some equation type.
    pub fn as_eq(&mut self, a: &TermJudgment) -> Result<Option<EqTypeJudgment>> {
        self.as_shape(a, |t| matches!(t.kind(), TermKind::Eq(..)))
    }

    fn as_shape(&mut self, a: &TermJudgment, shape: impl Fn(&Term) -> bool) -> Result<Option<EqTypeJudgment>> {
        if shape(a.term()) {
            return Ok(eq_refl(a).as_type_eq());
        }
        let e = self.whnf(a)?;
        if shape(e.rhs()) {
            return Ok(e.as_type_eq());
        }
        // A general hint may state the shape directly, as `D ≡ (D → D)` does.
        let general: Vec<Rc<Hint>> = self.hints.general.clone();
        let target = eq_rhs(&e);
        for hint in &general {
            for flip in [false, true] {
                let (l, r) = if flip { (&hint.rhs, &hint.lhs) } else { (&hint.lhs, &hint.rhs) };
                if !shape(r) {
                    continue;
                }
                let mut m = Matcher::new(hint);
                match m.matches(l, &target) {
                    Ok(true) => {}
                    Ok(false) => continue,
                    Err(e) if e.is_fatal() => return Err(e),
                    Err(_) => continue,
                }
                let Some(app) = attempt(self.instantiate(hint, &m, false))? else { continue };
                let Ok(h) = reflect_term_eq(&app) else { continue };
                let h = if flip { eq_sym(&h) } else { h };
                if !h.lhs().alpha_eq(target.term()) || !shape(h.rhs()) {
                    continue;
                }
                let Ok(h) = self.align(h, &target) else { continue };
                return Ok(eq_trans(&e, &h)?.as_type_eq());
            }
        }
        Ok(None)
    }
}

fn same_head(a: &Term, b: &Term) -> bool {
    match (a.kind(), b.kind()) {
        (TermKind::Constant(x), TermKind::Constant(y)) => x == y,
        (TermKind::Atom(x), TermKind::Atom(y)) => x == y,
        (TermKind::Atom(_) | TermKind::Constant(_), _) | (_, TermKind::Atom(_) | TermKind::Constant(_)) => false,
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Hint, HintKind, Hints};
    use super::*;
    use crate::nucleus::json::export_eq;
    use crate::oracle::check_export;
    use std::rc::Rc;

    fn sig() -> Signature {
        let s = sig_add_constant(&sig_empty(), "A", &form_type()).unwrap();
        let a = form_constant(&s, "A").unwrap();
        let z = fresh_atom(&a, "z").unwrap();
        let s = sig_add_constant(&s, "P", &form_prod(&z, &form_type()).unwrap()).unwrap();
        let s = sig_add_constant(&s, "f", &form_prod(&z, &a).unwrap()).unwrap();
        let s = sig_add_constant(&s, "a", &a).unwrap();
        sig_add_constant(&s, "b", &a).unwrap()
    }

    fn c(s: &Signature, n: &str) -> TermJudgment {
        form_constant(s, n).unwrap()
    }

    fn id_at(s: &Signature) -> TermJudgment {
        let x = fresh_atom(&c(s, "A"), "x").unwrap();
        form_lambda(&x, &x).unwrap()
    }

    #[test]
    fn whnf_contracts_a_redex() {
        let s = sig();
        let hints = Hints::default();
        let t = form_app(&id_at(&s), &c(&s, "a")).unwrap();
        let mut e = Engine::new(&s, &hints, None);
        let r = e.whnf(&t).unwrap();
        assert!(r.rhs().alpha_eq(c(&s, "a").term()));
        assert_eq!(e.steps(), 1);
        check_export(&export_eq(&s, &r)).unwrap();
    }

    #[test]
    fn whnf_of_a_constant_takes_no_steps() {
        let s = sig();
        let hints = Hints::default();
        let mut e = Engine::new(&s, &hints, None);
        let r = e.whnf(&c(&s, "a")).unwrap();
        assert!(trivial(&r));
        assert_eq!(e.steps(), 0);
    }

    #[test]
    fn general_hint_closes_a_congruence() {
        let s = sig();
        let x = fresh_atom(&c(&s, "A"), "x").unwrap();
        let y = fresh_atom(&c(&s, "A"), "y").unwrap();
        let xi = fresh_atom(&form_eq_type(&x, &y).unwrap(), "ξ").unwrap();
        let mut hints = Hints::default();
        hints.general.push(Rc::new(Hint::new(HintKind::General, &xi).unwrap()));
        let px = form_app(&c(&s, "P"), &x).unwrap();
        let py = form_app(&c(&s, "P"), &y).unwrap();
        let r = Engine::new(&s, &hints, None).equal(&px, &py).unwrap().unwrap();
        assert!(r.rhs().alpha_eq(py.term()));
        check_export(&export_eq(&s, &r)).unwrap();
        assert!(Engine::new(&s, &Hints::default(), None).equal(&px, &py).unwrap().is_none());
    }

    #[test]
    fn beta_hint_rewrites_under_a_telescope() {
        let s = sig();
        // f_def : Π (n : A), f n ≡ n
        let n = fresh_atom(&c(&s, "A"), "n").unwrap();
        let fn_ = form_app(&c(&s, "f"), &n).unwrap();
        let ty = form_prod(&n, &form_eq_type(&fn_, &n).unwrap()).unwrap();
        let s = sig_add_constant(&s, "f_def", &ty).unwrap();
        let mut hints = Hints::default();
        hints.betas.push(Rc::new(Hint::new(HintKind::Beta, &c(&s, "f_def")).unwrap()));
        let t = form_app(&c(&s, "f"), &form_app(&c(&s, "f"), &c(&s, "a")).unwrap()).unwrap();
        let mut e = Engine::new(&s, &hints, None);
        let r = e.whnf(&t).unwrap();
        assert!(r.rhs().alpha_eq(c(&s, "a").term()));
        assert_eq!(e.steps(), 2);
        check_export(&export_eq(&s, &r)).unwrap();
        let r = Engine::new(&s, &hints, None).equal(&t, &c(&s, "a")).unwrap().unwrap();
        check_export(&export_eq(&s, &r)).unwrap();
    }

    #[test]
    fn budget_stops_reduction() {
        let s = sig();
        let hints = Hints::default();
        let t = form_app(&id_at(&s), &form_app(&id_at(&s), &c(&s, "a")).unwrap()).unwrap();
        let err = Engine::new(&s, &hints, Some(1)).whnf(&t).unwrap_err();
        assert_eq!(err, StdlibError::Budget(1));
    }

    #[test]
    fn malformed_hints_are_rejected() {
        let s = sig();
        assert!(Hint::new(HintKind::General, &c(&s, "a")).is_err());
    }

    #[test]
    fn lambdas_compare_under_the_binder() {
        let s = sig();
        let x = fresh_atom(&c(&s, "A"), "x").unwrap();
        let l1 = form_lambda(&x, &form_app(&id_at(&s), &x).unwrap()).unwrap();
        let r = Engine::new(&s, &Hints::default(), None).equal(&l1, &id_at(&s)).unwrap().unwrap();
        check_export(&export_eq(&s, &r)).unwrap();
    }
}
