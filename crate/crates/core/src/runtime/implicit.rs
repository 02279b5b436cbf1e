//! Implicit arguments: `?` in checking mode stands for a fresh variable applied
//! to the hypotheses in scope, solved by first-order pattern unification.

use super::value::Value;
use super::{Ctx, Error, ErrorKind, Interp, Result};
use crate::nucleus::*;
use crate::stdlib::hint_spine;

/// A variable introduced for one `?`.
#[derive(Clone)]
pub struct Implicit {
    pub var: TermJudgment,
    /// `ξ : M ≡ λ x₁ … xₙ, t` and the solution, once found.
    pub solution: Option<(TermJudgment, TermJudgment)>,
}

impl Implicit {
    fn id(&self) -> u64 {
        self.var.as_atom().expect("an implicit is an atom").id()
    }
}

impl Interp {
    /// `M x₁ … xₙ` for a fresh `M : Π (x₁ : B₁) … (xₙ : Bₙ), A`.
    pub(super) fn new_implicit(&self, ty: &TermJudgment, hyps: &[TermJudgment]) -> Result<TermJudgment> {
        let mut pi = ty.clone();
        for x in hyps {
            pi = form_prod(x, &pi)?;
        }
        let m = fresh_atom(&pi, "M")?;
        let mut app = m.clone();
        for x in hyps.iter().rev() {
            app = form_app(&app, x)?;
        }
        self.0.implicits.borrow_mut().push(Implicit { var: m, solution: None });
        Ok(app)
    }

    /// Solves `M x₁ … xₙ ≡ t` or `t ≡ M x₁ … xₙ` for an unsolved implicit `M`.
    pub(super) fn solve_flex(&self, cx: &Ctx, a: &TermJudgment, b: &TermJudgment) -> Result<bool> {
        for (l, r) in [(a, b), (b, a)] {
            let Some((i, args)) = self.flex(l) else { continue };
            let m = self.0.implicits.borrow()[i].var.clone();
            let mid = m.as_atom().unwrap().id();
            if r.context().contains(mid) {
                continue;
            }
            let mut sol = r.clone();
            for x in args.iter().rev() {
                sol = form_lambda(x, &sol)?;
            }
            if !sol.ty().alpha_eq(m.ty()) {
                let Some(q) = self.with_engine(cx, |en| en.equal_types(&sol.type_of(), &m.type_of()))? else {
                    continue;
                };
                sol = convert(&sol, &q)?;
            }
            let xi = fresh_atom(&form_eq_type(&m, &sol)?, "ξ")?;
            self.0.implicits.borrow_mut()[i].solution = Some((xi, sol));
            return Ok(true);
        }
        Ok(false)
    }

    /// The index of the unsolved implicit at the head of `t` and its arguments,
    /// when they are distinct atoms.
    fn flex(&self, t: &TermJudgment) -> Option<(usize, Vec<TermJudgment>)> {
        let (head, n) = hint_spine(t.term());
        let TermKind::Atom(h) = head.kind() else { return None };
        let i = self.0.implicits.borrow().iter().position(|m| m.id() == h.id() && m.solution.is_none())?;
        let mut args = Vec::with_capacity(n);
        let mut cur = t.clone();
        while let InversionView::App(f, a) = invert(&cur) {
            let id = a.as_atom()?.id();
            if args.iter().any(|x: &TermJudgment| x.as_atom().unwrap().id() == id) {
                return None;
            }
            args.push(a);
            cur = f;
        }
        args.reverse();
        Some((i, args))
    }

    /// The equations of solved implicits, used as β-hints.
    pub(super) fn implicit_hints(&self) -> Vec<TermJudgment> {
        self.0.implicits.borrow().iter().rev().filter_map(|m| m.solution.as_ref().map(|s| s.0.clone())).collect()
    }

    /// Substitutes every solved implicit in `j`, failing if unsolved ones remain.
    pub fn resolve(&self, j: &TermJudgment) -> Result<TermJudgment> {
        let ims = self.0.implicits.borrow().clone();
        let mut j = j.clone();
        loop {
            let mut changed = false;
            for m in &ims {
                let Some((xi, sol)) = &m.solution else { continue };
                if j.context().contains(m.id()) {
                    j = substitute(&j, m.var.as_atom().unwrap(), sol)?;
                    changed = true;
                }
                let xid = xi.as_atom().unwrap();
                if j.context().contains(xid.id()) {
                    j = substitute(&j, xid, &form_refl(sol))?;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(m) = ims.iter().find(|m| j.context().contains(m.id())) {
            return Err(Error::new(ErrorKind::UnresolvedImplicit(print_judgment(&m.var.type_of()))));
        }
        Ok(j)
    }
}

pub(super) fn implicit(i: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    let ty = match &a[0] {
        Value::Tag(n, args) if &**n == "Some" && args.len() == 1 => match &args[0] {
            Value::Judg(t) => t.clone(),
            v => return Err(ErrorKind::Expected { expected: "a type", got: v.to_string() }.into()),
        },
        _ => return Err(ErrorKind::CannotInfer("an implicit argument".into()).into()),
    };
    let hyps = a[1].as_list().unwrap_or_default();
    let hyps: Vec<TermJudgment> = hyps.iter().filter_map(|v| v.as_judgment().cloned()).collect();
    Ok(Value::Judg(i.new_implicit(&ty, &hyps)?))
}

pub(super) fn resolve(i: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    match &a[0] {
        Value::Judg(j) => Ok(Value::Judg(i.resolve(j)?)),
        v => Err(ErrorKind::Expected { expected: "a judgment", got: v.to_string() }.into()),
    }
}
