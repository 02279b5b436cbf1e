//! Matching values against patterns. Judgment patterns take judgments apart
//! with the nucleus inversion principles; matching never triggers operations.

use super::effects::Request;
use super::eval::Interp;
use super::value::{Env, Value};
use crate::nucleus::{hypothesis, invert, InversionView, TermJudgment, TermKind};
use crate::syntax::ast::{Name, OpClause, Pattern, TermPat};

pub type Binds = Vec<(Name, Value)>;

fn bind(binds: &mut Binds, n: &Name, v: Value) -> bool {
    match binds.iter().find(|(m, _)| m == n) {
        Some((_, old)) => old.equal(&v),
        None => {
            binds.push((n.clone(), v));
            true
        }
    }
}

impl Interp {
    fn interpolate(&self, env: &Env, n: &str) -> Option<Value> {
        env.lookup(n).cloned().or_else(|| self.global(n))
    }

    pub fn match_pattern(&self, p: &Pattern, v: &Value, env: &Env, binds: &mut Binds) -> bool {
        match (p, v) {
            (Pattern::Any, _) => true,
            (Pattern::Var(n), _) => bind(binds, n, v.clone()),
            (Pattern::Interp(n) | Pattern::Ident(n), _) => self.interpolate(env, n).is_some_and(|w| w.equal(v)),
            (Pattern::Tag(n, ps), Value::Tag(m, vs)) => {
                n == m && ps.len() == vs.len() && ps.iter().zip(vs.iter()).all(|(p, v)| self.match_pattern(p, v, env, binds))
            }
            (Pattern::Tuple(ps), Value::Tuple(vs)) => {
                ps.len() == vs.len() && ps.iter().zip(vs.iter()).all(|(p, v)| self.match_pattern(p, v, env, binds))
            }
            (Pattern::Nil, Value::Nil) => true,
            (Pattern::Cons(ph, pt), Value::Cons(c)) => {
                self.match_pattern(ph, &c.0, env, binds) && self.match_pattern(pt, &c.1, env, binds)
            }
            (Pattern::Str(s), Value::Str(t)) => **s == **t,
            (Pattern::Judg(tp, typ), Value::Judg(j)) => {
                self.match_term(tp, j, env, binds)
                    && match typ {
                        Some(typ) => self.match_term(typ, &j.type_of(), env, binds),
                        None => true,
                    }
            }
            _ => false,
        }
    }

    fn match_term(&self, p: &TermPat, j: &TermJudgment, env: &Env, binds: &mut Binds) -> bool {
        match p {
            TermPat::Any => true,
            TermPat::Var(n) => bind(binds, n, Value::Judg(j.clone())),
            TermPat::Interp(n) => match self.interpolate(env, n) {
                Some(Value::Judg(k)) => k.term().alpha_eq(j.term()),
                _ => false,
            },
            TermPat::ConstName(c) => matches!(j.term().kind(), TermKind::Constant(d) if **d == **c),
            TermPat::Type => matches!(j.term().kind(), TermKind::Type),
            TermPat::Atom(n) => {
                j.as_atom().is_some() && n.as_ref().is_none_or(|n| bind(binds, n, Value::Judg(j.clone())))
            }
            TermPat::Const(n) => {
                matches!(j.term().kind(), TermKind::Constant(_))
                    && n.as_ref().is_none_or(|n| bind(binds, n, Value::Judg(j.clone())))
            }
            TermPat::App(pf, pa) => match invert(j) {
                InversionView::App(h, a) => self.match_term(pf, &h, env, binds) && self.match_term(pa, &a, env, binds),
                _ => false,
            },
            TermPat::Arrow(pd, pc) => match invert(j) {
                InversionView::Prod(y, dom, cod) if !cod.term().free_atoms().contains(&y) => {
                    self.match_term(pd, &dom, env, binds) && self.match_term(pc, &cod.strengthen(), env, binds)
                }
                _ => false,
            },
            TermPat::Prod(x, pd, pc) => match invert(j) {
                InversionView::Prod(y, dom, cod) => self.match_binder(x, &y, &dom, &cod, pd, pc, env, binds),
                _ => false,
            },
            TermPat::Lambda(x, pd, pb) => match invert(j) {
                InversionView::Lambda(y, dom, body) => self.match_binder(x, &y, &dom, &body, pd, pb, env, binds),
                _ => false,
            },
            TermPat::Eq(pl, pr) => match invert(j) {
                InversionView::Eq(_, l, r) => self.match_term(pl, &l, env, binds) && self.match_term(pr, &r, env, binds),
                _ => false,
            },
            TermPat::Refl(ps) => match invert(j) {
                InversionView::Refl(s) => self.match_term(ps, &s, env, binds),
                _ => false,
            },
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn match_binder(
        &self,
        x: &Option<Name>,
        y: &crate::nucleus::Atom,
        dom: &TermJudgment,
        body: &TermJudgment,
        pd: &TermPat,
        pb: &TermPat,
        env: &Env,
        binds: &mut Binds,
    ) -> bool {
        if !self.match_term(pd, dom, env, binds) {
            return false;
        }
        if let Some(x) = x {
            let Some(xj) = hypothesis(body, y) else { return false };
            if !bind(binds, x, Value::Judg(xj)) {
                return false;
            }
        }
        self.match_term(pb, body, env, binds)
    }

    /// The first clause for the requested operation whose patterns match.
    pub(super) fn find_clause<'h>(&self, ops: &'h [OpClause], env: &Env, req: &Request) -> Option<(&'h OpClause, Binds)> {
        ops.iter().filter(|c| c.op == req.op).find_map(|c| {
            let mut binds = Vec::new();
            let args_match = c.args.len() == req.args.len()
                && c.args.iter().zip(&req.args).all(|(p, v)| self.match_pattern(p, v, env, &mut binds));
            if !args_match {
                return None;
            }
            if let Some(sp) = &c.slot {
                let slot = Value::option(req.slot.clone().map(Value::Judg));
                if !self.match_pattern(sp, &slot, env, &mut binds) {
                    return None;
                }
            }
            Some((c, binds))
        })
    }
}
