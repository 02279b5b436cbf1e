//! Evaluation in inferring and checking mode.

use super::effects::{Request, YIELD};
use super::value::{Closure, Env, HandlerValue, RecGroup, Value};
use super::{Ctx, Error, ErrorKind, Result};
use crate::nucleus::*;
use crate::stdlib::{Hint, HintKind};
use crate::syntax::ast::{Comp, CompKind, Handler, Name, Pattern, RecDef};
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

const MAX_DEPTH: usize = 10_000;

/// The session-wide state shared by every evaluation.
pub struct State {
    pub sig: RefCell<Signature>,
    pub globals: RefCell<HashMap<Name, Value>>,
    pub dyn_defaults: RefCell<HashMap<Name, Value>>,
    pub global_handlers: RefCell<Vec<Rc<Handler>>>,
    /// Reduction steps allowed per equality or normalization request.
    pub budget: Cell<Option<u64>>,
    pub(super) hint_cache: RefCell<HashMap<(usize, usize, HintKind), Rc<Hint>>>,
    pub op_counts: RefCell<HashMap<Name, u64>>,
    /// Lines written by `print`.
    pub printed: RefCell<Vec<String>>,
    pub(super) implicits: RefCell<Vec<super::implicit::Implicit>>,
    depth: Cell<usize>,
}

#[derive(Clone)]
pub struct Interp(pub Rc<State>);

#[derive(Clone, Copy)]
pub enum Mode<'a> {
    Infer,
    Check(&'a TermJudgment),
}

/// The names of the dynamic variables the interpreter itself consults.
pub const DYNAMICS: [&str; 5] = ["hypotheses", "betas", "etas", "hints", "reducing"];

fn name(s: &str) -> Name {
    Rc::from(s)
}

fn expected(what: &'static str, v: &Value) -> Error {
    Error::new(ErrorKind::Expected { expected: what, got: v.to_string() })
}

fn bad_witness(op: &str, msg: impl Into<String>) -> Error {
    Error::new(ErrorKind::BadWitness { op: op.to_string(), msg: msg.into() })
}

/// The pieces of a coercion verdict.
enum Verdict {
    NotCoercible,
    Convertible(TermJudgment),
    Coercible(TermJudgment),
}

impl Default for Interp {
    fn default() -> Self {
        Interp::new()
    }
}

impl Interp {
    pub fn new() -> Interp {
        let state = State {
            sig: RefCell::new(sig_empty()),
            globals: RefCell::new(HashMap::new()),
            dyn_defaults: RefCell::new(DYNAMICS.iter().map(|d| (name(d), Value::Nil)).collect()),
            global_handlers: RefCell::new(Vec::new()),
            budget: Cell::new(None),
            hint_cache: RefCell::new(HashMap::new()),
            op_counts: RefCell::new(HashMap::new()),
            printed: RefCell::new(Vec::new()),
            implicits: RefCell::new(Vec::new()),
            depth: Cell::new(0),
        };
        let interp = Interp(Rc::new(state));
        interp.install_builtins();
        interp
    }

    pub fn sig(&self) -> Signature {
        self.0.sig.borrow().clone()
    }

    pub fn global(&self, n: &str) -> Option<Value> {
        self.0.globals.borrow().get(n).cloned()
    }

    pub fn set_global(&self, n: Name, v: Value) {
        self.0.globals.borrow_mut().insert(n, v);
    }

    pub fn set_dynamic(&self, n: Name, v: Value) {
        self.0.dyn_defaults.borrow_mut().insert(n, v);
    }

    pub fn add_global_handler(&self, h: Rc<Handler>) {
        self.0.global_handlers.borrow_mut().push(h);
    }

    pub(super) fn global_handlers(&self) -> Vec<Rc<Handler>> {
        self.0.global_handlers.borrow().clone()
    }

    pub(super) fn count_operation(&self, op: &Name) {
        *self.0.op_counts.borrow_mut().entry(op.clone()).or_insert(0) += 1;
    }

    /// How many times `op` has been triggered.
    pub fn operation_count(&self, op: &str) -> u64 {
        self.0.op_counts.borrow().get(op).copied().unwrap_or(0)
    }

    pub fn dynamic(&self, cx: &Ctx, n: &str) -> Result<Value> {
        if let Some(v) = cx.dyns.lookup(n) {
            return Ok(v.clone());
        }
        self.0.dyn_defaults.borrow().get(n).cloned().ok_or_else(|| ErrorKind::UnboundDynamic(n.to_string()).into())
    }

    // -----------------------------------------------------------------------
    // Entry points

    pub fn eval(&self, c: &Comp, cx: &Ctx, mode: Mode) -> Result<Value> {
        let d = self.0.depth.get();
        if d >= MAX_DEPTH {
            return Err(Error::new(ErrorKind::TooDeep).at(c.span));
        }
        self.0.depth.set(d + 1);
        let out = self.eval_kind(c, cx, mode).map_err(|e| e.at(c.span));
        self.0.depth.set(d);
        out
    }

    pub fn infer(&self, c: &Comp, cx: &Ctx) -> Result<Value> {
        self.eval(c, cx, Mode::Infer)
    }

    pub fn judgment(&self, c: &Comp, cx: &Ctx) -> Result<TermJudgment> {
        match self.infer(c, cx)? {
            Value::Judg(j) => Ok(j),
            v => Err(expected("a judgment", &v).at(c.span)),
        }
    }

    pub fn check(&self, c: &Comp, ty: &TermJudgment, cx: &Ctx) -> Result<TermJudgment> {
        match self.eval(c, cx, Mode::Check(ty))? {
            Value::Judg(j) => Ok(j),
            v => Err(expected("a judgment", &v).at(c.span)),
        }
    }

    /// Evaluates a type, checking it at `Type`.
    pub fn ty(&self, c: &Comp, cx: &Ctx) -> Result<TermJudgment> {
        self.check(c, &form_type(), cx)
    }

    fn finish(&self, v: Value, mode: Mode, cx: &Ctx) -> Result<Value> {
        match mode {
            Mode::Infer => Ok(v),
            Mode::Check(t) => match v {
                Value::Judg(j) => Ok(Value::Judg(self.finish_check(j, t, cx)?)),
                v => Err(expected("a judgment", &v)),
            },
        }
    }

    fn eval_kind(&self, c: &Comp, cx: &Ctx, mode: Mode) -> Result<Value> {
        match &c.kind {
            CompKind::Let(binds, body) => {
                let env = self.let_binds(binds, cx)?;
                self.eval(body, &Ctx { env, dyns: cx.dyns.clone() }, mode)
            }
            CompKind::LetRec(defs, body) => {
                let env = rec_env(defs, &cx.env);
                self.eval(body, &Ctx { env, dyns: cx.dyns.clone() }, mode)
            }
            CompKind::Match(scrut, clauses) => {
                let v = self.infer(scrut, cx)?;
                self.match_clauses(clauses, &v, cx, mode)
            }
            CompKind::Now(x, v, body) => {
                let v = self.infer(v, cx)?;
                let cx = Ctx { env: cx.env.clone(), dyns: cx.dyns.bind(x.clone(), v) };
                self.eval(body, &cx, mode)
            }
            CompKind::Seq(a, b) => {
                self.infer(a, cx)?;
                self.eval(b, cx, mode)
            }
            CompKind::Assume(x, dom, body) => {
                let a = self.ty(dom, cx)?;
                let xj = fresh_atom(&a, x)?;
                let cx = self.with_hypothesis(cx, x, &xj)?;
                self.eval(body, &cx, mode)
            }
            CompKind::Lambda(x, dom, body) => match mode {
                Mode::Check(t) => Ok(Value::Judg(self.check_lambda(x, dom.as_deref(), body, t, cx)?)),
                Mode::Infer => match dom {
                    Some(dom) => {
                        let a = self.ty(dom, cx)?;
                        let xj = fresh_atom(&a, x)?;
                        let cx = self.with_hypothesis(cx, x, &xj)?;
                        let b = self.judgment(body, &cx)?;
                        Ok(Value::Judg(form_lambda(&xj, &b)?))
                    }
                    None => Err(ErrorKind::CannotInfer(format!("the bound variable {x}")).into()),
                },
            },
            CompKind::Refl(e) => match mode {
                Mode::Check(t) => Ok(Value::Judg(self.check_refl(e, t, cx)?)),
                Mode::Infer => Ok(Value::Judg(form_refl(&self.judgment(e, cx)?))),
            },
            CompKind::Op(op, args) => {
                let args = args.iter().map(|a| self.infer(a, cx)).collect::<Result<Vec<_>>>()?;
                let slot = match mode {
                    Mode::Check(t) => Some(t.clone()),
                    Mode::Infer => None,
                };
                let v = self.perform(Request { op: op.clone(), args, slot, dyns: cx.dyns.clone() })?;
                self.finish(v, mode, cx)
            }
            _ => {
                let v = self.infer_kind(c, cx)?;
                self.finish(v, mode, cx)
            }
        }
    }

    fn infer_kind(&self, c: &Comp, cx: &Ctx) -> Result<Value> {
        Ok(match &c.kind {
            CompKind::Ident(n) | CompKind::Var(n) => match cx.env.lookup(n) {
                Some(v) => v.clone(),
                None => self.global(n).ok_or_else(|| Error::new(ErrorKind::Unbound(n.to_string())))?,
            },
            CompKind::Const(n) => Value::Judg(form_constant(&self.0.sig.borrow(), n)?),
            CompKind::Dyn(n) => self.dynamic(cx, n)?,
            CompKind::Tag(n, args) => {
                let args = args.iter().map(|a| self.infer(a, cx)).collect::<Result<Vec<_>>>()?;
                Value::Tag(n.clone(), Rc::from(args))
            }
            CompKind::Str(s) => Value::Str(Rc::from(s.as_str())),
            CompKind::Tuple(xs) => {
                let xs = xs.iter().map(|a| self.infer(a, cx)).collect::<Result<Vec<_>>>()?;
                Value::Tuple(Rc::from(xs))
            }
            CompKind::List(xs) => Value::list(xs.iter().map(|a| self.infer(a, cx)).collect::<Result<Vec<_>>>()?),
            CompKind::Cons(h, t) => {
                let h = self.infer(h, cx)?;
                let t = self.infer(t, cx)?;
                if !matches!(t, Value::Nil | Value::Cons(_)) {
                    return Err(expected("a list", &t));
                }
                Value::Cons(Rc::new((h, t)))
            }
            CompKind::Fun(x, body) => {
                Value::Closure(Rc::new(Closure { env: cx.env.clone(), param: x.clone(), body: body.clone() }))
            }
            CompKind::App(f, a) => match self.infer(f, cx)? {
                Value::Judg(h) => {
                    let h = self.as_function(h, cx)?;
                    let dom = domain(&h);
                    let a = self.check(a, &dom, cx)?;
                    Value::Judg(form_app(&h, &a)?)
                }
                fv => {
                    let av = self.infer(a, cx)?;
                    self.apply(fv, av, cx)?
                }
            },
            CompKind::Handle(body, h) => {
                let hv = Rc::new(HandlerValue { env: cx.env.clone(), handler: h.clone() });
                self.run_handled(hv, body.clone(), cx)?
            }
            CompKind::WithHandle(h, body) => match self.infer(h, cx)? {
                Value::Handler(hv) => self.run_handled(hv, body.clone(), cx)?,
                v => return Err(expected("a handler", &v)),
            },
            CompKind::HandlerLit(h) => Value::Handler(Rc::new(HandlerValue { env: cx.env.clone(), handler: h.clone() })),
            CompKind::Yield(v) => {
                let v = self.infer(v, cx)?;
                match cx.env.lookup(YIELD) {
                    Some(Value::Cont(k)) => k.clone().resume(self, v)?,
                    _ => return Err(ErrorKind::YieldOutside.into()),
                }
            }
            CompKind::Ascribe(e, t) => {
                let t = self.ty(t, cx)?;
                Value::Judg(self.check(e, &t, cx)?)
            }
            CompKind::Type => Value::Judg(form_type()),
            CompKind::Prod(x, dom, cod) => {
                let a = self.ty(dom, cx)?;
                let xj = fresh_atom(&a, x)?;
                let cx = self.with_hypothesis(cx, x, &xj)?;
                let b = self.ty(cod, &cx)?;
                Value::Judg(form_prod(&xj, &b)?)
            }
            CompKind::Eq(l, r) => {
                let s = self.judgment(l, cx)?;
                let t = self.check(r, &s.type_of(), cx)?;
                Value::Judg(form_eq_type(&s, &t)?)
            }
            CompKind::Where(e, x, v) => {
                let t = self.judgment(e, cx)?;
                let xj = self.judgment(x, cx)?;
                let atom = xj.as_atom().ok_or_else(|| expected("an atom", &Value::Judg(xj.clone())))?.clone();
                match occurs(&xj, &t)? {
                    None => Value::Judg(t),
                    Some(ty) => {
                        let v = self.check(v, &ty, cx)?;
                        Value::Judg(substitute(&t, &atom, &v)?)
                    }
                }
            }
            CompKind::Deref(r) => match self.infer(r, cx)? {
                Value::Ref(r) => r.borrow().clone(),
                v => return Err(expected("a reference", &v)),
            },
            CompKind::Assign(r, v) => match self.infer(r, cx)? {
                Value::Ref(r) => {
                    let v = self.infer(v, cx)?;
                    *r.borrow_mut() = v;
                    Value::unit()
                }
                v => return Err(expected("a reference", &v)),
            },
            CompKind::Let(..)
            | CompKind::LetRec(..)
            | CompKind::Match(..)
            | CompKind::Now(..)
            | CompKind::Seq(..)
            | CompKind::Assume(..)
            | CompKind::Lambda(..)
            | CompKind::Refl(..)
            | CompKind::Op(..) => unreachable!("handled by eval_kind"),
        })
    }

    fn run_handled(&self, hv: Rc<HandlerValue>, body: Rc<Comp>, cx: &Ctx) -> Result<Value> {
        let me = self.clone();
        let inner = cx.clone();
        self.handle(hv, cx.dyns.clone(), move || me.infer(&body, &inner))
    }

    pub(super) fn run_clause(&self, body: &Comp, env: Env, dyns: Env) -> Result<Value> {
        self.infer(body, &Ctx { env, dyns })
    }

    pub(super) fn value_clauses(&self, h: &HandlerValue, dyns: &Env, v: Value) -> Result<Value> {
        if h.handler.vals.is_empty() {
            return Ok(v);
        }
        let cx = Ctx { env: h.env.clone(), dyns: dyns.clone() };
        self.match_clauses(&h.handler.vals, &v, &cx, Mode::Infer)
    }

    fn match_clauses(&self, clauses: &[(Pattern, Comp)], v: &Value, cx: &Ctx, mode: Mode) -> Result<Value> {
        for (p, body) in clauses {
            let mut binds = Vec::new();
            if self.match_pattern(p, v, &cx.env, &mut binds) {
                let cx = Ctx { env: cx.env.extend(binds), dyns: cx.dyns.clone() };
                return self.eval(body, &cx, mode);
            }
        }
        Err(ErrorKind::MatchFailure(v.to_string()).into())
    }

    pub fn let_binds(&self, binds: &[(Pattern, Comp)], cx: &Ctx) -> Result<Env> {
        let mut out = Vec::new();
        for (p, c) in binds {
            let v = self.infer(c, cx)?;
            if !self.match_pattern(p, &v, &cx.env, &mut out) {
                return Err(Error::new(ErrorKind::MatchFailure(v.to_string())).at(c.span));
            }
        }
        Ok(cx.env.extend(out))
    }

    fn with_hypothesis(&self, cx: &Ctx, x: &Name, xj: &TermJudgment) -> Result<Ctx> {
        let hyps = self.dynamic(cx, "hypotheses")?;
        let hyps = Value::Cons(Rc::new((Value::Judg(xj.clone()), hyps)));
        Ok(Ctx { env: cx.env.bind(x.clone(), Value::Judg(xj.clone())), dyns: cx.dyns.bind(name("hypotheses"), hyps) })
    }

    // -----------------------------------------------------------------------
    // Application

    pub fn apply(&self, f: Value, a: Value, cx: &Ctx) -> Result<Value> {
        match f {
            Value::Closure(cl) => {
                let cx = Ctx { env: cl.env.bind(cl.param.clone(), a), dyns: cx.dyns.clone() };
                self.infer(&cl.body, &cx)
            }
            Value::Rec(g, i) => {
                let env = bind_group(&g);
                let f = self.infer(&g.defs[i].1, &Ctx { env, dyns: cx.dyns.clone() })?;
                self.apply(f, a, cx)
            }
            Value::Builtin(b) => {
                let mut args = b.args.clone();
                args.push(a);
                if args.len() == b.arity {
                    (b.fun)(self, cx, &args)
                } else {
                    Ok(Value::Builtin(Rc::new(super::value::BuiltinApp { args, ..*b })))
                }
            }
            Value::Judg(h) => {
                let Value::Judg(a) = a else { return Err(expected("a judgment", &a)) };
                let h = self.as_function(h, cx)?;
                let a = self.finish_check(a, &domain(&h), cx)?;
                Ok(Value::Judg(form_app(&h, &a)?))
            }
            v => Err(expected("a function", &v)),
        }
    }

    // -----------------------------------------------------------------------
    // Checking mode

    fn check_lambda(
        &self,
        x: &Name,
        dom: Option<&Comp>,
        body: &Comp,
        t: &TermJudgment,
        cx: &Ctx,
    ) -> Result<TermJudgment> {
        let (prod, xi) = self.as_prod(t, cx)?;
        let InversionView::Prod(y, a, b) = invert(&prod) else { unreachable!("as_prod gives a product") };
        if let Some(dom) = dom {
            let d = self.ty(dom, cx)?;
            if !d.term().alpha_eq(a.term()) {
                let xj = fresh_atom(&d, x)?;
                let cx = self.with_hypothesis(cx, x, &xj)?;
                let body = self.judgment(body, &cx)?;
                return self.finish_check(form_lambda(&xj, &body)?, t, &cx);
            }
        }
        let xj = fresh_atom(&a, x)?;
        let bx = if b.context().contains(y.id()) { substitute(&b, &y, &xj)? } else { b };
        let cx = self.with_hypothesis(cx, x, &xj)?;
        let body = self.check(body, &bx, &cx)?;
        let lam = form_lambda(&xj, &body)?;
        match xi {
            Some(xi) => Ok(convert(&lam, &eq_sym_type(&xi))?),
            None => Ok(lam),
        }
    }

    fn check_refl(&self, e: &Comp, t: &TermJudgment, cx: &Ctx) -> Result<TermJudgment> {
        let (eqty, xi) = self.as_eq(t, cx)?;
        let InversionView::Eq(a, s, r) = invert(&eqty) else { unreachable!("as_eq gives an equation") };
        let u = self.check(e, &a, cx)?;
        let left = self.equal(&u, &s, cx)?;
        let right = self.equal(&u, &r, cx)?;
        let q = cong_eq(&eq_refl(&a), &left, &right)?;
        let w = convert(&form_refl(&u), &q)?;
        match xi {
            Some(xi) => Ok(convert(&w, &eq_sym_type(&xi))?),
            None => Ok(w),
        }
    }

    /// Makes `j` have type `t`, by `coerce` when the types differ syntactically.
    pub fn finish_check(&self, j: TermJudgment, t: &TermJudgment, cx: &Ctx) -> Result<TermJudgment> {
        if j.ty().alpha_eq(t.term()) {
            return Ok(j);
        }
        let op = "coerce";
        let v = self.trigger(op, vec![Value::Judg(j.clone()), Value::Judg(t.clone())], cx)?;
        match self.verdict(op, v)? {
            Verdict::NotCoercible => Err(ErrorKind::CoercionFailed {
                term: print_judgment(&j),
                target: print_judgment(t),
            }
            .into()),
            Verdict::Convertible(p) => {
                let e = self.witness(op, &Value::Judg(p))?;
                if !(e.lhs().alpha_eq(j.ty()) && e.rhs().alpha_eq(t.term())) {
                    return Err(bad_witness(op, "the equation does not relate the two types"));
                }
                Ok(convert(&j, &type_eq(op, &e)?)?)
            }
            Verdict::Coercible(s) => {
                if !s.ty().alpha_eq(t.term()) {
                    return Err(bad_witness(op, "the coerced term has the wrong type"));
                }
                Ok(s)
            }
        }
    }

    /// Makes `h` have a product type, by `coerce_fun` when it does not syntactically.
    fn as_function(&self, h: TermJudgment, cx: &Ctx) -> Result<TermJudgment> {
        if matches!(h.ty().kind(), TermKind::Prod(..)) {
            return Ok(h);
        }
        let op = "coerce_fun";
        let v = self.trigger(op, vec![Value::Judg(h.clone())], cx)?;
        let is_prod = |t: &Term| matches!(t.kind(), TermKind::Prod(..));
        match self.verdict(op, v)? {
            Verdict::NotCoercible => Err(ErrorKind::NotAProduct(print_term(h.context(), h.ty())).into()),
            Verdict::Convertible(p) => {
                let e = self.witness(op, &Value::Judg(p))?;
                if !(e.lhs().alpha_eq(h.ty()) && is_prod(e.rhs())) {
                    return Err(bad_witness(op, "the equation does not lead to a product type"));
                }
                Ok(convert(&h, &type_eq(op, &e)?)?)
            }
            Verdict::Coercible(s) if is_prod(s.ty()) => Ok(s),
            Verdict::Coercible(_) => Err(bad_witness(op, "the coerced term is not a function")),
        }
    }

    /// `u ≡ s` at the type of `u`, by `equal` unless the two are α-equal.
    pub fn equal(&self, u: &TermJudgment, s: &TermJudgment, cx: &Ctx) -> Result<EqTermJudgment> {
        if u.term().alpha_eq(s.term()) {
            return Ok(eq_refl(u));
        }
        let op = "equal";
        match self.trigger(op, vec![Value::Judg(u.clone()), Value::Judg(s.clone())], cx)? {
            Value::Tag(n, args) if &*n == "Some" && args.len() == 1 => {
                let e = self.witness(op, &args[0])?;
                if !(e.lhs().alpha_eq(u.term()) && e.rhs().alpha_eq(s.term()) && e.ty().alpha_eq(u.ty())) {
                    return Err(bad_witness(op, "the witness proves a different equation"));
                }
                Ok(e)
            }
            Value::Tag(n, args) if &*n == "None" && args.is_empty() => {
                let ctx = u.context().join(s.context()).unwrap_or_else(|_| u.context().clone());
                let mut p = Printer::for_context(&ctx);
                Err(ErrorKind::NotEqual(format!("{} ≡ {}", p.term(u.term()), p.term(s.term()))).into())
            }
            v => Err(bad_witness(op, format!("expected an option, got {v}"))),
        }
    }

    fn as_prod(&self, t: &TermJudgment, cx: &Ctx) -> Result<(TermJudgment, Option<EqTypeJudgment>)> {
        self.as_shape(t, cx, "as_prod", |k| matches!(k, TermKind::Prod(..)), ErrorKind::NotAProduct)
    }

    fn as_eq(&self, t: &TermJudgment, cx: &Ctx) -> Result<(TermJudgment, Option<EqTypeJudgment>)> {
        self.as_shape(t, cx, "as_eq", |k| matches!(k, TermKind::Eq(..)), ErrorKind::NotAnEqType)
    }

    fn as_shape(
        &self,
        t: &TermJudgment,
        cx: &Ctx,
        op: &str,
        shape: fn(&TermKind) -> bool,
        fail: fn(String) -> ErrorKind,
    ) -> Result<(TermJudgment, Option<EqTypeJudgment>)> {
        if shape(t.term().kind()) {
            return Ok((t.clone(), None));
        }
        match self.trigger(op, vec![Value::Judg(t.clone())], cx)? {
            Value::Tag(n, args) if &*n == "Some" && args.len() == 1 => {
                let e = self.witness(op, &args[0])?;
                if !(e.lhs().alpha_eq(t.term()) && shape(e.rhs().kind())) {
                    return Err(bad_witness(op, "the equation does not lead to the expected shape"));
                }
                let q = type_eq(op, &e)?;
                Ok((eq_rhs(&e), Some(q)))
            }
            Value::Tag(n, args) if &*n == "None" && args.is_empty() => Err(fail(print_judgment(t)).into()),
            v => Err(bad_witness(op, format!("expected an option, got {v}"))),
        }
    }

    fn trigger(&self, op: &str, args: Vec<Value>, cx: &Ctx) -> Result<Value> {
        self.perform(Request { op: name(op), args, slot: None, dyns: cx.dyns.clone() })
    }

    fn verdict(&self, op: &str, v: Value) -> Result<Verdict> {
        if let Value::Tag(n, args) = &v {
            match (&**n, &args[..]) {
                ("NotCoercible", []) => return Ok(Verdict::NotCoercible),
                ("Convertible", [Value::Judg(p)]) => return Ok(Verdict::Convertible(p.clone())),
                ("Coercible", [Value::Judg(s)]) => return Ok(Verdict::Coercible(s.clone())),
                _ => {}
            }
        }
        Err(bad_witness(op, format!("expected a coercion verdict, got {v}")))
    }

    fn witness(&self, op: &str, p: &Value) -> Result<EqTermJudgment> {
        match p {
            Value::Judg(p) => reflect_term_eq(p).map_err(|_| bad_witness(op, "the witness is not of an equality type")),
            v => Err(bad_witness(op, format!("expected a judgment, got {v}"))),
        }
    }
}

fn type_eq(op: &str, e: &EqTermJudgment) -> Result<EqTypeJudgment> {
    e.as_type_eq().ok_or_else(|| bad_witness(op, "the witness is not an equation between types"))
}

/// The domain of a term of a product type.
fn domain(h: &TermJudgment) -> TermJudgment {
    match invert(&h.type_of()) {
        InversionView::Prod(_, dom, _) => dom,
        _ => unreachable!("checked to be a product"),
    }
}

fn rec_env(defs: &[RecDef], env: &Env) -> Env {
    let defs = defs
        .iter()
        .map(|d| {
            let body = d.params.iter().rev().fold(d.body.clone(), |b, p| {
                Rc::new(Comp::new(CompKind::Fun(p.clone(), b), d.body.span))
            });
            (d.name.clone(), body)
        })
        .collect();
    let g = Rc::new(RecGroup { env: env.clone(), defs });
    bind_group(&g)
}

fn bind_group(g: &Rc<RecGroup>) -> Env {
    g.env.extend(g.defs.iter().enumerate().map(|(i, (n, _))| (n.clone(), Value::Rec(g.clone(), i))))
}

pub fn rec_values(defs: &[RecDef]) -> Vec<(Name, Value)> {
    let env = rec_env(defs, &Env::new());
    defs.iter().map(|d| (d.name.clone(), env.lookup(&d.name).cloned().expect("just bound"))).collect()
}
