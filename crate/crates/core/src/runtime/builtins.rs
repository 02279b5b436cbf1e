//! Functions available to every AML program.

use super::value::{Builtin, BuiltinApp, Value};
use super::{Ctx, Error, ErrorKind, Interp, Result};
use crate::nucleus::*;
use crate::stdlib::{Engine, Hint, HintKind, Hints};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

const BUILTINS: &[(&str, usize, Builtin)] = &[
    ("ref", 1, ref_),
    ("print", 1, print),
    ("whnf", 1, whnf),
    ("symmetry", 1, symmetry),
    ("transitivity", 2, transitivity),
    ("add_hint", 1, |i, cx, a| i.add_to("hints", HintKind::General, cx, &a[0])),
    ("add_hints", 1, |i, cx, a| i.add_all("hints", HintKind::General, cx, &a[0])),
    ("add_beta", 1, |i, cx, a| i.add_to("betas", HintKind::Beta, cx, &a[0])),
    ("add_betas", 1, |i, cx, a| i.add_all("betas", HintKind::Beta, cx, &a[0])),
    ("add_eta", 1, |i, cx, a| i.add_to("etas", HintKind::Eta, cx, &a[0])),
    ("add_etas", 1, |i, cx, a| i.add_all("etas", HintKind::Eta, cx, &a[0])),
    ("add_reducing", 2, add_reducing),
    ("occurs", 2, occurs_),
    ("context", 1, context),
    ("natural", 1, natural),
    ("beta_step", 1, beta_step),
    ("default_equal", 2, default_equal),
    ("default_as_prod", 1, default_as_prod),
    ("default_as_eq", 1, default_as_eq),
    ("default_coerce", 2, default_coerce),
    ("default_coerce_fun", 1, default_coerce_fun),
    ("implicit", 2, super::implicit::implicit),
    ("resolve", 1, super::implicit::resolve),
];

/// Names of all builtin functions.
pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|b| b.0)
}

fn judg(v: &Value) -> Result<&TermJudgment> {
    v.as_judgment()
        .ok_or_else(|| Error::new(ErrorKind::Expected { expected: "a judgment", got: v.to_string() }))
}

fn list(v: &Value) -> Result<Vec<Value>> {
    v.as_list().ok_or_else(|| Error::new(ErrorKind::Expected { expected: "a list", got: v.to_string() }))
}

fn eq_of(v: &Value) -> Result<EqTermJudgment> {
    Ok(reflect_term_eq(judg(v)?)?)
}

fn ref_(_: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    Ok(Value::Ref(Rc::new(RefCell::new(a[0].clone()))))
}

fn print(i: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    let line = match &a[0] {
        Value::Str(s) => s.to_string(),
        v => v.to_string(),
    };
    i.0.printed.borrow_mut().push(line);
    Ok(Value::unit())
}

fn whnf(i: &Interp, cx: &Ctx, a: &[Value]) -> Result<Value> {
    let t = judg(&a[0])?;
    let e = i.with_engine(cx, |en| en.whnf(t))?;
    Ok(Value::Judg(refl_of_eq(&e)))
}

fn symmetry(_: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    Ok(Value::Judg(refl_of_eq(&eq_sym(&eq_of(&a[0])?))))
}

fn transitivity(_: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    Ok(Value::Judg(refl_of_eq(&eq_trans(&eq_of(&a[0])?, &eq_of(&a[1])?)?)))
}

/// Π-arity of a type, counting through nested products.
fn arity(t: &Term) -> usize {
    match t.kind() {
        TermKind::Prod(_, _, b) => 1 + arity(b),
        _ => 0,
    }
}

fn add_reducing(i: &Interp, cx: &Ctx, a: &[Value]) -> Result<Value> {
    let c = judg(&a[0])?;
    if !matches!(c.term().kind(), TermKind::Constant(_)) {
        return Err(ErrorKind::Expected { expected: "a constant", got: a[0].to_string() }.into());
    }
    let flags = list(&a[1])?;
    for f in &flags {
        if !matches!(f, Value::Tag(n, args) if args.is_empty() && (&**n == "lazy" || &**n == "eager")) {
            return Err(ErrorKind::Expected { expected: "lazy or eager", got: f.to_string() }.into());
        }
    }
    if flags.len() > arity(c.ty()) {
        return Err(ErrorKind::Failure(format!(
            "{} takes {} arguments but {} reduction flags were given",
            print_judgment(c),
            arity(c.ty()),
            flags.len()
        ))
        .into());
    }
    let old = i.dynamic(cx, "reducing")?;
    Ok(Value::Cons(Rc::new((Value::Tuple(Rc::from(vec![a[0].clone(), a[1].clone()])), old))))
}

fn occurs_(_: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    Ok(Value::option(occurs(judg(&a[0])?, judg(&a[1])?)?.map(Value::Judg)))
}

fn context(_: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    Ok(Value::list(context_of(judg(&a[0])?).into_iter().map(Value::Judg)))
}

fn natural(i: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    let e = natural_type_eq(&i.sig(), judg(&a[0])?)?;
    Ok(Value::Judg(refl_of_eq(e.as_term_eq())))
}

fn beta_step(_: &Interp, _: &Ctx, a: &[Value]) -> Result<Value> {
    Ok(Value::option(beta_witness(judg(&a[0])?).ok().map(|e| Value::Judg(refl_of_eq(&e)))))
}

fn some_eq(e: Option<EqTermJudgment>) -> Value {
    Value::option(e.map(|e| Value::Judg(refl_of_eq(&e))))
}

fn default_equal(i: &Interp, cx: &Ctx, a: &[Value]) -> Result<Value> {
    let (s, t) = (judg(&a[0])?, judg(&a[1])?);
    i.solve_flex(cx, s, t)?;
    Ok(some_eq(i.with_engine(cx, |en| en.equal(s, t))?))
}

fn default_as_prod(i: &Interp, cx: &Ctx, a: &[Value]) -> Result<Value> {
    let t = judg(&a[0])?;
    Ok(some_eq(i.with_engine(cx, |en| en.as_prod(t))?.map(|e| e.as_term_eq().clone())))
}

fn default_as_eq(i: &Interp, cx: &Ctx, a: &[Value]) -> Result<Value> {
    let t = judg(&a[0])?;
    Ok(some_eq(i.with_engine(cx, |en| en.as_eq(t))?.map(|e| e.as_term_eq().clone())))
}

fn verdict(e: Option<EqTypeJudgment>) -> Value {
    match e {
        Some(e) => Value::tag("Convertible", vec![Value::Judg(refl_of_eq(e.as_term_eq()))]),
        None => Value::tag("NotCoercible", vec![]),
    }
}

fn default_coerce(i: &Interp, cx: &Ctx, a: &[Value]) -> Result<Value> {
    let (s, t) = (judg(&a[0])?, judg(&a[1])?);
    i.solve_flex(cx, &s.type_of(), t)?;
    Ok(verdict(i.with_engine(cx, |en| en.equal_types(&s.type_of(), t))?))
}

fn default_coerce_fun(i: &Interp, cx: &Ctx, a: &[Value]) -> Result<Value> {
    let s = judg(&a[0])?;
    Ok(verdict(i.with_engine(cx, |en| en.as_prod(&s.type_of()))?))
}

impl Interp {
    pub(super) fn install_builtins(&self) {
        for &(name, arity, fun) in BUILTINS {
            let b = BuiltinApp { name, arity, fun, args: Vec::new() };
            self.set_global(Rc::from(name), Value::Builtin(Rc::new(b)));
        }
    }

    fn add_to(&self, store: &str, kind: HintKind, cx: &Ctx, v: &Value) -> Result<Value> {
        self.hint(kind, judg(v)?)?;
        let old = self.dynamic(cx, store)?;
        Ok(Value::Cons(Rc::new((v.clone(), old))))
    }

    fn add_all(&self, store: &str, kind: HintKind, cx: &Ctx, vs: &Value) -> Result<Value> {
        let mut out = self.dynamic(cx, store)?;
        for v in list(vs)? {
            self.hint(kind, judg(&v)?)?;
            out = Value::Cons(Rc::new((v, out)));
        }
        Ok(out)
    }

    /// The checked form of a hint, built once per judgment.
    fn hint(&self, kind: HintKind, j: &TermJudgment) -> Result<Rc<Hint>> {
        let key = (j.term().addr(), j.ty().addr(), kind);
        if let Some(h) = self.0.hint_cache.borrow().get(&key) {
            return Ok(h.clone());
        }
        let h = Rc::new(Hint::new(kind, j)?);
        self.0.hint_cache.borrow_mut().insert(key, h.clone());
        Ok(h)
    }

    fn store(&self, cx: &Ctx, name: &str, kind: HintKind) -> Result<Vec<Rc<Hint>>> {
        list(&self.dynamic(cx, name)?)?.iter().map(|v| self.hint(kind, judg(v)?)).collect()
    }

    /// The hints in effect under the dynamic bindings of `cx`.
    pub fn hints(&self, cx: &Ctx) -> Result<Hints> {
        let mut reducing = HashMap::new();
        for entry in list(&self.dynamic(cx, "reducing")?)?.iter().rev() {
            let Value::Tuple(pair) = entry else { continue };
            let (Some(TermKind::Constant(c)), Some(flags)) =
                (pair[0].as_judgment().map(|j| j.term().kind()), pair[1].as_list())
            else {
                continue;
            };
            let flags = flags.iter().map(|f| matches!(f, Value::Tag(n, _) if &**n == "eager")).collect();
            reducing.insert(c.clone(), flags);
        }
        let mut betas = self.store(cx, "betas", HintKind::Beta)?;
        for xi in self.implicit_hints() {
            betas.insert(0, self.hint(HintKind::Beta, &xi)?);
        }
        Ok(Hints {
            betas,
            etas: self.store(cx, "etas", HintKind::Eta)?,
            general: self.store(cx, "hints", HintKind::General)?,
            reducing,
        })
    }

    pub fn with_engine<T>(
        &self,
        cx: &Ctx,
        f: impl FnOnce(&mut Engine) -> crate::stdlib::Result<T>,
    ) -> Result<T> {
        let hints = self.hints(cx)?;
        let sig = self.sig();
        let mut en = Engine::new(&sig, &hints, self.0.budget.get());
        Ok(f(&mut en)?)
    }
}
