//! ML type inference for AML: Hindley-Milner with let-polymorphism under the
//! value restriction. Application `e₁ e₂` is overloaded between ML functions and
//! judgments, so it produces a constraint that is solved once the type of `e₁` is
//! known. Constraints still open at the end of a top-level command default to
//! judgment application, with a warning.

use crate::runtime;
use crate::syntax::ast::*;
use crate::syntax::lexer::Span;
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Var(usize),
    /// A quantified variable of a type scheme.
    Gen(usize),
    Judgment,
    Str,
    Arrow(Rc<Ty>, Rc<Ty>),
    Tuple(Vec<Ty>),
    Con(Name, Vec<Ty>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: type error: {msg}")]
pub struct TypeError {
    pub span: Span,
    pub msg: String,
}

type TResult<A> = Result<A, TypeError>;

fn con(n: &str, args: Vec<Ty>) -> Ty {
    Ty::Con(Rc::from(n), args)
}

fn arrow(a: Ty, b: Ty) -> Ty {
    Ty::Arrow(Rc::new(a), Rc::new(b))
}

fn list(a: Ty) -> Ty {
    con("list", vec![a])
}

fn option(a: Ty) -> Ty {
    con("option", vec![a])
}

fn unit() -> Ty {
    Ty::Tuple(vec![])
}

/// `judgment → … → judgment` with `n` arguments before the result.
fn judgments(n: usize, res: Ty) -> Ty {
    (0..n).fold(res, |t, _| arrow(Ty::Judgment, t))
}

/// A pending application `f a : r`.
#[derive(Clone, Debug)]
struct AppC {
    f: Ty,
    a: Ty,
    r: Ty,
    span: Span,
}

#[derive(Clone, Debug)]
pub struct Scheme {
    arity: usize,
    cons: Vec<AppC>,
    ty: Ty,
}

impl Scheme {
    fn mono(ty: Ty) -> Scheme {
        Scheme { arity: 0, cons: Vec::new(), ty }
    }

    /// A scheme over `'a`, `'b`, … written as `Gen` indices.
    fn poly(arity: usize, ty: Ty) -> Scheme {
        Scheme { arity, cons: Vec::new(), ty }
    }
}

struct Ctor {
    params: usize,
    args: Vec<Ty>,
    ty: Ty,
}

/// The inference state of one session.
pub struct Checker {
    links: Vec<Option<Ty>>,
    levels: Vec<usize>,
    level: usize,
    globals: HashMap<Name, Scheme>,
    dyns: HashMap<Name, Ty>,
    ops: HashMap<Name, (usize, Ty)>,
    ctors: HashMap<Name, Ctor>,
    types: HashMap<Name, usize>,
    pending: Vec<AppC>,
    /// For each enclosing handler clause: the argument of `yield` and its result.
    yields: Vec<(Ty, Ty)>,
    pub warnings: Vec<String>,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new()
    }
}

fn builtin_type(n: &str) -> Option<Scheme> {
    let j = || Ty::Judgment;
    let a = Ty::Gen(0);
    Some(match n {
        "ref" => Scheme::poly(1, arrow(a.clone(), con("ref", vec![a]))),
        "print" => Scheme::poly(1, arrow(a, unit())),
        "whnf" | "symmetry" | "natural" | "resolve" => Scheme::mono(judgments(1, j())),
        "transitivity" => Scheme::mono(judgments(2, j())),
        "add_hint" | "add_beta" | "add_eta" => Scheme::mono(arrow(j(), list(j()))),
        "add_hints" | "add_betas" | "add_etas" => Scheme::mono(arrow(list(j()), list(j()))),
        "add_reducing" => Scheme::mono(arrow(j(), arrow(list(con("strategy", vec![])), reducing()))),
        "occurs" => Scheme::mono(judgments(2, option(j()))),
        "context" => Scheme::mono(judgments(1, list(j()))),
        "beta_step" | "default_as_prod" | "default_as_eq" => Scheme::mono(judgments(1, option(j()))),
        "default_equal" => Scheme::mono(judgments(2, option(j()))),
        "default_coerce" => Scheme::mono(judgments(2, con("coercible", vec![]))),
        "default_coerce_fun" => Scheme::mono(judgments(1, con("coercible", vec![]))),
        "implicit" => Scheme::mono(arrow(option(j()), arrow(list(j()), j()))),
        _ => return None,
    })
}

fn reducing() -> Ty {
    list(Ty::Tuple(vec![Ty::Judgment, list(con("strategy", vec![]))]))
}

impl Checker {
    pub fn new() -> Checker {
        let mut c = Checker {
            links: Vec::new(),
            levels: Vec::new(),
            level: 0,
            globals: HashMap::new(),
            dyns: HashMap::new(),
            ops: HashMap::new(),
            ctors: HashMap::new(),
            types: HashMap::new(),
            pending: Vec::new(),
            yields: Vec::new(),
            warnings: Vec::new(),
        };
        for n in runtime::builtin_names() {
            let s = builtin_type(n).unwrap_or_else(|| panic!("no ML type for builtin {n}"));
            c.globals.insert(Rc::from(n), s);
        }
        for (t, k) in [("list", 1), ("option", 1), ("ref", 1), ("handler", 2), ("coercible", 0), ("strategy", 0), ("string", 0), ("unit", 0)] {
            c.types.insert(Rc::from(t), k);
        }
        let ctor = |params, args, ty| Ctor { params, args, ty };
        let j = Ty::Judgment;
        let opt = option(Ty::Gen(0));
        let coe = con("coercible", vec![]);
        let strat = con("strategy", vec![]);
        c.ctors.insert(Rc::from("None"), ctor(1, vec![], opt.clone()));
        c.ctors.insert(Rc::from("Some"), ctor(1, vec![Ty::Gen(0)], opt));
        c.ctors.insert(Rc::from("NotCoercible"), ctor(0, vec![], coe.clone()));
        c.ctors.insert(Rc::from("Convertible"), ctor(0, vec![j.clone()], coe.clone()));
        c.ctors.insert(Rc::from("Coercible"), ctor(0, vec![j.clone()], coe.clone()));
        c.ctors.insert(Rc::from("lazy"), ctor(0, vec![], strat.clone()));
        c.ctors.insert(Rc::from("eager"), ctor(0, vec![], strat));
        for (op, n, res) in [
            ("equal", 2, option(j.clone())),
            ("as_prod", 1, option(j.clone())),
            ("as_eq", 1, option(j.clone())),
            ("coerce", 2, coe.clone()),
            ("coerce_fun", 1, coe),
        ] {
            c.ops.insert(Rc::from(op), (n, res));
        }
        for d in ["hypotheses", "betas", "etas", "hints"] {
            c.dyns.insert(Rc::from(d), list(Ty::Judgment));
        }
        c.dyns.insert(Rc::from("reducing"), reducing());
        c
    }

    // -----------------------------------------------------------------------
    // Unification

    fn fresh(&mut self) -> Ty {
        self.links.push(None);
        self.levels.push(self.level);
        Ty::Var(self.links.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match &self.links[*v] {
                Some(t) => self.resolve(t),
                None => t.clone(),
            },
            _ => t.clone(),
        }
    }

    /// Fully substituted form of a type.
    fn zonk(&self, t: &Ty) -> Ty {
        match self.resolve(t) {
            Ty::Arrow(a, b) => arrow(self.zonk(&a), self.zonk(&b)),
            Ty::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| self.zonk(t)).collect()),
            Ty::Con(n, ts) => Ty::Con(n, ts.iter().map(|t| self.zonk(t)).collect()),
            t => t,
        }
    }

    /// Checks that `v` does not occur in `t` and lowers the levels of `t` to `level`.
    fn occurs_adjust(&mut self, v: usize, level: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(w) => {
                if w == v {
                    return false;
                }
                self.levels[w] = self.levels[w].min(level);
                true
            }
            Ty::Arrow(a, b) => self.occurs_adjust(v, level, &a) && self.occurs_adjust(v, level, &b),
            Ty::Tuple(ts) | Ty::Con(_, ts) => ts.iter().all(|t| self.occurs_adjust(v, level, t)),
            _ => true,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty, span: Span) -> TResult<()> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        let fail = |s: &Checker| {
            Err(TypeError { span, msg: format!("expected {}, found {}", s.show(&b), s.show(&a)) })
        };
        match (&a, &b) {
            (Ty::Var(v), Ty::Var(w)) if v == w => Ok(()),
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                let level = self.levels[*v];
                if !self.occurs_adjust(*v, level, t) {
                    return Err(TypeError { span, msg: format!("cyclic type {}", self.show(t)) });
                }
                self.links[*v] = Some(t.clone());
                self.wake()
            }
            (Ty::Judgment, Ty::Judgment) | (Ty::Str, Ty::Str) => Ok(()),
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => {
                self.unify(a1, a2, span)?;
                self.unify(b1, b2, span)
            }
            (Ty::Tuple(xs), Ty::Tuple(ys)) if xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    self.unify(x, y, span)?;
                }
                Ok(())
            }
            (Ty::Con(n, xs), Ty::Con(m, ys)) if n == m && xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    self.unify(x, y, span)?;
                }
                Ok(())
            }
            _ => fail(self),
        }
    }

    /// Solves the pending applications whose function type has become known.
    fn wake(&mut self) -> TResult<()> {
        let mut i = 0;
        while i < self.pending.len() {
            if matches!(self.resolve(&self.pending[i].f), Ty::Var(_)) {
                i += 1;
                continue;
            }
            let c = self.pending.remove(i);
            self.solve_app(&c)?;
            i = 0;
        }
        Ok(())
    }

    fn solve_app(&mut self, c: &AppC) -> TResult<()> {
        match self.resolve(&c.f) {
            Ty::Var(_) => {
                self.pending.push(c.clone());
                Ok(())
            }
            Ty::Judgment => {
                self.unify(&c.a, &Ty::Judgment, c.span)?;
                self.unify(&c.r, &Ty::Judgment, c.span)
            }
            Ty::Arrow(x, y) => {
                self.unify(&c.a, &x, c.span)?;
                self.unify(&c.r, &y, c.span)
            }
            t => Err(TypeError { span: c.span, msg: format!("{} cannot be applied", self.show(&t)) }),
        }
    }

    fn app(&mut self, f: Ty, a: Ty, span: Span) -> TResult<Ty> {
        let r = self.fresh();
        self.solve_app(&AppC { f, a, r: r.clone(), span })?;
        Ok(r)
    }

    // -----------------------------------------------------------------------
    // Schemes

    fn instantiate(&mut self, s: &Scheme) -> TResult<Ty> {
        if s.arity == 0 {
            return Ok(s.ty.clone());
        }
        let vars: Vec<Ty> = (0..s.arity).map(|_| self.fresh()).collect();
        let ty = subst_gen(&s.ty, &vars);
        for c in &s.cons {
            let c = AppC { f: subst_gen(&c.f, &vars), a: subst_gen(&c.a, &vars), r: subst_gen(&c.r, &vars), span: c.span };
            self.solve_app(&c)?;
        }
        Ok(ty)
    }

    fn generalize_ty(&self, t: &Ty, map: &mut Vec<usize>) -> Ty {
        match self.resolve(t) {
            Ty::Var(v) if self.levels[v] > self.level => {
                let i = map.iter().position(|w| *w == v).unwrap_or_else(|| {
                    map.push(v);
                    map.len() - 1
                });
                Ty::Gen(i)
            }
            Ty::Arrow(a, b) => arrow(self.generalize_ty(&a, map), self.generalize_ty(&b, map)),
            Ty::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| self.generalize_ty(t, map)).collect()),
            Ty::Con(n, ts) => Ty::Con(n, ts.iter().map(|t| self.generalize_ty(t, map)).collect()),
            t => t,
        }
    }

    fn generalizable(&self, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(v) => self.levels[v] > self.level,
            Ty::Arrow(a, b) => self.generalizable(&a) || self.generalizable(&b),
            Ty::Tuple(ts) | Ty::Con(_, ts) => ts.iter().any(|t| self.generalizable(t)),
            _ => false,
        }
    }

    /// Generalizes `t`, taking along the pending constraints on its quantified variables.
    fn generalize(&mut self, t: &Ty) -> Scheme {
        let mut map = Vec::new();
        let ty = self.generalize_ty(t, &mut map);
        let mut cons = Vec::new();
        let pending = std::mem::take(&mut self.pending);
        for c in pending {
            if self.generalizable(&c.f) || self.generalizable(&c.a) || self.generalizable(&c.r) {
                cons.push(AppC {
                    f: self.generalize_ty(&c.f, &mut map),
                    a: self.generalize_ty(&c.a, &mut map),
                    r: self.generalize_ty(&c.r, &mut map),
                    span: c.span,
                });
            } else {
                self.pending.push(c);
            }
        }
        Scheme { arity: map.len(), cons, ty }
    }

    /// Defaults every open application to a judgment application.
    fn default_pending(&mut self) -> TResult<()> {
        while let Some(c) = self.pending.pop() {
            if matches!(self.resolve(&c.f), Ty::Var(_)) {
                self.warnings.push(format!("{}: warning: application defaults to a judgment application", c.span));
                self.unify(&c.f, &Ty::Judgment, c.span)?;
            }
            self.solve_app(&c)?;
        }
        Ok(())
    }

    pub fn show(&self, t: &Ty) -> String {
        let mut names = Vec::new();
        self.show_in(&self.zonk(t), &mut names, 0)
    }

    fn show_in(&self, t: &Ty, names: &mut Vec<usize>, prec: u8) -> String {
        let paren = |s: String, p: u8| if prec > p { format!("({s})") } else { s };
        match t {
            Ty::Var(v) | Ty::Gen(v) => {
                let i = names.iter().position(|w| w == v).unwrap_or_else(|| {
                    names.push(*v);
                    names.len() - 1
                });
                format!("'{}", (b'a' + (i % 26) as u8) as char)
            }
            Ty::Judgment => "judgment".into(),
            Ty::Str => "string".into(),
            Ty::Arrow(a, b) => {
                let s = format!("{} → {}", self.show_in(a, names, 1), self.show_in(b, names, 0));
                paren(s, 0)
            }
            Ty::Tuple(ts) if ts.is_empty() => "unit".into(),
            Ty::Tuple(ts) => {
                let s = ts.iter().map(|t| self.show_in(t, names, 2)).collect::<Vec<_>>().join(" * ");
                paren(s, 1)
            }
            Ty::Con(n, ts) if ts.is_empty() => n.to_string(),
            Ty::Con(n, ts) if ts.len() == 1 => format!("{} {n}", self.show_in(&ts[0], names, 3)),
            Ty::Con(n, ts) => {
                let args = ts.iter().map(|t| self.show_in(t, names, 0)).collect::<Vec<_>>().join(", ");
                format!("({args}) {n}")
            }
        }
    }

    // -----------------------------------------------------------------------
    // Top-level commands

    /// Type-checks a resolved top-level command and records the names it defines.
    pub fn top(&mut self, t: &Top) -> TResult<()> {
        let saved = (self.globals.clone(), self.dyns.clone(), self.ops.clone(), self.links.len());
        let out = self.top_inner(t);
        if out.is_err() {
            self.globals = saved.0;
            self.dyns = saved.1;
            self.ops = saved.2;
            self.pending.clear();
        }
        out
    }

    fn top_inner(&mut self, t: &Top) -> TResult<()> {
        let env = Locals::default();
        match &t.kind {
            TopKind::Constant(_, c) => {
                let ty = self.comp(c, &env)?;
                self.unify(&ty, &Ty::Judgment, c.span)?;
            }
            TopKind::Operation(n, k) => {
                self.ops.insert(n.clone(), (*k, Ty::Judgment));
            }
            TopKind::Do(c) => {
                self.comp(c, &env)?;
            }
            TopKind::Let(binds) => {
                let mut out = Vec::new();
                for (p, c) in binds {
                    self.level += 1;
                    let ty = self.comp(c, &env);
                    self.level -= 1;
                    let ty = ty?;
                    let mut bound = Vec::new();
                    self.level += 1;
                    let pty = self.pattern(p, &env, &mut bound, c.span);
                    self.level -= 1;
                    self.unify(&pty?, &ty, c.span)?;
                    let value = is_value(c);
                    for (n, t) in bound {
                        let s = if value { self.generalize(&t) } else { Scheme::mono(t) };
                        out.push((n, s));
                    }
                }
                for (n, s) in out {
                    self.globals.insert(n, s);
                }
            }
            TopKind::LetRec(defs) => {
                for (n, s) in self.rec_defs(defs, &env, t.span)? {
                    self.globals.insert(n, s);
                }
            }
            TopKind::Dynamic(n, c) => {
                let ty = self.comp(c, &env)?;
                self.dyns.insert(n.clone(), ty);
            }
            TopKind::Now(n, c) => {
                let ty = self.comp(c, &env)?;
                let d = self.dyns.get(n).cloned().ok_or_else(|| TypeError { span: t.span, msg: format!("unknown dynamic variable {n}") })?;
                self.unify(&ty, &d, c.span)?;
            }
            TopKind::GlobalHandle(h) => {
                for clause in &h.ops {
                    let res = self.op_result(&clause.op, clause.args.len(), t.span)?;
                    self.op_clause(clause, &env, res.clone(), res, t.span)?;
                }
            }
            TopKind::MlType(def) => self.mltype(def, t.span)?,
            TopKind::Include(_) | TopKind::Verbosity(_) => {}
        }
        self.default_pending()
    }

    fn mltype(&mut self, def: &MlTypeDef, span: Span) -> TResult<()> {
        self.types.insert(def.name.clone(), def.params.len());
        let me = con(&def.name, (0..def.params.len()).map(Ty::Gen).collect());
        for (c, args) in &def.ctors {
            let args = args.iter().map(|a| self.type_expr(a, &def.params, span)).collect::<TResult<Vec<_>>>()?;
            self.ctors.insert(c.clone(), Ctor { params: def.params.len(), args, ty: me.clone() });
        }
        Ok(())
    }

    fn type_expr(&self, t: &MlTypeExpr, params: &[Name], span: Span) -> TResult<Ty> {
        Ok(match t {
            MlTypeExpr::Judgment => Ty::Judgment,
            MlTypeExpr::Param(n) | MlTypeExpr::Named(n, _) if params.contains(n) => {
                Ty::Gen(params.iter().position(|p| p == n).unwrap())
            }
            MlTypeExpr::Named(n, args) => {
                let args = args.iter().map(|a| self.type_expr(a, params, span)).collect::<TResult<Vec<_>>>()?;
                match (&**n, self.types.get(n)) {
                    ("string", _) => Ty::Str,
                    ("unit", _) => unit(),
                    (_, Some(k)) if *k == args.len() => Ty::Con(n.clone(), args),
                    (_, Some(k)) => return Err(TypeError { span, msg: format!("type {n} expects {k} arguments") }),
                    (_, None) => return Err(TypeError { span, msg: format!("unknown type {n}") }),
                }
            }
            MlTypeExpr::Param(n) => return Err(TypeError { span, msg: format!("unbound type parameter {n}") }),
            MlTypeExpr::Arrow(a, b) => arrow(self.type_expr(a, params, span)?, self.type_expr(b, params, span)?),
            MlTypeExpr::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| self.type_expr(t, params, span)).collect::<TResult<_>>()?),
        })
    }

    fn op_result(&self, op: &Name, nargs: usize, span: Span) -> TResult<Ty> {
        match self.ops.get(op) {
            Some((k, res)) if *k == nargs => Ok(res.clone()),
            Some((k, _)) => Err(TypeError { span, msg: format!("operation {op} takes {k} arguments") }),
            None => Err(TypeError { span, msg: format!("unknown operation {op}") }),
        }
    }

    fn op_clause(&mut self, cl: &OpClause, env: &Locals, yield_arg: Ty, ans: Ty, span: Span) -> TResult<()> {
        let mut bound = Vec::new();
        for p in &cl.args {
            let t = self.pattern(p, env, &mut bound, span)?;
            self.unify(&t, &Ty::Judgment, span)?;
        }
        if let Some(p) = &cl.slot {
            let t = self.pattern(p, env, &mut bound, span)?;
            self.unify(&t, &option(Ty::Judgment), span)?;
        }
        let env = env.extend(bound.into_iter().map(|(n, t)| (n, Scheme::mono(t))));
        self.yields.push((yield_arg, ans.clone()));
        let body = self.comp(&cl.body, &env);
        self.yields.pop();
        let body = body?;
        self.unify(&body, &ans, cl.body.span)
    }

    fn rec_defs(&mut self, defs: &[RecDef], env: &Locals, span: Span) -> TResult<Vec<(Name, Scheme)>> {
        self.level += 1;
        let tys: Vec<Ty> = defs.iter().map(|_| self.fresh()).collect();
        let inner = env.extend(defs.iter().zip(&tys).map(|(d, t)| (d.name.clone(), Scheme::mono(t.clone()))));
        let mut result = Ok(());
        for (d, t) in defs.iter().zip(&tys) {
            let r = self.fun(&d.params, &d.body, &inner).and_then(|ft| self.unify(&ft, t, span));
            if r.is_err() {
                result = r;
                break;
            }
        }
        self.level -= 1;
        result?;
        Ok(defs.iter().zip(&tys).map(|(d, t)| (d.name.clone(), self.generalize(t))).collect())
    }

    fn fun(&mut self, params: &[Name], body: &Comp, env: &Locals) -> TResult<Ty> {
        let ps: Vec<Ty> = params.iter().map(|_| self.fresh()).collect();
        let env = env.extend(params.iter().cloned().zip(ps.iter().map(|t| Scheme::mono(t.clone()))));
        let b = self.comp(body, &env)?;
        Ok(ps.into_iter().rev().fold(b, |acc, p| arrow(p, acc)))
    }

    // -----------------------------------------------------------------------
    // Computations

    fn lookup(&mut self, n: &Name, env: &Locals, span: Span) -> TResult<Ty> {
        let s = match env.lookup(n) {
            Some(s) => s.clone(),
            None => self.globals.get(n).cloned().ok_or_else(|| TypeError { span, msg: format!("unknown variable {n}") })?,
        };
        self.instantiate(&s)
    }

    fn judgment(&mut self, c: &Comp, env: &Locals) -> TResult<()> {
        let t = self.comp(c, env)?;
        self.unify(&t, &Ty::Judgment, c.span)
    }

    fn bind_judgment(env: &Locals, x: &Name) -> Locals {
        env.extend([(x.clone(), Scheme::mono(Ty::Judgment))])
    }

    pub fn comp(&mut self, c: &Comp, env: &Locals) -> TResult<Ty> {
        let span = c.span;
        Ok(match &c.kind {
            CompKind::Ident(n) | CompKind::Var(n) => self.lookup(n, env, span)?,
            CompKind::Const(_) | CompKind::Type => Ty::Judgment,
            CompKind::Tag(n, args) => {
                let (params, cargs, cty) = match self.ctors.get(n) {
                    Some(k) => (k.params, k.args.clone(), k.ty.clone()),
                    None => return Err(TypeError { span, msg: format!("unknown constructor {n}") }),
                };
                if cargs.len() != args.len() {
                    return Err(TypeError { span, msg: format!("constructor {n} takes {} arguments", cargs.len()) });
                }
                let vars: Vec<Ty> = (0..params).map(|_| self.fresh()).collect();
                for (a, t) in args.iter().zip(&cargs) {
                    let at = self.comp(a, env)?;
                    self.unify(&at, &subst_gen(t, &vars), a.span)?;
                }
                subst_gen(&cty, &vars)
            }
            CompKind::Op(n, args) => {
                let res = self.op_result(n, args.len(), span)?;
                for a in args {
                    self.judgment(a, env)?;
                }
                res
            }
            CompKind::Dyn(n) => {
                self.dyns.get(n).cloned().ok_or_else(|| TypeError { span, msg: format!("unknown dynamic variable {n}") })?
            }
            CompKind::Str(_) => Ty::Str,
            CompKind::Tuple(xs) => Ty::Tuple(xs.iter().map(|x| self.comp(x, env)).collect::<TResult<_>>()?),
            CompKind::List(xs) => {
                let a = self.fresh();
                for x in xs {
                    let t = self.comp(x, env)?;
                    self.unify(&t, &a, x.span)?;
                }
                list(a)
            }
            CompKind::Cons(h, t) => {
                let ht = self.comp(h, env)?;
                let tt = self.comp(t, env)?;
                self.unify(&tt, &list(ht), t.span)?;
                tt
            }
            CompKind::Fun(x, body) => self.fun(std::slice::from_ref(x), body, env)?,
            CompKind::App(f, a) => {
                let ft = self.comp(f, env)?;
                let at = self.comp(a, env)?;
                self.app(ft, at, span)?
            }
            CompKind::Let(binds, body) => {
                let mut out = Vec::new();
                for (p, c) in binds {
                    self.level += 1;
                    let ty = self.comp(c, env);
                    self.level -= 1;
                    let ty = ty?;
                    let mut bound = Vec::new();
                    self.level += 1;
                    let pty = self.pattern(p, env, &mut bound, c.span);
                    self.level -= 1;
                    self.unify(&pty?, &ty, c.span)?;
                    let value = is_value(c);
                    for (n, t) in bound {
                        out.push((n, if value { self.generalize(&t) } else { Scheme::mono(t) }));
                    }
                }
                self.comp(body, &env.extend(out))?
            }
            CompKind::LetRec(defs, body) => {
                let binds = self.rec_defs(defs, env, span)?;
                self.comp(body, &env.extend(binds))?
            }
            CompKind::Match(scrut, clauses) => {
                let st = self.comp(scrut, env)?;
                self.clauses(&st, clauses, env, span)?
            }
            CompKind::Handle(body, h) => {
                let bt = self.comp(body, env)?;
                let (a, b) = self.handler(h, env, span)?;
                self.unify(&bt, &a, body.span)?;
                b
            }
            CompKind::WithHandle(h, body) => {
                let ht = self.comp(h, env)?;
                let bt = self.comp(body, env)?;
                let ans = self.fresh();
                self.unify(&ht, &con("handler", vec![bt, ans.clone()]), h.span)?;
                ans
            }
            CompKind::HandlerLit(h) => {
                let (a, b) = self.handler(h, env, span)?;
                con("handler", vec![a, b])
            }
            CompKind::Yield(v) => {
                let (arg, res) = self.yields.last().cloned().ok_or_else(|| TypeError { span, msg: "yield outside of an operation clause".into() })?;
                let vt = self.comp(v, env)?;
                self.unify(&vt, &arg, v.span)?;
                res
            }
            CompKind::Now(x, v, body) => {
                let d = self.dyns.get(x).cloned().ok_or_else(|| TypeError { span, msg: format!("unknown dynamic variable {x}") })?;
                let vt = self.comp(v, env)?;
                self.unify(&vt, &d, v.span)?;
                self.comp(body, env)?
            }
            CompKind::Ascribe(e, t) => {
                self.judgment(e, env)?;
                self.judgment(t, env)?;
                Ty::Judgment
            }
            CompKind::Prod(x, dom, cod) | CompKind::Assume(x, dom, cod) => {
                self.judgment(dom, env)?;
                let inner = Checker::bind_judgment(env, x);
                let t = self.comp(cod, &inner)?;
                if matches!(c.kind, CompKind::Prod(..)) {
                    self.unify(&t, &Ty::Judgment, cod.span)?;
                }
                t
            }
            CompKind::Lambda(x, dom, body) => {
                if let Some(d) = dom {
                    self.judgment(d, env)?;
                }
                self.judgment(body, &Checker::bind_judgment(env, x))?;
                Ty::Judgment
            }
            CompKind::Eq(a, b) | CompKind::Where(a, _, b) => {
                self.judgment(a, env)?;
                self.judgment(b, env)?;
                if let CompKind::Where(_, x, _) = &c.kind {
                    self.judgment(x, env)?;
                }
                Ty::Judgment
            }
            CompKind::Refl(e) => {
                self.judgment(e, env)?;
                Ty::Judgment
            }
            CompKind::Deref(r) => {
                let rt = self.comp(r, env)?;
                let a = self.fresh();
                self.unify(&rt, &con("ref", vec![a.clone()]), r.span)?;
                a
            }
            CompKind::Assign(r, v) => {
                let rt = self.comp(r, env)?;
                let vt = self.comp(v, env)?;
                self.unify(&rt, &con("ref", vec![vt]), r.span)?;
                unit()
            }
            CompKind::Seq(a, b) => {
                self.comp(a, env)?;
                self.comp(b, env)?
            }
        })
    }

    fn clauses(&mut self, scrut: &Ty, clauses: &[(Pattern, Comp)], env: &Locals, span: Span) -> TResult<Ty> {
        let res = self.fresh();
        for (p, body) in clauses {
            let mut bound = Vec::new();
            let pt = self.pattern(p, env, &mut bound, span)?;
            self.unify(&pt, scrut, body.span)?;
            let inner = env.extend(bound.into_iter().map(|(n, t)| (n, Scheme::mono(t))));
            let bt = self.comp(body, &inner)?;
            self.unify(&bt, &res, body.span)?;
        }
        Ok(res)
    }

    /// The body and answer types of a handler.
    fn handler(&mut self, h: &Handler, env: &Locals, span: Span) -> TResult<(Ty, Ty)> {
        let body = self.fresh();
        let ans = if h.vals.is_empty() { body.clone() } else { self.clauses(&body, &h.vals, env, span)? };
        for cl in &h.ops {
            let res = self.op_result(&cl.op, cl.args.len(), span)?;
            self.op_clause(cl, env, res, ans.clone(), span)?;
        }
        Ok((body, ans))
    }

    // -----------------------------------------------------------------------
    // Patterns

    fn pattern(&mut self, p: &Pattern, env: &Locals, bound: &mut Vec<(Name, Ty)>, span: Span) -> TResult<Ty> {
        Ok(match p {
            Pattern::Any => self.fresh(),
            Pattern::Var(n) => match bound.iter().find(|(m, _)| m == n) {
                Some((_, t)) => t.clone(),
                None => {
                    let t = self.fresh();
                    bound.push((n.clone(), t.clone()));
                    t
                }
            },
            Pattern::Ident(n) | Pattern::Interp(n) => self.lookup(n, env, span)?,
            Pattern::Tag(n, ps) => {
                let (params, cargs, cty) = match self.ctors.get(n) {
                    Some(k) => (k.params, k.args.clone(), k.ty.clone()),
                    None => return Err(TypeError { span, msg: format!("unknown constructor {n}") }),
                };
                if cargs.len() != ps.len() {
                    return Err(TypeError { span, msg: format!("constructor {n} takes {} arguments", cargs.len()) });
                }
                let vars: Vec<Ty> = (0..params).map(|_| self.fresh()).collect();
                for (p, t) in ps.iter().zip(&cargs) {
                    let pt = self.pattern(p, env, bound, span)?;
                    self.unify(&pt, &subst_gen(t, &vars), span)?;
                }
                subst_gen(&cty, &vars)
            }
            Pattern::Tuple(ps) => Ty::Tuple(ps.iter().map(|p| self.pattern(p, env, bound, span)).collect::<TResult<_>>()?),
            Pattern::Nil => {
                let a = self.fresh();
                list(a)
            }
            Pattern::Cons(h, t) => {
                let ht = self.pattern(h, env, bound, span)?;
                let tt = self.pattern(t, env, bound, span)?;
                self.unify(&tt, &list(ht), span)?;
                tt
            }
            Pattern::Str(_) => Ty::Str,
            Pattern::Judg(tp, ty) => {
                self.term_pattern(tp, env, bound, span)?;
                if let Some(ty) = ty {
                    self.term_pattern(ty, env, bound, span)?;
                }
                Ty::Judgment
            }
        })
    }

    fn term_pattern(&mut self, p: &TermPat, env: &Locals, bound: &mut Vec<(Name, Ty)>, span: Span) -> TResult<()> {
        let mut bind = |s: &mut Checker, n: &Name| -> TResult<()> {
            let t = s.pattern(&Pattern::Var(n.clone()), env, bound, span)?;
            s.unify(&t, &Ty::Judgment, span)
        };
        match p {
            TermPat::Any | TermPat::Type | TermPat::ConstName(_) | TermPat::Atom(None) | TermPat::Const(None) => Ok(()),
            TermPat::Var(n) | TermPat::Atom(Some(n)) | TermPat::Const(Some(n)) => bind(self, n),
            TermPat::Interp(n) => {
                let t = self.lookup(n, env, span)?;
                self.unify(&t, &Ty::Judgment, span)
            }
            TermPat::App(a, b) | TermPat::Arrow(a, b) | TermPat::Eq(a, b) => {
                self.term_pattern(a, env, bound, span)?;
                self.term_pattern(b, env, bound, span)
            }
            TermPat::Prod(x, a, b) | TermPat::Lambda(x, a, b) => {
                self.term_pattern(a, env, bound, span)?;
                if let Some(x) = x {
                    let t = self.pattern(&Pattern::Var(x.clone()), env, bound, span)?;
                    self.unify(&t, &Ty::Judgment, span)?;
                }
                self.term_pattern(b, env, bound, span)
            }
            TermPat::Refl(a) => self.term_pattern(a, env, bound, span),
        }
    }

    /// The type scheme of a global, for diagnostics and the REPL.
    pub fn global_type(&self, n: &str) -> Option<String> {
        self.globals.get(n).map(|s| self.show(&s.ty))
    }
}

fn subst_gen(t: &Ty, vars: &[Ty]) -> Ty {
    match t {
        Ty::Gen(i) => vars[*i].clone(),
        Ty::Arrow(a, b) => arrow(subst_gen(a, vars), subst_gen(b, vars)),
        Ty::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| subst_gen(t, vars)).collect()),
        Ty::Con(n, ts) => Ty::Con(n.clone(), ts.iter().map(|t| subst_gen(t, vars)).collect()),
        t => t.clone(),
    }
}

/// Syntactic values, the only bindings that are generalized.
fn is_value(c: &Comp) -> bool {
    match &c.kind {
        CompKind::Fun(..) | CompKind::Var(_) | CompKind::Ident(_) | CompKind::Str(_) | CompKind::HandlerLit(_) => true,
        CompKind::Tag(_, xs) | CompKind::Tuple(xs) | CompKind::List(xs) => xs.iter().all(is_value),
        CompKind::Cons(h, t) => is_value(h) && is_value(t),
        _ => false,
    }
}

/// Local bindings, innermost first.
#[derive(Clone, Default)]
pub struct Locals(Option<Rc<(Name, Scheme, Locals)>>);

impl Locals {
    fn extend(&self, binds: impl IntoIterator<Item = (Name, Scheme)>) -> Locals {
        binds.into_iter().fold(self.clone(), |env, (n, s)| Locals(Some(Rc::new((n, s, env)))))
    }

    fn lookup(&self, n: &str) -> Option<&Scheme> {
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if &*node.0 == n {
                return Some(&node.1);
            }
            cur = &node.2;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use crate::session::{Options, Session, SessionError};

    fn session() -> Session {
        Session::new(Options { typecheck: true, ..Default::default() }).unwrap()
    }

    fn type_of(src: &str, name: &str) -> String {
        let mut s = session();
        s.run_source(src, "t").unwrap();
        s.types().global_type(name).unwrap()
    }

    fn type_error(src: &str) -> String {
        match session().run_source(src, "t") {
            Err(e @ SessionError::Type { .. }) => e.to_string(),
            r => panic!("expected a type error, got {r:?}"),
        }
    }

    #[test]
    fn let_polymorphism() {
        assert_eq!(type_of("let id = fun x ⇒ x", "id"), "'a → 'a");
        assert_eq!(type_of("let pair = fun x y ⇒ (x, y)", "pair"), "'a → 'b → 'a * 'b");
        assert_eq!(type_of("let k = fun x ⇒ Some [x]", "k"), "'a → 'a list option");
        let mut s = session();
        s.run_source("let id = fun x ⇒ x\nlet p = (id Type, id \"s\")", "t").unwrap();
        assert_eq!(s.types().global_type("p").unwrap(), "judgment * string");
    }

    #[test]
    fn recursion_and_patterns() {
        let len = "let rec len xs = match xs with | [] ⇒ [] | _ :: ?t ⇒ len t end";
        assert_eq!(type_of(len, "len"), "'a list → 'b list");
        let m = "let m = fun x ⇒ match x with | ⊢ ?P → ?Q ⇒ P end";
        assert_eq!(type_of(m, "m"), "judgment → judgment");
    }

    #[test]
    fn handlers_have_a_handler_type() {
        assert_eq!(type_of("let h = handler | equal ?x ?y ⇒ yield None end", "h"), "('a, 'a) handler");
    }

    #[test]
    fn references_are_not_generalized() {
        let e = type_error("let r = ref []\ndo r := [Type]\ndo r := [\"s\"]");
        assert!(e.contains("t:3:"), "{e}");
    }

    #[test]
    fn mismatches_are_reported() {
        let e = type_error("let f = fun x ⇒ (x, x)\ndo match f Type with | [] ⇒ Type end");
        assert!(e.contains("type error"), "{e}");
        type_error("do Some Type :: [Type]");
    }

    #[test]
    fn failed_commands_leave_no_trace() {
        let mut s = session();
        assert!(s.run_source("let bad = (fun x ⇒ x) :: [Type]", "t").is_err());
        assert_eq!(s.types().global_type("bad"), None);
    }

    #[test]
    fn unresolved_application_defaults_to_judgments() {
        let mut s = session();
        s.run_source("constant A : Type\nconstant f : A → A\nconstant a : A\nlet g = fun h ⇒ h a\ndo g f", "t").unwrap();
        assert_eq!(s.output, ["⊢ f a : A"]);
    }
}
