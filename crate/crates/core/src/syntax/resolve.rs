//! Name resolution: classifies identifiers and gathers operation and tag spines.

use super::ast::*;
use super::lexer::Span;
use super::SyntaxError;
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entity {
    Var,
    Const,
    Op(usize),
    Tag(usize),
    Dyn,
}

/// Top-level names known so far. Later definitions shadow earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    globals: HashMap<Name, Entity>,
}

type RResult<A> = Result<A, SyntaxError>;

fn err<A>(span: Span, msg: String) -> RResult<A> {
    Err(SyntaxError::Scope { line: span.line, col: span.col, msg })
}

impl Scope {
    pub fn new() -> Scope {
        Scope::default()
    }

    pub fn declare(&mut self, n: &str, e: Entity) {
        self.globals.insert(Rc::from(n), e);
    }

    pub fn lookup(&self, n: &str) -> Option<Entity> {
        self.globals.get(n).copied()
    }

    /// Resolves one top-level command and records the names it introduces.
    pub fn resolve_top(&mut self, t: &Top) -> RResult<Top> {
        let mut r = Resolver { scope: self, locals: Vec::new(), fresh: 0 };
        let kind = match &t.kind {
            TopKind::Constant(names, ty) => {
                let ty = r.comp(ty)?;
                for n in names {
                    self.declare(n, Entity::Const);
                }
                TopKind::Constant(names.clone(), ty)
            }
            TopKind::Operation(n, k) => {
                self.declare(n, Entity::Op(*k));
                TopKind::Operation(n.clone(), *k)
            }
            TopKind::Do(c) => TopKind::Do(r.comp(c)?),
            TopKind::Let(binds) => {
                let mut out = Vec::new();
                let mut bound = Vec::new();
                for (p, c) in binds {
                    let c = r.comp(c)?;
                    let p = r.pattern(p, &mut bound, t.span)?;
                    out.push((p, c));
                }
                for n in bound {
                    self.declare(&n, Entity::Var);
                }
                TopKind::Let(out)
            }
            TopKind::LetRec(defs) => {
                for d in defs {
                    r.scope.declare(&d.name, Entity::Var);
                }
                TopKind::LetRec(r.rec_defs(defs)?)
            }
            TopKind::Dynamic(n, c) => {
                let c = r.comp(c)?;
                self.declare(n, Entity::Dyn);
                TopKind::Dynamic(n.clone(), c)
            }
            TopKind::Now(n, c) => {
                if r.scope.lookup(n) != Some(Entity::Dyn) {
                    return err(t.span, format!("{n} is not a dynamic variable"));
                }
                TopKind::Now(n.clone(), r.comp(c)?)
            }
            TopKind::GlobalHandle(h) => TopKind::GlobalHandle(Rc::new(r.handler(h, t.span)?)),
            TopKind::MlType(def) => {
                for (c, args) in &def.ctors {
                    if matches!(self.lookup(c), Some(Entity::Tag(_))) {
                        return err(t.span, format!("duplicate constructor {c}"));
                    }
                    self.declare(c, Entity::Tag(args.len()));
                }
                TopKind::MlType(def.clone())
            }
            k @ (TopKind::Include(_) | TopKind::Verbosity(_)) => k.clone(),
        };
        Ok(Top { kind, span: t.span })
    }
}

struct Resolver<'a> {
    scope: &'a mut Scope,
    locals: Vec<Name>,
    fresh: usize,
}

impl Resolver<'_> {
    fn entity(&self, n: &str) -> Option<Entity> {
        if self.locals.iter().any(|l| &**l == n) {
            Some(Entity::Var)
        } else {
            self.scope.lookup(n)
        }
    }

    fn with_locals<A>(&mut self, names: &[Name], f: impl FnOnce(&mut Self) -> RResult<A>) -> RResult<A> {
        let depth = self.locals.len();
        self.locals.extend(names.iter().cloned());
        let r = f(self);
        self.locals.truncate(depth);
        r
    }

    fn fresh_name(&mut self) -> Name {
        self.fresh += 1;
        Rc::from(format!("$arg{}", self.fresh).as_str())
    }

    fn rec_defs(&mut self, defs: &[RecDef]) -> RResult<Vec<RecDef>> {
        let names: Vec<Name> = defs.iter().map(|d| d.name.clone()).collect();
        self.with_locals(&names, |r| {
            defs.iter()
                .map(|d| {
                    let body = r.with_locals(&d.params, |r| r.comp(&d.body))?;
                    Ok(RecDef { name: d.name.clone(), params: d.params.clone(), body: Rc::new(body) })
                })
                .collect()
        })
    }

    /// Saturates a constructor or operation to exactly `arity` arguments.
    fn saturate(
        &mut self,
        span: Span,
        n: &Name,
        arity: usize,
        args: Vec<Comp>,
        mk: fn(Name, Vec<Comp>) -> CompKind,
    ) -> Comp {
        if args.len() >= arity {
            let mut rest = args;
            let extra = rest.split_off(arity);
            let mut c = Comp::new(mk(n.clone(), rest), span);
            for a in extra {
                c = Comp::new(CompKind::App(Rc::new(c), Rc::new(a)), span);
            }
            c
        } else {
            let missing: Vec<Name> = (args.len()..arity).map(|_| self.fresh_name()).collect();
            let mut all = args;
            all.extend(missing.iter().map(|m| Comp::new(CompKind::Var(m.clone()), span)));
            let mut c = Comp::new(mk(n.clone(), all), span);
            for m in missing.into_iter().rev() {
                c = Comp::new(CompKind::Fun(m, Rc::new(c)), span);
            }
            c
        }
    }

    fn comp(&mut self, c: &Comp) -> RResult<Comp> {
        let sp = c.span;
        let b = |c: Comp| Rc::new(c);
        let kind = match &c.kind {
            CompKind::Ident(_) | CompKind::App(..) => return self.spine(c),
            CompKind::Var(_) | CompKind::Const(_) | CompKind::Dyn(_) | CompKind::Str(_) | CompKind::Type => {
                c.kind.clone()
            }
            CompKind::Tag(n, args) => CompKind::Tag(n.clone(), self.comps(args)?),
            CompKind::Op(n, args) => CompKind::Op(n.clone(), self.comps(args)?),
            CompKind::Tuple(xs) => CompKind::Tuple(self.comps(xs)?),
            CompKind::List(xs) => CompKind::List(self.comps(xs)?),
            CompKind::Cons(x, y) => CompKind::Cons(b(self.comp(x)?), b(self.comp(y)?)),
            CompKind::Fun(x, body) => {
                CompKind::Fun(x.clone(), b(self.with_locals(std::slice::from_ref(x), |r| r.comp(body))?))
            }
            CompKind::Let(binds, body) => {
                let mut out = Vec::new();
                let mut bound = Vec::new();
                for (p, v) in binds {
                    let v = self.comp(v)?;
                    out.push((self.pattern(p, &mut bound, sp)?, v));
                }
                let body = self.with_locals(&bound, |r| r.comp(body))?;
                CompKind::Let(out, b(body))
            }
            CompKind::LetRec(defs, body) => {
                let names: Vec<Name> = defs.iter().map(|d| d.name.clone()).collect();
                let defs = self.rec_defs(defs)?;
                let body = self.with_locals(&names, |r| r.comp(body))?;
                CompKind::LetRec(defs, b(body))
            }
            CompKind::Match(scrut, clauses) => {
                let scrut = self.comp(scrut)?;
                CompKind::Match(b(scrut), self.clauses(clauses, sp)?)
            }
            CompKind::Handle(body, h) => {
                let body = self.comp(body)?;
                CompKind::Handle(b(body), Rc::new(self.handler(h, sp)?))
            }
            CompKind::WithHandle(h, body) => CompKind::WithHandle(b(self.comp(h)?), b(self.comp(body)?)),
            CompKind::HandlerLit(h) => CompKind::HandlerLit(Rc::new(self.handler(h, sp)?)),
            CompKind::Yield(v) => CompKind::Yield(b(self.comp(v)?)),
            CompKind::Now(x, v, body) => {
                if self.entity(x) != Some(Entity::Dyn) {
                    return err(sp, format!("{x} is not a dynamic variable"));
                }
                CompKind::Now(x.clone(), b(self.comp(v)?), b(self.comp(body)?))
            }
            CompKind::Ascribe(x, t) => CompKind::Ascribe(b(self.comp(x)?), b(self.comp(t)?)),
            CompKind::Prod(x, dom, cod) => {
                let dom = self.comp(dom)?;
                let cod = self.with_locals(std::slice::from_ref(x), |r| r.comp(cod))?;
                CompKind::Prod(x.clone(), b(dom), b(cod))
            }
            CompKind::Lambda(x, dom, body) => {
                let dom = match dom {
                    Some(d) => Some(b(self.comp(d)?)),
                    None => None,
                };
                let body = self.with_locals(std::slice::from_ref(x), |r| r.comp(body))?;
                CompKind::Lambda(x.clone(), dom, b(body))
            }
            CompKind::Assume(x, dom, body) => {
                let dom = self.comp(dom)?;
                let body = self.with_locals(std::slice::from_ref(x), |r| r.comp(body))?;
                CompKind::Assume(x.clone(), b(dom), b(body))
            }
            CompKind::Eq(x, y) => CompKind::Eq(b(self.comp(x)?), b(self.comp(y)?)),
            CompKind::Refl(x) => CompKind::Refl(b(self.comp(x)?)),
            CompKind::Where(x, a, v) => CompKind::Where(b(self.comp(x)?), b(self.comp(a)?), b(self.comp(v)?)),
            CompKind::Deref(x) => CompKind::Deref(b(self.comp(x)?)),
            CompKind::Assign(x, v) => CompKind::Assign(b(self.comp(x)?), b(self.comp(v)?)),
            CompKind::Seq(x, y) => CompKind::Seq(b(self.comp(x)?), b(self.comp(y)?)),
        };
        Ok(Comp::new(kind, sp))
    }

    fn comps(&mut self, xs: &[Comp]) -> RResult<Vec<Comp>> {
        xs.iter().map(|x| self.comp(x)).collect()
    }

    /// Application spines whose head is a tag or an operation become saturated nodes.
    fn spine(&mut self, c: &Comp) -> RResult<Comp> {
        let mut args = Vec::new();
        let mut head = c;
        while let CompKind::App(f, a) = &head.kind {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        let args = args.into_iter().map(|a| self.comp(a)).collect::<RResult<Vec<_>>>()?;
        let sp = c.span;
        let head = match &head.kind {
            CompKind::Ident(n) => match self.entity(n) {
                Some(Entity::Var) => Comp::new(CompKind::Var(n.clone()), head.span),
                Some(Entity::Const) => Comp::new(CompKind::Const(n.clone()), head.span),
                Some(Entity::Dyn) => Comp::new(CompKind::Dyn(n.clone()), head.span),
                Some(Entity::Op(k)) => return Ok(self.saturate(sp, n, k, args, CompKind::Op)),
                Some(Entity::Tag(k)) => {
                    if k == 0 && !args.is_empty() {
                        return err(sp, format!("constructor {n} takes no arguments"));
                    }
                    return Ok(self.saturate(sp, n, k, args, CompKind::Tag));
                }
                None => return err(head.span, format!("unbound identifier {n}")),
            },
            _ => self.comp(head)?,
        };
        Ok(args.into_iter().fold(head, |f, a| Comp::new(CompKind::App(Rc::new(f), Rc::new(a)), sp)))
    }

    fn clauses(&mut self, clauses: &[(Pattern, Comp)], sp: Span) -> RResult<Vec<(Pattern, Comp)>> {
        clauses
            .iter()
            .map(|(p, c)| {
                let mut bound = Vec::new();
                let p = self.pattern(p, &mut bound, sp)?;
                let c = self.with_locals(&bound, |r| r.comp(c))?;
                Ok((p, c))
            })
            .collect()
    }

    fn handler(&mut self, h: &Handler, sp: Span) -> RResult<Handler> {
        let mut ops = Vec::new();
        for cl in &h.ops {
            let Some(Entity::Op(k)) = self.entity(&cl.op) else {
                return err(sp, format!("{} is not an operation", cl.op));
            };
            if cl.args.len() != k {
                return err(sp, format!("operation {} expects {k} arguments, the clause has {}", cl.op, cl.args.len()));
            }
            let mut bound = Vec::new();
            let args = cl.args.iter().map(|p| self.pattern(p, &mut bound, sp)).collect::<RResult<Vec<_>>>()?;
            let slot = match &cl.slot {
                Some(p) => Some(self.pattern(p, &mut bound, sp)?),
                None => None,
            };
            let body = self.with_locals(&bound, |r| r.comp(&cl.body))?;
            ops.push(OpClause { op: cl.op.clone(), args, slot, body });
        }
        Ok(Handler { ops, vals: self.clauses(&h.vals, sp)? })
    }

    fn bind(bound: &mut Vec<Name>, n: &Name) {
        if !bound.contains(n) {
            bound.push(n.clone());
        }
    }

    fn pattern(&mut self, p: &Pattern, bound: &mut Vec<Name>, sp: Span) -> RResult<Pattern> {
        Ok(match p {
            Pattern::Any | Pattern::Nil | Pattern::Str(_) | Pattern::Interp(_) => p.clone(),
            Pattern::Var(n) => {
                Self::bind(bound, n);
                p.clone()
            }
            Pattern::Ident(n) => match self.entity(n) {
                Some(Entity::Tag(0)) => Pattern::Tag(n.clone(), vec![]),
                Some(Entity::Tag(k)) => return err(sp, format!("constructor {n} expects {k} arguments")),
                Some(Entity::Var) => Pattern::Interp(n.clone()),
                Some(Entity::Const) => Pattern::Judg(Box::new(TermPat::ConstName(n.clone())), None),
                _ => return err(sp, format!("unbound identifier {n} in pattern")),
            },
            Pattern::Tag(n, args) => match self.entity(n) {
                Some(Entity::Tag(k)) if k == args.len() => Pattern::Tag(
                    n.clone(),
                    args.iter().map(|a| self.pattern(a, bound, sp)).collect::<RResult<_>>()?,
                ),
                Some(Entity::Tag(k)) => return err(sp, format!("constructor {n} expects {k} arguments")),
                _ => return err(sp, format!("{n} is not a constructor")),
            },
            Pattern::Tuple(xs) => {
                Pattern::Tuple(xs.iter().map(|a| self.pattern(a, bound, sp)).collect::<RResult<_>>()?)
            }
            Pattern::Cons(x, y) => {
                Pattern::Cons(Box::new(self.pattern(x, bound, sp)?), Box::new(self.pattern(y, bound, sp)?))
            }
            Pattern::Judg(t, ty) => {
                let t = self.term_pattern(t, bound, sp)?;
                let ty = match ty {
                    Some(ty) => Some(Box::new(self.term_pattern(ty, bound, sp)?)),
                    None => None,
                };
                Pattern::Judg(Box::new(t), ty)
            }
        })
    }

    fn term_pattern(&mut self, p: &TermPat, bound: &mut Vec<Name>, sp: Span) -> RResult<TermPat> {
        let b = Box::new;
        Ok(match p {
            TermPat::Any | TermPat::Type | TermPat::ConstName(_) => p.clone(),
            TermPat::Var(n) => {
                Self::bind(bound, n);
                p.clone()
            }
            TermPat::Atom(n) | TermPat::Const(n) => {
                if let Some(n) = n {
                    Self::bind(bound, n);
                }
                p.clone()
            }
            TermPat::Interp(n) => match self.entity(n) {
                Some(Entity::Var) if !bound.contains(n) || self.locals.contains(n) => TermPat::Interp(n.clone()),
                Some(Entity::Const) => TermPat::ConstName(n.clone()),
                _ if bound.contains(n) => return err(sp, format!("use ?{n} to repeat a pattern variable")),
                _ => return err(sp, format!("unbound identifier {n} in pattern")),
            },
            TermPat::App(f, a) => TermPat::App(b(self.term_pattern(f, bound, sp)?), b(self.term_pattern(a, bound, sp)?)),
            TermPat::Arrow(x, y) => {
                TermPat::Arrow(b(self.term_pattern(x, bound, sp)?), b(self.term_pattern(y, bound, sp)?))
            }
            TermPat::Eq(x, y) => TermPat::Eq(b(self.term_pattern(x, bound, sp)?), b(self.term_pattern(y, bound, sp)?)),
            TermPat::Refl(x) => TermPat::Refl(b(self.term_pattern(x, bound, sp)?)),
            TermPat::Prod(x, dom, cod) | TermPat::Lambda(x, dom, cod) => {
                let dom = self.term_pattern(dom, bound, sp)?;
                if let Some(x) = x {
                    Self::bind(bound, x);
                }
                let cod = self.term_pattern(cod, bound, sp)?;
                if matches!(p, TermPat::Prod(..)) {
                    TermPat::Prod(x.clone(), b(dom), b(cod))
                } else {
                    TermPat::Lambda(x.clone(), b(dom), b(cod))
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_file;

    fn scope() -> Scope {
        let mut s = Scope::new();
        s.declare("equal", Entity::Op(2));
        s.declare("Some", Entity::Tag(1));
        s.declare("None", Entity::Tag(0));
        s
    }

    fn resolve_all(src: &str) -> RResult<Vec<Top>> {
        let mut s = scope();
        parse_file(src).unwrap().iter().map(|t| s.resolve_top(t)).collect()
    }

    #[test]
    fn unbound_identifier_is_a_scope_error() {
        assert!(matches!(resolve_all("do frobnicate"), Err(SyntaxError::Scope { .. })));
    }

    #[test]
    fn operation_spine_is_saturated() {
        let tops = resolve_all("constant A : Type\nconstant a : A\ndo equal a a").unwrap();
        let TopKind::Do(c) = &tops[2].kind else { panic!() };
        assert!(matches!(&c.kind, CompKind::Op(n, args) if &**n == "equal" && args.len() == 2));
    }

    #[test]
    fn partial_operation_is_eta_expanded() {
        let tops = resolve_all("constant a : Type\ndo equal a").unwrap();
        let TopKind::Do(c) = &tops[1].kind else { panic!() };
        assert!(matches!(&c.kind, CompKind::Fun(..)));
    }

    #[test]
    fn handler_clause_arity_is_checked() {
        assert!(resolve_all("do handle Type with equal ?x ⇒ Type end").is_err());
    }

    #[test]
    fn pattern_identifiers_split_into_tags_and_interpolations() {
        let tops = resolve_all("let f x = match x with None ⇒ x | Some ?y ⇒ y | x ⇒ x end").unwrap();
        let TopKind::Let(b) = &tops[0].kind else { panic!() };
        let CompKind::Fun(_, body) = &b[0].1.kind else { panic!() };
        let CompKind::Match(_, cl) = &body.kind else { panic!() };
        assert!(matches!(cl[0].0, Pattern::Tag(..)));
        assert!(matches!(cl[2].0, Pattern::Interp(..)));
    }
}
