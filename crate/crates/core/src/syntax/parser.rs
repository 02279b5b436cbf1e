//! Recursive-descent parser. Binding strength from loosest to tightest:
//! `;`, binders and `let`-forms, `:=`, ascription, `where`, `→`, `::`, `≡`,
//! additive operators, multiplicative operators, application.

use super::ast::*;
use super::lexer::{Span, Tok};
use super::SyntaxError;
use std::rc::Rc;

pub struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<A> = Result<A, SyntaxError>;

fn name(s: &str) -> Name {
    Rc::from(s)
}

fn is_mul_op(op: &str) -> bool {
    matches!(op.chars().next(), Some('*' | '×' | '/' | '·' | '∘'))
}

impl Parser {
    pub fn new(toks: Vec<(Tok, Span)>) -> Parser {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Kw(x) if *x == k)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.at_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<A>(&self, expected: &str) -> PResult<A> {
        let sp = self.span();
        Err(SyntaxError::Parse {
            line: sp.line,
            col: sp.col,
            expected: expected.to_string(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&t.to_string())
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.error(k)
        }
    }

    fn mk(&self, kind: CompKind, start: Span) -> Comp {
        Comp::new(kind, Span { end: self.prev_end(), ..start })
    }

    /// An identifier, `_`, or an operator in parentheses such as `( + )`.
    fn binder_name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(name(&s))
            }
            Tok::Underscore => {
                self.bump();
                Ok(name("_"))
            }
            Tok::LParen if matches!(self.peek_at(1), Tok::Op(_)) && self.peek_at(2) == &Tok::RParen => {
                self.bump();
                let Tok::Op(s) = self.bump() else { unreachable!() };
                self.bump();
                Ok(name(&s))
            }
            _ => self.error("a name"),
        }
    }

    // ---------------------------------------------------------------------
    // Top level

    pub fn file(&mut self) -> PResult<Vec<Top>> {
        let mut out = Vec::new();
        while !self.at(&Tok::Eof) {
            out.push(self.top()?);
            self.eat(&Tok::Semi);
            self.eat(&Tok::Semi);
        }
        Ok(out)
    }

    pub fn top(&mut self) -> PResult<Top> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::Kw("constant") => {
                self.bump();
                let mut names = vec![self.binder_name()?];
                while !self.at(&Tok::Colon) {
                    names.push(self.binder_name()?);
                }
                self.expect(Tok::Colon)?;
                TopKind::Constant(names, self.comp()?)
            }
            Tok::Kw("operation") => {
                self.bump();
                let op = match self.bump() {
                    Tok::Ident(s) | Tok::Op(s) => name(&s),
                    Tok::Question => name("?"),
                    _ => return self.error("an operation name"),
                };
                self.expect(Tok::Colon)?;
                self.expect_kw("judgment")?;
                let mut arity = 0;
                while self.eat(&Tok::Arrow) {
                    self.expect_kw("judgment")?;
                    arity += 1;
                }
                TopKind::Operation(op, arity)
            }
            Tok::Kw("do") => {
                self.bump();
                TopKind::Do(self.comp()?)
            }
            Tok::Kw("let") => {
                self.bump();
                if self.eat_kw("rec") {
                    let defs = self.rec_defs()?;
                    if self.eat_kw("in") {
                        let body = self.comp()?;
                        TopKind::Do(self.mk(CompKind::LetRec(defs, Rc::new(body)), start))
                    } else {
                        TopKind::LetRec(defs)
                    }
                } else {
                    let binds = self.let_binds()?;
                    if self.eat_kw("in") {
                        let body = self.comp()?;
                        TopKind::Do(self.mk(CompKind::Let(binds, Rc::new(body)), start))
                    } else {
                        TopKind::Let(binds)
                    }
                }
            }
            Tok::Kw("dynamic") => {
                self.bump();
                let x = self.binder_name()?;
                self.expect(Tok::Equals)?;
                TopKind::Dynamic(x, self.comp()?)
            }
            Tok::Kw("now") => {
                self.bump();
                let x = self.binder_name()?;
                self.expect(Tok::Equals)?;
                let v = self.comp()?;
                if self.eat_kw("in") {
                    let body = self.comp()?;
                    TopKind::Do(self.mk(CompKind::Now(x, Rc::new(v), Rc::new(body)), start))
                } else {
                    TopKind::Now(x, v)
                }
            }
            Tok::Kw("handle") if self.peek_at(1) == &Tok::Bar => {
                self.bump();
                let h = self.handler_clauses()?;
                self.expect_kw("end")?;
                TopKind::GlobalHandle(Rc::new(h))
            }
            Tok::Kw("include") => {
                self.bump();
                match self.bump() {
                    Tok::Str(s) => TopKind::Include(s),
                    _ => return self.error("a file name"),
                }
            }
            Tok::Kw("verbosity") => {
                self.bump();
                match self.bump() {
                    Tok::Int(n) => TopKind::Verbosity(n as u32),
                    _ => return self.error("a number"),
                }
            }
            Tok::Kw("mltype") => {
                self.bump();
                TopKind::MlType(self.mltype_def()?)
            }
            _ => TopKind::Do(self.comp()?),
        };
        Ok(Top { kind, span: Span { end: self.prev_end(), ..start } })
    }

    fn mltype_def(&mut self) -> PResult<MlTypeDef> {
        let n = self.binder_name()?;
        let mut params = Vec::new();
        while let Tok::Ident(s) = self.peek().clone() {
            self.bump();
            params.push(name(&s));
        }
        self.expect(Tok::Equals)?;
        let mut ctors = Vec::new();
        self.eat(&Tok::Bar);
        loop {
            let c = self.binder_name()?;
            let mut args = Vec::new();
            if self.eat_kw("of") {
                args.push(self.mltype_atom()?);
                while matches!(self.peek(), Tok::Op(o) if o == "*" || o == "×") {
                    self.bump();
                    args.push(self.mltype_atom()?);
                }
            }
            ctors.push((c, args));
            if !self.eat(&Tok::Bar) {
                break;
            }
        }
        self.expect_kw("end")?;
        Ok(MlTypeDef { name: n, params, ctors })
    }

    fn mltype_expr(&mut self) -> PResult<MlTypeExpr> {
        let a = self.mltype_atom()?;
        if self.eat(&Tok::Arrow) {
            Ok(MlTypeExpr::Arrow(Box::new(a), Box::new(self.mltype_expr()?)))
        } else {
            Ok(a)
        }
    }

    fn mltype_atom(&mut self) -> PResult<MlTypeExpr> {
        let mut t = match self.bump() {
            Tok::Kw("judgment") => MlTypeExpr::Judgment,
            Tok::Ident(s) => MlTypeExpr::Named(name(&s), vec![]),
            Tok::LParen => {
                let mut items = vec![self.mltype_expr()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.mltype_expr()?);
                }
                self.expect(Tok::RParen)?;
                if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    MlTypeExpr::Tuple(items)
                }
            }
            _ => return self.error("a type"),
        };
        // Postfix type application: `judgment list`.
        while let Tok::Ident(s) = self.peek().clone() {
            self.bump();
            t = MlTypeExpr::Named(name(&s), vec![t]);
        }
        Ok(t)
    }

    fn let_binds(&mut self) -> PResult<Vec<(Pattern, Comp)>> {
        let mut out = Vec::new();
        loop {
            let start = self.span();
            // `let f x y = c` defines a function; anything else is a pattern.
            let is_fun = matches!(self.peek(), Tok::Ident(_))
                && matches!(self.peek_at(1), Tok::Ident(_) | Tok::Underscore);
            if is_fun {
                let f = self.binder_name()?;
                let mut params = Vec::new();
                while !self.at(&Tok::Equals) {
                    params.push(self.binder_name()?);
                }
                self.expect(Tok::Equals)?;
                let body = self.comp()?;
                let mut c = body;
                for p in params.into_iter().rev() {
                    c = self.mk(CompKind::Fun(p, Rc::new(c)), start);
                }
                out.push((Pattern::Var(f), c));
            } else {
                let p = match self.peek().clone() {
                    Tok::Ident(s) => {
                        self.bump();
                        Pattern::Var(name(&s))
                    }
                    Tok::LParen if matches!(self.peek_at(1), Tok::Op(_)) => Pattern::Var(self.binder_name()?),
                    _ => self.pattern()?,
                };
                self.expect(Tok::Equals)?;
                out.push((p, self.comp()?));
            }
            if !self.eat_kw("and") {
                return Ok(out);
            }
        }
    }

    fn rec_defs(&mut self) -> PResult<Vec<RecDef>> {
        let mut out = Vec::new();
        loop {
            let f = self.binder_name()?;
            let mut params = Vec::new();
            while !self.at(&Tok::Equals) {
                params.push(self.binder_name()?);
            }
            if params.is_empty() {
                return self.error("a parameter of the recursive function");
            }
            self.expect(Tok::Equals)?;
            let body = self.comp()?;
            out.push(RecDef { name: f, params, body: Rc::new(body) });
            if !self.eat_kw("and") {
                return Ok(out);
            }
        }
    }

    // ---------------------------------------------------------------------
    // Computations

    pub fn comp(&mut self) -> PResult<Comp> {
        let start = self.span();
        let c = self.stmt()?;
        if self.eat(&Tok::Semi) {
            let rest = self.comp()?;
            return Ok(self.mk(CompKind::Seq(Rc::new(c), Rc::new(rest)), start));
        }
        Ok(c)
    }

    fn stmt(&mut self) -> PResult<Comp> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Kw("let") => {
                self.bump();
                if self.eat_kw("rec") {
                    let defs = self.rec_defs()?;
                    self.expect_kw("in")?;
                    let body = self.comp()?;
                    Ok(self.mk(CompKind::LetRec(defs, Rc::new(body)), start))
                } else {
                    let binds = self.let_binds()?;
                    self.expect_kw("in")?;
                    let body = self.comp()?;
                    Ok(self.mk(CompKind::Let(binds, Rc::new(body)), start))
                }
            }
            Tok::Kw("now") => {
                self.bump();
                let x = self.binder_name()?;
                self.expect(Tok::Equals)?;
                let v = self.comp()?;
                self.expect_kw("in")?;
                let body = self.comp()?;
                Ok(self.mk(CompKind::Now(x, Rc::new(v), Rc::new(body)), start))
            }
            Tok::Kw("assume") => {
                self.bump();
                let x = self.binder_name()?;
                self.expect(Tok::Colon)?;
                let ty = self.comp()?;
                self.expect_kw("in")?;
                let body = self.comp()?;
                Ok(self.mk(CompKind::Assume(x, Rc::new(ty), Rc::new(body)), start))
            }
            Tok::Kw("with") => {
                self.bump();
                let h = self.comp()?;
                self.expect_kw("handle")?;
                let body = self.comp()?;
                Ok(self.mk(CompKind::WithHandle(Rc::new(h), Rc::new(body)), start))
            }
            Tok::Kw("fun") => {
                self.bump();
                let mut params = vec![self.binder_name()?];
                while !self.at(&Tok::DArrow) {
                    params.push(self.binder_name()?);
                }
                self.expect(Tok::DArrow)?;
                let mut c = self.comp()?;
                for p in params.into_iter().rev() {
                    c = self.mk(CompKind::Fun(p, Rc::new(c)), start);
                }
                Ok(c)
            }
            Tok::Lambda | Tok::Pi => {
                let is_pi = self.bump() == Tok::Pi;
                let groups = self.binders(!is_pi)?;
                self.expect(Tok::Comma)?;
                let body = self.comp()?;
                let mut c = body;
                for (x, ty) in groups.into_iter().rev() {
                    c = if is_pi {
                        let ty = ty.expect("products have annotated binders");
                        self.mk(CompKind::Prod(x, Rc::new(ty), Rc::new(c)), start)
                    } else {
                        self.mk(CompKind::Lambda(x, ty.map(Rc::new), Rc::new(c)), start)
                    };
                }
                Ok(c)
            }
            Tok::Kw("yield") => {
                self.bump();
                let v = self.comp()?;
                Ok(self.mk(CompKind::Yield(Rc::new(v)), start))
            }
            _ => {
                let lhs = self.ascription()?;
                if self.eat(&Tok::Assign) {
                    let rhs = self.ascription()?;
                    return Ok(self.mk(CompKind::Assign(Rc::new(lhs), Rc::new(rhs)), start));
                }
                Ok(lhs)
            }
        }
    }

    /// Binder groups `(x y : A) (z : B)` or `x y : A` or bare names.
    fn binders(&mut self, allow_bare: bool) -> PResult<Vec<(Name, Option<Comp>)>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Tok::LParen if !matches!(self.peek_at(1), Tok::Op(_)) => {
                    self.bump();
                    let mut names = vec![self.binder_name()?];
                    while !self.at(&Tok::Colon) {
                        names.push(self.binder_name()?);
                    }
                    self.expect(Tok::Colon)?;
                    let ty = self.comp()?;
                    self.expect(Tok::RParen)?;
                    for n in names {
                        out.push((n, Some(ty.clone())));
                    }
                }
                Tok::Ident(_) | Tok::Underscore => {
                    let mut names = Vec::new();
                    while matches!(self.peek(), Tok::Ident(_) | Tok::Underscore) {
                        names.push(self.binder_name()?);
                    }
                    let ty = if self.eat(&Tok::Colon) { Some(self.arrow()?) } else { None };
                    if ty.is_none() && !allow_bare {
                        return self.error(":");
                    }
                    for n in names {
                        out.push((n, ty.clone()));
                    }
                }
                _ => break,
            }
        }
        if out.is_empty() {
            return self.error("a binder");
        }
        Ok(out)
    }

    fn ascription(&mut self) -> PResult<Comp> {
        let start = self.span();
        let c = self.where_expr()?;
        if self.eat(&Tok::Colon) {
            let ty = self.comp_no_seq()?;
            return Ok(self.mk(CompKind::Ascribe(Rc::new(c), Rc::new(ty)), start));
        }
        Ok(c)
    }

    fn comp_no_seq(&mut self) -> PResult<Comp> {
        self.stmt()
    }

    fn where_expr(&mut self) -> PResult<Comp> {
        let start = self.span();
        let mut c = self.arrow()?;
        while self.eat_kw("where") {
            let x = self.arrow_no_eq()?;
            self.expect(Tok::Equals)?;
            let v = self.arrow()?;
            c = self.mk(CompKind::Where(Rc::new(c), Rc::new(x), Rc::new(v)), start);
        }
        Ok(c)
    }

    fn arrow_no_eq(&mut self) -> PResult<Comp> {
        self.app()
    }

    fn arrow(&mut self) -> PResult<Comp> {
        let start = self.span();
        let a = self.cons()?;
        if self.eat(&Tok::Arrow) {
            let b = match self.peek() {
                Tok::Lambda | Tok::Pi => self.stmt()?,
                _ => self.arrow()?,
            };
            return Ok(self.mk(CompKind::Prod(name("_"), Rc::new(a), Rc::new(b)), start));
        }
        Ok(a)
    }

    fn cons(&mut self) -> PResult<Comp> {
        let start = self.span();
        let a = self.equation()?;
        if self.eat(&Tok::Cons) {
            let b = self.cons()?;
            return Ok(self.mk(CompKind::Cons(Rc::new(a), Rc::new(b)), start));
        }
        Ok(a)
    }

    fn equation(&mut self) -> PResult<Comp> {
        let start = self.span();
        let a = self.additive()?;
        if self.eat(&Tok::Equiv) {
            let b = self.additive()?;
            return Ok(self.mk(CompKind::Eq(Rc::new(a), Rc::new(b)), start));
        }
        Ok(a)
    }

    fn infix(&mut self, start: Span, op: String, a: Comp, b: Comp) -> Comp {
        let f = self.mk(CompKind::Ident(name(&op)), start);
        let fa = self.mk(CompKind::App(Rc::new(f), Rc::new(a)), start);
        self.mk(CompKind::App(Rc::new(fa), Rc::new(b)), start)
    }

    fn additive(&mut self) -> PResult<Comp> {
        let start = self.span();
        let mut a = self.multiplicative()?;
        while let Tok::Op(op) = self.peek().clone() {
            if is_mul_op(&op) || self.peek_at(1) == &Tok::RParen || !self.continues() {
                break;
            }
            self.bump();
            let b = self.multiplicative()?;
            a = self.infix(start, op, a, b);
        }
        Ok(a)
    }

    fn multiplicative(&mut self) -> PResult<Comp> {
        let start = self.span();
        let mut a = self.app()?;
        while let Tok::Op(op) = self.peek().clone() {
            if !is_mul_op(&op) || self.peek_at(1) == &Tok::RParen || !self.continues() {
                break;
            }
            self.bump();
            let b = self.app()?;
            a = self.infix(start, op, a, b);
        }
        Ok(a)
    }

    /// A token in the first column of a fresh line starts a new top-level command.
    fn continues(&self) -> bool {
        let sp = self.span();
        sp.col != 1 || self.pos == 0 || self.toks[self.pos - 1].1.line == sp.line
    }

    fn starts_atom(&self) -> bool {
        let starts = match self.peek() {
            Tok::Ident(_) | Tok::Str(_) | Tok::LParen | Tok::LBrack | Tok::Question | Tok::Bang => true,
            Tok::Kw(k) => matches!(*k, "Type" | "match" | "handler" | "refl"),
            _ => false,
        };
        starts && self.continues()
    }

    fn app(&mut self) -> PResult<Comp> {
        let start = self.span();
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            f = self.mk(CompKind::App(Rc::new(f), Rc::new(a)), start);
        }
        Ok(f)
    }

    fn atom(&mut self) -> PResult<Comp> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(self.mk(CompKind::Ident(name(&s)), start))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(self.mk(CompKind::Str(s), start))
            }
            Tok::Question => {
                self.bump();
                Ok(self.mk(CompKind::Ident(name("?")), start))
            }
            Tok::Bang => {
                self.bump();
                let r = self.atom()?;
                Ok(self.mk(CompKind::Deref(Rc::new(r)), start))
            }
            Tok::Kw("Type") => {
                self.bump();
                Ok(self.mk(CompKind::Type, start))
            }
            Tok::Kw("refl") => {
                self.bump();
                let a = self.atom()?;
                Ok(self.mk(CompKind::Refl(Rc::new(a)), start))
            }
            Tok::Kw("match") => {
                self.bump();
                let scrut = self.comp()?;
                self.expect_kw("with")?;
                let clauses = self.match_clauses()?;
                self.expect_kw("end")?;
                Ok(self.mk(CompKind::Match(Rc::new(scrut), clauses), start))
            }
            Tok::Kw("handle") => {
                self.bump();
                let body = self.comp()?;
                self.expect_kw("with")?;
                let h = self.handler_clauses()?;
                self.expect_kw("end")?;
                Ok(self.mk(CompKind::Handle(Rc::new(body), Rc::new(h)), start))
            }
            Tok::Kw("handler") => {
                self.bump();
                let h = self.handler_clauses()?;
                self.expect_kw("end")?;
                Ok(self.mk(CompKind::HandlerLit(Rc::new(h)), start))
            }
            Tok::LBrack => {
                self.bump();
                let mut items = Vec::new();
                if !self.eat(&Tok::RBrack) {
                    loop {
                        items.push(self.comp_no_seq()?);
                        if self.eat(&Tok::RBrack) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                Ok(self.mk(CompKind::List(items), start))
            }
            Tok::LParen => {
                if let (Tok::Op(op), Tok::RParen) = (self.peek_at(1).clone(), self.peek_at(2).clone()) {
                    self.bump();
                    self.bump();
                    self.bump();
                    return Ok(self.mk(CompKind::Ident(name(&op)), start));
                }
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(self.mk(CompKind::Tuple(vec![]), start));
                }
                let first = self.comp()?;
                if self.eat(&Tok::Comma) {
                    let mut items = vec![first];
                    loop {
                        items.push(self.comp()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                    return Ok(self.mk(CompKind::Tuple(items), start));
                }
                self.expect(Tok::RParen)?;
                Ok(Comp { span: Span { end: self.prev_end(), ..start }, ..first })
            }
            _ => self.error("a computation"),
        }
    }

    fn match_clauses(&mut self) -> PResult<Vec<(Pattern, Comp)>> {
        let mut out = Vec::new();
        let first_bar = self.eat(&Tok::Bar);
        if !first_bar && self.at_kw("end") {
            return Ok(out);
        }
        loop {
            let p = self.pattern()?;
            self.expect(Tok::DArrow)?;
            let c = self.comp()?;
            out.push((p, c));
            if !self.eat(&Tok::Bar) {
                return Ok(out);
            }
        }
    }

    fn handler_clauses(&mut self) -> PResult<Handler> {
        let mut h = Handler::default();
        self.eat(&Tok::Bar);
        if self.at_kw("end") {
            return Ok(h);
        }
        loop {
            if self.eat_kw("val") {
                let p = self.pattern()?;
                self.expect(Tok::DArrow)?;
                h.vals.push((p, self.comp()?));
            } else {
                let op = match self.bump() {
                    Tok::Ident(s) | Tok::Op(s) => name(&s),
                    Tok::Question => name("?"),
                    _ => return self.error("an operation name"),
                };
                let mut args = Vec::new();
                while !matches!(self.peek(), Tok::DArrow | Tok::Colon) {
                    args.push(self.pattern_atom()?);
                }
                let slot = if self.eat(&Tok::Colon) { Some(self.pattern()?) } else { None };
                self.expect(Tok::DArrow)?;
                let body = self.comp()?;
                h.ops.push(OpClause { op, args, slot, body });
            }
            if !self.eat(&Tok::Bar) {
                return Ok(h);
            }
        }
    }

    // ---------------------------------------------------------------------
    // Patterns

    pub fn pattern(&mut self) -> PResult<Pattern> {
        let p = self.pattern_app()?;
        if self.eat(&Tok::Cons) {
            let rest = self.pattern()?;
            return Ok(Pattern::Cons(Box::new(p), Box::new(rest)));
        }
        Ok(p)
    }

    fn pattern_app(&mut self) -> PResult<Pattern> {
        if let Tok::Ident(s) = self.peek().clone() {
            if self.starts_pattern_atom_at(1) {
                self.bump();
                let mut args = Vec::new();
                while self.starts_pattern_atom_at(0) {
                    args.push(self.pattern_atom()?);
                }
                return Ok(Pattern::Tag(name(&s), args));
            }
        }
        if self.at(&Tok::Turnstile) {
            return self.judgment_pattern();
        }
        self.pattern_atom()
    }

    fn starts_pattern_atom_at(&self, k: usize) -> bool {
        matches!(
            self.peek_at(k),
            Tok::Underscore | Tok::PVar(_) | Tok::Ident(_) | Tok::Str(_) | Tok::LBrack | Tok::LParen
        )
    }

    fn judgment_pattern(&mut self) -> PResult<Pattern> {
        self.expect(Tok::Turnstile)?;
        let t = self.term_pattern()?;
        let ty = if self.eat(&Tok::Colon) { Some(Box::new(self.term_pattern()?)) } else { None };
        Ok(Pattern::Judg(Box::new(t), ty))
    }

    fn pattern_atom(&mut self) -> PResult<Pattern> {
        match self.peek().clone() {
            Tok::Underscore => {
                self.bump();
                Ok(Pattern::Any)
            }
            Tok::PVar(s) => {
                self.bump();
                Ok(Pattern::Var(name(&s)))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Pattern::Ident(name(&s)))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Pattern::Str(s))
            }
            Tok::LBrack => {
                self.bump();
                let mut items = Vec::new();
                if !self.eat(&Tok::RBrack) {
                    loop {
                        items.push(self.pattern()?);
                        if self.eat(&Tok::RBrack) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                let mut p = Pattern::Nil;
                for it in items.into_iter().rev() {
                    p = Pattern::Cons(Box::new(it), Box::new(p));
                }
                Ok(p)
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Pattern::Tuple(vec![]));
                }
                let first = self.pattern()?;
                if self.eat(&Tok::Comma) {
                    let mut items = vec![first];
                    loop {
                        items.push(self.pattern()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                    return Ok(Pattern::Tuple(items));
                }
                self.expect(Tok::RParen)?;
                Ok(first)
            }
            Tok::Turnstile => self.judgment_pattern(),
            _ => self.error("a pattern"),
        }
    }

    fn term_pattern(&mut self) -> PResult<TermPat> {
        match self.peek() {
            Tok::Pi | Tok::Lambda => {
                let is_pi = self.bump() == Tok::Pi;
                self.expect(Tok::LParen)?;
                let x = match self.bump() {
                    Tok::PVar(s) => Some(name(&s)),
                    Tok::Underscore => None,
                    _ => return self.error("a pattern variable"),
                };
                self.expect(Tok::Colon)?;
                let a = self.term_pattern()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Comma)?;
                let b = self.term_pattern()?;
                Ok(if is_pi {
                    TermPat::Prod(x, Box::new(a), Box::new(b))
                } else {
                    TermPat::Lambda(x, Box::new(a), Box::new(b))
                })
            }
            _ => {
                let a = self.term_pattern_eq()?;
                if self.eat(&Tok::Arrow) {
                    let b = self.term_pattern()?;
                    return Ok(TermPat::Arrow(Box::new(a), Box::new(b)));
                }
                Ok(a)
            }
        }
    }

    fn term_pattern_eq(&mut self) -> PResult<TermPat> {
        let a = self.term_pattern_app()?;
        if self.eat(&Tok::Equiv) {
            let b = self.term_pattern_app()?;
            return Ok(TermPat::Eq(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn term_pattern_app(&mut self) -> PResult<TermPat> {
        if self.eat_kw("refl") {
            return Ok(TermPat::Refl(Box::new(self.term_pattern_atom()?)));
        }
        if matches!(self.peek(), Tok::Ident(s) if s == "atom") && matches!(self.peek_at(1), Tok::PVar(_) | Tok::Underscore) {
            self.bump();
            return Ok(TermPat::Atom(self.opt_pvar()));
        }
        if self.at_kw("constant") {
            self.bump();
            return Ok(TermPat::Const(self.opt_pvar()));
        }
        let mut f = self.term_pattern_atom()?;
        while matches!(self.peek(), Tok::Underscore | Tok::PVar(_) | Tok::Ident(_) | Tok::LParen | Tok::Kw("Type")) {
            let a = self.term_pattern_atom()?;
            f = TermPat::App(Box::new(f), Box::new(a));
        }
        Ok(f)
    }

    fn opt_pvar(&mut self) -> Option<Name> {
        match self.bump() {
            Tok::PVar(s) => Some(name(&s)),
            _ => None,
        }
    }

    fn term_pattern_atom(&mut self) -> PResult<TermPat> {
        match self.peek().clone() {
            Tok::Underscore => {
                self.bump();
                Ok(TermPat::Any)
            }
            Tok::PVar(s) => {
                self.bump();
                Ok(TermPat::Var(name(&s)))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(TermPat::Interp(name(&s)))
            }
            Tok::Kw("Type") => {
                self.bump();
                Ok(TermPat::Type)
            }
            Tok::LParen => {
                if let (Tok::Op(op), Tok::RParen) = (self.peek_at(1).clone(), self.peek_at(2).clone()) {
                    self.bump();
                    self.bump();
                    self.bump();
                    return Ok(TermPat::Interp(name(&op)));
                }
                self.bump();
                let p = self.term_pattern()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            _ => self.error("a term pattern"),
        }
    }
}
