//! Abstract syntax of AML computations, patterns and top-level commands.

use super::lexer::Span;
use std::rc::Rc;

pub type Name = Rc<str>;

#[derive(Clone, Debug)]
pub struct Comp {
    pub kind: CompKind,
    pub span: Span,
}

pub type C = Rc<Comp>;

#[derive(Clone, Debug)]
pub enum CompKind {
    /// An identifier before scope resolution.
    Ident(Name),
    Var(Name),
    /// A constant from the signature.
    Const(Name),
    /// A datatype constructor applied to its arguments.
    Tag(Name, Vec<Comp>),
    /// An operation invocation with all its arguments.
    Op(Name, Vec<Comp>),
    Dyn(Name),
    Str(String),
    Tuple(Vec<Comp>),
    List(Vec<Comp>),
    Cons(C, C),
    Fun(Name, C),
    App(C, C),
    Let(Vec<(Pattern, Comp)>, C),
    LetRec(Vec<RecDef>, C),
    Match(C, Vec<(Pattern, Comp)>),
    Handle(C, Rc<Handler>),
    WithHandle(C, C),
    HandlerLit(Rc<Handler>),
    Yield(C),
    Now(Name, C, C),
    Ascribe(C, C),
    Type,
    /// `Π (x : A), B`; `→` is a product with an anonymous binder.
    Prod(Name, C, C),
    /// `λ (x : A), b` or `λ x, b` when the domain is left to checking mode.
    Lambda(Name, Option<C>, C),
    Eq(C, C),
    Refl(C),
    Assume(Name, C, C),
    /// `c where x = v`
    Where(C, C, C),
    Deref(C),
    Assign(C, C),
    Seq(C, C),
}

#[derive(Clone, Debug)]
pub struct RecDef {
    pub name: Name,
    pub params: Vec<Name>,
    pub body: C,
}

#[derive(Clone, Debug, Default)]
pub struct Handler {
    pub ops: Vec<OpClause>,
    pub vals: Vec<(Pattern, Comp)>,
}

#[derive(Clone, Debug)]
pub struct OpClause {
    pub op: Name,
    pub args: Vec<Pattern>,
    pub slot: Option<Pattern>,
    pub body: Comp,
}

#[derive(Clone, Debug)]
pub enum Pattern {
    Any,
    Var(Name),
    /// An identifier before scope resolution: a tag or an interpolated variable.
    Ident(Name),
    Interp(Name),
    Tag(Name, Vec<Pattern>),
    Tuple(Vec<Pattern>),
    Nil,
    Cons(Box<Pattern>, Box<Pattern>),
    Str(String),
    Judg(Box<TermPat>, Option<Box<TermPat>>),
}

#[derive(Clone, Debug)]
pub enum TermPat {
    Any,
    Var(Name),
    Interp(Name),
    /// A constant named in the pattern itself.
    ConstName(Name),
    Type,
    App(Box<TermPat>, Box<TermPat>),
    /// A non-dependent product.
    Arrow(Box<TermPat>, Box<TermPat>),
    Prod(Option<Name>, Box<TermPat>, Box<TermPat>),
    Lambda(Option<Name>, Box<TermPat>, Box<TermPat>),
    Eq(Box<TermPat>, Box<TermPat>),
    Refl(Box<TermPat>),
    Atom(Option<Name>),
    Const(Option<Name>),
}

#[derive(Clone, Debug)]
pub struct MlTypeDef {
    pub name: Name,
    pub params: Vec<Name>,
    pub ctors: Vec<(Name, Vec<MlTypeExpr>)>,
}

#[derive(Clone, Debug)]
pub enum MlTypeExpr {
    Judgment,
    Param(Name),
    Named(Name, Vec<MlTypeExpr>),
    Arrow(Box<MlTypeExpr>, Box<MlTypeExpr>),
    Tuple(Vec<MlTypeExpr>),
}

#[derive(Clone, Debug)]
pub struct Top {
    pub kind: TopKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum TopKind {
    Constant(Vec<Name>, Comp),
    Operation(Name, usize),
    Do(Comp),
    Let(Vec<(Pattern, Comp)>),
    LetRec(Vec<RecDef>),
    Dynamic(Name, Comp),
    Now(Name, Comp),
    GlobalHandle(Rc<Handler>),
    Include(String),
    Verbosity(u32),
    MlType(MlTypeDef),
}

impl Comp {
    pub fn new(kind: CompKind, span: Span) -> Comp {
        Comp { kind, span }
    }
}
