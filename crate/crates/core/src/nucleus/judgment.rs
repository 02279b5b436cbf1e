//! Judgments and the rules that build them.

use super::atom::{Atom, AtomSet};
use super::context::Context;
use super::proof::{CertSet, Proof, Rule};
use super::signature::{ConstantDecl, Signature};
use super::term::{Binder, Term, TermKind};
use super::{NucleusError, Result};

/// `Γ ⊢ t : A`
#[derive(Clone)]
pub struct TermJudgment {
    ctx: Context,
    term: Term,
    ty: Term,
    certs: CertSet,
}

/// `Γ ⊢ s ≡ t : A`
#[derive(Clone)]
pub struct EqTermJudgment {
    ctx: Context,
    lhs: Term,
    rhs: Term,
    ty: Term,
    proof: Proof,
    certs: CertSet,
}

/// `Γ ⊢ A ≡ B : Type`
#[derive(Clone)]
pub struct EqTypeJudgment(EqTermJudgment);

#[derive(Clone)]
pub enum Judgment {
    Term(TermJudgment),
    EqTerm(EqTermJudgment),
    EqType(EqTypeJudgment),
}

impl TermJudgment {
    fn new(ctx: Context, term: Term, ty: Term, certs: CertSet) -> TermJudgment {
        TermJudgment { ctx, term, ty, certs }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn ty(&self) -> &Term {
        &self.ty
    }

    pub fn certificates(&self) -> &CertSet {
        &self.certs
    }

    pub fn is_type(&self) -> bool {
        self.ty.is_type()
    }

    /// The atom if the subject is a bare atom.
    pub fn as_atom(&self) -> Option<&Atom> {
        match self.term.kind() {
            TermKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// `Γ|β ⊢ A : Type` for the type `A` of this judgment.
    pub fn type_of(&self) -> TermJudgment {
        TermJudgment::new(
            self.ctx.restrict(self.ty.assumptions()),
            self.ty.clone(),
            Term::ty(),
            self.certs.clone(),
        )
    }

    /// The same judgment with its context cut down to what the term and type depend on.
    pub fn strengthen(&self) -> TermJudgment {
        let asm = self.term.assumptions().union(self.ty.assumptions());
        TermJudgment::new(self.ctx.restrict(&asm), self.term.clone(), self.ty.clone(), self.certs.clone())
    }
}

impl EqTermJudgment {
    fn new(ctx: Context, lhs: Term, rhs: Term, ty: Term, proof: Proof, certs: CertSet) -> EqTermJudgment {
        EqTermJudgment { ctx, lhs, rhs, ty, proof, certs }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn ty(&self) -> &Term {
        &self.ty
    }

    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn certificates(&self) -> &CertSet {
        &self.certs
    }

    /// Everything the equation depends on, including the atoms used by its derivation.
    pub fn assumptions(&self) -> AtomSet {
        self.proof.atoms().clone()
    }

    pub fn as_type_eq(&self) -> Option<EqTypeJudgment> {
        if self.ty.is_type() {
            Some(EqTypeJudgment(self.clone()))
        } else {
            None
        }
    }

    /// Certificates together with the proof of this equation.
    fn all_certs(&self) -> CertSet {
        self.certs.union(&CertSet::single(self.proof.clone()))
    }
}

impl EqTypeJudgment {
    pub fn as_term_eq(&self) -> &EqTermJudgment {
        &self.0
    }

    pub fn context(&self) -> &Context {
        &self.0.ctx
    }

    pub fn lhs(&self) -> &Term {
        &self.0.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.0.rhs
    }

    pub fn assumptions(&self) -> AtomSet {
        self.0.assumptions()
    }
}

impl Judgment {
    pub fn context(&self) -> &Context {
        match self {
            Judgment::Term(j) => &j.ctx,
            Judgment::EqTerm(j) => &j.ctx,
            Judgment::EqType(j) => &j.0.ctx,
        }
    }
}

impl std::fmt::Debug for TermJudgment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} ⊢ {:?} : {:?}", self.ctx, self.term, self.ty)
    }
}

impl std::fmt::Debug for EqTermJudgment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} ⊢ {:?} ≡ {:?} : {:?}", self.ctx, self.lhs, self.rhs, self.ty)
    }
}

impl std::fmt::Debug for EqTypeJudgment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

fn join3(a: &Context, b: &Context, c: &Context) -> Result<Context> {
    a.join(b)?.join(c)
}

fn binder_of(x: &Atom) -> Binder {
    Binder::new(x.name().clone(), x.id())
}

/// Instantiates a codomain and carries the certificates that mentioned its binder.
fn inst(cod: &Term, b: &Binder, v: &Term, certs: &CertSet) -> (Term, CertSet) {
    let t = cod.instantiate(0, v);
    let cs = if b.atom != 0 { certs.with_subst(b.atom, v) } else { certs.clone() };
    (t, cs)
}

// ---------------------------------------------------------------------------
// Signatures

pub fn sig_empty() -> Signature {
    Signature::default()
}

pub fn sig_add_constant(sig: &Signature, name: &str, ty: &TermJudgment) -> Result<Signature> {
    if sig.contains(name) {
        return Err(NucleusError::DuplicateConstant(name.to_string()));
    }
    if !ty.ctx.is_empty() || !ty.term.assumptions().is_empty() {
        return Err(NucleusError::NonClosedType);
    }
    if !ty.ty.is_type() {
        return Err(NucleusError::NotAType);
    }
    let mut cs = Vec::new();
    ty.term.constants(&mut cs);
    if let Some(c) = cs.iter().find(|c| !sig.contains(c)) {
        return Err(NucleusError::UnknownConstant(c.to_string()));
    }
    Ok(sig.push(ConstantDecl { name: name.into(), ty: ty.term.clone(), certs: ty.certs.clone() }))
}

// ---------------------------------------------------------------------------
// Formation

pub fn form_type() -> TermJudgment {
    TermJudgment::new(Context::empty(), Term::ty(), Term::ty(), CertSet::empty())
}

pub fn form_constant(sig: &Signature, name: &str) -> Result<TermJudgment> {
    let d = sig.lookup(name).ok_or_else(|| NucleusError::UnknownConstant(name.to_string()))?;
    Ok(TermJudgment::new(Context::empty(), Term::constant(d.name.clone()), d.ty.clone(), CertSet::empty()))
}

/// `Γ ⊢ A : Type` gives `Γ, x : A ⊢ x : A` for a globally fresh `x`.
pub fn fresh_atom(ty: &TermJudgment, name: &str) -> Result<TermJudgment> {
    if !ty.ty.is_type() {
        return Err(NucleusError::NotAType);
    }
    let x = Atom::fresh(name);
    let ctx = ty.ctx.extend(x.clone(), ty.term.clone());
    Ok(TermJudgment::new(ctx, Term::atom(&x), ty.term.clone(), ty.certs.clone()))
}

fn binder_type(ctx: &Context, x: &Atom) -> Result<Term> {
    ctx.get(x.id())
        .map(|e| e.ty.clone())
        .ok_or_else(|| NucleusError::AtomNotInContext(x.name().to_string()))
}

/// Splits an atom judgment into the atom, its type, and `inner` joined with the
/// atom's context minus the atom itself.
fn bind(x: &TermJudgment, inner: &Context) -> Result<(Atom, Term, Context)> {
    let a = x.as_atom().ok_or(NucleusError::NotAnAtom)?.clone();
    let dom = binder_type(&x.ctx, &a)?;
    let ctx = x.ctx.join(inner)?.remove(&a)?;
    Ok((a, dom, ctx))
}

pub fn form_prod(x: &TermJudgment, cod: &TermJudgment) -> Result<TermJudgment> {
    if !cod.ty.is_type() {
        return Err(NucleusError::NotAType);
    }
    let (x, dom, ctx) = bind(x, &cod.ctx)?;
    let term = Term::mk(TermKind::Prod(binder_of(&x), dom, cod.term.abstract_atom(x.id(), 0)));
    Ok(TermJudgment::new(ctx, term, Term::ty(), cod.certs.clone()))
}

pub fn form_lambda(x: &TermJudgment, body: &TermJudgment) -> Result<TermJudgment> {
    let (x, dom, ctx) = bind(x, &body.ctx)?;
    let x = &x;
    let b = binder_of(x);
    let cod = body.ty.abstract_atom(x.id(), 0);
    let term = Term::mk(TermKind::Lambda(
        b.clone(),
        dom.clone(),
        cod.clone(),
        body.term.abstract_atom(x.id(), 0),
    ));
    let ty = Term::mk(TermKind::Prod(b, dom, cod));
    Ok(TermJudgment::new(ctx, term, ty, body.certs.clone()))
}

pub fn form_app(fun: &TermJudgment, arg: &TermJudgment) -> Result<TermJudgment> {
    let TermKind::Prod(b, dom, cod) = fun.ty.kind() else {
        return Err(NucleusError::NotAProduct);
    };
    if !dom.alpha_eq(&arg.ty) {
        return Err(NucleusError::ArgTypeMismatch);
    }
    let ctx = fun.ctx.join(&arg.ctx)?;
    let term = Term::mk(TermKind::Apply(
        fun.term.clone(),
        b.clone(),
        dom.clone(),
        cod.clone(),
        arg.term.clone(),
    ));
    let (ty, certs) = inst(cod, b, &arg.term, &fun.certs.union(&arg.certs));
    Ok(TermJudgment::new(ctx, term, ty, certs))
}

pub fn form_eq_type(lhs: &TermJudgment, rhs: &TermJudgment) -> Result<TermJudgment> {
    if !lhs.ty.alpha_eq(&rhs.ty) {
        return Err(NucleusError::TypeMismatch);
    }
    let ctx = lhs.ctx.join(&rhs.ctx)?;
    let term = Term::mk(TermKind::Eq(lhs.ty.clone(), lhs.term.clone(), rhs.term.clone()));
    Ok(TermJudgment::new(ctx, term, Term::ty(), lhs.certs.union(&rhs.certs)))
}

pub fn form_refl(t: &TermJudgment) -> TermJudgment {
    let term = Term::mk(TermKind::Refl(t.ty.clone(), t.term.clone()));
    let ty = Term::mk(TermKind::Eq(t.ty.clone(), t.term.clone(), t.term.clone()));
    TermJudgment::new(t.ctx.clone(), term, ty, t.certs.clone())
}

// ---------------------------------------------------------------------------
// Conversion and reflection

/// `Γ ⊢ t : A` and `Δ ⊢ A ≡ B` give `Γ ⋈ Δ ⊢ t : B`; the equation's assumptions are
/// recorded on both the term and the type.
pub fn convert(t: &TermJudgment, eq: &EqTypeJudgment) -> Result<TermJudgment> {
    let e = &eq.0;
    if !e.lhs.alpha_eq(&t.ty) {
        return Err(NucleusError::LhsMismatch);
    }
    let ctx = t.ctx.join(&e.ctx)?;
    let asm = e.assumptions();
    let certs = t.certs.union(&e.all_certs());
    Ok(TermJudgment::new(ctx, t.term.mention(&asm), e.rhs.mention(&asm), certs))
}

/// `Γ ⊢ p : s ≡_A t` gives `Γ ⊢ s ≡ t : A`.
pub fn reflect_term_eq(p: &TermJudgment) -> Result<EqTermJudgment> {
    let TermKind::Eq(a, s, t) = p.ty.kind() else {
        return Err(NucleusError::NotAnEquation);
    };
    let proof = Proof::new(Rule::Reflect(p.term.clone()), s.clone(), t.clone(), a.clone(), vec![]);
    Ok(EqTermJudgment::new(p.ctx.clone(), s.clone(), t.clone(), a.clone(), proof, p.certs.clone()))
}

/// `Γ ⊢ s ≡ t : A` gives the canonical witness `Γ ⊢ refl_A t : s ≡_A t`.
pub fn refl_of_eq(e: &EqTermJudgment) -> TermJudgment {
    let term = Term::mk(TermKind::Refl(e.ty.clone(), e.rhs.clone()));
    let natural = Term::mk(TermKind::Eq(e.ty.clone(), e.rhs.clone(), e.rhs.clone()));
    if e.lhs.alpha_eq(&e.rhs) {
        return TermJudgment::new(e.ctx.clone(), term, natural, e.certs.clone());
    }
    let target = Term::mk(TermKind::Eq(e.ty.clone(), e.lhs.clone(), e.rhs.clone()));
    let refl_ty = Proof::new(Rule::Refl, e.ty.clone(), e.ty.clone(), Term::ty(), vec![]);
    let sym = Proof::new(Rule::Sym, e.rhs.clone(), e.lhs.clone(), e.ty.clone(), vec![e.proof.clone()]);
    let refl_t = Proof::new(Rule::Refl, e.rhs.clone(), e.rhs.clone(), e.ty.clone(), vec![]);
    let cong = Proof::new(Rule::CongEq, natural, target.clone(), Term::ty(), vec![refl_ty, sym, refl_t]);
    let asm = cong.atoms().clone();
    let certs = e.certs.union(&CertSet::single(cong));
    TermJudgment::new(e.ctx.clone(), term.mention(&asm), target.mention(&asm), certs)
}

// ---------------------------------------------------------------------------
// Computation

/// `Γ ⊢ (λ (x : A . B) s) @{x : A . B} t : C` gives `Γ ⊢ … ≡ s[t/x] : B[t/x]`.
/// Only fires when the annotations of the abstraction and the application agree.
pub fn beta_witness(app: &TermJudgment) -> Result<EqTermJudgment> {
    let TermKind::Apply(head, b, dom, cod, arg) = app.term.kind() else {
        return Err(NucleusError::NotARedex("not an application"));
    };
    let TermKind::Lambda(lb, ldom, lcod, body) = head.kind() else {
        return Err(NucleusError::NotARedex("the head is not an abstraction"));
    };
    if !ldom.alpha_eq(dom) || !lcod.alpha_eq(cod) {
        return Err(NucleusError::NotARedex("annotations of the abstraction and the application differ"));
    }
    let (rhs, certs) = inst(body, lb, arg, &app.certs);
    let (ty, certs) = inst(cod, b, arg, &certs);
    let proof = Proof::new(Rule::Beta, app.term.clone(), rhs.clone(), ty.clone(), vec![]);
    Ok(EqTermJudgment::new(app.ctx.clone(), app.term.clone(), rhs, ty, proof, certs))
}

// ---------------------------------------------------------------------------
// Equality rules

pub fn eq_refl(t: &TermJudgment) -> EqTermJudgment {
    let proof = Proof::new(Rule::Refl, t.term.clone(), t.term.clone(), t.ty.clone(), vec![]);
    EqTermJudgment::new(t.ctx.clone(), t.term.clone(), t.term.clone(), t.ty.clone(), proof, t.certs.clone())
}

pub fn eq_sym(e: &EqTermJudgment) -> EqTermJudgment {
    let proof = Proof::new(Rule::Sym, e.rhs.clone(), e.lhs.clone(), e.ty.clone(), vec![e.proof.clone()]);
    EqTermJudgment::new(e.ctx.clone(), e.rhs.clone(), e.lhs.clone(), e.ty.clone(), proof, e.certs.clone())
}

pub fn eq_sym_type(e: &EqTypeJudgment) -> EqTypeJudgment {
    EqTypeJudgment(eq_sym(&e.0))
}

pub fn eq_trans(e1: &EqTermJudgment, e2: &EqTermJudgment) -> Result<EqTermJudgment> {
    if !e1.rhs.alpha_eq(&e2.lhs) {
        return Err(NucleusError::PremiseMismatch("middle terms differ"));
    }
    if !e1.ty.alpha_eq(&e2.ty) {
        return Err(NucleusError::PremiseMismatch("types differ"));
    }
    let ctx = e1.ctx.join(&e2.ctx)?;
    let proof = Proof::new(
        Rule::Trans,
        e1.lhs.clone(),
        e2.rhs.clone(),
        e1.ty.clone(),
        vec![e1.proof.clone(), e2.proof.clone()],
    );
    Ok(EqTermJudgment::new(ctx, e1.lhs.clone(), e2.rhs.clone(), e1.ty.clone(), proof, e1.certs.union(&e2.certs)))
}

pub fn eq_ty_conv(e: &EqTermJudgment, tyeq: &EqTypeJudgment) -> Result<EqTermJudgment> {
    if !tyeq.0.lhs.alpha_eq(&e.ty) {
        return Err(NucleusError::LhsMismatch);
    }
    let ctx = e.ctx.join(&tyeq.0.ctx)?;
    let ty = tyeq.0.rhs.clone();
    let proof = Proof::new(
        Rule::TyConv,
        e.lhs.clone(),
        e.rhs.clone(),
        ty.clone(),
        vec![e.proof.clone(), tyeq.0.proof.clone()],
    );
    Ok(EqTermJudgment::new(ctx, e.lhs.clone(), e.rhs.clone(), ty, proof, e.certs.union(&tyeq.0.certs)))
}

// ---------------------------------------------------------------------------
// Congruences

fn check_binder(xty: &Term, dom: &Term) -> Result<()> {
    if !xty.alpha_eq(dom) {
        return Err(NucleusError::PremiseMismatch("the binder has the wrong type"));
    }
    Ok(())
}

fn no_escape(x: &Atom, ctx: &Context) -> Result<()> {
    if ctx.contains(x.id()) {
        return Err(NucleusError::PremiseMismatch("the binder occurs outside the scope of the congruence"));
    }
    Ok(())
}

fn require_type(e: &EqTermJudgment) -> Result<()> {
    if !e.ty.is_type() {
        return Err(NucleusError::PremiseMismatch("expected an equation between types"));
    }
    Ok(())
}

/// From `A ≡ C` and `x : A ⊢ B ≡ D` derive `Π (x : A), B ≡ Π (x : C), D`.
pub fn cong_prod(x: &TermJudgment, dom: &EqTermJudgment, cod: &EqTermJudgment) -> Result<EqTypeJudgment> {
    require_type(dom)?;
    require_type(cod)?;
    let (x, xty, inner) = bind(x, &cod.ctx)?;
    let x = &x;
    check_binder(&xty, &dom.lhs)?;
    no_escape(x, &dom.ctx)?;
    let ctx = dom.ctx.join(&inner)?;
    let b = binder_of(x);
    let lhs = Term::mk(TermKind::Prod(b.clone(), dom.lhs.clone(), cod.lhs.abstract_atom(x.id(), 0)));
    let rhs = Term::mk(TermKind::Prod(b, dom.rhs.clone(), cod.rhs.abstract_atom(x.id(), 0)));
    let proof = Proof::new(
        Rule::CongProd(x.clone()),
        lhs.clone(),
        rhs.clone(),
        Term::ty(),
        vec![dom.proof.clone(), cod.proof.clone()],
    );
    Ok(EqTypeJudgment(EqTermJudgment::new(ctx, lhs, rhs, Term::ty(), proof, dom.certs.union(&cod.certs))))
}

/// From `A ≡ B`, `s ≡ u : A` and `t ≡ v : A` derive `(s ≡_A t) ≡ (u ≡_B v)`.
pub fn cong_eq(ty: &EqTermJudgment, l: &EqTermJudgment, r: &EqTermJudgment) -> Result<EqTypeJudgment> {
    require_type(ty)?;
    if !l.ty.alpha_eq(&ty.lhs) || !r.ty.alpha_eq(&ty.lhs) {
        return Err(NucleusError::PremiseMismatch("sides are not at the type of the equation"));
    }
    let ctx = join3(&ty.ctx, &l.ctx, &r.ctx)?;
    let lhs = Term::mk(TermKind::Eq(ty.lhs.clone(), l.lhs.clone(), r.lhs.clone()));
    let rhs = Term::mk(TermKind::Eq(ty.rhs.clone(), l.rhs.clone(), r.rhs.clone()));
    let proof = Proof::new(
        Rule::CongEq,
        lhs.clone(),
        rhs.clone(),
        Term::ty(),
        vec![ty.proof.clone(), l.proof.clone(), r.proof.clone()],
    );
    let certs = ty.certs.union(&l.certs).union(&r.certs);
    Ok(EqTypeJudgment(EqTermJudgment::new(ctx, lhs, rhs, Term::ty(), proof, certs)))
}

/// From `A ≡ C`, `x : A ⊢ B ≡ D` and `x : A ⊢ s ≡ t : B` derive
/// `λ (x : A . B) s ≡ λ (x : C . D) t : Π (x : A), B`.
pub fn cong_lambda(
    x: &TermJudgment,
    dom: &EqTermJudgment,
    cod: &EqTermJudgment,
    body: &EqTermJudgment,
) -> Result<EqTermJudgment> {
    require_type(dom)?;
    require_type(cod)?;
    let (x, xty, inner) = bind(x, &cod.ctx.join(&body.ctx)?)?;
    let x = &x;
    check_binder(&xty, &dom.lhs)?;
    if !body.ty.alpha_eq(&cod.lhs) {
        return Err(NucleusError::PremiseMismatch("the body is not at the codomain"));
    }
    no_escape(x, &dom.ctx)?;
    let ctx = dom.ctx.join(&inner)?;
    let b = binder_of(x);
    let lcod = cod.lhs.abstract_atom(x.id(), 0);
    let lhs = Term::mk(TermKind::Lambda(
        b.clone(),
        dom.lhs.clone(),
        lcod.clone(),
        body.lhs.abstract_atom(x.id(), 0),
    ));
    let rhs = Term::mk(TermKind::Lambda(
        b.clone(),
        dom.rhs.clone(),
        cod.rhs.abstract_atom(x.id(), 0),
        body.rhs.abstract_atom(x.id(), 0),
    ));
    let ty = Term::mk(TermKind::Prod(b, dom.lhs.clone(), lcod));
    let proof = Proof::new(
        Rule::CongAbs(x.clone()),
        lhs.clone(),
        rhs.clone(),
        ty.clone(),
        vec![dom.proof.clone(), cod.proof.clone(), body.proof.clone()],
    );
    let certs = dom.certs.union(&cod.certs).union(&body.certs);
    Ok(EqTermJudgment::new(ctx, lhs, rhs, ty, proof, certs))
}

/// From `s ≡ u : Π (x : A), B`, `A ≡ C`, `x : A ⊢ B ≡ D` and `t ≡ v : A` derive
/// `s @{x : A . B} t ≡ u @{x : C . D} v : B[t/x]`.
pub fn cong_app(
    x: &TermJudgment,
    head: &EqTermJudgment,
    dom: &EqTermJudgment,
    cod: &EqTermJudgment,
    arg: &EqTermJudgment,
) -> Result<EqTermJudgment> {
    require_type(dom)?;
    require_type(cod)?;
    let (x, xty, inner) = bind(x, &cod.ctx)?;
    let x = &x;
    check_binder(&xty, &dom.lhs)?;
    let TermKind::Prod(_, hdom, hcod) = head.ty.kind() else {
        return Err(NucleusError::PremiseMismatch("the head is not at a product type"));
    };
    let lcod = cod.lhs.abstract_atom(x.id(), 0);
    if !hdom.alpha_eq(&dom.lhs) || !hcod.alpha_eq(&lcod) {
        return Err(NucleusError::PremiseMismatch("the head type does not match the annotations"));
    }
    if !arg.ty.alpha_eq(&dom.lhs) {
        return Err(NucleusError::PremiseMismatch("the argument is not at the domain"));
    }
    let outer = join3(&head.ctx, &dom.ctx, &arg.ctx)?;
    no_escape(x, &outer)?;
    let ctx = outer.join(&inner)?;
    let b = binder_of(x);
    let lhs = Term::mk(TermKind::Apply(
        head.lhs.clone(),
        b.clone(),
        dom.lhs.clone(),
        lcod.clone(),
        arg.lhs.clone(),
    ));
    let rhs = Term::mk(TermKind::Apply(
        head.rhs.clone(),
        b.clone(),
        dom.rhs.clone(),
        cod.rhs.abstract_atom(x.id(), 0),
        arg.rhs.clone(),
    ));
    let certs = head.certs.union(&dom.certs).union(&cod.certs).union(&arg.certs);
    let (ty, certs) = inst(&lcod, &b, &arg.lhs, &certs);
    let proof = Proof::new(
        Rule::CongApp(x.clone()),
        lhs.clone(),
        rhs.clone(),
        ty.clone(),
        vec![head.proof.clone(), dom.proof.clone(), cod.proof.clone(), arg.proof.clone()],
    );
    Ok(EqTermJudgment::new(ctx, lhs, rhs, ty, proof, certs))
}

/// From `A ≡ B` and `s ≡ t : A` derive `refl_A s ≡ refl_B t : s ≡_A s`.
pub fn cong_refl(ty: &EqTermJudgment, t: &EqTermJudgment) -> Result<EqTermJudgment> {
    require_type(ty)?;
    if !t.ty.alpha_eq(&ty.lhs) {
        return Err(NucleusError::PremiseMismatch("the term is not at the type of the equation"));
    }
    let ctx = ty.ctx.join(&t.ctx)?;
    let lhs = Term::mk(TermKind::Refl(ty.lhs.clone(), t.lhs.clone()));
    let rhs = Term::mk(TermKind::Refl(ty.rhs.clone(), t.rhs.clone()));
    let eqty = Term::mk(TermKind::Eq(ty.lhs.clone(), t.lhs.clone(), t.lhs.clone()));
    let proof = Proof::new(
        Rule::CongRefl,
        lhs.clone(),
        rhs.clone(),
        eqty.clone(),
        vec![ty.proof.clone(), t.proof.clone()],
    );
    Ok(EqTermJudgment::new(ctx, lhs, rhs, eqty, proof, ty.certs.union(&t.certs)))
}

// ---------------------------------------------------------------------------
// Natural types and inversion

/// The type read off the annotations of a term, with certificates for it.
fn natural_type(sig: &Signature, ctx: &Context, t: &Term, certs: &CertSet) -> Result<(Term, CertSet)> {
    Ok(match t.kind() {
        TermKind::Type | TermKind::Prod(..) | TermKind::Eq(..) => (Term::ty(), certs.clone()),
        TermKind::Atom(a) => (binder_type(ctx, a)?, certs.clone()),
        TermKind::Constant(c) => {
            let d = sig.lookup(c).ok_or_else(|| NucleusError::UnknownConstant(c.to_string()))?;
            (d.ty.clone(), certs.clone())
        }
        TermKind::Bound(_) => unreachable!("judgments are locally closed"),
        TermKind::Lambda(b, a, c, _) => (Term::mk(TermKind::Prod(b.clone(), a.clone(), c.clone())), certs.clone()),
        TermKind::Apply(_, b, _, c, arg) => inst(c, b, arg, certs),
        TermKind::Refl(a, s) => (Term::mk(TermKind::Eq(a.clone(), s.clone(), s.clone())), certs.clone()),
    })
}

/// `Γ ⊢ t : A` gives `Γ ⊢ A ≡ ⌜t⌝ : Type`.
pub fn natural_type_eq(sig: &Signature, t: &TermJudgment) -> Result<EqTypeJudgment> {
    let (nat, certs) = natural_type(sig, &t.ctx, &t.term, &t.certs)?;
    let rule = if nat.alpha_eq(&t.ty) { Rule::Refl } else { Rule::Uniq(t.term.clone()) };
    let proof = Proof::new(rule, t.ty.clone(), nat.clone(), Term::ty(), vec![]);
    Ok(EqTypeJudgment(EqTermJudgment::new(t.ctx.clone(), t.ty.clone(), nat, Term::ty(), proof, certs)))
}

/// Decomposition of a term judgment into derivable sub-judgments.
#[derive(Clone, Debug)]
pub enum InversionView {
    Type,
    Atom(TermJudgment),
    Constant(super::atom::Name),
    Prod(Atom, TermJudgment, TermJudgment),
    Lambda(Atom, TermJudgment, TermJudgment),
    App(TermJudgment, TermJudgment),
    Eq(TermJudgment, TermJudgment, TermJudgment),
    Refl(TermJudgment),
}

impl TermJudgment {
    fn sub(&self, term: &Term, ty: &Term) -> TermJudgment {
        let asm = term.assumptions().union(ty.assumptions());
        TermJudgment::new(self.ctx.restrict(&asm), term.clone(), ty.clone(), self.certs.clone())
    }

    /// Opens a binder with a fresh atom of type `dom`, returning the atom, the
    /// context for the body and the certificates rewritten for the new atom.
    fn open_binder(&self, b: &Binder, dom: &Term, asm: &AtomSet) -> (Atom, Context, CertSet, Term) {
        let y = Atom::fresh(&b.name);
        let ctx = self.ctx.restrict(&asm.union(dom.assumptions())).extend(y.clone(), dom.clone());
        let yt = Term::atom(&y);
        let certs = if b.atom != 0 { self.certs.with_subst(b.atom, &yt) } else { self.certs.clone() };
        (y, ctx, certs, yt)
    }
}

pub fn invert(t: &TermJudgment) -> InversionView {
    match t.term.kind() {
        TermKind::Type => InversionView::Type,
        TermKind::Atom(a) => {
            let ty = t.ctx.get(a.id()).map(|e| e.ty.clone()).expect("atom in context");
            InversionView::Atom(t.sub(&Term::atom(a), &ty))
        }
        TermKind::Constant(c) => InversionView::Constant(c.clone()),
        TermKind::Bound(_) => unreachable!("judgments are locally closed"),
        TermKind::Prod(b, dom, cod) => {
            let (y, ctx, certs, yt) = t.open_binder(b, dom, cod.assumptions());
            let c = cod.instantiate(0, &yt);
            InversionView::Prod(
                y,
                t.sub(dom, &Term::ty()),
                TermJudgment::new(ctx, c, Term::ty(), certs),
            )
        }
        TermKind::Lambda(b, dom, cod, body) => {
            let (y, ctx, certs, yt) =
                t.open_binder(b, dom, &cod.assumptions().union(body.assumptions()));
            InversionView::Lambda(
                y,
                t.sub(dom, &Term::ty()),
                TermJudgment::new(ctx, body.instantiate(0, &yt), cod.instantiate(0, &yt), certs),
            )
        }
        TermKind::Apply(h, b, dom, cod, arg) => {
            let fty = Term::mk(TermKind::Prod(b.clone(), dom.clone(), cod.clone()));
            InversionView::App(t.sub(h, &fty), t.sub(arg, dom))
        }
        TermKind::Eq(a, s, u) => InversionView::Eq(t.sub(a, &Term::ty()), t.sub(s, a), t.sub(u, a)),
        TermKind::Refl(a, s) => InversionView::Refl(t.sub(s, a)),
    }
}

// ---------------------------------------------------------------------------
// Substitution and queries

/// Replaces the hypothesis `x` by `value` everywhere in `target`.
pub fn substitute(target: &TermJudgment, x: &Atom, value: &TermJudgment) -> Result<TermJudgment> {
    let ty = binder_type(&target.ctx, x)?;
    if !ty.alpha_eq(&value.ty) {
        return Err(NucleusError::TypeMismatch);
    }
    let v = &value.term;
    let ctx = target.ctx.subst(x.id(), v).join(&value.ctx)?;
    ctx.topological()?;
    let certs = target.certs.with_subst(x.id(), v).union(&value.certs);
    Ok(TermJudgment::new(ctx, target.term.subst_atom(x.id(), v), target.ty.subst_atom(x.id(), v), certs))
}

/// The type of the atom `x` if it is a hypothesis of `t`.
pub fn occurs(x: &TermJudgment, t: &TermJudgment) -> Result<Option<TermJudgment>> {
    let a = x.as_atom().ok_or(NucleusError::NotAnAtom)?;
    Ok(t.ctx.get(a.id()).map(|e| {
        TermJudgment::new(t.ctx.restrict(e.deps()), e.ty.clone(), Term::ty(), t.certs.clone())
    }))
}

/// The hypotheses of `t` as atom judgments, each preceded by its dependencies.
pub fn context_of(t: &TermJudgment) -> Vec<TermJudgment> {
    let order = t.ctx.topological().expect("contexts are acyclic");
    order
        .into_iter()
        .map(|e| {
            let ctx = t.ctx.restrict(&AtomSet::singleton(e.atom.id()));
            TermJudgment::new(ctx, Term::atom(&e.atom), e.ty.clone(), t.certs.clone())
        })
        .collect()
}

/// Syntactic identity of subjects and types up to bound-variable names.
pub fn alpha_equal(a: &TermJudgment, b: &TermJudgment) -> bool {
    a.term.alpha_eq(&b.term) && a.ty.alpha_eq(&b.ty)
}

/// The hypothesis `x` of `t` as the judgment `Γ ⊢ x : A`.
pub fn hypothesis(t: &TermJudgment, x: &Atom) -> Option<TermJudgment> {
    let e = t.ctx.get(x.id())?;
    let ctx = t.ctx.restrict(&AtomSet::singleton(x.id()));
    Some(TermJudgment::new(ctx, Term::atom(x), e.ty.clone(), t.certs.clone()))
}

/// `Γ ⊢ s ≡ t : A` gives `Γ ⊢ s : A`.
pub fn eq_lhs(e: &EqTermJudgment) -> TermJudgment {
    TermJudgment::new(e.ctx.clone(), e.lhs.clone(), e.ty.clone(), e.all_certs())
}

/// `Γ ⊢ s ≡ t : A` gives `Γ ⊢ t : A`.
pub fn eq_rhs(e: &EqTermJudgment) -> TermJudgment {
    TermJudgment::new(e.ctx.clone(), e.rhs.clone(), e.ty.clone(), e.all_certs())
}
