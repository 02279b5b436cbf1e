//! Random judgments over a small signature, shared by the property suites and
//! the acceptance target.

#![allow(dead_code)]

pub mod stlc;

use andromeda::nucleus::json::{export_eq, export_term};
use andromeda::nucleus::*;
use andromeda::oracle::check_export;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// `A B : Type`, `P : A → Type`, `a b : A`, `f : A → A`, `g : A → A → A`, `c : B`, `h : A → B`.
pub fn signature() -> Signature {
    let mut sig = sig_empty();
    let add = |sig: &mut Signature, n: &str, ty: &TermJudgment| *sig = sig_add_constant(sig, n, ty).unwrap();
    add(&mut sig, "A", &form_type());
    add(&mut sig, "B", &form_type());
    let a = form_constant(&sig, "A").unwrap();
    let b = form_constant(&sig, "B").unwrap();
    let arrow = |d: &TermJudgment, c: &TermJudgment| form_prod(&fresh_atom(d, "z").unwrap(), c).unwrap();
    add(&mut sig, "P", &arrow(&a, &form_type()));
    add(&mut sig, "a", &a);
    add(&mut sig, "b", &a);
    add(&mut sig, "f", &arrow(&a, &a));
    add(&mut sig, "g", &arrow(&a, &arrow(&a, &a)));
    add(&mut sig, "c", &b);
    add(&mut sig, "h", &arrow(&a, &b));
    sig
}

pub fn constant(sig: &Signature, n: &str) -> TermJudgment {
    form_constant(sig, n).unwrap()
}

/// A pool of judgments grown by random nucleus steps. Failed steps are skipped.
pub struct Builder<'a> {
    pub sig: &'a Signature,
    pub terms: Vec<TermJudgment>,
    pub eqs: Vec<EqTermJudgment>,
}

const NAMES: [&str; 5] = ["x", "y", "z", "u", "v"];

impl<'a> Builder<'a> {
    pub fn new(sig: &'a Signature) -> Builder<'a> {
        let mut terms = vec![form_type()];
        for c in ["A", "B", "P", "a", "b", "f", "g", "c", "h"] {
            terms.push(constant(sig, c));
        }
        Builder { sig, terms, eqs: Vec::new() }
    }

    fn pick<'b, T>(&self, rng: &mut StdRng, xs: &'b [T]) -> Option<&'b T> {
        xs.choose(rng)
    }

    fn types(&self) -> Vec<TermJudgment> {
        self.terms.iter().filter(|t| t.ty().is_type()).cloned().collect()
    }

    fn atoms(&self) -> Vec<TermJudgment> {
        self.terms.iter().filter(|t| t.as_atom().is_some()).cloned().collect()
    }

    /// A term of type `ty` from the pool, or a fresh atom of it.
    fn of_type(&self, rng: &mut StdRng, ty: &TermJudgment) -> TermJudgment {
        let found: Vec<_> = self.terms.iter().filter(|t| t.ty().alpha_eq(ty.term())).collect();
        match found.choose(rng) {
            Some(t) if rng.gen_bool(0.7) => (*t).clone(),
            _ => fresh_atom(ty, NAMES.choose(rng).unwrap()).unwrap(),
        }
    }

    /// One random step. Returns whether the pool grew.
    pub fn step(&mut self, rng: &mut StdRng) -> bool {
        let r = self.try_step(rng);
        match r {
            Some(Ok(Grown::Term(t))) => {
                self.terms.push(t);
                true
            }
            Some(Ok(Grown::Eq(e))) => {
                self.eqs.push(e);
                true
            }
            _ => false,
        }
    }

    fn try_step(&mut self, rng: &mut StdRng) -> Option<Result<Grown>> {
        let t = |j: TermJudgment| Ok(Grown::Term(j));
        let e = |j: EqTermJudgment| Ok(Grown::Eq(j));
        Some(match rng.gen_range(0..16) {
            0 | 1 => {
                let ty = self.pick(rng, &self.types())?.clone();
                t(fresh_atom(&ty, NAMES.choose(rng).unwrap()).ok()?)
            }
            2 => {
                let x = self.pick(rng, &self.atoms())?.clone();
                let b = self.pick(rng, &self.types())?.clone();
                form_prod(&x, &b).map(Grown::Term)
            }
            3 | 4 => {
                let x = self.pick(rng, &self.atoms())?.clone();
                let b = self.pick(rng, &self.terms)?.clone();
                form_lambda(&x, &b).map(Grown::Term)
            }
            5 | 6 => {
                let fs: Vec<_> = self.terms.iter().filter(|t| matches!(t.ty().kind(), TermKind::Prod(..))).cloned().collect();
                let f = self.pick(rng, &fs)?.clone();
                let InversionView::Prod(_, dom, _) = invert(&f.type_of()) else { return None };
                let a = self.of_type(rng, &dom);
                form_app(&f, &a).map(Grown::Term)
            }
            7 => {
                let s = self.pick(rng, &self.terms)?.clone();
                let u = self.of_type(rng, &s.type_of());
                form_eq_type(&s, &u).map(Grown::Term)
            }
            8 => t(form_refl(self.pick(rng, &self.terms)?)),
            9 => {
                let q = self.pick(rng, &self.eqs)?.as_type_eq()?;
                let s = self.of_type(rng, &eq_lhs(q.as_term_eq()));
                convert(&s, &q).map(Grown::Term)
            }
            10 => {
                let hs: Vec<_> = self.terms.iter().filter(|t| matches!(t.ty().kind(), TermKind::Eq(..))).cloned().collect();
                reflect_term_eq(self.pick(rng, &hs)?).map(Grown::Eq)
            }
            11 => {
                let s = self.pick(rng, &self.terms)?.clone();
                match rng.gen_range(0..3) {
                    0 => e(eq_refl(&s)),
                    1 => beta_witness(&s).map(Grown::Eq),
                    _ => natural_type_eq(self.sig, &s).map(|q| Grown::Eq(q.as_term_eq().clone())),
                }
            }
            12 => {
                let p = self.pick(rng, &self.eqs)?.clone();
                if rng.gen_bool(0.5) {
                    e(eq_sym(&p))
                } else {
                    let q = self.pick(rng, &self.eqs)?.clone();
                    eq_trans(&p, &q).map(Grown::Eq)
                }
            }
            13 => {
                let target = self.pick(rng, &self.terms)?.clone();
                let atoms: Vec<_> = target.context().entries().map(|en| en.atom.clone()).collect();
                let x = atoms.choose(rng)?.clone();
                let xty = hypothesis(&target, &x)?.type_of();
                let v = self.of_type(rng, &xty);
                substitute(&target, &x, &v).map(Grown::Term)
            }
            14 => {
                let p = self.pick(rng, &self.eqs)?.clone();
                t(refl_of_eq(&p))
            }
            _ => {
                // Congruence of application along an equation between functions.
                let fs: Vec<_> = self.eqs.iter().filter(|e| matches!(e.ty().kind(), TermKind::Prod(..))).cloned().collect();
                let head = self.pick(rng, &fs)?.clone();
                let fty = eq_lhs(&head).type_of();
                let InversionView::Prod(y, dom, cod) = invert(&fty) else { return None };
                let a = self.of_type(rng, &dom);
                let w = hypothesis(&cod, &y).unwrap_or(fresh_atom(&dom, "w").ok()?);
                cong_app(&w, &head, &eq_refl(&dom), &eq_refl(&cod), &eq_refl(&a)).map(Grown::Eq)
            }
        })
    }

    /// Every judgment in the pool passes the independent checker.
    pub fn check_all(&self) -> std::result::Result<(), String> {
        for t in &self.terms {
            check_export(&export_term(self.sig, t)).map_err(|e| format!("{}: {e}", print_judgment(t)))?;
        }
        for q in &self.eqs {
            check_export(&export_eq(self.sig, q)).map_err(|e| format!("{}: {e}", print_judgment(&refl_of_eq(q))))?;
        }
        Ok(())
    }
}

enum Grown {
    Term(TermJudgment),
    Eq(EqTermJudgment),
}

/// Grows a pool with `steps` random steps.
pub fn construction<'a>(sig: &'a Signature, rng: &mut StdRng, steps: usize) -> Builder<'a> {
    let mut b = Builder::new(sig);
    for _ in 0..steps {
        b.step(rng);
    }
    b
}

/// Contexts of random judgments from one pool grown by `steps` steps, mostly nonempty ones.
pub fn random_contexts(sig: &Signature, rng: &mut StdRng, steps: usize, n: usize) -> Vec<Context> {
    let b = construction(sig, rng, steps);
    let open: Vec<_> = b.terms.iter().filter(|t| !t.context().domain().is_empty()).collect();
    (0..n)
        .map(|_| match open.choose(rng) {
            Some(t) if rng.gen_bool(0.8) => t.context().clone(),
            _ => b.terms.choose(rng).unwrap().context().clone(),
        })
        .collect()
}

/// Checks idempotence, commutativity and associativity of context joins.
/// Returns `Ok(false)` when the triple is not pairwise joinable.
pub fn join_laws(a: &Context, b: &Context, c: &Context) -> std::result::Result<bool, String> {
    let (Ok(ab), Ok(bc), Ok(_)) = (a.join(b), b.join(c), a.join(c)) else { return Ok(false) };
    for x in [a, b, c] {
        if !x.join(x).map_err(|e| e.to_string())?.graph_eq(x) {
            return Err("join is not idempotent".into());
        }
    }
    let ba = b.join(a).map_err(|e| format!("join is not commutative: {e}"))?;
    if !ab.graph_eq(&ba) {
        return Err("join is not commutative".into());
    }
    match (ab.join(c), a.join(&bc)) {
        (Ok(l), Ok(r)) if l.graph_eq(&r) => {}
        (Err(_), Err(_)) => return Ok(false),
        _ => return Err("join is not associative".into()),
    }
    if !a.domain().is_subset(&ab.domain()) || !b.domain().is_subset(&ab.domain()) {
        return Err("join is not an upper bound".into());
    }
    Ok(true)
}

/// Inverts an application, abstraction or product, rebuilds it and converts it
/// back to the original type. Returns `Ok(false)` for other judgments.
pub fn inversion_round_trip(sig: &Signature, j: &TermJudgment) -> std::result::Result<bool, String> {
    let binder = |x: &Atom, dom: &TermJudgment, body: &TermJudgment| {
        hypothesis(body, x).map_or_else(|| fresh_atom(dom, x.name()), Ok)
    };
    let rebuilt = match invert(j) {
        InversionView::App(h, a) => form_app(&h, &a),
        InversionView::Lambda(x, dom, body) => binder(&x, &dom, &body).and_then(|x| form_lambda(&x, &body)),
        InversionView::Prod(x, dom, cod) => binder(&x, &dom, &cod).and_then(|x| form_prod(&x, &cod)),
        _ => return Ok(false),
    };
    let r = rebuilt.map_err(|e| format!("cannot rebuild {}: {e}", print_judgment(j)))?;
    let r = if r.ty().alpha_eq(j.ty()) {
        r
    } else {
        let q = natural_type_eq(sig, j).map_err(|e| e.to_string())?;
        convert(&r, &eq_sym_type(&q)).map_err(|e| format!("cannot convert {}: {e}", print_judgment(&r)))?
    };
    if r.term().alpha_eq(j.term()) && r.ty().alpha_eq(j.ty()) {
        Ok(true)
    } else {
        Err(format!("{} rebuilt as {}", print_judgment(j), print_judgment(&r)))
    }
}

/// Judgments of random construction sequences that are applications, abstractions or products.
pub fn random_compound(sig: &Signature, rng: &mut StdRng) -> Vec<TermJudgment> {
    let b = construction(sig, rng, 16);
    b.terms
        .into_iter()
        .filter(|t| matches!(t.term().kind(), TermKind::Apply(..) | TermKind::Lambda(..) | TermKind::Prod(..)))
        .collect()
}
