//! A simply typed λ-calculus over one base type, with its own βη-normalizer.
//! It shares no code with the nucleus and serves as the equality oracle.

use andromeda::nucleus::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    A,
    Arr(Box<Ty>, Box<Ty>),
}

pub fn arr(d: Ty, c: Ty) -> Ty {
    Ty::Arr(Box::new(d), Box::new(c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tm {
    Var(usize),
    Const(&'static str),
    Lam(Ty, Box<Tm>),
    App(Box<Tm>, Box<Tm>),
}

pub const CONSTANTS: &str = "constant A : Type\nconstant a b : A\nconstant f : A → A\nconstant g : A → A → A\n";

fn const_ty(c: &str) -> Ty {
    match c {
        "a" | "b" => Ty::A,
        "f" => arr(Ty::A, Ty::A),
        _ => arr(Ty::A, arr(Ty::A, Ty::A)),
    }
}

fn lam(d: Ty, b: Tm) -> Tm {
    Tm::Lam(d, Box::new(b))
}

fn app(f: Tm, a: Tm) -> Tm {
    Tm::App(Box::new(f), Box::new(a))
}

/// Adds `by` to every index at or above `from`.
fn shift(t: &Tm, by: usize, from: usize) -> Tm {
    match t {
        Tm::Var(i) if *i >= from => Tm::Var(i + by),
        Tm::Var(_) | Tm::Const(_) => t.clone(),
        Tm::Lam(d, b) => lam(d.clone(), shift(b, by, from + 1)),
        Tm::App(f, a) => app(shift(f, by, from), shift(a, by, from)),
    }
}

/// `t[k := v]`, lowering the indices above `k`.
fn subst(t: &Tm, k: usize, v: &Tm) -> Tm {
    match t {
        Tm::Var(i) if *i == k => shift(v, k, 0),
        Tm::Var(i) if *i > k => Tm::Var(i - 1),
        Tm::Var(_) | Tm::Const(_) => t.clone(),
        Tm::Lam(d, b) => lam(d.clone(), subst(b, k + 1, v)),
        Tm::App(f, a) => app(subst(f, k, v), subst(a, k, v)),
    }
}

pub struct Normalizer {
    pub fuel: usize,
}

impl Normalizer {
    fn burn(&mut self) -> Option<()> {
        self.fuel = self.fuel.checked_sub(1)?;
        Some(())
    }

    /// Weak head normal form by leftmost β-reduction.
    fn whnf(&mut self, t: &Tm) -> Option<Tm> {
        let mut t = t.clone();
        loop {
            let mut spine = Vec::new();
            let mut h = t.clone();
            while let Tm::App(f, a) = h {
                spine.push(*a);
                h = *f;
            }
            match (h, spine.pop()) {
                (Tm::Lam(_, b), Some(a)) => {
                    self.burn()?;
                    let mut r = subst(&b, 0, &a);
                    while let Some(a) = spine.pop() {
                        r = app(r, a);
                    }
                    t = r;
                }
                _ => return Some(t),
            }
        }
    }

    /// η-long β-normal form of `t : ty` in a context of types (innermost first).
    pub fn long(&mut self, ctx: &mut Vec<Ty>, t: &Tm, ty: &Ty) -> Option<Tm> {
        if let Ty::Arr(d, c) = ty {
            ctx.insert(0, (**d).clone());
            let body = self.long(ctx, &app(shift(t, 1, 0), Tm::Var(0)), c);
            ctx.remove(0);
            return Some(lam((**d).clone(), body?));
        }
        let t = self.whnf(t)?;
        let mut args = Vec::new();
        let mut h = t;
        while let Tm::App(f, a) = h {
            args.push(*a);
            h = *f;
        }
        args.reverse();
        let mut hty = match &h {
            Tm::Var(i) => ctx[*i].clone(),
            Tm::Const(c) => const_ty(c),
            _ => return None,
        };
        let mut out = h;
        for a in args {
            let Ty::Arr(d, c) = hty else { return None };
            out = app(out, self.long(ctx, &a, &d)?);
            hty = *c;
        }
        Some(out)
    }
}

/// Decides `s ≡ t : ty` when the fuel suffices.
pub fn oracle_equal(s: &Tm, t: &Tm, ty: &Ty, fuel: usize) -> Option<bool> {
    let mut n = Normalizer { fuel };
    let a = n.long(&mut Vec::new(), s, ty)?;
    let b = n.long(&mut Vec::new(), t, ty)?;
    Some(a == b)
}

pub fn depth(t: &Tm) -> usize {
    match t {
        Tm::Var(_) | Tm::Const(_) => 0,
        Tm::Lam(_, b) => 1 + depth(b),
        Tm::App(f, a) => 1 + depth(f).max(depth(a)),
    }
}

pub fn random_ty(rng: &mut StdRng, depth: usize) -> Ty {
    if depth == 0 || rng.gen_bool(0.5) {
        Ty::A
    } else {
        arr(random_ty(rng, depth - 1), random_ty(rng, depth - 1))
    }
}

/// A random term of type `ty` in `ctx`, of depth at most `depth`.
pub fn random_tm(rng: &mut StdRng, ctx: &mut Vec<Ty>, ty: &Ty, depth: usize) -> Tm {
    if let Ty::Arr(d, c) = ty {
        if depth == 0 || rng.gen_bool(0.6) {
            ctx.insert(0, (**d).clone());
            let b = random_tm(rng, ctx, c, depth.saturating_sub(1));
            ctx.remove(0);
            return lam((**d).clone(), b);
        }
    }
    // A head of some type `D₁ → … → Dₙ → ty`, applied to random arguments.
    let mut heads: Vec<(Tm, Vec<Ty>)> = Vec::new();
    let mut consider = |h: Tm, mut hty: Ty| {
        let mut args = Vec::new();
        loop {
            if &hty == ty {
                heads.push((h.clone(), args.clone()));
            }
            match hty {
                Ty::Arr(d, c) => {
                    args.push(*d);
                    hty = *c;
                }
                Ty::A => break,
            }
        }
    };
    for (i, t) in ctx.iter().enumerate() {
        consider(Tm::Var(i), t.clone());
    }
    for c in ["a", "b", "f", "g"] {
        consider(Tm::Const(c), const_ty(c));
    }
    if depth > 0 && rng.gen_bool(0.25) {
        // A β-redex.
        let d = random_ty(rng, 1);
        ctx.insert(0, d.clone());
        let b = random_tm(rng, ctx, ty, depth - 1);
        ctx.remove(0);
        let a = random_tm(rng, ctx, &d, depth - 1);
        return app(lam(d, b), a);
    }
    let usable: Vec<_> = heads.iter().filter(|(_, args)| depth > 0 || args.is_empty()).collect();
    let Some((h, args)) = usable.choose(rng).map(|x| (*x).clone()) else {
        // Only functions of the right type are around: abstract instead.
        let Ty::Arr(d, c) = ty else { unreachable!("a constant of the base type always exists") };
        ctx.insert(0, (**d).clone());
        let b = random_tm(rng, ctx, c, 0);
        ctx.remove(0);
        return lam((**d).clone(), b);
    };
    let mut t = h;
    for d in &args {
        t = app(t, random_tm(rng, ctx, d, depth - 1));
    }
    t
}

/// A term βη-equal to `t : ty`, obtained by random expansions.
pub fn expand(rng: &mut StdRng, ctx: &mut Vec<Ty>, t: &Tm, ty: &Ty) -> Tm {
    let roll = rng.gen_range(0..6);
    match (roll, ty) {
        (0, Ty::Arr(d, _)) => lam((**d).clone(), app(shift(t, 1, 0), Tm::Var(0))),
        (1, _) => {
            let d = random_ty(rng, 1);
            let a = random_tm(rng, ctx, &d, 1);
            app(lam(d, shift(t, 1, 0)), a)
        }
        _ => match t {
            Tm::Lam(d, b) => {
                let Ty::Arr(_, c) = ty else { return t.clone() };
                ctx.insert(0, d.clone());
                let b = expand(rng, ctx, b, c);
                ctx.remove(0);
                lam(d.clone(), b)
            }
            Tm::App(f, a) => match infer(ctx, f) {
                Some(fty @ Ty::Arr(..)) => {
                    let Ty::Arr(d, _) = &fty else { unreachable!() };
                    if rng.gen_bool(0.5) {
                        app(expand(rng, ctx, f, &fty), (**a).clone())
                    } else {
                        app((**f).clone(), expand(rng, ctx, a, d))
                    }
                }
                _ => t.clone(),
            },
            _ => t.clone(),
        },
    }
}

pub fn infer(ctx: &mut Vec<Ty>, t: &Tm) -> Option<Ty> {
    match t {
        Tm::Var(i) => ctx.get(*i).cloned(),
        Tm::Const(c) => Some(const_ty(c)),
        Tm::Lam(d, b) => {
            ctx.insert(0, d.clone());
            let c = infer(ctx, b);
            ctx.remove(0);
            Some(arr(d.clone(), c?))
        }
        Tm::App(f, a) => match infer(ctx, f)? {
            Ty::Arr(d, c) if infer(ctx, a)? == *d => Some(*c),
            _ => None,
        },
    }
}

pub fn type_judgment(sig: &Signature, ty: &Ty) -> TermJudgment {
    match ty {
        Ty::A => form_constant(sig, "A").unwrap(),
        Ty::Arr(d, c) => {
            let x = fresh_atom(&type_judgment(sig, d), "z").unwrap();
            form_prod(&x, &type_judgment(sig, c)).unwrap()
        }
    }
}

/// The nucleus judgment for a closed term, with binders as fresh atoms.
pub fn judgment(sig: &Signature, env: &mut Vec<TermJudgment>, t: &Tm) -> TermJudgment {
    match t {
        Tm::Var(i) => env[*i].clone(),
        Tm::Const(c) => form_constant(sig, c).unwrap(),
        Tm::Lam(d, b) => {
            let x = fresh_atom(&type_judgment(sig, d), "x").unwrap();
            env.insert(0, x.clone());
            let body = judgment(sig, env, b);
            env.remove(0);
            form_lambda(&x, &body).unwrap()
        }
        Tm::App(f, a) => form_app(&judgment(sig, env, f), &judgment(sig, env, a)).unwrap(),
    }
}
