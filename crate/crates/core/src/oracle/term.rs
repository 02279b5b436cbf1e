//! The checker's own term representation, read from exported JSON.

use serde_json::Value;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

#[derive(Debug)]
pub enum Kind {
    Type,
    Atom(u64),
    Const(String),
    Bound(usize),
    Prod(u64, T, T),
    Lambda(u64, T, T, T),
    App(T, u64, T, T, T),
    Eq(T, T, T),
    Refl(T, T),
}

#[derive(Debug)]
pub struct Node {
    pub kind: Kind,
    hash: u64,
    /// Largest loose de Bruijn index plus one.
    loose: usize,
    has_atoms: bool,
}

/// Terms compare structurally; binder metadata does not take part.
#[derive(Clone, Debug)]
pub struct T(Rc<Node>);

impl T {
    pub fn new(kind: Kind) -> T {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        let (loose, has_atoms) = match &kind {
            Kind::Type => {
                0u8.hash(&mut h);
                (0, false)
            }
            Kind::Atom(a) => {
                1u8.hash(&mut h);
                a.hash(&mut h);
                (0, true)
            }
            Kind::Const(c) => {
                2u8.hash(&mut h);
                c.hash(&mut h);
                (0, false)
            }
            Kind::Bound(k) => {
                3u8.hash(&mut h);
                k.hash(&mut h);
                (k + 1, false)
            }
            Kind::Prod(_, a, b) => {
                4u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
                (a.0.loose.max(b.0.loose.saturating_sub(1)), a.0.has_atoms || b.0.has_atoms)
            }
            Kind::Lambda(_, a, b, t) => {
                5u8.hash(&mut h);
                for x in [a, b, t] {
                    x.0.hash.hash(&mut h);
                }
                (
                    a.0.loose.max(b.0.loose.saturating_sub(1)).max(t.0.loose.saturating_sub(1)),
                    a.0.has_atoms || b.0.has_atoms || t.0.has_atoms,
                )
            }
            Kind::App(f, _, a, b, t) => {
                6u8.hash(&mut h);
                for x in [f, a, b, t] {
                    x.0.hash.hash(&mut h);
                }
                (
                    f.0.loose.max(a.0.loose).max(b.0.loose.saturating_sub(1)).max(t.0.loose),
                    f.0.has_atoms || a.0.has_atoms || b.0.has_atoms || t.0.has_atoms,
                )
            }
            Kind::Eq(a, s, t) => {
                7u8.hash(&mut h);
                for x in [a, s, t] {
                    x.0.hash.hash(&mut h);
                }
                (a.0.loose.max(s.0.loose).max(t.0.loose), a.0.has_atoms || s.0.has_atoms || t.0.has_atoms)
            }
            Kind::Refl(a, t) => {
                8u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                t.0.hash.hash(&mut h);
                (a.0.loose.max(t.0.loose), a.0.has_atoms || t.0.has_atoms)
            }
        };
        T(Rc::new(Node { kind, hash: h.finish(), loose, has_atoms }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn ty() -> T {
        T::new(Kind::Type)
    }

    pub fn atom(a: u64) -> T {
        T::new(Kind::Atom(a))
    }

    pub fn is_type(&self) -> bool {
        matches!(self.0.kind, Kind::Type)
    }

    pub fn is_closed(&self) -> bool {
        self.0.loose == 0
    }

    /// Replaces the loose index `k` by the closed term `v`.
    pub fn inst(&self, k: usize, v: &T) -> T {
        if self.0.loose <= k {
            return self.clone();
        }
        match &self.0.kind {
            Kind::Bound(i) if *i == k => v.clone(),
            Kind::Type | Kind::Atom(_) | Kind::Const(_) | Kind::Bound(_) => self.clone(),
            Kind::Prod(m, a, b) => T::new(Kind::Prod(*m, a.inst(k, v), b.inst(k + 1, v))),
            Kind::Lambda(m, a, b, t) => T::new(Kind::Lambda(*m, a.inst(k, v), b.inst(k + 1, v), t.inst(k + 1, v))),
            Kind::App(f, m, a, b, t) => {
                T::new(Kind::App(f.inst(k, v), *m, a.inst(k, v), b.inst(k + 1, v), t.inst(k, v)))
            }
            Kind::Eq(a, s, t) => T::new(Kind::Eq(a.inst(k, v), s.inst(k, v), t.inst(k, v))),
            Kind::Refl(a, t) => T::new(Kind::Refl(a.inst(k, v), t.inst(k, v))),
        }
    }

    pub fn open(&self, atom: u64) -> T {
        self.inst(0, &T::atom(atom))
    }

    /// Renames atom `from` to `to`.
    pub fn rename(&self, from: u64, to: u64) -> T {
        if !self.0.has_atoms {
            return self.clone();
        }
        match &self.0.kind {
            Kind::Atom(a) if *a == from => T::atom(to),
            Kind::Type | Kind::Atom(_) | Kind::Const(_) | Kind::Bound(_) => self.clone(),
            Kind::Prod(m, a, b) => T::new(Kind::Prod(*m, a.rename(from, to), b.rename(from, to))),
            Kind::Lambda(m, a, b, t) => {
                T::new(Kind::Lambda(*m, a.rename(from, to), b.rename(from, to), t.rename(from, to)))
            }
            Kind::App(f, m, a, b, t) => T::new(Kind::App(
                f.rename(from, to),
                *m,
                a.rename(from, to),
                b.rename(from, to),
                t.rename(from, to),
            )),
            Kind::Eq(a, s, t) => T::new(Kind::Eq(a.rename(from, to), s.rename(from, to), t.rename(from, to))),
            Kind::Refl(a, t) => T::new(Kind::Refl(a.rename(from, to), t.rename(from, to))),
        }
    }

    pub fn atoms(&self, out: &mut Vec<u64>) {
        if !self.0.has_atoms {
            return;
        }
        match &self.0.kind {
            Kind::Atom(a) => out.push(*a),
            Kind::Type | Kind::Const(_) | Kind::Bound(_) => {}
            Kind::Prod(_, a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            Kind::Lambda(_, a, b, t) => {
                a.atoms(out);
                b.atoms(out);
                t.atoms(out);
            }
            Kind::App(f, _, a, b, t) => {
                f.atoms(out);
                a.atoms(out);
                b.atoms(out);
                t.atoms(out);
            }
            Kind::Eq(a, s, t) => {
                a.atoms(out);
                s.atoms(out);
                t.atoms(out);
            }
            Kind::Refl(a, t) => {
                a.atoms(out);
                t.atoms(out);
            }
        }
    }

    pub fn mentions(&self, atom: u64) -> bool {
        let mut v = Vec::new();
        self.atoms(&mut v);
        v.contains(&atom)
    }
}

impl PartialEq for T {
    fn eq(&self, other: &T) -> bool {
        if Rc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Type, Kind::Type) => true,
            (Kind::Atom(a), Kind::Atom(b)) => a == b,
            (Kind::Const(a), Kind::Const(b)) => a == b,
            (Kind::Bound(a), Kind::Bound(b)) => a == b,
            (Kind::Prod(_, a, b), Kind::Prod(_, c, d)) => a == c && b == d,
            (Kind::Lambda(_, a, b, t), Kind::Lambda(_, c, d, u)) => a == c && b == d && t == u,
            (Kind::App(f, _, a, b, t), Kind::App(g, _, c, d, u)) => f == g && a == c && b == d && t == u,
            (Kind::Eq(a, s, t), Kind::Eq(b, u, v)) => a == b && s == u && t == v,
            (Kind::Refl(a, t), Kind::Refl(b, u)) => a == b && t == u,
            _ => false,
        }
    }
}

impl Eq for T {}

impl Hash for T {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state)
    }
}

pub(crate) fn get_field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, String> {
    v.get(k).ok_or_else(|| format!("missing field {k}"))
}

pub(crate) fn get_num(v: &Value, k: &str) -> Result<u64, String> {
    get_field(v, k)?.as_u64().ok_or_else(|| format!("field {k} is not a number"))
}

pub(crate) fn get_text(v: &Value, k: &str) -> Result<String, String> {
    Ok(get_field(v, k)?.as_str().ok_or_else(|| format!("field {k} is not a string"))?.to_string())
}

pub fn parse_term(v: &Value) -> Result<T, String> {
    let sub = |k: &str| parse_term(get_field(v, k)?);
    let meta = || get_num(v, "binder_atom");
    let tag = get_text(v, "tag")?;
    Ok(T::new(match tag.as_str() {
        "Type" => Kind::Type,
        "Atom" => Kind::Atom(get_num(v, "atom")?),
        "Constant" => Kind::Const(get_text(v, "name")?),
        "Bound" => Kind::Bound(get_num(v, "index")? as usize),
        "Prod" => Kind::Prod(meta()?, sub("dom")?, sub("cod")?),
        "Lambda" => Kind::Lambda(meta()?, sub("dom")?, sub("cod")?, sub("body")?),
        "App" => Kind::App(sub("fn")?, meta()?, sub("dom")?, sub("cod")?, sub("arg")?),
        "EqTy" => Kind::Eq(sub("ty")?, sub("lhs")?, sub("rhs")?),
        "Refl" => Kind::Refl(sub("ty")?, sub("arg")?),
        other => return Err(format!("unknown term tag {other}")),
    }))
}

