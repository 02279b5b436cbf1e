//! An independent re-checker for exported judgments.
//!
//! It reads the JSON export into its own terms, erases assumption sets and
//! checks the judgment syntax-directedly. Conversions are accepted only along
//! chains of certificates, each of which is re-derived rule by rule in the
//! context where it is used.

mod term;

use serde_json::Value;
use std::collections::{HashMap, HashSet, VecDeque};
use term::{get_field, get_num, get_text, parse_term, Kind, T};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("malformed export: {0}")]
    Malformed(String),
    #[error("rejected: {0}")]
    Rejected(String),
}

type Res<A> = std::result::Result<A, String>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum RuleTag {
    Refl,
    Sym,
    Trans,
    TyConv,
    Reflect(T),
    Beta,
    CongProd(u64),
    CongEq,
    CongAbs(u64),
    CongApp(u64),
    CongRefl,
    Uniq(T),
}

#[derive(Clone, Debug)]
struct Row {
    rule: RuleTag,
    lhs: T,
    rhs: T,
    ty: T,
    premises: Vec<usize>,
}

fn parse_row(v: &Value) -> Res<Row> {
    let witness = || parse_term(get_field(v, "witness")?);
    let atom = || get_num(get_field(v, "atom")?, "id");
    let rule = match get_text(v, "rule")?.as_str() {
        "eq-refl" => RuleTag::Refl,
        "eq-sym" => RuleTag::Sym,
        "eq-trans" => RuleTag::Trans,
        "eq-ty-conv" => RuleTag::TyConv,
        "eq-reflection" => RuleTag::Reflect(witness()?),
        "prod-beta" => RuleTag::Beta,
        "cong-prod" => RuleTag::CongProd(atom()?),
        "cong-eq" => RuleTag::CongEq,
        "cong-abs" => RuleTag::CongAbs(atom()?),
        "cong-app" => RuleTag::CongApp(atom()?),
        "cong-refl" => RuleTag::CongRefl,
        "uniq" => RuleTag::Uniq(witness()?),
        other => return Err(format!("unknown rule {other}")),
    };
    let premises = get_field(v, "premises")?
        .as_array()
        .ok_or("premises is not an array")?
        .iter()
        .map(|p| p.as_u64().map(|x| x as usize).ok_or_else(|| "bad premise".to_string()))
        .collect::<Res<Vec<_>>>()?;
    Ok(Row {
        rule,
        lhs: parse_term(get_field(v, "lhs")?)?,
        rhs: parse_term(get_field(v, "rhs")?)?,
        ty: parse_term(get_field(v, "type")?)?,
        premises,
    })
}

fn index_list(v: &Value, k: &str) -> Res<Vec<usize>> {
    get_field(v, k)?
        .as_array()
        .ok_or_else(|| format!("{k} is not an array"))?
        .iter()
        .map(|p| p.as_u64().map(|x| x as usize).ok_or_else(|| format!("bad index in {k}")))
        .collect()
}

/// Atoms made up by the checker itself count down from the top of the id space.
const FRESH_BASE: u64 = u64::MAX - (1 << 32);

struct Checker {
    sig: HashMap<String, T>,
    rows: Vec<Row>,
    ctx: HashMap<u64, T>,
    /// Scope generations, innermost last.
    scopes: Vec<u64>,
    next_gen: u64,
    next_fresh: u64,
    /// Certificates in use, and an index by the two sides of their conclusion.
    pool: Vec<usize>,
    by_side: HashMap<T, Vec<usize>>,
    verified: HashMap<usize, u64>,
    in_progress: HashSet<usize>,
    infer_memo: HashMap<T, (u64, T)>,
    fuel: u64,
}

impl Checker {
    fn new(rows: Vec<Row>) -> Checker {
        Checker {
            sig: HashMap::new(),
            rows,
            ctx: HashMap::new(),
            scopes: vec![0],
            next_gen: 1,
            next_fresh: FRESH_BASE,
            pool: Vec::new(),
            by_side: HashMap::new(),
            verified: HashMap::new(),
            in_progress: HashSet::new(),
            infer_memo: HashMap::new(),
            fuel: 50_000_000,
        }
    }

    fn tick(&mut self) -> Res<()> {
        if self.fuel == 0 {
            return Err("checker ran out of fuel".into());
        }
        self.fuel -= 1;
        Ok(())
    }

    fn live(&self, gen: u64) -> bool {
        self.scopes.contains(&gen)
    }

    fn set_pool(&mut self, certs: &[usize]) -> Res<()> {
        self.pool.clear();
        self.by_side.clear();
        for &c in certs {
            self.add_cert(c)?;
        }
        Ok(())
    }

    fn add_cert(&mut self, c: usize) -> Res<()> {
        let r = self.rows.get(c).ok_or_else(|| format!("certificate {c} does not exist"))?;
        let (l, rr) = (r.lhs.clone(), r.rhs.clone());
        self.pool.push(c);
        self.by_side.entry(l).or_default().push(c);
        self.by_side.entry(rr).or_default().push(c);
        Ok(())
    }

    fn truncate_pool(&mut self, n: usize) {
        while self.pool.len() > n {
            let c = self.pool.pop().unwrap();
            let (l, r) = (self.rows[c].lhs.clone(), self.rows[c].rhs.clone());
            for side in [l, r] {
                if let Some(v) = self.by_side.get_mut(&side) {
                    if let Some(i) = v.iter().rposition(|x| *x == c) {
                        v.remove(i);
                    }
                }
            }
        }
    }

    /// Runs `f` with `x : a` added to the context.
    fn under<A>(&mut self, x: u64, a: &T, f: impl FnOnce(&mut Self) -> Res<A>) -> Res<A> {
        if self.ctx.contains_key(&x) {
            return Err(format!("atom {x} is already in the context"));
        }
        self.ctx.insert(x, a.clone());
        let g = self.next_gen;
        self.next_gen += 1;
        self.scopes.push(g);
        let out = f(self);
        self.scopes.pop();
        self.ctx.remove(&x);
        out
    }

    /// Opens a binder, preferring the atom it was abstracted from. When that
    /// atom is taken, a fresh one is used and the certificates mentioning the
    /// original are added again under the new name.
    fn open_with<A>(
        &mut self,
        meta: u64,
        dom: &T,
        f: impl FnOnce(&mut Self, u64) -> Res<A>,
    ) -> Res<A> {
        if !self.ctx.contains_key(&meta) {
            return self.under(meta, dom, |s| f(s, meta));
        }
        let y = self.next_fresh;
        self.next_fresh += 1;
        let mark = self.pool.len();
        let mentioning: Vec<usize> = self.pool.iter().copied().filter(|&c| self.row_mentions(c, meta)).collect();
        for c in mentioning {
            let r = self.rename_row(c, meta, y);
            self.add_cert(r)?;
        }
        let out = self.under(y, dom, |s| f(s, y));
        self.truncate_pool(mark);
        out
    }

    fn row_mentions(&self, c: usize, x: u64) -> bool {
        let r = &self.rows[c];
        let here = r.lhs.mentions(x)
            || r.rhs.mentions(x)
            || r.ty.mentions(x)
            || matches!(&r.rule, RuleTag::Reflect(w) | RuleTag::Uniq(w) if w.mentions(x));
        here || r.premises.iter().any(|&p| p < c && self.row_mentions(p, x))
    }

    fn rename_row(&mut self, c: usize, from: u64, to: u64) -> usize {
        let r = self.rows[c].clone();
        let premises = r
            .premises
            .iter()
            .map(|&p| if p < c { self.rename_row(p, from, to) } else { p })
            .collect();
        let rule = match r.rule {
            RuleTag::Reflect(w) => RuleTag::Reflect(w.rename(from, to)),
            RuleTag::Uniq(w) => RuleTag::Uniq(w.rename(from, to)),
            RuleTag::CongProd(a) if a == from => RuleTag::CongProd(to),
            RuleTag::CongAbs(a) if a == from => RuleTag::CongAbs(to),
            RuleTag::CongApp(a) if a == from => RuleTag::CongApp(to),
            other => other,
        };
        self.rows.push(Row {
            rule,
            lhs: r.lhs.rename(from, to),
            rhs: r.rhs.rename(from, to),
            ty: r.ty.rename(from, to),
            premises,
        });
        self.rows.len() - 1
    }

    fn check_type(&mut self, a: &T) -> Res<()> {
        self.check(a, &T::ty())
    }

    fn check(&mut self, t: &T, ty: &T) -> Res<()> {
        let n = self.infer(t)?;
        if self.conv(&n, ty)? {
            Ok(())
        } else {
            Err("type mismatch: no certified conversion between the inferred and the expected type".into())
        }
    }

    fn infer(&mut self, t: &T) -> Res<T> {
        self.tick()?;
        if let Some((g, n)) = self.infer_memo.get(t) {
            if self.live(*g) {
                return Ok(n.clone());
            }
        }
        let n = self.infer_raw(t)?;
        let g = *self.scopes.last().unwrap();
        self.infer_memo.insert(t.clone(), (g, n.clone()));
        Ok(n)
    }

    fn infer_raw(&mut self, t: &T) -> Res<T> {
        match t.kind() {
            Kind::Type => Ok(T::ty()),
            Kind::Atom(a) => self.ctx.get(a).cloned().ok_or_else(|| format!("atom {a} is not in the context")),
            Kind::Const(c) => self.sig.get(c).cloned().ok_or_else(|| format!("unknown constant {c}")),
            Kind::Bound(k) => Err(format!("loose bound variable {k}")),
            Kind::Prod(m, a, b) => {
                self.check_type(a)?;
                self.open_with(*m, a, |s, x| s.check_type(&b.open(x)))?;
                Ok(T::ty())
            }
            Kind::Lambda(m, a, b, body) => {
                self.check_type(a)?;
                self.open_with(*m, a, |s, x| {
                    let bx = b.open(x);
                    s.check_type(&bx)?;
                    s.check(&body.open(x), &bx)
                })?;
                Ok(T::new(Kind::Prod(*m, a.clone(), b.clone())))
            }
            Kind::App(h, m, a, b, arg) => {
                self.check_type(a)?;
                self.open_with(*m, a, |s, x| s.check_type(&b.open(x)))?;
                self.check(h, &T::new(Kind::Prod(*m, a.clone(), b.clone())))?;
                self.check(arg, a)?;
                Ok(b.inst(0, arg))
            }
            Kind::Eq(a, l, r) => {
                self.check_type(a)?;
                self.check(l, a)?;
                self.check(r, a)?;
                Ok(T::ty())
            }
            Kind::Refl(a, s) => {
                self.check_type(a)?;
                self.check(s, a)?;
                Ok(T::new(Kind::Eq(a.clone(), s.clone(), s.clone())))
            }
        }
    }

    /// Are two types related by a chain of certificates usable here?
    fn conv(&mut self, a: &T, b: &T) -> Res<bool> {
        if a == b {
            return Ok(true);
        }
        let mut seen: HashSet<T> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(a.clone());
        queue.push_back(a.clone());
        while let Some(cur) = queue.pop_front() {
            let cands = self.by_side.get(&cur).cloned().unwrap_or_default();
            for c in cands {
                let (l, r, ty) = {
                    let row = &self.rows[c];
                    (row.lhs.clone(), row.rhs.clone(), row.ty.clone())
                };
                if !ty.is_type() {
                    continue;
                }
                let other = if l == cur { r } else { l };
                if seen.contains(&other) {
                    continue;
                }
                if !self.atoms_present(c) || self.verify(c).is_err() {
                    continue;
                }
                if &other == b {
                    return Ok(true);
                }
                seen.insert(other.clone());
                queue.push_back(other);
            }
        }
        Ok(false)
    }

    fn atoms_present(&self, c: usize) -> bool {
        let r = &self.rows[c];
        let mut v = Vec::new();
        r.lhs.atoms(&mut v);
        r.rhs.atoms(&mut v);
        r.ty.atoms(&mut v);
        v.iter().all(|a| self.ctx.contains_key(a))
    }

    /// Re-derives certificate `c` in the current context.
    fn verify(&mut self, c: usize) -> Res<()> {
        if let Some(g) = self.verified.get(&c) {
            if self.live(*g) {
                return Ok(());
            }
        }
        if !self.in_progress.insert(c) {
            return Err("circular certificate".into());
        }
        let out = self.verify_raw(c);
        self.in_progress.remove(&c);
        if out.is_ok() {
            let g = *self.scopes.last().unwrap();
            self.verified.insert(c, g);
        }
        out
    }

    fn premise(&mut self, c: usize, i: usize, l: &T, r: &T, ty: &T) -> Res<()> {
        let p = *self.rows[c].premises.get(i).ok_or("missing premise")?;
        if p >= c {
            return Err("premise does not precede its conclusion".into());
        }
        let row = &self.rows[p];
        if &row.lhs != l || &row.rhs != r || &row.ty != ty {
            return Err(format!("premise {i} of certificate {c} has the wrong conclusion"));
        }
        self.verify(p)
    }

    fn verify_raw(&mut self, c: usize) -> Res<()> {
        self.tick()?;
        let Row { rule, lhs, rhs, ty, premises } = self.rows[c].clone();
        let n = premises.len();
        let arity = match &rule {
            RuleTag::Refl | RuleTag::Reflect(_) | RuleTag::Beta | RuleTag::Uniq(_) => 0,
            RuleTag::Sym => 1,
            RuleTag::Trans | RuleTag::TyConv | RuleTag::CongProd(_) | RuleTag::CongRefl => 2,
            RuleTag::CongEq | RuleTag::CongAbs(_) => 3,
            RuleTag::CongApp(_) => 4,
        };
        if n != arity {
            return Err(format!("certificate {c} has {n} premises, expected {arity}"));
        }
        let tt = T::ty();
        match rule {
            RuleTag::Refl => {
                if lhs != rhs {
                    return Err("reflexivity between different terms".into());
                }
                self.check_type(&ty)?;
                self.check(&lhs, &ty)
            }
            RuleTag::Sym => self.premise(c, 0, &rhs, &lhs, &ty),
            RuleTag::Trans => {
                let mid = self.rows[premises[0]].rhs.clone();
                self.premise(c, 0, &lhs, &mid, &ty)?;
                self.premise(c, 1, &mid, &rhs, &ty)
            }
            RuleTag::TyConv => {
                let a = self.rows[premises[0]].ty.clone();
                self.premise(c, 0, &lhs, &rhs, &a)?;
                self.premise(c, 1, &a, &ty, &tt)
            }
            RuleTag::Reflect(w) => {
                let eq = T::new(Kind::Eq(ty.clone(), lhs.clone(), rhs.clone()));
                self.check_type(&eq)?;
                self.check(&w, &eq)
            }
            RuleTag::Beta => {
                let Kind::App(h, _, a, b, arg) = lhs.kind() else { return Err("beta on a non-application".into()) };
                let Kind::Lambda(_, a2, b2, body) = h.kind() else { return Err("beta on a non-redex".into()) };
                if a != a2 || b != b2 {
                    return Err("beta with mismatched annotations".into());
                }
                if rhs != body.inst(0, arg) || ty != b.inst(0, arg) {
                    return Err("beta with a wrong contractum".into());
                }
                let n = self.infer(&lhs)?;
                if n != ty {
                    return Err("beta redex has the wrong type".into());
                }
                Ok(())
            }
            RuleTag::CongProd(x) => {
                let (Kind::Prod(_, a, b), Kind::Prod(_, a2, b2)) = (lhs.kind(), rhs.kind()) else {
                    return Err("cong-prod on non-products".into());
                };
                if !ty.is_type() {
                    return Err("cong-prod at a type other than Type".into());
                }
                self.premise(c, 0, a, a2, &tt)?;
                self.check_type(a)?;
                self.bind_cong(x, a, |s| s.premise(c, 1, &b.open(x), &b2.open(x), &tt))
            }
            RuleTag::CongEq => {
                let (Kind::Eq(a, s, t), Kind::Eq(a2, s2, t2)) = (lhs.kind(), rhs.kind()) else {
                    return Err("cong-eq on non-equations".into());
                };
                if !ty.is_type() {
                    return Err("cong-eq at a type other than Type".into());
                }
                self.premise(c, 0, a, a2, &tt)?;
                self.premise(c, 1, s, s2, a)?;
                self.premise(c, 2, t, t2, a)
            }
            RuleTag::CongAbs(x) => {
                let (Kind::Lambda(m, a, b, s), Kind::Lambda(_, a2, b2, s2)) = (lhs.kind(), rhs.kind()) else {
                    return Err("cong-abs on non-abstractions".into());
                };
                if ty != T::new(Kind::Prod(*m, a.clone(), b.clone())) {
                    return Err("cong-abs at the wrong type".into());
                }
                self.premise(c, 0, a, a2, &tt)?;
                self.check_type(a)?;
                self.bind_cong(x, a, |st| {
                    let bx = b.open(x);
                    st.premise(c, 1, &bx, &b2.open(x), &tt)?;
                    st.premise(c, 2, &s.open(x), &s2.open(x), &bx)
                })
            }
            RuleTag::CongApp(x) => {
                let (Kind::App(f, m, a, b, t), Kind::App(f2, _, a2, b2, t2)) = (lhs.kind(), rhs.kind()) else {
                    return Err("cong-app on non-applications".into());
                };
                if ty != b.inst(0, t) {
                    return Err("cong-app at the wrong type".into());
                }
                let pi = T::new(Kind::Prod(*m, a.clone(), b.clone()));
                self.premise(c, 0, f, f2, &pi)?;
                self.premise(c, 1, a, a2, &tt)?;
                self.check_type(a)?;
                self.bind_cong(x, a, |s| s.premise(c, 2, &b.open(x), &b2.open(x), &tt))?;
                self.premise(c, 3, t, t2, a)
            }
            RuleTag::CongRefl => {
                let (Kind::Refl(a, s), Kind::Refl(a2, s2)) = (lhs.kind(), rhs.kind()) else {
                    return Err("cong-refl on non-reflexivities".into());
                };
                if ty != T::new(Kind::Eq(a.clone(), s.clone(), s.clone())) {
                    return Err("cong-refl at the wrong type".into());
                }
                self.premise(c, 0, a, a2, &tt)?;
                self.premise(c, 1, s, s2, a)
            }
            RuleTag::Uniq(w) => {
                if !ty.is_type() {
                    return Err("uniqueness at a type other than Type".into());
                }
                self.check(&w, &lhs)?;
                let n = self.infer(&w)?;
                if n != rhs {
                    return Err("uniqueness: the natural type differs".into());
                }
                Ok(())
            }
        }
    }

    /// Binds the atom of a congruence rule. An atom already present with the
    /// same type is reused as is.
    fn bind_cong(&mut self, x: u64, a: &T, f: impl FnOnce(&mut Self) -> Res<()>) -> Res<()> {
        match self.ctx.get(&x) {
            Some(b) if b == a => f(self),
            Some(_) => Err(format!("congruence atom {x} clashes with the context")),
            None => self.under(x, a, f),
        }
    }

    fn load_signature(&mut self, v: &Value) -> Res<()> {
        let decls = v.as_array().ok_or("signature is not an array")?;
        for d in decls {
            let name = get_text(d, "name")?;
            let ty = parse_term(get_field(d, "type")?)?;
            if self.sig.contains_key(&name) {
                return Err(format!("constant {name} declared twice"));
            }
            if !ty.is_closed() || ty.mentions_any() {
                return Err(format!("type of {name} is not closed"));
            }
            self.set_pool(&index_list(d, "certificates")?)?;
            self.check_type(&ty).map_err(|e| format!("constant {name}: {e}"))?;
            self.sig.insert(name, ty);
        }
        Ok(())
    }

    fn load_context(&mut self, v: &Value) -> Res<()> {
        let entries = v.as_array().ok_or("context is not an array")?;
        for e in entries {
            let atom = get_num(e, "atom")?;
            let ty = parse_term(get_field(e, "type")?)?;
            if self.ctx.contains_key(&atom) {
                return Err(format!("atom {atom} occurs twice in the context"));
            }
            self.check_type(&ty).map_err(|err| format!("context entry {atom}: {err}"))?;
            self.ctx.insert(atom, ty);
        }
        Ok(())
    }
}

impl T {
    fn mentions_any(&self) -> bool {
        let mut v = Vec::new();
        self.atoms(&mut v);
        !v.is_empty()
    }
}

fn run(v: &Value) -> std::result::Result<(), OracleError> {
    let malformed = OracleError::Malformed;
    let version = get_num(v, "version").map_err(malformed)?;
    if version != crate::nucleus::json::SCHEMA_VERSION {
        return Err(OracleError::Malformed(format!("unsupported version {version}")));
    }
    let rows = get_field(v, "proofs")
        .and_then(|p| p.as_array().ok_or_else(|| "proofs is not an array".to_string()))
        .map_err(malformed)?
        .iter()
        .map(parse_row)
        .collect::<Res<Vec<_>>>()
        .map_err(malformed)?;
    let mut ch = Checker::new(rows);
    let rejected = OracleError::Rejected;
    ch.load_signature(get_field(v, "signature").map_err(malformed)?).map_err(rejected)?;
    ch.set_pool(&index_list(v, "certificates").map_err(malformed)?).map_err(rejected)?;
    ch.load_context(get_field(v, "context").map_err(malformed)?).map_err(rejected)?;
    let ty = parse_term(get_field(v, "type").map_err(malformed)?).map_err(malformed)?;
    match get_text(v, "kind").map_err(malformed)?.as_str() {
        "TermJudgment" => {
            let t = parse_term(get_field(v, "term").map_err(malformed)?).map_err(malformed)?;
            ch.check_type(&ty).map_err(rejected)?;
            ch.check(&t, &ty).map_err(rejected)
        }
        "EqTermJudgment" => {
            let l = parse_term(get_field(v, "lhs").map_err(malformed)?).map_err(malformed)?;
            let r = parse_term(get_field(v, "rhs").map_err(malformed)?).map_err(malformed)?;
            let p = get_num(v, "proof").map_err(malformed)? as usize;
            let row = ch.rows.get(p).ok_or_else(|| OracleError::Malformed("proof row missing".into()))?;
            if row.lhs != l || row.rhs != r || row.ty != ty {
                return Err(OracleError::Rejected("proof concludes a different equation".into()));
            }
            ch.verify(p).map_err(rejected)
        }
        k => Err(OracleError::Malformed(format!("unknown judgment kind {k}"))),
    }
}

/// Checks an exported judgment. Accepts exactly when the judgment is derivable
/// in the declarative type theory, as witnessed by the exported certificates.
pub fn check_export(v: &Value) -> std::result::Result<(), OracleError> {
    run(v)
}

pub fn check_export_str(s: &str) -> std::result::Result<(), OracleError> {
    let v: Value = serde_json::from_str(s).map_err(|e| OracleError::Malformed(e.to_string()))?;
    run(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nucleus::json::export_term;
    use crate::nucleus::*;

    fn identity() -> (Signature, TermJudgment) {
        let sig = sig_add_constant(&sig_empty(), "A", &form_type()).unwrap();
        let a = form_constant(&sig, "A").unwrap();
        let x = fresh_atom(&a, "x").unwrap();
        (sig.clone(), form_lambda(&x, &x).unwrap())
    }

    #[test]
    fn accepts_nucleus_output() {
        let (sig, id) = identity();
        assert_eq!(check_export(&export_term(&sig, &id)), Ok(()));
    }

    #[test]
    fn rejects_a_tampered_type() {
        let (sig, id) = identity();
        let mut v = export_term(&sig, &id);
        // Claim the identity has type A instead of A → A.
        v["type"] = serde_json::json!({"assumptions": [], "name": "A", "tag": "Constant"});
        assert!(matches!(check_export(&v), Err(OracleError::Rejected(_))));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(check_export_str("{}"), Err(OracleError::Malformed(_))));
        assert!(check_export_str("not json").is_err());
    }
}
