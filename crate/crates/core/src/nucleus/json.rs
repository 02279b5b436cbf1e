//! Lossless JSON export of judgments, including assumption sets and the
//! certificates needed to re-check conversions.

use super::atom::AtomSet;
use super::judgment::{EqTermJudgment, TermJudgment};
use super::proof::{CertSet, Proof, Rule};
use super::signature::Signature;
use super::term::{Binder, Term, TermKind};
use serde_json::{json, Map, Value};
use std::collections::HashMap;

pub const SCHEMA_VERSION: u64 = 1;

fn ids(s: &AtomSet) -> Value {
    Value::Array(s.iter().map(Value::from).collect())
}

fn binder(m: &mut Map<String, Value>, b: &Binder) {
    m.insert("binder".into(), Value::from(&*b.name));
    m.insert("binder_atom".into(), Value::from(b.atom));
}

pub fn term_to_json(t: &Term) -> Value {
    let mut m = Map::new();
    let tag = match t.kind() {
        TermKind::Type => "Type",
        TermKind::Atom(a) => {
            m.insert("atom".into(), Value::from(a.id()));
            m.insert("name".into(), Value::from(&**a.name()));
            "Atom"
        }
        TermKind::Constant(c) => {
            m.insert("name".into(), Value::from(&**c));
            "Constant"
        }
        TermKind::Bound(k) => {
            m.insert("index".into(), Value::from(*k));
            "Bound"
        }
        TermKind::Prod(b, a, c) => {
            binder(&mut m, b);
            m.insert("dom".into(), term_to_json(a));
            m.insert("cod".into(), term_to_json(c));
            "Prod"
        }
        TermKind::Lambda(b, a, c, body) => {
            binder(&mut m, b);
            m.insert("dom".into(), term_to_json(a));
            m.insert("cod".into(), term_to_json(c));
            m.insert("body".into(), term_to_json(body));
            "Lambda"
        }
        TermKind::Apply(h, b, a, c, arg) => {
            m.insert("fn".into(), term_to_json(h));
            binder(&mut m, b);
            m.insert("dom".into(), term_to_json(a));
            m.insert("cod".into(), term_to_json(c));
            m.insert("arg".into(), term_to_json(arg));
            "App"
        }
        TermKind::Eq(a, s, u) => {
            m.insert("ty".into(), term_to_json(a));
            m.insert("lhs".into(), term_to_json(s));
            m.insert("rhs".into(), term_to_json(u));
            "EqTy"
        }
        TermKind::Refl(a, s) => {
            m.insert("ty".into(), term_to_json(a));
            m.insert("arg".into(), term_to_json(s));
            "Refl"
        }
    };
    m.insert("tag".into(), Value::from(tag));
    m.insert("assumptions".into(), ids(t.assumptions()));
    if !t.bound_assumptions().is_empty() {
        m.insert("bound_assumptions".into(), ids(t.bound_assumptions()));
    }
    Value::Object(m)
}

/// Numbers proofs in dependency order, sharing repeated subproofs.
#[derive(Default)]
struct ProofTable {
    index: HashMap<usize, usize>,
    rows: Vec<Value>,
}

impl ProofTable {
    fn add(&mut self, p: &Proof) -> usize {
        if let Some(i) = self.index.get(&p.ptr_id()) {
            return *i;
        }
        let premises: Vec<usize> = p.node().premises.iter().map(|q| self.add(q)).collect();
        let n = p.node();
        let id = self.rows.len();
        let mut row = json!({
            "id": id,
            "rule": n.rule.name(),
            "lhs": term_to_json(&n.lhs),
            "rhs": term_to_json(&n.rhs),
            "type": term_to_json(&n.ty),
            "premises": premises,
        });
        match &n.rule {
            Rule::CongProd(a) | Rule::CongAbs(a) | Rule::CongApp(a) => {
                row["atom"] = json!({"id": a.id(), "name": &**a.name()});
            }
            Rule::Reflect(w) | Rule::Uniq(w) => row["witness"] = term_to_json(w),
            _ => {}
        }
        self.rows.push(row);
        self.index.insert(p.ptr_id(), id);
        id
    }

    fn add_set(&mut self, cs: &CertSet) -> Vec<usize> {
        cs.to_vec().iter().map(|p| self.add(p)).collect()
    }
}

fn signature_json(sig: &Signature, table: &mut ProofTable) -> Value {
    Value::Array(
        sig.iter()
            .map(|d| {
                json!({
                    "name": &*d.name,
                    "type": term_to_json(&d.ty),
                    "certificates": table.add_set(&d.certs),
                })
            })
            .collect(),
    )
}

fn context_json(ctx: &super::context::Context) -> Value {
    let order = ctx.topological().unwrap_or_else(|_| ctx.entries().cloned().collect());
    Value::Array(
        order
            .iter()
            .map(|e| {
                json!({
                    "atom": e.atom.id(),
                    "name": &**e.atom.name(),
                    "type": term_to_json(&e.ty),
                    "deps": ids(e.deps()),
                })
            })
            .collect(),
    )
}

/// Exports a term judgment together with the signature it lives over.
pub fn export_term(sig: &Signature, j: &TermJudgment) -> Value {
    let mut table = ProofTable::default();
    let signature = signature_json(sig, &mut table);
    let certificates = table.add_set(j.certificates());
    json!({
        "version": SCHEMA_VERSION,
        "kind": "TermJudgment",
        "signature": signature,
        "context": context_json(j.context()),
        "term": term_to_json(j.term()),
        "type": term_to_json(j.ty()),
        "proofs": table.rows,
        "certificates": certificates,
    })
}

/// Exports an equality judgment; `proof` names the row deriving it.
pub fn export_eq(sig: &Signature, j: &EqTermJudgment) -> Value {
    let mut table = ProofTable::default();
    let signature = signature_json(sig, &mut table);
    let certificates = table.add_set(j.certificates());
    let proof = table.add(j.proof());
    json!({
        "version": SCHEMA_VERSION,
        "kind": "EqTermJudgment",
        "signature": signature,
        "context": context_json(j.context()),
        "lhs": term_to_json(j.lhs()),
        "rhs": term_to_json(j.rhs()),
        "type": term_to_json(j.ty()),
        "proof": proof,
        "proofs": table.rows,
        "certificates": certificates,
    })
}

pub fn json_export(sig: &Signature, j: &TermJudgment) -> String {
    export_term(sig, j).to_string()
}
