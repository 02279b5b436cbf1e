use andromeda::nucleus::json::{export_eq, export_term};
use andromeda::nucleus::*;
use andromeda::oracle::{check_export, OracleError};

struct Fixture {
    sig: Signature,
}

impl Fixture {
    /// `A : Type`, `P : A → Type`, `a b : A`.
    fn new() -> Fixture {
        let sig = sig_add_constant(&sig_empty(), "A", &form_type()).unwrap();
        let a = form_constant(&sig, "A").unwrap();
        let z = fresh_atom(&a, "z").unwrap();
        let pty = form_prod(&z, &form_type()).unwrap();
        let sig = sig_add_constant(&sig, "P", &pty).unwrap();
        let sig = sig_add_constant(&sig, "a", &a).unwrap();
        let sig = sig_add_constant(&sig, "b", &a).unwrap();
        Fixture { sig }
    }

    fn c(&self, n: &str) -> TermJudgment {
        form_constant(&self.sig, n).unwrap()
    }
}

fn transport(f: &Fixture) -> TermJudgment {
    let a = f.c("A");
    let x = fresh_atom(&a, "x").unwrap();
    let y = fresh_atom(&a, "y").unwrap();
    let p = fresh_atom(&form_eq_type(&x, &y).unwrap(), "p").unwrap();
    let px = form_app(&f.c("P"), &x).unwrap();
    let u = fresh_atom(&px, "u").unwrap();
    let e = reflect_term_eq(&p).unwrap();
    let w = fresh_atom(&a, "w").unwrap();
    let pxy = cong_app(&w, &eq_refl(&f.c("P")), &eq_refl(&a), &eq_refl(&form_type()), &e).unwrap();
    let v = convert(&u, &pxy.as_type_eq().unwrap()).unwrap();
    let mut t = v;
    for b in [&u, &p, &y, &x] {
        t = form_lambda(b, &t).unwrap();
    }
    t
}

#[test]
fn transport_prints_and_rechecks() {
    let f = Fixture::new();
    let t = transport(&f);
    assert!(t.context().is_empty());
    assert_eq!(
        print_judgment(&t),
        "⊢ λ (x : A) (y : A) (_ : x ≡ y) (u : P x), u : Π (x : A) (y : A), x ≡ y → P x → P y"
    );
    check_export(&export_term(&f.sig, &t)).unwrap();
}

#[test]
fn transport_without_certificates_is_rejected() {
    let f = Fixture::new();
    let mut v = export_term(&f.sig, &transport(&f));
    v["certificates"] = serde_json::json!([]);
    assert!(matches!(check_export(&v), Err(OracleError::Rejected(_))));
}

#[test]
fn swapped_annotation_is_rejected() {
    let f = Fixture::new();
    let a = f.c("A");
    let x = fresh_atom(&a, "x").unwrap();
    let id = form_lambda(&x, &x).unwrap();
    let mut v = export_term(&f.sig, &id);
    check_export(&v).unwrap();
    v["term"]["dom"] = serde_json::json!({"tag": "Constant", "name": "a", "assumptions": []});
    assert!(check_export(&v).is_err());
}

#[test]
fn dangling_atom_is_rejected() {
    let f = Fixture::new();
    let x = fresh_atom(&f.c("A"), "x").unwrap();
    let mut v = export_term(&f.sig, &x);
    check_export(&v).unwrap();
    v["context"] = serde_json::json!([]);
    assert!(matches!(check_export(&v), Err(OracleError::Rejected(_))));
}

#[test]
fn beta_rechecks() {
    let f = Fixture::new();
    let x = fresh_atom(&f.c("A"), "x").unwrap();
    let id = form_lambda(&x, &x).unwrap();
    let app = form_app(&id, &f.c("a")).unwrap();
    let e = beta_witness(&app).unwrap();
    assert!(e.rhs().alpha_eq(f.c("a").term()));
    check_export(&export_eq(&f.sig, &e)).unwrap();
    assert!(beta_witness(&f.c("a")).is_err());
}

#[test]
fn reflection_rechecks_in_context() {
    let f = Fixture::new();
    let ab = form_eq_type(&f.c("a"), &f.c("b")).unwrap();
    let z = fresh_atom(&ab, "ζ").unwrap();
    let u = fresh_atom(&form_app(&f.c("P"), &f.c("a")).unwrap(), "u").unwrap();
    let w = fresh_atom(&f.c("A"), "w").unwrap();
    let e = reflect_term_eq(&z).unwrap();
    let pab = cong_app(&w, &eq_refl(&f.c("P")), &eq_refl(&f.c("A")), &eq_refl(&form_type()), &e).unwrap();
    let v = convert(&u, &pab.as_type_eq().unwrap()).unwrap();
    assert_eq!(print_judgment(&v), "ζ₀ : a ≡ b, u₀ : P a ⊢ u₀ : P b");
    check_export(&export_term(&f.sig, &v)).unwrap();
    // Dropping ζ from the exported context leaves the conversion unjustified.
    let mut j = export_term(&f.sig, &v);
    let ctx: Vec<_> = j["context"].as_array().unwrap().iter().filter(|e| e["name"] != "ζ").cloned().collect();
    j["context"] = serde_json::Value::Array(ctx);
    assert!(check_export(&j).is_err());
}

#[test]
fn lambda_cannot_capture_a_dependency() {
    let f = Fixture::new();
    let x = fresh_atom(&f.c("A"), "x").unwrap();
    let u = fresh_atom(&form_app(&f.c("P"), &x).unwrap(), "u").unwrap();
    let err = form_lambda(&x, &u).unwrap_err();
    assert!(matches!(err, NucleusError::DependencyOnAbstractedAtom { .. }));
}

#[test]
fn app_rejects_wrong_argument() {
    let f = Fixture::new();
    assert_eq!(form_app(&f.c("P"), &form_type()).unwrap_err(), NucleusError::ArgTypeMismatch);
    assert_eq!(form_app(&f.c("a"), &f.c("b")).unwrap_err(), NucleusError::NotAProduct);
}

#[test]
fn invert_lambda_rebuilds() {
    let f = Fixture::new();
    let t = transport(&f);
    let InversionView::Lambda(x, dom, body) = invert(&t) else { panic!("not a lambda") };
    assert!(dom.term().alpha_eq(f.c("A").term()));
    let xj = context_of(&body).into_iter().find(|j| j.as_atom() == Some(&x)).unwrap();
    let again = form_lambda(&xj, &body).unwrap();
    assert!(alpha_equal(&again, &t));
    check_export(&export_term(&f.sig, &body)).unwrap();
}

#[test]
fn substitution_replaces_hypothesis() {
    let f = Fixture::new();
    let x = fresh_atom(&f.c("A"), "x").unwrap();
    let px = form_app(&f.c("P"), &x).unwrap();
    let s = substitute(&px, x.as_atom().unwrap(), &f.c("a")).unwrap();
    assert!(s.context().is_empty());
    assert_eq!(print_judgment(&s), "⊢ P a : Type");
}

#[test]
fn duplicate_constant_is_rejected() {
    let f = Fixture::new();
    assert!(matches!(
        sig_add_constant(&f.sig, "A", &form_type()),
        Err(NucleusError::DuplicateConstant(_))
    ));
}
