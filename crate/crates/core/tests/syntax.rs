use andromeda::syntax::ast::{CompKind, TopKind};
use andromeda::syntax::lexer::{tokenize, Tok};
use andromeda::syntax::{parse_file, SyntaxError};

fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn every_corpus_file_parses() {
    let dir = format!("{}/corpus", env!("CARGO_MANIFEST_DIR"));
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "aml") {
            let src = std::fs::read_to_string(&p).unwrap();
            parse_file(&src).unwrap_or_else(|err| panic!("{}: {err}", p.display()));
            n += 1;
        }
    }
    assert!(n >= 9);
}

#[test]
fn empty_source_has_no_commands() {
    assert!(parse_file("").unwrap().is_empty());
}

#[test]
fn now_in_binds_an_ascription() {
    let tops = parse_file("do now hints = add_hint ξ in (u : P y)").unwrap();
    let TopKind::Do(c) = &tops[0].kind else { panic!() };
    let CompKind::Now(x, v, body) = &c.kind else { panic!("{c:?}") };
    assert_eq!(&**x, "hints");
    assert!(matches!(v.kind, CompKind::App(..)));
    assert!(matches!(body.kind, CompKind::Ascribe(..)));
}

#[test]
fn handle_has_one_clause() {
    let tops = parse_file("do handle refl x : y ≡ x with | equal x y ⇒ yield (Some p) end").unwrap();
    let TopKind::Do(c) = &tops[0].kind else { panic!() };
    let CompKind::Handle(body, h) = &c.kind else { panic!() };
    assert!(matches!(body.kind, CompKind::Ascribe(..)));
    assert_eq!(h.ops.len(), 1);
    assert_eq!(h.ops[0].args.len(), 2);
}

#[test]
fn binders_nest_one_name_at_a_time() {
    let tops = parse_file("do λ (x y : A), x").unwrap();
    let TopKind::Do(c) = &tops[0].kind else { panic!() };
    let CompKind::Lambda(x, Some(_), inner) = &c.kind else { panic!() };
    assert_eq!(&**x, "x");
    assert!(matches!(&inner.kind, CompKind::Lambda(y, Some(_), _) if &**y == "y"));
}

#[test]
fn operator_constant_is_named_by_its_symbol() {
    let tops = parse_file("constant ( + ) : nat → nat → nat").unwrap();
    let TopKind::Constant(names, _) = &tops[0].kind else { panic!() };
    assert_eq!(&*names[0], "+");
}

#[test]
fn multiplication_binds_tighter_than_addition() {
    let tops = parse_file("do n * m + n").unwrap();
    let TopKind::Do(c) = &tops[0].kind else { panic!() };
    // ((+) (n * m)) n
    let CompKind::App(f, _) = &c.kind else { panic!() };
    let CompKind::App(plus, lhs) = &f.kind else { panic!() };
    assert!(matches!(&plus.kind, CompKind::Ident(p) if &**p == "+"));
    assert!(matches!(lhs.kind, CompKind::App(..)));
}

#[test]
fn operation_arity_counts_arrows() {
    let tops = parse_file("operation ? : judgment\noperation resolve : judgment → judgment").unwrap();
    assert!(matches!(&tops[0].kind, TopKind::Operation(n, 0) if &**n == "?"));
    assert!(matches!(&tops[1].kind, TopKind::Operation(_, 1)));
}

#[test]
fn first_column_starts_a_new_command() {
    let src = "constant C : Type\nauto : C → C";
    assert_eq!(parse_file(src).unwrap().len(), 2);
}

#[test]
fn parse_errors_report_the_expected_token() {
    let err = parse_file("do (x").unwrap_err();
    assert!(matches!(err, SyntaxError::Parse { ref expected, .. } if expected == ")"));
}

#[test]
fn include_directive_lexes() {
    let toks = tokenize(&corpus("auto.aml")).unwrap();
    assert_eq!(toks[0].0, Tok::Kw("include"));
}

#[test]
fn corpus_command_counts() {
    for (file, n) in [
        ("transport.aml", 6),
        ("sigma.aml", 12),
        ("naturals.aml", 19),
        ("untyped.aml", 11),
        ("universes.aml", 17),
        ("auto_lib.aml", 7),
        ("auto.aml", 6),
    ] {
        assert_eq!(parse_file(&corpus(file)).unwrap().len(), n, "{file}");
    }
}
