mod common;

use andromeda::nucleus::json::export_eq;
use andromeda::nucleus::{eq_rhs, print_judgment, TermKind};
use andromeda::oracle::check_export;
use andromeda::runtime::Ctx;
use andromeda::session::{Options, Session};
use andromeda::stdlib::{Engine, Hints, StdlibError};
use common::stlc;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn stlc_session() -> Session {
    let mut s = Session::new(Options::default()).unwrap();
    s.run_source(stlc::CONSTANTS, "constants").unwrap();
    s
}

fn prelude_hints(s: &Session) -> Hints {
    s.interp.hints(&Ctx::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructions_pass_the_oracle(seed: u64, steps in 1usize..30) {
        let sig = common::signature();
        let b = common::construction(&sig, &mut StdRng::seed_from_u64(seed), steps);
        prop_assert_eq!(b.check_all(), Ok(()));
    }

    #[test]
    fn join_is_a_semilattice(seed: u64) {
        let sig = common::signature();
        let cs = common::random_contexts(&sig, &mut StdRng::seed_from_u64(seed), 24, 3);
        prop_assert!(common::join_laws(&cs[0], &cs[1], &cs[2]).is_ok());
    }

    #[test]
    fn inversion_round_trips(seed: u64) {
        let sig = common::signature();
        for j in common::random_compound(&sig, &mut StdRng::seed_from_u64(seed)) {
            prop_assert_eq!(common::inversion_round_trip(&sig, &j).map(|_| ()), Ok(()));
        }
    }

    #[test]
    fn whnf_is_idempotent(seed: u64) {
        let s = stlc_session();
        let sig = s.interp.sig();
        let hints = prelude_hints(&s);
        let mut rng = StdRng::seed_from_u64(seed);
        let ty = stlc::random_ty(&mut rng, 2);
        let t = stlc::random_tm(&mut rng, &mut Vec::new(), &ty, 3);
        let j = stlc::judgment(&sig, &mut Vec::new(), &t);
        let mut engine = Engine::new(&sig, &hints, Some(100_000));
        let once = engine.whnf(&j).unwrap();
        prop_assert!(check_export(&export_eq(&sig, &once)).is_ok());
        let n = eq_rhs(&once);
        let twice = engine.whnf(&n).unwrap();
        prop_assert!(eq_rhs(&twice).term().alpha_eq(n.term()), "{}", print_judgment(&n));
    }

    #[test]
    fn equal_is_symmetric_and_sound(seed: u64) {
        let s = stlc_session();
        let sig = s.interp.sig();
        let hints = prelude_hints(&s);
        let mut rng = StdRng::seed_from_u64(seed);
        let ty = stlc::random_ty(&mut rng, 2);
        let l = stlc::random_tm(&mut rng, &mut Vec::new(), &ty, 3);
        let r = if rng.gen_bool(0.5) {
            stlc::expand(&mut rng, &mut Vec::new(), &l, &ty)
        } else {
            stlc::random_tm(&mut rng, &mut Vec::new(), &ty, 3)
        };
        let lj = stlc::judgment(&sig, &mut Vec::new(), &l);
        let rj = stlc::judgment(&sig, &mut Vec::new(), &r);
        let mut engine = Engine::new(&sig, &hints, Some(100_000));
        let there = engine.equal(&lj, &rj).unwrap();
        let back = engine.equal(&rj, &lj).unwrap();
        prop_assert_eq!(there.is_some(), back.is_some());
        if let Some(q) = there {
            prop_assert!(check_export(&export_eq(&sig, &q)).is_ok());
        }
        if let Some(want) = stlc::oracle_equal(&l, &r, &ty, 10_000) {
            prop_assert_eq!(back.is_some(), want);
        }
    }
}

#[test]
fn hints_are_local_to_now() {
    let mut s = Session::new(Options { keep_going: true, ..Default::default() }).unwrap();
    let src = "constant A : Type
constant a b : A
constant ab : a ≡ b
do now hints = add_hints [ab] in (refl a : a ≡ b)
do refl a : a ≡ b";
    s.run_source(src, "local").unwrap();
    assert_eq!(s.values.len(), 1, "{:?}", s.output);
    assert_eq!(s.errors.len(), 1);
}

#[test]
fn distinct_constants_are_unequal_without_hints() {
    let s = stlc_session();
    let sig = s.interp.sig();
    let hints = Hints::default();
    let a = stlc::judgment(&sig, &mut Vec::new(), &stlc::Tm::Const("a"));
    let b = stlc::judgment(&sig, &mut Vec::new(), &stlc::Tm::Const("b"));
    assert!(Engine::new(&sig, &hints, None).equal(&a, &b).unwrap().is_none());
}

#[test]
fn a_looping_reduction_exhausts_its_budget() {
    let mut s = Session::new(Options { step_budget: Some(5_000), ..Default::default() }).unwrap();
    let src = "constant D : Type
constant D_reflexive : D ≡ (D → D)
now hints = add_hints [D_reflexive, symmetry D_reflexive]
let δ = (λ x : D, (x : D → D) x)
do whnf ((δ : D → D) (δ : D))";
    let e = s.run_source(src, "loop").unwrap_err();
    assert!(e.to_string().contains("step budget of 5000 exhausted"), "{e}");
}

#[test]
fn engine_budget_stops_omega() {
    let mut s = Session::new(Options::default()).unwrap();
    s.run_source(
        "constant D : Type
constant D_reflexive : D ≡ (D → D)
now hints = add_hints [D_reflexive, symmetry D_reflexive]
let δ = (λ x : D, (x : D → D) x)
do (δ : D → D) (δ : D)",
        "omega",
    )
    .unwrap();
    let Some(andromeda::runtime::Value::Judg(omega)) = s.values.last().cloned() else { panic!() };
    assert!(matches!(omega.term().kind(), TermKind::Apply(..)));
    let sig = s.interp.sig();
    let hints = prelude_hints(&s);
    let r = Engine::new(&sig, &hints, Some(300)).whnf(&omega);
    assert!(matches!(r, Err(StdlibError::Budget(300))));
}
