//! The acceptance suite. Prints one pass/fail line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use andromeda::nucleus::{
    beta_witness, convert, form_app, form_constant, form_eq_type, form_lambda, form_prod, form_type, fresh_atom,
    print_judgment, reflect_term_eq, sig_add_constant, sig_empty, NucleusError, Term, TermJudgment, TermKind,
};
use andromeda::nucleus::json::export_term;
use andromeda::oracle::check_export;
use andromeda::runtime::{Ctx, Value};
use andromeda::session::{Options, Session};
use andromeda::stdlib::{Engine, StdlibError};
use common::stlc;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::path::PathBuf;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn session() -> Session {
    Session::new(Options { typecheck: true, ..Default::default() }).expect("the prelude loads")
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Runs a corpus file and compares its output with the golden file.
fn golden(name: &str) -> Result<Session, String> {
    let mut s = session();
    s.run_file(&corpus(&format!("{name}.aml"))).map_err(|e| e.to_string())?;
    let want = std::fs::read_to_string(corpus(&format!("{name}.golden"))).map_err(|e| e.to_string())?;
    let got = s.output.join("\n");
    if normalize(&got) != normalize(&want) {
        return Err(format!("output differs from {name}.golden:\n{got}"));
    }
    if !s.warnings.is_empty() {
        return Err(format!("warnings: {:?}", s.warnings));
    }
    Ok(s)
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let msg = f()?;
    let dt = t.elapsed();
    if dt > limit {
        return Err(format!("took {dt:.2?}, limit {limit:?}"));
    }
    Ok(format!("{msg} in {dt:.2?}"))
}

fn last_judgment(s: &Session) -> Result<TermJudgment, String> {
    match s.values.last() {
        Some(Value::Judg(j)) => Ok(j.clone()),
        v => Err(format!("expected a judgment, got {v:?}")),
    }
}

fn transport() -> Outcome {
    timed(Duration::from_secs(1), || golden("transport").map(|_| "matches golden".into()))
}

fn hypothetical() -> Outcome {
    let s = golden("hypothetical")?;
    let out = s.output.join("\n");
    if !out.contains("ζ₀ : a ≡ b ⊢ v : P b") {
        return Err(format!("unexpected judgment {out}"));
    }
    Ok("ζ₀ : a ≡ b ⊢ v : P b".into())
}

fn symmetry() -> Outcome {
    let s = golden("symmetry")?;
    let n = s.interp.operation_count("equal");
    if n != 1 {
        return Err(format!("equal triggered {n} times"));
    }
    // The same count seen from inside the language, by a handler that records its calls.
    let mut s = session();
    let src = "let hits = ref []
do λ (A : Type) (x y : A) (p : x ≡ y),
  (handle refl x : y ≡ x with
   | equal x y ⇒ hits := x :: !hits; yield (Some p)
   end)
do !hits";
    s.run_source(src, "symmetry-count").map_err(|e| e.to_string())?;
    match s.values.last().and_then(|v| v.as_list()) {
        Some(hits) if hits.len() == 1 => Ok("equal triggered once".into()),
        v => Err(format!("the counting handler saw {v:?}")),
    }
}

fn sigma() -> Outcome {
    let mut s = session();
    s.run_file(&corpus("sigma.aml")).map_err(|e| e.to_string())?;
    if !s.errors.is_empty() || !s.warnings.is_empty() {
        return Err(format!("errors {:?}, warnings {:?}", s.errors, s.warnings));
    }
    Ok("runs with no errors".into())
}

fn count_succ(t: &Term) -> usize {
    match t.kind() {
        TermKind::Apply(h, _, _, _, a) if matches!(h.kind(), TermKind::Constant(c) if c.as_ref() == "S") => {
            1 + count_succ(a)
        }
        _ => 0,
    }
}

fn naturals() -> Outcome {
    timed(Duration::from_secs(5), || {
        let s = golden("naturals")?;
        let j = last_judgment(&s)?;
        let TermKind::Refl(..) = j.term().kind() else { return Err("not a refl".into()) };
        let TermKind::Eq(_, _, rhs) = j.ty().kind() else { return Err("not an equation".into()) };
        match count_succ(rhs) {
            12 => Ok("refl with 12 S".into()),
            n => Err(format!("{n} S on the right")),
        }
    })
}

fn untyped() -> Outcome {
    let mut s = session();
    s.run_file(&corpus("untyped.aml")).map_err(|e| e.to_string())?;
    let (fix_eq, omega) = match &s.values[..] {
        [Value::Judg(a), Value::Judg(b)] => (a.clone(), b.clone()),
        v => return Err(format!("expected two judgments, got {v:?}")),
    };
    if !matches!(fix_eq.ty().kind(), TermKind::Prod(..)) {
        return Err(format!("fix_eq has type {}", print_judgment(&fix_eq)));
    }
    // Ω is a redex whose annotations disagree, so no β-step applies.
    match beta_witness(&omega) {
        Err(NucleusError::NotARedex(_)) => {}
        r => return Err(format!("beta_witness on Ω gave {r:?}")),
    }
    s.run_source("do whnf Ω", "omega").map_err(|e| e.to_string())?;
    let w = last_judgment(&s)?;
    let TermKind::Eq(_, l, r) = w.ty().kind() else { return Err("whnf did not give an equation".into()) };
    if !l.alpha_eq(r) {
        return Err(format!("whnf Ω took a step: {}", print_judgment(&w)));
    }
    let hints = s.interp.hints(&Ctx::default()).map_err(|e| e.to_string())?;
    let sig = s.interp.sig();
    let mut engine = Engine::new(&sig, &hints, Some(10_000));
    engine.whnf(&omega).map_err(|e| e.to_string())?;
    if engine.steps() != 0 {
        return Err(format!("whnf took {} steps", engine.steps()));
    }
    Ok("fix_eq and Ω elaborate, whnf Ω stops without a β-step".into())
}

fn universes() -> Outcome {
    let s = golden("universes")?;
    let out = normalize(&s.output.join("\n"));
    let want = "⊢ pi b (λ (y : El b), eq b y y) : U";
    if !out.contains(want) {
        return Err(format!("missing {want}"));
    }
    Ok(want.into())
}

fn auto() -> Outcome {
    let s = golden("auto")?;
    Ok(format!("{} judgments match golden", s.values.len()))
}

fn constructions() -> Outcome {
    timed(Duration::from_secs(120), || {
        let sig = common::signature();
        let mut judgments = 0;
        for seed in 0..10_000u64 {
            let mut rng = StdRng::seed_from_u64(seed);
            let b = common::construction(&sig, &mut rng, 12);
            b.check_all().map_err(|e| format!("seed {seed}: {e}"))?;
            judgments += b.terms.len() + b.eqs.len();
        }
        Ok(format!("10000 sequences, {judgments} judgments checked"))
    })
}

fn join_algebra() -> Outcome {
    let sig = common::signature();
    let mut rng = StdRng::seed_from_u64(10);
    let (mut tested, mut nontrivial) = (0, 0);
    while tested < 1000 {
        let cs = common::random_contexts(&sig, &mut rng, 24, 3);
        if common::join_laws(&cs[0], &cs[1], &cs[2])? {
            tested += 1;
            if cs.iter().filter(|c| !c.domain().is_empty()).count() >= 2 {
                nontrivial += 1;
            }
        }
    }
    if nontrivial < 200 {
        return Err(format!("only {nontrivial} triples had two nonempty contexts"));
    }
    Ok(format!("1000 triples ({nontrivial} with two or more nonempty contexts)"))
}

fn inversion() -> Outcome {
    let sig = common::signature();
    let mut rng = StdRng::seed_from_u64(11);
    let mut done = 0;
    while done < 1000 {
        for j in common::random_compound(&sig, &mut rng) {
            if done < 1000 && common::inversion_round_trip(&sig, &j)? {
                done += 1;
            }
        }
    }
    Ok("1000 judgments round-trip".into())
}

fn beta_blocking() -> Outcome {
    let mut sig = sig_empty();
    for n in ["N", "Bool"] {
        sig = sig_add_constant(&sig, n, &form_type()).map_err(|e| e.to_string())?;
    }
    let n = form_constant(&sig, "N").unwrap();
    let bool_ = form_constant(&sig, "Bool").unwrap();
    sig = sig_add_constant(&sig, "zero", &n).map_err(|e| e.to_string())?;
    let zero = form_constant(&sig, "zero").unwrap();
    let arrow = |c: &TermJudgment| form_prod(&fresh_atom(&n, "_").unwrap(), c).unwrap();
    let x = fresh_atom(&n, "x").unwrap();
    let id = form_lambda(&x, &x).map_err(|e| e.to_string())?;
    let xi = fresh_atom(&form_eq_type(&arrow(&n), &arrow(&bool_)).unwrap(), "ξ").unwrap();
    let q = reflect_term_eq(&xi).map_err(|e| e.to_string())?;
    let q = q.as_type_eq().ok_or("ξ is not an equation of types")?;
    let id_bool = convert(&id, &q).map_err(|e| e.to_string())?;
    let app = form_app(&id_bool, &zero).map_err(|e| e.to_string())?;
    if !app.ty().alpha_eq(bool_.term()) {
        return Err(format!("unexpected type {}", print_judgment(&app)));
    }
    check_export(&export_term(&sig, &app)).map_err(|e| format!("oracle rejects: {e}"))?;
    match beta_witness(&app) {
        Err(NucleusError::NotARedex(_)) => Ok(format!("{} type-checks, no β-step", print_judgment(&app))),
        r => Err(format!("beta_witness gave {r:?}")),
    }
}

fn equal_vs_oracle() -> Outcome {
    let mut s = session();
    s.run_source(stlc::CONSTANTS, "constants").map_err(|e| e.to_string())?;
    let sig = s.interp.sig();
    let hints = s.interp.hints(&Ctx::default()).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(13);
    let (mut pairs, mut equal, mut skipped) = (0, 0, 0);
    while pairs < 500 {
        let ty = stlc::random_ty(&mut rng, 2);
        let l = stlc::random_tm(&mut rng, &mut Vec::new(), &ty, 3);
        let r = if rng.gen_bool(0.5) {
            stlc::expand(&mut rng, &mut Vec::new(), &l, &ty)
        } else {
            stlc::random_tm(&mut rng, &mut Vec::new(), &ty, 3)
        };
        if stlc::depth(&l) > 5 || stlc::depth(&r) > 5 {
            continue;
        }
        let Some(want) = stlc::oracle_equal(&l, &r, &ty, 10_000) else {
            skipped += 1;
            continue;
        };
        let lj = stlc::judgment(&sig, &mut Vec::new(), &l);
        let rj = stlc::judgment(&sig, &mut Vec::new(), &r);
        let mut engine = Engine::new(&sig, &hints, Some(100_000));
        let got = match engine.equal(&lj, &rj) {
            Ok(e) => e.is_some(),
            Err(StdlibError::Budget(_)) => return Err(format!("budget exhausted on {l:?} and {r:?}")),
            Err(e) => return Err(e.to_string()),
        };
        if got != want {
            return Err(format!("equal says {got}, oracle says {want} for {l:?} and {r:?}"));
        }
        pairs += 1;
        equal += usize::from(want);
    }
    Ok(format!("500 pairs agree ({equal} equal, {skipped} skipped for oracle fuel)"))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("transport", transport),
        ("hypothetical", hypothetical),
        ("symmetry", symmetry),
        ("sigma", sigma),
        ("naturals", naturals),
        ("untyped", untyped),
        ("universes", universes),
        ("auto", auto),
        ("construction soundness", constructions),
        ("join algebra", join_algebra),
        ("inversion round-trip", inversion),
        ("beta blocking", beta_blocking),
        ("equal against oracle", equal_vs_oracle),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        // The interpreter runs deep recursions; give each criterion a large stack.
        let r = std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn(f)
            .unwrap()
            .join()
            .unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(msg) => println!("[{:2}] PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[{:2}] FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
