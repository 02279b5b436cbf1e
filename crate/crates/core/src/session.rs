//! A session: the prelude, the scope of top-level names and the interpreter state.

use crate::mltype::Checker;
use crate::nucleus::{json, print_judgment, sig_add_constant};
use crate::runtime::{self, on_big_stack, Ctx, Interp, Value};
use crate::syntax::ast::{Top, TopKind};
use crate::syntax::resolve::{Entity, Scope};
use crate::syntax::{parse_file, SyntaxError};
use std::path::{Path, PathBuf};
use std::rc::Rc;

pub const PRELUDE: &str = include_str!("../lib/prelude.aml");

const OPERATIONS: [(&str, usize); 5] = [("equal", 2), ("as_prod", 1), ("as_eq", 1), ("coerce", 2), ("coerce_fun", 1)];

const TAGS: [(&str, usize); 7] = [
    ("None", 0),
    ("Some", 1),
    ("NotCoercible", 0),
    ("Convertible", 1),
    ("Coercible", 1),
    ("lazy", 0),
    ("eager", 0),
];

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("{file}:{err}")]
    Syntax { file: String, err: SyntaxError },
    #[error("{file}:{err}")]
    Runtime { file: String, err: runtime::Error },
    #[error("{file}:{err}")]
    Type { file: String, err: crate::mltype::TypeError },
    #[error("{file}: cannot read {path}: {msg}")]
    Include { file: String, path: String, msg: String },
    #[error("{0}")]
    Io(String),
}

impl SessionError {
    /// Errors that point at a defect in the implementation rather than the program.
    pub fn is_internal(&self) -> bool {
        matches!(self, SessionError::Runtime { err, .. } if matches!(err.kind, runtime::ErrorKind::Internal(_)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub no_prelude: bool,
    pub json: bool,
    pub step_budget: Option<u64>,
    pub keep_going: bool,
    pub include_dirs: Vec<PathBuf>,
    pub typecheck: bool,
}

pub struct Session {
    pub interp: Interp,
    scope: Scope,
    types: Checker,
    opts: Options,
    /// Files being included, innermost last.
    including: Vec<PathBuf>,
    /// Everything the session has printed so far.
    pub output: Vec<String>,
    /// Values of `do` commands, in order.
    pub values: Vec<Value>,
    pub errors: Vec<SessionError>,
    pub warnings: Vec<String>,
}

impl Session {
    pub fn new(opts: Options) -> Result<Session, SessionError> {
        let interp = Interp::new();
        interp.0.budget.set(opts.step_budget);
        let mut scope = Scope::new();
        for b in runtime::builtin_names() {
            scope.declare(b, Entity::Var);
        }
        for (op, k) in OPERATIONS {
            scope.declare(op, Entity::Op(k));
        }
        for (t, k) in TAGS {
            scope.declare(t, Entity::Tag(k));
        }
        for d in runtime::DYNAMICS {
            scope.declare(d, Entity::Dyn);
        }
        let mut s = Session { interp, scope, types: Checker::new(), opts, including: Vec::new(), output: Vec::new(), values: Vec::new(), errors: Vec::new(), warnings: Vec::new() };
        if !s.opts.no_prelude {
            let keep = s.opts.keep_going;
            s.opts.keep_going = false;
            s.run_source(PRELUDE, "prelude.aml")?;
            s.output.clear();
            s.values.clear();
            s.opts.keep_going = keep;
        }
        Ok(s)
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn types(&self) -> &Checker {
        &self.types
    }

    /// Runs a file, with includes resolved relative to it.
    pub fn run_file(&mut self, path: &Path) -> Result<(), SessionError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| SessionError::Io(format!("cannot read {}: {e}", path.display())))?;
        self.including.push(path.to_path_buf());
        let out = self.run_source(&src, &path.display().to_string());
        self.including.pop();
        out
    }

    /// Runs source text. With `keep_going`, errors are collected and the remaining commands still run.
    pub fn run_source(&mut self, src: &str, file: &str) -> Result<(), SessionError> {
        let tops = parse_file(src).map_err(|err| SessionError::Syntax { file: file.to_string(), err })?;
        for t in &tops {
            if let Err(e) = self.run_top(t, file) {
                if !self.opts.keep_going {
                    return Err(e);
                }
                self.output.push(format!("error: {e}"));
                self.errors.push(e);
            }
        }
        Ok(())
    }

    fn run_top(&mut self, t: &Top, file: &str) -> Result<(), SessionError> {
        let saved = self.scope.clone();
        let out = self.resolve_and_exec(t, file);
        if out.is_err() {
            self.scope = saved;
        }
        let printed: Vec<String> = self.interp.0.printed.borrow_mut().drain(..).collect();
        self.output.extend(printed);
        out
    }

    fn resolve_and_exec(&mut self, t: &Top, file: &str) -> Result<(), SessionError> {
        let t = self.scope.resolve_top(t).map_err(|err| SessionError::Syntax { file: file.to_string(), err })?;
        if let TopKind::Include(path) = &t.kind {
            return self.include(path, file);
        }
        if self.opts.typecheck {
            let r = self.types.top(&t);
            for w in self.types.warnings.drain(..) {
                self.warnings.push(format!("{file}:{w}"));
            }
            r.map_err(|err| SessionError::Type { file: file.to_string(), err })?;
        }
        let interp = self.interp.clone();
        let json = self.opts.json;
        let top = t.clone();
        let shown = on_big_stack(move || {
            let v = exec(&interp, &top)?;
            Ok(v.map(|v| {
                let s = show(&interp, &v, json);
                (v, s)
            }))
        })
        .map_err(|err| SessionError::Runtime { file: file.to_string(), err })?;
        let printed: Vec<String> = self.interp.0.printed.borrow_mut().drain(..).collect();
        self.output.extend(printed);
        if let Some((v, s)) = shown {
            self.output.push(s);
            self.values.push(v);
        }
        Ok(())
    }

    fn include(&mut self, path: &str, file: &str) -> Result<(), SessionError> {
        let mut candidates = Vec::new();
        if let Some(dir) = self.including.last().and_then(|p| p.parent()) {
            candidates.push(dir.join(path));
        }
        candidates.extend(self.opts.include_dirs.iter().map(|d| d.join(path)));
        candidates.push(PathBuf::from(path));
        let Some(found) = candidates.into_iter().find(|p| p.is_file()) else {
            return Err(SessionError::Include { file: file.to_string(), path: path.to_string(), msg: "not found".into() });
        };
        if self.including.iter().any(|p| p == &found) {
            return Err(SessionError::Include { file: file.to_string(), path: path.to_string(), msg: "cyclic include".into() });
        }
        self.run_file(&found)
    }
}

fn show(interp: &Interp, v: &Value, json: bool) -> String {
    match v {
        Value::Judg(j) if json => json::json_export(&interp.sig(), j),
        Value::Judg(j) => print_judgment(j),
        v => v.to_string(),
    }
}

/// Executes one resolved command, returning the value of a `do` unless it is `()`.
fn exec(interp: &Interp, t: &Top) -> runtime::Result<Option<Value>> {
    let cx = Ctx::default();
    match &t.kind {
        TopKind::Constant(names, c) => {
            let ty = interp.ty(c, &cx).map_err(|e| e.at(t.span))?;
            for n in names {
                let sig = sig_add_constant(&interp.sig(), n, &ty).map_err(|e| runtime::Error::from(e).at(t.span))?;
                *interp.0.sig.borrow_mut() = sig;
            }
        }
        TopKind::Do(c) => {
            let v = interp.infer(c, &cx)?;
            if !v.is_unit() {
                return Ok(Some(v));
            }
        }
        TopKind::Let(binds) => {
            let mut bound = Vec::new();
            for (p, c) in binds {
                let v = interp.infer(c, &cx)?;
                if !interp.match_pattern(p, &v, &cx.env, &mut bound) {
                    return Err(runtime::Error::new(runtime::ErrorKind::MatchFailure(v.to_string())).at(c.span));
                }
            }
            for (n, v) in bound {
                interp.set_global(n, v);
            }
        }
        TopKind::LetRec(defs) => {
            for (n, v) in runtime::rec_values(defs) {
                interp.set_global(n, v);
            }
        }
        TopKind::Dynamic(n, c) | TopKind::Now(n, c) => {
            let v = interp.infer(c, &cx)?;
            interp.set_dynamic(n.clone(), v);
        }
        TopKind::GlobalHandle(h) => interp.add_global_handler(Rc::clone(h)),
        TopKind::Operation(..) | TopKind::MlType(_) | TopKind::Verbosity(_) | TopKind::Include(_) => {}
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> Result<Vec<String>, SessionError> {
        let mut s = Session::new(Options { typecheck: true, ..Default::default() })?;
        s.run_source(src, "t")?;
        Ok(s.output)
    }

    #[test]
    fn handlers_resume_continuations() {
        let out = run("constant A : Type\nconstant a : A\noperation pick : judgment\n\
                       do handle (pick, pick) with | pick ⇒ yield a end")
        .unwrap();
        assert_eq!(out, ["(⊢ a : A, ⊢ a : A)"]);
    }

    #[test]
    fn continuations_are_one_shot() {
        let e = run("operation pick : judgment\ndo handle pick with | pick ⇒ yield (yield Type) end").unwrap_err();
        assert!(e.to_string().contains("resumed twice"), "{e}");
    }

    #[test]
    fn unhandled_operations_are_errors() {
        let e = run("operation pick : judgment\ndo pick").unwrap_err();
        assert!(e.to_string().starts_with("t:2:"), "{e}");
    }

    #[test]
    fn val_clauses_transform_the_result() {
        let out = run("operation pick : judgment\n\
                       do handle [pick] with | pick ⇒ yield Type | val ?v ⇒ (v, v) end")
        .unwrap();
        assert_eq!(out, ["([⊢ Type : Type], [⊢ Type : Type])"]);
    }

    #[test]
    fn datatypes_and_dynamics() {
        let out = run("constant A : Type\nmltype color = | Red | Green of judgment end\n\
                       let f = fun c ⇒ match c with | Red ⇒ A | Green ?x ⇒ x end\n\
                       do f Red\ndo f (Green Type)\n\
                       dynamic d = A\ndo now d = Type in d\ndo d")
        .unwrap();
        assert_eq!(out, ["⊢ A : Type", "⊢ Type : Type", "⊢ Type : Type", "⊢ A : Type"]);
    }

    #[test]
    fn keep_going_collects_errors() {
        let mut s = Session::new(Options { keep_going: true, ..Default::default() }).unwrap();
        s.run_source("constant A : Type\ndo refl A : A\ndo A", "t").unwrap();
        assert_eq!(s.errors.len(), 1);
        assert!(s.output[0].starts_with("error: t:2:"), "{:?}", s.output);
        assert_eq!(s.output.last().unwrap(), "⊢ A : Type");
    }

    #[test]
    fn includes_resolve_relative_to_the_file_and_detect_cycles() {
        let dir = std::env::temp_dir().join(format!("andromeda-include-{}", std::process::id()));
        std::fs::create_dir_all(dir.join("lib")).unwrap();
        std::fs::write(dir.join("lib/base.aml"), "constant A : Type\n").unwrap();
        std::fs::write(dir.join("main.aml"), "#include \"lib/base.aml\"\ndo A\n").unwrap();
        std::fs::write(dir.join("loop.aml"), "#include \"loop.aml\"\n").unwrap();
        let mut s = Session::new(Options::default()).unwrap();
        s.run_file(&dir.join("main.aml")).unwrap();
        assert_eq!(s.output, ["⊢ A : Type"]);
        let e = Session::new(Options::default()).unwrap().run_file(&dir.join("loop.aml")).unwrap_err();
        assert!(matches!(e, SessionError::Include { .. }), "{e}");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn no_prelude_means_no_equality_handler() {
        let mut s = Session::new(Options { no_prelude: true, ..Default::default() }).unwrap();
        s.run_source("constant A : Type\nconstant a : A\ndo a", "t").unwrap();
        assert!(s.run_source("constant B : Type\nconstant q : A ≡ B\ndo a : B", "t").is_err());
    }
}
