//! Python bindings: nucleus judgments and rules, the independent checker, and
//! whole sessions of the meta-language.

use andromeda::nucleus::{self as n, json, EqTermJudgment, EqTypeJudgment, NucleusError, TermJudgment};
use andromeda::runtime::Value;
use andromeda::session::{Options, Session as Inner};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(andromeda, AndromedaError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    AndromedaError::new_err(e.to_string())
}

fn nucleus<T>(r: Result<T, NucleusError>) -> PyResult<T> {
    r.map_err(err)
}

#[pyclass(frozen, skip_from_py_object, module = "andromeda")]
#[derive(Clone)]
struct Signature(n::Signature);

#[pymethods]
impl Signature {
    #[new]
    fn new() -> Self {
        Signature(n::sig_empty())
    }

    /// A new signature extended with `name : ty`.
    fn add_constant(&self, name: &str, ty: &Judgment) -> PyResult<Signature> {
        nucleus(n::sig_add_constant(&self.0, name, &ty.0)).map(Signature)
    }

    fn constant(&self, name: &str) -> PyResult<Judgment> {
        nucleus(n::form_constant(&self.0, name)).map(Judgment)
    }

    fn __contains__(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// A term judgment `Γ ⊢ e : A`.
#[pyclass(frozen, skip_from_py_object, module = "andromeda")]
#[derive(Clone)]
struct Judgment(TermJudgment);

#[pymethods]
impl Judgment {
    #[getter]
    fn term(&self) -> String {
        n::print_term(self.0.context(), self.0.term())
    }

    #[getter]
    fn ty(&self) -> String {
        n::print_term(self.0.context(), self.0.ty())
    }

    /// Hypotheses as `(name, type)` pairs.
    #[getter]
    fn context(&self) -> Vec<(String, String)> {
        n::context_of(&self.0)
            .iter()
            .map(|h| (n::print_term(h.context(), h.term()), n::print_term(h.context(), h.ty())))
            .collect()
    }

    fn type_of(&self) -> Judgment {
        Judgment(self.0.type_of())
    }

    fn is_type(&self) -> bool {
        self.0.is_type()
    }

    fn alpha_eq(&self, other: &Judgment) -> bool {
        n::alpha_equal(&self.0, &other.0)
    }

    fn to_json(&self, sig: &Signature) -> String {
        n::json::json_export(&sig.0, &self.0)
    }

    fn __str__(&self) -> String {
        n::print_judgment(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("<Judgment {}>", n::print_judgment(&self.0))
    }
}

/// A term equation `Γ ⊢ l ≡ r : A`.
#[pyclass(frozen, skip_from_py_object, module = "andromeda")]
#[derive(Clone)]
struct Equation(EqTermJudgment);

#[pymethods]
impl Equation {
    #[getter]
    fn lhs(&self) -> Judgment {
        Judgment(n::eq_lhs(&self.0))
    }

    #[getter]
    fn rhs(&self) -> Judgment {
        Judgment(n::eq_rhs(&self.0))
    }

    fn sym(&self) -> Equation {
        Equation(n::eq_sym(&self.0))
    }

    fn trans(&self, other: &Equation) -> PyResult<Equation> {
        nucleus(n::eq_trans(&self.0, &other.0)).map(Equation)
    }

    /// The judgment `refl r : l ≡ r`.
    fn reify(&self) -> Judgment {
        Judgment(n::refl_of_eq(&self.0))
    }

    fn __str__(&self) -> String {
        n::print_judgment(&n::refl_of_eq(&self.0))
    }
}

fn type_eq(e: &Equation) -> PyResult<EqTypeJudgment> {
    e.0.as_type_eq().ok_or_else(|| err(NucleusError::NotAType))
}

#[pyfunction]
fn form_type() -> Judgment {
    Judgment(n::form_type())
}

#[pyfunction]
fn fresh_atom(ty: &Judgment, name: &str) -> PyResult<Judgment> {
    nucleus(n::fresh_atom(&ty.0, name)).map(Judgment)
}

#[pyfunction]
fn form_prod(x: &Judgment, cod: &Judgment) -> PyResult<Judgment> {
    nucleus(n::form_prod(&x.0, &cod.0)).map(Judgment)
}

#[pyfunction]
fn form_lambda(x: &Judgment, body: &Judgment) -> PyResult<Judgment> {
    nucleus(n::form_lambda(&x.0, &body.0)).map(Judgment)
}

#[pyfunction]
fn form_app(f: &Judgment, a: &Judgment) -> PyResult<Judgment> {
    nucleus(n::form_app(&f.0, &a.0)).map(Judgment)
}

#[pyfunction]
fn form_eq_type(l: &Judgment, r: &Judgment) -> PyResult<Judgment> {
    nucleus(n::form_eq_type(&l.0, &r.0)).map(Judgment)
}

#[pyfunction]
fn form_refl(t: &Judgment) -> Judgment {
    Judgment(n::form_refl(&t.0))
}

#[pyfunction]
fn convert(t: &Judgment, eq: &Equation) -> PyResult<Judgment> {
    nucleus(n::convert(&t.0, &type_eq(eq)?)).map(Judgment)
}

/// Equality reflection: a term of `l ≡ r` gives the equation.
#[pyfunction]
fn reflect(p: &Judgment) -> PyResult<Equation> {
    nucleus(n::reflect_term_eq(&p.0)).map(Equation)
}

#[pyfunction]
fn beta_witness(app: &Judgment) -> PyResult<Equation> {
    nucleus(n::beta_witness(&app.0)).map(Equation)
}

#[pyfunction]
fn eq_refl(t: &Judgment) -> Equation {
    Equation(n::eq_refl(&t.0))
}

#[pyfunction]
fn natural_type_eq(sig: &Signature, t: &Judgment) -> PyResult<Equation> {
    nucleus(n::natural_type_eq(&sig.0, &t.0)).map(|e| Equation(e.as_term_eq().clone()))
}

/// Replaces the atom judgment `x` by `value` in `target`.
#[pyfunction]
fn substitute(target: &Judgment, x: &Judgment, value: &Judgment) -> PyResult<Judgment> {
    let atom = x.0.as_atom().ok_or_else(|| err("expected an atom"))?;
    nucleus(n::substitute(&target.0, atom, &value.0)).map(Judgment)
}

/// Re-checks a judgment with the independent checker.
#[pyfunction]
fn oracle_check(sig: &Signature, j: &Judgment) -> PyResult<()> {
    andromeda::oracle::check_export(&json::export_term(&sig.0, &j.0)).map_err(err)
}

/// A meta-language session with the prelude loaded.
#[pyclass(unsendable, module = "andromeda")]
struct Session(Inner);

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (prelude = true, typecheck = true, step_budget = None))]
    fn new(prelude: bool, typecheck: bool, step_budget: Option<u64>) -> PyResult<Self> {
        let opts = Options { no_prelude: !prelude, typecheck, step_budget, ..Default::default() };
        Inner::new(opts).map(Session).map_err(err)
    }

    /// Runs source text and returns the lines it printed.
    fn run(&mut self, src: &str) -> PyResult<Vec<String>> {
        let before = self.0.output.len();
        self.0.run_source(src, "<python>").map_err(err)?;
        Ok(self.0.output[before..].to_vec())
    }

    fn run_file(&mut self, path: std::path::PathBuf) -> PyResult<Vec<String>> {
        let before = self.0.output.len();
        self.0.run_file(&path).map_err(err)?;
        Ok(self.0.output[before..].to_vec())
    }

    /// Judgments produced by `do` commands so far.
    fn judgments(&self) -> Vec<Judgment> {
        self.0.values.iter().filter_map(|v| match v {
            Value::Judg(j) => Some(Judgment(j.clone())),
            _ => None,
        }).collect()
    }

    fn signature(&self) -> Signature {
        Signature(self.0.interp.sig())
    }

    /// How many times an operation has been triggered.
    fn operation_count(&self, op: &str) -> u64 {
        self.0.interp.operation_count(op)
    }
}

#[pymodule]
fn andromeda_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AndromedaError", m.py().get_type::<AndromedaError>())?;
    m.add_class::<Signature>()?;
    m.add_class::<Judgment>()?;
    m.add_class::<Equation>()?;
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(form_type, m)?)?;
    m.add_function(wrap_pyfunction!(fresh_atom, m)?)?;
    m.add_function(wrap_pyfunction!(form_prod, m)?)?;
    m.add_function(wrap_pyfunction!(form_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(form_app, m)?)?;
    m.add_function(wrap_pyfunction!(form_eq_type, m)?)?;
    m.add_function(wrap_pyfunction!(form_refl, m)?)?;
    m.add_function(wrap_pyfunction!(convert, m)?)?;
    m.add_function(wrap_pyfunction!(reflect, m)?)?;
    m.add_function(wrap_pyfunction!(beta_witness, m)?)?;
    m.add_function(wrap_pyfunction!(eq_refl, m)?)?;
    m.add_function(wrap_pyfunction!(natural_type_eq, m)?)?;
    m.add_function(wrap_pyfunction!(substitute, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_check, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_passes_the_checker() {
        let sig = Signature::new().add_constant("A", &form_type()).unwrap();
        let a = sig.constant("A").unwrap();
        let x = fresh_atom(&a, "x").unwrap();
        let id = form_lambda(&x, &x).unwrap();
        assert_eq!(id.__str__(), "⊢ λ (x : A), x : A → A");
        assert!(oracle_check(&sig, &id).is_ok());
        assert!(beta_witness(&a).is_err());
    }
}
