"""Smoke test for the Python bindings.

Build the extension first, e.g. with `maturin develop` in crates/py, or copy
the cdylib from `cargo build -p andromeda-py --features extension-module`
next to this script as andromeda_py.so.
"""

import andromeda_py as a


def main():
    sig = a.Signature().add_constant("A", a.form_type())
    A = sig.constant("A")
    assert A.is_type()
    x = a.fresh_atom(A, "x")
    ident = a.form_lambda(x, x)
    assert str(ident) == "⊢ λ (x : A), x : A → A", str(ident)
    a.oracle_check(sig, ident)

    sig = sig.add_constant("c", A)
    c = sig.constant("c")
    app = a.form_app(ident, c)
    w = a.beta_witness(app)
    assert w.rhs.alpha_eq(c), str(w)

    try:
        a.beta_witness(c)
    except a.AndromedaError as e:
        assert "not a β-redex" in str(e)
    else:
        raise AssertionError("beta_witness accepted a constant")

    sig = sig.add_constant("B", a.form_type())
    xi = a.fresh_atom(a.form_eq_type(A, sig.constant("B")), "ξ")
    cb = a.convert(c, a.reflect(xi))
    assert str(cb) == "ξ₀ : A ≡ B ⊢ c : B", str(cb)
    assert cb.context == [("ξ₀", "A ≡ B")], cb.context
    a.oracle_check(sig, cb)

    s = a.Session()
    out = s.run("constant B : Type\nconstant b : B\ndo b")
    assert out == ["⊢ b : B"], out
    assert [str(j) for j in s.judgments()] == ["⊢ b : B"]
    try:
        s.run("do refl b : b ≡ c")
    except a.AndromedaError:
        pass
    else:
        raise AssertionError("unknown constant accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
