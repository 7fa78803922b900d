"""Independent sympy-based references used only by the tests."""

import sympy as sp

from uinvariants.polycore import Poly


def x_symbols(n):
    return sp.Matrix(n, n, lambda a, b: sp.Symbol(f"x{a + 1}_{b + 1}"))


def to_sympy(p: Poly):
    expr = 0
    for exps, c in p.items():
        term = sp.Rational(c.numerator, c.denominator) if hasattr(c, "denominator") else sp.Integer(c)
        for v, e in exps.items():
            name = {"x": "x", "s": "s", "t": "t"}[v.kind] + "_".join(str(i) for i in v.indices)
            term *= sp.Symbol(name) ** e
        expr += term
    return sp.expand(expr)


def sympy_J(k, i, n):
    """J_{k,i} built from scratch with sympy: last k-i rows of X over last i rows of adj(X)."""
    X = x_symbols(n)
    Xs = X.adjugate()
    rows = [X.row(r) for r in range(n - (k - i), n)] + [Xs.row(r) for r in range(n - i, n)]
    M = sp.Matrix.vstack(*rows)[:, :k]
    return sp.expand(M.det())


def sympy_det(rows):
    return sp.Matrix(rows).det(method="berkowitz")


def sympy_J_at(A, k, i):
    """J_{k,i}(A) for a numeric matrix, via sympy's own adjugate and determinant."""
    n = len(A)
    M = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in A])
    Ms = M.adjugate()
    rows = [M.row(r) for r in range(n - (k - i), n)] + [Ms.row(r) for r in range(n - i, n)]
    return sp.Matrix.vstack(*rows)[:, :k].det()
