"""The invariants J_{k,i} of the adjoint action restricted to U.

X is the generic matrix (x_{ab}) and X* its adjugate.  Y_i stacks the last
n-i rows of X on top of the last i rows of X*, and J_{k,i} is the lower-left
corner minor of order k of Y_i.  U is the group of upper unitriangular
matrices acting by rho_g f(A) = f(g^{-1} A g).

Symbolic construction is only practical for small n (J_{n,n-1} carries a
factor det(X)^{n-2}).  For larger n every generator is evaluated at a
numeric matrix through :func:`generator_values`, which builds Y_i(A) from A
and adj(A) directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .errors import BadIndex
from .polycore import Poly, VarId, registry, t, x
from .symmatrix import (
    PolyMatrix,
    adjugate,
    adjugate_rational,
    adjugate_rows,
    corner_minor,
    det_bareiss,
    inverse_rational,
    mat_inverse,
    mat_mul,
    mat_mul_rational,
    minor_det,
    rational_rows,
)

Index = Tuple[int, int]

RANDOM_RANGE = 9


def check_index(k: int, i: int, n: int) -> None:
    if not (1 <= k <= n and 0 <= i <= k - 1):
        raise BadIndex(f"(k={k}, i={i}) is not a generator index for n={n}")


def gen_indices(n: int) -> List[Index]:
    """All (k, i) with 1 <= k <= n and 0 <= i <= k-1, sorted by (k, i)."""
    return [(k, i) for k in range(1, n + 1) for i in range(k)]


def expected_degree(k: int, i: int, n: int) -> int:
    # k-i rows of degree 1 from X, i rows of degree n-1 from X*
    return (k - i) + i * (n - 1)


# --------------------------------------------------------------- symbolic side


@lru_cache(maxsize=None)
def build_X(n: int) -> PolyMatrix:
    if n < 1:
        raise ValueError("n must be >= 1")
    return PolyMatrix([[x(a, b, n) for b in range(1, n + 1)] for a in range(1, n + 1)], registry(n))


@lru_cache(maxsize=None)
def build_Xstar(n: int) -> PolyMatrix:
    return adjugate(build_X(n))


def stack_Y(rows, adj_rows, i: int) -> list:
    """Rows of Y_i from the rows of a matrix and of its adjugate (0-based lists)."""
    n = len(rows)
    return list(rows[i:]) + list(adj_rows[n - i :])


@lru_cache(maxsize=None)
def build_Y(i: int, n: int) -> PolyMatrix:
    if not 0 <= i <= n - 1:
        raise BadIndex(f"Y_{i} undefined for n={n}")
    X = build_X(n)
    if i == 0:
        return X
    return PolyMatrix(stack_Y(X.rows(), build_Xstar(n).rows(), i), X.reg)


@lru_cache(maxsize=None)
def build_J(k: int, i: int, n: int) -> Poly:
    check_index(k, i, n)
    return corner_minor(build_Y(i, n), k)


@dataclass(frozen=True)
class GenSet:
    """The generator family {J_{k,i}} for one n."""

    n: int
    members: Dict[Index, Poly] = field(repr=False)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, ki: Index) -> Poly:
        return self.members[ki]

    def degree(self, k: int, i: int) -> int:
        return self.members[(k, i)].total_degree()

    def term_count(self, k: int, i: int) -> int:
        return len(self.members[(k, i)])

    def dump(self) -> List[dict]:
        return [
            {
                "k": k,
                "i": i,
                "n": self.n,
                "degree": p.total_degree(),
                "terms": len(p),
                "poly": p.to_text(),
            }
            for (k, i), p in sorted(self.members.items())
        ]


def generator_set(n: int) -> GenSet:
    if n < 1:
        raise ValueError("n must be >= 1")
    return GenSet(n, {ki: build_J(*ki, n) for ki in gen_indices(n)})


def elementary_unipotent(a: int, b: int, n: int, param: Poly | None = None) -> PolyMatrix:
    """E + t * e_{ab} for a < b, with t the first parameter variable unless given."""
    if not 1 <= a < b <= n:
        raise ValueError(f"({a},{b}) is not strictly upper for n={n}")
    reg = registry(n)
    tt = t(1, n) if param is None else param
    rows = [[Poly.const(reg, int(r == c)) for c in range(1, n + 1)] for r in range(1, n + 1)]
    rows[a - 1][b - 1] = tt
    return PolyMatrix(rows, reg)


def conjugate(g: PolyMatrix, M: PolyMatrix) -> PolyMatrix:
    """g^{-1} M g."""
    return mat_mul(mat_mul(mat_inverse(g), M), g)


def rho(g: PolyMatrix, f: Poly, n: int) -> Poly:
    """rho_g f: substitute x_{ab} by entry (a, b) of g^{-1} X g."""
    if g.n != n:
        raise ValueError("g has the wrong order")
    moved = conjugate(g, build_X(n))
    mapping = {VarId("x", (a, b), n): moved[a, b] for a in range(1, n + 1) for b in range(1, n + 1)}
    return f.substitute(mapping)


def symbolic_invariance_failures(f: Poly, n: int) -> List[Tuple[int, int]]:
    """Positions (a, b) whose elementary unipotent moves ``f`` (empty = invariant)."""
    bad = []
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if rho(elementary_unipotent(a, b, n), f, n) - f:
                bad.append((a, b))
    return bad


# ---------------------------------------------------------------- numeric side


def generator_values(A, indices: Optional[Sequence[Index]] = None) -> Dict[Index, object]:
    """Exact J_{k,i}(A) for a numeric matrix; adj(A) is built once and shared."""
    rows = rational_rows(A)
    n = len(rows)
    wanted = gen_indices(n) if indices is None else list(indices)
    adj = adjugate_rational(rows) if any(i for _, i in wanted) else None
    out = {}
    for k, i in wanted:
        check_index(k, i, n)
        Y = stack_Y(rows, adj, i) if i else rows
        out[(k, i)] = det_bareiss([r[:k] for r in Y[n - k :]])
    return out


def generator_values_ring(M: Sequence[Sequence], one) -> Dict[Index, object]:
    """J_{k,i}(M) over any commutative ring (division-free, for jets)."""
    n = len(M)
    adj = adjugate_rows(M, one)
    out = {}
    for k, i in gen_indices(n):
        Y = stack_Y(M, adj, i) if i else M
        out[(k, i)] = minor_det(Y, tuple(range(n - k, n)), tuple(range(k)), {}, one)
    return out


def generator_evaluator(k: int, i: int, n: int) -> Callable:
    check_index(k, i, n)
    return lambda A: generator_values(A, [(k, i)])[(k, i)]


# ------------------------------------------------------------ random sampling


def trial_rng(seed: int, label: str, trial: int) -> random.Random:
    """Independent per-trial stream, reproducible from the master seed."""
    return random.Random(f"{seed}/{label}/{trial}")


def random_unipotent(n: int, rng: random.Random) -> List[List[int]]:
    return [
        [1 if r == c else (rng.randint(-RANDOM_RANGE, RANDOM_RANGE) if c > r else 0) for c in range(n)]
        for r in range(n)
    ]


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-RANDOM_RANGE, RANDOM_RANGE), rng.randint(1, RANDOM_RANGE))


def random_matrix(n: int, rng: random.Random) -> List[List[Fraction]]:
    return [[random_rational(rng) for _ in range(n)] for _ in range(n)]


def random_omega_matrix(n: int, rng: random.Random, max_tries: int = 1000) -> List[List[Fraction]]:
    """Random rational matrix with every lower-left corner minor nonzero."""
    for _ in range(max_tries):
        A = random_matrix(n, rng)
        if all(det_bareiss([r[:k] for r in A[n - k :]]) != 0 for k in range(1, n + 1)):
            return A
    raise RuntimeError("could not sample a matrix with nonzero corner minors")


def conjugate_rational(u, A):
    """u^{-1} A u for numeric matrices."""
    return mat_mul_rational(mat_mul_rational(inverse_rational(u), A), u)


# ------------------------------------------------------------------ verdicts


@dataclass
class InvarianceVerdict:
    passed: bool
    trials: int
    seed: int
    witness: Optional[dict] = None

    def __bool__(self):
        return self.passed


def _as_evaluator(f: Union[Poly, Callable], n: int) -> Callable:
    if isinstance(f, Poly):
        if f.reg is not registry(n):
            raise ValueError("polynomial does not live over n x n matrices")

        def ev(A):
            point = {VarId("x", (a + 1, b + 1), n): A[a][b] for a in range(n) for b in range(n)}
            return f.eval(point)

        return ev
    return f


def check_invariance(f: Union[Poly, Callable], n: int, trials: int = 20, seed: int = 0) -> InvarianceVerdict:
    """Randomized exact test of f(u^{-1} A u) == f(A) over random unipotent u.

    ``f`` is a polynomial in the x-variables of order ``n`` or any callable on
    a numeric matrix (list of rows).  A failed verdict carries the first
    counterexample.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ev = _as_evaluator(f, n)
    for trial in range(trials):
        rng = trial_rng(seed, "invariance", trial)
        A = random_omega_matrix(n, rng)
        u = random_unipotent(n, rng)
        B = conjugate_rational(u, A)
        before, after = ev(A), ev(B)
        if before != after:
            return InvarianceVerdict(
                False,
                trial + 1,
                seed,
                {"trial": trial, "A": _str_rows(A), "u": _str_rows(u), "f(A)": str(before), "f(u^-1 A u)": str(after)},
            )
    return InvarianceVerdict(True, trials, seed)


def check_family_invariance(
    n: int,
    trials: int = 20,
    seed: int = 0,
    overrides: Optional[Dict[Index, Callable]] = None,
) -> Dict[Index, InvarianceVerdict]:
    """Invariance of every J_{k,i} for one n, sharing each trial's fingerprint.

    ``overrides`` replaces individual generators by other evaluators; it is
    how a tampered family is fed through the same harness.
    """
    overrides = overrides or {}
    verdicts: Dict[Index, InvarianceVerdict] = {}
    for trial in range(trials):
        rng = trial_rng(seed, "family", trial)
        A = random_omega_matrix(n, rng)
        u = random_unipotent(n, rng)
        B = conjugate_rational(u, A)
        va, vb = generator_values(A), generator_values(B)
        for ki, fn in overrides.items():
            va[ki], vb[ki] = fn(A), fn(B)
        for ki in gen_indices(n):
            if ki in verdicts:
                continue
            if va[ki] != vb[ki]:
                verdicts[ki] = InvarianceVerdict(
                    False,
                    trial + 1,
                    seed,
                    {"trial": trial, "A": _str_rows(A), "u": _str_rows(u), "f(A)": str(va[ki]), "f(u^-1 A u)": str(vb[ki])},
                )
    for ki in gen_indices(n):
        verdicts.setdefault(ki, InvarianceVerdict(True, trials, seed))
    return verdicts


def _str_rows(A) -> List[List[str]]:
    return [[str(v) for v in row] for row in A]
