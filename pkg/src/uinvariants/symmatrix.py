"""Square matrices of polynomials and exact determinants.

Two determinant routes are provided and kept independent of one another:

* :func:`laplace_det` expands along rows and memoizes minors by
  ``(rows, cols)``.  It never divides, so it works over any commutative
  ring: :class:`~uinvariants.polycore.Poly`, ``Fraction``, or jets.
* :func:`det_bareiss` is fraction-free Gaussian elimination for constant
  matrices.

Row and column arguments of the public functions are 1-based.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import BadOrder, Singular
from .polycore import Poly, Registry, as_rational, parse_poly, registry

__all__ = [
    "PolyMatrix",
    "laplace_det",
    "minor_det",
    "det",
    "adjugate",
    "adjugate_rows",
    "rank_exact",
    "corner_minor",
    "mat_mul",
    "mat_inverse",
    "det_bareiss",
    "det_cofactor",
    "adjugate_rational",
    "inverse_rational",
    "mat_mul_rational",
    "rational_rows",
    "identity_rows",
]


# --------------------------------------------------------------------------
# generic division-free determinant


def minor_det(M, rows: Tuple[int, ...], cols: Tuple[int, ...], memo: Dict, one):
    """Determinant of the submatrix ``M[rows][cols]`` (0-based index tuples).

    Expands along ``rows[0]``.  ``memo`` may be shared between calls on the
    same ``M``; the adjugate relies on that.
    """
    if not rows:
        return one
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    r = rows[0]
    rest = rows[1:]
    row = M[r]
    acc = None
    for j, c in enumerate(cols):
        e = row[c]
        if not e:
            continue
        sub = minor_det(M, rest, cols[:j] + cols[j + 1 :], memo, one)
        if not sub:
            continue
        term = e * sub
        if j & 1:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        acc = one - one
    memo[key] = acc
    return acc


def laplace_det(M: Sequence[Sequence], one=1):
    n = len(M)
    return minor_det(M, tuple(range(n)), tuple(range(n)), {}, one)


# --------------------------------------------------------------------------
# constant matrices


def rational_rows(A) -> List[List]:
    """Normalize a numeric matrix (PolyMatrix of constants or nested sequence)."""
    if isinstance(A, PolyMatrix):
        return A.to_rationals()
    rows = [[as_rational(v) for v in row] for row in A]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    return rows


def identity_rows(n: int) -> List[List[int]]:
    return [[1 if r == c else 0 for c in range(n)] for r in range(n)]


def det_bareiss(A: Sequence[Sequence]):
    """Fraction-free elimination with row pivoting on exact scalars."""
    M = [list(row) for row in A]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for r in range(k + 1, n):
            rk = M[r][k]
            row_r = M[r]
            row_k = M[k]
            for c in range(k + 1, n):
                num = row_r[c] * pivot - rk * row_k[c]
                if num.__class__ is int and prev.__class__ is int:
                    # divisibility is only guaranteed for integer input
                    q, rem = divmod(num, prev)
                    row_r[c] = q if not rem else Fraction(num, prev)
                else:
                    row_r[c] = _exact(Fraction(num) / prev)
            row_r[k] = 0
        prev = pivot
    d = M[n - 1][n - 1]
    return _exact(sign * d)


def _exact(v):
    # int/int true division yields float; keep everything rational
    if isinstance(v, float):
        raise TypeError("floating point leaked into exact elimination")
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def det_cofactor(A: Sequence[Sequence]):
    """Memoized Laplace expansion on a constant matrix (oracle for Bareiss)."""
    return laplace_det([[Fraction(v) for v in row] for row in A], Fraction(1))


def inverse_rational(A: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(r == c)) for c in range(n)] for r, row in enumerate(A)]
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][k]
        M[k] = [v * inv for v in M[k]]
        for r in range(n):
            if r != k and M[r][k] != 0:
                f = M[r][k]
                M[r] = [a - f * b for a, b in zip(M[r], M[k])]
    return [[_exact(v) for v in row[n:]] for row in M]


def adjugate_rational(A: Sequence[Sequence]):
    """Adjugate of a constant matrix; valid for singular input too."""
    n = len(A)
    if n == 1:
        return [[1]]
    d = det_bareiss([[Fraction(v) for v in row] for row in A])
    if d != 0:
        inv = inverse_rational(A)
        return [[_exact(d * v) for v in row] for row in inv]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[Fraction(A[r][c]) for c in range(n) if c != i] for r in range(n) if r != j]
            v = det_bareiss(minor)
            out[i][j] = -v if (i + j) & 1 else v
    return out


def mat_mul_rational(A, B):
    n = len(A)
    m = len(B[0])
    return [[_exact(sum((A[r][k] * B[k][c] for k in range(len(B))), 0)) for c in range(m)] for r in range(n)]


# --------------------------------------------------------------------------
# polynomial matrices


class PolyMatrix:
    """Immutable n-by-n matrix with :class:`Poly` entries of one registry.

    ``M[a, b]`` reads the entry in row ``a`` and column ``b``, 1-based.
    """

    __slots__ = ("n", "reg", "_rows")

    def __init__(self, rows: Sequence[Sequence], reg: Registry | None = None):
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("PolyMatrix must be square and non-empty")
        if reg is None:
            reg = next((e.reg for r in rows for e in r if isinstance(e, Poly)), None) or registry(n)
        conv = []
        for r in rows:
            new = []
            for e in r:
                if isinstance(e, Poly):
                    if e.reg is not reg:
                        raise ValueError("entries from different registries")
                    new.append(e)
                else:
                    new.append(Poly.const(reg, e))
            conv.append(tuple(new))
        self.n = n
        self.reg = reg
        self._rows = tuple(conv)

    @classmethod
    def identity(cls, n: int, reg: Registry | None = None) -> "PolyMatrix":
        return cls(identity_rows(n), reg or registry(n))

    @classmethod
    def from_rationals(cls, rows, reg: Registry | None = None) -> "PolyMatrix":
        rows = rational_rows(rows)
        return cls(rows, reg or registry(len(rows)))

    def __getitem__(self, ab):
        a, b = ab
        if not (1 <= a <= self.n and 1 <= b <= self.n):
            raise IndexError(f"entry ({a},{b}) outside a {self.n}x{self.n} matrix")
        return self._rows[a - 1][b - 1]

    def row(self, a: int) -> Tuple[Poly, ...]:
        return self._rows[a - 1]

    def rows(self) -> Tuple[Tuple[Poly, ...], ...]:
        return self._rows

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in r) for r in self._rows)
        return f"PolyMatrix([{body}])"

    def is_constant(self) -> bool:
        return all(e.is_constant() for r in self._rows for e in r)

    def to_rationals(self) -> List[List]:
        return [[e.constant_value() for e in r] for r in self._rows]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> List[List[Poly]]:
        """Entries on the given 1-based rows and columns (not necessarily square)."""
        return [[self._rows[a - 1][b - 1] for b in cols] for a in rows]

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)], self.reg)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)], self.reg)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return mat_mul(self, other)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[e * c for e in r] for r in self._rows], self.reg)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in r] for r in self._rows], self.reg)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "entries": [[e.to_text() for e in r] for r in self._rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PolyMatrix":
        n = int(obj["n"])
        entries = obj["entries"]
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ValueError(f"entries do not form a {n}x{n} matrix")
        rows = [[_parse_entry(e, n) for e in r] for r in entries]
        return cls(rows, registry(n))

    @classmethod
    def from_json(cls, text: str) -> "PolyMatrix":
        return cls.from_json_obj(json.loads(text))

    @classmethod
    def from_csv(cls, text: str) -> "PolyMatrix":
        rows = [[Fraction(c.strip()) for c in r] for r in csv.reader(io.StringIO(text.strip())) if r]
        return cls.from_rationals(rows)


def _parse_entry(e, n):
    if isinstance(e, (int, Fraction)) and not isinstance(e, bool):
        return Poly.const(registry(n), e)
    if isinstance(e, str):
        return parse_poly(e, n)
    raise ValueError(f"bad matrix entry {e!r}")


def det(M: PolyMatrix, method: str = "auto") -> Poly:
    """Exact determinant.

    ``method`` is ``"cofactor"`` (memoized expansion, any entries),
    ``"bareiss"`` (constant entries only) or ``"auto"``.
    """
    if method == "auto":
        method = "bareiss" if M.is_constant() else "cofactor"
    if method == "bareiss":
        if not M.is_constant():
            raise ValueError("fraction-free path needs constant entries")
        return Poly.const(M.reg, det_bareiss(M.to_rationals()))
    if method == "cofactor":
        return laplace_det(M.rows(), Poly.const(M.reg, 1))
    raise ValueError(f"unknown method {method!r}")


def adjugate_rows(M: Sequence[Sequence], one) -> List[List]:
    """Adjugate over any commutative ring, sharing one minor memo."""
    n = len(M)
    if n == 1:
        return [[one]]
    memo: Dict = {}
    every = tuple(range(n))
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            # adj[i][j] is the (j, i) cofactor
            rr = every[:j] + every[j + 1 :]
            cc = every[:i] + every[i + 1 :]
            v = minor_det(M, rr, cc, memo, one)
            out[i][j] = -v if (i + j) & 1 else v
    return out


def adjugate(M: PolyMatrix) -> PolyMatrix:
    """Classical adjoint, cofactor by cofactor (defined for singular M)."""
    return PolyMatrix(adjugate_rows(M.rows(), Poly.const(M.reg, 1)), M.reg)


def rank_exact(A: Sequence[Sequence]) -> int:
    """Rank of a rectangular constant matrix by fraction-free elimination."""
    M = [[as_rational(v) for v in row] for row in A]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][c]
        for r in range(rank + 1, nrows):
            rc = M[r][c]
            M[r] = [_exact(Fraction(v * p - rc * w) / prev) for v, w in zip(M[r], M[rank])]
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def corner_minor(M: PolyMatrix, k: int) -> Poly:
    """Lower-left minor of order k: rows n-k+1..n, columns 1..k."""
    n = M.n
    if not 1 <= k <= n:
        raise BadOrder(f"corner minor order {k} outside 1..{n}")
    rows = M.rows()
    one = Poly.const(M.reg, 1)
    return minor_det(rows, tuple(range(n - k, n)), tuple(range(k)), {}, one)


def mat_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    if A.n != B.n:
        raise ValueError("order mismatch")
    if A.reg is not B.reg:
        raise ValueError("matrices from different registries")
    n = A.n
    ar, br = A.rows(), B.rows()
    zero = Poly.zero(A.reg)
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = zero
            for k in range(n):
                a = ar[r][k]
                if a:
                    b = br[k][c]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return PolyMatrix(out, A.reg)


def mat_inverse(A: PolyMatrix) -> PolyMatrix:
    """Inverse as adjugate / det; the determinant must be a nonzero constant."""
    d = det(A)
    if not d.is_constant() or not d:
        raise Singular(f"determinant {d} is not invertible")
    inv = Fraction(1) / Fraction(d.constant_value())
    return adjugate(A).scale(as_rational(inv))
