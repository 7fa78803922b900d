"""The anti-triangular slice L and the triangular system on it.

A matrix of L has zeros strictly above the anti-diagonal and a nonzero
anti-diagonal.  Its coordinate s[k][i] sits in column k, row i-k+n+1, so
s[k][0] runs along the anti-diagonal and s[k][k-1] is the bottom entry of
column k.  Restricting a generator to L is substitution of these
coordinates (and zeros) for the x-variables.

Coordinates are totally ordered: anti-diagonal coordinates first by k, then
column by column (k = 2..n) from the bottom entry s[k][k-1] up to s[k][1].
Restricted to L, J_{k,i} is affine in s[k][i] with a nonzero slope, and it
involves no coordinate beyond s[k][i].  That makes the system
J_{k,i} = value solvable one coordinate at a time.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import BadIndex, DegenerateInput, StructureViolation
from .generators import check_index, gen_indices, generator_values, stack_Y
from .polycore import Poly, VarId, as_rational, registry, s
from .symmatrix import PolyMatrix, adjugate, laplace_det, minor_det

Coord = Tuple[int, int]

# symbolic triangular decompositions are used up to this order by default
SYMBOLIC_SOLVE_MAX = 8


# ------------------------------------------------------------- index mapping


def slice_position(k: int, i: int, n: int) -> Tuple[int, int]:
    """1-based (row, column) of s[k][i] inside the slice matrix."""
    check_index(k, i, n)
    return (i - k + n + 1, k)


def slice_coord_at(a: int, b: int, n: int) -> Optional[Coord]:
    """Slice coordinate at 1-based (a, b), or None strictly above the anti-diagonal."""
    if not (1 <= a <= n and 1 <= b <= n):
        raise IndexError(f"({a},{b}) outside an {n}x{n} matrix")
    i = a + b - n - 1
    if i < 0:
        return None
    return (b, i)


def coord_var(k: int, i: int, n: int) -> VarId:
    return VarId("s", (k, i), n)


def order_key(k: int, i: int) -> tuple:
    if i == 0:
        return (0, k, 0)
    return (1, k, -i)


def coord_cmp(a: Coord, b: Coord) -> int:
    ka, kb = order_key(*a), order_key(*b)
    return (ka > kb) - (ka < kb)


def ordered_coords(n: int) -> List[Coord]:
    return sorted(gen_indices(n), key=lambda ki: order_key(*ki))


# ------------------------------------------------------------- slice matrix


@lru_cache(maxsize=None)
def build_S(n: int) -> PolyMatrix:
    reg = registry(n)
    rows = []
    for a in range(1, n + 1):
        row = []
        for b in range(1, n + 1):
            ki = slice_coord_at(a, b, n)
            row.append(Poly.zero(reg) if ki is None else s(ki[0], ki[1], n))
        rows.append(row)
    return PolyMatrix(rows, reg)


@lru_cache(maxsize=None)
def build_Sstar(n: int) -> PolyMatrix:
    return adjugate(build_S(n))


def restriction_map(n: int) -> Dict[VarId, Poly]:
    reg = registry(n)
    out = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            ki = slice_coord_at(a, b, n)
            out[VarId("x", (a, b), n)] = Poly.zero(reg) if ki is None else s(ki[0], ki[1], n)
    return out


def restrict(f: Poly, n: int) -> Poly:
    """Restriction to L: x[a][b] becomes its slice coordinate, or 0 above the anti-diagonal."""
    return f.substitute(restriction_map(n))


@lru_cache(maxsize=None)
def restricted_generator(k: int, i: int, n: int) -> Poly:
    """J_{k,i} restricted to L, built directly from S and adj(S).

    Restriction is a ring homomorphism, so this equals
    ``restrict(build_J(k, i, n), n)`` without expanding J_{k,i} over X.
    """
    check_index(k, i, n)
    S = build_S(n)
    Y = stack_Y(S.rows(), build_Sstar(n).rows(), i) if i else S.rows()
    one = Poly.const(S.reg, 1)
    return minor_det(Y, tuple(range(n - k, n)), tuple(range(k)), {}, one)


# ------------------------------------------------------ triangular decomposition


@dataclass(frozen=True)
class TriDecomp:
    """Restricted J_{k,i} written as phi * s[k][i] + psi."""

    k: int
    i: int
    n: int
    phi: Poly
    psi: Poly

    def value(self, coords: Mapping[Coord, object]):
        """Restricted generator at a (partial) slice point; only smaller coordinates are read."""
        pt = {coord_var(*ki, self.n): v for ki, v in coords.items()}
        return self.phi.eval(pt) * as_rational(coords[(self.k, self.i)]) + self.psi.eval(pt)


_decomp_lock = threading.Lock()
_decomp_cache: Dict[Tuple[int, int, int], TriDecomp] = {}


def tri_decompose(k: int, i: int, n: int) -> TriDecomp:
    """Split the restricted generator by degree in s[k][i] and check its shape.

    Raises :class:`StructureViolation` unless the degree is exactly 1, the
    slope is nonzero, and both parts use only coordinates below s[k][i].
    """
    key = (k, i, n)
    hit = _decomp_cache.get(key)
    if hit is not None:
        return hit
    check_index(k, i, n)
    poly = restricted_generator(k, i, n)
    v = coord_var(k, i, n)
    if poly.degree_in(v) != 1:
        raise StructureViolation(f"restricted J_{k},{i} has degree {poly.degree_in(v)} in s[{k}][{i}]")
    parts = poly.coefficient_split(v)
    phi = parts.get(1, Poly.zero(poly.reg))
    psi = parts.get(0, Poly.zero(poly.reg))
    if not phi:
        raise StructureViolation(f"zero slope for J_{k},{i}")
    mine = order_key(k, i)
    for part, name in ((phi, "phi"), (psi, "psi")):
        for w in part.variables():
            if w.kind != "s" or order_key(*w.indices) >= mine:
                raise StructureViolation(f"{name} of J_{k},{i} involves {w}")
    dec = TriDecomp(k, i, n, phi, psi)
    with _decomp_lock:
        # idempotent fill: concurrent builders produce equal values
        return _decomp_cache.setdefault(key, dec)


def block_formula(k: int, i: int, n: int) -> dict:
    """Restricted J_{k,i} as sign * det(C_i) * det(S_{k,i}).

    S_{k,i} is the block of S on its last k-i rows and columns i+1..k; C_i is
    the lower-left i x i block of adj(S).  The (k-i) x i block under S_{k,i}
    vanishes on L, so the k x k minor factors with sign (-1)^{i(k-i)}.
    """
    check_index(k, i, n)
    S = build_S(n)
    Ss = build_Sstar(n)
    one = Poly.const(S.reg, 1)
    s_block = S.submatrix(range(n - (k - i) + 1, n + 1), range(i + 1, k + 1))
    c_block = Ss.submatrix(range(n - i + 1, n + 1), range(1, i + 1))
    det_s = laplace_det(s_block, one)
    det_c = laplace_det(c_block, one) if i else one
    sign = -1 if (i * (k - i)) & 1 else 1
    return {
        "sign": sign,
        "det_C": det_c,
        "det_S_block": det_s,
        "product": det_c * det_s * sign,
        "det_C_is_monomial": len(det_c) == 1,
    }


# ------------------------------------------------------------------ slice points


@dataclass(frozen=True)
class SlicePoint:
    """A point of L, i.e. the canonical representative of a U-orbit in Omega."""

    n: int
    coords: Dict[Coord, object] = field(hash=False)

    def __post_init__(self):
        if set(self.coords) != set(gen_indices(self.n)):
            raise ValueError("slice point must assign every coordinate")
        object.__setattr__(self, "coords", {ki: as_rational(v) for ki, v in self.coords.items()})

    def __getitem__(self, ki: Coord):
        return self.coords[ki]

    def __eq__(self, other):
        return isinstance(other, SlicePoint) and self.n == other.n and self.coords == other.coords

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.coords.items()))))

    def key(self) -> tuple:
        return (self.n, tuple(self.coords[ki] for ki in ordered_coords(self.n)))

    def to_matrix(self) -> List[List]:
        n = self.n
        M = [[0] * n for _ in range(n)]
        for (k, i), v in self.coords.items():
            a, b = slice_position(k, i, n)
            M[a - 1][b - 1] = v
        return M

    @classmethod
    def from_matrix(cls, B) -> "SlicePoint":
        """Read coordinates off a matrix shaped like L (entries above the anti-diagonal ignored)."""
        n = len(B)
        return cls(n, {(k, i): B[a - 1][b - 1] for (k, i) in gen_indices(n) for a, b in [slice_position(k, i, n)]})

    def to_json_obj(self) -> dict:
        return {"n": self.n, "coords": {f"s[{k}][{i}]": str(self.coords[(k, i)]) for k, i in gen_indices(self.n)}}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SlicePoint":
        n = int(obj["n"])
        reg = registry(n)
        coords = {}
        for name, val in obj["coords"].items():
            v = reg.lookup(name)
            if v.kind != "s":
                raise ValueError(f"{name} is not a slice coordinate")
            coords[v.indices] = Fraction(val)
        return cls(n, coords)

    @classmethod
    def from_json(cls, text: str) -> "SlicePoint":
        return cls.from_json_obj(json.loads(text))


# ----------------------------------------------------------------- the solver


def solve_slice(values: Mapping[Coord, object], n: int, method: str = "auto") -> SlicePoint:
    """Recover the slice point whose generator values are ``values``.

    Coordinates are solved in ascending order.  ``method="symbolic"`` reads
    slope and offset from the cached :func:`tri_decompose`;
    ``method="numeric"`` obtains them by evaluating the generator at the
    partial point with the current coordinate set to 0 and to 1, which is
    exact because the restricted generator is affine in it and blind to
    later coordinates.  ``"auto"`` picks symbolic for n <= SYMBOLIC_SOLVE_MAX.
    """
    missing = set(gen_indices(n)) - set(values)
    if missing:
        raise BadIndex(f"missing generator values for {sorted(missing)}")
    if method == "auto":
        method = "symbolic" if n <= SYMBOLIC_SOLVE_MAX else "numeric"
    if method not in ("symbolic", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    solved: Dict[Coord, object] = {}
    for k, i in ordered_coords(n):
        target = as_rational(values[(k, i)])
        if method == "symbolic":
            dec = tri_decompose(k, i, n)
            pt = {coord_var(*ki, n): v for ki, v in solved.items()}
            slope = dec.phi.eval(pt)
            offset = dec.psi.eval(pt)
        else:
            offset = _probe(solved, k, i, n, 0)
            slope = _probe(solved, k, i, n, 1) - offset
        if slope == 0:
            raise DegenerateInput(f"zero slope at s[{k}][{i}]: values do not come from a matrix of Omega")
        val = Fraction(target - offset) / slope
        val = val.numerator if val.denominator == 1 else val
        if i == 0 and val == 0:
            raise DegenerateInput(f"anti-diagonal coordinate s[{k}][0] solved to 0")
        solved[(k, i)] = val
    return SlicePoint(n, solved)


def solve_slice_ring(values: Mapping[Coord, object], n: int, one) -> Dict[Coord, object]:
    """The triangular solve over a field other than Q (for instance Q(e)).

    Slope and offset come from probing the generator at the partial point,
    evaluated with the division-free determinant, so only the final
    quotient uses the field division of ``one``'s type.  Raises
    :class:`DegenerateInput` on a zero slope.
    """
    zero = one - one
    solved: Dict[Coord, object] = {}
    for k, i in ordered_coords(n):
        offset = _probe_ring(solved, k, i, n, zero, one)
        slope = _probe_ring(solved, k, i, n, one, one) - offset
        if not slope:
            raise DegenerateInput(f"zero slope at s[{k}][{i}]")
        solved[(k, i)] = (values[(k, i)] - offset) / slope
    return solved


def _probe_ring(solved, k, i, n, trial_value, one):
    zero = one - one
    B = [[zero] * n for _ in range(n)]
    for (kk, ii), v in solved.items():
        a, b = slice_position(kk, ii, n)
        B[a - 1][b - 1] = v
    a, b = slice_position(k, i, n)
    B[a - 1][b - 1] = trial_value
    # only the first k columns of the last i rows of adj(B) enter J_{k,i}
    memo: Dict = {}
    every = tuple(range(n))
    adj_tail = []
    for r in range(n - i, n):
        row = []
        for c in range(k):
            v = minor_det(B, every[:c] + every[c + 1 :], every[:r] + every[r + 1 :], memo, one)
            row.append(-v if (r + c) & 1 else v)
        adj_tail.append(row)
    Y = [row[:k] for row in B[n - (k - i) :]] + adj_tail
    return minor_det(Y, tuple(range(k)), tuple(range(k)), {}, one)


def _probe(solved, k, i, n, trial_value):
    B = [[0] * n for _ in range(n)]
    for (kk, ii), v in solved.items():
        a, b = slice_position(kk, ii, n)
        B[a - 1][b - 1] = v
    a, b = slice_position(k, i, n)
    B[a - 1][b - 1] = trial_value
    return generator_values(B, [(k, i)])[(k, i)]
