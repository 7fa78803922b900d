"""Orbit membership, fingerprints, canonical forms and the independence checks.

Omega is the set of matrices whose lower-left corner minors are all nonzero.
Each U-orbit in Omega meets the slice L exactly once.  Away from the zero
set of the slopes, the generator values (the fingerprint) determine that
point through the triangular solve in :mod:`uinvariants.slices`; on that
zero set the point is recovered as a limit along a line (see
:func:`canonical_limit`).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .errors import DegenerateInput, NotInOmega
from .generators import (
    gen_indices,
    generator_values,
    generator_values_ring,
    random_omega_matrix,
    random_rational,
)
from .jets import Jet, seed_matrix
from .polycore import as_rational
from .ratfunc import RatFunc
from .slices import (
    SlicePoint,
    coord_var,
    ordered_coords,
    slice_position,
    solve_slice,
    solve_slice_ring,
    tri_decompose,
)
from .symmatrix import det_bareiss, rank_exact, rational_rows

MAX_RETRIES = 3


@dataclass(frozen=True)
class Fingerprint:
    n: int
    values: Dict[tuple, object] = field(hash=False)

    def __eq__(self, other):
        return isinstance(other, Fingerprint) and self.n == other.n and self.values == other.values

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.values.items()))))

    def to_json_obj(self) -> dict:
        return {"n": self.n, "values": {f"J[{k}][{i}]": str(self.values[(k, i)]) for k, i in gen_indices(self.n)}}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def corner_minors(A) -> List:
    rows = rational_rows(A)
    n = len(rows)
    return [det_bareiss([r[:k] for r in rows[n - k :]]) for k in range(1, n + 1)]


def first_vanishing_minor(A) -> Optional[int]:
    """Smallest k with J_k(A) = 0, or None when A is in Omega."""
    for k, v in enumerate(corner_minors(A), start=1):
        if v == 0:
            return k
    return None


def in_omega(A) -> bool:
    return first_vanishing_minor(A) is None


def in_L(A) -> bool:
    rows = rational_rows(A)
    n = len(rows)
    for a in range(n):
        for b in range(n):
            anti = a + b  # anti-diagonal at n - 1 (0-based)
            if anti < n - 1 and rows[a][b] != 0:
                return False
            if anti == n - 1 and rows[a][b] == 0:
                return False
    return True


def invariant_fingerprint(A) -> Fingerprint:
    rows = rational_rows(A)
    return Fingerprint(len(rows), generator_values(rows))


def canonicalize(A, method: str = "auto") -> SlicePoint:
    """The unique point of L in the U-orbit of A."""
    rows = rational_rows(A)
    k = first_vanishing_minor(rows)
    if k is not None:
        raise NotInOmega(f"J_{k} = 0", order=k)
    fp = invariant_fingerprint(rows)
    try:
        return solve_slice(fp.values, fp.n, method=method)
    except DegenerateInput:
        return canonical_limit(rows)


def canonical_limit(A, seed: int = 0) -> SlicePoint:
    """Canonical point of A through the line A + e*P, for A on the slope locus.

    Some slopes of the triangular system are nonzero polynomials that still
    vanish at special points of Omega, where the generator values no longer
    pin down the slice point.  The map to L is regular on Omega, so its value
    at A is the limit e -> 0 of the canonical point of A + e*P.  For a random
    integer direction P that point is found by solving over Q(e).
    """
    rows = rational_rows(A)
    n = len(rows)
    fp = invariant_fingerprint(rows)
    one = RatFunc.const(1)
    for attempt in range(MAX_RETRIES + 1):
        rng = random.Random(f"{seed}/limit/{attempt}")
        line = [[RatFunc.line(v, rng.randint(-9, 9)) for v in row] for row in rows]
        values = generator_values_ring(line, one)
        try:
            solved = solve_slice_ring(values, n, one)
            point = SlicePoint(n, {ki: f.at_zero() for ki, f in solved.items()})
        except (DegenerateInput, ZeroDivisionError):
            continue
        if invariant_fingerprint(point.to_matrix()) != fp:
            raise AssertionError("limit point does not reproduce the generator values")
        return point
    raise DegenerateInput(f"no usable direction after {MAX_RETRIES + 1} attempts")


def orbit_equivalent(A, B) -> bool:
    """Same U-orbit, decided by comparing canonical points.

    Equal generator values are necessary but not sufficient: on the slope
    locus two different orbits can share every generator value.
    """
    ra, rb = rational_rows(A), rational_rows(B)
    for M in (ra, rb):
        k = first_vanishing_minor(M)
        if k is not None:
            raise NotInOmega(f"J_{k} = 0", order=k)
    if len(ra) != len(rb):
        return False
    if invariant_fingerprint(ra) != invariant_fingerprint(rb):
        return False
    return canonicalize(ra) == canonicalize(rb)


def classify(matrices: Sequence) -> dict:
    """Group matrices by canonical slice point; those outside Omega go to "unclassified"."""
    rows = [rational_rows(M) for M in matrices]
    sizes = {len(r) for r in rows}
    if len(sizes) > 1:
        raise ValueError(f"mixed matrix sizes {sorted(sizes)}")
    classes: Dict[tuple, dict] = {}
    unclassified = []
    for idx, M in enumerate(rows):
        k = first_vanishing_minor(M)
        if k is not None:
            unclassified.append({"index": idx, "reason": f"J_{k} = 0"})
            continue
        point = canonicalize(M)
        entry = classes.setdefault(point.key(), {"canonical": point, "members": []})
        entry["members"].append(idx)
    ordered = sorted(classes.values(), key=lambda c: c["members"][0])
    return {
        "n": sizes.pop() if sizes else None,
        "classes": [{"canonical": c["canonical"].to_json_obj(), "members": c["members"]} for c in ordered],
        "unclassified": unclassified,
    }


# ------------------------------------------------------------ Jacobian checks


@dataclass
class RankVerdict:
    status: str  # "pass", "fail" or "inconclusive"
    n: int
    rank: int
    expected: int
    attempts: int
    seed: int
    point: Optional[List[List[str]]] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def generator_jacobian(A) -> List[List]:
    """Exact [dJ_{k,i}/dx_{ab}] at A; rows by (k, i), columns row-major in (a, b)."""
    rows = rational_rows(A)
    n = len(rows)
    seeds = {(a, b): a * n + b for a in range(n) for b in range(n)}
    M = seed_matrix(rows, seeds)
    vals = generator_values_ring(M, Jet.constant(1, n * n))
    return [list(vals[ki].grad) for ki in gen_indices(n)]


def independence_check(n: int, seed: int = 0) -> RankVerdict:
    """Full-rank Jacobian of the generators at a random point of Omega.

    A rank drop can only come from a special point, so up to MAX_RETRIES
    fresh points are tried before reporting "inconclusive".
    """
    expected = n * (n + 1) // 2
    rank = 0
    A = None
    for attempt in range(MAX_RETRIES + 1):
        rng = random.Random(f"{seed}/independence/{n}/{attempt}")
        A = random_omega_matrix(n, rng)
        rank = rank_exact(generator_jacobian(A))
        if rank == expected:
            return RankVerdict("pass", n, rank, expected, attempt + 1, seed, _str_rows(A))
    return RankVerdict("inconclusive", n, rank, expected, MAX_RETRIES + 1, seed, _str_rows(A))


def random_slice_point(n: int, rng: random.Random) -> SlicePoint:
    coords = {}
    for k, i in gen_indices(n):
        v = random_rational(rng)
        while i == 0 and v == 0:
            v = random_rational(rng)
        coords[(k, i)] = v
    return SlicePoint(n, coords)


@dataclass
class TriangularityVerdict:
    passed: bool
    n: int
    mode: str
    seed: int
    diagonal: List[str] = field(default_factory=list)
    problems: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.passed


def slice_jacobian_numeric(point: SlicePoint) -> List[List]:
    """Exact [d pi(J_{k,i}) / d s_{a,b}] at a point of L, both axes in slice order."""
    n = point.n
    order = ordered_coords(n)
    pos = {ki: idx for idx, ki in enumerate(order)}
    B = point.to_matrix()
    seeds = {}
    for ki in order:
        a, b = slice_position(*ki, n)
        seeds[(a - 1, b - 1)] = pos[ki]
    # entries above the anti-diagonal stay constant zeros
    M = seed_matrix(B, seeds)
    vals = generator_values_ring(M, Jet.constant(1, len(order)))
    return [list(vals[ki].grad) for ki in order]


def slice_triangularity_check(n: int, seed: int = 0, mode: str = "symbolic") -> TriangularityVerdict:
    """Lower-triangular slice Jacobian with nonzero diagonal, in the coordinate order.

    ``mode="symbolic"`` works on the restricted polynomials: entries above
    the diagonal must be the zero polynomial and each diagonal entry must be
    the slope of the triangular decomposition.  ``mode="numeric"`` evaluates
    the Jacobian exactly at a random point of L with jets.  In both modes the
    diagonal is evaluated at a random point of L and must be nonzero.
    """
    rng = random.Random(f"{seed}/triangularity/{n}")
    point = random_slice_point(n, rng)
    order = ordered_coords(n)
    problems: List[str] = []
    diagonal: List[str] = []
    if mode == "symbolic":
        from .slices import restricted_generator

        pt = {coord_var(*ki, n): v for ki, v in point.coords.items()}
        for r, ki in enumerate(order):
            poly = restricted_generator(*ki, n)
            dec = tri_decompose(*ki, n)
            for c, kj in enumerate(order):
                d = poly.partial(coord_var(*kj, n))
                if c > r and d:
                    problems.append(f"d pi(J{ki})/d s{kj} = {d} above the diagonal")
                if c == r:
                    if d != dec.phi:
                        problems.append(f"diagonal of J{ki} differs from its slope")
                    val = d.eval(pt)
                    diagonal.append(str(val))
                    if val == 0:
                        problems.append(f"diagonal of J{ki} vanishes at the sample point")
    elif mode == "numeric":
        jac = slice_jacobian_numeric(point)
        for r, ki in enumerate(order):
            for c in range(r + 1, len(order)):
                if jac[r][c] != 0:
                    problems.append(f"entry ({ki}, {order[c]}) = {jac[r][c]} above the diagonal")
            diagonal.append(str(jac[r][r]))
            if jac[r][r] == 0:
                problems.append(f"diagonal of J{ki} vanishes at the sample point")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return TriangularityVerdict(not problems, n, mode, seed, diagonal, problems)


def _str_rows(A) -> List[List[str]]:
    return [[str(as_rational(v)) for v in row] for row in A]
