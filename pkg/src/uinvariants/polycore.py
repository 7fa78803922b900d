"""Exact sparse multivariate polynomials over the rationals.

Scalars are :class:`fractions.Fraction` (plain ``int`` is kept when a
coefficient is integral, which is the common case for determinants).

Every polynomial belongs to a :class:`Registry`, one per matrix order ``n``.
A registry fixes the variables x[a][b] (matrix entries), s[k][i] (slice
coordinates) and t[j] (parameters of unipotent elements) and their order.

Monomials are packed into a single Python integer: each variable owns a
16-bit slot, and the total degree sits in the topmost slot.  Multiplying
monomials is then integer addition, and comparing the packed integers is
exactly graded-lex comparison, which gives the canonical term order for free.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import MissingAssignment

__all__ = [
    "VarId",
    "Registry",
    "registry",
    "Poly",
    "x",
    "s",
    "t",
    "poly_arith",
    "poly_eval",
    "poly_partial",
    "poly_degree_in",
    "parse_poly",
    "as_rational",
]

SLOT_BITS = 16
SLOT_MASK = (1 << SLOT_BITS) - 1

_KIND_RANK = {"x": 0, "s": 1, "t": 2}

Scalar = Union[int, Fraction]


def as_rational(value) -> Scalar:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact scalar."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return as_rational(Fraction(value.strip()))
    if isinstance(value, Rational):
        return as_rational(Fraction(value.numerator, value.denominator))
    raise TypeError(f"cannot use {value!r} as an exact rational")


def _clean(c):
    if c.__class__ is Fraction and c.denominator == 1:
        return c.numerator
    return c


@total_ordering
@dataclass(frozen=True)
class VarId:
    """A coordinate function.

    ``kind`` is ``"x"`` for the matrix entry x[a][b], ``"s"`` for the slice
    coordinate s[k][i] and ``"t"`` for a free parameter t[j].
    """

    kind: str
    indices: Tuple[int, ...]
    n: int

    def __post_init__(self):
        n = self.n
        if self.kind == "x":
            a, b = self.indices
            ok = 1 <= a <= n and 1 <= b <= n
        elif self.kind == "s":
            k, i = self.indices
            ok = 1 <= k <= n and 0 <= i <= k - 1
        elif self.kind == "t":
            (j,) = self.indices
            ok = 1 <= j <= _num_params(n)
        else:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if not ok:
            raise ValueError(f"index {self.indices} out of range for {self.kind} with n={n}")

    def _key(self):
        return (_KIND_RANK[self.kind], self.n, self.indices)

    def __lt__(self, other):
        if not isinstance(other, VarId):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self):
        return self.kind + "".join(f"[{v}]" for v in self.indices)


def _num_params(n: int) -> int:
    # one parameter per strictly-upper position is enough for a generic u in U
    return max(1, n * (n - 1) // 2)


class Registry:
    """Fixed, ordered variable set for matrices of order ``n``.

    Obtain instances through :func:`registry`; they are cached and immutable.
    """

    __slots__ = ("n", "vars", "_slot", "_shift", "deg_shift")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        xs = [VarId("x", (a, b), n) for a in range(1, n + 1) for b in range(1, n + 1)]
        ss = [VarId("s", (k, i), n) for k in range(1, n + 1) for i in range(k)]
        ts = [VarId("t", (j,), n) for j in range(1, _num_params(n) + 1)]
        self.vars = tuple(xs + ss + ts)
        nv = len(self.vars)
        self._slot = {v: idx for idx, v in enumerate(self.vars)}
        # variable 0 sits in the highest slot below the degree slot
        self._shift = tuple(SLOT_BITS * (nv - 1 - idx) for idx in range(nv))
        self.deg_shift = SLOT_BITS * nv

    def __repr__(self):
        return f"registry({self.n})"

    def __reduce__(self):
        return (registry, (self.n,))

    def shift(self, v: VarId) -> int:
        try:
            return self._shift[self._slot[v]]
        except KeyError:
            raise ValueError(f"{v} does not belong to {self!r}") from None

    def unit(self, v: VarId) -> int:
        """Packed monomial of the single variable ``v``."""
        return (1 << self.shift(v)) | (1 << self.deg_shift)

    def decode(self, mono: int) -> Dict[VarId, int]:
        out = {}
        for idx, sh in enumerate(self._shift):
            e = (mono >> sh) & SLOT_MASK
            if e:
                out[self.vars[idx]] = e
        return out

    def encode(self, exps: Mapping[VarId, int]) -> int:
        mono = 0
        deg = 0
        for v, e in exps.items():
            if e < 0:
                raise ValueError("negative exponent")
            if e > SLOT_MASK:
                raise OverflowError("exponent too large for packed monomial")
            mono += e << self.shift(v)
            deg += e
        if deg > SLOT_MASK:
            raise OverflowError("total degree too large for packed monomial")
        return mono + (deg << self.deg_shift)

    def lookup(self, text: str) -> VarId:
        m = _VAR_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"bad variable {text!r}")
        kind = m.group(1)
        idx = tuple(int(v) for v in re.findall(r"-?\d+", m.group(2)))
        return VarId(kind, idx, self.n)


@lru_cache(maxsize=None)
def registry(n: int) -> Registry:
    return Registry(n)


_VAR_RE = re.compile(r"([xst])((?:\[-?\d+\])+)")


class Poly:
    """Immutable sparse polynomial.

    Supports ``+ - *`` and integer powers with other polynomials of the same
    registry and with exact scalars.  Equality is structural and exact.
    """

    __slots__ = ("reg", "_terms", "_hash")

    def __init__(self, reg: Registry, terms: Mapping[int, Scalar] | None = None):
        self.reg = reg
        # terms must already be free of zero coefficients
        self._terms: Dict[int, Scalar] = dict(terms) if terms else {}
        self._hash = None

    @classmethod
    def _raw(cls, reg, terms):
        p = cls.__new__(cls)
        p.reg = reg
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, reg: Registry) -> "Poly":
        return cls._raw(reg, {})

    @classmethod
    def const(cls, reg: Registry, c) -> "Poly":
        c = as_rational(c)
        return cls._raw(reg, {0: c} if c else {})

    @classmethod
    def var(cls, v: VarId) -> "Poly":
        reg = registry(v.n)
        return cls._raw(reg, {reg.unit(v): 1})

    @classmethod
    def from_terms(cls, reg: Registry, terms: Iterable[Tuple[Mapping[VarId, int], object]]) -> "Poly":
        acc: Dict[int, Scalar] = {}
        for exps, c in terms:
            m = reg.encode(exps)
            acc[m] = acc.get(m, 0) + as_rational(c)
        return cls._raw(reg, {m: _clean(c) for m, c in acc.items() if c})

    # ----------------------------------------------------------------- basics

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.reg.n, frozenset(self._terms.items())))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.reg is other.reg and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {0: other}
        return NotImplemented

    def __repr__(self):
        return f"Poly({self.to_text()!r}, n={self.reg.n})"

    def __str__(self):
        return self.to_text()

    @property
    def terms(self) -> Dict[int, Scalar]:
        """Packed monomial -> coefficient (a copy)."""
        return dict(self._terms)

    def items(self):
        """(exponent dict, coefficient) pairs in canonical order."""
        dec = self.reg.decode
        return [(dec(m), self._terms[m]) for m in sorted(self._terms, reverse=True)]

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(0, 0)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(self._terms) >> self.reg.deg_shift

    def variables(self) -> Tuple[VarId, ...]:
        mask = 0
        for m in self._terms:
            mask |= m
        return tuple(self.reg.decode(mask & ((1 << self.reg.deg_shift) - 1)))

    # ------------------------------------------------------------- arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.reg is not self.reg:
                raise ValueError(f"mixing polynomials of {self.reg!r} and {other.reg!r}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(self.reg, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = _clean(v)
                else:
                    del out[m]
        return Poly._raw(self.reg, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.reg, {m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return Poly._raw(self.reg, {})
            return Poly._raw(self.reg, {m: _clean(c * other) for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly._raw(self.reg, {})
        ds = self.reg.deg_shift
        if (max(a) >> ds) + (max(b) >> ds) > SLOT_MASK:
            raise OverflowError("product degree exceeds packed monomial capacity")
        if len(a) < len(b):
            a, b = b, a
        out: Dict[int, Scalar] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                key = ma + mb
                out[key] = get(key, 0) + ca * cb
        return Poly._raw(self.reg, {m: _clean(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        result = Poly.const(self.reg, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        return self * as_rational(c)

    # ------------------------------------------------------------- calculus

    def degree_in(self, v: VarId) -> int:
        """Highest power of ``v``; 0 when absent, -1 for the zero polynomial."""
        if not self._terms:
            return -1
        sh = self.reg.shift(v)
        return max((m >> sh) & SLOT_MASK for m in self._terms)

    def partial(self, v: VarId) -> "Poly":
        sh = self.reg.shift(v)
        step = (1 << sh) + (1 << self.reg.deg_shift)
        out = {}
        for m, c in self._terms.items():
            e = (m >> sh) & SLOT_MASK
            if e:
                out[m - step] = c * e
        return Poly._raw(self.reg, out)

    def coefficient_split(self, v: VarId) -> Dict[int, "Poly"]:
        """Group terms by the power of ``v``: ``{e: coefficient poly}``."""
        sh = self.reg.shift(v)
        ds = self.reg.deg_shift
        groups: Dict[int, Dict[int, Scalar]] = {}
        for m, c in self._terms.items():
            e = (m >> sh) & SLOT_MASK
            groups.setdefault(e, {})[m - (e << sh) - (e << ds)] = c
        return {e: Poly._raw(self.reg, g) for e, g in groups.items()}

    # ---------------------------------------------------- evaluation, substitution

    def eval(self, point: Mapping[VarId, object]):
        """Exact value at ``point``.

        Raises :class:`MissingAssignment` if a variable of the polynomial has
        no value.
        """
        reg = self.reg
        occurring = self.variables()
        vals = []
        for v in occurring:
            if v not in point:
                raise MissingAssignment(f"no value for {v}")
            vals.append((reg.shift(v), as_rational(point[v])))
        total = 0
        for m, c in self._terms.items():
            term = c
            for sh, val in vals:
                e = (m >> sh) & SLOT_MASK
                if e:
                    term = term * (val if e == 1 else val**e)
            total = total + term
        return _clean(total) if isinstance(total, Fraction) else total

    __call__ = eval

    def substitute(self, mapping: Mapping[VarId, object]) -> "Poly":
        """Replace variables by polynomials or scalars and expand.

        Variables missing from ``mapping`` are left in place.
        """
        reg = self.reg
        subs = []
        for v, img in mapping.items():
            if isinstance(img, Poly):
                if img.reg is not reg:
                    raise ValueError("substitution image from a different registry")
            else:
                img = Poly.const(reg, img)
            subs.append((reg.shift(v), img))
        occ_mask = 0
        for m in self._terms:
            occ_mask |= m
        subs = [(sh, img) for sh, img in subs if (occ_mask >> sh) & SLOT_MASK]
        if not subs:
            return self
        ds = reg.deg_shift
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(sh, img, e):
            key = (sh, e)
            p = powers.get(key)
            if p is None:
                p = img if e == 1 else power(sh, img, e - 1) * img
                powers[key] = p
            return p

        # terms sharing the substituted part of their exponent share the product
        groups: Dict[Tuple[int, ...], list] = {}
        for m, c in self._terms.items():
            sig = tuple((m >> sh) & SLOT_MASK for sh, _ in subs)
            rest = m
            removed = 0
            for (sh, _), e in zip(subs, sig):
                rest -= e << sh
                removed += e
            rest -= removed << ds
            groups.setdefault(sig, []).append((rest, c))
        out: Dict[int, Scalar] = {}
        for sig, rests in groups.items():
            prod = Poly.const(reg, 1)
            for (sh, img), e in zip(subs, sig):
                if e:
                    prod = prod * power(sh, img, e)
                    if not prod:
                        break
            if not prod:
                continue
            for rest, c in rests:
                for pm, pc in prod._terms.items():
                    key = pm + rest
                    out[key] = out.get(key, 0) + c * pc
        return Poly._raw(reg, {m: _clean(c) for m, c in out.items() if c})

    # ------------------------------------------------------------ serialization

    def _term_text(self, m: int, c) -> Tuple[str, str]:
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        factors = []
        for v, e in self.reg.decode(m).items():
            factors.append(str(v) if e == 1 else f"{v}^{e}")
        if a != 1 or not factors:
            factors.insert(0, str(a))
        return sign, "*".join(factors)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, reverse=True):
            sign, body = self._term_text(m, self._terms[m])
            if not parts:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def to_json_obj(self) -> list:
        out = []
        for exps, c in self.items():
            out.append({"coeff": str(c), "exps": [[str(v), e] for v, e in exps.items()]})
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: list, n: int) -> "Poly":
        reg = registry(n)
        return cls.from_terms(
            reg,
            (({reg.lookup(name): int(e) for name, e in term["exps"]}, Fraction(term["coeff"])) for term in obj),
        )

    @classmethod
    def from_json(cls, text: str, n: int) -> "Poly":
        return cls.from_json_obj(json.loads(text), n)

    @classmethod
    def from_text(cls, text: str, n: int) -> "Poly":
        return parse_poly(text, n)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR_RE = re.compile(r"([xst](?:\[-?\d+\])+)(?:\^(\d+))?")
_NUM_RE = re.compile(r"\d+(?:/\d+)?")


def parse_poly(text: str, n: int) -> Poly:
    """Parse the text format produced by :meth:`Poly.to_text`."""
    reg = registry(n)
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial text")
    pieces = _TERM_SPLIT.split(src)
    # split yields [lead, sign, body, sign, body, ...]
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    if len(pieces) % 2:
        raise ValueError(f"malformed polynomial {text!r}")
    terms = []
    for sign, body in zip(pieces[::2], pieces[1::2]):
        if not body:
            raise ValueError(f"malformed polynomial {text!r}")
        coeff = Fraction(1)
        exps: Dict[VarId, int] = {}
        for factor in body.split("*"):
            factor = factor.strip()
            if _NUM_RE.fullmatch(factor):
                coeff *= Fraction(factor)
                continue
            m = _FACTOR_RE.fullmatch(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            v = reg.lookup(m.group(1))
            exps[v] = exps.get(v, 0) + int(m.group(2) or 1)
        terms.append((exps, -coeff if sign == "-" else coeff))
    return Poly.from_terms(reg, terms)


def x(a: int, b: int, n: int) -> Poly:
    return Poly.var(VarId("x", (a, b), n))


def s(k: int, i: int, n: int) -> Poly:
    return Poly.var(VarId("s", (k, i), n))


def t(j: int, n: int) -> Poly:
    return Poly.var(VarId("t", (j,), n))


def poly_arith(op: str, p: Poly, q: Poly) -> Poly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "neg":
        return -p
    raise ValueError(f"unknown op {op!r}")


def poly_eval(p: Poly, point: Mapping[VarId, object]):
    return p.eval(point)


def poly_partial(p: Poly, v: VarId) -> Poly:
    return p.partial(v)


def poly_degree_in(p: Poly, v: VarId) -> int:
    return p.degree_in(v)
