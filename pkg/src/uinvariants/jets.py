"""First-order jets: exact forward-mode derivatives over the rationals.

A :class:`Jet` carries a value and its gradient with respect to a fixed
list of seed directions.  Jets form a commutative ring, so the
division-free determinant in :mod:`uinvariants.symmatrix` runs on them
unchanged, which is how Jacobians of generators are obtained at a point
without ever expanding the generators symbolically.
"""

from __future__ import annotations

from typing import Sequence, Tuple


class Jet:
    __slots__ = ("val", "grad")

    def __init__(self, val, grad: Tuple):
        self.val = val
        self.grad = grad

    @classmethod
    def constant(cls, val, dim: int) -> "Jet":
        return cls(val, (0,) * dim)

    @classmethod
    def seed(cls, val, index: int, dim: int) -> "Jet":
        g = [0] * dim
        g[index] = 1
        return cls(val, tuple(g))

    def __bool__(self):
        return bool(self.val) or any(self.grad)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, tuple(a + b for a, b in zip(self.grad, other.grad)))
        return Jet(self.val + other, self.grad)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, tuple(-a for a in self.grad))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            u, v = self.val, other.val
            return Jet(u * v, tuple(u * b + v * a for a, b in zip(self.grad, other.grad)))
        return Jet(self.val * other, tuple(a * other for a in self.grad))

    __rmul__ = __mul__

    def __repr__(self):
        return f"Jet({self.val}, {self.grad})"


def seed_matrix(values: Sequence[Sequence], seeds) -> list:
    """Lift a rational matrix to jets.

    ``seeds`` maps a 0-based ``(row, col)`` to a gradient index; entries not
    listed are constants.
    """
    dim = len(set(seeds.values()))
    out = []
    for r, row in enumerate(values):
        new = []
        for c, v in enumerate(row):
            idx = seeds.get((r, c))
            new.append(Jet.constant(v, dim) if idx is None else Jet.seed(v, idx, dim))
        out.append(new)
    return out

