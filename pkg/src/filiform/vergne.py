"""Vergne parametrization of filiform brackets: mu = mu0 + sum a[r,s] psi_{r,s}."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Sequence, Tuple

from .exactalg import Polynomial, VarId, a, const, rational_str, to_rational, var
from .liecore import BilinearMap, DimMismatch

DeltaIndex = Tuple[int, int]

__all__ = [
    "DeltaIndex", "VergneModel", "FiliformPoint", "IndexNotInDelta", "LengthMismatch",
    "delta_set", "delta_size_closed_form", "psi", "mu0", "generic_filiform", "specialize",
]


class IndexNotInDelta(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


def delta_set(n: int) -> List[DeltaIndex]:
    """Index set of the cocycles psi_{r,s}, sorted lexicographically."""
    if n < 3:
        raise ValueError("n must be at least 3")
    out = [(r, s) for r in range(1, n - 1) for s in range(2 * r + 2, n)]
    if n % 2 == 0:
        extra = ((n - 2) // 2, n - 1)
        if extra not in out:
            out.append(extra)
    return sorted(out)


def delta_size_closed_form(n: int) -> int:
    return sum(max(0, n - 1 - (2 * r + 1)) for r in range(1, n)) + (1 if n % 2 == 0 else 0)


def psi(n: int, r: int, s: int, check: bool = True) -> BilinearMap:
    """The cocycle psi_{r,s}:

        psi(x_i, x_j) = (-1)^(r-i) * C(j-r-1, r-i) * x_{i+j+s-2r-1}

    for 1 <= i <= r < j <= n-1 with target index <= n-1, zero otherwise.
    ``check=False`` evaluates the same formula for (r,s) outside Delta_n.
    """
    if check and (r, s) not in delta_set(n):
        raise IndexNotInDelta(f"({r},{s}) is not in Delta_{n}")
    entries = {}
    for i in range(1, r + 1):
        for j in range(r + 1, n):
            k = i + j + s - 2 * r - 1
            if k > n - 1:
                continue
            c = (-1) ** (r - i) * comb(j - r - 1, r - i)
            if c:
                entries[(i, j, k)] = c
    return BilinearMap(n, entries)


def mu0(n: int) -> BilinearMap:
    """Standard filiform bracket: mu0(x_0, x_j) = x_{j+1}, 1 <= j <= n-2."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return BilinearMap(n, {(0, j, j + 1): 1 for j in range(1, n - 1)})


@dataclass(frozen=True)
class VergneModel:
    dim: int
    delta: Tuple[DeltaIndex, ...]
    mu: BilinearMap

    def params(self) -> List[VarId]:
        return [a(r, s) for r, s in self.delta]


_MODEL_CACHE: Dict[int, VergneModel] = {}


def generic_filiform(n: int) -> VergneModel:
    if n not in _MODEL_CACHE:
        delta = tuple(delta_set(n))
        mu = mu0(n)
        for r, s in delta:
            mu = mu + psi(n, r, s).scale(var(a(r, s)))
        _MODEL_CACHE[n] = VergneModel(n, delta, mu)
    return _MODEL_CACHE[n]


@dataclass(frozen=True)
class FiliformPoint:
    """Rational values of the a[r,s], in lexicographic Delta_n order."""

    n: int
    values: Tuple[Fraction, ...]

    def __init__(self, n: int, values: Sequence):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "values", tuple(to_rational(v) for v in values))
        if len(self.values) != len(delta_set(self.n)):
            raise LengthMismatch(
                f"a point of F^{self.n} has {len(delta_set(self.n))} coordinates, got {len(self.values)}")

    def assignment(self) -> Dict[VarId, Fraction]:
        return {a(r, s): v for (r, s), v in zip(delta_set(self.n), self.values)}

    def to_dict(self) -> dict:
        return {"n": self.n, "values": [rational_str(v) for v in self.values]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiliformPoint":
        return cls(int(data["n"]), [to_rational(str(v)) for v in data["values"]])

    @classmethod
    def from_json(cls, text: str) -> "FiliformPoint":
        return cls.from_dict(json.loads(text))


def specialize(model: VergneModel, point: FiliformPoint, mu: BilinearMap = None) -> BilinearMap:
    """Replace every a[r,s] by its value at the point (other variables stay)."""
    if point.n != model.dim:
        raise DimMismatch(f"model has dim {model.dim}, point has n={point.n}")
    mu = model.mu if mu is None else mu
    bindings = {v: const(x) for v, x in point.assignment().items()}
    return mu.substitute(bindings)
