"""Alternating bilinear maps with polynomial structure constants.

Basis vectors are ``x_0 .. x_{n-1}``; a vector is a sparse ``{index: Polynomial}``
dict.  A :class:`BilinearMap` stores ``mu(x_i, x_j)`` only for ``i < j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exactalg import Polynomial, VarId, const, parse, row_reduce, to_rational

Vector = Dict[int, Polynomial]

__all__ = [
    "Vector", "BilinearMap", "TriForm", "LinearOperator", "SubspaceSplit",
    "DimMismatch", "NonConstantCoefficients",
    "circ", "jacobiator", "cocycle_defect", "ad", "lower_central_series",
    "is_filiform", "is_derivation", "commutes_with",
    "vec_add", "vec_scale", "vec_is_zero",
]


class DimMismatch(ValueError):
    pass


class NonConstantCoefficients(ValueError):
    pass


def _poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, str):
        return parse(x)
    return const(x)


def vec_add(u: Vector, v: Vector, scale: Polynomial = None) -> Vector:
    """u + scale*v as a fresh vector (zero entries dropped)."""
    out = dict(u)
    for k, c in v.items():
        if scale is not None:
            c = c * scale
        s = out.get(k)
        s = c if s is None else s + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(v: Vector, c) -> Vector:
    c = _poly(c)
    out = {}
    for k, x in v.items():
        y = x * c
        if y:
            out[k] = y
    return out


def vec_is_zero(v: Vector) -> bool:
    return all(c.is_zero() for c in v.values())


class BilinearMap:
    """Alternating bilinear map on an n-dimensional space."""

    __slots__ = ("dim", "_rows")

    def __init__(self, dim: int, entries: Optional[Mapping[Tuple[int, int, int], object]] = None):
        self.dim = dim
        self._rows: Dict[Tuple[int, int], Vector] = {}
        for (i, j, k), c in (entries or {}).items():
            self._accumulate(i, j, k, _poly(c))

    def _accumulate(self, i: int, j: int, k: int, c: Polynomial) -> None:
        n = self.dim
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise IndexError(f"index out of range for dim {n}: {(i, j, k)}")
        if i == j:
            if c:
                raise ValueError("alternating map has mu(x_i, x_i) = 0")
            return
        if i > j:
            i, j, c = j, i, -c
        row = self._rows.setdefault((i, j), {})
        s = row.get(k)
        s = c if s is None else s + c
        if s:
            row[k] = s
        else:
            row.pop(k, None)
            if not row:
                del self._rows[(i, j)]

    @classmethod
    def from_rows(cls, dim: int, rows: Mapping[Tuple[int, int], Vector]) -> "BilinearMap":
        out = cls(dim)
        for (i, j), vec in rows.items():
            for k, c in vec.items():
                out._accumulate(i, j, k, c)
        return out

    # -- access -----------------------------------------------------------

    def bracket(self, i: int, j: int) -> Vector:
        """mu(x_i, x_j) as a vector (sign handled for i > j)."""
        if i < j:
            return dict(self._rows.get((i, j), {}))
        if i > j:
            return {k: -c for k, c in self._rows.get((j, i), {}).items()}
        return {}

    def coeff(self, i: int, j: int, k: int) -> Polynomial:
        return self.bracket(i, j).get(k, Polynomial.zero())

    def apply(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for i, ci in u.items():
            for j, cj in v.items():
                if i == j:
                    continue
                row = self.bracket(i, j)
                if row:
                    out = vec_add(out, row, ci * cj)
        return out

    def entries(self) -> List[Tuple[int, int, int, Polynomial]]:
        return [(i, j, k, c) for (i, j), row in sorted(self._rows.items())
                for k, c in sorted(row.items())]

    def pairs(self) -> List[Tuple[int, int]]:
        return sorted(self._rows)

    def __len__(self) -> int:
        return sum(len(r) for r in self._rows.values())

    # -- algebra ----------------------------------------------------------

    def _check(self, other: "BilinearMap") -> None:
        if self.dim != other.dim:
            raise DimMismatch(f"dimensions {self.dim} and {other.dim}")

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        self._check(other)
        out = BilinearMap(self.dim)
        for src in (self, other):
            for i, j, k, c in src.entries():
                out._accumulate(i, j, k, c)
        return out

    def __neg__(self) -> "BilinearMap":
        return self.scale(-1)

    def __sub__(self, other: "BilinearMap") -> "BilinearMap":
        return self + (-other)

    def scale(self, c) -> "BilinearMap":
        c = _poly(c)
        out = BilinearMap(self.dim)
        for i, j, k, x in self.entries():
            out._accumulate(i, j, k, x * c)
        return out

    def map_coeffs(self, f) -> "BilinearMap":
        out = BilinearMap(self.dim)
        for i, j, k, x in self.entries():
            out._accumulate(i, j, k, f(x))
        return out

    def substitute(self, bindings: Mapping[VarId, Polynomial]) -> "BilinearMap":
        return self.map_coeffs(lambda p: p.substitute(bindings))

    def evaluate(self, point: Mapping[VarId, Fraction]) -> "BilinearMap":
        return self.map_coeffs(lambda p: const(p.eval(point)))

    def is_constant(self) -> bool:
        return all(c.is_constant() for _, _, _, c in self.entries())

    def is_zero(self) -> bool:
        return not self._rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, BilinearMap):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    def __repr__(self) -> str:
        return f"BilinearMap(dim={self.dim}, nnz={len(self)})"

    def variables(self) -> Tuple[VarId, ...]:
        return tuple(sorted({v for *_, c in self.entries() for v in c.variables()}))

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [{"i": i, "j": j, "k": k, "poly": str(c)} for i, j, k, c in self.entries()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> "BilinearMap":
        out = cls(int(data["dim"]))
        for e in data["entries"]:
            out._accumulate(int(e["i"]), int(e["j"]), int(e["k"]), parse(e["poly"]))
        return out

    @classmethod
    def from_json(cls, text: str) -> "BilinearMap":
        return cls.from_dict(json.loads(text))


class TriForm:
    """Alternating trilinear map; only strictly increasing triples stored."""

    __slots__ = ("dim", "_rows")

    def __init__(self, dim: int, rows: Optional[Mapping[Tuple[int, int, int], Vector]] = None):
        self.dim = dim
        self._rows: Dict[Tuple[int, int, int], Vector] = {}
        for key, vec in (rows or {}).items():
            vec = {k: c for k, c in vec.items() if c}
            if vec:
                if not key[0] < key[1] < key[2]:
                    raise ValueError(f"triple {key} not strictly increasing")
                self._rows[key] = vec

    def value(self, i: int, j: int, k: int) -> Vector:
        """Value at any ordering, using the sign of the sorting permutation."""
        idx = [i, j, k]
        if len(set(idx)) < 3:
            return {}
        sign = 1
        for p in range(3):
            for q in range(p + 1, 3):
                if idx[p] > idx[q]:
                    sign = -sign
        vec = self._rows.get(tuple(sorted(idx)), {})
        return vec if sign == 1 else {l: -c for l, c in vec.items()}

    def items(self):
        return sorted(self._rows.items())

    def polynomials(self) -> List[Polynomial]:
        return [c for _, vec in self.items() for _, c in sorted(vec.items())]

    def is_zero(self) -> bool:
        return not self._rows

    def __add__(self, other: "TriForm") -> "TriForm":
        if self.dim != other.dim:
            raise DimMismatch(f"dimensions {self.dim} and {other.dim}")
        rows = {key: dict(vec) for key, vec in self._rows.items()}
        for key, vec in other._rows.items():
            rows[key] = vec_add(rows.get(key, {}), vec)
        return TriForm(self.dim, rows)

    def __sub__(self, other: "TriForm") -> "TriForm":
        return self + TriForm(other.dim, {k: vec_scale(v, -1) for k, v in other._rows.items()})

    def scale(self, c) -> "TriForm":
        return TriForm(self.dim, {k: vec_scale(v, c) for k, v in self._rows.items()})

    def substitute(self, bindings) -> "TriForm":
        return TriForm(self.dim, {key: {l: c.substitute(bindings) for l, c in vec.items()}
                                  for key, vec in self._rows.items()})

    def evaluate(self, point) -> "TriForm":
        return TriForm(self.dim, {key: {l: const(c.eval(point)) for l, c in vec.items()}
                                  for key, vec in self._rows.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriForm):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    def __repr__(self) -> str:
        return f"TriForm(dim={self.dim}, nnz={sum(len(v) for v in self._rows.values())})"


class LinearOperator:
    """n x n matrix of polynomials; column j is the image of x_j."""

    __slots__ = ("dim", "_cols")

    def __init__(self, dim: int, columns: Optional[Mapping[int, Vector]] = None):
        self.dim = dim
        self._cols: Dict[int, Vector] = {}
        for j, vec in (columns or {}).items():
            vec = {i: _poly(c) for i, c in vec.items()}
            vec = {i: c for i, c in vec.items() if c}
            if vec:
                self._cols[j] = vec

    @classmethod
    def from_images(cls, dim: int, images: Mapping[int, int]) -> "LinearOperator":
        """Operator sending x_j to x_{images[j]} (a partial basis map)."""
        return cls(dim, {j: {k: const(1)} for j, k in images.items()})

    @classmethod
    def identity(cls, dim: int, on: Iterable[int] = None) -> "LinearOperator":
        on = range(dim) if on is None else on
        return cls(dim, {j: {j: const(1)} for j in on})

    def column(self, j: int) -> Vector:
        return dict(self._cols.get(j, {}))

    def entry(self, i: int, j: int) -> Polynomial:
        return self._cols.get(j, {}).get(i, Polynomial.zero())

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for j, c in v.items():
            col = self._cols.get(j)
            if col:
                out = vec_add(out, col, c)
        return out

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.dim, {j: self.apply(col) for j, col in other._cols.items()})

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        cols = {j: dict(c) for j, c in self._cols.items()}
        for j, col in other._cols.items():
            cols[j] = vec_add(cols.get(j, {}), col, const(-1))
        return LinearOperator(self.dim, cols)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        cols = {j: dict(c) for j, c in self._cols.items()}
        for j, col in other._cols.items():
            cols[j] = vec_add(cols.get(j, {}), col)
        return LinearOperator(self.dim, cols)

    def restrict(self, columns: Iterable[int]) -> "LinearOperator":
        keep = set(columns)
        return LinearOperator(self.dim, {j: c for j, c in self._cols.items() if j in keep})

    def entries(self) -> Dict[Tuple[int, int], Polynomial]:
        return {(i, j): c for j, col in sorted(self._cols.items()) for i, c in sorted(col.items())}

    def is_zero(self) -> bool:
        return not self._cols

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._cols))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return self.dim == other.dim and self._cols == other._cols

    def __repr__(self) -> str:
        return f"LinearOperator(dim={self.dim}, nnz={len(self.entries())})"


@dataclass(frozen=True)
class SubspaceSplit:
    """n = <x_a, x_b> (+) h, with h spanned by the remaining basis vectors."""

    dim: int
    complement: Tuple[int, int] = (0, 1)
    ideal: Tuple[int, ...] = field(default=None)

    def __post_init__(self):
        if self.ideal is None:
            object.__setattr__(self, "ideal",
                               tuple(k for k in range(self.dim) if k not in self.complement))
        if sorted(self.complement + tuple(self.ideal)) != list(range(self.dim)):
            raise ValueError("complement and ideal must partition the basis")

    @classmethod
    def filiform(cls, dim: int) -> "SubspaceSplit":
        return cls(dim, (0, 1), tuple(range(2, dim)))


# ---------------------------------------------------------------------------


def circ(psi: BilinearMap, phi: BilinearMap) -> TriForm:
    """(psi o phi)(X,Y,Z) = psi(phi(X,Y),Z) + psi(phi(Y,Z),X) + psi(phi(Z,X),Y)."""
    if psi.dim != phi.dim:
        raise DimMismatch(f"dimensions {psi.dim} and {phi.dim}")
    n = psi.dim
    rows = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc: Vector = {}
                for (p, q, r) in ((i, j, k), (j, k, i), (k, i, j)):
                    for l, c in phi.bracket(p, q).items():
                        row = psi.bracket(l, r)
                        if row:
                            acc = vec_add(acc, row, c)
                if acc:
                    rows[(i, j, k)] = acc
    return TriForm(n, rows)


def jacobiator(mu: BilinearMap) -> TriForm:
    return circ(mu, mu)


def cocycle_defect(mu: BilinearMap, phi: BilinearMap) -> TriForm:
    return circ(mu, phi) + circ(phi, mu)


def ad(mu: BilinearMap, i: int) -> LinearOperator:
    """The operator x -> mu(x_i, x)."""
    return LinearOperator(mu.dim, {j: mu.bracket(i, j) for j in range(mu.dim)})


def _constant_rows(vectors: Iterable[Vector], n: int) -> List[List[Fraction]]:
    out = []
    for v in vectors:
        out.append([v[k].constant_value() if k in v else Fraction(0) for k in range(n)])
    return out


def lower_central_series(mu: BilinearMap) -> List[int]:
    """Dimensions of C_0 > C_1 > ... (C_{i+1} = [g, C_i]) until they stabilize."""
    if not mu.is_constant():
        raise NonConstantCoefficients("lower central series needs a specialized bracket")
    n = mu.dim
    basis = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    dims = [n]
    while True:
        images = []
        for vec in basis:
            v = {k: const(c) for k, c in enumerate(vec) if c}
            for a_ in range(n):
                w = mu.apply({a_: const(1)}, v)
                if w:
                    images.append(w)
        basis, _ = row_reduce(_constant_rows(images, n)) if images else ([], [])
        if len(basis) == dims[-1]:
            return dims
        dims.append(len(basis))
        if not basis:
            return dims


def is_filiform(mu: BilinearMap) -> bool:
    dims = lower_central_series(mu)
    return len(dims) == mu.dim and dims[-1] == 0


def is_derivation(D: LinearOperator, mu: BilinearMap, split: SubspaceSplit) -> Dict[Tuple[int, int], Vector]:
    """Defect D(mu(h,h')) - mu(Dh,h') - mu(h,Dh') over ideal index pairs.

    An empty dict means D is a derivation of the ideal.
    """
    ideal = sorted(split.ideal)
    out = {}
    for p, i in enumerate(ideal):
        for j in ideal[p + 1:]:
            xi, xj = {i: const(1)}, {j: const(1)}
            val = D.apply(mu.bracket(i, j))
            val = vec_add(val, mu.apply(D.apply(xi), xj), const(-1))
            val = vec_add(val, mu.apply(xi, D.apply(xj)), const(-1))
            if val:
                out[(i, j)] = val
    return out


def commutes_with(A: LinearOperator, B: LinearOperator, on: Sequence[int]) -> Dict[Tuple[int, int], Polynomial]:
    """Nonzero entries of AB - BA on the given columns."""
    return ((A @ B) - (B @ A)).restrict(on).entries()
