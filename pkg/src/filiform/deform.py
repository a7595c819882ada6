"""Linear deformations mu_t = mu + t*phi_D built from a derivation of an ideal.

Codimension-2 construction: for n = <x0, x1> + h with h an ideal containing
[n, n] and D a derivation of h commuting with ad(x0) on h,

    phi(x0, x1) = 0, phi(x0, h) = 0, phi(x1, h) = D(h), phi(h, h') = 0

is a Lie bracket and a 2-cocycle for mu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .exactalg import T, Polynomial, const, var
from .liecore import (
    BilinearMap, DimMismatch, LinearOperator, SubspaceSplit, circ, cocycle_defect,
    commutes_with, is_derivation, jacobiator, vec_add, vec_is_zero,
)
from .vergne import generic_filiform, psi

__all__ = [
    "BadDimension", "HypothesisViolated", "NotAnIdeal", "NotADerivation",
    "DerivationSpec", "Deformation", "HypothesisReport", "DeformationReport",
    "derivation", "phi_from_derivation", "check_hypotheses", "deform", "gh_deform",
    "verify_linear_deformation", "canonical_kind", "canonical_deformation",
]


class BadDimension(ValueError):
    pass


class HypothesisViolated(ValueError):
    def __init__(self, message: str, report: "HypothesisReport" = None):
        super().__init__(message)
        self.report = report


class NotAnIdeal(ValueError):
    pass


class NotADerivation(ValueError):
    pass


@dataclass(frozen=True)
class DerivationSpec:
    dim: int
    kind: str  # "D3", "D4" or "custom"
    images: Optional[Mapping[int, Mapping[int, object]]] = None  # custom: {j: {i: coeff}}

    def __post_init__(self):
        if self.kind not in ("D3", "D4", "custom"):
            raise ValueError(f"unknown derivation kind {self.kind!r}")
        if self.kind == "D3" and self.dim < 6:
            raise BadDimension("D3 needs n >= 6")
        if self.kind == "D4":
            if self.dim < 7:
                raise BadDimension("D4 needs n >= 7")
            if self.dim % 2 == 0:
                raise BadDimension("D4 is only used for odd n")
        if self.kind == "custom" and self.images is None:
            raise ValueError("custom derivation needs its images")


def derivation(spec: DerivationSpec) -> LinearOperator:
    """D3: x_k -> x_{k+n-5} for k = 2, 3, 4; D4: x_k -> x_{k+n-6} for k = 2..5."""
    n = spec.dim
    if spec.kind == "D3":
        return LinearOperator.from_images(n, {k: k + n - 5 for k in (2, 3, 4)})
    if spec.kind == "D4":
        return LinearOperator.from_images(n, {k: k + n - 6 for k in (2, 3, 4, 5)})
    cols = {}
    for j, col in spec.images.items():
        if j < 2 or any(i < 2 for i in col):
            raise ValueError("a custom derivation must act inside the ideal <x2..x_{n-1}>")
        cols[j] = col
    return LinearOperator(n, cols)


def canonical_kind(n: int) -> str:
    """Choice of D used for mu_t: D3 for even n and for n in {7, 9}, else D4."""
    if n < 6:
        raise BadDimension("no canonical derivation below n = 6")
    if n % 2 == 0 or n in (7, 9):
        return "D3"
    return "D4"


def phi_from_derivation(mu: BilinearMap, split: SubspaceSplit, D: LinearOperator,
                        check: bool = True) -> BilinearMap:
    if D.dim != mu.dim or split.dim != mu.dim:
        raise DimMismatch("mu, split and D must share a dimension")
    if check:
        report = check_hypotheses(mu, split, D)
        if not report.passed:
            raise HypothesisViolated(f"hypotheses fail: {report.failures()}", report)
    _, x1 = split.complement
    entries = {}
    for h in split.ideal:
        for k, c in D.column(h).items():
            entries[(x1, h, k)] = c
    return BilinearMap(mu.dim, entries)


@dataclass
class HypothesisReport:
    ideal_contains_commutator: bool
    ideal_is_ideal: bool
    derivation_defect: Dict[Tuple[int, int], dict]
    commutation_defect: Dict[Tuple[int, int], Polynomial]
    x0x1_bracket_ok: bool
    support_ok: bool

    @property
    def passed(self) -> bool:
        return (self.ideal_contains_commutator and self.ideal_is_ideal and self.support_ok
                and not self.derivation_defect and not self.commutation_defect
                and self.x0x1_bracket_ok)

    def failures(self) -> List[str]:
        out = []
        if not self.support_ok:
            out.append("D is not supported on the ideal")
        if not self.ideal_contains_commutator:
            out.append("[n,n] is not inside the ideal")
        if not self.ideal_is_ideal:
            out.append("the ideal is not closed under brackets with n")
        if self.derivation_defect:
            out.append(f"derivation defect at {sorted(self.derivation_defect)}")
        if self.commutation_defect:
            out.append(f"[D, ad x0] != 0 at {sorted(self.commutation_defect)}")
        if not self.x0x1_bracket_ok:
            out.append("mu(x0, x1) has an x1 component")
        return out

    def to_dict(self) -> dict:
        return {"passed": self.passed, "failures": self.failures()}


def check_hypotheses(mu: BilinearMap, split: SubspaceSplit, D: LinearOperator) -> HypothesisReport:
    """Symbolic check of the construction's hypotheses (identities in the coefficients)."""
    ideal = set(split.ideal)
    x0, x1 = split.complement
    in_ideal = all(k in ideal for (i, j, k, _) in mu.entries())
    # closed under [n, h]
    closed = all(k in ideal for (i, j, k, _) in mu.entries() if i in ideal or j in ideal)
    support_ok = all(j in ideal and all(i in ideal for i in D.column(j)) for j in D.support())
    der = is_derivation(D, mu, split)
    ad0 = LinearOperator(mu.dim, {j: mu.bracket(x0, j) for j in split.ideal})
    comm = commutes_with(D, ad0, on=split.ideal)
    x0x1_ok = mu.bracket(x0, x1).get(x1, Polynomial.zero()).is_zero()
    return HypothesisReport(in_ideal, closed, der, comm, x0x1_ok, support_ok)


@dataclass
class Deformation:
    base: BilinearMap
    direction: BilinearMap
    deformed: BilinearMap
    kind: str = "custom"

    def at(self, t) -> BilinearMap:
        return self.deformed.substitute({T: const(t)})

    def to_dict(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_dict(), "direction": self.direction.to_dict(),
                "deformed": self.deformed.to_dict()}


def _assemble(mu: BilinearMap, phi: BilinearMap, kind: str) -> Deformation:
    return Deformation(mu, phi, mu + phi.scale(var(T)), kind)


def deform(mu: BilinearMap, split: SubspaceSplit = None, D: LinearOperator = None,
           kind: str = None) -> Deformation:
    """mu_t = mu + t*phi_D.  With D omitted, the canonical D for dim mu is used."""
    n = mu.dim
    split = split or SubspaceSplit.filiform(n)
    if D is None:
        kind = kind or canonical_kind(n)
        D = derivation(DerivationSpec(n, kind))
    phi = phi_from_derivation(mu, split, D)
    return _assemble(mu, phi, kind or "custom")


_CANONICAL: Dict[Tuple[int, str], Deformation] = {}


def canonical_deformation(n: int, direction: str = "canonical") -> Deformation:
    """Deformation of the generic Vergne bracket (cached); direction is
    'canonical', 'D3' or 'D4'."""
    kind = canonical_kind(n) if direction == "canonical" else direction
    key = (n, kind)
    if key not in _CANONICAL:
        mu = generic_filiform(n).mu
        _CANONICAL[key] = deform(mu, SubspaceSplit.filiform(n), derivation(DerivationSpec(n, kind)), kind)
    return _CANONICAL[key]


def gh_deform(mu: BilinearMap, ideal: Iterable[int], x: int, D: LinearOperator) -> Deformation:
    """Codimension-1 construction: phi(x, h) = D(h), phi(h, h') = 0."""
    ideal = sorted(set(ideal))
    n = mu.dim
    if len(ideal) != n - 1 or x in ideal or not 0 <= x < n:
        raise ValueError("ideal must have codimension 1 and x must lie outside it")
    inside = set(ideal)
    for (i, j, k, _) in mu.entries():
        if (i in inside or j in inside) and k not in inside:
            raise NotAnIdeal(f"mu(x{i}, x{j}) leaves the ideal")
    for j in D.support():
        if j not in inside or any(i not in inside for i in D.column(j)):
            raise NotADerivation("D must map the ideal into itself")
    # derivation of the ideal: D[h,h'] = [Dh,h'] + [h,Dh']
    for p, i in enumerate(ideal):
        for j in ideal[p + 1:]:
            lhs = D.apply(mu.bracket(i, j))
            rhs = vec_add(mu.apply(D.column(i), {j: const(1)}), mu.apply({i: const(1)}, D.column(j)))
            if not vec_is_zero(vec_add(lhs, rhs, const(-1))):
                raise NotADerivation(f"derivation rule fails on (x{i}, x{j})")
    entries = {}
    for h in ideal:
        for k, c in D.column(h).items():
            if x < h:
                entries[(x, h, k)] = c
            else:
                entries[(h, x, k)] = -c
    return _assemble(mu, BilinearMap(n, entries), "gh")


@dataclass
class DeformationReport:
    phi_is_lie: bool
    phi_is_cocycle: bool
    jacobi_shift_zero: bool
    details: Dict[str, List[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.phi_is_lie and self.phi_is_cocycle and self.jacobi_shift_zero

    def to_dict(self) -> dict:
        return {"passed": self.passed, "phi_is_lie": self.phi_is_lie,
                "phi_is_cocycle": self.phi_is_cocycle, "jacobi_shift_zero": self.jacobi_shift_zero,
                "details": self.details}


def _nonzero_triples(form) -> List[str]:
    return [f"({i},{j},{k})->x{l}: {c}" for (i, j, k), vec in form.items() for l, c in sorted(vec.items())]


def verify_linear_deformation(d: Deformation) -> DeformationReport:
    """phi o phi = 0, mu o phi + phi o mu = 0, and J(mu_t) - J(mu) = 0 identically."""
    lie = circ(d.direction, d.direction)
    coc = cocycle_defect(d.base, d.direction)
    shift = jacobiator(d.deformed) - jacobiator(d.base)
    details = {}
    if not lie.is_zero():
        details["phi_o_phi"] = _nonzero_triples(lie)
    if not coc.is_zero():
        details["cocycle_defect"] = _nonzero_triples(coc)
    if not shift.is_zero():
        details["jacobi_shift"] = _nonzero_triples(shift)
    return DeformationReport(lie.is_zero(), coc.is_zero(), shift.is_zero(), details)
