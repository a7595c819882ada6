"""The variety F^n of filiform brackets in Vergne coordinates.

Equations come from two independent routes: expanding the Jacobi identity of
the generic bracket (derived), and the hand-written systems and components
(published).  compare_relations checks they span the same Q-space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactalg import MultiplicativeSet, Polynomial, VarId, a, linear_span_member, parse, rational_str, var_name
from .liecore import jacobiator
from .vergne import FiliformPoint, generic_filiform

__all__ = [
    "UnsupportedDim", "EquationSet", "ComponentDef", "OpenSetDef", "MembershipReport",
    "jacobi_relations", "known_relations", "compare_relations", "component_defs", "open_sets",
    "example_points", "membership", "normalize_up_to_scale",
]


class UnsupportedDim(ValueError):
    pass


@dataclass
class EquationSet:
    dim: int
    equations: List[Tuple[str, Polynomial]]

    def __post_init__(self):
        labels = [lab for lab, _ in self.equations]
        if len(set(labels)) != len(labels):
            raise ValueError("equation labels must be unique")
        if any(p.is_zero() for _, p in self.equations):
            raise ValueError("equations must be nonzero")

    def polynomials(self) -> List[Polynomial]:
        return [p for _, p in self.equations]

    def __len__(self) -> int:
        return len(self.equations)

    def to_dict(self) -> dict:
        return {"n": self.dim, "equations": [{"label": lab, "poly": str(p)} for lab, p in self.equations]}


@dataclass
class ComponentDef:
    dim: int
    name: str
    equations: EquationSet
    normal_substitutions: Dict[VarId, Polynomial] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, **self.equations.to_dict(),
                "normal_substitutions": {var_name(v): str(p) for v, p in sorted(self.normal_substitutions.items())}}


@dataclass
class OpenSetDef:
    dim: int
    name: str
    inequations: MultiplicativeSet

    def to_dict(self) -> dict:
        return {"n": self.dim, "name": self.name, "nonzero": [str(g) for g in self.inequations]}


def normalize_up_to_scale(p: Polynomial) -> Polynomial:
    """Divide by the leading coefficient under the fixed monomial order."""
    return p.monic()


def _order_key(p: Polynomial):
    return (p.total_degree(), str(p))


def jacobi_relations(n: int) -> EquationSet:
    """Distinct (up to scale) nonzero coefficients of the Jacobiator of the generic bracket."""
    if not 3 <= n <= 13:
        raise UnsupportedDim("jacobi_relations supports 3 <= n <= 13")
    polys = {normalize_up_to_scale(p) for p in jacobiator(generic_filiform(n).mu).polynomials()}
    ordered = sorted(polys, key=_order_key)
    return EquationSet(n, [(f"J{k + 1}", p) for k, p in enumerate(ordered)])


_EQ9 = "-3*a[2,6]^2 + a[2,6]*a[3,8] + 2*a[1,4]*a[3,8]"

_KNOWN = {
    8: ["a[3,7]*(2*a[1,4] + a[2,6])"],
    9: [_EQ9],
    10: [
        _EQ9,
        "-7*a[2,6]*a[2,7] + (2*a[1,4] + a[2,6])*a[3,9] + 3*(a[1,5] + a[2,7])*a[3,8]"
        " - (a[2,8] + 2*a[1,6])*a[4,9]",
        "a[4,9]*(2*a[1,4] - a[2,6] - a[3,8])",
    ],
    11: [
        _EQ9,
        "(6*a[3,8] - 4*a[2,6])*a[3,8] + (2*a[1,4] - a[2,6] - a[3,8])*a[4,10]",
        "-7*a[2,6]*a[2,7] + (2*a[1,4] + a[2,6])*a[3,9] + 3*(a[1,5] + a[2,7])*a[3,8]",
        "-4*a[2,7]^2 - 8*a[2,6]*a[2,8] + (4*a[1,6] + 6*a[2,8])*a[3,8] + 3*(a[1,5] + a[2,7])*a[3,9]"
        " + (2*a[1,4] + a[2,6])*a[3,10] - (2*a[1,6] + a[2,8])*a[4,10]",
    ],
}


def known_relations(n: int) -> EquationSet:
    """Published defining systems (n = 7 is the whole affine space)."""
    if n == 7:
        return EquationSet(7, [])
    if n not in _KNOWN:
        raise UnsupportedDim(f"no published system for n={n}")
    return EquationSet(n, [(f"eq{k + 1}", parse(s)) for k, s in enumerate(_KNOWN[n])])


def compare_relations(n: int) -> dict:
    """Two-way Q-linear-span comparison of derived and published systems."""
    derived = jacobi_relations(n).polynomials()
    published = known_relations(n)
    forward, backward = [], []
    for label, p in published.equations:
        c = linear_span_member(p, derived)
        forward.append({"label": label, "in_span": c is not None,
                        **({"coefficients": [rational_str(x) for x in c]} if c is not None else {"residue": str(p)})})
    pubs = published.polynomials()
    for k, p in enumerate(derived):
        c = linear_span_member(p, pubs)
        backward.append({"label": f"J{k + 1}", "in_span": c is not None,
                         **({"coefficients": [rational_str(x) for x in c]} if c is not None else {"residue": str(p)})})
    agree = all(r["in_span"] for r in forward + backward)
    return {"n": n, "derived_count": len(derived), "published_count": len(pubs), "agree": agree,
            "published_in_derived": forward, "derived_in_published": backward}


_COMPONENTS = {
    8: [
        ("C8_1", ["a[3,7]"], {"a[3,7]": "0"}),
        ("C8_2", ["2*a[1,4] + a[2,6]"], {"a[2,6]": "-2*a[1,4]"}),
    ],
    10: [
        ("C10_1", [
            "a[4,9]",
            _EQ9,
            "3*a[2,6]^2*a[3,9] + (-7*a[2,6]*a[2,7] + 3*a[1,5]*a[3,8] + 3*a[2,7]*a[3,8])*a[3,8]",
            "-7*a[2,6]*a[2,7] + (3*a[1,5] + 3*a[2,7])*a[3,8] + (2*a[1,4] + a[2,6])*a[3,9]",
        ], {"a[4,9]": "0"}),
        ("C10_2", [
            "a[2,6] - a[3,8]",
            "(3*a[1,5] - 4*a[2,7] + 3*a[3,9])*a[3,8] - (2*a[1,6] + a[2,8])*a[4,9]",
            "a[1,4] - a[3,8]",
        ], {"a[2,6]": "a[1,4]", "a[3,8]": "a[1,4]"}),
        ("C10_3", [
            "3*a[2,6] + a[3,8]",
            "(9*a[1,5] + 16*a[2,7] + a[3,9])*a[3,8] - 3*(2*a[1,6] + a[2,8])*a[4,9]",
            "3*a[1,4] - a[3,8]",
        ], {"a[2,6]": "-a[1,4]", "a[3,8]": "3*a[1,4]"}),
    ],
    11: [
        ("C11_1", [
            "a[1,4] - a[2,7]",
            _EQ9,
            "-2*(2*a[2,6] - 3*a[3,8])*a[3,8] + (2*a[2,7] - a[2,6] - a[3,8])*a[4,10]",
            "-7*a[2,6]*a[2,7] + (2*a[2,7] + a[2,6])*a[3,9] + (3*a[1,5] + 3*a[2,7])*a[3,8]",
            "-4*a[2,7]^2 - (8*a[2,6] - 6*a[3,8] + a[4,10])*a[2,8] + (3*a[1,5] + 3*a[2,7])*a[3,9]"
            " + (2*a[2,7] + a[2,6])*a[3,10] + (4*a[3,8] - 2*a[4,10])*a[1,6]",
        ], {"a[2,7]": "a[1,4]"}),
        ("C11_2", [
            "a[2,8] + a[2,7]^2 - 3*a[2,7]*a[2,9] - 3*a[2,9]",
            _EQ9,
            "-2*(2*a[2,6] - 3*a[3,8])*a[3,8] + (2*a[1,4] - a[2,6] - a[3,8])*a[4,10]",
            "-7*a[2,6]*a[2,7] + 3*(a[1,5] + a[2,7])*a[3,8] + (2*a[1,4] + a[2,6])*a[3,9]",
            "(-4 + 8*a[2,6] - 6*a[3,8] + a[4,10])*a[2,7]^2"
            " + (-24*a[2,6]*a[2,9] + 18*a[3,8]*a[2,9] + 3*a[3,9] - 3*a[2,9]*a[4,10])*a[2,7]"
            " + (-24*a[2,6] + 3*a[4,10] + 18*a[3,8])*a[2,9] + (4*a[3,8] - 2*a[4,10])*a[1,6]"
            " + (2*a[1,4] + a[2,6])*a[3,10] + 3*a[1,5]*a[3,9]",
        ], {"a[2,8]": "-a[2,7]^2 + 3*a[2,7]*a[2,9] + 3*a[2,9]"}),
    ],
}


def _var_of(text: str) -> VarId:
    p = parse(text)
    (v,) = p.variables()
    return v


def component_defs(n: int) -> List[ComponentDef]:
    if n not in _COMPONENTS:
        raise UnsupportedDim(f"no component list for n={n}")
    out = []
    for name, eqs, subs in _COMPONENTS[n]:
        es = EquationSet(n, [(f"{name}.{k + 1}", parse(s)) for k, s in enumerate(eqs)])
        out.append(ComponentDef(n, name, es, {_var_of(v): parse(p) for v, p in subs.items()}))
    return out


U_GENERATORS = ["a[1,4]", "a[1,5]", "3*a[2,6]*a[1,5]*(a[1,4] - a[2,6]) - 2*a[2,7]*a[1,4]^2"]
_U_PRIME = {
    9: ["2*a[2,6] - a[1,4]", "a[3,8]"],
    10: ["a[2,6]", "a[3,8]", "a[1,4]^2 + a[2,7]*a[4,9]", "15*a[1,4]^2 - a[2,7]*a[4,9]"],
    11: ["a[2,6]", "a[3,8]"],
}


def open_sets(n: int) -> List[OpenSetDef]:
    """[U, U^n] where U^n = U and U'."""
    if n not in _U_PRIME:
        raise UnsupportedDim(f"no open sets for n={n}")
    u = MultiplicativeSet(parse(s) for s in U_GENERATORS)
    un = MultiplicativeSet(parse(s) for s in U_GENERATORS + _U_PRIME[n])
    return [OpenSetDef(n, "U", u), OpenSetDef(n, f"U{n}", un)]


def example_points(corrected: bool = False) -> List[Tuple[FiliformPoint, Tuple[str, ...]]]:
    """Density witnesses: one point of U^n in each component of F^n.

    The published C11_2 witness violates the third relation of F^11 (value
    -12).  ``corrected=True`` replaces it by a repaired point
    (a[3,9] = -4, a[3,10] = 2), which does lie in C11_2 and U11.
    """
    F = Fraction
    pts = [
        (FiliformPoint(9, [1, -1, 0, 0, 0, 1, 1, 0, 1]), ("F9", "U9")),
        (FiliformPoint(10, [1, -16, 0, 0, 0, 0, 4, 0, 0, 0, 8, 64, 0]), ("F10", "C10_1", "U10")),
        (FiliformPoint(10, [1, 4, 0, 0, 0, 0, 1, 3, 0, 0, 1, 0, 0]), ("F10", "C10_2", "U10")),
        (FiliformPoint(10, [1, -16, 0, 0, 0, 0, -1, 9, 0, 0, 3, 0, 0]), ("F10", "C10_3", "U10")),
        (FiliformPoint(11, [1, F(1, 6), 0, 0, 0, 0, 0, 4, 1, F(-5, 12), 0, 0, 8, 0, 0, F(128, 5)]),
         ("F11", "C11_1", "U11")),
        (FiliformPoint(11, [1, 1, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 8, -6, 3, F(128, 5)]),
         ("F11", "C11_2", "U11")),
    ]
    if corrected:
        pts[5] = (FiliformPoint(11, [1, 1, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 8, -4, 2, F(128, 5)]),
                  ("F11", "C11_2", "U11"))
    return pts


@dataclass
class MembershipReport:
    point: FiliformPoint
    equations: Dict[str, Fraction]
    components: Dict[str, Dict[str, Fraction]]
    inequations: Dict[str, Dict[str, Fraction]]
    claims: Tuple[str, ...] = ()

    def verdicts(self) -> Dict[str, bool]:
        n = self.point.n
        out = {f"F{n}": all(v == 0 for v in self.equations.values())}
        for name, vals in self.components.items():
            out[name] = all(v == 0 for v in vals.values())
        for name, vals in self.inequations.items():
            out[name] = all(v != 0 for v in vals.values())
        return out

    def claim_results(self) -> Dict[str, bool]:
        v = self.verdicts()
        return {c: v.get(c, False) for c in self.claims}

    @property
    def passed(self) -> bool:
        return all(self.claim_results().values())

    def to_dict(self) -> dict:
        def vals(d):
            return {k: rational_str(x) for k, x in d.items()}
        return {
            "point": self.point.to_dict(),
            "equations": vals(self.equations),
            "components": {k: vals(v) for k, v in self.components.items()},
            "inequations": {k: vals(v) for k, v in self.inequations.items()},
            "verdicts": self.verdicts(),
            "claims": self.claim_results(),
            "passed": self.passed,
        }


def membership(point: FiliformPoint, claims: Sequence[str] = None) -> MembershipReport:
    """Evaluate every relevant equation and inequation at a point.

    Without explicit claims the point is only claimed to lie in F^n.
    """
    n = point.n
    if n not in (7, 8, 9, 10, 11):
        raise UnsupportedDim(f"membership supports 7 <= n <= 11, got {n}")
    values = point.assignment()
    eqs = {lab: p.eval(values) for lab, p in known_relations(n).equations}
    comps = {}
    if n in _COMPONENTS:
        for c in component_defs(n):
            comps[c.name] = {lab: p.eval(values) for lab, p in c.equations.equations}
    ineqs = {}
    if n in _U_PRIME:
        for o in open_sets(n):
            ineqs[o.name] = {str(g): g.eval(values) for g in o.inequations}
    claims = tuple(claims) if claims else (f"F{n}",)
    return MembershipReport(point, eqs, comps, ineqs, claims)
