"""Dimension-specific elimination chains: starting from [g] in normal form,
force t = 0 on the open set U^n of each component of F^9, F^10, F^11."""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .exactalg import T, MultiplicativeSet, Polynomial, a, const, m, parse, var
from .isokit import (
    AssertBinding, AssertEquals, Combine, ConcludeVarZero, EqLabel, Expand, ProofScript,
    SolveLinear, Cancel,
)

E = EqLabel

P1 = "2*a[1,4]*a[3,8] - 3*a[2,6]^2 + a[2,6]*a[3,8]"
P3 = "2*a[1,4]*a[3,9] + 3*a[1,5]*a[3,8] - 7*a[2,6]*a[2,7] + a[2,6]*a[3,9] + 3*a[2,7]*a[3,8]"
U_BASE = ["a[1,4]", "a[1,5]", "3*a[2,6]*a[1,5]*(a[1,4] - a[2,6]) - 2*a[2,7]*a[1,4]^2"]
U_EXTRA = {
    9: ["2*a[2,6] - a[1,4]", "a[3,8]"],
    10: ["a[2,6]", "a[3,8]", "a[1,4]^2 + a[2,7]*a[4,9]", "15*a[1,4]^2 - a[2,7]*a[4,9]"],
    11: ["a[2,6]", "a[3,8]"],
}
# a14*m41 - m52 - a14*m31*m32 + m32^3/6; vanishes once t does
W = "a[1,4]*m[4,1] - m[5,2] - a[1,4]*m[3,1]*m[3,2] + 1/6*m[3,2]^3"


def open_set(n: int) -> MultiplicativeSet:
    return MultiplicativeSet([parse(s) for s in U_BASE + U_EXTRA[n]])


def x0_solve(j: int, k: int, expected=None) -> list:
    """E[0,j]^k is linear in m[k+1,j+2] with coefficient 1."""
    steps = [Expand(E(0, j, k)), SolveLinear(m(k + 1, j + 2))]
    if expected is not None:
        steps.append(AssertBinding(m(k + 1, j + 2), expected))
    return steps


def x0_band(n: int, offset: int, js: Sequence[int] = None) -> list:
    js = range(1, n - offset) if js is None else js
    out = []
    for j in js:
        if j + offset <= n - 1:
            out += x0_solve(j, j + offset)
    return out


def _m42_from_e126() -> list:
    return [
        Expand(E(1, 2, 6)),
        AssertEquals("-a[2,6]*m[3,2]^2 + 2*a[2,6]*m[4,2]"),
        Cancel("a[2,6]"),
        SolveLinear(m(4, 2)),
        AssertBinding(m(4, 2), ("m[3,2]^2", "2")),
    ]


def _script(name, n, steps, component=None, substitutions=None, notes=(), generators=None):
    subs = {}
    for v, p in (substitutions or {}).items():
        subs[v] = parse(p) if isinstance(p, str) else p
    gens = {k: parse(v) for k, v in (generators or {}).items()}
    return ProofScript(name, n, steps, stage="prop-g", component=component, substitutions=subs,
                       nonzero=open_set(n), generators=gens, imports=("prop_g",), goal=T,
                       notes=tuple(notes))


def prop_dim9() -> ProofScript:
    steps = (
        x0_solve(1, 4, "-a[1,4]*m[3,1] + m[4,2]")
        + x0_solve(2, 5, "-a[1,4]*m[3,1] + m[4,2]")
        + x0_solve(3, 6, "(a[2,6] - a[1,4])*m[3,1] + m[4,2]")
        + x0_solve(4, 7, "(2*a[2,6] - a[1,4])*m[3,1] + m[4,2]")
        + [
            Combine((("a[2,7]", E(1, 5, 8)), ("2*a[2,6] - a[1,4]", E(2, 3, 8)),
                     ("a[1,4]*a[2,6] - 2*a[2,6]^2", E(0, 5, 8))), name="E"),
            AssertEquals(f"(a[1,4] - 2*a[2,6])*(({P1})*m[3,1] + a[3,8]*(m[3,2]^2 - 2*m[4,2]))"),
            Combine(((1, "fact:E"), ("-(a[1,4] - 2*a[2,6])*m[3,1]", "gen:P1")), name="E'"),
            AssertEquals("(a[1,4] - 2*a[2,6])*a[3,8]*(m[3,2]^2 - 2*m[4,2])"),
            Cancel("(a[1,4] - 2*a[2,6])*a[3,8]"),
            SolveLinear(m(4, 2)),
            AssertBinding(m(4, 2), ("m[3,2]^2", "2")),
            Expand(E(1, 2, 6)),
            AssertEquals("t"),
            ConcludeVarZero(T),
        ]
    )
    return _script("prop_dim9", 9, steps, generators={"P1": P1})


def _dim10_prefix() -> list:
    return (
        x0_solve(1, 4, "-a[1,4]*m[3,1] + m[4,2]")
        + x0_solve(2, 5, "-a[1,4]*m[3,1] + m[4,2]")
        + x0_solve(3, 6, "(a[2,6] - a[1,4])*m[3,1] + m[4,2]")
        + _m42_from_e126()
    )


def _dim10_tail(n: int = 10) -> list:
    # remaining x0 equations: m86, m97, m10,8, m10,9, then the offset-4 and offset-5 bands
    return (x0_band(n, 3, (4, 5, 6)) + x0_band(n, 2, (n - 3,))
            + x0_band(n, 4) + x0_band(n, 5) + x0_band(n, 6))


def prop_dim10_c1() -> ProofScript:
    steps = _dim10_prefix() + _dim10_tail() + [
        Combine(((1, E(1, 4, 9)), (-1, E(1, 2, 7)), ("m[3,1]*m[3,2] - m[4,1]", "gen:P1")), name="E'"),
        AssertEquals(f"3*a[3,8]*({W})"),
        Cancel("a[3,8]"),
        SolveLinear(m(5, 2)),
        AssertBinding(m(5, 2), "a[1,4]*m[4,1] - a[1,4]*m[3,1]*m[3,2] + 1/6*m[3,2]^3"),
        Expand(E(1, 2, 7)),
        AssertEquals("t"),
        ConcludeVarZero(T),
    ]
    notes = (
        "E[2,3]^8 and E[1,3]^8 - E[1,2]^7 are P1 multiples of m31 and m41 - m31*m32, so they "
        "vanish identically on C10_1 and do not determine m31 or m41; the chain avoids them.",
        "m52 = m32^3/6 (weight 3), not m32^2/6.",
    )
    return _script("prop_dim10_c1", 10, steps, component="C10_1",
                   substitutions={a(4, 9): const(0)}, generators={"P1": P1}, notes=notes)


def _dim10_c23(name: str, component: str, subs: Dict, factor: str) -> ProofScript:
    steps = _dim10_prefix() + _dim10_tail() + [
        Expand(E(1, 2, 7), name="E127"),
        SolveLinear(m(5, 2), source="E127"),
        Expand(E(1, 2, 8), name="E128"),
        SolveLinear(m(6, 2), source="E128"),
        Expand(E(1, 4, 9)),
        AssertEquals((f"({factor})*t", "a[1,4]^2")),
        ConcludeVarZero(T),
    ]
    notes = (
        "E[2,3]^8 vanishes identically on this component, so m31 is not forced to 0; "
        "the chain eliminates m52 and m62 instead and reads t off E[1,4]^9.",
    )
    return _script(name, 10, steps, component=component, substitutions=subs, notes=notes)


def prop_dim10_c2() -> ProofScript:
    return _dim10_c23("prop_dim10_c2", "C10_2", {a(2, 6): "a[1,4]", a(3, 8): "a[1,4]"},
                      "a[1,4]^2 + a[2,7]*a[4,9]")


def prop_dim10_c3() -> ProofScript:
    return _dim10_c23("prop_dim10_c3", "C10_3", {a(2, 6): "-a[1,4]", a(3, 8): "3*a[1,4]"},
                      "-1/5*(15*a[1,4]^2 - a[2,7]*a[4,9])")


def prop_dim11() -> ProofScript:
    steps = (
        x0_band(11, 3) + _m42_from_e126() + x0_band(11, 4) + [
            Combine(((1, E(2, 3, 9)), ("m[3,1]*m[3,2]", "gen:P1"), ("m[3,1]", "gen:P3")), name="E'"),
            AssertEquals(f"-3*a[3,8]*({W})"),
            Cancel("a[3,8]"),
            SolveLinear(m(5, 2)),
            AssertBinding(m(5, 2), "a[1,4]*m[4,1] - a[1,4]*m[3,1]*m[3,2] + 1/6*m[3,2]^3"),
            Expand(E(1, 2, 7)),
            AssertEquals("t"),
            ConcludeVarZero(T),
        ]
    )
    notes = ("E[1,2]^7 = t - 3*a26*W with W carrying m32^3/6 (weight 3), not m32^2/6.",)
    return _script("prop_dim11", 11, steps, generators={"P1": P1, "P3": P3}, notes=notes)


BUILDERS = {
    "prop_dim9": prop_dim9, "prop_dim10_c1": prop_dim10_c1, "prop_dim10_c2": prop_dim10_c2,
    "prop_dim10_c3": prop_dim10_c3, "prop_dim11": prop_dim11,
}


def dimension_scripts() -> List[ProofScript]:
    return [b() for b in BUILDERS.values()]
