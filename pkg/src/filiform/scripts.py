"""Built-in elimination chains for the isomorphism equations of mu_t and mu.

The normalization chain (m12, diagonal, m11, subdiagonal) brings [g] to its
normal form for n = 9, 10, 11; the dimension-specific chains then force t = 0
on the open sets of each variety component.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .exactalg import T, MultiplicativeSet, Polynomial, a, const, m, parse, var
from .isokit import (
    AssertBinding, AssertEquals, AssertMatrix, Cancel, Combine, ConcludeVarZero, EqLabel, Expand,
    ProofScript, ScriptRunner, SolveLinear, Substitute,
)

E = EqLabel
SUPPORTED = (9, 10, 11)

NORMALIZATION = ("lemma_m12", "lemma_mii", "lemma_m22", "remark_mnn", "lemma_m11", "lemma_m32", "prop_g")
DIMENSIONAL = ("prop_dim9", "prop_dim10_c1", "prop_dim10_c2", "prop_dim10_c3", "prop_dim11")
SCRIPT_NAMES = NORMALIZATION + DIMENSIONAL


def _mv(i, j) -> Polynomial:
    return var(m(i, j))


def _U() -> List[Polynomial]:
    return [parse("a[1,4]"), parse("a[1,5]"),
            parse("3*a[2,6]*a[1,5]*(a[1,4] - a[2,6]) - 2*a[2,7]*a[1,4]^2")]


def _diag_nonzero(n: int, start: int = 3) -> List[Polynomial]:
    return [_mv(i, i) for i in range(start, n + 1)]


def lemma_m12(n: int) -> ProofScript:
    steps = [
        Expand(E(1, n - 3, n - 2)),
        AssertEquals(f"-m[1,2]*m[{n - 2},{n - 2}]"),
        ConcludeVarZero(m(1, 2)),
    ]
    return ProofScript("lemma_m12", n, steps, stage="raw",
                       nonzero=MultiplicativeSet(_diag_nonzero(n)), exports=(m(1, 2),))


def lemma_mii(n: int) -> ProofScript:
    steps = []
    for j in range(1, n - 2):
        steps += [
            Expand(E(0, j, j + 1)),
            AssertEquals(f"m[{j + 2},{j + 2}] - m[1,1]*m[{j + 1},{j + 1}]"),
            SolveLinear(m(j + 2, j + 2)),
        ]
    for i in range(3, n):
        steps.append(AssertBinding(m(i, i), f"m[1,1]^{i - 2}*m[2,2]"))
    return ProofScript("lemma_mii", n, steps, stage="raw", imports=("lemma_m12",),
                       nonzero=MultiplicativeSet(_diag_nonzero(n, 1)),
                       exports=tuple(m(i, i) for i in range(3, n)))


def lemma_m22(n: int) -> ProofScript:
    steps = [
        Expand(E(1, 2, 4)),
        AssertEquals("a[1,4]*m[1,1]^3*m[2,2] - a[1,4]*m[1,1]*m[2,2]^2"),
        Cancel("a[1,4]*m[1,1]*m[2,2]"),
        SolveLinear(m(2, 2)),
    ]
    steps += [AssertBinding(m(i, i), f"m[1,1]^{i}") for i in range(2, n)]
    return ProofScript("lemma_m22", n, steps, stage="raw", imports=("lemma_mii",),
                       nonzero=MultiplicativeSet(["a[1,4]"] + _diag_nonzero(n, 1)),
                       exports=(m(2, 2),))


def remark_mnn(n: int) -> ProofScript:
    top = f"m[{n - 1},{n - 1}]"
    if n % 2:
        expected = f"-m[1,1]*{top} + m[{n},{n}]"
    else:
        expected = f"a[{(n - 2) // 2},{n - 1}]*m[2,1]*{top} - m[1,1]*{top} + m[{n},{n}]"
    steps = [
        Expand(E(0, n - 2, n - 1)),
        AssertEquals(expected),
        SolveLinear(m(n, n)),
        AssertMatrix("post-diagonal"),
    ]
    return ProofScript("remark_mnn", n, steps, stage="raw", imports=("lemma_m22",),
                       nonzero=MultiplicativeSet(["a[1,4]"] + _diag_nonzero(n, 1)),
                       exports=(m(n, n),))


def lemma_m11(n: int) -> ProofScript:
    e1 = "-2*a[1,4]^2*m[1,1]^5*m[2,1] - a[1,5]*m[1,1]^7 + a[1,5]*m[1,1]^6"
    u3 = "3*a[2,6]*a[1,5]*(a[1,4] - a[2,6]) - 2*a[2,7]*a[1,4]^2"
    steps = [
        Expand(E(0, 1, 3)), AssertEquals("m[4,3] - m[1,1]*m[3,2]"), SolveLinear(m(4, 3)),
        Expand(E(0, 2, 4)), SolveLinear(m(5, 4)),
        AssertBinding(m(5, 4), "a[1,4]*m[1,1]^3*m[2,1] + m[1,1]^2*m[3,2]"),
        Expand(E(0, 3, 5)), SolveLinear(m(6, 5)),
        AssertBinding(m(6, 5), "2*a[1,4]*m[1,1]^4*m[2,1] + m[1,1]^3*m[3,2]"),
        Expand(E(0, 4, 6), name="E046"),
        AssertEquals("a[2,6]*m[1,1]^5*m[2,1] - 3*a[1,4]*m[1,1]^5*m[2,1] - m[1,1]^4*m[3,2] + m[7,6]"),
        Combine((("a[1,4]", E(0, 4, 6)), (-1, E(1, 3, 6))), name="E1"),
        AssertEquals(e1),
        SolveLinear(m(7, 6), source="E046"),
        SolveLinear(m(2, 1), source="E1"),
        AssertBinding(m(2, 1), ("m[1,1]*a[1,5]*(1 - m[1,1])", "2*a[1,4]^2")),
        Combine((("a[1,4] - a[2,6]", E(0, 5, 7)), (-1, E(1, 4, 7)), ("-m[1,1]", "fact:E1")), name="E2"),
        AssertEquals((f"m[1,1]^7*(1 - m[1,1])*({u3})", "2*a[1,4]^2")),
        Cancel(f"m[1,1]^7*({u3})"),
        SolveLinear(m(1, 1)),
        AssertBinding(m(1, 1), 1),
        AssertBinding(m(2, 1), 0),
    ]
    return ProofScript("lemma_m11", n, steps, stage="raw", imports=("remark_mnn",),
                       nonzero=MultiplicativeSet(_U() + _diag_nonzero(n, 1)),
                       exports=(m(1, 1), m(2, 1)))


def lemma_m32(n: int) -> ProofScript:
    steps = []
    for j in range(1, n - 3):
        steps += [
            Expand(E(0, j, j + 2)),
            AssertEquals(f"m[{j + 3},{j + 2}] - m[{j + 2},{j + 1}]"),
            SolveLinear(m(j + 3, j + 2)),
        ]
    steps += [AssertBinding(m(i + 1, i), "m[3,2]") for i in range(3, n - 1)]
    return ProofScript("lemma_m32", n, steps, stage="raw", imports=("lemma_m11",),
                       nonzero=MultiplicativeSet(_U() + _diag_nonzero(n, 1)),
                       exports=tuple(m(i + 1, i) for i in range(3, n - 1)))


def prop_g(n: int) -> ProofScript:
    return ProofScript("prop_g", n, [AssertMatrix("prop-g")], stage="raw", imports=("lemma_m32",),
                       nonzero=MultiplicativeSet(_U()))


NORMALIZATION_BUILDERS = {
    "lemma_m12": lemma_m12, "lemma_mii": lemma_mii, "lemma_m22": lemma_m22,
    "remark_mnn": remark_mnn, "lemma_m11": lemma_m11, "lemma_m32": lemma_m32, "prop_g": prop_g,
}


def builtin_scripts() -> List[ProofScript]:
    out = []
    for name in NORMALIZATION:
        for n in SUPPORTED:
            out.append(NORMALIZATION_BUILDERS[name](n))
    from . import dimscripts
    out += dimscripts.dimension_scripts()
    return out


def default_runner(oracle: bool = True) -> ScriptRunner:
    runner = ScriptRunner(oracle=oracle)
    for s in builtin_scripts():
        runner.add(s)
    return runner


def get_script(name: str, n: int = None) -> List[ProofScript]:
    found = [s for s in builtin_scripts() if s.name == name and (n is None or s.n == n)]
    if not found:
        raise KeyError(f"no built-in script {name!r}" + (f" for n={n}" if n else ""))
    return found
