"""Isomorphism equations between mu_t and mu, and a replayable proof-script engine.

For g: mu_t -> mu with matrix [g] (entries m[i,j], 1-indexed, column j+1 is the
image of x_j) the defect is

    E_{i,j} = g mu_t(x_i, x_j) - mu(g x_i, g x_j),

and E_{i,j}^k is its x_k coefficient.  Scripts replay elimination chains on
these coefficients; every division must be by a polynomial certified nonzero
by the script's multiplicative set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .exactalg import (
    MultiplicativeSet, NotInvertible, NotLinear, PolyFraction, Polynomial, VarId,
    const, m, parse, solve_linear, substitute_fractions, var, var_name,
)
from .liecore import BilinearMap, DimMismatch, LinearOperator, vec_add

log = logging.getLogger(__name__)

STAGES = ("raw", "post-m12", "post-diagonal", "prop-g")

__all__ = [
    "STAGES", "EqLabel", "IsoMatrix", "generic_g", "iso_defect", "iso_defect_oracle",
    "IsoSystem", "StepFailed",
    "Expand", "Combine", "SolveLinear", "Cancel", "Substitute", "AssertEquals",
    "AssertBinding", "AssertMatrix", "ConcludeVarZero",
    "ProofScript", "StepRecord", "VerificationReport", "run_script", "ScriptRunner",
    "export_equations", "CERTIFIED_DIMS",
]

CERTIFIED_DIMS = (9, 10, 11)


@dataclass(frozen=True, order=True)
class EqLabel:
    i: int
    j: int
    k: int

    def __str__(self) -> str:
        return f"E[{self.i},{self.j}]^{self.k}"


class IsoMatrix:
    """Matrix [g] in central-series-preserving shape (lower triangle + m[1,2])."""

    def __init__(self, dim: int, entries: Mapping[Tuple[int, int], Polynomial], stage: str = "custom"):
        self.dim = dim
        self.stage = stage
        self.entries: Dict[Tuple[int, int], Polynomial] = {}
        for (i, j), p in entries.items():
            if j > i and (i, j) != (1, 2):
                raise ValueError(f"entry m[{i},{j}] violates the central-series shape")
            if p:
                self.entries[(i, j)] = p

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries.get((i, j), Polynomial.zero())

    def operator(self) -> LinearOperator:
        cols: Dict[int, Dict[int, Polynomial]] = {}
        for (i, j), p in self.entries.items():
            cols.setdefault(j - 1, {})[i - 1] = p
        return LinearOperator(self.dim, cols)

    def substitute(self, bindings: Mapping[VarId, Polynomial]) -> "IsoMatrix":
        return IsoMatrix(self.dim, {k: p.substitute(bindings) for k, p in self.entries.items()},
                         self.stage)

    def symbols(self) -> List[VarId]:
        return sorted({v for p in self.entries.values() for v in p.variables() if v[0] == 1})

    def flags(self) -> Dict[str, bool]:
        n = self.dim
        one = const(1)
        diag = [self.entry(i, i) for i in range(1, n + 1)]
        return {
            "m12_zero": self.entry(1, 2).is_zero(),
            "diagonal_powers": all(self.entry(i, i) == self.entry(1, 1) ** i for i in range(2, n)),
            "m11_one": self.entry(1, 1) == one,
            "m21_zero": self.entry(2, 1).is_zero(),
            "unit_diagonal": all(d == one for d in diag),
            "constant_subdiagonal": all(self.entry(i + 1, i) == self.entry(3, 2) for i in range(3, n - 1)),
        }

    def rows(self) -> List[List[Polynomial]]:
        return [[self.entry(i, j) for j in range(1, self.dim + 1)] for i in range(1, self.dim + 1)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IsoMatrix):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __repr__(self) -> str:
        return f"IsoMatrix(dim={self.dim}, stage={self.stage!r}, symbols={len(self.symbols())})"


def _even_top_param(n: int) -> Polynomial:
    from .exactalg import a
    return var(a((n - 2) // 2, n - 1))


def generic_g(n: int, stage: str = "raw") -> IsoMatrix:
    """Symbolic [g] with the normalizations of ``stage`` already substituted.

    raw           lower triangle plus m[1,2]
    post-m12      m[1,2] = 0
    post-diagonal also m[i,i] = m[1,1]^i (i < n); m[n,n] = m[1,1]^n for odd n,
                  m[1,1]^n - a[(n-2)/2,n-1]*m[2,1]*m[1,1]^(n-1) for even n
    prop-g        unit diagonal, m[2,1] = 0, m[i+1,i] = m[3,2] for 3 <= i <= n-2
    """
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
    if n < 3:
        raise ValueError("n must be at least 3")
    if stage == "prop-g" and n < 9:
        raise ValueError("the normal form of [g] is only established for n >= 9")
    ent = {(i, j): var(m(i, j)) for i in range(1, n + 1) for j in range(1, i + 1)}
    ent[(1, 2)] = var(m(1, 2))
    if stage == "raw":
        return IsoMatrix(n, ent, stage)
    del ent[(1, 2)]
    if stage == "post-m12":
        return IsoMatrix(n, ent, stage)
    m11, m21 = var(m(1, 1)), var(m(2, 1))
    if stage == "post-diagonal":
        for i in range(2, n):
            ent[(i, i)] = m11 ** i
        ent[(n, n)] = m11 ** n
        if n % 2 == 0:
            ent[(n, n)] = m11 ** n - _even_top_param(n) * m21 * m11 ** (n - 1)
        return IsoMatrix(n, ent, stage)
    for i in range(1, n + 1):
        ent[(i, i)] = const(1)
    del ent[(2, 1)]
    for i in range(3, n - 1):
        ent[(i + 1, i)] = var(m(3, 2))
    return IsoMatrix(n, ent, stage)


# ---------------------------------------------------------------------------
# the defect E_{i,j}


class IsoSystem:
    """Lazily expanded E_{i,j} for fixed (mu_t, mu, g); rows cached per pair."""

    def __init__(self, mu_t: BilinearMap, mu: BilinearMap, g: IsoMatrix):
        if not (mu_t.dim == mu.dim == g.dim):
            raise DimMismatch(f"dimensions {mu_t.dim}, {mu.dim}, {g.dim}")
        self.mu_t, self.mu, self.g = mu_t, mu, g
        self.n = mu.dim
        self._G = g.operator()
        self._cols = [self._G.column(j) for j in range(self.n)]
        self._ad: Dict[int, LinearOperator] = {}
        self._rows: Dict[Tuple[int, int], Dict[int, Polynomial]] = {}

    def _ad_image(self, i: int) -> LinearOperator:
        # x -> mu(g x_i, x), as an operator
        if i not in self._ad:
            u = self._cols[i]
            cols = {}
            for b in range(self.n):
                acc: Dict[int, Polynomial] = {}
                for a_, c in u.items():
                    row = self.mu.bracket(a_, b)
                    if row:
                        acc = vec_add(acc, row, c)
                if acc:
                    cols[b] = acc
            self._ad[i] = LinearOperator(self.n, cols)
        return self._ad[i]

    def row(self, i: int, j: int) -> Dict[int, Polynomial]:
        """All nonzero coefficients of E_{i,j}, i < j."""
        if not 0 <= i < j < self.n:
            raise ValueError(f"need 0 <= i < j < n, got ({i},{j})")
        key = (i, j)
        if key not in self._rows:
            lhs = self._G.apply(self.mu_t.bracket(i, j))
            rhs = self._ad_image(i).apply(self._cols[j])
            self._rows[key] = vec_add(lhs, rhs, const(-1))
        return self._rows[key]

    def coeff(self, label: EqLabel) -> Polynomial:
        return self.row(label.i, label.j).get(label.k, Polynomial.zero())

    def all(self) -> Dict[EqLabel, Polynomial]:
        out = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                for k, p in sorted(self.row(i, j).items()):
                    out[EqLabel(i, j, k)] = p
        return out


def iso_defect(mu_t: BilinearMap, mu: BilinearMap, g: IsoMatrix) -> Dict[EqLabel, Polynomial]:
    """Every nonzero E_{i,j}^k."""
    return IsoSystem(mu_t, mu, g).all()


def iso_defect_oracle(mu_t: BilinearMap, mu: BilinearMap, g: IsoMatrix,
                      pairs: Optional[Sequence[Tuple[int, int]]] = None) -> Dict[EqLabel, Polynomial]:
    """Brute-force dense expansion over all (a, b, l); independent of IsoSystem."""
    n = mu.dim
    if not (mu_t.dim == n == g.dim):
        raise DimMismatch("dimension mismatch")
    zero = Polynomial.zero()
    G = [[g.entry(r + 1, c + 1) for c in range(n)] for r in range(n)]
    C = [[[mu.coeff(x, y, k) for k in range(n)] for y in range(n)] for x in range(n)]
    Ct = [[[mu_t.coeff(x, y, k) for k in range(n)] for y in range(n)] for x in range(n)]
    if pairs is None:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = {}
    for i, j in pairs:
        for k in range(n):
            total = zero
            for l in range(n):
                if Ct[i][j][l] and G[k][l]:
                    total = total + G[k][l] * Ct[i][j][l]
            for x in range(n):
                if not G[x][i]:
                    continue
                for y in range(n):
                    if G[y][j] and C[x][y][k]:
                        total = total - G[x][i] * G[y][j] * C[x][y][k]
            if total:
                out[EqLabel(i, j, k)] = total
    return out


# ---------------------------------------------------------------------------
# proof scripts

PolyLike = Union[Polynomial, str, int, Fraction]


def _p(x: PolyLike) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, str):
        return parse(x)
    return const(x)


def _frac(x) -> PolyFraction:
    if isinstance(x, PolyFraction):
        return x
    if isinstance(x, tuple):
        return PolyFraction(_p(x[0]), _p(x[1]))
    return PolyFraction(_p(x))


@dataclass(frozen=True)
class Expand:
    """Current fact := E_{i,j}^k under the bindings established so far."""
    label: EqLabel
    name: Optional[str] = None


@dataclass(frozen=True)
class Combine:
    """Current fact := sum of coeff * source.

    A source is an EqLabel, ``"gen:<name>"`` (a defining polynomial of the
    variety, zero on it) or ``"fact:<name>"`` (a named earlier fact).
    """
    terms: Tuple[Tuple[PolyLike, Union[EqLabel, str]], ...]
    name: Optional[str] = None


@dataclass(frozen=True)
class SolveLinear:
    """Solve the current (or named) fact for a variable and bind it."""
    target: VarId
    source: Optional[str] = None


@dataclass(frozen=True)
class Cancel:
    """Divide the current fact by a factor certified nonzero."""
    factor: PolyLike


@dataclass(frozen=True)
class Substitute:
    """Re-apply all bindings (plus optional extra ones) to the current fact."""
    extra: Tuple[Tuple[VarId, PolyLike], ...] = ()


@dataclass(frozen=True)
class AssertEquals:
    """Current fact equals ``expected`` (num or (num, den)) modulo the bindings."""
    expected: Union[PolyLike, Tuple[PolyLike, PolyLike]]
    note: str = ""


@dataclass(frozen=True)
class AssertBinding:
    """The established value of ``target`` equals ``expected``."""
    target: VarId
    expected: Union[PolyLike, Tuple[PolyLike, PolyLike]]


@dataclass(frozen=True)
class AssertMatrix:
    """[g] under the current bindings equals generic_g(n, stage)."""
    stage: str


@dataclass(frozen=True)
class ConcludeVarZero:
    """Current fact is unit * v with the unit certified; bind v = 0."""
    target: VarId


Step = Union[Expand, Combine, SolveLinear, Cancel, Substitute, AssertEquals,
             AssertBinding, AssertMatrix, ConcludeVarZero]


@dataclass
class ProofScript:
    name: str
    n: int
    steps: List[Step]
    stage: str = "raw"
    direction: str = "canonical"
    component: Optional[str] = None
    substitutions: Dict[VarId, Polynomial] = field(default_factory=dict)
    nonzero: MultiplicativeSet = field(default_factory=MultiplicativeSet)
    generators: Dict[str, Polynomial] = field(default_factory=dict)
    imports: Tuple[str, ...] = ()
    exports: Tuple[VarId, ...] = ()
    goal: Optional[VarId] = None
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "stage": self.stage,
            "direction": self.direction,
            "component": self.component,
            "substitutions": {var_name(v): str(p) for v, p in sorted(self.substitutions.items())},
            "nonzero": [str(g) for g in self.nonzero],
            "generators": {k: str(v) for k, v in self.generators.items()},
            "imports": list(self.imports),
            "exports": [var_name(v) for v in self.exports],
            "goal": var_name(self.goal) if self.goal else None,
            "notes": list(self.notes),
            "steps": [describe_step(s) for s in self.steps],
        }


def describe_step(step: Step) -> str:
    if isinstance(step, Expand):
        return f"expand {step.label}" + (f" as {step.name}" if step.name else "")
    if isinstance(step, Combine):
        parts = []
        for c, src in step.terms:
            parts.append(f"({_p(c)})*{src}")
        return "combine " + " + ".join(parts) + (f" as {step.name}" if step.name else "")
    if isinstance(step, SolveLinear):
        return f"solve for {var_name(step.target)}" + (f" from {step.source}" if step.source else "")
    if isinstance(step, Cancel):
        return f"cancel nonzero factor {_p(step.factor)}"
    if isinstance(step, Substitute):
        return "substitute" + "".join(f" {var_name(v)}={_p(p)}" for v, p in step.extra)
    if isinstance(step, AssertEquals):
        return f"assert fact == {_frac(step.expected)}"
    if isinstance(step, AssertBinding):
        return f"assert {var_name(step.target)} == {_frac(step.expected)}"
    if isinstance(step, AssertMatrix):
        return f"assert [g] has {step.stage} form"
    if isinstance(step, ConcludeVarZero):
        return f"conclude {var_name(step.target)} = 0"
    raise TypeError(step)


class StepFailed(AssertionError):
    def __init__(self, script: str, index: int, step: Step, message: str,
                 difference: Optional[PolyFraction] = None):
        self.script, self.index, self.step, self.difference = script, index, step, difference
        self.message = message
        detail = f"; difference {difference}" if difference is not None else ""
        super().__init__(f"{script} step {index} ({describe_step(step)}): {message}{detail}")


@dataclass
class StepRecord:
    index: int
    description: str
    fact: str
    ok: bool = True
    message: str = ""


@dataclass
class VerificationReport:
    script: str
    n: int
    passed: bool
    records: List[StepRecord]
    bindings: Dict[str, str]
    conclusion: Optional[str] = None
    failure: Optional[str] = None
    notes: Tuple[str, ...] = ()
    oracle_checked: int = 0

    def to_dict(self) -> dict:
        return {
            "script": self.script,
            "n": self.n,
            "passed": self.passed,
            "conclusion": self.conclusion,
            "failure": self.failure,
            "oracle_checked": self.oracle_checked,
            "notes": list(self.notes),
            "bindings": dict(sorted(self.bindings.items())),
            "steps": [{"index": r.index, "step": r.description, "fact": r.fact, "ok": r.ok,
                       **({"message": r.message} if r.message else {})} for r in self.records],
        }

    def render(self) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.script} (n={self.n})"
        lines = [head]
        for r in self.records:
            mark = "ok " if r.ok else "ERR"
            lines.append(f"  {r.index:3d} {mark} {r.description}")
            if r.fact:
                lines.append(f"        -> {r.fact}")
            if r.message:
                lines.append(f"        !! {r.message}")
        if self.conclusion:
            lines.append(f"  conclusion: {self.conclusion}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


class ScriptRunner:
    """Replays scripts; imported conclusions are cached per (name, n)."""

    def __init__(self, registry: Optional[Mapping[Tuple[str, int], ProofScript]] = None,
                 oracle: bool = True):
        self.registry = dict(registry or {})
        self.oracle = oracle
        self._done: Dict[Tuple[str, int], Tuple[VerificationReport, Dict[VarId, PolyFraction]]] = {}

    def add(self, script: ProofScript) -> None:
        self.registry[(script.name, script.n)] = script

    def exports_of(self, name: str, n: int) -> Dict[VarId, PolyFraction]:
        report, exported = self.run_named(name, n)
        if not report.passed:
            raise StepFailed(name, -1, AssertMatrix("imported"), f"imported script {name} failed")
        return exported

    def run_named(self, name: str, n: int):
        key = (name, n)
        if key not in self._done:
            if key not in self.registry:
                raise KeyError(f"no script {name!r} for n={n}")
            self._done[key] = self._run(self.registry[key])
        return self._done[key]

    def run(self, script: ProofScript) -> VerificationReport:
        self.add(script)
        return self.run_named(script.name, script.n)[0]

    # -- replay -------------------------------------------------------------

    def _run(self, script: ProofScript):
        from .deform import canonical_deformation

        state = _ReplayState(script)
        records: List[StepRecord] = []
        imported: Dict[VarId, PolyFraction] = {}
        try:
            for name in script.imports:
                for v, f in self.exports_of(name, script.n).items():
                    state.bind(v, f)
                    imported[v] = f
        except StepFailed as exc:
            return (VerificationReport(script.name, script.n, False, records, {}, failure=str(exc),
                                       notes=script.notes), {})

        deformation = canonical_deformation(script.n, script.direction)
        mu_t = deformation.deformed.substitute(script.substitutions)
        mu = deformation.base.substitute(script.substitutions)
        g = generic_g(script.n, script.stage)
        state.system = IsoSystem(mu_t, mu, g)
        state.oracle = (mu_t, mu, g) if self.oracle else None

        failure = None
        for idx, step in enumerate(script.steps):
            try:
                fact = state.apply(step)
                records.append(StepRecord(idx, describe_step(step), fact))
            except StepFailed as exc:
                exc = StepFailed(script.name, idx, step, exc.message, exc.difference)
                records.append(StepRecord(idx, describe_step(step), "", False, str(exc)))
                failure = str(exc)
                break
            except (NotLinear, NotInvertible, ValueError, ZeroDivisionError, KeyError) as exc:
                exc = StepFailed(script.name, idx, step, str(exc))
                records.append(StepRecord(idx, describe_step(step), "", False, str(exc)))
                failure = str(exc)
                break
        passed = failure is None
        conclusion = None
        if passed and script.goal is not None:
            val = state.bindings.get(script.goal)
            if val is None or not val.num.is_zero():
                passed = False
                failure = f"goal {var_name(script.goal)} = 0 was not concluded"
            else:
                conclusion = f"{var_name(script.goal)} = 0"
        elif passed and script.exports:
            conclusion = ", ".join(f"{var_name(v)} = {state.bindings[v]}"
                                   for v in script.exports if v in state.bindings)
        exported = {}
        if passed:
            for v in list(imported) + list(script.exports):
                if v not in state.bindings:
                    passed, failure = False, f"export {var_name(v)} was never established"
                    break
                exported[v] = state.bindings[v]
        report = VerificationReport(
            script.name, script.n, passed, records,
            {var_name(v): str(f) for v, f in state.bindings.items()},
            conclusion=conclusion, failure=failure, notes=script.notes,
            oracle_checked=state.oracle_checked,
        )
        log.debug("%s n=%d: %s", script.name, script.n, "PASS" if passed else failure)
        return report, exported


class _ReplayState:
    def __init__(self, script: ProofScript):
        self.script = script
        self.bindings: Dict[VarId, PolyFraction] = {}
        self.facts: Dict[str, PolyFraction] = {}
        self.current: Optional[PolyFraction] = None
        self.system: Optional[IsoSystem] = None
        self.oracle = None
        self.oracle_checked = 0
        # the open set restricted to the component
        self.nonzero = MultiplicativeSet(g.substitute(script.substitutions) for g in script.nonzero)
        for v, p in script.substitutions.items():
            self.bind(v, PolyFraction(p))

    # bindings are kept fully composed
    def bind(self, v: VarId, value: PolyFraction) -> None:
        value = self.reduce(substitute_fractions(value.num, self.bindings), value.den)
        self.bindings = {w: self.reduce(substitute_fractions(f.num, {v: value}), f.den)
                         for w, f in self.bindings.items()}
        self.bindings[v] = value

    def reduce(self, frac: PolyFraction, extra_den: Polynomial = None) -> PolyFraction:
        if extra_den is not None and extra_den != Polynomial.one():
            frac = PolyFraction(frac.num, frac.den * substitute_fractions(extra_den, self.bindings).num)
        return frac.reduce(self.nonzero)

    def evaluate(self, p: Polynomial) -> PolyFraction:
        return self.reduce(substitute_fractions(p, self.bindings))

    def refresh(self, f: PolyFraction) -> PolyFraction:
        num = substitute_fractions(f.num, self.bindings)
        den = substitute_fractions(f.den, self.bindings)
        return PolyFraction(num.num * den.den, num.den * den.num).reduce(self.nonzero)

    def label_value(self, label: EqLabel) -> PolyFraction:
        raw = self.system.coeff(label)
        if self.oracle is not None:
            mu_t, mu, g = self.oracle
            ref = iso_defect_oracle(mu_t, mu, g, pairs=[(label.i, label.j)])
            if ref.get(label, Polynomial.zero()) != raw:
                raise ValueError(f"oracle disagrees on {label}")
            self.oracle_checked += 1
        return self.evaluate(raw)

    def source_value(self, src) -> PolyFraction:
        if isinstance(src, EqLabel):
            return self.label_value(src)
        kind, _, name = src.partition(":")
        if kind == "gen":
            return self.evaluate(self.script.generators[name])
        if kind == "fact":
            return self.refresh(self.facts[name])
        raise ValueError(f"unknown source {src!r}")

    def certify(self, p: Polynomial) -> bool:
        return self.nonzero.certifies(p)

    def apply(self, step: Step) -> str:
        script = self.script
        if isinstance(step, Expand):
            self.current = self.label_value(step.label)
            if step.name:
                self.facts[step.name] = self.current
            return str(self.current)
        if isinstance(step, Combine):
            num, den = Polynomial.zero(), Polynomial.one()
            for coeff, src in step.terms:
                val = self.source_value(src)
                c = self.evaluate(_p(coeff))
                # num/den + c.num*val.num/(c.den*val.den)
                tn, td = c.num * val.num, c.den * val.den
                num, den = num * td + tn * den, den * td
            self.current = PolyFraction(num, den).reduce(self.nonzero)
            if step.name:
                self.facts[step.name] = self.current
            return str(self.current)
        if isinstance(step, SolveLinear):
            fact = self.facts[step.source] if step.source else self.current
            fact = self.refresh(fact)
            sol, coeff = solve_linear(fact.num, step.target, self.nonzero)
            self.bind(step.target, sol)
            return f"{var_name(step.target)} = {self.bindings[step.target]}"
        if isinstance(step, Cancel):
            factor = self.evaluate(_p(step.factor))
            if not factor.is_polynomial() or not self.certify(factor.num):
                raise StepFailed(script.name, -1, step, f"factor {factor} is not certified nonzero")
            fact = self.refresh(self.current)
            q = fact.num.exact_div(factor.num)
            if q is None:
                raise StepFailed(script.name, -1, step, f"{factor} does not divide {fact.num}")
            self.current = PolyFraction(q, fact.den)
            return str(self.current)
        if isinstance(step, Substitute):
            for v, p in step.extra:
                self.bind(v, PolyFraction(_p(p)))
            self.current = self.refresh(self.current)
            return str(self.current)
        if isinstance(step, AssertEquals):
            exp = _frac(step.expected)
            exp = self.refresh(exp)
            cur = self.refresh(self.current)
            if cur != exp:
                diff = PolyFraction(cur.num * exp.den - exp.num * cur.den, cur.den * exp.den)
                raise StepFailed(script.name, -1, step, "fact differs from expected", diff)
            return str(cur)
        if isinstance(step, AssertBinding):
            exp = self.refresh(_frac(step.expected))
            got = self.bindings.get(step.target)
            if got is None:
                raise StepFailed(script.name, -1, step, f"{var_name(step.target)} is unbound")
            if got != exp:
                diff = PolyFraction(got.num * exp.den - exp.num * got.den, got.den * exp.den)
                raise StepFailed(script.name, -1, step, "binding differs from expected", diff)
            return f"{var_name(step.target)} = {got}"
        if isinstance(step, AssertMatrix):
            target = generic_g(script.n, step.stage)
            raw = generic_g(script.n, "raw")
            for key in set(raw.entries) | set(target.entries):
                got = self.evaluate(raw.entry(*key))
                want = PolyFraction(target.entry(*key))
                if got != want:
                    raise StepFailed(script.name, -1, step,
                                     f"m[{key[0]},{key[1]}] is {got}, expected {want}")
            return f"[g] in {step.stage} form"
        if isinstance(step, ConcludeVarZero):
            fact = self.refresh(self.current)
            coeffs = fact.num.coefficients_in(step.target)
            if set(coeffs) != {1}:
                raise StepFailed(script.name, -1, step,
                                 f"fact is not a multiple of {var_name(step.target)}: {fact}")
            if not self.certify(coeffs[1]):
                raise StepFailed(script.name, -1, step, f"cannot certify {coeffs[1]} nonzero")
            self.bind(step.target, PolyFraction(Polynomial.zero()))
            return f"{var_name(step.target)} = 0"
        raise TypeError(f"unknown step {step!r}")


def run_script(script: ProofScript, runner: Optional[ScriptRunner] = None) -> VerificationReport:
    """Replay one script (imports resolved through the built-in registry)."""
    if runner is None:
        from .scripts import default_runner
        runner = default_runner()
    return runner.run(script)


def export_equations(n: int, stage: str = "raw", direction: str = "canonical", t=None) -> dict:
    """Every nonzero E_{i,j}^k of the canonical mu_t against mu, as canonical text.

    ``t`` specializes the deformation parameter (t=0 gives the automorphism
    equations of mu).  Dimensions without a certified script carry a warning.
    """
    from .deform import canonical_deformation
    from .exactalg import T, rational_str, to_rational

    if n > 13:
        raise ValueError("export is limited to n <= 13")
    d = canonical_deformation(n, direction)
    mu_t = d.deformed if t is None else d.at(to_rational(t))
    system = IsoSystem(mu_t, d.base, generic_g(n, stage))
    doc = {
        "n": n,
        "stage": stage,
        "direction": d.kind,
        "t": None if t is None else rational_str(to_rational(t)),
        "equations": [{"label": str(lab), "i": lab.i, "j": lab.j, "k": lab.k, "poly": str(p)}
                      for lab, p in sorted(system.all().items())],
    }
    if n not in CERTIFIED_DIMS:
        doc["warning"] = f"no certified elimination script for n={n}; listing only"
    return doc
