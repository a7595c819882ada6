"""Exact rational arithmetic and sparse multivariate polynomials.

Variables are small integer triples so that the builtin tuple order is the
variable order of the engine:

    a[r,s]  -> (0, r, s)
    m[i,j]  -> (1, i, j)
    t       -> (2, 0, 0)

so every a-parameter precedes every matrix entry, which precedes ``t``.

A monomial is the sorted tuple of its variables *with repetition*
(``a[1,4]^2*m[3,2]`` is ``((0,1,4), (0,1,4), (1,3,2))``).  Products are then
``tuple(sorted(u + v))``, which keeps the hot loop in C.

Monomials are ordered graded-lexicographically with ``t`` the largest
variable; polynomials print their terms in decreasing order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import groupby
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

VarId = Tuple[int, int, int]
Monomial = Tuple[VarId, ...]

PARAM, ENTRY, TIME = 0, 1, 2
T: VarId = (TIME, 0, 0)

__all__ = [
    "VarId", "Monomial", "Polynomial", "PolyFraction", "MultiplicativeSet",
    "UnboundVariable", "NotLinear", "NotInvertible", "ParseError",
    "a", "m", "T", "var", "const", "parse", "var_name",
    "solve_linear", "linear_span_member", "row_reduce", "rank",
    "to_rational", "rational_str",
]


class UnboundVariable(KeyError):
    pass


class NotLinear(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class ParseError(ValueError):
    pass


def a(r: int, s: int) -> VarId:
    return (PARAM, r, s)


def m(i: int, j: int) -> VarId:
    return (ENTRY, i, j)


def var_name(v: VarId) -> str:
    kind, x, y = v
    if kind == PARAM:
        return f"a[{x},{y}]"
    if kind == ENTRY:
        return f"m[{x},{y}]"
    return "t"


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def rational_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _mono_key(mono: Monomial):
    return (len(mono), mono[::-1])


def _mono_str(mono: Monomial) -> str:
    parts = []
    for v, grp in groupby(mono):
        e = sum(1 for _ in grp)
        parts.append(var_name(v) if e == 1 else f"{var_name(v)}^{e}")
    return "*".join(parts)


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Fraction]] = None):
        # callers inside this module pass already-clean dicts via _make
        self._terms: Dict[Monomial, Fraction] = {}
        self._hash = None
        if terms:
            for mono, c in terms.items():
                c = to_rational(c)
                if c:
                    mono = tuple(sorted(mono))
                    c = self._terms.get(mono, 0) + c
                    if c:
                        self._terms[mono] = c
                    else:
                        self._terms.pop(mono, None)

    @classmethod
    def _make(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return _ZERO

    @classmethod
    def one(cls) -> "Polynomial":
        return _ONE

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self._terms.get((), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> Tuple[VarId, ...]:
        return tuple(sorted({v for mono in self._terms for v in mono}))

    def total_degree(self) -> int:
        return max((len(mono) for mono in self._terms), default=-1)

    def degree(self, v: VarId) -> int:
        return max((mono.count(v) for mono in self._terms), default=-1)

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if len(self._terms) < len(other._terms):
            small, big = self._terms, other._terms
        else:
            small, big = other._terms, self._terms
        out = dict(big)
        for mono, c in small.items():
            s = out.get(mono)
            if s is None:
                out[mono] = c
            else:
                s += c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return Polynomial._make(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._make({mono: -c for mono, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return _ZERO
        out: Dict[Monomial, Fraction] = {}
        get = out.get
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
                out[mono] = get(mono, 0) + c1 * c2
        return Polynomial._make({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = to_rational(c)
        if not c:
            return _ZERO
        return Polynomial._make({mono: c * x for mono, x in self._terms.items()})

    def __truediv__(self, c) -> "Polynomial":
        if isinstance(c, Polynomial):
            c = c.constant_value()
        c = to_rational(c)
        return self.scale(1 / c)

    def __pow__(self, e: int) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative int")
        result, base = _ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- ordering / normalization ----------------------------------------

    def sorted_terms(self):
        """Terms in decreasing graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]), reverse=True)

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self._terms, key=_mono_key)
        return mono, self._terms[mono]

    def monic(self) -> "Polynomial":
        """Scale so the leading coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        return self.scale(1 / self.leading_term()[1])

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self._terms:
            return ()
        it = iter(self._terms)
        common = _counts(next(it))
        for mono in it:
            cm = _counts(mono)
            common = {v: min(e, cm.get(v, 0)) for v, e in common.items() if v in cm}
            if not common:
                return ()
        return tuple(sorted(v for v, e in common.items() for _ in range(e)))

    def divide_monomial(self, mono: Monomial) -> "Polynomial":
        out = {}
        for mm, c in self._terms.items():
            q = _mono_div(mm, mono)
            if q is None:
                raise ValueError(f"{_mono_str(mono)} does not divide {self}")
            out[q] = c
        return Polynomial._make(out)

    def exact_div(self, d: "Polynomial") -> Optional["Polynomial"]:
        """Quotient q with self == q*d, or None when d does not divide self."""
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if d.is_constant():
            return self.scale(1 / d.constant_value())
        lm, lc = d.leading_term()
        rem = self
        quot: Dict[Monomial, Fraction] = {}
        while rem._terms:
            rm, rc = rem.leading_term()
            q = _mono_div(rm, lm)
            if q is None:
                return None
            c = rc / lc
            quot[q] = c
            rem = rem - d * Polynomial._make({q: c})
        return Polynomial._make(quot)

    # -- evaluation / substitution ---------------------------------------

    def eval(self, point: Mapping[VarId, Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, c in self._terms.items():
            val = c
            for v in mono:
                try:
                    val *= point[v]
                except KeyError:
                    raise UnboundVariable(var_name(v)) from None
            total += val
        return total

    def substitute(self, bindings: Mapping[VarId, "Polynomial"]) -> "Polynomial":
        """Simultaneous substitution; unbound variables pass through."""
        if not bindings:
            return self
        bindings = {v: _coerce(p) for v, p in bindings.items()}
        cache: Dict[Tuple[VarId, int], Polynomial] = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                cache[key] = bindings[v] ** e
            return cache[key]

        acc: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            if not any(v in bindings for v in mono):
                acc[mono] = acc.get(mono, 0) + c
                continue
            keep = []
            factor = const(c)
            for v, grp in groupby(mono):
                e = sum(1 for _ in grp)
                if v in bindings:
                    factor = factor * power(v, e)
                else:
                    keep.extend([v] * e)
            keep = tuple(keep)
            for fm, fc in factor._terms.items():
                mono2 = tuple(sorted(fm + keep)) if fm and keep else (fm or keep)
                acc[mono2] = acc.get(mono2, 0) + fc
        return Polynomial._make({k: c for k, c in acc.items() if c})

    def coefficients_in(self, v: VarId) -> Dict[int, "Polynomial"]:
        """Collect by powers of v: self == sum(c_e * v**e)."""
        out: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, c in self._terms.items():
            e = mono.count(v)
            rest = tuple(x for x in mono if x != v) if e else mono
            out.setdefault(e, {})[rest] = c
        return {e: Polynomial._make(t) for e, t in out.items()}

    def coefficient_of_monomial(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            mag = -c if neg else c
            if not mono:
                body = rational_str(mag)
            elif mag == 1:
                body = _mono_str(mono)
            else:
                body = f"{rational_str(mag)}*{_mono_str(mono)}"
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def latex(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            mag = -c if neg else c
            factors = []
            for v, grp in groupby(mono):
                e = sum(1 for _ in grp)
                name = _latex_var(v)
                factors.append(name if e == 1 else f"{name}^{{{e}}}")
            body = "".join(factors)
            if mag != 1 or not mono:
                num = (rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}"
                       if mag.denominator != 1 else str(mag.numerator))
                body = num + body
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)


def _latex_var(v: VarId) -> str:
    kind, x, y = v
    if kind == PARAM:
        return f"a_{{{x},{y}}}"
    if kind == ENTRY:
        return f"m_{{{x},{y}}}"
    return "t"


def _counts(mono: Monomial) -> Dict[VarId, int]:
    out: Dict[VarId, int] = {}
    for v in mono:
        out[v] = out.get(v, 0) + 1
    return out


def _mono_div(num: Monomial, den: Monomial) -> Optional[Monomial]:
    if not den:
        return num
    rest = list(num)
    for v in den:
        try:
            rest.remove(v)
        except ValueError:
            return None
    return tuple(rest)


def const(c) -> Polynomial:
    c = to_rational(c)
    return Polynomial._make({(): c} if c else {})


def var(v: VarId) -> Polynomial:
    return Polynomial._make({(v,): Fraction(1)})


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return const(x)
    return NotImplemented


_ZERO = Polynomial._make({})
_ONE = Polynomial._make({(): Fraction(1)})


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[am]\[\s*\d+\s*,\s*\d+\s*\]|t\b)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
        pos = mt.end()
        if mt.group("num"):
            out.append(("num", int(mt.group("num"))))
        elif mt.group("var"):
            tok = mt.group("var")
            if tok == "t":
                out.append(("var", T))
            else:
                x, y = (int(s) for s in tok[2:-1].split(","))
                out.append(("var", a(x, y) if tok[0] == "a" else m(x, y)))
        else:
            out.append(("op", mt.group("op")))
    return out


def parse(text: str) -> Polynomial:
    """Parse the canonical text form (and any expression with + - * / ^ ( )).

    Division is only allowed by constants.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        kind, val = peek()
        sign = 1
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        acc = term().scale(sign)
        while True:
            kind, val = peek()
            if kind == "op" and val in "+-":
                take()
                rhs = term()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def term():
        acc = power()
        while True:
            kind, val = peek()
            if kind == "op" and val in "*/":
                take()
                rhs = power()
                if val == "*":
                    acc = acc * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        raise ParseError("division by a non-constant or zero")
                    acc = acc / rhs
            elif kind == "op" and val == "(" or kind in ("num", "var"):
                acc = acc * power()  # juxtaposition
            else:
                return acc

    def power():
        base = atom()
        kind, val = peek()
        if kind == "op" and val == "^":
            take()
            k, e = take()
            if k != "num":
                raise ParseError("exponent must be an integer literal")
            base = base ** e
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return const(val)
        if kind == "var":
            return var(val)
        if kind == "op" and val == "(":
            inner = expr()
            k, v = take()
            if (k, v) != ("op", ")"):
                raise ParseError("missing ')'")
            return inner
        if kind == "op" and val == "-":
            return -power()
        raise ParseError(f"unexpected token {val!r}")

    if not toks:
        raise ParseError("empty expression")
    result = expr()
    if pos != len(toks):
        raise ParseError(f"trailing tokens in {text!r}")
    return result


# ---------------------------------------------------------------------------
# localization


class MultiplicativeSet:
    """Polynomials declared nonvanishing; the only admissible denominators.

    Certification is syntactic: a polynomial is certified when it is a
    nonzero rational times a product of powers of the generators.
    """

    def __init__(self, generators: Iterable = ()):
        gens = []
        for g in generators:
            g = _as_poly(g)
            if g.is_zero():
                raise ValueError("the zero polynomial cannot be declared nonzero")
            if g.is_constant():
                continue
            if g not in gens:
                gens.append(g)
        self.generators: Tuple[Polynomial, ...] = tuple(gens)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return f"MultiplicativeSet([{', '.join(str(g) for g in self.generators)}])"

    def union(self, other: "MultiplicativeSet | Iterable") -> "MultiplicativeSet":
        return MultiplicativeSet(list(self.generators) + list(other))

    def factor(self, p: Polynomial) -> Optional[Tuple[Fraction, Dict[int, int]]]:
        """Write p = c * prod(gen_k ** e_k); None if impossible."""
        if p.is_zero():
            return None
        exps: Dict[int, int] = {}
        rest = p
        progress = True
        while not rest.is_constant() and progress:
            progress = False
            for k, g in enumerate(self.generators):
                q = rest.exact_div(g)
                if q is not None:
                    exps[k] = exps.get(k, 0) + 1
                    rest = q
                    progress = True
                    break
        if not rest.is_constant():
            return None
        return rest.constant_value(), exps

    def certifies(self, p: Polynomial) -> bool:
        return self.factor(p) is not None

    def cancel(self, num: Polynomial, den: Polynomial) -> Tuple[Polynomial, Polynomial]:
        """Cancel common generator factors and monomial content from num/den."""
        changed = True
        while changed and not num.is_zero():
            changed = False
            for g in self.generators:
                qd = den.exact_div(g)
                if qd is None:
                    continue
                qn = num.exact_div(g)
                if qn is None:
                    continue
                num, den, changed = qn, qd, True
                break
        return num, den


def _as_poly(g) -> Polynomial:
    if isinstance(g, Polynomial):
        return g
    if isinstance(g, str):
        return parse(g)
    if isinstance(g, tuple):
        return var(g)
    return const(g)


# ---------------------------------------------------------------------------
# fractions with certified denominators


class PolyFraction:
    """num/den with den certified nonzero by the multiplicative set in use."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = None):
        den = _ONE if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        # normalize: strip common monomial content, make den monic
        if num.is_zero():
            num, den = _ZERO, _ONE
        else:
            cn, cd = _counts(num.monomial_content()), _counts(den.monomial_content())
            common = tuple(sorted(v for v in cn if v in cd for _ in range(min(cn[v], cd[v]))))
            if common:
                num, den = num.divide_monomial(common), den.divide_monomial(common)
            lc = den.leading_term()[1]
            if lc != 1:
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num, self.den = num, den

    def is_polynomial(self) -> bool:
        return self.den == _ONE

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            other = PolyFraction(other)
        if not isinstance(other, PolyFraction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den == _ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__

    def reduce(self, nonzero: MultiplicativeSet) -> "PolyFraction":
        num, den = nonzero.cancel(self.num, self.den)
        if not den.is_zero() and den.is_constant():
            return PolyFraction(num.scale(1 / den.constant_value()))
        return PolyFraction(num, den)


def substitute_fractions(p: Polynomial, bindings: Mapping[VarId, PolyFraction]) -> PolyFraction:
    """Simultaneous substitution of fractions; the denominator is
    prod(den_v ** deg_v(p)) so the numerator stays a polynomial."""
    frac_vars = {v: f for v, f in bindings.items() if not f.is_polynomial() and p.degree(v) > 0}
    plain = {v: f.num for v, f in bindings.items() if f.is_polynomial()}
    if not frac_vars:
        return PolyFraction(p.substitute(plain))
    # homogenize each fractional variable separately
    num = p.substitute(plain)
    den = _ONE
    for v, f in frac_vars.items():
        d = num.degree(v)
        if d <= 0:
            continue
        acc = _ZERO
        for e, c in num.coefficients_in(v).items():
            acc = acc + c * (f.num ** e) * (f.den ** (d - e))
        num = acc
        den = den * f.den ** d
    return PolyFraction(num, den)


def solve_linear(p: Polynomial, v: VarId, nonzero: MultiplicativeSet) -> Tuple[PolyFraction, Polynomial]:
    """Solve p == 0 for v; p must be c*v + r with c certified nonzero.

    Returns (solution, c) with solution = -r/c, cancelled by monomial
    content and by generators of ``nonzero``.
    """
    coeffs = p.coefficients_in(v)
    if set(coeffs) - {0, 1} or 1 not in coeffs:
        raise NotLinear(f"{var_name(v)} does not occur linearly in {p}")
    c, r = coeffs[1], coeffs.get(0, _ZERO)
    if not nonzero.certifies(c):
        raise NotInvertible(f"cannot certify {c} nonzero")
    return PolyFraction(-r, c).reduce(nonzero), c


# ---------------------------------------------------------------------------
# exact linear algebra


def row_reduce(rows: Sequence[Sequence[Fraction]]) -> Tuple[list, list]:
    """Reduced row echelon form over Q. Returns (rref_rows, pivot_columns)."""
    mat = [[to_rational(x) for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_reduce(rows)[1])


def linear_span_member(p: Polynomial, basis: Sequence[Polynomial]) -> Optional[list]:
    """Rational coefficients c with p == sum(c_k * basis_k), or None."""
    monos = sorted({mono for q in list(basis) + [p] for mono in q._terms}, key=_mono_key)
    if not basis:
        return [] if p.is_zero() else None
    # columns = basis elements, augmented with p; solve by elimination
    rows = [[q._terms.get(mono, Fraction(0)) for q in basis] + [p._terms.get(mono, Fraction(0))]
            for mono in monos]
    red, pivots = row_reduce(rows)
    nb = len(basis)
    if nb in pivots:
        return None
    coeffs = [Fraction(0)] * nb
    for row, col in zip(red, pivots):
        coeffs[col] = row[nb]
    return coeffs
