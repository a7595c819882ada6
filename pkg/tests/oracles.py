"""Independent reference computations in sympy, written from the defining
formulas without touching the package's own expansion code."""

import re
from math import comb

import sympy as sp


def sym(name):
    return sp.Symbol(name)


def A(r, s):
    return sym(f"a{r}_{s}")


def M(i, j):
    return sym(f"m{i}_{j}")


def to_sympy(p):
    s = str(p)
    s = re.sub(r"a\[(\d+),(\d+)\]", r"a\1_\2", s)
    s = re.sub(r"m\[(\d+),(\d+)\]", r"m\1_\2", s)
    return sp.expand(sp.sympify(s.replace("^", "**")))


def delta(n):
    out = {(r, s) for r in range(1, n) for s in range(2 * r + 2, n)}
    if n % 2 == 0:
        out.add(((n - 2) // 2, n - 1))
    return sorted(out)


def structure_constants(n, extra=None):
    """c[i][j] = dict k -> coefficient of x_k in [x_i, x_j] for the generic
    Vergne bracket (plus optional extra {(i,j,k): coeff} on i<j)."""
    c = [[dict() for _ in range(n)] for _ in range(n)]

    def add(i, j, k, v):
        c[i][j][k] = c[i][j].get(k, 0) + v
        c[j][i][k] = c[j][i].get(k, 0) - v

    for j in range(1, n - 1):
        add(0, j, j + 1, 1)
    for r, s in delta(n):
        for i in range(1, r + 1):
            for j in range(r + 1, n):
                k = i + j + s - 2 * r - 1
                if k <= n - 1:
                    coef = (-1) ** (r - i) * comb(j - r - 1, r - i)
                    if coef:
                        add(i, j, k, coef * A(r, s))
    for (i, j, k), v in (extra or {}).items():
        add(i, j, k, v)
    return c


def bracket(c, u, v):
    n = len(c)
    out = [0] * n
    for i in range(n):
        if u[i] == 0:
            continue
        for j in range(n):
            if v[j] == 0:
                continue
            for k, x in c[i][j].items():
                out[k] += u[i] * v[j] * x
    return [sp.expand(e) for e in out]


def jacobi_coefficients(n):
    c = structure_constants(n)
    e = [[int(i == k) for k in range(n)] for i in range(n)]
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                tot = [0] * n
                for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                    w = bracket(c, e[x], bracket(c, e[y], e[z]))
                    tot = [p + q for p, q in zip(tot, w)]
                out += [sp.expand(t) for t in tot if sp.expand(t) != 0]
    return out


def same_span(ps, qs):
    """Q-linear spans of two polynomial lists coincide."""
    ps, qs = [sp.Poly(p, *sorted(set().union(*[x.free_symbols for x in ps + qs]), key=str)) for p in ps], qs
    gens = ps[0].gens if ps else ()
    qs = [sp.Poly(q, *gens) for q in qs]
    monos = sorted({m for p in ps + qs for m in p.monoms()})

    def mat(lst):
        return sp.Matrix([[p.coeff_monomial(m) for m in monos] for p in lst]) if lst else sp.zeros(0, len(monos))

    rp, rq = mat(ps).rank(), mat(qs).rank()
    return rp == rq == mat(ps + qs).rank()


def iso_coefficient(n, mu_extra, g_entries, i, j, k):
    """E_{i,j}^k = (g mu_t(x_i, x_j) - mu(g x_i, g x_j))_k with g given as
    {(row, col): sympy expr}, 1-indexed; mu_t = mu + mu_extra."""
    c = structure_constants(n)
    ct = structure_constants(n, mu_extra)
    G = sp.zeros(n, n)
    for (r, col), v in g_entries.items():
        G[r - 1, col - 1] = v
    e = [[int(a == b) for b in range(n)] for a in range(n)]
    lhs = list(G * sp.Matrix(bracket(ct, e[i], e[j])))
    gi, gj = list(G[:, i]), list(G[:, j])
    rhs = bracket(c, gi, gj)
    return sp.expand(lhs[k] - rhs[k])


def prop_g_entries(n):
    g = {}
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            g[(i, j)] = M(i, j)
        g[(i, i)] = 1
    g.pop((2, 1))
    for i in range(3, n - 1):
        g[(i + 1, i)] = M(3, 2)
    return g
