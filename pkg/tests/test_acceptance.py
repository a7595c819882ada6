"""Acceptance criteria 1-9, exact throughout.  Each test records one
pass/fail line, printed in the terminal summary."""

import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import ACCEPTANCE
from filiform.cli import verify
from filiform.deform import (
    DerivationSpec, canonical_deformation, check_hypotheses, derivation, phi_from_derivation,
    verify_linear_deformation,
)
from filiform.exactalg import Polynomial, T, a, const, m, parse, var
from filiform.liecore import BilinearMap, SubspaceSplit, circ, cocycle_defect, is_filiform, jacobiator, lower_central_series
from filiform.scripts import DIMENSIONAL, NORMALIZATION, SUPPORTED, default_runner
from filiform.variety import compare_relations, example_points, jacobi_relations, membership, normalize_up_to_scale
from filiform.vergne import FiliformPoint, delta_set, generic_filiform, mu0, psi, specialize


def record(k, ok, detail):
    ACCEPTANCE[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_1_variety_derivation():
    checks, worst = [], 0.0
    r7, dt = timed(lambda: jacobi_relations(7))
    checks.append(len(r7) == 0); worst = max(worst, dt)
    r8, dt = timed(lambda: jacobi_relations(8))
    checks.append(r8.polynomials() == [normalize_up_to_scale(parse("a[3,7]*(2*a[1,4] + a[2,6])"))]); worst = max(worst, dt)
    r9, dt = timed(lambda: jacobi_relations(9))
    eq2 = normalize_up_to_scale(parse("2*a[1,4]*a[3,8] - 3*a[2,6]^2 + a[2,6]*a[3,8]"))
    checks.append(r9.polynomials() == [eq2]); worst = max(worst, dt)
    ok = all(checks) and worst < 1.0
    assert record(1, ok, f"F7 empty, F8 and F9 single relations; slowest {worst:.2f}s (< 1s)")


def test_criterion_2_variety_comparison():
    reps, dt = timed(lambda: [compare_relations(n) for n in (10, 11)])
    residues = [r["label"] for rep in reps for r in rep["published_in_derived"] + rep["derived_in_published"]
                if not r["in_span"]]
    ok = all(rep["agree"] for rep in reps) and dt < 10
    assert record(2, ok, f"two-way span agreement n=10,11; residues {residues or 'none'}; {dt:.2f}s (< 10s)")


def test_criterion_3_cocycle_identities():
    def run():
        bad = []
        for n in range(6, 14):
            m0 = mu0(n)
            for r, s in delta_set(n):
                p = psi(n, r, s)
                if not cocycle_defect(m0, p).is_zero() or jacobiator(m0 + p) != circ(p, p):
                    bad.append((n, r, s))
        return bad
    bad, dt = timed(run)
    ok = not bad and dt < 30
    assert record(3, ok, f"all psi_(r,s), 6 <= n <= 13: {len(bad)} failures; {dt:.2f}s (< 30s)")


def test_criterion_4_deformation_construction():
    def run():
        bad = []
        for n in range(6, 14):
            kinds = [("D3", n - 3)] + ([("D4", n - 4)] if n % 2 and n >= 7 else [])
            mu, split = generic_filiform(n).mu, SubspaceSplit.filiform(n)
            for kind, s in kinds:
                D = derivation(DerivationSpec(n, kind))
                if not check_hypotheses(mu, split, D).passed:
                    bad.append((n, kind, "hypotheses"))
                elif phi_from_derivation(mu, split, D) != psi(n, 1, s, check=False):
                    bad.append((n, kind, "phi"))
        for n in SUPPORTED:
            if not verify_linear_deformation(canonical_deformation(n)).passed:
                bad.append((n, "canonical", "linear"))
        return bad
    bad, dt = timed(run)
    ok = not bad and dt < 30
    assert record(4, ok, f"D3 (6..13), D4 (odd 7..13), mu_t linear for 9,10,11: {bad or 'ok'}; {dt:.2f}s (< 30s)")


def test_criterion_5_normal_form_chain():
    runner = default_runner()
    def run():
        return [(name, n, runner.run_named(name, n)[0]) for n in SUPPORTED for name in NORMALIZATION]
    reps, dt = timed(run)
    failed = [f"{name}@{n}" for name, n, r in reps if not r.passed]
    ok = not failed and dt < 120
    assert record(5, ok, f"{len(reps) - len(failed)}/{len(reps)} normalization scripts PASS; {dt:.2f}s (< 2 min)")


def test_criterion_6_main_results():
    runner = default_runner()
    from filiform.scripts import get_script
    def run():
        return [runner.run(get_script(name)[0]) for name in DIMENSIONAL]
    reps, dt = timed(run)
    failed = [r.script for r in reps if not (r.passed and r.conclusion == "t = 0")]
    ok = not failed and all(r.oracle_checked for r in reps) and dt < 300
    notes = sum(len(r.notes) for r in reps)
    assert record(6, ok, f"{len(reps) - len(failed)}/5 dimension scripts conclude t = 0, "
                         f"{notes} recorded discrepancies; {dt:.2f}s (< 5 min)")


@pytest.mark.xfail(strict=True, reason="the published C11_2 witness violates the third relation of F11 (value -12)")
def test_criterion_7_density_witnesses():
    reps, dt = timed(lambda: [membership(p, claims) for p, claims in example_points()])
    bad = [dict(r.claim_results()) for r in reps if not r.passed]
    u9 = [v for k, v in reps[0].inequations["U"].items() if "a[2,7]" in k][0]
    ok = not bad and reps[0].equations["eq1"] == 0 and u9 == -2 and dt < 1
    record(7, ok, f"{6 - len(bad)}/6 published witnesses verified; failing claims {bad or 'none'}; {dt:.2f}s (< 1s)")
    assert ok


def test_five_witnesses_and_repaired_c11_2():
    pts = example_points(corrected=True)
    assert all(membership(p, claims).passed for p, claims in pts)


def _specialization_failures(points):
    bad = []
    for p, claims in points:
        d = canonical_deformation(p.n)
        mu_t = specialize(generic_filiform(p.n), p, d.deformed)
        for t in (Fraction(1), Fraction(1, 2), Fraction(-3)):
            x = mu_t.substitute({T: const(t)})
            if not jacobiator(x).is_zero():
                bad.append((p.n, claims[1], str(t), "jacobi"))
                continue
            dims = lower_central_series(x)
            if not (is_filiform(x) and dims == [p.n] + list(range(p.n - 2, -1, -1))):
                bad.append((p.n, claims[1], str(t), "series"))
    return bad


@pytest.mark.xfail(strict=True, reason="mu at the published C11_2 witness is not a Lie bracket")
def test_criterion_8_specialization_sanity():
    bad, dt = timed(lambda: _specialization_failures(example_points()))
    ok = not bad and dt < 5
    record(8, ok, f"Jacobi and filiform checks at 6 points x 3 values of t: failures {bad or 'none'}; {dt:.2f}s (< 5s)")
    assert ok


def test_specialization_sanity_with_repaired_witness():
    assert _specialization_failures(example_points(corrected=True)) == []


def test_criterion_9_properties_and_full_verify():
    ok_props = True

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(st.lists(st.fractions(max_denominator=5), min_size=3, max_size=3))
    def ring(cs):
        p = const(cs[0]) * var(a(1, 4)) + const(cs[1])
        q = var(m(3, 2)) - const(cs[2])
        assert p * (q + p) == p * q + p * p
        assert parse(str(p * q)) == p * q

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(st.integers(0, 4), st.integers(0, 4), st.integers(-3, 3))
    def alternating(i, j, c):
        mu = BilinearMap(5, {(0, 1, 2): c, (1, 3, 4): 1})
        assert all((mu.coeff(i, j, k) + mu.coeff(j, i, k)).is_zero() for k in range(5))
        assert BilinearMap.from_json(mu.to_json()) == mu

    @settings(derandomize=True, max_examples=20, deadline=None)
    @given(st.lists(st.fractions(max_denominator=7), min_size=9, max_size=9))
    def point_round_trip(vals):
        p = FiliformPoint(9, vals)
        assert FiliformPoint.from_json(p.to_json()) == p

    try:
        ring(); alternating(); point_round_trip()
    except AssertionError:
        ok_props = False
    result, dt = timed(lambda: verify("all"))
    scripts_ok = all(r["passed"] for r in result["scripts"]) and all(v["agree"] for v in result["varieties"])
    ok = ok_props and scripts_ok and dt < 600
    npts = sum(p["passed"] for p in result["points"])
    assert record(9, ok, f"fixed-seed property suites {'pass' if ok_props else 'FAIL'}; verify all ran in {dt:.2f}s "
                         f"(< 10 min): scripts and varieties {'pass' if scripts_ok else 'FAIL'}, "
                         f"{npts}/6 published witnesses (see criterion 7)")
