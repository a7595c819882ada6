import pytest
import sympy as sp
from hypothesis import given, strategies as st

from filiform.deform import canonical_deformation
from filiform.exactalg import MultiplicativeSet, T, a, const, m, parse
from filiform.isokit import (
    AssertEquals, Cancel, ConcludeVarZero, EqLabel, Expand, IsoMatrix, IsoSystem, ProofScript,
    ScriptRunner, SolveLinear, StepFailed, export_equations, generic_g, iso_defect,
    iso_defect_oracle,
)
from filiform.dimscripts import x0_solve
import oracles

E = EqLabel
t = sp.Symbol("t")


def d3_extra(n):
    return {(1, k, k + n - 5): t for k in (2, 3, 4)}


def system(n, stage, direction="canonical"):
    d = canonical_deformation(n, direction)
    return IsoSystem(d.deformed, d.base, generic_g(n, stage))


@pytest.mark.parametrize("n", [9, 10, 11])
def test_raw_matrix_entry_count(n):
    g = generic_g(n, "raw")
    assert len(g.symbols()) == n * (n + 1) // 2 + 1
    assert len(generic_g(9, "raw").symbols()) == 46


def test_stages_shape():
    g = generic_g(9, "prop-g")
    f = g.flags()
    assert f["unit_diagonal"] and f["m21_zero"] and f["m12_zero"] and f["constant_subdiagonal"]
    assert g.entry(9, 8) == parse("m[9,8]")
    assert generic_g(9, "post-m12").entry(1, 2).is_zero()
    pd = generic_g(10, "post-diagonal")
    assert pd.entry(10, 10) == parse("m[1,1]^10 - a[4,9]*m[2,1]*m[1,1]^9")
    assert generic_g(9, "post-diagonal").entry(9, 9) == parse("m[1,1]^9")


def test_prop_g_refused_below_nine():
    with pytest.raises(ValueError):
        generic_g(8, "prop-g")


def test_shape_is_enforced():
    with pytest.raises(ValueError):
        IsoMatrix(5, {(2, 4): const(1)})
    IsoMatrix(5, {(1, 2): const(1)})


def test_e126_dim9_against_reference():
    ours = system(9, "prop-g").coeff(E(1, 2, 6))
    ref = oracles.iso_coefficient(9, d3_extra(9), oracles.prop_g_entries(9), 1, 2, 6)
    assert oracles.to_sympy(ours) == ref


def test_e126_dim9_after_first_band():
    steps = x0_solve(1, 4) + x0_solve(2, 5) + x0_solve(3, 6) + [
        Expand(E(1, 2, 6)), AssertEquals("-a[2,6]*m[3,2]^2 + 2*a[2,6]*m[4,2] + t")]
    rep = ScriptRunner().run(ProofScript("e126", 9, steps, stage="prop-g"))
    assert rep.passed, rep.failure


def test_e079_dim10_against_reference():
    ours = system(10, "prop-g").coeff(E(0, 7, 9))
    ref = oracles.iso_coefficient(10, d3_extra(10), oracles.prop_g_entries(10), 0, 7, 9)
    assert oracles.to_sympy(ours) == ref
    assert ours.substitute({a(4, 9): const(0)}) == parse("m[10,9] - m[3,2]")


def test_raw_first_diagonal_equation():
    p = system(9, "raw").coeff(E(0, 1, 2))
    assert p == parse("m[3,3] - m[1,1]*m[2,2] + m[1,2]*m[2,1]")


@given(st.sampled_from([7, 9, 10]), st.data())
def test_sparse_expansion_matches_dense(n, data):
    i = data.draw(st.integers(0, n - 2))
    j = data.draw(st.integers(i + 1, n - 1))
    stage = data.draw(st.sampled_from(["raw", "post-diagonal"]))
    d = canonical_deformation(n)
    g = generic_g(n, stage)
    sys_ = IsoSystem(d.deformed, d.base, g)
    dense = iso_defect_oracle(d.deformed, d.base, g, [(i, j)])
    assert {E(i, j, k): p for k, p in sys_.row(i, j).items()} == dense


def test_identity_and_zero_t_give_no_equations():
    d = canonical_deformation(9)
    ident = IsoMatrix(9, {(i, i): const(1) for i in range(1, 10)})
    assert iso_defect(d.at(0), d.base, ident) == {}


@pytest.mark.parametrize("n", [9, 11])
def test_direction_only_touches_x1_rows(n):
    e3, e4 = system(n, "raw", "D3").all(), system(n, "raw", "D4").all()
    differing = {lab for lab in set(e3) | set(e4) if e3.get(lab) != e4.get(lab)}
    assert differing
    assert all(lab.i == 1 and lab.j in (2, 3, 4, 5) for lab in differing)


def test_export_at_t_zero_is_automorphism_system():
    doc = export_equations(9, "raw", t=0)
    d = canonical_deformation(9)
    auto = IsoSystem(d.base, d.base, generic_g(9, "raw")).all()
    assert [(e["label"], e["poly"]) for e in doc["equations"]] == [(str(k), str(p)) for k, p in sorted(auto.items())]
    assert "warning" not in doc


def test_export_warns_without_certified_script():
    doc = export_equations(8)
    assert "warning" in doc and doc["equations"]
    with pytest.raises(ValueError):
        export_equations(14)


def _tiny(steps, nonzero=("a[2,6]",)):
    return ProofScript("tiny", 9, steps, stage="prop-g", nonzero=MultiplicativeSet(list(nonzero)), goal=T)


def test_engine_is_deterministic():
    steps = x0_solve(1, 4) + x0_solve(2, 5) + x0_solve(3, 6) + [Expand(E(1, 2, 6)), SolveLinear(m(4, 2))]
    r1 = ScriptRunner().run(_tiny(steps))
    r2 = ScriptRunner().run(_tiny(steps))
    assert r1.to_dict() == r2.to_dict()
    # m42 absorbs t here, so the goal is not reached
    assert not r1.passed and "goal" in r1.failure


def test_engine_reports_wrong_assertion():
    rep = ScriptRunner().run(_tiny([Expand(E(1, 2, 6)), AssertEquals("t")]))
    assert not rep.passed
    assert "step 1" in rep.failure and "difference" in rep.failure


def test_engine_refuses_uncertified_division():
    steps = [Expand(E(1, 2, 6)), Cancel("a[2,6]")]
    rep = ScriptRunner().run(_tiny(steps, nonzero=()))
    assert not rep.passed and "not certified" in rep.failure


def test_engine_refuses_uncertified_conclusion():
    steps = [Expand(E(0, 1, 4)), ConcludeVarZero(m(5, 3))]
    rep = ScriptRunner().run(_tiny(steps))
    assert not rep.passed


def test_step_failed_carries_index():
    rep = ScriptRunner().run(_tiny([Expand(E(1, 2, 6)), SolveLinear(m(3, 2))]))
    assert not rep.passed
    assert rep.records[-1].ok is False and rep.records[-1].index == 1
