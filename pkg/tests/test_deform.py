import pytest

from filiform.deform import (
    BadDimension, DerivationSpec, HypothesisViolated, NotADerivation, NotAnIdeal,
    canonical_deformation, canonical_kind, check_hypotheses, deform, derivation, gh_deform,
    phi_from_derivation, verify_linear_deformation,
)
from filiform.exactalg import T, const, var
from filiform.liecore import BilinearMap, LinearOperator, SubspaceSplit, jacobiator
from filiform.variety import example_points
from filiform.vergne import generic_filiform, mu0, psi, specialize


@pytest.mark.parametrize("n", range(6, 14))
def test_d3_hypotheses_and_psi(n):
    mu = generic_filiform(n).mu
    split = SubspaceSplit.filiform(n)
    D = derivation(DerivationSpec(n, "D3"))
    assert check_hypotheses(mu, split, D).passed
    assert phi_from_derivation(mu, split, D) == psi(n, 1, n - 3, check=False)


@pytest.mark.parametrize("n", [7, 9, 11, 13])
def test_d4_hypotheses_and_psi(n):
    mu = generic_filiform(n).mu
    split = SubspaceSplit.filiform(n)
    D = derivation(DerivationSpec(n, "D4"))
    assert check_hypotheses(mu, split, D).passed
    assert phi_from_derivation(mu, split, D) == psi(n, 1, n - 4, check=False)


@pytest.mark.parametrize("n", [9, 10, 11])
def test_canonical_deformation_is_linear(n):
    rep = verify_linear_deformation(canonical_deformation(n))
    assert rep.passed, rep.details


def test_canonical_kind():
    assert [canonical_kind(n) for n in range(6, 14)] == ["D3", "D3", "D3", "D3", "D3", "D4", "D3", "D4"]
    with pytest.raises(BadDimension):
        canonical_kind(5)


def test_bad_dimensions():
    with pytest.raises(BadDimension):
        DerivationSpec(5, "D3")
    with pytest.raises(BadDimension):
        DerivationSpec(10, "D4")
    with pytest.raises(ValueError):
        DerivationSpec(9, "D7")


def test_hypothesis_violation_reported():
    n = 9
    mu = generic_filiform(n).mu
    # x2 -> x3 does not commute with ad(x0) on the ideal
    D = LinearOperator.from_images(n, {2: 3})
    rep = check_hypotheses(mu, SubspaceSplit.filiform(n), D)
    assert not rep.passed and rep.failures()
    with pytest.raises(HypothesisViolated):
        phi_from_derivation(mu, SubspaceSplit.filiform(n), D)


def test_deformation_at_zero_is_base():
    d = canonical_deformation(10)
    assert d.at(0) == d.base
    assert d.deformed == d.base + d.direction.scale(var(T))


def test_deformation_of_specialized_point_stays_lie():
    p, _ = example_points()[1]
    mu = specialize(generic_filiform(10), p)
    d = deform(mu)
    for t in (1, -3):
        assert jacobiator(d.at(t)).is_zero()


def test_gh_construction():
    n = 6
    mu = mu0(n)
    ideal = range(1, n)
    D = LinearOperator.from_images(n, {1: 5})
    d = gh_deform(mu, ideal, 0, D)
    assert verify_linear_deformation(d).phi_is_lie
    with pytest.raises(NotAnIdeal):
        gh_deform(mu, [0, 1, 2, 3, 5], 4, LinearOperator(n))
    with pytest.raises(NotADerivation):
        gh_deform(mu, ideal, 0, LinearOperator.from_images(n, {1: 0}))
