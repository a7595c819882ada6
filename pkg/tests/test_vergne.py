from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from filiform.exactalg import const
from filiform.liecore import BilinearMap, DimMismatch, circ, cocycle_defect, jacobiator
from filiform.vergne import (
    FiliformPoint, IndexNotInDelta, LengthMismatch, delta_set, delta_size_closed_form,
    generic_filiform, mu0, psi, specialize,
)
import oracles


@pytest.mark.parametrize("n,size", [(7, 4), (8, 7), (9, 9), (10, 13), (11, 16)])
def test_delta_sizes(n, size):
    assert len(delta_set(n)) == size == delta_size_closed_form(n)


@pytest.mark.parametrize("n", range(4, 14))
def test_delta_matches_reference(n):
    assert delta_set(n) == oracles.delta(n)


def test_delta_includes_even_extra_index():
    assert (4, 9) in delta_set(10)
    assert (4, 10) in delta_set(11) and (4, 9) not in delta_set(11)


def test_psi_26_in_dim_9():
    # the a[2,6] column of the dimension-9 bracket table
    assert psi(9, 2, 6).entries() == [
        (1, 4, 6, const(-1)), (1, 5, 7, const(-2)), (1, 6, 8, const(-3)),
        (2, 3, 6, const(1)), (2, 4, 7, const(1)), (2, 5, 8, const(1)),
    ]
    with pytest.raises(IndexNotInDelta):
        psi(9, 1, 3)


def test_psi_38_binomials():
    p = psi(11, 3, 8)
    assert p.coeff(1, 6, 8) == const(1)
    assert p.coeff(1, 7, 9) == const(3)
    assert p.coeff(1, 8, 10) == const(6)
    assert p.coeff(2, 5, 8) == const(-1)
    assert p.coeff(2, 6, 9) == const(-2)


@pytest.mark.parametrize("n", range(6, 12))
def test_generic_bracket_matches_reference(n):
    c = oracles.structure_constants(n)
    mu = generic_filiform(n).mu
    for i in range(n):
        for j in range(i + 1, n):
            ours = {k: oracles.to_sympy(p) for k, p in mu.bracket(i, j).items()}
            ref = {k: v for k, v in c[i][j].items() if v != 0}
            assert ours == ref, (i, j)


@pytest.mark.parametrize("n", [7, 9, 10])
def test_psi_are_cocycles_and_jacobi_splits(n):
    m0 = mu0(n)
    for r, s in delta_set(n):
        ps = psi(n, r, s)
        assert cocycle_defect(m0, ps).is_zero()
        assert jacobiator(m0 + ps) == circ(ps, ps)


def test_mu0_brackets():
    assert mu0(5).entries() == [(0, j, j + 1, const(1)) for j in range(1, 4)]


points = st.integers(7, 11).flatmap(
    lambda n: st.lists(st.fractions(max_denominator=9), min_size=len(delta_set(n)),
                       max_size=len(delta_set(n))).map(lambda vals: FiliformPoint(n, vals)))


@given(points)
def test_point_round_trip(p):
    assert FiliformPoint.from_json(p.to_json()) == p
    assert FiliformPoint.from_dict(p.to_dict()) == p


def test_point_rejects_bad_length():
    with pytest.raises(LengthMismatch):
        FiliformPoint(9, [1, 2, 3])


def test_specialize_fixes_parameters():
    p = FiliformPoint(9, [1, -1, 0, 0, 0, 1, 1, 0, 1])
    mu = specialize(generic_filiform(9), p)
    assert mu.is_constant()
    assert mu.coeff(1, 2, 4) == const(1) and mu.coeff(1, 2, 5) == const(-1)
    assert jacobiator(mu).is_zero()
    with pytest.raises(DimMismatch):
        specialize(generic_filiform(10), p)
