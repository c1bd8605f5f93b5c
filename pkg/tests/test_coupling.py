"""Diagonal <f> elements, the printed table, and the Clebsch-Gordan statement about f."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lande_rterm.coupling import (
    PRINTED_TABLE1,
    CoupledLevel,
    allowed_J,
    f_classical,
    f_expectation_6j,
    f_expectation_msum,
    fit_cg_claim,
    interval_factor,
    table1,
    table1_discrepancies,
    verify_cg_normalization_claim,
)
from lande_rterm.errors import DegenerateGrid, InvalidCoupling
from lande_rterm.exact import HalfInt


def test_invalid_coupling():
    with pytest.raises(InvalidCoupling):
        CoupledLevel(1, 1, 3)
    with pytest.raises(InvalidCoupling):
        CoupledLevel(1, HalfInt.of("1/2"), 1)


def test_allowed_J():
    assert [str(J) for J in allowed_J(2, HalfInt.of("3/2"))] == ["1/2", "3/2", "5/2", "7/2"]


def test_f_classical_endpoints():
    assert f_classical(0.0) == 4.0
    assert math.isclose(f_classical(math.pi / 2), -2.0)


def test_table_rows_and_order():
    rows = table1()
    assert len(rows) == 14
    assert rows[0].interval_coeff is None
    assert str(rows[-1].f_expect) == "16/49"


def test_printed_f_column_agrees():
    for row in table1():
        key = (int(row.level.S), int(row.level.L), int(row.level.J))
        assert PRINTED_TABLE1[key][0] == row.f_expect


def test_discrepancy_report():
    (entry,) = table1_discrepancies()
    assert (entry["S"], entry["L"], entry["J"], entry["column"]) == (1, 3, 4, "interval")
    assert entry["printed"] == "-20/150"
    assert entry["computed"] == Fraction(4, 15)


def test_interval_factor_examples():
    assert interval_factor(1, 1, 1) == Fraction(-60, 25)
    assert interval_factor(2, 1, 2) == Fraction(-28, 35)
    assert [interval_factor(2, 2, J) for J in (1, 2, 3, 4)] == \
        [Fraction(n, 147) for n in (-84, -60, -20, 36)]


@pytest.mark.parametrize("L,S", [(1, 1), (2, 2), (3, 1), (2, 3)])
def test_msum_is_independent_of_M(L, S):
    for J in allowed_J(L, S):
        level = CoupledLevel(L, S, J)
        values = {f_expectation_msum(level, M) for M in range(-int(J), int(J) + 1)}
        assert values == {f_expectation_6j(level)}


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_routes_agree(L, S, data):
    J = data.draw(st.sampled_from(allowed_J(L, S)))
    level = CoupledLevel(L, S, J)
    assert f_expectation_6j(level) == f_expectation_msum(level)


def test_half_integer_levels():
    h = HalfInt.of
    assert f_expectation_6j(CoupledLevel(1, h("3/2"), h("5/2"))) == Fraction(1, 5)
    assert f_expectation_6j(CoupledLevel(2, h("3/2"), h("1/2"))) == 1
    # spin 1/2 has no quadrupole moment
    assert f_expectation_6j(CoupledLevel(2, h("1/2"), h("5/2"))) == 0
    with pytest.raises(ValueError):
        f_expectation_msum(CoupledLevel(1, h("3/2"), h("5/2")))


def test_zero_angular_momentum_gives_zero():
    assert f_expectation_6j(CoupledLevel(0, 2, 2)) == 0


def test_cg_claim_is_not_a_proportionality():
    fit = fit_cg_claim()
    # a scalar function of beta is not a single (2, 0) component: large residual
    assert fit.relative_residual > 0.5
    assert fit.constant != pytest.approx(fit.printed_constant, rel=0.1)
    assert verify_cg_normalization_claim() == fit.constant


def test_cg_claim_detects_true_proportionality():
    # a target that really is a multiple of the combination is recovered exactly
    from lande_rterm.coupling import cg_combination

    def target(t, p, tp, pp, b):
        return 2.5 * cg_combination(t, p, tp, pp).real

    fit = fit_cg_claim(target=target)
    assert fit.constant == pytest.approx(2.5, rel=1e-12)
    assert fit.residual_rms < 1e-12


def test_cg_claim_errors():
    with pytest.raises(ValueError):
        fit_cg_claim(grid_size=4)
    with pytest.raises(DegenerateGrid):
        fit_cg_claim(betas=[1.0, 1.0])


def test_classical_average_of_f_vanishes():
    # <f> over the sphere of relative directions is 4 <P2> = 0
    x, w = np.polynomial.legendre.leggauss(20)
    assert abs(np.sum(w * f_classical(np.arccos(x))) / 2) < 1e-13
