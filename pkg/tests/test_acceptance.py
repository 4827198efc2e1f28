"""
b=-4 전체 열거: 행 개수, 중복도, c 값 합, 불변량
"""
from collections import Counter
from fractions import Fraction

import pytest

from src.invariants import compute_report
from src.sigma import enumerate_D
from src.strata import build_table_rows, weighted_sums


@pytest.fixture(scope="module")
def rows_b4():
    return build_table_rows(enumerate_D(-4))


def test_row_count_and_multiplicities(rows_b4):
    assert len(rows_b4) == 86
    assert Counter(row.multiplicity for row in rows_b4) == {3: 75, 6: 5, 1: 6}
    assert all(row.xi.deltas == (2, 2, 2) and (row.c_ss, row.c_st) == (0, 1)
               for row in rows_b4 if row.multiplicity == 1)


def test_sums_and_invariants(rows_b4):
    assert weighted_sums(rows_b4) == (216, 54)
    report = compute_report(-4, rows_b4)
    assert report.ok, f"b=-4 검사 실패: {report.failures + report.findings}"
    assert report.dt_bar == Fraction(-639, 4)
    assert report.dt_hat == -162
    assert report.chi_stable == 54


def test_sample_rows_present(rows_b4, two_free_xi, stable_column_xi, coincident_xi):
    by_data = {row.xi: row for row in rows_b4}
    assert (by_data[two_free_xi].c_ss, by_data[two_free_xi].c_st) == (4, 0)
    assert (by_data[stable_column_xi].c_ss, by_data[stable_column_xi].c_st) == (0, 1)
    assert (by_data[coincident_xi].c_ss, by_data[coincident_xi].c_st) == (1, 0)
