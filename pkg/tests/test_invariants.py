from fractions import Fraction

import pytest

from conftest import xi
from src.exactmath import HilbertPolynomial
from src.invariants import (
    SeriesBoundError,
    bps_invariant,
    compute_report,
    dt_hat_inversion,
    hilbert_scheme_euler,
    moduli_dimension,
    mu_stable_series,
    odd_b_dt,
    proper_divisors,
    rank1_dt,
    series_k1,
    series_k2_a1,
    theorem_ss_dt,
    triangle_sum_series,
    wall_crossing_dt,
)
from src.pairs import pair_invariant, rank2_polynomial
from src.strata import TableRow, table_row_for

# (b, Σ mult·c^ss, Σ mult·c^st, DT-bar, DT-hat)
KNOWN_VALUES = [
    (0, 0, 0, Fraction(1, 4), Fraction(0)),
    (-2, 12, 0, Fraction(-21, 4), Fraction(-6)),
    (-4, 216, 54, Fraction(-639, 4), Fraction(-162)),
]


def _summary_rows(sum_c_ss, sum_c_st):
    # 합만 필요한 공식 검사용 단일 행
    placeholder = xi(-1, (1, 1, 0), [()] * 6)
    return [TableRow(placeholder, sum_c_ss, sum_c_st, 1)] if sum_c_ss or sum_c_st else []


def test_hilbert_scheme_euler():
    assert [hilbert_scheme_euler(n) for n in range(4)] == [1, 3, 9, 22]
    assert hilbert_scheme_euler(-1) == 0


def test_moduli_dimension():
    assert moduli_dimension(2, 0, -4) == 13
    assert moduli_dimension(2, 0, -1) == 1
    assert moduli_dimension(1, 0, 0) == 0


@pytest.mark.parametrize("b, c_ss, c_st, dt_bar, dt_hat", KNOWN_VALUES)
def test_theorem_route(b, c_ss, c_st, dt_bar, dt_hat):
    assert theorem_ss_dt(b, c_ss, c_st) == dt_bar
    assert bps_invariant(b, dt_bar) == dt_hat
    assert dt_hat == -c_st - Fraction(c_ss, 2), "BPS = -χ(M^s) - Σc^ss/2"


@pytest.mark.parametrize("b, c_ss, c_st, dt_bar, dt_hat", KNOWN_VALUES)
def test_wall_crossing_is_n_independent(b, c_ss, c_st, dt_bar, dt_hat):
    rows = _summary_rows(c_ss, c_st)
    for n in (5, 7, 10):
        value = wall_crossing_dt(b, pair_invariant(b, n, rows), n)
        assert value == dt_bar, f"n={n} 에서 벽 넘기 공식 값 {value}"


def test_divisors_and_rank1():
    divisors = proper_divisors(rank2_polynomial(-4))
    assert [d for d, _ in divisors] == [2]
    assert divisors[0][1] == HilbertPolynomial(Fraction(1, 2), Fraction(3, 2), -1)
    assert proper_divisors(rank2_polynomial(-1)) == []
    assert rank1_dt(HilbertPolynomial(Fraction(1, 2), Fraction(3, 2), -1)) == 9
    with pytest.raises(ValueError):
        rank1_dt(HilbertPolynomial(1, 3, 0))


def test_dt_hat_inversion_with_custom_values():
    top = rank2_polynomial(-2)
    values = {top: Fraction(5), top.half(): Fraction(4)}
    assert dt_hat_inversion(top, values.__getitem__) == 4


def test_report_b0():
    report = compute_report(0, [])
    assert report.ok, f"b=0 검사 실패: {report.failures}"
    assert report.dt_bar == Fraction(1, 4)
    assert report.dt_hat == 0
    assert report.to_json()["dt_bar"] == "1/4"


def test_report_b2(b2_rows_data):
    rows = [table_row_for(x) for x in b2_rows_data]
    report = compute_report(-2, rows)
    assert report.ok, f"b=-2 검사 실패: {report.failures + report.findings}"
    assert (report.dt_bar, report.dt_hat) == (Fraction(-21, 4), -6)
    assert report.n_used == (6, 8), "n 은 모든 행의 n_min 최댓값"
    assert report.provenance["hilbert_euler"] == "3"


def test_report_rejects_inconsistent_rows():
    report = compute_report(-2, _summary_rows(3, 0))
    assert report.findings, "Σc^ss 홀수는 관찰 결과로 보고되어야 함"
    assert not report.ok


def test_odd_b():
    assert odd_b_dt(-1, []) == (0, 0)
    assert odd_b_dt(-3, [TableRow(xi(-1, (1, 1, 0), [()] * 6), 0, 5, 3)]) == (15, -15)
    report = compute_report(-1, [])
    assert report.parity == "odd" and report.ok
    assert report.provenance["mu_stable_count"] == "0"
    with pytest.raises(ValueError):
        odd_b_dt(-2, [])


def test_generating_series():
    assert series_k1(3).to_list() == ["1", "3", "9", "22"]
    assert all(c >= 0 for c in series_k2_a1(12).coefficients)
    assert series_k2_a1(1).to_list() == ["0", "1"]


def test_triangle_identity():
    mu = mu_stable_series(16)
    assert mu.identity_holds(), f"q^{mu.closed.first_mismatch(mu.triangle)} 에서 불일치"
    assert mu.full_identity_holds()
    assert mu.closed[3] == 1, "Δ=(2,2,2) 가 q³ 항 하나를 준다"


def test_triangle_bound_too_small():
    with pytest.raises(SeriesBoundError):
        triangle_sum_series(10, bound=2)
