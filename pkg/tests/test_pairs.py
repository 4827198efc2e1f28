import pytest

from src.exactmath import HilbertPolynomial
from src.pairs import (
    ParityError,
    chart_pair_counts,
    checked_polynomial_value,
    compatible_triples,
    decomposable_pair_contribution,
    expected_weighted_count,
    n_min,
    pair_invariant,
    rank2_polynomial,
    section_weight,
)
from src.strata import STABLE, STRICTLY_SS, StratumClass, classify_pattern, enumerate_patterns, table_row_for


def test_rank2_polynomial():
    assert rank2_polynomial(-4) == HilbertPolynomial(1, 3, -2)
    assert rank2_polynomial(0)(4) == 30


def test_single_box_chart_counts(single_box):
    pattern = enumerate_patterns(single_box)[0]
    counts = chart_pair_counts(single_box, pattern, 5)
    assert [c.total for c in counts] == [40, 40, 40], "원 + 2·점 = P(5)"
    assert [(c.circles, c.bullets) for c in counts] == [(20, 10)] * 3
    assert [c.weighted for c in counts] == [20, 20, 20], "가중 개수 = P(5)·c^ss/2"
    assert n_min(single_box) == 6


def test_chart_counts_match_polynomial_for_stable_pattern(stable_column_xi):
    polynomial = rank2_polynomial(-4)
    n = n_min(stable_column_xi)
    for pattern in enumerate_patterns(stable_column_xi):
        stratum = classify_pattern(stable_column_xi, pattern)
        if stratum.tag != STABLE:
            continue
        for count in chart_pair_counts(stable_column_xi, pattern, n):
            assert count.total == polynomial(n)
            assert count.weighted == polynomial(n), "안정 패턴은 모든 섹션이 허용됨"


def test_compatible_triples_have_section_direction(single_box):
    pattern = enumerate_patterns(single_box)[0]
    triples = compatible_triples(single_box, pattern, 5)
    assert triples, "호환 삼중쌍이 있어야 함"
    for triple, l_value, line in triples:
        assert triple.n == 5
        assert (l_value == 1) == (line is None)


def test_section_weight():
    p1 = frozenset({"p1"})
    stratum = StratumClass(STRICTLY_SS, frozenset({p1}), 3)
    assert section_weight(1, None, stratum) == 1
    assert section_weight(0, p1, stratum) == 0
    assert section_weight(0, frozenset({"p2"}), stratum) == 1
    assert expected_weighted_count(rank2_polynomial(-2), 5, stratum) == 20


def test_decomposable_contribution():
    assert decomposable_pair_contribution(0, 4) == 105, "P(P-2)/8, P(4)=30"
    # h = 3, P(4) = 28: 3·28·26/8 + 3·28²/4
    assert decomposable_pair_contribution(-2, 4) == 861
    with pytest.raises(ValueError):
        decomposable_pair_contribution(-1, 4)


def test_pair_invariant_b2(b2_rows_data):
    rows = [table_row_for(x) for x in b2_rows_data]
    # 분해 가능 861 + Σ mult·P(4)·c^ss/2 = 12·28/2
    assert pair_invariant(-2, 4, rows) == 861 + 168


def test_odd_b_polynomial_is_not_even():
    with pytest.raises(ParityError):
        checked_polynomial_value(-1, 0)
    assert checked_polynomial_value(-2, 4) == 28
