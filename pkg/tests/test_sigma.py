import random
from fractions import Fraction
from itertools import product

import pytest

from conftest import xi
from src.exactmath import fit_quadratic
from src.pairs import rank2_polynomial
from src.partitions import Partition2D, enumerate_partitions
from src.sigma import (
    CellContent,
    DeltaFamilyData,
    DeltaFamilyEnumerator,
    EnumerationBoundError,
    InvalidDeltaFamilyError,
    PatternMismatchError,
    Rank1Data,
    block_degree,
    check_pattern,
    destabilizer_polynomial,
    eval_sigma,
    free_component_count,
    hilbert_from_chern,
    multiplicity,
    p_atoms,
    rank1_chern,
    rank1_lattice_count,
    rank2_hilbert,
    reindex,
    representative_key,
    sigma_signature,
    subsheaf_data,
)
from src.strata import Pattern


def test_invalid_delta_family():
    with pytest.raises(InvalidDeltaFamilyError):
        xi(-1, (1, 0, 0), [()] * 6)
    with pytest.raises(InvalidDeltaFamilyError):
        xi(-1, (1, 1, 0), [()] * 6, E=[(1, 3)])
    with pytest.raises(InvalidDeltaFamilyError):
        xi(-1, (1, 1, 0), [()] * 5)


def test_rank2_hilbert_matches_b(b2_rows_data, coincident_xi):
    for x in b2_rows_data:
        assert rank2_hilbert(x) == rank2_polynomial(-2), f"Hilbert 다항식 불일치: {x.describe()}"
    assert rank2_hilbert(coincident_xi) == rank2_polynomial(-4), "E 가 있으면 겹침 항이 빠져야 함"


def test_free_component_counts(single_box, two_free_xi, coincident_xi, strict_triangle_k1):
    assert free_component_count(single_box) == 0
    assert free_component_count(two_free_xi) == 2
    assert free_component_count(coincident_xi) == 1
    assert free_component_count(strict_triangle_k1) == 1


def test_eval_sigma_basic_contents(single_box):
    assert eval_sigma(single_box, None, 1, (-1, 5)).is_zero()
    assert eval_sigma(single_box, None, 1, (10, 10)).is_full()
    # π¹ 상자 (0, Δ₂) 는 구멍
    assert eval_sigma(single_box, None, 1, (0, 1)).is_zero()
    content = eval_sigma(single_box, None, 1, (0, 3))
    assert content == CellContent("line", frozenset({"p1"})), f"세로 띠는 p1 직선: {content.describe()}"
    with pytest.raises(ValueError):
        eval_sigma(single_box, None, 4, (0, 0))


def test_eval_sigma_strip_geometry(single_box):
    # 차트 1: p1 띠는 x < Δ₁, p2 띠는 y < Δ₂, 원점 상자는 p1 띠의 첫 칸 (0, Δ₂)
    assert eval_sigma(single_box, None, 1, (1, 1)) == CellContent("line", frozenset({"p1"}))
    assert eval_sigma(single_box, None, 1, (0, 0)).is_zero(), "두 띠의 교차는 0"
    assert eval_sigma(single_box, None, 1, (2, 0)) == CellContent("line", frozenset({"p2"}))
    assert eval_sigma(single_box, None, 1, (2, 1)).is_full()


def test_single_box_p1_subsheaf_is_half(single_box):
    data = subsheaf_data(single_box, frozenset({"p1"}))
    assert (data.u, data.v, data.w) == (0, 1, -1), "L_p1 꼭짓점은 (0, Δ₂, A+Δ₃)"
    assert data.pis == (Partition2D((1,)), Partition2D(), Partition2D())
    half = rank2_hilbert(single_box).half()
    assert destabilizer_polynomial(single_box, None, {"p1"}) == half, "L_p1 = P/2 정확히"


def test_strict_triangle_p1_below_half(strict_triangle_k1):
    half = rank2_hilbert(strict_triangle_k1).half()
    polynomial = destabilizer_polynomial(strict_triangle_k1, None, {"p1"})
    assert polynomial.c2 == half.c2 == Fraction(1, 2)
    assert polynomial.c1 < half.c1, "엄밀 삼각 부등식이면 일차항이 P/2 보다 작음"


def test_free_block_merged_with_p1_reaches_half(coincident_xi):
    half = rank2_hilbert(coincident_xi).half()
    merged = Pattern((frozenset({"p1", "s1"}), frozenset({"p2", "p3"})))
    assert destabilizer_polynomial(coincident_xi, merged, frozenset({"p1", "s1"})) == half
    assert destabilizer_polynomial(coincident_xi, None, {"p1"}) < half
    with pytest.raises(PatternMismatchError):
        destabilizer_polynomial(coincident_xi, merged, frozenset({"p1"}))


def test_zero_width_strip_twins_share_sigma_family(two_free_xi):
    # Δ₃ = 0: 차트 2 의 두 분할이 같은 가로축 위에 놓인다
    twin = xi(-1, (1, 1, 0), [(), (), (2,), (), (1,), (1,)])
    assert sigma_signature(twin) == sigma_signature(two_free_xi)
    for chart in (1, 2, 3):
        for m in product(range(4), repeat=2):
            assert eval_sigma(twin, None, chart, m) == eval_sigma(two_free_xi, None, chart, m)
    assert representative_key(two_free_xi) < representative_key(twin), "상자가 고르게 나뉜 쪽이 대표"


def test_region_r_twins_share_sigma_family():
    first = xi(-2, (2, 1, 1), [(), (), (2,), (1,), (), ()])
    second = xi(-2, (2, 1, 1), [(), (), (1,), (1, 1), (), ()])
    assert sigma_signature(first) == sigma_signature(second)
    assert eval_sigma(first, None, 2, (1, 1)).tag == "free"


def test_distinct_rows_have_distinct_signatures(b2_rows_data):
    assert len({sigma_signature(x) for x in b2_rows_data}) == 4


def test_atoms_and_degree(two_free_xi, coincident_xi):
    assert p_atoms(coincident_xi) == [frozenset({"p1"}), frozenset({"p2", "p3"})]
    assert block_degree(two_free_xi, {"p1"}) == 0
    assert block_degree(coincident_xi, {"p2", "p3"}) == 0
    assert block_degree(coincident_xi, set()) == 2


def test_pattern_must_respect_coincidences(coincident_xi):
    split = Pattern((frozenset({"p1"}), frozenset({"p2"}), frozenset({"p3"}), frozenset({"s1"})))
    with pytest.raises(PatternMismatchError):
        check_pattern(coincident_xi, split)
    merged = Pattern((frozenset({"p1", "p2", "p3"}), frozenset({"s1"})))
    with pytest.raises(PatternMismatchError):
        check_pattern(coincident_xi, merged)


def test_multiplicity():
    assert multiplicity(xi(-2, (2, 1, 1), [()] * 6)) == 3
    assert multiplicity(xi(-3, (3, 2, 1), [()] * 6)) == 6
    assert multiplicity(xi(-3, (2, 2, 2), [()] * 6)) == 1


def test_reindex_relates_b2_row_pairs(b2_rows_data):
    first, second, third, fourth = b2_rows_data
    assert reindex(first, (1, 0, 2)) == second, "Δ 를 고정하는 교환이 두 행을 잇는다"
    assert reindex(third, (0, 2, 1)) == fourth
    assert reindex(first, (0, 1, 2)) == first


def test_reindex_permutes_deltas(coincident_xi):
    moved = reindex(coincident_xi, (2, 0, 1))
    assert moved.deltas == (1, 2, 1)
    assert moved.E == frozenset({(1, 3)})
    assert rank2_hilbert(moved) == rank2_hilbert(coincident_xi)
    with pytest.raises(ValueError):
        reindex(coincident_xi, (0, 0, 1))


def test_rank1_lattice_count_matches_riemann_roch():
    rng = random.Random(20240611)
    small = [p for n in range(4) for p in enumerate_partitions(n)]
    for _ in range(50):
        u, v, w = (rng.randint(-3, 3) for _ in range(3))
        pis = tuple(rng.choice(small) for _ in range(3))
        data = Rank1Data(u, v, w, pis)
        start = u + v + w + 2 * max(max(p.width, p.height) for p in pis) + 2
        samples = [(m, rank1_lattice_count(data, m)) for m in (start, start + 1, start + 2)]
        expected = hilbert_from_chern(rank1_chern(data))
        assert fit_quadratic(samples) == expected, f"격자점 개수가 Riemann-Roch 와 다름: {data}"


def test_enumeration_b0_is_empty():
    assert DeltaFamilyEnumerator(max_workers=2).enumerate(0) == [], "b=0 은 O⊕O 만 존재"


def test_enumeration_b2_table(b2_rows_data):
    entries = DeltaFamilyEnumerator(max_workers=2).enumerate(-2)
    assert [x for x, _ in entries] == sorted(b2_rows_data, key=DeltaFamilyData.sort_key)
    assert [mult for _, mult in entries] == [3, 3, 3, 3]


def test_enumeration_bound_error():
    with pytest.raises(EnumerationBoundError):
        DeltaFamilyEnumerator(max_workers=1).enumerate(-2, a_floor=-1)
    with pytest.raises(ValueError):
        DeltaFamilyEnumerator().enumerate(1)

