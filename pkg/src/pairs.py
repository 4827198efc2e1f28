"""
안정 쌍(섹션) 데이터와 쌍 불변량 PI_n

섹션 삼중쌍 ℓ = (u, v, w), u+v+w = n 은 차트 점 (u,v), (v,w), (w,u) (절대 좌표) 를 준다.
세 차트 내용이 모두 0 이 아니고 하나의 방향으로 맞춰질 때만 호환된다.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.exactmath import HilbertPolynomial
from src.partitions import count_partition_tuples
from src.sigma import (
    ChernCharacter,
    DeltaFamilyData,
    chart_origin,
    eval_sigma,
    hilbert_from_chern,
    resolve_block,
)
from src.strata import STABLE, Pattern, StratumClass, TableRow, classify_pattern

logger = logging.getLogger(__name__)


class ParityError(ValueError):
    """P(n) 이 짝수가 아님"""


@dataclass(frozen=True)
class SectionTriple:
    u: int
    v: int
    w: int

    @property
    def n(self) -> int:
        return self.u + self.v + self.w

    def chart_point(self, x: DeltaFamilyData, chart: int) -> Tuple[int, int]:
        """차트 상대 좌표"""
        absolute = {1: (self.u, self.v), 2: (self.v, self.w), 3: (self.w, self.u)}[chart]
        ox, oy = chart_origin(x, chart)
        return absolute[0] - ox, absolute[1] - oy


@dataclass(frozen=True)
class PairCount:
    n: int
    circles: int
    bullets: int
    weighted: Fraction

    @property
    def total(self) -> int:
        """원 개수 + 2 × 점 개수"""
        return self.circles + 2 * self.bullets


def compatible_triples(x: DeltaFamilyData, pattern: Pattern, n: int) -> List[Tuple[SectionTriple, int, Optional[frozenset]]]:
    """
    (P1)-(P2) 를 만족하는 삼중쌍과 l 값.
    l=0: 어떤 차트 내용이 직선 (섹션 방향이 강제됨), l=1: 세 내용 모두 평면 전체.
    세 번째 값은 l=0 일 때 강제된 방향 블록.
    """
    result = []
    for u in range(0, n - x.A + 1):
        for v in range(0, n - u - x.A + 1):
            triple = SectionTriple(u, v, n - u - v)
            contents = [eval_sigma(x, pattern, j, triple.chart_point(x, j)) for j in (1, 2, 3)]
            if any(c.is_zero() for c in contents):
                continue
            lines = {resolve_block(x, c, pattern) for c in contents if not c.is_full()}
            if len(lines) > 1:
                continue
            if lines:
                result.append((triple, 0, lines.pop()))
            else:
                result.append((triple, 1, None))
    return result


def section_weight(l_value: int, line, stratum: StratumClass) -> int:
    """허용되는 섹션 방향의 오일러 지표"""
    if l_value == 1:
        return 2 - len(stratum.destabilizers)
    return 0 if line in stratum.destabilizers else 1


def chart_pair_counts(x: DeltaFamilyData, pattern: Pattern, n: int) -> List[PairCount]:
    """차트별 (원, 점, 가중) 개수. 세 차트가 같은 삼중쌍을 서로 다른 점으로 그린다"""
    stratum = classify_pattern(x, pattern)
    triples = compatible_triples(x, pattern, n)
    counts = []
    for chart in (1, 2, 3):
        points = {}
        for triple, l_value, line in triples:
            points[triple.chart_point(x, chart)] = (l_value, line)
        circles = sum(1 for l_value, _ in points.values() if l_value == 0)
        bullets = sum(1 for l_value, _ in points.values() if l_value == 1)
        weighted = sum((Fraction(section_weight(l_value, line, stratum))
                        for l_value, line in points.values()), Fraction(0))
        counts.append(PairCount(n, circles, bullets, weighted))
    return counts


def n_min(x: DeltaFamilyData) -> int:
    """모든 비영 격자점이 분할 경계와 띠 폭을 넘어서는 최소 수준"""
    return -2 * x.A + x.total_boxes + 1


def checked_polynomial_value(b: int, n: int) -> int:
    value = rank2_polynomial(b)(n)
    if value.denominator != 1 or value.numerator % 2 != 0:
        raise ParityError(f"P({n}) = {value} 가 짝수 정수가 아닙니다 (b={b})")
    return value.numerator


def decomposable_pair_contribution(b: int, n: int) -> Fraction:
    """
    분해 가능 층 O_Z1 ⊕ O_Z2 의 기여:
    Z1 = Z2 이면 P(n)(P(n)-2)/8, Z1 ≠ Z2 이면 P(n)²/4 (쌍 개수 h(h-1)/2)
    """
    if b % 2 != 0 or b > 0:
        raise ValueError(f"b 는 0 이하 짝수여야 합니다: {b}")
    h = count_partition_tuples(-b // 2, 3)
    p_n = Fraction(checked_polynomial_value(b, n))
    return h * p_n * (p_n - 2) / 8 + Fraction(h * (h - 1), 2) * p_n * p_n / 4


def pair_invariant(b: int, n: int, rows: Sequence[TableRow]) -> Fraction:
    """PI_n = 분해 가능 기여 + Σ mult·[P(n)·c^ss/2 + P(n)·c^st]"""
    p_n = Fraction(checked_polynomial_value(b, n))
    total = decomposable_pair_contribution(b, n)
    for row in rows:
        total += row.multiplicity * (p_n * row.c_ss / 2 + p_n * row.c_st)
    return total


def expected_weighted_count(polynomial: HilbertPolynomial, n: int, stratum: StratumClass) -> Fraction:
    """안정 패턴은 P(n), 엄밀 반안정 패턴은 P(n)(2-|D|)/2"""
    if stratum.tag == STABLE:
        return polynomial(n)
    return polynomial(n) * (2 - len(stratum.destabilizers)) / 2


def rank2_polynomial(b: int) -> HilbertPolynomial:
    """P(m) = m² + 3m + 2 + b"""
    return hilbert_from_chern(ChernCharacter(2, 0, Fraction(b)))
