"""
방향 변수 일치 패턴과 안정성 층 분류

패턴은 V(Ξ) = {p 원자} ∪ {s_1..s_k} 의 집합 분할이다.
각 패턴을 불안정 / 분해 가능 / 엄밀 반안정 비분해 / 안정 으로 분류하고
c^ss(Ξ), c^st(Ξ) 를 배치 공간 오일러 지표의 합으로 계산한다.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from sympy import factorint
from sympy.utilities.iterables import multiset_partitions

from src.constants import ORACLE_EXTRA_SAMPLES
from src.exactmath import Ordering, compare_polys, fit_polynomial
from src.sigma import (
    Block,
    DeltaFamilyData,
    SigmaError,
    block_degree,
    block_name,
    destabilizer_polynomial,
    free_variables,
    multiplicity,
    p_atoms,
    rank2_hilbert,
    variable_key,
)

logger = logging.getLogger(__name__)

UNSTABLE = "unstable"
DECOMPOSABLE = "decomposable"
STRICTLY_SS = "strictly_ss_indecomposable"
STABLE = "stable"


class GenericDestabilizerError(SigmaError):
    """일반 방향 부분층이 P/2 이상 (다루지 않는 경우)"""


class InsufficientSamplesError(ValueError):
    """보간에 필요한 q 표본이 부족함"""


@dataclass(frozen=True)
class Pattern:
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        ordered = tuple(sorted((frozenset(b) for b in self.blocks),
                               key=lambda b: min(variable_key(v) for v in b)))
        object.__setattr__(self, "blocks", ordered)

    def block_of(self, variable: str) -> Block:
        for block in self.blocks:
            if variable in block:
                return block
        raise KeyError(f"패턴에 없는 변수입니다: {variable}")

    @property
    def d(self) -> int:
        return len(self.blocks)

    def describe(self) -> str:
        return "{" + ", ".join(block_name(b) for b in self.blocks) + "}"


@dataclass(frozen=True)
class StratumClass:
    tag: str
    destabilizers: FrozenSet[Block] = frozenset()
    d: int = 0

    def is_indecomposable_semistable(self) -> bool:
        return self.tag in (STRICTLY_SS, STABLE)


def enumerate_patterns(x: DeltaFamilyData) -> List[Pattern]:
    """서로 다른 p 원자는 같은 블록에 두지 않는 모든 패턴 (sympy 집합 분할을 거른 것)"""
    atoms = p_atoms(x)
    items = atoms + [frozenset({s}) for s in free_variables(x)]
    if not items:
        return [Pattern(())]
    patterns = []
    for grouping in multiset_partitions(list(range(len(items)))):
        if any(sum(1 for index in group if index < len(atoms)) > 1 for group in grouping):
            continue
        patterns.append(Pattern(tuple(frozenset().union(*(items[i] for i in group))
                                      for group in grouping)))
    return patterns


def _compare_to_half(x: DeltaFamilyData, block: Block, half) -> Ordering:
    degree = block_degree(x, block)
    if degree > 0:
        return Ordering.LESS
    if degree < 0:
        return Ordering.GREATER
    return compare_polys(destabilizer_polynomial(x, None, block), half)


def classify_pattern(x: DeltaFamilyData, p: Pattern) -> StratumClass:
    half = rank2_hilbert(x).half()
    if _compare_to_half(x, frozenset(), half) != Ordering.LESS:
        raise GenericDestabilizerError(f"일반 방향이 P/2 에 도달합니다: {x.describe()}")

    destabilizers = set()
    for block in p.blocks:
        order = _compare_to_half(x, block, half)
        if order == Ordering.GREATER:
            return StratumClass(UNSTABLE, frozenset({block}), p.d)
        if order == Ordering.EQUAL:
            destabilizers.add(block)
    if p.d <= 2:
        return StratumClass(DECOMPOSABLE, frozenset(destabilizers), p.d)
    if destabilizers:
        return StratumClass(STRICTLY_SS, frozenset(destabilizers), p.d)
    return StratumClass(STABLE, frozenset(), p.d)


def configuration_chi(d: int) -> int:
    """
    사영직선 위 서로 다른 d 점의 순서 배치를 3-추이 작용으로 나눈 공간의 오일러 지표
    ∏_{i=0}^{d-4} (-1-i)
    """
    if d < 3:
        raise ValueError(f"d ≥ 3 이어야 합니다 (d ≤ 2 는 분해 가능 경로): {d}")
    value = 1
    for i in range(d - 3):
        value *= -1 - i
    return value


ChiFunction = Callable[[DeltaFamilyData, Pattern], object]


def _default_chi(x: DeltaFamilyData, p: Pattern) -> int:
    return configuration_chi(p.d)


def c_values(x: DeltaFamilyData, chi_fn: Optional[ChiFunction] = None) -> Tuple[int, int]:
    """(c^ss, c^st). chi_fn 을 주면 그 값으로 층별 오일러 지표를 대신한다"""
    if chi_fn is None:
        return _cached_c_values(x)
    return _c_values(x, chi_fn)


def _c_values(x: DeltaFamilyData, chi_fn: ChiFunction) -> Tuple[int, int]:
    c_ss = Fraction(0)
    c_st = Fraction(0)
    for pattern in enumerate_patterns(x):
        stratum = classify_pattern(x, pattern)
        if stratum.tag == STABLE:
            c_st += chi_fn(x, pattern)
        elif stratum.tag == STRICTLY_SS:
            c_ss += chi_fn(x, pattern) * (2 - len(stratum.destabilizers))
    if c_ss.denominator != 1 or c_st.denominator != 1:
        raise ValueError(f"c 값이 정수가 아닙니다: {c_ss}, {c_st} ({x.describe()})")
    return int(c_ss), int(c_st)


@lru_cache(maxsize=65536)
def _cached_c_values(x: DeltaFamilyData) -> Tuple[int, int]:
    return _c_values(x, _default_chi)


def has_indecomposable_semistable_pattern(x: DeltaFamilyData) -> bool:
    """D(P) 포함 기준: 반안정 비분해 패턴이 하나라도 있는지"""
    if len(p_atoms(x)) + len(free_variables(x)) < 3:
        return False
    return any(classify_pattern(x, p).is_indecomposable_semistable()
               for p in enumerate_patterns(x))


def pattern_chi_total(x: DeltaFamilyData) -> int:
    """모든 패턴(d ≥ 3)의 configuration_chi 합"""
    return sum(configuration_chi(p.d) for p in enumerate_patterns(x) if p.d >= 3)


# ---------------------------------------------------------------------------
# 유한체 오라클
# ---------------------------------------------------------------------------

def is_prime_power(q: int) -> bool:
    return q > 1 and len(factorint(q)) == 1


@lru_cache(maxsize=None)
def _configuration_count(d: int, q: int) -> int:
    """P¹(F_q) 의 q+1 점에 d 개 블록을 서로 다르게 배치하는 경우의 수 (직접 열거)"""
    return sum(1 for _ in permutations(range(q + 1), d))


def fq_stratum_oracle(x: DeltaFamilyData, p: Pattern, q: int) -> Fraction:
    """F_q 위 배치 개수를 |PGL₂(F_q)| = q³ - q 로 나눈 값"""
    if not is_prime_power(q):
        raise ValueError(f"q 는 소수의 거듭제곱이어야 합니다: {q}")
    if q < p.d + 2:
        raise ValueError(f"q ≥ d + 2 이어야 합니다: q={q}, d={p.d}")
    return Fraction(_configuration_count(p.d, q), q ** 3 - q)


def default_oracle_fields(d: int) -> List[int]:
    """d ≥ 3 층 보간에 쓸 가장 작은 소수 거듭제곱들 (q ≥ d+2)"""
    needed = max(d - 2, 1) + ORACLE_EXTRA_SAMPLES
    fields = []
    q = d + 2
    while len(fields) < needed:
        if is_prime_power(q):
            fields.append(q)
        q += 1
    return fields


def interpolate_stratum_chi(x: DeltaFamilyData, p: Pattern, qs: Optional[Sequence[int]] = None) -> Fraction:
    """q 에 대한 개수 다항식을 보간하고 q=1 에서 평가"""
    if p.d < 3:
        raise ValueError(f"d ≥ 3 인 패턴만 오라클로 계산합니다: d={p.d}")
    qs = list(qs) if qs is not None else default_oracle_fields(p.d)
    if len(set(qs)) < p.d - 2:
        raise InsufficientSamplesError(
            f"d={p.d} 다항식 보간에는 q 값이 {p.d - 2}개 이상 필요합니다: {qs}")
    points = [(q, fq_stratum_oracle(x, p, q)) for q in sorted(set(qs))]
    return fit_polynomial(points, at=1)


def oracle_chi(x: DeltaFamilyData, p: Pattern) -> Fraction:
    return _oracle_chi_for_degree(p.d, x, p)


_ORACLE_MEMO: Dict[int, Fraction] = {}


def _oracle_chi_for_degree(d: int, x: DeltaFamilyData, p: Pattern) -> Fraction:
    if d not in _ORACLE_MEMO:
        _ORACLE_MEMO[d] = interpolate_stratum_chi(x, p)
        logger.debug(f"유한체 오라클: d={d} → {_ORACLE_MEMO[d]}")
    return _ORACLE_MEMO[d]


def oracle_c_values(x: DeltaFamilyData) -> Tuple[int, int]:
    """유한체 보간 오라클로 다시 계산한 (c^ss, c^st)"""
    return c_values(x, chi_fn=oracle_chi)


# ---------------------------------------------------------------------------
# 표 행
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    xi: DeltaFamilyData
    c_ss: int
    c_st: int
    multiplicity: int

    def to_json(self) -> Dict:
        data = self.xi.to_json()
        data.update({"c_ss": self.c_ss, "c_st": self.c_st, "multiplicity": self.multiplicity})
        return data

    @classmethod
    def from_json(cls, data: Dict) -> "TableRow":
        return cls(DeltaFamilyData.from_json(data), int(data["c_ss"]),
                   int(data["c_st"]), int(data["multiplicity"]))


def build_table_rows(entries: Sequence[Tuple[DeltaFamilyData, int]]) -> List[TableRow]:
    rows = []
    for x, mult in entries:
        c_ss, c_st = c_values(x)
        rows.append(TableRow(x, c_ss, c_st, mult))
    return rows


def weighted_sums(rows: Sequence[TableRow]) -> Tuple[int, int]:
    """(Σ mult·c^ss, Σ mult·c^st)"""
    return (sum(r.multiplicity * r.c_ss for r in rows),
            sum(r.multiplicity * r.c_st for r in rows))


def table_row_for(x: DeltaFamilyData) -> TableRow:
    c_ss, c_st = c_values(x)
    return TableRow(x, c_ss, c_st, multiplicity(x))
