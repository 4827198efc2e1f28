"""
2차원 분할 (Young 도형) 과 격자 칸 집합 유틸리티

칸 (x, y) 는 단위 상자의 왼쪽 아래 꼭짓점으로 표시한다.
분할 parts 는 행 단위로 저장: 0 ≤ y < len(parts), 0 ≤ x < parts[y].
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from sympy import npartitions
from sympy.utilities.iterables import multiset_permutations, partitions

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
CellSet = FrozenSet[Cell]

NEIGHBOR_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class InvalidPartitionError(ValueError):
    """분할 조건(약감소 양의 정수)을 만족하지 않는 입력"""


@dataclass(frozen=True, order=True)
class Partition2D:
    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise InvalidPartitionError(f"분할의 각 행은 양수여야 합니다: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidPartitionError(f"분할의 행 길이는 약감소해야 합니다: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def height(self) -> int:
        return len(self.parts)

    @property
    def width(self) -> int:
        return self.parts[0] if self.parts else 0

    def is_empty(self) -> bool:
        return not self.parts

    @property
    def cells(self) -> CellSet:
        return frozenset((x, y) for y, length in enumerate(self.parts) for x in range(length))

    def shifted_cells(self, origin: Cell) -> CellSet:
        ox, oy = origin
        return frozenset((x + ox, y + oy) for x, y in self.cells)

    def transpose(self) -> "Partition2D":
        if not self.parts:
            return self
        return Partition2D(tuple(sum(1 for p in self.parts if p > x) for x in range(self.width)))

    @classmethod
    def from_cells(cls, cells: Iterable[Cell], origin: Cell = (0, 0)) -> "Partition2D":
        """origin 기준 칸 집합을 분할로 변환 (아래-왼쪽으로 닫힌 모양이어야 함)"""
        ox, oy = origin
        shifted = {(x - ox, y - oy) for x, y in cells}
        if not shifted:
            return cls(())
        if any(x < 0 or y < 0 for x, y in shifted):
            raise InvalidPartitionError(f"기준점 {origin} 아래/왼쪽에 칸이 있습니다")
        height = max(y for _, y in shifted) + 1
        parts = []
        for y in range(height):
            row = sorted(x for x, yy in shifted if yy == y)
            if row != list(range(len(row))) or not row:
                raise InvalidPartitionError(f"{y}번째 행이 분할 모양이 아닙니다: {row}")
            parts.append(len(row))
        return cls(tuple(parts))

    def to_list(self) -> List[int]:
        return list(self.parts)

    def render(self) -> str:
        """CSV/표 출력용 '[2,1]' 형식"""
        return "[" + ",".join(str(p) for p in self.parts) + "]"

    def __str__(self) -> str:
        return self.render()


EMPTY = Partition2D(())


def _parts_of(counts: Dict[int, int]) -> Tuple[int, ...]:
    """sympy 의 {부분: 중복도} 사전을 내림차순 행 길이 튜플로"""
    return tuple(sorted((part for part, times in counts.items() if part > 0
                         for _ in range(times)), reverse=True))


@lru_cache(maxsize=None)
def _partitions_of(n: int) -> Tuple[Partition2D, ...]:
    if n == 0:
        return (EMPTY,)
    found = [Partition2D(_parts_of(counts)) for counts in partitions(n)]
    return tuple(sorted(found, key=lambda p: p.parts, reverse=True))


def enumerate_partitions(n: int) -> List[Partition2D]:
    """크기가 정확히 n 인 모든 분할 (사전식 내림차순, 결정적 순서)"""
    if n < 0:
        raise ValueError(f"분할 크기는 0 이상이어야 합니다: {n}")
    return list(_partitions_of(n))


def _size_compositions(total: int, slots: int) -> Iterator[Tuple[int, ...]]:
    """각 칸 크기의 합이 total 인 slots-튜플: 분할에 0 을 채우고 모든 재배열"""
    if total == 0:
        yield (0,) * slots
        return
    for counts in partitions(total, m=slots):
        sizes = list(_parts_of(counts))
        sizes += [0] * (slots - len(sizes))
        for arrangement in multiset_permutations(sizes):
            yield tuple(arrangement)


def partition_tuples(total: int, slots: int) -> Iterator[Tuple[Partition2D, ...]]:
    """크기 합이 total 인 분할 slots-튜플 전체"""
    if total < 0:
        return
    for sizes in _size_compositions(total, slots):
        for combo in product(*(_partitions_of(s) for s in sizes)):
            yield combo


def count_partition_tuples(total: int, slots: int) -> int:
    """크기 합이 total 인 분할 slots-튜플 개수 (분할 수 p(n) 의 합성곱)"""
    counts = [int(npartitions(n)) for n in range(total + 1)]
    series = [1] + [0] * total
    for _ in range(slots):
        series = [sum(series[i] * counts[n - i] for i in range(n + 1)) for n in range(total + 1)]
    return series[total]


def adjacent(s: Iterable[Cell], t: Iterable[Cell]) -> bool:
    """s 의 어떤 칸이 t 의 어떤 칸과 변을 공유하면 True (꼭짓점 접촉은 제외)"""
    targets = set(t)
    for x, y in s:
        for dx, dy in NEIGHBOR_STEPS:
            if (x + dx, y + dy) in targets:
                return True
    return False


def connected_components(s: Iterable[Cell]) -> List[CellSet]:
    """4-인접 연결 성분 분해. 각 성분의 최소 칸 기준으로 정렬해 반환"""
    remaining = set(s)
    components = []
    for start in sorted(remaining):
        if start not in remaining:
            continue
        queue = deque([start])
        remaining.discard(start)
        component = {start}
        while queue:
            x, y = queue.popleft()
            for dx, dy in NEIGHBOR_STEPS:
                neighbor = (x + dx, y + dy)
                if neighbor in remaining:
                    remaining.discard(neighbor)
                    component.add(neighbor)
                    queue.append(neighbor)
        components.append(frozenset(component))
    return components


def parse_partition(value: Sequence[int]) -> Partition2D:
    """JSON/CLI 입력의 행 길이 목록을 분할로 변환"""
    return Partition2D(tuple(value))
