"""
Δ-family 데이터와 σ-family 규칙 엔진

- DeltaFamilyData (Ξ): (A, Δ₁,Δ₂,Δ₃, 분할 6개, 일치 집합 E)
- 차트별 칸 내용 계산 (0 / 평면 전체 / 직선 / 자유 성분)
- 랭크 1, 2 Chern 지표와 Hilbert 다항식
- 불안정화 부분층 L_x 의 Hilbert 다항식
- D(P) 열거 (A 하향 스윕, 병렬 처리, 같은 σ-family 중복 제거)

차트 j 는 방향 (p_j, p_{j+1}) 을 사용하며 상대 좌표에서
  세로 띠 V: x < Δ_j (내용 p_j), 가로 띠 H: y < Δ_{j+1} (내용 p_{j+1}).
차트 원점(절대 좌표): 차트1 (0,0), 차트2 (0,A), 차트3 (A,0).
이 배치에서 L_{p1} 의 꼭짓점은 (u,v,w) = (0, Δ₂, A+Δ₃), 영역 R_1 은 x ≥ Δ₁, y ≥ Δ₂ 이다.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Optional, Tuple

from dotenv import load_dotenv

from src.constants import (
    CHART_DIRECTIONS,
    DEFAULT_MAX_WORKERS,
    EMPTY_STREAK_LIMIT,
    INDEX_PAIRS,
    P_VARIABLES,
    default_a_floor,
)
from src.exactmath import HilbertPolynomial
from src.partitions import (
    Cell,
    CellSet,
    Partition2D,
    adjacent,
    connected_components,
    count_partition_tuples,
    parse_partition,
    partition_tuples,
)

if TYPE_CHECKING:
    from src.strata import Pattern

# 환경 변수 로드
load_dotenv()

# 로깅 설정
logger = logging.getLogger(__name__)

Block = FrozenSet[str]


class SigmaError(Exception):
    """σ-family 계산 관련 오류의 기본 클래스"""


class InvalidDeltaFamilyError(SigmaError, ValueError):
    """Δ-family 데이터 조건 위반"""


class PatternMismatchError(SigmaError, ValueError):
    """패턴이 일치 집합 E 와 맞지 않음"""


class SigmaRuleError(SigmaError):
    """규칙 적용 중 모순 (한 성분이 두 방향으로 강제되는 경우 등)"""


class EnumerationBoundError(SigmaError):
    """A 스윕이 안전 하한에 도달했는데도 데이터가 계속 나오는 경우"""


def variable_key(name: str) -> Tuple[int, int]:
    """p 변수 먼저, 다음 s 변수, 각각 번호순"""
    return (0 if name.startswith("p") else 1, int(name[1:]))


def block_name(block: Iterable[str]) -> str:
    return "=".join(sorted(block, key=variable_key))


@dataclass(frozen=True)
class ChernCharacter:
    """P² 쪽 Chern 지표 (ch₀, ch₁·h, ch₂·pt)"""
    rank: int
    c1: int
    ch2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ch2", Fraction(self.ch2))


@dataclass(frozen=True)
class Rank1Data:
    """랭크 1 고정점 데이터: 정수 u, v, w 와 분할 3개"""
    u: int
    v: int
    w: int
    pis: Tuple[Partition2D, Partition2D, Partition2D] = (Partition2D(), Partition2D(), Partition2D())


@dataclass(frozen=True)
class CellContent:
    """
    칸 내용: zero / full / line(label) / free(component)
    line 의 label 은 방향 블록(frozenset), free 의 label 은 자유 성분 번호(1부터)
    """
    tag: str
    label: Optional[object] = None

    def is_zero(self) -> bool:
        return self.tag == "zero"

    def is_full(self) -> bool:
        return self.tag == "full"

    def describe(self) -> str:
        if self.tag == "line":
            return f"line({block_name(self.label)})"
        if self.tag == "free":
            return f"free(C{self.label})"
        return self.tag


ZERO = CellContent("zero")
FULL = CellContent("full")


@dataclass(frozen=True)
class DeltaFamilyData:
    A: int
    deltas: Tuple[int, int, int]
    pis: Tuple[Partition2D, ...]
    E: FrozenSet[Tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        deltas = tuple(int(d) for d in self.deltas)
        pis = tuple(p if isinstance(p, Partition2D) else parse_partition(p) for p in self.pis)
        pairs = frozenset(tuple(sorted(pair)) for pair in self.E)
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "pis", pis)
        object.__setattr__(self, "E", pairs)
        self._validate()

    def _validate(self):
        if len(self.deltas) != 3 or any(d < 0 for d in self.deltas):
            raise InvalidDeltaFamilyError(f"Δ 는 음이 아닌 정수 3개여야 합니다: {self.deltas}")
        if sum(self.deltas) != -2 * self.A:
            raise InvalidDeltaFamilyError(
                f"Δ₁+Δ₂+Δ₃ = -2A 조건 위반: Δ={self.deltas}, A={self.A}")
        if len(self.pis) != 6:
            raise InvalidDeltaFamilyError(f"분할은 정확히 6개여야 합니다: {len(self.pis)}")
        for pair in self.E:
            if pair not in INDEX_PAIRS:
                raise InvalidDeltaFamilyError(f"E 의 원소가 올바르지 않습니다: {pair}")
            i, j = pair
            if self.deltas[i - 1] == 0 or self.deltas[j - 1] == 0:
                raise InvalidDeltaFamilyError(f"E 의 쌍 {pair} 은 Δ>0 인 방향끼리만 가능합니다")
        for (i, j), (k, l) in combinations(sorted(self.E), 2):
            ends = {i, j} ^ {k, l}
            if len(ends) == 2 and tuple(sorted(ends)) not in self.E:
                raise InvalidDeltaFamilyError(f"E 가 추이적으로 닫혀 있지 않습니다: {sorted(self.E)}")

    def pi(self, chart: int, slot: int) -> Partition2D:
        """π_chart^slot (chart, slot 은 1부터)"""
        return self.pis[2 * (chart - 1) + (slot - 1)]

    @property
    def total_boxes(self) -> int:
        return sum(p.size for p in self.pis)

    def is_degenerate(self) -> bool:
        return bool(self.E)

    def satisfies_strict_triangle(self) -> bool:
        d1, d2, d3 = self.deltas
        return d1 < d2 + d3 and d2 < d1 + d3 and d3 < d1 + d2

    def sort_key(self):
        return (abs(self.A), self.deltas, tuple(p.parts for p in self.pis), tuple(sorted(self.E)))

    def to_json(self) -> Dict:
        return {
            "A": self.A,
            "deltas": list(self.deltas),
            "pis": [p.to_list() for p in self.pis],
            "E": [list(pair) for pair in sorted(self.E)],
        }

    @classmethod
    def from_json(cls, data: Dict) -> "DeltaFamilyData":
        return cls(
            A=int(data["A"]),
            deltas=tuple(data["deltas"]),
            pis=tuple(parse_partition(p) for p in data["pis"]),
            E=frozenset(tuple(pair) for pair in data["E"]),
        )

    def describe(self) -> str:
        parts = ",".join(p.render() for p in self.pis)
        pairs = ",".join(f"({i},{j})" for i, j in sorted(self.E)) or "∅"
        return f"A={self.A}, Δ={self.deltas}, π=({parts}), E={{{pairs}}}"


# ---------------------------------------------------------------------------
# 방향 변수
# ---------------------------------------------------------------------------

def p_atoms(x: DeltaFamilyData) -> List[Block]:
    """Δ>0 인 p 변수들을 E 에 따라 합친 원자 블록 (최소 번호순)"""
    atoms: List[set] = []
    for index in (1, 2, 3):
        if x.deltas[index - 1] == 0:
            continue
        name = P_VARIABLES[index - 1]
        for atom in atoms:
            if any(tuple(sorted((index, int(v[1:])))) in x.E for v in atom):
                atom.add(name)
                break
        else:
            atoms.append({name})
    return [frozenset(a) for a in atoms]


def free_variables(x: DeltaFamilyData) -> List[str]:
    return [f"s{c}" for c in range(1, free_component_count(x) + 1)]


def block_degree(x: DeltaFamilyData, block: Iterable[str]) -> int:
    """
    L_block 의 u+v+w (= -c₁). s 변수는 꼭짓점 위치를 바꾸지 않는다.
    p 블록이 없으면 -A.
    """
    weight = sum(x.deltas[int(v[1:]) - 1] for v in block if v.startswith("p"))
    return -x.A - weight


# ---------------------------------------------------------------------------
# 차트 기하
# ---------------------------------------------------------------------------

def chart_origin(x: DeltaFamilyData, chart: int) -> Cell:
    return {1: (0, 0), 2: (0, x.A), 3: (x.A, 0)}[chart]


@dataclass(frozen=True)
class ChartGeometry:
    chart: int
    width: int          # Δ_j (세로 띠 폭)
    height: int         # Δ_{j+1} (가로 띠 높이)
    degenerate: bool
    v_atom: Optional[Block]
    h_atom: Optional[Block]
    pi1: CellSet
    pi2: CellSet
    components: Tuple[Tuple[CellSet, Optional[Block], int], ...]  # (칸들, 강제 원자, 자유 번호)

    def in_vertical(self, cell: Cell) -> bool:
        return cell[0] < self.width

    def in_horizontal(self, cell: Cell) -> bool:
        return cell[1] < self.height

    def strip_content(self, cell: Cell) -> Optional[CellContent]:
        """띠 위의 칸이면 내용, 아니면 None (띠 바깥 = 영역 R)"""
        in_v, in_h = self.in_vertical(cell), self.in_horizontal(cell)
        if not in_v and not in_h:
            return None
        if self.degenerate:
            return ZERO if cell in self.pi1 else CellContent("line", self.v_atom)
        if in_v and in_h:
            return ZERO
        if in_v:
            return ZERO if cell in self.pi1 else CellContent("line", self.v_atom)
        return ZERO if cell in self.pi2 else CellContent("line", self.h_atom)


@dataclass(frozen=True)
class SigmaGeometry:
    """패턴과 무관한 Ξ 의 차트 기하 (자유 성분 포함)"""
    charts: Tuple[ChartGeometry, ChartGeometry, ChartGeometry]
    extent: int
    free_count: int

    def chart(self, j: int) -> ChartGeometry:
        return self.charts[j - 1]


def _place_partitions(x: DeltaFamilyData, j: int, degenerate: bool) -> Tuple[CellSet, CellSet]:
    width = x.deltas[j - 1]
    height = x.deltas[CHART_DIRECTIONS[j][1] - 1]
    first, second = x.pi(j, 1), x.pi(j, 2)
    if degenerate:
        return first.shifted_cells((0, 0)), second.shifted_cells((width, height))
    return first.shifted_cells((0, height)), second.shifted_cells((width, 0))


def _strip_lines(bare: ChartGeometry, extent: int) -> Dict[Block, CellSet]:
    """띠 위 직선 칸을 방향 원자별로 모은다 (0 ≤ x, y ≤ extent)"""
    lines: Dict[Block, set] = {}
    for cell in product(range(extent + 1), repeat=2):
        content = bare.strip_content(cell)
        if content is not None and content.tag == "line":
            lines.setdefault(content.label, set()).add(cell)
    return {label: frozenset(cells) for label, cells in lines.items()}


@lru_cache(maxsize=8192)
def sigma_geometry(x: DeltaFamilyData) -> SigmaGeometry:
    atoms = {name: atom for atom in p_atoms(x) for name in atom}
    extent = max(x.deltas) + max([max(p.width, p.height) for p in x.pis] + [0]) + 2
    charts = []
    next_free = 1
    for j in (1, 2, 3):
        i, k = CHART_DIRECTIONS[j]
        v_atom = atoms.get(P_VARIABLES[i - 1])
        h_atom = atoms.get(P_VARIABLES[k - 1])
        degenerate = v_atom is not None and v_atom == h_atom
        pi1, pi2 = _place_partitions(x, j, degenerate)
        bare = ChartGeometry(j, x.deltas[i - 1], x.deltas[k - 1], degenerate,
                             v_atom, h_atom, pi1, pi2, ())
        symmetric = {c for c in pi1 ^ pi2
                     if not bare.in_vertical(c) and not bare.in_horizontal(c)}
        lines = _strip_lines(bare, extent)
        components = []
        for component in connected_components(symmetric):
            forced = {label for label, cells in lines.items() if adjacent(component, cells)}
            if len(forced) > 1:
                raise SigmaRuleError(
                    f"차트 {j} 의 성분이 여러 방향으로 강제됩니다: {x.describe()}")
            if forced:
                components.append((component, forced.pop(), 0))
            else:
                components.append((component, None, next_free))
                next_free += 1
        charts.append(ChartGeometry(j, bare.width, bare.height, degenerate,
                                    v_atom, h_atom, pi1, pi2, tuple(components)))
    return SigmaGeometry(tuple(charts), extent, next_free - 1)


def raw_content(x: DeltaFamilyData, chart: int, m: Cell) -> CellContent:
    """패턴 적용 전 칸 내용 (직선 label 은 p 원자, 자유 성분은 번호)"""
    if m[0] < 0 or m[1] < 0:
        return ZERO
    geometry = sigma_geometry(x).chart(chart)
    strip = geometry.strip_content(m)
    if strip is not None:
        return strip
    in1, in2 = m in geometry.pi1, m in geometry.pi2
    if in1 and in2:
        return ZERO
    if not in1 and not in2:
        return FULL
    for cells, forced, free_index in geometry.components:
        if m in cells:
            if forced is not None:
                return CellContent("line", forced)
            return CellContent("free", free_index)
    raise SigmaRuleError(f"차트 {chart} 의 칸 {m} 이 어떤 성분에도 속하지 않습니다")


def sigma_signature(x: DeltaFamilyData) -> Tuple:
    """
    Ξ 가 정하는 σ-family 전체를 비교 가능한 값으로 요약한다.

    분할 밖의 칸 내용은 (A, Δ, E) 만으로 정해지므로 분할 칸의 내용만 모은다.
    자유 성분은 번호 대신 칸 집합으로 표시한다.
    폭이 0 인 띠나 영역 R 에서는 서로 다른 분할 배치가 같은 층을 줄 수 있으며,
    그런 Ξ 들은 같은 서명을 갖는다.
    """
    geometry = sigma_geometry(x)
    charts = []
    for chart in geometry.charts:
        free_cells = {index: cells for cells, forced, index in chart.components if forced is None}
        entries = set()
        for cell in chart.pi1 | chart.pi2:
            content = raw_content(x, chart.chart, cell)
            label = free_cells[content.label] if content.tag == "free" else content.label
            entries.add((cell, content.tag, label))
        charts.append(frozenset(entries))
    return x.A, x.deltas, x.E, tuple(charts)


def representative_key(x: DeltaFamilyData):
    """같은 σ-family 중 대표: 상자가 가장 고르게 나뉜 것, 다음 sort_key 순"""
    return tuple(sorted((p.size for p in x.pis), reverse=True)), x.sort_key()


def resolve_block(x: DeltaFamilyData, content: CellContent, pattern: Optional["Pattern"]) -> Block:
    """직선/자유 내용이 가리키는 방향 블록"""
    if content.tag == "free":
        variable = f"s{content.label}"
        return pattern.block_of(variable) if pattern is not None else frozenset({variable})
    if content.tag == "line":
        representative = min(content.label, key=variable_key)
        return pattern.block_of(representative) if pattern is not None else content.label
    raise SigmaRuleError(f"방향이 없는 칸 내용입니다: {content.describe()}")


def eval_sigma(x: DeltaFamilyData, pattern: Optional["Pattern"], chart: int, m: Cell) -> CellContent:
    """
    차트 chart 의 상대 좌표 m 에서의 칸 내용.
    직선 label 은 패턴의 블록으로 바꿔 돌려주고, 자유 성분은 free(c) 로 남긴다.
    """
    if chart not in (1, 2, 3):
        raise ValueError(f"차트 번호는 1, 2, 3 중 하나여야 합니다: {chart}")
    if pattern is not None:
        check_pattern(x, pattern)
    content = raw_content(x, chart, m)
    if content.tag == "line":
        return CellContent("line", resolve_block(x, content, pattern))
    return content


def free_component_count(x: DeltaFamilyData, pattern: Optional["Pattern"] = None) -> int:
    """세 차트 전체의 자유 성분 개수 k (패턴과 무관)"""
    return sigma_geometry(x).free_count


def check_pattern(x: DeltaFamilyData, pattern: "Pattern") -> None:
    for atom in p_atoms(x):
        members = {pattern.block_of(name) for name in atom}
        if len(members) != 1:
            raise PatternMismatchError(f"E 로 합쳐진 {block_name(atom)} 가 다른 블록에 있습니다")
    for first, second in combinations(p_atoms(x), 2):
        if pattern.block_of(min(first)) == pattern.block_of(min(second)):
            raise PatternMismatchError(
                f"E 에 없는 일치 {block_name(first)}={block_name(second)} 가 패턴에 있습니다")


# ---------------------------------------------------------------------------
# Chern 지표와 Hilbert 다항식
# ---------------------------------------------------------------------------

def rank1_chern(d: Rank1Data) -> ChernCharacter:
    total = d.u + d.v + d.w
    return ChernCharacter(1, -total, Fraction(total * total, 2) - sum(p.size for p in d.pis))


def rank2_chern(x: DeltaFamilyData, pattern: Optional["Pattern"] = None) -> ChernCharacter:
    """dim p_i∩p_j = 1 은 (i,j) ∈ E 일 때만"""
    if pattern is not None:
        check_pattern(x, pattern)
    delta_sum = sum(x.deltas)
    overlap = sum(x.deltas[i - 1] * x.deltas[j - 1]
                  for i, j in INDEX_PAIRS if (i, j) not in x.E)
    ch2 = (Fraction(x.A * x.A, 2) + Fraction((x.A + delta_sum) ** 2, 2)
           - x.total_boxes - overlap)
    return ChernCharacter(2, -2 * x.A - delta_sum, ch2)


def hilbert_from_chern(c: ChernCharacter) -> HilbertPolynomial:
    """Riemann–Roch: P(m) = r(m+1)(m+2)/2 + c₁(m + 3/2) + ch₂"""
    r = Fraction(c.rank)
    return HilbertPolynomial(r / 2, Fraction(3) * r / 2 + c.c1, r + Fraction(3 * c.c1, 2) + c.ch2)


def rank2_hilbert(x: DeltaFamilyData) -> HilbertPolynomial:
    return hilbert_from_chern(rank2_chern(x))


def rank1_lattice_count(d: Rank1Data, m: int) -> int:
    """
    H⁰(L(m)) 의 격자점 개수: a+b+c = m, 차트1 (a,b), 차트2 (b,c), 차트3 (c,a)
    가 모두 꼭짓점 사분면 안에 있고 구멍(분할)에 속하지 않는 경우
    """
    holes = [d.pis[0].shifted_cells((d.u, d.v)),
             d.pis[1].shifted_cells((d.v, d.w)),
             d.pis[2].shifted_cells((d.w, d.u))]
    count = 0
    for a in range(d.u, m - d.v - d.w + 1):
        for b in range(d.v, m - a - d.w + 1):
            c = m - a - b
            if (a, b) in holes[0] or (b, c) in holes[1] or (c, a) in holes[2]:
                continue
            count += 1
    return count


# ---------------------------------------------------------------------------
# 불안정화 부분층 L_x
# ---------------------------------------------------------------------------

def _in_region(x: DeltaFamilyData, chart: int, cell: Cell, block: Block) -> bool:
    content = raw_content(x, chart, cell)
    if content.tag == "full":
        return True
    if content.tag == "line":
        return content.label <= block
    if content.tag == "free":
        return f"s{content.label}" in block
    return False


@lru_cache(maxsize=65536)
def subsheaf_data(x: DeltaFamilyData, block: Block) -> Rank1Data:
    """
    방향 block 을 포함하는 칸들로 이루어진 최대 랭크 1 부분층의 고정점 데이터.
    block 이 비어 있으면 일반 방향 (평면 전체 칸만).
    """
    extent = sigma_geometry(x).extent
    corners = []
    holes = []
    for j in (1, 2, 3):
        corner_x = next((cx for cx in range(extent + 1)
                         if _in_region(x, j, (cx, extent), block)), None)
        corner_y = next((cy for cy in range(extent + 1)
                         if _in_region(x, j, (extent, cy), block)), None)
        if corner_x is None or corner_y is None:
            raise SigmaRuleError(f"차트 {j} 에서 {block_name(block)} 의 꼭짓점을 찾지 못했습니다")
        missing = [(cx, cy)
                   for cx in range(corner_x, extent + 1)
                   for cy in range(corner_y, extent + 1)
                   if not _in_region(x, j, (cx, cy), block)]
        holes.append(Partition2D.from_cells(missing, origin=(corner_x, corner_y)))
        ox, oy = chart_origin(x, j)
        corners.append((corner_x + ox, corner_y + oy))
    (u, v), (v2, w), (w2, u2) = corners
    if (u, v, w) != (u2, v2, w2):
        raise SigmaRuleError(
            f"{block_name(block) or '일반 방향'} 의 차트 꼭짓점이 일치하지 않습니다: {corners}")
    return Rank1Data(u, v, w, tuple(holes))


def destabilizer_polynomial(x: DeltaFamilyData, pattern: Optional["Pattern"], block: Block) -> HilbertPolynomial:
    """L_block 의 Hilbert 다항식 (rank1_chern + hilbert_from_chern)"""
    if pattern is not None and block and block not in pattern.blocks:
        raise PatternMismatchError(f"{block_name(block)} 는 패턴의 블록이 아닙니다")
    return hilbert_from_chern(rank1_chern(subsheaf_data(x, frozenset(block))))


# ---------------------------------------------------------------------------
# S₃ 재색인과 중복도
# ---------------------------------------------------------------------------

def _cycle(x: DeltaFamilyData) -> DeltaFamilyData:
    """새 j 번 방향 = 기존 j+1 번 방향"""
    d1, d2, d3 = x.deltas
    p = x.pis
    shift = {2: 1, 3: 2, 1: 3}
    pairs = frozenset(tuple(sorted((shift[i], shift[j]))) for i, j in x.E)
    return DeltaFamilyData(x.A, (d2, d3, d1), (p[2], p[3], p[4], p[5], p[0], p[1]), pairs)


def _swap12(x: DeltaFamilyData) -> DeltaFamilyData:
    """방향 1, 2 교환 (좌표 전치 포함). 퇴화 차트는 슬롯을 바꾸지 않는다."""
    d1, d2, d3 = x.deltas
    swap = {1: 2, 2: 1, 3: 3}
    pairs = frozenset(tuple(sorted((swap[i], swap[j]))) for i, j in x.E)

    def moved(source_chart: int) -> Tuple[Partition2D, Partition2D]:
        first, second = x.pi(source_chart, 1).transpose(), x.pi(source_chart, 2).transpose()
        if tuple(sorted(CHART_DIRECTIONS[source_chart])) in x.E:
            return first, second
        return second, first

    new1, new2, new3 = moved(1), moved(3), moved(2)
    return DeltaFamilyData(x.A, (d2, d1, d3), new1 + new2 + new3, pairs)


def _compose(first: Tuple[int, ...], second: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(first[second[i]] for i in range(3))


@lru_cache(maxsize=1)
def _permutation_words() -> Dict[Tuple[int, int, int], Tuple[str, ...]]:
    """각 순열을 생성원 (cycle, swap) 의 곱으로 표현"""
    generators = {"cycle": (1, 2, 0), "swap": (1, 0, 2)}
    words = {(0, 1, 2): ()}
    frontier = [(0, 1, 2)]
    while frontier:
        perm = frontier.pop(0)
        for name, gen in generators.items():
            image = _compose(perm, gen)
            if image not in words:
                words[image] = words[perm] + (name,)
                frontier.append(image)
    return words


def reindex(x: DeltaFamilyData, perm: Tuple[int, int, int]) -> DeltaFamilyData:
    """
    방향 재색인: 결과의 Δ'_i = Δ_{perm[i]} (perm 은 0-기반 순열).
    분할과 E 도 함께 옮겨진다.
    """
    words = _permutation_words()
    if tuple(perm) not in words:
        raise ValueError(f"올바른 순열이 아닙니다: {perm}")
    result = x
    for name in words[tuple(perm)]:
        result = _cycle(result) if name == "cycle" else _swap12(result)
    return result


def multiplicity(x: DeltaFamilyData) -> int:
    """Δ 의 서로 다른 순열 개수 (1, 3, 6)"""
    return len(set(permutations(x.deltas)))


# ---------------------------------------------------------------------------
# D(P) 열거
# ---------------------------------------------------------------------------

def _delta_triples(total: int) -> List[Tuple[int, int, int]]:
    """합이 total 인 내림차순 Δ 삼중쌍"""
    triples = []
    for d1 in range(total, -1, -1):
        for d2 in range(min(d1, total - d1), -1, -1):
            d3 = total - d1 - d2
            if d3 <= d2:
                triples.append((d1, d2, d3))
    return triples


def _coincidence_options(deltas: Tuple[int, int, int]) -> List[FrozenSet[Tuple[int, int]]]:
    positive = [i for i in (1, 2, 3) if deltas[i - 1] > 0]
    options = [frozenset()]
    for pair in INDEX_PAIRS:
        if all(i in positive for i in pair):
            options.append(frozenset({pair}))
    if len(positive) == 3:
        options.append(frozenset(INDEX_PAIRS))
    return options


def _passes_slope_filter(A: int, deltas: Tuple[int, int, int], pairs: FrozenSet) -> bool:
    """모든 p 원자 블록의 L 이 c₁ ≤ 0 (그렇지 않으면 모든 패턴에서 불안정)"""
    empty = DeltaFamilyData(A, deltas, (Partition2D(),) * 6, pairs)
    return all(block_degree(empty, atom) >= 0 for atom in p_atoms(empty))


class DeltaFamilyEnumerator:
    """D(P) 열거기 (A 하향 스윕, (A, Δ, E) 칸 단위 병렬 처리)"""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or int(os.getenv("LOCALP2_MAX_WORKERS", DEFAULT_MAX_WORKERS))

    def scan_cell(self, b: int, A: int, deltas: Tuple[int, int, int],
                  pairs: FrozenSet[Tuple[int, int]]) -> List[DeltaFamilyData]:
        """
        한 (A, Δ, E) 칸에서 반안정 비분해 패턴을 갖는 Ξ 전체.
        같은 σ-family 를 주는 Ξ 는 representative_key 가 가장 작은 하나만 남긴다.
        """
        from src.strata import has_indecomposable_semistable_pattern

        overlap = sum(deltas[i - 1] * deltas[j - 1] for i, j in INDEX_PAIRS if (i, j) not in pairs)
        total = A * A - b - overlap
        if total < 0:
            return []
        representatives: Dict[Tuple, DeltaFamilyData] = {}
        for pis in partition_tuples(total, 6):
            x = DeltaFamilyData(A, deltas, pis, pairs)
            signature = sigma_signature(x)
            current = representatives.get(signature)
            if current is None or representative_key(x) < representative_key(current):
                representatives[signature] = x
        duplicates = count_partition_tuples(total, 6) - len(representatives)
        if duplicates:
            logger.debug(f"A={A}, Δ={deltas}: 같은 σ-family 중복 {duplicates}개 제외")
        return [x for x in representatives.values() if has_indecomposable_semistable_pattern(x)]

    def cells_for(self, A: int):
        for deltas in _delta_triples(-2 * A):
            for pairs in _coincidence_options(deltas):
                if _passes_slope_filter(A, deltas, pairs):
                    yield deltas, pairs

    def enumerate(self, b: int, a_floor: Optional[int] = None) -> List[Tuple[DeltaFamilyData, int]]:
        if b > 0:
            raise ValueError(f"b 는 0 이하여야 합니다: {b}")
        a_floor = default_a_floor(b) if a_floor is None else a_floor
        logger.info(f"D(P) 열거 시작: b={b}, A 하한={a_floor}, 작업자={self.max_workers}")

        results: List[DeltaFamilyData] = []
        empty_streak = 0
        A = -1
        while empty_streak < EMPTY_STREAK_LIMIT:
            if A < a_floor:
                raise EnumerationBoundError(
                    f"A={A} 에서 안전 하한 {a_floor} 를 넘었습니다 (b={b}); --a-floor 를 낮추세요")
            cells = list(self.cells_for(A))
            level: List[DeltaFamilyData] = []
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_cell = {
                    executor.submit(self.scan_cell, b, A, deltas, pairs): (deltas, pairs)
                    for deltas, pairs in cells
                }
                for completed, future in enumerate(as_completed(future_to_cell), start=1):
                    deltas, pairs = future_to_cell[future]
                    try:
                        level.extend(future.result())
                    except Exception as e:
                        logger.error(f"칸 처리 실패 A={A}, Δ={deltas}, E={sorted(pairs)}: {e}")
                        raise
                    logger.debug(f"A={A} 진행률: {completed}/{len(cells)}")
            logger.info(f"A={A}: {len(level)}개 Δ-family 데이터 발견")
            empty_streak = 0 if level else empty_streak + 1
            results.extend(level)
            A -= 1

        results.sort(key=DeltaFamilyData.sort_key)
        logger.info(f"D(P) 열거 완료: b={b}, {len(results)}개 행")
        return [(x, multiplicity(x)) for x in results]


def enumerate_D(b: int, a_floor: Optional[int] = None,
                max_workers: Optional[int] = None) -> List[Tuple[DeltaFamilyData, int]]:
    """D(P) 열거 편의 함수"""
    return DeltaFamilyEnumerator(max_workers=max_workers).enumerate(b, a_floor)
