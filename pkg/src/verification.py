"""
항등식/성질 검사 모음 (verify 명령)
"""

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.constants import VERIFY_ODD_B_VALUES
from src.exactmath import PowerSeries, eta_power_series, format_rational
from src.invariants import compute_report, mu_stable_series, series_k2_a1
from src.pairs import chart_pair_counts, expected_weighted_count, n_min, rank2_polynomial
from src.partitions import Partition2D, count_partition_tuples, enumerate_partitions
from src.sigma import DeltaFamilyData, free_component_count, reindex
from src.strata import (
    TableRow,
    c_values,
    classify_pattern,
    enumerate_patterns,
    oracle_c_values,
)

logger = logging.getLogger(__name__)

# 알려진 DT-bar 값 (b → 문자열)
KNOWN_DT_BAR = {0: "1/4", -2: "-21/4", -4: "-639/4"}

SINGLE_BOX_SAMPLE = DeltaFamilyData(-2, (2, 1, 1), (Partition2D((1,)),) + (Partition2D(),) * 5)
SINGLE_BOX_LEVEL = 5


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


RowsProvider = Callable[[int], List[TableRow]]


def _prefix_check(name: str, series: PowerSeries, expected: Sequence[int]) -> CheckResult:
    shown = [int(series[i]) for i in range(min(len(expected), series.order + 1))]
    wanted = list(expected[: len(shown)])
    return CheckResult(name, shown == wanted, f"{shown} (기대값 {wanted})")


def series_checks(order: int) -> List[CheckResult]:
    results = []
    k1 = eta_power_series(-3, order)
    results.append(_prefix_check("k=1 급수 앞 계수", k1, [1, 3, 9]))

    limit = min(order, 8)
    triples = [count_partition_tuples(n, 3) for n in range(limit + 1)]
    results.append(CheckResult(
        "χ(Hilb) = 분할 삼중쌍 개수", triples == [int(k1[n]) for n in range(limit + 1)],
        f"n ≤ {limit}"))

    limit = min(order, 12)
    eta1 = eta_power_series(-1, limit)
    counts = [len(enumerate_partitions(n)) for n in range(limit + 1)]
    results.append(CheckResult(
        "분할 개수 = ∏1/(1-qⁿ) 계수", counts == [int(eta1[n]) for n in range(limit + 1)],
        f"n ≤ {limit}"))

    unit = k1 * k1.inverse()
    results.append(CheckResult("급수 역원", unit == PowerSeries.one(order), f"N={order}"))

    mu = mu_stable_series(order)
    mismatch = mu.closed.first_mismatch(mu.triangle)
    results.append(CheckResult(
        "Lambert(mu) = 삼각합", mu.identity_holds(),
        f"N={order}" if mismatch < 0 else f"q^{mismatch} 불일치"))

    full = mu if order <= 20 else mu_stable_series(20)
    results.append(CheckResult(
        "μ-안정 급수 = eta(-6)·Lambert(mu)", full.full_identity_holds(),
        f"N={full.full_closed.order}"))

    k2 = series_k2_a1(order)
    results.append(CheckResult(
        "k=2 a=1 급수 비음수", all(c >= 0 for c in k2.coefficients), f"N={order}"))
    return results


def single_box_counts() -> List[Tuple[int, int, str]]:
    """차트별 (원 + 2·점, 가중 개수)"""
    pattern = enumerate_patterns(SINGLE_BOX_SAMPLE)[0]
    return [(count.total, count.weighted, format_rational(count.weighted))
            for count in chart_pair_counts(SINGLE_BOX_SAMPLE, pattern, SINGLE_BOX_LEVEL)]


def single_box_check() -> CheckResult:
    counts = single_box_counts()
    totals = [c[0] for c in counts]
    weighted = [c[2] for c in counts]
    passed = totals == [40, 40, 40] and weighted == ["20", "20", "20"]
    return CheckResult("상자 하나짜리 예제 n=5 차트 개수", passed, f"합계 {totals}, 가중 {weighted}")


def chart_identity_check(b: int, rows: Sequence[TableRow]) -> CheckResult:
    """반안정 비분해 패턴마다 차트별 원+2·점 = P(n), 가중 개수 = 기대값"""
    polynomial = rank2_polynomial(b)
    checked = 0
    for row in rows:
        x = row.xi
        for n in (n_min(x), n_min(x) + 2):
            for pattern in enumerate_patterns(x):
                stratum = classify_pattern(x, pattern)
                if not stratum.is_indecomposable_semistable():
                    continue
                expected = expected_weighted_count(polynomial, n, stratum)
                for count in chart_pair_counts(x, pattern, n):
                    if count.total != polynomial(n) or count.weighted != expected:
                        return CheckResult(
                            f"차트 격자 개수 b={b}", False,
                            f"{x.describe()} {pattern.describe()} n={n}: "
                            f"{count.total}/{format_rational(count.weighted)}")
                checked += 1
    return CheckResult(f"차트 격자 개수 b={b}", True, f"{checked}개 (Ξ, 패턴, n) 확인")


def oracle_check(b: int, rows: Sequence[TableRow]) -> CheckResult:
    for row in rows:
        if oracle_c_values(row.xi) != (row.c_ss, row.c_st):
            return CheckResult(f"유한체 오라클 b={b}", False, row.xi.describe())
    return CheckResult(f"유한체 오라클 b={b}", True, f"{len(rows)}개 행 일치")


def mu_stable_rows_check(b: int, rows: Sequence[TableRow]) -> CheckResult:
    """E = ∅ 이고 엄밀 삼각 부등식이면 c = (0, 2^k)"""
    checked = 0
    for row in rows:
        x = row.xi
        if x.E or not x.satisfies_strict_triangle():
            continue
        k = free_component_count(x)
        if (row.c_ss, row.c_st) != (0, 2 ** k):
            return CheckResult(f"μ-안정 행 b={b}", False, f"{x.describe()} → ({row.c_ss}, {row.c_st})")
        checked += 1
    return CheckResult(f"μ-안정 행 b={b}", True, f"{checked}개 행 c^st = 2^k")


def reindex_check(b: int, rows: Sequence[TableRow]) -> CheckResult:
    for row in rows[:5]:
        for perm in permutations(range(3)):
            if c_values(reindex(row.xi, perm)) != (row.c_ss, row.c_st):
                return CheckResult(f"S₃ 재색인 불변 b={b}", False, f"{row.xi.describe()} {perm}")
    return CheckResult(f"S₃ 재색인 불변 b={b}", True, f"{min(len(rows), 5)}개 행 × 6 순열")


def invariant_checks(b: int, rows: Sequence[TableRow], n: Optional[int] = None) -> List[CheckResult]:
    report = compute_report(b, rows, n)
    results = [CheckResult(
        f"교차 공식/n-독립성/정수성 b={b}", report.ok,
        "; ".join(report.failures + report.findings) or
        f"DT-bar={format_rational(report.dt_bar)}, DT-hat={format_rational(report.dt_hat)}, n={report.n_used}")]
    if b in KNOWN_DT_BAR:
        value = format_rational(report.dt_bar)
        results.append(CheckResult(f"알려진 DT-bar b={b}", value == KNOWN_DT_BAR[b],
                                   f"{value} (기대값 {KNOWN_DT_BAR[b]})"))
    return results


def run_verification(order: int, b_values: Sequence[int], rows_for: RowsProvider,
                     odd_b_values: Optional[Sequence[int]] = None,
                     n: Optional[int] = None) -> List[CheckResult]:
    """전체 검사 모음. n 을 주면 교차 공식 검사를 (n, n+2) 에서 한다"""
    results = series_checks(order)
    results.append(single_box_check())
    for b in b_values:
        rows = rows_for(b)
        logger.info(f"b={b}: {len(rows)}개 행 검사")
        results.extend(invariant_checks(b, rows, n))
        results.append(oracle_check(b, rows))
        results.append(mu_stable_rows_check(b, rows))
        results.append(reindex_check(b, rows))
        results.append(chart_identity_check(b, rows))
    for b in (VERIFY_ODD_B_VALUES if odd_b_values is None else odd_b_values):
        rows = rows_for(b)
        sum_c_ss = sum(r.multiplicity * r.c_ss for r in rows)
        results.append(CheckResult(f"홀수 b={b} Σc^ss = 0", sum_c_ss == 0, f"Σc^ss={sum_c_ss}"))
    return results


def summarize(results: Sequence[CheckResult]) -> Dict[str, int]:
    passed = sum(1 for r in results if r.passed)
    return {"passed": passed, "failed": len(results) - passed}
