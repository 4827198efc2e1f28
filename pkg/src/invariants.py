"""
불변량 조립 모듈

- DT-bar (벽 넘기 공식 / 층 분해 공식), DT-hat (BPS 약수 역변환)
- 홀수 b 의 χ(M) 과 부호
- 모듈라이 차원
- 생성 급수 (k=1, k=2 a=1, μ-안정) 와 삼각 항등식 검사
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.exactmath import (
    HilbertPolynomial,
    PowerSeries,
    eta_power_series,
    format_rational,
    is_integral,
    lambert_double_sum,
)
from src.pairs import n_min, pair_invariant, rank2_polynomial
from src.partitions import count_partition_tuples
from src.strata import TableRow, weighted_sums

logger = logging.getLogger(__name__)

# 자동 n 선택의 최소값 (D(P) 가 비어 있는 경우)
MIN_AUTO_N = 4


class SeriesBoundError(RuntimeError):
    """삼각합 열거 범위가 절단 차수에 비해 부족함"""


def moduli_dimension(k: int, a: int, b: int) -> int:
    """dim M = 1 - χ(F,F) = -2kb + a² - k² + 1"""
    return -2 * k * b + a * a - k * k + 1


def hilbert_scheme_euler(n: int) -> int:
    """χ(Hilb^n(P²)) = ∏(1-q^k)^{-3} 의 q^n 계수"""
    if n < 0:
        return 0
    return int(eta_power_series(-3, n)[n])


def wall_crossing_dt(b: int, pi_n: Fraction, n: int) -> Fraction:
    """DT-bar = χ(Hilb^{-b/2})²·P(n)/8 - PI_n/P(n)"""
    _require_even(b)
    h = hilbert_scheme_euler(-b // 2)
    p_n = rank2_polynomial(b)(n)
    return Fraction(h * h) * p_n / 8 - Fraction(pi_n) / p_n


def theorem_ss_dt(b: int, sum_c_ss: int, sum_c_st: int) -> Fraction:
    """DT-bar = χ(Hilb^{-b/2})/4 - χ(M^s) - Σc^ss/2"""
    _require_even(b)
    return Fraction(hilbert_scheme_euler(-b // 2), 4) - sum_c_st - Fraction(sum_c_ss, 2)


def _require_even(b: int):
    if b % 2 != 0 or b > 0:
        raise ValueError(f"b 는 0 이하 짝수여야 합니다: {b}")


def rank1_dt(polynomial: HilbertPolynomial) -> Fraction:
    """m²/2 + 3m/2 + 1 - n 꼴 랭크 1 다항식의 DT = χ(Hilb^n)"""
    if polynomial.c2 != Fraction(1, 2) or polynomial.c1 != Fraction(3, 2):
        raise ValueError(f"c₁ = 0 인 랭크 1 다항식이 아닙니다: {polynomial}")
    n = 1 - polynomial.c0
    if n.denominator != 1:
        raise ValueError(f"상수항이 정수가 아닙니다: {polynomial}")
    return Fraction(hilbert_scheme_euler(int(n)))


def proper_divisors(polynomial: HilbertPolynomial) -> List[Tuple[int, HilbertPolynomial]]:
    """d ≥ 2, d | rank 이고 P/d 가 정수값 다항식인 (d, P/d)"""
    rank = 2 * polynomial.c2
    if rank.denominator != 1:
        return []
    result = []
    for d in range(2, int(rank) + 1):
        if int(rank) % d:
            continue
        quotient = polynomial.scale(Fraction(1, d))
        if quotient.is_numerical():
            result.append((d, quotient))
    return result


def dt_hat_inversion(polynomial: HilbertPolynomial,
                     dt_bar_fn: Callable[[HilbertPolynomial], Fraction]) -> Fraction:
    """DT-bar(P) = Σ_{d | P} DT-hat(P/d)/d² 를 DT-hat 에 대해 푼다"""
    value = Fraction(dt_bar_fn(polynomial))
    for d, quotient in proper_divisors(polynomial):
        value -= dt_hat_inversion(quotient, dt_bar_fn) / (d * d)
    return value


def bps_invariant(b: int, dt_bar: Fraction) -> Fraction:
    """DT-hat(P). P/2 의 DT-hat 은 χ(Hilb^{-b/2}) (랭크 1 이라 더 나눌 수 없음)"""
    top = rank2_polynomial(b)

    def lookup(polynomial: HilbertPolynomial) -> Fraction:
        if polynomial == top:
            return Fraction(dt_bar)
        return rank1_dt(polynomial)

    return dt_hat_inversion(top, lookup)


def odd_b_dt(b: int, rows: Sequence[TableRow]) -> Tuple[int, int]:
    """홀수 b: (χ(M), (-1)^{dim M} χ(M) = -χ(M))"""
    if b % 2 == 0:
        raise ValueError(f"b 는 홀수여야 합니다: {b}")
    _, chi = weighted_sums(rows)
    sign = -1 if moduli_dimension(2, 0, b) % 2 else 1
    return chi, sign * chi


# ---------------------------------------------------------------------------
# 생성 급수
# ---------------------------------------------------------------------------

def series_k1(order: int) -> PowerSeries:
    """Σ χ(Hilb^n) qⁿ = ∏ 1/(1-qⁿ)³"""
    return eta_power_series(-3, order)


def series_k2_a1(order: int) -> PowerSeries:
    """(1/∏(1-qⁿ)⁶) · Σ q^{mn}/(1-q^{m+n-1})"""
    return eta_power_series(-6, order) * lambert_double_sum("a1", order)


def default_triangle_bound(order: int) -> int:
    """ΣΔ/2 의 상한. 지수 ≥ 2·(ΣΔ/2) - 3 이므로 이 값이면 충분하다"""
    return (order + 3) // 2 + 1


def _triangle_exponents(order: int, bound: int):
    for half in range(2, bound + 1):
        for d1 in range(1, half):
            for d2 in range(1, half):
                d3 = 2 * half - d1 - d2
                if not 1 <= d3 < half:
                    continue
                exponent = d1 * d2 + d1 * d3 + d2 * d3 - half * half
                if exponent <= order:
                    yield exponent


def triangle_sum_series(order: int, bound: Optional[int] = None) -> PowerSeries:
    """
    Σ_Δ q^{Σ_{i<j}Δ_iΔ_j - (ΣΔ)²/4}
    Δ_i > 0, 엄밀 삼각 부등식, ΣΔ 짝수 인 순서 삼중쌍 전체에 대한 합
    """
    bound = default_triangle_bound(order) if bound is None else bound
    series = PowerSeries.from_exponents(_triangle_exponents(order, bound), order)
    wider = PowerSeries.from_exponents(_triangle_exponents(order, bound + 2), order)
    if series != wider:
        raise SeriesBoundError(
            f"ΣΔ/2 ≤ {bound} 범위로는 q^{series.first_mismatch(wider)} 계수가 부족합니다")
    return series


def partition_tuple_series(slots: int, order: int) -> PowerSeries:
    """분할 slots-튜플 개수의 생성 급수 (명시적 열거)"""
    return PowerSeries((count_partition_tuples(n, slots) for n in range(order + 1)), order)


@dataclass(frozen=True)
class MuStableSeries:
    closed: PowerSeries          # lambert_double_sum(mu)
    triangle: PowerSeries        # 삼각합 직접 열거
    full_closed: PowerSeries     # eta(-6) · lambert(mu)
    full_enumerated: PowerSeries  # 삼각합 × 분할 6-튜플 개수

    def identity_holds(self) -> bool:
        return self.closed == self.triangle

    def full_identity_holds(self) -> bool:
        return self.full_closed == self.full_enumerated


def mu_stable_series(order: int) -> MuStableSeries:
    if order < 0:
        raise ValueError(f"절단 차수는 0 이상이어야 합니다: {order}")
    closed = lambert_double_sum("mu", order)
    triangle = triangle_sum_series(order)
    full_closed = eta_power_series(-6, order) * closed
    full_enumerated = triangle * partition_tuple_series(6, order)
    return MuStableSeries(closed, triangle, full_closed, full_enumerated)


# ---------------------------------------------------------------------------
# 보고서
# ---------------------------------------------------------------------------

@dataclass
class InvariantReport:
    b: int
    parity: str
    dt_bar: Fraction
    dt_hat: Fraction
    chi_stable: int
    sum_c_ss: int
    sum_c_st: int
    pi_n: Optional[Tuple[Fraction, Fraction]] = None
    n_used: Optional[Tuple[int, int]] = None
    dt_signed: Optional[int] = None
    dimension: int = 0
    row_count: int = 0
    provenance: Dict[str, str] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    findings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.findings

    def to_json(self) -> Dict:
        return {
            "b": self.b,
            "parity": self.parity,
            "dt_bar": format_rational(self.dt_bar),
            "dt_hat": format_rational(self.dt_hat),
            "dt_signed": self.dt_signed,
            "chi_stable": self.chi_stable,
            "sum_c_ss": self.sum_c_ss,
            "sum_c_st": self.sum_c_st,
            "pi_n": [format_rational(v) for v in self.pi_n] if self.pi_n else None,
            "n_used": list(self.n_used) if self.n_used else None,
            "dimension": self.dimension,
            "rows": self.row_count,
            "provenance": dict(sorted(self.provenance.items())),
            "failures": list(self.failures),
            "findings": list(self.findings),
        }


def choose_n(rows: Sequence[TableRow], n: Optional[int] = None) -> Tuple[int, int]:
    """(n, n+2). n 이 없으면 모든 행의 n_min 최댓값"""
    if n is None:
        n = max([n_min(row.xi) for row in rows] + [MIN_AUTO_N])
    return n, n + 2


def compute_report(b: int, rows: Sequence[TableRow], n: Optional[int] = None,
                   order: Optional[int] = None) -> InvariantReport:
    """
    한 b 에 대한 전체 불변량 보고서.
    order 를 주면 그 절단 차수의 μ-안정 급수 계수를 provenance 에 함께 기록한다.
    """
    if b > 0:
        raise ValueError(f"b 는 0 이하여야 합니다: {b}")
    sum_c_ss, sum_c_st = weighted_sums(rows)
    if b % 2:
        return _odd_report(b, rows, sum_c_ss, sum_c_st, -b if order is None else order)

    h = hilbert_scheme_euler(-b // 2)
    n_used = choose_n(rows, n)
    pis = tuple(pair_invariant(b, value, rows) for value in n_used)
    wall = [wall_crossing_dt(b, pi, value) for pi, value in zip(pis, n_used)]
    theorem = theorem_ss_dt(b, sum_c_ss, sum_c_st)
    dt_hat = bps_invariant(b, theorem)

    report = InvariantReport(
        b=b, parity="even", dt_bar=theorem, dt_hat=dt_hat, chi_stable=sum_c_st,
        sum_c_ss=sum_c_ss, sum_c_st=sum_c_st, pi_n=pis, n_used=n_used,
        dimension=moduli_dimension(2, 0, b), row_count=len(rows),
    )
    report.provenance.update({
        "hilbert_euler": str(h),
        "hilbert_euler_by_partitions": str(count_partition_tuples(-b // 2, 3)),
        "theorem_route": format_rational(theorem),
        "wall_crossing_route": ", ".join(
            f"n={value}: {format_rational(dt)}" for value, dt in zip(n_used, wall)),
        "bps_route": f"{format_rational(theorem)} - {h}/4",
    })
    if order is not None:
        report.provenance["mu_stable_count"] = _mu_stable_count(b, order)

    if count_partition_tuples(-b // 2, 3) != h:
        report.failures.append("χ(Hilb) 가 분할 삼중쌍 개수와 다릅니다")
    if wall[0] != wall[1]:
        report.failures.append(
            f"n-독립성 실패: {format_rational(wall[0])} ≠ {format_rational(wall[1])}")
    if any(dt != theorem for dt in wall):
        report.failures.append(
            f"벽 넘기 공식과 층 분해 공식 불일치: {format_rational(wall[0])} ≠ {format_rational(theorem)}")
    if dt_hat != -sum_c_st - Fraction(sum_c_ss, 2):
        report.failures.append("BPS 값이 -χ(M^s) - Σc^ss/2 와 다릅니다")
    if not is_integral(dt_hat):
        report.findings.append(f"DT-hat 이 정수가 아닙니다: {format_rational(dt_hat)}")
    if sum_c_ss % 2:
        report.findings.append(f"Σ mult·c^ss = {sum_c_ss} 가 짝수가 아닙니다")
    _log_report(report)
    return report


def _mu_stable_count(b: int, order: int) -> str:
    """μ-안정 급수 (eta(-6)·Lambert) 의 q^{-b} 계수"""
    if order < -b:
        return f"절단 차수 {order} < {-b}"
    return format_rational(mu_stable_series(order).full_closed[-b])


def _odd_report(b: int, rows: Sequence[TableRow], sum_c_ss: int, sum_c_st: int,
                order: int) -> InvariantReport:
    chi, signed = odd_b_dt(b, rows)
    dt_bar = Fraction(chi)
    report = InvariantReport(
        b=b, parity="odd", dt_bar=dt_bar, dt_hat=bps_invariant(b, dt_bar),
        chi_stable=chi, sum_c_ss=sum_c_ss, sum_c_st=sum_c_st, dt_signed=signed,
        dimension=moduli_dimension(2, 0, b), row_count=len(rows),
    )
    report.provenance.update({
        "chi_route": f"Σ mult·c^st = {chi}",
        "signed_route": f"(-1)^{report.dimension}·{chi} = {signed}",
        "mu_stable_count": _mu_stable_count(b, order),
    })
    if sum_c_ss != 0:
        report.failures.append(f"홀수 b 인데 Σ c^ss = {sum_c_ss} ≠ 0")
    _log_report(report)
    return report


def _log_report(report: InvariantReport):
    if report.failures:
        logger.error(f"b={report.b} 일관성 검사 실패: {report.failures}")
    elif report.findings:
        logger.warning(f"b={report.b} 정수성 관찰: {report.findings}")
    else:
        logger.info(f"b={report.b}: DT-bar={format_rational(report.dt_bar)}, "
                    f"DT-hat={format_rational(report.dt_hat)}, χ(M^s)={report.chi_stable}")
