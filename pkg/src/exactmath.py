"""
정확한 유리수 연산 계층

- HilbertPolynomial: m 에 대한 유리계수 2차 다항식 (사전식 비교 = m≫0 점근 비교)
- PowerSeries: q 에 대한 절단 형식 멱급수 (정확한 유리계수)
- eta 곱, Lambert 형 이중합 급수
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from sympy import Rational as SympyRational
from sympy import divisor_sigma, interpolate, symbols

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


class Ordering(IntEnum):
    """비교 결과"""
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @classmethod
    def of(cls, left, right) -> "Ordering":
        if left < right:
            return cls.LESS
        if left > right:
            return cls.GREATER
        return cls.EQUAL


def as_fraction(value: Number) -> Fraction:
    """int/Fraction/sympy Rational 을 Fraction 으로 변환"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, SympyRational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"정확한 유리수로 변환할 수 없는 값: {value!r}")


def format_rational(value: Number) -> str:
    """유리수를 '-639/4' 또는 '-162' 형태 문자열로 변환"""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_integral(value: Number) -> bool:
    return as_fraction(value).denominator == 1


@dataclass(frozen=True, order=True)
class HilbertPolynomial:
    """
    c2·m² + c1·m + c0

    dataclass 순서 비교가 (c2, c1, c0) 사전식 비교이고 이는 m≫0 에서의 비교와 같다.
    """
    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c2", as_fraction(self.c2))
        object.__setattr__(self, "c1", as_fraction(self.c1))
        object.__setattr__(self, "c0", as_fraction(self.c0))

    def __call__(self, m: Number) -> Fraction:
        m = as_fraction(m)
        return self.c2 * m * m + self.c1 * m + self.c0

    def __add__(self, other: "HilbertPolynomial") -> "HilbertPolynomial":
        return HilbertPolynomial(self.c2 + other.c2, self.c1 + other.c1, self.c0 + other.c0)

    def scale(self, factor: Number) -> "HilbertPolynomial":
        factor = as_fraction(factor)
        return HilbertPolynomial(self.c2 * factor, self.c1 * factor, self.c0 * factor)

    def half(self) -> "HilbertPolynomial":
        return self.scale(Fraction(1, 2))

    def reduced(self) -> "HilbertPolynomial":
        """최고차 계수로 나눈 정규화 다항식"""
        for lead in (self.c2, self.c1, self.c0):
            if lead != 0:
                return self.scale(1 / lead)
        return self

    def is_numerical(self) -> bool:
        """모든 정수 m 에서 정수값을 갖는지 (m=0,1,2 에서 확인하면 충분)"""
        return all(self(m).denominator == 1 for m in (0, 1, 2))

    def coefficients(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.c2, self.c1, self.c0)

    def __str__(self) -> str:
        terms = []
        for coeff, suffix in ((self.c2, "m^2"), (self.c1, "m"), (self.c0, "")):
            if coeff == 0:
                continue
            text = format_rational(coeff)
            terms.append(f"{text}{'*' + suffix if suffix else ''}")
        return " + ".join(terms) if terms else "0"


def compare_polys(p: HilbertPolynomial, q: HilbertPolynomial) -> Ordering:
    """m≫0 에서의 점근 순서 (계수 사전식 비교)"""
    return Ordering.of(p.coefficients(), q.coefficients())


def pair_compare(p: HilbertPolynomial, sp: int, q: HilbertPolynomial, sq: int) -> Ordering:
    """
    안정 쌍 비교: P + δ·ε 에서 ε 는 0 < ε ≪ 1 인 기호적 무한소.
    정규화 다항식을 먼저 비교하고, 같을 때만 섹션 플래그로 판정한다.
    """
    if sp not in (0, 1) or sq not in (0, 1):
        raise ValueError(f"섹션 플래그는 0 또는 1 이어야 합니다: {sp}, {sq}")
    first = compare_polys(p.reduced(), q.reduced())
    if first != Ordering.EQUAL:
        return first
    return Ordering.of(sp, sq)


class PowerSeries:
    """q 에 대한 절단 멱급수, 계수 a_0..a_N (모두 Fraction)"""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Iterable[Number], order: int):
        if order < 0:
            raise ValueError(f"절단 차수는 0 이상이어야 합니다: {order}")
        coeffs = [as_fraction(c) for c in coefficients][: order + 1]
        coeffs.extend([Fraction(0)] * (order + 1 - len(coeffs)))
        self._coefficients = tuple(coeffs)

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([1], order)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], order: int) -> "PowerSeries":
        """지수 목록 Σ q^e (차수 초과 항은 버림)"""
        coeffs = [0] * (order + 1)
        for e in exponents:
            if 0 <= e <= order:
                coeffs[e] += 1
        return cls(coeffs, order)

    @property
    def order(self) -> int:
        return len(self._coefficients) - 1

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return self._coefficients

    def __getitem__(self, n: int) -> Fraction:
        if n < 0 or n > self.order:
            raise IndexError(f"차수 범위 밖 계수 요청: q^{n} (N={self.order})")
        return self._coefficients[n]

    def _common(self, other: "PowerSeries") -> int:
        return min(self.order, other.order)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self._coefficients, min(order, self.order))

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = self._common(other)
        return PowerSeries((self[i] + other[i] for i in range(n + 1)), n)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = self._common(other)
        return PowerSeries((self[i] - other[i] for i in range(n + 1)), n)

    def __neg__(self) -> "PowerSeries":
        return PowerSeries((-c for c in self._coefficients), self.order)

    def __mul__(self, other: Union["PowerSeries", Number]) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            factor = as_fraction(other)
            return PowerSeries((c * factor for c in self._coefficients), self.order)
        n = self._common(other)
        result = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self[i]
            if a == 0:
                continue
            for j in range(n + 1 - i):
                result[i + j] += a * other[j]
        return PowerSeries(result, n)

    __rmul__ = __mul__

    def inverse(self) -> "PowerSeries":
        """a_0 ≠ 0 인 단원 급수의 역원"""
        a0 = self[0]
        if a0 == 0:
            raise ZeroDivisionError("상수항이 0 인 급수는 역원이 없습니다")
        inv = [Fraction(0)] * (self.order + 1)
        inv[0] = 1 / a0
        for n in range(1, self.order + 1):
            acc = sum((self[k] * inv[n - k] for k in range(1, n + 1)), Fraction(0))
            inv[n] = -acc / a0
        return PowerSeries(inv, self.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash(self._coefficients)

    def first_mismatch(self, other: "PowerSeries") -> int:
        """공통 차수까지 처음 다른 계수의 지수, 모두 같으면 -1"""
        for i in range(self._common(other) + 1):
            if self[i] != other[i]:
                return i
        return -1

    def to_list(self) -> List[str]:
        return [format_rational(c) for c in self._coefficients]

    def __repr__(self) -> str:
        shown = " + ".join(
            f"{format_rational(c)}q^{i}" for i, c in enumerate(self._coefficients) if c != 0
        )
        return f"PowerSeries({shown or '0'}, N={self.order})"


def eta_power_series(exponent: int, order: int) -> PowerSeries:
    """
    ∏_{n≥1} (1 - q^n)^e 를 q^N 까지 계산.

    로그 미분 점화식 f_n = (-e/n) Σ_{k=1..n} σ(k) f_{n-k} 사용 (σ = 약수합).
    """
    if order < 0:
        raise ValueError(f"절단 차수는 0 이상이어야 합니다: {order}")
    coeffs = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            acc += int(divisor_sigma(k)) * coeffs[n - k]
        coeffs[n] = Fraction(-exponent, n) * acc
    return PowerSeries(coeffs, order)


def _lambert_exponents(kind: str, order: int):
    """Lambert 형 이중합을 기하급수로 전개했을 때 나오는 지수들"""
    for m in range(1, order + 1):
        for n in range(1, order + 1):
            if kind == "a1":
                base, step = m * n, m + n - 1
            elif kind == "mu":
                base, step = m * n + m + n, m + n
            else:
                raise ValueError(f"알 수 없는 이중합 종류: {kind}")
            if base > order:
                break
            exponent = base
            while exponent <= order:
                yield exponent
                exponent += step


def lambert_double_sum(kind: str, order: int) -> PowerSeries:
    """
    kind="a1": Σ_{m,n≥1} q^{mn} / (1 - q^{m+n-1})
    kind="mu": Σ_{m,n≥1} q^{mn+m+n} / (1 - q^{m+n})
    """
    if order < 0:
        raise ValueError(f"절단 차수는 0 이상이어야 합니다: {order}")
    return PowerSeries.from_exponents(_lambert_exponents(kind, order), order)


def _to_sympy(value: Number) -> SympyRational:
    value = as_fraction(value)
    return SympyRational(value.numerator, value.denominator)


def fit_polynomial(points: Sequence[Tuple[int, Number]], at: Number) -> Fraction:
    """(x, y) 표본을 라그랑주 보간한 다항식의 x=at 값"""
    x = symbols("x")
    samples = [(px, _to_sympy(py)) for px, py in points]
    poly = interpolate(samples, x)
    return as_fraction(SympyRational(poly.subs(x, _to_sympy(at))))


def fit_quadratic(points: Sequence[Tuple[int, Number]]) -> HilbertPolynomial:
    """세 표본 점을 지나는 2차 다항식"""
    if len(points) != 3:
        raise ValueError(f"2차 보간에는 정확히 3개 표본이 필요합니다: {len(points)}")
    x = symbols("x")
    samples = [(px, _to_sympy(py)) for px, py in points]
    poly = interpolate(samples, x).as_poly(x)
    coeffs = [as_fraction(SympyRational(c)) for c in reversed(poly.all_coeffs())]
    coeffs.extend([Fraction(0)] * (3 - len(coeffs)))
    return HilbertPolynomial(coeffs[2], coeffs[1], coeffs[0])
