"""
국소 P² 랭크 2 DT/BPS 불변량 계산기 - 명령행 진입점

명령: dt, table, series, verify, cache
"""

import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import click
import colorlog
import pandas as pd
from dotenv import load_dotenv

# 로컬 모듈
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.constants import (
    CACHE_DIR_ENV,
    DEFAULT_EVEN_B,
    DEFAULT_ODD_B,
    DEFAULT_SERIES_ORDER,
    EXIT_CHECK_FAILED,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    OUTPUT_FORMATS,
    VERIFY_B_VALUES,
    default_a_floor,
)
from src.enumeration_cache import EnumerationCache
from src.exactmath import PowerSeries
from src.invariants import (
    SeriesBoundError,
    compute_report,
    mu_stable_series,
    series_k1,
    series_k2_a1,
    triangle_sum_series,
)
from src.sigma import SigmaError
from src.strata import TableRow, weighted_sums
from src.verification import run_verification, single_box_counts, summarize

# 환경 변수 로드
load_dotenv()

logger = logging.getLogger(__name__)

SERIES_KINDS = ("k1", "k2a1", "mu", "triangle", "mu-full")
TABLE_COLUMNS = ["index", "A", "deltas", "partitions", "E", "c_ss", "c_st", "multiplicity"]


def setup_logging(verbose: bool = False):
    """colorlog 기반 로깅 설정 (stderr)"""
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(
        "%(log_color)s%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


@dataclass
class RunConfig:
    """명령 실행 설정"""
    b_values: Tuple[int, ...] = field(default_factory=tuple)
    order: Optional[int] = DEFAULT_SERIES_ORDER
    n: Optional[int] = None
    a_floor: Optional[int] = None
    cache_dir: Optional[str] = None
    output_format: str = "json"
    use_cache: bool = True
    max_workers: Optional[int] = None

    def validate(self):
        if self.order is not None and self.order < 0:
            raise click.BadParameter(f"--order 는 0 이상이어야 합니다: {self.order}")
        bad = [b for b in self.b_values if b > 0]
        if bad:
            raise click.BadParameter(f"b 값은 0 이하여야 합니다: {bad}")
        if self.n is not None and self.n < 0:
            raise click.BadParameter(f"--n 은 0 이상이어야 합니다: {self.n}")
        if self.output_format not in OUTPUT_FORMATS:
            raise click.BadParameter(f"알 수 없는 출력 형식: {self.output_format}")

    def a_floor_for(self, b: int) -> int:
        return self.a_floor if self.a_floor is not None else default_a_floor(b)

    def cache(self) -> EnumerationCache:
        return EnumerationCache(self.cache_dir, max_workers=self.max_workers)


def rows_provider(config: RunConfig):
    cache = config.cache()

    def provide(b: int) -> List[TableRow]:
        return cache.rows_for(b, config.a_floor_for(b), use_cache=config.use_cache)

    return provide


# ---------------------------------------------------------------------------
# 출력
# ---------------------------------------------------------------------------

def _compact(value) -> str:
    return json.dumps(value, separators=(",", ":"))


def emit(records: Sequence[Dict], output_format: str, json_payload=None,
         columns: Optional[List[str]] = None):
    """json / csv / pretty 출력"""
    if output_format == "json":
        payload = list(records) if json_payload is None else json_payload
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True))
        return
    frame = pd.DataFrame(list(records), columns=columns)
    if output_format == "csv":
        click.echo(frame.to_csv(index=False, lineterminator="\n"), nl=False)
    else:
        click.echo(frame.to_string(index=False) if len(frame) else "(빈 표)")


def table_records(rows: Sequence[TableRow]) -> List[Dict]:
    records = []
    for index, row in enumerate(rows, start=1):
        data = row.xi.to_json()
        records.append({
            "index": index,
            "A": data["A"],
            "deltas": _compact(data["deltas"]),
            "partitions": _compact(data["pis"]),
            "E": _compact(data["E"]),
            "c_ss": row.c_ss,
            "c_st": row.c_st,
            "multiplicity": row.multiplicity,
        })
    return records


def flatten_report(data: Dict) -> Dict:
    flat = dict(data)
    flat["pi_n"] = ";".join(data["pi_n"]) if data["pi_n"] else ""
    flat["n_used"] = ";".join(str(n) for n in data["n_used"]) if data["n_used"] else ""
    flat["provenance"] = "; ".join(f"{k}={v}" for k, v in data["provenance"].items())
    flat["failures"] = "; ".join(data["failures"])
    flat["findings"] = "; ".join(data["findings"])
    return flat


def series_records(series: PowerSeries) -> List[Dict]:
    return [{"n": n, "coefficient": value} for n, value in enumerate(series.to_list())]


def build_series(kind: str, order: int) -> PowerSeries:
    if kind == "k1":
        return series_k1(order)
    if kind == "k2a1":
        return series_k2_a1(order)
    if kind == "triangle":
        return triangle_sum_series(order)
    mu = mu_stable_series(order)
    return mu.closed if kind == "mu" else mu.full_closed


# ---------------------------------------------------------------------------
# 명령
# ---------------------------------------------------------------------------

def common_options(func):
    func = click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS),
                        default="json", show_default=True, help="출력 형식")(func)
    func = click.option("--cache-dir", envvar=CACHE_DIR_ENV, default=None,
                        help=f"열거 캐시 디렉터리 (환경 변수 {CACHE_DIR_ENV})")(func)
    func = click.option("--no-cache", is_flag=True, help="캐시를 읽거나 쓰지 않음")(func)
    func = click.option("--a-floor", type=int, default=None, help="A 스윕 안전 하한")(func)
    func = click.option("--workers", type=int, default=None, help="열거 작업자 수")(func)
    return func


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="디버그 로그 출력")
def cli(verbose: bool):
    """국소 P² 랭크 2 반안정 층의 DT/BPS 불변량 계산기"""
    setup_logging(verbose)


def cmd_dt(config: RunConfig) -> int:
    """b 값마다 InvariantReport 하나. 모든 일관성 검사가 통과해야 0"""
    config.validate()
    provide = rows_provider(config)
    reports = []
    exit_code = EXIT_OK
    for b in config.b_values:
        try:
            report = compute_report(b, provide(b), config.n, order=config.order)
        except SigmaError as e:
            logger.error(f"b={b} 계산 실패: {e}")
            click.echo(f"오류: {e}", err=True)
            return EXIT_CHECK_FAILED
        if not report.ok:
            exit_code = EXIT_CHECK_FAILED
            for message in report.failures + report.findings:
                click.echo(f"b={b}: {message}", err=True)
        reports.append(report.to_json())
    records = reports if config.output_format == "json" else [flatten_report(r) for r in reports]
    emit(records, config.output_format)
    return exit_code


@cli.command("dt")
@click.option("--b", "b_values", type=int, multiple=True, help="b 값 (여러 번 지정 가능)")
@click.option("--n", type=int, default=None, help="쌍 불변량 수준 n (기본: 자동)")
@click.option("--order", type=int, default=None,
              help="보고서에 μ-안정 급수 계수를 넣을 때의 절단 차수")
@common_options
def dt_command(b_values, n, order, output_format, cache_dir, no_cache, a_floor, workers):
    """DT-bar, DT-hat, χ(M^s) 보고서"""
    config = RunConfig(tuple(b_values) or DEFAULT_EVEN_B + DEFAULT_ODD_B, order=order, n=n,
                       a_floor=a_floor, cache_dir=cache_dir, output_format=output_format,
                       use_cache=not no_cache, max_workers=workers)
    sys.exit(cmd_dt(config))


def cmd_table(config: RunConfig) -> int:
    config.validate()
    b = config.b_values[0]
    try:
        rows = rows_provider(config)(b)
    except SigmaError as e:
        click.echo(f"오류: {e}", err=True)
        return EXIT_CHECK_FAILED
    records = table_records(rows)
    sum_c_ss, sum_c_st = weighted_sums(rows)
    payload = {"b": b, "rows": records, "sum_c_ss": sum_c_ss, "sum_c_st": sum_c_st}
    emit(records, config.output_format, json_payload=payload, columns=TABLE_COLUMNS)
    return EXIT_OK


@cli.command("table")
@click.option("--b", "b_value", type=int, required=True, help="b 값")
@common_options
def table_command(b_value, output_format, cache_dir, no_cache, a_floor, workers):
    """D(P) 표 (A, Δ, 분할, E, c^ss, c^st, 중복도)"""
    config = RunConfig((b_value,), a_floor=a_floor, cache_dir=cache_dir,
                       output_format=output_format, use_cache=not no_cache, max_workers=workers)
    sys.exit(cmd_table(config))


@cli.command("series")
@click.option("--kind", type=click.Choice(SERIES_KINDS), default="k1", show_default=True)
@click.option("--order", type=int, default=DEFAULT_SERIES_ORDER, show_default=True)
@click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS), default="json")
def series_command(kind, order, output_format):
    """생성 급수 계수 출력"""
    config = RunConfig(order=order, output_format=output_format)
    config.validate()
    try:
        series = build_series(kind, order)
    except SeriesBoundError as e:
        click.echo(f"오류: {e}", err=True)
        sys.exit(EXIT_CHECK_FAILED)
    emit(series_records(series), output_format,
         json_payload={"kind": kind, "order": order, "coefficients": series.to_list()},
         columns=["n", "coefficient"])


def cmd_verify(config: RunConfig, single_box_only: bool = False) -> int:
    config.validate()
    if single_box_only:
        counts = single_box_counts()
        click.echo("차트별 원+2·점: " + ", ".join(str(c[0]) for c in counts))
        click.echo("차트별 가중 개수: " + ", ".join(c[2] for c in counts))
        ok = [c[0] for c in counts] == [40, 40, 40] and [c[2] for c in counts] == ["20"] * 3
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    try:
        results = run_verification(config.order, config.b_values, rows_provider(config), n=config.n)
    except (SigmaError, SeriesBoundError) as e:
        click.echo(f"오류: {e}", err=True)
        return EXIT_CHECK_FAILED
    for result in results:
        click.echo(click.style(result.line(), fg="green" if result.passed else "red"))
    summary = summarize(results)
    click.echo(f"통과 {summary['passed']}개, 실패 {summary['failed']}개")
    return EXIT_OK if summary["failed"] == 0 else EXIT_CHECK_FAILED


@cli.command("verify")
@click.option("--order", type=int, default=DEFAULT_SERIES_ORDER, show_default=True)
@click.option("--b", "b_values", type=int, multiple=True, help="검사할 짝수 b 값")
@click.option("--n", type=int, default=None, help="교차 공식 검사의 수준 n (기본: 자동)")
@click.option("--a-floor", type=int, default=None, help="A 스윕 안전 하한")
@click.option("--single-box", "--ex-toric", "single_box", is_flag=True,
              help="상자 하나짜리 예제의 차트 개수만 출력")
@click.option("--cache-dir", envvar=CACHE_DIR_ENV, default=None)
@click.option("--no-cache", is_flag=True)
def verify_command(order, b_values, n, a_floor, single_box, cache_dir, no_cache):
    """항등식/성질 검사 모음 실행"""
    config = RunConfig(tuple(b_values) or VERIFY_B_VALUES, order=order, n=n, a_floor=a_floor,
                       cache_dir=cache_dir, use_cache=not no_cache)
    sys.exit(cmd_verify(config, single_box_only=single_box))


@cli.group("cache")
def cache_group():
    """열거 캐시 관리"""


@cache_group.command("list")
@click.option("--cache-dir", envvar=CACHE_DIR_ENV, default=None)
def cache_list(cache_dir):
    entries = EnumerationCache(cache_dir).list_entries()
    click.echo(json.dumps(entries, ensure_ascii=False, indent=2, sort_keys=True))


@cache_group.command("clear")
@click.option("--cache-dir", envvar=CACHE_DIR_ENV, default=None)
def cache_clear(cache_dir):
    removed = EnumerationCache(cache_dir).clear()
    click.echo(f"캐시 파일 {removed}개 삭제")


@cache_group.command("warm")
@click.option("--b", "b_values", type=int, multiple=True)
@click.option("--cache-dir", envvar=CACHE_DIR_ENV, default=None)
@click.option("--a-floor", type=int, default=None)
def cache_warm(b_values, cache_dir, a_floor):
    """D(P) 를 미리 계산해 캐시에 저장"""
    config = RunConfig(tuple(b_values) or DEFAULT_EVEN_B, a_floor=a_floor, cache_dir=cache_dir)
    try:
        config.validate()
    except click.BadParameter as e:
        click.echo(f"설정 오류: {e.message}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    provide = rows_provider(config)
    for b in config.b_values:
        try:
            click.echo(f"b={b}: {len(provide(b))}개 행")
        except SigmaError as e:
            click.echo(f"오류: {e}", err=True)
            sys.exit(EXIT_CHECK_FAILED)


if __name__ == "__main__":
    cli()
