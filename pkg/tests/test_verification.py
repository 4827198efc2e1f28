from src.enumeration_cache import EnumerationCache
from src.verification import (
    single_box_check,
    single_box_counts,
    run_verification,
    series_checks,
    summarize,
)


def test_series_checks_pass():
    results = series_checks(10)
    failed = [r.line() for r in results if not r.passed]
    assert not failed, f"급수 검사 실패: {failed}"


def test_single_box_sample():
    assert [c[0] for c in single_box_counts()] == [40, 40, 40]
    assert single_box_check().passed


def test_run_verification_small_b(tmp_path):
    cache = EnumerationCache(str(tmp_path), max_workers=2)
    results = run_verification(8, (0, -2), lambda b: cache.rows_for(b, -(abs(b) + 4)),
                               odd_b_values=(-1,))
    failed = [r.line() for r in results if not r.passed]
    assert not failed, f"검사 실패: {failed}"
    assert summarize(results) == {"passed": len(results), "failed": 0}
