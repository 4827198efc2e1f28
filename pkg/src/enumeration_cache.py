#!/usr/bin/env python3
"""
D(P) 열거 결과 디스크 캐시

b 값마다 JSON 파일 하나 (schema_version, b, a_floor, rows).
스키마 버전이 다르거나 jsonschema 검증에 실패하면 캐시를 무시하고 다시 계산한다.
"""

import json
import logging
import os
from typing import Dict, List, Optional, Sequence

import jsonschema
from dotenv import load_dotenv

from src.constants import CACHE_DIR_ENV, CACHE_SCHEMA_VERSION, DEFAULT_CACHE_DIR
from src.sigma import DeltaFamilyEnumerator
from src.strata import TableRow, build_table_rows

# 환경 변수 로드
load_dotenv()

# 로깅 설정
logger = logging.getLogger(__name__)

PARTITION_SCHEMA = {"type": "array", "items": {"type": "integer", "minimum": 1}}

CACHE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "b", "a_floor", "rows"],
    "properties": {
        "schema_version": {"type": "integer"},
        "b": {"type": "integer", "maximum": 0},
        "a_floor": {"type": "integer"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["A", "deltas", "pis", "E", "c_ss", "c_st", "multiplicity"],
                "properties": {
                    "A": {"type": "integer", "maximum": 0},
                    "deltas": {"type": "array", "items": {"type": "integer", "minimum": 0},
                               "minItems": 3, "maxItems": 3},
                    "pis": {"type": "array", "items": PARTITION_SCHEMA, "minItems": 6, "maxItems": 6},
                    "E": {"type": "array",
                          "items": {"type": "array", "items": {"type": "integer", "minimum": 1,
                                                               "maximum": 3},
                                    "minItems": 2, "maxItems": 2}},
                    "c_ss": {"type": "integer"},
                    "c_st": {"type": "integer"},
                    "multiplicity": {"type": "integer", "enum": [1, 3, 6]},
                },
            },
        },
    },
}


def resolve_cache_dir(cache_dir: Optional[str] = None) -> str:
    """명시 인자 > 환경 변수 > 기본값"""
    return cache_dir or os.getenv(CACHE_DIR_ENV) or DEFAULT_CACHE_DIR


class EnumerationCache:
    """D(P) 표 행 캐시"""

    def __init__(self, cache_dir: Optional[str] = None, max_workers: Optional[int] = None):
        """초기화"""
        self.cache_dir = resolve_cache_dir(cache_dir)
        self.max_workers = max_workers
        os.makedirs(self.cache_dir, exist_ok=True)

    def get_cache_file(self, b: int) -> str:
        return os.path.join(self.cache_dir, f"dp_b{b}.json")

    def get_cached_rows(self, b: int, a_floor: int) -> Optional[List[TableRow]]:
        """캐시된 표 행 조회 (없거나 무효면 None)"""
        cache_file = self.get_cache_file(b)
        if not os.path.exists(cache_file):
            return None
        try:
            with open(cache_file, "r", encoding="utf-8") as f:
                cached = json.load(f)
            jsonschema.validate(cached, CACHE_SCHEMA)
            if cached["schema_version"] != CACHE_SCHEMA_VERSION:
                logger.warning(f"캐시 스키마 버전 불일치 ({cached['schema_version']}), 다시 계산: {cache_file}")
                return None
            if cached["b"] != b or cached["a_floor"] != a_floor:
                logger.warning(f"캐시 매개변수 불일치, 다시 계산: {cache_file}")
                return None
            rows = [TableRow.from_json(row) for row in cached["rows"]]
            logger.debug(f"캐시에서 D(P) 조회: b={b}, {len(rows)}개 행")
            return rows
        except jsonschema.ValidationError as e:
            logger.warning(f"캐시 스키마 검증 실패, 다시 계산: {cache_file} ({e.message})")
        except Exception as e:
            logger.warning(f"캐시 조회 중 오류: {e}")
        return None

    def cache_rows(self, b: int, a_floor: int, rows: Sequence[TableRow]):
        """표 행 캐싱"""
        payload = {
            "schema_version": CACHE_SCHEMA_VERSION,
            "b": b,
            "a_floor": a_floor,
            "rows": [row.to_json() for row in rows],
        }
        try:
            cache_file = self.get_cache_file(b)
            with open(cache_file, "w", encoding="utf-8") as f:
                json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
            logger.debug(f"D(P) 캐싱: b={b}, {len(rows)}개 행")
        except Exception as e:
            logger.warning(f"캐싱 중 오류: {e}")

    def rows_for(self, b: int, a_floor: int, use_cache: bool = True) -> List[TableRow]:
        """캐시 우선, 없으면 열거 후 저장"""
        if use_cache:
            cached = self.get_cached_rows(b, a_floor)
            if cached is not None:
                return cached
        entries = DeltaFamilyEnumerator(max_workers=self.max_workers).enumerate(b, a_floor)
        rows = build_table_rows(entries)
        if use_cache:
            self.cache_rows(b, a_floor, rows)
        return rows

    def list_entries(self) -> List[Dict]:
        entries = []
        for name in sorted(os.listdir(self.cache_dir)):
            if not (name.startswith("dp_b") and name.endswith(".json")):
                continue
            path = os.path.join(self.cache_dir, name)
            try:
                with open(path, "r", encoding="utf-8") as f:
                    cached = json.load(f)
                entries.append({"file": name, "b": cached.get("b"),
                                "schema_version": cached.get("schema_version"),
                                "rows": len(cached.get("rows", []))})
            except Exception as e:
                logger.warning(f"캐시 파일 읽기 실패: {path} ({e})")
        return entries

    def clear(self) -> int:
        removed = 0
        for entry in self.list_entries():
            os.remove(os.path.join(self.cache_dir, entry["file"]))
            removed += 1
        logger.info(f"캐시 파일 {removed}개 삭제")
        return removed
