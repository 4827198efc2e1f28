"""
국소 P² 위 랭크 2 층 불변량 계산에 쓰이는 상수 설정 파일
"""

# 급수 절단 차수 기본값
DEFAULT_SERIES_ORDER = 30

# 기본 계산 대상 b 값 (P(m) = m² + 3m + 2 + b)
DEFAULT_EVEN_B = (0, -2, -4, -6, -8)
DEFAULT_ODD_B = (-1, -3, -5)

# verify 명령이 n-독립성/교차 공식 검사를 수행하는 b 값
VERIFY_B_VALUES = (0, -2, -4, -6)

# 홀수 b 일관성 검사 대상
VERIFY_ODD_B_VALUES = (-1, -3)

# 출력 형식
OUTPUT_FORMATS = ("json", "csv", "pretty")

# 캐시 설정
CACHE_SCHEMA_VERSION = 1
CACHE_DIR_ENV = "LOCALP2_CACHE_DIR"
DEFAULT_CACHE_DIR = "cache"

# 병렬 처리
DEFAULT_MAX_WORKERS = 4

# A 스윕: 연속으로 비어 있는 A 값이 이 개수에 도달하면 중단
EMPTY_STREAK_LIMIT = 2

# 방향 변수 이름
P_VARIABLES = ("p1", "p2", "p3")

# p_i = p_j 일치 조건이 가능한 쌍 (1-기반 인덱스)
INDEX_PAIRS = ((1, 2), (1, 3), (2, 3))

# 차트 j 는 (p_j, p_{j+1}) 을 사용 (p4 = p1)
CHART_DIRECTIONS = {1: (1, 2), 2: (2, 3), 3: (3, 1)}

# 유한체 오라클 기본 보간 표본 개수 여유분
ORACLE_EXTRA_SAMPLES = 1

# 종료 코드
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


def default_a_floor(b: int) -> int:
    """A 스윕의 안전 하한 기본값"""
    return -(abs(b) + 4)
