import os
import sys

import pytest

# 프로젝트 루트를 import 경로에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.partitions import Partition2D  # noqa: E402
from src.sigma import DeltaFamilyData  # noqa: E402

def xi(A, deltas, pis, E=()):
    """테스트용 Ξ 생성 (분할은 행 길이 튜플로 지정)"""
    return DeltaFamilyData(A, deltas, tuple(Partition2D(tuple(p)) for p in pis), frozenset(E))


@pytest.fixture
def single_box():
    # b=-2, 원점 차트에 상자 하나
    return xi(-2, (2, 1, 1), [(1,), (), (), (), (), ()])


@pytest.fixture
def b2_rows_data():
    # b=-2 의 네 정준 행 (E = ∅)
    return [
        xi(-1, (1, 1, 0), [(), (), (1,), (1,), (), ()]),
        xi(-1, (1, 1, 0), [(), (), (), (), (1,), (1,)]),
        xi(-2, (2, 1, 1), [(1,), (), (), (), (), ()]),
        xi(-2, (2, 1, 1), [(), (), (), (), (), (1,)]),
    ]


@pytest.fixture
def two_free_xi():
    # b=-4, 자유 성분 두 개
    return xi(-1, (1, 1, 0), [(), (), (1,), (1,), (1,), (1,)])


@pytest.fixture
def mixed_boxes_xi():
    return xi(-1, (1, 1, 0), [(), (), (1,), (2,), (1,), ()])


@pytest.fixture
def stable_column_xi():
    return xi(-1, (1, 1, 0), [(), (), (1,), (3,), (), ()])


@pytest.fixture
def coincident_xi():
    # b=-4, p2 = p3 일치
    return xi(-2, (2, 1, 1), [(2,), (1, 1), (), (), (), ()], E=[(2, 3)])


@pytest.fixture
def strict_triangle_k1():
    # b=-8, 엄밀 삼각 부등식, 자유 성분 하나
    return xi(-3, (2, 2, 2), [(2,), (1, 1, 1), (), (), (), ()])
