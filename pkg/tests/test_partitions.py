import pytest

from src.partitions import (
    InvalidPartitionError,
    Partition2D,
    adjacent,
    connected_components,
    count_partition_tuples,
    enumerate_partitions,
    partition_tuples,
)


def test_enumerate_partitions_order():
    parts = enumerate_partitions(4)
    assert len(parts) == 5
    assert parts[0] == Partition2D((4,)), "사전식 내림차순이어야 함"
    assert parts[-1] == Partition2D((1, 1, 1, 1))
    assert enumerate_partitions(0) == [Partition2D()]


def test_invalid_partition():
    with pytest.raises(InvalidPartitionError):
        Partition2D((1, 2))
    with pytest.raises(InvalidPartitionError):
        Partition2D((0,))


def test_transpose_and_cells():
    p = Partition2D((3, 1))
    assert p.transpose() == Partition2D((2, 1, 1))
    assert p.cells == frozenset({(0, 0), (1, 0), (2, 0), (0, 1)})
    assert Partition2D.from_cells(p.shifted_cells((3, 4)), origin=(3, 4)) == p
    assert p.render() == "[3,1]"


def test_from_cells_rejects_non_partition():
    with pytest.raises(InvalidPartitionError):
        Partition2D.from_cells({(1, 0)})


def test_partition_tuple_counts():
    assert [count_partition_tuples(n, 3) for n in range(4)] == [1, 3, 9, 22], "χ(Hilb^n(P²)) 와 같아야 함"
    assert count_partition_tuples(1, 6) == 6
    assert len(list(partition_tuples(2, 3))) == 9


def test_adjacency_is_edge_sharing():
    assert adjacent({(0, 0)}, {(1, 0)})
    assert not adjacent({(0, 0)}, {(1, 1)}), "꼭짓점 접촉은 인접이 아님"


def test_connected_components():
    components = connected_components({(3, 3), (0, 0), (1, 0), (1, 1)})
    assert len(components) == 2
    assert (0, 0) in components[0], "최소 칸 기준 정렬"
    assert components[1] == frozenset({(3, 3)})


def test_partition_tuples_are_distinct_and_complete():
    assert [len(enumerate_partitions(n)) for n in range(6)] == [1, 1, 2, 3, 5, 7]
    for total in range(4):
        tuples = list(partition_tuples(total, 6))
        assert len(tuples) == len(set(tuples)) == count_partition_tuples(total, 6)
        assert all(sum(p.size for p in combo) == total for combo in tuples)
    assert list(partition_tuples(-1, 6)) == []
