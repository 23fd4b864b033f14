from math import gcd

import pytest

from qairy.classify import (
    AppendedStructure,
    append_one_cycle,
    classification_table,
    classify,
    enumerate_admissible,
    forbidden_partition_witness,
    structure_bounds,
    subalgebra_bound,
)
from qairy.dilaton import root_of_unity_shifts
from qairy.partitions import Partition, lambda_good_set
from qairy.scalar import make_root_power, rational
from qairy.weyl import Window
from qairy.wmodes import TwistSpec


def test_subalgebra_bound_examples():
    assert subalgebra_bound(2, 1, 1, 0) == 1
    assert subalgebra_bound(2, 1, 2, 1) == 2
    assert subalgebra_bound(1, 2, 1, 1) == 0


def test_structure_bounds_zero_slot():
    assert structure_bounds(2, 2, 1) == {1: 0, 2: 1, 3: 2, 4: 2}
    assert structure_bounds(2, 2, 1, zero_slot=False)[1] == 1


def test_classify_examples():
    v = classify(2, 2, 1, (make_root_power(4, 1), -1))
    assert v.admissible and v.case_label == "b" and v.partition == Partition((3, 1))
    assert "sum_K0_zero" in v.requirements and "shift_matrix_invertible" in v.requirements

    v = classify(1, 3, 2, (1, 2, 3))
    assert not v.admissible and v.reason == "NoLambdaGoodPartition"

    w6 = make_root_power(6, 1)
    v = classify(3, 2, 2, (w6, w6 ** 2))
    assert v.admissible and v.case_label == "d" and v.partition == Partition((2, 2, 1, 1))

    v = classify(4, 2, 2, (1, 1))
    assert not v.admissible and v.reason == "NonCoprime"


def test_classify_rejections_with_data():
    assert classify(2, 2, 1, (1, 0)).reason == "ZeroShift"
    assert classify(1, 2, 1, (5, 5)).reason == "SingularShiftMatrix"
    assert classify(2, 3, 3).reason == "STooLarge"
    assert classify(1, 2, 3).reason == "STooLarge"
    # case (a) does not ask for nonzero shifts
    assert classify(1, 2, 1, (0, 1)).admissible


def test_classify_default_roots():
    assert classify(2, 2, 1) == classify(2, 2, 1, root_of_unity_shifts(2, 2)[0])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_partition_shapes(n):
    assert classify(1, n, 1).partition == Partition((2,) + (1,) * (n - 2))
    for rho in (2, 3, 4):
        assert classify(rho, n, 1).partition == Partition((rho + 1,) + (rho,) * (n - 2) + (rho - 1,))


def test_enumerate_small():
    rows = enumerate_admissible(4)
    keys = {(rho, n, s) for rho, n, s, *_ in rows}
    assert keys == {(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 2, 1), (1, 2, 2)}
    assert (2, 2, 2) not in keys and (1, 2, 3) not in keys
    assert rows == sorted(rows, key=lambda t: t[:3])
    assert enumerate_admissible(4) == rows


def test_table_is_consistent_with_enumeration():
    table = classification_table(8)
    admissible = [(v.rho, v.n, v.s) for v in table if v.admissible]
    assert admissible == [row[:3] for row in enumerate_admissible(8)]
    for v in table:
        assert v.admissible == (v.case_label != "none")
        if v.rho > 1 and gcd(v.s, v.rho) > 1:
            assert v.reason == "NonCoprime"


def test_lambda_good_matches_bounds():
    for rho, n, s, case, parts in enumerate_admissible(12):
        good = lambda_good_set(Partition(tuple(parts)))
        assert good.bounds == structure_bounds(rho, n, s)


def test_forbidden_witness_examples():
    w = forbidden_partition_witness(5, 3)
    assert w["A"] == [2, 2, 1] and w["sum_A"] == 5
    assert w["failed"] == "A_2 = A_1 - 1"
    w = forbidden_partition_witness(7, 3)
    assert w["A"] == [3, 2, 2] and w["failed"] == "A_s + 1 = A_1 - 1"


@pytest.mark.parametrize("rho,s", [(r, s) for r in range(4, 14) for s in range(3, r) if gcd(r, s) == 1])
def test_forbidden_witness_sums(rho, s):
    w = forbidden_partition_witness(rho, s)
    assert w["sum_A"] == rho
    assert not w["a_times_s_equals_rho"]
    assert w["failed"]


def test_append_four_cases():
    # (a): lambda~ = lambda + 1
    v = append_one_cycle(Partition((2, 1)), [1, 1, 1], [1, 2, 3])
    assert v.accepted and v.partition == Partition((2, 1, 1))
    assert v.bounds[4] == 4 - 3
    # (b)
    v = append_one_cycle(Partition((3, 1)), [1, 1], [make_root_power(4, 1), -1])
    assert v.accepted and v.partition.r == 5
    # (c)
    v = append_one_cycle(Partition((1, 1)), [2, 2], [1, 2])
    assert not v.accepted and v.reason == "NoPartitionExtension"
    assert [w["lambda_r_plus_1"] for w in v.witness] == [3]
    # (d)
    v = append_one_cycle(Partition((2, 2, 1, 1)), [2, 2], [1, 2])
    assert not v.accepted and [w["lambda_r_plus_1"] for w in v.witness] == [5]


def test_append_zero_shift():
    v = append_one_cycle(Partition((2, 1)), [1, 1], [1, rational(0)])
    assert not v.accepted and v.reason == "ZeroShift"


def test_appended_structure_airy_shape():
    Q, _ = root_of_unity_shifts(1, 2)
    spec = TwistSpec(1, 2, 1, Q)
    v = append_one_cycle(classify(1, 2, 1).partition, [1, 1], Q, structure_bounds(1, 2, 1))
    W = 4
    ops = AppendedStructure(spec, Window(W, 3)).airy_operators(v.bounds)
    # the new cycle has weight scale rho, so it has W // rho variables
    assert len(ops) == 2 * W + W
    for (j, q), op in ops.items():
        assert not op.degree_part(0)
        assert op.degree_part(1).terms == {(2, (), ((j, q),)): 1}
