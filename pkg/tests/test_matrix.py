import random

import numpy as np
import pytest
from hypothesis import given

from semicirc.errors import FormatError
from semicirc.matrix import (Matrix01, ceil_log2, format_matrix, log_threshold, parse_matrix,
                             random_matrix, random_sparse_zeros)

from helpers import matrices


def test_ceil_log2_small_values():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 8, 9, 4096, 4097)] == [0, 1, 2, 2, 3, 3, 4, 12, 13]
    assert log_threshold(1) == 1 and log_threshold(2) == 1 and log_threshold(16) == 4


def test_constructors_agree():
    dense = [[1, 0, 1], [1, 1, 1], [0, 0, 1]]
    a = Matrix01.from_dense(dense)
    assert a == Matrix01.from_zeros(3, 3, [(0, 1), (2, 0), (2, 1)])
    assert a == Matrix01.from_rows(3, [[1], [], [1, 0]])
    assert np.array_equal(a.to_dense(), dense)
    assert a.z == 3 and a.u == 6
    assert a.row_support(2) == [2]


def test_transpose_and_empty_rows():
    a = Matrix01.from_dense([[0, 0], [1, 0]])
    assert a.empty_rows() == [0]
    assert a.transpose() == Matrix01.from_dense([[0, 1], [0, 0]])


def test_validation():
    with pytest.raises(ValueError):
        Matrix01(1, 3, ((2, 1),))
    with pytest.raises(ValueError):
        Matrix01(1, 3, ((3,),))
    with pytest.raises(ValueError):
        Matrix01.from_zeros(2, 2, [(0, 0), (0, 0)])


@given(matrices(allow_empty=True))
def test_format_round_trip(a):
    assert parse_matrix(format_matrix(a)) == a


@pytest.mark.parametrize("text,line", [
    ("semicirc-matrix v2\ndims 1 1\n", 1),
    ("semicirc-matrix v1\ndims 2\n", 2),
    ("semicirc-matrix v1\ndims 2 2\nzero 0 2\n", 3),
    ("semicirc-matrix v1\ndims 2 2\nzero 0 1\n# fine\nzero 0 1\n", 5),
    ("semicirc-matrix v1\ndims 2 2\nzero 0 -1\n", 3),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as err:
        parse_matrix(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}:")


def test_random_generators():
    rng = random.Random(3)
    a = random_matrix(10, 8, 3, rng)
    assert all(len(r) == 3 for r in a.zeros)
    b = random_sparse_zeros(5, 4, 15, rng)
    assert b.z == 15 and not b.empty_rows()
    with pytest.raises(ValueError):
        random_sparse_zeros(2, 2, 3, rng)
