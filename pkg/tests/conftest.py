"""Shared corpus fixtures: the desk-scale algebras exercised everywhere."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aspec.fields import GF, QQ
from aspec.polyquot import from_poly_quotient
from aspec.quiver import QuiverPresentation, from_quiver


def make_field_k(field=QQ):
    """k itself: one vertex, no arrows."""
    return from_quiver(QuiverPresentation(["1"], []), field=field)


def make_k_times_k(field=QQ):
    return from_quiver(QuiverPresentation(["1", "2"], []), field=field)


def make_dual_numbers(field=QQ):
    """k[x]/(x^2)."""
    return from_poly_quotient(field, ["x"], [{(2,): field.one}])


def make_kx3(field=QQ):
    return from_poly_quotient(field, ["x"], [{(3,): field.one}])


def make_a2(field=QQ):
    return from_quiver(
        QuiverPresentation(["1", "2"], [("a", "1", "2")]), field=field)


def make_a3_zero_rel(field=QQ):
    return from_quiver(
        QuiverPresentation(
            ["1", "2", "3"],
            [("a", "1", "2"), ("b", "2", "3")],
            relations=[[(field.one, ["a", "b"])]]),
        field=field)


def make_split_quadratic(field=QQ):
    """k[x]/(x^2 - x) = k x k with a non-idempotent basis."""
    rel = {(2,): field.one, (1,): field.neg(field.one)}
    return from_poly_quotient(field, ["x"], [rel])


def make_lower_triangular(field=QQ):
    """2x2 lower-triangular matrices on basis (e11, e22, e21)."""
    z = [field.zero] * 3
    one = field.one

    def vec(i):
        v = list(z)
        v[i] = one
        return v

    zero = list(z)
    # e11*e11=e11, e22*e22=e22, e21*e11=e21, e22*e21=e21, rest zero
    # (row convention: table[i][j] = b_i * b_j; e21 maps row 2 to col 1)
    table = [
        [vec(0), zero, zero],
        [zero, vec(1), vec(2)],
        [vec(2), zero, zero],
    ]
    unit = [one, one, field.zero]
    from aspec.algebra import from_structure_constants
    return from_structure_constants(
        field, ["e11", "e22", "e21"], table, unit,
        idempotents=[vec(0), vec(1)])


def corpus(field=QQ):
    """The acceptance corpus in a fixed order."""
    return [
        ("k", make_field_k(field)),
        ("k_x_k", make_k_times_k(field)),
        ("dual_numbers", make_dual_numbers(field)),
        ("kx_cubed", make_kx3(field)),
        ("a2", make_a2(field)),
        ("a3_zero_rel", make_a3_zero_rel(field)),
        ("split_quadratic", make_split_quadratic(field)),
        ("lower_triangular", make_lower_triangular(field)),
    ]


@pytest.fixture
def qq():
    return QQ


@pytest.fixture
def f5():
    return GF(5)
