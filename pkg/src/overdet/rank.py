"""Jacobian construction and exact rank certification of candidate solutions.

A candidate jet point solves the prolonged system when it zeroes every
equation; it is certified isolated (with respect to the occurring unknowns)
when the Jacobian of the system at the point has rank equal to the number of
jet unknowns that actually occur.  All linear algebra is exact over the
rationals via fraction-free elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

from .errors import MissingAssignmentError, NotASolutionError
from .jets import ProlongedSystem

ScalarPoint = Mapping[str, Fraction]


@dataclass
class JacobianMatrix:
    """Partial derivatives of every equation by every jet unknown, at a point."""

    entries: list[list[Fraction]]  # row per equation index, column per unknown index
    equation_indices: tuple[int, ...]
    unknown_indices: tuple[int, ...]


@dataclass(frozen=True)
class RankReport:
    rank: int
    n_s_real: int
    n_h: int
    n_s: int
    certified: bool
    bound_11_holds: bool


def jacobian(prolonged: ProlongedSystem, point: ScalarPoint) -> JacobianMatrix:
    """Evaluate every first partial with respect to the jet unknowns exactly."""
    for equation in prolonged.equations.values():
        for var in equation.variables():
            if var not in point:
                raise MissingAssignmentError(var)
    unknowns = prolonged.unknowns()
    columns = sorted(unknowns)
    rows = sorted(prolonged.equations)
    entries = []
    for row in rows:
        equation = prolonged.equations[row]
        entries.append(
            [
                equation.partial_derivative(unknowns[col].name).evaluate(point)
                for col in columns
            ]
        )
    return JacobianMatrix(
        entries=entries, equation_indices=tuple(rows), unknown_indices=tuple(columns)
    )


def exact_rank(matrix: JacobianMatrix | list[list[Fraction]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    rows = matrix.entries if isinstance(matrix, JacobianMatrix) else matrix
    if not rows or not rows[0]:
        return 0
    # clear denominators row by row; scaling by a nonzero rational keeps rank
    work: list[list[int]] = []
    for row in rows:
        scale = lcm(*(value.denominator for value in row)) if row else 1
        work.append([int(value * scale) for value in row])
    n_rows, n_cols = len(work), len(work[0])
    rank = 0
    previous_pivot = 1
    for col in range(n_cols):
        pivot_row = next(
            (r for r in range(rank, n_rows) if work[r][col] != 0), None
        )
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        pivot = work[rank][col]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                work[r][c] = (pivot * work[r][c] - work[r][col] * work[rank][c]) // previous_pivot
            work[r][col] = 0
        previous_pivot = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


def count_active_unknowns(prolonged: ProlongedSystem) -> int:
    """Number of jet unknowns with a not-identically-zero partial somewhere.

    Over the rationals a variable occurs in a polynomial exactly when some
    partial with respect to it is nonzero, so an occurrence scan suffices.
    """
    occurring = prolonged.occurring_jets()
    return sum(
        1 for _, jet in prolonged.unknowns().items() if jet.name in occurring
    )


def active_unknown_bound(prolonged: ProlongedSystem) -> Fraction:
    """Upper estimate for the active-unknown count from the system shape:
    equations * p/(p+n) * (1 + sum of reciprocal orders)."""
    codec = prolonged.codec
    reciprocal_sum = sum((Fraction(1, order) for order in codec.orders), Fraction(0))
    return (
        Fraction(codec.equation_count)
        * Fraction(codec.p, codec.p + codec.n)
        * (1 + reciprocal_sum)
    )


def certify(prolonged: ProlongedSystem, point: ScalarPoint) -> RankReport:
    """Check the point solves every equation, then compare Jacobian rank with
    the number of actually occurring unknowns."""
    for index, equation in prolonged.equation_items():
        value = equation.evaluate(point)
        if value != 0:
            raise NotASolutionError(index, value)
    rank = exact_rank(jacobian(prolonged, point))
    n_s_real = count_active_unknowns(prolonged)
    return RankReport(
        rank=rank,
        n_s_real=n_s_real,
        n_h=prolonged.n_h,
        n_s=prolonged.n_s,
        certified=rank == n_s_real,
        bound_11_holds=Fraction(n_s_real) <= active_unknown_bound(prolonged),
    )
