# arrangement.py

import logging
import threading
from itertools import combinations
from typing import Iterable, List, Sequence, Tuple

from cachetools import LRUCache, cached

from constants import MIN_DIVISORS
from errors import (
    EmptyNerveSingleton,
    IndexOutOfRange,
    LengthMismatch,
    NegativeCoefficient,
    TooFewDivisors,
)
from models import (
    Arrangement,
    Divisor,
    IndexPair,
    Nerve,
    ValidationReport,
    Violation,
    ViolationCode,
)

logger = logging.getLogger(__name__)

_VIOLATION_ERRORS = {
    ViolationCode.LENGTH_MISMATCH: LengthMismatch,
    ViolationCode.NEGATIVE_COEFFICIENT: NegativeCoefficient,
    ViolationCode.EMPTY_NERVE_SINGLETON: EmptyNerveSingleton,
    ViolationCode.TOO_FEW_DIVISORS: TooFewDivisors,
}


def validate_arrangement(arr: Arrangement, divisors: Sequence[Divisor]) -> ValidationReport:
    """
    Checks an arrangement and its divisors before any engine operation runs.

    Args:
        arr (Arrangement): Labels and nerve.
        divisors (Sequence[Divisor]): The divisors D_1..D_h.

    Returns:
        ValidationReport: Empty violation list when the input is well formed.
    """
    violations: List[Violation] = []
    n = arr.vertex_count

    if len(divisors) < MIN_DIVISORS:
        violations.append(Violation(
            code=ViolationCode.TOO_FEW_DIVISORS,
            message=f"At least {MIN_DIVISORS} divisors are required, got {len(divisors)}.",
        ))

    for position, divisor in enumerate(divisors):
        if len(divisor.coeffs) != n:
            violations.append(Violation(
                code=ViolationCode.LENGTH_MISMATCH,
                message=f"Divisor {position} has {len(divisor.coeffs)} coefficients but the arrangement has {n} supports.",
            ))
        for index, value in enumerate(divisor.coeffs):
            if value < 0:
                violations.append(Violation(
                    code=ViolationCode.NEGATIVE_COEFFICIENT,
                    message=f"Divisor {position} has coefficient {value} on support {index}.",
                ))

    covered = {index for members in arr.nerve.maximal for index in members}
    for index in range(n):
        if index not in covered:
            violations.append(Violation(
                code=ViolationCode.EMPTY_NERVE_SINGLETON,
                message=f"Nerve does not contain the singleton {{{arr.name_of(index)}}}.",
            ))

    if violations:
        logger.warning(f"Arrangement validation found {len(violations)} violation(s).")
    return ValidationReport(violations=tuple(violations))


def raise_for_violations(report: ValidationReport) -> None:
    """Raises the error class of the first violation, if any."""
    if report.ok:
        return
    first = report.violations[0]
    raise _VIOLATION_ERRORS[first.code](first.message)


def _check_indices(nerve: Nerve, indices: Iterable[int]) -> None:
    for index in indices:
        if index < 0 or index >= nerve.vertex_count:
            raise IndexOutOfRange(f"Index {index} is outside 0..{nerve.vertex_count - 1}.")


def nerve_contains(nerve: Nerve, subset: Iterable[int]) -> bool:
    """True iff the intersection of the supports in `subset` is nonempty."""
    members = frozenset(subset)
    _check_indices(nerve, members)
    if not members:
        return True
    return any(members.issubset(maximal) for maximal in nerve.maximal)


@cached(cache=LRUCache(maxsize=4096), lock=threading.Lock())
def nerve_pairs(nerve: Nerve) -> Tuple[IndexPair, ...]:
    """All pairs i < j with Y_i ∩ Y_j nonempty, sorted."""
    pairs = set()
    for maximal in nerve.maximal:
        pairs.update(combinations(maximal, 2))
    return tuple(sorted(pairs))


def min_divisor(first: Divisor, second: Divisor) -> Divisor:
    """Coefficient-wise minimum of two divisors."""
    if len(first.coeffs) != len(second.coeffs):
        raise LengthMismatch(
            f"Cannot take the minimum of divisors with {len(first.coeffs)} and {len(second.coeffs)} coefficients."
        )
    return Divisor(coeffs=tuple(min(a, b) for a, b in zip(first.coeffs, second.coeffs)))
