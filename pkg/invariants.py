# invariants.py

import logging
from typing import List, Optional, Sequence, Tuple

from arrangement import nerve_pairs
from errors import EqualIndices, IndexOutOfRange, LengthMismatch
from models import Divisor, ExtPair, IndexPair, Nerve, SigmaReport

logger = logging.getLogger(__name__)


def _pair_value(diff_i: int, diff_j: int) -> Optional[Tuple[int, int]]:
    # A zero difference is never sign-opposite.
    if diff_i * diff_j >= 0:
        return None
    x, y = abs(diff_i), abs(diff_j)
    return (max(x, y), min(x, y))


def sigma_ij(d1: Divisor, d2: Divisor, i: int, j: int) -> ExtPair:
    """
    Value of σ_ij(D1, D2): the lexicographic max of (|a_i-b_i|, |a_j-b_j|) and
    its swap when the two differences have strictly opposite signs, Bottom
    otherwise.
    """
    n = len(d1.coeffs)
    if len(d2.coeffs) != n:
        raise LengthMismatch(f"Divisors have {n} and {len(d2.coeffs)} coefficients.")
    if i == j:
        raise EqualIndices(f"sigma_ij needs two distinct supports, got ({i},{j}).")
    for index in (i, j):
        if index < 0 or index >= n:
            raise IndexOutOfRange(f"Index {index} is outside 0..{n - 1}.")
    return ExtPair(value=_pair_value(d1.coeffs[i] - d2.coeffs[i], d1.coeffs[j] - d2.coeffs[j]))


def sigma(d1: Divisor, d2: Divisor, nerve: Nerve) -> SigmaReport:
    """
    Computes σ(D1, D2) over the pairs of supports that meet, and τ, the number
    of pairs i < j achieving it.

    Args:
        d1 (Divisor): First divisor.
        d2 (Divisor): Second divisor.
        nerve (Nerve): Nonempty intersections of the supports.

    Returns:
        SigmaReport: σ, τ and the achieving pairs in ascending order.
    """
    if len(d1.coeffs) != nerve.vertex_count or len(d2.coeffs) != nerve.vertex_count:
        raise LengthMismatch(
            f"Divisor lengths {len(d1.coeffs)}, {len(d2.coeffs)} do not match {nerve.vertex_count} supports."
        )
    diffs = [a - b for a, b in zip(d1.coeffs, d2.coeffs)]
    best: Optional[Tuple[int, int]] = None
    achieving: List[IndexPair] = []
    for i, j in nerve_pairs(nerve):
        value = _pair_value(diffs[i], diffs[j])
        if value is None:
            continue
        if best is None or value > best:
            best = value
            achieving = [(i, j)]
        elif value == best:
            achieving.append((i, j))
    return SigmaReport(sigma=ExtPair(value=best), tau=len(achieving), achieving_pairs=tuple(achieving))


def is_locally_principal(d1: Divisor, d2: Divisor, nerve: Nerve) -> bool:
    """True iff 𝓘_{D1} + 𝓘_{D2} is principal at every point, i.e. σ = Bottom."""
    return sigma(d1, d2, nerve).sigma.is_bottom


def is_sum_locally_principal(divisors: Sequence[Divisor], nerve: Nerve) -> bool:
    """
    True iff the sum of the ideals of all `divisors` is locally principal:
    on every maximal nerve set one divisor is componentwise <= all others.
    """
    if not divisors:
        return True
    for maximal in nerve.maximal:
        found = False
        for candidate in divisors:
            if all(
                candidate.coeffs[k] <= other.coeffs[k]
                for other in divisors
                for k in maximal
            ):
                found = True
                break
        if not found:
            logger.debug(f"Sum is not principal along nerve set {list(maximal)}.")
            return False
    return True
