# blowup_engine.py

import logging
from typing import List, Optional, Sequence, Tuple

from arrangement import min_divisor, nerve_contains
from constants import DEFAULT_MAX_STEPS, MIN_DIVISORS
from errors import (
    AlreadyPrincipal,
    EmptyCenter,
    EqualIndices,
    IndexOutOfRange,
    InvariantViolation,
    StepLimitExceeded,
    TooFewDivisors,
)
from invariants import is_sum_locally_principal, sigma
from models import (
    Arrangement,
    BlowupState,
    Certificate,
    Divisor,
    DivisorLabel,
    IndexPair,
    Nerve,
    SigmaReport,
    Trace,
    TraceStep,
)

logger = logging.getLogger(__name__)


def _check_center(vertex_count: int, center: IndexPair) -> Tuple[int, int]:
    i, j = center
    if i == j:
        raise EqualIndices(f"A center needs two distinct supports, got ({i},{j}).")
    for index in (i, j):
        if index < 0 or index >= vertex_count:
            raise IndexOutOfRange(f"Center index {index} is outside 0..{vertex_count - 1}.")
    return (min(i, j), max(i, j))


def select_center(state: BlowupState, d1: Divisor, d2: Divisor) -> IndexPair:
    """
    Picks the lexicographically largest pair (k, l), k < l, among the pairs
    achieving σ(D1, D2).

    Raises:
        AlreadyPrincipal: if σ is Bottom.
    """
    return _center_of(sigma(d1, d2, state.arrangement.nerve))


def _center_of(report: SigmaReport) -> IndexPair:
    if report.sigma.is_bottom:
        raise AlreadyPrincipal("sigma is Bottom; there is no center to blow up.")
    return max(report.achieving_pairs)


def pullback_divisor(divisor: Divisor, center: IndexPair) -> Divisor:
    """Keeps every coefficient on the proper transforms and appends a_i + a_j for E."""
    i, j = _check_center(len(divisor.coeffs), center)
    return Divisor(coeffs=divisor.coeffs + (divisor.coeffs[i] + divisor.coeffs[j],))


def blowup_nerve(nerve: Nerve, center: IndexPair) -> Nerve:
    """
    Nerve of {Ỹ_0, ..., Ỹ_{n-1}, E} after blowing up Y_i ∩ Y_j.

    Old sets stay nonempty unless they contain both i and j; a set A ∪ {E} is
    nonempty iff A ∪ {i, j} was nonempty and A does not contain both i and j.
    A maximal set M without both i and j stays maximal; a maximal M containing
    both is replaced by (M - i) ∪ {E} and (M - j) ∪ {E}, which are again
    maximal and distinct, so no antichain reduction is needed.

    Args:
        nerve (Nerve): Nerve before the blow-up.
        center (IndexPair): The center (i, j).

    Returns:
        Nerve: Nerve on vertex_count + 1 vertices, the new vertex being E.
    """
    i, j = _check_center(nerve.vertex_count, center)
    if not nerve_contains(nerve, (i, j)):
        raise EmptyCenter(f"Y_{i} ∩ Y_{j} is empty; it cannot be a center.")
    exceptional = nerve.vertex_count
    sets = []
    for maximal in nerve.maximal:
        if i in maximal and j in maximal:
            sets.append([k for k in maximal if k != i] + [exceptional])
            sets.append([k for k in maximal if k != j] + [exceptional])
        else:
            sets.append(maximal)
    return Nerve.from_antichain(exceptional + 1, sets)


def blowup(state: BlowupState, center: IndexPair) -> BlowupState:
    """Blows up Y_i ∩ Y_j: appends E, pulls back every divisor and updates the nerve."""
    arrangement = state.arrangement
    i, j = _check_center(arrangement.vertex_count, center)
    nerve = blowup_nerve(arrangement.nerve, (i, j))
    step = state.step + 1
    label = DivisorLabel.exceptional(arrangement.vertex_count, step)
    logger.debug(
        f"Step {step}: blowing up {arrangement.name_of(i)} ∩ {arrangement.name_of(j)}, new divisor {label.name}."
    )
    return BlowupState(
        arrangement=Arrangement(labels=arrangement.labels + (label,), nerve=nerve),
        divisors=tuple(pullback_divisor(d, (i, j)) for d in state.divisors),
        step=step,
    )


def _resolve_max_steps(max_steps: Optional[int]) -> int:
    if max_steps is None:
        return DEFAULT_MAX_STEPS
    if max_steps < 0:
        raise ValueError(f"max_steps must be nonnegative, got {max_steps}.")
    return max_steps


def _run_pair(
    state: BlowupState,
    working: List[Divisor],
    first: int,
    second: int,
    stage: int,
    steps: List[TraceStep],
    max_steps: int,
) -> Tuple[BlowupState, List[Divisor]]:
    """
    Blows up until working[first] and working[second] generate a locally
    principal sum. Every divisor of `state` and of `working` is pulled back
    along the way; executed steps are appended to `steps`.
    """
    before = sigma(working[first], working[second], state.arrangement.nerve)
    while not before.sigma.is_bottom:
        if len(steps) >= max_steps:
            logger.error(f"Step cap of {max_steps} blow-ups reached with sigma = {before.sigma}.")
            raise StepLimitExceeded(
                f"Reached the cap of {max_steps} blow-ups before principalization (sigma = {before.sigma})."
            )
        center = _center_of(before)
        state = blowup(state, center)
        working = [pullback_divisor(d, center) for d in working]
        after = sigma(working[first], working[second], state.arrangement.nerve)
        if not after.key() < before.key():
            logger.error(
                f"(sigma, tau) did not decrease at step {state.step}: "
                f"({before.sigma}, {before.tau}) -> ({after.sigma}, {after.tau})."
            )
            raise InvariantViolation(
                f"(sigma, tau) did not strictly decrease at step {state.step}: "
                f"({before.sigma}, {before.tau}) -> ({after.sigma}, {after.tau})."
            )
        logger.debug(
            f"Step {state.step}: center {center}, ({before.sigma}, {before.tau}) -> ({after.sigma}, {after.tau})."
        )
        steps.append(TraceStep(
            step=state.step,
            stage=stage,
            center=center,
            sigma_before=before.sigma,
            tau_before=before.tau,
            sigma_after=after.sigma,
            tau_after=after.tau,
            new_label=state.arrangement.labels[-1],
            pulled_back_coeffs=tuple(d.coeffs for d in state.divisors),
        ))
        before = after
    return state, working


def _certificate(steps: Sequence[TraceStep]) -> Certificate:
    return Certificate.PRINCIPALIZED if steps else Certificate.ALREADY_PRINCIPAL


def principalize_pair(
    state: BlowupState,
    idx1: int,
    idx2: int,
    max_steps: Optional[int] = None,
) -> Tuple[BlowupState, Trace]:
    """
    Runs the (σ, τ) loop on the pair (D_idx1, D_idx2) of `state`.

    Args:
        state (BlowupState): Validated starting state.
        idx1 (int): Index of the first divisor in state.divisors.
        idx2 (int): Index of the second divisor in state.divisors.
        max_steps (Optional[int]): Blow-up cap, DEFAULT_MAX_STEPS when None.

    Returns:
        Tuple[BlowupState, Trace]: Final state and the trace of every step.
    """
    for index in (idx1, idx2):
        if index < 0 or index >= len(state.divisors):
            raise IndexOutOfRange(f"Divisor index {index} is outside 0..{len(state.divisors) - 1}.")
    if idx1 == idx2:
        raise EqualIndices(f"principalize_pair needs two distinct divisors, got ({idx1},{idx2}).")
    cap = _resolve_max_steps(max_steps)
    steps: List[TraceStep] = []
    final, _ = _run_pair(state, list(state.divisors), idx1, idx2, 0, steps, cap)
    trace = Trace(initial=state, steps=tuple(steps), certificate=_certificate(steps))
    logger.info(f"Pair ({idx1},{idx2}) principalized after {len(steps)} blow-up(s).")
    return final, trace


def principalize_many(state: BlowupState, max_steps: Optional[int] = None) -> Tuple[BlowupState, Trace]:
    """
    Principalizes the sum of all divisors of `state` by sequential pair
    reduction: the first two working divisors are principalized, then replaced
    by their componentwise minimum, until one working divisor remains.

    Raises:
        TooFewDivisors: with fewer than two divisors.
        InvariantViolation: if a step fails to decrease (σ, τ) or the final sum
            is not locally principal.
        StepLimitExceeded: when the cap is reached.
    """
    if len(state.divisors) < MIN_DIVISORS:
        raise TooFewDivisors(f"At least {MIN_DIVISORS} divisors are required, got {len(state.divisors)}.")
    cap = _resolve_max_steps(max_steps)
    steps: List[TraceStep] = []
    working = list(state.divisors)
    current = state
    stage = 0
    while len(working) > 1:
        current, working = _run_pair(current, working, 0, 1, stage, steps, cap)
        working = [min_divisor(working[0], working[1])] + working[2:]
        stage += 1

    if not is_sum_locally_principal(current.divisors, current.arrangement.nerve):
        logger.error("Final ideal sum is not locally principal.")
        raise InvariantViolation("The final ideal sum is not locally principal.")

    trace = Trace(initial=state, steps=tuple(steps), certificate=_certificate(steps))
    logger.info(
        f"Principalized {len(state.divisors)} divisors on {state.arrangement.vertex_count} supports "
        f"after {len(steps)} blow-up(s)."
    )
    return current, trace


def replay_trace(trace: Trace) -> List[BlowupState]:
    """Rebuilds the state after each step, starting with trace.initial."""
    states = [trace.initial]
    for trace_step in trace.steps:
        next_state = blowup(states[-1], trace_step.center)
        if tuple(d.coeffs for d in next_state.divisors) != trace_step.pulled_back_coeffs:
            raise InvariantViolation(f"Trace step {trace_step.step} does not match its recorded pullback.")
        states.append(next_state)
    return states
