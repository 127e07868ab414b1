# chart_oracle.py

import logging
import os
from typing import Dict, List, Optional, Sequence, Tuple

from arrangement import nerve_contains
from blowup_engine import blowup_nerve
from constants import DEFAULT_MAX_LEAVES, ENV_MAX_LEAVES
from errors import (
    CenterAbsent,
    EmptyCenter,
    EmptyIdeal,
    EqualIndices,
    LeafLimitExceeded,
    NonSimpleEquation,
    NotPrincipalAtLeaf,
    OracleScopeError,
    ReplayMismatch,
)
from models import (
    DivisorKind,
    ExponentVector,
    LeafResult,
    MonomialChart,
    MonomialIdeal,
    Nerve,
    Trace,
    VerificationReport,
)

logger = logging.getLogger(__name__)


def get_max_leaves() -> int:
    """Leaf cap from PRINCIPALIZE_MAX_LEAVES, DEFAULT_MAX_LEAVES when unset."""
    raw = os.getenv(ENV_MAX_LEAVES)
    if not raw:
        return DEFAULT_MAX_LEAVES
    try:
        value = int(raw)
    except ValueError:
        logger.error(f"{ENV_MAX_LEAVES} must be an integer, got '{raw}'.")
        raise ValueError(f"{ENV_MAX_LEAVES} must be an integer, got '{raw}'.")
    if value < 1:
        logger.error(f"{ENV_MAX_LEAVES} must be positive, got {value}.")
        raise ValueError(f"{ENV_MAX_LEAVES} must be positive, got {value}.")
    return value


def _unit(var_count: int, slot: int) -> ExponentVector:
    return tuple(1 if k == slot else 0 for k in range(var_count))


def initial_chart(n: int, coeff_matrix: Sequence[Sequence[int]]) -> Tuple[MonomialChart, MonomialIdeal]:
    """
    Affine n-space with Y_i = V(x_i); D_j has equation prod x_i^{a_ij}.

    Args:
        n (int): Number of supports (variables).
        coeff_matrix (Sequence[Sequence[int]]): One row of n coefficients per divisor.

    Returns:
        Tuple[MonomialChart, MonomialIdeal]: The chart and the ideal of the rows.
    """
    rows = tuple(tuple(row) for row in coeff_matrix)
    chart = MonomialChart(
        var_count=n,
        equations={i: _unit(n, i) for i in range(n)},
        transforms=rows,
    )
    return chart, MonomialIdeal(generators=rows)


def substitute_exponents(vector: Sequence[int], slots: Sequence[int], distinguished: int) -> ExponentVector:
    """
    Exponent form of y_i -> a_i * y_m on the center variables: the
    distinguished slot collects the sum of all center exponents, the other
    slots (now the a_i) keep theirs.
    """
    result = list(vector)
    result[slots[distinguished]] = sum(vector[s] for s in slots)
    return tuple(result)


def _center_slot(chart: MonomialChart, label: int) -> int:
    vector = chart.equations.get(label)
    if vector is None or not any(vector):
        raise CenterAbsent(f"Divisor {label} does not meet this chart.")
    if sum(vector) != 1:
        raise NonSimpleEquation(f"Divisor {label} is not cut out by a single variable here: {vector}.")
    return vector.index(1)


def blowup_charts(
    chart: MonomialChart,
    center: Sequence[int],
    new_label: int,
    step: int,
) -> List[MonomialChart]:
    """
    Blows up the intersection of the center divisors inside one chart.

    In chart m the m-th center variable y_m cuts out E; every other center
    variable y_i is replaced by a_i with y_i = a_i * y_m, and a_i cuts out the
    proper transform of Y_i. The proper transform of the m-th center divisor
    misses chart m.

    Args:
        chart (MonomialChart): Chart to blow up.
        center (Sequence[int]): Label ids of the r >= 2 center divisors.
        new_label (int): Label id of the exceptional divisor.
        step (int): Step number recorded in the lineage.

    Returns:
        List[MonomialChart]: The r charts, in center order.

    Raises:
        CenterAbsent: if a center divisor misses this chart.
        NonSimpleEquation: if a center equation is not a single variable.
    """
    if len(set(center)) < 2:
        raise EqualIndices(f"A center needs at least two distinct divisors, got {list(center)}.")
    slots = [_center_slot(chart, label) for label in center]
    if len(set(slots)) != len(slots):
        raise NonSimpleEquation(f"Center divisors {list(center)} share a variable.")

    center_set = set(center)
    charts = []
    for m in range(len(center)):
        exceptional = _unit(chart.var_count, slots[m])
        equations: Dict[int, ExponentVector] = {}
        for label, vector in chart.equations.items():
            total = substitute_exponents(vector, slots, m)
            if label in center_set:
                # Y_i pulls back to its proper transform plus E.
                total = tuple(t - e for t, e in zip(total, exceptional))
            equations[label] = total
        equations[new_label] = exceptional
        charts.append(MonomialChart(
            var_count=chart.var_count,
            equations=equations,
            transforms=tuple(substitute_exponents(t, slots, m) for t in chart.transforms),
            lineage=chart.lineage + ((step, m),),
        ))
    return charts


def is_principal_monomial(ideal: MonomialIdeal) -> bool:
    """A reduced monomial ideal is principal iff a single generator remains."""
    if not ideal.generators:
        raise EmptyIdeal("The ideal has no generators.")
    return len(ideal.generators) == 1


def _carry_forward(chart: MonomialChart, new_label: int) -> MonomialChart:
    equations = dict(chart.equations)
    equations[new_label] = tuple(0 for _ in range(chart.var_count))
    return MonomialChart(
        var_count=chart.var_count,
        equations=equations,
        transforms=chart.transforms,
        lineage=chart.lineage,
    )


def _check_trace_shape(trace: Trace, n: int, h: int) -> None:
    vertex_count = n
    for trace_step in trace.steps:
        label = trace_step.new_label
        if label.kind != DivisorKind.EXCEPTIONAL or label.id != vertex_count:
            raise ReplayMismatch(
                f"Step {trace_step.step} introduces label {label.id} ({label.kind.value}), "
                f"expected exceptional label {vertex_count}."
            )
        if any(index < 0 or index >= vertex_count for index in trace_step.center):
            raise ReplayMismatch(f"Step {trace_step.step} has center {trace_step.center} outside 0..{vertex_count - 1}.")
        vertex_count += 1
        rows = trace_step.pulled_back_coeffs
        if len(rows) != h or any(len(row) != vertex_count for row in rows):
            raise ReplayMismatch(
                f"Step {trace_step.step} records {len(rows)} coefficient row(s); "
                f"expected {h} rows of length {vertex_count}."
            )


def verify_trace(
    n: int,
    coeff_matrix: Sequence[Sequence[int]],
    trace: Trace,
    max_leaves: Optional[int] = None,
    strict: bool = False,
) -> VerificationReport:
    """
    Replays a trace through explicit affine charts of the coordinate-hyperplane
    arrangement and checks that the transformed ideal is principal in every
    leaf chart.

    Charts where the center misses the chart pass through unchanged. Along the
    way the E-exponent of every generator is compared with the engine's
    pulled-back E-coefficient, and at the end every set of divisors present in
    a leaf chart must be nonempty in the engine's nerve.

    Args:
        n (int): Number of coordinate hyperplanes.
        coeff_matrix (Sequence[Sequence[int]]): Rows a_j of the divisors.
        trace (Trace): Trace produced by the engine for the same instance.
        max_leaves (Optional[int]): Leaf cap; read from the environment when None.
        strict (bool): Raise NotPrincipalAtLeaf instead of only reporting failures.

    Returns:
        VerificationReport: Per-leaf results and every detected failure.
    """
    arrangement = trace.initial.arrangement
    if arrangement.vertex_count != n or arrangement.nerve != Nerve.full(n):
        raise OracleScopeError("The oracle only replays traces of the full-nerve coordinate-hyperplane arrangement.")
    rows = [tuple(row) for row in coeff_matrix]
    if [d.coeffs for d in trace.initial.divisors] != rows:
        raise OracleScopeError("The trace was produced for different divisors than the instance.")
    _check_trace_shape(trace, n, len(rows))

    cap = max_leaves if max_leaves is not None else get_max_leaves()
    chart, _ = initial_chart(n, rows)
    charts = [chart]
    nerve = arrangement.nerve
    mismatches: List[str] = []

    for trace_step in trace.steps:
        new_label = trace_step.new_label.id
        next_charts: List[MonomialChart] = []
        blown = 0
        for current in charts:
            try:
                children = blowup_charts(current, trace_step.center, new_label, trace_step.step)
            except CenterAbsent:
                next_charts.append(_carry_forward(current, new_label))
                continue
            blown += 1
            for child in children:
                slot = child.equations[new_label].index(1)
                for j, transform in enumerate(child.transforms):
                    expected = trace_step.pulled_back_coeffs[j][-1]
                    if transform[slot] != expected:
                        mismatches.append(
                            f"step {trace_step.step}, chart {list(child.lineage)}, divisor {j}: "
                            f"E-exponent {transform[slot]} but engine coefficient {expected}"
                        )
            next_charts.extend(children)
        if blown == 0:
            logger.error(f"Center {trace_step.center} of step {trace_step.step} misses every chart.")
            raise ReplayMismatch(
                f"Center {trace_step.center} of step {trace_step.step} is empty in every chart."
            )
        if len(next_charts) > cap:
            logger.error(f"Leaf cap of {cap} exceeded at step {trace_step.step}.")
            raise LeafLimitExceeded(f"More than {cap} charts after step {trace_step.step}.")
        try:
            nerve = blowup_nerve(nerve, trace_step.center)
        except EmptyCenter as e:
            raise ReplayMismatch(f"Step {trace_step.step}: {e}")
        charts = next_charts
        logger.debug(f"Step {trace_step.step}: {len(charts)} live chart(s).")

    leaves: List[LeafResult] = []
    failures = []
    nerve_violations = []
    for leaf in charts:
        ideal = MonomialIdeal(generators=leaf.transforms)
        principal = is_principal_monomial(ideal)
        if not principal:
            failures.append(leaf.lineage)
        present = leaf.present
        if not nerve_contains(nerve, present):
            nerve_violations.append(present)
        leaves.append(LeafResult(
            lineage=leaf.lineage,
            principal=principal,
            generators=ideal.generators,
            present_labels=present,
        ))

    realized = [set(leaf.present_labels) for leaf in leaves]
    unrealized = tuple(
        maximal for maximal in nerve.maximal
        if not any(set(maximal) <= present for present in realized)
    )

    report = VerificationReport(
        leaf_count=len(leaves),
        leaves=tuple(leaves),
        failures=tuple(failures),
        pullback_mismatches=tuple(mismatches),
        nerve_violations=tuple(sorted(set(nerve_violations))),
        unrealized_nerve_sets=unrealized,
    )
    logger.info(
        f"Replayed {len(trace.steps)} step(s): {report.leaf_count} leaf chart(s), "
        f"{len(failures)} not principal."
    )
    if strict and failures:
        raise NotPrincipalAtLeaf(f"{len(failures)} leaf chart(s) are not principal, first: {list(failures[0])}.")
    return report
