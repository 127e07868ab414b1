# models.py

from enum import Enum
from functools import total_ordering
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    model_serializer,
    model_validator,
)

from constants import BOTTOM_LITERAL, FORMAT_VERSION, NERVE_FULL

IndexPair = Tuple[int, int]
ExponentVector = Tuple[int, ...]
Lineage = Tuple[Tuple[int, int], ...]


def maximal_antichain(sets: Iterable[Iterable[int]]) -> Tuple[Tuple[int, ...], ...]:
    """
    Reduces a family of index sets to its maximal elements.

    The empty set is dropped: it belongs to every nerve implicitly.

    Args:
        sets (Iterable[Iterable[int]]): Any family of index sets.

    Returns:
        Tuple[Tuple[int, ...], ...]: Sorted maximal sets, each sorted ascending.
    """
    candidates = {tuple(sorted(set(s))) for s in sets}
    candidates.discard(())
    as_sets = {c: frozenset(c) for c in candidates}
    kept = [
        c for c in candidates
        if not any(as_sets[c] < as_sets[other] for other in candidates)
    ]
    return tuple(sorted(kept))


def minimal_generators(generators: Iterable[Sequence[int]]) -> Tuple[ExponentVector, ...]:
    """
    Drops every exponent vector divisible by another one (componentwise >=).
    Returns the sorted antichain of minimal vectors.
    """
    points = sorted({tuple(g) for g in generators})
    result: List[ExponentVector] = []
    for i, point in enumerate(points):
        divisible = False
        for other in points[:i]:
            if all(o <= p for o, p in zip(other, point)):
                divisible = True
                break
        if not divisible:
            result.append(point)
    return tuple(result)


# Arrangement core

class DivisorKind(str, Enum):
    ORIGINAL = "Original"
    EXCEPTIONAL = "Exceptional"


class DivisorLabel(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=0)
    kind: DivisorKind = DivisorKind.ORIGINAL
    step: Optional[int] = Field(None, ge=1)
    name: str = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check_step(self) -> "DivisorLabel":
        if self.kind == DivisorKind.EXCEPTIONAL and self.step is None:
            raise ValueError("Exceptional labels must carry the step that created them.")
        if self.kind == DivisorKind.ORIGINAL and self.step is not None:
            raise ValueError("Original labels carry no step number.")
        return self

    @classmethod
    def original(cls, id: int, name: str) -> "DivisorLabel":
        return cls(id=id, kind=DivisorKind.ORIGINAL, name=name)

    @classmethod
    def exceptional(cls, id: int, step: int) -> "DivisorLabel":
        return cls(id=id, kind=DivisorKind.EXCEPTIONAL, step=step, name=f"E{step}")


class Nerve(BaseModel):
    """
    Downward-closed family of index sets with nonempty intersection, stored as
    its antichain of maximal sets. The empty set is always a member.
    """
    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(..., ge=0)
    maximal: Tuple[Tuple[int, ...], ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if isinstance(data, dict) and "maximal" in data:
            data = dict(data)
            try:
                data["maximal"] = maximal_antichain(data["maximal"])
            except TypeError as e:
                raise ValueError(f"Nerve sets must be lists of vertex indices: {e}")
        return data

    @model_validator(mode="after")
    def _check_range(self) -> "Nerve":
        for members in self.maximal:
            for index in members:
                if index < 0 or index >= self.vertex_count:
                    raise ValueError(
                        f"Nerve set {list(members)} names vertex {index} outside 0..{self.vertex_count - 1}."
                    )
        return self

    @classmethod
    def full(cls, vertex_count: int) -> "Nerve":
        if vertex_count == 0:
            return cls(vertex_count=0, maximal=())
        return cls(vertex_count=vertex_count, maximal=(tuple(range(vertex_count)),))

    @classmethod
    def from_sets(cls, vertex_count: int, sets: Iterable[Iterable[int]]) -> "Nerve":
        return cls(vertex_count=vertex_count, maximal=maximal_antichain(sets))

    @classmethod
    def from_antichain(cls, vertex_count: int, sets: Iterable[Iterable[int]]) -> "Nerve":
        """Caller guarantees `sets` are distinct, nonempty, in range and pairwise incomparable."""
        maximal = tuple(sorted(tuple(sorted(s)) for s in sets))
        return cls.model_construct(vertex_count=vertex_count, maximal=maximal)


class Divisor(BaseModel):
    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[int, ...]

    @classmethod
    def of(cls, *coeffs: int) -> "Divisor":
        return cls(coeffs=tuple(coeffs))

    def __add__(self, other: "Divisor") -> "Divisor":
        if len(self.coeffs) != len(other.coeffs):
            raise ValueError("Cannot add divisors of different lengths.")
        return Divisor(coeffs=tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))


@total_ordering
class ExtPair(BaseModel):
    """
    Element of {Bottom} ∪ N², ordered lexicographically with Bottom minimal.
    Serializes as "-inf" for Bottom and [p, q] otherwise.
    """
    model_config = ConfigDict(frozen=True)

    value: Optional[Tuple[int, int]] = None

    @model_validator(mode="before")
    @classmethod
    def _parse_literal(cls, data):
        if isinstance(data, str):
            if data != BOTTOM_LITERAL:
                raise ValueError(f"Expected '{BOTTOM_LITERAL}' or a two-element array, got '{data}'.")
            return {"value": None}
        if isinstance(data, (list, tuple)):
            return {"value": tuple(data)}
        return data

    @model_validator(mode="after")
    def _check_natural(self) -> "ExtPair":
        if self.value is not None and min(self.value) < 0:
            raise ValueError("ExtPair entries are natural numbers.")
        return self

    @model_serializer
    def _serialize(self) -> Union[str, List[int]]:
        if self.value is None:
            return BOTTOM_LITERAL
        return list(self.value)

    @classmethod
    def bottom(cls) -> "ExtPair":
        return cls(value=None)

    @classmethod
    def of(cls, first: int, second: int) -> "ExtPair":
        return cls(value=(first, second))

    @property
    def is_bottom(self) -> bool:
        return self.value is None

    def key(self) -> Tuple[int, int, int]:
        if self.value is None:
            return (0, 0, 0)
        return (1, self.value[0], self.value[1])

    def __lt__(self, other: "ExtPair") -> bool:
        if not isinstance(other, ExtPair):
            return NotImplemented
        return self.key() < other.key()

    def __str__(self) -> str:
        if self.value is None:
            return BOTTOM_LITERAL
        return f"({self.value[0]},{self.value[1]})"


def invariant_key(sigma: ExtPair, tau: int) -> Tuple[Tuple[int, int, int], int]:
    """Sort key of (σ, τ) in the lexicographic order on ExtPair × N."""
    return (sigma.key(), tau)


class Arrangement(BaseModel):
    model_config = ConfigDict(frozen=True)

    labels: Tuple[DivisorLabel, ...]
    nerve: Nerve

    @model_validator(mode="after")
    def _check_labels(self) -> "Arrangement":
        if self.nerve.vertex_count != len(self.labels):
            raise ValueError(
                f"Nerve has {self.nerve.vertex_count} vertices but the arrangement has {len(self.labels)} labels."
            )
        for position, label in enumerate(self.labels):
            if label.id != position:
                raise ValueError(f"Label ids must be dense: position {position} carries id {label.id}.")
        return self

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @classmethod
    def original(cls, names: Sequence[str], nerve: Optional[Nerve] = None) -> "Arrangement":
        labels = tuple(DivisorLabel.original(i, name) for i, name in enumerate(names))
        return cls(labels=labels, nerve=nerve if nerve is not None else Nerve.full(len(names)))

    def name_of(self, index: int) -> str:
        return self.labels[index].name


class ViolationCode(str, Enum):
    LENGTH_MISMATCH = "LengthMismatch"
    NEGATIVE_COEFFICIENT = "NegativeCoefficient"
    EMPTY_NERVE_SINGLETON = "EmptyNerveSingleton"
    TOO_FEW_DIVISORS = "TooFewDivisors"


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: ViolationCode
    message: str


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> List[ViolationCode]:
        return [v.code for v in self.violations]


# Invariants

class SigmaReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma: ExtPair
    tau: int = Field(..., ge=0)
    achieving_pairs: Tuple[IndexPair, ...] = ()

    @model_validator(mode="after")
    def _check_counts(self) -> "SigmaReport":
        if self.tau != len(self.achieving_pairs):
            raise ValueError("tau must equal the number of achieving pairs.")
        if self.sigma.is_bottom and self.achieving_pairs:
            raise ValueError("A Bottom sigma has no achieving pairs.")
        return self

    def key(self) -> Tuple[Tuple[int, int, int], int]:
        return invariant_key(self.sigma, self.tau)


# Blow-up engine

class BlowupState(BaseModel):
    model_config = ConfigDict(frozen=True)

    arrangement: Arrangement
    divisors: Tuple[Divisor, ...]
    step: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_lengths(self) -> "BlowupState":
        expected = self.arrangement.vertex_count
        for position, divisor in enumerate(self.divisors):
            if len(divisor.coeffs) != expected:
                raise ValueError(
                    f"Divisor {position} has {len(divisor.coeffs)} coefficients, expected {expected}."
                )
        return self


class TraceStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    step: int = Field(..., ge=1)
    stage: int = Field(0, ge=0)
    center: IndexPair
    sigma_before: ExtPair
    tau_before: int = Field(..., ge=0)
    sigma_after: ExtPair
    tau_after: int = Field(..., ge=0)
    new_label: DivisorLabel
    pulled_back_coeffs: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_decrease(self) -> "TraceStep":
        if not invariant_key(self.sigma_after, self.tau_after) < invariant_key(self.sigma_before, self.tau_before):
            raise ValueError(
                f"Step {self.step} does not decrease (sigma, tau): "
                f"({self.sigma_before}, {self.tau_before}) -> ({self.sigma_after}, {self.tau_after})."
            )
        return self


class Certificate(str, Enum):
    PRINCIPALIZED = "Principalized"
    ALREADY_PRINCIPAL = "AlreadyPrincipal"


class Trace(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = FORMAT_VERSION
    initial: BlowupState
    steps: Tuple[TraceStep, ...] = ()
    certificate: Certificate

    @property
    def blowup_count(self) -> int:
        return len(self.steps)


# Chart oracle

class MonomialChart(BaseModel):
    """
    One affine chart of the toric replay. `equations` maps a divisor label id
    to the exponent vector of its equation (all zeros when the divisor misses
    the chart); `transforms` holds the total transform of each original
    divisor D_j, the generators of the transformed ideal sum.
    """
    model_config = ConfigDict(frozen=True)

    var_count: int = Field(..., ge=1)
    equations: Dict[int, ExponentVector]
    transforms: Tuple[ExponentVector, ...]
    lineage: Lineage = ()

    @model_validator(mode="after")
    def _check_vectors(self) -> "MonomialChart":
        vectors = list(self.equations.values()) + list(self.transforms)
        for vector in vectors:
            if len(vector) != self.var_count:
                raise ValueError(f"Exponent vector {vector} does not have length {self.var_count}.")
            if any(e < 0 for e in vector):
                raise ValueError(f"Exponent vector {vector} has a negative entry.")
        return self

    @property
    def absent(self) -> Tuple[int, ...]:
        return tuple(sorted(label for label, vector in self.equations.items() if not any(vector)))

    @property
    def present(self) -> Tuple[int, ...]:
        return tuple(sorted(label for label, vector in self.equations.items() if any(vector)))


class MonomialIdeal(BaseModel):
    model_config = ConfigDict(frozen=True)

    generators: Tuple[ExponentVector, ...]

    @model_validator(mode="before")
    @classmethod
    def _reduce(cls, data):
        if isinstance(data, dict) and "generators" in data:
            data = dict(data)
            data["generators"] = minimal_generators(data["generators"])
        return data


class LeafResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    lineage: Lineage
    principal: bool
    generators: Tuple[ExponentVector, ...]
    present_labels: Tuple[int, ...]


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    leaf_count: int
    leaves: Tuple[LeafResult, ...]
    failures: Tuple[Lineage, ...] = ()
    pullback_mismatches: Tuple[str, ...] = ()
    nerve_violations: Tuple[Tuple[int, ...], ...] = ()
    unrealized_nerve_sets: Tuple[Tuple[int, ...], ...] = ()

    @computed_field
    @property
    def ok(self) -> bool:
        return not (self.failures or self.pullback_mismatches or self.nerve_violations)


# Instance files

class InstanceFile(BaseModel):
    """
    User-facing instance: divisor names, the nerve ("full" or maximal
    nonempty sets by name) and one coefficient map per divisor D_j.
    Omitted coefficients default to 0.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    format_version: int = FORMAT_VERSION
    divisor_names: Tuple[str, ...]
    nerve: Union[Literal["full"], Tuple[Tuple[str, ...], ...]] = NERVE_FULL
    divisors: Tuple[Dict[str, int], ...]
    toric: bool = False

    @model_validator(mode="after")
    def _check_names(self) -> "InstanceFile":
        if self.format_version != FORMAT_VERSION:
            raise ValueError(f"Unsupported format_version {self.format_version}; expected {FORMAT_VERSION}.")
        seen = set()
        for name in self.divisor_names:
            if not name:
                raise ValueError("Divisor names must be non-empty.")
            if name in seen:
                raise ValueError(f"Duplicate divisor name '{name}'.")
            seen.add(name)
        if self.nerve != NERVE_FULL:
            for members in self.nerve:
                for name in members:
                    if name not in seen:
                        raise ValueError(f"Unknown divisor name '{name}' in nerve.")
        for position, coefficients in enumerate(self.divisors):
            for name in coefficients:
                if name not in seen:
                    raise ValueError(f"Unknown divisor name '{name}' in divisor {position}.")
        return self

    @property
    def is_full_nerve(self) -> bool:
        return self.nerve == NERVE_FULL

    def coefficient_matrix(self) -> List[Tuple[int, ...]]:
        return [
            tuple(coefficients.get(name, 0) for name in self.divisor_names)
            for coefficients in self.divisors
        ]

    def to_nerve(self) -> Nerve:
        n = len(self.divisor_names)
        if self.is_full_nerve:
            return Nerve.full(n)
        position = {name: i for i, name in enumerate(self.divisor_names)}
        return Nerve.from_sets(n, [[position[name] for name in members] for members in self.nerve])

    def to_arrangement(self) -> Arrangement:
        return Arrangement.original(self.divisor_names, self.to_nerve())

    def to_divisors(self) -> List[Divisor]:
        return [Divisor(coeffs=row) for row in self.coefficient_matrix()]
