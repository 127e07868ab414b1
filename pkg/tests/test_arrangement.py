# tests/test_arrangement.py

from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import pytest
from hypothesis import given
from pydantic import ValidationError

from arrangement import (
    min_divisor,
    nerve_contains,
    nerve_pairs,
    raise_for_violations,
    validate_arrangement,
)
from conftest import divisors
from errors import EmptyNerveSingleton, IndexOutOfRange, LengthMismatch, TooFewDivisors
from models import (
    Arrangement,
    Divisor,
    DivisorKind,
    DivisorLabel,
    ExtPair,
    Nerve,
    ViolationCode,
    maximal_antichain,
)


class TestModels:

    def test_nerve_is_stored_as_maximal_antichain(self):
        nerve = Nerve.from_sets(3, [[0], [1], [0, 1], [2], [1, 0]])
        assert nerve.maximal == ((0, 1), (2,))

    def test_empty_set_is_dropped(self):
        assert maximal_antichain([[], [1]]) == ((1,),)

    def test_nerve_rejects_out_of_range_vertex(self):
        with pytest.raises(ValidationError):
            Nerve(vertex_count=2, maximal=((0, 2),))

    def test_labels_must_be_dense(self):
        with pytest.raises(ValidationError):
            Arrangement(labels=(DivisorLabel.original(1, "a"),), nerve=Nerve.full(1))

    def test_exceptional_label_needs_step(self):
        with pytest.raises(ValidationError):
            DivisorLabel(id=3, kind=DivisorKind.EXCEPTIONAL, name="E")
        assert DivisorLabel.exceptional(3, 2).name == "E2"

    def test_ext_pair_order(self):
        values = [ExtPair.of(1, 2), ExtPair.bottom(), ExtPair.of(2, 0), ExtPair.of(1, 1)]
        assert sorted(values) == [ExtPair.bottom(), ExtPair.of(1, 1), ExtPair.of(1, 2), ExtPair.of(2, 0)]
        assert ExtPair.bottom() < ExtPair.of(0, 0)

    def test_ext_pair_serialization(self):
        assert ExtPair.bottom().model_dump(mode="json") == "-inf"
        assert ExtPair.of(3, 2).model_dump(mode="json") == [3, 2]
        assert ExtPair.model_validate("-inf").is_bottom
        assert ExtPair.model_validate([3, 2]) == ExtPair.of(3, 2)


class TestValidateArrangement:

    def test_well_formed_input(self):
        arr = Arrangement.original(["a", "b", "c"])
        report = validate_arrangement(arr, [Divisor.of(1, 0, 2), Divisor.of(0, 1, 0)])
        assert report.ok

    def test_length_mismatch(self):
        arr = Arrangement.original(["a", "b", "c"])
        report = validate_arrangement(arr, [Divisor.of(1, 0), Divisor.of(0, 1, 0)])
        assert report.codes() == [ViolationCode.LENGTH_MISMATCH]
        with pytest.raises(LengthMismatch):
            raise_for_violations(report)

    def test_missing_singleton(self):
        arr = Arrangement.original(["a", "b", "c"], Nerve.from_sets(3, [[0], [2]]))
        report = validate_arrangement(arr, [Divisor.of(1, 0, 0), Divisor.of(0, 1, 0)])
        assert report.codes() == [ViolationCode.EMPTY_NERVE_SINGLETON]
        assert "{b}" in report.violations[0].message
        with pytest.raises(EmptyNerveSingleton):
            raise_for_violations(report)

    def test_negative_coefficient(self):
        arr = Arrangement.original(["a", "b"])
        report = validate_arrangement(arr, [Divisor.of(1, -1), Divisor.of(0, 1)])
        assert report.codes() == [ViolationCode.NEGATIVE_COEFFICIENT]

    def test_too_few_divisors(self):
        arr = Arrangement.original(["a", "b"])
        report = validate_arrangement(arr, [Divisor.of(1, 0)])
        assert report.codes() == [ViolationCode.TOO_FEW_DIVISORS]
        with pytest.raises(TooFewDivisors):
            raise_for_violations(report)

    def test_ok_report_does_not_raise(self):
        arr = Arrangement.original(["a", "b"])
        raise_for_violations(validate_arrangement(arr, [Divisor.of(1, 0), Divisor.of(0, 1)]))


class TestNerveContains:

    def test_full_nerve(self):
        assert nerve_contains(Nerve.full(3), {0, 2})

    def test_stored_maximal_sets(self):
        nerve = Nerve.from_sets(3, [[0, 1], [2]])
        assert not nerve_contains(nerve, {0, 2})
        assert nerve_contains(nerve, {1, 0})

    def test_empty_set(self):
        assert nerve_contains(Nerve.from_sets(2, [[0], [1]]), set())

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            nerve_contains(Nerve.full(2), {2})

    def test_monotone(self):
        nerve = Nerve.from_sets(4, [[0, 1, 2], [2, 3], [1, 3]])
        subsets = [set(c) for k in range(5) for c in combinations(range(4), k)]
        for big in subsets:
            if not nerve_contains(nerve, big):
                continue
            for small in subsets:
                if small <= big:
                    assert nerve_contains(nerve, small)

    def test_nerve_pairs(self):
        nerve = Nerve.from_sets(4, [[0, 1, 2], [2, 3]])
        assert nerve_pairs(nerve) == ((0, 1), (0, 2), (1, 2), (2, 3))

    def test_nerve_pairs_from_many_threads(self):
        nerves = [Nerve.from_sets(5, [[0, 1, k], [k, 4]]) for k in (2, 3)] * 200
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(nerve_pairs, nerves))
        for nerve, pairs in zip(nerves, results):
            assert pairs == tuple(p for p in combinations(range(5), 2) if nerve_contains(nerve, p))


class TestMinDivisor:

    def test_componentwise_min(self):
        assert min_divisor(Divisor.of(2, 0, 1), Divisor.of(1, 3, 1)) == Divisor.of(1, 0, 1)

    def test_idempotent(self):
        d = Divisor.of(4, 2, 7)
        assert min_divisor(d, d) == d

    def test_zero_absorbs(self):
        assert min_divisor(Divisor.of(0, 0), Divisor.of(5, 7)) == Divisor.of(0, 0)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            min_divisor(Divisor.of(1, 2), Divisor.of(1, 2, 3))

    @given(divisors(4), divisors(4), divisors(4))
    def test_commutative_and_associative(self, a, b, c):
        assert min_divisor(a, b) == min_divisor(b, a)
        assert min_divisor(min_divisor(a, b), c) == min_divisor(a, min_divisor(b, c))
