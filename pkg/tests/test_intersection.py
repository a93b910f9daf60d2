import json
import random
from dataclasses import replace

import pytest

from sumsetlab import oracles
from sumsetlab.checks import intersection_instance
from sumsetlab.errors import EmptyInput, HypothesisViolated
from sumsetlab.pipeline import (
    IntersectionCertificate,
    check_trivial_intersection,
    intersection_algorithm,
    verify_certificate,
)
from sumsetlab.pipeline.intersection import fold_sizes, k_schedule
from sumsetlab.setcalc import NumberSet


def S(*xs):
    return NumberSet(xs)


def union(sets):
    return NumberSet(x for T in sets for x in T)


def _plain_common(sets, folds):
    common = None
    for T, L in zip(sets, folds):
        D = oracles.hfold_sum(oracles.difference_set(T, T), L)
        common = D if common is None else common & D
    return common


def test_fold_sizes_and_k_schedule():
    assert fold_sizes(2, 1) == [2, 8]
    assert fold_sizes(2, 2) == [2, 8, 8, 32]
    assert k_schedule(16, 2) == [2, 3]
    assert k_schedule(27, 1) == [3]


def test_trivial_intersection_examples():
    res = check_trivial_intersection([S(0, 1), S(0, 10**5)], 2, 1)
    assert res.trivial and res.beta is None
    res = check_trivial_intersection([S(0, 1), S(0, 1)], 2, 1)
    assert not res.trivial and res.beta == 1
    res = check_trivial_intersection([S(0), S(5), S(-2), S(7)], 3, 2)
    assert res.trivial


def test_trivial_intersection_agrees_with_plain_folds():
    rng = random.Random(3)
    for _ in range(25):
        sets = [NumberSet(rng.sample(range(0, 40), rng.randint(1, 2))) for _ in range(2)]
        sets[1] = NumberSet(x * rng.choice([1, 50, 97]) for x in sets[1])
        res = check_trivial_intersection(sets, 2, 1)
        common = _plain_common(sets, fold_sizes(2, 1))
        assert res.trivial == (common == {0})
        if not res.trivial:
            assert res.beta in common and res.beta != 0


def test_trivial_intersection_errors():
    with pytest.raises(ValueError):
        check_trivial_intersection([S(1)], 2, 1)
    with pytest.raises(EmptyInput):
        check_trivial_intersection([S(1), S()], 2, 1)


def test_final_step_certificate():
    sets = [S(0, 1), S(0, 10**5)]
    A = union(sets)
    cert = intersection_algorithm(A, sets, 2, 1)
    assert cert.halt_kind == "final"
    assert cert.sumset_size == cert.product_size == 15
    P, Q = cert.levels[0]
    assert len(P) == 3 and len(Q) == 5
    assert len(oracles.sumset(P, Q)) == 15
    assert verify_certificate(cert, A, sets, 2, 1)
    assert cert.conclusion == "|(2^1 + 2^2)A| = 28 >= 15"


def test_case1_halt_at_step_zero():
    sets = [S(0, 1), S(0, 10**4), S(0, 10**8), S(0, 10**12)]
    A = union(sets)
    cert = intersection_algorithm(A, sets, 2, 2)
    assert cert.halt_kind == "case1" and cert.halt_step == 0 and cert.halt_pair == 1
    Y = cert.levels[0][1]
    assert len(oracles.sumset(cert.subset, Y)) == len(cert.subset) * len(Y) == cert.sumset_size
    assert verify_certificate(cert, A, sets, 2, 2)


def test_hypothesis_violated():
    with pytest.raises(HypothesisViolated) as info:
        intersection_algorithm(S(0, 1), [S(0, 1), S(0, 1)], 2, 1)
    assert info.value.beta == 1


def test_certificate_round_trip_and_tampering():
    sets = [S(0, 1), S(0, 10**5)]
    A = union(sets)
    cert = intersection_algorithm(A, sets, 2, 1)
    data = json.loads(json.dumps(cert.to_json()))
    again = IntersectionCertificate.from_json(data)
    assert verify_certificate(again, A, sets, 2, 1)
    assert not verify_certificate(replace(cert, sumset_size=cert.sumset_size + 1), A, sets, 2, 1)
    assert not verify_certificate(replace(cert, fold_sumset_size=cert.fold_sumset_size - 1), A, sets, 2, 1)
    wrong = [S(0, 2), S(0, 10**5)]
    assert not verify_certificate(cert, union(wrong), wrong, 2, 1)


def test_constructed_instances():
    rng = random.Random(11)
    for i in range(10):
        t = 1 + i % 2
        A, sets = intersection_instance(rng, t)
        assert len(A) <= 16
        cert = intersection_algorithm(A, sets, 2, t)
        assert verify_certificate(cert, A, sets, 2, t)
        if cert.halt_kind == "final":
            P, Q = cert.levels[t - 1]
            assert len(oracles.sumset(P, Q)) == len(P) * len(Q)
