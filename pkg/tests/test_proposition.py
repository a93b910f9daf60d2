from fractions import Fraction

import pytest

from sumsetlab import oracles
from sumsetlab.errors import StageFailed
from sumsetlab.pipeline import (
    GrowthWitness,
    SubsetWitness,
    k_from_h,
    proposition_run,
    verify_certificate,
    verify_growth_witness,
)
from sumsetlab.setcalc import NumberSet, geometric, signed_fold
from sumsetlab.structure import dyadic_profile


def test_gp_growth_witness():
    A = geometric(2, 32)
    w = proposition_run(A, 2)
    assert isinstance(w, GrowthWitness)
    assert w.branch == "dyadic"
    assert w.count >= len(w.C) // 2
    assert w.count >= w.bound == (len(w.C) // 2) ** 1
    assert verify_growth_witness(A, w)
    # every sum lies in the claimed fold of alpha*A, checked from scratch
    fold = oracles.signed_fold(NumberSet(w.alpha * a for a in A), w.ell1, w.ell2)
    assert set(w.sums) <= fold
    assert len(w.sums) <= len(signed_fold(A, w.ell1, w.ell2))


def test_dyadic_branch_with_two_per_interval():
    A = NumberSet(2 ** j + d for j in range(3, 20) for d in (0, 1))
    assert dyadic_profile(A).s == 2
    w = proposition_run(A, 2, delta=Fraction(1, 2))
    assert w.branch == "dyadic"
    assert len(w.C) == len(A) // 4
    assert verify_growth_witness(A, w)


def test_single_interval_cluster():
    # ten elements in [1, 2): the occupancy 10 exceeds s = floor(10^(1/5)) = 1
    A = NumberSet(1 + Fraction(i, 10) for i in range(10))
    assert dyadic_profile(A).s == 10
    w = proposition_run(A, 2)
    assert isinstance(w, SubsetWitness)
    assert verify_certificate(w.certificate, A, w.A_sets, w.ell, w.t)
    # forcing the sparse branch leaves nothing to select
    with pytest.raises(StageFailed) as info:
        proposition_run(A, 2, delta=1)
    assert info.value.stage == "dyadic"


def test_delta_branch():
    A = geometric(Fraction(9, 8), 20)
    w = proposition_run(A, 2)
    assert isinstance(w, GrowthWitness) and w.branch == "delta"
    assert w.theta != 1
    assert w.count >= w.bound
    assert verify_growth_witness(A, w)
    assert len(w.sums) <= len(signed_fold(A, w.ell1, w.ell2))


def test_subset_branch():
    A = geometric(Fraction(9, 8), 12)
    w = proposition_run(A, 2, drc_m=11)
    assert isinstance(w, SubsetWitness)
    assert w.A_prime.issubset(A) and len(w.A_prime) < len(A)
    cert = w.certificate
    assert cert.halt_kind == "final"
    assert verify_certificate(cert, A, w.A_sets, w.ell, w.t)
    assert cert.fold_sumset_size == 12376
    assert cert.conclusion.endswith("= 12376 >= 15")


def test_growth_witness_tamper():
    A = geometric(Fraction(9, 8), 20)
    w = proposition_run(A, 2)
    bad = GrowthWitness(**{**w.__dict__, "sums": NumberSet(list(w.sums) + [Fraction(10**9 + 7)])})
    assert not verify_growth_witness(A, bad)


def test_runs_are_deterministic():
    A = geometric(Fraction(9, 8), 20)
    assert proposition_run(A, 2, seed=4).to_json() == proposition_run(A, 2, seed=4).to_json()


def test_argument_checks():
    with pytest.raises(ValueError):
        proposition_run(geometric(2, 8), 1)
    with pytest.raises(ValueError):
        proposition_run(NumberSet([0, 1, 2]), 2)


def test_k_from_h():
    # k is barely above 1 for any feasible h
    assert k_from_h(10**6) < 2
    assert k_from_h(4) == pytest.approx(1.0, abs=0.1)
