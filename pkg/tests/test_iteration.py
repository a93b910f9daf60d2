import json
from fractions import Fraction

import pytest

from sumsetlab.errors import StepBudgetExhausted
from sumsetlab.pipeline import SubsetWitness, intersection_algorithm, iterate_main
from sumsetlab.pipeline.iteration import t_range
from sumsetlab.setcalc import NumberSet, geometric

NESTED = NumberSet([1, 2, 10**3, 2 * 10**3, 10**6, 2 * 10**6, 10**9, 2 * 10**9])


def halves_step(Aj, lj, j):
    """Split at the median; the scales are far apart so the folds meet only in 0."""
    xs = Aj.elements
    sets = (NumberSet(xs[: len(xs) // 2]), NumberSet(xs[len(xs) // 2:]))
    cert = intersection_algorithm(Aj, sets, lj, 1)
    return SubsetWitness(sets[cert.high_index - 1], cert.g_high, cert, sets, lj, 1)


def test_gp_stops_on_growth():
    tr = iterate_main(geometric(2, 64), k=2, ell=4)
    assert tr.outcome == "growth"
    assert len(tr.steps) == 1 and tr.steps[0].branch == "growth"


def test_nested_instance():
    tr = iterate_main(NESTED, k=2, ell=4, step_fn=halves_step)
    assert tr.outcome == "analysis"
    assert len(tr.steps) >= 2
    sizes = [s.n for s in tr.steps] + [tr.steps[-1].next_n]
    assert all(a > b for a, b in zip(sizes, sizes[1:]))
    assert [s.ell for s in tr.steps] == [4, 3]
    assert tr.ell_monotone
    assert tr.telescoping["matches"] and tr.telescoping["links_hold"]
    assert all(s.t in t_range(2) for s in tr.steps)


def test_bookkept_epsilon():
    tr = iterate_main(NESTED, k=2, ell=4, step_fn=halves_step)
    assert tr.steps[1].epsilon_bookkept == "unspecified in source"
    tr = iterate_main(NESTED, k=2, ell=4, step_fn=halves_step, c=Fraction(1, 2))
    assert tr.steps[1].epsilon_bookkept == pytest.approx(tr.steps[0].epsilon)


def test_step_budget():
    with pytest.raises(StepBudgetExhausted):
        iterate_main(geometric(2, 8), max_steps=0)
    with pytest.raises(StepBudgetExhausted) as info:
        iterate_main(NESTED, k=2, ell=4, max_steps=1, step_fn=halves_step)
    assert len(info.value.transcript.steps) == 1


def test_transcript_deterministic():
    a = json.dumps(iterate_main(geometric(2, 64), seed=3).to_json(), sort_keys=True)
    b = json.dumps(iterate_main(geometric(2, 64), seed=3).to_json(), sort_keys=True)
    assert a == b
