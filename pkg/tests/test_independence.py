import math
import random

import pytest

from mrdp import (
    CHAIN_THROUGH_A,
    CHAIN_THROUGH_B,
    IndependenceInstance,
    closed_form,
    d_double_prime,
    d_prime,
    feasible_interval,
    independence_problem,
    objective_d,
    relative_divergence,
    solve_independence,
    sweep_curve,
)
from mrdp.errors import BoundaryError, DomainError


def test_chains_have_five_nodes_through_each_event():
    assert CHAIN_THROUGH_A.length == 5
    assert CHAIN_THROUGH_B.length == 5
    assert CHAIN_THROUGH_A.labels[2] == "A"
    assert CHAIN_THROUGH_B.labels[2] == "B"
    assert CHAIN_THROUGH_A.labels[::4] == CHAIN_THROUGH_B.labels[::4]


def test_feasible_interval_values():
    lo, hi = feasible_interval(0.7, 0.6)
    assert lo == pytest.approx(0.3, abs=1e-15)
    assert hi == 0.6
    assert feasible_interval(0.5, 0.5) == (0.0, 0.5)
    assert feasible_interval(1.0, 0.4) == (0.4, 0.4)
    assert feasible_interval(0.4, 1.0) == (0.4, 0.4)
    assert feasible_interval(0.0, 0.7) == (0.0, 0.0)


def test_feasible_interval_never_inverted():
    rng = random.Random(808)
    for _ in range(2000):
        p1, p2 = rng.random(), rng.random()
        lo, hi = feasible_interval(p1, p2)
        assert lo <= hi
    # marginals of exactly 1 are where the naive formula can overshoot
    for p in (0.1, 0.3, 0.7):
        lo, hi = feasible_interval(1.0, p)
        assert lo == hi == p


def test_feasible_interval_validation():
    with pytest.raises(DomainError):
        feasible_interval(-0.1, 0.5)
    with pytest.raises(DomainError):
        feasible_interval(0.5, 1.1)
    with pytest.raises(DomainError):
        feasible_interval(math.nan, 0.5)


def test_closed_form_values_and_containment():
    assert closed_form(0.6, 0.5) == pytest.approx(0.30, abs=1e-15)
    assert closed_form(0.0, 0.8) == 0.0
    assert closed_form(1.0, 0.8) == 0.8
    rng = random.Random(909)
    samples = [(rng.random(), rng.random()) for _ in range(500)]
    samples += [(0.0, 0.3), (1.0, 0.3), (0.4, 0.0), (0.4, 1.0),
                (0.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    for p1, p2 in samples:
        lo, hi = feasible_interval(p1, p2)
        assert lo <= closed_form(p1, p2) <= hi


def test_objective_d_values():
    assert objective_d(0.5, 0.5, 0.25) \
        == pytest.approx(math.log(4), abs=1e-15)
    assert objective_d(0.6, 0.5, 0.30) \
        == pytest.approx(1.366158847569202, abs=1e-15)
    assert objective_d(0.5, 0.5, 0.0) \
        == pytest.approx(math.log(2), abs=1e-15)
    assert objective_d(0.5, 0.5, 0.5) \
        == pytest.approx(math.log(2), abs=1e-15)


def test_objective_d_rejects_outside_interval():
    with pytest.raises(DomainError):
        objective_d(0.6, 0.5, 0.55)
    with pytest.raises(DomainError):
        objective_d(0.6, 0.5, 0.05)


def test_objective_d_equals_chain_divergences():
    rng = random.Random(111)
    for _ in range(100):
        p1, p2 = rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)
        lo, hi = feasible_interval(p1, p2)
        x = lo + (hi - lo) * rng.uniform(0.01, 0.99)
        through_a = [x, p1 - x, p2 - x, 1 - p1 - p2 + x]
        through_b = [x, p2 - x, p1 - x, 1 - p1 - p2 + x]
        d = objective_d(p1, p2, x)
        assert d == pytest.approx(
            relative_divergence(through_a, [1] * 4), abs=1e-12)
        assert d == pytest.approx(
            relative_divergence(through_b, [1] * 4), abs=1e-12)


def test_d_prime_values():
    assert d_prime(0.6, 0.5, 0.30) == pytest.approx(0.0, abs=1e-12)
    assert d_prime(0.5, 0.5, 0.2) \
        == pytest.approx(math.log(2.25), abs=1e-12)


def test_d_prime_matches_central_difference():
    h = 1e-7
    fd = (objective_d(0.6, 0.5, 0.4 + h)
          - objective_d(0.6, 0.5, 0.4 - h)) / (2 * h)
    got = d_prime(0.6, 0.5, 0.4)
    assert abs(got - fd) / abs(got) <= 1e-6


def test_d_prime_rejects_boundary():
    with pytest.raises(BoundaryError):
        d_prime(0.6, 0.5, 0.5)
    with pytest.raises(BoundaryError):
        d_prime(0.6, 0.5, 0.6)
    with pytest.raises(BoundaryError):
        d_prime(0.5, 0.5, 0.0)


def test_d_prime_root_identity():
    rng = random.Random(20260819)
    worst = 0.0
    for _ in range(1000):
        p1 = rng.uniform(0.01, 0.99)
        p2 = rng.uniform(0.01, 0.99)
        x = closed_form(p1, p2)
        lo, hi = feasible_interval(p1, p2)
        if not lo < x < hi:
            continue
        worst = max(worst, abs(d_prime(p1, p2, x)))
    assert worst <= 1e-12


def test_d_double_prime_values():
    assert d_double_prime(0.5, 0.5, 0.25) == pytest.approx(-16.0, abs=1e-12)
    assert d_double_prime(0.6, 0.5, 0.30) \
        == pytest.approx(-50.0 / 3.0, abs=1e-12)


def test_d_double_prime_always_negative_inside():
    rng = random.Random(121)
    for _ in range(500):
        p1, p2 = rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)
        lo, hi = feasible_interval(p1, p2)
        x = lo + (hi - lo) * rng.uniform(0.01, 0.99)
        if not lo < x < hi:
            continue
        assert d_double_prime(p1, p2, x) < 0
    with pytest.raises(BoundaryError):
        d_double_prime(0.6, 0.5, 0.1)


def test_independence_problem_shape():
    prob = independence_problem(0.6, 0.5)
    assert prob.dimension == 1
    assert prob.bounds == (feasible_interval(0.6, 0.5),)
    (t1, null1), (t2, null2) = prob.templates
    assert t1.chain == CHAIN_THROUGH_A
    assert t2.chain == CHAIN_THROUGH_B
    assert null1.values == (0.0, 1.0, 2.0, 3.0, 4.0)
    assert t1.values_at((0.3,)) \
        == pytest.approx([0.0, 0.3, 0.6, 0.8, 1.0], abs=1e-15)
    assert t2.values_at((0.3,)) \
        == pytest.approx([0.0, 0.3, 0.5, 0.8, 1.0], abs=1e-15)


def test_solve_independence_worked():
    assert solve_independence(0.6, 0.5, 1e-10) \
        == pytest.approx(0.30, abs=1e-10)
    assert solve_independence(0.5, 0.5) == pytest.approx(0.25, abs=1e-10)


def test_solve_independence_degenerate_marginals_exact():
    assert solve_independence(0.0, 0.8, 1e-10) == 0.0
    assert solve_independence(1.0, 0.4, 1e-10) == 0.4
    assert solve_independence(0.7, 1.0) == 0.7
    assert solve_independence(1.0, 1.0) == 1.0
    assert solve_independence(0.0, 0.0) == 0.0


def test_solve_independence_matches_closed_form():
    rng = random.Random(131)
    for _ in range(200):
        p1, p2 = rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)
        assert abs(solve_independence(p1, p2, 1e-12) - p1 * p2) <= 1e-9


def test_solve_independence_symmetric():
    rng = random.Random(141)
    for _ in range(200):
        p1, p2 = rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)
        assert abs(solve_independence(p1, p2)
                   - solve_independence(p2, p1)) <= 1e-9


def test_sweep_curve_grid():
    curve = sweep_curve(0.5, 0.5, 11)
    assert len(curve.xs) == 11
    assert curve.xs[0] == 0.0
    assert curve.xs[-1] == 0.5
    assert all(a < b for a, b in zip(curve.xs, curve.xs[1:]))
    assert curve.d_prime_values[0] is None
    assert curve.d_prime_values[-1] is None
    assert curve.d_double_prime_values[0] is None
    assert curve.d_double_prime_values[-1] is None
    assert all(v is not None for v in curve.d_prime_values[1:-1])
    # maximal d at the grid point nearest 0.25 (here, exactly 0.25)
    best = max(range(11), key=lambda i: curve.d_values[i])
    assert curve.xs[best] == pytest.approx(0.25, abs=1e-15)


def test_sweep_curve_concave_down_inside():
    curve = sweep_curve(0.6, 0.5, 101)
    inner = curve.d_double_prime_values[1:-1]
    assert all(v is not None and v < 0 for v in inner)


def test_sweep_curve_degenerate_interval():
    curve = sweep_curve(1.0, 0.4, 5)
    assert curve.xs == (0.4,)
    assert curve.d_prime_values == (None,)
    assert curve.d_double_prime_values == (None,)
    assert curve.d_values[0] == pytest.approx(
        objective_d(1.0, 0.4, 0.4), abs=1e-15)


def test_sweep_curve_validation():
    with pytest.raises(DomainError):
        sweep_curve(0.5, 0.5, 1)


def test_independence_instance_bundles_the_setup():
    inst = IndependenceInstance(0.6, 0.5)
    assert inst.interval == feasible_interval(0.6, 0.5)
    assert inst.chain_c1 == CHAIN_THROUGH_A
    assert inst.chain_c2 == CHAIN_THROUGH_B
    assert inst.problem() == independence_problem(0.6, 0.5)
    with pytest.raises(DomainError):
        IndependenceInstance(1.5, 0.5)
