import math
import random

import pytest
import scipy.special

from mrdp import (
    increments,
    indexing_function,
    make_chain,
    make_grading,
    relative_divergence,
    shannon_entropy,
    xlnx,
)
from mrdp.errors import DomainError, NormalizationError, SizeError


def random_simplex(rng, n):
    cuts = sorted(rng.random() for _ in range(n - 1))
    edges = [0.0, *cuts, 1.0]
    return [edges[k + 1] - edges[k] for k in range(n)]


def test_xlnx_values():
    assert xlnx(0.0) == 0.0
    assert xlnx(1.0) == 0.0
    assert xlnx(0.5) == pytest.approx(-0.34657359027997264, abs=1e-15)
    assert xlnx(math.e) == pytest.approx(math.e, rel=1e-15)


def test_xlnx_rejects_negative():
    with pytest.raises(DomainError):
        xlnx(-1e-12)


def test_relative_divergence_uniform_against_units():
    assert relative_divergence([0.25] * 4, [1.0] * 4) \
        == pytest.approx(math.log(4), abs=1e-15)


def test_relative_divergence_worked_values():
    got = relative_divergence([0.3, 0.3, 0.2, 0.2], [1, 1, 1, 1])
    assert got == pytest.approx(1.366158847569202, abs=1e-15)


def test_relative_divergence_zero_increments_contribute_nothing():
    got = relative_divergence([0, 0.5, 0.5, 0], [1, 1, 1, 1])
    assert got == pytest.approx(math.log(2), abs=1e-15)


def test_relative_divergence_accepts_increment_sequences():
    chain = make_chain(["a", "b", "c", "d", "e"])
    f = increments(make_grading(chain, [0, 0.3, 0.6, 0.8, 1]))
    g = increments(indexing_function(chain))
    assert relative_divergence(f, g) \
        == relative_divergence([0.3, 0.3, 0.2, 0.2], [1, 1, 1, 1])


def test_relative_divergence_length_mismatch():
    with pytest.raises(SizeError):
        relative_divergence([0.5, 0.5], [1, 1, 1])


def test_relative_divergence_domain_errors():
    with pytest.raises(DomainError, match=r"g\[1\]"):
        relative_divergence([0.5, 0.5], [1, 0])
    with pytest.raises(DomainError, match=r"g\[0\]"):
        relative_divergence([0.5, 0.5], [-1, 1])
    with pytest.raises(DomainError, match=r"f\[1\]"):
        relative_divergence([0.5, -0.5], [1, 1])


def test_negated_divergence_is_kullback_leibler():
    # against a probability vector g, -D is the KL divergence of f from g:
    # nonnegative, zero iff f == g; cross-check the sum against scipy
    rng = random.Random(101)
    for _ in range(200):
        n = rng.randint(2, 10)
        f = random_simplex(rng, n)
        g = random_simplex(rng, n)
        d = relative_divergence(f, g)
        assert d <= 1e-12
        kl = float(sum(scipy.special.rel_entr(f, g)))
        assert -d == pytest.approx(kl, abs=1e-12)
        if max(abs(a - b) for a, b in zip(f, g)) > 1e-6:
            assert d < 0
    f = random_simplex(rng, 6)
    assert relative_divergence(f, f) == pytest.approx(0.0, abs=1e-12)


def test_divergence_against_units_bounded_by_log_n():
    rng = random.Random(202)
    for _ in range(200):
        n = rng.randint(2, 10)
        p = random_simplex(rng, n)
        assert relative_divergence(p, [1.0] * n) <= math.log(n) + 1e-12
    for n in (2, 5, 9):
        uniform = [1.0 / n] * n
        assert relative_divergence(uniform, [1.0] * n) \
            == pytest.approx(math.log(n), abs=1e-12)


def test_boundary_value_is_limit_of_interior_values():
    # d at the interval end equals the limit along shrinking increments
    def d(x):
        return relative_divergence(
            [x, 0.5 - x, 0.5 - x, x], [1, 1, 1, 1])

    at_boundary = d(0.0)
    gaps = [abs(d(eps) - at_boundary) for eps in (1e-4, 1e-6, 1e-8)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-6


def test_shannon_entropy_values():
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    assert shannon_entropy([1.0, 0.0]) == 0.0
    assert shannon_entropy([0.3, 0.3, 0.2, 0.2]) \
        == pytest.approx(1.366158847569202, abs=1e-15)


def test_shannon_entropy_matches_divergence_from_units():
    rng = random.Random(303)
    for _ in range(200):
        p = random_simplex(rng, rng.randint(2, 10))
        assert shannon_entropy(p) == relative_divergence(p, [1.0] * len(p))


def test_shannon_entropy_validation():
    with pytest.raises(DomainError):
        shannon_entropy([1.1, -0.1])
    with pytest.raises(NormalizationError):
        shannon_entropy([0.5, 0.6])
    with pytest.raises(NormalizationError):
        shannon_entropy([0.5, 0.5 - 1e-8])
    # within the 1e-9 normalization tolerance
    shannon_entropy([0.5, 0.5 - 1e-10])
