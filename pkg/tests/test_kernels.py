"""int64 kernels: backend agreement, flags, and the big-int escape hatch."""

import numpy as np
import pytest

from collatzq import reduced_fractions
from collatzq.dynamics import PHI, THETA, orbit_pq
from collatzq.kernels import (
    FLAG_CAP,
    FLAG_DONE,
    FLAG_OVERFLOW,
    INT64_GUARD,
    available_backends,
    default_backend,
    phi_sweep,
    theta_sweep,
)

BACKENDS = available_backends()


def start_arrays(height):
    pairs = list(reduced_fractions(height))
    ps = np.array([p for p, _ in pairs], dtype=np.int64)
    qs = np.array([q for _, q in pairs], dtype=np.int64)
    return pairs, ps, qs


def test_default_backend_is_available():
    assert default_backend() in BACKENDS
    assert "numpy" in BACKENDS


@pytest.mark.parametrize("backend", BACKENDS)
def test_theta_matches_exact_orbits(backend):
    pairs, ps, qs = start_arrays(80)
    steps, flags = theta_sweep(ps, qs, 10_000, backend=backend)
    assert set(flags.tolist()) == {FLAG_DONE}
    for (p, q), st in zip(pairs, steps.tolist()):
        assert orbit_pq(p, q, THETA, 10_000)[0] == st


@pytest.mark.parametrize("backend", BACKENDS)
def test_phi_matches_exact_orbits(backend):
    pairs, ps, qs = start_arrays(150)
    steps, flags = phi_sweep(ps, qs, backend=backend)
    assert set(flags.tolist()) == {FLAG_DONE}
    for (p, q), st in zip(pairs, steps.tolist()):
        exact_steps, term, _ = orbit_pq(p, q, PHI, p + q + 1)
        assert term and exact_steps == st


@pytest.mark.skipif(len(BACKENDS) < 2, reason="numba unavailable")
def test_backends_bitwise_identical():
    _, ps, qs = start_arrays(200)
    s1, f1 = theta_sweep(ps, qs, 10_000, backend="numba")
    s2, f2 = theta_sweep(ps, qs, 10_000, backend="numpy")
    assert np.array_equal(s1, s2) and np.array_equal(f1, f2)
    s1, f1 = phi_sweep(ps, qs, backend="numba")
    s2, f2 = phi_sweep(ps, qs, backend="numpy")
    assert np.array_equal(s1, s2) and np.array_equal(f1, f2)


@pytest.mark.parametrize("backend", BACKENDS)
def test_cap_flag(backend):
    ps = np.array([5], dtype=np.int64)
    qs = np.array([1], dtype=np.int64)
    steps, flags = theta_sweep(ps, qs, 2, backend=backend)
    assert flags[0] == FLAG_CAP
    assert steps[0] == 2


@pytest.mark.parametrize("backend", BACKENDS)
def test_overflow_flag_and_bigint_redo(backend):
    # q beyond the guard must be flagged, never wrapped
    big = INT64_GUARD + 1
    ps = np.array([1, 2], dtype=np.int64)
    qs = np.array([big, 1], dtype=np.int64)
    steps, flags = theta_sweep(ps, qs, 100, backend=backend)
    assert flags[0] == FLAG_OVERFLOW and steps[0] == 0
    assert flags[1] == FLAG_DONE
    # the exact path handles the same start without any size limit
    st, term, _ = orbit_pq(1, big, THETA, 10_000)
    assert term and st > 0


@pytest.mark.parametrize("backend", BACKENDS)
def test_zero_start(backend):
    ps = np.array([0], dtype=np.int64)
    qs = np.array([1], dtype=np.int64)
    steps, flags = theta_sweep(ps, qs, 10, backend=backend)
    assert steps[0] == 0 and flags[0] == FLAG_DONE
    steps, flags = phi_sweep(ps, qs, backend=backend)
    assert steps[0] == 0 and flags[0] == FLAG_DONE
