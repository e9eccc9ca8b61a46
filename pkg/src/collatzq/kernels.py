"""int64 sweep kernels: numba-jitted fast path with a pure-numpy fallback.

The sweep inner loops run on raw reduced (p, q) pairs in int64.  The numba
path is a per-row while loop; the numpy path advances all active rows one
step per wave with masked arithmetic.  Both implement the identical step
rule as `dynamics.theta_step_pq` / `dynamics.phi_step_pq` and return the
same arrays, so the backend never changes results.

Exactness: a theta orbit can grow, so any row whose values approach the
int64 range is flagged FLAG_OVERFLOW instead of stepped; callers redo those
rows in big-int arithmetic.  phi rows never grow (p+q is non-increasing).

Backend selection: the COLLATZQ_KERNELS environment variable ("numba" or
"numpy") pins the default; unset, numba is used when importable.  Every
entry point also takes an explicit ``backend=`` override.
"""

from __future__ import annotations

import os

import numpy as np

FLAG_DONE = 0  # reached 0
FLAG_CAP = 1  # step cap exhausted without terminating
FLAG_OVERFLOW = 2  # values left the int64-safe range; redo exactly
FLAG_VIOLATION = 3  # phi: exceeded its provable step bound (never expected)

# 3*q and 2*p must stay below 2^63; one shared conservative guard
INT64_GUARD = (2**63 - 1) // 3

_ENV_VAR = "COLLATZQ_KERNELS"
_env_choice = os.environ.get(_ENV_VAR, "").strip().lower()

_NUMBA_OK = False
if _env_choice != "numpy":
    try:
        from numba import njit

        _NUMBA_OK = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        if _env_choice == "numba":
            raise


def default_backend() -> str:
    return "numba" if _NUMBA_OK else "numpy"


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if _NUMBA_OK else ("numpy",)


def _theta_sweep_py(ps, qs, cap):
    n = ps.shape[0]
    steps = np.zeros(n, dtype=np.int64)
    flags = np.zeros(n, dtype=np.int64)
    for idx in range(n):
        p = ps[idx]
        q = qs[idx]
        st = 0
        while p != 0:
            if st >= cap:
                flags[idx] = 1  # FLAG_CAP
                break
            if p > INT64_GUARD or q > INT64_GUARD:
                flags[idx] = 2  # FLAG_OVERFLOW
                break
            if p >= q:
                p2 = p - q
                if p2 == 0:
                    p, q = 0, 1
                elif p2 % 3 == 0:
                    p = p2 // 3
                else:
                    p, q = p2, 3 * q
            else:
                q2 = q - p
                if q2 % 2 == 0:
                    q = q2 // 2
                else:
                    p, q = 2 * p, q2
            st += 1
        steps[idx] = st
    return steps, flags


def _phi_sweep_py(ps, qs):
    n = ps.shape[0]
    steps = np.zeros(n, dtype=np.int64)
    flags = np.zeros(n, dtype=np.int64)
    for idx in range(n):
        p = ps[idx]
        q = qs[idx]
        bound = p + q
        st = 0
        while p != 0:
            if st >= bound:
                flags[idx] = 3  # FLAG_VIOLATION: provably impossible
                break
            s_old = p + q
            if p >= q:
                p -= q
            else:
                q -= p
            if p + q > s_old:
                flags[idx] = 3
                break
            st += 1
        steps[idx] = st
    return steps, flags


if _NUMBA_OK:
    _theta_sweep_numba = njit(cache=True)(_theta_sweep_py)
    _phi_sweep_numba = njit(cache=True)(_phi_sweep_py)


def _theta_sweep_numpy(ps: np.ndarray, qs: np.ndarray, cap: int):
    """Wave-stepped vectorized theta sweep; identical semantics to the loop."""
    n = ps.shape[0]
    p = ps.astype(np.int64, copy=True)
    q = qs.astype(np.int64, copy=True)
    steps = np.zeros(n, dtype=np.int64)
    flags = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    while active.size:
        pa = p[active]
        done = pa == 0
        if done.any():
            active = active[~done]
            if not active.size:
                break
            pa = p[active]
        qa = q[active]
        capped = steps[active] >= cap
        if capped.any():
            flags[active[capped]] = FLAG_CAP
            active = active[~capped]
            if not active.size:
                break
            pa, qa = p[active], q[active]
        over = (pa > INT64_GUARD) | (qa > INT64_GUARD)
        if over.any():
            flags[active[over]] = FLAG_OVERFLOW
            active = active[~over]
            if not active.size:
                break
            pa, qa = p[active], q[active]
        ge = pa >= qa
        # guard above makes 3*qa and 2*pa exact for every remaining row
        p2 = np.where(ge, pa - qa, 2 * pa)
        q2 = np.where(ge, 3 * qa, qa - pa)
        red3 = ge & (p2 % 3 == 0)
        p2 = np.where(red3, p2 // 3, p2)
        q2 = np.where(red3, qa, q2)
        zero = ge & (p2 == 0)
        q2 = np.where(zero, 1, q2)
        red2 = ~ge & (q2 % 2 == 0)
        q2 = np.where(red2, q2 // 2, q2)
        p2 = np.where(red2, pa, p2)
        p[active] = p2
        q[active] = q2
        steps[active] += 1
    return steps, flags


def _phi_sweep_numpy(ps: np.ndarray, qs: np.ndarray):
    n = ps.shape[0]
    p = ps.astype(np.int64, copy=True)
    q = qs.astype(np.int64, copy=True)
    bounds = p + q
    steps = np.zeros(n, dtype=np.int64)
    flags = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    while active.size:
        pa = p[active]
        done = pa == 0
        if done.any():
            active = active[~done]
            if not active.size:
                break
            pa = p[active]
        qa = q[active]
        exceeded = steps[active] >= bounds[active]
        if exceeded.any():
            flags[active[exceeded]] = FLAG_VIOLATION
            active = active[~exceeded]
            if not active.size:
                break
            pa, qa = p[active], q[active]
        s_old = pa + qa
        ge = pa >= qa
        p2 = np.where(ge, pa - qa, pa)
        q2 = np.where(ge, qa, qa - pa)
        grew = p2 + q2 > s_old
        if grew.any():  # impossible in exact arithmetic; keep the check honest
            flags[active[grew]] = FLAG_VIOLATION
        p[active] = p2
        q[active] = q2
        steps[active] += 1
        if grew.any():
            active = active[~grew]
    return steps, flags


def _resolve(backend: str | None) -> str:
    b = backend or default_backend()
    if b == "numba" and not _NUMBA_OK:
        raise RuntimeError("numba backend requested but numba is unavailable")
    if b not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {b!r}")
    return b


def theta_sweep(
    ps: np.ndarray, qs: np.ndarray, cap: int, backend: str | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row theta stopping times.  Returns (steps, flags) int64 arrays."""
    ps = np.ascontiguousarray(ps, dtype=np.int64)
    qs = np.ascontiguousarray(qs, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _theta_sweep_numba(ps, qs, cap)
    return _theta_sweep_numpy(ps, qs, cap)


def phi_sweep(
    ps: np.ndarray, qs: np.ndarray, backend: str | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row phi stopping times with the monotonicity/termination check."""
    ps = np.ascontiguousarray(ps, dtype=np.int64)
    qs = np.ascontiguousarray(qs, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _phi_sweep_numba(ps, qs)
    return _phi_sweep_numpy(ps, qs)
