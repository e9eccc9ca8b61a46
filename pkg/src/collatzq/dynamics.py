"""Piecewise linear-fractional dynamics on nonnegative rationals.

Two maps, each inverting a pair of generators:

  theta: (x-1)/3 for x >= 1, 2x/(1-x) for x < 1   (inverts r = 3x+1, s = x/(x+2))
  phi:   x-1     for x >= 1, x/(1-x)  for x < 1   (inverts f = x+1,  g = x/(x+1))

The branch taken at each orbit step names the generator that undoes it, so a
terminated orbit x_0 -> ... -> 0 recovers x_0 = w_1(w_2(...w_n(0))) where the
word w is the branch list in orbit order (the first step's letter applied
last).  phi strictly decreases p+q of reduced p/q until reaching 0, so its
orbits provably terminate; for theta termination is the open question the
sweep harness probes.

Orbits over `Fraction` are the reference path.  Sweeps run on raw reduced
(p, q) integer pairs: one step changes gcd structure only by a factor of 3
(theta, upper branch) or 2 (lower branch), so reduction is two divisibility
tests, and int64 kernels (see `kernels`) handle the bulk with any overflowing
row redone here in big-int arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import kernels
from .core import Mat2
from .errors import (
    MonotonicityError,
    NegativeInputError,
    NotCoprimeError,
    NotFactorableError,
    NotTerminatedError,
)

THETA = "theta"
PHI = "phi"

DEFAULT_STEP_CAP = 10_000


class Letter(str, Enum):
    """Branch letters: R/S for theta orbits, F/G for phi orbits and SL2 words."""

    R = "R"
    S = "S"
    F = "F"
    G = "G"


def theta_step(x: Fraction) -> tuple[Fraction, Letter]:
    """One theta step with the branch letter of the inverted generator."""
    if x < 0:
        raise NegativeInputError(f"theta is defined on x >= 0, got {x}")
    if x >= 1:
        return (x - 1) / 3, Letter.R
    return 2 * x / (1 - x), Letter.S


def phi_step(x: Fraction) -> tuple[Fraction, Letter]:
    """One phi step with the branch letter of the inverted generator."""
    if x < 0:
        raise NegativeInputError(f"phi is defined on x >= 0, got {x}")
    if x >= 1:
        return x - 1, Letter.F
    return x / (1 - x), Letter.G


def apply_letter(letter: Letter, x: Fraction) -> Fraction:
    """Forward generator maps: r, s (theta alphabet) and f, g (phi alphabet)."""
    if letter is Letter.R:
        return 3 * x + 1
    if letter is Letter.S:
        return x / (x + 2)
    if letter is Letter.F:
        return x + 1
    return x / (x + 1)


@dataclass(frozen=True)
class OrbitRecord:
    map_name: str
    points: tuple[Fraction, ...]  # starting value first
    branches: tuple[Letter, ...]  # one per step
    terminated: bool  # reached 0
    stopping_time: int | None  # index of the first 0 when terminated

    def heights(self) -> tuple[int, ...]:
        """p + q of each reduced orbit point."""
        return tuple(x.numerator + x.denominator for x in self.points)


def orbit(x: Fraction, map_name: str = THETA, step_cap: int = DEFAULT_STEP_CAP) -> OrbitRecord:
    """Iterate until 0 or the cap, recording every point and branch.

    Cap exhaustion is data (terminated=False), not an error.  For phi the
    non-increase of p+q is asserted at every step.
    """
    if map_name not in (THETA, PHI):
        raise ValueError(f"unknown map {map_name!r}")
    if step_cap < 0:
        raise ValueError("step_cap must be >= 0")
    x = Fraction(x)
    step = theta_step if map_name == THETA else phi_step
    points = [x]
    branches: list[Letter] = []
    while points[-1] != 0 and len(branches) < step_cap:
        nxt, letter = step(points[-1])
        if map_name == PHI:
            prev = points[-1]
            if nxt.numerator + nxt.denominator > prev.numerator + prev.denominator:
                raise MonotonicityError(f"p+q increased at {prev} -> {nxt}")
        points.append(nxt)
        branches.append(letter)
    terminated = points[-1] == 0
    return OrbitRecord(
        map_name=map_name,
        points=tuple(points),
        branches=tuple(branches),
        terminated=terminated,
        stopping_time=len(points) - 1 if terminated else None,
    )


def orbit_to_word(rec: OrbitRecord) -> list[Letter]:
    """Generator word reaching the start from 0; replay is verified exactly.

    The word is the branch list in orbit order: the first step's letter is
    the outermost map, so x_0 = w_1(w_2(...w_n(0))).
    """
    if not rec.terminated:
        raise NotTerminatedError("orbit did not reach 0; no word to recover")
    word = list(rec.branches)
    if replay_word(word) != rec.points[0]:
        raise AssertionError(f"word replay failed for {rec.points[0]}")  # pragma: no cover
    return word


def replay_word(word: list[Letter] | tuple[Letter, ...]) -> Fraction:
    """Apply w_1 o w_2 o ... o w_n to 0 (last letter applied first)."""
    x = Fraction(0)
    for letter in reversed(word):
        x = apply_letter(letter, x)
    return x


# ---------------------------------------------------------------------------
# Exact integer-pair orbit paths (big ints, no Fraction overhead)
# ---------------------------------------------------------------------------


def theta_step_pq(p: int, q: int) -> tuple[int, int, Letter]:
    """One theta step on reduced p/q >= 0; stays reduced.

    Upper branch (p-q)/(3q): gcd(p-q, 3q) = gcd(p-q, 3).  Lower branch
    2p/(q-p): gcd(2p, q-p) = gcd(2, q-p).
    """
    if p >= q:
        p2 = p - q
        if p2 == 0:
            return 0, 1, Letter.R
        if p2 % 3 == 0:
            return p2 // 3, q, Letter.R
        return p2, 3 * q, Letter.R
    q2 = q - p
    if p == 0:
        return 0, 1, Letter.S
    if q2 % 2 == 0:
        return p, q2 // 2, Letter.S
    return 2 * p, q2, Letter.S


def phi_step_pq(p: int, q: int) -> tuple[int, int, Letter]:
    """One phi step on reduced p/q >= 0; stays reduced with no divisions."""
    if p >= q:
        return p - q, q, Letter.F
    return p, q - p, Letter.G


def orbit_pq(
    p: int, q: int, map_name: str, step_cap: int, record: bool = False
) -> tuple[int, bool, list[Letter] | None]:
    """(steps, terminated, branches?) for reduced p/q in exact integer arithmetic."""
    step = theta_step_pq if map_name == THETA else phi_step_pq
    branches: list[Letter] | None = [] if record else None
    steps = 0
    while p != 0 and steps < step_cap:
        p, q, letter = step(p, q)
        if branches is not None:
            branches.append(letter)
        steps += 1
    return steps, p == 0, branches


def replay_word_pq(word: list[Letter]) -> tuple[int, int]:
    """Replay a recovered word from 0, exactly, as a reduced pair."""
    p, q = 0, 1
    for letter in reversed(word):
        if letter is Letter.R:  # r: (3p + q)/q, reducible only by 3
            p = 3 * p + q
            if q % 3 == 0:
                p, q = p // 3, q // 3
        elif letter is Letter.S:  # s: p/(p + 2q), reducible only by 2
            q = 1 if p == 0 else p + 2 * q
            if p and p % 2 == 0:
                p, q = p // 2, q // 2
        elif letter is Letter.F:  # f: (p + q)/q, already reduced
            p = p + q
        else:  # g: p/(p + q), already reduced
            q = 1 if p == 0 else p + q
    return p, q


# ---------------------------------------------------------------------------
# SL2 completion and Stern-Brocot factorization
# ---------------------------------------------------------------------------

F_MAT = Mat2(1, 1, 0, 1)
G_MAT = Mat2(1, 0, 1, 1)


def complete_to_sl2(b: int, d: int) -> Mat2:
    """Minimal nonnegative [a, b; c, d] with a*d - b*c = 1 for coprime b, d >= 1."""
    if b < 1 or d < 1:
        raise NegativeInputError(f"need b, d >= 1, got ({b}, {d})")
    if math.gcd(b, d) != 1:
        raise NotCoprimeError(f"gcd({b}, {d}) != 1")
    a = pow(d, -1, b) if b > 1 else 0
    c = (a * d - 1) // b
    if c < 0:  # only when b = 1 forces a = 0; one shift restores nonnegativity
        a += b
        c += d
    return Mat2(a, b, c, d)


def sl2_factor(m: Mat2) -> list[Letter]:
    """Unique F/G word multiplying out to a nonnegative determinant-one matrix.

    Greedy subtractive Euclid: peel F = [1,1;0,1] while the top row dominates,
    else G = [1,0;1,1].  Entry sums strictly decrease, so this terminates.
    """
    if min(m.entries()) < 0 or m.det() != 1:
        raise NotFactorableError(f"{m} is not a nonnegative SL2 matrix")
    word: list[Letter] = []
    a, b, c, d = m.entries()
    while (a, b, c, d) != (1, 0, 0, 1):
        if a >= c and b >= d:
            word.append(Letter.F)
            a, b = a - c, b - d
        elif c >= a and d >= b:
            word.append(Letter.G)
            c, d = c - a, d - b
        else:  # cannot happen for nonnegative det-1 input
            raise NotFactorableError(f"{m} stuck at [{a},{b};{c},{d}]")
    return word


def mobius_apply(m: Mat2, x: Fraction) -> Fraction:
    """(a*x + b)/(c*x + d)."""
    return (m.a * x + m.b) / (m.c * x + m.d)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def reduced_fractions(height_bound: int) -> Iterator[tuple[int, int]]:
    """Reduced (p, q), p >= 0, q >= 1, p + q <= bound, ordered by (p+q, p).

    0/1 is the unique p = 0 member, so x = 0 is tested exactly once.
    """
    for s in range(1, height_bound + 1):
        for p in range(0, s):
            q = s - p
            if math.gcd(p, q) == 1:
                yield p, q


@dataclass(frozen=True)
class SweepReport:
    height_bound: int
    step_cap: int
    total_tested: int
    all_terminated: bool
    max_stopping_time: int
    argmax: Fraction
    nonterminated: tuple[Fraction, ...]


@dataclass(frozen=True)
class PhiSweepReport:
    height_bound: int
    total_tested: int
    all_monotone: bool
    all_within_height: bool  # every orbit reached 0 in at most p+q steps
    max_stopping_time: int
    argmax: Fraction
    violations: tuple[Fraction, ...]


def _theta_sweep_arrays(
    height_bound: int, step_cap: int, backend: str | None = None
) -> tuple[list[tuple[int, int]], list[int], list[bool]]:
    """Per-start (steps, terminated) for all reduced p/q up to the height.

    The int64 kernel does the bulk; rows it flags as overflowing are redone
    exactly, so results never depend on the kernel's word size.
    """
    starts = list(reduced_fractions(height_bound))
    ps = np.array([p for p, _ in starts], dtype=np.int64)
    qs = np.array([q for _, q in starts], dtype=np.int64)
    steps_arr, flags = kernels.theta_sweep(ps, qs, step_cap, backend=backend)
    steps: list[int] = steps_arr.tolist()
    flag_list: list[int] = flags.tolist()
    terminated = [f == kernels.FLAG_DONE for f in flag_list]
    for i, f in enumerate(flag_list):
        if f == kernels.FLAG_OVERFLOW:  # exact redo in big-int arithmetic
            st, term, _ = orbit_pq(starts[i][0], starts[i][1], THETA, step_cap)
            steps[i] = st
            terminated[i] = term
    return starts, steps, terminated


def theta_sweep_full(
    height_bound: int, step_cap: int = DEFAULT_STEP_CAP, backend: str | None = None
) -> tuple[SweepReport, list[tuple[int, int, int, bool]]]:
    """Report plus per-start (p, q, stopping_time, terminated) rows, one pass.

    A nonterminated start (under the cap) is a candidate counterexample and
    lands in the report rather than raising; its row carries stopping_time -1.
    """
    if height_bound < 2 or step_cap < 1:
        raise ValueError("need height_bound >= 2 and step_cap >= 1")
    starts, steps, terminated = _theta_sweep_arrays(height_bound, step_cap, backend)
    rows: list[tuple[int, int, int, bool]] = []
    max_stop = -1
    argmax = Fraction(0)
    nonterminated: list[Fraction] = []
    for (p, q), st, term in zip(starts, steps, terminated):
        rows.append((p, q, st if term else -1, term))
        if not term:
            nonterminated.append(Fraction(p, q))
        elif st > max_stop:
            max_stop = st
            argmax = Fraction(p, q)
    report = SweepReport(
        height_bound=height_bound,
        step_cap=step_cap,
        total_tested=len(starts),
        all_terminated=not nonterminated,
        max_stopping_time=max_stop,
        argmax=argmax,
        nonterminated=tuple(nonterminated),
    )
    return report, rows


def conjecture1_sweep(
    height_bound: int, step_cap: int = DEFAULT_STEP_CAP, backend: str | None = None
) -> SweepReport:
    """theta-orbit census over every reduced p/q with p + q <= height_bound."""
    return theta_sweep_full(height_bound, step_cap, backend)[0]


def phi_monotonicity_sweep(height_bound: int, backend: str | None = None) -> PhiSweepReport:
    """Check non-increase of p+q and termination within p+q steps for phi."""
    if height_bound < 2:
        raise ValueError("need height_bound >= 2")
    starts = list(reduced_fractions(height_bound))
    ps = np.array([p for p, _ in starts], dtype=np.int64)
    qs = np.array([q for _, q in starts], dtype=np.int64)
    steps_arr, flags = kernels.phi_sweep(ps, qs, backend=backend)
    violations: list[Fraction] = []
    max_stop = -1
    argmax = Fraction(0)
    for (p, q), st, f in zip(starts, steps_arr.tolist(), flags.tolist()):
        if f != kernels.FLAG_DONE:
            violations.append(Fraction(p, q))
        elif st > max_stop:
            max_stop = st
            argmax = Fraction(p, q)
    return PhiSweepReport(
        height_bound=height_bound,
        total_tested=len(starts),
        all_monotone=not violations,
        all_within_height=not violations,
        max_stopping_time=max_stop,
        argmax=argmax,
        violations=tuple(violations),
    )


def verify_word_recovery(
    height_bound: int, map_name: str, step_cap: int = DEFAULT_STEP_CAP
) -> tuple[int, list[Fraction]]:
    """Replay the recovered word of every terminated orbit; exact comparison.

    Returns (orbits checked, starts whose replay failed or that never
    terminated under the cap).  Runs on integer pairs for speed; arithmetic
    is still exact.
    """
    checked = 0
    failures: list[Fraction] = []
    for p, q in reduced_fractions(height_bound):
        _, term, branches = orbit_pq(p, q, map_name, step_cap, record=True)
        if not term:
            failures.append(Fraction(p, q))
            continue
        checked += 1
        assert branches is not None
        if replay_word_pq(branches) != (p, q):
            failures.append(Fraction(p, q))
    return checked, failures
