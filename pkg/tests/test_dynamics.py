"""theta/phi orbits, word recovery, SL2 factorization, sweep harness."""

import math
import random
from fractions import Fraction

import pytest

from collatzq import (
    Letter,
    Mat2,
    apply_letter,
    complete_to_sl2,
    conjecture1_sweep,
    mobius_apply,
    orbit,
    orbit_to_word,
    phi_monotonicity_sweep,
    phi_step,
    reduced_fractions,
    replay_word,
    sl2_factor,
    theta_step,
    theta_sweep_full,
    verify_word_recovery,
)
from collatzq.dynamics import PHI, THETA, orbit_pq, replay_word_pq
from collatzq.kernels import available_backends
from collatzq.errors import (
    NegativeInputError,
    NotCoprimeError,
    NotFactorableError,
    NotTerminatedError,
)

F = Fraction


class TestSteps:
    def test_theta_examples(self):
        assert theta_step(F(1)) == (F(0), Letter.R)
        assert theta_step(F(2)) == (F(1, 3), Letter.R)
        assert theta_step(F(1, 9)) == (F(1, 4), Letter.S)

    def test_phi_examples(self):
        assert phi_step(F(3, 5)) == (F(3, 2), Letter.G)
        assert phi_step(F(3, 2)) == (F(1, 2), Letter.F)
        assert phi_step(F(0)) == (F(0), Letter.G)

    def test_negative_inputs(self):
        with pytest.raises(NegativeInputError):
            theta_step(F(-1, 2))
        with pytest.raises(NegativeInputError):
            phi_step(F(-1))

    def test_maps_stay_nonnegative(self):
        rng = random.Random(41)
        for _ in range(300):
            x = F(rng.randint(0, 50), rng.randint(1, 50))
            for nxt, _ in (theta_step(x), phi_step(x)):
                assert nxt >= 0
                assert nxt.denominator > 0


class TestOrbit:
    def test_orbit_two(self):
        rec = orbit(F(2), THETA, 100)
        assert [str(x) for x in rec.points] == ["2", "1/3", "1", "0"]
        assert rec.stopping_time == 3
        assert rec.terminated

    def test_orbit_five(self):
        rec = orbit(F(5), THETA, 100)
        assert [str(x) for x in rec.points] == ["5", "4/3", "1/9", "1/4", "2/3", "4", "1", "0"]
        assert rec.stopping_time == 7

    def test_orbit_phi(self):
        rec = orbit(F(3, 5), PHI, 100)
        assert [str(x) for x in rec.points] == ["3/5", "3/2", "1/2", "1", "0"]
        assert rec.heights() == (8, 5, 3, 2, 1)

    def test_zero_start(self):
        rec = orbit(F(0), THETA)
        assert rec.points == (F(0),)
        assert rec.stopping_time == 0
        assert rec.branches == ()

    def test_cap_exhaustion_is_data(self):
        rec = orbit(F(5), THETA, 2)
        assert not rec.terminated
        assert rec.stopping_time is None
        assert len(rec.branches) == 2

    def test_points_chain_exactly(self):
        rec = orbit(F(17, 7), THETA, 100)
        step = theta_step
        for x, y in zip(rec.points, rec.points[1:]):
            assert step(x)[0] == y
        assert len(rec.branches) == len(rec.points) - 1


class TestWordRecovery:
    def test_theta_word_two(self):
        word = orbit_to_word(orbit(F(2), THETA))
        assert word == [Letter.R, Letter.S, Letter.R]
        assert apply_letter(Letter.R, apply_letter(Letter.S, apply_letter(Letter.R, F(0)))) == F(2)

    def test_theta_word_one(self):
        assert orbit_to_word(orbit(F(1), THETA)) == [Letter.R]

    def test_phi_word(self):
        word = orbit_to_word(orbit(F(3, 5), PHI))
        assert word == [Letter.G, Letter.F, Letter.G, Letter.F]
        assert replay_word(word) == F(3, 5)

    def test_not_terminated(self):
        with pytest.raises(NotTerminatedError):
            orbit_to_word(orbit(F(5), THETA, 2))

    def test_replay_matches_pq_replay(self):
        for p, q in reduced_fractions(30):
            rec = orbit(F(p, q), THETA)
            word = orbit_to_word(rec)
            assert replay_word(word) == F(p, q)
            assert replay_word_pq(word) == (p, q)

    def test_recovery_sweeps(self):
        checked, failures = verify_word_recovery(60, THETA)
        assert failures == []
        assert checked == sum(1 for _ in reduced_fractions(60))
        checked, failures = verify_word_recovery(80, PHI)
        assert failures == []


class TestIntPairPaths:
    @pytest.mark.parametrize("map_name", [THETA, PHI])
    def test_agrees_with_fraction_orbit(self, map_name):
        for p, q in reduced_fractions(40):
            rec = orbit(F(p, q), map_name, 10_000)
            steps, term, branches = orbit_pq(p, q, map_name, 10_000, record=True)
            assert term == rec.terminated
            assert steps == rec.stopping_time
            assert tuple(branches) == rec.branches


class TestCompleteToSl2:
    def test_examples(self):
        assert complete_to_sl2(1, 1) == Mat2(1, 1, 0, 1)
        assert complete_to_sl2(2, 3) == Mat2(1, 2, 1, 3)
        assert complete_to_sl2(3, 2) == Mat2(2, 3, 1, 2)

    def test_not_coprime(self):
        with pytest.raises(NotCoprimeError):
            complete_to_sl2(2, 4)
        with pytest.raises(NegativeInputError):
            complete_to_sl2(0, 1)

    def test_random_pairs(self):
        rng = random.Random(42)
        for _ in range(300):
            b = rng.randint(1, 500)
            d = rng.randint(1, 500)
            if math.gcd(b, d) != 1:
                continue
            m = complete_to_sl2(b, d)
            assert m.det() == 1
            assert min(m.entries()) >= 0
            assert (m.b, m.d) == (b, d)
            assert m.a < b or (b == 1 and m.a <= 1)  # minimal shift


class TestSl2Factor:
    def test_examples(self):
        assert sl2_factor(Mat2(1, 1, 0, 1)) == [Letter.F]
        assert sl2_factor(Mat2(2, 1, 1, 1)) == [Letter.F, Letter.G]
        assert sl2_factor(Mat2.identity()) == []

    def test_errors(self):
        with pytest.raises(NotFactorableError):
            sl2_factor(Mat2(2, 1, 1, 2))  # det 3
        with pytest.raises(NotFactorableError):
            sl2_factor(Mat2(1, -1, 0, 1))

    def test_round_trip_and_uniqueness(self):
        rng = random.Random(43)
        f, g = Mat2(1, 1, 0, 1), Mat2(1, 0, 1, 1)
        for _ in range(200):
            word = [rng.choice((Letter.F, Letter.G)) for _ in range(rng.randint(0, 12))]
            m = Mat2.identity()
            for letter in word:
                m = m * (f if letter is Letter.F else g)
            recovered = sl2_factor(m)
            product = Mat2.identity()
            for letter in recovered:
                product = product * (f if letter is Letter.F else g)
            assert product == m
            assert sl2_factor(product) == recovered
            # free monoid: the factorization is the original word
            assert recovered == word or m == Mat2.identity()

    def test_completion_word_reaches_target(self):
        # the Stern-Brocot word of the completed matrix sends 0 to b/d
        rng = random.Random(44)
        for _ in range(100):
            b, d = rng.randint(1, 60), rng.randint(1, 60)
            if math.gcd(b, d) != 1:
                continue
            m = complete_to_sl2(b, d)
            word = sl2_factor(m)
            assert replay_word(word) == F(b, d)
            assert mobius_apply(m, F(0)) == F(b, d)


class TestReducedFractions:
    def test_enumeration_order_and_reducedness(self):
        pairs = list(reduced_fractions(6))
        assert pairs[0] == (0, 1)
        keys = [(p + q, p) for p, q in pairs]
        assert keys == sorted(keys)
        assert all(math.gcd(p, q) == 1 for p, q in pairs)
        assert len(set(pairs)) == len(pairs)

    def test_count_small(self):
        # heights 1..3 hold 0/1, 1/1, 1/2, 2/1
        assert len(list(reduced_fractions(3))) == 4


class TestSweeps:
    def test_sweep_height_three(self):
        rep = conjecture1_sweep(3, 100)
        assert rep.total_tested == 4
        assert rep.all_terminated
        assert rep.nonterminated == ()

    def test_sweep_height_two(self):
        rep = conjecture1_sweep(2, 100)
        assert rep.total_tested == 2
        assert rep.max_stopping_time == 1
        assert rep.argmax == 1

    def test_cap_exhaustion_reported_not_raised(self):
        rep = conjecture1_sweep(40, 3)
        assert not rep.all_terminated
        assert rep.nonterminated  # plenty of starts need more than 3 steps

    def test_rows_match_report(self):
        report, rows = theta_sweep_full(30, 1000)
        assert len(rows) == report.total_tested
        assert max(st for _, _, st, term in rows if term) == report.max_stopping_time
        by_exact = {
            (p, q): orbit_pq(p, q, THETA, 1000)[:2] for p, q, _, _ in rows
        }
        for p, q, st, term in rows:
            assert by_exact[(p, q)] == (st if term else 1000, term)

    def test_phi_sweep(self):
        rep = phi_monotonicity_sweep(10)
        assert rep.all_monotone and rep.all_within_height
        assert rep.violations == ()
        # 1/9 -> 1/8 -> ... -> 1 -> 0 is the slowest orbit at this height
        assert rep.max_stopping_time == 9
        assert rep.argmax == F(1, 9)

    def test_phi_terminates_within_height_minus_one(self):
        for p, q in reduced_fractions(60):
            steps, term, _ = orbit_pq(p, q, PHI, p + q)
            assert term and steps <= p + q - 1

    @pytest.mark.parametrize("backend", available_backends())
    def test_backends_match_exact(self, backend):
        rep = conjecture1_sweep(50, 10_000, backend=backend)
        assert rep.all_terminated
        for p, q in [(3, 47), (7, 20), (1, 49)]:
            steps, term, _ = orbit_pq(p, q, THETA, 10_000)
            assert term
        exact_max = max(
            orbit_pq(p, q, THETA, 10_000)[0] for p, q in reduced_fractions(50)
        )
        assert rep.max_stopping_time == exact_max
