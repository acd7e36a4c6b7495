"""Number-theory layer against independent oracles."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftkit.arith import (AlaResult, ala_counterexample_scan, check_ala,
                          check_floor_inequality, is_prime, legendre,
                          multinomial, padic_valuation, primes_up_to)
from sftkit.errors import CompositionMismatch, PreconditionViolated


def factorial_valuation(n: int, p: int) -> int:
    # oracle: factor every k <= n directly, no Legendre series involved
    total = 0
    for k in range(2, n + 1):
        while k % p == 0:
            total += 1
            k //= p
    return total


def series_oracle(x: Fraction, p: int) -> int:
    total = 0
    q = p
    while x / q >= 1:
        total += math.floor(x / q)
        q *= p
    return total


class TestLegendre:
    def test_integer_matches_factorial_factorization(self):
        for p in (2, 3, 5, 7, 11):
            for n in (0, 1, 2, 10, 31, 32, 100, 243, 1000):
                assert legendre(n, p) == factorial_valuation(n, p)

    def test_rational_matches_direct_series(self):
        for p in (2, 3, 5):
            for num in range(0, 60):
                for den in (1, 2, 3, 4, 7):
                    x = Fraction(num, den)
                    assert legendre(x, p) == series_oracle(x, p)

    def test_known_values(self):
        assert legendre(10, 2) == 8
        assert legendre(100, 5) == 24
        assert legendre(Fraction(17, 2), 2) == 7
        assert legendre(Fraction(1, 2), 2) == 0

    def test_rejects_composite_p(self):
        with pytest.raises(PreconditionViolated):
            legendre(10, 4)

    def test_rejects_negative(self):
        with pytest.raises(PreconditionViolated):
            legendre(-1, 2)


class TestPadic:
    def test_against_divisibility(self):
        for p in (2, 3, 7):
            for n in range(1, 500):
                v = padic_valuation(n, p)
                assert n % p**v == 0
                assert n % p ** (v + 1) != 0

    def test_requires_positive(self):
        with pytest.raises(PreconditionViolated):
            padic_valuation(0, 2)


class TestPrimes:
    def test_sieve_vs_miller_rabin(self):
        sieve = set(primes_up_to(5000))
        for n in range(5000):
            assert is_prime(n) == (n in sieve)

    def test_carmichael_numbers_rejected(self):
        for n in (561, 1105, 1729, 2465, 6601):
            assert not is_prime(n)

    def test_large(self):
        assert is_prime(2**61 - 1)
        assert not is_prime(2**61 + 1)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            is_prime(2**64)


# admissible (N, M, a, p) tuples for the floor inequality
@st.composite
def admissible_tuples(draw):
    N = draw(st.integers(min_value=2, max_value=30))
    M = draw(st.integers(min_value=1, max_value=N - 1))
    m = draw(st.integers(min_value=1, max_value=6))
    parts = sorted(
        (draw(st.integers(min_value=1, max_value=M)) for _ in range(m)),
        reverse=True)
    total_cap = N * M
    while sum(parts) > total_cap:
        parts.pop()
    if not parts:
        parts = [1]
    p = draw(st.sampled_from((2, 3, 5, 7, 11, 13)))
    return N, M, parts, p


class TestFloorInequality:
    @settings(max_examples=300, deadline=None)
    @given(admissible_tuples())
    def test_holds_on_admissible(self, t):
        N, M, a, p = t
        res = check_floor_inequality(N, M, a, p)
        assert res.holds
        assert res.lhs == legendre(N * M, p)
        assert res.rhs == sum(res.rhs_terms)

    def test_exhaustive_small(self):
        # every admissible integer tuple with N <= 8 and at most 3 parts
        checked = 0
        for N in range(2, 9):
            for M in range(1, N):
                for a1 in range(1, M + 1):
                    for a2 in range(0, a1 + 1):
                        for a3 in range(0, (a2 if a2 else 1)):
                            a = [x for x in (a1, a2, a3) if x]
                            if sum(a) > N * M:
                                continue
                            for p in (2, 3, 5):
                                assert check_floor_inequality(N, M, a, p).holds
                                checked += 1
        assert checked > 500

    def test_rational_inputs(self):
        res = check_floor_inequality(
            Fraction(9, 2), Fraction(7, 2), [Fraction(5, 2), 1], 2)
        assert res.holds

    def test_m_below_one_is_rejected_not_probed(self):
        # without the M >= 1 clause the inequality is false: with
        # N=27, M=3/4, p=13 the left side is f(81/4) = 1 but the right
        # side already carries f(27) = 2
        lhs = legendre(Fraction(81, 4), 13)
        rhs = legendre(27, 13)
        assert lhs == 1 and rhs == 2  # genuine violation, hence the clause
        with pytest.raises(PreconditionViolated) as e:
            check_floor_inequality(27, Fraction(3, 4), [Fraction(1, 8)], 13)
        assert e.value.clause == "M >= 1"

    def test_precondition_order(self):
        with pytest.raises(PreconditionViolated) as e:
            check_floor_inequality(3, 3, [1], 2)
        assert e.value.clause == "N > M"
        with pytest.raises(PreconditionViolated) as e:
            check_floor_inequality(5, 2, [3], 2)
        assert e.value.clause == "M >= a_1"
        with pytest.raises(PreconditionViolated) as e:
            check_floor_inequality(5, 3, [1, 2], 2)
        assert e.value.clause == "a nonincreasing"
        with pytest.raises(PreconditionViolated) as e:
            check_floor_inequality(5, 3, [1, 0], 2)
        assert e.value.clause == "a_m > 0"
        with pytest.raises(PreconditionViolated) as e:
            check_floor_inequality(5, 3, [3, 3, 3, 3, 3, 3], 2)
        assert e.value.clause == "sum(a) <= N*M"
        with pytest.raises(PreconditionViolated) as e:
            check_floor_inequality(5, 3, [2], 9)
        assert e.value.clause == "p prime"


class TestMultinomial:
    def test_against_factorials(self):
        for N, ks in [(6, [2, 2, 2]), (10, [4, 3, 2, 1]), (1, [1]),
                      (12, [12]), (9, [3, 3, 3])]:
            expect = math.factorial(N)
            for k in ks:
                expect //= math.factorial(k)
            assert multinomial(N, ks) == expect

    def test_composition_mismatch(self):
        with pytest.raises(CompositionMismatch):
            multinomial(5, [2, 2])


class TestAla:
    def test_divides_in_guaranteed_region(self):
        res = check_ala(4, 3, [3, 3, 3, 3])
        assert isinstance(res, AlaResult)
        assert res.divides
        assert res.quotient * math.factorial(4) == res.multinomial
        # per-prime valuations must each clear the factorial's
        for _, v_fact, v_coeff in res.per_prime:
            assert v_coeff >= v_fact

    def test_failures_only_outside_precondition(self):
        for N, M, ks in ala_counterexample_scan(5):
            assert max(ks) > M  # all in the excluded region
            assert multinomial(N * M, list(ks)) % math.factorial(N) != 0

    def test_scan_is_nonempty(self):
        assert (3, 1, (2, 1)) in ala_counterexample_scan(3)

    def test_precondition_enforced(self):
        with pytest.raises(PreconditionViolated):
            check_ala(3, 1, [2, 1])  # max part exceeds M
        with pytest.raises(PreconditionViolated):
            check_ala(3, 2, [3, 3])  # a part reaches N
