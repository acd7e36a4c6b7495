"""Number-theoretic checks: p-adic valuations, Legendre sums, the floor
inequality, and factorial divisibility of multinomial coefficients.

Everything here is exact. Rationals are fractions.Fraction, big integers are
plain Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CompositionMismatch, PreconditionViolated

# Deterministic Miller-Rabin witnesses, valid for every n below 3.3e24,
# which covers the supported range (n < 2^64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_CHARACTERISTIC = 1 << 64


def is_prime(n: int) -> bool:
    """Deterministic primality for n < 2^64. Larger inputs are rejected."""
    if not isinstance(n, int):
        raise TypeError("primality is defined for integers")
    if n >= MAX_CHARACTERISTIC:
        raise ValueError("primality test supports n < 2**64 only")
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    if n in small:
        return True
    if any(n % p == 0 for p in small):
        return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """Primes <= n by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
    return [i for i, b in enumerate(sieve) if b]


@dataclass(frozen=True)
class PrimeChar:
    """Ring characteristic: 0 or a prime below 2^64."""

    value: int

    def __post_init__(self):
        if self.value != 0 and not is_prime(self.value):
            raise ValueError(f"characteristic must be 0 or prime, got {self.value}")

    def __int__(self) -> int:
        return self.value


def padic_valuation(n: int, p: int) -> int:
    """Exponent of p in n. Requires n >= 1 and p prime."""
    if not is_prime(p):
        raise PreconditionViolated("p prime", f"{p} is not prime")
    if n < 1:
        raise PreconditionViolated("n >= 1", f"valuation of {n} is undefined here")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre(x: int | Fraction, p: int) -> int:
    """Sum of floor(x / p^k) over k >= 1.

    For integer x this is the p-adic valuation of x!. The rational extension
    floors each term of the same series.
    """
    if not is_prime(p):
        raise PreconditionViolated("p prime", f"{p} is not prime")
    if x < 0:
        raise PreconditionViolated("x >= 0")
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
    else:
        num, den = int(x), 1
    total = 0
    q = p * den
    while num >= q:
        total += num // q
        q *= p
    return total


@dataclass(frozen=True)
class FloorInequalityResult:
    holds: bool
    lhs: int
    rhs: int
    rhs_terms: tuple[int, ...]


def check_floor_inequality(
    N: int | Fraction,
    M: int | Fraction,
    a: list[int | Fraction],
    p: int,
) -> FloorInequalityResult:
    """Evaluate legendre(N*M, p) >= legendre(N, p) + sum(legendre(a_i, p)).

    Preconditions, checked in this order: N > M; M >= 1; M >= a[0];
    a nonincreasing; a[-1] > 0; sum(a) <= N*M; p prime. The first violated
    clause is reported. The M >= 1 clause is load bearing: the inequality
    descends through x -> x/p and needs M >= p^0 to ground out, and for
    M < 1 it is simply false (N=27, M=3/4, p=13 gives LHS 1 < RHS 2).
    """
    N = Fraction(N)
    M = Fraction(M)
    a = [Fraction(x) for x in a]
    if not a:
        raise PreconditionViolated("a nonempty")
    if not N > M:
        raise PreconditionViolated("N > M", f"N={N} M={M}")
    if not M >= 1:
        raise PreconditionViolated("M >= 1", f"M={M}")
    if not M >= a[0]:
        raise PreconditionViolated("M >= a_1", f"M={M} a_1={a[0]}")
    for i in range(len(a) - 1):
        if a[i] < a[i + 1]:
            raise PreconditionViolated("a nonincreasing", f"a[{i}] < a[{i+1}]")
    if not a[-1] > 0:
        raise PreconditionViolated("a_m > 0", f"a_m={a[-1]}")
    if sum(a) > N * M:
        raise PreconditionViolated("sum(a) <= N*M")
    if not is_prime(p):
        raise PreconditionViolated("p prime", f"{p} is not prime")
    lhs = legendre(N * M, p)
    terms = tuple([legendre(N, p)] + [legendre(x, p) for x in a])
    rhs = sum(terms)
    return FloorInequalityResult(lhs >= rhs, lhs, rhs, terms)


def multinomial(N: int, ks: list[int]) -> int:
    """N! / (k_1! ... k_m!), exact, computed as a product of binomials."""
    if any(k < 0 for k in ks):
        raise PreconditionViolated("k_i >= 0")
    if sum(ks) != N:
        raise CompositionMismatch(f"parts sum to {sum(ks)}, need {N}")
    out = 1
    rem = N
    for k in ks:
        out *= math.comb(rem, k)
        rem -= k
    return out


@dataclass(frozen=True)
class AlaResult:
    divides: bool
    multinomial: int
    quotient: int | None
    per_prime: tuple[tuple[int, int, int], ...]  # (p, v_p(N!), v_p(multinomial))


def check_ala(N: int, M: int, ks: list[int]) -> AlaResult:
    """Does N! divide the multinomial coefficient (N*M)! / prod(k_i!)?

    Preconditions: sum(ks) == N*M; every k_i < N; N > M >= max(ks).
    The M >= max(ks) clause is load bearing; see ala_counterexample_scan.
    Divisibility is established two independent ways (big-integer division
    and per-prime Legendre valuations) and the two must agree.
    """
    if not ks:
        raise PreconditionViolated("ks nonempty")
    if any(k < 0 for k in ks):
        raise PreconditionViolated("k_i >= 0")
    if sum(ks) != N * M:
        raise PreconditionViolated("sum(ks) == N*M",
                                   f"sum={sum(ks)} N*M={N * M}")
    if any(k >= N for k in ks):
        raise PreconditionViolated("k_i < N")
    if not N > M:
        raise PreconditionViolated("N > M")
    if not M >= max(ks):
        raise PreconditionViolated("M >= max(ks)")
    coeff = multinomial(N * M, ks)
    fact = math.factorial(N)
    divides_big = coeff % fact == 0
    per_prime = []
    divides_val = True
    for p in primes_up_to(N):
        v_fact = legendre(N, p)
        v_coeff = legendre(N * M, p) - sum(legendre(k, p) for k in ks if k)
        per_prime.append((p, v_fact, v_coeff))
        if v_coeff < v_fact:
            divides_val = False
    if divides_big != divides_val:
        raise AssertionError("divisibility oracles disagree; this is a bug")
    return AlaResult(divides_big, coeff, coeff // fact if divides_big else None,
                     tuple(per_prime))


def ala_counterexample_scan(max_N: int = 5) -> list[tuple[int, int, tuple[int, ...]]]:
    """Search the region M < max(ks) that check_ala's precondition excludes.

    Returns (N, M, ks) triples where N! fails to divide the multinomial,
    demonstrating why the M >= max(ks) clause cannot be dropped. Purely
    informational; nothing here is asserted elsewhere.
    """
    failures = []
    for N in range(2, max_N + 1):
        for M in range(1, N):
            total = N * M
            for ks in _partitions(total, N - 1):
                if max(ks) <= M:
                    continue  # inside the guaranteed region
                coeff = multinomial(total, list(ks))
                if coeff % math.factorial(N) != 0:
                    failures.append((N, M, ks))
    return failures


def _partitions(total: int, max_part: int):
    """Nonincreasing integer tuples with the given sum and part bound."""

    def rec(rem: int, cap: int, prefix: tuple[int, ...]):
        if rem == 0:
            yield prefix
            return
        for part in range(min(cap, rem), 0, -1):
            yield from rec(rem - part, part, prefix + (part,))

    yield from rec(total, max_part, ())
