"""Exact element-level arithmetic for the model families where coefficients
matter.

Three coefficient regimes:
  * prime characteristic over a monoid (coefficients mod p, killed monomials
    vanish),
  * the rank-1 model with 2-adically local integer coefficients, where the
    scalar 2 and the weight-1 monomial are the same element, so normalization
    folds the coefficient's 2-valuation into the exponent,
  * the integer-coefficient model Z + 2xZ[x] (its own membership predicates).

Elements are immutable term maps with a canonical term order, so equality is
structural. Every ring also handles the degree-1 polynomial extension by one
extra variable t, tracked as a plain integer degree on each term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .budget import SearchContext
from .errors import (DegreeBudgetExceeded, PreconditionViolated,
                     UnsupportedIdeal)
from .exponents import ExponentVector, MonoidPresentation
from .ideals import MonomialIdeal, ideal_member


def _v2_int(n: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def _v2_frac(q: Fraction) -> int:
    return _v2_int(q.numerator) - _v2_int(q.denominator)


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class CharPMonoidRing:
    """Monoid algebra over the prime field F_p, truncated by the monoid's
    zero-monomial predicate."""

    monoid: MonoidPresentation
    p: int

    def normalize(self, terms, ctx: Optional[SearchContext] = None):
        acc: dict[tuple[ExponentVector, int], int] = {}
        for (e, td), c in terms:
            c = c % self.p
            if c == 0:
                continue
            k = (e, td)
            acc[k] = (acc.get(k, 0) + c) % self.p
        out = []
        for (e, td), c in acc.items():
            if c == 0:
                continue
            if self.monoid.is_killed(e, ctx):
                continue
            out.append(((e, td), c))
        out.sort(key=lambda t: (t[0][1], self.monoid.weight(t[0][0]), t[0][0].lex_key()))
        return tuple(out)

    def term_mul(self, k1, c1, k2, c2):
        (e1, t1), (e2, t2) = k1, k2
        return (e1 + e2, t1 + t2), c1 * c2


@dataclass(frozen=True)
class DyadicRing:
    """Rank-1 monoid algebra with 2-adically local coefficients.

    The weight-1 generator is the scalar 2, so c * x^e with c of 2-valuation
    v equals (c / 2^v) * x^(e+v). Normal form keeps every coefficient a
    2-adic unit; that makes term sets canonical and ideal membership
    termwise.
    """

    monoid: MonoidPresentation

    def normalize(self, terms, ctx: Optional[SearchContext] = None):
        acc: dict[tuple[ExponentVector, int], Fraction] = {}
        pending = [((e, td), Fraction(c)) for (e, td), c in terms]
        while pending:
            (e, td), c = pending.pop()
            if c == 0:
                continue
            if c.denominator % 2 == 0:
                raise PreconditionViolated(
                    "coefficients are 2-adically integral", f"got {c}")
            v = _v2_frac(c)
            if v:
                e = e + ExponentVector.unit(1, 0, v)
                c = c / (1 << v)
            k = (e, td)
            prev = acc.pop(k, None)
            if prev is None:
                acc[k] = c
            else:
                s = prev + c
                if s != 0:
                    # the sum of two units is even; refold at a higher exponent
                    pending.append((k, s))
        out = [((e, td), c) for (e, td), c in acc.items()]
        out.sort(key=lambda t: (t[0][1], t[0][0].lex_key()))
        return tuple(out)

    def term_mul(self, k1, c1, k2, c2):
        (e1, t1), (e2, t2) = k1, k2
        return (e1 + e2, t1 + t2), c1 * c2


@dataclass(frozen=True)
class Int2xRing:
    """Z + 2xZ[x]: integer polynomials whose nonconstant coefficients are
    even. Term keys are (x-degree, t-degree)."""

    def normalize(self, terms, ctx: Optional[SearchContext] = None):
        acc: dict[tuple[int, int], int] = {}
        for k, c in terms:
            if c:
                acc[k] = acc.get(k, 0) + c
        out = [(k, c) for k, c in acc.items() if c]
        for (xd, td), c in out:
            if xd > 0 and c % 2:
                raise PreconditionViolated(
                    "coefficients of positive x-powers are even",
                    f"coefficient {c} at x^{xd} t^{td}")
        out.sort(key=lambda t: (t[0][1], t[0][0]))
        return tuple(out)

    def term_mul(self, k1, c1, k2, c2):
        return (k1[0] + k2[0], k1[1] + k2[1]), c1 * c2


Ring = Union[CharPMonoidRing, DyadicRing, Int2xRing]


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class PolyElement:
    ring: Ring
    terms: tuple  # ((key, coeff), ...) canonical

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def max_tdeg(self) -> int:
        return max((k[1] for k, _ in self.terms), default=0)

    def max_xdeg(self) -> int:
        if not isinstance(self.ring, Int2xRing):
            raise UnsupportedIdeal("x-degree only exists in the integer model")
        return max((k[0] for k, _ in self.terms), default=0)

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        bits = []
        for k, c in self.terms[:6]:
            bits.append(f"{c}*{k}")
        if len(self.terms) > 6:
            bits.append("...")
        return "Poly(" + " + ".join(bits) + ")"


def make_element(ring: Ring, terms, ctx: Optional[SearchContext] = None) -> PolyElement:
    """Element from (key, coeff) pairs; keys are (ExponentVector, tdeg) for
    monoid rings and (xdeg, tdeg) for the integer model."""
    return PolyElement(ring, ring.normalize(terms, ctx))


def zero_element(ring: Ring) -> PolyElement:
    return PolyElement(ring, ())


def element_add(f: PolyElement, g: PolyElement,
                ctx: Optional[SearchContext] = None) -> PolyElement:
    if f.ring != g.ring:
        raise PreconditionViolated("operands share a model")
    return make_element(f.ring, list(f.terms) + list(g.terms), ctx)


def element_multiply(f: PolyElement, g: PolyElement,
                     ctx: Optional[SearchContext] = None) -> PolyElement:
    """Exact product in the quotient; killed monomials vanish, coefficients
    reduce per the ring's regime."""
    if f.ring != g.ring:
        raise PreconditionViolated("operands share a model")
    if ctx is None:
        ctx = SearchContext()
    cap = ctx.budgets.degree_cap
    if f.max_tdeg() + g.max_tdeg() > cap:
        raise DegreeBudgetExceeded(
            f"t-degree {f.max_tdeg() + g.max_tdeg()} exceeds cap {cap}")
    if isinstance(f.ring, Int2xRing) and f.max_xdeg() + g.max_xdeg() > cap:
        raise DegreeBudgetExceeded(
            f"x-degree {f.max_xdeg() + g.max_xdeg()} exceeds cap {cap}")
    ring = f.ring
    raw = []
    for k1, c1 in f.terms:
        for k2, c2 in g.terms:
            raw.append(ring.term_mul(k1, c1, k2, c2))
    return make_element(ring, raw, ctx)


def element_power(f: PolyElement, n: int,
                  ctx: Optional[SearchContext] = None) -> PolyElement:
    if n < 1:
        raise PreconditionViolated("n >= 1", f"got {n}")
    out = f
    for _ in range(n - 1):
        out = element_multiply(out, f, ctx)
    return out


def element_scale(f: PolyElement, c, ctx: Optional[SearchContext] = None) -> PolyElement:
    return make_element(f.ring, [(k, coeff * c) for k, coeff in f.terms], ctx)


# ---------------------------------------------------------------------------
# ideal handles for the integer model


@dataclass(frozen=True)
class IntIdeal:
    """Membership predicate for the catalog ideals of Z + 2xZ[x].

    A coefficient at x^k needs 2-valuation >= v0 (k = 0), v_low (1 <= k <=
    thresh), v_high (k > thresh); relax_at, when set, lowers the requirement
    at that single degree to v0 (used for quotient images). Generators are
    kept for product enumeration.
    """

    v0: int
    v_low: int
    v_high: int
    thresh: int
    gens: tuple[PolyElement, ...] = ()
    relax_at: Optional[int] = None
    label: str = ""

    def required(self, xdeg: int) -> int:
        if xdeg == 0:
            return self.v0
        if self.relax_at is not None and xdeg == self.relax_at:
            return self.v0
        return self.v_low if xdeg <= self.thresh else self.v_high

    def contains(self, f: PolyElement) -> bool:
        for (xd, _td), c in f.terms:
            if _v2_int(c) < self.required(xd):
                return False
        return True

    def power(self, m: int) -> "IntIdeal":
        if m < 1:
            raise PreconditionViolated("m >= 1", f"got {m}")
        if m == 1:
            return self
        if self.relax_at is not None:
            raise UnsupportedIdeal("powers of quotient-relaxed ideals are not catalog ideals")
        ring = self.gens[0].ring if self.gens else Int2xRing()
        if self.thresh == 0:
            # principal (2^v0) case
            return IntIdeal(self.v0 * m, self.v0 * m + 1, self.v0 * m + 1, 0,
                            gens=(monomial_element(ring, 0, 1 << (self.v0 * m)),),
                            label=f"({1 << (self.v0 * m)})")
        new_gens = tuple(
            monomial_element(ring, j, 1 << m)
            for j in range(m * self.thresh + 1))
        return IntIdeal(m, m, m + 1, m * self.thresh, gens=new_gens,
                        label=f"{self.label or 'I'}^{m}")


def int_ideal_full(D: int, ring: Optional[Int2xRing] = None) -> IntIdeal:
    """(2, 2x, ..., 2x^D)"""
    ring = ring or Int2xRing()
    gens = tuple(monomial_element(ring, j, 2) for j in range(D + 1))
    return IntIdeal(1, 1, 2, D, gens=gens, label="I")


def int_ideal_two(ring: Optional[Int2xRing] = None) -> IntIdeal:
    """(2)"""
    ring = ring or Int2xRing()
    return IntIdeal(1, 2, 2, 0, gens=(monomial_element(ring, 0, 2),), label="(2)")


def monomial_element(ring: Ring, e, coeff=1, tdeg: int = 0,
                     ctx: Optional[SearchContext] = None) -> PolyElement:
    """Single-term element. For the integer model e is the x-degree."""
    return make_element(ring, [((e, tdeg), coeff)], ctx)


def element_in_ideal(f: PolyElement, ideal, ctx: Optional[SearchContext] = None) -> bool:
    """Exact ideal membership.

    Monoid models: every term's monomial must lie in the (monomial) ideal;
    the t-degree rides along free because the extension is by a polynomial
    variable. Integer model: the per-degree 2-valuation predicate.
    """
    if ctx is None:
        ctx = SearchContext()
    if isinstance(ideal, IntIdeal):
        if not isinstance(f.ring, Int2xRing):
            raise UnsupportedIdeal("integer-model ideal applied to a monoid element")
        return ideal.contains(f)
    if not isinstance(ideal, MonomialIdeal):
        raise UnsupportedIdeal(f"unknown ideal handle {type(ideal).__name__}")
    if isinstance(f.ring, Int2xRing):
        raise UnsupportedIdeal("monomial ideal applied to an integer-model element")
    for (e, _td), _c in f.terms:
        if not ideal_member(ideal, e, ctx):
            return False
    return True


# ---------------------------------------------------------------------------
# sampling and finite enumeration


def random_element(ring: Ring, ideal, degree_bound: int, seed: int,
                   ctx: Optional[SearchContext] = None,
                   allow_zero: bool = False) -> PolyElement:
    """Reproducible pseudo-random element of ideal * (ring extended by t).

    Deterministic in (seed, ring, ideal, degree_bound). Every summand is an
    ideal generator times a small ring element, so membership holds by
    construction. Resamples a few times rather than return zero (truncation
    can kill everything) unless allow_zero is set.
    """
    import random as _random

    rng = _random.Random(seed)
    for _attempt in range(24):
        f = _sample_once(ring, ideal, degree_bound, rng, ctx)
        if allow_zero or not f.is_zero:
            return f
    return f


def _sample_once(ring, ideal, degree_bound, rng, ctx):
    nsum = rng.randint(1, 3)
    terms = []
    if isinstance(ideal, IntIdeal):
        for _ in range(nsum):
            g = ideal.gens[rng.randrange(len(ideal.gens))]
            a = rng.randint(-3, 3)
            xk = rng.randint(0, min(3, max(0, degree_bound)))
            b = rng.randint(-2, 2)
            td = rng.randint(0, degree_bound)
            # multiplier a + 2b x^xk, an element of the ring
            mult = make_element(ring, [((0, td), a), ((max(xk, 1), 0), 2 * b)], ctx)
            terms.append(element_multiply(g, mult, ctx))
    else:
        gens = ideal.gens
        if not gens:
            return zero_element(ring)
        mgens = ring.monoid.gens
        for _ in range(nsum):
            g = gens[rng.randrange(len(gens))]
            e = g
            for _k in range(rng.randint(0, 2)):
                e = e + mgens[rng.randrange(len(mgens))]
            td = rng.randint(0, degree_bound)
            if isinstance(ring, CharPMonoidRing):
                coeff = rng.randint(1, ring.p - 1) if ring.p > 2 else 1
            else:
                coeff = rng.choice([1, 3, -1, 5])
            terms.append(monomial_element(ring, e, coeff, td, ctx))
    out = zero_element(ring)
    for t in terms:
        out = element_add(out, t, ctx)
    return out


def alive_ideal_monomials(ring: CharPMonoidRing, I: MonomialIdeal,
                          ctx: Optional[SearchContext] = None) -> list[ExponentVector]:
    """All non-killed monomials of I in an entry-bounded quotient; only
    defined when the kill predicate bounds every coordinate."""
    S = ring.monoid
    if not (S.kill and S.kill[0] == "entry_ge"):
        raise UnsupportedIdeal("finite enumeration needs an entry-bounded quotient")
    p = S.kill[1]
    out = []
    for combo in itertools.product(range(p), repeat=S.dim):
        e = ExponentVector.from_dense(combo)
        if ideal_member(I, e, ctx) and not S.is_killed(e, ctx):
            out.append(e)
    out.sort(key=lambda e: (S.weight(e), e.lex_key()))
    return out


def enumerate_ideal_elements(ring: CharPMonoidRing, monomials, ctx=None):
    """Every F_p-combination of the given monomials, zero included."""
    p = ring.p
    for coeffs in itertools.product(range(p), repeat=len(monomials)):
        yield make_element(ring, [((e, 0), c) for e, c in zip(monomials, coeffs)], ctx)
