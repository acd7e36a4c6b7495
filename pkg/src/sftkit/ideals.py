"""Monomial-ideal algebra over a monoid presentation: membership, products,
powers, containment, radical membership, and nilpotency indices.

Ideals are kept with a canonical minimal generator list (ascending weight,
then lexicographic). Minimality under divisibility is decidable here because
the grading is positive: a divisor is strictly lighter, so one ascending pass
with a weight-gap prefilter settles it with very few membership searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .budget import SearchContext
from .errors import PreconditionViolated
from .exponents import ExponentVector, MonoidPresentation, monoid_member

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MonomialIdeal:
    """Finite generator list of exponent vectors inside a monoid.

    Construct through monomial_ideal(), which normalizes to the canonical
    minimal form; the raw constructor trusts its input.
    """

    monoid: MonoidPresentation
    gens: tuple[ExponentVector, ...]
    label: str = ""

    @property
    def is_zero(self) -> bool:
        return not self.gens

    def __repr__(self):
        tag = self.label or "ideal"
        return f"<{tag}: {len(self.gens)} gens>"


def _sign_feasible(S: MonoidPresentation, e: ExponentVector) -> bool:
    # a coordinate can only move in a direction some generator moves it
    posm = S._pack["tables"][1][0]
    negm = S._pack["tables"][2][0]
    for i, v in e.entries:
        bit = 1 << i
        if v > 0:
            if not posm & bit:
                return False
        elif not negm & bit:
            return False
    return True


def _maybe_member(S: MonoidPresentation, d: ExponentVector,
                  ctx: SearchContext, wd: Optional[Fraction] = None) -> bool:
    """Membership of d in S with cheap rejections before the engine runs.

    The prefilters mirror the engine's own root-node prunes, so they never
    change an answer, only skip charged search nodes.
    """
    if d.is_zero:
        return True
    if wd is None:
        wd = S.weight(d)
    if wd <= 0 or wd < S.min_gen_weight:
        return False
    if not _sign_feasible(S, d):
        return False
    return monoid_member(S, d, ctx) is not None


def minimalize(S: MonoidPresentation, exps, ctx: SearchContext) -> list[ExponentVector]:
    """Reduce a generating set to the minimal one under divisibility in S.

    Killed (zero-monomial) exponents generate nothing and are dropped.
    Positive grading makes the minimal set unique, so the result does not
    depend on the route that produced `exps`.
    """
    weighted = {}
    for e in exps:
        if e not in weighted and not S.is_killed(e, ctx):
            weighted[e] = S.weight(e)
    order = sorted(weighted, key=lambda e: (weighted[e], e.lex_key()))
    minpos = S.min_gen_weight
    kept: list[ExponentVector] = []
    kept_w: list[Fraction] = []
    for cand in order:
        wc = weighted[cand]
        redundant = False
        for k, wk in zip(kept, kept_w):
            if wk > wc - minpos:
                break  # everything later is heavier still
            if _maybe_member(S, cand - k, ctx, wc - wk):
                redundant = True
                break
        if not redundant:
            kept.append(cand)
            kept_w.append(wc)
    return kept


def monomial_ideal(S: MonoidPresentation, gens, ctx: Optional[SearchContext] = None,
                   label: str = "", verify_membership: bool = True) -> MonomialIdeal:
    """Canonical ideal from a raw generator list.

    Every generator must lie in the monoid (a generator equal to a monoid
    generator is accepted without a search); redundant and killed generators
    are dropped.
    """
    if ctx is None:
        ctx = SearchContext()
    gens = list(gens)
    if verify_membership:
        monoid_gen_set = set(S.gens)
        for g in gens:
            if g in monoid_gen_set or g.is_zero:
                continue
            if S.is_killed(g, ctx):
                continue  # the zero element; dropped below
            if monoid_member(S, g, ctx) is None:
                raise PreconditionViolated(
                    "ideal generators lie in the monoid", f"{g!r} is not in the monoid")
    kept = minimalize(S, gens, ctx)
    return MonomialIdeal(S, tuple(kept), label)


def ideal_member(I: MonomialIdeal, target: ExponentVector,
                 ctx: Optional[SearchContext] = None) -> bool:
    """Exact membership of the monomial x^target in I.

    A killed target is the ring's zero element, which lies in every ideal.
    Otherwise target is in I iff it is a generator plus a monoid element.
    """
    if ctx is None:
        ctx = SearchContext()
    S = I.monoid
    if S.is_killed(target, ctx):
        return True
    wt = S.weight(target)
    for g in I.gens:
        if _maybe_member(S, target - g, ctx, wt - S.weight(g)):
            return True
    return False


def ideal_contains_witness(I: MonomialIdeal, J: MonomialIdeal,
                           ctx: Optional[SearchContext] = None) -> Optional[ExponentVector]:
    """First generator of J (canonical order) outside I, or None when J ⊆ I."""
    if I.monoid is not J.monoid and I.monoid != J.monoid:
        raise PreconditionViolated("same owning monoid")
    if ctx is None:
        ctx = SearchContext()
    for g in J.gens:
        if not ideal_member(I, g, ctx):
            return g
    return None


def ideal_contains(I: MonomialIdeal, J: MonomialIdeal,
                   ctx: Optional[SearchContext] = None) -> bool:
    """True iff J ⊆ I (every generator of J passes ideal_member)."""
    return ideal_contains_witness(I, J, ctx) is None


def _dense_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def ideal_power_with_provenance(I: MonomialIdeal, m: int,
                                ctx: Optional[SearchContext] = None
                                ) -> tuple[MonomialIdeal, dict[ExponentVector, tuple[int, ...]]]:
    """I^m plus, for each surviving generator, one factorization into
    indices of I's generators (deterministic: first seen in canonical order).
    """
    if m < 1:
        raise PreconditionViolated("m >= 1", f"got {m}")
    if ctx is None:
        ctx = SearchContext()
    S = I.monoid
    if I.is_zero:
        return I, {}
    gens_dense = [g.dense() for g in I.gens]
    # current layer: dense exponent -> provenance (tuple of I-gen indices)
    layer = {gens_dense[i]: (i,) for i in range(len(gens_dense))}
    current = I
    for step in range(2, m + 1):
        ctx.precheck_multisets(len(current.gens) * len(I.gens))
        ctx.charge_multisets(len(current.gens) * len(I.gens))
        nxt: dict[tuple, tuple[int, ...]] = {}
        for p in current.gens:  # canonical order
            pd = p.dense()
            prov = layer[pd]
            for j, gd in enumerate(gens_dense):
                e = _dense_add(pd, gd)
                if e not in nxt:
                    nxt[e] = tuple(sorted(prov + (j,)))
        exps = [ExponentVector.from_dense(e) for e in nxt]
        kept = minimalize(S, exps, ctx)
        current = MonomialIdeal(S, tuple(kept), f"{I.label or 'I'}^{step}")
        layer = {e.dense(): nxt[e.dense()] for e in kept}
    prov_out = {ExponentVector.from_dense(d): layer[d] for d in layer}
    return current, prov_out


def ideal_power(I: MonomialIdeal, m: int,
                ctx: Optional[SearchContext] = None) -> MonomialIdeal:
    """The ideal generated by all m-fold products of generators, minimalized."""
    if m == 1:
        return I
    power, _ = ideal_power_with_provenance(I, m, ctx)
    return power


@dataclass(frozen=True)
class RadicalResult:
    status: str  # verified | refuted | inconclusive
    k: Optional[int] = None


def radical_member(B: MonomialIdeal, target: ExponentVector, kmax: int,
                   ctx: Optional[SearchContext] = None) -> RadicalResult:
    """Least k <= kmax with k*target in B.

    The only refutation this can issue is for the zero exponent vector, whose
    powers are all itself, so non-membership is decided for every power at
    once. Everything else that fails up to kmax is inconclusive: a larger
    power might still land in B.
    """
    if kmax < 1:
        raise PreconditionViolated("kmax >= 1", f"got {kmax}")
    if ctx is None:
        ctx = SearchContext()
    if target.is_zero:
        if ideal_member(B, target, ctx):
            return RadicalResult(VERIFIED, 1)
        return RadicalResult(REFUTED)
    for k in range(1, kmax + 1):
        if ideal_member(B, target.scale(k), ctx):
            return RadicalResult(VERIFIED, k)
    return RadicalResult(INCONCLUSIVE)


@dataclass(frozen=True)
class NilpotencyResult:
    status: str  # verified | inconclusive
    m: Optional[int] = None


def nilpotency_index(I: MonomialIdeal, B: MonomialIdeal, mmax: int,
                     ctx: Optional[SearchContext] = None) -> NilpotencyResult:
    """Least m <= mmax with I^m ⊆ B. Requires B ⊆ I."""
    if mmax < 1:
        raise PreconditionViolated("mmax >= 1", f"got {mmax}")
    if ctx is None:
        ctx = SearchContext()
    if not ideal_contains(I, B, ctx):
        raise PreconditionViolated("B ⊆ I", "the sub-ideal is not inside the ideal")
    current = I
    for m in range(1, mmax + 1):
        if m > 1:
            current = ideal_power(I, m, ctx)
        if ideal_contains(B, current, ctx):
            return NilpotencyResult(VERIFIED, m)
    return NilpotencyResult(INCONCLUSIVE)
