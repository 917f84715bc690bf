"""Exact counting identities for sets and lists of MOLS.

Counts are Python integers and :class:`fractions.Fraction` values; nothing
here touches floating point.  A count that should be an integer but is not
raises :class:`NonIntegral`, which always means an upstream miscount.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import NonIntegral

FACT = tuple(factorial(i) for i in range(13))


@dataclass(frozen=True)
class CountQuad:
    """Reduced sets, reduced lists, all lists and all sets of one class of ``k``-MOLS."""

    n: int
    k: int
    RS: int
    RL: int
    AL: int
    AS: int

    def check(self):
        n, k = self.n, self.k
        a = FACT[k - 1] * FACT[n] ** k * FACT[n - 1] * self.RS
        b = FACT[n] ** k * FACT[n - 1] * self.RL
        c = FACT[k] * self.AS
        return a == b == self.AL == c


def _exact(num, den, what):
    if num % den:
        raise NonIntegral(f"{what} = {Fraction(num, den)} is not an integer")
    return num // den


def switch_counts(n: int, k: int, which: str, value: int) -> CountQuad:
    """All four counts from one of them (``which`` in RS, RL, AL, AS)."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    which = which.upper()
    per_rl = FACT[n] ** k * FACT[n - 1]
    if which == "RS":
        al = FACT[k - 1] * per_rl * value
    elif which == "RL":
        al = per_rl * value
    elif which == "AL":
        al = value
    elif which == "AS":
        al = FACT[k] * value
    else:
        raise ValueError(f"unknown count {which!r}")
    quad = CountQuad(
        n, k,
        RS=_exact(al, FACT[k - 1] * per_rl, "RS"),
        RL=_exact(al, per_rl, "RL"),
        AL=al,
        AS=_exact(al, FACT[k], "AS"),
    )
    return quad


def reduced_sets_from_reps(n: int, k: int, par_orders) -> int:
    """Reduced sets of ``k``-MOLS in the species with the given autoparatopism group orders."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    total = Fraction(0)
    for p in par_orders:
        if p <= 0:
            raise ValueError("group orders must be positive")
        total += Fraction(1, p)
    value = FACT[n] * n * (k + 2) * (k + 1) * k * total
    if value.denominator != 1:
        raise NonIntegral(f"reduced set count {value} is not an integer")
    return value.numerator


def mols_species_size(n: int, k: int, par: int) -> int:
    """Number of ``k``-lists of MOLS paratopic to one with autoparatopism group of order ``par``."""
    return _exact(FACT[n] ** (k + 2) * FACT[k + 2], par, "species size")


def species_size(L, par: int | None = None) -> int:
    """Number of latin squares paratopic to ``L``."""
    if par is None:
        from .canonical import par_order

        par = par_order(L)
    return mols_species_size(L.order, 1, par)


def aspect_multiplicity(P, par_pair=None, par_aspects=None) -> Fraction:
    """Members of the symmetric pair set paratopic to a pair, for a pair ``P``.

    Evaluates ``sum(|par(aspect)|) / |par(P)|`` over the four aspects.
    """
    from .canonical import par_order
    from .mols import as_mols, aspects

    P = as_mols(P)
    if P.k != 2:
        raise ValueError("aspect multiplicity is defined for pairs")
    if par_pair is None:
        par_pair = par_order(P)
    if par_aspects is None:
        par_aspects = [par_order(A) for A in aspects(P)]
    return Fraction(sum(par_aspects), par_pair)


def random_ls_stats(reps):
    """Probability of a mate and expected mate count for a uniformly random square.

    ``reps`` holds one ``(theta, par)`` pair per species of the order.
    Returns ``(p_mate, e_theta)`` as fractions.
    """
    reps = list(reps)
    if not reps:
        raise ValueError("no species given")
    weights = [(theta, Fraction(1, par)) for theta, par in reps]
    total = sum(w for _, w in weights)
    with_mate = sum(w for t, w in weights if t > 0)
    expected = sum(t * w for t, w in weights)
    return with_mate / total, expected / total


def proportion_with_mate(thetas) -> Fraction:
    thetas = list(thetas)
    return Fraction(sum(1 for t in thetas if t > 0), len(thetas))
