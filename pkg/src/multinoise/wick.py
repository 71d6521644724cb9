"""Vacuum correlation functions as sums over admissible pair partitions.

A word is a list of letters (sign, channel, smearing function).  Its vacuum
expectation is the sum over perfect matchings in which every pair has the
annihilator strictly left of the creator, of the product of two-point
contractions.  Two channel families are supported:

* multipole noise of order n, pair value lambda^(2n) i^n gamma_n
  integral conj(f_minus^(n)) f_plus dt, zero across unequal orders;
* the rescaled reservoir field, whose pair value is the smeared kernel
  (1/lambda^2) integral dk |g(k)|^2 exp(i omega(k) (tau - t) / lambda^2),
  evaluated as a single momentum integral after substituting
  u = omega(k)/lambda^2 on each monotone branch of the dispersion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .atoms import TestFunction
from .dispersion import (Dispersion, branch_inverse, clip_domain,
                         measure_weight, monotone_branches)
from .errors import ZeroGamma
from .forms import complex_quad, indefinite_inner

__all__ = [
    "Letter",
    "ReservoirChannel",
    "enumerate_matchings",
    "noise_pair",
    "reservoir_pair",
    "correlation",
    "MAX_WORD_LENGTH",
]

MAX_WORD_LENGTH = 12  # exhaustive matching enumeration only
RESERVOIR_SUPPORT_TOL = 1e-9  # |g| threshold bounding the momentum integral


@dataclass(frozen=True)
class Letter:
    """One operator factor: sign +1/-1, smear, and noise order (None = reservoir)."""

    sign: int
    smear: TestFunction
    order: Optional[int] = None

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError("letter sign must be +1 or -1")
        if self.smear.is_zero():
            raise ValueError("letter smear must be nonzero")


@dataclass(frozen=True)
class ReservoirChannel:
    dispersion: Dispersion
    form_factor: TestFunction
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("coupling lambda must be positive")

    def at_lambda(self, lam: float) -> "ReservoirChannel":
        return replace(self, lam=lam)

    def support_report(self, eps_supp: float = 1e-10):
        from .gamma import check_support
        return check_support(self.dispersion, self.form_factor, eps_supp)


def enumerate_matchings(signs: Sequence[int]) -> list[tuple[tuple[int, int], ...]]:
    """All perfect matchings with each annihilator paired to a later creator.

    Returns 0-based index pairs; the list is empty for odd or unbalanced
    words.  Exhaustive recursion, deterministic order.
    """
    if len(signs) > MAX_WORD_LENGTH:
        raise ValueError(f"word length limited to {MAX_WORD_LENGTH}")
    out: list[tuple[tuple[int, int], ...]] = []

    def recurse(remaining: tuple[int, ...], acc: tuple[tuple[int, int], ...]):
        if not remaining:
            out.append(acc)
            return
        j = remaining[0]
        if signs[j] != -1:
            return  # leftmost unpaired letter must annihilate
        for pos, k in enumerate(remaining[1:], start=1):
            if signs[k] == +1:
                rest = remaining[1:pos] + remaining[pos + 1:]
                recurse(rest, acc + ((j, k),))

    recurse(tuple(range(len(signs))), ())
    return out


def noise_pair(n: int, gamma: float, lam: float, f_minus: TestFunction,
               f_plus: TestFunction) -> complex:
    """Smeared contraction of one multipole channel with its lambda grading."""
    if gamma == 0:
        raise ZeroGamma("noise channel requires gamma != 0")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return lam ** (2 * n) * indefinite_inner(n, gamma, f_minus, f_plus)


def reservoir_pair(channel: ReservoirChannel, f_minus: TestFunction,
                   f_plus: TestFunction, *, epsabs: float = 1e-12,
                   epsrel: float = 1e-10) -> complex:
    """Exact two-point function of the rescaled reservoir field.

    Computed per monotone dispersion branch as

        2 pi * integral du  w(k(u)) |g(k(u))|^2 / |omega'(k(u))|
                            * conj(f_minus_F(u)) f_plus_F(u)

    with u = omega(k)/lambda^2, which resolves the O(lambda^2)-wide energy
    shell exactly.
    """
    disp, g, lam = channel.dispersion, channel.form_factor, channel.lam
    lo, hi = g.envelope_interval(RESERVOIR_SUPPORT_TOL)
    lo, hi = clip_domain(disp, lo, hi)
    if hi <= lo:
        return 0j
    fmF = f_minus.fourier()
    fpF = f_plus.fourier()
    # the smears bound the u range independently of lambda; without this clamp
    # the interval grows like 1/lambda^2 and the quadrature can overlook the
    # narrow band where the integrand lives
    m_lo, m_hi = fmF.envelope_interval(1e-12)
    p_lo, p_hi = fpF.envelope_interval(1e-12)
    smear_lo, smear_hi = min(m_lo, p_lo), max(m_hi, p_hi)
    lam2 = lam * lam
    total = 0j
    for a, b in monotone_branches(disp, lo, hi):
        ua, ub = float(disp.omega(a)) / lam2, float(disp.omega(b)) / lam2
        u_lo = max(min(ua, ub), smear_lo)
        u_hi = min(max(ua, ub), smear_hi)
        if u_hi <= u_lo:
            continue

        def integrand(u, _a=a, _b=b):
            k = branch_inverse(disp, _a, _b, lam2 * u)
            dens = measure_weight(disp, k) * abs(g(k)) ** 2 / abs(disp.domega(k))
            return dens * np.conj(fmF(u)) * fpF(u)

        pts = [0.0] if u_lo < 0.0 < u_hi else None
        total += complex_quad(integrand, u_lo, u_hi, epsabs=epsabs,
                              epsrel=epsrel, limit=400, points=pts)
    return 2.0 * math.pi * total


def _noise_pair_value(left: Letter, right: Letter, gammas, lam: float) -> complex:
    if left.order != right.order:
        return 0j  # cross-channel Kronecker delta
    n = left.order
    return noise_pair(n, gammas[n], lam, left.smear, right.smear)


def correlation(word: Sequence[Letter], *, gammas=None, lam: float = 1.0,
                channel: Optional[ReservoirChannel] = None) -> complex:
    """Vacuum expectation of a word over one channel family.

    Noise words need ``gammas`` (indexable by order) and the grading ``lam``;
    reservoir words need ``channel``.  Mixed words are rejected.
    """
    word = list(word)
    if not word:
        return 1.0 + 0j
    is_reservoir = [letter.order is None for letter in word]
    if any(is_reservoir) and not all(is_reservoir):
        raise ValueError("mixed noise/reservoir words are not supported")
    if all(is_reservoir):
        if channel is None:
            raise ValueError("reservoir words need a ReservoirChannel")
    elif gammas is None:
        raise ValueError("noise words need the gamma coefficients")

    matchings = enumerate_matchings([letter.sign for letter in word])
    pair_cache: dict[tuple[int, int], complex] = {}

    def pair_value(j: int, k: int) -> complex:
        if (j, k) not in pair_cache:
            if channel is not None:
                pair_cache[(j, k)] = reservoir_pair(channel, word[j].smear,
                                                    word[k].smear)
            else:
                pair_cache[(j, k)] = _noise_pair_value(word[j], word[k],
                                                       gammas, lam)
        return pair_cache[(j, k)]

    total = 0j
    for matching in matchings:
        prod = 1.0 + 0j
        for j, k in matching:
            prod *= pair_value(j, k)
            if prod == 0:
                break
        total += prod
    return total
