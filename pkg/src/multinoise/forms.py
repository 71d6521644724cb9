"""The three sesquilinear forms on test functions, plus the grid-side metric.

* ``l2_inner``          -- plain L2 pairing  integral conj(f) h dt
* ``weighted_inner``    -- positive form     integral |x|^n conj(f_F) h_F dx
* ``indefinite_inner``  -- commutator kernel i^n gamma integral conj(f^(n)) h dt

The indefinite kernel equals gamma * (-1)^n integral x^n conj(f_F) h_F dx in the
frequency domain (``indefinite_inner_frequency`` computes that route directly);
for even n both routes reduce to gamma * weighted_inner, for odd n the form is
genuinely indefinite.

Integrals run over (-inf, 0] and [0, inf) separately because |x|^n and sign(x)
are not smooth at the origin; Gaussian envelopes let us truncate the tails.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import IntegrationWarning, quad

from .atoms import TestFunction
from .errors import QuadratureFailure, ZeroGamma

__all__ = [
    "QUAD_ABS",
    "QUAD_REL",
    "ENVELOPE_TOL",
    "METRIC_ORIENTATION",
    "l2_inner",
    "weighted_inner",
    "indefinite_inner",
    "indefinite_inner_frequency",
    "GridFunction",
    "frequency_grid",
    "to_grid",
    "metric_apply",
    "grid_weighted_inner",
]

QUAD_ABS = 1e-14     # absolute quadrature floor
QUAD_REL = 1e-11
ENVELOPE_TOL = 1e-18  # tail truncation threshold for Gaussian envelopes

# Orientation of the frequency-domain sign multiplier for odd orders,
# calibrated so that (f, eta_n h)_{H_n} reproduces the time-domain kernel
# i^n int conj(f^(n)) h dt under the e^{itx} Fourier convention.  Even orders
# carry the trivial metric.  See test_forms.test_metric_orientation.
METRIC_ORIENTATION = -1.0


def _integration_interval(*fns: TestFunction) -> tuple[float, float]:
    lo, hi = 0.0, 0.0
    for f in fns:
        a, b = f.envelope_interval(ENVELOPE_TOL)
        lo, hi = min(lo, a), max(hi, b)
    return lo, hi


def complex_quad(fun, lo: float, hi: float, *, epsabs: float = QUAD_ABS,
                 epsrel: float = QUAD_REL, limit: int = 200,
                 points=None) -> complex:
    """Adaptive Gauss-Kronrod integration of a complex-valued integrand."""
    if hi <= lo:
        return 0j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, abserr, _info = quad(
            fun, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit,
            points=points, complex_func=True, full_output=True)
    # QUADPACK reports the error it actually achieved; treat a large miss as
    # failure rather than trusting the value silently.
    if abs(abserr) > 50.0 * max(epsabs, epsrel * abs(val)):
        raise QuadratureFailure(
            f"requested {epsabs:g}/{epsrel:g} on [{lo:g}, {hi:g}], "
            f"achieved only {abs(abserr):g}")
    return complex(val)


def _halved_quad(fun, lo: float, hi: float, **kw) -> complex:
    """Integrate on [lo, 0] and [0, hi] separately when the range straddles 0."""
    if lo < 0.0 < hi:
        return complex_quad(fun, lo, 0.0, **kw) + complex_quad(fun, 0.0, hi, **kw)
    return complex_quad(fun, lo, hi, **kw)


def l2_inner(f: TestFunction, h: TestFunction, *, epsabs: float = QUAD_ABS,
             epsrel: float = QUAD_REL) -> complex:
    """(f, h)_{L2} = integral conj(f(t)) h(t) dt."""
    lo, hi = _integration_interval(f, h)
    return _halved_quad(lambda t: np.conj(f(t)) * h(t), lo, hi,
                        epsabs=epsabs, epsrel=epsrel)


def weighted_inner(n: int, f: TestFunction, h: TestFunction, *,
                   epsabs: float = QUAD_ABS, epsrel: float = QUAD_REL) -> complex:
    """Positive form of order n: integral |x|^n conj(f_F(x)) h_F(x) dx."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    fF, hF = f.fourier(), h.fourier()
    lo, hi = _integration_interval(fF, hF)
    return _halved_quad(lambda x: abs(x) ** n * np.conj(fF(x)) * hF(x), lo, hi,
                        epsabs=epsabs, epsrel=epsrel)


def indefinite_inner(n: int, gamma: float, f: TestFunction, h: TestFunction, *,
                     epsabs: float = QUAD_ABS, epsrel: float = QUAD_REL) -> complex:
    """Commutator kernel  i^n gamma integral conj(f^(n)(t)) h(t) dt."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    if gamma == 0:
        raise ZeroGamma("coupling constant gamma must be nonzero")
    fd = f.derivative(n)
    lo, hi = _integration_interval(fd, h)
    val = _halved_quad(lambda t: np.conj(fd(t)) * h(t), lo, hi,
                       epsabs=epsabs, epsrel=epsrel)
    return (1j) ** n * gamma * val


def indefinite_inner_frequency(n: int, gamma: float, f: TestFunction,
                               h: TestFunction, *, epsabs: float = QUAD_ABS,
                               epsrel: float = QUAD_REL) -> complex:
    """Same kernel through the frequency domain: gamma (-1)^n int x^n conj(f_F) h_F."""
    if gamma == 0:
        raise ZeroGamma("coupling constant gamma must be nonzero")
    fF, hF = f.fourier(), h.fourier()
    lo, hi = _integration_interval(fF, hF)
    val = _halved_quad(lambda x: x ** n * np.conj(fF(x)) * hF(x), lo, hi,
                       epsabs=epsabs, epsrel=epsrel)
    return (-1.0) ** n * gamma * val


# ---------------------------------------------------------------------------
# pointwise frequency grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridFunction:
    """Frequency-domain samples on a sign-symmetric quadrature grid.

    Nodes are strictly increasing, symmetric about 0 and exclude 0 itself,
    so multiplication by sign(x) is well defined on every node.
    """

    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if not (len(nodes) == len(weights) == len(values)):
            raise ValueError("nodes, weights and values must have equal length")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(nodes == 0.0):
            raise ValueError("nodes must exclude 0")
        if np.any(np.abs(nodes + nodes[::-1]) > 1e-12 * np.max(np.abs(nodes))):
            raise ValueError("nodes must be symmetric about 0")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        for name, arr in (("nodes", nodes), ("weights", weights), ("values", values)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def frequency_grid(fns, *, eps: float = 1e-8, panels: int = 32,
                   order: int = 16) -> GridFunction:
    """Template grid of Gauss-Legendre panels on [-X, -eps] u [eps, X].

    X is taken from the Fourier-domain envelopes of ``fns`` so the excluded
    tails are below the envelope threshold.
    """
    radius = 1.0
    for f in fns:
        lo, hi = f.fourier().envelope_interval(ENVELOPE_TOL)
        radius = max(radius, abs(lo), abs(hi))
    x, w = leggauss(order)
    edges = np.linspace(eps, radius, panels + 1)
    pos_nodes, pos_weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        pos_nodes.append(mid + half * x)
        pos_weights.append(half * w)
    pos_nodes = np.concatenate(pos_nodes)
    pos_weights = np.concatenate(pos_weights)
    nodes = np.concatenate([-pos_nodes[::-1], pos_nodes])
    weights = np.concatenate([pos_weights[::-1], pos_weights])
    return GridFunction(nodes, weights, np.zeros(nodes.shape, dtype=complex))


def to_grid(f: TestFunction, grid: GridFunction) -> GridFunction:
    """Sample the Fourier transform of f on the grid template."""
    return GridFunction(grid.nodes, grid.weights, f.fourier()(grid.nodes))


def metric_apply(n: int, u: GridFunction) -> GridFunction:
    """Apply the order-n metric operator pointwise on the grid.

    Odd n multiplies by METRIC_ORIENTATION * sign(x); even sectors carry the
    identity metric.  Involutive in both cases.
    """
    if n % 2 == 0:
        return u
    return GridFunction(u.nodes, u.weights,
                        u.values * (METRIC_ORIENTATION * np.sign(u.nodes)))


def grid_weighted_inner(n: int, u: GridFunction, v: GridFunction) -> complex:
    """Order-n positive form evaluated on matching grids."""
    if u.nodes.shape != v.nodes.shape or np.any(u.nodes != v.nodes):
        raise ValueError("grid functions must share nodes")
    return complex(np.sum(u.weights * np.abs(u.nodes) ** n
                          * np.conj(u.values) * v.values))
