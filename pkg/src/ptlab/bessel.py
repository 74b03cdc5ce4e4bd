"""Integer-order Bessel functions of the first kind.

Whole batches of orders J_0(x) .. J_M(x) are produced by the downward
(Miller-type) three-term recurrence, normalized with the even-order sum
identity J_0(x) + 2*sum_k J_{2k}(x) = 1.  Small arguments (|x| < 2) fall
back to the ascending power series, which converges in a handful of
terms there.  Negative orders resolve through the reflection identity
J_{-m}(x) = (-1)^m J_m(x), applied exactly rather than recomputed.

Supported argument range (validated): |x| <= 1e4.  Absolute accuracy is
better than 1e-12 for |x| <= 50.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

SERIES_CUTOFF = 2.0       # below this |x| the ascending series is used
SUPPORT_LIMIT = 1.0e4     # documented argument range
_MILLER_MARGIN = 60       # extra start orders for the downward recurrence
_RESCALE_LIMIT = 1e250    # rescale unnormalized iterates past this


def _series_batch(m_max: int, ax: float) -> np.ndarray:
    """Ascending power series for J_0(ax) .. J_m_max(ax), ax in [0, 2)."""
    half = 0.5 * ax
    out = np.zeros(m_max + 1)
    lead = 1.0  # half**m / m!, carried across orders
    for m in range(m_max + 1):
        if lead == 0.0:
            break  # all higher orders underflow to zero
        term = lead
        total = term
        k = 0
        while k < 200:
            k += 1
            term *= -half * half / (k * (m + k))
            total += term
            if abs(term) <= 1e-17 * max(1.0, abs(total)):
                break
        out[m] = total
        lead *= half / (m + 1)
    return out


def _miller_batch(m_max: int, ax: float) -> np.ndarray:
    """Downward recurrence for J_0(ax) .. J_m_max(ax), ax >= 2."""
    start = max(m_max, int(ax)) + _MILLER_MARGIN
    if start % 2:
        start += 1
    out = np.zeros(m_max + 1)
    jp = 0.0    # unnormalized J_{k+1}
    jc = 1e-30  # unnormalized J_k, seeded at k = start
    norm = 0.0  # accumulates J_0 + 2*sum_{k even > 0} J_k (J_0 fixed below)
    for k in range(start, -1, -1):
        if k <= m_max:
            out[k] = jc
        if k % 2 == 0:
            norm += 2.0 * jc
        if k > 0:
            jn = (2.0 * k / ax) * jc - jp
            jp, jc = jc, jn
            if abs(jc) > _RESCALE_LIMIT:
                scale = 1.0 / _RESCALE_LIMIT
                jc *= scale
                jp *= scale
                norm *= scale
                out *= scale
    norm -= jc  # J_0 was double counted
    return out / norm


def bessel_j_batch(m_max: int, x: float) -> np.ndarray:
    """Array [J_0(x), J_1(x), ..., J_m_max(x)]."""
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if not math.isfinite(x):
        raise ValueError("Bessel argument must be finite")
    ax = abs(x)
    if ax > SUPPORT_LIMIT:
        raise ValueError(f"Bessel argument |x| = {ax} outside supported range <= {SUPPORT_LIMIT}")
    if ax == 0.0:
        out = np.zeros(m_max + 1)
        out[0] = 1.0
    elif ax < SERIES_CUTOFF:
        out = _series_batch(m_max, ax)
    else:
        out = _miller_batch(m_max, ax)
    if x < 0.0:
        out[1::2] *= -1.0  # J_m(-x) = (-1)^m J_m(x)
    return out


def bessel_j(m: int, x: float) -> float:
    """J_m(x) for any integer order m.

    Negative orders use the reflection identity J_{-m} = (-1)^m J_m
    exactly, so bessel_j(-m, x) == (-1)**m * bessel_j(m, x) bit for bit.
    """
    m = int(m)
    am = abs(m)
    value = float(bessel_j_batch(am, x)[am])
    if m < 0 and am % 2 == 1:
        value = -value
    return value


def jacobi_anger_partial(kappa: float, theta: float, m_max: int) -> complex:
    """Truncated expansion sum_{m=-m_max}^{m_max} J_m(kappa) e^{i m theta}.

    Converges to e^{i kappa sin(theta)} as m_max grows past |kappa|.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if not (math.isfinite(kappa) and math.isfinite(theta)):
        raise ValueError("kappa and theta must be finite")
    js = bessel_j_batch(m_max, kappa)
    total = complex(js[0])
    for m in range(1, m_max + 1):
        phase = cmath.exp(1j * m * theta)
        # J_{-m} e^{-im theta} folded in via reflection
        if m % 2 == 0:
            total += js[m] * (phase + phase.conjugate())
        else:
            total += js[m] * (phase - phase.conjugate())
    return total
