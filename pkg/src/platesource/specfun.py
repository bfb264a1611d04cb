"""Cylinder functions (J, Y, H1, K) and overflow-safe outward transfer ratios.

Evaluation strategy
-------------------
Point values come from the cephes routines in :mod:`scipy.special`, which
are accurate to better than 1e-13 relative over the supported range
``n <= MAX_ORDER``, ``x in [1e-3, 500]``, with one exception: ``jv``
underflows to exact 0 for very small ``x`` at high order even though the
true value is still representable. Those points are recomputed with the
ascending series whose prefactor is formed in log space.

Ratios of same-order functions at two arguments (needed when boundary data
is pushed outward from one circle to a larger one) are formed from scaled
three-term recurrences that carry an explicit log-magnitude, so no
intermediate over- or underflows even deep in the evanescent regime where
the function values themselves leave the double range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "MAX_ORDER",
    "BesselRangeError",
    "TransferFactor",
    "bessel_j",
    "bessel_y",
    "hankel1",
    "bessel_k",
    "log_bessel_k",
    "hankel_transfer",
    "modk_transfer",
    "transfer_tables",
]

MAX_ORDER = 128

# rescale scaled recurrences once the running magnitude exceeds this
_RESCALE_AT = 1e250
# ratio terms whose log-magnitude falls below this are below double
# resolution relative to anything they combine with; drop them to 0
_LOG_FLOOR = -700.0


class BesselRangeError(ArithmeticError):
    """A requested function value over- or underflows double precision."""


def _check_order(n: int, max_order: int) -> int:
    n = int(n)
    if abs(n) > max_order:
        raise BesselRangeError(f"order {n} exceeds supported maximum {max_order}")
    return abs(n)


def _check_arg(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("argument must be positive")
    return x


def _j_series(n: int, x: np.ndarray) -> np.ndarray:
    # ascending series, log-space prefactor; only used for small x where a
    # handful of terms reach machine precision
    logpre = n * np.log(x / 2.0) - special.gammaln(n + 1.0)
    q = -0.25 * x * x
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for m in range(1, 24):
        term = term * q / (m * (n + m))
        acc += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(acc)):
            break
    with np.errstate(under="ignore"):
        return np.exp(logpre) * acc


def bessel_j(n: int, x, *, max_order: int = MAX_ORDER):
    """First-kind Bessel ``J_n(x)`` for integer ``n``, ``x > 0``."""
    m = _check_order(n, max_order)
    xa = _check_arg(x)
    out = special.jv(m, xa)
    # cephes flushes tiny-but-representable values to 0 at high order
    bad = (out == 0.0) & (xa < 2.0) if m >= 8 else np.zeros_like(out, bool)
    if np.any(bad):
        out = np.where(bad, _j_series(m, xa), out)
    if n < 0 and m % 2 == 1:
        out = -out
    return float(out) if np.isscalar(x) else out


def bessel_y(n: int, x, *, max_order: int = MAX_ORDER):
    """Second-kind Bessel ``Y_n(x)`` for integer ``n``, ``x > 0``."""
    m = _check_order(n, max_order)
    xa = _check_arg(x)
    out = special.yn(m, xa)
    if not np.all(np.isfinite(out)):
        raise BesselRangeError(f"Y_{m} overflows at the requested argument")
    if n < 0 and m % 2 == 1:
        out = -out
    return float(out) if np.isscalar(x) else out


def hankel1(n: int, x, *, max_order: int = MAX_ORDER):
    """First-kind Hankel function ``H^(1)_n(x) = J_n(x) + i Y_n(x)``."""
    j = bessel_j(n, x, max_order=max_order)
    y = bessel_y(n, x, max_order=max_order)
    out = np.asarray(j) + 1j * np.asarray(y)
    return complex(out) if np.isscalar(x) else out


def bessel_k(n: int, x, *, max_order: int = MAX_ORDER):
    """Second-kind modified Bessel ``K_n(x) > 0``.

    Raises
    ------
    BesselRangeError
        If the value over- or underflows double precision. Callers that
        need such regimes should work with :func:`log_bessel_k` or the
        ratio helpers instead.
    """
    m = _check_order(n, max_order)
    xa = _check_arg(x)
    out = special.kn(m, xa)
    if np.any(~np.isfinite(out)):
        raise BesselRangeError(f"K_{m} overflows double precision at the requested argument")
    if np.any(out == 0.0):
        raise BesselRangeError(f"K_{m} underflows double precision at the requested argument")
    return float(out) if np.isscalar(x) else out


def log_bessel_k(n_max: int, x: float, *, max_order: int = MAX_ORDER) -> np.ndarray:
    """``log K_n(x)`` for n = 0..n_max via the scaled upward recurrence.

    The upward recurrence ``K_{n+1} = K_{n-1} + (2n/x) K_n`` follows the
    dominant solution and is run on exponentially rescaled values, so the
    result is finite for any order/argument combination.
    """
    _check_order(n_max, max_order + 2)
    x = float(x)
    if x <= 0:
        raise ValueError("argument must be positive")
    # kve is e^x-scaled, well-behaved for every x > 0 at orders 0 and 1
    log0 = float(np.log(special.kve(0, x))) - x
    log1 = float(np.log(special.kve(1, x))) - x
    out = np.empty(n_max + 1)
    out[0] = log0
    if n_max >= 1:
        out[1] = log1
    prev, cur, scale = np.exp(log0 - log1), 1.0, log1
    for n in range(1, n_max):
        nxt = prev + (2.0 * n / x) * cur
        prev, cur = cur, nxt
        if nxt > _RESCALE_AT:
            prev /= nxt
            scale += np.log(nxt)
            cur = 1.0
        out[n + 1] = np.log(cur) + scale
    return out


def _scaled_hankel_seq(n_max: int, z: float):
    """``H^(1)_n(z)`` for n = 0..n_max as (mantissa, log-scale) pairs."""
    h0 = complex(special.j0(z), special.y0(z))
    h1 = complex(special.j1(z), special.y1(z))
    mant = np.empty(n_max + 1, complex)
    logs = np.empty(n_max + 1)
    mant[0], logs[0] = h0, 0.0
    if n_max >= 1:
        mant[1], logs[1] = h1, 0.0
    prev, cur, scale = h0, h1, 0.0
    for n in range(1, n_max):
        nxt = (2.0 * n / z) * cur - prev
        prev, cur = cur, nxt
        mag = abs(nxt)
        if mag > _RESCALE_AT:
            prev /= mag
            cur = nxt / mag
            scale += np.log(mag)
        mant[n + 1] = cur
        logs[n + 1] = scale
    return mant, logs


def _scaled_k_seq(n_max: int, x: float):
    """``K_n(x)`` for n = 0..n_max as (mantissa, log-scale) pairs."""
    k0 = float(special.kve(0, x))
    k1 = float(special.kve(1, x))
    mant = np.empty(n_max + 1)
    logs = np.empty(n_max + 1)
    mant[0], logs[0] = k0, -x
    if n_max >= 1:
        mant[1], logs[1] = k1, -x
    prev, cur, scale = k0, k1, -x
    for n in range(1, n_max):
        nxt = prev + (2.0 * n / x) * cur
        prev, cur = cur, nxt
        if nxt > _RESCALE_AT:
            prev /= nxt
            scale += np.log(nxt)
            cur = 1.0
        mant[n + 1] = cur
        logs[n + 1] = scale
    return mant, logs


@dataclass(frozen=True)
class TransferFactor:
    """Same-order ratios between two arguments of one cylinder function.

    ``value_ratio``  is ``F_n(arg_out) / F_n(arg_in)`` and ``deriv_ratio``
    is ``F_n'(arg_out) / F_n(arg_in)``. For outward transfer
    (``arg_out >= arg_in``) the value ratio has modulus at most 1.
    """

    value_ratio: complex
    deriv_ratio: complex


def _ratio(m_num, L_num, m_den, L_den):
    d = L_num - L_den
    if d < _LOG_FLOOR:
        return 0.0 * m_num
    return m_num / m_den * np.exp(d)


def hankel_transfer(n: int, arg_out: float, arg_in: float, *, max_order: int = MAX_ORDER) -> TransferFactor:
    """Outward Hankel ratios ``H_n(arg_out)/H_n(arg_in)`` and ``H_n'(arg_out)/H_n(arg_in)``.

    Uses ``H_n' = H_{n-1} - (n/z) H_n`` and carries all magnitudes in log
    space; valid even where ``|H_n|`` is far outside the double range.
    Negative orders reduce to ``|n|`` (the ratios are even in ``n``).
    """
    m = _check_order(n, max_order)
    if not 0 < arg_in <= arg_out:
        raise ValueError("require arg_out >= arg_in > 0")
    mi, li = _scaled_hankel_seq(m + 1, float(arg_in))
    mo, lo = _scaled_hankel_seq(m + 1, float(arg_out))
    value = _ratio(mo[m], lo[m], mi[m], li[m])
    if m == 0:
        deriv = -_ratio(mo[1], lo[1], mi[0], li[0])
    else:
        deriv = _ratio(mo[m - 1], lo[m - 1], mi[m], li[m]) - (m / arg_out) * value
    return TransferFactor(complex(value), complex(deriv))


def modk_transfer(n: int, arg_out: float, arg_in: float, *, max_order: int = MAX_ORDER) -> TransferFactor:
    """Outward ratios of the second-kind modified Bessel function.

    ``K_n' = -(K_{n-1} + K_{n+1}) / 2``; both ratios are real, the value
    ratio lies in (0, 1] and the derivative ratio is negative.
    """
    m = _check_order(n, max_order)
    if not 0 < arg_in <= arg_out:
        raise ValueError("require arg_out >= arg_in > 0")
    mi, li = _scaled_k_seq(m + 1, float(arg_in))
    mo, lo = _scaled_k_seq(m + 1, float(arg_out))
    value = _ratio(mo[m], lo[m], mi[m], li[m])
    prev = _ratio(mo[abs(m - 1)], lo[abs(m - 1)], mi[m], li[m])
    nxt = _ratio(mo[m + 1], lo[m + 1], mi[m], li[m])
    return TransferFactor(complex(value), complex(-0.5 * (prev + nxt)))


def transfer_tables(n_max: int, arg_out: float, arg_in: float, *, max_order: int = MAX_ORDER):
    """Vectorized transfer factors for all orders 0..n_max at once.

    Returns four arrays ``(h_value, h_deriv, k_value, k_deriv)`` indexed by
    order; the order-``-n`` factors equal the order-``n`` ones.
    """
    _check_order(n_max, max_order)
    if not 0 < arg_in <= arg_out:
        raise ValueError("require arg_out >= arg_in > 0")
    mhi, lhi = _scaled_hankel_seq(n_max + 1, float(arg_in))
    mho, lho = _scaled_hankel_seq(n_max + 1, float(arg_out))
    mki, lki = _scaled_k_seq(n_max + 1, float(arg_in))
    mko, lko = _scaled_k_seq(n_max + 1, float(arg_out))
    ns = np.arange(n_max + 1)

    def ratios(m_num, L_num, m_den, L_den):
        d = L_num - L_den
        with np.errstate(under="ignore"):
            r = m_num / m_den * np.exp(np.maximum(d, _LOG_FLOOR))
        return np.where(d < _LOG_FLOOR, 0.0, r)

    h_value = ratios(mho[:-1], lho[:-1], mhi[:-1], lhi[:-1])
    h_deriv = np.empty(n_max + 1, complex)
    h_deriv[0] = -ratios(mho[1], lho[1], mhi[0], lhi[0])
    h_deriv[1:] = (
        ratios(mho[:-2], lho[:-2], mhi[1:-1], lhi[1:-1])
        - (ns[1:] / arg_out) * h_value[1:]
    )
    k_value = ratios(mko[:-1], lko[:-1], mki[:-1], lki[:-1])
    k_prev = ratios(mko[np.abs(ns - 1)], lko[np.abs(ns - 1)], mki[:-1], lki[:-1])
    k_next = ratios(mko[ns + 1], lko[ns + 1], mki[:-1], lki[:-1])
    k_deriv = -0.5 * (k_prev + k_next)
    return h_value, h_deriv, k_value.astype(float), k_deriv.astype(float)
