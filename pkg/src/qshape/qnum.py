"""q-number and Q-number arithmetic.

All three brackets accept scalars or numpy arrays for ``x``; scalar input
gives a Python float back. ``q`` (or ``Q``) must be a positive real.

Near the undeformed point the symmetric bracket is evaluated as
``sinh(x ln q) / sinh(ln q)`` so that nothing cancels as ``q -> 1``.
"""

import math

import numpy as np

__all__ = [
    "EXPONENT_GUARD",
    "LIMIT_THRESHOLD",
    "q_bracket",
    "Q_bracket",
    "bracket_bridge",
    "q_power",
]

#: Largest accepted ``|x ln q|``; beyond it exp() overflows double precision.
EXPONENT_GUARD = 700.0

#: Below this ``|ln q|`` the series branch is used (when ``|x ln q|`` is small too).
LIMIT_THRESHOLD = 1e-6

# the series branch drops O((x u)^4) terms; keep it where that is below 1 ulp
_SERIES_XU = 1e-4


def _log_param(q, name="q"):
    q = float(q)
    if not q > 0.0 or not math.isfinite(q):
        raise ValueError(f"deformation parameter {name} must be a positive finite real, got {q!r}")
    return math.log(q)


def _prepare(x, u):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bracket argument must be finite")
    if arr.size and float(np.max(np.abs(arr))) * abs(u) > EXPONENT_GUARD:
        raise OverflowError(
            f"|x ln q| exceeds the exponent guard {EXPONENT_GUARD:g}; "
            "bracket would overflow double precision"
        )
    return arr


def _out(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def q_power(x, q):
    """``q**x`` with the same domain checks and exponent guard as the brackets."""
    u = _log_param(q)
    arr = _prepare(x, u)
    return _out(np.exp(arr * u), x)


def q_bracket(x, q):
    """Symmetric q-number ``[x]_q = (q^x - q^-x) / (q - q^-1)``.

    Odd in ``x``, invariant under ``q -> 1/q`` and equal to ``x`` at ``q = 1``.

    Raises
    ------
    ValueError
        If ``q <= 0`` or ``x`` is not finite.
    OverflowError
        If ``|x ln q|`` exceeds :data:`EXPONENT_GUARD`.
    """
    u = _log_param(q)
    arr = _prepare(x, u)
    if u == 0.0:
        return _out(arr.copy(), x)
    xu = arr * u
    with np.errstate(over="ignore"):
        exact = np.sinh(xu) / math.sinh(u)
    if abs(u) < LIMIT_THRESHOLD:
        series = arr * (1.0 + (arr * arr - 1.0) * (u * u) / 6.0)
        exact = np.where(np.abs(xu) < _SERIES_XU, series, exact)
    return _out(exact, x)


def Q_bracket(x, Q):
    """Arik-Coon Q-number ``[x]_Q = (Q^x - 1) / (Q - 1)``, equal to ``x`` at ``Q = 1``."""
    u = _log_param(Q, "Q")
    arr = _prepare(x, u)
    if u == 0.0:
        return _out(arr.copy(), x)
    xu = arr * u
    exact = np.expm1(xu) / math.expm1(u)
    if abs(u) < LIMIT_THRESHOLD:
        series = arr * (1.0 + (arr - 1.0) * u / 2.0 + (arr - 1.0) * (2.0 * arr - 1.0) * u * u / 12.0)
        exact = np.where(np.abs(xu) < _SERIES_XU, series, exact)
    return _out(exact, x)


def bracket_bridge(x, q):
    """``q^x [x]_q / q``, which equals the Q-number ``[x]_{q^2}``.

    This is the rescaling that turns the symmetric bracket into the Arik-Coon
    one; it is evaluated here from the symmetric side so the two routes can be
    checked against each other.
    """
    u = _log_param(q)
    arr = _prepare(x, u)
    # q^(x-1) may need one more unit of exponent than the bracket itself
    _prepare(arr - 1.0, u)
    return _out(np.exp((arr - 1.0) * u) * np.asarray(q_bracket(arr, q)), x)
