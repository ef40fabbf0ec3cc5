"""Truncated matrix representations of the ladder operators and checks of
their commutation relations.

Every operator acts on the first ``N`` energy eigenstates ``|0>..|N-1>`` of
H1, stored as unit coordinate vectors. Raising operators carry one band
below the diagonal, ``(X+)_{n+1,n} = x_{n+1}``, and lowering operators are
their transposes. All coefficients are real and non-negative for ``q > 0``.

Parameter functionals such as ``R(a_j)`` or ``G_j`` become diagonal
matrices: on state ``n`` a functional with base index ``j`` takes its value
at ladder index ``n + 1 - j``. This is the only diagonal rule under which
``[B-, B+] = R(a_0)`` and ``R(a_n) B+ = B+ R(a_{n-1})`` hold together; the
parameter-translation operator itself is never built. Entries whose ladder
index falls outside the potential's domain are marked invalid and the
corresponding states are left out of the residual.

Truncation corrupts the top of any identity in which an operator climbs
past ``|N-1>`` and comes back down. Each relation therefore declares a
*reach* and residuals are measured on the interior block of states
``lo <= n < N - reach``.
"""

import math
import os
from dataclasses import dataclass

import numpy as np

from . import potentials as pot
from . import spectra
from .qnum import Q_bracket, q_bracket
from .serialize import dumps_json

__all__ = [
    "RELATIONS",
    "DEFAULT_TOL",
    "DiagFunctional",
    "VerificationReport",
    "build_B",
    "build_Bq",
    "build_C",
    "build_D",
    "build_S",
    "build_diag",
    "fock_annihilation",
    "verify_relation",
    "verify_batch",
    "reports_to_json",
]

DEFAULT_TOL = 1e-10

#: Minimum basis size accepted by :func:`verify_relation`.
MIN_N = 4


def _default_tol():
    raw = os.environ.get("QSHAPE_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    tol = float(raw)
    if not tol > 0.0:
        raise ValueError(f"QSHAPE_TOL must be a positive number, got {raw!r}")
    return tol


# -- builders ----------------------------------------------------------------


def _window(model, N):
    if N < 1:
        raise ValueError(f"basis size must be positive, got N={N}")
    count = pot.bound_state_count(model)
    if N - 1 > count:
        raise ValueError(
            f"N={N} exceeds the bound window of {model.label} ({count + 1} levels)"
        )
    return pot.energy_ladder(model, N - 1)


def _raising(band):
    band = np.asarray(band, dtype=float)
    return np.diag(band, -1)


def _pair(band):
    plus = _raising(band)
    return plus, plus.T.copy()


def build_B(model, N):
    """Undeformed ladder pair: ``B+|n> = sqrt(e_{n+1}) |n+1>``, ``B- = B+^T``."""
    e = _window(model, N)
    return _pair(np.sqrt(e[1:]))


def build_Bq(model, q, N):
    """Standard q-deformed pair: band ``sqrt([e_{n+1}]_q)``."""
    e = np.asarray(_window(model, N)[1:])
    return _pair(np.sqrt(q_bracket(e, q)))


def build_C(model, q, N):
    """Arik-Coon pair ``C = B^(Q)`` with ``Q = q^2``: band ``sqrt([e_{n+1}]_Q)``."""
    e = np.asarray(_window(model, N)[1:])
    return _pair(np.sqrt(Q_bracket(e, q * q)))


def build_D(model, q, N):
    """D-model pair: band ``q^{(e_{n+1} - R(a_{n+1}))/2} sqrt([e_{n+1}]_q)``."""
    e = _window(model, N)
    band = [
        q ** (0.5 * (e[m] - pot.ladder_remainder(model, m))) * math.sqrt(q_bracket(e[m], q))
        for m in range(1, N)
    ]
    return _pair(band)


def build_S(model, q, N):
    """Shape-invariant S-model pair: band ``sqrt(G_1 + ... + G_{n+1})``.

    ``S-`` is defined as the transpose of ``S+``.
    """
    _window(model, N)
    band = [math.sqrt(spectra.s_model_energy_sum(model, q, m)) for m in range(1, N)]
    return _pair(band)


def fock_annihilation(N):
    """Plain oscillator annihilator ``a|n> = sqrt(n) |n-1>`` on ``N`` states."""
    return np.diag(np.sqrt(np.arange(1.0, N)), 1)


@dataclass(frozen=True)
class DiagFunctional:
    """Diagonal representation of a parameter functional with base index ``j``."""

    base_index: int
    values: np.ndarray
    valid: np.ndarray

    def matrix(self):
        return np.diag(np.where(self.valid, self.values, 0.0))


def build_diag(model, scalar_fn, j, N):
    """Diagonal functional whose entry ``n`` is ``scalar_fn(n + 1 - j)``.

    ``scalar_fn`` takes a ladder index. Entries with a negative index, an index
    outside the model's parameter domain, or where ``scalar_fn`` raises
    ``IndexError``/``ValueError``/``OverflowError`` are flagged invalid.
    """
    values = np.zeros(N)
    valid = np.zeros(N, dtype=bool)
    for n in range(N):
        k = n + 1 - j
        if k < 0 or not pot.ladder_valid(model, k):
            continue
        try:
            values[n] = scalar_fn(k)
        except (IndexError, ValueError, OverflowError):
            continue
        valid[n] = np.isfinite(values[n])
    return DiagFunctional(j, values, valid)


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    relation_id: str
    model: str
    q: float
    N: int
    interior: int
    max_residual: float
    tolerance: float

    @property
    def passed(self):
        return self.max_residual <= self.tolerance

    def to_record(self):
        return {
            "relation": self.relation_id,
            "model": self.model,
            "q": self.q,
            "N": self.N,
            "interior": self.interior,
            "max_residual": self.max_residual,
            "pass": self.passed,
        }


class _Context:
    """Operator factory for one relation check; collects validity and extra residuals."""

    def __init__(self, model, q, N):
        self.model = model
        self.q = q
        self.N = N
        self.valid = np.ones(N, dtype=bool)
        self.offdiag = 0.0

    def diag(self, scalar_fn, j):
        functional = build_diag(self.model, scalar_fn, j, self.N)
        self.valid &= functional.valid
        return functional.matrix()

    def R(self, j):
        return self.diag(lambda k: pot.ladder_remainder(self.model, k), j)

    def R_fn(self, fn, j):
        return self.diag(lambda k: fn(pot.ladder_remainder(self.model, k)), j)

    def G(self, j):
        return self.diag(lambda k: spectra._g(self.model, self.q, k), j)

    def fn(self, M, f):
        """Apply ``f`` to a diagonal operator ``M``; off-diagonal leakage counts as residual."""
        d = np.diag(M).copy()
        self.offdiag = max(self.offdiag, float(np.max(np.abs(M - np.diag(d)))))
        return np.diag(f(d))


def _ratio(bracket, param):
    # sqrt([x]/x), set to zero where x vanishes: those rows/columns meet a zero band anyway
    def f(d):
        out = np.zeros_like(d)
        nz = d != 0.0
        out[nz] = np.sqrt(bracket(d[nz], param) / d[nz])
        return out

    return f


def _qpow(q, scale=1.0):
    return lambda d: np.exp(scale * d * math.log(q))


def _comm(a, b):
    return a @ b - b @ a


# each relation: (reach, callable(ctx) -> list of residual matrices)


def _rel_cb1(ctx):
    Bp, Bm = build_B(ctx.model, ctx.N)
    return [_comm(Bm, Bp) - ctx.R(0)]


def _rel_tower(ctx):
    Bp, Bm = build_B(ctx.model, ctx.N)
    R0, R1, R2 = ctx.R(0), ctx.R(1), ctx.R(2)
    D1 = R1 - R0
    D2 = R2 - 2.0 * R1 + R0
    return [
        _comm(Bp, R0) - D1 @ Bp,
        _comm(Bp, D1) - D2 @ Bp,
        _comm(R0, Bm) - Bm @ D1,
        _comm(D1, Bm) - Bm @ D2,
    ]


def _rel_h12n(ctx):
    Bp, Bm = build_B(ctx.model, ctx.N)
    E = np.diag(pot.energy_ladder(ctx.model, ctx.N - 1))
    hw = ctx.model.hbar_omega
    return [hw * (Bp @ Bm) - hw * E, Bm @ Bp - (E + ctx.R(0))]


def _deformed_from_B(ctx, Bp, Bm):
    q = ctx.q
    up = ctx.fn(Bm @ Bp, _ratio(q_bracket, q))
    down = ctx.fn(Bp @ Bm, _ratio(q_bracket, q))
    return (Bp @ up, up @ Bm), (down @ Bp, Bm @ down)


def _rel_std(sign):
    def check(ctx):
        q = ctx.q
        Bp, Bm = build_B(ctx.model, ctx.N)
        Bqp, Bqm = build_Bq(ctx.model, q, ctx.N)
        (p1, m1), (p2, m2) = _deformed_from_B(ctx, Bp, Bm)
        NpNm, NmNp = Bp @ Bm, Bm @ Bp
        lhs = Bqm @ Bqp - ctx.R_fn(lambda r: q ** (sign * r), 0) @ Bqp @ Bqm
        rhs = ctx.R_fn(lambda r: q_bracket(r, q), 0) @ ctx.fn(NpNm, _qpow(q, -sign))
        return [
            lhs - rhs,
            Bqp @ Bqm - ctx.fn(NpNm, lambda d: q_bracket(d, q)),
            Bqm @ Bqp - ctx.fn(NmNp, lambda d: q_bracket(d, q)),
            Bqp - p1, Bqp - p2, Bqm - m1, Bqm - m2,
        ]

    return check


def _ho_aq(ctx, bracket, param):
    N = ctx.N
    a = fock_annihilation(N)
    ad = a.T
    num = np.diag(np.arange(float(N)))
    ratio = _ratio(bracket, param)
    aq = a @ ctx.fn(num, ratio)
    aq_alt = ctx.fn(num + np.eye(N), ratio) @ a
    aqd = ctx.fn(num, ratio) @ ad
    aqd_alt = ad @ ctx.fn(num + np.eye(N), ratio)
    return aq, aqd, [aq - aq_alt, aqd - aqd_alt, aqd - aq.T], num


def _rel_ho_std(ctx):
    q = ctx.q
    aq, aqd, defs, num = _ho_aq(ctx, q_bracket, q)
    out = list(defs)
    for s in (+1, -1):
        out.append(aq @ aqd - q**s * (aqd @ aq) - ctx.fn(num, _qpow(q, -s)))
    if ctx.model.kind is pot.PotentialKind.HO:
        Bqp, Bqm = build_Bq(ctx.model, q, ctx.N)
        out += [Bqm - aq, Bqp - aqd]
    return out


def _rel_cmodel(ctx):
    q = ctx.q
    Bp, Bm = build_B(ctx.model, ctx.N)
    Bqp, Bqm = build_Bq(ctx.model, q, ctx.N)
    Cp, Cm = build_C(ctx.model, q, ctx.N)
    NpNm, NmNp = Bp @ Bm, Bm @ Bp
    s = 1.0 / math.sqrt(q)
    half_pm, half_mp = ctx.fn(NpNm, _qpow(q, 0.5)), ctx.fn(NmNp, _qpow(q, 0.5))
    defs = [
        Cm - s * Bqm @ half_pm,
        Cm - s * half_mp @ Bqm,
        Cp - s * half_pm @ Bqp,
        Cp - s * Bqp @ half_mp,
    ]
    q2 = q * q
    products = [
        Cm @ Cp - ctx.fn(NmNp, lambda d: np.expm1(2.0 * d * math.log(q)) / (q2 - 1.0) if q != 1.0 else d),
        Cp @ Cm - ctx.fn(NpNm, lambda d: np.expm1(2.0 * d * math.log(q)) / (q2 - 1.0) if q != 1.0 else d),
    ]
    lhs = Cm @ Cp - ctx.R_fn(lambda r: q ** (2.0 * r), 0) @ Cp @ Cm
    rhs = ctx.R_fn(lambda r: q**r * q_bracket(r, q) / q, 0)
    return defs + products + [lhs - rhs]


def _rel_Qmodel(ctx):
    Q = ctx.q * ctx.q
    Bp, Bm = build_B(ctx.model, ctx.N)
    Cp, Cm = build_C(ctx.model, ctx.q, ctx.N)
    up = ctx.fn(Bm @ Bp, _ratio(Q_bracket, Q))
    down = ctx.fn(Bp @ Bm, _ratio(Q_bracket, Q))
    BQp, BQm = Bp @ up, up @ Bm
    lhs = BQm @ BQp - ctx.R_fn(lambda r: Q**r, 0) @ BQp @ BQm
    rhs = ctx.R_fn(lambda r: Q_bracket(r, Q), 0)
    return [lhs - rhs, BQp - down @ Bp, BQm - Bm @ down, BQp - Cp, BQm - Cm]


def _rel_ho_Q(ctx):
    Q = ctx.q * ctx.q
    bQ, bQd, defs, _ = _ho_aq(ctx, Q_bracket, Q)
    out = list(defs)
    out.append(bQ @ bQd - Q * (bQd @ bQ) - np.eye(ctx.N))
    if ctx.model.kind is pot.PotentialKind.HO:
        Cp, Cm = build_C(ctx.model, ctx.q, ctx.N)
        out += [Cm - bQ, Cp - bQd]
    return out


def _rel_dmodel(ctx):
    q = ctx.q
    Bp, Bm = build_B(ctx.model, ctx.N)
    Bqp, Bqm = build_Bq(ctx.model, q, ctx.N)
    Dp, Dm = build_D(ctx.model, q, ctx.N)
    NpNm, NmNp = Bp @ Bm, Bm @ Bp
    half_pm, half_mp = ctx.fn(NpNm, _qpow(q, 0.5)), ctx.fn(NmNp, _qpow(q, 0.5))
    shift = ctx.R_fn(lambda r: q ** (-0.5 * r), 0)
    defs = [
        Dm - shift @ Bqm @ half_pm,
        Dm - shift @ half_mp @ Bqm,
        Dp - half_pm @ Bqp @ shift,
        Dp - Bqp @ half_mp @ shift,
    ]
    br = lambda d: np.exp(d * math.log(q)) * q_bracket(d, q)  # noqa: E731
    products = [
        Dm @ Dp - ctx.R_fn(lambda r: q ** (-r), 0) @ ctx.fn(NmNp, br),
        Dp @ Dm - ctx.R_fn(lambda r: q ** (-r), 1) @ ctx.fn(NpNm, br),
    ]
    coeff = ctx.R_fn(lambda r: q**r, 0) @ ctx.R_fn(lambda r: q**r, 1)
    lhs = Dm @ Dp - coeff @ Dp @ Dm
    rhs = ctx.R_fn(lambda r: q_bracket(r, q), 0)
    return defs + products + [lhs - rhs]


def _rel_ho_d(ctx):
    q = ctx.q
    aq, aqd, defs, num = _ho_aq(ctx, q_bracket, q)
    half = ctx.fn(num, _qpow(q, 0.5))
    s = 1.0 / math.sqrt(q)
    bq = s * aq @ half
    bqd = s * half @ aqd
    out = list(defs) + [bq - half @ aq, bqd - aqd @ half, bqd - bq.T]
    out.append(bq @ bqd - q * q * (bqd @ bq) - np.eye(ctx.N))
    if ctx.model.kind is pot.PotentialKind.HO:
        Dp, Dm = build_D(ctx.model, q, ctx.N)
        out += [Dm - bq, Dp - bqd]
    return out


def _rel_smodel(ctx):
    q = ctx.q
    model = ctx.model
    Bp, Bm = build_B(model, ctx.N)
    Bqp, _ = build_Bq(model, q, ctx.N)
    Sp, Sm = build_S(model, q, ctx.N)
    NpNm, NmNp = Bp @ Bm, Bm @ Bp
    pref = math.exp(spectra._s_prefactor_log(model, q))
    ham = pref * ctx.fn(NpNm, lambda d: np.exp(d * math.log(q)) * q_bracket(d, q))
    amp = math.sqrt(pref)
    return [
        _comm(Sm, Sp) - ctx.G(0),
        Sp @ Sm - ham,
        Sp - amp * ctx.fn(NpNm, _qpow(q, 0.5)) @ Bqp,
        Sp - amp * Bqp @ ctx.fn(NmNp, _qpow(q, 0.5)),
    ]


def _rel_s_tower(ctx):
    q = ctx.q
    hw = ctx.model.hbar_omega
    Sp, Sm = build_S(ctx.model, q, ctx.N)
    H = hw * (Sp @ Sm)
    G1, G2 = ctx.G(1), ctx.G(2)
    Sp2, Sm2 = Sp @ Sp, Sm @ Sm
    return [
        _comm(H, Sp) - hw * G1 @ Sp,
        _comm(H, Sp2) - hw * (G1 + G2) @ Sp2,
        _comm(H, Sm) + hw * Sm @ G1,
        _comm(H, Sm2) + hw * Sm2 @ (G1 + G2),
    ]


def _rel_s_tower2(ctx):
    Sp, Sm = build_S(ctx.model, ctx.q, ctx.N)
    out = []
    for j in (0, 1):
        Gj, Gj1, Gj2 = ctx.G(j), ctx.G(j + 1), ctx.G(j + 2)
        D1 = Gj1 - Gj
        D2 = Gj2 - 2.0 * Gj1 + Gj
        out += [
            _comm(Sp, Gj) - D1 @ Sp,
            _comm(Sp, D1) - D2 @ Sp,
            _comm(Gj, Sm) - Sm @ D1,
            _comm(D1, Sm) - Sm @ D2,
        ]
    return out


RELATIONS = {
    "cb1": (1, _rel_cb1),
    "tower": (1, _rel_tower),
    "h12n": (1, _rel_h12n),
    "std+": (1, _rel_std(+1)),
    "std-": (1, _rel_std(-1)),
    "ho_std": (1, _rel_ho_std),
    "cmodel": (1, _rel_cmodel),
    "Qmodel": (1, _rel_Qmodel),
    "ho_Q": (1, _rel_ho_Q),
    "dmodel": (1, _rel_dmodel),
    "ho_d": (1, _rel_ho_d),
    "smodel": (1, _rel_smodel),
    "s_tower": (2, _rel_s_tower),
    "s_tower2": (1, _rel_s_tower2),
}


def _block(valid, hi):
    idx = np.flatnonzero(valid[:hi])
    if idx.size == 0:
        return 0, 0
    lo = int(idx[0])
    stop = lo
    while stop < hi and valid[stop]:
        stop += 1
    return lo, stop


def verify_relation(relation_id, model, q, N, tol=None):
    """Check one relation on the interior block of an ``N``-state basis.

    ``N`` must be at least :data:`MIN_N` and is then clipped to the model's
    bound window; a window too small to leave any interior state for the
    relation is an error. The oscillator reductions
    (``ho_std``, ``ho_Q``, ``ho_d``) are statements about the plain
    oscillator and are always evaluated on Fock operators; when ``model`` is
    itself an oscillator its deformed ladders are also compared with them.

    Raises
    ------
    KeyError
        Unknown ``relation_id``.
    ValueError
        ``N`` below :data:`MIN_N`, or no interior block left after clipping.
    """
    try:
        reach, check = RELATIONS[relation_id]
    except KeyError:
        raise KeyError(f"unknown relation {relation_id!r}; known: {', '.join(RELATIONS)}") from None
    if tol is None:
        tol = _default_tol()
    if N < MIN_N:
        raise ValueError(f"N too small for relation band reach (need N >= {MIN_N}, got {N})")
    q = float(q)
    if not (q > 0.0 and math.isfinite(q)):
        raise ValueError(f"deformation parameter q must be a positive finite real, got {q!r}")
    n_eff = min(N, pot.bound_state_count(model) + 1)

    ctx = _Context(model, q, n_eff)
    residuals = check(ctx)
    lo, hi = _block(ctx.valid, n_eff - reach)
    if hi - lo < 1:
        raise ValueError(
            f"N too small for relation band reach: {relation_id!r} has no interior "
            f"states in the {n_eff}-level window of {model.label}"
        )
    worst = ctx.offdiag
    for M in residuals:
        worst = max(worst, float(np.max(np.abs(M[lo:hi, lo:hi]))))
    return VerificationReport(relation_id, model.name, q, n_eff, hi - lo, worst, tol)


def verify_batch(model, q_list, N, relations=None, tol=None):
    """Run ``relations`` (default all, in fixed order) for every ``q`` in ``q_list``."""
    relations = list(RELATIONS) if relations is None else list(relations)
    return [verify_relation(rel, model, q, N, tol) for q in q_list for rel in relations]


def reports_to_json(reports):
    return dumps_json([r.to_record() for r in reports])
