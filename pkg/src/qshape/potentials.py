"""Catalog of translationally shape-invariant potentials.

Natural units throughout: hbar = m = e = 1, so the momentum enters the
factorization operators as ``p / sqrt(2)`` and

    H1 = p^2 / 2 + W(x)^2 - W'(x) / sqrt(2)

has ground energy exactly zero. Every model carries

* a parameter sequence ``a_j`` (``param_at``),
* the dimensionless remainder ``R(a_j)`` (``remainder``),
* an energy scale ``hbar_omega`` so that ``E_n = hbar_omega * e_n``,
* an ansatz pair ``(C, f)`` with ``R(a_j) = C [f(a_j) - f(a_{j+1})]``.

Two index systems appear. *Catalog* indices ``j`` are the ones the public
functions ``param_at``, ``remainder`` and ``ansatz_f`` take. *Ladder*
indices ``k`` label parameters the way the ladder algebra does: the
Hamiltonian H1 carries ``a_1``, its first excitation costs ``R(a_1)``.
They differ only for Coulomb, where the L-wave Hamiltonian carries
``a = L`` at catalog index 0, so ladder ``k`` is catalog ``k - 1``
(``base_index_offset = 1``).
"""

import enum
import json
import math
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

__all__ = [
    "DEFAULT_CAP",
    "PotentialKind",
    "PotentialModel",
    "make_model",
    "model_from_json",
    "param_at",
    "remainder",
    "energy_ladder",
    "superpotential",
    "partner_potential_V1",
    "bound_state_count",
    "ansatz_f",
    "validate_ansatz",
    "ladder_remainder",
    "ladder_f",
    "ladder_valid",
]

#: Ladder length reported for potentials with infinitely many bound states.
DEFAULT_CAP = 64

_SQRT2 = math.sqrt(2.0)


class PotentialKind(str, enum.Enum):
    HO = "HarmonicOscillator"
    MORSE = "Morse"
    SCARF = "Scarf"
    COULOMB = "Coulomb"


_ALIASES = {
    "harmonicoscillator": PotentialKind.HO,
    "harmonic_oscillator": PotentialKind.HO,
    "ho": PotentialKind.HO,
    "morse": PotentialKind.MORSE,
    "scarf": PotentialKind.SCARF,
    "coulomb": PotentialKind.COULOMB,
    "hydrogen": PotentialKind.COULOMB,
}

_REQUIRED = {
    PotentialKind.HO: ("omega",),
    PotentialKind.MORSE: ("V0", "lambda", "b"),
    PotentialKind.SCARF: ("V0", "lambda"),
    PotentialKind.COULOMB: ("Z", "L"),
}


@dataclass(frozen=True)
class PotentialModel:
    """Validated, immutable shape-invariant potential.

    Build instances with :func:`make_model`; the constructor does no checking.
    """

    kind: PotentialKind
    raw_params: MappingProxyType
    hbar_omega: float
    ansatz_C: float = 1.0
    base_index_offset: int = 0
    cap: int = DEFAULT_CAP
    _count: int = field(default=0, repr=False, compare=False)

    @property
    def name(self):
        return self.kind.value

    @property
    def label(self):
        inner = ",".join(f"{k}={v:g}" for k, v in self.raw_params.items())
        return f"{self.kind.value}({inner})"

    def to_json(self):
        return {"kind": self.kind.value, "params": dict(self.raw_params)}


def _kind(kind):
    if isinstance(kind, PotentialKind):
        return kind
    key = str(kind).strip()
    try:
        return PotentialKind(key)
    except ValueError:
        pass
    try:
        return _ALIASES[key.lower()]
    except KeyError:
        raise ValueError(f"unknown potential kind {kind!r}") from None


def _positive(params, name):
    value = params[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"parameter {name!r} must be a real number, got {value!r}")
    value = float(value)
    if not (value > 0.0 and math.isfinite(value)):
        raise ValueError(f"parameter {name!r} must be > 0, got {value!r}")
    return value


def make_model(kind, raw_params, cap=DEFAULT_CAP):
    """Validate ``raw_params`` for ``kind`` and return a :class:`PotentialModel`.

    Required parameters per kind: HarmonicOscillator ``omega``; Morse ``V0``,
    ``lambda``, ``b``; Scarf ``V0``, ``lambda``; Coulomb ``Z`` and integer
    ``L >= 0``.

    Raises
    ------
    ValueError
        On unknown kind, missing or out-of-range parameters, or a Morse well
        too shallow to hold a bound state.
    """
    kind = _kind(kind)
    params = dict(raw_params)
    missing = [p for p in _REQUIRED[kind] if p not in params]
    if missing:
        raise ValueError(f"{kind.value} model is missing parameter(s): {', '.join(missing)}")
    extra = sorted(set(params) - set(_REQUIRED[kind]))
    if extra:
        raise ValueError(f"{kind.value} model got unexpected parameter(s): {', '.join(extra)}")
    if int(cap) < 1:
        raise ValueError("cap must be a positive integer")
    cap = int(cap)

    offset = 0
    if kind is PotentialKind.HO:
        clean = {"omega": _positive(params, "omega")}
        hbar_omega = clean["omega"]
    elif kind is PotentialKind.MORSE:
        clean = {name: _positive(params, name) for name in ("V0", "lambda", "b")}
        hbar_omega = clean["V0"]
        step = clean["lambda"] / math.sqrt(2.0 * clean["V0"])
        if step * 0.5 >= clean["b"]:
            raise ValueError(
                "Morse well holds no bound state: lambda/sqrt(2 V0) * 1/2 must be < b "
                f"(got {step * 0.5:g} >= {clean['b']:g})"
            )
    elif kind is PotentialKind.SCARF:
        clean = {name: _positive(params, name) for name in ("V0", "lambda")}
        hbar_omega = 0.5 * clean["lambda"] ** 2
    else:
        L = params["L"]
        if isinstance(L, bool) or not isinstance(L, (int, float)) or float(L) != int(L) or L < 0:
            raise ValueError(f"parameter 'L' must be an integer >= 0, got {L!r}")
        clean = {"Z": _positive(params, "Z"), "L": int(L)}
        hbar_omega = 0.5 * clean["Z"] ** 2
        offset = 1

    model = PotentialModel(
        kind=kind,
        raw_params=MappingProxyType(clean),
        hbar_omega=hbar_omega,
        ansatz_C=1.0,
        base_index_offset=offset,
        cap=cap,
    )
    object.__setattr__(model, "_count", _count_bound(model))
    return model


def model_from_json(doc):
    """Build a model from ``{"kind": ..., "params": {...}}`` (dict, JSON text or path)."""
    if isinstance(doc, (str, bytes)) and not str(doc).lstrip().startswith("{"):
        with open(doc, encoding="utf-8") as handle:
            doc = json.load(handle)
    elif isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError('model document must be an object with "kind" and "params"')
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ValueError('"params" must be an object')
    kwargs = {"cap": doc["cap"]} if "cap" in doc else {}
    return make_model(doc["kind"], params, **kwargs)


# -- parameter sequence ------------------------------------------------------


def _morse_step(p):
    return p["lambda"] / math.sqrt(2.0 * p["V0"])


def _scarf_top(p):
    # a_0 + 1/2 ... a_j = top - j
    return 0.5 * (math.sqrt(8.0 * p["V0"] / p["lambda"] ** 2 + 1.0) + 1.0)


def _param(model, j):
    p = model.raw_params
    kind = model.kind
    if kind is PotentialKind.HO:
        return float(j)
    if kind is PotentialKind.MORSE:
        return p["b"] - _morse_step(p) * (j - 0.5)
    if kind is PotentialKind.SCARF:
        return _scarf_top(p) - j
    return float(p["L"] + j)


def _f(model, j):
    kind = model.kind
    if kind is PotentialKind.HO:
        return -float(j)
    a = _param(model, j)
    if kind is PotentialKind.COULOMB:
        return 1.0 / (a + 1.0) ** 2
    return a * a


def _R(model, j):
    kind = model.kind
    if kind is PotentialKind.HO:
        return 1.0
    a0, a1 = _param(model, j), _param(model, j + 1)
    if kind is PotentialKind.COULOMB:
        return 1.0 / (a0 + 1.0) ** 2 - 1.0 / (a1 + 1.0) ** 2
    return (a0 - a1) * (a0 + a1)


def _count_bound(model):
    if model.kind in (PotentialKind.HO, PotentialKind.COULOMB):
        return model.cap
    # level n exists while the parameter of its ground-state partner a_{n+1} stays positive
    n = -1
    while n + 1 < model.cap and _param(model, n + 2) > 0.0:
        n += 1
    return max(n, 0)


def bound_state_count(model):
    """Highest level index ``n`` on the bound ladder (levels are ``0..n``).

    Morse/Scarf: largest ``n`` with ``a_{n+1} > 0``, i.e. every remainder up to
    level ``n`` is positive. HO/Coulomb: the model's ``cap``.
    """
    return model._count


def param_at(model, j):
    """Potential parameter ``a_j`` at catalog index ``j``."""
    if j < 0:
        raise IndexError(f"parameter index must be >= 0, got {j}")
    return _param(model, j)


def _check_index(model, j):
    if j < 0 or j > bound_state_count(model):
        raise IndexError(
            f"index {j} outside the bound-state range 0..{bound_state_count(model)} of {model.label}"
        )


def remainder(model, j):
    """Dimensionless remainder ``R(a_j)`` at catalog index ``j``.

    Morse/Scarf ``a_j^2 - a_{j+1}^2``; Coulomb ``1/(L+j+1)^2 - 1/(L+j+2)^2``; HO 1.
    """
    _check_index(model, j)
    return _R(model, j)


def ansatz_f(model, j):
    """Ansatz function ``f(a_j)`` with ``R(a_j) = C [f(a_j) - f(a_{j+1})]``."""
    _check_index(model, j)
    return _f(model, j)


def validate_ansatz(model, j_max=None):
    """Largest ``|R(a_j) - C (f_j - f_{j+1})|`` over ``0 <= j <= j_max``."""
    if j_max is None:
        j_max = bound_state_count(model)
    _check_index(model, j_max)
    C = model.ansatz_C
    return max(abs(_R(model, j) - C * (_f(model, j) - _f(model, j + 1))) for j in range(j_max + 1))


# -- ladder indexing ---------------------------------------------------------


def ladder_valid(model, k):
    """Whether ladder index ``k`` names a parameter inside the model's domain."""
    j = k - model.base_index_offset
    if model.kind is PotentialKind.COULOMB:
        return 0 <= model.raw_params["L"] + j and j <= bound_state_count(model)
    return 0 <= j <= bound_state_count(model)


def _check_ladder(model, k):
    if not ladder_valid(model, k):
        raise IndexError(f"ladder index {k} outside the parameter domain of {model.label}")


def ladder_remainder(model, k):
    """``R(a_k)`` with ``k`` counted as the ladder algebra counts it."""
    _check_ladder(model, k)
    return _R(model, k - model.base_index_offset)


def ladder_f(model, k):
    """``f(a_k)`` in ladder counting."""
    _check_ladder(model, k)
    return _f(model, k - model.base_index_offset)


def energy_ladder(model, n_max):
    """Undeformed dimensionless levels ``e_0..e_{n_max}``, ``e_n = R(a_1) + ... + R(a_n)``."""
    count = bound_state_count(model)
    if n_max < 0 or n_max > count:
        raise IndexError(f"n_max={n_max} outside the bound-state range 0..{count} of {model.label}")
    levels = [0.0]
    for n in range(1, n_max + 1):
        levels.append(levels[-1] + ladder_remainder(model, n))
    return levels


# -- coordinate space --------------------------------------------------------


def _check_coulomb_radius(model, x):
    if model.kind is PotentialKind.COULOMB and np.any(np.asarray(x) <= 0.0):
        raise ValueError("Coulomb superpotential needs a radial coordinate r > 0")


def _w_and_slope(model, a, x):
    p = model.raw_params
    kind = model.kind
    if kind is PotentialKind.HO:
        w = p["omega"] / _SQRT2
        return w * x, w + 0.0 * x
    if kind is PotentialKind.MORSE:
        lam = p["lambda"]
        s = math.sqrt(p["V0"])
        e = np.exp(-lam * x)
        return s * (a - e), s * lam * e
    if kind is PotentialKind.SCARF:
        lam = p["lambda"]
        k = lam / _SQRT2
        t = np.tanh(lam * x)
        return k * a * t, k * a * lam * (1.0 - t * t)
    Z = p["Z"]
    return (Z / (a + 1.0) - (a + 1.0) / x) / _SQRT2, (a + 1.0) / (x * x) / _SQRT2


def superpotential(model, j, x):
    """``W(x; a_j)`` at catalog index ``j`` (energy^(1/2) units).

    Morse ``sqrt(V0) (a_j - exp(-lambda x))``; Scarf
    ``(lambda/sqrt 2) a_j tanh(lambda x)``; Coulomb
    ``(Z/(a_j+1) - (a_j+1)/r) / sqrt 2``; HO ``omega x / sqrt 2``.
    """
    _check_coulomb_radius(model, x)
    w, _ = _w_and_slope(model, param_at(model, j), np.asarray(x, dtype=float))
    return float(w) if np.ndim(x) == 0 else w


def partner_potential_V1(model, x):
    """Potential of ``H1 = p^2/2 + V1``: ``V1 = W^2 - W'/sqrt(2)`` with the H1 parameter."""
    _check_coulomb_radius(model, x)
    a = _param(model, 1 - model.base_index_offset)
    w, slope = _w_and_slope(model, a, np.asarray(x, dtype=float))
    v = w * w - slope / _SQRT2
    return float(v) if np.ndim(x) == 0 else v
