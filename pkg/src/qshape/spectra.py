"""Deformed energy spectra.

Four deformations of a shape-invariant ladder are covered. Values are
dimensionless (units of ``hbar_omega``):

=========  ===============================================================
variant    level ``n``
=========  ===============================================================
standard   ``[e_n]_q``, the spectrum of ``B+^(q) B-^(q)``
arikcoon   ``[e_n]_{q^2}``, diagonal of ``C+ C-`` (no Hamiltonian defined)
dmodel     ``q^{e_n - R(a_n)} [e_n]_q``, diagonal of ``D+ D-``
smodel     ``sum_{k<=n} G_k``, spectrum of the shape-invariant ``S+ S-``
=========  ===============================================================

The S-model level has two evaluation routes: the partial sum of the
increments ``G_k = q^{-2 C f(a_k)} q^{R(a_k)} [R(a_k)]_q`` and the closed form
``q^{2 R(a_0)} F^2 q^{e_n} [e_n]_q`` with ``F = q^{-C f(a_0)}``. Both are
exposed so that each can check the other. ``a_0``, ``F`` and ``R(a_0)``
are plain numbers at the model's base parameter.
"""

import csv
import enum
import io
import math
from dataclasses import dataclass

from . import potentials as pot
from .qnum import Q_bracket, q_bracket
from .serialize import dumps_json, fmt

__all__ = [
    "Variant",
    "DeformationScheme",
    "SpectrumRow",
    "SpectrumTable",
    "deformed_energy",
    "functional_F",
    "g_sequence",
    "s_model_energy_sum",
    "s_model_energy_closed",
    "spectrum_table",
]


class Variant(str, enum.Enum):
    STANDARD = "standard"
    ARIKCOON = "arikcoon"
    DMODEL = "dmodel"
    SMODEL = "smodel"


_VARIANT_ALIASES = {
    "standard": Variant.STANDARD,
    "arikcoon": Variant.ARIKCOON,
    "arikcoonq": Variant.ARIKCOON,
    "arik-coon": Variant.ARIKCOON,
    "qmodel": Variant.ARIKCOON,
    "cmodel": Variant.ARIKCOON,
    "dmodel": Variant.DMODEL,
    "smodel": Variant.SMODEL,
}


@dataclass(frozen=True)
class DeformationScheme:
    variant: Variant
    q: float

    def __post_init__(self):
        try:
            variant = _VARIANT_ALIASES[str(getattr(self.variant, "value", self.variant)).lower()]
        except KeyError:
            raise ValueError(f"unknown deformation variant {self.variant!r}") from None
        object.__setattr__(self, "variant", variant)
        q = float(self.q)
        if not (q > 0.0 and math.isfinite(q)):
            raise ValueError(f"deformation parameter q must be a positive finite real, got {self.q!r}")
        object.__setattr__(self, "q", q)


def _check_level(model, n):
    count = pot.bound_state_count(model)
    if n < 0 or n > count:
        raise IndexError(f"level {n} outside the bound-state range 0..{count} of {model.label}")


def _level(model, n):
    return pot.energy_ladder(model, n)[n]


def functional_F(model, q, k=0):
    """Ansatz functional ``F_k = q^{-C f(a_k)}`` (ladder index ``k``, default the base ``F``).

    Shifting by one ladder step multiplies by ``q^{R(a_k)}``, so
    ``F_k = q^{R(a_0)} ... q^{R(a_{k-1})} F``.

    Raises
    ------
    ValueError
        If the ansatz does not reproduce the remainders, or ``a_k`` lies
        outside the potential's domain (Coulomb ``L = 0`` has ``a_0 = -1``).
    """
    if pot.validate_ansatz(model) > 1e-10:
        raise ValueError(f"{model.label} does not satisfy the remainder ansatz")
    if not pot.ladder_valid(model, k):
        raise ValueError(f"base parameter a_{k} of {model.label} lies outside the potential's domain")
    return q ** (-model.ansatz_C * pot.ladder_f(model, k))


def _check_q(q):
    if not (q > 0.0 and math.isfinite(q)):
        raise ValueError(f"deformation parameter q must be a positive finite real, got {q!r}")


def _g(model, q, k):
    _check_q(q)
    R = pot.ladder_remainder(model, k)
    log_q = math.log(q)
    return math.exp((-2.0 * model.ansatz_C * pot.ladder_f(model, k) + R) * log_q) * q_bracket(R, q)


def g_sequence(model, q, k):
    """S-model level increment ``G_k = q^{-2 C f(a_k)} q^{R(a_k)} [R(a_k)]_q``, ``k >= 1``."""
    if k < 1 or k > pot.bound_state_count(model):
        raise IndexError(f"G index {k} outside 1..{pot.bound_state_count(model)}")
    return _g(model, q, k)


def s_model_energy_sum(model, q, n):
    """``G_1 + ... + G_n``; zero for ``n = 0``."""
    _check_level(model, n)
    return math.fsum(_g(model, q, k) for k in range(1, n + 1))


def _s_prefactor_log(model, q):
    _check_q(q)
    # ln(q^{2R(a_0)} F^2); when a_0 is outside the domain use the ansatz-reduced q^{-2 C f(a_1)}
    log_q = math.log(q)
    C = model.ansatz_C
    if pot.ladder_valid(model, 0):
        return (2.0 * pot.ladder_remainder(model, 0) - 2.0 * C * pot.ladder_f(model, 0)) * log_q
    return -2.0 * C * pot.ladder_f(model, 1) * log_q


def s_model_energy_closed(model, q, n):
    """Closed form ``q^{2 R(a_0)} F^2 q^{e_n} [e_n]_q`` of the S-model level ``n``."""
    _check_level(model, n)
    e_n = _level(model, n)
    return math.exp(_s_prefactor_log(model, q) + e_n * math.log(q)) * q_bracket(e_n, q)


def deformed_energy(model, scheme, n):
    """Level ``n`` of ``scheme`` applied to ``model``, in units of ``hbar_omega``."""
    _check_level(model, n)
    q = scheme.q
    e_n = _level(model, n)
    variant = scheme.variant
    if variant is Variant.STANDARD:
        return q_bracket(e_n, q)
    if variant is Variant.ARIKCOON:
        return Q_bracket(e_n, q * q)
    if variant is Variant.DMODEL:
        if n == 0:
            return 0.0
        return q ** (e_n - pot.ladder_remainder(model, n)) * q_bracket(e_n, q)
    return s_model_energy_closed(model, q, n)


# -- tables ------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumRow:
    n: int
    e_n: float
    E_def: float = None
    G_n: float = None


class SpectrumTable(list):
    """List of :class:`SpectrumRow` with CSV/JSON writers."""

    HEADER = ("n", "e_n", "E_deformed", "G_n")

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.HEADER)
        for row in self:
            writer.writerow([row.n, fmt(row.e_n), fmt(row.E_def), fmt(row.G_n)])
        return buf.getvalue()

    def to_records(self):
        return [{"n": r.n, "e_n": r.e_n, "E_deformed": r.E_def, "G_n": r.G_n} for r in self]

    def to_json(self):
        return dumps_json(self.to_records())


def spectrum_table(model, n_max, scheme=None):
    """Rows ``0..n_max`` of undeformed levels plus, if given, the deformed ones."""
    levels = pot.energy_ladder(model, n_max)
    table = SpectrumTable()
    for n, e_n in enumerate(levels):
        E_def = G_n = None
        if scheme is not None:
            E_def = deformed_energy(model, scheme, n)
            if scheme.variant is Variant.SMODEL and n >= 1:
                G_n = g_sequence(model, scheme.q, n)
        table.append(SpectrumRow(n, e_n, E_def, G_n))
    return table
