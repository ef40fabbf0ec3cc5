"""Spectra and ladder-operator algebra of q-deformed shape-invariant potentials."""

from .potentials import PotentialKind, PotentialModel, make_model, model_from_json
from .spectra import DeformationScheme, Variant

__version__ = "0.1.0"

__all__ = [
    "PotentialKind",
    "PotentialModel",
    "make_model",
    "model_from_json",
    "DeformationScheme",
    "Variant",
]
