"""Concrete hyperbolic model spaces with exact group actions."""

from .base import BallEntry, ModelSpace
from .free import FreeGroupModel, Ray, make_ray
from .halfplane import SL2, HalfPlaneModel, HPoint, hpoint
from .lamplighter import DOWN, LampElement, LamplighterModel, LampVertex, UpEnd, make_up_end

__all__ = [
    "BallEntry",
    "DOWN",
    "FreeGroupModel",
    "HPoint",
    "HalfPlaneModel",
    "LampElement",
    "LampVertex",
    "LamplighterModel",
    "ModelSpace",
    "Ray",
    "SL2",
    "UpEnd",
    "hpoint",
    "make_model",
    "make_ray",
    "make_up_end",
    "model_from_json",
]


def make_model(kind: str, rank: int = 2) -> ModelSpace:
    if kind == "free":
        return FreeGroupModel(rank)
    if kind == "halfplane":
        return HalfPlaneModel()
    if kind == "lamplighter":
        return LamplighterModel()
    raise ValueError(f"unknown model kind {kind!r}")


def model_from_json(doc: dict) -> ModelSpace:
    """Inverse of ``ModelSpace.describe``."""
    kind = doc["kind"]
    if kind == "halfplane" and "generators" in doc:
        return HalfPlaneModel([SL2.of(rows) for rows in doc["generators"]])
    return make_model(kind, int(doc.get("rank", 2)))
