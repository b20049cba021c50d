"""
Objetivos de calidad para optimizar datos de scrambling.

Todas las claves son "mayor es mejor":
  - conflict: r_f
  - energy: -E
  - combined: conjuntos factibles (r_f >= r_target) por encima de los no
    factibles; entre factibles gana menor energía, entre no factibles mayor r_f.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from src.analysis.quality import QualityScore, blue_noise_energy, conflict_radius


class ObjectiveKind(str, Enum):
    CONFLICT = "conflict"
    ENERGY = "energy"
    COMBINED = "combined"


@dataclass(frozen=True)
class Objective:
    """
    Attributes:
        kind: Tipo de objetivo
        r_target: Umbral de r_f para la factibilidad
        sigma: Parámetro de la energía blue-noise
    """

    kind: ObjectiveKind = ObjectiveKind.COMBINED
    r_target: float = 0.2
    sigma: float = 0.5

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        if self.sigma <= 0:
            raise ValueError("sigma debe ser > 0")

    @property
    def needs_energy(self) -> bool:
        return self.kind != ObjectiveKind.CONFLICT

    def feasible(self, score: QualityScore) -> bool:
        return score.conflict_radius >= self.r_target

    def evaluate(self, points: np.ndarray) -> QualityScore:
        """Calcula r_f y, solo si el objetivo la usa, la energía."""
        r_f = conflict_radius(points)
        energy = float("nan")
        if self.kind == ObjectiveKind.ENERGY or (self.kind == ObjectiveKind.COMBINED and r_f >= self.r_target):
            energy = blue_noise_energy(points, self.sigma)
        return QualityScore(r_f, energy)

    def key(self, score: QualityScore) -> Tuple[float, float]:
        if self.kind == ObjectiveKind.CONFLICT:
            return (0.0, score.conflict_radius)
        if self.kind == ObjectiveKind.ENERGY:
            return (0.0, -score.bn_energy)
        if self.feasible(score):
            return (1.0, -score.bn_energy)
        return (0.0, score.conflict_radius)

    def better(self, candidate: QualityScore, incumbent: QualityScore) -> bool:
        """Mejora estricta según el orden total del objetivo."""
        return self.key(candidate) > self.key(incumbent)
