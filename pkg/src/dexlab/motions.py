"""Euclidean motions A(x) = Mx + x0 with M orthogonal.

A motion is *proper* when det(M) = +1 (orientation preserving).  Matrices are
validated against M^T M = I to 1e-12 at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonUnitQuaternion

ORTHOGONALITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EuclideanMotion:
    matrix: np.ndarray
    translation: np.ndarray
    proper: bool = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        translation = np.array(self.translation, dtype=float).reshape(-1)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("matrix must be square")
        if translation.shape[0] != matrix.shape[0]:
            raise ValueError("translation dimension must match matrix")
        gram_defect = np.max(np.abs(matrix.T @ matrix - np.eye(matrix.shape[0])))
        if gram_defect > ORTHOGONALITY_TOL:
            raise ValueError(f"matrix is not orthogonal: |M^T M - I| = {gram_defect:.3e}")
        det = float(np.linalg.det(matrix))
        is_proper = det > 0.0
        if self.proper is not None and bool(self.proper) != is_proper:
            raise ValueError(f"proper={self.proper} inconsistent with det={det:+.6f}")
        matrix.setflags(write=False)
        translation.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)
        object.__setattr__(self, "proper", is_proper)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, d: int) -> "EuclideanMotion":
        return cls(np.eye(d), np.zeros(d))

    @classmethod
    def rotation_2d(cls, angle: float, translation=(0.0, 0.0)) -> "EuclideanMotion":
        c, s = np.cos(angle), np.sin(angle)
        return cls(np.array([[c, -s], [s, c]]), np.asarray(translation, dtype=float))

    @classmethod
    def random(cls, d: int, rng: np.random.Generator, proper: bool = True) -> "EuclideanMotion":
        """Haar-ish random motion from the QR of a Gaussian matrix."""
        q, r = np.linalg.qr(rng.standard_normal((d, d)))
        q = q * np.sign(np.diag(r))
        if proper and np.linalg.det(q) < 0:
            q[:, -1] = -q[:, -1]
        return cls(q, rng.standard_normal(d))

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return pts @ self.matrix.T + self.translation

    def compose(self, other: "EuclideanMotion") -> "EuclideanMotion":
        """Motion equal to applying ``self`` first, then ``other``."""
        return EuclideanMotion(other.matrix @ self.matrix,
                               other.matrix @ self.translation + other.translation)

    def inverse(self) -> "EuclideanMotion":
        return EuclideanMotion(self.matrix.T, -self.matrix.T @ self.translation)

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix.tolist(),
            "translation": self.translation.tolist(),
            "proper": bool(self.proper),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EuclideanMotion":
        return cls(np.asarray(d["matrix"]), np.asarray(d["translation"]), d.get("proper"))


def rotation_from_quaternion(a: float, b: float, a1: float, dq: float) -> EuclideanMotion:
    """Proper rotation of R^3 from a unit quaternion (a, b, a1, dq).

    The quadruple must satisfy a^2 + b^2 + a1^2 + dq^2 = 1 to within 1e-6 of
    unit norm; inputs inside that band are renormalized before use.

    Raises:
        NonUnitQuaternion: if the norm deviates from 1 by more than 1e-6.
    """
    norm = float(np.sqrt(a * a + b * b + a1 * a1 + dq * dq))
    if abs(norm - 1.0) > 1e-6:
        raise NonUnitQuaternion(f"quaternion norm {norm:.8f} deviates from 1 by more than 1e-6")
    a, b, a1, dq = a / norm, b / norm, a1 / norm, dq / norm
    matrix = np.array([
        [a * a + b * b - a1 * a1 - dq * dq, 2 * (b * a1 - a * dq), 2 * (b * dq + a * a1)],
        [2 * (b * a1 + a * dq), a * a - b * b + a1 * a1 - dq * dq, 2 * (a1 * dq - a * b)],
        [2 * (b * dq - a * a1), 2 * (a1 * dq + a * b), a * a - b * b - a1 * a1 + dq * dq],
    ])
    return EuclideanMotion(matrix, np.zeros(3), proper=True)
