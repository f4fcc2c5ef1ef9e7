"""Eigenvalue-based classification of steady states."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence, Tuple

import numpy as np

HYPERBOLICITY_TOL = 1e-8


class StabilityClass(str, Enum):
    STABLE_NODE = "stable_node"
    STABLE_FOCUS = "stable_focus"
    SADDLE = "saddle"
    SOURCE = "source"
    CENTER_OR_UNDETERMINED = "center_or_undetermined"


def classify_eigenvalues(eigenvalues: Sequence[complex],
                         tol: float = HYPERBOLICITY_TOL) -> StabilityClass:
    """Map a spectrum to a stability class.

    Real parts within ``tol`` of zero count as marginal: with no expanding
    direction the verdict is CENTER_OR_UNDETERMINED rather than a guess.
    An expanding direction together with any non-expanding one is a saddle.
    """
    ev = np.asarray(eigenvalues, dtype=complex)
    re = ev.real
    n_pos = int(np.sum(re > tol))
    n_neg = int(np.sum(re < -tol))
    n = len(ev)
    if n_neg == n:
        if np.any(np.abs(ev.imag) > tol):
            return StabilityClass.STABLE_FOCUS
        return StabilityClass.STABLE_NODE
    if n_pos == n:
        return StabilityClass.SOURCE
    if n_pos > 0:
        return StabilityClass.SADDLE
    return StabilityClass.CENTER_OR_UNDETERMINED


@dataclass
class Equilibrium:
    """A located steady state with its spectrum and classification."""

    state: Tuple[float, ...]
    kind: str
    eigenvalues: Tuple[complex, ...]
    stability: StabilityClass
    multiplicity: int = 1
    notes: str = ""

    @property
    def stable(self) -> bool:
        return self.stability in (StabilityClass.STABLE_NODE,
                                  StabilityClass.STABLE_FOCUS)

    def to_dict(self) -> dict:
        return {
            "state": list(self.state),
            "kind": self.kind,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "stability": self.stability.value,
            "multiplicity": self.multiplicity,
            "notes": self.notes,
        }


def numeric_jacobian(fun: Callable[[np.ndarray], Sequence[float]],
                     x: Sequence[float],
                     rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian with step rel_step*max(1, |x_i|)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    m = len(fun(x))
    J = np.empty((m, n))
    for j in range(n):
        step = rel_step * max(1.0, abs(x[j]))
        xp = x.copy(); xp[j] += step
        xm = x.copy(); xm[j] -= step
        fp = np.asarray(fun(xp), dtype=float)
        fm = np.asarray(fun(xm), dtype=float)
        J[:, j] = (fp - fm) / (2.0 * step)
    return J
