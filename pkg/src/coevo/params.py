"""Parameter containers for the host-parasite model.

Two levels of description are used throughout the package:

* :class:`EcoParams` -- the fixed-trait ecological model (two ODEs for the
  host density ``x1`` and parasite density ``x2``).
* :class:`EvoConfig` -- the co-evolutionary model (four ODEs: densities plus
  the mean heritable traits ``u1``, ``u2``), which reduces to the ecological
  model when both evolutionary speeds are zero.

The parasite is *facultative* when its background growth rate exceeds the
search/handling death rate (``r2 > d``) and *obligate* when ``d > r2``.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Optional

from .traits import TraitModel


@dataclass(frozen=True)
class EcoParams:
    """Constants of the two-species ecological model.

    Attributes:
        r1: host intrinsic growth rate (1/time), > 0.
        r2: parasite intrinsic growth rate in the absence of this host
            (1/time), >= 0.
        K1: host carrying capacity, > 0.
        K2: parasite carrying capacity, > 0.
        a: parasitism efficiency (1/(individuals*time)), >= 0.
        h: handling time (time), >= 0.
        e: conversion efficiency in (0, 1].
        d: parasite death rate from searching/attacking hosts (1/time), >= 0.
    """

    r1: float
    r2: float
    K1: float
    K2: float
    a: float
    h: float
    e: float
    d: float

    def __post_init__(self) -> None:
        if not self.r1 > 0:
            raise ValueError(f"r1 must be > 0, got {self.r1}")
        if self.r2 < 0:
            raise ValueError(f"r2 must be >= 0, got {self.r2}")
        if not (self.K1 > 0 and self.K2 > 0):
            raise ValueError(f"K1, K2 must be > 0, got {self.K1}, {self.K2}")
        if self.a < 0:
            raise ValueError(f"a must be >= 0, got {self.a}")
        if self.h < 0:
            raise ValueError(f"h must be >= 0, got {self.h}")
        if not 0 < self.e <= 1:
            raise ValueError(f"e must be in (0, 1], got {self.e}")
        if self.d < 0:
            raise ValueError(f"d must be >= 0, got {self.d}")

    @property
    def facultative(self) -> bool:
        """True when the parasite persists without this host (r2 > d)."""
        return self.r2 > self.d

    def holling_at(self, x1: float) -> float:
        """Per-capita parasitism gain a*x1/(1 + h*a*x1)."""
        return self.a * x1 / (1.0 + self.h * self.a * x1)

    def replaced(self, **kw: float) -> "EcoParams":
        d = asdict(self)
        d.update(kw)
        return EcoParams(**d)

    def facultative_reduction(self) -> "EcoParams":
        """Equivalent parameters with the death rate folded away.

        Valid for r2 > d: (r2, d, K2) -> (r2 - d, 0, K2*(1 - d/r2)) leaves the
        parasite equation unchanged.
        """
        if not self.facultative:
            raise ValueError("facultative reduction requires r2 > d")
        return self.replaced(
            r2=self.r2 - self.d, d=0.0, K2=self.K2 * (1.0 - self.d / self.r2)
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EcoParams":
        extra = set(data) - {f for f in cls.__dataclass_fields__}
        if extra:
            raise ValueError(f"unknown EcoParams keys: {sorted(extra)}")
        missing = {f for f in cls.__dataclass_fields__} - set(data)
        if missing:
            raise ValueError(f"missing EcoParams keys: {sorted(missing)}")
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class EvoConfig:
    """Configuration of the co-evolutionary (4-D) model.

    The density equations use trait-evaluated carrying capacities,
    parasitism efficiency and death rate; the trait equations move each
    mean trait up its own fitness gradient at speed ``sigma1_sq`` /
    ``sigma2_sq`` (trait variances).

    ``d`` is the constant parasite death rate and must be given unless the
    trait model carries a trait-dependent death rate of its own.
    """

    r1: float
    r2: float
    h: float
    e: float
    traits: TraitModel
    sigma1_sq: float = 1.0
    sigma2_sq: float = 1.0
    d: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.r1 > 0:
            raise ValueError(f"r1 must be > 0, got {self.r1}")
        if self.r2 < 0:
            raise ValueError(f"r2 must be >= 0, got {self.r2}")
        if self.h < 0:
            raise ValueError(f"h must be >= 0, got {self.h}")
        if not 0 < self.e <= 1:
            raise ValueError(f"e must be in (0, 1], got {self.e}")
        if self.sigma1_sq < 0 or self.sigma2_sq < 0:
            raise ValueError("evolutionary speeds must be >= 0")
        if self.traits.has_trait_death:
            if self.d is not None:
                raise ValueError(
                    "d must not be set when the trait model defines d(v2)"
                )
        else:
            if self.d is None:
                raise ValueError("constant death rate d is required")
            if self.d < 0:
                raise ValueError(f"d must be >= 0, got {self.d}")

    def death_eval(self, v2: float):
        """(d, d', d'') at trait value v2."""
        if self.traits.has_trait_death:
            return self.traits.d_eval(v2)
        return (self.d, 0.0, 0.0)

    def frozen_params(self, u1: float, u2: float) -> EcoParams:
        """Ecological constants obtained by freezing the traits at (u1, u2)."""
        K1 = self.traits.K1_eval(u1).value
        K2 = self.traits.K2_eval(u2).value
        a = self.traits.a_eval(u1, u2).value
        d = self.death_eval(u2)[0]
        return EcoParams(r1=self.r1, r2=self.r2, K1=K1, K2=K2, a=a,
                         h=self.h, e=self.e, d=d)

    def to_dict(self) -> dict:
        out = {
            "r1": self.r1, "r2": self.r2, "h": self.h, "e": self.e,
            "sigma1_sq": self.sigma1_sq, "sigma2_sq": self.sigma2_sq,
            "traits": self.traits.to_dict(),
        }
        if self.d is not None:
            out["d"] = self.d
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "EvoConfig":
        known = {"r1", "r2", "h", "e", "d", "sigma1_sq", "sigma2_sq", "traits"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown EvoConfig keys: {sorted(extra)}")
        if "traits" not in data:
            raise ValueError("EvoConfig requires a 'traits' block")
        kw = {k: float(v) for k, v in data.items() if k != "traits"}
        return cls(traits=TraitModel.from_dict(data["traits"]), **kw)
