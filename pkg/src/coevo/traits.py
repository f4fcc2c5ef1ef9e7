"""Trait-function families with analytic first and second derivatives.

Every trait function used by the co-evolutionary model is a smooth positive
bump ``A * exp(-phi(v))``; its derivatives follow from phi:

    f' = -phi' f          f'' = (phi'^2 - phi'') f

Three families are provided:

* ``GAUSSIAN`` -- carrying capacities peak at v = 0 with width sigma_K;
  the efficiency ``a`` peaks where host and parasite traits coincide, with
  width sigma_a in the trait difference.  Trait domain: the real line.
* ``BOUNDED_QUARTIC`` -- bump exponents are quartics chosen so that values
  and slopes repeat at both ends of the trait interval [0, c]; the trait
  box [0, c]^2 is then forward-invariant.  The death rate may optionally
  depend on the parasite trait in this family (amplitude d0, width sigma_d).
* ``ASYMMETRIC_GAUSSIAN_A`` -- like GAUSSIAN but the efficiency peak is
  offset by sigma_a^2 * beta in the trait difference.

Analytic derivatives are exact at symmetry points (where gradients must
vanish identically), which finite differences cannot guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional


class TraitFamily(str, Enum):
    GAUSSIAN = "gaussian"
    BOUNDED_QUARTIC = "bounded_quartic"
    ASYMMETRIC_GAUSSIAN_A = "asymmetric_gaussian_a"


class TraitDomainError(ValueError):
    """Trait value outside the declared trait domain."""


class TraitEval(NamedTuple):
    """Value and derivatives of a single-variable trait function."""

    value: float
    d1: float
    d2: float


class EfficiencyEval(NamedTuple):
    """Value and partial derivatives of the two-variable efficiency a(v1, v2)."""

    value: float
    dv1: float
    dv2: float
    dv1v1: float
    dv2v2: float
    dv1v2: float


def _bump(amplitude: float, phi: float, dphi: float, d2phi: float) -> TraitEval:
    if phi > 700.0:  # exp underflow guard; derivatives vanish with the value
        return TraitEval(0.0, 0.0, 0.0)
    f = amplitude * math.exp(-phi)
    return TraitEval(f, -dphi * f, (dphi * dphi - d2phi) * f)


def _gauss_phi(v: float, sigma: float):
    s2 = sigma * sigma
    return v * v / (2.0 * s2), v / s2, 1.0 / s2


def _quartic_k_phi(v: float, c: float, sigma: float):
    # exponent v^2 (v-c)^2 / (2 sigma^2); zero value/slope at v = 0 and v = c
    s2 = sigma * sigma
    return (
        v * v * (v - c) * (v - c) / (2.0 * s2),
        v * (v - c) * (2.0 * v - c) / s2,
        (6.0 * v * v - 6.0 * c * v + c * c) / s2,
    )


def _quartic_pair_phi(z: float, c: float, denom: float):
    # exponent (z^2 - c^2)^2 / (2 denom); used by the bounded efficiency
    # (denom = sigma_a^4) and the trait-dependent death rate (denom = sigma_d^2)
    w = z * z - c * c
    return w * w / (2.0 * denom), 2.0 * z * w / denom, (6.0 * z * z - 2.0 * c * c) / denom


@dataclass(frozen=True)
class TraitModel:
    """A family of trait functions {K1(v1), K2(v2), a(v1, v2), d(v2)}.

    Attributes:
        family: which functional family is in force.
        K01, K02: peak carrying capacities, > 0.
        a0: peak parasitism efficiency, > 0.
        sigma_K1, sigma_K2, sigma_a: widths, > 0.
        c: trait-domain bound (BOUNDED_QUARTIC only; domain is [0, c]).
        beta: efficiency asymmetry (ASYMMETRIC_GAUSSIAN_A only, nonzero).
        d0, sigma_d: amplitude and width of the trait-dependent death rate
            (BOUNDED_QUARTIC only); leave unset for a constant death rate,
            which then lives in :class:`~coevo.params.EvoConfig`.
    """

    family: TraitFamily
    K01: float
    K02: float
    a0: float
    sigma_K1: float
    sigma_K2: float
    sigma_a: float
    c: Optional[float] = None
    beta: Optional[float] = None
    d0: Optional[float] = None
    sigma_d: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", TraitFamily(self.family))
        for name in ("K01", "K02", "a0", "sigma_K1", "sigma_K2", "sigma_a"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.family is TraitFamily.BOUNDED_QUARTIC:
            if self.c is None or not self.c > 0:
                raise ValueError("BOUNDED_QUARTIC requires c > 0")
            if (self.d0 is None) != (self.sigma_d is None):
                raise ValueError("d0 and sigma_d must be given together")
            if self.sigma_d is not None and not self.sigma_d > 0:
                raise ValueError("sigma_d must be > 0")
            if self.d0 is not None and not self.d0 > 0:
                raise ValueError("d0 must be > 0")
        else:
            if self.d0 is not None or self.sigma_d is not None:
                raise ValueError("trait-dependent death rate requires BOUNDED_QUARTIC")
            if self.c is not None:
                raise ValueError("c is only meaningful for BOUNDED_QUARTIC")
        if self.family is TraitFamily.ASYMMETRIC_GAUSSIAN_A:
            if self.beta is None or self.beta == 0:
                raise ValueError("ASYMMETRIC_GAUSSIAN_A requires beta != 0")
        elif self.beta is not None:
            raise ValueError("beta is only meaningful for ASYMMETRIC_GAUSSIAN_A")

    # -- domain ---------------------------------------------------------

    @property
    def bounded(self) -> bool:
        return self.family is TraitFamily.BOUNDED_QUARTIC

    @property
    def has_trait_death(self) -> bool:
        return self.sigma_d is not None

    def check_domain(self, v: float, slack: float = None) -> None:
        """Raise outside [0, c] for the bounded family.

        The evaluation helpers allow a sliver of slack beyond the ends (the
        bump formulas are real-analytic everywhere) so that derivative
        stencils centered on the corners stay legal; :func:`trait_eval`
        enforces the domain exactly.
        """
        if not self.bounded:
            return
        if slack is None:
            slack = 1e-4 * max(1.0, self.c)
        if not (-slack <= v <= self.c + slack):
            raise TraitDomainError(f"trait value {v} outside [0, {self.c}]")

    def domain_interval(self) -> Optional[tuple]:
        """(lo, hi) for a bounded domain, None for the real line."""
        return (0.0, self.c) if self.bounded else None

    # -- single-variable functions --------------------------------------

    def _K_eval(self, v: float, K0: float, sigma: float) -> TraitEval:
        self.check_domain(v)
        if self.bounded:
            phi = _quartic_k_phi(v, self.c, sigma)
        else:
            phi = _gauss_phi(v, sigma)
        return _bump(K0, *phi)

    def K1_eval(self, v1: float) -> TraitEval:
        return self._K_eval(v1, self.K01, self.sigma_K1)

    def K2_eval(self, v2: float) -> TraitEval:
        return self._K_eval(v2, self.K02, self.sigma_K2)

    def d_eval(self, v2: float) -> TraitEval:
        if not self.has_trait_death:
            raise ValueError("this trait model has no trait-dependent death rate")
        self.check_domain(v2)
        # (v2-c)^2 (v2+c)^2 = (v2^2-c^2)^2, peak d0 at v2 = +-c
        phi = _quartic_pair_phi(v2, self.c, self.sigma_d * self.sigma_d)
        return _bump(self.d0, *phi)

    # -- efficiency a(v1, v2) --------------------------------------------

    def a_eval(self, v1: float, v2: float) -> EfficiencyEval:
        self.check_domain(v1)
        self.check_domain(v2)
        z = v1 - v2
        if self.family is TraitFamily.GAUSSIAN:
            phi, dphi, d2phi = _gauss_phi(z, self.sigma_a)
            amp = self.a0
        elif self.family is TraitFamily.BOUNDED_QUARTIC:
            sa = self.sigma_a
            phi, dphi, d2phi = _quartic_pair_phi(z, self.c, sa * sa * sa * sa)
            amp = self.a0
        else:  # asymmetric: peak shifted to z = -sigma_a^2 beta
            sa2 = self.sigma_a * self.sigma_a
            shift = sa2 * self.beta
            phi, dphi, d2phi = _gauss_phi(z + shift, self.sigma_a)
            amp = self.a0 * math.exp(0.5 * shift * shift)
        val, dz, dzz = _bump(amp, phi, dphi, d2phi)
        # z = v1 - v2: d/dv1 = d/dz, d/dv2 = -d/dz
        return EfficiencyEval(val, dz, -dz, dzz, dzz, -dzz)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "family": self.family.value,
            "K01": self.K01, "K02": self.K02, "a0": self.a0,
            "sigma_K1": self.sigma_K1, "sigma_K2": self.sigma_K2,
            "sigma_a": self.sigma_a,
        }
        for name in ("c", "beta", "d0", "sigma_d"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TraitModel":
        known = {"family", "K01", "K02", "a0", "sigma_K1", "sigma_K2",
                 "sigma_a", "c", "beta", "d0", "sigma_d"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown TraitModel keys: {sorted(extra)}")
        if "family" not in data:
            raise ValueError("TraitModel requires 'family'")
        kw = {k: (v if k == "family" else float(v)) for k, v in data.items()}
        return cls(**kw)


def trait_eval(model: TraitModel, which: str, v):
    """Evaluate one trait function with its analytic derivatives.

    Args:
        model: the trait family.
        which: one of "K1", "K2", "d", "a".
        v: a trait value, or a pair (v1, v2) when ``which == "a"``.

    Returns:
        TraitEval for K1/K2/d, EfficiencyEval (with all partials) for "a".
    """
    if which == "a":
        v1, v2 = v
        model.check_domain(float(v1), slack=0.0)
        model.check_domain(float(v2), slack=0.0)
        return model.a_eval(float(v1), float(v2))
    if which not in ("K1", "K2", "d"):
        raise ValueError(f"unknown trait function {which!r}")
    model.check_domain(float(v), slack=0.0)
    if which == "K1":
        return model.K1_eval(float(v))
    if which == "K2":
        return model.K2_eval(float(v))
    return model.d_eval(float(v))
