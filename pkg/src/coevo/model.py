"""Fitness functions and right-hand sides of the ecological and
co-evolutionary systems.

The fitness of a focal individual carrying trait ``v`` in a resident
population with mean traits ``u = (u1, u2)`` and densities ``x = (x1, x2)``:

    G1(v1, u, x) = r1 (1 - x1/K1(v1)) - a(v1, u2) x2 / (1 + h a(v1, u2) x1)
    G2(v2, u, x) = e a(u1, v2) x1 / (1 + h a(u1, v2) x1) - d(v2)
                   + r2 (1 - x2/K2(v2))

Densities grow as x_i * G_i(u_i, u, x); each mean trait climbs its own
fitness gradient, du_i/dt = sigma_i^2 * dG_i/dv_i at v_i = u_i.
"""

from __future__ import annotations

from typing import Sequence, Tuple

from .params import EcoParams, EvoConfig


def fitness_g1(v1: float, u: Sequence[float], x: Sequence[float],
               cfg: EvoConfig) -> float:
    """Host fitness of a focal individual with trait v1."""
    x1, x2 = x
    K1 = cfg.traits.K1_eval(v1).value
    a = cfg.traits.a_eval(v1, u[1]).value
    return cfg.r1 * (1.0 - x1 / K1) - a * x2 / (1.0 + cfg.h * a * x1)


def fitness_g2(v2: float, u: Sequence[float], x: Sequence[float],
               cfg: EvoConfig) -> float:
    """Parasite fitness of a focal individual with trait v2."""
    x1, x2 = x
    K2 = cfg.traits.K2_eval(v2).value
    a = cfg.traits.a_eval(u[0], v2).value
    d = cfg.death_eval(v2)[0]
    return (cfg.e * a * x1 / (1.0 + cfg.h * a * x1) - d
            + cfg.r2 * (1.0 - x2 / K2))


def fitness_gradients(u: Sequence[float], x: Sequence[float],
                      cfg: EvoConfig) -> Tuple[float, float]:
    """Analytic (dG1/dv1, dG2/dv2) evaluated at the resident traits.

    dG1/dv1 = r1 x1 K1'(u1)/K1(u1)^2 - x2 a_v1 / (1 + h a x1)^2
    dG2/dv2 = e x1 a_v2 / (1 + h a x1)^2 - d'(u2) + r2 x2 K2'(u2)/K2(u2)^2
    """
    x1, x2 = x
    u1, u2 = u
    K1 = cfg.traits.K1_eval(u1)
    K2 = cfg.traits.K2_eval(u2)
    a = cfg.traits.a_eval(u1, u2)
    dprime = cfg.death_eval(u2)[1]
    s = 1.0 + cfg.h * a.value * x1
    g1 = cfg.r1 * x1 * K1.d1 / (K1.value * K1.value) - x2 * a.dv1 / (s * s)
    g2 = (cfg.e * x1 * a.dv2 / (s * s) - dprime
          + cfg.r2 * x2 * K2.d1 / (K2.value * K2.value))
    return g1, g2


def eco_rhs(x: Sequence[float], params: EcoParams) -> Tuple[float, float]:
    """Time derivatives (dx1/dt, dx2/dt) of the fixed-trait model."""
    x1, x2 = x
    s = 1.0 + params.h * params.a * x1
    H1 = params.r1 * (1.0 - x1 / params.K1) - params.a * x2 / s
    H2 = (params.e * params.a * x1 / s - params.d
          + params.r2 * (1.0 - x2 / params.K2))
    return x1 * H1, x2 * H2


def evo_rhs(state: Sequence[float],
            cfg: EvoConfig) -> Tuple[float, float, float, float]:
    """Time derivatives of the co-evolutionary model at (x1, x2, u1, u2).

    With both evolutionary speeds zero this reduces exactly (bit for bit on
    the density components) to :func:`eco_rhs` with traits frozen.
    """
    x1, x2, u1, u2 = state
    frozen = cfg.frozen_params(u1, u2)
    f1, f2 = eco_rhs((x1, x2), frozen)
    g1, g2 = fitness_gradients((u1, u2), (x1, x2), cfg)
    return f1, f2, cfg.sigma1_sq * g1, cfg.sigma2_sq * g2
