"""Host-parasite eco-evolutionary dynamics toolkit.

A library for a two-species host-parasite model with a Holling type II
interaction: fixed-trait ecological analysis (equilibria, stability,
persistence/permanence conditions, bifurcation sweeps) and the full
co-evolutionary trait dynamics (convergence stability, evolutionarily
stable strategies, long-time simulation).
"""

__version__ = "0.1.0"

from .params import EcoParams, EvoConfig
from .traits import (TraitModel, TraitFamily, TraitDomainError, trait_eval)
from .model import (fitness_g1, fitness_g2, fitness_gradients, eco_rhs,
                    evo_rhs)
from .stability import Equilibrium, StabilityClass, classify_eigenvalues
from .ecology import (CubicCoeffs, DegenerateInteractionError,
                      interior_cubic, boundary_equilibria,
                      interior_equilibria, all_equilibria, condition_report,
                      consistency_check, table3_summary)
from .evolution import (EvoEquilibrium, EssVerdict, boundary_evo_equilibria,
                        aligned_equilibria, misaligned_interior_solve,
                        ess_check, ess_sufficient_conditions)
from .simulate import (SimSpec, Trajectory, Event, integrate, detect_events,
                       phase_metrics, PhaseReport, StepUnderflowError,
                       NotOscillatingError, rhs)
from .sweep import (Axis, SweepGrid, SweepResult, sweep1d, sweep2d,
                    count_jump_anomalies)
from .recipes import recipes

__all__ = [
    "EcoParams", "EvoConfig", "TraitModel", "TraitFamily",
    "TraitDomainError", "trait_eval",
    "fitness_g1", "fitness_g2", "fitness_gradients", "eco_rhs", "evo_rhs",
    "Equilibrium", "StabilityClass", "classify_eigenvalues",
    "CubicCoeffs", "DegenerateInteractionError", "interior_cubic",
    "boundary_equilibria", "interior_equilibria", "all_equilibria",
    "condition_report", "consistency_check", "table3_summary",
    "EvoEquilibrium", "EssVerdict", "boundary_evo_equilibria",
    "aligned_equilibria", "misaligned_interior_solve", "ess_check",
    "ess_sufficient_conditions",
    "SimSpec", "Trajectory", "Event", "integrate", "detect_events",
    "phase_metrics", "PhaseReport", "StepUnderflowError",
    "NotOscillatingError", "rhs",
    "Axis", "SweepGrid", "SweepResult", "sweep1d", "sweep2d",
    "count_jump_anomalies",
    "recipes",
]
