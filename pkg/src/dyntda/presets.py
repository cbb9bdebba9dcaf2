"""Built-in dynamical systems with pipeline defaults."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .odesolve import OdeSystem


def _rotation(omega: float) -> np.ndarray:
    return np.array([[0.0, omega], [-omega, 0.0]])


def pendulum_linearized() -> OdeSystem:
    # small-angle pendulum in units where g/l = 1: theta' = omega, omega' = -theta
    return OdeSystem.linear(_rotation(1.0), name="pendulum-linearized")


def harmonic_oscillator(omega: float = 2.0) -> OdeSystem:
    return OdeSystem.linear([[0.0, 1.0], [-omega**2, 0.0]], name="harmonic-oscillator")


def coupled_springs() -> OdeSystem:
    # wall - m - m - wall, unit masses and springs; state (x1, x2, v1, v2)
    K = np.array([[-2.0, 1.0], [1.0, -2.0]])
    A = np.block([[np.zeros((2, 2)), np.eye(2)], [K, np.zeros((2, 2))]])
    return OdeSystem.linear(A, name="coupled-springs")


def decaying_spiral(damping: float = 0.1) -> OdeSystem:
    return OdeSystem.linear([[-damping, 1.0], [-1.0, -damping]], name="decaying-spiral")


def two_tori() -> OdeSystem:
    A = np.zeros((4, 4))
    A[:2, :2] = _rotation(1.0)
    A[2:, 2:] = _rotation(math.sqrt(2.0))
    return OdeSystem.linear(A, name="two-tori")


def logistic_forced() -> OdeSystem:
    # x1' = x1 - x1^2 + x2/2 driven by the oscillator x2' = x3, x3' = -x2
    return OdeSystem.polynomial(
        [
            [(1.0, (1, 0, 0, 0)), (-1.0, (2, 0, 0, 0)), (0.5, (0, 1, 0, 0))],
            [(1.0, (0, 0, 1, 0))],
            [(-1.0, (0, 1, 0, 0))],
        ],
        name="logistic-forced",
    )


@dataclass(frozen=True)
class Preset:
    name: str
    form: str
    provenance: str
    system: Callable[[], OdeSystem]
    config: dict = field(default_factory=dict)


PRESETS: dict[str, Preset] = {}


def _register(p: Preset):
    PRESETS[p.name] = p


_register(Preset(
    "pendulum-linearized",
    "theta' = omega, omega' = -theta",
    "small-angle pendulum; its phase-space orbit is a circle",
    pendulum_linearized,
    {
        "system": {"x0": [1.0, 0.0]},
        # 30 samples spaced one thirtieth of a period apart
        "solver": {"scheme": "linear_exact", "t_end": 2 * math.pi * 29 / 30, "n_steps": 290},
        "sampling": {"m": 30},
        "sweep": {"metric": "cosine_dissimilarity", "grid": {"start": 0.01, "stop": 0.45, "num": 23}},
    },
))
_register(Preset(
    "harmonic-oscillator",
    "x' = v, v' = -4 x",
    "mass on a spring, angular frequency 2; elliptical orbit",
    harmonic_oscillator,
    {
        "system": {"x0": [1.0, 0.0]},
        "solver": {"scheme": "fd", "t_end": math.pi, "n_steps": 2000},
        "sampling": {"m": 41},
        "sweep": {"metric": "cosine_dissimilarity", "grid": {"start": 0.005, "stop": 0.2, "num": 20}},
    },
))
_register(Preset(
    "coupled-springs",
    "x1'' = -2 x1 + x2, x2'' = x1 - 2 x2",
    "two unit masses between three unit springs; normal modes 1 and sqrt(3)",
    coupled_springs,
    {
        "system": {"x0": [1.0, 0.0, 0.0, 0.0]},
        "solver": {"scheme": "chebyshev", "t_end": 80.0, "n_nodes": 160},
        "sampling": {"m": 40},
        "sweep": {"metric": "cosine_dissimilarity", "grid": {"start": 0.01, "stop": 0.15, "num": 8}},
    },
))
_register(Preset(
    "decaying-spiral",
    "x' = -0.1 x + y, y' = -x - 0.1 y",
    "damped rotation; the orbit spirals into the origin",
    decaying_spiral,
    {
        "system": {"x0": [1.0, 0.0]},
        "solver": {"scheme": "fd", "t_end": 4 * math.pi, "n_steps": 2000},
        "sampling": {"m": 40},
        "sweep": {"metric": "euclidean", "grid": {"start": 0.02, "stop": 0.5, "num": 12}},
    },
))
_register(Preset(
    "two-tori",
    "rotations with angular frequencies 1 and sqrt(2) in R^4",
    "incommensurate frequencies; the orbit densely fills a 2-torus",
    two_tori,
    {
        "system": {"x0": [1.0, 0.0, 1.0, 0.0]},
        "solver": {"scheme": "linear_exact", "t_end": 398.0, "n_steps": 398},
        "sampling": {"m": 200},
        "sweep": {"metric": "cosine_dissimilarity", "grid": {"start": 0.02, "stop": 0.1, "num": 17}},
    },
))
_register(Preset(
    "logistic-forced",
    "x1' = x1 - x1^2 + x2/2, x2' = x3, x3' = -x2",
    "logistic growth driven by a harmonic oscillator; nonlinear polynomial right-hand side",
    logistic_forced,
    {
        "system": {"x0": [0.5, 1.0, 0.0]},
        "solver": {"scheme": "euler", "t_end": 6 * math.pi, "n_steps": 3000},
        "sampling": {"m": 30},
        "sweep": {"metric": "cosine_dissimilarity", "grid": {"start": 0.002, "stop": 0.1, "num": 12}},
    },
))


def list_presets() -> list[Preset]:
    return list(PRESETS.values())
