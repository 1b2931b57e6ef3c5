"""Model, contract, default and numerical configuration types."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum

import numpy as np


class ConfigError(ValueError):
    """Raised when a parameter set violates its invariants."""


class OptionKind(str, Enum):
    PUT = "put"
    CALL = "call"


class JumpLaw(str, Enum):
    """Parametrisation of the log-jump ``log(1 + J)``.

    MEAN_CORRECTED: ``N(alpha - beta2/2, beta2)``, so ``E[1 + J] = exp(alpha)``.
    LOG_MEAN: ``N(alpha, beta2)``, so ``E[1 + J] = exp(alpha + beta2/2)``.
    """

    MEAN_CORRECTED = "mean-corrected"
    LOG_MEAN = "log-mean"


class Exercise(str, Enum):
    EUROPEAN = "european"
    AMERICAN = "american"


@dataclass(frozen=True)
class BatesParams:
    """Bates dynamics: Heston variance plus log-normal compound Poisson jumps.

    ``alpha`` and ``beta2`` describe the log-jump law selected by ``jump_law``;
    with the default, ``log(1 + J) ~ N(alpha - beta2/2, beta2)``.
    """

    s0: float
    v0: float
    r: float
    eta: float
    kappa: float
    theta: float
    sigma: float
    rho: float
    lam: float
    alpha: float
    beta2: float
    jump_law: JumpLaw = JumpLaw.MEAN_CORRECTED

    def __post_init__(self):
        object.__setattr__(self, "jump_law", JumpLaw(self.jump_law))
        checks = {
            "s0": self.s0 > 0,
            "v0": self.v0 >= 0,
            "kappa": self.kappa > 0,
            "theta": self.theta > 0,
            "sigma": self.sigma > 0,
            "rho": -1 < self.rho < 1,
            "lam": self.lam >= 0,
            "beta2": self.beta2 >= 0,
        }
        for name, ok in checks.items():
            if not ok:
                raise ConfigError(f"invalid BatesParams.{name}={getattr(self, name)!r}")

    @property
    def rho_bar(self) -> float:
        return math.sqrt(1.0 - self.rho**2)

    @property
    def decor(self) -> float:
        """Coefficient rho/sigma of the uncorrelating transform y = log s - (rho/sigma) v."""
        return self.rho / self.sigma

    @property
    def log_jump_mean(self) -> float:
        if self.jump_law is JumpLaw.LOG_MEAN:
            return self.alpha
        return self.alpha - 0.5 * self.beta2

    @property
    def jump_compensator(self) -> float:
        """lam * (E[1 + J] - 1)."""
        return self.lam * math.expm1(self.log_jump_mean + 0.5 * self.beta2)

    def mu_v(self, v):
        return self.kappa * (self.theta - v)

    def mu_y(self, v):
        """Drift of y, including the jump compensator."""
        return (
            self.r
            - self.eta
            - self.jump_compensator
            - 0.5 * v
            - self.decor * self.kappa * (self.theta - v)
        )

    def y0(self) -> float:
        return math.log(self.s0) - self.decor * self.v0


@dataclass(frozen=True)
class OptionSpec:
    kind: OptionKind
    exercise: Exercise
    strike: float
    maturity: float

    def __post_init__(self):
        object.__setattr__(self, "kind", OptionKind(self.kind))
        object.__setattr__(self, "exercise", Exercise(self.exercise))
        if not self.strike > 0:
            raise ConfigError(f"invalid OptionSpec.strike={self.strike!r}")
        if not self.maturity > 0:
            raise ConfigError(f"invalid OptionSpec.maturity={self.maturity!r}")

    @property
    def american(self) -> bool:
        return self.exercise is Exercise.AMERICAN


@dataclass(frozen=True)
class DefaultModel:
    """Counterparty default with constant hazard rate ``delta`` and recovery ``recovery``."""

    delta: float
    recovery: float

    def __post_init__(self):
        if not self.delta >= 0:
            raise ConfigError(f"invalid DefaultModel.delta={self.delta!r}")
        if not 0 <= self.recovery <= 1:
            raise ConfigError(f"invalid DefaultModel.recovery={self.recovery!r}")

    def density(self, t):
        """Default-time density dPD/dt."""
        return self.delta * np.exp(-self.delta * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class NumericsConfig:
    """Grid sizes and Monte Carlo settings.

    ``n_y`` is the number of y-grid *points*; it must be odd so that the
    initial state lies on the central node.
    """

    n_time: int
    n_y: int
    n_paths: int = 1
    y_halfwidth_sds: float = 6.0
    jump_trunc_sds: float = 6.0
    seed: int = 0

    def __post_init__(self):
        if self.n_time < 2:
            raise ConfigError(f"n_time must be >= 2, got {self.n_time}")
        if self.n_y < 3 or self.n_y % 2 == 0:
            raise ConfigError(f"n_y must be odd and >= 3, got {self.n_y}")
        if self.n_paths < 1:
            raise ConfigError(f"n_paths must be >= 1, got {self.n_paths}")
        if not (self.y_halfwidth_sds > 0 and self.jump_trunc_sds > 0):
            raise ConfigError("localization half-widths must be positive")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")


def payoff(spec: OptionSpec, s):
    s = np.asarray(s, dtype=float)
    if spec.kind is OptionKind.PUT:
        return np.maximum(spec.strike - s, 0.0)
    return np.maximum(s - spec.strike, 0.0)


def default_probability(model: DefaultModel, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("default_probability requires t >= 0")
    return -np.expm1(-model.delta * t)


def discount(r: float, t):
    return np.exp(-r * np.asarray(t, dtype=float))


def published_base_case(jump_law: JumpLaw | str = JumpLaw.LOG_MEAN):
    """Reference Bates scenario: put options with S0 in {80, 100, 120}.

    Returns ``(params_list, option_specs, default_model)`` where
    ``params_list`` holds one ``BatesParams`` per initial spot and
    ``option_specs`` holds the European and American put.

    The published CVA tables are reproduced with ``log(1 + J) ~ N(alpha, beta2)``,
    hence the ``LOG_MEAN`` default here.
    """
    base = dict(
        v0=0.01, r=0.03, eta=0.0, kappa=2.0, theta=0.01, sigma=0.2,
        rho=0.5, lam=0.1, alpha=0.1, beta2=0.1, jump_law=JumpLaw(jump_law),
    )
    params = [BatesParams(s0=s0, **base) for s0 in (80.0, 100.0, 120.0)]
    specs = [
        OptionSpec(OptionKind.PUT, Exercise.EUROPEAN, 100.0, 1.0),
        OptionSpec(OptionKind.PUT, Exercise.AMERICAN, 100.0, 1.0),
    ]
    return params, specs, DefaultModel(delta=0.03, recovery=0.4)


def field_names(cls) -> list[str]:
    return [f.name for f in fields(cls)]
