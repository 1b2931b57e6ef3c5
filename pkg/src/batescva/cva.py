"""CVA estimators: exposure quadrature (HTFD-HTMC) and the coupled PIDE (C-HTFD)."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .htfd import (
    JumpQuadrature,
    PriceSurface,
    YGrid,
    blend_children,
    build_jump_quadrature,
    build_y_grid,
    price_surface,
    step_level,
)
from .htmc import ExposureProfile, expected_exposure, simulate_paths
from .model import BatesParams, DefaultModel, NumericsConfig, OptionSpec
from .voltree import VolTree, build_tree

Z95 = 1.959963984540054


class Method(str, Enum):
    HTFD_HTMC = "htfd-htmc"
    C_HTFD = "c-htfd"


@dataclass
class CvaResult:
    method: Method
    cva: float
    ci_halfwidth: float | None = None
    runtime: float = 0.0
    config_label: str = "custom"


def quadrature_weights(times: np.ndarray, model: DefaultModel, r: float) -> np.ndarray:
    """Weights w_n with CVA = sum_n w_n EE(t_n) (trapezoidal rule on a uniform grid)."""
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise ValueError("exposure profile needs at least two time points")
    h = times[1] - times[0]
    trap = np.full(times.size, h)
    trap[0] = trap[-1] = 0.5 * h
    return (1.0 - model.recovery) * trap * np.exp(-r * times) * model.density(times)


def cva_quadrature(profile: ExposureProfile, model: DefaultModel, r: float) -> CvaResult:
    """CVA from a discrete expected-exposure curve.

    The CI half-width propagates the exposure sampling error through the
    (linear) quadrature, using the cross-time covariance when the profile
    carries one and the per-date standard errors otherwise.
    """
    if profile.ee.size == 0:
        raise ValueError("empty exposure profile")
    w = quadrature_weights(profile.times, model, r)
    cva = float(w @ profile.ee)
    if profile.cov is not None and profile.n_paths > 1:
        var = float(w @ profile.cov @ w) / profile.n_paths
    else:
        var = float(np.sum((w * profile.se) ** 2))
    return CvaResult(Method.HTFD_HTMC, cva, Z95 * math.sqrt(max(var, 0.0)))


def cva_surface(
    params: BatesParams,
    spec: OptionSpec,
    model: DefaultModel,
    tree: VolTree,
    grid: YGrid,
    quad: JumpQuadrature,
    surface: PriceSurface,
) -> list:
    """Backward solve of the CVA PIDE; returns the value slices per time level.

    Each step propagates the later slice with the same IMEX step as the
    pricer, then adds the default-loss source ``h (1-R) max(V, 0) PD'(t_n)``
    held at the left endpoint ``t_n``.
    """
    if surface.tree is not tree or surface.grid is not grid:
        if surface.tree.n_steps != tree.n_steps or surface.grid.n_y != grid.n_y:
            raise ValueError("price surface was built on a different tree or grid")
    h = tree.h
    lgd = 1.0 - model.recovery
    N = tree.n_steps
    slices = [None] * (N + 1)
    slices[N] = np.zeros((N + 1, grid.n_y))
    for n in range(N - 1, -1, -1):
        data = blend_children(tree, n, slices[n + 1])
        c = step_level(data, tree.nodes[n], h, grid, quad, params)
        c += h * lgd * float(model.density(n * h)) * np.maximum(surface.values[n], 0.0)
        slices[n] = c
    return slices


def cva_coupled_pide(
    params: BatesParams,
    spec: OptionSpec,
    model: DefaultModel,
    tree: VolTree,
    grid: YGrid,
    quad: JumpQuadrature,
    surface: PriceSurface,
) -> CvaResult:
    slices = cva_surface(params, spec, model, tree, grid, quad, surface)
    return CvaResult(Method.C_HTFD, float(slices[0][0, grid.center]))


def build_pricer(params: BatesParams, spec: OptionSpec, cfg: NumericsConfig):
    """Tree, grid, quadrature and risk-free surface for one scenario."""
    tree = build_tree(params, cfg.n_time, spec.maturity)
    grid = build_y_grid(params, spec, cfg)
    quad = build_jump_quadrature(params, grid, cfg)
    surface = price_surface(params, spec, tree, grid, quad)
    return tree, grid, quad, surface


def exposure_profile(params, spec, cfg, workers: int = 1) -> ExposureProfile:
    tree, _, _, surface = build_pricer(params, spec, cfg)
    batch = simulate_paths(tree, params, cfg, workers=workers)
    return expected_exposure(batch, surface)


def run_method(
    method: Method | str,
    params: BatesParams,
    spec: OptionSpec,
    model: DefaultModel,
    cfg: NumericsConfig,
    label: str = "custom",
    workers: int = 1,
) -> CvaResult:
    try:
        method = Method(method)
    except ValueError:
        raise ValueError(f"unknown method {method!r}; expected one of {[m.value for m in Method]}") from None
    start = time.perf_counter()
    tree, grid, quad, surface = build_pricer(params, spec, cfg)
    if method is Method.C_HTFD:
        res = cva_coupled_pide(params, spec, model, tree, grid, quad, surface)
    else:
        batch = simulate_paths(tree, params, cfg, workers=workers)
        res = cva_quadrature(expected_exposure(batch, surface), model, params.r)
    res.runtime = time.perf_counter() - start
    res.config_label = label
    return res
