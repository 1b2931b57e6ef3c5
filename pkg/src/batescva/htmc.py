"""Hybrid tree Monte Carlo: variance on the tree, y by Euler recursion with jumps."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .htfd import PriceSurface, interpolate_rows
from .model import BatesParams, NumericsConfig
from .voltree import VolTree


@dataclass
class PathBatch:
    node_index: np.ndarray  # (n_paths, N + 1)
    y: np.ndarray  # (n_paths, N + 1)
    n_paths: int
    seed: int

    def spots(self, tree: VolTree, params: BatesParams) -> np.ndarray:
        v = np.stack([tree.nodes[n][self.node_index[:, n]] for n in range(tree.n_steps + 1)], axis=1)
        return np.exp(self.y + params.decor * v)

    def variances(self, tree: VolTree) -> np.ndarray:
        return np.stack([tree.nodes[n][self.node_index[:, n]] for n in range(tree.n_steps + 1)], axis=1)


@dataclass
class ExposureProfile:
    times: np.ndarray
    ee: np.ndarray
    se: np.ndarray
    n_paths: int
    # sample covariance of exposures across time points, when available
    cov: np.ndarray | None = None

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "ee", "se"])
            for row in zip(self.times, self.ee, self.se):
                w.writerow([repr(float(x)) for x in row])


def _simulate_block(tree, params, seeds, lam_h):
    N = tree.n_steps
    m = len(seeds)
    u = np.empty((m, N))
    z = np.empty((m, N))
    counts = np.zeros((m, N))
    zj = np.empty((m, N))
    for j, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        u[j] = rng.random(N)
        z[j] = rng.standard_normal(N)
        if lam_h > 0:
            counts[j] = rng.poisson(lam_h, N)
        zj[j] = rng.standard_normal(N)

    h = tree.h
    beta = math.sqrt(params.beta2)
    mean = params.log_jump_mean
    node = np.zeros((m, N + 1), dtype=np.int64)
    y = np.empty((m, N + 1))
    y[:, 0] = params.y0()
    for n in range(N):
        k = node[:, n]
        v = tree.nodes[n][k]
        # sum of `count` iid N(mean, beta^2) jumps, sampled exactly
        jumps = counts[:, n] * mean + beta * np.sqrt(counts[:, n]) * zj[:, n]
        y[:, n + 1] = (
            y[:, n]
            + params.mu_y(v) * h
            + params.rho_bar * np.sqrt(h * v) * z[:, n]
            + jumps
        )
        go_up = u[:, n] < tree.p_up[n][k]
        node[:, n + 1] = np.where(go_up, tree.up[n][k], tree.down[n][k])
    return node, y


def simulate_paths(tree: VolTree, params: BatesParams, cfg: NumericsConfig, workers: int = 1) -> PathBatch:
    """Simulate ``cfg.n_paths`` hybrid paths.

    Every path owns a child of ``SeedSequence(cfg.seed)``, so the batch is
    identical for any ``workers``.
    """
    if tree.n_steps != cfg.n_time:
        raise ValueError("tree and config disagree on the number of time steps")
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_paths)
    lam_h = params.lam * tree.h
    workers = max(1, min(workers, cfg.n_paths))
    bounds = np.linspace(0, cfg.n_paths, workers + 1).astype(int)
    chunks = [seeds[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
    if workers == 1:
        parts = [_simulate_block(tree, params, chunks[0], lam_h)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: _simulate_block(tree, params, c, lam_h), chunks))
    node = np.concatenate([p[0] for p in parts])
    y = np.concatenate([p[1] for p in parts])
    return PathBatch(node, y, cfg.n_paths, cfg.seed)


def path_exposures(batch: PathBatch, surface: PriceSurface) -> np.ndarray:
    """max(option value, 0) along every path, shape (n_paths, N + 1)."""
    N = surface.n_steps
    if batch.y.shape[1] != N + 1:
        raise ValueError("path batch and price surface have different time grids")
    out = np.empty_like(batch.y)
    for n in range(N + 1):
        k = batch.node_index[:, n]
        # paths carry y directly, so no round trip through spot is needed
        out[:, n] = interpolate_rows(surface.grid, surface.values[n], k, batch.y[:, n])
    return np.maximum(out, 0.0)


def expected_exposure(batch: PathBatch, surface: PriceSurface) -> ExposureProfile:
    exposures = path_exposures(batch, surface)
    m = batch.n_paths
    ee = exposures.mean(axis=0)
    if m > 1:
        se = exposures.std(axis=0, ddof=1) / math.sqrt(m)
        cov = np.cov(exposures, rowvar=False)
    else:
        se = np.zeros_like(ee)
        cov = np.zeros((ee.size, ee.size))
    # every path starts at the same state
    se[0] = 0.0
    times = np.arange(surface.n_steps + 1) * surface.tree.h
    return ExposureProfile(times, ee, se, m, cov)
