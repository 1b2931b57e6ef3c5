"""Recombining binomial tree for the CIR variance with multiple-jump transitions."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .model import BatesParams


@dataclass(frozen=True)
class VolTree:
    """Variance tree stored level by level.

    ``nodes[n]`` has ``n + 1`` entries. ``down[n]``, ``up[n]`` and ``p_up[n]``
    are defined for ``n < n_steps`` and index into level ``n + 1``.
    """

    n_steps: int
    h: float
    nodes: list
    down: list
    up: list
    p_up: list
    # True where the raw moment-matching ratio fell outside [0, 1]
    clamped: list

    @property
    def n_nodes(self) -> int:
        return sum(len(level) for level in self.nodes)

    def p_down(self, n: int) -> np.ndarray:
        return 1.0 - self.p_up[n]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "k", "v", "k_down", "k_up", "p_up"])
            for n, level in enumerate(self.nodes):
                for k, v in enumerate(level):
                    if n < self.n_steps:
                        w.writerow([n, k, repr(float(v)), self.down[n][k], self.up[n][k], repr(float(self.p_up[n][k]))])
                    else:
                        w.writerow([n, k, repr(float(v)), "", "", ""])


def node_values(v0: float, sigma: float, h: float, n: int) -> np.ndarray:
    k = np.arange(n + 1)
    root = math.sqrt(v0) + 0.5 * sigma * (2 * k - n) * math.sqrt(h)
    values = np.where(root > 0, root, 0.0) ** 2
    # central nodes sit exactly at V0, free of the sqrt round trip
    values[2 * k == n] = v0
    return values


def _targets_level(v: np.ndarray, drift: np.ndarray, nxt: np.ndarray):
    """Down/up targets for all nodes of one level (vectorised search on the sorted next level)."""
    n = v.size - 1
    target = v + drift
    k = np.arange(n + 1)

    # largest k* with nxt[k*] <= target, restricted to k* <= k
    kd = np.searchsorted(nxt, target, side="right") - 1
    kd = np.minimum(kd, k)
    kd = np.where(kd < 0, 0, kd)

    # smallest k* with nxt[k*] >= target, restricted to k* >= k + 1
    ku = np.searchsorted(nxt, target, side="left")
    ku = np.maximum(ku, k + 1)
    ku = np.where(ku > n + 1, n + 1, ku)
    return kd, ku


def moment_match_probability(target, lo, hi):
    """Up probability matching the conditional mean, clamped to [0, 1]; 1 when lo == hi."""
    denom = hi - lo
    degenerate = denom <= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = np.where(degenerate, 1.0, (target - lo) / np.where(degenerate, 1.0, denom))
    p = np.clip(raw, 0.0, 1.0)
    clamped = (~degenerate) & ((raw < 0) | (raw > 1))
    return p, clamped


def build_tree(params: BatesParams, n_steps: int, maturity: float) -> VolTree:
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    h = maturity / n_steps
    nodes = [node_values(params.v0, params.sigma, h, n) for n in range(n_steps + 1)]
    down, up, p_up, clamped = [], [], [], []
    for n in range(n_steps):
        v = nodes[n]
        drift = params.mu_v(v) * h
        kd, ku = _targets_level(v, drift, nodes[n + 1])
        p, c = moment_match_probability(v + drift, nodes[n + 1][kd], nodes[n + 1][ku])
        down.append(kd)
        up.append(ku)
        p_up.append(p)
        clamped.append(c)
    return VolTree(n_steps, h, nodes, down, up, p_up, clamped)


def jump_targets(tree: VolTree, n: int, k: int) -> tuple[int, int]:
    if not (0 <= k <= n < tree.n_steps):
        raise IndexError(f"node ({n}, {k}) outside tree with {tree.n_steps} steps")
    return int(tree.down[n][k]), int(tree.up[n][k])


def transition_prob(tree: VolTree, n: int, k: int) -> float:
    if not (0 <= k <= n < tree.n_steps):
        raise IndexError(f"node ({n}, {k}) outside tree with {tree.n_steps} steps")
    return float(tree.p_up[n][k])


def terminal_distribution(tree: VolTree) -> np.ndarray:
    """Probability of each node at the last level, starting from the root."""
    prob = np.ones(1)
    for n in range(tree.n_steps):
        nxt = np.zeros(n + 2)
        np.add.at(nxt, tree.up[n], prob * tree.p_up[n])
        np.add.at(nxt, tree.down[n], prob * (1.0 - tree.p_up[n]))
        prob = nxt
    return prob
