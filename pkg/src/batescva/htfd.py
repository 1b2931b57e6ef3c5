"""Hybrid tree / finite-difference pricer.

Backward induction runs over the variance tree; at every node a 1-D
constant-coefficient PIDE in the uncorrelated log-spot variable
``y = log(s) - (rho/sigma) v`` is advanced one step with an IMEX scheme:
centered implicit differences for diffusion/advection, an explicit
trapezoidal convolution for the jumps, then discounting by ``exp(-r h)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .model import BatesParams, NumericsConfig, OptionSpec, payoff
from .voltree import VolTree


@dataclass(frozen=True)
class YGrid:
    y_min: float
    y_max: float
    n_y: int
    dy: float
    points: np.ndarray
    center: int

    def __len__(self):
        return self.n_y


@dataclass(frozen=True)
class JumpQuadrature:
    offsets: np.ndarray  # integer multiples of dy
    x: np.ndarray
    weights: np.ndarray
    lam: float
    compensator: float
    matrix: np.ndarray  # matrix[i, m] = mass moving grid point i onto point m

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def apply(self, u: np.ndarray) -> np.ndarray:
        """lam * (int u(y + x) p(x) dx - mass * u(y)) along the last axis."""
        if self.lam == 0.0:
            return np.zeros_like(u)
        return self.lam * (u @ self.matrix.T - self.total_mass * u)


@dataclass
class PriceSurface:
    """Option values ``values[n][k, i]`` at time ``n h``, tree node ``k``, grid point ``i``."""

    values: list
    grid: YGrid
    tree: VolTree
    spec: OptionSpec
    params: BatesParams

    @property
    def n_steps(self) -> int:
        return self.tree.n_steps

    def origin_value(self) -> float:
        return float(self.values[0][0, self.grid.center])

    def spots(self, n: int, k: int) -> np.ndarray:
        return np.exp(self.grid.points + self.params.decor * self.tree.nodes[n][k])

    def to_csv(self, path) -> None:
        """t=0 slice at the root node against spot."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "value"])
            for s, val in zip(self.spots(0, 0), self.values[0][0]):
                w.writerow([repr(float(s)), repr(float(val))])


def build_y_grid(params: BatesParams, spec: OptionSpec, cfg: NumericsConfig) -> YGrid:
    T = spec.maturity
    half = cfg.y_halfwidth_sds * math.sqrt(max(params.theta, params.v0) * T)
    half += cfg.jump_trunc_sds * math.sqrt(params.beta2) * max(1.0, params.lam * T)
    center = (cfg.n_y - 1) // 2
    dy = 2.0 * half / (cfg.n_y - 1)
    y0 = params.y0()
    points = y0 + dy * (np.arange(cfg.n_y) - center)
    points[center] = y0
    return YGrid(float(points[0]), float(points[-1]), cfg.n_y, dy, points, center)


def build_jump_quadrature(params: BatesParams, grid: YGrid, cfg: NumericsConfig) -> JumpQuadrature:
    m = params.log_jump_mean
    beta = math.sqrt(params.beta2)
    c = cfg.jump_trunc_sds
    lo = math.ceil((m - c * beta) / grid.dy)
    hi = math.floor((m + c * beta) / grid.dy)
    if hi - lo < 2:
        # jump law narrower than the grid: put all mass on the nearest node
        offsets = np.array([round(m / grid.dy)])
        weights = np.ones(1)
    else:
        offsets = np.arange(lo, hi + 1)
        weights = grid.dy * norm.pdf(offsets * grid.dy, loc=m, scale=beta)
        weights[0] *= 0.5
        weights[-1] *= 0.5

    n = grid.n_y
    matrix = np.zeros((n, n))
    rows = np.repeat(np.arange(n), offsets.size)
    cols = np.clip(rows + np.tile(offsets, n), 0, n - 1)
    np.add.at(matrix, (rows, cols), np.tile(weights, n))

    return JumpQuadrature(
        offsets=offsets,
        x=offsets * grid.dy,
        weights=weights,
        lam=float(params.lam),
        compensator=params.jump_compensator,
        matrix=matrix,
    )


def solve_tridiagonal(lower, diag, upper, rhs):
    """Thomas algorithm, batched over the leading axis of ``rhs``.

    ``lower``, ``diag`` and ``upper`` have shape ``(m, n)`` (or broadcast to
    it); ``lower[:, 0]`` and ``upper[:, -1]`` are ignored.
    """
    rhs = np.asarray(rhs, dtype=float)
    m, n = rhs.shape
    lower = np.broadcast_to(lower, (m, n))
    diag = np.broadcast_to(diag, (m, n))
    upper = np.broadcast_to(upper, (m, n))
    cp = np.empty((m, n))
    dp = np.empty((m, n))
    cp[:, 0] = upper[:, 0] / diag[:, 0]
    dp[:, 0] = rhs[:, 0] / diag[:, 0]
    for i in range(1, n):
        denom = diag[:, i] - lower[:, i] * cp[:, i - 1]
        cp[:, i] = upper[:, i] / denom
        dp[:, i] = (rhs[:, i] - lower[:, i] * dp[:, i - 1]) / denom
    x = np.empty((m, n))
    x[:, -1] = dp[:, -1]
    for i in range(n - 2, -1, -1):
        x[:, i] = dp[:, i] - cp[:, i] * x[:, i + 1]
    return x


def _implicit_solve(rhs, v, h, grid: YGrid, params: BatesParams):
    """Solve (I - h A) u = rhs row-wise, A = mu_y(v) d/dy + 0.5 rho_bar^2 v d2/dy2.

    Boundary rows impose zero second derivative: the end values are linear
    extrapolations of the two nearest interior values.
    """
    v = np.asarray(v, dtype=float)[:, None]
    dy = grid.dy
    diff = 0.5 * params.rho_bar**2 * v / dy**2
    adv = params.mu_y(v) / (2.0 * dy)
    lo = -h * (diff - adv)
    di = 1.0 + 2.0 * h * diff
    up = -h * (diff + adv)

    m = rhs.shape[0]
    ni = grid.n_y - 2
    lower = np.broadcast_to(lo, (m, ni)).copy()
    diag = np.broadcast_to(di, (m, ni)).copy()
    upper = np.broadcast_to(up, (m, ni)).copy()
    # u_0 = 2 u_1 - u_2 folded into the first interior row, symmetric at the top
    diag[:, 0] += 2.0 * lo[:, 0]
    upper[:, 0] -= lo[:, 0]
    diag[:, -1] += 2.0 * up[:, 0]
    lower[:, -1] -= up[:, 0]

    out = np.empty_like(rhs)
    out[:, 1:-1] = solve_tridiagonal(lower, diag, upper, rhs[:, 1:-1])
    out[:, 0] = 2.0 * out[:, 1] - out[:, 2]
    out[:, -1] = 2.0 * out[:, -2] - out[:, -3]
    return out


def step_level(values, v, h, grid: YGrid, quad: JumpQuadrature, params: BatesParams):
    """One backward IMEX step for a stack of nodes (rows of ``values``)."""
    values = np.asarray(values, dtype=float)
    rhs = values + h * quad.apply(values)
    return math.exp(-params.r * h) * _implicit_solve(rhs, v, h, grid, params)


def pide_step(values_in, v, h, grid: YGrid, quad: JumpQuadrature, params: BatesParams):
    values_in = np.asarray(values_in, dtype=float)
    if values_in.shape != (grid.n_y,):
        raise ValueError(f"expected {grid.n_y} values, got shape {values_in.shape}")
    if not np.all(np.isfinite(values_in)):
        raise ValueError("pide_step received non-finite values")
    return step_level(values_in[None, :], np.array([v]), h, grid, quad, params)[0]


def blend_children(tree: VolTree, n: int, nxt: np.ndarray) -> np.ndarray:
    """Conditional expectation over the two tree children of every node at level n."""
    p = tree.p_up[n][:, None]
    return p * nxt[tree.up[n]] + (1.0 - p) * nxt[tree.down[n]]


def node_payoff(spec: OptionSpec, params: BatesParams, grid: YGrid, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)[:, None]
    return payoff(spec, np.exp(grid.points[None, :] + params.decor * v))


def price_surface(
    params: BatesParams,
    spec: OptionSpec,
    tree: VolTree,
    grid: YGrid,
    quad: JumpQuadrature,
    payoff_fn=None,
) -> PriceSurface:
    """Backward induction over the tree.

    ``payoff_fn(s)`` overrides the contract payoff (used for martingale checks);
    American exercise still compares against the override.
    """
    if not math.isclose(tree.h * tree.n_steps, spec.maturity, rel_tol=1e-12):
        raise ValueError("tree horizon does not match option maturity")
    if grid.points.size != quad.matrix.shape[0]:
        raise ValueError("jump quadrature built for a different grid")

    def terminal(v):
        if payoff_fn is None:
            return node_payoff(spec, params, grid, v)
        s = np.exp(grid.points[None, :] + params.decor * np.asarray(v)[:, None])
        return np.asarray(payoff_fn(s), dtype=float)

    N = tree.n_steps
    values = [None] * (N + 1)
    values[N] = terminal(tree.nodes[N])
    for n in range(N - 1, -1, -1):
        data = blend_children(tree, n, values[n + 1])
        w = step_level(data, tree.nodes[n], tree.h, grid, quad, params)
        if spec.american:
            w = np.maximum(w, terminal(tree.nodes[n]))
        values[n] = w
    return PriceSurface(values, grid, tree, spec, params)


def interpolate_rows(grid: YGrid, table: np.ndarray, rows, y) -> np.ndarray:
    """Linear interpolation of ``table[rows[j]]`` at ``y[j]``; flat beyond the grid."""
    y = np.asarray(y, dtype=float)
    pos = np.clip((y - grid.y_min) / grid.dy, 0.0, grid.n_y - 1)
    snapped = np.rint(pos)
    pos = np.where(np.abs(pos - snapped) < 1e-9, snapped, pos)
    i = np.minimum(pos.astype(np.int64), grid.n_y - 2)
    f = pos - i
    return table[rows, i] * (1.0 - f) + table[rows, i + 1] * f


def read_price(surface: PriceSurface, n: int, s, k) -> np.ndarray | float:
    s = np.asarray(s, dtype=float)
    k = np.broadcast_to(np.asarray(k, dtype=np.int64), s.shape)
    y = np.log(s) - surface.params.decor * surface.tree.nodes[n][k]
    out = interpolate_rows(surface.grid, surface.values[n], k.ravel(), y.ravel()).reshape(s.shape)
    return float(out) if out.ndim == 0 else out
