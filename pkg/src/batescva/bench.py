"""Run configurations, flat config files and the benchmark table harness."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .cva import CvaResult, Method, exposure_profile, run_method
from .model import (
    BatesParams,
    ConfigError,
    DefaultModel,
    Exercise,
    NumericsConfig,
    OptionKind,
    OptionSpec,
    published_base_case,
)

# (time steps, y-grid intervals, Monte Carlo paths)
PUBLISHED_CONFIGS = {
    "A": (50, 100, 1500),
    "B": (75, 150, 2000),
    "C": (100, 250, 3300),
    "D": (125, 350, 6000),
}

DEFAULT_SEED = 1

# config-file key -> BatesParams field
_PARAM_KEYS = {
    "s0": "s0", "v0": "v0", "r": "r", "eta": "eta", "kappa": "kappa",
    "theta": "theta", "sigma": "sigma", "rho": "rho", "lambda": "lam",
    "alpha": "alpha", "beta2": "beta2",
}
_OPTION_KEYS = ("kind", "exercise", "strike", "maturity")
_DEFAULT_KEYS = ("delta", "recovery")
_RUN_KEYS = ("label", "n_time", "n_y", "n_paths", "seed", "y_halfwidth_sds", "jump_trunc_sds", "methods")
_OPTIONAL = {"jump_law", "y_halfwidth_sds", "jump_trunc_sds", "seed", "methods"}


@dataclass(frozen=True)
class RunConfig:
    """One pricing scenario plus numerical settings.

    ``n_y`` counts y-grid *intervals* (as in the published configurations);
    the pricer uses ``n_y + 1`` points so the initial state sits on a node.
    """

    label: str
    n_time: int
    n_y: int
    n_paths: int
    params: BatesParams
    option: OptionSpec
    default: DefaultModel
    methods: tuple = (Method.C_HTFD, Method.HTFD_HTMC)
    seed: int = DEFAULT_SEED
    y_halfwidth_sds: float = 6.0
    jump_trunc_sds: float = 6.0

    def __post_init__(self):
        if self.n_y < 2 or self.n_y % 2:
            raise ConfigError(f"config key 'n_y': need an even interval count >= 2, got {self.n_y}")
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        if self.label in PUBLISHED_CONFIGS and (self.n_time, self.n_y, self.n_paths) != PUBLISHED_CONFIGS[self.label]:
            raise ConfigError(
                f"config key 'label': {self.label!r} is reserved for {PUBLISHED_CONFIGS[self.label]}"
            )

    def numerics(self) -> NumericsConfig:
        return NumericsConfig(
            n_time=self.n_time,
            n_y=self.n_y + 1,
            n_paths=self.n_paths,
            y_halfwidth_sds=self.y_halfwidth_sds,
            jump_trunc_sds=self.jump_trunc_sds,
            seed=self.seed,
        )

    def to_flat(self) -> dict:
        out = {"label": self.label, "n_time": self.n_time, "n_y": self.n_y, "n_paths": self.n_paths,
               "seed": self.seed, "y_halfwidth_sds": self.y_halfwidth_sds,
               "jump_trunc_sds": self.jump_trunc_sds, "methods": [m.value for m in self.methods]}
        for key, attr in _PARAM_KEYS.items():
            out[key] = getattr(self.params, attr)
        out["jump_law"] = self.params.jump_law.value
        out["kind"] = self.option.kind.value
        out["exercise"] = self.option.exercise.value
        out["strike"] = self.option.strike
        out["maturity"] = self.option.maturity
        out["delta"] = self.default.delta
        out["recovery"] = self.default.recovery
        return out

    @classmethod
    def from_flat(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a flat key/value object")
        known = set(_PARAM_KEYS) | set(_OPTION_KEYS) | set(_DEFAULT_KEYS) | set(_RUN_KEYS) | {"jump_law"}
        for key in data:
            if key not in known:
                raise ConfigError(f"config key {key!r}: unknown key")
        for key in known - _OPTIONAL:
            if key not in data:
                raise ConfigError(f"config key {key!r}: missing")

        def num(key, typ=float):
            val = data[key]
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ConfigError(f"config key {key!r}: expected a number, got {val!r}")
            if typ is int and int(val) != val:
                raise ConfigError(f"config key {key!r}: expected an integer, got {val!r}")
            return typ(val)

        def build(what, fn):
            try:
                return fn()
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(f"config key {what!r}: {exc}") from None

        params = build("jump_law", lambda: BatesParams(
            **{attr: num(key) for key, attr in _PARAM_KEYS.items()},
            jump_law=data.get("jump_law", "mean-corrected"),
        ))
        option = OptionSpec(
            kind=build("kind", lambda: OptionKind(data["kind"])),
            exercise=build("exercise", lambda: Exercise(data["exercise"])),
            strike=num("strike"),
            maturity=num("maturity"),
        )
        default = DefaultModel(delta=num("delta"), recovery=num("recovery"))
        methods = data.get("methods", [m.value for m in Method])
        if not isinstance(methods, list):
            raise ConfigError(f"config key 'methods': expected a list, got {methods!r}")
        methods = build("methods", lambda: tuple(Method(m) for m in methods))
        kwargs = {}
        for key in ("y_halfwidth_sds", "jump_trunc_sds"):
            if key in data:
                kwargs[key] = num(key)
        if "seed" in data:
            kwargs["seed"] = num("seed", int)
        cfg = cls(
            label=str(data["label"]),
            n_time=num("n_time", int),
            n_y=num("n_y", int),
            n_paths=num("n_paths", int),
            params=params,
            option=option,
            default=default,
            methods=methods,
            **kwargs,
        )
        cfg.numerics()  # surface NumericsConfig errors at load time
        return cfg


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return RunConfig.from_flat(data)


def save_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(json.dumps(cfg.to_flat(), indent=2) + "\n")


def published_config(label: str, s0: float = 100.0, exercise: Exercise | str = Exercise.EUROPEAN,
                 methods=(Method.C_HTFD, Method.HTFD_HTMC), seed: int = DEFAULT_SEED) -> RunConfig:
    params, specs, default = published_base_case()
    try:
        n_time, n_y, n_paths = PUBLISHED_CONFIGS[label]
    except KeyError:
        raise ConfigError(f"config key 'label': unknown configuration {label!r}") from None
    spec = specs[0] if Exercise(exercise) is Exercise.EUROPEAN else specs[1]
    return RunConfig(label, n_time, n_y, n_paths, replace(params[0], s0=float(s0)), spec, default,
                     tuple(methods), seed)


def with_label(cfg: RunConfig, label: str) -> RunConfig:
    """Same scenario with the grid sizes of a published configuration."""
    n_time, n_y, n_paths = PUBLISHED_CONFIGS[label]
    return replace(cfg, label=label, n_time=n_time, n_y=n_y, n_paths=n_paths)


@dataclass
class TableRow:
    method: str
    config: str
    s0: float
    exercise: str
    cva: float
    ci: float | None
    runtime: float

    @classmethod
    def from_result(cls, cfg: RunConfig, res: CvaResult) -> "TableRow":
        return cls(res.method.value, cfg.label, cfg.params.s0, cfg.option.exercise.value,
                   res.cva, res.ci_halfwidth, res.runtime)


def run_cell(cfg: RunConfig, method: Method, workers: int = 1) -> CvaResult:
    return run_method(method, cfg.params, cfg.option, cfg.default, cfg.numerics(), cfg.label, workers)


def run_table(configs, workers: int = 1) -> list[TableRow]:
    """One row per (scenario, method); row order follows the input order."""
    cells = [(cfg, m) for cfg in configs for m in cfg.methods]
    if not cells:
        return []
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda c: run_cell(*c), cells))
    else:
        results = [run_cell(cfg, m) for cfg, m in cells]
    return [TableRow.from_result(cfg, res) for (cfg, _), res in zip(cells, results)]


CSV_HEADER = ["method", "config", "S0", "exercise", "cva", "ci", "runtime"]


def write_rows_csv(rows, path, digits: int = 6) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.method, r.config, f"{r.s0:g}", r.exercise, f"{r.cva:.{digits}f}",
                        "" if r.ci is None else f"{r.ci:.{digits}f}", f"{r.runtime:.3f}"])


def format_table(rows, digits: int = 6) -> str:
    cells = [CSV_HEADER]
    for r in rows:
        cells.append([r.method, r.config, f"{r.s0:g}", r.exercise, f"{r.cva:.{digits}f}",
                      "" if r.ci is None else f"±{r.ci:.{digits}f}", f"{r.runtime:.2f}s"])
    widths = [max(len(row[i]) for row in cells) for i in range(len(CSV_HEADER))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)


def emit_exposure(cfg: RunConfig, path, workers: int = 1):
    """Write the HTMC expected-exposure profile (t, ee, se) for one scenario."""
    profile = exposure_profile(cfg.params, cfg.option, cfg.numerics(), workers=workers)
    profile.to_csv(path)
    return profile
