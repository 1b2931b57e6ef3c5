"""Command line entry point: ``batescva {init,price,cva,table}``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .bench import (
    PUBLISHED_CONFIGS,
    format_table,
    load_config,
    published_config,
    run_table,
    save_config,
    TableRow,
    emit_exposure,
    run_cell,
    with_label,
    write_rows_csv,
)
from .cva import Method, build_pricer
from .model import ConfigError, Exercise


def _csv_list(text: str, cast=str):
    return [cast(t.strip()) for t in text.split(",") if t.strip()]


def _base_config(args):
    cfg = load_config(args.config) if args.config else published_config("D")
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def cmd_init(args) -> int:
    cfg = published_config(args.label, s0=args.s0, exercise=args.exercise)
    save_config(cfg, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_price(args) -> int:
    cfg = _base_config(args)
    _, _, _, surface = build_pricer(cfg.params, cfg.option, cfg.numerics())
    print(f"{surface.origin_value():.6f}")
    if args.out:
        surface.to_csv(args.out)
    return 0


def cmd_cva(args) -> int:
    cfg = _base_config(args)
    method = Method(args.method) if args.method else cfg.methods[0]
    res = run_cell(cfg, method, workers=args.workers)
    rows = [TableRow.from_result(cfg, res)]
    print(format_table(rows))
    if args.out:
        write_rows_csv(rows, args.out)
    if args.exposure:
        emit_exposure(cfg, args.exposure, workers=args.workers)
    return 0


def cmd_table(args) -> int:
    base = _base_config(args)
    labels = _csv_list(args.labels)
    for lab in labels:
        if lab not in PUBLISHED_CONFIGS:
            raise ConfigError(f"--labels: unknown configuration {lab!r}")
    s0s = _csv_list(args.s0, float) if args.s0 is not None else [base.params.s0]
    exercises = [Exercise(e) for e in _csv_list(args.exercise)] if args.exercise else [base.option.exercise]
    methods = (Method(args.method),) if args.method else base.methods

    configs = []
    for ex in exercises:
        for s0 in s0s:
            for lab in labels:
                cfg = with_label(base, lab)
                configs.append(replace(
                    cfg,
                    params=replace(cfg.params, s0=s0),
                    option=replace(cfg.option, exercise=ex),
                    methods=methods,
                ))
    rows = run_table(configs, workers=args.workers)
    print(format_table(rows))
    if args.out:
        write_rows_csv(rows, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="batescva", description="CVA under the Bates model with hybrid tree methods")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, method=True):
        p.add_argument("--config", help="flat JSON run configuration (default: base case, config D)")
        p.add_argument("--seed", type=int, help="Monte Carlo seed (overrides the config)")
        p.add_argument("--out", help="CSV output path")
        if method:
            p.add_argument("--method", choices=[m.value for m in Method])
            p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("init", help="write a configuration file for the base case")
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="D", choices=sorted(PUBLISHED_CONFIGS))
    p.add_argument("--s0", type=float, default=100.0)
    p.add_argument("--exercise", default="european", choices=[e.value for e in Exercise])
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("price", help="risk-free option price")
    common(p, method=False)
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("cva", help="CVA for one scenario")
    common(p)
    p.add_argument("--exposure", help="write the expected-exposure CSV (t, ee, se)")
    p.set_defaults(func=cmd_cva)

    p = sub.add_parser("table", help="CVA table over configurations and spots")
    common(p)
    p.add_argument("--labels", default="A,B,C,D")
    p.add_argument("--s0", help="comma-separated initial spots (default: from config)")
    p.add_argument("--exercise", help="comma-separated exercise styles (default: from config)")
    p.set_defaults(func=cmd_table)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"batescva: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
