"""Batch entry point: subcommand dispatch, config handling, CSV emission.

Subcommands: det-demo, delay-demo, gauss-verify, gauss-mc, sweep.
Values may come from a flat TOML config file (--config); command-line flags
override file values.  The fully resolved config is echoed before any
computation so runs can be reproduced from the output alone.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import analysis, detchannel, gauss

OUTDIR_ENV = "QALIGN_OUTDIR"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    users: int = 3
    base: int = 9
    blocks: int = 3
    blocks_list: list[int] = field(default_factory=lambda: [2, 4, 8])
    trials: int = 1000
    tuples: int = 1000
    horizon: int = 100
    seed: int = 0
    threshold: float = 1e-2
    mode: str = "basic"
    alpha: list[list[int]] | None = None
    exponent: list[list[int]] | None = None
    output: str | None = None

    def echo(self, out=None):
        out = out or sys.stdout
        print(f"# config subcommand={self.subcommand}", file=out)
        for key in (
            "users", "base", "blocks", "blocks_list", "trials", "tuples",
            "horizon", "seed", "threshold", "mode", "alpha", "exponent",
            "output",
        ):
            print(f"# config {key}={getattr(self, key)}", file=out)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat TOML config file; flags override it")
    p.add_argument("--users", type=int, help="number of users K")
    p.add_argument("--base", type=int, help="digit base Q")
    p.add_argument("--blocks", type=int, help="information block length N")
    p.add_argument("--blocks-list", help="comma-separated N values (sweep)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--tuples", type=int, help="random message tuples (gauss-verify)")
    p.add_argument("--horizon", type=int, help="slots to simulate (delay-demo)")
    p.add_argument("--seed", type=int, help="master RNG seed")
    p.add_argument("--threshold", type=float, help="genie reliability threshold")
    p.add_argument("--mode", choices=["basic", "generalized"], help="channel mode")
    p.add_argument("--alpha", help="K x K integer matrix as JSON (generalized mode)")
    p.add_argument("--exponent", help="K x K integer matrix as JSON (generalized mode)")
    p.add_argument("--output", help="CSV output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qalign")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("det-demo", "delay-demo", "gauss-verify", "gauss-mc", "sweep"):
        _add_common(sub.add_parser(name))
    return parser


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(subcommand=ns.subcommand)
    if ns.config:
        try:
            with open(ns.config, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config file: {exc}") from exc
        for key, value in data.items():
            key = key.replace("-", "_")
            if not hasattr(cfg, key) or key == "subcommand":
                raise ConfigError(f"unknown config key: {key}")
            setattr(cfg, key, value)
    for key in (
        "users", "base", "blocks", "trials", "tuples", "horizon", "seed",
        "threshold", "mode", "output",
    ):
        value = getattr(ns, key)
        if value is not None:
            setattr(cfg, key, value)
    if ns.blocks_list is not None:
        cfg.blocks_list = [int(tok) for tok in ns.blocks_list.split(",") if tok]
    for key in ("alpha", "exponent"):
        value = getattr(ns, key)
        if value is not None:
            try:
                setattr(cfg, key, json.loads(value))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"--{key} must be a JSON matrix: {exc}") from exc
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.users < 1:
        raise ConfigError(f"users must be >= 1, got {cfg.users}")
    if cfg.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {cfg.trials}")
    if cfg.subcommand in ("det-demo",):
        if cfg.blocks < 1 or cfg.blocks % 2 == 0:
            raise ConfigError(f"blocks (N) must be odd for det-demo, got {cfg.blocks}")
    if cfg.subcommand in ("gauss-verify", "gauss-mc", "sweep"):
        try:
            gauss.alphabet_bound(_channel_spec(cfg))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if not 0 <= cfg.threshold < 1:
        raise ConfigError(f"threshold must be in [0, 1), got {cfg.threshold}")


def _channel_spec(cfg: RunConfig) -> gauss.ChannelSpec:
    if cfg.mode == "basic":
        return gauss.ChannelSpec.basic(cfg.users, cfg.base)
    if cfg.alpha is None or cfg.exponent is None:
        raise ConfigError("generalized mode requires --alpha and --exponent")
    try:
        return gauss.ChannelSpec.generalized(cfg.users, cfg.base, cfg.alpha, cfg.exponent)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _output_path(cfg: RunConfig) -> str:
    if cfg.output:
        return cfg.output
    outdir = os.environ.get(OUTDIR_ENV, ".")
    return os.path.join(outdir, f"{cfg.subcommand}.csv")


def _write_csv(path: str, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x: float) -> str:
    return format(x, ".10g")


def run_det_demo(cfg: RunConfig) -> int:
    N = cfg.blocks
    spec = detchannel.DetSpec.fig1(cfg.users, N + 1)
    L = (N + 1) // 2
    rng = random.Random(gauss.subseed(cfg.seed, "det-demo"))
    bit_errors = [0] * cfg.users
    trace = None
    for t in range(cfg.trials):
        infos = [
            tuple(rng.randrange(2) for _ in range(L)) for _ in range(cfg.users)
        ]
        symbols = [detchannel.det_encode(info) for info in infos]
        outputs = detchannel.det_output(spec, symbols)
        decoded = [
            detchannel.det_decode(y, spec.shifts[k][k], L)
            for k, y in enumerate(outputs)
        ]
        for k in range(cfg.users):
            bit_errors[k] += sum(a != b for a, b in zip(decoded[k], infos[k]))
        if trace is None:
            trace = (infos, symbols, outputs, decoded)
    infos, symbols, outputs, decoded = trace
    print(f"deterministic channel: K={cfg.users}, N={N}, trials={cfg.trials}")
    for k in range(cfg.users):
        y = outputs[k]
        bits = " ".join(str(y.bit_at(i)) for i in range(y.top, y.low - 1, -1))
        print(f"  rx {k}: Y = {bits} (levels {y.top}..{y.low})")
        print(f"         info {infos[k]} -> decoded {decoded[k]}")
    rows = []
    for k in range(cfg.users):
        correct = 1.0 - bit_errors[k] / (cfg.trials * L)
        rate = L * correct
        rows.append([k, cfg.trials, bit_errors[k], _fmt(rate)])
        print(f"  user {k}: {bit_errors[k]} bit errors, rate {_fmt(rate)} bits/use")
    print(f"  interference-free reference: {N + 1} bits/use")
    _write_csv(
        _output_path(cfg), ["user", "trials", "bit_errors", "rate_bits_per_use"], rows
    )
    return 1 if any(bit_errors) else 0


def run_delay_demo(cfg: RunConfig) -> int:
    K = cfg.users
    delays = [[0 if j == k else 1 for j in range(K)] for k in range(K)]
    payloads = [
        [f"u{j}s{m}" for m in range(cfg.horizon // 2 + 1)] for j in range(K)
    ]
    report = detchannel.delay_sim(K, delays, cfg.horizon, payloads)
    print(f"delay model: K={K}, horizon={cfg.horizon}, even/odd delays")
    rows = []
    for k in range(K):
        frac = report.desired_alone_fraction[k]
        print(f"  rx {k}: desired-alone fraction {_fmt(frac)}")
        rows.append([k, cfg.horizon, _fmt(frac)])
    _write_csv(
        _output_path(cfg), ["receiver", "slots", "desired_alone_fraction"], rows
    )
    return 0


def run_gauss_verify(cfg: RunConfig) -> int:
    spec = _channel_spec(cfg)
    N = cfg.blocks
    M = gauss.alphabet_bound(spec)
    exhaustive = M ** (cfg.users * N) <= cfg.tuples
    mismatches, total = gauss.verify_noise_free(
        spec, N, tuples=None if exhaustive else cfg.tuples, seed=cfg.seed
    )
    kind = "exhaustive" if exhaustive else "random"
    print(
        f"gauss-verify ({kind}): {mismatches} mismatches / {total} message tuples"
    )
    _write_csv(
        _output_path(cfg),
        ["users", "base", "blocks", "tuples", "mismatches"],
        [[cfg.users, cfg.base, N, total, mismatches]],
    )
    return 1 if mismatches else 0


def run_gauss_mc(cfg: RunConfig) -> int:
    spec = _channel_spec(cfg)
    stats = gauss.run_trials(spec, cfg.blocks, cfg.trials, cfg.seed)
    rows = []
    print(f"gauss-mc: K={cfg.users}, Q={cfg.base}, N={cfg.blocks}, trials={cfg.trials}")
    for p in stats.positions:
        errors = stats.error_count(p)
        samples = stats.samples()
        rate = errors / samples
        lo, hi = analysis.wilson_interval(errors, samples)
        rows.append([p, samples, errors, _fmt(rate), _fmt(lo), _fmt(hi)])
        print(f"  position {p}: error rate {_fmt(rate)} [{_fmt(lo)}, {_fmt(hi)}]")
    _write_csv(
        _output_path(cfg),
        ["position", "trials", "errors", "error_rate", "wilson_low", "wilson_high"],
        rows,
    )
    return 0


def run_sweep(cfg: RunConfig) -> int:
    spec = _channel_spec(cfg)
    rows = analysis.sweep(
        spec, cfg.blocks_list, cfg.trials, cfg.seed, cfg.threshold
    )
    print(f"sweep: K={cfg.users}, Q={cfg.base}, N in {cfg.blocks_list}")
    csv_rows = []
    for r in rows:
        print(
            f"  N={r.N}: logq_P={_fmt(r.logq_power)} sum_rate={_fmt(r.sum_rate_qits)}"
            f" dof_hat={_fmt(r.dof_hat)} dof_theory={_fmt(r.dof_theory)}"
        )
        csv_rows.append(
            [
                r.N, r.Q, r.K, _fmt(r.logq_power), _fmt(r.sum_rate_qits),
                _fmt(r.dof_hat), _fmt(r.dof_theory), _fmt(r.threshold),
                r.trials, r.seed,
            ]
        )
    _write_csv(
        _output_path(cfg),
        [
            "N", "Q", "K", "logq_power", "sum_rate_qits", "dof_hat",
            "dof_theory", "threshold", "trials", "seed",
        ],
        csv_rows,
    )
    return 0


_RUNNERS = {
    "det-demo": run_det_demo,
    "delay-demo": run_delay_demo,
    "gauss-verify": run_gauss_verify,
    "gauss-mc": run_gauss_mc,
    "sweep": run_sweep,
}


def dispatch(cfg: RunConfig) -> int:
    cfg.echo()
    try:
        return _RUNNERS[cfg.subcommand](cfg)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    return dispatch(cfg)


def console_main():
    sys.exit(main())
