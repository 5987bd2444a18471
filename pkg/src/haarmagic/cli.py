"""Command-line front door.

Subcommands: sample (distribution campaigns), convergence (brick-wall
depth sweep vs Haar), scaling (variance/covariance exponents), verify
(invariant suite). Flags override config-file values. Exit codes:
0 success, 2 configuration error, 3 capability error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CapabilityError, ConfigurationError, DataError, RunError
from .runner import (ExperimentConfig, run_brickwall_sweep, run_distribution,
                     run_scaling)
from .verify import run_all_checks


def parse_int_list(text: str) -> list[int]:
    """Accepts '6', '2,5,7' and inclusive ranges '4..10'."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ConfigurationError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ConfigurationError(f"could not parse integer list from {text!r}")
    return out


_CONFIG_KEYS = {"mode", "n", "depth", "samples", "seed", "cut", "out",
                "workers", "experiment_id"}


def load_config_file(path: str) -> dict[str, str]:
    """Flat `key = value` file mirroring the flag names."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigurationError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def _build_config(args, default_mode: str, force_mode: str | None = None) -> ExperimentConfig:
    file_vals = load_config_file(args.config) if args.config else {}

    def pick(flag_val, key):
        return flag_val if flag_val is not None else file_vals.get(key)

    n = pick(args.n, "n")
    if n is None:
        raise ConfigurationError("no qubit counts given (use --n or a config file)")
    depth = pick(getattr(args, "depth", None), "depth")
    mode = force_mode or pick(getattr(args, "mode", None), "mode") or default_mode
    samples = pick(args.samples, "samples")
    cut = pick(args.cut, "cut")
    out = pick(args.out, "out")
    return ExperimentConfig(
        mode=mode,
        n_qubits_list=parse_int_list(n),
        depth_list=parse_int_list(depth) if depth is not None else [],
        samples_per_point=int(samples) if samples is not None else None,
        seed=int(pick(args.seed, "seed") or 0),
        cut=int(cut) if cut is not None else None,
        out_dir=out,
        workers=int(pick(args.workers, "workers") or 1),
        experiment_id=file_vals.get("experiment_id", ""),
    )


def _print_point_lines(summary: dict) -> None:
    for p in summary["points"]:
        r = p["pearson_r"]
        print(f"N={p['n_qubits']} depth={p['depth']} count={p['count']} "
              f"mean_m2={p['m2']['mean']:.4f} mean_s={p['s']['mean']:.4f} "
              f"var_m2={p['m2']['var']:.4e} var_s={p['s']['var']:.4e} "
              f"r={'n/a' if r is None else format(r, '.4f')}")


def cmd_sample(args) -> int:
    result = run_distribution(_build_config(args, "haar"))
    _print_point_lines(result.summary)
    return 0


def cmd_convergence(args) -> int:
    config = _build_config(args, "brickwall", force_mode="brickwall")
    result = run_brickwall_sweep(config)
    print("depth  ks_distance_to_haar")
    for row in result.summary["ks_table"]:
        print(f"{row['depth']:>5}  {row['ks']:.4f}   (N={row['n_qubits']})")
    return 0


def cmd_scaling(args) -> int:
    config = _build_config(args, "haar")
    if len(config.n_qubits_list) < 4:
        print("warning: fewer than 4 qubit counts, scaling fit will be unstable",
              file=sys.stderr)
    result = run_scaling(config)
    _print_point_lines(result.summary)
    fits = result.summary["fits"]
    if fits:
        for key in ("var_m2", "var_s", "abs_cov"):
            f = fits[key]
            print(f"log2 {key} slope = {f['slope']:.3f} "
                  f"(intercept {f['intercept']:.3f}, max residual {f['max_residual']:.3f})")
        print(f"geometric-mean slope = {fits['geometric_mean_slope']:.3f}")
    else:
        print("too few points for scaling fits; see per-point lines above")
    return 0


def cmd_verify(args) -> int:
    results = run_all_checks(trials=args.trials, seed=args.seed if args.seed is not None else 20240,
                             qr_phase_correction=args.inject_fault != "qr-phase")
    failures = 0
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
        failures += not r.passed
    print(f"{len(results) - failures}/{len(results)} invariant checks passed")
    return 0 if failures == 0 else 1


def _add_campaign_flags(p: argparse.ArgumentParser, with_depth: bool, with_mode: bool) -> None:
    p.add_argument("--config", help="flat key = value config file; flags win")
    p.add_argument("--n", help="qubit counts: '6', '2,5,7' or '4..10'")
    if with_depth:
        p.add_argument("--depth", help="circuit depths, same syntax as --n")
    if with_mode:
        p.add_argument("--mode", choices=("haar", "brickwall"), help="state ensemble")
    p.add_argument("--samples", type=int, help="samples per point (default 2000, 500 for N>10)")
    p.add_argument("--seed", type=int, help="campaign seed (default 0)")
    p.add_argument("--cut", type=int, help="entanglement cut n_a (default floor(N/2))")
    p.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    p.add_argument("--out", help="output directory for records.csv and summary.json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarmagic",
        description="Magic and entanglement statistics of random qubit states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample (M2, S) distributions across N")
    _add_campaign_flags(p, with_depth=True, with_mode=True)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("convergence", help="brick-wall depth sweep, KS distance to Haar")
    _add_campaign_flags(p, with_depth=True, with_mode=False)
    p.set_defaults(fn=cmd_convergence)

    p = sub.add_parser("scaling", help="variance/covariance decay exponents over N")
    _add_campaign_flags(p, with_depth=False, with_mode=False)
    p.set_defaults(fn=cmd_scaling)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--trials", type=int, default=100, help="trials per randomized check")
    p.add_argument("--seed", type=int, help="suite seed (default 20240)")
    p.add_argument("--inject-fault", choices=("none", "qr-phase"), default="none",
                   help="deliberately break a known-correctness trap (test harness)")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigurationError, DataError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except CapabilityError as e:
        print(f"capability error: {e}", file=sys.stderr)
        return 3
    except (RunError, OSError) as e:
        print(f"run error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
