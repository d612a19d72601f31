"""Command-line frontend.

Subcommands: simulate-cdf, sweep-bits, hd-baseline, asymptotics,
validate-oracle (alias: validate), print-config.  Exit codes: 0 success,
1 validation failure, 2 usage or configuration error.

Configuration precedence: built-in defaults < --config file (JSON) <
FDMIMO_* environment variables < --set key=value flags.  All randomness
derives from --seed; --threads caps Monte Carlo workers without affecting
results.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import __version__, asymptotics, montecarlo, validate
from .kernels import BACKEND
from .linkbudget import assemble_link_budget
from .geometry import build_lattice, drop_users
from .params import CONFIG_PARSERS, InvalidConfigError, load_params


def _parse_overrides(pairs):
    overrides = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise InvalidConfigError(pair, "overrides take the form key=value")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def _load(args):
    overrides = _parse_overrides(args.set)
    if getattr(args, "si_power", None) is not None:
        overrides["si_power_w"] = args.si_power
    return load_params(args.config, overrides=overrides)


def _write_manifest(out_dir, command, args, params, outputs, seed, workers):
    manifest = {
        "command": command,
        "argv": list(args),
        "params": params.to_dict(),
        "master_seed": seed,
        "workers": workers,
        "kernel_backend": BACKEND,
        "version": __version__,
        "timestamp": datetime.datetime.now().isoformat(timespec="seconds"),
        "outputs": outputs,
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _ensure_out(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_simulate_cdf(args, argv) -> int:
    params = _load(args)
    out = _ensure_out(args)
    report = montecarlo.run_cdf_experiment(params, args.drops, args.seed, args.threads)
    cdf_path = os.path.join(out, "cdf.csv")
    montecarlo.write_cdf_csv(report, cdf_path)
    _write_manifest(out, "simulate-cdf", argv, params,
                    {"cdf": cdf_path, "se_gross": report.se_gross,
                     "se_effective": report.se_effective},
                    args.seed, args.threads)
    print(f"wrote {cdf_path} ({args.drops} drops); "
          f"SE gross {report.se_gross:.4f}, effective {report.se_effective:.4f} bits/s/Hz")
    return 0


def _parse_bits_list(text):
    seen = []
    for token in text.split(","):
        token = token.strip()
        bits = token if token == "full" else int(token)
        if bits in seen:
            print(f"warning: duplicate bits entry {token} ignored", file=sys.stderr)
            continue
        seen.append(bits)
    if not seen:
        raise InvalidConfigError("bits", "empty bits list")
    return seen


def cmd_sweep_bits(args, argv) -> int:
    params = _load(args)
    out = _ensure_out(args)
    bits_list = _parse_bits_list(args.bits)
    results = montecarlo.sweep_bits(params, bits_list, args.drops, args.seed, args.threads)
    sweep_path = os.path.join(out, "sweep.csv")
    montecarlo.write_sweep_csv(results, sweep_path)
    _write_manifest(out, "sweep-bits", argv, params, {"sweep": sweep_path},
                    args.seed, args.threads)
    print(f"wrote {sweep_path} ({len(results)} resolutions x {args.drops} drops)")
    return 0


def cmd_hd_baseline(args, argv) -> int:
    params = _load(args)
    out = _ensure_out(args)
    report = montecarlo.run_hd_baseline(params, args.drops, args.seed, args.threads,
                                        prelog=args.prelog)
    cdf_path = os.path.join(out, "hd_cdf.csv")
    montecarlo.write_cdf_csv(report, cdf_path)
    _write_manifest(out, "hd-baseline", argv, params,
                    {"cdf": cdf_path, "se_gross": report.se_gross,
                     "se_effective": report.se_effective, "prelog": args.prelog},
                    args.seed, args.threads)
    print(f"wrote {cdf_path}; HD SE gross {report.se_gross:.4f}, "
          f"effective {report.se_effective:.4f} bits/s/Hz (prelog {args.prelog})")
    return 0


def cmd_asymptotics(args, argv) -> int:
    params = _load(args)
    out = _ensure_out(args)
    lattice = build_lattice(params.inter_site_distance_m, params.wraparound,
                            params.tiers, params.reuse_factor)
    drop = drop_users(lattice, params, np.random.SeedSequence((args.seed, 0)))
    lb = assemble_link_budget(drop, params)
    reports = asymptotics.probe_all(lb, 0)
    rows = []
    header = f"{'limit':<16} {'limit_value':>14} {'last_probe':>14} {'rel_gap':>10} {'asserted':>9} {'converged':>10}"
    print(header)
    for r in reports:
        last = r.probe_values[-1][1]
        print(f"{r.limit_id:<16} {r.limit_value:>14.6g} {last:>14.6g} "
              f"{r.relative_gap:>10.3g} {str(r.assertable):>9} {str(r.converged):>10}")
        rows.append([r.limit_id, repr(r.limit_value), repr(float(last)),
                     repr(r.relative_gap), r.assertable, r.converged])
    csv_path = os.path.join(out, "asymptotics.csv")
    with open(csv_path, "w") as fh:
        fh.write("limit,limit_value,last_probe,rel_gap,asserted,converged\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")
    _write_manifest(out, "asymptotics", argv, params, {"asymptotics": csv_path},
                    args.seed, 1)
    return 0


def cmd_validate(args, argv) -> int:
    out = _ensure_out(args)
    checks, term_rows = validate.run_all(quick=args.quick)
    print(f"{'term':<16} {'closed_form':>13} {'empirical':>13} {'rel_err':>9} {'status':>7}")
    for name, pred, emp, err, ok in term_rows:
        print(f"{name:<16} {pred:>13.5g} {emp:>13.5g} {err:>8.2%} "
              f"{'pass' if ok else 'FAIL':>7}")
    print()
    summary = []
    failed = False
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        summary.append({"check": name, "passed": bool(ok), "detail": detail})
        failed |= not ok
    path = os.path.join(out, "validate.json")
    with open(path, "w") as fh:
        json.dump(
            {
                "quick": args.quick,
                "checks": summary,
                "term_table": [
                    {"term": name, "closed_form": pred, "empirical": emp,
                     "rel_err": err, "passed": bool(ok)}
                    for name, pred, emp, err, ok in term_rows
                ],
            },
            fh, indent=2,
        )
        fh.write("\n")
    print(f"summary written to {path}")
    return 1 if failed else 0


def cmd_print_config(args, argv) -> int:
    params = _load(args)
    print(json.dumps(params.to_dict(), indent=2, sort_keys=True))
    return 0


def _add_common(p, drops_default=10000):
    p.add_argument("--config", help="JSON config file (one key per parameter)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help=f"override a parameter; keys: {', '.join(sorted(CONFIG_PARSERS))}")
    p.add_argument("--seed", type=int, default=1, help="master seed for all randomness")
    p.add_argument("--threads", type=int, default=1, help="Monte Carlo worker cap")
    p.add_argument("--out", default="out", help="output directory")
    if drops_default is not None:
        p.add_argument("--drops", type=int, default=drops_default,
                       help="number of Monte Carlo drops")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fdmimo",
        description="Reverse-link simulator for full-duplex massive-MIMO cellular networks "
                    "with low-resolution converters",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate-cdf", help="SQINR CDF over Monte Carlo drops")
    _add_common(p)
    p.add_argument("--si-power", type=float, help="override SI power in watts")
    p.set_defaults(handler=cmd_simulate_cdf)

    p = sub.add_parser("sweep-bits", help="spectral efficiency vs converter resolution")
    _add_common(p)
    p.add_argument("--bits", default="1,2,3,4,5,full",
                   help="comma list of resolutions, e.g. 1,2,3,full")
    p.add_argument("--si-power", type=float, help="override SI power in watts")
    p.set_defaults(handler=cmd_sweep_bits)

    p = sub.add_parser("hd-baseline", help="half-duplex baseline (no SI, duplexing prelog)")
    _add_common(p)
    p.add_argument("--prelog", type=float, default=0.5,
                   help="duplexing prelog applied to the HD spectral efficiency")
    p.set_defaults(handler=cmd_hd_baseline)

    p = sub.add_parser("asymptotics", help="limit probes on a drop-derived budget")
    _add_common(p, drops_default=None)
    p.set_defaults(handler=cmd_asymptotics)

    for name in ("validate-oracle", "validate"):
        p = sub.add_parser(name, help="run the self-validation suites")
        p.add_argument("--quick", action="store_true",
                       help="reduced sample counts with looser tolerances")
        p.add_argument("--out", default="out", help="output directory")
        p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("print-config", help="print the effective configuration")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(handler=cmd_print_config)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, argv)
    except InvalidConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
