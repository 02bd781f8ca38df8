"""Command-line front end.

Exit codes: 0 success, 1 bad invocation or configuration, 2 computation
failure. A JSON manifest supplied with --config provides parameter defaults;
explicit flags always win. Experiments require an explicit --seed: there is
no wall-clock seeding anywhere, so every published number is reproducible
from its manifest.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import ComputationError, UsageError
from .exppoly import (DEFAULT_N_MAX, canonical_form, canonical_to_json,
                      distribution_diagram, is_weyl, k_multiset,
                      symbolic_density)
from .experiments import (cdf_table_to_csv, report_to_csv, report_to_json,
                          run_kmax_bound_check, run_kmin_experiment,
                          run_pair_moments, run_vgrowth_experiment,
                          run_weyl_experiment)
from .geometry import diameter, new_configuration, size_V
from .rootfind import (build_counting_report, counting_report_to_json,
                       extract_k_numeric, find_resonances,
                       resonance_set_to_csv, resonance_set_to_json)
from .sampler import (MIXED_BINOMIAL, UNIFORM_BALL, SamplerConfig,
                      sample_mixed_binomial, sample_uniform_ball,
                      sampleset_to_json)

WORKERS_ENV = "POINTRES_WORKERS"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the exit-code contract reserves 2 for
    # computation failures, so parse errors are rethrown as usage errors.
    def error(self, message):
        raise UsageError(message)


def _parse_alpha(s: str) -> complex:
    parts = s.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"alpha must be 're' or 're,im', got {s!r}")


def _parse_grid(s: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in s.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _merge_config(args: argparse.Namespace, defaults: dict) -> argparse.Namespace:
    """File value fills any parameter the command line left at None."""
    manifest = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                manifest = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}")
        if not isinstance(manifest, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(manifest) - set(defaults)
        if unknown:
            raise UsageError(f"config file keys not understood: {sorted(unknown)}")
    for key, fallback in defaults.items():
        if getattr(args, key, None) is None:
            value = manifest.get(key, fallback)
            try:
                if key == "alpha" and isinstance(value, (list, tuple)):
                    value = complex(*value)
                if key == "alpha" and isinstance(value, str):
                    value = _parse_alpha(value)
            except (TypeError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"bad alpha in config file: {exc}")
            setattr(args, key, value)
    return args


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required "
                             "(flag or config file)")


def _load_points(args) -> np.ndarray:
    sources = [s for s in (args.points, args.points_file) if s is not None]
    if len(sources) != 1:
        raise UsageError("exactly one of --points / --points-file is required")
    if args.points is not None:
        data = args.points
        if isinstance(data, str):  # raw flag value; manifests arrive parsed
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise UsageError(f"--points is not valid JSON: {exc}")
    else:
        try:
            with open(args.points_file) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read points file: {exc}")
        if isinstance(data, dict):
            if "alpha" in data and args.alpha is None:
                args.alpha = complex(*data["alpha"])
            data = data["points"]
    try:
        return np.asarray(data, dtype=float).reshape(-1, 3)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"points must be an (N, 3) array: {exc}")


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _fig_dir(args) -> str | None:
    if args.figures is None:
        return None
    os.makedirs(args.figures, exist_ok=True)
    return args.figures


# commands -----------------------------------------------------------------------

def _cmd_resonances(args) -> int:
    _merge_config(args, {"points": None, "points_file": None, "alpha": None,
                         "radius": None, "output": None, "format": "csv",
                         "counting": False, "radii_steps": 200, "h_max": 3.0,
                         "h_step": 0.01, "figures": None})
    _require(args, "radius")
    if args.radius <= 0:
        raise UsageError("--radius must be positive")
    if args.counting and args.output is None:
        raise UsageError("--counting needs --output to place the report")
    pts = _load_points(args)
    alpha = args.alpha if args.alpha is not None else 1.0 + 0.0j
    c = new_configuration(pts, alpha)
    rs = find_resonances(c, float(args.radius))
    if args.format == "json":
        _write(json.dumps(resonance_set_to_json(rs), indent=2), args.output)
    else:
        _write(resonance_set_to_csv(rs), args.output)
    report = None
    if args.counting:
        steps = int(args.radii_steps)
        radii = np.linspace(args.radius / steps, args.radius, steps)
        h_grid = np.arange(0.0, args.h_max + 0.5 * args.h_step, args.h_step)
        report = build_counting_report(rs, radii, h_grid)
        base, _ = os.path.splitext(args.output)
        with open(base + "_counting.json", "w") as fh:
            json.dump(counting_report_to_json(report), fh, indent=2)
    fig_dir = _fig_dir(args)
    if fig_dir is not None:
        from .report import (save_counting_figure, save_log_density_figure,
                             save_resonance_figure)
        k_vals = None
        if report is not None:
            try:
                k_vals = extract_k_numeric(report).as_values()
            except ComputationError:
                k_vals = None
        save_resonance_figure(rs, os.path.join(fig_dir, "resonances.png"), k_vals)
        if report is not None:
            save_counting_figure(report, os.path.join(fig_dir, "counting.png"))
            save_log_density_figure(report, os.path.join(fig_dir, "log_density.png"))
    return 0


def _cmd_asymptotics(args) -> int:
    _merge_config(args, {"points": None, "points_file": None, "alpha": None,
                         "n_max": DEFAULT_N_MAX, "output": None})
    pts = _load_points(args)
    alpha = args.alpha if args.alpha is not None else 1.0 + 0.0j
    c = new_configuration(pts, alpha)
    out = {"n": c.n, "alpha": [c.alpha.real, c.alpha.imag]}
    if c.n == 0:
        out.update({"v": 0.0, "diam": 0.0, "ad": 0.0, "k": [], "n1": 0,
                    "weyl": True, "canonical": None,
                    "note": "no centers: the determinant is constant, no resonances"})
    elif c.n == 1:
        p = canonical_form(c, int(args.n_max))
        out.update({"v": 0.0, "diam": 0.0, "ad": 0.0, "k": [], "n1": 0,
                    "weyl": True, "canonical": canonical_to_json(p),
                    "note": "single center: exactly one resonance, at -4*pi*i*alpha"})
    else:
        p = canonical_form(c, int(args.n_max))
        v = size_V(c)
        k = k_multiset(distribution_diagram(p), diameter(c))
        out.update({"v": v.value, "diam": diameter(c),
                    "ad": symbolic_density(p), "k": list(k.values), "n1": k.n1,
                    "weyl": is_weyl(p, v), "canonical": canonical_to_json(p)})
    _write(json.dumps(out, indent=2), args.output)
    return 0


def _cmd_sample(args) -> int:
    _merge_config(args, {"kind": UNIFORM_BALL, "m": 0, "r": 1.0, "mixing": None,
                         "seed": None, "stream": 0, "output": None})
    _require(args, "seed")
    mixing = ()
    if args.mixing is not None:
        raw = args.mixing
        if isinstance(raw, str):
            try:
                raw = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise UsageError(f"--mixing is not valid JSON: {exc}")
        mixing = tuple((int(cnt), float(pr)) for cnt, pr in raw)
    cfg = SamplerConfig(kind=args.kind, m=int(args.m), r=float(args.r),
                        mixing=mixing, seed=int(args.seed),
                        stream_id=int(args.stream))
    s = (sample_uniform_ball(cfg) if cfg.kind == UNIFORM_BALL
         else sample_mixed_binomial(cfg))
    _write(json.dumps(sampleset_to_json(s), indent=2), args.output)
    return 0


def _cmd_experiment(args) -> int:
    _merge_config(args, {"m": None, "r": 1.0, "trials": None, "seed": None,
                         "workers": None, "t_grid": (0.0, 1.0), "pairs": 1000000,
                         "alpha": 1.0 + 0.0j, "n_max": DEFAULT_N_MAX,
                         "ks_gate": 0.05, "output": None, "format": "json",
                         "figures": None})
    _require(args, "seed")
    workers = args.workers if args.workers is not None else _default_workers()
    workers = max(1, int(workers))
    kind = args.subkind
    if kind == "moments":
        rep = run_pair_moments(int(args.pairs), int(args.seed), r=float(args.r),
                               workers=workers)
    else:
        _require(args, "m", "trials")
        m, trials, seed, r = (int(args.m), int(args.trials), int(args.seed),
                              float(args.r))
        if kind == "kmin":
            rep = run_kmin_experiment(m, r, trials, seed,
                                      ks_gate=float(args.ks_gate), workers=workers)
        elif kind == "weyl":
            rep = run_weyl_experiment(m, r, trials, seed, alpha=args.alpha,
                                      n_max=int(args.n_max), workers=workers)
        elif kind == "vgrowth":
            grid = args.t_grid
            if isinstance(grid, str):
                grid = _parse_grid(grid)
            rep = run_vgrowth_experiment(m, r, trials, seed,
                                         t_grid=tuple(float(t) for t in grid),
                                         workers=workers)
        else:
            rep = run_kmax_bound_check(m, r, trials, seed, alpha=args.alpha,
                                       n_max=int(args.n_max), workers=workers)
    if args.format == "csv":
        _write(report_to_csv(rep), args.output)
        if rep.cdf_table and args.output is not None:
            base, _ = os.path.splitext(args.output)
            with open(base + "_cdf.csv", "w") as fh:
                fh.write(cdf_table_to_csv(rep))
    else:
        _write(json.dumps(report_to_json(rep), indent=2), args.output)
    fig_dir = _fig_dir(args)
    if fig_dir is not None:
        from .report import save_cdf_figure, save_exceedance_figure
        if rep.cdf_table:
            save_cdf_figure(rep, os.path.join(fig_dir, f"{rep.kind}_cdf.png"))
        if rep.kind == "vgrowth":
            save_exceedance_figure(rep, os.path.join(fig_dir, "vgrowth.png"))
    return 0


# parser -------------------------------------------------------------------------

def _build_parser() -> _Parser:
    p = _Parser(prog="pointres",
                description="Resonances of point-interaction Hamiltonians: "
                            "numeric zero search, symbolic asymptotics, and "
                            "seeded Monte Carlo experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def common_io(sp, fmt_default=None):
        sp.add_argument("--config", help="JSON manifest of parameter defaults")
        sp.add_argument("--output", help="output file (default: stdout)")
        if fmt_default:
            sp.add_argument("--format", choices=("csv", "json"), default=None,
                            help=f"output format (default {fmt_default})")

    def common_points(sp):
        sp.add_argument("--points", help="inline JSON [[x,y,z],...]")
        sp.add_argument("--points-file", help="JSON file with points (and alpha)")
        sp.add_argument("--alpha", type=_parse_alpha, default=None,
                        metavar="RE[,IM]", help="interaction strength")

    sp = sub.add_parser("resonances", help="zeros of the characteristic "
                        "determinant in a disc")
    common_points(sp)
    sp.add_argument("--radius", type=float, default=None,
                    help="search disc radius (required)")
    sp.add_argument("--counting", action="store_true", default=None,
                    help="also write the counting report (needs --output)")
    sp.add_argument("--radii-steps", type=int, default=None)
    sp.add_argument("--h-max", type=float, default=None)
    sp.add_argument("--h-step", type=float, default=None)
    sp.add_argument("--figures", default=None,
                    help="directory for rendered figures")
    common_io(sp, "csv")
    sp.set_defaults(func=_cmd_resonances)

    sp = sub.add_parser("asymptotics", help="size V, density, and chain "
                        "parameters from the symbolic expansion")
    common_points(sp)
    sp.add_argument("--n-max", type=int, default=None,
                    help=f"factorial-work cutoff (default {DEFAULT_N_MAX})")
    common_io(sp)
    sp.set_defaults(func=_cmd_asymptotics)

    sp = sub.add_parser("sample", help="draw a seeded point sample")
    sp.add_argument("--kind", choices=(UNIFORM_BALL, MIXED_BINOMIAL), default=None)
    sp.add_argument("--m", type=int, default=None, help="sample size (uniform_ball)")
    sp.add_argument("--r", type=float, default=None, help="ball radius")
    sp.add_argument("--mixing", default=None,
                    help='JSON [[count, prob], ...] for mixed_binomial')
    sp.add_argument("--seed", type=int, default=None, help="required")
    sp.add_argument("--stream", type=int, default=None, help="substream id")
    common_io(sp)
    sp.set_defaults(func=_cmd_sample)

    sp = sub.add_parser("experiment", help="seeded Monte Carlo experiments")
    sp.add_argument("subkind", choices=("weyl", "kmin", "vgrowth", "kmax",
                                        "moments"))
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--r", type=float, default=None)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None,
                    help="required; experiments never self-seed")
    sp.add_argument("--workers", type=int, default=None,
                    help=f"worker processes (default ${WORKERS_ENV} or 1); "
                         "results are identical for any value")
    sp.add_argument("--t-grid", default=None, metavar="T0,T1,...",
                    help="thresholds for vgrowth")
    sp.add_argument("--pairs", type=int, default=None, help="pairs for moments")
    sp.add_argument("--alpha", type=_parse_alpha, default=None, metavar="RE[,IM]")
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--ks-gate", type=float, default=None,
                    help="KS verdict threshold for kmin (default 0.05)")
    sp.add_argument("--figures", default=None,
                    help="directory for rendered figures")
    common_io(sp, "json")
    sp.set_defaults(func=_cmd_experiment)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComputationError as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
