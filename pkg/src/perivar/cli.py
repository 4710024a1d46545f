"""Command-line front end.

Subcommands: gamma-series, periodic-points, transition-scan, julia-scan,
orbit, verify-variety.  Flags override a TOML config file (one table per
subcommand) which overrides built-in defaults; the resolved configuration is
echoed into every output file as '#'-prefixed metadata so runs can be
reproduced byte for byte.

Exit codes: 0 success, 1 usage error, 2 verification-style failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import tomli

from . import biquad, julia, maps, periodic, variety
from .maps import MapId, StatePoint

USAGE_EXIT = 1
VERIFY_FAIL_EXIT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(text: str) -> complex:
    """Parse 're+imi' style complex literals, e.g. '0.5-0.25i'."""
    try:
        return complex(str(text).strip().replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def fmt_complex(z: complex) -> str:
    re, im = z.real, z.imag
    sign = "+" if im >= 0 or im != im else "-"
    return f"{re!r}{sign}{abs(im)!r}i"


def _csv_value(v) -> str:
    if isinstance(v, complex):
        return fmt_complex(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(lines, path):
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _meta_lines(command: str, settings: dict) -> list:
    out = [f"# command = {command}"]
    for key in sorted(settings):
        out.append(f"# {key} = {settings[key]}")
    return out


def _csv_out(command, settings, header, rows, path):
    lines = _meta_lines(command, settings)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_value(v) for v in row))
    _emit(lines, path)


def _json_out(command, settings, payload, path):
    doc = {"command": command, "config": {k: str(v) for k, v in sorted(settings.items())}, "result": payload}
    _emit([json.dumps(doc, indent=2, sort_keys=True)], path)


# ----------------------------------------------------------------------
# config resolution


def _load_config(path):
    if not path:
        return {}
    with open(path, "rb") as fh:
        return tomli.load(fh)


def resolve(command: str, cli_args: dict, config: dict, defaults: dict) -> dict:
    """flags > config-file table > defaults; unknown config keys rejected."""
    section = config.get(command, {})
    unknown = set(section) - set(defaults)
    if unknown:
        raise UsageError(f"unknown config keys for {command}: {sorted(unknown)}")
    merged = dict(defaults)
    merged.update(section)
    for k, v in cli_args.items():
        if v is not None:
            merged[k] = v
    missing = [k for k, v in merged.items() if v is None]
    if missing:
        raise UsageError(f"{command} needs values for: {sorted(missing)}")
    return merged


# ----------------------------------------------------------------------
# subcommands


def cmd_gamma_series(args, config) -> int:
    defaults = {"max_period": 5, "lv": False, "ceiling": 6, "output": "-"}
    cfg = resolve(
        "gamma-series",
        {"max_period": args.max_period, "lv": args.lv or None, "ceiling": args.ceiling, "output": args.output},
        config,
        defaults,
    )
    max_period = int(cfg["max_period"])
    if max_period < 3 or max_period > int(cfg["ceiling"]):
        raise UsageError(f"max_period must lie in 3..{cfg['ceiling']} (periodicity factors start at period 3)")
    series = biquad.gamma_series(max_period)
    payload = {"generic": series.to_json_obj()}
    if cfg["lv"]:
        payload["lv"] = [
            {"period": e.period, "gamma": biquad.lv_gamma(e.gamma).to_json_dict()}
            for e in series.entries
        ]
    _json_out("gamma-series", cfg, payload, cfg["output"])
    return 0


def cmd_periodic_points(args, config) -> int:
    defaults = {"h": None, "hp": None, "n": None, "output": "-", "format": "csv"}
    cfg = resolve(
        "periodic-points",
        {"h": args.h, "hp": args.hp, "n": args.n, "output": args.output, "format": args.format},
        config,
        defaults,
    )
    h, hp, n = parse_complex(cfg["h"]), parse_complex(cfg["hp"]), int(cfg["n"])
    pts = periodic.periodic_points(h, hp, n)
    header = ("period", "re_z", "im_z", "re_multiplier", "im_multiplier", "class", "residual")
    rows = [
        (p.period, p.z.real, p.z.imag, p.multiplier.real, p.multiplier.imag, p.cls, p.residual)
        for p in pts
    ]
    settings = {"h": fmt_complex(h), "hp": fmt_complex(hp), "n": n}
    if cfg["format"] == "json":
        _json_out("periodic-points", settings, [dict(zip(header, r)) for r in rows], cfg["output"])
    else:
        _csv_out("periodic-points", settings, header, rows, cfg["output"])
    return 0


def cmd_transition_scan(args, config) -> int:
    defaults = {"h": None, "n": None, "deltas": "1e-2,1e-3,1e-4", "output": "-"}
    cfg = resolve(
        "transition-scan",
        {"h": args.h, "n": args.n, "deltas": args.deltas, "output": args.output},
        config,
        defaults,
    )
    h, n = parse_complex(cfg["h"]), int(cfg["n"])
    deltas = [float(t) for t in str(cfg["deltas"]).split(",") if t.strip()]
    rows = periodic.transition_scan(h, n, deltas)
    header = ("delta", "period", "re_z", "im_z", "re_multiplier", "im_multiplier", "class", "dist_to_fossil")
    out_rows = [
        (
            r["delta"],
            r["period"],
            r["z"].real,
            r["z"].imag,
            r["multiplier"].real,
            r["multiplier"].imag,
            r["class"],
            r["dist_to_fossil"],
        )
        for r in rows
    ]
    settings = {"h": fmt_complex(h), "n": n, "deltas": cfg["deltas"]}
    _csv_out("transition-scan", settings, header, out_rows, cfg["output"])
    return 0


def cmd_julia_scan(args, config) -> int:
    defaults = {
        "h": None,
        "eps_grid": "1e-1,1e-2,1e-3",
        "depth": 12,
        "count": 2000,
        "seed": 0,
        "workers": 1,
        "output": "-",
    }
    cfg = resolve(
        "julia-scan",
        {
            "h": args.h,
            "eps_grid": args.eps_grid,
            "depth": args.depth,
            "count": args.count,
            "seed": args.seed,
            "workers": args.workers,
            "output": args.output,
        },
        config,
        defaults,
    )
    h = parse_complex(cfg["h"])
    eps_grid = [float(t) for t in str(cfg["eps_grid"]).split(",") if t.strip()]
    rows = julia.convergence_report(
        h, eps_grid, int(cfg["depth"]), int(cfg["count"]), int(cfg["seed"]), int(cfg["workers"])
    )
    header = ("epsilon", "depth", "count", "max_dist", "bound", "ratio", "excluded_branch_crossings")
    out_rows = [tuple(r[k] for k in header) for r in rows]
    settings = {k: cfg[k] for k in ("eps_grid", "depth", "count", "seed", "workers")}
    settings["h"] = fmt_complex(h)
    _csv_out("julia-scan", settings, header, out_rows, cfg["output"])
    return 0


def cmd_orbit(args, config) -> int:
    defaults = {
        "map": None,
        "x0": None,
        "steps": 100,
        "params": "",
        "prec": 0,
        "output": "-",
    }
    cfg = resolve(
        "orbit",
        {
            "map": args.map,
            "x0": args.x0,
            "steps": args.steps,
            "params": ",".join(args.param) if args.param else None,
            "prec": args.prec,
            "output": args.output,
        },
        config,
        defaults,
    )
    map_id = maps.map_from_string(str(cfg["map"]))
    params = {}
    for item in str(cfg["params"]).split(","):
        item = item.strip()
        if not item:
            continue
        key, _, val = item.partition("=")
        params[key.strip()] = parse_complex(val)
    coords = [parse_complex(t) for t in str(cfg["x0"]).split(";")]
    steps = int(cfg["steps"])
    prec = int(cfg["prec"])
    if prec:
        import mpmath as mp

        with mp.workdps(prec):
            coords = [mp.mpc(z) for z in coords]
            pts = maps.orbit(map_id, StatePoint(coords), params, steps)
            rows = _orbit_rows(map_id, pts, params)
    else:
        pts = maps.orbit(map_id, StatePoint(coords), params, steps)
        rows = _orbit_rows(map_id, pts, params)
    dim = maps.DIMENSION[map_id]
    ninv = maps.NUM_INVARIANTS[map_id]
    header = (
        ["step"]
        + [f"re_x{i}" for i in range(dim)]
        + [f"im_x{i}" for i in range(dim)]
        + [f"re_H{i}" for i in range(ninv)]
        + [f"im_H{i}" for i in range(ninv)]
    )
    settings = {
        "map": map_id.value,
        "steps": steps,
        "x0": cfg["x0"],
        "params": cfg["params"],
        "prec": prec,
    }
    _csv_out("orbit", settings, header, rows, cfg["output"])
    return 0


def _orbit_rows(map_id, pts, params):
    rows = []
    for k, pt in enumerate(pts):
        inv = maps.invariants_of(map_id, pt, params)
        row = [k]
        row += [float(c.real) for c in map(complex, pt)]
        row += [float(c.imag) for c in map(complex, pt)]
        row += [float(complex(v).real) for v in inv]
        row += [float(complex(v).imag) for v in inv]
        rows.append(tuple(row))
    return rows


def cmd_verify_variety(args, config) -> int:
    defaults = {
        "map": None,
        "period": None,
        "samples": 100,
        "seed": 0,
        "b": "0.7+0.2i",
        "k": 1,
        "output": "-",
    }
    cfg = resolve(
        "verify-variety",
        {
            "map": args.map,
            "period": args.period,
            "samples": args.samples,
            "seed": args.seed,
            "b": args.b,
            "k": args.k,
            "output": args.output,
        },
        config,
        defaults,
    )
    map_name = str(cfg["map"])
    period = int(cfg["period"])
    samples = int(cfg["samples"])
    seed = int(cfg["seed"])
    if map_name == "2d-bc":
        report = variety.verify_variety_2d(period, parse_complex(cfg["b"]), int(cfg["k"]), samples, seed)
    elif map_name == "lv3":
        report = variety.verify_variety_lv(period, samples, seed)
    else:
        raise UsageError(f"verify-variety supports maps '2d-bc' and 'lv3', got {map_name!r}")
    settings = {k: cfg[k] for k in ("map", "period", "samples", "seed", "b", "k")}
    _json_out("verify-variety", settings, report.to_json_obj(), cfg["output"])
    return 0 if report.all_passed else VERIFY_FAIL_EXIT


# ----------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="perivar", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", help="TOML config file (one table per subcommand)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma-series", help="periodicity factors of the generic biquadratic recursion")
    g.add_argument("--max-period", dest="max_period", type=int)
    g.add_argument("--lv", action="store_true", default=False)
    g.add_argument("--ceiling", type=int)
    g.add_argument("--output", "-o")

    q = sub.add_parser("periodic-points", help="all points of exact period n of the normal-form map")
    q.add_argument("--h")
    q.add_argument("--hp")
    q.add_argument("--n", type=int)
    q.add_argument("--format", choices=("csv", "json"))
    q.add_argument("--output", "-o")

    t = sub.add_parser("transition-scan", help="periodic points against the fossil set as hh' -> 1")
    t.add_argument("--h")
    t.add_argument("--n", type=int)
    t.add_argument("--deltas")
    t.add_argument("--output", "-o")

    j = sub.add_parser("julia-scan", help="backward-orbit distance to the integrable limit set")
    j.add_argument("--h")
    j.add_argument("--eps-grid", dest="eps_grid")
    j.add_argument("--depth", type=int)
    j.add_argument("--count", type=int)
    j.add_argument("--seed", type=int)
    j.add_argument("--workers", type=int)
    j.add_argument("--output", "-o")

    o = sub.add_parser("orbit", help="forward orbit of a catalog map with invariant tracking")
    o.add_argument("--map")
    o.add_argument("--x0", help="semicolon-separated complex coordinates, e.g. '0.3+0.1i;0.5'")
    o.add_argument("--steps", type=int)
    o.add_argument("--param", action="append", help="name=complex, repeatable")
    o.add_argument("--prec", type=int, help="working precision in digits (0 = double)")
    o.add_argument("--output", "-o")

    v = sub.add_parser("verify-variety", help="sampled verification of an invariant periodic variety")
    v.add_argument("--map")
    v.add_argument("--period", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--b")
    v.add_argument("--k", type=int)
    v.add_argument("--output", "-o")
    return p


_DISPATCH = {
    "gamma-series": cmd_gamma_series,
    "periodic-points": cmd_periodic_points,
    "transition-scan": cmd_transition_scan,
    "julia-scan": cmd_julia_scan,
    "orbit": cmd_orbit,
    "verify-variety": cmd_verify_variety,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _load_config(args.config)
        return _DISPATCH[args.command](args, config)
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (biquad.BiquadError, maps.PoleError, periodic.RootFindingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VERIFY_FAIL_EXIT


if __name__ == "__main__":
    sys.exit(main())
