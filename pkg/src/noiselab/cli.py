"""``noiselab`` command line.

Subcommands: ``run`` an experiment, ``norm`` of a field file, ``sample`` a
white-noise field, ``report`` on an output directory.  Exit codes:

==  ==========================================================
0   every verdict passed (or the command succeeded)
1   at least one verdict failed
2   cutoff ``N`` too small for ``Jmax``
3   some verdict inconclusive, none failed
4   runtime resource guard or quadrature failure
5   missing input file
6   schema violation (unknown key, bad value, malformed file)
==  ==========================================================
"""
from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import __version__
from .besov import besov_norm
from .errors import ConfigurationError, PreconditionError, QuadratureError, ResourceError
from .experiments import REGISTRY, CouplingError, ExperimentConfig
from .experiments.config import DEFAULT_TOLERANCES
from .fourier_besov import fb_norms
from .io import SchemaError, field_to_json, load_field, read_manifest, save_field, write_results
from .randfield import RngSpec, sample_white_noise

__all__ = ["EXIT", "dispatch", "main", "parse_config"]

EXIT = {"pass": 0, "fail": 1, "coupling": 2, "inconclusive": 3, "resource": 4, "missing": 5, "schema": 6}

_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_CONFIG_KEYS = set(_FIELDS) - {"tolerances"}
_SECTIONS = ("experiment", "tolerances")


def _convert(key: str, value):
    """Coerce a string from a file or flag to the type of config field ``key``."""
    if not isinstance(value, str):
        return value
    default = _FIELDS[key].default
    v = value.strip()
    try:
        if key in ("p_values", "q_values", "s_offsets"):
            return tuple(float(x) for x in v.replace(",", " ").split())
        if key == "real_noise":
            if v.lower() in ("1", "true", "yes", "on"):
                return True
            if v.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(v)
        if key in ("p", "q", "s", "smooth_a", "smooth_b", "quadrature_tol"):
            return None if (key == "s" and v.lower() in ("", "none")) else float(v)
        if key in ("N",) and v.lower() in ("", "none"):
            return None
        if isinstance(default, int) or key == "N":
            return int(v)
    except ValueError as exc:
        raise SchemaError(f"bad value for {key}: {value!r}") from exc
    if key == "out" and v == "":
        return None
    return v


def parse_config(path: str | os.PathLike | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Build a validated config from an INI file and flag overrides.

    The file has an ``[experiment]`` section with config keys and an
    optional ``[tolerances]`` section.  Flags win over file keys.  Unknown
    sections or keys raise :class:`SchemaError`.
    """
    values: dict = {}
    tolerances: dict = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(path)
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        try:
            cp.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise SchemaError(f"{path}: {exc}") from exc
        extra = set(cp.sections()) - set(_SECTIONS)
        if extra:
            raise SchemaError(f"unknown sections {sorted(extra)}; allowed {list(_SECTIONS)}")
        if cp.has_section("experiment"):
            for k, v in cp.items("experiment"):
                if k not in _CONFIG_KEYS:
                    raise SchemaError(f"unknown key {k!r} in [experiment]")
                values[k] = v
        if cp.has_section("tolerances"):
            for k, v in cp.items("tolerances"):
                tolerances[k] = v
    for k, v in (overrides or {}).items():
        if k == "tolerances":
            tolerances.update(v)
        elif v is not None:
            if k not in _CONFIG_KEYS:
                raise SchemaError(f"unknown key {k!r}")
            values[k] = v
    unknown = set(tolerances) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise SchemaError(f"unknown tolerance keys {sorted(unknown)}")
    try:
        tol = {k: float(v) for k, v in tolerances.items()}
    except ValueError as exc:
        raise SchemaError(f"tolerances must be numbers: {exc}") from exc
    kwargs = {k: _convert(k, v) for k, v in values.items()}
    if "Jmax" in kwargs and "N" not in kwargs:
        kwargs["N"] = None
    try:
        return ExperimentConfig(**kwargs, tolerances=tol)
    except CouplingError:
        raise
    except (ConfigurationError, TypeError) as exc:
        raise SchemaError(str(exc)) from exc


def dispatch(cfg: ExperimentConfig, out_root: str | os.PathLike | None = None):
    """Run ``cfg`` and persist its outputs; returns ``(summary, run_dir)``."""
    from .io import _now

    started = _now()
    summary = REGISTRY[cfg.experiment](cfg)
    root = Path(out_root or cfg.out or os.environ.get("NOISELAB_OUT", "out"))
    return summary, write_results(summary, root, started)


# ---------------------------------------------------------------------------
# argument parsing


def _globals() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--trials", type=int, default=argparse.SUPPRESS)
    g.add_argument("--out", default=argparse.SUPPRESS, help="output root (default $NOISELAB_OUT or ./out)")
    g.add_argument("--config", default=argparse.SUPPRESS, help="INI config file")
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    return g


def build_parser() -> argparse.ArgumentParser:
    g = _globals()
    ap = argparse.ArgumentParser(prog="noiselab", parents=[g], description="White noise regularity experiments.")
    ap.add_argument("--version", action="version", version=f"noiselab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[g], help="run an experiment")
    run.add_argument("--experiment", choices=sorted(REGISTRY))
    run.add_argument("--space", choices=("besov", "fourier_besov"))
    run.add_argument("--d", type=int)
    run.add_argument("--p", type=float)
    run.add_argument("--q", type=float)
    run.add_argument("--s", type=float)
    run.add_argument("--Jmax", type=int)
    run.add_argument("--N", type=int)
    run.add_argument("--partition", choices=("sharp", "smooth"))
    run.add_argument("--smooth-a", dest="smooth_a", type=float)
    run.add_argument("--smooth-b", dest="smooth_b", type=float)
    run.add_argument("--osf", type=int)
    run.add_argument("--quadrature-tol", dest="quadrature_tol", type=float)
    run.add_argument("--fb-variant", dest="fb_variant", choices=("sharp", "smooth", "dyadic", "all"))
    run.add_argument("--real-noise", dest="real_noise", action="store_const", const=True)
    run.add_argument("--J-min", dest="J_min", type=int)
    run.add_argument("--p-values", dest="p_values")
    run.add_argument("--q-values", dest="q_values")
    run.add_argument("--s-offsets", dest="s_offsets")
    run.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="override a tolerance")

    norm = sub.add_parser("norm", parents=[g], help="norms of a field file, as JSON")
    norm.add_argument("--input", required=True)
    norm.add_argument("--s", type=float, required=True)
    norm.add_argument("--p", type=float, required=True)
    norm.add_argument("--q", type=float, required=True)
    norm.add_argument("--space", choices=("besov", "fourier_besov"), default="besov")
    norm.add_argument("--partition", choices=("sharp", "smooth"), default="sharp")
    norm.add_argument("--osf", type=int, default=4)
    norm.add_argument("--quadrature-tol", dest="quadrature_tol", type=float, default=1e-6)
    norm.add_argument("--levels", choices=("complete", "all"))

    sample = sub.add_parser("sample", parents=[g], help="write a white-noise field file")
    sample.add_argument("--d", type=int, default=1)
    sample.add_argument("--N", type=int, required=True)
    sample.add_argument("--trial", type=int, default=0)
    sample.add_argument("--real-noise", dest="real_noise", action="store_true")
    sample.add_argument("--output", help="file path (default: standard output)")

    report = sub.add_parser("report", parents=[g], help="re-summarise an output directory")
    report.add_argument("run_dir")
    return ap


def _overrides(ns: argparse.Namespace) -> dict:
    keys = _CONFIG_KEYS | {"seed", "trials", "out", "threads"}
    out = {k: v for k, v in vars(ns).items() if k in keys and v is not None}
    tols = {}
    for item in getattr(ns, "tol", []) or []:
        if "=" not in item:
            raise SchemaError(f"--tol expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        tols[k.strip()] = v.strip()
    if tols:
        out["tolerances"] = tols
    return out


def _cmd_run(ns) -> int:
    cfg = parse_config(getattr(ns, "config", None), _overrides(ns))
    summary, run_dir = dispatch(cfg, getattr(ns, "out", None))
    print(summary.report())
    print(f"outputs: {run_dir}")
    return EXIT[summary.status]


def _cmd_norm(ns) -> int:
    field = load_field(ns.input)
    if ns.space == "besov":
        rep = besov_norm(field, ns.s, ns.p, ns.q, ns.partition, ns.osf, quadrature_tol=ns.quadrature_tol, levels=ns.levels)
    else:
        rep = fb_norms(field, ns.s, ns.p, ns.q, levels=ns.levels)
    json.dump(rep.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_sample(ns) -> int:
    field = sample_white_noise(ns.d, ns.N, RngSpec(getattr(ns, "seed", 0)), ns.trial, real=ns.real_noise)
    if ns.output:
        save_field(field, ns.output)
    else:
        json.dump(field_to_json(field), sys.stdout)
        sys.stdout.write("\n")
    return 0


def _cmd_report(ns) -> int:
    run_dir = Path(ns.run_dir)
    if not run_dir.is_dir():
        raise FileNotFoundError(run_dir)
    m = read_manifest(run_dir)
    print(f"== {m['experiment']} ({m['status']}) seed={m['seed']} hash={m['config_hash'][:12]} version={m['version']}")
    for v in m["verdicts"]:
        print(f"  [{v['status'].upper():>12}] {v['id']}: observed={v['observed']} tolerance={v['tolerance']} {v['detail']}".rstrip())
    print(f"  files verified: {len(m['files'])}")
    return EXIT[m["status"]]


_COMMANDS = {"run": _cmd_run, "norm": _cmd_norm, "sample": _cmd_sample, "report": _cmd_report}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT["schema"] if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[ns.command](ns)
    except CouplingError as exc:
        print(f"noiselab: {exc}", file=sys.stderr)
        return EXIT["coupling"]
    except FileNotFoundError as exc:
        print(f"noiselab: file not found: {exc}", file=sys.stderr)
        return EXIT["missing"]
    except (ResourceError, QuadratureError, MemoryError) as exc:
        print(f"noiselab: resource guard: {exc}", file=sys.stderr)
        return EXIT["resource"]
    except (SchemaError, ConfigurationError, PreconditionError) as exc:
        print(f"noiselab: {exc}", file=sys.stderr)
        return EXIT["schema"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
