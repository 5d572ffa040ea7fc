"""Command-line front door: subcommands, config parsing, artifact emission.

Configuration comes from ``--key value`` flags plus an optional plain-text
``key=value`` file (``--config``); flags override file values.  Every run
writes its resolved configuration (config.json) and a manifest listing the
emitted files, a hash of the configuration, the seed, and wall time.  Exit
codes: 0 success, 1 usage/configuration error, 2 reported numerical failure.

The output directory defaults to $DEXLAB_OUT (or ./dexlab_out); that
environment variable is the only one consulted.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import align, expansion, fileio, jets, laguerre, maps, mrs, orthopoly
from .errors import (ConfigError, MissingRequired, NumericalError, TypeMismatch,
                     UnknownKey)
from .motions import EuclideanMotion, rotation_from_quaternion
from .weights import WeightSpec


@dataclass(frozen=True)
class Opt:
    kind: str  # int | float | str | floats | ints | pnorm
    default: object = None
    required: bool = False


SCHEMAS: dict = {
    "twist": {
        "profile": Opt("str", "exp"),
        "amp": Opt("float", 1.0),
        "scale": Opt("float", 1.0),
        "exponent": Opt("float", 1.0),
        "theta": Opt("float", 0.1),
        "c1": Opt("float", 1.0),
        "c2": Opt("float", 8.0),
        "epsilon": Opt("float", 0.1),
        "d": Opt("int", 2),
        "quat": Opt("floats", None),
        "box": Opt("float", required=True),
        "n": Opt("int", 64),
        "steps": Opt("int", 1),
        "pattern": Opt("str", "random"),
    },
    "slide": {
        "profile": Opt("str", "recip-exp"),
        "amp": Opt("float", 1.0),
        "scale": Opt("float", 1.0),
        "d": Opt("int", 2),
        "box": Opt("float", required=True),
        "n": Opt("int", 64),
        "steps": Opt("int", 1),
        "pattern": Opt("str", "random"),
    },
    "certify": {
        "map": Opt("str", "twist"),
        "profile": Opt("str", "exp"),
        "amp": Opt("float", 1.0),
        "scale": Opt("float", 1.0),
        "exponent": Opt("float", 1.0),
        "angle": Opt("float", 0.0),
        "tx": Opt("float", 0.0),
        "ty": Opt("float", 0.0),
        "quat": Opt("floats", None),
        "d": Opt("int", 2),
        "box": Opt("float", required=True),
        "k": Opt("int", 200),
    },
    "procrustes": {
        "y": Opt("str", required=True),
        "z": Opt("str", required=True),
        "proper": Opt("int", 1),
    },
    "jets": {
        "field": Opt("str", required=True),
    },
    "recurrence": {
        "beta": Opt("float", required=True),
        "N": Opt("int", required=True),
        "tol": Opt("float", 1e-10),
    },
    "mrs": {
        "beta": Opt("float", required=True),
        "u": Opt("floats", required=True),
        "tol": Opt("float", 1e-12),
    },
    "expand": {
        "beta": Opt("float", required=True),
        "N": Opt("int", required=True),
        "f": Opt("str", "runge"),
        "p": Opt("pnorm", 2.0),
        "b": Opt("float", 0.0),
        "B": Opt("float", 1.0),
        "n_list": Opt("ints", required=True),
        "tol": Opt("float", 1e-10),
    },
    "conditions": {
        "p": Opt("pnorm", required=True),
        "b": Opt("float", required=True),
        "B": Opt("float", required=True),
        "beta": Opt("float", required=True),
    },
    "laguerre": {
        "d": Opt("int", 1),
        "N": Opt("int", required=True),
        "f": Opt("str", "expneg"),
        "probes": Opt("floats", (0.0, 1.0)),
        "n_list": Opt("ints", None),
    },
}

_PATH_KEYS = {"y", "z", "field"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    out_dir: Path
    seed: int

    def payload(self) -> dict:
        """Location-independent resolved configuration (echoed as provenance)."""
        params = {}
        for k, v in sorted(self.params.items()):
            if isinstance(v, float) and math.isinf(v):
                v = "inf"
            elif isinstance(v, tuple):
                v = list(v)
            params[k] = v
        return {"command": self.command, "seed": self.seed, "params": params}


def _convert(key: str, kind: str, value):
    if not isinstance(value, str):
        return value
    try:
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        if kind == "str":
            return value
        if kind == "pnorm":
            return math.inf if value.lower() in ("inf", "infinity") else float(value)
        if kind == "floats":
            return tuple(float(v) for v in value.split(",") if v != "")
        if kind == "ints":
            return tuple(int(v) for v in value.split(",") if v != "")
    except ValueError:
        raise TypeMismatch(key, kind, value) from None
    raise TypeMismatch(key, kind, value)


def _read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw_line in fh:
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise TypeMismatch("config", "key=value line", line)
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def parse_config(argv) -> RunConfig:
    """Resolve argv (plus optional config file) into a validated RunConfig."""
    argv = list(argv)
    if not argv:
        raise MissingRequired("command")
    command = argv[0]
    if command not in SCHEMAS:
        raise UnknownKey(command)
    schema = SCHEMAS[command]

    raw: dict = {}
    i = 1
    while i < len(argv):
        tok = argv[i]
        if not tok.startswith("--") or len(tok) <= 2:
            raise UnknownKey(tok)
        key = tok[2:].replace("-", "_")
        if i + 1 >= len(argv):
            raise MissingRequired(f"value for --{key}")
        raw[key] = argv[i + 1]
        i += 2

    merged: dict = {}
    if "config" in raw:
        merged.update(_read_config_file(raw.pop("config")))
    merged.update(raw)

    out_dir = merged.pop("out", None) or os.environ.get("DEXLAB_OUT", "dexlab_out")
    seed = _convert("seed", "int", merged.pop("seed", 0))

    params = {}
    for key, value in merged.items():
        if key not in schema:
            raise UnknownKey(key)
        params[key] = _convert(key, schema[key].kind, value)
    for key, opt in schema.items():
        if key not in params:
            if opt.required:
                raise MissingRequired(key)
            params[key] = opt.default
    for key in _PATH_KEYS & set(params):
        if params[key] is not None:
            params[key] = str(Path(params[key]).resolve())

    return RunConfig(command, params, Path(out_dir).resolve(), int(seed))


# ---------------------------------------------------------------------------
# map construction shared by twist / slide / certify


def _twist_profile(p: dict) -> maps.AngleProfile:
    name = p["profile"]
    if name == "exp":
        return maps.AngleProfile.exponential(p["amp"], p["scale"])
    if name == "power":
        return maps.AngleProfile.power(p["amp"], p["exponent"])
    if name == "constant":
        return maps.AngleProfile.constant(p["theta"])
    if name == "log-transition":
        twist = maps.build_transition_twist(p["theta"], p["c1"], p["c2"], p["epsilon"])
        return twist.blocks[0]
    raise UnknownKey(f"profile={name}")


def _twist_map(p: dict) -> maps.SlowTwist:
    d = p["d"]
    base = EuclideanMotion.identity(d)
    if p.get("quat"):
        if d != 3:
            raise TypeMismatch("quat", "d=3 rotation", f"d={d}")
        base = rotation_from_quaternion(*p["quat"])
    profile = _twist_profile(p)
    blocks = [None] * (d - 2) + [profile] if d >= 3 else [profile]
    return maps.SlowTwist(d, base, blocks)


def _slide_map(p: dict) -> maps.Slide:
    name = p["profile"]
    if name == "recip-exp":
        g1 = maps.AngleProfile(lambda t: 1.0 / (1.0 + t**2),
                               lambda t: -2.0 * t / (1.0 + t**2) ** 2,
                               family="reciprocal-square")
        g2 = maps.AngleProfile(lambda t: 0.5 * np.exp(-np.abs(t)),
                               lambda t: -0.5 * np.sign(t) * np.exp(-np.abs(t)),
                               family="exponential-abs")
        return maps.Slide([g1, g2])
    if name == "exp":
        amp, scale, d = p["amp"], p["scale"], p["d"]
        profs = [maps.AngleProfile(lambda t, a=amp, s=scale: a * np.exp(-s * np.abs(t)),
                                   lambda t, a=amp, s=scale: -a * s * np.sign(t) * np.exp(-s * np.abs(t)),
                                   family="exponential-abs")
                 for _ in range(d)]
        return maps.Slide(profs)
    if name == "zero":
        zero = maps.AngleProfile.constant(0.0)
        return maps.Slide([zero] * p["d"])
    raise UnknownKey(f"profile={name}")


def _initial_points(p: dict, seed: int, d: int) -> np.ndarray:
    box, n, pattern = p["box"], p["n"], p.get("pattern", "random")
    if pattern == "random":
        rng = np.random.default_rng(seed)
        return rng.uniform(-box, box, size=(n, d))
    t = np.linspace(-box, box, n)
    if pattern == "line":
        return np.stack([t] * d, axis=1)
    if pattern == "antiline":
        cols = [t] + [-t] * (d - 1)
        return np.stack(cols, axis=1)
    raise UnknownKey(f"pattern={pattern}")


# ---------------------------------------------------------------------------
# subcommand handlers (each returns the list of emitted file names)


def _run_twist(cfg: RunConfig, out: Path) -> list:
    dmap = _twist_map(cfg.params)
    pts = _initial_points(cfg.params, cfg.seed, cfg.params["d"])
    steps = [pts]
    for _ in range(cfg.params["steps"]):
        steps.append(maps.apply_map(dmap, steps[-1]))
    return fileio.emit_trajectory(out, "twist", steps)


def _run_slide(cfg: RunConfig, out: Path) -> list:
    dmap = _slide_map(cfg.params)
    pts = _initial_points(cfg.params, cfg.seed, dmap.dim)
    steps = [pts]
    for _ in range(cfg.params["steps"]):
        steps.append(maps.apply_map(dmap, steps[-1]))
    return fileio.emit_trajectory(out, "slide", steps)


def _run_certify(cfg: RunConfig, out: Path) -> list:
    p = cfg.params
    kind = p["map"]
    if kind == "twist":
        dmap = _twist_map(p)
    elif kind == "slide":
        dmap = _slide_map(p)
    elif kind == "motion":
        if p.get("quat"):
            motion = rotation_from_quaternion(*p["quat"])
        else:
            motion = EuclideanMotion.rotation_2d(p["angle"], (p["tx"], p["ty"]))
        dmap = maps.Motion(motion)
    else:
        raise UnknownKey(f"map={kind}")
    sampler = maps.BoxSampler.centered(p["box"], dmap.dim, p["k"], cfg.seed)
    cert = maps.distortion_certificate(dmap, sampler)
    fileio.write_json(out / "certificate.json", cert.to_dict())
    return ["certificate.json"]


def _run_procrustes(cfg: RunConfig, out: Path) -> list:
    Y = fileio.read_points_csv(cfg.params["y"])
    Z = fileio.read_points_csv(cfg.params["z"])
    res = align.procrustes_align(Y, Z, prefer_proper=bool(cfg.params["proper"]))
    fileio.write_json(out / "procrustes.json", {
        "motion": res.motion.to_dict(),
        "residual": res.residual,
        "max_dev": res.max_dev,
        "max_dev_over_diam": res.max_dev_over_diam,
    })
    return ["procrustes.json"]


def _run_jets(cfg: RunConfig, out: Path) -> list:
    field_obj = jets.WhitneyField.load(cfg.params["field"])
    report = jets.compatibility_residual(field_obj)
    rows = [(",".join(map(str, alpha)), i, j, float(r))
            for alpha, i, j, r in report.rows()]
    fileio.write_csv(out / "jets_residuals.csv", ["alpha", "x_index", "a_index", "residual"],
                     rows)
    fileio.write_json(out / "jets_summary.json", {
        "summary_max": report.summary_max,
        "points": field_obj.k,
        "order": field_obj.order,
    })
    return ["jets_residuals.csv", "jets_summary.json"]


def _run_recurrence(cfg: RunConfig, out: Path) -> list:
    p = cfg.params
    table = orthopoly.recurrence_coefficients(WeightSpec.power(p["beta"]), p["N"], p["tol"])
    fileio.write_json(out / "recurrence.json", table.to_dict())
    return ["recurrence.json"]


def _run_mrs(cfg: RunConfig, out: Path) -> list:
    p = cfg.params
    weight = WeightSpec.power(p["beta"])
    table = mrs.MRSTable.build(weight, p["u"], p["tol"])
    fileio.write_csv(out / "mrs.csv", ["u", "a_u"], table.rows())
    return ["mrs.csv"]


EXPAND_FUNCS = {
    "runge": lambda x: 1.0 / (1.0 + x**2),
    "gauss": lambda x: np.exp(-(x**2)),
    "abs": np.abs,
    "sin": np.sin,
    "poly3": lambda x: x**3 - x,
    "one": lambda x: np.ones_like(np.asarray(x, dtype=float)),
}


def _run_expand(cfg: RunConfig, out: Path) -> list:
    p = cfg.params
    if p["f"] not in EXPAND_FUNCS:
        raise UnknownKey(f"f={p['f']}")
    table = orthopoly.recurrence_coefficients(WeightSpec.power(p["beta"]), p["N"], p["tol"])
    result = expansion.convergence_experiment(table, EXPAND_FUNCS[p["f"]],
                                              p["p"], p["b"], p["B"], p["n_list"])
    fileio.write_csv(out / "expand.csv", ["n", "r_n", "e_n"],
                     [(n, r, e) for n, r, e in result.rows])
    fileio.write_json(out / "expand.json", {"slope": result.slope, "norm_f": result.norm_f})
    return ["expand.csv", "expand.json"]


def _run_conditions(cfg: RunConfig, out: Path) -> list:
    p = cfg.params
    report = expansion.condition_check(p["p"], p["b"], p["B"], p["beta"])
    fileio.write_json(out / "conditions.json", report.to_dict())
    return ["conditions.json"]


LAGUERRE_FUNCS = {
    "expneg": lambda *axes: np.exp(-sum(axes)),
    "recip": lambda *axes: np.prod([1.0 / (1.0 + a**2) for a in axes], axis=0),
}


def _run_laguerre(cfg: RunConfig, out: Path) -> list:
    p = cfg.params
    if p["f"] not in LAGUERRE_FUNCS:
        raise UnknownKey(f"f={p['f']}")
    fn = LAGUERRE_FUNCS[p["f"]]
    d, cap = p["d"], p["N"]
    coeffs = laguerre.laguerre_coefficients(fn, d, cap)
    header = [f"n{i + 1}" for i in range(d)] + ["value"]
    fileio.write_csv(out / "laguerre_coeffs.csv", header,
                     [list(idx) + [v] for idx, v in coeffs.rows()])
    files = ["laguerre_coeffs.csv"]
    n_list = p["n_list"] if p["n_list"] else tuple(range(0, cap + 1, max(1, cap // 4)))
    probes_flat = np.asarray(p["probes"], dtype=float)
    probes = probes_flat.reshape(-1, d) if d > 1 else probes_flat.reshape(-1, 1)
    report = laguerre.reconstruction_report(coeffs, fn, probes, n_list)
    fileio.write_json(out / "laguerre_recon.json", report.to_dict())
    files.append("laguerre_recon.json")
    return files


HANDLERS = {
    "twist": _run_twist,
    "slide": _run_slide,
    "certify": _run_certify,
    "procrustes": _run_procrustes,
    "jets": _run_jets,
    "recurrence": _run_recurrence,
    "mrs": _run_mrs,
    "expand": _run_expand,
    "conditions": _run_conditions,
    "laguerre": _run_laguerre,
}


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration; emits artifacts plus a manifest."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    try:
        files = HANDLERS[cfg.command](cfg, cfg.out_dir)
    except NumericalError as exc:
        print(f"{cfg.command}: {exc}", file=sys.stderr)
        return 2
    payload = cfg.payload()
    fileio.write_json(cfg.out_dir / "config.json", payload)
    files = sorted(files + ["config.json"])
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    manifest = {
        "command": cfg.command,
        "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": cfg.seed,
        "files": files,
        "wall_time_s": time.perf_counter() - start,
    }
    fileio.write_json(cfg.out_dir / "manifest.json", manifest)
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print(f"subcommands: {', '.join(sorted(SCHEMAS))}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
