"""Batch command-line front end.

Subcommands map one-to-one onto the library's study functions:

* ``potential`` -- induced potential of a charge inside a slab, by all
  three mutually verifying routes;
* ``eigen``     -- spectrum of a charge between two metal plates (``--q 0``
  gives the bare particle-in-a-box spectrum);
* ``schottky``  -- semiconductor/vacuum-gap/metal ground-state sweep;
* ``film``      -- noble-gas film sweeps with effective-permittivity readout;
* ``plates``    -- two-plate spectra across a gap sweep;
* ``levitate``  -- force budget and levitated mass across a gap sweep.

Sweeps use the grammar ``start:stop:count`` or ``start:stop:count:log``
(a bare number is a single point); layer lists use ``start:stop[:step]``.
A config file (ini-style ``key = value`` under a ``[command]`` section,
path from ``--config`` or the ``IMAGEWELL_CONFIG`` environment variable)
supplies defaults; command-line flags override it.  Output is CSV (RFC-4180
quoting, units in every numeric column header) or JSON (rows plus a
metadata object); reruns with the same config are byte-identical, so
wall-clock timing is reported on stderr only.  Exit status: 0 when no row
failed, 1 when any row carries a failure flag, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import electrostatics as el
from . import scenarios as sn
from .errors import ImagewellError

_REQUIRED = object()


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    start: float
    stop: float
    count: int
    log: bool = False

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.asarray([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def parse_sweep(text: str) -> SweepSpec:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return SweepSpec(v, v, 1)
        if len(parts) == 3:
            return SweepSpec(float(parts[0]), float(parts[1]), int(parts[2]))
        if len(parts) == 4 and parts[3] == "log":
            return SweepSpec(float(parts[0]), float(parts[1]), int(parts[2]), True)
    except ValueError:
        pass
    raise ValueError(f"bad sweep spec {text!r}; expected start:stop:count[:log]")


def parse_layers(text: str) -> list[int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) > 3:
            raise ValueError
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step <= 0 or stop < start:
            raise ValueError
        return list(range(start, stop + 1, step))
    except ValueError:
        pass
    raise ValueError(f"bad layer spec {text!r}; expected start:stop[:step] or a single integer")


def parse_eps(text: str) -> float:
    if text.strip().lower() in ("metal", "inf", "infinity"):
        return math.inf
    return float(text)


def _carrier(text: str) -> sn.Carrier:
    return sn.Carrier(text.strip().lower())


# name -> (converter, default or _REQUIRED, help)
_GLOBAL_SCHEMA = {
    "out": (str, None, "output path (default: stdout)"),
    "format": (str, "csv", "csv or json"),
}

_SCHEMAS: dict[str, dict] = {
    "potential": {
        "k1": (parse_eps, _REQUIRED, "left half-space permittivity (number or Metal)"),
        "k2": (parse_eps, _REQUIRED, "slab permittivity hosting the charge"),
        "k3": (parse_eps, _REQUIRED, "right half-space permittivity (number or Metal)"),
        "a": (float, _REQUIRED, "left interface position (nm)"),
        "b": (float, _REQUIRED, "right interface position (nm)"),
        "z0": (parse_sweep, _REQUIRED, "charge position sweep inside (a, b) (nm)"),
        "q": (float, 1.0, "charge in elementary units"),
        "tol": (float, 1.0e-10, "relative truncation tolerance"),
    },
    "eigen": {
        "gap": (float, _REQUIRED, "plate separation (nm)"),
        "q": (float, -1.0, "charge in elementary units (0 = bare box)"),
        "mass": (float, 1.0, "effective mass in electron masses"),
        "states": (int, 2, "number of states"),
        "points": (int, 4001, "grid points"),
    },
    "schottky": {
        "material": (str, _REQUIRED, "semiconductor registry name"),
        "carrier": (_carrier, sn.Carrier.ELECTRON, "electron or hole"),
        "gap": (parse_sweep, _REQUIRED, "vacuum gap sweep (nm), 0 allowed as the contact limit"),
        "states": (int, 1, "number of states"),
        "points": (int, 4001, "grid points"),
        "dmax": (float, None, "override domain truncation (nm)"),
    },
    "film": {
        "material": (str, _REQUIRED, "film registry name (needs a layer thickness)"),
        "layers": (parse_layers, _REQUIRED, "layer counts start:stop[:step]"),
        "states": (int, 1, "number of states"),
        "points": (int, 4001, "grid points"),
        "dmax": (float, None, "override domain truncation (nm)"),
    },
    "plates": {
        "gap": (parse_sweep, _REQUIRED, "plate separation sweep (nm)"),
        "states": (int, 2, "number of states"),
        "q": (float, -1.0, "charge in elementary units"),
        "mass": (float, 1.0, "effective mass in electron masses"),
        "points": (int, 4001, "grid points"),
    },
    "levitate": {
        "gap": (parse_sweep, _REQUIRED, "plate separation sweep (nm)"),
        "n": (int, _REQUIRED, "number of electrons N (no default by design)"),
        "area": (float, _REQUIRED, "plate area in m^2 (explicit by design)"),
        "hamaker": (float, sn.DEFAULT_HAMAKER_J,
                    "Hamaker constant in J (default is a placeholder, not a sourced value)"),
        "state": (int, 0, "state index the electrons occupy"),
        "q": (float, -1.0, "charge in elementary units"),
        "mass": (float, 1.0, "effective mass in electron masses"),
        "points": (int, 4001, "grid points"),
        "delta": (float, 1.0e-3, "relative step for force differentiation"),
    },
}


@dataclass
class RunConfig:
    command: str
    out: str | None
    fmt: str
    params: dict = field(default_factory=dict)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imagewell",
        description="Image-charge wells in layered dielectrics: potentials, spectra, forces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, schema in _SCHEMAS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", default=None, help="config file path")
        for name, (_conv, default, help_text) in {**schema, **_GLOBAL_SCHEMA}.items():
            shown = default.value if isinstance(default, sn.Carrier) else default
            extra = "" if default in (None, _REQUIRED) else f" [default: {shown}]"
            p.add_argument(f"--{name}", default=None, help=help_text + extra)
    return parser


def _read_config_section(path: str, command: str) -> dict[str, str]:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise UsageError(f"config file {path!r} not found or unreadable")
    if not cp.has_section(command):
        return {}
    return dict(cp.items(command))


def parse_args(argv=None) -> RunConfig:
    """Parse flags (and optional config-file defaults) into a validated
    RunConfig; a UsageError lists every violated constraint at once."""
    ns = build_parser().parse_args(argv)
    command = ns.command
    schema = {**_SCHEMAS[command], **_GLOBAL_SCHEMA}

    config_path = ns.config or os.environ.get("IMAGEWELL_CONFIG")
    file_values = _read_config_section(config_path, command) if config_path else {}
    unknown = sorted(set(file_values) - set(schema))
    problems = [f"config key {k!r} unknown for {command!r}" for k in unknown]

    values: dict = {}
    for name, (conv, default, _help) in schema.items():
        raw = getattr(ns, name)
        if raw is None:
            raw = file_values.get(name)
        if raw is None:
            if default is _REQUIRED:
                problems.append(f"--{name} is required")
                continue
            values[name] = default
            continue
        try:
            values[name] = conv(raw)
        except (ValueError, TypeError) as exc:
            problems.append(f"--{name}: {exc}")

    problems += _validate(command, values)
    if problems:
        raise UsageError("invalid invocation:\n  - " + "\n  - ".join(problems))
    cfg = RunConfig(command, values.pop("out"), values.pop("format"), values)
    return cfg


def _check_sweep(problems, name, spec):
    if spec is None:
        return
    if spec.count < 1:
        problems.append(f"--{name}: count must be >= 1")
    if spec.count > 1 and not spec.start < spec.stop:
        problems.append(f"--{name}: start must be < stop for count > 1")
    if spec.log and spec.start <= 0.0:
        problems.append(f"--{name}: log sweeps need start > 0")


def _validate(command: str, v: dict) -> list[str]:
    problems: list[str] = []

    def have(*names):
        return all(v.get(n) is not None for n in names)

    if v.get("format") not in ("csv", "json"):
        problems.append("--format: must be csv or json")
    if have("points") and v["points"] < 50:
        problems.append("--points: need at least 50 grid points")
    if have("states") and v["states"] < 1:
        problems.append("--states: must be >= 1")
    if have("mass") and not v["mass"] > 0.0:
        problems.append("--mass: must be > 0")
    if have("tol") and not 0.0 < v["tol"] < 1.0:
        problems.append("--tol: must be in (0, 1)")
    if v.get("dmax") is not None and not v["dmax"] > 0.0:
        problems.append("--dmax: must be > 0")

    if command == "potential":
        if have("a", "b") and not v["a"] < v["b"]:
            problems.append("--a must be < --b")
        if have("a", "b", "z0"):
            lo = v["a"] + el.MIN_OFFSET_FRAC * (v["b"] - v["a"])
            hi = v["b"] - el.MIN_OFFSET_FRAC * (v["b"] - v["a"])
            s = v["z0"]
            if not (lo <= s.start and max(s.start, s.stop) <= hi):
                problems.append(
                    f"--z0: sweep must stay inside ({lo:g}, {hi:g}) nm, away from the interfaces"
                )
        if have("k2") and v["k2"] == math.inf:
            problems.append("--k2: the slab hosting the charge cannot be a metal")
    elif command == "eigen":
        if have("gap") and not v["gap"] > 0.0:
            problems.append("--gap: must be > 0")
    elif command == "schottky":
        _check_sweep(problems, "gap", v.get("gap"))
        if v.get("gap") is not None and v["gap"].start < 0.0:
            problems.append("--gap: values must be >= 0")
        if have("material", "carrier"):
            try:
                mat = sn.get_material(v["material"])
                sn.carrier_mass(mat, v["carrier"])
            except ImagewellError as exc:
                problems.append(str(exc))
    elif command == "film":
        if have("material"):
            try:
                mat = sn.get_material(v["material"])
                if mat.layer_thickness_nm is None:
                    problems.append(f"--material: {mat.name} has no layer thickness")
            except ImagewellError as exc:
                problems.append(str(exc))
        if have("layers") and any(n < 0 for n in v["layers"]):
            problems.append("--layers: counts must be >= 0")
    elif command == "plates":
        _check_sweep(problems, "gap", v.get("gap"))
        if v.get("gap") is not None and v["gap"].start <= 0.0:
            problems.append("--gap: values must be > 0")
    elif command == "levitate":
        _check_sweep(problems, "gap", v.get("gap"))
        if v.get("gap") is not None and v["gap"].start <= 0.0:
            problems.append("--gap: values must be > 0")
        if have("n") and v["n"] < 0:
            problems.append("--n: must be >= 0")
        if have("area") and v["area"] < 0.0:
            problems.append("--area: must be >= 0 (0 switches Casimir off)")
        if have("hamaker") and v["hamaker"] < 0.0:
            problems.append("--hamaker: must be >= 0 (0 switches VDW off)")
        if have("state") and v["state"] < 0:
            problems.append("--state: must be >= 0")
        if have("delta") and not 0.0 < v["delta"] < 0.1:
            problems.append("--delta: must be in (0, 0.1)")
    return problems


# ---------------------------------------------------------------------------
# Run


def _nanrow(n):
    return [math.nan] * n


def _run_potential(p):
    stack = el.DielectricStack(p["k1"], p["k2"], p["k3"], p["a"], p["b"])
    header = ["z0(nm)", "v_series(V)", "v_images(V)", "v_quadrature(V)",
              "energy(eV)", "terms(count)"]
    rows, failed = [], []
    max_terms = 0
    for z0 in p["z0"].values():
        try:
            se = el.potential_slab_series(stack, float(z0), q=p["q"], tol=p["tol"])
            im = el.potential_slab_images(stack, float(z0), q=p["q"], tol=p["tol"])
            qd = el.potential_kernel_quadrature(stack, float(z0), q=p["q"])
            rows.append([float(z0), se.v, im.v, qd.v, se.energy_ev(p["q"]), se.terms_used])
            max_terms = max(max_terms, se.terms_used)
        except ImagewellError as exc:
            failed.append((len(rows), str(exc)))
            rows.append([float(z0)] + _nanrow(4) + [0])
    meta = {"tolerance": p["tol"], "max_series_terms": max_terms}
    return header, rows, failed, meta


def _run_eigen(p):
    header = ["state(index)", "energy(eV)", "nodes(count)", "parity", "kind"]
    spec = sn.two_plate_spectrum(p["gap"], p["states"], q=p["q"],
                                 m_eff=p["mass"], n_points=p["points"])
    rows = [
        [i, s.energy_ev, s.nodes, s.parity.value, s.kind.value]
        for i, s in enumerate(spec.states)
    ]
    meta = {"gap_nm": p["gap"], "u_max_ev": spec.u_max_ev, "n_points": p["points"]}
    return header, rows, [], meta


def _sweep_rows_to_table(sweep, n_states, extra_front=(), effs=None):
    header = list(extra_front) + ["gap(nm)"]
    header += [f"e{i}(eV)" for i in range(n_states)]
    header += ["bohr(nm)"]
    if effs is not None:
        header += ["eff_eps(1)"]
    header += [f"kind{i}" for i in range(n_states)]
    rows, failed = [], []
    for idx, r in enumerate(sweep):
        row = [r.layers] if extra_front else []
        row.append(r.gap_nm)
        row += [r.energies_ev[i] if i < len(r.energies_ev) else math.nan
                for i in range(n_states)]
        row.append(r.bohr_nm[0] if r.bohr_nm else math.nan)
        if effs is not None:
            row.append(effs[idx])
        kinds = [k.value for k in r.kinds]
        row += [kinds[i] if i < len(kinds) else "" for i in range(n_states)]
        rows.append(row)
        if r.failed:
            failed.append((idx, r.message))
    return header, rows, failed


def _run_schottky(p):
    mat = sn.get_material(p["material"])
    sweep = sn.schottky_gap_sweep(
        mat, p["carrier"], p["gap"].values(), n_states=p["states"],
        n_points=p["points"], d_max_nm=p["dmax"],
    )
    header, rows, failed = _sweep_rows_to_table(sweep, p["states"])
    meta = {"material": mat.name, "carrier": p["carrier"].value,
            "eps": mat.eps, "m_eff": sn.carrier_mass(mat, p["carrier"]),
            "n_points": p["points"]}
    return header, rows, failed, meta


def _run_film(p):
    mat = sn.get_material(p["material"])
    sweep = sn.noble_film_sweep(
        mat, p["layers"], n_states=p["states"], n_points=p["points"],
        d_max_nm=p["dmax"],
    )
    table = sn.effective_epsilon_curve()
    effs = []
    for r in sweep:
        if r.layers == 0:
            effs.append(math.inf)
            continue
        try:
            effs.append(sn.effective_epsilon(r.bohr_nm[0], table) if r.bohr_nm else math.nan)
        except ImagewellError:
            effs.append(math.nan)
    header, rows, failed = _sweep_rows_to_table(
        sweep, p["states"], extra_front=["layers(count)"], effs=effs
    )
    meta = {"material": mat.name, "eps": mat.eps,
            "layer_thickness_nm": mat.layer_thickness_nm, "n_points": p["points"]}
    return header, rows, failed, meta


def _run_plates(p):
    header = ["gap(nm)"] + [f"e{i}(eV)" for i in range(p["states"])]
    header += ["u_max(eV)"] + [f"kind{i}" for i in range(p["states"])]
    rows, failed = [], []
    for gap in p["gap"].values():
        try:
            spec = sn.two_plate_spectrum(float(gap), p["states"], q=p["q"],
                                         m_eff=p["mass"], n_points=p["points"])
            rows.append(
                [float(gap)] + [s.energy_ev for s in spec.states]
                + [spec.u_max_ev] + [s.kind.value for s in spec.states]
            )
        except ImagewellError as exc:
            failed.append((len(rows), str(exc)))
            rows.append([float(gap)] + _nanrow(p["states"] + 1) + [""] * p["states"])
    meta = {"n_points": p["points"], "m_eff": p["mass"], "q": p["q"]}
    return header, rows, failed, meta


def _run_levitate(p):
    header = ["gap(nm)", "mass(kg)", "f_total(N)", "f_plate_plate(N)",
              "f_binding(N)", "f_casimir(N)", "f_vdw(N)", "e_binding(eV)",
              "u_plate_plate(eV)", "repulsive", "stable"]
    curve = sn.levitation_curve(
        p["gap"].values(), p["n"], p["area"], p["hamaker"],
        state_index=p["state"], q=p["q"], m_eff=p["mass"],
        n_points=p["points"], delta_frac=p["delta"],
    )
    rows, failed = [], []
    for idx, r in enumerate(curve):
        b = r.breakdown
        rows.append([r.gap_nm, r.mass_kg, b.f_total_n, b.f_plate_plate_n,
                     b.f_binding_n, b.f_casimir_n, b.f_vdw_n, b.e_binding_ev,
                     b.u_plate_plate_ev, r.repulsive, r.stable])
        if r.failed:
            failed.append((idx, r.message))
    meta = {"n_electrons": p["n"], "area_m2": p["area"], "hamaker_j": p["hamaker"],
            "state_index": p["state"], "n_points": p["points"]}
    return header, rows, failed, meta


_RUNNERS = {
    "potential": _run_potential,
    "eigen": _run_eigen,
    "schottky": _run_schottky,
    "film": _run_film,
    "plates": _run_plates,
    "levitate": _run_levitate,
}


def _format_cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x + 0.0, ".12g")
    return str(x)


def _json_cell(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(format(x + 0.0, ".12g"))
    return x


def render(cfg: RunConfig, header, rows, failed, meta) -> str:
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(x) for x in row])
        return buf.getvalue()
    doc = {
        "command": cfg.command,
        "columns": header,
        "rows": [
            {name: _json_cell(x) for name, x in zip(header, row)} for row in rows
        ],
        "metadata": {
            **{k: _json_cell(v) for k, v in meta.items()},
            "failed_rows": [{"row": i, "message": m} for i, m in failed],
            "package": "imagewell",
            "version": __version__,
            "registry_version": sn.REGISTRY_VERSION,
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def run(cfg: RunConfig) -> int:
    """Execute a validated config; returns the process exit status."""
    t0 = time.perf_counter()
    header, rows, failed, meta = _RUNNERS[cfg.command](cfg.params)
    text = render(cfg, header, rows, failed, meta)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    elapsed = time.perf_counter() - t0
    where = cfg.out or "stdout"
    print(f"imagewell {cfg.command}: {len(rows)} rows -> {where} "
          f"({elapsed:.2f} s wall-clock)", file=sys.stderr)
    for idx, message in failed:
        print(f"imagewell {cfg.command}: row {idx} failed: {message}", file=sys.stderr)
    return 1 if failed else 0


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"imagewell: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except ImagewellError as exc:
        print(f"imagewell: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
