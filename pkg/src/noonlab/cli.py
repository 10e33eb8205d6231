"""Command-line front end.

Subcommands: fidelity, optimize-gamma, fringes, visibility, povm,
bs-matrix.  Output is CSV (``# schema=1`` comment, header row, 12
significant digits, LF endings) or a single JSON object with a
``schema_version`` field.  Exit codes: 0 success, 2 invalid arguments,
3 numerical failure, 4 I/O failure.
"""

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .analysis import fit_trig, poisson_weights
from .config import RunConfig, resolve_option
from .detection import (
    DetectorSpec,
    coincidence_scan,
    default_phase_grid,
    multiplex_povm,
    sample_clicks,
)
from .errors import NoonLabError, PatternError, TruncationWarning
from .fock import SourceSpec, default_cutoff
from .metrics import fidelity_sweep, optimal_gamma
from .optics import BeamsplitterSpec, bs_block

SCHEMA_VERSION = 1

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _g(x: float) -> str:
    return f"{float(x):.12g}"


def _jround(x: float) -> float:
    return float(_g(x))


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header: list[str], rows, comments: list[str] | None = None) -> str:
    lines = ["# schema=1"]
    lines.extend(f"# {c}" for c in (comments or []))
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_g(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _json(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the artifact to this path instead of stdout")
    p.add_argument("--config", help="flat key = value config file (flags take precedence)")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noonlab",
        description="Two-mode simulator of NOON-state generation by "
        "coherent/squeezed-vacuum interference",
    )
    parser.add_argument("--version", action="version", version=f"noonlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="NOON fidelities over a photon-number range")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--gamma", default=None, help="'opt' (per-N optimum) or a number")
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--phi-cs", type=float, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--convention", choices=("tanh", "r"), default=None)
    _add_common(p)

    p = sub.add_parser("optimize-gamma", help="pair-amplitude ratio maximizing fidelity")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--phi-cs", type=float, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--convention", choices=("tanh", "r"), default=None)
    _add_common(p)

    p = sub.add_parser("fringes", help="coincidence rate of a click pattern vs MZ phase")
    p.add_argument("--n1", type=int, default=None)
    p.add_argument("--n2", type=int, default=None)
    p.add_argument("--gamma", default=None, help="'opt' or a number")
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--modules", type=int, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--pulses", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--phi-cs", type=float, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("visibility", help="trigonometric fit of a fringes CSV")
    p.add_argument("--input", required=True, help="CSV produced by the fringes command")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--weights", choices=("poisson", "uniform"), default=None)
    _add_common(p)

    p = sub.add_parser("povm", help="click probabilities P(k | n) of a detector array")
    p.add_argument("--modules", type=int, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--n-max", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("bs-matrix", help="Fock beamsplitter block on a total-N subspace")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--t", type=float, default=None)
    _add_common(p)

    return parser


def _load_config(args) -> RunConfig | None:
    if getattr(args, "config", None) is None:
        return None
    return RunConfig.from_file(args.config)


def _gamma_value(raw, cfg, n_total: int, r: float, phi_cs: float, convention: str) -> float:
    raw = resolve_option(raw, cfg, "gamma", "opt", str)
    if isinstance(raw, str) and raw.strip().lower() == "opt":
        return optimal_gamma(n_total, r=r, phi_cs=phi_cs, convention=convention).gamma_star
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ValueError(f"--gamma must be 'opt' or a number, got {raw!r}") from None


def _cmd_fidelity(args) -> str:
    cfg = _load_config(args)
    n_min = resolve_option(args.n_min, cfg, "n-min", 2, int)
    n_max = resolve_option(args.n_max, cfg, "n-max", 5, int)
    r = resolve_option(args.r, cfg, "r", 0.1, float)
    phi_cs = resolve_option(args.phi_cs, cfg, "phi-cs", math.pi, float)
    cutoff = resolve_option(args.cutoff, cfg, "cutoff", None, int)
    convention = resolve_option(args.convention, cfg, "convention", "tanh", str)
    gamma_raw = resolve_option(args.gamma, cfg, "gamma", "opt", str)
    fmt = resolve_option(args.format, cfg, "format", "csv", str)
    if n_min < 2 or n_max < n_min:
        raise ValueError("need 2 <= n-min <= n-max")
    ns = range(n_min, n_max + 1)
    if isinstance(gamma_raw, str) and gamma_raw.strip().lower() == "opt":
        results = fidelity_sweep(ns, r, phi_cs, "optimal", cutoff=cutoff, convention=convention)
    else:
        results = fidelity_sweep(
            ns, r, phi_cs, "fixed", gamma=float(gamma_raw), cutoff=cutoff,
            convention=convention,
        )
    if fmt == "json":
        return _json(
            {
                "schema_version": SCHEMA_VERSION,
                "rows": [
                    {
                        "n": f.n,
                        "gamma": _jround(f.gamma),
                        "weight": _jround(f.weight),
                        "fidelity_fixed": _jround(f.fidelity_fixed),
                        "fidelity_phase_opt": _jround(f.fidelity_phase_opt),
                    }
                    for f in results
                ],
            }
        )
    return _csv(
        ["N", "gamma", "weight", "fidelity_fixed", "fidelity_phase_opt"],
        [
            (f.n, float(f.gamma), float(f.weight), float(f.fidelity_fixed),
             float(f.fidelity_phase_opt))
            for f in results
        ],
    )


def _cmd_optimize_gamma(args) -> str:
    cfg = _load_config(args)
    n = resolve_option(args.n, cfg, "n", None, int)
    if n is None:
        raise ValueError("--n is required")
    r = resolve_option(args.r, cfg, "r", 0.1, float)
    phi_cs = resolve_option(args.phi_cs, cfg, "phi-cs", math.pi, float)
    cutoff = resolve_option(args.cutoff, cfg, "cutoff", None, int)
    convention = resolve_option(args.convention, cfg, "convention", "tanh", str)
    opt = optimal_gamma(n, r=r, phi_cs=phi_cs, cutoff=cutoff, convention=convention)
    return _json(
        {
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "gamma_star": _jround(opt.gamma_star),
            "fidelity_star": _jround(opt.fidelity_star),
            "iterations": opt.iterations,
        }
    )


def _cmd_fringes(args) -> str:
    cfg = _load_config(args)
    n1 = resolve_option(args.n1, cfg, "n1", 1, int)
    n2 = resolve_option(args.n2, cfg, "n2", 1, int)
    r = resolve_option(args.r, cfg, "r", 0.1, float)
    eta = resolve_option(args.eta, cfg, "eta", 1.0, float)
    modules = resolve_option(args.modules, cfg, "modules", 4, int)
    points = resolve_option(args.points, cfg, "points", 120, int)
    pulses = resolve_option(args.pulses, cfg, "pulses", None, int)
    seed = resolve_option(args.seed, cfg, "seed", 0, int)
    phi_cs = resolve_option(args.phi_cs, cfg, "phi-cs", math.pi, float)
    fmt = resolve_option(args.format, cfg, "format", "csv", str)
    if n1 < 0 or n2 < 0 or n1 + n2 < 1:
        raise ValueError("pattern must have at least one click")
    n_total = n1 + n2
    gamma = _gamma_value(args.gamma, cfg, n_total, r, phi_cs, "tanh")
    alpha = math.sqrt(gamma * math.tanh(r))
    cutoff = resolve_option(args.cutoff, cfg, "cutoff", default_cutoff(n_total, alpha), int)
    source = SourceSpec(r=r, gamma=gamma, phi_cs=phi_cs, cutoff=cutoff)
    det = DetectorSpec(modules=modules, eta=eta)
    phases = default_phase_grid(points)
    curve = coincidence_scan(source, BeamsplitterSpec(), det, det, (n1, n2), phases)
    comments = [f"pattern={n1},{n2}", f"gamma={_g(gamma)}", f"r={_g(r)}",
                f"eta={_g(eta)}", f"modules={modules}"]
    header = ["phase_rad", "rate"]
    columns = [curve.phases, curve.rates]
    if pulses is not None:
        samples = sample_clicks(
            source, BeamsplitterSpec(), det, det, phases, pulses, seed
        )
        counts = samples.counts_for((n1, n2))
        sigma = np.sqrt(np.maximum(counts, 1)) / pulses
        comments.append(f"pulses={pulses}")
        comments.append(f"seed={seed}")
        header += ["sampled_count", "sigma"]
        columns += [counts, sigma]
    if fmt == "json":
        obj = {
            "schema_version": SCHEMA_VERSION,
            "pattern": [n1, n2],
            "gamma": _jround(gamma),
            "r": _jround(r),
            "eta": _jround(eta),
            "modules": modules,
            "phase_rad": [_jround(p) for p in curve.phases],
            "rate": [_jround(v) for v in curve.rates],
        }
        if pulses is not None:
            obj["pulses"] = pulses
            obj["seed"] = seed
            obj["sampled_count"] = [int(c) for c in counts]
            obj["sigma"] = [_jround(s) for s in sigma]
        return _json(obj)
    rows = []
    for i in range(len(curve.phases)):
        row = [float(columns[0][i]), float(columns[1][i])]
        if pulses is not None:
            row.append(int(columns[2][i]))
            row.append(float(columns[3][i]))
        rows.append(tuple(row))
    return _csv(header, rows, comments)


def _read_fringes_csv(path: str):
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    k, _, v = body.partition("=")
                    meta[k.strip()] = v.strip()
                continue
            if header is None:
                header = [h.strip() for h in line.split(",")]
                continue
            rows.append([float(v) for v in line.split(",")])
    if header is None or not rows:
        raise ValueError(f"{path}: no data rows")
    data = {name: np.array([row[i] for row in rows]) for i, name in enumerate(header)}
    return data, meta


def _cmd_visibility(args) -> str:
    cfg = _load_config(args)
    n = resolve_option(args.n, cfg, "n", None, int)
    weights_mode = resolve_option(args.weights, cfg, "weights", None, str)
    data, meta = _read_fringes_csv(args.input)
    if "phase_rad" not in data:
        raise ValueError("input is missing a phase_rad column")
    phases = data["phase_rad"]
    has_samples = "sampled_count" in data
    if weights_mode is None:
        weights_mode = "poisson" if has_samples else "uniform"
    if n is None:
        if "pattern" in meta:
            a, _, b = meta["pattern"].partition(",")
            n = int(a) + int(b)
        else:
            raise ValueError("--n is required when the input carries no pattern metadata")
    if weights_mode == "poisson":
        if not has_samples:
            raise ValueError("poisson weights require a sampled_count column")
        pulses = int(meta.get("pulses", "0"))
        if pulses <= 0:
            raise ValueError("poisson weights require pulses metadata in the input")
        counts = data["sampled_count"]
        rates = counts / pulses
        weights = poisson_weights(counts, pulses)
    else:
        rates = data["rate"]
        weights = None
    fit = fit_trig(phases, rates, weights, n)
    return _json(
        {
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "V": _jround(fit.visibility),
            "sigma_V": _jround(fit.sigma_visibility),
            "c0": _jround(fit.c0),
            "a": [_jround(x) for x in fit.a],
            "b": [_jround(x) for x in fit.b],
            "residual_rms": _jround(fit.residual_rms),
        }
    )


def _cmd_povm(args) -> str:
    cfg = _load_config(args)
    modules = resolve_option(args.modules, cfg, "modules", 4, int)
    eta = resolve_option(args.eta, cfg, "eta", 1.0, float)
    n_max = resolve_option(args.n_max, cfg, "n-max", 20, int)
    fmt = resolve_option(args.format, cfg, "format", "csv", str)
    P = multiplex_povm(DetectorSpec(modules=modules, eta=eta), n_max)
    if fmt == "json":
        return _json(
            {
                "schema_version": SCHEMA_VERSION,
                "modules": modules,
                "eta": _jround(eta),
                "p_clicks_given_photons": [
                    [_jround(P[k, n]) for k in range(modules + 1)]
                    for n in range(n_max + 1)
                ],
            }
        )
    header = ["n"] + [f"k{k}" for k in range(modules + 1)]
    rows = [
        tuple([n] + [float(P[k, n]) for k in range(modules + 1)])
        for n in range(n_max + 1)
    ]
    return _csv(header, rows, [f"modules={modules}", f"eta={_g(eta)}"])


def _cmd_bs_matrix(args) -> str:
    cfg = _load_config(args)
    n = resolve_option(args.n, cfg, "n", None, int)
    if n is None:
        raise ValueError("--n is required")
    t = resolve_option(args.t, cfg, "t", 0.5, float)
    fmt = resolve_option(args.format, cfg, "format", "csv", str)
    block = bs_block(n, BeamsplitterSpec(transmissivity=t)).matrix
    if fmt == "json":
        return _json(
            {
                "schema_version": SCHEMA_VERSION,
                "n": n,
                "t": _jround(t),
                "real": [[_jround(v) for v in row] for row in block],
                "imag": [[0.0] * (n + 1) for _ in range(n + 1)],
            }
        )
    header = ["k"]
    for col in range(n + 1):
        header += [f"re_n{col}", f"im_n{col}"]
    rows = []
    for k in range(n + 1):
        row: list = [k]
        for col in range(n + 1):
            row += [float(block[k, col]), 0.0]
        rows.append(tuple(row))
    return _csv(header, rows, [f"n={n}", f"t={_g(t)}"])


_COMMANDS = {
    "fidelity": _cmd_fidelity,
    "optimize-gamma": _cmd_optimize_gamma,
    "fringes": _cmd_fringes,
    "visibility": _cmd_visibility,
    "povm": _cmd_povm,
    "bs-matrix": _cmd_bs_matrix,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        # deficient cutoffs must surface as exit 3, not as a warning
        with warnings.catch_warnings():
            warnings.simplefilter("error", TruncationWarning)
            text = _COMMANDS[args.command](args)
        _emit(text, getattr(args, "out", None))
    except (ValueError, PatternError) as exc:
        print(f"noonlab: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoonLabError, TruncationWarning) as exc:
        print(f"noonlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"noonlab: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
