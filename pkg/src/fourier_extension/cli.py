"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import extension, frame, harness, linalg, weights
from .model import AUTO, ExtensionConfig, ExtensionError, ValidationError, WeightMode
from .testfns import get_test_function

log = logging.getLogger("fourier_extension")

GRID_TOL = 1e-12


def load_config(path) -> ExtensionConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError("VALIDATION", f"{path}: invalid JSON ({exc})") from exc
    return ExtensionConfig.from_dict(data)


def read_data_file(path, cfg: ExtensionConfig) -> np.ndarray:
    """Complex samples from a ``t,re,im`` CSV laid out on the construction grid."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["t", "re", "im"]:
            raise ValidationError("VALIDATION", f"{path}: header must be t,re,im")
        try:
            rows = [(float(r["t"]), float(r["re"]), float(r["im"])) for r in reader]
        except (TypeError, ValueError) as exc:
            raise ValidationError("VALIDATION", f"{path}: non-numeric entry ({exc})") from exc
    nodes = frame.make_grid(cfg.m).nodes
    t = np.array([r[0] for r in rows])
    if t.shape != nodes.shape or np.max(np.abs(t - nodes)) > GRID_TOL:
        raise ValidationError(
            "GRID_MISMATCH",
            f"{path}: {len(rows)} nodes do not match the {nodes.size}-point grid l/{cfg.m}",
        )
    return np.array([r[1] + 1j * r[2] for r in rows])


def cmd_fit(config: str, out: str, fn: Optional[str] = None, data: Optional[str] = None) -> List[Path]:
    if (fn is None) == (data is None):
        raise ValidationError("VALIDATION", "give exactly one of --fn or --data")
    cfg = load_config(config)
    if fn is not None:
        target = get_test_function(fn)
        sol = extension.fit(cfg, target)
        err = extension.max_pointwise_error(sol, target).max_abs_error
        err_grid = "dense"
    else:
        values = read_data_file(data, cfg)
        sol = extension.fit(cfg, extension.sample(cfg, values, tag="CUSTOM"))
        nodes = frame.make_grid(cfg.m).nodes
        err = float(np.max(np.abs(extension.evaluate(sol, nodes) - values)))
        err_grid = "construction"

    prefix = Path(out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    ks = np.arange(-cfg.n_modes, cfg.n_modes + 1)
    files = [
        harness.write_csv(
            f"{prefix}.coeffs.csv",
            ["k", "re", "im", "weight"],
            ([int(k), c.real, c.imag, w] for k, c, w in zip(ks, sol.coeffs, sol.weights)),
        )
    ]
    summary = {
        "function": fn if fn is not None else "CUSTOM",
        "kept_rank": sol.kept_rank,
        "K0": sol.k0_used,
        "max_abs_error": err,
        "error_grid": err_grid,
        "degenerate": sol.degenerate,
        "config": cfg.to_dict(),
    }
    path = Path(f"{prefix}.solution.json")
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    files.append(path)
    x = extension.profile_points(cfg.t_ext)
    vals = extension.evaluate(sol, x)
    files.append(
        harness.write_csv(f"{prefix}.profile.csv", ["x", "re", "im"], zip(x, vals.real, vals.imag))
    )
    return files


def cmd_sweep(spec: str, out: str, jobs: int = 1) -> Path:
    try:
        data = json.loads(Path(spec).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError("VALIDATION", f"{spec}: invalid JSON ({exc})") from exc
    sweep = harness.SweepSpec.from_dict(data)
    rows = harness.run_sweep(sweep, jobs=jobs)
    return harness.write_csv(out, harness.sweep_header(sweep), rows)


def cmd_singvals(config: str, out: str) -> Path:
    cfg = load_config(config)
    k0 = None
    if cfg.weight_mode is WeightMode.CORRECTED and cfg.k0_policy == AUTO:
        # no data to bootstrap from; the spectrum is shown for the pilot weights
        k0 = 0
    system = frame.build_system(cfg, weights.weights_for(cfg, k0))
    sigma = linalg.singular_value_profile(system.weighted_matrix)
    return harness.write_csv(out, ["index", "sigma"], ([i + 1, s] for i, s in enumerate(sigma)))


def cmd_t1(gammas: Sequence, out: str, threshold: float = harness.T1_THRESHOLD) -> Path:
    rows = harness.t1_rows(gammas, threshold=threshold)
    return harness.write_csv(out, ["gamma", "T1", "status"], rows)


def cmd_reproduce(figure: str, out: str) -> List[Path]:
    return harness.reproduce(figure, out)


def _gamma_list(text: str):
    from fractions import Fraction

    try:
        vals = [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad gamma list {text!r}") from exc
    return [int(v) if v.denominator == 1 else v for v in vals]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourier-extension",
        description="Weighted TSVD Fourier extension of uniformly sampled data on [-1, 1].",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit one function or data file")
    p.add_argument("--config", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fn", help="test function tag: f1..f6 or cexp:OMEGA")
    src.add_argument("--data", help="CSV with columns t,re,im on the construction grid")
    p.add_argument("--out", required=True, help="output prefix")

    p = sub.add_parser("sweep", help="run a parameter sweep")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("singvals", help="singular values of the weighted frame matrix")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("t1", help="estimate the onset T1 of the accurate region per gamma")
    p.add_argument("--gammas", type=_gamma_list, default=[1, 2, 3, 4, 8])
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=harness.T1_THRESHOLD)

    p = sub.add_parser("reproduce", help="write the CSV bundle for a figure or table")
    p.add_argument("--figure", required=True, choices=sorted(harness.FIGURES))
    p.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "fit":
            outputs = cmd_fit(args.config, args.out, fn=args.fn, data=args.data)
        elif args.command == "sweep":
            outputs = [cmd_sweep(args.spec, args.out, jobs=args.jobs)]
        elif args.command == "singvals":
            outputs = [cmd_singvals(args.config, args.out)]
        elif args.command == "t1":
            outputs = [cmd_t1(args.gammas, args.out, threshold=args.threshold)]
        else:
            outputs = cmd_reproduce(args.figure, args.out)
    except ExtensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    for path in outputs:
        log.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
