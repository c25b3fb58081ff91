"""Parameter sweeps and figure/table reproduction bundles.

Everything here produces rows of plain values; :mod:`fourier_extension.cli`
and :func:`reproduce` write them to CSV with :func:`fmt` so that identical
inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence

import numpy as np

from . import extension, frame, linalg, weights
from .model import (
    AUTO,
    ExtensionConfig,
    ExtensionError,
    ValidationError,
    WeightMode,
)
from .testfns import TestFunction, complex_exp, get_test_function

log = logging.getLogger(__name__)

METRICS = ("ERR0", "ERR1", "ERR2", "KEPT_RANK", "K0", "H1EXT")
VARIABLES = {"N": "n_modes", "T": "t_ext", "P": "p", "GAMMA": "gamma", "OMEGA": None}

# I1 -> I2 transition: first T whose error is at the rounding floor
T1_THRESHOLD = 1e-13
T1_WINDOW = 0.2
T1_PROBE = dict(n_modes=200, omega=20.0, p=2.0)


def fmt(value) -> str:
    """Deterministic CSV formatting: ints as-is, floats as shortest round-trip scientific."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return str(value)
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return np.format_float_scientific(x, unique=True, trim="-")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def _fmt_param(name: str, value) -> str:
    if isinstance(value, float) and math.isinf(value):
        return f"{name}inf"
    return f"{name}{value:g}" if isinstance(value, float) else f"{name}{value}"


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple
    base: ExtensionConfig
    function: str
    outputs: tuple = ("ERR0",)

    def __post_init__(self):
        var = str(self.variable).upper()
        object.__setattr__(self, "variable", var)
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "outputs", tuple(str(o).upper() for o in self.outputs))
        if var not in VARIABLES:
            raise ValidationError("VALIDATION", f"unknown sweep variable {self.variable!r}")
        if not self.values:
            raise ValidationError("VALIDATION", "sweep needs at least one value")
        bad = [o for o in self.outputs if o not in METRICS]
        if bad or not self.outputs:
            raise ValidationError("VALIDATION", f"unknown or missing outputs {bad}")
        if var == "OMEGA" and not self.function.lower().startswith("cexp"):
            raise ValidationError("VALIDATION", "OMEGA sweeps need a cexp function")
        if var != "OMEGA":
            get_test_function(self.function)
        for v in self.values:
            self.point(v)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SweepSpec":
        missing = {"variable", "values", "base", "function"} - set(data)
        if missing:
            raise ValidationError("VALIDATION", f"sweep spec missing keys {sorted(missing)}")
        base = data["base"]
        if not isinstance(base, ExtensionConfig):
            base = ExtensionConfig.from_dict(base)
        return cls(
            variable=data["variable"],
            values=data["values"],
            base=base,
            function=data["function"],
            outputs=data.get("outputs", ("ERR0",)),
        )

    def point(self, value):
        """Config and test function for one sweep value."""
        if self.variable == "OMEGA":
            return self.base, complex_exp(float(value))
        field = VARIABLES[self.variable]
        if field == "n_modes" and (isinstance(value, float) and value.is_integer()):
            value = int(value)
        return self.base.replace(**{field: value}), get_test_function(self.function)


def point_metrics(cfg: ExtensionConfig, fn: TestFunction, outputs: Sequence[str]) -> Dict[str, Any]:
    sol = extension.fit(cfg, fn)
    out = {}
    for name in outputs:
        if name == "KEPT_RANK":
            out[name] = sol.kept_rank
        elif name == "K0":
            out[name] = sol.k0_used
        elif name == "H1EXT":
            out[name] = extension.extension_region_h1(sol)
        else:
            order = int(name[-1])
            out[name] = extension.max_pointwise_error(sol, fn, derivative_order=order).max_abs_error
    return out


def _run_point(args):
    spec, value = args
    try:
        cfg, fn = spec.point(value)
        return "ok", point_metrics(cfg, fn, spec.outputs)
    except ExtensionError as exc:
        log.warning("sweep point %s=%s failed: %s", spec.variable, value, exc)
        return exc.code, {}


def run_sweep(spec: SweepSpec, jobs: int = 1) -> List[list]:
    """Rows ``[value, status, *metrics]`` in the order of ``spec.values``."""
    tasks = [(spec, v) for v in spec.values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point, tasks))
    else:
        results = [_run_point(t) for t in tasks]
    rows = []
    for value, (status, metrics) in zip(spec.values, results):
        rows.append([value, status] + [metrics.get(o) for o in spec.outputs])
    return rows


def sweep_header(spec: SweepSpec) -> List[str]:
    return [spec.variable, "status"] + [o.lower() for o in spec.outputs]


def t_grid(start: float, stop: float, step: float) -> List[float]:
    """``start, start+step, ...`` strictly below ``stop``, rounded to kill drift."""
    n = math.ceil((stop - start) / step - 1e-9)
    return [round(start + i * step, 10) for i in range(max(n, 0))]


def estimate_t1(
    gamma,
    n_modes: int = T1_PROBE["n_modes"],
    omega: float = T1_PROBE["omega"],
    p: float = T1_PROBE["p"],
    threshold: float = T1_THRESHOLD,
    window: float = T1_WINDOW,
    step: float = 0.02,
    start: float = 1.02,
    configs: list = None,
):
    """Onset of the region where the max error stays below ``threshold``.

    Scans T on a ``step`` grid and returns the first T from which every grid
    point over the following ``window`` is below ``threshold``. Isolated dips
    near T = 1 (the error curve is not monotone there) are thereby ignored.
    The scan stops below ``N/omega``, beyond which the probe frequency is no
    longer resolved. Returns ``(T1, status)``; ``T1`` is None with status
    ``NOT_FOUND`` when no run of that length exists.
    """
    fn = complex_exp(omega)
    base = ExtensionConfig(n_modes=n_modes, gamma=gamma, p=p, t_ext=2.0)
    run_start = None
    for t in t_grid(start, n_modes / omega, step):
        cfg = base.replace(t_ext=t)
        if configs is not None:
            configs.append(cfg)
        sol = extension.fit(cfg, fn)
        if extension.max_pointwise_error(sol, fn).max_abs_error < threshold:
            if run_start is None:
                run_start = t
            if t - run_start >= window - 1e-9:
                return run_start, "ok"
        else:
            run_start = None
    return None, "NOT_FOUND"


def t1_rows(gammas: Sequence, configs: list = None, **kwargs) -> List[list]:
    rows = []
    for g in gammas:
        try:
            t1, status = estimate_t1(g, configs=configs, **kwargs)
        except ExtensionError as exc:
            t1, status = None, exc.code
        rows.append([g, t1, status])
    return rows


# ---------------------------------------------------------------------------
# figure bundles

P_LIST = (0.0, 1.0, 2.0, 4.0, math.inf)
N_LIST = tuple(range(20, 301, 20))
T_LIST = (1.2, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0)
FIG5_P = (0.0, 1.0, 2.0, math.inf)
TEST_TAGS = ("f1", "f2", "f3", "f4", "f5", "f6")


class _Recorder:
    """Collects every config a bundle runs, for the manifest."""

    def __init__(self):
        self.configs: Dict[str, dict] = {}

    def add(self, cfg: ExtensionConfig):
        d = cfg.to_dict()
        self.configs.setdefault(json.dumps(d, sort_keys=True), d)

    def fit(self, cfg, fn):
        self.add(cfg)
        return extension.fit(cfg, fn)


def _err_or_status(rec: _Recorder, cfg: ExtensionConfig, fn, order: int = 0):
    try:
        sol = rec.fit(cfg, fn)
        return extension.max_pointwise_error(sol, fn, derivative_order=order).max_abs_error
    except ExtensionError as exc:
        rec.add(cfg)
        log.warning("%s failed: %s", cfg, exc)
        return exc.code


def _curve_table(rec, xs, curves, make):
    """One row per x; one column per curve. ``make(x, curve)`` -> (cfg, fn)."""
    rows = []
    for x in xs:
        row = [x]
        for c in curves:
            try:
                cfg, fn = make(x, c)
            except ExtensionError as exc:
                row.append(exc.code)
                continue
            row.append(_err_or_status(rec, cfg, fn))
        rows.append(row)
    return rows


def _fig1(rec, out):
    base = ExtensionConfig(n_modes=200, gamma=2, t_ext=2.0)
    files = []
    for panel, mode, k0 in (("a", WeightMode.ORIGINAL, AUTO), ("b", WeightMode.CORRECTED, 20)):
        cols = []
        for p in P_LIST:
            cfg = base.replace(weight_mode=mode, p=p, k0_policy=k0)
            rec.add(cfg)
            system = frame.build_system(cfg, weights.weights_for(cfg))
            cols.append(linalg.singular_value_profile(system.weighted_matrix))
        header = ["index"] + [_fmt_param("sigma_p", p) for p in P_LIST]
        rows = [[i + 1] + [c[i] for c in cols] for i in range(len(cols[0]))]
        files.append(write_csv(out / f"fig1{panel}.csv", header, rows))
    return files


def _error_vs_n(rec, out, fig, mode):
    base = ExtensionConfig(n_modes=20, gamma=2, weight_mode=mode)
    panels = {
        "a": ("omega", (5.0, 10.0, 20.0, 40.0), lambda n, w: (base.replace(n_modes=n, t_ext=4.0, p=4.0), complex_exp(w))),
        "b": ("p", P_LIST, lambda n, p: (base.replace(n_modes=n, t_ext=2.0, p=p), complex_exp(20.0))),
        "c": ("T", (1.5, 2.0, 3.0, 4.0), lambda n, t: (base.replace(n_modes=n, t_ext=t, p=4.0), complex_exp(20.0))),
    }
    files = []
    for panel, (name, curves, make) in panels.items():
        rows = _curve_table(rec, N_LIST, curves, make)
        header = ["N"] + [_fmt_param(f"err_{name}", c) for c in curves]
        files.append(write_csv(out / f"{fig}{panel}.csv", header, rows))
    return files


def _fig4(rec, out):
    base = ExtensionConfig(n_modes=200, gamma=2, p=2.0)
    panels = {
        "a": ("omega", (10.0, 20.0, 40.0), lambda t, w: (base.replace(t_ext=t), complex_exp(w))),
        "b": ("gamma", (1, 2, 3, 4, 8), lambda t, g: (base.replace(t_ext=t, gamma=g), complex_exp(20.0))),
        "c": ("p", P_LIST, lambda t, p: (base.replace(t_ext=t, p=p), complex_exp(20.0))),
        "d": ("N", (100, 200, 300), lambda t, n: (base.replace(t_ext=t, n_modes=n), complex_exp(20.0))),
    }
    files = []
    for panel, (name, curves, make) in panels.items():
        rows = _curve_table(rec, T_LIST, curves, make)
        header = ["T"] + [_fmt_param(f"err_{name}", c) for c in curves]
        files.append(write_csv(out / f"fig4{panel}.csv", header, rows))
    return files


def _fig5(rec, out):
    base = ExtensionConfig(n_modes=200, gamma=3, t_ext=2.0)
    x = extension.profile_points(base.t_ext)
    files = []
    for tag in TEST_TAGS:
        fn = get_test_function(tag)
        cols, header = [], ["x"]
        for p in FIG5_P:
            vals = extension.evaluate(rec.fit(base.replace(p=p), fn), x)
            cols += [vals.real, np.abs(vals)]
            header += [_fmt_param("re_p", p), _fmt_param("abs_p", p)]
        rows = [[xi] + [c[i] for c in cols] for i, xi in enumerate(x)]
        files.append(write_csv(out / f"fig5_{tag}.csv", header, rows))
    return files


def _error_vs_n_testfns(rec, out, fig, order):
    base = ExtensionConfig(n_modes=20, gamma=3, t_ext=2.0)
    files = []
    for tag in TEST_TAGS:
        fn = get_test_function(tag)
        rows = []
        for n in N_LIST:
            row = [n]
            for p in FIG5_P:
                cfg = base.replace(n_modes=n, p=p)
                row.append(_err_or_status(rec, cfg, fn, order))
            rows.append(row)
        header = ["N"] + [_fmt_param(f"err{order}_p", p) for p in FIG5_P]
        files.append(write_csv(out / f"{fig}_{tag}.csv", header, rows))
    return files


def _table1(rec, out):
    configs: list = []
    rows = t1_rows((1, 2, 3, 4, 8), configs=configs)
    for cfg in configs:
        rec.add(cfg)
    return [write_csv(out / "table1.csv", ["gamma", "T1", "status"], rows)]


FIGURES: Dict[str, Callable] = {
    "fig1": _fig1,
    "fig2": lambda rec, out: _error_vs_n(rec, out, "fig2", WeightMode.ORIGINAL),
    "fig3": lambda rec, out: _error_vs_n(rec, out, "fig3", WeightMode.CORRECTED),
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": lambda rec, out: _error_vs_n_testfns(rec, out, "fig6", 0),
    "fig7": lambda rec, out: _error_vs_n_testfns(rec, out, "fig7", 1),
    "fig8": lambda rec, out: _error_vs_n_testfns(rec, out, "fig8", 2),
    "table1": _table1,
}


def reproduce(figure: str, out_dir) -> List[Path]:
    """Write the CSV bundle for one figure or table plus ``manifest.json``."""
    key = figure.strip().lower()
    if key not in FIGURES:
        raise ValidationError("UNKNOWN_FIGURE", f"unknown figure {figure!r}; choose from {sorted(FIGURES)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rec = _Recorder()
    files = FIGURES[key](rec, out)
    manifest = {
        "figure": key,
        "files": [f.name for f in files],
        "configs": list(rec.configs.values()),
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return files + [path]
