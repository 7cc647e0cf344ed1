"""Command-line interface: ``hrpot {simulate,estimate,fit-br,study}``.

Exit codes: 0 success, 2 usage or input-format error, 3 I/O failure,
4 numerical failure (including missing values in the data).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, blockmax, hr_model, increments, spectral
from .core import SampleMatrix
from .errors import HRPotError
from .fit import fit_br
from .margins import (
    select_exceedances_component,
    select_exceedances_sum,
    select_exceedances_union,
    to_scale,
)
from .simulate import BrSampleConfig, br_sample
from .study import ParametricConfig, StudyConfig, run_bivariate_study, run_fit_and_resimulate, run_parametric_study
from .variogram import LocationSet, VariogramSpec, ecf_curve, pairwise_distances

CONFIG_SCHEMA = 1
MANIFEST_KIND = "hrpot-study-manifest"

BIVARIATE_COLUMNS = ["lambda_sq_true", "n", "q", "estimator", "rep", "lambda_sq_hat",
                     "theta_hat", "theta_true", "N", "note"]
PARAMETRIC_COLUMNS = ["estimator", "rep", "alpha_hat", "s_hat"]


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


# file formats --------------------------------------------------------------


def read_locations(path) -> LocationSet:
    """``label,x[,y]`` rows; a non-numeric first row is taken as a header."""
    text = Path(path).read_text(encoding="utf-8")
    labels, pts = [], []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) not in (2, 3):
            raise UsageError(f"{path}: line {lineno}: expected label,x[,y]")
        try:
            coords = [float(c) for c in row[1:]]
        except ValueError:
            if lineno == 1:
                continue
            raise UsageError(f"{path}: line {lineno}: non-numeric coordinate") from None
        if pts and len(coords) != len(pts[0]):
            raise UsageError(f"{path}: line {lineno}: inconsistent coordinate dimension")
        labels.append(row[0].strip())
        pts.append(coords)
    if not pts:
        raise UsageError(f"{path}: no locations found")
    try:
        return LocationSet(np.array(pts), labels)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def read_data(path, scale: str = "raw") -> SampleMatrix:
    """Observations in rows, components in columns, header row required."""
    text = Path(path).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise UsageError(f"{path}: empty data file")
    header = [h.strip() for h in rows[0]]
    vals = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise UsageError(f"{path}: line {lineno}: expected {len(header)} fields")
        try:
            parsed = [float(c) if c.strip() else np.nan for c in row]
        except ValueError:
            raise UsageError(f"{path}: line {lineno}: non-numeric value") from None
        vals.append(parsed)
    arr = np.array(vals, dtype=float).reshape(-1, len(header))
    if np.isnan(arr).any():
        r, c = map(int, np.argwhere(np.isnan(arr))[0])
        raise DataError(f"{path}: missing value at line {r + 2}, column {header[c]!r}")
    try:
        return SampleMatrix(arr, scale, header)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            vals = [r.get(h, "") for h in header] if isinstance(r, dict) else r
            w.writerow([fmt(v) for v in vals])


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def parse_variogram(text: str) -> VariogramSpec:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"--variogram: cannot parse {text!r}") from None
    try:
        if len(parts) == 2:
            return VariogramSpec(parts[0], parts[1])
        if len(parts) == 4:
            return VariogramSpec(*parts, anisotropy=True)
    except ValueError as exc:
        raise UsageError(f"--variogram: {exc}") from None
    raise UsageError("--variogram expects alpha,s or alpha,s,beta,c")


# commands --------------------------------------------------------------------


def cmd_simulate(args) -> int:
    spec = parse_variogram(args.variogram)
    locs = read_locations(args.locs)
    if spec.anisotropy and locs.dim != 2:
        raise UsageError("anisotropic variogram requires 2-D locations")
    if args.n < 1:
        raise UsageError("--n must be positive")
    sample = br_sample(BrSampleConfig(locs, spec, args.n, args.seed))
    sample = to_scale(sample, args.scale)
    write_csv(args.out, sample.labels, sample.values.tolist())
    return 0


BIVARIATE = {"mle1", "mle2", "var", "mean", "spec", "mado", "block-ml"}


def _parse_pair(text: str, k1: int):
    try:
        i, j = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--pair: cannot parse {text!r}") from None
    if not (0 <= i < k1 and 0 <= j < k1 and i != j):
        raise UsageError(f"--pair {text} out of range for {k1} columns")
    return i, j


def cmd_estimate(args) -> int:
    data = read_data(args.data, args.scale)
    notes = []
    name = args.estimator
    if name in BIVARIATE and data.k_plus_1 != 2:
        i, j = _parse_pair(args.pair, data.k_plus_1)
        data = data.columns([i, j])
        notes.append(f"bivariate estimator applied to columns {i},{j}")
    if name not in ("mado", "block-ml"):
        if not 0.0 < args.q < 1.0:
            raise UsageError("--q must lie in (0, 1)")
    pivot = args.pivot
    if pivot is None:
        pivot = 0
        if name in ("mle1", "var", "mean", "mv-var", "mv-mle"):
            notes.append("pivot not given; defaulted to 0")
    if name in BIVARIATE and data.k_plus_1 == 2 and pivot not in (0, 1):
        raise UsageError("--pivot must be 0 or 1 for bivariate data")
    if name in BIVARIATE and pivot == 1:
        data = data.columns([1, 0])
        pivot = 0

    def expo():
        if data.scale not in ("exponential", "raw"):
            notes.append(f"converted {data.scale} input to exponential margins")
        elif data.scale == "raw":
            notes.append("raw input standardised to exponential margins by ranks")
        return to_scale(data, "exponential")

    def frechet():
        if data.scale != "frechet":
            notes.append(f"converted {data.scale} input to Fréchet margins")
        return to_scale(data, "frechet")

    mc = args.min_exceedances
    if name in ("mle1", "var", "mean", "mv-var", "mv-mle"):
        exc = select_exceedances_component(expo(), pivot, args.q, min_count=mc)
        fn = {"mle1": increments.est_biv_mle1, "var": increments.est_biv_var,
              "mean": increments.est_biv_mean, "mv-var": increments.est_mv_var,
              "mv-mle": increments.est_mv_mle}[name]
        report = fn(exc)
    elif name == "mle2":
        report = increments.est_biv_mle2(select_exceedances_union(expo(), args.q, min_count=mc))
    elif name == "spec":
        report = spectral.est_spec_biv(select_exceedances_sum(frechet(), args.q, min_count=mc))
    elif name == "spec-mv":
        start = increments.est_mv_var(select_exceedances_component(expo(), 0, args.q, min_count=mc)).estimate
        notes.append("started from the increment variance estimate (pivot 0)")
        report = spectral.est_spec_mv(select_exceedances_sum(frechet(), args.q, min_count=mc), start)
    else:
        if args.block_size < 1:
            raise UsageError("--block-size must be positive")
        maxima = blockmax.block_maxima(data, args.block_size)
        fn = blockmax.est_madogram if name == "mado" else blockmax.est_hr_blockml
        report = fn(maxima)
        report.diagnostics["block_size"] = args.block_size
    report.notes = notes + report.notes
    out = report.to_dict()
    if name in ("mle1", "var", "mean", "mv-var", "mv-mle"):
        out["pivot"] = pivot
    if not isinstance(report.estimate, np.ndarray):
        out["estimates"]["theta"] = hr_model.extremal_coefficient(report.estimate)
    write_json(args.out, out)
    return 0


def cmd_fit_br(args) -> int:
    data = read_data(args.data, args.scale)
    locs = read_locations(args.locs)
    anis = args.anisotropy == "on"
    if anis and locs.dim != 2:
        raise UsageError("--anisotropy on requires 2-D locations")
    if data.k_plus_1 != len(locs):
        raise UsageError(f"data has {data.k_plus_1} columns but {len(locs)} locations were given")
    if not 0.0 < args.q < 1.0:
        raise UsageError("--q must lie in (0, 1)")
    if args.resim < 0:
        raise UsageError("--resim must be nonnegative")
    distances = np.linspace(0.0, float(pairwise_distances(locs.points).max()), 50)
    if args.resim > 0:
        res = run_fit_and_resimulate(data, locs, [args.method], args.q, anisotropy=anis,
                                     resim=args.resim, seed=args.seed, distances=distances)[args.method]
        fit = res["fit"]
    else:
        fit = fit_br(data, locs, args.method, args.q, anisotropy=anis)
        res = None
    out = fit.to_dict()
    out["method"] = args.method
    out["anisotropy"] = anis
    out["ecf"] = {"distances": distances.tolist(),
                  "theta": ecf_curve(VariogramSpec(fit.model.alpha, fit.model.s), distances).tolist(),
                  "note": "distance measured in the space where the fitted model is isotropic"}
    if res is not None:
        out["sd"] = res["sd"]
        out["resim"] = {"count": args.resim, "seed": args.seed, "refits": res["refits"]}
    write_json(args.out, out)
    return 0


REQUIRED_BIVARIATE = ("lambda_grid", "n_grid", "repetitions")
REQUIRED_PARAMETRIC = ("repetitions",)


def _require(section: dict, keys, where: str):
    for key in keys:
        if key not in section:
            raise UsageError(f"config: missing key '{where}{key}'")


def resolve_study_config(raw: dict) -> dict:
    """Validate a study config and fill defaults; the result is echoed in the manifest."""
    if raw.get("kind") == MANIFEST_KIND:
        raw = raw.get("config", {})
    _require(raw, ("schema", "seed"), "")
    if raw["schema"] != CONFIG_SCHEMA:
        raise UsageError(f"config: unsupported schema {raw['schema']!r}")
    if "bivariate" not in raw and "parametric" not in raw:
        raise UsageError("config: missing key 'bivariate' (or 'parametric')")
    seed = int(raw["seed"])
    out = {"schema": CONFIG_SCHEMA, "seed": seed}
    try:
        if "bivariate" in raw:
            b = dict(raw["bivariate"])
            _require(b, REQUIRED_BIVARIATE, "bivariate.")
            b.pop("seed", None)
            out["bivariate"] = StudyConfig(seed=seed, **b).to_dict()
        if "parametric" in raw:
            p = dict(raw["parametric"])
            _require(p, REQUIRED_PARAMETRIC, "parametric.")
            p.pop("seed", None)
            out["parametric"] = ParametricConfig(seed=seed, **p).to_dict()
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"config: {exc}") from None
    return out


def cmd_study(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}: invalid JSON ({exc})") from None
    cfg = resolve_study_config(raw)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    if "bivariate" in cfg:
        rows = run_bivariate_study(StudyConfig(**cfg["bivariate"]))
        write_csv(out_dir / "bivariate_study.csv", BIVARIATE_COLUMNS, rows)
        files.append("bivariate_study.csv")
    if "parametric" in cfg:
        rows = run_parametric_study(ParametricConfig(**cfg["parametric"]))
        write_csv(out_dir / "parametric_study.csv", PARAMETRIC_COLUMNS, rows)
        files.append("parametric_study.csv")
    write_json(out_dir / "manifest.json", {
        "kind": MANIFEST_KIND,
        "version": __version__,
        "seed": cfg["seed"],
        "config": cfg,
        "files": files,
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hrpot", description="Peaks-over-threshold inference for Hüsler-Reiss models")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="simulate a Brown-Resnick process at given locations")
    s.add_argument("--variogram", required=True, help="alpha,s or alpha,s,beta,c")
    s.add_argument("--locs", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scale", choices=["gumbel", "exponential", "frechet"], default="gumbel")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", help="estimate HR dependence parameters")
    e.add_argument("--data", required=True)
    e.add_argument("--estimator", required=True,
                   choices=["mle1", "mle2", "var", "mean", "mv-var", "mv-mle", "spec", "spec-mv", "mado", "block-ml"])
    e.add_argument("--q", type=float, default=0.95)
    e.add_argument("--pivot", type=int, default=None)
    e.add_argument("--pair", default="0,1", help="columns for bivariate estimators")
    e.add_argument("--block-size", type=int, default=150)
    e.add_argument("--scale", choices=["raw", "gumbel", "exponential", "frechet"], default="raw",
                   help="marginal scale of the input data")
    e.add_argument("--min-exceedances", type=int, default=10)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_estimate)

    f = sub.add_parser("fit-br", help="fit a Brown-Resnick variogram model")
    f.add_argument("--data", required=True)
    f.add_argument("--locs", required=True)
    f.add_argument("--method", required=True, choices=["proj-ls", "spec-ml", "spec-cl"])
    f.add_argument("--q", type=float, default=0.975)
    f.add_argument("--anisotropy", choices=["on", "off"], default="off")
    f.add_argument("--resim", type=int, default=0)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--scale", choices=["raw", "gumbel", "exponential", "frechet"], default="raw")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_fit_br)

    st = sub.add_parser("study", help="run a simulation study from a JSON config")
    st.add_argument("--config", required=True)
    st.add_argument("--out-dir", required=True)
    st.set_defaults(func=cmd_study)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hrpot: error: {exc}", file=sys.stderr)
        return 2
    except (HRPotError, DataError) as exc:
        print(f"hrpot: numerical error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"hrpot: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
