"""Command-line interface.

Every command writes exactly one report to stdout (json by default) and
diagnostics to stderr. Exit codes::

    0  success
    2  the two <f> routes disagree / usage error
    3  degenerate metric
    4  finite-difference step crosses a pole
    5  degenerate beta grid
    6  levels file could not be parsed
    7  too few levels
    8  singular design matrix
    9  invalid quantum numbers
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import __version__
from .coupling import (
    CoupledLevel,
    PRINTED_TABLE1_TEXT,
    allowed_J,
    f_expectation_6j,
    f_expectation_msum,
    table1,
    table1_discrepancies,
)
from .errors import (
    DegenerateGrid,
    DegenerateMetric,
    InsufficientLevels,
    InvalidCoupling,
    IrrationalResult,
    LevelsParseError,
    SingularDesign,
    StepTooLarge,
)
from .exact import HalfInt
from .geometry import (
    BACKEND,
    DEFAULT_BETAS,
    EXPANSION_STEP,
    FlatMetric,
    InertiaTriple,
    SphereMetric,
    expansion_scaling,
    fit_expansion,
    printed_r2_coefficients,
    scalar_curvature,
)
from .io import RunConfig, dumps, read_levels, write_levels
from .spectra import (
    PRINTED_R2,
    LevelModel,
    Multiplet,
    fit_multiplet,
    interval_table,
    lande_report,
    model_coefficients,
    perturbed_energy,
)
from .wigner import clebsch_gordan, gaunt, wigner_3j, wigner_6j

EXIT_CODES = (
    (IrrationalResult, 2),
    (DegenerateMetric, 3),
    (StepTooLarge, 4),
    (DegenerateGrid, 5),
    (LevelsParseError, 6),
    (InsufficientLevels, 7),
    (SingularDesign, 8),
    (InvalidCoupling, 9),
)


class RouteMismatch(Exception):
    pass


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _half(text):
    try:
        return HalfInt.of(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer or half-integer")


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if r.get(h) is None else str(r.get(h)) for h in header])
    return buf.getvalue()


def _text(report, indent=0):
    pad = "  " * indent
    out = []
    for k, v in report.items():
        if isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out.append(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.append(f"{pad}{k}:")
            for item in v:
                out.append(pad + "  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            out.append(f"{pad}{k}: {v}")
    return "\n".join(out)


def _emit(report, fmt, table=None):
    """``table`` is ``(rows, header)`` for csv output of tabular reports."""
    if fmt == "json":
        return dumps(report)
    if fmt == "csv":
        if table is None:
            flat = [{"key": k, "value": v} for k, v in report.items()
                    if not isinstance(v, (dict, list))]
            return _csv(flat, ["key", "value"])
        rows, header = table
        from .io import to_jsonable
        return _csv(to_jsonable(rows), header)
    from .io import to_jsonable
    return _text(to_jsonable(report)) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_table1(args, cfg):
    rows = table1()
    out_rows = []
    mismatch = False
    for r in rows:
        lv = r.level
        msum = f_expectation_msum(lv)
        if msum != r.f_expect:
            mismatch = True
        key = (int(lv.S), int(lv.L), int(lv.J))
        printed = PRINTED_TABLE1_TEXT.get(key, (None, None))
        out_rows.append({
            "S": key[0], "L": key[1], "J": key[2],
            "f": r.f_expect, "f_msum": msum, "interval": r.interval_coeff,
            "printed_f": printed[0], "printed_interval": printed[1],
        })
    report = {
        "command": "table1",
        "rows": out_rows,
        "discrepancies": table1_discrepancies(rows),
        "routes_agree": not mismatch,
    }
    text = _emit(report, args.format, (out_rows, ["S", "L", "J", "f", "f_msum", "interval",
                                                  "printed_f", "printed_interval"]))
    if mismatch:
        sys.stdout.write(text)
        raise RouteMismatch("6j and m-sum routes disagree")
    return text


def cmd_fmat(args, cfg):
    level = CoupledLevel(args.L, args.S, args.J)
    f6 = f_expectation_6j(level)
    report = {"command": "fmat", "L": level.L, "S": level.S, "J": level.J, "f_6j": f6}
    if level.L.is_integer and level.S.is_integer:
        fm = f_expectation_msum(level)
        report["f_msum"] = fm
        if fm != f6:
            sys.stdout.write(_emit(report, args.format))
            raise RouteMismatch("6j and m-sum routes disagree")
    report["f_float"] = float(f6)
    return _emit(report, args.format)


def cmd_wigner(args, cfg):
    funcs = {"cg": clebsch_gordan, "3j": wigner_3j, "6j": wigner_6j}
    if args.symbol == "gaunt":
        vals = [int(HalfInt.of(v)) for v in args.values]
        value = gaunt(*vals)
        report = {"command": "wigner", "symbol": "gaunt", "args": args.values,
                  "coefficient": str(value.coeff), "inv_sqrt_4pi_power": value.power,
                  "value": float(value)}
    else:
        value = funcs[args.symbol](*args.values)
        report = {"command": "wigner", "symbol": args.symbol, "args": args.values,
                  "exact": str(value), "squared": value.square() * value.sign,
                  "value": float(value)}
    return _emit(report, args.format)


def _parse_point(text):
    vals = _floats(text)
    if len(vals) not in (2, 4):
        raise argparse.ArgumentTypeError("--point needs 2 or 4 comma-separated angles")
    return vals


def cmd_curvature(args, cfg):
    step = args.step if args.step is not None else cfg.step_h
    if args.flat:
        source = FlatMetric(len(args.point))
        kind = "flat"
    elif args.sphere is not None:
        source = SphereMetric(args.sphere)
        kind = "sphere"
    else:
        if len(args.point) != 4:
            raise SystemExit("the coupled metric needs four angles")
        source = InertiaTriple(args.il, args.is_, args.ils_inv)
        kind = "coupled"
    rep = scalar_curvature(source, args.point, step, det_tol=cfg.det_tol)
    report = {"command": "curvature", "metric": kind, "point": args.point,
              "scalar_R": rep.scalar_R, "est_error": rep.est_error, "step_h": rep.step_h,
              "backend": BACKEND}
    if kind == "coupled":
        report["inertia"] = {"I_L": args.il, "I_S": args.is_, "inv_I_LS": args.ils_inv}
        report["R0_printed"] = printed_r2_coefficients(source)[0]
    if args.full:
        report["christoffel"] = rep.christoffel
        report["ricci"] = rep.ricci
    return _emit(report, args.format)


def cmd_expand(args, cfg):
    step = args.step if args.step is not None else EXPANSION_STEP
    betas = args.beta_grid if args.beta_grid else list(DEFAULT_BETAS)
    fits = fit_expansion(args.il, args.is_, args.ils_inv_list, betas, step)
    rows = []
    for f in fits:
        printed_R0, printed_kappa = printed_r2_coefficients(f.inertia)
        rows.append({
            "inv_I_LS": f.inv_I_LS, "R0": f.R0, "R0_leading": printed_R0,
            "kappa": f.kappa, "residual_rms": f.residual_rms,
            "kappa_over_inv": f.kappa / f.inv_I_LS if f.inv_I_LS else None,
            "kappa_over_inv_sq": f.kappa / f.inv_I_LS ** 2 if f.inv_I_LS else None,
            "kappa_printed": printed_kappa,
        })
    report = {"command": "expand", "I_L": args.il, "I_S": args.is_,
              "beta_grid": [float(b) for b in betas], "step_h": step, "fits": rows}
    if any(f.inv_I_LS for f in fits):
        sc = expansion_scaling(fits)
        report["scaling"] = {
            "kappa1_measured": sc.kappa1,
            "kappa1_printed": sc.printed_kappa1,
            "kappa1_spread": sc.kappa1_spread,
            "kappa2_measured": sc.kappa2,
            "kappa2_spread": sc.kappa2_spread,
            "linear_law_holds": sc.kappa1_spread <= 0.01,
            "quadratic_law_holds": sc.kappa2_spread <= 0.01,
        }
    header = list(rows[0]) if rows else []
    return _emit(report, args.format, (rows, header))


def _model(args):
    inertia = InertiaTriple(args.il, args.is_, args.ils_inv)
    if args.kappa == "paper":
        return LevelModel(inertia, args.c, PRINTED_R2, args.hbar_sq)
    if args.c == 0:
        # the curvature coefficients cannot matter; skip the geometry run
        return LevelModel(inertia, 0.0, PRINTED_R2, args.hbar_sq), "not needed (c = 0)"
    return LevelModel.with_fitted_kappa(inertia, args.c, args.hbar_sq)


def cmd_predict(args, cfg):
    model = _model(args)
    kappa_note = None
    if isinstance(model, tuple):
        model, kappa_note = model
    R0, kappa = model.curvature_coefficients
    levels = []
    energies = {}
    for J in allowed_J(args.L, args.S):
        lv = CoupledLevel(args.L, args.S, J)
        E = perturbed_energy(lv, model)
        energies[J] = E
        levels.append({"J": J, "energy": E, "f": f_expectation_6j(lv)})
    intervals = [{"J": r.J, "interval": r.interval, "deviation": r.deviation,
                  "factor": r.factor} for r in interval_table(args.L, args.S, model)]
    report = {
        "command": "predict",
        "L": HalfInt.of(args.L), "S": HalfInt.of(args.S),
        "inertia": {"I_L": args.il, "I_S": args.is_, "inv_I_LS": args.ils_inv},
        "c": args.c, "hbar_sq": args.hbar_sq,
        "kappa_source": kappa_note or args.kappa,
        "R0": R0, "kappa": kappa,
        "coefficients": model_coefficients(args.L, args.S, model),
        "levels": levels,
        "intervals": intervals,
    }
    if args.levels_csv:
        rng = np.random.default_rng(args.seed)
        noisy = {}
        for J, E in energies.items():
            if args.noise:
                E = E + rng.normal(0.0, args.noise)
            noisy[J] = (E, args.noise)
        m = Multiplet(args.L, args.S, noisy, args.label)
        write_levels([m], args.levels_csv, unit=args.unit)
        report["levels_csv"] = args.levels_csv
    return _emit(report, args.format, (intervals, ["J", "interval", "deviation", "factor"]))


def cmd_fit(args, cfg):
    multiplets, unit = read_levels(args.input)
    if args.select is not None:
        multiplets = {k: v for k, v in multiplets.items() if k[0] == args.select}
        if not multiplets:
            raise InsufficientLevels(f"no multiplet labelled {args.select!r}")
    confidence = args.confidence if args.confidence is not None else cfg.confidence
    results = []
    for (label, L, S), m in multiplets.items():
        res = fit_multiplet(m, confidence, kappa=args.kappa)
        entry = {
            "label": label, "L": L, "S": S, "n_levels": len(m.levels),
            "E0": res.E0, "A": res.A, "C": res.C,
            "covariance": res.covariance, "dof": res.dof,
            "confidence": res.confidence,
            "C_interval": list(res.c_kappa_bound),
            "C_interval_excludes_zero": not (res.c_kappa_bound[0] <= 0 <= res.c_kappa_bound[1]),
            "residuals": res.residuals,
        }
        if res.c_estimate is not None:
            entry["c_given_kappa"] = {"kappa": args.kappa, "c": res.c_estimate[0],
                                      "interval": list(res.c_estimate[1:])}
        if len(m.levels) >= 3:
            try:
                lr = lande_report(m, cfg.lande_threshold)
                entry["lande"] = {"ratios": lr.ratios, "quality": lr.quality,
                                  "threshold": lr.threshold, "flagged": lr.flagged}
            except InsufficientLevels as exc:
                entry["lande"] = {"skipped": str(exc)}
        if res.notes:
            entry["notes"] = res.notes
        results.append(entry)
    report = {"command": "fit", "input": str(args.input), "unit": unit, "multiplets": results}
    header = ["label", "L", "S", "n_levels", "E0", "A", "C", "dof"]
    return _emit(report, args.format, (results, header))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="RunConfig file of key=value lines")

    p = argparse.ArgumentParser(prog="lande-rterm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.add_argument("--config", default=None)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("table1", parents=[common], help="exact <f> table with both routes")

    s = sub.add_parser("fmat", parents=[common], help="single <(L S) J|f|(L S) J>")
    s.add_argument("--L", type=_half, required=True)
    s.add_argument("--S", type=_half, required=True)
    s.add_argument("--J", type=_half, required=True)

    s = sub.add_parser("wigner", parents=[common], help="raw CG / 3j / 6j / Gaunt values")
    s.add_argument("symbol", choices=("cg", "3j", "6j", "gaunt"))
    s.add_argument("values", nargs=6, type=_half, metavar="J",
                   help="cg: j1 m1 j2 m2 J M; 3j: j1 j2 j3 m1 m2 m3; "
                        "6j: j1 j2 j3 j4 j5 j6; gaunt: l1 m1 l2 m2 l3 m3")

    def inertia_flags(s, list_inv=False):
        s.add_argument("--il", type=float, default=1.0)
        s.add_argument("--is", dest="is_", type=float, default=1.0)
        if list_inv:
            s.add_argument("--ils-inv-list", type=_floats, required=True)
        else:
            s.add_argument("--ils-inv", type=float, default=0.0)

    s = sub.add_parser("curvature", parents=[common], help="scalar curvature at one point")
    inertia_flags(s)
    s.add_argument("--point", type=_parse_point, required=True,
                   help="theta,phi,theta',phi' (two angles with --sphere)")
    s.add_argument("--step", type=float, default=None)
    s.add_argument("--flat", action="store_true", help="identity metric (debug control)")
    s.add_argument("--sphere", type=float, default=None, metavar="I",
                   help="single sphere of inertia I instead of the coupled metric")
    s.add_argument("--full", action="store_true", help="include Christoffel and Ricci arrays")

    s = sub.add_parser("expand", parents=[common], help="fit R(beta) = R0 + kappa (f - 1)")
    inertia_flags(s, list_inv=True)
    s.add_argument("--beta-grid", type=_floats, default=None)
    s.add_argument("--step", type=float, default=None)

    s = sub.add_parser("predict", parents=[common], help="levels and intervals for given c")
    inertia_flags(s)
    s.add_argument("--c", type=float, default=0.0)
    s.add_argument("--L", type=_half, required=True)
    s.add_argument("--S", type=_half, required=True)
    s.add_argument("--kappa", choices=("fit", "paper"), default="fit")
    s.add_argument("--hbar-sq", type=float, default=1.0)
    s.add_argument("--levels-csv", default=None, help="also write the levels as CSV")
    s.add_argument("--noise", type=float, default=0.0, help="Gaussian sigma added to the CSV")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--label", default="predicted")
    s.add_argument("--unit", default=None)

    s = sub.add_parser("fit", parents=[common], help="fit measured multiplets")
    s.add_argument("--input", required=True)
    s.add_argument("--select", default=None, help="only the multiplet with this label")
    s.add_argument("--confidence", type=float, default=None)
    s.add_argument("--kappa", type=float, default=None,
                   help="assumed kappa (hbar^2 = 1) to translate C into c")
    return p


COMMANDS = {
    "table1": cmd_table1,
    "fmat": cmd_fmat,
    "wigner": cmd_wigner,
    "curvature": cmd_curvature,
    "expand": cmd_expand,
    "predict": cmd_predict,
    "fit": cmd_fit,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    except (OSError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=stderr)
        return 2
    if args.format is None:
        args.format = cfg.output_format
    real_stdout = sys.stdout
    sys.stdout = stdout
    try:
        text = COMMANDS[args.command](args, cfg)
        stdout.write(text)
        return 0
    except RouteMismatch as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except tuple(e for e, _ in EXIT_CODES) as exc:
        for etype, code in EXIT_CODES:
            if isinstance(exc, etype):
                print(f"error: {type(exc).__name__}: {exc}", file=stderr)
                return code
        raise
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return 6 if args.command == "fit" else 1
    finally:
        sys.stdout = real_stdout


if __name__ == "__main__":
    sys.exit(main())
