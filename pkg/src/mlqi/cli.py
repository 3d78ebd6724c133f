"""Command-line harness: ``mlqi <command> [options]``.

Every command builds an :class:`~mlqi.io.OutputRecord` and renders it as
CSV (default) or JSON. Exit status is 0 on success, 2 on a usage or
precondition error and 1 on an internal failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import analysis
from .io import OutputRecord, series_from_csv, series_from_json
from .kernel import bound_constants, periodized_sum_E, theta3_product, theta3_series
from .multilevel import RunConfig, decay_ratios, multilevel_sampled, multilevel_spectral
from .spectral import DEFAULT_SPEC, EvalSpec, eval_series
from .targets import Target, expcos, resolve_target

__all__ = [
    "BOUNDS_MATRIX",
    "cmd_bound_eval",
    "cmd_bounds",
    "cmd_coeffs",
    "cmd_single",
    "cmd_table1",
    "cmd_theta",
    "main",
]

MAX_LEVELS = {"spectral": 24, "sampled": 12}
TABLE1_LEVELS = 10
# (m, ell) pairs scanned by ``bounds``
BOUNDS_MATRIX = ((1, 2), (1, 3), (3, 3), (0, 2), (5, 4), (3, 4))
GAUSSIAN_NOME = math.exp(-0.5)


class UsageError(ValueError):
    """Raised for invalid parameter combinations; maps to exit status 2."""


def _warnings_from(reports, label=""):
    out = []
    prefix = f"{label}: " if label else ""
    for r in reports:
        for flag in r.flags:
            out.append(f"{prefix}p={r.p} {flag}")
    return out


def _sup_column(target, ell0, spec):
    reports = multilevel_spectral(target, RunConfig(ell0=ell0, levels=TABLE1_LEVELS, spec=spec))
    return [r.sup_error for r in reports], reports


def cmd_table1(
    spec: EvalSpec = DEFAULT_SPEC, l0_c1: int = 1, l0_c9: int = 0, l0_f: int = 1
) -> OutputRecord:
    """Sup errors for ``c_1``, ``c_9`` and ``exp(cos 2 pi x)`` plus ``m_p``, p = 1..10.

    Each column has its own start level; the defaults are the ones under
    which the published table is reproduced.
    """
    c1, rep1 = _sup_column(resolve_target("c1").series, l0_c1, spec)
    c9, rep9 = _sup_column(resolve_target("c9").series, l0_c9, spec)
    fx, repf = _sup_column(expcos().series, l0_f, spec)
    mp = analysis.mp_sequence(TABLE1_LEVELS, "table-consistent")
    rows = [
        {"p": p, "c1": c1[p - 1], "c9": c9[p - 1], "mp": mp[p - 1], "expcos": fx[p - 1]}
        for p in range(1, TABLE1_LEVELS + 1)
    ]
    warnings = _warnings_from(rep1, "c1") + _warnings_from(rep9, "c9") + _warnings_from(repf, "expcos")
    params = {"l0_c1": l0_c1, "l0_c9": l0_c9, "l0_expcos": l0_f, **_spec_params(spec)}
    return OutputRecord("table1", params, rows, warnings)


def cmd_single(
    target: Target,
    ell0: int,
    levels: int,
    mode: str = "spectral",
    spec: EvalSpec = DEFAULT_SPEC,
    stop_below: float | None = None,
) -> OutputRecord:
    """Per-level errors for one target."""
    if mode not in MAX_LEVELS:
        raise UsageError(f"mode must be one of {sorted(MAX_LEVELS)}, got {mode!r}")
    if not 1 <= levels <= MAX_LEVELS[mode]:
        raise UsageError(f"{mode} mode requires 1 <= levels <= {MAX_LEVELS[mode]}, got {levels}")
    if ell0 < 0:
        raise UsageError(f"requires l0 >= 0, got {ell0}")
    cfg = RunConfig(ell0=ell0, levels=levels, mode=mode, spec=spec, stop_below=stop_below)
    if mode == "spectral":
        reports = multilevel_spectral(target.series, cfg)
    else:
        reports = multilevel_sampled(target.func, cfg)
    ratios = [None] + (decay_ratios(reports) if len(reports) > 1 else [])
    rows = [
        {
            "p": r.p,
            "spacing": r.spacing,
            "sup_error": r.sup_error,
            "wiener_error": r.wiener_error,
            "ratio": ratio,
            "flags": ";".join(r.flags),
        }
        for r, ratio in zip(reports, ratios)
    ]
    params = {"target": target.name, "l0": ell0, "levels": levels, "mode": mode, **_spec_params(spec)}
    return OutputRecord("single", params, rows, _warnings_from(reports))


def cmd_coeffs(m: int, ell: int, levels: int, spec: EvalSpec = DEFAULT_SPEC) -> OutputRecord:
    """Truncation coefficients per level with norm, budget and cross-check gap."""
    if not 1 <= levels <= analysis.MAX_TRUNCATION_LEVEL:
        raise UsageError(f"requires 1 <= levels <= {analysis.MAX_TRUNCATION_LEVEL}, got {levels}")
    states = analysis.truncation_history(m, ell, levels)
    gaps = analysis.truncation_discrepancies(m, ell, levels, spec)
    rows = []
    for state, gap in zip(states[1:], gaps):
        norm = analysis.truncation_norm(state)
        for j in range(state.alpha.size):
            rows.append(
                {
                    "p": state.p,
                    "j": j,
                    "alpha_bar_j": float(state.alpha_bar[j]),
                    "alpha_j": float(state.alpha[j]),
                    "truncation_norm": norm,
                    "remainder_budget": state.remainder_budget,
                    "discrepancy": gap,
                }
            )
    return OutputRecord("coeffs", {"m": m, "ell": ell, "levels": levels}, rows, [])


def cmd_bounds(pmax: int) -> OutputRecord:
    """Constants followed by lemma-scan results over :data:`BOUNDS_MATRIX`."""
    if not 3 <= pmax <= analysis.MAX_TRUNCATION_LEVEL:
        raise UsageError(f"requires 3 <= pmax <= {analysis.MAX_TRUNCATION_LEVEL}, got {pmax}")
    k = bound_constants()
    rows = [
        {"kind": "constant", "name": name, "value": getattr(k, name)}
        for name in ("a", "A", "epsilon", "mu_a", "mu_b", "mu_c", "b")
    ]
    rows.append({"kind": "constant", "name": "recursion_closes", "value": int(k.recursion_closes())})
    total = 0
    for m, ell in BOUNDS_MATRIX:
        for rep in analysis.scan_lemma_bounds(m, ell, pmax):
            total += len(rep.violations)
            rows.append(
                {
                    "kind": "scan",
                    "name": rep.lemma_id,
                    "m": m,
                    "ell": ell,
                    "checked": rep.checked,
                    "violations": len(rep.violations),
                }
            )
    rows.append({"kind": "total", "name": "violations", "violations": total})
    warnings = [f"{total} bound violations"] if total else []
    return OutputRecord("bounds", {"pmax": pmax, "matrix": [list(x) for x in BOUNDS_MATRIX]}, rows, warnings)


def cmd_theta(z: float, q: float) -> OutputRecord:
    """Series and product values of ``theta3(z, q)``; adds ``E(z/pi)`` for the Gaussian nome."""
    if not (math.isfinite(q) and abs(q) < 1.0):
        raise UsageError(f"requires |q| < 1, got q={q!r}")
    if not math.isfinite(z):
        raise UsageError(f"requires finite z, got z={z!r}")
    series = theta3_series(z, q)
    product = theta3_product(z, q)
    row = {"z": z, "q": q, "series": series, "product": product, "abs_diff": abs(series - product)}
    if abs(q - GAUSSIAN_NOME) <= 1e-15:
        row["E"] = periodized_sum_E(z / math.pi)
    return OutputRecord("theta", {"z": z, "q": q}, [row], [])


def cmd_bound_eval(s: float, t: float, p: int, big_b: float = 10.0, p_max: int | None = None) -> OutputRecord:
    """Bound components for ``p`` (or each ``p .. p_max``) at unit Sobolev norm."""
    last = p if p_max is None else p_max
    if last < p:
        raise UsageError(f"requires p <= p_max, got p={p}, p_max={last}")
    rows = []
    for pp in range(p, last + 1):
        terms = analysis.theorem_bound_terms(s, t, pp, 1.0, big_b)
        rows.append({"p": pp, **terms})
    warnings = []
    totals = [r["total"] for r in rows]
    if any(b > a for a, b in zip(totals, totals[1:])):
        warnings.append("bound total increases with p")
    return OutputRecord("bound", {"s": s, "t": t, "p": p, "p_max": last, "big_b": big_b}, rows, warnings)


def _spec_params(spec: EvalSpec) -> dict:
    return {
        "window_R": spec.window_R,
        "eta": spec.eta,
        "max_freq": spec.max_freq,
        "eval_points": spec.eval_points,
    }


def _load_target_file(path: str) -> Target:
    text = Path(path).read_text()
    series = series_from_json(text) if text.lstrip().startswith("{") else series_from_csv(text)
    return Target(Path(path).name, series, lambda x: eval_series(series, x))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--window", type=float, default=DEFAULT_SPEC.window_R, help="window radius R")
    common.add_argument("--eta", type=float, default=DEFAULT_SPEC.eta, help="weight cutoff")
    common.add_argument("--grid", type=int, default=DEFAULT_SPEC.eval_points, help="sup-norm grid points")
    common.add_argument("--max-freq", type=int, default=DEFAULT_SPEC.max_freq)
    common.add_argument("--big-b", type=float, default=10.0, help="constant B in the bound")

    parser = argparse.ArgumentParser(prog="mlqi", description="Multilevel Gaussian quasi-interpolation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", parents=[common], help="reproduce the c_1 / c_9 / exp(cos) table")
    p.add_argument("--l0", type=int, help="start level for every column")
    p.add_argument("--l0-c1", type=int, default=1)
    p.add_argument("--l0-c9", type=int, default=0)
    p.add_argument("--l0-f", type=int, default=1)

    p = sub.add_parser("single", parents=[common], help="errors per level for one target")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--m", type=int, help="pure cosine frequency")
    src.add_argument("--target", help="named target: c<m> or expcos")
    src.add_argument("--target-file", help="cosine series file (CSV or JSON)")
    p.add_argument("--l0", type=int, default=0)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--mode", choices=sorted(MAX_LEVELS), default="spectral")
    p.add_argument("--stop-below", type=float)

    p = sub.add_parser("coeffs", parents=[common], help="truncation coefficient tables")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--levels", type=int, required=True)

    p = sub.add_parser("bounds", parents=[common], help="scan the coefficient inequalities")
    p.add_argument("--pmax", type=int, required=True)

    p = sub.add_parser("theta", parents=[common], help="evaluate theta3 two ways")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--q", type=float, required=True)

    p = sub.add_parser("bound", parents=[common], help="evaluate the error bound components")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--p-max", type=int, help="sweep p .. P_MAX")
    return parser


def _dispatch(args) -> OutputRecord:
    spec = EvalSpec(window_R=args.window, eta=args.eta, max_freq=args.max_freq, eval_points=args.grid)
    if args.command == "table1":
        if args.l0 is not None:
            args.l0_c1 = args.l0_c9 = args.l0_f = args.l0
        return cmd_table1(spec, args.l0_c1, args.l0_c9, args.l0_f)
    if args.command == "single":
        if args.m is not None:
            if args.m < 0:
                raise UsageError(f"requires m >= 0, got {args.m}")
            target = resolve_target(f"c{args.m}")
        elif args.target is not None:
            target = resolve_target(args.target)
        else:
            target = _load_target_file(args.target_file)
        return cmd_single(target, args.l0, args.levels, args.mode, spec, args.stop_below)
    if args.command == "coeffs":
        return cmd_coeffs(args.m, args.ell, args.levels, spec)
    if args.command == "bounds":
        return cmd_bounds(args.pmax)
    if args.command == "theta":
        return cmd_theta(args.z, args.q)
    return cmd_bound_eval(args.s, args.t, args.p, args.big_b, args.p_max)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on malformed arguments
    try:
        record = _dispatch(args)
        text = record.render(args.format)
    except (ValueError, OSError) as exc:  # precondition failures, bad files
        print(f"mlqi {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure
        print(f"mlqi {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
