"""Command-line front end.

Subcommands: compose | transmit | threshold | estimate-mu | sweep | montecarlo.
Each accepts ``--format {table,csv,json}`` and ``--output PATH`` (default
stdout).  Exit codes: 0 success, 2 argument/validation, 3 numeric/domain,
4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import analysis, epr, oracle
from .channel import ErrorDensities, PauliProbs, at_length, decay_factors, iterate
from .errors import DomainError, NumericError, ValidationError

MEASUREMENT_HEADER = ("qber", "total_length_km")
SWEEP_HEADER = ("mu1", "mu2", "mu3", "length_km", "concurrence", "fidelity")

# Artifact defaults for the demo sweep (not measured values).
DEFAULT_SWEEP_MUS = (0.008, 0.016)


def _g6(x: float) -> str:
    return f"{x:.6g}"


def _g17(x: float) -> str:
    return f"{x:.17g}"


def _parse_float_list(text: str, n: int, what: str) -> list[float]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != n:
        raise ValidationError(f"{what} needs {n} comma-separated values, got {len(parts)}")
    try:
        return [float(s) for s in parts]
    except ValueError:
        raise ValidationError(f"{what} has a non-numeric entry: {text!r}") from None


def _parse_probs(text: str, what: str = "--p") -> PauliProbs:
    return PauliProbs(*_parse_float_list(text, 4, what))


def _parse_mu(text: str) -> ErrorDensities:
    return ErrorDensities(*_parse_float_list(text, 3, "--mu"))


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_g17(v) if isinstance(v, float) else str(v) for v in row) for row in rows)
    return "\n".join(lines)


def _render(args, command, inputs, results, table_lines, csv_header, csv_rows) -> str:
    if args.format == "json":
        return json.dumps({"command": command, "inputs": inputs, "results": results}, indent=2)
    if args.format == "csv":
        return _csv_text(csv_header, csv_rows)
    return "\n".join(table_lines)


def _write_output(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _mu_dict(mu: ErrorDensities) -> dict:
    return {"mu1": mu.mu1, "mu2": mu.mu2, "mu3": mu.mu3}


def _weights_dict(state: epr.BellDiagonal) -> dict:
    return {"a": state.a, "b": state.b, "c": state.c, "d": state.d}


# ---------------------------------------------------------------- compose


def cmd_compose(args) -> str:
    if args.p is not None and (args.mu is not None or args.length is not None):
        raise ValidationError("--p cannot be combined with --mu/--length")
    if args.p is not None:
        probs = _parse_probs(args.p)
        inputs = {"p": probs.as_tuple()}
    elif args.mu is not None:
        if args.length is None:
            raise ValidationError("--mu requires --length")
        mu = _parse_mu(args.mu)
        probs = at_length(mu, args.length)
        inputs = {"mu": _mu_dict(mu), "length_km": args.length}
    else:
        raise ValidationError("provide either --p or --mu with --length")
    if args.iterate is not None:
        probs = iterate(probs, args.iterate)
        inputs["iterate"] = args.iterate
    lam = decay_factors(probs)
    results = {
        "probs": {"p0": probs.p0, "p1": probs.p1, "p2": probs.p2, "p3": probs.p3},
        "decay_factors": {
            "lambda1": lam.lambda1,
            "lambda2": lam.lambda2,
            "lambda3": lam.lambda3,
        },
    }
    table = [
        f"p0: {_g6(probs.p0)}",
        f"p1: {_g6(probs.p1)}",
        f"p2: {_g6(probs.p2)}",
        f"p3: {_g6(probs.p3)}",
        f"lambda1: {_g6(lam.lambda1)}",
        f"lambda2: {_g6(lam.lambda2)}",
        f"lambda3: {_g6(lam.lambda3)}",
    ]
    header = ("p0", "p1", "p2", "p3", "lambda1", "lambda2", "lambda3")
    row = [probs.p0, probs.p1, probs.p2, probs.p3, lam.lambda1, lam.lambda2, lam.lambda3]
    return _render(args, "compose", inputs, results, table, header, [row])


# ---------------------------------------------------------------- transmit


def cmd_transmit(args) -> str:
    explicit = args.r is not None or args.s is not None
    parametric = args.mu is not None or args.l1 is not None or args.l2 is not None
    if explicit and parametric:
        raise ValidationError("--r/--s cannot be combined with --mu/--l1/--l2")
    if explicit:
        if args.r is None or args.s is None:
            raise ValidationError("explicit channels need both --r and --s")
        r = _parse_probs(args.r, "--r")
        s = _parse_probs(args.s, "--s")
        state = epr.transmit(r, s)
        inputs = {"r": r.as_tuple(), "s": s.as_tuple()}
    else:
        if args.mu is None or args.l1 is None or args.l2 is None:
            raise ValidationError("provide --mu with --l1 and --l2 (or --r and --s)")
        mu = _parse_mu(args.mu)
        geom = epr.LinkGeometry(args.l1, args.l2)
        r = at_length(mu, geom.l1_km)
        s = at_length(mu, geom.l2_km)
        state = epr.transmit_at_length(mu, geom)
        inputs = {"mu": _mu_dict(mu), "l1_km": geom.l1_km, "l2_km": geom.l2_km}
    conc = epr.concurrence(state)
    results = {
        "weights": _weights_dict(state),
        "fidelity_psi_plus": epr.fidelity_psi_plus(state),
        "concurrence": conc,
        "dominant_bell_state": epr.dominant_bell_state(state),
    }
    table = [
        f"a (psi+): {_g6(state.a)}",
        f"b (psi-): {_g6(state.b)}",
        f"c (phi+): {_g6(state.c)}",
        f"d (phi-): {_g6(state.d)}",
        f"fidelity_psi_plus: {_g6(state.a)}",
        f"concurrence: {_g6(conc)}",
        f"dominant_bell_state: {epr.dominant_bell_state(state)}",
    ]
    if args.verify_oracle:
        rho = oracle.apply_two_sided(r, s, oracle.bell_state("psi+"))
        projected, residual = oracle.bell_diagonal_project(rho)
        deviation = max(
            abs(x - y) for x, y in zip(projected.as_tuple(), state.as_tuple())
        )
        results["oracle"] = {"max_weight_deviation": deviation, "bell_residual": residual}
        table.append(f"oracle max weight deviation: {deviation:.3e}")
        table.append(f"oracle Bell-basis residual: {residual:.3e}")
    header = ("a", "b", "c", "d", "fidelity", "concurrence")
    row = [state.a, state.b, state.c, state.d, state.a, conc]
    return _render(args, "transmit", inputs, results, table, header, [row])


# ---------------------------------------------------------------- threshold


def _closed_threshold(mu: ErrorDensities):
    """Closed-form threshold when the density pattern admits one, else None."""
    values = mu.as_tuple()
    positive = [v for v in values if v > 0.0]
    if len(positive) < 2:
        return analysis.ThresholdResult(None)
    if len(positive) == 3 and values[0] == values[1] == values[2]:
        return analysis.threshold_depolarizing(values[0])
    if len(positive) == 2 and positive[0] == positive[1]:
        return analysis.threshold_double_flip(positive[0])
    return None


def cmd_threshold(args) -> str:
    mu = _parse_mu(args.mu)
    method = args.method
    if method in ("auto", "closed"):
        result = _closed_threshold(mu)
        if result is None:
            if method == "closed":
                raise DomainError(
                    "no closed-form threshold for this density pattern; use --method bisect"
                )
            method = "bisect"
        else:
            method = "closed"
    if method == "bisect":
        result = analysis.threshold_generic(mu)
    inputs = {"mu": _mu_dict(mu), "method": args.method}
    results = {"kind": result.kind, "length_km": result.length_km, "method": method}
    if result.is_finite:
        table = [f"threshold: {_g6(result.length_km)} km ({method})"]
    else:
        table = ["threshold: never vanishes"]
    row = [result.kind, result.length_km if result.is_finite else ""]
    return _render(args, "threshold", inputs, results, table, ("kind", "length_km"), [row])


# ---------------------------------------------------------------- estimate-mu


def _read_measurements(path) -> list[analysis.MeasurementPoint]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header[:2]) != MEASUREMENT_HEADER:
            raise ValidationError(
                f"measurement CSV must start with header {','.join(MEASUREMENT_HEADER)}"
            )
        points = []
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                qber, length = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                raise ValidationError(f"bad measurement row: {row!r}") from None
            points.append(analysis.MeasurementPoint(qber, length))
    return points


def cmd_estimate_mu(args) -> str:
    inline = args.qber is not None or args.length is not None
    if inline and args.input:
        raise ValidationError("--qber/--length cannot be combined with --input")
    if inline:
        if args.qber is None or args.length is None:
            raise ValidationError("inline estimation needs both --qber and --length")
        points = [analysis.MeasurementPoint(args.qber, args.length)]
        inputs = {"qber": args.qber, "total_length_km": args.length}
    elif args.input:
        points = _read_measurements(args.input)
        if not points:
            raise ValidationError(f"no measurement rows in {args.input}")
        inputs = {"input": args.input, "points": len(points)}
    else:
        raise ValidationError("provide --qber with --length, or --input CSV")
    per_point = [
        {"qber": p.qber, "total_length_km": p.total_length_km, "mu": analysis.estimate_mu(p)}
        for p in points
    ]
    mu_fit, rms = analysis.fit_mu(points)
    threshold = analysis.threshold_depolarizing(mu_fit)
    results = {
        "per_point": per_point,
        "fit": {"mu": mu_fit, "rms_residual": rms},
        "depolarizing_threshold_km": threshold.length_km,
    }
    table = []
    for entry in per_point:
        table.append(
            f"qber {_g6(entry['qber'])} at {_g6(entry['total_length_km'])} km"
            f" -> mu = {_g6(entry['mu'])} /km"
        )
    table.append(f"fitted mu: {_g6(mu_fit)} /km (rms residual {rms:.3e})")
    if threshold.is_finite:
        table.append(f"implied depolarizing threshold: {_g6(threshold.length_km)} km")
    else:
        table.append("implied depolarizing threshold: never vanishes")
    header = MEASUREMENT_HEADER + ("mu",)
    rows = [[e["qber"], e["total_length_km"], e["mu"]] for e in per_point]
    return _render(args, "estimate-mu", inputs, results, table, header, rows)


# ---------------------------------------------------------------- sweep


def cmd_sweep(args) -> str:
    if args.mu:
        mus = [_parse_mu(text) for text in args.mu]
    else:
        mus = [ErrorDensities(m, m, m) for m in DEFAULT_SWEEP_MUS]
    inputs = {
        "mu": [_mu_dict(m) for m in mus],
        "lmax_km": args.lmax,
        "steps": args.steps,
    }
    curves = [(m, analysis.sweep(m, args.lmax, args.steps)) for m in mus]
    rows = []
    for m, table_ in curves:
        for r in table_.rows:
            rows.append([m.mu1, m.mu2, m.mu3, r.length_km, r.concurrence, r.fidelity])
    results = {
        "curves": [
            {
                "mu": _mu_dict(m),
                "rows": [
                    {
                        "length_km": r.length_km,
                        "concurrence": r.concurrence,
                        "fidelity": r.fidelity,
                    }
                    for r in table_.rows
                ],
            }
            for m, table_ in curves
        ]
    }
    table = []
    for m, table_ in curves:
        table.append(f"mu = ({_g6(m.mu1)}, {_g6(m.mu2)}, {_g6(m.mu3)}) /km")
        table.append("  length_km  concurrence  fidelity")
        for r in table_.rows:
            table.append(
                f"  {_g6(r.length_km):>9}  {_g6(r.concurrence):>11}  {_g6(r.fidelity):>8}"
            )
    return _render(args, "sweep", inputs, results, table, SWEEP_HEADER, rows)


# ---------------------------------------------------------------- montecarlo


def cmd_montecarlo(args) -> str:
    mu = _parse_mu(args.mu)
    geom = epr.LinkGeometry(args.l1, args.l2)
    estimate = oracle.monte_carlo_transmit(
        mu,
        geom,
        segments_per_km=args.segments_per_km,
        samples=args.samples,
        seed=args.seed,
        backend=args.backend,
    )
    reference = epr.transmit_at_length(mu, geom)
    est = estimate.bell_diagonal.as_tuple()
    ref = reference.as_tuple()
    zscores = tuple(
        0.0 if e == r else (e - r) / se
        for e, r, se in zip(est, ref, estimate.standard_errors)
    )
    inputs = {
        "mu": _mu_dict(mu),
        "l1_km": geom.l1_km,
        "l2_km": geom.l2_km,
        "samples": args.samples,
        "segments_per_km": args.segments_per_km,
        "seed": args.seed,
    }
    results = {
        "estimate": _weights_dict(estimate.bell_diagonal),
        "standard_errors": list(estimate.standard_errors),
        "reference": _weights_dict(reference),
        "z_scores": list(zscores),
    }
    table = [
        f"samples: {args.samples}  segments/km: {args.segments_per_km}  seed: {args.seed}",
        "weight  estimate      std_error     reference     z",
    ]
    rows = []
    for name, e, se, r, z in zip(
        ("a", "b", "c", "d"), est, estimate.standard_errors, ref, zscores
    ):
        table.append(f"{name:6}  {e:<12.6g}  {se:<12.6g}  {r:<12.6g}  {z:+.3f}")
        rows.append([name, e, se, r, z])
    header = ("weight", "estimate", "std_error", "reference", "z")
    return _render(args, "montecarlo", inputs, results, table, header, rows)


# ---------------------------------------------------------------- parser


def _add_common(sub, default_format="table"):
    sub.add_argument(
        "--format", choices=("table", "csv", "json"), default=default_format,
        help=f"output format (default: {default_format})",
    )
    sub.add_argument("--output", default=None, help="write to this path instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprlink",
        description="Entanglement of an EPR pair distributed through Pauli channels.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("compose", help="concatenate Pauli channels")
    p.add_argument("--p", help="explicit channel probabilities p0,p1,p2,p3")
    p.add_argument("--mu", help="error densities mu1,mu2,mu3 in 1/km")
    p.add_argument("--length", type=float, help="channel length in km (with --mu)")
    p.add_argument("--iterate", type=int, help="concatenate the channel N times")
    _add_common(p)
    p.set_defaults(handler=cmd_compose)

    p = subs.add_parser("transmit", help="Bell weights and concurrence of the received pair")
    p.add_argument("--mu", help="error densities mu1,mu2,mu3 in 1/km")
    p.add_argument("--l1", type=float, help="source to first receiver, km")
    p.add_argument("--l2", type=float, help="source to second receiver, km")
    p.add_argument("--r", help="explicit first-arm probabilities p0,p1,p2,p3")
    p.add_argument("--s", help="explicit second-arm probabilities p0,p1,p2,p3")
    p.add_argument(
        "--verify-oracle", action="store_true",
        help="cross-check against the dense density-matrix engine",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_transmit)

    p = subs.add_parser("threshold", help="length at which the concurrence vanishes")
    p.add_argument("--mu", required=True, help="error densities mu1,mu2,mu3 in 1/km")
    p.add_argument(
        "--method", choices=("auto", "closed", "bisect"), default="auto",
        help="closed form, bisection, or closed-with-bisect-fallback (default)",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_threshold)

    p = subs.add_parser("estimate-mu", help="error density from QBER observations")
    p.add_argument("--qber", type=float, help="channel-attributed qubit error rate")
    p.add_argument("--length", type=float, help="total length L1+L2 in km")
    p.add_argument("--input", help="CSV of measurement points (qber,total_length_km)")
    _add_common(p)
    p.set_defaults(handler=cmd_estimate_mu)

    p = subs.add_parser("sweep", help="concurrence/fidelity table over total length")
    p.add_argument(
        "--mu", action="append",
        help="error densities mu1,mu2,mu3 (repeatable; default demo curves)",
    )
    p.add_argument("--lmax", type=float, default=60.0, help="maximum total length, km")
    p.add_argument("--steps", type=int, default=120, help="number of grid intervals")
    _add_common(p, default_format="csv")
    p.set_defaults(handler=cmd_sweep)

    p = subs.add_parser("montecarlo", help="stochastic validation of the Bell weights")
    p.add_argument("--mu", required=True, help="error densities mu1,mu2,mu3 in 1/km")
    p.add_argument("--l1", type=float, required=True, help="source to first receiver, km")
    p.add_argument("--l2", type=float, required=True, help="source to second receiver, km")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--segments-per-km", type=int, default=100, dest="segments_per_km")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument(
        "--backend", choices=("auto", "numba", "numpy"), default=None,
        help="sampling backend (default: EPRLINK_BACKEND or auto)",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_montecarlo)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.handler(args)
        _write_output(text, args.output)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
