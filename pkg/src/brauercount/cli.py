"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import analytic, count, heights, oracles
from .arith import NormFormSpec, hilbert_symbol, ramified_places
from .errors import InputError
from .model import (
    ConicBundle,
    CyclicTwist,
    DiagonalConics,
    NormFormFamily,
    build_model,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# --------------------------------------------------------------------------
# family spec JSON


def family_from_json(obj: dict):
    if not isinstance(obj, dict):
        raise InputError("family spec must be a JSON object")
    variant = obj.get("variant")
    try:
        if variant == "norm_form":
            twists = tuple(
                CyclicTwist(int(tw["degree"]), None if tw.get("disc") is None else int(tw["disc"]))
                for tw in obj.get("twists", [])
            )
            return NormFormFamily(
                NormFormSpec(tuple(int(c) for c in obj["min_poly"])),
                twists,
                bool(obj.get("linearly_disjoint", True)),
            )
        if variant == "conic_bundle":
            return ConicBundle(*(tuple(int(c) for c in obj[k]) for k in ("f0", "f1", "f2")))
        if variant == "diagonal_conics":
            return DiagonalConics(int(obj.get("n", 2)))
    except KeyError as e:
        raise InputError(f"family spec is missing field {e}") from None
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed family spec: {e}") from None
    raise InputError(f"unknown variant {variant!r}")


def family_to_json(spec) -> dict:
    if isinstance(spec, NormFormFamily):
        twists = []
        for tw in spec.twists:
            d = {"degree": tw.degree}
            if tw.degree == 2:
                d["disc"] = tw.disc
            twists.append(d)
        return {
            "variant": "norm_form",
            "min_poly": list(spec.E.min_poly),
            "twists": twists,
            "linearly_disjoint": spec.linearly_disjoint,
        }
    if isinstance(spec, ConicBundle):
        return {"variant": "conic_bundle", "f0": list(spec.f0), "f1": list(spec.f1), "f2": list(spec.f2)}
    if isinstance(spec, DiagonalConics):
        return {"variant": "diagonal_conics", "n": spec.n}
    raise InputError(f"cannot serialize {spec!r}")


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    # either a bare family spec or an experiment config with a "family" key
    return obj if "family" in obj else {"family": obj}


# --------------------------------------------------------------------------
# output


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def prediction(B: int, theta: Fraction) -> float:
    if B > 1:
        return B * math.log(B) ** float(theta)
    return float(B) if theta == 0 else math.nan


def series_csv(series: count.CountSeries, theta: Fraction) -> str:
    lines = ["B,N,baseline,N_over_pred"]
    for r in series:
        lines.append(f"{r.B},{r.N},{r.baseline},{_fmt(r.N / prediction(r.B, theta))}")
    return "\n".join(lines) + "\n"


def _frac(x: Fraction) -> str:
    return f"{float(x):g}" if x.denominator in (1, 2, 4, 5, 8, 10) else f"{x} ({float(x):.6g})"


# --------------------------------------------------------------------------
# commands


def _parse_int(s: str) -> int:
    try:
        return int(float(s)) if ("e" in s.lower() or "." in s) else int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s}") from None


def cmd_count(args) -> int:
    cfg = load_config(args.config)
    family = family_from_json(cfg["family"])
    checkpoints = args.checkpoints or cfg.get("checkpoints")
    if not checkpoints:
        raise InputError("no checkpoints given")
    checkpoints = [_parse_int(str(c)) for c in checkpoints]
    mode = args.height or cfg.get("height", "anticanonical")
    if mode == "naive":
        hspec = heights.HeightSpec.naive()
    elif mode == "anticanonical":
        hspec = heights.HeightSpec.anticanonical(family.base_dim)
    else:
        raise InputError(f"unknown height mode {mode!r}")
    workers = args.workers or int(cfg.get("workers", 1))
    if os.environ.get("WORKERS"):
        workers = int(os.environ["WORKERS"])
    model = build_model(family)
    job = count.CountJob(family, tuple(checkpoints), hspec, workers)
    series = count.run_count(job)
    out = args.output or cfg.get("output")
    csv_text = series_csv(series, model.predicted_exponent)
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    last = series.rows[-1]
    try:
        fitted = f"{count.fit_log_power(series).theta:.4f}"
    except InputError:
        fitted = "n/a"
    flag = " (conjectural)" if model.conjectural else ""
    print(
        f"height {hspec}: B = {last.B}, N = {last.N}, baseline = {last.baseline}, "
        f"predicted θ = {float(model.predicted_exponent):g}{flag}, fitted θ = {fitted}"
    )
    return EXIT_OK


def cmd_delta(args) -> int:
    cfg = load_config(args.config)
    family = family_from_json(cfg["family"])
    model = build_model(family)
    print(f"{'divisor':<24} {'residue order':>13} {'component degree':>17}")
    for d in model.divisors:
        print(f"{d.label:<24} {d.residue_order:>13} {d.component_degree:>17}")
    print(f"Delta = {_frac(model.delta)}")
    print(f"rho = {model.rho}")
    print(f"rho_B = {_frac(model.rho_B)}")
    flag = " (conjectural)" if model.conjectural else ""
    print(f"predicted θ = {_frac(model.predicted_exponent)}{flag}")
    for note in model.notes:
        print(f"note: {note}")
    return EXIT_OK


def cmd_euler(args) -> int:
    R = analytic.CharacterGroup.generated_by(args.group or [])
    chi = analytic.parse_character(args.chi)
    print(f"R = {R}, chi = {chi}")
    if args.mode == "product":
        for s in args.s:
            v = analytic.partial_euler_product(R, chi, s, args.cutoff)
            print(f"s = {s:g}  P = {args.cutoff}  L_R(chi, s) = {v:.15g}")
    elif args.mode == "check":
        cutoffs = sorted(args.cutoffs)
        for s in args.s:
            gs = analytic.g_estimates(R, chi, s, cutoffs)
            cells = "  ".join(f"G(P={P}) = {g:.15g}" for P, g in zip(cutoffs, gs))
            print(f"s = {s:g}  {cells}")
    else:
        if chi not in R:
            raise InputError(f"{chi} is not a member of {R}")
        lim = analytic.singular_limit(R, chi, cutoff=args.cutoff)
        for s, c in lim.cutoff_trace:
            print(f"s - 1 = {s - 1:.3e}  estimate = {c:.12g}")
        print(f"c = {lim.c:.12g}  omega = {lim.omega}  converged = {lim.converged}")
        if not lim.converged:
            print(f"diagnostic: {lim.diagnostic}")
            return EXIT_FAIL
    return EXIT_OK


def cmd_landau(args) -> int:
    cps = sorted(set((args.checkpoints or []) + [args.x]))
    counts = count.landau_counts(cps)
    K = analytic.landau_ramanujan()
    g1 = K * math.sqrt(math.pi)
    print(f"K (Landau-Ramanujan) = {K:.12g}")
    print(f"Delange constant g(1)/Gamma(1/2) with g(1) = {g1:.12g}: {analytic.delange_constant(g1, Fraction(1, 2)):.12g}")
    print(f"{'x':>12} {'N(x)':>12} {'N sqrt(log x)/x':>18} {'rel. to K':>10}")
    for x, n in zip(cps, counts):
        ratio = n * math.sqrt(math.log(x)) / x if x > 1 else math.nan
        print(f"{x:>12} {n:>12} {ratio:>18.10f} {ratio / K - 1:>+10.4%}")
    return EXIT_OK


# --------------------------------------------------------------------------
# verification suites


class SuiteFailure(Exception):
    pass


def _suite_hilbert(symbol: Callable, rng: random.Random) -> int:
    n = 0
    # the (-1, -1) table first
    for v in (0, 2, 3, 5, 7):
        got = symbol(-1, -1, v) == 1
        if got != oracles.local_solubility(-1, -1, v):
            raise SuiteFailure(f"hilbert(-1, -1, {v or 'inf'}) = {symbol(-1, -1, v)} disagrees with brute force")
        n += 1
    for v in (0, 2, 3, 5, 7):
        for a in range(-20, 21):
            for b in range(-20, 21):
                if a and b:
                    if (symbol(a, b, v) == 1) != oracles.local_solubility(a, b, v):
                        raise SuiteFailure(f"hilbert({a}, {b}, {v or 'inf'}) = {symbol(a, b, v)} disagrees with brute force")
                    n += 1
    return n


def _suite_product_formula(symbol: Callable, rng: random.Random) -> int:
    for _ in range(2000):
        a = rng.choice([-1, 1]) * rng.randint(1, 10**6)
        b = rng.choice([-1, 1]) * rng.randint(1, 10**6)
        prod = 1
        for v in ramified_places(a, b):
            prod *= symbol(a, b, v.p)
        if prod != 1:
            raise SuiteFailure(f"product formula fails for a = {a}, b = {b}")
    return 2000


def _suite_norms(symbol: Callable, rng: random.Random) -> int:
    n = 0
    for d in (-1, 2, -2, 3, -3, 5):
        for m in range(-30, 31):
            if m == 0:
                continue
            got = all(symbol(d, m, v.p) == 1 for v in ramified_places(d, m))
            if got != (oracles.norm_witness(m, d) is not None):
                raise SuiteFailure(f"norm test for m = {m}, d = {d} disagrees with search")
            n += 1
    return n


def _suite_enumeration(symbol, rng) -> int:
    import numpy as np

    n = 0
    for dim, Tmax in ((1, 30), (2, 8)):
        for T in range(1, Tmax + 1):
            pts = np.concatenate(list(heights.iter_batches(dim, T)))
            mine = np.sort(oracles.encode_points(pts, T))
            ref = oracles.brute_force_points(dim, T)
            if len(mine) != len(np.unique(mine)) or not np.array_equal(mine, ref):
                raise SuiteFailure(f"enumeration of P^{dim} at T = {T} differs from brute force")
            n += 1
    return n


def _suite_conics(symbol: Callable, rng: random.Random) -> int:
    for _ in range(200):
        a, b, c = (rng.choice([-1, 1]) * rng.randint(1, 100) for _ in range(3))
        u, w = -a * c, -b * c
        local = all(symbol(u, w, v.p) == 1 for v in ramified_places(u, w))
        if local != oracles.conic_has_point(a, b, c):
            raise SuiteFailure(f"conic {a}x^2 + {b}y^2 + {c}z^2: local test {local} vs Holzer search")
    return 200


def _suite_fits(symbol, rng) -> int:
    Bs = [10**k for k in range(3, 10)]
    for theta in (0.0, -0.5, 1.0):
        rows = [(B, math.floor(B * math.log(B) ** theta), B) for B in Bs]
        fit = count.fit_log_power(rows)
        if abs(fit.theta - theta) >= 1e-2:
            raise SuiteFailure(f"synthetic fit theta = {theta}: recovered {fit.theta}")
    return 3


SUITES = (
    ("hilbert-brute-force", _suite_hilbert),
    ("product-formula", _suite_product_formula),
    ("norm-brute-force", _suite_norms),
    ("enumeration-completeness", _suite_enumeration),
    ("holzer-conic-search", _suite_conics),
    ("synthetic-fits", _suite_fits),
)


def _faulty_symbol(a, b, v) -> int:
    s = hilbert_symbol(a, b, v)
    return -s if v == 3 else s


def run_verify(seed: int, inject_fault: bool = False, out=None) -> bool:
    out = out or sys.stdout
    symbol = _faulty_symbol if inject_fault else hilbert_symbol
    ok = True
    for name, suite in SUITES:
        rng = random.Random(f"{seed}:{name}")
        try:
            n = suite(symbol, rng)
        except SuiteFailure as e:
            print(f"FAIL {name}: {e}", file=out)
            ok = False
            break
        print(f"PASS {name} ({n} cases)", file=out)
    return ok


def cmd_verify(args) -> int:
    ok = run_verify(args.seed, args.inject_fault)
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="brauercount", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count fibres with a rational point up to each checkpoint")
    c.add_argument("config", help="family spec or experiment config (JSON)")
    c.add_argument("--checkpoints", nargs="+", type=_parse_int)
    c.add_argument("--height", choices=("anticanonical", "naive"))
    c.add_argument("--workers", type=int)
    c.add_argument("--output", "-o")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_count)

    d = sub.add_parser("delta", help="divisor table, Delta and predicted exponent")
    d.add_argument("config")
    d.set_defaults(func=cmd_delta)

    e = sub.add_parser("euler", help="partial Euler products and singular limits")
    e.add_argument("--group", "-R", action="append", type=int,
                   help="fundamental discriminant generating R (repeatable)")
    e.add_argument("--chi", default="1")
    e.add_argument("--mode", choices=("product", "check", "limit"), default="product")
    e.add_argument("--s", type=float, nargs="+", default=[2.0])
    e.add_argument("--cutoff", type=_parse_int, default=10**6)
    e.add_argument("--cutoffs", type=_parse_int, nargs="+", default=[10**4, 10**5, 10**6])
    e.set_defaults(func=cmd_euler)

    la = sub.add_parser("landau", help="sums of two squares against the Landau-Ramanujan constant")
    la.add_argument("--x", type=_parse_int, default=10**8)
    la.add_argument("--checkpoints", type=_parse_int, nargs="+")
    la.set_defaults(func=cmd_landau)

    v = sub.add_parser("verify", help="run the oracle suites")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
