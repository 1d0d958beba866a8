"""Command-line harness: construct, verify, sweep, multone, bound, lemmas.

Exit codes: 0 ok, 1 usage or frame violation, 2 search exhausted,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .analytic import (
    C1,
    check_lemma31,
    check_lemma32,
    check_lemma33,
    choose_a,
    guaranteed_m,
    proof_chain_check,
)
from .collider import DEFAULT_CAP, STRATEGIES, CollisionCertificate, construct, verify_collision
from .errors import CapExceeded, ChainViolation, FrameViolation, NotFound, PigeonRootsError
from .moments import make_grid
from .polycore import (
    ProblemInstance,
    RationalPolynomial,
    SelectionVector,
    difference,
    fmt_fraction,
    parse_fraction,
)
from .rootcert import SignChangeCertificate, count_sign_changes, max_multiplicity_search
from .sampling import GENERATOR, derive_seed, make_rng, random_form_polynomial, random_weights

EXIT_OK, EXIT_USAGE, EXIT_NOT_FOUND, EXIT_VERIFY = 0, 1, 2, 3
DOC_FORMAT = "pigeonroots-certificate"
SWEEP_COLUMNS = ("n", "M", "a", "m_target", "m_guaranteed", "s_achieved", "strategy", "seed", "status")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(s: str) -> Fraction:
    try:
        return parse_fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")


def _int_range(s: str) -> list[int]:
    """``12``, ``8..24``, ``8..24:4`` (inclusive) or ``8,12,20``."""
    try:
        if ".." in s:
            lo, rest = s.split("..", 1)
            hi, _, step = rest.partition(":")
            return list(range(int(lo), int(hi) + 1, int(step or 1)))
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {s!r}")


def _fraction_list(s: str) -> list[Fraction]:
    return [_fraction(x) for x in s.split(",") if x.strip()]


# -- shared pieces -------------------------------------------------------------


def resolve_m(policy: str, n: int, m_guaranteed: int) -> int:
    """``auto``: the guaranteed count, floored at 1; ``sqrt``: round(sqrt(n)/2); else an integer."""
    if policy == "auto":
        m = max(1, m_guaranteed)
    elif policy == "sqrt":
        m = max(1, round(math.sqrt(n) / 2))
    else:
        try:
            m = int(policy)
        except ValueError:
            raise UsageError(f"--m must be auto, sqrt or an integer, got {policy!r}")
        if m < 1:
            raise UsageError("--m must be >= 1")
    return min(m, n)


def load_weights(spec: str, n: int, M: Fraction, seed: int) -> tuple[Fraction, ...]:
    """``ones``, ``uniform`` (seeded rationals in [1, M]) or a file of rationals."""
    if spec == "ones":
        return (Fraction(1),) * (n + 1)
    if spec == "uniform":
        return random_weights(make_rng(seed), n, M)
    try:
        with open(spec) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read weights: {exc}")
    try:
        w = tuple(parse_fraction(t) for t in text.replace(",", " ").split())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"weights file {spec} holds a non-rational entry")
    if len(w) != n + 1:
        raise UsageError(f"weights file has {len(w)} entries, expected {n + 1}")
    return w


def _strategy_options(strategy: str, args) -> dict:
    if strategy == "exhaustive":
        return {"cap": args.cap}
    opts = {"seed": args.seed}
    if args.budget is not None:
        opts["budget"] = args.budget
    return opts


@dataclass
class Construction:
    inst: ProblemInstance
    cert: CollisionCertificate
    P: RationalPolynomial
    sc: SignChangeCertificate
    chain: object


def run_construction(inst, m, strategy, options, tol=1e-8, c1=C1) -> Construction:
    """Collide, difference, certify sign changes, check the chain (raises on failure)."""
    _, P, cert = construct(inst, m, strategy, **options)
    sc = count_sign_changes(P, inst.interval)
    chain = proof_chain_check(P, inst, m, cert, sc, c1=c1, tol=tol)
    return Construction(inst, cert, P, sc, chain)


def _bits(d: SelectionVector) -> str:
    return "".join(str(x) for x in d.d)


def certificate_document(c: Construction, seed: int | None) -> dict:
    inst, cert, sc = c.inst, c.cert, c.sc
    g = cert.grid
    stats = {k: v for k, v in cert.stats.items() if k != "wall_time"}
    return {
        "format": DOC_FORMAT,
        "version": __version__,
        "instance": {
            "n": inst.n,
            "M": fmt_fraction(inst.M),
            "a": fmt_fraction(inst.a),
            "weights": [fmt_fraction(w) for w in inst.weights],
        },
        "collision": {
            "m": g.m,
            "strategy": cert.strategy,
            "d1": _bits(cert.d1),
            "d2": _bits(cert.d2),
            "b": list(cert.b.b),
            "delta": [fmt_fraction(x) for x in cert.delta],
            "grid": {"L": g.L, "N": g.N, "h": fmt_fraction(g.h)},
            "stats": stats,
        },
        "polynomial": [fmt_fraction(x) for x in c.P.coeffs],
        "sign_changes": {
            "count": sc.count,
            "interval": [fmt_fraction(x) for x in sc.interval],
            "witnesses": [[fmt_fraction(lo), fmt_fraction(hi)] for lo, hi in sc.witnesses],
            "endpoint_roots": [fmt_fraction(x) for x in sc.endpoint_roots],
        },
        "chain": c.chain.as_dict(),
        "rng": {"generator": GENERATOR, "seed": seed},
    }


def _selection(bits: str, n: int) -> SelectionVector:
    if len(bits) != n + 1 or set(bits) - {"0", "1"}:
        raise ChainViolation("document", "selection vector is not a 0/1 string of length n + 1")
    return SelectionVector(tuple(int(ch) for ch in bits))


def verify_document(doc: dict, tol: float = 1e-8, c1: float = C1):
    """Rebuild everything from the instance and ``d1``, ``d2``.

    The stored ``delta`` is carried into the check so that tampering shows
    up as a failed moment-gap link; every other stored field is compared
    against its recomputation.
    """
    try:
        if doc.get("format") != DOC_FORMAT:
            raise ChainViolation("document", "not a certificate document")
        idoc, cdoc = doc["instance"], doc["collision"]
        inst = ProblemInstance(
            int(idoc["n"]), parse_fraction(idoc["M"]),
            tuple(parse_fraction(w) for w in idoc["weights"]), parse_fraction(idoc["a"]),
        )
        m = int(cdoc["m"])
        d1 = _selection(cdoc["d1"], inst.n)
        d2 = _selection(cdoc["d2"], inst.n)
        delta = tuple(parse_fraction(x) for x in cdoc["delta"])
    except ChainViolation:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ChainViolation("document", f"malformed field: {exc}")
    grid = make_grid(inst.n, inst.M, m)
    b, P = difference(d1, d2, inst)
    cert = CollisionCertificate(d1, d2, b, delta, grid, str(cdoc.get("strategy", "")))
    verify_collision(cert, inst)
    if [int(x) for x in cdoc.get("b", [])] != list(b.b):
        raise ChainViolation("document", "stored sign vector differs from d1 - d2")
    if [parse_fraction(x) for x in doc.get("polynomial", [])] != list(P.coeffs):
        raise ChainViolation("document", "stored polynomial differs from recomputation")
    sc = count_sign_changes(P, inst.interval)
    if int(doc.get("sign_changes", {}).get("count", -1)) != sc.count:
        raise ChainViolation("sign_changes", "stored count differs from recomputation")
    chain = proof_chain_check(P, inst, m, cert, sc, c1=c1, tol=tol)
    return Construction(inst, cert, P, sc, chain)


# -- subcommands ---------------------------------------------------------------


def cmd_construct(args) -> int:
    n, M = args.n, args.M
    if args.a is not None:
        a = args.a
    else:
        a = choose_a(n, M, strict=not args.no_frame)
    inst = ProblemInstance(n, M, load_weights(args.weights, n, M, args.seed), a)
    m = resolve_m(args.m, n, guaranteed_m(n, M, c1=args.c1, strict=False))
    c = run_construction(inst, m, args.strategy, _strategy_options(args.strategy, args), args.tol, args.c1)
    doc = certificate_document(c, args.seed)
    text = json.dumps(doc, indent=2) + "\n"
    summary = (
        f"n={n} M={fmt_fraction(M)} a={fmt_fraction(a)} m={m} strategy={args.strategy} "
        f"sign_changes={c.sc.count} chain=ok"
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.certificate) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"verify: cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    c = verify_document(doc, args.tol, args.c1)
    print(f"verified: sign_changes={c.sc.count} links={len(c.chain.links)}")
    return EXIT_OK


def _sweep_row(job) -> dict:
    n, M, index, seed, strategy, m_policy, weights, budget, cap, tol, c1 = job
    a = choose_a(n, M, strict=False)
    m_g = guaranteed_m(n, M, c1=c1, strict=False)
    m = resolve_m(m_policy, n, m_g)
    item_seed = derive_seed(seed, index)
    if weights == "uniform":
        w = random_weights(make_rng(item_seed), n, M)
    else:
        w = (Fraction(1),) * (n + 1)
    inst = ProblemInstance(n, M, w, a)
    opts = {"cap": cap} if strategy == "exhaustive" else {"seed": item_seed}
    if budget is not None and strategy != "exhaustive":
        opts["budget"] = budget
    row = {
        "n": n, "M": fmt_fraction(M), "a": fmt_fraction(a), "m_target": m,
        "m_guaranteed": m_g, "s_achieved": "", "strategy": strategy,
        "seed": item_seed, "status": "ok",
    }
    t0 = time.perf_counter()
    try:
        c = run_construction(inst, m, strategy, opts, tol, c1)
        row["s_achieved"] = c.sc.count
    except NotFound:
        row["status"] = "not_found"
    except CapExceeded:
        row["status"] = "cap_exceeded"
    except ChainViolation as exc:
        row["status"] = f"chain_failed:{exc.link}"
    row["time"] = f"{time.perf_counter() - t0:.4f}"
    return row


def sweep_jobs(args) -> list[tuple]:
    if not args.n:
        raise UsageError("empty n range")
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    if args.weights not in ("ones", "uniform"):
        raise UsageError("sweep weights must be ones or uniform")
    jobs = []
    for n in args.n:
        if n < 1:
            raise UsageError(f"n must be >= 1, got {n}")
        for M in args.M:
            for _ in range(args.seeds):
                jobs.append((n, M, len(jobs), args.seed, args.strategy, args.m, args.weights,
                             args.budget, args.cap, args.tol, args.c1))
    return jobs


def run_sweep(jobs, workers: int = 1) -> list[dict]:
    if workers <= 1:
        return [_sweep_row(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_row, jobs))


def sweep_csv(rows, timing: bool = False) -> str:
    cols = SWEEP_COLUMNS + (("time",) if timing else ())
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    jobs = sweep_jobs(args)
    resolve_m(args.m, 1, 1)  # reject a bad policy before spawning work
    rows = run_sweep(jobs, args.workers)
    text = sweep_csv(rows, args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if r["status"].startswith("chain_failed")]
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_multone(args) -> int:
    if args.n < 0:
        raise UsageError("n must be >= 0")
    r = max_multiplicity_search(args.n, budget=args.budget, mode=args.mode)
    witness = ",".join(str(x) for x in r.witness.b)
    print(f"n={r.n} k={r.k} exact={r.exact} nodes={r.nodes} witness={witness}")
    return EXIT_OK


def cmd_bound(args) -> int:
    a = choose_a(args.n, args.M, strict=True)
    m = guaranteed_m(args.n, args.M, c1=args.c1, corrected=args.corrected)
    print(f"n={args.n} M={fmt_fraction(args.M)} a={fmt_fraction(a)} a_float={float(a):.8f} m_guaranteed={m}")
    return EXIT_OK


def cmd_lemmas(args) -> int:
    """Random form polynomials; every row must satisfy all three bounds."""
    rng = make_rng(args.seed)
    windows = (Fraction(1, 3), Fraction(1, 4), Fraction(1, 6))
    cols = ("index", "n", "M", "a", "k", "log_minus", "log_minus_bound", "l0_log", "l0_log_bound", "holds")
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    bad = 0
    n_max = max(args.n) if args.n else 20
    for i in range(args.count):
        n = int(rng.integers(1, n_max + 1))
        M = args.M[int(rng.integers(0, len(args.M)))]
        a = windows[int(rng.integers(0, len(windows)))]
        k = int(rng.integers(0, n + 1))
        P0 = random_form_polynomial(rng, n, M, 0)
        Pk = random_form_polynomial(rng, n, M, k)
        r1 = check_lemma31(P0, a, M, args.c1, args.tol)
        r2 = check_lemma32(P0, a, M, args.c1, args.tol)
        r3 = check_lemma33(Pk, a, M, k, args.c1, args.tol)
        ok = r1.holds and r2.holds and r3.holds
        bad += not ok
        w.writerow((i, n, fmt_fraction(M), fmt_fraction(a), k, f"{r1.lhs:.12g}", f"{r1.rhs:.12g}",
                    f"{r2.rhs:.12g}", f"{r2.lhs:.12g}", ok))
    text = out.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"lemmas: {args.count - bad}/{args.count} hold", file=sys.stderr)
    return EXIT_VERIFY if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pigeonroots", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, strategy_default):
        sp.add_argument("--M", type=_fraction, default=Fraction(1), help="coefficient cap (rational)")
        sp.add_argument("--m", default="sqrt", help="moment count: auto, sqrt or an integer")
        sp.add_argument("--strategy", choices=STRATEGIES, default=strategy_default)
        sp.add_argument("--seed", type=int, default=0, help="64-bit seed for the Philox generator")
        sp.add_argument("--budget", type=int, default=None, help="work budget for mitm/random")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest n for exhaustive search")
        sp.add_argument("--tol", type=float, default=1e-8, help="slack for floating-point chain links")
        sp.add_argument("--c1", type=float, default=C1, help="log-minus constant")
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    sp = sub.add_parser("construct", help="build and certify one polynomial")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--weights", default="ones", help="ones, uniform or a file of n+1 rationals")
    sp.add_argument("--a", type=_fraction, default=None, help="window parameter; skips the frame check")
    sp.add_argument("--no-frame", action="store_true", help="allow M > exp(n/9)/4 (a clamps to 1/3)")
    common(sp, "exhaustive")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="re-verify a certificate document")
    sp.add_argument("certificate")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--c1", type=float, default=C1)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser(
        "sweep",
        help="one CSV row per instance",
        description="CSV columns, in order: " + ",".join(SWEEP_COLUMNS) + " (plus time with --timing). "
        "status is ok, not_found, cap_exceeded or chain_failed:<link>.",
    )
    sp.add_argument("--n", type=_int_range, required=True, help="e.g. 8..24:4 or 8,12,16")
    sp.add_argument("--M", type=_fraction_list, default=[Fraction(1)], help="comma-separated caps")
    sp.add_argument("--seeds", type=int, default=1, help="instances per (n, M)")
    sp.add_argument("--weights", default="ones", choices=("ones", "uniform"))
    sp.add_argument("--workers", type=int, default=1, help="worker processes")
    sp.add_argument("--timing", action="store_true", help="append a wall-time column (not reproducible)")
    sp.add_argument("--m", default="sqrt", help="moment count: auto, sqrt or an integer")
    sp.add_argument("--strategy", choices=STRATEGIES, default="mitm")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--c1", type=float, default=C1)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("multone", help="largest multiplicity of the root 1 over {-1,0,1} coefficients")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10**7)
    sp.add_argument("--mode", choices=("auto", "exhaustive", "dfs"), default="auto")
    sp.set_defaults(func=cmd_multone)

    sp = sub.add_parser("bound", help="print the chosen a and the guaranteed sign-change count")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--M", type=_fraction, default=Fraction(1))
    sp.add_argument("--c1", type=float, default=C1)
    sp.add_argument("--corrected", action="store_true", help="use the 1/(2e) separator bound")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("lemmas", help="check the log-minus and geometric-mean bounds on random polynomials")
    sp.add_argument("--count", type=int, default=30)
    sp.add_argument("--n", type=_int_range, default=[20], help="largest degree")
    sp.add_argument("--M", type=_fraction_list, default=[Fraction(1), Fraction(2), Fraction(4), Fraction(8)])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--c1", type=float, default=C1)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_lemmas)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FrameViolation as exc:
        print(f"frame violation: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotFound as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except ChainViolation as exc:
        print(f"verification failed at link {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except PigeonRootsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
