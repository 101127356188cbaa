"""Command-line front end: ``vasint <subcommand> [flags]``.

Every subcommand emits one report per case, as JSON lines or TSV rows.
Exit status is 0 when every report passed, 1 when any failed and 2 for
invalid input or a violated admissibility condition.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath as mp

from . import harness
from .decomp import check_integrality, zeta_decompose
from .errors import ConditionViolated, MaxTermsExceeded, VasintError
from .hyper import SeriesSpec, classify_series, eval_pfq
from .integral import QuadratureGrid, eval_jm_quadrature, eval_jm_recursive
from .multisum import DomainInput, check_lemma4, check_multizeta_domain, eval_zlobin_multisum
from .numeric import PrecisionConfig
from .params import JmParams, ParameterVectorH


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def rational_list(text: str) -> tuple:
    if not text.strip():
        return ()
    return tuple(rational(t) for t in text.split(","))


def positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("precision and output")
    g.add_argument("--bits", type=int, default=256, help="working precision in bits")
    g.add_argument("--tol", type=positive_float, default=1e-20, help="absolute tolerance")
    g.add_argument("--max-terms", type=int, default=20000)
    g.add_argument("--simplex-cap", type=int, default=2048)
    g.add_argument("--format", choices=("json", "tsv"), default="json")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--random", type=int, default=0, metavar="COUNT",
                   help="run COUNT randomized cases instead of the explicit parameters")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for batch runs")
    g.add_argument("--timing", action="store_true", help="fill in wall_ms (breaks byte-identical replays)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="vasint", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("eval-pfq", "evaluate a (p+1)F(p) series")
    p.add_argument("--alphas", type=rational_list, required=True)
    p.add_argument("--betas", type=rational_list, required=True)
    p.add_argument("--z", type=rational, default=Fraction(1))

    p = add("eval-jm", "evaluate the integral J_m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=rational_list, required=True, help="a_0..a_m")
    p.add_argument("--b", type=rational_list, required=True, help="b_1..b_m")
    p.add_argument("--z", type=rational, default=Fraction(1))
    p.add_argument("--method", choices=("recursive", "multisum", "quadrature"), default="recursive")

    p = add("check-andrews", "exact terminating Andrews identity")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--a", type=rational)
    p.add_argument("--b", type=rational_list)
    p.add_argument("--c", type=rational_list)

    p = add("check-whipple", "exact Whipple 4F3 to 7F6 transformation")
    p.add_argument("--N", type=int, default=None)
    for name in "abcef":
        p.add_argument(f"--{name}", type=rational)

    p = add("check-prop2", "nonterminating limits of the Andrews identity")
    p.add_argument("--part", choices=("even", "odd"), required=True)
    p.add_argument("--a", type=rational)
    p.add_argument("--c0", type=rational)
    p.add_argument("--b", type=rational_list)
    p.add_argument("--c", type=rational_list)
    p.add_argument("--grid", type=int, default=None, metavar="S",
                   help="run the built-in admissible grid with s=S")

    p = add("check-zudilin", "integral J_m against the very-well-poised series")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--h", type=rational_list, help="h_0..h_{m+2}")
    p.add_argument("--lhs-method", choices=("recursive", "multisum", "quadrature"), default="recursive")
    p.add_argument("--cross-check", choices=("recursive", "multisum", "quadrature"), default=None)
    p.add_argument("--agree-tol", type=positive_float, default=None)
    p.add_argument("--grid", action="store_true", help="run the built-in grid for --m")

    p = add("check-vasilyev", "J_{E,n} against its series")
    p.add_argument("--E", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("check-convergence", "convergence-domain test for exponent vectors E, F")
    p.add_argument("--E", type=rational_list, required=True)
    p.add_argument("--F", type=rational_list, required=True)

    p = add("check-mzv", "absolute convergence of a multiple zeta value")
    p.add_argument("--s", type=rational_list, required=True, help="s_1..s_d")

    p = add("decompose", "exact zeta-value decomposition of J_{E,n}")
    p.add_argument("--E", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    return ap


def config_from(args) -> PrecisionConfig:
    return PrecisionConfig(working_bits=args.bits, target_abs_tol=args.tol,
                           max_terms=args.max_terms, simplex_cap=args.simplex_cap)


def _precision(cfg: PrecisionConfig) -> dict:
    return {"bits": cfg.working_bits, "tol": mp.nstr(mp.mpf(cfg.target_abs_tol), 6)}


def _value_report(identity, inputs, cfg, res) -> dict:
    return {"identity": identity, "inputs": inputs, "seed": None, "precision": _precision(cfg),
            "value": harness.fmt(res.value, cfg.digits), "error": harness.fmt(res.error, 6),
            "method": res.method, "terms_used": res.terms, "passed": True, "wall_ms": None}


def _verdict_report(identity, inputs, verdict) -> dict:
    return {"identity": identity, "inputs": inputs, "seed": None, "precision": None,
            "conditions": [c.to_dict() for c in verdict.conditions],
            "failing": list(verdict.failing), "verdict": verdict.summary(),
            "passed": verdict.ok, "wall_ms": None}


# --------------------------------------------------------------- cases
# Each case is (kind, kwargs); run_case is module-level so it pickles.

def run_case(kind: str, kw: dict, cfg: PrecisionConfig, timing: bool) -> dict:
    t0 = time.perf_counter()
    out = _dispatch(kind, kw, cfg)
    if isinstance(out, harness.VerificationReport):
        out = out.to_dict(timing=timing)
    elif timing:
        out["wall_ms"] = round(1000 * (time.perf_counter() - t0), 3)
    return out


def _dispatch(kind, kw, cfg):
    if kind == "eval-pfq":
        spec = SeriesSpec(kw["alphas"], kw["betas"], kw["z"])
        cls = classify_series(spec)
        rep = _value_report("eval-pfq", spec.to_dict(), cfg, eval_pfq(spec, cfg))
        rep["class"] = {"terminating": cls.terminating, "balanced": cls.balanced,
                        "very_well_poised": cls.very_well_poised}
        return rep
    if kind == "eval-jm":
        p = JmParams(kw["m"], kw["a"], kw["b"], kw["z"])
        inputs = dict(p.to_dict(), method=kw["method"])
        if kw["method"] == "quadrature":
            v, err = eval_jm_quadrature(p, QuadratureGrid())
            # double precision only
            return {"identity": "eval-jm", "inputs": inputs, "seed": None,
                    "precision": {"bits": 53, "tol": None}, "value": repr(float(v)),
                    "error": repr(float(err)), "method": "gauss-jacobi",
                    "terms_used": 2 * QuadratureGrid().fine ** p.m, "passed": True, "wall_ms": None}
        fn = eval_jm_recursive if kw["method"] == "recursive" else eval_zlobin_multisum
        return _value_report("eval-jm", inputs, cfg, fn(p, cfg))
    if kind == "andrews":
        return harness.check_andrews(kw["s"], kw["N"], kw["a"], kw["b"], kw["c"])
    if kind == "whipple":
        return harness.check_whipple(kw["N"], *(kw[k] for k in "abcef"))
    if kind == "prop2":
        return harness.check_prop2(kw["part"], kw["params"], cfg)
    if kind == "zudilin":
        h = ParameterVectorH(kw["m"], kw["h"])
        return harness.check_zudilin(h, cfg, kw["lhs_method"], kw["cross_check"], kw["agree_tol"])
    if kind == "vasilyev":
        return harness.check_vasilyev(kw["E"], kw["n"], cfg)
    if kind == "lemma4":
        d = DomainInput(kw["E"], kw["F"])
        return _verdict_report("lemma4", {"E": [str(x) for x in d.E], "F": [str(x) for x in d.F]},
                               check_lemma4(d))
    if kind == "mzv":
        return _verdict_report("multizeta-domain", {"s": [str(x) for x in kw["s"]]},
                               check_multizeta_domain(kw["s"]))
    if kind == "decompose":
        d = zeta_decompose(kw["E"], kw["n"])
        ig = check_integrality(kw["E"], kw["n"], d)
        value = d.value(cfg)
        return {"identity": "zeta-decomposition", "inputs": {"E": kw["E"], "n": kw["n"]},
                "seed": None, "precision": _precision(cfg), "p0": str(d.p0),
                "p": {str(m): str(c) for m, c in sorted(d.p.items())},
                "value": harness.fmt(value, cfg.digits), "integrality": ig.to_dict(),
                "passed": ig.passed, "wall_ms": None}
    raise ValueError(f"unknown case kind {kind!r}")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise argparse.ArgumentTypeError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def cases_from(args) -> list[tuple[str, dict]]:
    """Expand parsed flags into a list of cases, sampling if --random is set."""
    rng = random.Random(args.seed)
    cmd, count = args.command, args.random
    if cmd == "eval-pfq":
        return [("eval-pfq", {"alphas": args.alphas, "betas": args.betas, "z": args.z})]
    if cmd == "eval-jm":
        return [("eval-jm", {"m": args.m, "a": args.a, "b": args.b, "z": args.z, "method": args.method})]
    if cmd == "check-andrews":
        if count:
            out = []
            for _ in range(count):
                s = args.s if args.s is not None else rng.randint(1, 3)
                N = args.N if args.N is not None else rng.randint(0, 6)
                a, b, c = harness.random_andrews_case(rng, s, N)
                out.append(("andrews", {"s": s, "N": N, "a": a, "b": b, "c": c}))
            return out
        _need(args, "s", "N", "a", "b", "c")
        return [("andrews", {"s": args.s, "N": args.N, "a": args.a, "b": args.b, "c": args.c})]
    if cmd == "check-whipple":
        if count:
            out = []
            for _ in range(count):
                N = args.N if args.N is not None else rng.randint(0, 8)
                vals = harness.random_whipple_case(rng, N)
                out.append(("whipple", dict(zip("abcef", vals), N=N)))
            return out
        _need(args, "N", "a", "b", "c", "e", "f")
        return [("whipple", {k: getattr(args, k) for k in ("N", "a", "b", "c", "e", "f")})]
    if cmd == "check-prop2":
        if args.grid is not None:
            return [("prop2", {"part": args.part, "params": p}) for p in harness.prop2_grid(args.part, args.grid)]
        names = ("a", "b", "c") + (("c0",) if args.part == "odd" else ())
        _need(args, *names)
        return [("prop2", {"part": args.part, "params": {n: getattr(args, n) for n in names}})]
    if cmd == "check-zudilin":
        base = {"lhs_method": args.lhs_method, "cross_check": args.cross_check, "agree_tol": args.agree_tol}
        if args.grid:
            _need(args, "m")
            return [("zudilin", dict(base, m=h.m, h=h.h)) for h in harness.zudilin_grid(args.m)]
        _need(args, "m", "h")
        return [("zudilin", dict(base, m=args.m, h=args.h))]
    if cmd == "check-vasilyev":
        return [("vasilyev", {"E": args.E, "n": args.n})]
    if cmd == "check-convergence":
        return [("lemma4", {"E": args.E, "F": args.F})]
    if cmd == "check-mzv":
        return [("mzv", {"s": args.s})]
    if cmd == "decompose":
        return [("decompose", {"E": args.E, "n": args.n})]
    raise ValueError(cmd)


def _tsv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v).replace("\t", " ")


def write_reports(reports: list[dict], fmt: str, stream) -> None:
    if fmt == "json":
        for r in reports:
            stream.write(json.dumps(r, separators=(",", ":")) + "\n")
        return
    keys = list(reports[0]) if reports else []
    stream.write("\t".join(keys) + "\n")
    for r in reports:
        stream.write("\t".join(_tsv_cell(r.get(k)) for k in keys) + "\n")


def _error(exc: Exception) -> dict:
    err = {"error": type(exc).__name__, "message": str(exc)}
    verdict = getattr(exc, "verdict", None)
    if verdict is not None:
        err["conditions"] = [c.to_dict() for c in verdict.conditions]
        err["failing"] = list(verdict.failing)
    return err


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from(args)
        cases = cases_from(args)
    except (argparse.ArgumentTypeError, ValueError, VasintError, RuntimeError) as exc:
        stdout.write(json.dumps(_error(exc)) + "\n")
        return 2
    try:
        if args.jobs > 1 and len(cases) > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                futures = [pool.submit(run_case, k, kw, cfg, args.timing) for k, kw in cases]
                reports = [f.result() for f in futures]
        else:
            reports = [run_case(k, kw, cfg, args.timing) for k, kw in cases]
    except MaxTermsExceeded as exc:
        stdout.write(json.dumps(_error(exc)) + "\n")
        return 1
    except (ConditionViolated, VasintError, ValueError) as exc:
        stdout.write(json.dumps(_error(exc)) + "\n")
        return 2
    for r in reports:
        r["seed"] = args.seed
    write_reports(reports, args.format, stdout)
    return 0 if all(r["passed"] for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
