"""Command-line front end: ``modsram {mul,verify,compare,ecdemo,luts}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys

from .arith import FieldElement, Modulus, Operand
from .booth import build_overflow_lut, build_radix4_lut
from .ecc import CURVES, ENGINE_NAMES, Multiplier, point_add, point_double
from .engines import trace_jsonl
from .errors import ConfigurationError, DomainError
from .sim import CycleConfig, available_backends, baseline_cycles, cycle_model, latency_estimate
from .sim import sim_modmul
from .sim.cycles import DEFAULT_FREQ_MHZ
from .verify import ENGINES, FAULTS, exhaustive, random_modulus, run_case, sweep_cases

DEFAULT_TRIALS = 1000


class UsageError(Exception):
    def __init__(self, arg, msg):
        super().__init__(f"argument {arg}: {msg}")


def _hex(v: int) -> str:
    s = f"{v:x}"
    return "0x" + ("0" * (len(s) % 2)) + s


def _int_list(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _default_trials() -> int:
    env = os.environ.get("MODSRAM_TRIALS")
    if env is None:
        return DEFAULT_TRIALS
    try:
        return int(env)
    except ValueError:
        return DEFAULT_TRIALS


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _modulus(args, rng) -> Modulus:
    chosen = [x for x in (args.curve, args.p, args.n) if x is not None]
    if len(chosen) > 1:
        raise UsageError("--curve/--p/--n", "give only one modulus source")
    try:
        if args.p is not None:
            return Modulus.parse(args.p)
    except DomainError as e:
        raise UsageError("--p", str(e))
    if args.n is not None:
        if args.n < 2:
            raise UsageError("--n", "modulus width must be >= 2")
        return random_modulus(rng, args.n)
    return CURVES[args.curve or "secp256k1"].modulus


def _operand(text, name, m, rng) -> FieldElement:
    if text is None:
        return FieldElement(rng.randrange(m.p), m)
    try:
        v = Operand.parse(text, max(m.n, len(text) * 4)).value
        return FieldElement(v, m)
    except DomainError as e:
        raise UsageError(name, str(e))


def _add_modulus_args(p):
    p.add_argument("--curve", choices=sorted(CURVES), help="named curve base field")
    p.add_argument("--p", help="modulus as hex")
    p.add_argument("--n", type=int, help="random odd modulus of this bit width")


def cmd_mul(args) -> int:
    rng = random.Random(args.seed)
    m = _modulus(args, rng)
    a = _operand(args.a, "--a", m, rng)
    b = _operand(args.b, "--b", m, rng)
    if (args.cycles or args.cycle_log or args.strict) and args.engine != "sim":
        raise UsageError("--cycles", "cycle reports need --engine sim")
    report = None
    log = [] if args.cycle_log else None
    if args.engine == "sim":
        cfg = CycleConfig(freq_mhz=args.freq_mhz)
        try:
            r, report, trace = sim_modmul(a, b, cfg=cfg, strict=args.strict, log=log,
                                          backend=args.backend)
        except ConfigurationError as e:
            raise UsageError("--n", str(e))
    elif args.engine == "oracle":
        r, trace = Multiplier("oracle")(a, b), []
    else:
        from .engines import ENGINES as FUNCTIONAL

        r, trace = FUNCTIONAL[args.engine](a, b)

    if args.trace:
        sys.stdout.write(trace_jsonl(trace))
    if log is not None:
        sys.stdout.writelines(json.dumps(e, sort_keys=True) + "\n" for e in log)
    if args.format == "json":
        out = {"engine": args.engine, "result": _hex(r.value), "iterations": len(trace),
               "a": _hex(a.value), "b": _hex(b.value), "p": _hex(m.p)}
        if args.cycles:
            out["cycles"] = report.as_dict()
        _emit(out)
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["engine", "a", "b", "p", "result", "iterations"])
        w.writerow([args.engine, _hex(a.value), _hex(b.value), _hex(m.p), _hex(r.value), len(trace)])
    else:
        print(_hex(r.value))
        print(f"engine: {args.engine}  iterations: {len(trace)}")
        if args.cycles:
            print(report.to_json())
    return 0


def cmd_verify(args) -> int:
    trials = args.trials if args.trials is not None else _default_trials()
    if trials < 1:
        raise UsageError("--trials", "need at least one trial")
    engines = tuple(args.engines.split(",")) if args.engines else ENGINES
    for e in engines:
        if e not in ENGINES:
            raise UsageError("--engines", f"unknown engine {e!r}")
    stop = args.inject_fault is not None
    results = []
    if not args.exhaustive:
        curves = [c for c in (args.curves or "").split(",") if c]
        for c in curves:
            if c not in CURVES:
                raise UsageError("--curves", f"unknown curve {c!r}")
        for case in sweep_cases(args.n, curves):
            res = run_case(case, trials, args.seed, engines, args.inject_fault, args.jobs,
                           args.backend, stop_on_failure=stop)
            results.append(res)
            if stop and not res.ok:
                break
    if args.exhaustive or not args.no_exhaustive:
        if not (stop and results and not results[-1].ok):
            results.append(exhaustive(args.max_p, engines, args.inject_fault, args.backend,
                                      stop_on_failure=stop))

    ok = all(r.ok for r in results)
    if args.format == "json":
        _emit({"ok": ok, "cases": [
            {"case": r.label, "trials": r.trials, "mismatches": len(r.mismatches),
             "reproducers": [x.reproducer() for x in r.mismatches[:5]]} for r in results]})
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["case", "trials", "mismatches"])
        for r in results:
            w.writerow([r.label, r.trials, len(r.mismatches)])
    else:
        for r in results:
            status = "PASS" if r.ok else "FAIL"
            print(f"{status} {r.label}: {r.trials} trials, {len(r.mismatches)} mismatches")
            for x in r.mismatches[:5]:
                print(f"  reproducer: {x.reproducer()}")
    return 0 if ok else 1


def comparison_rows(ns, seed: int, freq_mhz: float) -> list[dict]:
    """Cycle comparison; this-work cycles come from running the simulator."""
    rows = []
    cfg = CycleConfig(freq_mhz=freq_mhz)
    for n in ns:
        rng = random.Random(f"{seed}/compare/{n}")
        m = random_modulus(rng, n)
        a = FieldElement(rng.randrange(m.p), m)
        b = FieldElement(rng.randrange(m.p), m)
        _, report, _ = sim_modmul(a, b, cfg=cfg)
        entries = [
            ("this work (simulated)", "direct", report.cycles_total, "measured"),
            ("this work (3n-1 model)", "direct", cycle_model(n), "modeled"),
            ("MeNTT", "direct", baseline_cycles("mentt", n), "modeled"),
        ]
        if n == 256:
            entries.append(("BP-NTT", "Montgomery", baseline_cycles("bpntt", n), "modeled"))
        for design, method, cycles, source in entries:
            rows.append({"n": n, "design": design, "method": method, "bitwidth": n,
                         "cycles": cycles, "source": source,
                         "latency_us": round(latency_estimate(cycles, freq_mhz), 6)})
    return rows


def cmd_compare(args) -> int:
    for n in args.n:
        if n < 2:
            raise UsageError("--n", "bit widths must be >= 2")
    rows = comparison_rows(args.n, args.seed, args.freq_mhz)
    if args.format == "json":
        _emit(rows)
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["n", "design", "cycles", "source", "latency_us"])
        for r in rows:
            w.writerow([r["n"], r["design"], r["cycles"], r["source"], r["latency_us"]])
    else:
        print(f"{'n':>5}  {'design':<24}{'method':<12}{'cycles':>10}  {'source':<9}{'latency_us':>12}")
        for r in rows:
            print(f"{r['n']:>5}  {r['design']:<24}{r['method']:<12}{r['cycles']:>10}  "
                  f"{r['source']:<9}{r['latency_us']:>12.4f}")
    return 0


def ec_chain(curve, steps: int, mul):
    """Alternate doubling and adding G, starting from G; returns every point."""
    pts = []
    P = curve.G
    ops = []
    for j in range(steps):
        before = mul.count
        if j % 2 == 0:
            P = point_double(P, curve, mul)
            ops.append(("double", mul.count - before))
        else:
            P = point_add(P, curve.G, curve, mul)
            ops.append(("add", mul.count - before))
        pts.append(P)
    return pts, ops


def cmd_ecdemo(args) -> int:
    if args.steps < 0:
        raise UsageError("--steps", "must be >= 0")
    curve = CURVES[args.curve]
    mul = Multiplier(args.engine, cfg=CycleConfig(freq_mhz=args.freq_mhz), backend=args.backend)
    pts, ops = ec_chain(curve, args.steps, mul)
    ref, _ = ec_chain(curve, args.steps, Multiplier("oracle"))
    diverged = next((i for i, (x, y) in enumerate(zip(pts, ref)) if x != y), None)
    bad_curve = next((i for i, x in enumerate(pts) if not curve.on_curve(x)), None)
    ok = diverged is None and bad_curve is None
    per_op = {}
    for op, count in ops:
        per_op.setdefault(op, count)
    out = {"curve": curve.name, "engine": args.engine, "steps": args.steps, "ok": ok,
           "multiplications": mul.count, "multiplications_per_op": per_op,
           "final": str(pts[-1]) if pts else str(curve.G)}
    if args.engine == "sim":
        out["cycles_total"] = mul.cycles
        out["cycles_finalize"] = mul.finalize_cycles
        out["cycles_per_multiplication"] = cycle_model(curve.modulus.n)
    if diverged is not None:
        out["diverged_at_step"] = diverged
    if args.format == "json":
        _emit(out)
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        keys = [k for k in out if k != "multiplications_per_op"]
        w.writerow(keys)
        w.writerow([out[k] for k in keys])
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return 0 if ok else 1


def cmd_luts(args) -> int:
    rng = random.Random(args.seed)
    m = _modulus(args, rng)
    b = _operand(args.b, "--b", m, rng)
    r4 = build_radix4_lut(b, m)
    ov = build_overflow_lut(m)
    if args.format == "json":
        out = {}
        if args.table in ("radix4", "both"):
            out["radix4"] = [_hex(v) for v in r4.ordered()]
        if args.table in ("overflow", "both"):
            out["overflow"] = [_hex(v) for v in ov.entries]
        _emit(out)
        return 0
    if args.table in ("radix4", "both"):
        sys.stdout.write(r4.dump())
    if args.table in ("overflow", "both"):
        sys.stdout.write(ov.dump())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--freq-mhz", type=float, default=DEFAULT_FREQ_MHZ)
    backends = argparse.ArgumentParser(add_help=False)
    backends.add_argument("--backend", choices=("python", "cython"), default=None,
                          help=f"simulator kernel (available: {', '.join(available_backends())})")

    parser = argparse.ArgumentParser(prog="modsram", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", parents=[common, backends], help="one modular multiplication")
    p.add_argument("--engine", choices=ENGINE_NAMES, default="r4csa")
    _add_modulus_args(p)
    p.add_argument("--a", help="multiplier (hex); random if omitted")
    p.add_argument("--b", help="multiplicand (hex); random if omitted")
    p.add_argument("--trace", action="store_true", help="JSON-lines per-iteration trace")
    p.add_argument("--cycles", action="store_true", help="print the cycle report (sim)")
    p.add_argument("--cycle-log", action="store_true", help="JSON-lines per-cycle log (sim)")
    p.add_argument("--strict", action="store_true", help="n-column array, bit n near-memory")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("verify", parents=[common, backends], help="cross-check engines")
    p.add_argument("--trials", type=int, default=None,
                   help=f"per case (default $MODSRAM_TRIALS or {DEFAULT_TRIALS})")
    p.add_argument("--n", type=_int_list, default=[8, 16, 64, 224, 256])
    p.add_argument("--curves", default="secp256k1,bn254")
    p.add_argument("--engines", default=None, help=f"subset of {','.join(ENGINES)}")
    p.add_argument("--exhaustive", action="store_true", help="only the all-pairs small-p sweep")
    p.add_argument("--no-exhaustive", action="store_true")
    p.add_argument("--max-p", type=int, default=63)
    p.add_argument("--inject-fault", choices=sorted(FAULTS), default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", parents=[common], help="cycle comparison table")
    p.add_argument("--n", type=_int_list, default=[8, 16, 32, 64, 128, 224, 256])
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("ecdemo", parents=[common, backends], help="point add/double chain")
    p.add_argument("--curve", choices=sorted(CURVES), default="secp256k1")
    p.add_argument("--engine", choices=ENGINE_NAMES, default="r4csa")
    p.add_argument("--steps", type=int, default=16)
    p.set_defaults(func=cmd_ecdemo)

    p = sub.add_parser("luts", parents=[common], help="dump the precomputed tables")
    _add_modulus_args(p)
    p.add_argument("--b", help="multiplicand (hex); random if omitted")
    p.add_argument("--table", choices=("radix4", "overflow", "both"), default="both")
    p.set_defaults(func=cmd_luts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"modsram {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
