"""Command-line interface: ``sunitcount {solve,count,verify,diagnose}``.

Output is one JSON object per line, ending with a summary object that embeds
the run manifest; ``--csv`` switches tabular commands to CSV. Exit codes:
0 found/pass, 1 none/fail, 2 usage error, 3 guard limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import random
import sys
import time
from dataclasses import replace

from sunitcount import __version__
from sunitcount.bounds import ENVELOPES, empirical_exponent_audit, theorem_envelopes
from sunitcount.config import Settings, load_settings
from sunitcount.counting import (
    CountQuery,
    closed_form_N,
    count,
    count_naive,
    eligible_primes,
    parse_variant,
    split_bound_counts,
)
from sunitcount.errors import DomainError, GuardLimitError, InvalidPrimeSetError, InvalidTripleError
from sunitcount.solver import SolveConfig, Triple, evertse_bound, is_solvable, solve, solve_support_bounded
from sunitcount.sunits import DeltaBound, PrimeSet

log = logging.getLogger("sunitcount")

EXIT_OK, EXIT_NONE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

ENVELOPE_VARIANT = {
    "PP6": ("N_delta", "1/2"),
    "PP7": ("N", None),
    "PP9": ("M_delta", "0"),
    "PP10": ("M_delta", "1/2"),
    "PP11": ("M_delta", "0"),
    "PP12": ("M", None),
}


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _grid(text: str) -> list[int]:
    """Comma-separated values and ranges: ``16,32``, ``16..100``, ``16..100:4``."""
    out: list[int] = []
    for part in filter(None, (x.strip() for x in text.split(","))):
        lo, dots, rest = part.partition("..")
        hi, _, step = rest.partition(":")
        try:
            out.extend(range(int(lo), int(hi) + 1, int(step) if step else 1) if dots else [int(part)])
        except ValueError:
            raise UsageError(f"bad grid entry {part!r}") from None
    return out


class Run:
    """Collects the manifest and writes records for one command invocation."""

    def __init__(self, args, params: dict):
        self.args = args
        self.params = params
        self.started = time.perf_counter()
        self.out = sys.stdout

    def manifest(self, exactness=None) -> dict:
        m = {"command": self.args.command, "params": self.params, "version": __version__}
        if exactness is not None:
            m["exactness"] = exactness
        if self.args.timing:
            m["duration_s"] = round(time.perf_counter() - self.started, 6)
        return m

    def record(self, obj: dict) -> None:
        self.out.write(_dump(obj) + "\n")

    def csv_rows(self, header: list[str], rows: list[list]) -> None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        self.out.write(buf.getvalue())


def _settings(args) -> Settings:
    return load_settings(args.config)


def _triple(args) -> Triple:
    return Triple(args.a, args.b, args.c)


def _delta(args) -> DeltaBound | None:
    return DeltaBound.parse(args.delta) if args.delta is not None else None


def _solve_config(args, settings: Settings, delta=None, full_rank=False) -> SolveConfig:
    return SolveConfig(
        height_cap=args.height_cap if args.height_cap is not None else settings.height_cap,
        exponent_cap=args.exponent_cap if args.exponent_cap is not None else settings.exponent_cap,
        delta=delta,
        full_rank=full_rank,
    )


def _cfg_params(cfg: SolveConfig) -> dict:
    return {
        "height_cap": cfg.height_cap,
        "exponent_cap": cfg.exponent_cap,
        "delta": None if cfg.delta is None else str(cfg.delta),
        "full_rank": cfg.full_rank,
    }


def _exp_text(unit) -> str:
    return " ".join(f"{p}:{k}" for p, k in unit.exponents)


def cmd_solve(args) -> int:
    settings = _settings(args)
    t = _triple(args)
    cfg = _solve_config(args, settings, _delta(args), args.full_rank)
    if args.primes is not None:
        sets = [PrimeSet.of(_int_list(args.primes))]
    elif args.prime_bound is not None and args.set_size is not None:
        pool = eligible_primes(t, args.prime_bound)
        sets = [PrimeSet(x) for x in itertools.combinations(pool, args.set_size)]
        if len(sets) > settings.subset_limit:
            raise GuardLimitError(f"{len(sets)} prime sets exceed the limit {settings.subset_limit}", settings.subset_limit, len(sets))
    else:
        raise UsageError("give --primes, or --prime-bound with --set-size")
    params = {"triple": list(t.as_tuple()), **_cfg_params(cfg)}
    if args.primes is not None:
        params["primes"] = list(sets[0].primes)
    else:
        params.update(prime_bound=args.prime_bound, set_size=args.set_size)
    run = Run(args, params)
    rows = []
    total = 0
    for S in sets:
        for x in solve(t, S, cfg, jobs=args.jobs):
            total += 1
            rows.append(
                {
                    "primes": list(S.primes),
                    "u": x.u.value,
                    "v": x.v.value,
                    "w": x.w.value,
                    "exponents": {k: {str(p): e for p, e in getattr(x, k).exponents} for k in "uvw"},
                    "support": sorted(x.support),
                    "omega": x.omega,
                }
            )
    if args.csv:
        header = ["primes", "u", "v", "w", "u_exponents", "v_exponents", "w_exponents", "support", "omega"]
        run.csv_rows(
            header,
            [
                [" ".join(map(str, r["primes"])), r["u"], r["v"], r["w"],
                 *(" ".join(f"{p}:{e}" for p, e in r["exponents"][k].items()) for k in "uvw"),
                 " ".join(map(str, r["support"])), r["omega"]]
                for r in rows
            ],
        )
    else:
        for r in rows:
            run.record(r)
        run.record({"summary": {"solutions": total, "prime_sets": len(sets)}, "manifest": run.manifest()})
    return EXIT_OK if total else EXIT_NONE


def _count_query(args, settings: Settings) -> CountQuery:
    variant = parse_variant(args.variant)
    delta = _delta(args)
    if variant.endswith("_delta") and delta is None:
        raise UsageError(f"variant {args.variant} needs --delta p/q")
    if not variant.endswith("_delta") and delta is not None:
        raise UsageError(f"variant {args.variant} takes no --delta")
    return CountQuery(_triple(args), args.set_size, args.prime_bound, variant, delta, _solve_config(args, settings))


def cmd_count(args) -> int:
    settings = _settings(args)
    q = _count_query(args, settings)
    params = {
        "triple": list(q.triple.as_tuple()),
        "variant": q.variant,
        "set_size": q.s,
        "prime_bound": q.H,
        "algorithm": args.algorithm,
        **_cfg_params(q.solve_config()),
    }
    run = Run(args, params)
    algorithms = ["naive", "supports"] if args.algorithm == "both" else [args.algorithm]
    reports = {}
    for name in algorithms:
        kw = {"jobs": args.jobs}
        if name == "naive":
            kw["limit"] = settings.subset_limit
        elif not q.is_full_rank:
            kw["family_limit"] = settings.family_limit
        reports[name] = count(q, name, **kw)
    agree = len({(r.count, tuple(r.strata.items())) for r in reports.values()}) == 1
    exactness = {name: r.exactness for name, r in reports.items()}
    if args.csv:
        run.csv_rows(
            ["algorithm", "count", "exactness", "eligible_primes", "strata"],
            [[n, r.count, r.exactness, r.eligible_primes, " ".join(f"{t}:{c}" for t, c in r.strata.items())]
             for n, r in reports.items()],
        )
    else:
        for name, r in reports.items():
            run.record({"algorithm": name, **r.to_dict()})
        summary = {"counts": {n: r.count for n, r in reports.items()}, "agree": agree}
        run.record({"summary": summary, "manifest": run.manifest(exactness)})
    if not agree:
        print(f"algorithms disagree: {[r.count for r in reports.values()]}", file=sys.stderr)
        return EXIT_NONE
    return EXIT_OK


DEFAULT_ODD_TRIPLES = [(1, 1, 1), (1, 3, 5), (3, 5, 7), (1, 1, 3)]
SUITES = ("closed-form", "parity", "monotonicity", "evertse", "pp4", "oracle")


def _read_triples(path: str) -> list[Triple]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(Triple(*_int_list(line.replace(" ", ","))))
    return out


def _random_triple(rng: random.Random) -> Triple:
    return Triple(rng.randint(1, 9), rng.randint(1, 9), rng.randint(1, 17))


def cmd_verify(args) -> int:
    settings = _settings(args)
    suites = args.suite or list(SUITES)
    rng = random.Random(args.seed)
    cfg = _solve_config(args, settings)
    pool = _read_triples(args.triples) if args.triples else None
    params = {"suites": suites, "max_H": args.max_H, "max_s": args.max_s, "seed": args.seed,
              "samples": args.samples, "triples": args.triples, **_cfg_params(cfg)}
    run = Run(args, params)
    results = []

    def check(suite, name, ok, **detail):
        results.append(ok)
        run.record({"suite": suite, "check": name, "pass": bool(ok), **detail})

    def pick_triple():
        return rng.choice(pool) if pool else _random_triple(rng)

    if "closed-form" in suites:
        triples = [t for t in pool if t.a + t.b == t.c or t.as_tuple() == (1, 1, 1)] if pool else [
            Triple(1, 1, 2), Triple(1, 2, 3), Triple(2, 3, 5), Triple(1, 1, 1)]
        for t in triples:
            for s in range(1, args.max_s + 1):
                for H in range(10, args.max_H + 1):
                    expected = closed_form_N(t, s, H)
                    if expected is None:
                        continue
                    got = count_naive(CountQuery(t, s, H, "N", None, cfg), limit=settings.subset_limit).count
                    check("closed-form", f"N{t} s={s} H={H}", got == expected, observed=got, expected=expected)

    if "parity" in suites:
        triples = [t for t in pool if t.all_odd] if pool else [Triple(*x) for x in DEFAULT_ODD_TRIPLES]
        half = DeltaBound(1, 2)
        for t in triples:
            for s in range(1, args.max_s + 1):
                for variant, delta in (("N", None), ("N_delta", half), ("M", None), ("M_delta", half)):
                    r = count_naive(CountQuery(t, s, args.max_H, variant, delta, cfg), collect=True)
                    bad = [list(m) for m in r.members if 2 not in m]
                    check("parity", f"{variant}{t} s={s} H={args.max_H}", not bad, counted=r.count, without_2=bad)

    if "monotonicity" in suites:
        for i in range(args.samples):
            t = pick_triple()
            primes = eligible_primes(t, args.max_H)
            if len(primes) < 2:
                continue
            k = rng.randint(1, min(3, len(primes) - 1))
            S = sorted(rng.sample(primes, k))
            extra = [p for p in primes if p not in S]
            T = sorted(S + rng.sample(extra, rng.randint(1, min(2, len(extra)))))
            ok_s, _ = is_solvable(t, S, cfg)
            ok_t, _ = is_solvable(t, T, cfg)
            check("monotonicity", f"{t} S={S} T={T}", (not ok_s) or ok_t, solvable_S=ok_s, solvable_T=ok_t)

    if "evertse" in suites:
        for i in range(args.samples):
            t = pick_triple()
            primes = eligible_primes(t, args.max_H)
            if not primes:
                continue
            S = PrimeSet.of(rng.sample(primes, rng.randint(1, min(3, len(primes)))))
            n = len(solve(t, S, cfg))
            check("evertse", f"{t} S={list(S.primes)}", n <= evertse_bound(S.s), solutions=n, bound=evertse_bound(S.s))

    if "pp4" in suites:
        for i in range(args.samples):
            t = pick_triple()
            s = rng.randint(1, args.max_s)
            H = rng.randint(10, args.max_H)
            n, n_ab, n_ba = split_bound_counts(t, s, H, cfg)
            check("pp4", f"{t} s={s} H={H}", n <= n_ab + n_ba, N=n, N1_abc=n_ab, N1_bac=n_ba)

    if "oracle" in suites:
        for i in range(args.samples):
            t = pick_triple()
            s = rng.randint(1, args.max_s)
            H = rng.randint(10, args.max_H)
            q = CountQuery(t, s, H, "N", None, cfg)
            a, b = count_naive(q, limit=settings.subset_limit), count(q, "supports")
            check("oracle", f"{t} s={s} H={H}", a.count == b.count and a.strata == b.strata,
                  naive=a.count, supports=b.count)

    passed = sum(map(bool, results))
    run.record({"summary": {"passed": passed, "failed": len(results) - passed}, "manifest": run.manifest()})
    return EXIT_OK if passed == len(results) else EXIT_NONE


def cmd_diagnose(args) -> int:
    settings = _settings(args)
    constants = load_settings(args.constants).constants if args.constants else settings.constants
    t = _triple(args)
    variant, default_delta = ENVELOPE_VARIANT[args.envelope]
    delta = None
    if variant.endswith("_delta"):
        delta = DeltaBound.parse(args.delta or default_delta)
        if args.envelope in ("PP9", "PP11") and delta.p != 0:
            raise UsageError(f"{args.envelope} concerns delta = 0")
    cfg = _solve_config(args, settings)
    grid = _grid(args.H_grid)
    params = {"triple": list(t.as_tuple()), "envelope": args.envelope, "variant": variant,
              "set_size": args.set_size, "H_grid": grid, **_cfg_params(replace(cfg, delta=delta)),
              "constants": _constants_echo(constants)}
    if args.primes:
        params["audit_primes"] = _int_list(args.primes)
    run = Run(args, params)
    rows = []
    for H in grid:
        if H < 16:
            log.warning("skipping H=%d: envelopes need H >= 16", H)
            continue
        r = count(CountQuery(t, args.set_size, H, variant, delta, cfg), "supports", jobs=args.jobs)
        env = theorem_envelopes(args.set_size, H, args.envelope, constants)
        rows.append({"H": H, "observed": r.count, "envelope": env, "ratio": r.count / env, "exactness": r.exactness})
    if args.csv:
        run.csv_rows(["H", "observed", "envelope", "ratio", "exactness"],
                     [[r["H"], r["observed"], repr(r["envelope"]), repr(r["ratio"]), r["exactness"]] for r in rows])
        return EXIT_OK
    for r in rows:
        run.record(r)
    audit = None
    usable = [H for H in grid if H >= 16]
    if usable:
        H = max(usable)
        if args.primes:
            S = PrimeSet.of(_int_list(args.primes))
            sols = solve(t, S, replace(cfg, delta=delta))
        else:
            S = PrimeSet(tuple(eligible_primes(t, H)))
            sols = solve_support_bounded(t, S, replace(cfg, delta=delta), args.set_size)
        audit = {"H": H, "solutions": len(sols), **empirical_exponent_audit(sols, S, H).to_dict()}
    run.record({"audit": audit})
    run.record({"summary": {"rows": len(rows)}, "manifest": run.manifest()})
    return EXIT_OK


def _constants_echo(c) -> dict:
    return {"C0_lemma1": c.C0_lemma1, "C1_lemma2": c.C1_lemma2, "c_bw": c.c_bw, "C_abc": c.C_abc,
            "abc_eps": c.abc_eps, "theorem": dict(sorted(c.theorem_constants.items()))}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sunitcount", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, triple=True):
        p.add_argument("--config", help="key = value settings file (default: $SUNITCOUNT_CONFIG)")
        p.add_argument("--jobs", type=int, default=1, help="worker count; output does not depend on it")
        p.add_argument("--timing", action="store_true", help="add wall-clock duration to the manifest")
        p.add_argument("--height-cap", type=int, help="max value of each of u, v, w")
        p.add_argument("--exponent-cap", type=int, help="max exponent of any prime")
        if triple:
            for name in ("a", "b", "c"):
                p.add_argument(f"--{name}", type=int, required=True)

    p = sub.add_parser("solve", help="enumerate solutions of au + bv = cw")
    common(p)
    p.add_argument("--primes", help="comma-separated prime set S")
    p.add_argument("--prime-bound", type=int, help="solve over every eligible s-subset of primes <= H")
    p.add_argument("--set-size", type=int)
    p.add_argument("--delta", help="keep v <= u**delta, given as p/q")
    p.add_argument("--full-rank", action="store_true", help="keep solutions whose support is all of S")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", help="evaluate N, N^delta, M or M^delta")
    common(p)
    p.add_argument("--variant", required=True, choices=["N", "Ndelta", "M", "Mdelta"])
    p.add_argument("--set-size", type=int, required=True)
    p.add_argument("--prime-bound", type=int, required=True)
    p.add_argument("--delta", help="p/q, required for Ndelta and Mdelta")
    p.add_argument("--algorithm", choices=["naive", "supports", "both"], default="supports")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="run identity and property suites")
    common(p, triple=False)
    p.add_argument("--suite", action="append", choices=SUITES)
    p.add_argument("--max-H", type=int, default=30)
    p.add_argument("--max-s", type=int, default=3)
    p.add_argument("--samples", type=int, default=20, help="instances per randomized suite")
    p.add_argument("--triples", help="file with one a,b,c triple per line")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diagnose", help="observed counts against a counting envelope")
    common(p)
    p.add_argument("--envelope", required=True, choices=ENVELOPES)
    p.add_argument("--H-grid", dest="H_grid", required=True, help="e.g. 16,32,64 or 16..100 or 16..100:4")
    p.add_argument("--set-size", type=int, required=True)
    p.add_argument("--delta", help="p/q for PP6 and PP10 (default 1/2)")
    p.add_argument("--constants", help="key = value file of bound constants")
    p.add_argument("--primes", help="prime set for the exponent audit (default: eligible primes at max H)")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, DomainError, InvalidPrimeSetError, InvalidTripleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
