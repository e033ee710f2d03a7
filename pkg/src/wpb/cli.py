"""Command-line entry point: construct, verify, profile, orbits, table1, table2.

Exit codes: 0 success, 2 validation failure, 3 I/O or format error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

from . import boolfn
from .boolfn import BooleanFunction, degree, is_power_of_two, unbalanced_weights
from .construction import FORCED_PAIR, ConstructionParams, build_detailed
from .family import (FamilyAssignment, anf_structure_check, build_from_assignment,
                     is_family_member, read_assignment, sample)
from .gf2n import TraceSpec, build_context, cyclotomic_cosets, eval_trace_form
from .nonlinearity import power2_lower_bounds, profile, recursive_lower_bounds, table1, table2
from .orbits import orbit_count, orbit_index, representatives_by_weight

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    seed: int = 0
    method: str = "family"
    base: str = "best"
    spec: str | None = None
    shared_sub: bool = False
    input: str | None = None
    output: str | None = None
    ks: str | None = None
    path: str = "auto"
    format: str = "text"
    weight: int | None = None
    show_field: bool = False
    require_wpb: bool = False
    lower_base: str | None = None
    threads: int | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def parse_ks(text: str | None, n: int) -> list[int]:
    if not text:
        return list(range(1, n))
    ks: set[int] = set()
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            ks.update(range(int(lo), int(hi) + 1))
        else:
            ks.add(int(part))
    bad = [k for k in ks if not 0 <= k <= n]
    if bad:
        raise CliError(f"weights out of range 0..{n}: {sorted(bad)}")
    return sorted(ks)


def parse_base(text: str) -> dict[int, int]:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise CliError(f"base must be comma-separated integers, got {text!r}") from None
    return {k + 2: v for k, v in enumerate(vals)}


def _load(path: str) -> BooleanFunction:
    try:
        return boolfn.load(path)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_IO) from None
    except ValueError as e:
        raise CliError(f"{path}: {e}", EXIT_IO) from None


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_construct(cfg: RunConfig, out) -> int:
    n = cfg.n
    if n is None or not is_power_of_two(n):
        raise CliError(f"n must be a power of 2 (WPB functions exist only then), got {n}")
    lines = []
    if cfg.method == "family":
        if not 2 <= n <= 16:
            raise CliError(f"family construction supports n in 2..16, got {n}")
        if cfg.spec is not None:
            try:
                asg = FamilyAssignment.from_hex(n, cfg.spec)
            except ValueError as e:
                raise CliError(f"bad assignment: {e}") from None
            f = build_from_assignment(orbit_index(n), asg)
        else:
            asg, f = sample(n, cfg.seed)
    elif cfg.method == "trace":
        if not 2 <= n <= 16:
            raise CliError(f"trace construction supports n in 2..16, got {n}")
        ctx = build_context(n)
        m = len(cyclotomic_cosets(n)) - 1
        if cfg.spec is not None:
            try:
                spec = TraceSpec.from_int(n, int(cfg.spec, 16))
            except ValueError as e:
                raise CliError(f"bad trace spec: {e}") from None
        else:
            _, rnd = sample(n, cfg.seed)
            spec = TraceSpec.from_int(n, read_assignment(rnd).to_int() & ((1 << m) - 1))
        f = eval_trace_form(ctx, spec)
        lines.append(f"trace spec: {spec.to_int():x}")
        asg = read_assignment(f)
    elif cfg.method == "construction1":
        try:
            params = ConstructionParams(n, cfg.seed, cfg.base, cfg.shared_sub)
        except ValueError as e:
            raise CliError(str(e)) from None
        if n > 16:
            raise CliError(f"construction1 supports n <= 16, got {n}")
        result = build_detailed(params)
        f = result.function
        asg = read_assignment(f)
        a, b = FORCED_PAIR
        forced = all(g.table[a] != g.table[b] for g in result.bases)
        lines.append(f"base functions: {len(result.bases)}, forced pair on every base: {_yes(forced)}")
    else:
        raise CliError(f"unknown method {cfg.method!r}")

    if cfg.output:
        try:
            boolfn.save(f, cfg.output)
        except OSError as e:
            raise CliError(f"cannot write {cfg.output}: {e.strerror}", EXIT_IO) from None
    else:
        # the function itself goes to stdout, the report to stderr
        out.write(boolfn.dumps(f))
        out = sys.stderr
    wpb = not unbalanced_weights(f) and f.table[0] == 0 and f.table[-1] == 1
    print(f"assignment: {asg.to_hex()}", file=out)
    for line in lines:
        print(line, file=out)
    print(f"wpb: {_yes(wpb)}", file=out)
    return EXIT_OK if wpb else EXIT_INVALID


def cmd_verify(cfg: RunConfig, out) -> int:
    f = _load(cfg.input)
    n = f.n
    bad = unbalanced_weights(f)
    endpoints = f.table[0] == 0 and f.table[-1] == 1
    wpb = is_power_of_two(n) and endpoints and not bad
    member = n <= 16 and is_family_member(f)
    report = {
        "schema": 1,
        "n": n,
        "wpb": bool(wpb),
        "unbalanced_weights": bad,
        "endpoints_ok": bool(endpoints),
        "family_member": bool(member),
        "degree": degree(f),
        "anf_structure": anf_structure_check(f) if endpoints and n <= 16 else None,
    }
    if cfg.show_field:
        if not 2 <= n <= 16:
            raise CliError(f"no field context for n={n}")
        ctx = build_context(n)
        report["field"] = {"modulus": hex(ctx.modulus), "generator": hex(ctx.generator),
                           "normal_element": hex(ctx.normal)}
    if cfg.format == "json":
        print(json.dumps(report, indent=2), file=out)
    else:
        detail = "" if wpb else f" (unbalanced weights: {','.join(map(str, bad)) or 'none'}" \
                                 f"{'' if endpoints else '; f(0)=0, f(1..1)=1 violated'})"
        print(f"n: {n}", file=out)
        print(f"wpb: {_yes(wpb)}{detail}", file=out)
        print(f"family member: {_yes(member)}", file=out)
        print(f"degree: {report['degree']}", file=out)
        anf_ok = report["anf_structure"]
        print(f"anf structure: {'n/a' if anf_ok is None else _yes(anf_ok)}", file=out)
        if cfg.show_field:
            fld = report["field"]
            print(f"field: modulus {fld['modulus']}, generator {fld['generator']}, "
                  f"normal element {fld['normal_element']}", file=out)
    return EXIT_OK if wpb else EXIT_INVALID


def cmd_profile(cfg: RunConfig, out) -> int:
    f = _load(cfg.input)
    n = f.n
    wpb = is_power_of_two(n) and f.table[0] == 0 and f.table[-1] == 1 and not unbalanced_weights(f)
    if cfg.require_wpb and not wpb:
        print("error: function is not WPB", file=sys.stderr)
        return EXIT_INVALID
    ks = parse_ks(cfg.ks, n)
    member = n <= 16 and is_family_member(f)
    lower: dict[int, int] = {}
    if member and n >= 8:
        lower.update(power2_lower_bounds(n))
    if cfg.lower_base:
        for k, v in recursive_lower_bounds(n, parse_base(cfg.lower_base)).items():
            lower[k] = max(v, lower.get(k, 0))
    reduced = {"auto": None, "naive": False, "reduced": True}[cfg.path]
    if reduced and not member:
        raise CliError("--reduced needs a family member (f(rotate(x)) = f(x)+1)")
    prof = profile(f, reduced=reduced, ks=ks, lower=lower, threads=cfg.threads)
    if cfg.format == "json":
        print(json.dumps(prof.to_dict(), indent=2), file=out)
    else:
        print(f"# n={n} path={prof.path}", file=out)
        print(f"{'k':>3} {'nl':>8} {'upper':>8} {'lower':>8}", file=out)
        for k, v, u, lo in prof.rows():
            print(f"{k:>3} {v:>8} {u:>8} {'-' if lo is None else lo:>8}", file=out)
        print(f"within bounds: {_yes(prof.within_bounds())}", file=out)
    return EXIT_OK if prof.within_bounds() else EXIT_INVALID


def cmd_orbits(cfg: RunConfig, out) -> int:
    n = cfg.n
    if n is None or not 1 <= n <= 32:
        raise CliError(f"n must be in 1..32, got {n}")
    weights = range(n + 1) if cfg.weight is None else [cfg.weight]
    if cfg.weight is None and n > 16:
        raise CliError("listing every weight needs n <= 16; pass --weight")
    if cfg.weight is not None and not 0 <= cfg.weight <= n:
        raise CliError(f"weight must be in 0..{n}")
    width = max(n, 14)
    print(f"{'weight':>6}  {'representative':<{width}}  {'length':>6}", file=out)
    total = 0
    for k in weights:
        reps = representatives_by_weight(n, k)
        total += len(reps)
        for o in reps:
            print(f"{k:>6}  {o.representative:0{n}b}{'':<{width - n}}  {o.length:>6}", file=out)
        print(f"# weight {k}: {len(reps)} orbits", file=out)
    print(f"# listed: {total}", file=out)
    print(f"# total orbits (necklace formula): {orbit_count(n)}", file=out)
    if n <= 16:
        print(f"# total orbits (enumerated): {len(orbit_index(n))}", file=out)
    return EXIT_OK


def cmd_table1(cfg: RunConfig, out) -> int:
    rows = table1()
    if cfg.format == "json":
        payload = {"schema": 1, "n": 8, "rows": [
            {"k": k, "values": sorted(vals), "upper": u} for k, (vals, u) in rows.items()]}
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(f"{'k':>3}  {'attainable NL_k over the family (n=8)':<40} {'upper':>6}", file=out)
        for k, (vals, u) in rows.items():
            print(f"{k:>3}  {'{' + ','.join(map(str, sorted(vals))) + '}':<40} {u:>6}", file=out)
    return EXIT_OK


def cmd_table2(cfg: RunConfig, out) -> int:
    base = parse_base(cfg.lower_base or "9,22,27")
    rows = table2(base)
    if cfg.format == "json":
        payload = {"schema": 1, "n": 16, "base": base, "rows": [
            {"k": k, "lower": lo, "upper": u} for k, (lo, u) in rows.items()]}
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(f"{'k':>3} {'lower':>8} {'upper':>8}", file=out)
        for k, (lo, u) in rows.items():
            print(f"{k:>3} {lo:>8} {u:>8}", file=out)
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "profile": cmd_profile,
    "orbits": cmd_orbits,
    "table1": cmd_table1,
    "table2": cmd_table2,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wpb", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap for the mask sweep (default: $WPB_THREADS or 1)")
    p.add_argument("--config", help="run a serialized RunConfig (JSON) instead of arguments")
    p.add_argument("--dump-config", metavar="FILE", help="write the RunConfig of this run as JSON")
    sub = p.add_subparsers(dest="command")

    c = sub.add_parser("construct", help="build a WPB function and write it in WPBF v1")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--method", choices=["family", "trace", "construction1"], default="family")
    c.add_argument("--base", choices=["best", "random"], default="best",
                   help="8-variable base for construction1")
    c.add_argument("--spec", help="hex assignment (family) or exponent bits (trace)")
    c.add_argument("--shared-sub", action="store_true",
                   help="construction1: one subfunction for every slice")
    c.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="WPB, family membership, degree and ANF checks")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--show-field", action="store_true")
    v.add_argument("--json", dest="format", action="store_const", const="json", default="text")

    pr = sub.add_parser("profile", help="weightwise nonlinearity profile with bounds")
    pr.add_argument("--in", dest="input", required=True)
    pr.add_argument("--ks", help="weights, e.g. 2..8 or 2,3,4")
    g = pr.add_mutually_exclusive_group()
    g.add_argument("--naive", dest="path", action="store_const", const="naive")
    g.add_argument("--reduced", dest="path", action="store_const", const="reduced")
    pr.set_defaults(path="auto")
    pr.add_argument("--json", dest="format", action="store_const", const="json", default="text")
    pr.add_argument("--require-wpb", action="store_true")
    pr.add_argument("--base", dest="lower_base",
                    help="n/2-variable bounds nl_2,nl_3,... for recursive lower bounds")

    o = sub.add_parser("orbits", help="rotation orbit representatives")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--weight", type=int)

    t1 = sub.add_parser("table1", help="attainable NL_2..NL_4 over the n=8 family")
    t1.add_argument("--json", dest="format", action="store_const", const="json", default="text")

    t2 = sub.add_parser("table2", help="recursive lower bounds at n=16")
    t2.add_argument("--base", dest="lower_base", default="9,22,27")
    t2.add_argument("--json", dest="format", action="store_const", const="json", default="text")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    names = {f.name for f in dataclasses.fields(RunConfig)}
    values = {k: v for k, v in vars(args).items() if k in names and v is not None}
    return RunConfig(**values)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.command not in COMMANDS:
        raise CliError(f"unknown command {cfg.command!r}")
    return COMMANDS[cfg.command](cfg, out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            try:
                with open(args.config) as fh:
                    cfg = RunConfig.from_json(fh.read())
            except OSError as e:
                raise CliError(f"cannot read {args.config}: {e.strerror}", EXIT_IO) from None
            except (ValueError, TypeError) as e:
                raise CliError(f"bad config: {e}", EXIT_IO) from None
        elif args.command is None:
            parser.print_help()
            return EXIT_INVALID
        else:
            cfg = config_from_args(args)
        if cfg.threads is None and os.environ.get("WPB_THREADS"):
            cfg.threads = int(os.environ["WPB_THREADS"])
        if args.dump_config:
            with open(args.dump_config, "w") as fh:
                fh.write(cfg.to_json() + "\n")
        return run(cfg)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
