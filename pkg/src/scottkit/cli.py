"""Command-line front end.

Reports are plain ``key: value`` lines so they diff cleanly.  Exit codes for
``pcf run``: 0 defined, 2 out of fuel, 3 stuck, 1 parse or type error.  Every
other command exits 0 when all its checks pass and 1 otherwise.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dinfty, domain, dyadics, ideals, opsem, pcf, scott


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _program(path: str) -> pcf.Term:
    return pcf.compile_source(_read(path))


def cmd_pcf_run(args) -> int:
    t = _program(args.file)
    if t.type != pcf.NAT:
        print(f"error: program has type {t.type}, expected nat", file=sys.stderr)
        return 1
    res = opsem.run(t, args.fuel, keep_trace=args.trace)
    if args.trace:
        print(opsem.format_trace(res.trace))
    if isinstance(res, opsem.Defined):
        print(f"Defined {res.value} in {res.steps} steps")
        return 0
    if isinstance(res, opsem.OutOfFuel):
        print(f"OutOfFuel after {res.fuel} steps")
        return 2
    print(f"Stuck at {pcf.render(res.term, annotate=False)} after {res.steps} steps")
    return 3


def cmd_pcf_deno(args) -> int:
    t = _program(args.file)
    if t.type != pcf.NAT:
        print(f"error: program has type {t.type}, expected nat", file=sys.stderr)
        return 1
    found = scott.denote(t).first_defined(args.fuel)
    if found is None:
        print(f"undefined <= {args.fuel}")
    else:
        print(f"defined at fuel {found[0]}: {found[1]}")
    return 0


def cmd_pcf_adequacy(args) -> int:
    t = _program(args.file)
    if t.type != pcf.NAT:
        print(f"error: program has type {t.type}, expected nat", file=sys.stderr)
        return 1
    rep = scott.check_adequacy(t, fuel=args.fuel, steps=args.steps)
    print("\n".join(rep.lines()))
    return 0 if rep.agree else 1


def cmd_dom_check(args) -> int:
    p = domain.parse_poset(_read(args.poset))
    bad = domain.validate(p)
    if bad:
        for v in bad:
            print(f"violation: {v}")
        return 1
    bot = p.bottom
    print("ok")
    print(f"elements: {len(p)}")
    print(f"least: {p.name(bot) if bot is not None else 'none'}")
    print(f"lattice: {str(domain.is_lattice(p)).lower()}")
    if len(p) <= domain.WAY_BELOW_CAP:
        compact = all(domain.is_compact(p, x) for x in p)
        print(f"all-compact: {str(compact).lower()}")
    return 0


def cmd_dom_exp(args) -> int:
    a = domain.parse_poset(_read(args.source))
    b = domain.parse_poset(_read(args.target))
    e = domain.exponential(a, b)
    print(f"elements: {len(e)}")
    print(f"least: {e.name(e.bottom)}")
    if args.list:
        for name in e.names:
            print(f"element: {name}")
    return 0


def cmd_dom_lfp(args) -> int:
    p = domain.parse_poset(_read(args.poset))
    f = domain.parse_map(_read(args.map), p, p)
    fp = domain.lfp(f)
    print(f"lfp: {p.name(fp.element)}")
    print(f"iterations: {fp.iterations}")
    return 0


def cmd_dyadics_props(args) -> int:
    xs = dyadics.enumerate_depth(args.depth)
    prec = dyadics.prec
    irreflexive = all(not prec(x, x) for x in xs)
    below = {x: [y for y in xs if prec(x, y)] for x in xs}
    transitive = all(prec(x, z) for x in xs for y in below[x] for z in below[y])
    trichotomy = all((prec(x, y) + (x == y) + prec(y, x)) == 1 for x in xs for y in xs)
    density = True
    for x in xs:
        for y in below[x]:
            z = dyadics.interpolant(x, y)
            density &= prec(x, z) and prec(z, y)
    flags = {"trichotomy": trichotomy, "density": density,
             "irreflexive": irreflexive, "transitive": transitive}
    print(" ".join(f"{k}:{'pass' if v else 'fail'}" for k, v in flags.items())
          + f" over {len(xs)} elements")
    return 0 if all(flags.values()) else 1


def cmd_idl_wb(args) -> int:
    if args.basis:
        b = ideals.parse_basis(_read(args.basis))
        i, j = ideals.principal_set(b, args.a), ideals.principal_set(b, args.b)
        for name, s in ((args.a, i), (args.b, j)):
            if not ideals.is_ideal(b, s):
                print(f"error: the principal set of {name} is not an ideal", file=sys.stderr)
                return 1
    else:
        b = dyadics.dyadic_basis()
        i = ideals.PrincipalIdeal(b, dyadics.parse_dyadic(args.a))
        j = ideals.PrincipalIdeal(b, dyadics.parse_dyadic(args.b))
    w = ideals.idl_way_below_witness(b, i, j)
    print(f"way-below: {str(w is not None).lower()}")
    if w is not None:
        print(f"witness: {w}")
    return 0


def cmd_dinfty_build(args) -> int:
    tower = dinfty.build_tower(args.rank)
    lines = [f"rank: {tower.rank}"]
    lines += [f"level {n}: {len(p)}" for n, p in enumerate(tower.levels)]
    ok = True
    if args.verify:
        rep = dinfty.verify_laws(tower, sample=args.sample)
        lines += rep.lines()
        ok = rep.ok
        lines.append(f"laws: {'pass' if ok else 'fail'}")
    if args.dump_level is not None:
        if not 0 <= args.dump_level <= tower.rank:
            print(f"error: no level {args.dump_level}", file=sys.stderr)
            return 1
        text = domain.dump_poset(tower[args.dump_level])
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
            return 0 if ok else 1
    print("\n".join(lines))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scottkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="group", required=True)

    g = sub.add_parser("pcf", help="run and interpret PCF programs").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("run")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=scott.DEFAULT_STEPS)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_pcf_run)
    p = g.add_parser("deno")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=scott.DEFAULT_FUEL)
    p.set_defaults(func=cmd_pcf_deno)
    p = g.add_parser("adequacy")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=scott.DEFAULT_FUEL)
    p.add_argument("--steps", type=int, default=scott.DEFAULT_STEPS)
    p.set_defaults(func=cmd_pcf_adequacy)

    g = sub.add_parser("dom", help="finite poset operations").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("check")
    p.add_argument("poset")
    p.set_defaults(func=cmd_dom_check)
    p = g.add_parser("exp")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--list", action="store_true", help="print every element")
    p.set_defaults(func=cmd_dom_exp)
    p = g.add_parser("lfp")
    p.add_argument("poset")
    p.add_argument("map")
    p.set_defaults(func=cmd_dom_lfp)

    g = sub.add_parser("dyadics").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("props")
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_dyadics_props)

    g = sub.add_parser("idl").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("wb", help="way-below between principal ideals")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--basis", help="finite basis file; default is the dyadics")
    p.set_defaults(func=cmd_idl_wb)

    g = sub.add_parser("dinfty").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("build")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--sample", type=int, default=dinfty.LAW_SAMPLE)
    p.add_argument("--dump-level", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dinfty_build)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (pcf.ParseError, pcf.PcfTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
