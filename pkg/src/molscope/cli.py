"""Command line interface: ``molscope <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys
import time
from collections import Counter
from fractions import Fraction
from importlib.resources import files
from pathlib import Path

from . import __version__, canonical, census, counting, exact_cover, golden, plex
from .errors import MolscopeError
from .latin import (
    count_distinct_pairs,
    count_intercalates,
    count_subsquares,
    format_square,
    is_orthogonal,
    preserves,
    random_latin_square,
    read_squares,
)
from .mols import MolsList, as_mols, extend, format_mols, iter_extensions

log = logging.getLogger("molscope")


def fixture_path(name) -> Path:
    return Path(str(files("molscope") / "fixtures" / name))


def resolve(path) -> Path:
    """Accept real paths, and ``fixtures/<name>`` for files shipped with the package."""
    p = Path(path)
    if p.exists():
        return p
    if p.parts and p.parts[0] == "fixtures":
        q = fixture_path(Path(*p.parts[1:]))
        if q.exists():
            return q
    raise FileNotFoundError(f"no such file: {path}")


def load_mols(path) -> MolsList:
    squares = read_squares(resolve(path))
    if not squares:
        raise MolscopeError(f"{path}: no squares found")
    return MolsList(tuple(squares))


def thread_count(args) -> int:
    if args.threads:
        return args.threads
    env = os.environ.get("MOLSCOPE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise MolscopeError(f"MOLSCOPE_THREADS must be an integer, got {env!r}") from None
    return 1


# -- subcommands ----------------------------------------------------------------

def cmd_analyze(args):
    for L in read_squares(resolve(args.file)):
        n = L.order
        cat = plex.transversals(L)
        parts = [f"n={n}", f"transversals={len(cat)}"]
        if not args.skip_theta:
            parts.append(f"theta={plex.count_partitions(cat, 1) if len(cat) else 0}")
        if not args.skip_alpha and len(cat):
            parts.append(f"alpha={plex.alpha(L)}")
        parts.append(f"intercalates={count_intercalates(L)}")
        if n >= 6:
            parts.append(f"subsquares3={count_subsquares(L, 3)}")
        par = canonical.par_order(L)
        atp = canonical.atp_order(L)
        parts += [f"par={par}", f"atp={atp}", f"rigid={'yes' if par == 1 else 'no'}"]
        print(" ".join(parts))
    return 0


def cmd_mates(args):
    for L in read_squares(resolve(args.file)):
        if not args.emit:
            print(plex.theta(L))
            continue
        count = 0
        for M in iter_extensions(MolsList((L,)), args.limit):
            B = M.squares[-1]
            if not is_orthogonal(L, B):
                raise MolscopeError("emitted square is not orthogonal")
            print(format_square(B) + "\n")
            count += 1
        print(f"# mates={count}")
    return 0


def cmd_plexes(args):
    M = load_mols(args.file)
    cat = plex.enumerate_plexes(plex.build_profile(M), args.p, cap=args.cap)
    if args.list:
        for P in cat:
            print(" ".join(f"{r},{c}" for r, c in P.cell_list()))
    print(f"plexes={len(cat)}")
    return 0


def cmd_partitions(args):
    M = load_mols(args.file)
    cat = plex.enumerate_plexes(plex.build_profile(M), args.p, cap=args.cap)
    print(f"partitions={plex.count_partitions(cat, args.p)}")
    return 0


def cmd_extend(args):
    M = load_mols(args.file)
    exts = extend(M, args.limit)
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        for E in exts:
            out.write(format_mols(E) + "\n")
    finally:
        if args.out is not None:
            out.close()
    print(f"# extensions={len(exts)}" + ("" if exts else " MAXIMAL"), file=sys.stderr)
    return 0


def cmd_maximal(args):
    M = load_mols(args.file)
    n_ext = plex.count_partitions(plex.transversals(M), 1)
    print("MAXIMAL" if n_ext == 0 else f"NOT MAXIMAL ({n_ext} extensions)")
    return 0


def cmd_census(args):
    n = args.n
    threads = thread_count(args)
    out = Path(args.out)
    try:
        result, rows, bad = census.run_census(n, out, args.kmax, threads, args.reps, args.extended)
    except MolscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for name, table in rows.items():
        for (_, k), row in sorted(table.items()):
            print(f"{name}\t{n}\t{k}\t" + "\t".join(str(x) for x in row.values()))
    ents = result.levels[1]
    if n in golden.RANDOM_LS:
        got = census.random_stats(ents)
        if got != golden.RANDOM_LS[n]:
            bad.append(("random_ls", n, 1, got, golden.RANDOM_LS[n]))
    for (gn, k), exp in golden.COMMON_TRANSVERSALS.items():
        if gn == n and k in result.levels:
            got = dict(census.common_transversal_table(result.species(k, True)))
            if got != exp:
                bad.append(("common_transversals", n, k, got, exp))
    for (gn, k), exp in golden.SPECIES_INVOLVED.items():
        if gn == n and k in result.levels:
            got = dict(census.species_involvement_table(result.species(k, True)))
            if got != exp:
                bad.append(("species_involved", n, k, got, exp))
    if args.kmax is not None and args.kmax < n - 1:
        bad = [b for b in bad if b[3] is not None]
    for b in bad:
        print(f"MISMATCH {b[0]} n={b[1]} k={b[2]}: computed {b[3]} expected {b[4]}", file=sys.stderr)
    print(f"# {'all rows match' if not bad else f'{len(bad)} mismatches'}; tables in {out / 'tables'}")
    return 1 if bad else 0


def _print_quad(q):
    print(f"RS={q.RS}\nRL={q.RL}\nAL={q.AL}\nAS={q.AS}")


def _stats_entries(n, census_dir):
    path = Path(census_dir) / f"n{n}" / "species.txt" if census_dir else None
    if path is not None and path.exists():
        entries = []
        for line in path.read_text().splitlines():
            if line.startswith("# ") and "par=" in line:
                fields = dict(x.split("=", 1) for x in line[2:].split()[1:])
                entries.append((int(fields["theta"]), int(fields["par"])))
        return entries
    cat = census.generate_species_reps(n)
    return [(e.theta, e.par) for e in cat.entries.values()]


def cmd_count(args):
    if args.stats:
        if args.n is None:
            raise MolscopeError("--stats needs -n")
        entries = _stats_entries(args.n, args.census_dir)
        p, e = counting.random_ls_stats(entries)
        print(f"{p} {e}")
        return 0
    theorem = args.theorem
    if theorem == "switch":
        given = [(w, v) for w, v in (("RS", args.rs), ("RL", args.rl), ("AL", args.al), ("AS", args.as_)) if v is not None]
        if len(given) != 1:
            raise MolscopeError("give exactly one of --rs, --rl, --al, --as")
        _print_quad(counting.switch_counts(args.n, args.k, *given[0]))
        return 0
    if theorem == "reps":
        pars = list(args.par or [])
        k = args.k
        n = args.n
        for f in args.mols or []:
            M = load_mols(f)
            n, k = M.order, M.k
            pars.append(canonical.par_order(M))
        if n is None or k is None or not pars:
            raise MolscopeError("--theorem reps needs -n, -k and --par values, or --mols files")
        print(counting.reduced_sets_from_reps(n, k, pars))
        return 0
    if theorem == "aspects":
        if not args.mols:
            raise MolscopeError("--theorem aspects needs --mols with a pair")
        print(counting.aspect_multiplicity(load_mols(args.mols[0])))
        return 0
    raise MolscopeError("choose --theorem or --stats")


def order10_checks():
    """``(description, passed, detail)`` for the order-10 triple."""
    A, = read_squares(fixture_path("order10_A.txt"))
    B, = read_squares(fixture_path("order10_B.txt"))
    C, = read_squares(fixture_path("order10_C.txt"))
    out = []
    out.append(("A orthogonal to B", is_orthogonal(A, B), ""))
    out.append(("A orthogonal to C", is_orthogonal(A, C), ""))
    d = count_distinct_pairs(B, C)
    out.append(("B,C overlay has 91 distinct pairs", d == 91, f"{d}"))
    pairs = Counter(zip(B.cells, C.cells))
    dup = sorted({c for (_, c), m in pairs.items() if m > 1})
    out.append(("duplicated B,C pairs only use symbols 7,8,9 of C", set(dup) <= {7, 8, 9}, f"{dup}"))
    M = MolsList((A, B))
    cat = plex.transversals(M)
    disjoint = plex.max_disjoint(cat)
    out.append(("A,B have 7 disjoint common transversals", disjoint == 7, f"{disjoint}"))
    out.append(("A,B have 7 common transversals", len(cat) == 7, f"found {len(cat)}"))
    perm = (0, 2, 3, 1, 5, 6, 4, 8, 9, 7)
    for name, L in (("A", A), ("B", B), ("C", C)):
        out.append((f"{name} has automorphism (0)(123)(456)(789)", preserves(L, perm), ""))
    return out


def cmd_verify_order10(args):
    ok = True
    for desc, passed, detail in order10_checks():
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {desc}" + (f"  [{detail}]" if detail else ""))
    return 0 if ok else 1


def cmd_bench_oracle(args):
    rng = random.Random(args.seed)
    t_plex = t_dlx = 0.0
    agree = 0
    for i in range(args.samples):
        n = rng.choice(args.orders)
        L = random_latin_square(n, rng)
        t0 = time.perf_counter()
        cat = plex.transversals(L)
        a = (len(cat), plex.count_partitions(cat, 1) if len(cat) else 0)
        t1 = time.perf_counter()
        ts = exact_cover.transversals(L)
        b = (len(ts), exact_cover.solve_count(exact_cover.partition_instance(ts, n)) if ts else 0)
        t2 = time.perf_counter()
        t_plex += t1 - t0
        t_dlx += t2 - t1
        agree += a == b
        if a != b:
            print(f"DISAGREE sample {i}: plex {a} oracle {b}\n{format_square(L)}", file=sys.stderr)
    ratio = t_dlx / t_plex if t_plex else float("inf")
    print(f"samples={args.samples} agree={agree} plex={t_plex:.3f}s oracle={t_dlx:.3f}s ratio={ratio:.1f}")
    return 0 if agree == args.samples else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="molscope", description="Transversals, mates and MOLS of small order.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--threads", type=int, default=None, help="worker processes (default $MOLSCOPE_THREADS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-square statistics")
    p.add_argument("file")
    p.add_argument("--skip-theta", action="store_true")
    p.add_argument("--skip-alpha", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mates", help="count or list mates with first row in order")
    p.add_argument("file")
    p.add_argument("--emit", action="store_true")
    p.add_argument("--limit", type=int, default=0)
    p.set_defaults(func=cmd_mates)

    for name, func, hlp in (("plexes", cmd_plexes, "count p-plexes"), ("partitions", cmd_partitions, "count p-partitions")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("file")
        p.add_argument("-p", type=int, default=1)
        p.add_argument("--cap", type=int, default=plex.DEFAULT_CAP)
        if name == "plexes":
            p.add_argument("--list", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("extend", help="all extensions by one square")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("maximal", help="is the MOLS list maximal")
    p.add_argument("file")
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("census", help="species census and class-count tables")
    p.add_argument("n", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--extended", action="store_true", help="allow order 8 (long running)")
    p.add_argument("--reps", help="file of latin square species representatives")
    p.add_argument("--out", default="census")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("count", help="exact counting identities")
    p.add_argument("--theorem", choices=["switch", "reps", "aspects"])
    p.add_argument("--stats", action="store_true", help="mate probability and expectation for order n")
    p.add_argument("-n", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--rs", type=int)
    p.add_argument("--rl", type=int)
    p.add_argument("--al", type=int)
    p.add_argument("--as", dest="as_", type=int)
    p.add_argument("--par", type=int, nargs="+")
    p.add_argument("--mols", nargs="+")
    p.add_argument("--census-dir")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify-order10", help="checks on the order-10 triple")
    p.set_defaults(func=cmd_verify_order10)

    p = sub.add_parser("bench-oracle", help="compare plex search with the exact cover oracle")
    p.add_argument("--orders", type=int, nargs="+", default=[5, 6, 7])
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench_oracle)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (MolscopeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
