"""Command line entry point: ``tripack <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from . import graph6
from .graph import Graph, bipartite_edit_distance, complement, complete_minus_matching
from .lp import CertificateError, certified, format_certificate, format_packing
from .packing import (
    conjecture51_hypothesis,
    critical_lower_bound,
    critical_packing,
    decompose_complete_minus_matching,
    eta,
    eta_general,
    f_small,
    is_critical,
    verify_packing,
)
from .search import MAX_ORACLE_N, PipelineConfig, brute_force_level, run_pipeline

log = logging.getLogger("tripack")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_IO = 4

STATE_ENV = "TRIPACK_STATE_DIR"


class VerificationFailed(Exception):
    pass


def fmt(q: Fraction) -> str:
    """Human form: p/q with a decimal approximation."""
    return f"{q.numerator}/{q.denominator} ({float(q):.6g})"


def _graphs(args) -> Iterator[Graph]:
    if args.graph:
        sources = [args.graph]
    else:
        sources = [ln for ln in sys.stdin.read().split() if ln]
    for text in sources:
        g = graph6.decode(text)
        yield complement(g) if args.complement else g


def cmd_enumerate(args) -> int:
    cfg = PipelineConfig(
        start_n=args.start,
        max_n=args.max,
        bipartite_drop_n=args.drop_bipartite_at,
        state_dir=args.state_dir,
        presolve=not args.no_presolve,
        workers=args.workers,
    )
    report = run_pipeline(cfg)
    sys.stdout.write(report.to_text())
    if args.json:
        Path(args.json).write_text(report.to_json())
    return EXIT_OK


def cmd_nu_star(args) -> int:
    for g in _graphs(args):
        res = certified(g, presolve=not args.no_presolve)
        if args.certificate:
            sys.stdout.write(format_certificate(res))
        else:
            print(f"{graph6.encode(g).decode()} {fmt(res.nu_star)}")
    return EXIT_OK


def cmd_eta(args) -> int:
    for g in _graphs(args):
        rep = eta(g, presolve=not args.no_presolve)
        denom = g.n * (g.n - 1)
        print(f"{rep.nu_star.numerator}/{denom} = {rep.eta.numerator}/{rep.eta.denominator}"
              f" ({float(rep.eta):.6g})")
        print(f"co_triangle_free={int(rep.co_triangle_free)} co_bipartite={int(rep.co_bipartite)}")
    return EXIT_OK


def cmd_eta_general(args) -> int:
    for g in _graphs(args):
        print(f"{graph6.encode(g).decode()} {fmt(eta_general(g, presolve=not args.no_presolve))}")
    return EXIT_OK


def cmd_check_decomposition(args) -> int:
    n, k = args.complete_minus_matching
    g = complete_minus_matching(n, k)
    res = certified(g, presolve=not args.no_presolve)
    lp_ok = res.nu_star == g.num_edges
    print(f"K_{n} minus {k}-matching: e={g.num_edges} nu*={fmt(res.nu_star)} decomposable={int(lp_ok)}")
    ok = lp_ok
    if n >= 7:
        p = decompose_complete_minus_matching(n, k)
        rep = verify_packing(g, p)
        built = rep.feasible and rep.tight_edges == g.num_edges
        print(f"constructed: size={fmt(rep.size)} tight_edges={rep.tight_edges} exact={int(built)}")
        if args.output:
            Path(args.output).write_text(format_packing(p))
        ok = ok and built
    if not ok:
        raise VerificationFailed(f"K_{n} minus {k}-matching is not decomposed")
    return EXIT_OK


def cmd_critical_pack(args) -> int:
    for g in _graphs(args):
        w = is_critical(g)
        if w is None:
            print(f"{graph6.encode(g).decode()} is not critical", file=sys.stderr)
            return EXIT_USAGE
        p = critical_packing(g, w)
        rep = verify_packing(g, p)
        bound = critical_lower_bound(g.n)
        print(f"apex={w.apex} |U|={len(w.U)} |W|={len(w.W)} |X|={len(w.X)} |Y|={len(w.Y)}")
        print(f"packing size={fmt(rep.size)} bound (n^2-17)/4={fmt(bound)} feasible={int(rep.feasible)}")
        if args.output:
            Path(args.output).write_text(format_packing(p))
        if not rep.feasible or rep.size < bound:
            raise VerificationFailed(rep.reason or "packing below bound")
    return EXIT_OK


def cmd_delta_bip(args) -> int:
    for g in _graphs(args):
        d = bipartite_edit_distance(g)
        print(f"{graph6.encode(g).decode()} delta_bip={d} E_bip={fmt(Fraction(d, g.n * g.n))}")
    return EXIT_OK


def cmd_f_small(args) -> int:
    print(f_small(args.n))
    return EXIT_OK


def cmd_conjecture51(args) -> int:
    for g in _graphs(args):
        rep = conjecture51_hypothesis(g, presolve=not args.no_presolve)
        print(f"{graph6.encode(g).decode()} eta_general={fmt(rep.eta_general)} "
              f"min_side_edit={rep.min_side_edit} within_bound={int(rep.within_bound)}")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    if not 6 <= args.max_n <= MAX_ORACLE_N:
        print(f"--max-n must lie in 6..{MAX_ORACLE_N}", file=sys.stderr)
        return EXIT_USAGE
    cfg = PipelineConfig(start_n=6, max_n=args.max_n, presolve=not args.no_presolve)
    levels = {}
    run_pipeline(cfg, on_level=lambda lv: levels.__setitem__(lv.n, lv))
    ok = True
    for n in range(6, args.max_n + 1):
        oracle = brute_force_level(n, cfg.bipartite_drop_n, presolve=cfg.presolve)
        got = levels.get(n)
        same = got is not None and got.payload() == oracle.payload()
        ok &= same
        print(f"n={n} pipeline={len(got) if got else 0} oracle={len(oracle)} "
              f"{'MATCH' if same else 'MISMATCH'}")
    if not ok:
        raise VerificationFailed("pipeline levels differ from the oracle")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest() else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tripack", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--graph", help="graph6 string (default: read graph6 lines from stdin)")
        sp.add_argument("--complement", action="store_true", help="operate on the complement")
        sp.add_argument("--no-presolve", action="store_true", help="exact simplex only")
        sp.set_defaults(fn=fn)
        return sp

    sp = sub.add_parser("enumerate", help="run the level-by-level search")
    sp.add_argument("--start", type=int, default=6)
    sp.add_argument("--max", type=int, default=30)
    sp.add_argument("--drop-bipartite-at", type=int, default=17,
                    help="level at which bipartite graphs are deleted (0 disables)")
    sp.add_argument("--state-dir", default=os.environ.get(STATE_ENV, "tripack-state"),
                    help=f"where levels are stored (default ${STATE_ENV} or ./tripack-state)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-presolve", action="store_true")
    sp.add_argument("--json", help="also write the run report as JSON to this path")
    sp.set_defaults(fn=cmd_enumerate)

    sp = graph_cmd("nu-star", cmd_nu_star, "exact fractional triangle packing number")
    sp.add_argument("--certificate", action="store_true", help="print the full certificate")
    graph_cmd("eta", cmd_eta, "packing density nu*/(n(n-1))")
    graph_cmd("eta-general", cmd_eta_general, "two-colour packing density")
    sp = graph_cmd("critical-pack", cmd_critical_pack, "explicit packing of a critical graph")
    sp.add_argument("--output", help="write the packing to this file")
    graph_cmd("delta-bip", cmd_delta_bip, "edit distance to bipartite")
    graph_cmd("conjecture51", cmd_conjecture51, "closer side's edit distance vs n/8")

    sp = sub.add_parser("check-decomposition", help="K_n minus a k-matching decomposes")
    sp.add_argument("--complete-minus-matching", nargs=2, type=int, metavar=("N", "K"), required=True)
    sp.add_argument("--no-presolve", action="store_true")
    sp.add_argument("--output", help="write the constructed decomposition to this file")
    sp.set_defaults(fn=cmd_check_decomposition)

    sp = sub.add_parser("f-small", help="f(n) by exhausting all 2-colourings, n <= 6")
    sp.add_argument("n", type=int)
    sp.set_defaults(fn=cmd_f_small)

    sp = sub.add_parser("oracle-check", help="compare pipeline levels with full enumeration")
    sp.add_argument("--max-n", type=int, default=MAX_ORACLE_N)
    sp.add_argument("--no-presolve", action="store_true")
    sp.set_defaults(fn=cmd_oracle_check)

    sp = sub.add_parser("selftest", help="run the built-in invariant checks")
    sp.set_defaults(fn=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.fn(args)
    except (CertificateError, VerificationFailed) as exc:
        log.error("verification failed: %s", exc)
        return EXIT_VERIFY
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
