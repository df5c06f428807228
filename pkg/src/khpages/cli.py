"""Command-line front end.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error
(including unparsable diagram input).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import checks
from .diagram import BraidWord, DiagramError, as_diagram, parse_diagram
from .doublecover import DeterminantError, determinant, jones_determinant_check
from .khovanov import (bracket_jones, build_reduced_complex, cube_homology, delta_support,
                       format_poly, graded_euler_characteristic, poincare_string,
                       rank_table_json)
from .pagesolver import (ConstraintError, SolverConstraints, result_json, solve_pages,
                         vk_string)
from .transverse import PageMismatchError, fillability_report, psi_class


class DomainError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _read_input(parser, arg: str):
    text = arg
    if os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
    try:
        return parse_diagram(text)
    except DiagramError as exc:
        parser.error(str(exc))


def _diagram(parser, args):
    x = _read_input(parser, args.input)
    d = as_diagram(x)
    if args.marked_edge is not None:
        try:
            d = d.with_marked_edge(args.marked_edge)
        except DiagramError as exc:
            parser.error(str(exc))
    return x, d


def _cube(d, args):
    cache = args.__dict__.setdefault("_cubes", {})
    if d not in cache:
        cache[d] = build_reduced_complex(d, args.threads)
    return cache[d]


def _kh(d, args):
    return cube_homology(_cube(d, args))


def _constraints(parser, args, x, d, kh, required: bool):
    """Solver constraints from flags, or None when none were requested and none are required."""
    chosen = [f for f, on in (("--einf-rank", args.einf_rank is not None),
                              ("--lspace", args.lspace),
                              ("--no-einf-target", args.no_einf_target)) if on]
    if not args.assume_delta_shift:
        if required:
            parser.error("pages needs --assume-delta-shift: the (k, 2k-2) shift law is an assumption")
        if chosen:
            parser.error(f"{chosen[0]} needs --assume-delta-shift")
        return None, None
    if len(chosen) != 1:
        parser.error("give exactly one of --einf-rank N, --lspace, --no-einf-target")
    einf = args.einf_rank
    if args.lspace:
        try:
            einf = determinant(d)
        except DeterminantError as exc:
            raise DomainError(str(exc))
    survivors = [tuple(s) for s in args.survivor]
    notes = []
    if isinstance(x, BraidWord) and not args.no_psi_survivor:
        # psi nonzero in Kh with nothing in negative h: no D^k can reach it
        cls = psi_class(x, _cube(as_diagram(x), args))
        if cls.nonzero and all(h >= 0 for h, _ in kh):
            if cls.bigrading not in survivors:
                survivors.append(cls.bigrading)
            notes.append("psi survivor")
    c = SolverConstraints(True, einf, tuple(survivors), args.max_page)
    return c, notes


def _common(p):
    p.add_argument("input", help="braid 's=<n>; w=<letters>', PD JSON, or a file holding either")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--marked-edge", type=int, default=None, metavar="E")
    p.add_argument("--threads", type=int, default=None, metavar="N")


def _solver_flags(p):
    p.add_argument("--assume-delta-shift", action="store_true",
                   help="assume D^k shifts (h, q) by (k, 2k-2)")
    p.add_argument("--einf-rank", type=int, default=None, metavar="N")
    p.add_argument("--lspace", action="store_true",
                   help="heuristic: take the link determinant as the E^infinity rank")
    p.add_argument("--no-einf-target", action="store_true")
    p.add_argument("--max-page", type=int, default=8, metavar="K")
    p.add_argument("--survivor", action="append", default=[], type=_bigrading, metavar="H,Q",
                   help="bigrading that must keep rank >= 1 on every page")
    p.add_argument("--no-psi-survivor", action="store_true",
                   help="do not add psi's bigrading as a survivor for braid input")


def _bigrading(text: str) -> tuple[int, int]:
    try:
        h, q = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected H,Q got {text!r}") from None
    return (h, q)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khpages", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("kh", "reduced Khovanov homology over F2"),
                        ("det", "link determinant, Goeritz and Jones-at-i"),
                        ("jones", "reduced Jones polynomial (graded Euler characteristic)")):
        _common(sub.add_parser(name, help=help_))
    p = sub.add_parser("pages", help="higher pages E^k by constraint search")
    _common(p)
    _solver_flags(p)
    p = sub.add_parser("psi", help="transverse cycle psi and the vanishing-hypothesis report")
    _common(p)
    _solver_flags(p)
    p = sub.add_parser("vk", help="V^k polynomials of the pages")
    _common(p)
    _solver_flags(p)
    p = sub.add_parser("check", help="run the bundled property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    return parser


def run(argv=None, out=None) -> int:
    """Run one invocation; usage errors return 2 instead of raising SystemExit."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", None) is None and hasattr(args, "threads"):
            env = os.environ.get("KHPAGES_THREADS")
            args.threads = int(env) if env else None
        text = _dispatch(parser, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (DomainError, DeterminantError, ConstraintError, PageMismatchError,
            ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _Failed as exc:
        out.write(exc.text + "\n")
        return 1
    out.write(text + "\n")
    return 0


class _Failed(Exception):
    def __init__(self, text):
        self.text = text


def _dispatch(parser, args) -> str:
    cmd = args.command
    if cmd == "check":
        results = checks.run_all(args.seed)
        if args.json:
            text = _dump([{"name": r.name, "passed": r.passed, "cases": r.cases,
                           "detail": r.detail} for r in results])
        else:
            text = "\n".join(r.line() for r in results)
        if not all(r.passed for r in results):
            raise _Failed(text)
        return text

    x, d = _diagram(parser, args)

    if cmd == "kh":
        kh = _kh(d, args)
        deltas, width = delta_support(kh)
        if args.json:
            return _dump({"table": rank_table_json(kh), "poincare": poincare_string(kh),
                          "delta": [str(v) for v in deltas], "delta_width": width})
        return poincare_string(kh)

    if cmd == "det":
        try:
            g = determinant(d)
        except DeterminantError as exc:
            raise DomainError(str(exc))
        j = jones_determinant_check(d)
        if g != j:
            raise DomainError(f"determinant methods disagree: goeritz {g}, jones {j}")
        if args.json:
            return _dump({"determinant": g, "goeritz": g, "jones_at_i": j})
        return str(g)

    if cmd == "jones":
        chi = graded_euler_characteristic(_cube(d, args))
        if args.json:
            return _dump({"jones": format_poly(chi), "bracket": format_poly(bracket_jones(d))
                          if d.n_crossings <= 14 else None,
                          "coefficients": {str(e): c for e, c in chi.items()}})
        return format_poly(chi)

    kh = _kh(d, args)

    if cmd == "pages":
        c, notes = _constraints(parser, args, x, d, kh, required=True)
        res = solve_pages(kh, c)
        payload = result_json(res, c)
        payload["assumptions"]["notes"] = notes
        if args.json:
            return _dump(payload)
        return _pages_text(payload)

    if cmd == "vk":
        c, _ = _constraints(parser, args, x, d, kh, required=False)
        if c is None:
            pages = [kh]
        else:
            res = solve_pages(kh, c)
            if not res.is_unique:
                raise DomainError(f"solver status {res.status}; V^k is not determined")
            pages = res.pages
        vks = [vk_string(p) for p in pages]
        if args.json:
            return _dump({"vk": [{"k": i + 2, "poly": v} for i, v in enumerate(vks)]})
        return "\n".join(f"V^{i + 2} = {v}" for i, v in enumerate(vks))

    if cmd == "psi":
        if not isinstance(x, BraidWord):
            raise DomainError("psi needs braid input; PD codes are not auto-braided")
        c, _ = _constraints(parser, args, x, d, kh, required=False)
        if c is None:
            rep = fillability_report(x)
        else:
            res = solve_pages(kh, c)
            if res.is_unique:
                rep = fillability_report(x, res, survivors=c.survivors)
            else:
                rep = fillability_report(x)
        if args.json:
            return _dump(rep.to_json())
        lines = [f"psi bigrading (h,q) = {rep.bigrading}",
                 f"nonzero in Kh: {rep.class_nonzero_at_e2}"]
        lines += [f"E^{f['k']}: {f['fate']}" for f in rep.page_fates]
        lines.append(f"vanishing hypotheses met: {rep.fillability_obstruction}"
                     + (f" (page {rep.obstruction_page})" if rep.obstruction_page else ""))
        return "\n".join(lines)

    parser.error(f"unknown command {cmd}")


def _pages_text(payload) -> str:
    a = payload["assumptions"]
    lines = [f"assumptions: delta shift (k, 2k-2); E^inf rank "
             f"{a['einf_rank'] if a['einf_rank'] is not None else 'unconstrained'}; survivors "
             + (", ".join(f"({h},{q})" for h, q in a["survivors"]) or "none"),
             f"status: {payload['status']}"]
    if payload["status"] == "unique":
        for p in payload["pages"]:
            label = f"E^{p['k']}" + (" = E^inf" if p["infinity"] else "")
            lines.append(f"{label} = {p['poincare']}")
    elif payload["status"] == "ambiguous":
        lines.append(f"{payload['count']} consistent page sequences"
                     + ("" if payload["count_exact"] else " (search truncated)"))
        for n, sol in enumerate(payload["solutions"], 1):
            lines.append(f"-- solution {n}")
            for p in sol["pages"]:
                lines.append(f"E^{p['k']} = {p['poincare']}")
    else:
        cert = payload["certificate"]
        lines.append(f"no pattern works; deepest page {cert['page']}: {cert['reason']}")
    return "\n".join(lines)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
