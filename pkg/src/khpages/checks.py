"""Property suites bundled for the ``check`` subcommand."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import (PD_KNOTS, alternating_braid_knots, pd_knot, random_braid,
                     random_filtered_complex, reidemeister_pairs)
from .diagram import braid_to_diagram, connected_sum, is_connected
from .doublecover import determinant, jones_determinant_check
from .f2homalg import compute_pages, oracle_pages
from .khovanov import kh_homology
from .pagesolver import SolverConstraints, solve_pages, tensor_pages
from .transverse import psi_chain


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"[{flag}] {self.name}: {self.cases} cases{tail}"


def check_reidemeister(rng, count=12) -> CheckResult:
    bad = []
    pairs = reidemeister_pairs(rng, count)
    for kind, b1, b2 in pairs:
        if kh_homology(braid_to_diagram(b1)) != kh_homology(braid_to_diagram(b2)):
            bad.append(f"{kind}: {b1} vs {b2}")
    return CheckResult("reidemeister", not bad, len(pairs), "; ".join(bad[:3]))


def check_connected_sum(rng, count=4) -> CheckResult:
    bad = []
    for _ in range(count):
        b1 = random_braid(rng, rng.randint(2, 3), rng.randint(1, 4))
        b2 = random_braid(rng, rng.randint(2, 3), rng.randint(1, 4))
        d1, d2 = braid_to_diagram(b1), braid_to_diagram(b2)
        lhs = kh_homology(connected_sum(d1, d2))
        rhs = tensor_pages(kh_homology(d1), kh_homology(d2))
        if lhs != rhs:
            bad.append(f"{b1} # {b2}")
    return CheckResult("connected-sum tensor", not bad, count, "; ".join(bad[:3]))


def check_determinants(rng, count=10) -> CheckResult:
    bad = []
    diagrams = [pd_knot(n) for n in PD_KNOTS]
    while len(diagrams) < count + len(PD_KNOTS):
        b = random_braid(rng, rng.randint(2, 4), rng.randint(1, 8))
        d = braid_to_diagram(b)
        if d.loops or not d.n_crossings or not is_connected(d):
            continue
        diagrams.append(d)
    for d in diagrams:
        dets = {determinant(d, c, x) for c in (0, 1) for x in (0, 1)}
        if len(dets) != 1 or dets.pop() != jones_determinant_check(d):
            bad.append(str(d.to_json()))
    return CheckResult("determinant dual-method", not bad, len(diagrams), "; ".join(bad[:2]))


def check_page_engine(rng, count=50) -> CheckResult:
    bad = 0
    for _ in range(count):
        fc = random_filtered_complex(rng, rng.randint(1, 20), rng.randint(0, 5))
        pages = compute_pages(fc, 8)
        oracle = oracle_pages(fc, len(pages), by_grading=True)
        if [p.ranks for p in pages] != oracle:
            bad += 1
    return CheckResult("page engine vs oracle", bad == 0, count, f"{bad} mismatches" if bad else "")


def check_psi(rng, count=20) -> CheckResult:
    bad = []
    for _ in range(count):
        b = random_braid(rng, rng.randint(1, 4), rng.randint(0, 8))
        psi = psi_chain(b)
        if psi.bigrading != (0, b.writhe - b.strands + 1):
            bad.append(str(b))
    return CheckResult("psi bigrading", not bad, count, "; ".join(bad[:3]))


def check_collapse() -> CheckResult:
    bad = []
    knots = alternating_braid_knots(7)
    for b in knots:
        kh = kh_homology(braid_to_diagram(b))
        res = solve_pages(kh, SolverConstraints())
        if not res.is_unique or res.pages != [kh]:
            bad.append(str(b))
    return CheckResult("thin collapse", not bad, len(knots), "; ".join(bad[:3]))


def run_all(seed: int = 0) -> list[CheckResult]:
    rng = random.Random(seed)
    return [
        check_reidemeister(rng),
        check_connected_sum(rng),
        check_determinants(rng),
        check_page_engine(rng),
        check_psi(rng),
        check_collapse(),
    ]
